use std::collections::BTreeMap;

use serde::Serialize;

use super::{Kind, Quad, RTable, Variant};
use crate::grading::GradingVector;
use crate::scalar::HelperSet;

/// Number of nonzero components: `6^m` for trig, tabulated for quantum.
pub fn expected_count(m: u8, kind: Kind) -> usize {
    match kind {
        Kind::Trig => 6usize.pow(m as u32),
        Kind::Quantum => [5, 26, 139, 758][m as usize - 1],
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub m: u8,
    pub kind: Kind,
    pub variant: Variant,
    pub count: usize,
    pub expected: usize,
    /// Quadruples that occur more than once, with every source line.
    pub duplicates: Vec<(Quad, Vec<usize>)>,
    /// Entries whose output and input parities differ.
    pub grading_violations: Vec<(Quad, usize)>,
    pub unknown_helpers: Vec<(String, usize)>,
    pub pass: bool,
}

/// Counts, duplicate-freeness, grading conservation and helper coverage.
pub fn validate_table(t: &RTable, helpers: &HelperSet) -> TableReport {
    let g = GradingVector::new(t.m);
    let mut by_quad: BTreeMap<Quad, Vec<usize>> = BTreeMap::new();
    let mut grading_violations = Vec::new();
    let mut unknown_helpers = Vec::new();
    for (grp, e) in t.entries() {
        by_quad.entry(e.quad).or_default().push(e.span.line);
        if !g.conserves(e.quad) {
            grading_violations.push((e.quad, e.span.line));
        }
        for name in grp.prefactor.helpers().chain(e.monomial.helpers()) {
            if helpers.get(t.m, name).is_none() {
                unknown_helpers.push((name.to_string(), e.span.line));
            }
        }
    }
    unknown_helpers.sort();
    unknown_helpers.dedup();
    let duplicates: Vec<_> = by_quad.into_iter().filter(|(_, lines)| lines.len() > 1).collect();
    let count = t.entry_count();
    let expected = expected_count(t.m, t.kind);
    let pass = count == expected && duplicates.is_empty() && grading_violations.is_empty() && unknown_helpers.is_empty();
    TableReport {
        m: t.m,
        kind: t.kind,
        variant: t.variant,
        count,
        expected,
        duplicates,
        grading_violations,
        unknown_helpers,
        pass,
    }
}
