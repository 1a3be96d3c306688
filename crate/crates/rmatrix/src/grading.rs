//! Basis order, parities and the sign transforms between graded and ungraded forms.
//!
//! Basis vectors are the subsets of `{1..m}` in (cardinality, lexicographic)
//! order, 1-based; the parity of a vector is the subset size mod 2.

use thiserror::Error;

use crate::builder::SparseTensor4;
use crate::rmt::{Quad, RTable};
use crate::scalar::{Atom, CoeffExpr, Real};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradingError {
    #[error("basis index {i} out of range 1..{dim}")]
    Index { i: usize, dim: usize },
    #[error("level m={0} out of range 1..4")]
    Level(u8),
    #[error("tensor is for m={tensor}, grading for m={grading}")]
    Mismatch { tensor: u8, grading: u8 },
}

/// Subsets of `{1..m}` sorted by size, then lexicographically.
pub fn subsets(m: u8) -> Vec<Vec<u8>> {
    let mut out: Vec<Vec<u8>> = (0u32..1 << m)
        .map(|mask| (1..=m).filter(|b| mask & (1 << (b - 1)) != 0).collect())
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradingVector {
    pub m: u8,
    pub bits: Vec<u8>,
}

impl GradingVector {
    pub fn new(m: u8) -> Self {
        GradingVector { m, bits: subsets(m).iter().map(|s| (s.len() % 2) as u8).collect() }
    }

    pub fn dim(&self) -> usize {
        self.bits.len()
    }

    /// Parity of the 1-based basis vector `i`.
    pub fn parity(&self, i: u16) -> u8 {
        self.bits[i as usize - 1]
    }

    /// `[i] + [k] ≡ [j] + [l]`.
    pub fn conserves(&self, [i, k, j, l]: Quad) -> bool {
        (self.parity(i) + self.parity(k)) % 2 == (self.parity(j) + self.parity(l)) % 2
    }

    /// True when the strip transform negates the component `(i,k;j,l)`:
    /// `(−1)^{[a]([b]+[b'])}` with `a = j`, `b = l`, `b' = k`.
    pub fn strip_flips(&self, [_, k, j, l]: Quad) -> bool {
        self.parity(j) * ((self.parity(l) + self.parity(k)) % 2) == 1
    }
}

/// Parity of basis vector `i` at level `m`.
pub fn grading(m: u8, i: usize) -> Result<u8, GradingError> {
    if !(1..=4).contains(&m) {
        return Err(GradingError::Level(m));
    }
    let dim = 1usize << m;
    if i == 0 || i > dim {
        return Err(GradingError::Index { i, dim });
    }
    Ok(GradingVector::new(m).bits[i - 1])
}

/// Multiplies every component by `(−1)^{[a]([b]+[b'])}`. Support is unchanged.
pub fn strip_grading<R: Real>(t: &SparseTensor4<R>, g: &GradingVector) -> Result<SparseTensor4<R>, GradingError> {
    if t.m != g.m {
        return Err(GradingError::Mismatch { tensor: t.m, grading: g.m });
    }
    Ok(t.map_entries(|q, v| if g.strip_flips(q) { -v.clone() } else { v.clone() }))
}

/// `R(u) = P Ř(u)`: swaps the output pair of every component.
pub fn to_r_form<R: Real>(t: &SparseTensor4<R>) -> SparseTensor4<R> {
    let mut out = SparseTensor4::new(t.m);
    for (&[i, k, j, l], v) in t.iter() {
        out.insert([k, i, j, l], v.clone());
    }
    out
}

/// The ungraded table: every bold entry gets an explicit `−1` and loses its flag.
pub fn boldface_strip(table: &RTable) -> RTable {
    let mut out = table.clone();
    for g in &mut out.groups {
        for e in &mut g.entries {
            if e.bold {
                e.bold = false;
                let mut atoms = vec![Atom::Int(-1)];
                atoms.extend(e.monomial.0.iter().cloned());
                e.monomial = CoeffExpr(atoms);
            }
        }
    }
    out
}
