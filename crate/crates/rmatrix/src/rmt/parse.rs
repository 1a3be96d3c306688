use std::collections::HashMap;

use super::{Kind, Quad, RTable, RmtError, Span, TermEntry, TermGroup, Variant};
use crate::scalar::{parse_expr, CoeffExpr, HelperSet};

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> RmtError {
    RmtError::Syntax { line, col: col + 1, msg: msg.into() }
}

fn semantic(line: usize, msg: impl Into<String>) -> RmtError {
    RmtError::Semantic { line, msg: msg.into() }
}

/// Byte offset of `sub` inside `line` (both slices of the same buffer).
fn offset(line: &str, sub: &str) -> usize {
    sub.as_ptr() as usize - line.as_ptr() as usize
}

fn parse_header(line_no: usize, body: &str) -> Result<(u8, Kind, Variant), RmtError> {
    let mut words = body.split_whitespace();
    if words.next() != Some("rmt") {
        return Err(syntax(line_no, 0, "expected header `rmt m=<m> kind=<kind>`"));
    }
    let (mut m, mut kind, mut variant) = (None, None, Variant::Literal);
    for w in words {
        let col = offset(body, w);
        let (key, val) = w.split_once('=').ok_or_else(|| syntax(line_no, col, format!("expected key=value, got `{w}`")))?;
        match key {
            "m" => {
                let v: u8 = val.parse().map_err(|_| syntax(line_no, col, format!("bad level `{val}`")))?;
                if !(1..=4).contains(&v) {
                    return Err(semantic(line_no, format!("level m={v} out of range 1..4")));
                }
                m = Some(v);
            }
            "kind" => kind = Some(val.parse().map_err(|e: String| syntax(line_no, col, e))?),
            "variant" => variant = val.parse().map_err(|e: String| syntax(line_no, col, e))?,
            _ => return Err(syntax(line_no, col, format!("unknown header key `{key}`"))),
        }
    }
    let m = m.ok_or_else(|| syntax(line_no, 0, "header lacks m="))?;
    let kind = kind.ok_or_else(|| syntax(line_no, 0, "header lacks kind="))?;
    Ok((m, kind, variant))
}

fn parse_expr_at(line_no: usize, line: &str, s: &str) -> Result<CoeffExpr, RmtError> {
    parse_expr(s).map_err(|e| syntax(line_no, offset(line, s) + e.col, e.msg))
}

fn parse_term(line_no: usize, line: &str, rest: &str, dim: usize) -> Result<TermEntry, RmtError> {
    // Last five words are `e i k j l`.
    let words: Vec<&str> = rest.split_whitespace().collect();
    if words.len() < 5 || words[words.len() - 5] != "e" {
        return Err(syntax(line_no, offset(line, rest), "term must end with `e i k j l`"));
    }
    let e_word = words[words.len() - 5];
    let mut quad: Quad = [0; 4];
    for (slot, w) in quad.iter_mut().zip(&words[words.len() - 4..]) {
        let col = offset(line, w);
        let v: u16 = w.parse().map_err(|_| syntax(line_no, col, format!("bad index `{w}`")))?;
        if v == 0 || v as usize > dim {
            return Err(semantic(line_no, format!("index {v} out of range 1..{dim}")));
        }
        *slot = v;
    }
    let mut head = rest[..offset(rest, e_word)].trim();
    let mut bold = false;
    if let Some(h) = head.strip_prefix("bold") {
        if h.is_empty() || h.starts_with(char::is_whitespace) {
            bold = true;
            head = h.trim_start();
        }
    }
    let monomial = if head.is_empty() {
        CoeffExpr::one()
    } else if let Some(expr) = head.strip_prefix('*') {
        parse_expr_at(line_no, line, expr.trim())?
    } else {
        return Err(syntax(line_no, offset(line, head), "expected `bold`, `* <expr>` or `e`"));
    };
    Ok(TermEntry { quad, bold, monomial, span: Span { line: line_no } })
}

/// Parses an RMT document. Index range, duplicate quadruples and empty groups
/// are rejected here; helper names are checked by [`check_helpers`].
pub fn parse_rmt(text: &str) -> Result<RTable, RmtError> {
    let mut header = None;
    let mut groups: Vec<TermGroup> = Vec::new();
    let mut pending_label: Option<String> = None;
    let mut seen: HashMap<Quad, usize> = HashMap::new();

    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() {
            pending_label = None;
            continue;
        }
        if let Some(c) = trimmed.strip_prefix('#') {
            pending_label = Some(c.trim().to_string());
            continue;
        }
        let body = raw.split('#').next().unwrap_or("");
        let label = pending_label.take();
        let Some((m, _, _)) = header else {
            header = Some(parse_header(line_no, body)?);
            continue;
        };
        let dim = 1usize << m;
        let t = body.trim_start();
        if let Some(rest) = t.strip_prefix("group") {
            if !rest.starts_with(char::is_whitespace) {
                return Err(syntax(line_no, offset(raw, t), "expected `group <expr>`"));
            }
            let prefactor = parse_expr_at(line_no, raw, rest.trim())?;
            groups.push(TermGroup { label, prefactor, entries: Vec::new(), span: Span { line: line_no } });
        } else if let Some(rest) = t.strip_prefix("term") {
            let entry = parse_term(line_no, raw, rest, dim)?;
            let group = groups.last_mut().ok_or_else(|| semantic(line_no, "term before any group"))?;
            if let Some(prev) = seen.insert(entry.quad, line_no) {
                let [i, k, j, l] = entry.quad;
                return Err(semantic(line_no, format!("duplicate quadruple ({i},{k};{j},{l}), first at line {prev}")));
            }
            group.entries.push(entry);
        } else {
            return Err(syntax(line_no, offset(raw, t), "expected `group` or `term`"));
        }
    }

    let (m, kind, variant) = header.ok_or_else(|| syntax(1, 0, "missing header"))?;
    if groups.is_empty() {
        return Err(semantic(1, "table has no groups"));
    }
    if let Some(g) = groups.iter().find(|g| g.entries.is_empty()) {
        return Err(semantic(g.span.line, "group has no terms"));
    }
    Ok(RTable { m, kind, variant, groups })
}

/// Every helper referenced by `t` must be defined at level `t.m`.
pub fn check_helpers(t: &RTable, helpers: &HelperSet) -> Result<(), RmtError> {
    for g in &t.groups {
        for (line, expr) in std::iter::once((g.span.line, &g.prefactor)).chain(g.entries.iter().map(|e| (e.span.line, &e.monomial))) {
            for name in expr.helpers() {
                if helpers.get(t.m, name).is_none() {
                    return Err(semantic(line, format!("unknown helper `{name}` at level m={}", t.m)));
                }
            }
        }
    }
    Ok(())
}
