use std::collections::BTreeMap;

use super::{Ctx, Exponent, Real};
use crate::error::EvalError;
use crate::rmt::RmtError;

/// Laurent polynomial in `q` with exponents on the `(½ℤ, α, u)` lattice.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly(pub BTreeMap<Exponent, i64>);

impl Poly {
    pub fn constant(c: i64) -> Self {
        Poly::monomial(Exponent::ZERO, c)
    }

    pub fn monomial(e: Exponent, c: i64) -> Self {
        let mut m = BTreeMap::new();
        if c != 0 {
            m.insert(e, c);
        }
        Poly(m)
    }

    pub fn add(&self, o: &Poly, sign: i64) -> Poly {
        let mut out = self.0.clone();
        for (e, c) in &o.0 {
            let v = out.entry(*e).or_insert(0);
            *v += sign * c;
            if *v == 0 {
                out.remove(e);
            }
        }
        Poly(out)
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::default();
        for (e1, c1) in &self.0 {
            for (e2, c2) in &o.0 {
                out = out.add(&Poly::monomial(e1.add(*e2), c1 * c2), 1);
            }
        }
        out
    }

    /// `q ↦ q^−1`.
    pub fn conj(&self) -> Poly {
        Poly(self.0.iter().map(|(e, c)| (e.neg(), *c)).collect())
    }

    pub fn eval<R: Real>(&self, ctx: &Ctx<R>, conj: bool) -> R {
        let mut acc = R::zero();
        for (e, c) in &self.0 {
            let e = if conj { e.neg() } else { *e };
            acc = acc + R::from_i64(*c) * ctx.qpow(&e);
        }
        acc
    }
}

/// Named helper polynomials, scoped by level `m`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct HelperSet {
    levels: BTreeMap<u8, BTreeMap<String, Poly>>,
}

impl HelperSet {
    pub fn get(&self, m: u8, name: &str) -> Option<&Poly> {
        self.levels.get(&m)?.get(name)
    }

    pub fn names(&self, m: u8) -> impl Iterator<Item = &str> {
        self.levels.get(&m).into_iter().flat_map(|l| l.keys().map(String::as_str))
    }

    pub fn insert(&mut self, m: u8, name: &str, p: Poly) {
        self.levels.entry(m).or_default().insert(name.to_string(), p);
    }

    pub fn eval<R: Real>(&self, m: u8, name: &str, conj: bool, ctx: &Ctx<R>) -> Result<R, EvalError> {
        let p = self
            .get(m, name)
            .ok_or_else(|| EvalError::UnknownHelper { name: name.to_string(), m })?;
        Ok(p.eval(ctx, conj))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i64),
    Q(Exponent),
    Open,
    Close,
    Plus,
    Minus,
    Star,
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, (usize, String)> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        match c {
            b' ' | b'\t' => i += 1,
            b'(' | b')' | b'+' | b'-' | b'*' => {
                out.push((
                    i,
                    match c {
                        b'(' => Tok::Open,
                        b')' => Tok::Close,
                        b'+' => Tok::Plus,
                        b'-' => Tok::Minus,
                        _ => Tok::Star,
                    },
                ));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(s[start..i].parse().map_err(|_| (start, "integer overflow".to_string()))?)));
            }
            b'q' if s[i..].starts_with("q^{") => {
                let close = s[i..].find('}').ok_or((i, "unclosed q^{".to_string()))? + i;
                let e = Exponent::parse(&s[i + 3..close]).map_err(|m| (i, m))?;
                out.push((i, Tok::Q(e)));
                i = close + 1;
            }
            _ => return Err((i, format!("unexpected `{}`", c as char))),
        }
    }
    Ok(out)
}

struct PolyParser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl PolyParser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }
    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn sum(&mut self) -> Result<Poly, (usize, String)> {
        let mut acc = Poly::default();
        let mut sign = 1;
        match self.peek() {
            Some(Tok::Minus) => {
                sign = -1;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        loop {
            let t = self.product()?;
            acc = acc.add(&t, sign);
            match self.peek() {
                Some(Tok::Plus) => sign = 1,
                Some(Tok::Minus) => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn product(&mut self) -> Result<Poly, (usize, String)> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, (usize, String)> {
        let col = self.col();
        let t = self.peek().cloned();
        self.pos += 1;
        match t {
            Some(Tok::Int(n)) => Ok(Poly::constant(n)),
            Some(Tok::Q(e)) => Ok(Poly::monomial(e, 1)),
            Some(Tok::Open) => {
                let p = self.sum()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err((self.col(), "expected `)`".into()));
                }
                self.pos += 1;
                Ok(p)
            }
            _ => Err((col, "expected integer, q^{..} or `(`".into())),
        }
    }
}

/// Parses a polynomial such as `-2*q^{1} + q^{2u}*(q^{1} - q^{-1})`.
pub fn parse_poly(s: &str) -> Result<Poly, (usize, String)> {
    let toks = lex(s)?;
    let mut p = PolyParser { toks, pos: 0, end: s.len() };
    let poly = p.sum()?;
    if p.pos != p.toks.len() {
        return Err((p.col(), "trailing input".into()));
    }
    Ok(poly)
}

/// Parses a helper file: `level N` sections of `name = polynomial` lines.
pub fn parse_helpers(text: &str) -> Result<HelperSet, RmtError> {
    let mut set = HelperSet::default();
    let mut level: Option<u8> = None;
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let syntax = |col: usize, msg: String| RmtError::Syntax { line, col: col + 1, msg };
        if let Some(rest) = body.trim().strip_prefix("level") {
            let m: u8 = rest.trim().parse().map_err(|_| syntax(0, "bad level".into()))?;
            if !(1..=4).contains(&m) {
                return Err(syntax(0, format!("level {m} out of range")));
            }
            level = Some(m);
            continue;
        }
        let eq = body.find('=').ok_or_else(|| syntax(0, "expected `name = polynomial`".into()))?;
        let name = body[..eq].trim();
        if !super::expr::is_helper_id(name) {
            return Err(syntax(0, format!("invalid helper name `{name}`")));
        }
        let m = level.ok_or_else(|| syntax(0, "helper defined before any `level` line".into()))?;
        if set.get(m, name).is_some() {
            return Err(RmtError::Semantic { line, msg: format!("helper `{name}` defined twice at level {m}") });
        }
        let poly = parse_poly(&body[eq + 1..]).map_err(|(c, msg)| syntax(eq + 1 + c, msg))?;
        set.insert(m, name, poly);
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expands_products() {
        let p = parse_poly("-2*q^{1} + q^{2u}*(q^{1} - q^{-1})").unwrap();
        assert_eq!(p.0.len(), 3);
        assert_eq!(p.0[&Exponent::new(1, 0, 0)], -2);
        assert_eq!(p.0[&Exponent::new(1, 0, 2)], 1);
        assert_eq!(p.0[&Exponent::new(-1, 0, 2)], -1);
    }

    #[test]
    fn leading_sign_in_parens() {
        let p = parse_poly("q^{-u}*( - 2 + q^{2u})").unwrap();
        assert_eq!(p.0[&Exponent::new(0, 0, -1)], -2);
        assert_eq!(p.0[&Exponent::new(0, 0, 1)], 1);
    }

    #[test]
    fn errors_carry_columns() {
        let e = parse_poly("1 + (q^{1}").unwrap_err();
        assert_eq!(e.0, 10);
        assert!(parse_helpers("f = 1").is_err());
    }
}
