use std::fmt;

use thiserror::Error;

use super::{Ctx, HelperSet, Real};
use crate::error::EvalError;

/// Exponent / bracket argument `c0 + cα·α + cu·u`, with `c0` a half-integer
/// stored as `half = 2·c0`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponent {
    pub half: i64,
    pub alpha: i64,
    pub u: i64,
}

impl Exponent {
    pub const ZERO: Exponent = Exponent { half: 0, alpha: 0, u: 0 };

    pub fn new(c0: i64, alpha: i64, u: i64) -> Self {
        Exponent { half: 2 * c0, alpha, u }
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::ZERO
    }

    pub fn neg(self) -> Self {
        Exponent { half: -self.half, alpha: -self.alpha, u: -self.u }
    }

    pub fn add(self, o: Self) -> Self {
        Exponent { half: self.half + o.half, alpha: self.alpha + o.alpha, u: self.u + o.u }
    }

    /// Parses a linear form such as `3a+3/2`, `a-u+3`, `-2u`, `0`.
    pub fn parse(s: &str) -> Result<Exponent, String> {
        let b: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        if b.is_empty() {
            return Err("empty linear form".into());
        }
        let mut e = Exponent::ZERO;
        let mut i = 0;
        while i < b.len() {
            let mut sign = 1i64;
            if b[i] == '+' || b[i] == '-' {
                if b[i] == '-' {
                    sign = -1;
                }
                i += 1;
            } else if i > 0 {
                return Err(format!("expected + or - at `{}`", b[i..].iter().collect::<String>()));
            }
            let start = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = b[start..i].iter().collect();
            let num: Option<i64> = if digits.is_empty() {
                None
            } else {
                Some(digits.parse().map_err(|_| format!("bad integer `{digits}`"))?)
            };
            let mut halves = false;
            if i < b.len() && b[i] == '/' {
                if b.get(i + 1) != Some(&'2') || num.is_none() {
                    return Err("only half-integer constants (k/2) are allowed".into());
                }
                halves = true;
                i += 2;
            }
            match b.get(i) {
                Some(&v @ ('a' | 'u')) => {
                    if halves {
                        return Err("α and u coefficients must be integers".into());
                    }
                    let c = sign * num.unwrap_or(1);
                    if v == 'a' {
                        e.alpha += c;
                    } else {
                        e.u += c;
                    }
                    i += 1;
                }
                _ => {
                    let n = num.ok_or_else(|| "dangling sign in linear form".to_string())?;
                    e.half += sign * if halves { n } else { 2 * n };
                }
            }
        }
        Ok(e)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (c, var) in [(self.alpha, 'a'), (self.u, 'u')] {
            if c == 0 {
                continue;
            }
            out.push(if c < 0 { '-' } else { '+' });
            if c.abs() != 1 {
                out.push_str(&c.abs().to_string());
            }
            out.push(var);
        }
        if self.half != 0 || out.is_empty() {
            out.push(if self.half < 0 { '-' } else { '+' });
            let h = self.half.abs();
            if h % 2 == 0 {
                out.push_str(&(h / 2).to_string());
            } else {
                out.push_str(&format!("{h}/2"));
            }
        }
        let s = out.strip_prefix('+').unwrap_or(&out);
        f.write_str(s)
    }
}

/// Power applied to a q-bracket atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BracketPow {
    Half,
    One,
    Two,
    MinusOne,
    MinusTwo,
}

impl BracketPow {
    fn suffix(self) -> &'static str {
        match self {
            BracketPow::Half => "^{1/2}",
            BracketPow::One => "",
            BracketPow::Two => "^2",
            BracketPow::MinusOne => "^-1",
            BracketPow::MinusTwo => "^-2",
        }
    }
}

/// One factor of a coefficient product.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Int(i64),
    Delta(i32),
    QPow(Exponent),
    Bracket(Exponent, BracketPow),
    Helper { name: String, conj: bool },
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Int(n) => write!(f, "{n}"),
            Atom::Delta(n) => write!(f, "Delta^{n}"),
            Atom::QPow(e) => write!(f, "q^{{{e}}}"),
            Atom::Bracket(e, p) => write!(f, "[{e}]{}", p.suffix()),
            Atom::Helper { name, conj } => write!(f, "{name}{}", if *conj { "~" } else { "" }),
        }
    }
}

/// Product of atoms; the empty product is 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CoeffExpr(pub Vec<Atom>);

impl CoeffExpr {
    pub fn one() -> Self {
        CoeffExpr(Vec::new())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn helpers(&self) -> impl Iterator<Item = &str> {
        self.0.iter().filter_map(|a| match a {
            Atom::Helper { name, .. } => Some(name.as_str()),
            _ => None,
        })
    }

    /// Evaluates the product at `ctx`; helpers are looked up at level `m`.
    pub fn eval<R: Real>(&self, ctx: &Ctx<R>, helpers: &HelperSet, m: u8) -> Result<R, EvalError> {
        let mut acc = R::one();
        for atom in &self.0 {
            let v = match atom {
                Atom::Int(n) => R::from_i64(*n),
                Atom::Delta(n) => {
                    let d = ctx.delta();
                    let mut p = R::one();
                    for _ in 0..n.unsigned_abs() {
                        p = p * d.clone();
                    }
                    if *n < 0 {
                        R::one() / p
                    } else {
                        p
                    }
                }
                Atom::QPow(e) => ctx.qpow(e),
                Atom::Bracket(e, pow) => {
                    let b = ctx.bracket(e);
                    match pow {
                        BracketPow::One => b,
                        BracketPow::Two => b.clone() * b,
                        BracketPow::Half => {
                            if !(b > R::zero()) {
                                return Err(EvalError::Branch { what: format!("[{e}]"), value: b.to_f64() });
                            }
                            b.sqrt()
                        }
                        BracketPow::MinusOne | BracketPow::MinusTwo => {
                            let bf = b.to_f64();
                            if bf.abs() <= ctx.eps {
                                return Err(EvalError::Singular { what: format!("[{e}]"), value: bf, eps: ctx.eps });
                            }
                            if *pow == BracketPow::MinusOne {
                                R::one() / b
                            } else {
                                R::one() / (b.clone() * b)
                            }
                        }
                    }
                }
                Atom::Helper { name, conj } => helpers.eval(m, name, *conj, ctx)?,
            };
            acc = acc * v;
        }
        Ok(acc)
    }
}

impl fmt::Display for CoeffExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Expression syntax error; `col` is a 0-based character offset into the input.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("column {col}: {msg}")]
pub struct ExprError {
    pub col: usize,
    pub msg: String,
}

/// Parses `atom (* atom)*`.
pub fn parse_expr(s: &str) -> Result<CoeffExpr, ExprError> {
    let mut atoms = Vec::new();
    let mut col = 0;
    for piece in s.split('*') {
        let lead = piece.len() - piece.trim_start().len();
        let a = piece.trim();
        if a.is_empty() {
            return Err(ExprError { col: col + lead, msg: "empty factor".into() });
        }
        atoms.push(parse_atom(a).map_err(|msg| ExprError { col: col + lead, msg })?);
        col += piece.len() + 1;
    }
    Ok(CoeffExpr(atoms))
}

fn parse_atom(a: &str) -> Result<Atom, String> {
    if let Ok(n) = a.parse::<i64>() {
        return Ok(Atom::Int(n));
    }
    if let Some(rest) = a.strip_prefix("Delta^") {
        let rest = rest.trim_start_matches('{').trim_end_matches('}');
        return rest.parse::<i32>().map(Atom::Delta).map_err(|_| format!("bad Delta power `{a}`"));
    }
    if let Some(rest) = a.strip_prefix("q^{") {
        let inner = rest.strip_suffix('}').ok_or_else(|| format!("unclosed brace in `{a}`"))?;
        return Exponent::parse(inner).map(Atom::QPow);
    }
    if let Some(rest) = a.strip_prefix('[') {
        let close = rest.find(']').ok_or_else(|| format!("unclosed bracket in `{a}`"))?;
        let e = Exponent::parse(&rest[..close])?;
        let pow = match &rest[close + 1..] {
            "" => BracketPow::One,
            "^{1/2}" => BracketPow::Half,
            "^2" => BracketPow::Two,
            "^-1" => BracketPow::MinusOne,
            "^-2" => BracketPow::MinusTwo,
            other => return Err(format!("unsupported bracket power `{other}`")),
        };
        return Ok(Atom::Bracket(e, pow));
    }
    let (name, conj) = match a.strip_suffix('~') {
        Some(n) => (n, true),
        None => (a, false),
    };
    if is_helper_id(name) {
        return Ok(Atom::Helper { name: name.to_string(), conj });
    }
    Err(format!("unrecognised atom `{a}`"))
}

/// `[fgh]\d*'?`
pub(crate) fn is_helper_id(s: &str) -> bool {
    let mut it = s.chars();
    if !matches!(it.next(), Some('f' | 'g' | 'h')) {
        return false;
    }
    let rest: &str = it.as_str();
    let rest = rest.strip_suffix('\'').unwrap_or(rest);
    rest.chars().all(|c| c.is_ascii_digit())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linform_round_trip() {
        for s in ["3a+3/2", "a-u+3", "-2u+2", "u-3/2", "0", "2", "-1/2", "2a+2u+4", "-a"] {
            let e = Exponent::parse(s).unwrap();
            assert_eq!(e.to_string(), s);
        }
        assert_eq!(Exponent::parse("3/2+3a").unwrap().to_string(), "3a+3/2");
    }

    #[test]
    fn linform_rejects() {
        assert!(Exponent::parse("").is_err());
        assert!(Exponent::parse("1/3").is_err());
        assert!(Exponent::parse("1/2a").is_err());
        assert!(Exponent::parse("a+").is_err());
    }

    #[test]
    fn atoms() {
        let e = parse_expr("-1 * Delta^-2 * q^{4a+11/2} * [a+1]^{1/2} * g9'~").unwrap();
        assert_eq!(e.0.len(), 5);
        assert_eq!(e.to_string(), "-1 * Delta^-2 * q^{4a+11/2} * [a+1]^{1/2} * g9'~");
        let err = parse_expr("q^{a} * zz").unwrap_err();
        assert_eq!(err.col, 8);
    }
}
