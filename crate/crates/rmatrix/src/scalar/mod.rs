//! Scalar kernel: numeric backends, q-powers and q-brackets, coefficient
//! expressions and the named helper polynomials.

mod expr;
mod helpers;
mod hp;

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use serde::Serialize;

pub use expr::{parse_expr, Atom, BracketPow, CoeffExpr, Exponent, ExprError};
pub use helpers::{parse_helpers, HelperSet, Poly};
pub use hp::Hp;

use crate::error::EvalError;

/// Default admissibility threshold for denominator brackets.
pub const EPS_SING: f64 = 1e-3;

/// Field operations plus the transcendental functions the tables need.
pub trait Real:
    Clone
    + Debug
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const BACKEND: Backend;

    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn abs(&self) -> Self;
    /// Decimal rendering at the backend's natural precision.
    fn to_decimal(&self) -> String;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn one() -> Self {
        Self::from_f64(1.0)
    }
    fn from_i64(n: i64) -> Self {
        Self::from_f64(n as f64)
    }
    fn is_zero(&self) -> bool {
        self.to_f64() == 0.0
    }
    /// `self^x` for positive `self`.
    fn powf(&self, x: &Self) -> Self {
        (x.clone() * self.ln()).exp()
    }
}

impl Real for f64 {
    const BACKEND: Backend = Backend::Binary64;

    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn to_decimal(&self) -> String {
        // 17 significant digits: enough to round-trip any binary64.
        format!("{:.16e}", self)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn powf(&self, x: &Self) -> Self {
        f64::powf(*self, *x)
    }
}

/// Numeric backend selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    Binary64,
    HighPrecision,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Binary64 => "binary64",
            Backend::HighPrecision => "high-precision",
        }
    }
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "binary64" | "f64" => Ok(Backend::Binary64),
            "high-precision" | "hp" => Ok(Backend::HighPrecision),
            _ => Err(format!("unknown backend `{s}` (expected binary64 or high-precision)")),
        }
    }
}

/// An evaluation point `(q, α, u[, v])`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ParamPoint {
    pub q: f64,
    pub alpha: f64,
    pub u: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<f64>,
}

impl ParamPoint {
    pub fn new(q: f64, alpha: f64, u: f64) -> Self {
        ParamPoint { q, alpha, u, v: None }
    }

    pub fn with_v(mut self, v: f64) -> Self {
        self.v = Some(v);
        self
    }

    /// Same `q`, `α`, different spectral parameter.
    pub fn at_u(&self, u: f64) -> Self {
        ParamPoint { u, v: None, ..*self }
    }

    /// Checks `q` and every denominator bracket `[α+j±u]`, `j < m`, at `u`
    /// (and at `v`, `u+v` when `v` is present).
    pub fn check_admissible(&self, m: u8, eps: f64) -> Result<(), EvalError> {
        if !(self.q > 0.0) || self.q == 1.0 || !self.q.is_finite() {
            return Err(EvalError::BadQ(self.q));
        }
        let mut us = vec![("u", self.u)];
        if let Some(v) = self.v {
            us.push(("v", v));
            us.push(("u+v", self.u + v));
        }
        for (name, u) in us {
            for j in 0..m as i32 {
                for (sign, tag) in [(1.0, '+'), (-1.0, '-')] {
                    let b = qbracket(self.q, self.alpha + j as f64 + sign * u);
                    if b.abs() <= eps {
                        return Err(EvalError::Singular {
                            what: format!("[a+{j}{tag}{name}]"),
                            value: b,
                            eps,
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// `[x]_q = (q^x − q^−x)/(q − q^−1)` in binary64.
pub fn qbracket(q: f64, x: f64) -> f64 {
    (q.powf(x) - q.powf(-x)) / (q - 1.0 / q)
}

/// `[x]_{1+ε}`; tends to `x` as `ε → 0`.
pub fn qbracket_limit_check(x: f64, eps: f64) -> f64 {
    qbracket(1.0 + eps, x)
}

/// Evaluation context: the point converted once into the backend type.
#[derive(Clone, Debug)]
pub struct Ctx<R: Real> {
    pub point: ParamPoint,
    pub q: R,
    pub alpha: R,
    pub u: R,
    pub eps: f64,
}

impl<R: Real> Ctx<R> {
    pub fn new(point: &ParamPoint) -> Result<Self, EvalError> {
        Self::with_eps(point, EPS_SING)
    }

    pub fn with_eps(point: &ParamPoint, eps: f64) -> Result<Self, EvalError> {
        if !(point.q > 0.0) || point.q == 1.0 || !point.q.is_finite() {
            return Err(EvalError::BadQ(point.q));
        }
        Ok(Ctx {
            point: *point,
            q: R::from_f64(point.q),
            alpha: R::from_f64(point.alpha),
            u: R::from_f64(point.u),
            eps,
        })
    }

    /// Value of the linear form `c0 + cα·α + cu·u`.
    pub fn linear(&self, e: &Exponent) -> R {
        let mut x = R::from_f64(e.half as f64 / 2.0);
        if e.alpha != 0 {
            x = x + R::from_i64(e.alpha) * self.alpha.clone();
        }
        if e.u != 0 {
            x = x + R::from_i64(e.u) * self.u.clone();
        }
        x
    }

    /// `q^{e}`.
    pub fn qpow(&self, e: &Exponent) -> R {
        if e.is_zero() {
            return R::one();
        }
        self.q.powf(&self.linear(e))
    }

    /// `Δ = q − q^−1`.
    pub fn delta(&self) -> R {
        self.q.clone() - R::one() / self.q.clone()
    }

    /// `[e]_q`.
    pub fn bracket(&self, e: &Exponent) -> R {
        if e.is_zero() {
            return R::zero();
        }
        let x = self.linear(e);
        let p = self.q.powf(&x);
        (p.clone() - R::one() / p) / self.delta()
    }
}
