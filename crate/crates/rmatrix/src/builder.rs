//! Numeric tensors from tables, and the eigenvalue families `Ξ_k(u)`, `ξ_k`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::EvalError;
use crate::rmt::{Kind, Quad, RTable};
use crate::scalar::{Ctx, Exponent, HelperSet, ParamPoint, Real, EPS_SING};

/// Rank-4 tensor on `V⊗V`, `dim V = 2^m`, keyed by `(i, k, j, l)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseTensor4<R> {
    pub m: u8,
    entries: BTreeMap<Quad, R>,
}

impl<R: Real> SparseTensor4<R> {
    pub fn new(m: u8) -> Self {
        SparseTensor4 { m, entries: BTreeMap::new() }
    }

    pub fn identity(m: u8) -> Self {
        let mut t = Self::new(m);
        let n = 1u16 << m;
        for i in 1..=n {
            for k in 1..=n {
                t.insert([i, k, i, k], R::one());
            }
        }
        t
    }

    pub fn dim(&self) -> usize {
        1 << self.m
    }

    pub fn insert(&mut self, q: Quad, v: R) {
        self.entries.insert(q, v);
    }

    pub fn get(&self, q: Quad) -> Option<&R> {
        self.entries.get(&q)
    }

    /// Component value, zero when not stored.
    pub fn value(&self, q: Quad) -> R {
        self.entries.get(&q).cloned().unwrap_or_else(R::zero)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in quadruple order.
    pub fn iter(&self) -> impl Iterator<Item = (&Quad, &R)> {
        self.entries.iter()
    }

    pub fn map_entries(&self, mut f: impl FnMut(Quad, &R) -> R) -> Self {
        SparseTensor4 { m: self.m, entries: self.entries.iter().map(|(q, v)| (*q, f(*q, v))).collect() }
    }

    /// Multiplies one stored component by `factor`; returns false if absent.
    pub fn scale_component(&mut self, q: Quad, factor: f64) -> bool {
        match self.entries.get_mut(&q) {
            Some(v) => {
                *v = v.clone() * R::from_f64(factor);
                true
            }
            None => false,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.values().map(|v| v.to_f64().abs()).fold(0.0, f64::max)
    }

    /// Max-norm distance, treating missing components as zero.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for (q, v) in &self.entries {
            d = d.max((v.clone() - other.value(*q)).to_f64().abs());
        }
        for (q, v) in &other.entries {
            if !self.entries.contains_key(q) {
                d = d.max(v.to_f64().abs());
            }
        }
        d
    }

    pub fn to_f64(&self) -> SparseTensor4<f64> {
        SparseTensor4 { m: self.m, entries: self.entries.iter().map(|(q, v)| (*q, v.to_f64())).collect() }
    }
}

/// Evaluates every table entry at `p`. With `graded = false` bold entries are
/// negated (the ungraded form). Trigonometric tables require `p` admissible.
pub fn instantiate<R: Real>(t: &RTable, p: &ParamPoint, graded: bool, helpers: &HelperSet) -> Result<SparseTensor4<R>, EvalError> {
    instantiate_eps(t, p, graded, helpers, EPS_SING)
}

pub fn instantiate_eps<R: Real>(
    t: &RTable,
    p: &ParamPoint,
    graded: bool,
    helpers: &HelperSet,
    eps: f64,
) -> Result<SparseTensor4<R>, EvalError> {
    if t.kind == Kind::Trig {
        p.at_u(p.u).check_admissible(t.m, eps)?;
    }
    let ctx = Ctx::<R>::with_eps(p, eps)?;
    let mut out = SparseTensor4::new(t.m);
    for g in &t.groups {
        let pre = g.prefactor.eval(&ctx, helpers, t.m)?;
        for e in &g.entries {
            let mut v = pre.clone() * e.monomial.eval(&ctx, helpers, t.m)?;
            if e.bold && !graded {
                v = -v;
            }
            out.insert(e.quad, v);
        }
    }
    Ok(out)
}

/// `Ξ_k(u) = ∏_{j=0}^{k−2} [α+j+u]/[α+j−u]`, `k ≥ 1`.
pub fn xi_trig<R: Real>(k: usize, ctx: &Ctx<R>) -> R {
    let mut v = R::one();
    for j in 0..k.saturating_sub(1) as i64 {
        v = v * ctx.bracket(&Exponent::new(j, 1, 1)) / ctx.bracket(&Exponent::new(j, 1, -1));
    }
    v
}

/// `ξ_k = (−1)^{k−1} q^{(k−1)(2α+k−2)}`, `k ≥ 1`.
pub fn xi_quantum<R: Real>(k: usize, ctx: &Ctx<R>) -> R {
    let k1 = k as i64 - 1;
    let e = Exponent { half: 2 * k1 * (k1 - 1), alpha: 2 * k1, u: 0 };
    let v = ctx.qpow(&e);
    if k1 % 2 == 1 {
        -v
    } else {
        v
    }
}

/// `[Ξ_1, …, Ξ_{m+1}]` or `[ξ_1, …, ξ_{m+1}]`.
pub fn eigenvalues<R: Real>(kind: Kind, m: u8, ctx: &Ctx<R>) -> Vec<R> {
    (1..=m as usize + 1)
        .map(|k| match kind {
            Kind::Trig => xi_trig(k, ctx),
            Kind::Quantum => xi_quantum(k, ctx),
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NonzeroStats {
    pub count: usize,
    pub sparsity: f64,
    /// Some stored component is numerically negligible at this point.
    pub degenerate: bool,
}

/// Stored-component count and `count / 2^{4m}`.
pub fn nonzero_stats<R: Real>(t: &SparseTensor4<R>) -> NonzeroStats {
    let max = t.max_abs();
    let degenerate = t.iter().any(|(_, v)| v.to_f64().abs() < 1e-10 * max);
    let count = t.len();
    NonzeroStats { count, sparsity: count as f64 / (1u64 << (4 * t.m as u32)) as f64, degenerate }
}
