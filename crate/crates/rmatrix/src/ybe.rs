//! Yang–Baxter residuals.
//!
//! * `tybe`:  `Ř₁₂(u) Ř₂₃(u+v) Ř₁₂(v) = Ř₂₃(v) Ř₁₂(u+v) Ř₂₃(u)` (ungraded tensors)
//! * `qybe`:  `Ř₁₂ Ř₂₃ Ř₁₂ = Ř₂₃ Ř₁₂ Ř₂₃`
//! * `alt`:   `R₁₂(u) R₁₃(u+v) R₂₃(v) = R₂₃(v) R₁₃(u+v) R₁₂(u)` with `R = PŘ`
//! * `gybe`:  the graded equation on graded tensors, contracted componentwise
//!   with explicit parity factors (see [`SignConvention`]).
//!
//! The first three go through [`SparseOperator`] composition on `V⊗V⊗V`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::builder::{instantiate, SparseTensor4};
use crate::error::{Error, EvalError};
use crate::grading::{to_r_form, GradingVector};
use crate::rmt::{Kind, Quad, RTable, Variant};
use crate::scalar::{Backend, HelperSet, ParamPoint, Real, EPS_SING};
use crate::sparse::{embed, residuals, Residuals, Slot, SparseOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Identity {
    Gybe,
    Tybe,
    Qybe,
    Alt,
}

impl Identity {
    pub const ALL: [Identity; 4] = [Identity::Gybe, Identity::Tybe, Identity::Qybe, Identity::Alt];

    pub fn name(self) -> &'static str {
        match self {
            Identity::Gybe => "gybe",
            Identity::Tybe => "tybe",
            Identity::Qybe => "qybe",
            Identity::Alt => "alt",
        }
    }

    /// Whether the identity involves two spectral parameters.
    pub fn needs_v(self) -> bool {
        !matches!(self, Identity::Qybe)
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "gybe" => Ok(Identity::Gybe),
            "tybe" => Ok(Identity::Tybe),
            "qybe" => Ok(Identity::Qybe),
            "alt" => Ok(Identity::Alt),
            _ => Err(format!("unknown identity `{s}` (expected gybe, tybe, qybe or alt)")),
        }
    }
}

/// Parity factors used in the graded equation.
///
/// `StripPerFactor` attaches `(−1)^{[in1]([in2]+[out2])}` to every factor,
/// the same sign that turns a graded tensor into an ungraded one. `AsPrinted`
/// uses the two four-term exponents exactly as the equation is usually
/// printed; with the tables as given it does not balance, and is kept only so
/// that this can be demonstrated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignConvention {
    #[default]
    StripPerFactor,
    AsPrinted,
}

/// Default pass threshold on `residual_rel`.
pub fn default_tolerance(identity: Identity, m: u8, backend: Backend) -> f64 {
    match backend {
        Backend::HighPrecision => 1e-20,
        Backend::Binary64 if m == 4 && identity != Identity::Qybe => 1e-8,
        Backend::Binary64 => 1e-9,
    }
}

/// `Ř₁₂(u) Ř₂₃(u+v) Ř₁₂(v)` against `Ř₂₃(v) Ř₁₂(u+v) Ř₂₃(u)`.
pub fn tybe_operators<R: Real>(a_u: &SparseTensor4<R>, b_uv: &SparseTensor4<R>, c_v: &SparseTensor4<R>) -> (SparseOperator<R>, SparseOperator<R>) {
    let lhs = embed(a_u, Slot::S12).compose(&embed(b_uv, Slot::S23)).compose(&embed(c_v, Slot::S12));
    let rhs = embed(c_v, Slot::S23).compose(&embed(b_uv, Slot::S12)).compose(&embed(a_u, Slot::S23));
    (lhs, rhs)
}

pub fn tybe<R: Real>(a_u: &SparseTensor4<R>, b_uv: &SparseTensor4<R>, c_v: &SparseTensor4<R>) -> Residuals {
    let (l, r) = tybe_operators(a_u, b_uv, c_v);
    residuals(&l, &r)
}

/// Braid relation.
pub fn qybe<R: Real>(t: &SparseTensor4<R>) -> Residuals {
    let (e12, e23) = (embed(t, Slot::S12), embed(t, Slot::S23));
    residuals(&e12.compose(&e23).compose(&e12), &e23.compose(&e12).compose(&e23))
}

/// The `R = PŘ` form; inputs are Ř tensors, the flip is applied here.
pub fn alt<R: Real>(a_u: &SparseTensor4<R>, b_uv: &SparseTensor4<R>, c_v: &SparseTensor4<R>) -> Residuals {
    let (a, b, c) = (to_r_form(a_u), to_r_form(b_uv), to_r_form(c_v));
    let lhs = embed(&a, Slot::S12).compose(&embed(&b, Slot::S13)).compose(&embed(&c, Slot::S23));
    let rhs = embed(&c, Slot::S23).compose(&embed(&b, Slot::S13)).compose(&embed(&a, Slot::S12));
    residuals(&lhs, &rhs)
}

/// Entries grouped for the two joins of the graded contraction.
struct Index<R> {
    by_in1: Vec<Vec<(usize, usize, usize, R)>>,
    by_in2: Vec<Vec<(usize, usize, usize, R)>>,
    by_pair: Vec<Vec<(usize, usize, R)>>,
}

fn index<R: Real>(t: &SparseTensor4<R>) -> Index<R> {
    let n = t.dim();
    let mut ix = Index { by_in1: vec![Vec::new(); n], by_in2: vec![Vec::new(); n], by_pair: vec![Vec::new(); n * n] };
    for (&q, v) in t.iter() {
        let [o1, o2, i1, i2] = q.map(|x| x as usize - 1);
        ix.by_in1[i1].push((o1, o2, i2, v.clone()));
        ix.by_in2[i2].push((o1, o2, i1, v.clone()));
        ix.by_pair[i1 * n + i2].push((o1, o2, v.clone()));
    }
    ix
}

fn entries<R: Real>(t: &SparseTensor4<R>) -> impl Iterator<Item = ([usize; 4], &R)> {
    t.iter().map(|(q, v)| (q.map(|x| x as usize - 1), v))
}

/// Graded equation, componentwise. With `X = Ř(u)`, `Y = Ř(u+v)`, `Z = Ř(v)`:
///
/// ```text
/// Σ_{A,B,C} σ_L · X^{KJ}_{BC} Y^{CI}_{Ac} Z^{BA}_{ab}  =  Σ_{A,B,C} σ_R · Z^{JI}_{AB} Y^{KA}_{aC} X^{CB}_{bc}
/// ```
///
/// Both sides are returned as operators with row `(K,J,I)` and column `(a,b,c)`.
pub fn gybe_operators<R: Real>(
    x: &SparseTensor4<R>,
    y: &SparseTensor4<R>,
    z: &SparseTensor4<R>,
    g: &GradingVector,
    conv: SignConvention,
) -> (SparseOperator<R>, SparseOperator<R>) {
    let n = x.dim();
    let gr = |i: usize| g.bits[i] as u32;
    let strip = |o2: usize, i1: usize, i2: usize| gr(i1) * (gr(i2) + gr(o2));
    let idx = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
    let (ix_x, ix_y, ix_z) = (index(x), index(y), index(z));
    let signed = |v: R, parity: u32| if parity % 2 == 1 { -v } else { v };

    let mut lhs = Vec::new();
    for ([bb, aa, a, b], zv) in entries(z) {
        for (cc, i, c, yv) in &ix_y.by_in1[aa] {
            for (k, j, xv) in &ix_x.by_pair[bb * n + cc] {
                let parity = match conv {
                    SignConvention::StripPerFactor => strip(*j, bb, *cc) + strip(*i, aa, *c) + strip(aa, a, b),
                    SignConvention::AsPrinted => gr(bb) * gr(*cc) + gr(aa) * gr(*c) + gr(a) * gr(b) + gr(bb) * gr(*j),
                };
                lhs.push((idx(*k, *j, *i), idx(a, b, *c), signed(xv.clone() * yv.clone() * zv.clone(), parity)));
            }
        }
    }
    let mut rhs = Vec::new();
    for ([cc, bb, b, c], xv) in entries(x) {
        for (k, aa, a, yv) in &ix_y.by_in2[cc] {
            for (j, i, zv) in &ix_z.by_pair[aa * n + bb] {
                let parity = match conv {
                    SignConvention::StripPerFactor => strip(*i, *aa, bb) + strip(*aa, *a, cc) + strip(bb, b, c),
                    SignConvention::AsPrinted => gr(*aa) * gr(bb) + gr(*a) * gr(cc) + gr(b) * gr(c) + gr(b) * gr(bb),
                };
                rhs.push((idx(*k, *j, *i), idx(*a, b, c), signed(zv.clone() * yv.clone() * xv.clone(), parity)));
            }
        }
    }
    let dim = n * n * n;
    (SparseOperator::from_triplets(dim, lhs), SparseOperator::from_triplets(dim, rhs))
}

pub fn gybe<R: Real>(x: &SparseTensor4<R>, y: &SparseTensor4<R>, z: &SparseTensor4<R>, conv: SignConvention) -> Residuals {
    let g = GradingVector::new(x.m);
    let (l, r) = gybe_operators(x, y, z, &g, conv);
    residuals(&l, &r)
}

/// A deliberate corruption applied to every instantiated copy of a table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Mutation {
    pub quad: Quad,
    pub factor: f64,
}

impl Mutation {
    fn apply<R: Real>(&self, t: &mut SparseTensor4<R>) {
        t.scale_component(self.quad, self.factor);
    }
}

/// One residual evaluation.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub identity: Identity,
    pub m: u8,
    pub kind: Kind,
    pub variant: Variant,
    pub point: ParamPoint,
    pub backend: Backend,
    pub residual_max: f64,
    pub residual_rel: f64,
    pub residual_comp: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trial: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
}

/// Options for [`check`]; `Default` gives the standard run.
#[derive(Clone, Copy, Debug, Default)]
pub struct CheckOptions {
    /// Overrides [`default_tolerance`].
    pub tolerance: Option<f64>,
    pub signs: SignConvention,
    pub mutation: Option<Mutation>,
}

fn tensor_at<R: Real>(table: &RTable, helpers: &HelperSet, p: &ParamPoint, u: f64, graded: bool, mutation: Option<Mutation>) -> Result<SparseTensor4<R>, Error> {
    let mut t = instantiate::<R>(table, &p.at_u(u), graded, helpers)?;
    if let Some(mu) = mutation {
        mu.apply(&mut t);
    }
    Ok(t)
}

/// Residuals of `identity` for `table` at `p`.
pub fn residual<R: Real>(identity: Identity, table: &RTable, helpers: &HelperSet, p: &ParamPoint, opts: &CheckOptions) -> Result<Residuals, Error> {
    if identity == Identity::Qybe {
        let t = tensor_at::<R>(table, helpers, p, p.u, false, opts.mutation)?;
        return Ok(qybe(&t));
    }
    let v = p.v.ok_or(EvalError::MissingV)?;
    if table.kind == Kind::Trig {
        p.check_admissible(table.m, EPS_SING)?;
    }
    let graded = identity == Identity::Gybe;
    let a = tensor_at::<R>(table, helpers, p, p.u, graded, opts.mutation)?;
    let b = tensor_at::<R>(table, helpers, p, p.u + v, graded, opts.mutation)?;
    let c = tensor_at::<R>(table, helpers, p, v, graded, opts.mutation)?;
    Ok(match identity {
        Identity::Tybe => tybe(&a, &b, &c),
        Identity::Alt => alt(&a, &b, &c),
        Identity::Gybe => gybe(&a, &b, &c, opts.signs),
        Identity::Qybe => unreachable!(),
    })
}

/// [`residual`] wrapped in a report.
pub fn check<R: Real>(identity: Identity, table: &RTable, helpers: &HelperSet, p: &ParamPoint, opts: &CheckOptions) -> Result<CheckReport, Error> {
    let r = residual::<R>(identity, table, helpers, p, opts)?;
    let tolerance = opts.tolerance.unwrap_or_else(|| default_tolerance(identity, table.m, R::BACKEND));
    Ok(CheckReport {
        identity,
        m: table.m,
        kind: table.kind,
        variant: table.variant,
        point: *p,
        backend: R::BACKEND,
        residual_max: r.max,
        residual_rel: r.rel,
        residual_comp: r.comp,
        tolerance,
        pass: r.rel < tolerance,
        seed: None,
        trial: None,
        wall_time: None,
    })
}

/// The identity a mutation test should use for a table kind.
pub fn mutation_identity(kind: Kind) -> Identity {
    match kind {
        Kind::Trig => Identity::Tybe,
        Kind::Quantum => Identity::Qybe,
    }
}
