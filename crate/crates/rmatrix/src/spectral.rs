//! Projectors `P̌_k` recovered from an R matrix by Lagrange interpolation on its
//! eigenvalues, and the checks built on them.

use serde::Serialize;

use crate::builder::{eigenvalues, instantiate, SparseTensor4};
use crate::error::{Error, EvalError};
use crate::rmt::{Kind, RTable};
use crate::scalar::{Ctx, HelperSet, ParamPoint, Real};
use crate::sparse::SparseOperator;

/// Minimal pairwise eigenvalue gap for interpolation.
pub const MIN_SEPARATION: f64 = 1e-6;

/// Relative threshold for counting projector entries as nonzero.
pub const COUNT_THRESHOLD: f64 = 1e-10;

/// `P_1 … P_{m+1}` on `V⊗V` and the eigenvalues they were recovered with.
#[derive(Clone, Debug)]
pub struct ProjectorSet<R> {
    pub m: u8,
    pub point: ParamPoint,
    pub eigen: Vec<R>,
    pub p: Vec<SparseOperator<R>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AxiomReport {
    /// `max_k ‖P_k² − P_k‖`.
    pub idempotency: f64,
    /// `max_{k≠l} ‖P_k P_l‖`.
    pub orthogonality: f64,
    /// `‖Σ P_k − I‖`.
    pub completeness: f64,
}

impl AxiomReport {
    pub fn worst(&self) -> f64 {
        self.idempotency.max(self.orthogonality).max(self.completeness)
    }
}

/// `2^m · C(m, k−1)`, the expected rank of `P_k`.
pub fn expected_trace(m: u8, k: usize) -> usize {
    let (m, r) = (m as usize, k - 1);
    let mut c = 1usize;
    for i in 0..r {
        c = c * (m - i) / (i + 1);
    }
    (1usize << m) * c
}

/// Nonzero counts of `P_1 … P_{m+1}` for `m = 1..4`.
pub fn expected_counts(m: u8) -> &'static [usize] {
    match m {
        1 => &[5, 5],
        2 => &[25, 34, 25],
        3 => &[125, 199, 199, 125],
        4 => &[625, 1124, 1254, 1124, 625],
        _ => &[],
    }
}

/// `P_k = ∏_{j≠k} (T − λ_j)/(λ_k − λ_j)`.
pub fn recover_projectors<R: Real>(t: &SparseTensor4<R>, eigen: &[R], point: ParamPoint) -> Result<ProjectorSet<R>, EvalError> {
    for k in 0..eigen.len() {
        for j in k + 1..eigen.len() {
            let gap = (eigen[k].clone() - eigen[j].clone()).to_f64().abs();
            if !(gap > MIN_SEPARATION) {
                return Err(EvalError::EigenCollision { k: k + 1, j: j + 1, gap });
            }
        }
    }
    let op = SparseOperator::from_tensor(t);
    let id = SparseOperator::identity(op.dim);
    let shifted: Vec<_> = eigen.iter().map(|l| op.axpby(&R::one(), &id, &-l.clone())).collect();
    let p = (0..eigen.len())
        .map(|k| {
            let mut acc = id.clone();
            for (j, sh) in shifted.iter().enumerate() {
                if j != k {
                    let s = R::one() / (eigen[k].clone() - eigen[j].clone());
                    acc = acc.compose(sh).scale(&s);
                }
            }
            acc
        })
        .collect();
    Ok(ProjectorSet { m: t.m, point, eigen: eigen.to_vec(), p })
}

/// Instantiates `table` (ungraded) at `p` and recovers its projectors.
pub fn projectors_of<R: Real>(table: &RTable, helpers: &HelperSet, p: &ParamPoint) -> Result<ProjectorSet<R>, Error> {
    let t = instantiate::<R>(table, p, false, helpers)?;
    let ctx = Ctx::<R>::new(p)?;
    Ok(recover_projectors(&t, &eigenvalues(table.kind, table.m, &ctx), *p)?)
}

impl<R: Real> ProjectorSet<R> {
    pub fn axioms(&self) -> AxiomReport {
        let dim = self.p[0].dim;
        let mut idem: f64 = 0.0;
        let mut orth: f64 = 0.0;
        let mut sum = SparseOperator::zero(dim);
        for (k, pk) in self.p.iter().enumerate() {
            idem = idem.max(pk.compose(pk).sub(pk).max_abs());
            for (l, pl) in self.p.iter().enumerate() {
                if k != l {
                    orth = orth.max(pk.compose(pl).max_abs());
                }
            }
            sum = sum.add(pk);
        }
        let completeness = sum.sub(&SparseOperator::identity(dim)).max_abs();
        AxiomReport { idempotency: idem, orthogonality: orth, completeness }
    }

    pub fn traces(&self) -> Vec<R> {
        self.p.iter().map(SparseOperator::trace).collect()
    }

    /// Entries above `COUNT_THRESHOLD · max|P_k|`, per projector.
    pub fn counts(&self) -> Vec<usize> {
        self.p.iter().map(|p| p.nnz_above(COUNT_THRESHOLD)).collect()
    }

    /// `Σ_k w_k P_k`.
    pub fn reconstruct(&self, weights: &[R]) -> SparseOperator<R> {
        assert_eq!(weights.len(), self.p.len(), "one weight per projector");
        let dim = self.p[0].dim;
        self.p.iter().zip(weights).fold(SparseOperator::zero(dim), |acc, (p, w)| acc.axpby(&R::one(), p, w))
    }

    /// `max_k ‖P_k − P'_k‖`.
    pub fn distance(&self, other: &Self) -> f64 {
        self.p.iter().zip(&other.p).map(|(a, b)| a.sub(b).max_abs()).fold(0.0, f64::max)
    }

    /// `max_k ‖T·P_k − w_k·P_k‖ / max|T|`.
    pub fn eigen_residual(&self, t: &SparseTensor4<R>, weights: &[R]) -> f64 {
        let op = SparseOperator::from_tensor(t);
        let scale = op.max_abs().max(f64::MIN_POSITIVE);
        self.p
            .iter()
            .zip(weights)
            .map(|(p, w)| op.compose(p).axpby(&R::one(), p, &-w.clone()).max_abs() / scale)
            .fold(0.0, f64::max)
    }
}

/// Projector drift between two spectral parameters at the same `(q, α)`.
pub fn u_independence<R: Real>(table: &RTable, helpers: &HelperSet, p: &ParamPoint, u0: f64, u1: f64) -> Result<f64, Error> {
    let a = projectors_of::<R>(table, helpers, &p.at_u(u0))?;
    let b = projectors_of::<R>(table, helpers, &p.at_u(u1))?;
    Ok(a.distance(&b))
}

/// `max |Ř_trig(u) − Ř_quantum| / max |Ř_quantum|` for each `u`.
pub fn limit_deviation<R: Real>(
    trig: &RTable,
    quantum: &RTable,
    helpers: &HelperSet,
    q: f64,
    alpha: f64,
    us: &[f64],
) -> Result<Vec<f64>, Error> {
    if trig.kind != Kind::Trig || quantum.kind != Kind::Quantum || trig.m != quantum.m {
        return Err(EvalError::Dimension(format!("limit needs matching trig/quantum tables, got {} and {}", trig.id(), quantum.id())).into());
    }
    let qt = instantiate::<R>(quantum, &ParamPoint::new(q, alpha, 0.0), true, helpers)?;
    let scale = qt.max_abs();
    us.iter()
        .map(|&u| {
            let tt = instantiate::<R>(trig, &ParamPoint::new(q, alpha, u), true, helpers)?;
            Ok(tt.max_abs_diff(&qt) / scale)
        })
        .collect()
}
