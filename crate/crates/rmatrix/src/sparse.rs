//! Row-compressed sparse operators on `V⊗V` and `V⊗V⊗V`, and the embeddings
//! of a two-site tensor into the three-site space.
//!
//! Basis states are 0-based row indices: `(i, k) ↦ (i−1)·n + (k−1)` on two
//! sites and `(a, b, c) ↦ a·n² + b·n + c` on three.

use serde::Serialize;

use crate::builder::SparseTensor4;
use crate::scalar::Real;

/// Square CSR matrix. Stored values may be zero only after arithmetic; use
/// [`SparseOperator::prune`] to drop them.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOperator<R> {
    pub dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<R>,
}

/// Which factor pair a two-site tensor acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    S12,
    S23,
    /// Sites 1 and 3, identity on the middle site (for `R = PŘ`).
    S13,
}

impl<R: Real> SparseOperator<R> {
    /// Builds from `(row, col, value)` triples; duplicates are summed.
    pub fn from_triplets(dim: usize, mut t: Vec<(usize, usize, R)>) -> Self {
        t.sort_by_key(|e| (e.0, e.1));
        let mut row_ptr = vec![0; dim + 1];
        let mut cols: Vec<usize> = Vec::with_capacity(t.len());
        let mut vals: Vec<R> = Vec::with_capacity(t.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in t {
            assert!(r < dim && c < dim, "index ({r},{c}) outside dimension {dim}");
            if last == Some((r, c)) {
                let x = vals.pop().unwrap();
                vals.push(x + v);
            } else {
                cols.push(c);
                vals.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..dim {
            row_ptr[r + 1] += row_ptr[r];
        }
        SparseOperator { dim, row_ptr, cols, vals }
    }

    pub fn identity(dim: usize) -> Self {
        SparseOperator { dim, row_ptr: (0..=dim).collect(), cols: (0..dim).collect(), vals: vec![R::one(); dim] }
    }

    pub fn zero(dim: usize) -> Self {
        SparseOperator { dim, row_ptr: vec![0; dim + 1], cols: Vec::new(), vals: Vec::new() }
    }

    /// The two-site operator of `t`: row `(i,k)`, column `(j,l)`.
    pub fn from_tensor(t: &SparseTensor4<R>) -> Self {
        let n = t.dim();
        let trip = t
            .iter()
            .map(|(&[i, k, j, l], v)| ((i as usize - 1) * n + k as usize - 1, (j as usize - 1) * n + l as usize - 1, v.clone()))
            .collect();
        Self::from_triplets(n * n, trip)
    }

    /// Inverse of [`from_tensor`](Self::from_tensor) for a `4^m`-dimensional operator.
    pub fn to_tensor(&self, m: u8) -> SparseTensor4<R> {
        let n = 1usize << m;
        assert_eq!(self.dim, n * n, "operator is not on V⊗V for m={m}");
        let mut t = SparseTensor4::new(m);
        for (r, c, v) in self.iter() {
            let q = [(r / n + 1) as u16, (r % n + 1) as u16, (c / n + 1) as u16, (c % n + 1) as u16];
            t.insert(q, v.clone());
        }
        t
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, &R)> {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[span.clone()].iter().copied().zip(&self.vals[span])
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &R)> {
        (0..self.dim).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> R {
        self.row(r).find(|&(cc, _)| cc == c).map(|(_, v)| v.clone()).unwrap_or_else(R::zero)
    }

    /// Matrix product `self · other`, row by row with a dense accumulator.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in compose");
        let dim = self.dim;
        let mut acc: Vec<Option<R>> = vec![None; dim];
        let mut touched: Vec<usize> = Vec::new();
        let mut row_ptr = Vec::with_capacity(dim + 1);
        row_ptr.push(0);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for r in 0..dim {
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    let p = a.clone() * b.clone();
                    match &mut acc[c] {
                        Some(x) => *x = x.clone() + p,
                        slot @ None => {
                            *slot = Some(p);
                            touched.push(c);
                        }
                    }
                }
            }
            touched.sort_unstable();
            for &c in &touched {
                cols.push(c);
                vals.push(acc[c].take().unwrap());
            }
            touched.clear();
            row_ptr.push(cols.len());
        }
        SparseOperator { dim, row_ptr, cols, vals }
    }

    /// `a·self + b·other`.
    pub fn axpby(&self, a: &R, other: &Self, b: &R) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in add");
        let mut trip: Vec<_> = self.iter().map(|(r, c, v)| (r, c, a.clone() * v.clone())).collect();
        trip.extend(other.iter().map(|(r, c, v)| (r, c, b.clone() * v.clone())));
        Self::from_triplets(self.dim, trip)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpby(&R::one(), other, &R::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpby(&R::one(), other, &-R::one())
    }

    pub fn scale(&self, s: &R) -> Self {
        SparseOperator { vals: self.vals.iter().map(|v| v.clone() * s.clone()).collect(), ..self.clone() }
    }

    /// Drops entries with `|v| ≤ threshold`.
    pub fn prune(&self, threshold: f64) -> Self {
        let trip = self.iter().filter(|(_, _, v)| v.to_f64().abs() > threshold).map(|(r, c, v)| (r, c, v.clone())).collect();
        Self::from_triplets(self.dim, trip)
    }

    pub fn max_abs(&self) -> f64 {
        self.vals.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> R {
        (0..self.dim).fold(R::zero(), |s, r| s + self.get(r, r))
    }

    /// Number of entries above `rel · max|entry|`.
    pub fn nnz_above(&self, rel: f64) -> usize {
        let t = rel * self.max_abs();
        self.vals.iter().filter(|v| v.to_f64().abs() > t).count()
    }

    pub fn to_f64(&self) -> SparseOperator<f64> {
        SparseOperator {
            dim: self.dim,
            row_ptr: self.row_ptr.clone(),
            cols: self.cols.clone(),
            vals: self.vals.iter().map(Real::to_f64).collect(),
        }
    }
}

/// Embeds a two-site tensor into `V⊗V⊗V` at `slot`.
pub fn embed<R: Real>(t: &SparseTensor4<R>, slot: Slot) -> SparseOperator<R> {
    let n = t.dim();
    let mut trip = Vec::with_capacity(t.len() * n);
    for (&[i, k, j, l], v) in t.iter() {
        let (o1, o2, i1, i2) = (i as usize - 1, k as usize - 1, j as usize - 1, l as usize - 1);
        for s in 0..n {
            let (r, c) = match slot {
                Slot::S12 => ((o1 * n + o2) * n + s, (i1 * n + i2) * n + s),
                Slot::S23 => ((s * n + o1) * n + o2, (s * n + i1) * n + i2),
                Slot::S13 => ((o1 * n + s) * n + o2, (i1 * n + s) * n + i2),
            };
            trip.push((r, c, v.clone()));
        }
    }
    SparseOperator::from_triplets(n * n * n, trip)
}

/// Residual norms of `lhs − rhs`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Residuals {
    /// `max |L − R|`.
    pub max: f64,
    /// `max |L − R| / max |L|`.
    pub rel: f64,
    /// `max |L − R| / (|L| + |R| + 10⁻⁹·max|L|)`: sensitive to small entries too.
    pub comp: f64,
}

/// Compares two operators entry by entry, treating absent entries as zero.
pub fn residuals<R: Real>(lhs: &SparseOperator<R>, rhs: &SparseOperator<R>) -> Residuals {
    assert_eq!(lhs.dim, rhs.dim, "dimension mismatch in residual");
    let floor = 1e-9 * lhs.max_abs();
    let (mut max, mut comp) = (0.0f64, 0.0f64);
    for r in 0..lhs.dim {
        let (mut ai, mut bi) = (lhs.row(r).peekable(), rhs.row(r).peekable());
        loop {
            let (l, rr) = match (ai.peek(), bi.peek()) {
                (None, None) => break,
                (Some(&(ca, _)), Some(&(cb, _))) if ca == cb => (ai.next().unwrap().1.clone(), bi.next().unwrap().1.clone()),
                (Some(&(ca, _)), Some(&(cb, _))) if ca < cb => (ai.next().unwrap().1.clone(), R::zero()),
                (Some(_), None) => (ai.next().unwrap().1.clone(), R::zero()),
                _ => (R::zero(), bi.next().unwrap().1.clone()),
            };
            let d = (l.clone() - rr.clone()).to_f64().abs();
            max = max.max(d);
            let denom = l.to_f64().abs() + rr.to_f64().abs() + floor;
            if denom > 0.0 {
                comp = comp.max(d / denom);
            }
        }
    }
    let lmax = lhs.max_abs();
    Residuals { max, rel: if lmax > 0.0 { max / lmax } else { max }, comp }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_small() {
        // [[1,2],[0,3]] · [[0,1],[1,0]] = [[2,1],[3,0]]
        let a = SparseOperator::from_triplets(2, vec![(0, 0, 1.0), (0, 1, 2.0), (1, 1, 3.0)]);
        let b = SparseOperator::from_triplets(2, vec![(0, 1, 1.0), (1, 0, 1.0)]);
        let c = a.compose(&b);
        assert_eq!(c.get(0, 0), 2.0);
        assert_eq!(c.get(0, 1), 1.0);
        assert_eq!(c.get(1, 0), 3.0);
        assert_eq!(c.get(1, 1), 0.0);
    }

    #[test]
    fn residual_of_self_is_zero() {
        let a = SparseOperator::<f64>::identity(5);
        assert_eq!(residuals(&a, &a), Residuals::default());
    }
}
