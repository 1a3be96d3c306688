//! Seeded parameter sampling with rejection of inadmissible points.
//!
//! Trial `t` of seed `s` draws from its own ChaCha stream, so a trial's point
//! does not depend on how many trials run or in which order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::scalar::{ParamPoint, EPS_SING};

/// Sampling box. Defaults: `q ∈ [1.05, 1.5]`, `α ∈ [0.3, 1.2]`, `u, v ∈ [−2, 2]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Domain {
    pub q: (f64, f64),
    pub alpha: (f64, f64),
    pub u: (f64, f64),
    pub v: (f64, f64),
    pub eps: f64,
}

impl Default for Domain {
    fn default() -> Self {
        Domain { q: (1.05, 1.5), alpha: (0.3, 1.2), u: (-2.0, 2.0), v: (-2.0, 2.0), eps: EPS_SING }
    }
}

/// Give up after this many rejections in a row.
const MAX_DRAWS: usize = 10_000;

impl Domain {
    /// Admissible point for level `m` (with `v` when `with_v`), from trial `trial` of `seed`.
    pub fn sample(&self, m: u8, with_v: bool, seed: u64, trial: usize) -> ParamPoint {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        for _ in 0..MAX_DRAWS {
            let mut p = ParamPoint::new(
                rng.gen_range(self.q.0..=self.q.1),
                rng.gen_range(self.alpha.0..=self.alpha.1),
                rng.gen_range(self.u.0..=self.u.1),
            );
            if with_v {
                p = p.with_v(rng.gen_range(self.v.0..=self.v.1));
            }
            if p.check_admissible(m, self.eps).is_ok() {
                return p;
            }
        }
        panic!("sampling domain {self:?} has no admissible points for m={m}");
    }

    /// `n` points, trials `0..n`.
    pub fn sample_many(&self, m: u8, with_v: bool, seed: u64, n: usize) -> Vec<ParamPoint> {
        (0..n).map(|t| self.sample(m, with_v, seed, t)).collect()
    }
}
