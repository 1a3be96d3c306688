use std::cell::RefCell;
use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

use super::{Backend, Real};

/// Working precision in bits (≈ 57 decimal digits).
pub const HP_BITS: usize = 192;
const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

/// High-precision real backed by `astro_float::BigFloat`.
#[derive(Clone, Debug)]
pub struct Hp(BigFloat);

impl Hp {
    pub fn inner(&self) -> &BigFloat {
        &self.0
    }

    /// Parses a decimal literal at working precision.
    pub fn parse(s: &str) -> Option<Hp> {
        let v = CONSTS.with(|cc| BigFloat::parse(s, Radix::Dec, HP_BITS, RM, &mut cc.borrow_mut()));
        (!v.is_nan()).then_some(Hp(v))
    }
}

impl PartialEq for Hp {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for Hp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl Add for Hp {
    type Output = Hp;
    fn add(self, rhs: Hp) -> Hp {
        Hp(self.0.add(&rhs.0, HP_BITS, RM))
    }
}

impl Sub for Hp {
    type Output = Hp;
    fn sub(self, rhs: Hp) -> Hp {
        Hp(self.0.sub(&rhs.0, HP_BITS, RM))
    }
}

impl Mul for Hp {
    type Output = Hp;
    fn mul(self, rhs: Hp) -> Hp {
        Hp(self.0.mul(&rhs.0, HP_BITS, RM))
    }
}

impl Div for Hp {
    type Output = Hp;
    fn div(self, rhs: Hp) -> Hp {
        Hp(self.0.div(&rhs.0, HP_BITS, RM))
    }
}

impl Neg for Hp {
    type Output = Hp;
    fn neg(self) -> Hp {
        Hp(self.0.neg())
    }
}

impl Real for Hp {
    const BACKEND: Backend = Backend::HighPrecision;

    fn from_f64(x: f64) -> Self {
        // Exact: every binary64 fits in the working mantissa.
        Hp(BigFloat::from_f64(x, HP_BITS))
    }

    fn to_f64(&self) -> f64 {
        if self.0.is_zero() {
            return 0.0;
        }
        self.to_decimal().parse().unwrap_or(f64::NAN)
    }

    fn exp(&self) -> Self {
        CONSTS.with(|cc| Hp(self.0.exp(HP_BITS, RM, &mut cc.borrow_mut())))
    }

    fn ln(&self) -> Self {
        CONSTS.with(|cc| Hp(self.0.ln(HP_BITS, RM, &mut cc.borrow_mut())))
    }

    fn sqrt(&self) -> Self {
        Hp(self.0.sqrt(HP_BITS, RM))
    }

    fn abs(&self) -> Self {
        Hp(self.0.abs())
    }

    fn to_decimal(&self) -> String {
        CONSTS.with(|cc| {
            self.0
                .format(Radix::Dec, RM, &mut cc.borrow_mut())
                .unwrap_or_else(|_| "NaN".to_string())
        })
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}
