//! Positive and negative reals with an unbounded binary exponent.
//!
//! Just enough arithmetic to evaluate `tau` for points whose distance to the
//! circle is far below the double-precision range, e.g. `4^{-2^{20}}`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// `mant * 2^exp` with `mant` in `[0.5, 1)` (or zero).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtFloat {
    mant: f64,
    exp: i64,
}

impl ExtFloat {
    pub const ZERO: ExtFloat = ExtFloat { mant: 0.0, exp: 0 };
    pub const ONE: ExtFloat = ExtFloat { mant: 0.5, exp: 1 };

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 || !x.is_finite() {
            return Self::ZERO;
        }
        let (m, e) = frexp(x);
        Self { mant: m, exp: e }
    }

    /// `2^e`
    pub fn pow2(e: i64) -> Self {
        Self { mant: 0.5, exp: e + 1 }
    }

    fn norm(mant: f64, exp: i64) -> Self {
        if mant == 0.0 {
            return Self::ZERO;
        }
        let (m, e) = frexp(mant);
        Self { mant: m, exp: exp + e }
    }

    pub fn mantissa(&self) -> f64 {
        self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant == 0.0
    }

    pub fn abs(self) -> Self {
        Self { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn neg(self) -> Self {
        Self { mant: -self.mant, exp: self.exp }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        if self.exp > 1100 {
            return f64::INFINITY.copysign(self.mant);
        }
        if self.exp < -1100 {
            return 0.0f64.copysign(self.mant);
        }
        // split to avoid intermediate overflow
        let half = self.exp / 2;
        self.mant * 2f64.powi(half as i32) * 2f64.powi((self.exp - half) as i32)
    }

    pub fn mul(self, o: Self) -> Self {
        Self::norm(self.mant * o.mant, self.exp + o.exp)
    }

    pub fn div(self, o: Self) -> Self {
        Self::norm(self.mant / o.mant, self.exp - o.exp)
    }

    pub fn scale(self, k: f64) -> Self {
        self.mul(Self::from_f64(k))
    }

    pub fn add(self, o: Self) -> Self {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (hi, lo) = if self.exp >= o.exp { (self, o) } else { (o, self) };
        let shift = hi.exp - lo.exp;
        if shift > 60 {
            return hi;
        }
        Self::norm(hi.mant + lo.mant * 2f64.powi(-(shift as i32)), hi.exp)
    }

    pub fn sub(self, o: Self) -> Self {
        self.add(o.neg())
    }

    pub fn sqrt(self) -> Self {
        assert!(self.mant >= 0.0, "sqrt of a negative ExtFloat");
        if self.is_zero() {
            return self;
        }
        if self.exp % 2 == 0 {
            Self::norm(self.mant.sqrt(), self.exp / 2)
        } else {
            Self::norm((2.0 * self.mant).sqrt(), (self.exp - 1) / 2)
        }
    }

    /// `sin(x)`, exact to double precision for tiny arguments.
    pub fn sin(self) -> Self {
        if self.exp < -26 {
            // |x| < 2^-26, the cubic term is below half an ulp
            let x2 = self.mul(self).to_f64();
            return self.scale(1.0 - x2 / 6.0);
        }
        Self::from_f64(self.to_f64().sin())
    }

    pub fn log2(&self) -> f64 {
        self.mant.abs().log2() + self.exp as f64
    }
}

impl PartialOrd for ExtFloat {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        let d = self.sub(*o);
        d.mant.partial_cmp(&0.0)
    }
}

impl fmt::Display for ExtFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let l10 = self.mant.abs().log10() + self.exp as f64 * std::f64::consts::LOG10_2;
        let e = l10.floor();
        let m = 10f64.powf(l10 - e).copysign(self.mant);
        write!(f, "{:.6}e{}", m, e as i64)
    }
}

fn frexp(x: f64) -> (f64, i64) {
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    if raw_exp == 0 {
        // subnormal: lift into the normal range first
        let (m, e) = frexp(x * 2f64.powi(64));
        return (m, e - 64);
    }
    let e = raw_exp - 1022;
    let m = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52));
    (m, e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_arith() {
        for &x in &[1.0, 0.75, 3.5e-7, 1e300, -2.5, 4.9e-320] {
            assert_eq!(ExtFloat::from_f64(x).to_f64(), x);
        }
        let a = ExtFloat::from_f64(3.0);
        let b = ExtFloat::from_f64(0.25);
        assert_eq!(a.mul(b).to_f64(), 0.75);
        assert_eq!(a.div(b).to_f64(), 12.0);
        assert_eq!(a.add(b).to_f64(), 3.25);
        assert_eq!(b.sub(a).to_f64(), -2.75);
        assert_eq!(ExtFloat::from_f64(2.25).sqrt().to_f64(), 1.5);
        assert_eq!(ExtFloat::from_f64(0.5).sqrt().to_f64(), 0.5f64.sqrt());
    }

    #[test]
    fn huge_exponents() {
        let tiny = ExtFloat::pow2(-(1 << 20));
        assert_eq!(tiny.to_f64(), 0.0);
        assert_eq!(tiny.log2(), -((1u64 << 20) as f64));
        let sq = tiny.mul(tiny);
        assert_eq!(sq.log2(), -((1u64 << 21) as f64));
        assert_eq!(sq.sqrt(), tiny);
        assert!(sq < tiny && tiny > ExtFloat::ZERO);
        assert_eq!(tiny.sin(), tiny);
        let s = tiny.add(ExtFloat::pow2(-(1 << 21)));
        assert_eq!(s, tiny);
    }
}
