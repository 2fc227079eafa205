//! Certified real intervals with outward rounding.
//!
//! A [`CertifiedInterval`] encloses an exact real value between two dyadic
//! endpoints. Every arithmetic step rounds the lower endpoint down and the
//! upper endpoint up at the interval's working precision, so a sign read off
//! an enclosure is guaranteed for the enclosed value.

mod dyadic;
mod elementary;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

pub use dyadic::{Dyadic, Round};
pub use elementary::{cos_sin_pi, ln2, pi};

/// Smallest working precision accepted by constructors.
pub const MIN_PRECISION: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("division by an interval containing zero: {0}")]
    DivisionByZero(String),
    #[error("{op} is undefined on {interval}")]
    Domain { op: &'static str, interval: String },
    #[error("exponent too large for a finite enclosure: {0}")]
    Overflow(String),
}

/// An enclosure `[lo, hi]` of a real value, computed at `precision_bits`.
#[derive(Clone, PartialEq, Eq)]
pub struct CertifiedInterval {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl CertifiedInterval {
    /// Interval from endpoints that already bracket the target.
    ///
    /// Panics if `lo > hi`.
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        assert!(lo <= hi, "inverted interval {lo:?} > {hi:?}");
        let prec = prec.max(MIN_PRECISION);
        CertifiedInterval {
            lo: lo.round(prec, Round::Down),
            hi: hi.round(prec, Round::Up),
            prec,
        }
    }

    /// The exact point `d`, widened only if `d` has more than `prec` bits.
    pub fn point(d: Dyadic, prec: u32) -> Self {
        CertifiedInterval::new(d.clone(), d, prec)
    }

    pub fn from_int<T: Into<BigInt>>(v: T, prec: u32) -> Self {
        CertifiedInterval::point(Dyadic::from_int(v), prec)
    }

    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        let prec = prec.max(MIN_PRECISION);
        CertifiedInterval {
            lo: Dyadic::from_ratio(num, den, prec, Round::Down),
            hi: Dyadic::from_ratio(num, den, prec, Round::Up),
            prec,
        }
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        CertifiedInterval::from_ratio(q.numer(), q.denom(), prec)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision_bits(&self) -> u32 {
        self.prec
    }

    /// Same enclosure, relabelled to work at `prec` bits from now on.
    pub fn with_precision(&self, prec: u32) -> Self {
        CertifiedInterval::new(self.lo.clone(), self.hi.clone(), prec)
    }

    /// Exact width `hi - lo`.
    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    /// Exact midpoint `(lo + hi) / 2`.
    pub fn midpoint(&self) -> Dyadic {
        self.lo.add(&self.hi).mul_pow2(-1)
    }

    /// Largest absolute value in the interval.
    pub fn mag(&self) -> Dyadic {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value in the interval.
    pub fn mig(&self) -> Dyadic {
        if self.contains_zero() {
            Dyadic::zero()
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_positive() && !self.is_negative()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, d: &Dyadic) -> bool {
        &self.lo <= d && d <= &self.hi
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        self.lo.cmp_rational(q) != Ordering::Greater && self.hi.cmp_rational(q) != Ordering::Less
    }

    pub fn contains_int(&self, v: &BigInt) -> bool {
        self.contains_rational(&BigRational::from_integer(v.clone()))
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &CertifiedInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Certainly `self < other` for every pair of enclosed values.
    pub fn certainly_lt(&self, other: &CertifiedInterval) -> bool {
        self.hi < other.lo
    }

    /// Intersection of two enclosures of the same value.
    ///
    /// Returns `None` when disjoint, which means one of them was unsound.
    pub fn intersect(&self, other: &CertifiedInterval) -> Option<CertifiedInterval> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then(|| CertifiedInterval {
            lo,
            hi,
            prec: self.prec.max(other.prec),
        })
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &CertifiedInterval) -> CertifiedInterval {
        CertifiedInterval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            prec: self.prec.max(other.prec),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64()
    }

    fn prec_with(&self, other: &CertifiedInterval) -> u32 {
        self.prec.max(other.prec)
    }

    pub fn add_interval(&self, other: &CertifiedInterval) -> CertifiedInterval {
        let prec = self.prec_with(other);
        CertifiedInterval {
            lo: self.lo.add(&other.lo).round(prec, Round::Down),
            hi: self.hi.add(&other.hi).round(prec, Round::Up),
            prec,
        }
    }

    pub fn sub_interval(&self, other: &CertifiedInterval) -> CertifiedInterval {
        let prec = self.prec_with(other);
        CertifiedInterval {
            lo: self.lo.sub(&other.hi).round(prec, Round::Down),
            hi: self.hi.sub(&other.lo).round(prec, Round::Up),
            prec,
        }
    }

    pub fn mul_interval(&self, other: &CertifiedInterval) -> CertifiedInterval {
        let prec = self.prec_with(other);
        let (lo, hi) = if !self.lo.is_negative() && !other.lo.is_negative() {
            (self.lo.mul(&other.lo), self.hi.mul(&other.hi))
        } else {
            let c = [
                self.lo.mul(&other.lo),
                self.lo.mul(&other.hi),
                self.hi.mul(&other.lo),
                self.hi.mul(&other.hi),
            ];
            let lo = c.iter().min().cloned().unwrap_or_else(Dyadic::zero);
            let hi = c.iter().max().cloned().unwrap_or_else(Dyadic::zero);
            (lo, hi)
        };
        CertifiedInterval {
            lo: lo.round(prec, Round::Down),
            hi: hi.round(prec, Round::Up),
            prec,
        }
    }

    pub fn div_interval(&self, other: &CertifiedInterval) -> Result<CertifiedInterval, IntervalError> {
        if other.contains_zero() {
            return Err(IntervalError::DivisionByZero(other.to_string()));
        }
        let prec = self.prec_with(other);
        let pick = |dir: Round| {
            let c = [
                self.lo.div(&other.lo, prec, dir),
                self.lo.div(&other.hi, prec, dir),
                self.hi.div(&other.lo, prec, dir),
                self.hi.div(&other.hi, prec, dir),
            ];
            match dir {
                Round::Down => c.into_iter().min(),
                Round::Up => c.into_iter().max(),
            }
            .unwrap_or_else(Dyadic::zero)
        };
        Ok(CertifiedInterval {
            lo: pick(Round::Down),
            hi: pick(Round::Up),
            prec,
        })
    }

    pub fn recip(&self) -> Result<CertifiedInterval, IntervalError> {
        CertifiedInterval::from_int(1, self.prec).div_interval(self)
    }

    /// Multiply by an exact integer.
    pub fn scale_int<T: Into<BigInt>>(&self, k: T) -> CertifiedInterval {
        self.mul_interval(&CertifiedInterval::from_int(k, self.prec))
    }

    /// Divide by a nonzero exact integer.
    pub fn div_int<T: Into<BigInt>>(&self, k: T) -> CertifiedInterval {
        let k = CertifiedInterval::from_int(k, self.prec);
        self.div_interval(&k).expect("nonzero integer divisor")
    }

    /// Multiply by `2^k`, exact.
    pub fn mul_pow2(&self, k: i64) -> CertifiedInterval {
        CertifiedInterval {
            lo: self.lo.mul_pow2(k),
            hi: self.hi.mul_pow2(k),
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> CertifiedInterval {
        CertifiedInterval {
            lo: self.mig(),
            hi: self.mag(),
            prec: self.prec,
        }
    }

    pub fn sqr(&self) -> CertifiedInterval {
        self.powi(2)
    }

    /// Integer power; tight for intervals straddling zero.
    pub fn powi(&self, k: u32) -> CertifiedInterval {
        let prec = self.prec;
        if k == 0 {
            return CertifiedInterval::from_int(1, prec);
        }
        let (lo, hi) = if !self.lo.is_negative() {
            (self.lo.pow(k), self.hi.pow(k))
        } else if !self.hi.is_positive() {
            if k.is_multiple_of(2) {
                (self.hi.pow(k), self.lo.pow(k))
            } else {
                (self.lo.pow(k), self.hi.pow(k))
            }
        } else if k.is_multiple_of(2) {
            (Dyadic::zero(), self.mag().pow(k))
        } else {
            (self.lo.pow(k), self.hi.pow(k))
        };
        CertifiedInterval {
            lo: lo.round(prec, Round::Down),
            hi: hi.round(prec, Round::Up),
            prec,
        }
    }

    pub fn sqrt(&self) -> Result<CertifiedInterval, IntervalError> {
        if self.lo.is_negative() {
            return Err(IntervalError::Domain {
                op: "sqrt",
                interval: self.to_string(),
            });
        }
        Ok(CertifiedInterval {
            lo: self.lo.sqrt(self.prec, Round::Down),
            hi: self.hi.sqrt(self.prec, Round::Up),
            prec: self.prec,
        })
    }

    /// Render with `digits` significant decimal digits, rounding outward.
    pub fn display_digits(&self, digits: usize) -> String {
        format!(
            "{}..{} @{}b",
            self.lo.to_sci(digits, Round::Down),
            self.hi.to_sci(digits, Round::Up),
            self.prec
        )
    }
}

impl fmt::Debug for CertifiedInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_digits(20))
    }
}

impl fmt::Display for CertifiedInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(17);
        f.write_str(&self.display_digits(digits))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl $trait<&CertifiedInterval> for &CertifiedInterval {
            type Output = CertifiedInterval;
            fn $method(self, rhs: &CertifiedInterval) -> CertifiedInterval {
                self.$inner(rhs)
            }
        }
        impl $trait<CertifiedInterval> for CertifiedInterval {
            type Output = CertifiedInterval;
            fn $method(self, rhs: CertifiedInterval) -> CertifiedInterval {
                (&self).$inner(&rhs)
            }
        }
        impl $trait<&CertifiedInterval> for CertifiedInterval {
            type Output = CertifiedInterval;
            fn $method(self, rhs: &CertifiedInterval) -> CertifiedInterval {
                (&self).$inner(rhs)
            }
        }
        impl $trait<CertifiedInterval> for &CertifiedInterval {
            type Output = CertifiedInterval;
            fn $method(self, rhs: CertifiedInterval) -> CertifiedInterval {
                self.$inner(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_interval);
forward_binop!(Sub, sub, sub_interval);
forward_binop!(Mul, mul, mul_interval);

impl Neg for &CertifiedInterval {
    type Output = CertifiedInterval;
    fn neg(self) -> CertifiedInterval {
        CertifiedInterval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            prec: self.prec,
        }
    }
}

impl Neg for CertifiedInterval {
    type Output = CertifiedInterval;
    fn neg(self) -> CertifiedInterval {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ci(n: i64, d: i64) -> CertifiedInterval {
        CertifiedInterval::from_ratio(&n.into(), &d.into(), 64)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_enclosure() {
        let x = ci(1, 3);
        assert!(x.contains_rational(&q(1, 3)));
        assert!(!x.contains_rational(&q(1, 2)));
        assert!(!x.is_point());
    }

    #[test]
    fn arithmetic_contains_exact_results() {
        let a = ci(1, 3);
        let b = ci(-2, 7);
        assert!((&a + &b).contains_rational(&(q(1, 3) + q(-2, 7))));
        assert!((&a - &b).contains_rational(&(q(1, 3) - q(-2, 7))));
        assert!((&a * &b).contains_rational(&(q(1, 3) * q(-2, 7))));
        assert!(a.div_interval(&b).unwrap().contains_rational(&(q(1, 3) / q(-2, 7))));
    }

    #[test]
    fn division_by_zero_straddle_is_an_error() {
        let a = ci(1, 1);
        let z = CertifiedInterval::new(Dyadic::from_int(-1), Dyadic::from_int(1), 64);
        assert!(matches!(a.div_interval(&z), Err(IntervalError::DivisionByZero(_))));
    }

    #[test]
    fn even_power_of_straddling_interval() {
        let x = CertifiedInterval::new(Dyadic::from_int(-2), Dyadic::from_int(1), 32);
        let y = x.powi(2);
        assert_eq!(y.lo(), &Dyadic::zero());
        assert_eq!(y.hi(), &Dyadic::from_int(4));
        let z = x.powi(3);
        assert_eq!(z.lo(), &Dyadic::from_int(-8));
        assert_eq!(z.hi(), &Dyadic::from_int(1));
    }

    #[test]
    fn sqrt_domain() {
        assert!(ci(-1, 2).sqrt().is_err());
        let r = ci(2, 1).sqrt().unwrap();
        assert!(r.sqr().contains_int(&BigInt::from(2)));
    }

    #[test]
    fn display_rounds_outward() {
        let x = ci(1, 3);
        assert_eq!(x.display_digits(4), "3.333e-1..3.334e-1 @64b");
    }
}
