//! Arbitrary-precision binary floating point values `mant * 2^exp`.
//!
//! Every operation that can lose information takes an explicit rounding
//! direction, so callers building enclosures can always round outward.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Rounding direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    /// Toward negative infinity.
    Down,
    /// Toward positive infinity.
    Up,
}

impl Round {
    pub fn flip(self) -> Self {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// The exact value `mant * 2^exp`.
///
/// Values are kept normalized: the mantissa is odd, or zero with `exp == 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

/// `floor(m / 2^s)` or `ceil(m / 2^s)` for `s >= 0`.
pub(crate) fn shr_round(m: &BigInt, s: u64, dir: Round) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    let mag = m.magnitude();
    let q = mag >> s;
    let exact = (&q << s) == *mag;
    let q: BigInt = BigInt::from_biguint(Sign::Plus, q);
    let neg = m.sign() == Sign::Minus;
    match (neg, dir, exact) {
        (_, _, true) => {
            if neg {
                -q
            } else {
                q
            }
        }
        (false, Round::Down, false) => q,
        (false, Round::Up, false) => q + 1u32,
        (true, Round::Down, false) => -(q + 1u32),
        (true, Round::Up, false) => -q,
    }
}

/// Integer division `a / b` rounded in direction `dir`; `b != 0`.
pub(crate) fn div_round_int(a: &BigInt, b: &BigInt, dir: Round) -> BigInt {
    match dir {
        Round::Down => a.div_floor(b),
        Round::Up => {
            let (q, r) = a.div_mod_floor(b);
            if r.is_zero() {
                q
            } else {
                q + 1
            }
        }
    }
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        if let Some(tz) = self.mant.trailing_zeros() {
            if tz > 0 {
                self.mant >>= tz;
                self.exp += tz as i64;
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: 0,
        }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Dyadic::new(v.into(), 0)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn signum(&self) -> i8 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Number of significant bits of the mantissa.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// `floor(log2 |self|)` for nonzero values.
    pub fn magnitude_log2(&self) -> i64 {
        debug_assert!(!self.is_zero());
        self.exp + self.mant.bits() as i64 - 1
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    /// `self * 2^k`, exact.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: &self.mant * &other.mant,
            exp: self.exp + other.exp,
        }
    }

    pub fn pow(&self, k: u32) -> Dyadic {
        if k == 0 {
            return Dyadic::one();
        }
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: num_traits::pow(self.mant.clone(), k as usize),
            exp: self.exp * k as i64,
        }
    }

    /// Round to at most `prec` significant bits.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let s = bits - prec as u64;
        Dyadic::new(shr_round(&self.mant, s, dir), self.exp + s as i64)
    }

    /// `self / other` rounded to `prec` bits; `other != 0`.
    pub fn div(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // Scale the numerator so the integer quotient carries prec + 1 bits.
        let shift = (prec as i64 + 1 + other.mant.bits() as i64 - self.mant.bits() as i64).max(0);
        let num = &self.mant << shift as u64;
        let q = div_round_int(&num, &other.mant, dir);
        Dyadic::new(q, self.exp - other.exp - shift).round(prec, dir)
    }

    /// Square root rounded to `prec` bits; `self >= 0`.
    pub fn sqrt(&self, prec: u32, dir: Round) -> Dyadic {
        assert!(!self.is_negative(), "square root of a negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // Work with an even exponent and at least 2*prec + 2 mantissa bits.
        let mut shift = (2 * prec as i64 + 2 - self.mant.bits() as i64).max(0);
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = &self.mant << shift as u64;
        let e = self.exp - shift;
        let mut r = m.sqrt();
        if dir == Round::Up && &r * &r != m {
            r += 1;
        }
        Dyadic::new(r, e / 2).round(prec, dir)
    }

    /// Nearest dyadic at `prec` bits to `num / den` in direction `dir`.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32, dir: Round) -> Dyadic {
        assert!(!den.is_zero(), "zero denominator");
        let (num, den) = if den.is_negative() {
            (-num, -den)
        } else {
            (num.clone(), den.clone())
        };
        if num.is_zero() {
            return Dyadic::zero();
        }
        Dyadic::from_int(num).div(&Dyadic::from_int(den), prec, dir)
    }

    pub fn from_rational(q: &BigRational, prec: u32, dir: Round) -> Dyadic {
        Dyadic::from_ratio(q.numer(), q.denom(), prec, dir)
    }

    /// Exact conversion to a rational.
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Exact comparison against a rational.
    pub fn cmp_rational(&self, q: &BigRational) -> Ordering {
        // self = m 2^e, q = a/b with b > 0: compare m 2^e b with a.
        let (a, b) = (q.numer(), q.denom());
        if self.exp >= 0 {
            ((&self.mant << self.exp as u64) * b).cmp(a)
        } else {
            (&self.mant * b).cmp(&(a << (-self.exp) as u64))
        }
    }

    /// `floor` or `ceil` as an integer.
    pub fn to_integer(&self, dir: Round) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            shr_round(&self.mant, (-self.exp) as u64, dir)
        }
    }

    /// Nearest integer, ties rounded up.
    pub fn round_to_integer(&self) -> BigInt {
        self.add(&Dyadic::new(BigInt::one(), -1)).to_integer(Round::Down)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let keep = 60.min(bits);
        let m = shr_round(&self.mant, (bits - keep) as u64, Round::Down);
        let m: i64 = m.try_into().unwrap_or(0);
        let e = self.exp + bits - keep;
        (m as f64) * 2f64.powi(e.clamp(-1100, 1100) as i32)
    }

    /// Decimal rendering `d.ddd…e±x` with `digits` significant digits, rounded
    /// in direction `dir`.
    pub fn to_sci(&self, digits: usize, dir: Round) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return "0".to_string();
        }
        let q = self.to_rational();
        let ten = BigInt::from(10);
        // Estimate the decimal exponent from the binary one, then correct.
        let mut e10 = ((self.magnitude_log2() as f64) * std::f64::consts::LOG10_2).floor() as i64;
        loop {
            let k = digits as i64 - 1 - e10;
            let scaled = if k >= 0 {
                &q * BigRational::from_integer(num_traits::pow(ten.clone(), k as usize))
            } else {
                &q / BigRational::from_integer(num_traits::pow(ten.clone(), (-k) as usize))
            };
            let r = match dir {
                Round::Down => scaled.floor().to_integer(),
                Round::Up => scaled.ceil().to_integer(),
            };
            let len = r.abs().to_string().len();
            if len > digits {
                e10 += 1;
                continue;
            }
            if len < digits {
                e10 -= 1;
                continue;
            }
            let s = r.abs().to_string();
            let sign = if r.is_negative() { "-" } else { "" };
            let (head, tail) = s.split_at(1);
            return if tail.is_empty() {
                format!("{sign}{head}e{e10}")
            } else {
                format!("{sign}{head}.{tail}e{e10}")
            };
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let sa = self.signum();
        let sb = other.signum();
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        a.cmp(&b)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(17);
        f.write_str(&self.to_sci(digits, Round::Down))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    #[test]
    fn normalizes_trailing_zeros() {
        let x = d(12, 0);
        assert_eq!(x.mantissa(), &BigInt::from(3));
        assert_eq!(x.exponent(), 2);
        assert_eq!(d(0, 17), Dyadic::zero());
    }

    #[test]
    fn directed_shift_rounding() {
        let m = BigInt::from(-7);
        assert_eq!(shr_round(&m, 1, Round::Down), BigInt::from(-4));
        assert_eq!(shr_round(&m, 1, Round::Up), BigInt::from(-3));
        assert_eq!(shr_round(&BigInt::from(7), 1, Round::Down), BigInt::from(3));
        assert_eq!(shr_round(&BigInt::from(7), 1, Round::Up), BigInt::from(4));
        assert_eq!(shr_round(&BigInt::from(8), 2, Round::Up), BigInt::from(2));
    }

    #[test]
    fn division_brackets_one_third() {
        let one = Dyadic::one();
        let three = Dyadic::from_int(3);
        let lo = one.div(&three, 64, Round::Down);
        let hi = one.div(&three, 64, Round::Up);
        let third = BigRational::new(1.into(), 3.into());
        assert_eq!(lo.cmp_rational(&third), Ordering::Less);
        assert_eq!(hi.cmp_rational(&third), Ordering::Greater);
        assert!(hi.sub(&lo).magnitude_log2() <= -64);
    }

    #[test]
    fn sqrt_is_exact_on_squares() {
        let x = Dyadic::from_int(49).mul_pow2(-6);
        assert_eq!(x.sqrt(32, Round::Down), Dyadic::from_int(7).mul_pow2(-3));
        assert_eq!(x.sqrt(32, Round::Up), Dyadic::from_int(7).mul_pow2(-3));
        let two = Dyadic::from_int(2);
        let lo = two.sqrt(80, Round::Down);
        let hi = two.sqrt(80, Round::Up);
        assert!(lo.mul(&lo) < two && hi.mul(&hi) > two);
    }

    #[test]
    fn ordering_across_exponents() {
        assert!(d(1, -3) < d(1, -2));
        assert!(d(-1, 5) < d(1, -5));
        assert!(d(3, 1) > d(5, 0));
        assert_eq!(d(3, 1).cmp(&d(6, 0)), Ordering::Equal);
    }

    #[test]
    fn scientific_rendering() {
        assert_eq!(d(1, 0).to_sci(3, Round::Down), "1.00e0");
        let third = Dyadic::from_ratio(&1.into(), &3.into(), 80, Round::Down);
        assert_eq!(third.to_sci(5, Round::Down), "3.3333e-1");
        assert_eq!(third.to_sci(5, Round::Up), "3.3334e-1");
        assert_eq!(d(-1234, 0).to_sci(2, Round::Down), "-1.3e3");
        assert_eq!(d(-1234, 0).to_sci(2, Round::Up), "-1.2e3");
        assert_eq!(d(999, 0).to_sci(2, Round::Up), "1.0e3");
    }

    #[test]
    fn nearest_integer() {
        assert_eq!(d(5, -1).round_to_integer(), BigInt::from(3));
        assert_eq!(d(-5, -1).round_to_integer(), BigInt::from(-2));
        assert_eq!(d(9, -2).round_to_integer(), BigInt::from(2));
    }
}
