//! Elementary functions on certified intervals.
//!
//! Each point evaluation sums a Taylor-type series in interval arithmetic and
//! adds an explicit enclosure of the truncated remainder. Monotone functions
//! are extended to intervals through their endpoints.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{CertifiedInterval, Dyadic, IntervalError};

/// Precision of the lazily computed constants; requests up to this many bits
/// are served by rounding the cached enclosure outward.
const CONST_CACHE_BITS: u32 = 8192 + 128;

/// `exp` refuses arguments whose magnitude reaches `2^40`.
const EXP_ARG_LOG2_LIMIT: i64 = 40;

fn symmetric(radius: &Dyadic, prec: u32) -> CertifiedInterval {
    CertifiedInterval::new(radius.neg(), radius.clone(), prec)
}

/// Sums `terms` until a term drops `wp + 4` bits below the first one, then
/// adds `±tail_factor·|first omitted term|`.
fn sum_series<F>(first: CertifiedInterval, wp: u32, tail_factor: u32, mut next: F) -> CertifiedInterval
where
    F: FnMut(&CertifiedInterval, u32) -> CertifiedInterval,
{
    let lead = first.mag();
    if lead.is_zero() {
        return first;
    }
    let cutoff = lead.magnitude_log2() - wp as i64 - 4;
    let mut sum = first.clone();
    let mut term = first;
    let mut k = 1u32;
    loop {
        term = next(&term, k);
        let m = term.mag();
        if m.is_zero() {
            return sum;
        }
        if m.magnitude_log2() < cutoff {
            let radius = m.mul(&Dyadic::from_int(tail_factor));
            return &sum + &symmetric(&radius, wp);
        }
        sum = &sum + &term;
        k += 1;
    }
}

/// `atan(1/q)` for an integer `q >= 2`.
fn atan_inv(q: u32, wp: u32) -> CertifiedInterval {
    let x = CertifiedInterval::from_ratio(&BigInt::one(), &BigInt::from(q), wp);
    let x2 = x.sqr();
    // term_k = (-1)^k x^{2k+1} / (2k+1); carry the bare power and divide when summing.
    let mut power = x.clone();
    let mut sum = x.clone();
    let cutoff = x.mag().magnitude_log2() - wp as i64 - 4;
    let mut k = 1u64;
    loop {
        power = (&power * &x2).with_precision(wp);
        let term = power.div_int(BigInt::from(2 * k + 1));
        let m = term.mag();
        if m.is_zero() || m.magnitude_log2() < cutoff {
            return &sum + &symmetric(&m.mul_pow2(1), wp);
        }
        if k % 2 == 1 {
            sum = &sum - &term;
        } else {
            sum = &sum + &term;
        }
        k += 1;
    }
}

fn compute_pi(prec: u32) -> CertifiedInterval {
    let wp = prec + 16;
    let a = atan_inv(5, wp).scale_int(16);
    let b = atan_inv(239, wp).scale_int(4);
    (&a - &b).with_precision(prec)
}

/// `atanh(z)` for an enclosure with `|z| <= 1/2`.
fn atanh_small(z: &CertifiedInterval, wp: u32) -> CertifiedInterval {
    let z2 = z.sqr();
    let mut power = z.clone();
    let mut sum = z.clone();
    let lead = z.mag();
    if lead.is_zero() {
        return sum;
    }
    let cutoff = lead.magnitude_log2() - wp as i64 - 4;
    let mut k = 1u64;
    loop {
        power = (&power * &z2).with_precision(wp);
        let term = power.div_int(BigInt::from(2 * k + 1));
        let m = term.mag();
        if m.is_zero() {
            return sum;
        }
        if m.magnitude_log2() < cutoff {
            // Remainder ≤ |first omitted| / (1 - z²) ≤ 2 |first omitted|.
            return &sum + &symmetric(&m.mul_pow2(1), wp);
        }
        sum = &sum + &term;
        k += 1;
    }
}

fn compute_ln2(prec: u32) -> CertifiedInterval {
    let wp = prec + 16;
    let third = CertifiedInterval::from_ratio(&BigInt::one(), &BigInt::from(3), wp);
    atanh_small(&third, wp).mul_pow2(1).with_precision(prec)
}

fn cached(cell: &'static OnceLock<CertifiedInterval>, prec: u32, f: fn(u32) -> CertifiedInterval) -> CertifiedInterval {
    if prec <= CONST_CACHE_BITS {
        cell.get_or_init(|| f(CONST_CACHE_BITS)).with_precision(prec)
    } else {
        f(prec)
    }
}

/// Enclosure of π at `prec` bits.
pub fn pi(prec: u32) -> CertifiedInterval {
    static PI: OnceLock<CertifiedInterval> = OnceLock::new();
    cached(&PI, prec, compute_pi)
}

/// Enclosure of ln 2 at `prec` bits.
pub fn ln2(prec: u32) -> CertifiedInterval {
    static LN2: OnceLock<CertifiedInterval> = OnceLock::new();
    cached(&LN2, prec, compute_ln2)
}

fn exp_point(x: &Dyadic, prec: u32) -> Result<CertifiedInterval, IntervalError> {
    if x.is_zero() {
        return Ok(CertifiedInterval::from_int(1, prec));
    }
    let lx = x.magnitude_log2();
    if lx >= EXP_ARG_LOG2_LIMIT {
        return Err(IntervalError::Overflow(format!("exp({})", x)));
    }
    // Reduce to |r| < 2^-reduce so the series converges quickly, then square back.
    let reduce = (prec as f64).sqrt().ceil().max(8.0) as i64;
    let s = (lx + 1 + reduce).max(0);
    let wp = prec + s as u32 + 24;
    let r = CertifiedInterval::point(x.mul_pow2(-s), wp);
    let one = CertifiedInterval::from_int(1, wp);
    let series = sum_series(one.clone(), wp, 2, |t, k| (t * &r).div_int(k));
    let mut acc = series;
    for _ in 0..s {
        acc = acc.sqr();
    }
    Ok(acc.with_precision(prec))
}

fn ln_point(x: &Dyadic, prec: u32) -> Result<CertifiedInterval, IntervalError> {
    if !x.is_positive() {
        return Err(IntervalError::Domain {
            op: "ln",
            interval: x.to_string(),
        });
    }
    let wp = prec + 32;
    // x = y · 2^k with y in [3/4, 3/2).
    let t = x.bits() as i64;
    let mut k = x.exponent() + t;
    let mut y = Dyadic::new(x.mantissa().clone(), -t);
    if y < Dyadic::new(BigInt::from(3), -2) {
        y = y.mul_pow2(1);
        k -= 1;
    }
    let yi = CertifiedInterval::point(y, wp);
    let one = CertifiedInterval::from_int(1, wp);
    let z = (&yi - &one).div_interval(&(&yi + &one))?;
    let mut res = atanh_small(&z, wp).mul_pow2(1);
    if k != 0 {
        res = &res + &ln2(wp).scale_int(k);
    }
    Ok(res.with_precision(prec))
}

/// `sinh` of a point through its odd Taylor series; for `|x| < 1`.
fn sinh_series(x: &Dyadic, wp: u32, skip_linear: bool) -> CertifiedInterval {
    let xi = CertifiedInterval::point(x.clone(), wp);
    let x2 = xi.sqr();
    let first = if skip_linear {
        (&xi * &x2).div_int(6)
    } else {
        xi.clone()
    };
    let offset = u64::from(skip_linear);
    sum_series(first, wp, 2, |t, k| {
        let j = k as u64 + offset;
        (t * &x2).div_int(BigInt::from((2 * j) * (2 * j + 1)))
    })
}

fn sinh_point(x: &Dyadic, prec: u32, skip_linear: bool) -> Result<CertifiedInterval, IntervalError> {
    if x.is_zero() {
        return Ok(CertifiedInterval::from_int(0, prec));
    }
    let wp = prec + 16;
    if x.magnitude_log2() < 0 {
        return Ok(sinh_series(x, wp, skip_linear).with_precision(prec));
    }
    let e = exp_point(x, wp)?;
    let inv = e.recip()?;
    let mut s = (&e - &inv).mul_pow2(-1);
    if skip_linear {
        s = &s - &CertifiedInterval::point(x.clone(), wp);
    }
    Ok(s.with_precision(prec))
}

fn cosh_point(x: &Dyadic, prec: u32) -> Result<CertifiedInterval, IntervalError> {
    let wp = prec + 8;
    let e = exp_point(x, wp)?;
    let inv = e.recip()?;
    Ok((&e + &inv).mul_pow2(-1).with_precision(prec))
}

/// `(cos πq, sin πq)` for `q` in `[0, 1/4]`.
fn cos_sin_pi_base(q: &BigRational, prec: u32) -> (CertifiedInterval, CertifiedInterval) {
    let wp = prec + 16;
    if q.is_zero() {
        return (CertifiedInterval::from_int(1, prec), CertifiedInterval::from_int(0, prec));
    }
    let x = &pi(wp) * &CertifiedInterval::from_rational(q, wp);
    let x2 = x.sqr();
    let cos = sum_series(CertifiedInterval::from_int(1, wp), wp, 1, |t, k| {
        -((t * &x2).div_int(BigInt::from((2 * k - 1) as u64 * (2 * k) as u64)))
    });
    let sin = sum_series(x.clone(), wp, 1, |t, k| {
        -((t * &x2).div_int(BigInt::from((2 * k) as u64 * (2 * k + 1) as u64)))
    });
    (cos.with_precision(prec), sin.with_precision(prec))
}

/// `(cos πq, sin πq)` for any rational `q`, with exact argument reduction.
pub fn cos_sin_pi(q: &BigRational, prec: u32) -> (CertifiedInterval, CertifiedInterval) {
    let two = BigInt::from(2);
    // q mod 2, in [0, 2).
    let shift = (q.numer()).div_floor(&(q.denom() * &two));
    let mut r = q - BigRational::from_integer(shift * &two);
    let half = BigRational::new(BigInt::one(), two.clone());
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    let one = BigRational::one();

    let mut neg_cos = false;
    let mut neg_sin = false;
    if r >= one {
        r -= &one;
        neg_cos = true;
        neg_sin = true;
    }
    if r > half {
        // cos(π - t) = -cos t, sin(π - t) = sin t
        r = &one - &r;
        neg_cos = !neg_cos;
    }
    let swap = r > quarter;
    if swap {
        r = &half - &r;
    }
    let (mut c, mut s) = cos_sin_pi_base(&r, prec);
    if swap {
        std::mem::swap(&mut c, &mut s);
    }
    if neg_cos {
        c = -c;
    }
    if neg_sin {
        s = -s;
    }
    (c, s)
}

impl CertifiedInterval {
    pub fn exp(&self) -> Result<CertifiedInterval, IntervalError> {
        let lo = exp_point(self.lo(), self.precision_bits())?;
        if self.is_point() {
            return Ok(lo);
        }
        let hi = exp_point(self.hi(), self.precision_bits())?;
        Ok(CertifiedInterval::new(lo.lo().clone(), hi.hi().clone(), self.precision_bits()))
    }

    pub fn ln(&self) -> Result<CertifiedInterval, IntervalError> {
        if !self.is_positive() {
            return Err(IntervalError::Domain {
                op: "ln",
                interval: self.to_string(),
            });
        }
        let lo = ln_point(self.lo(), self.precision_bits())?;
        if self.is_point() {
            return Ok(lo);
        }
        let hi = ln_point(self.hi(), self.precision_bits())?;
        Ok(CertifiedInterval::new(lo.lo().clone(), hi.hi().clone(), self.precision_bits()))
    }

    fn monotone_increasing(
        &self,
        f: impl Fn(&Dyadic, u32) -> Result<CertifiedInterval, IntervalError>,
    ) -> Result<CertifiedInterval, IntervalError> {
        let prec = self.precision_bits();
        let lo = f(self.lo(), prec)?;
        if self.is_point() {
            return Ok(lo);
        }
        let hi = f(self.hi(), prec)?;
        Ok(CertifiedInterval::new(lo.lo().clone(), hi.hi().clone(), prec))
    }

    pub fn sinh(&self) -> Result<CertifiedInterval, IntervalError> {
        self.monotone_increasing(|d, p| sinh_point(d, p, false))
    }

    /// `sinh(x) - x` without cancellation near zero.
    pub fn sinh_minus_identity(&self) -> Result<CertifiedInterval, IntervalError> {
        self.monotone_increasing(|d, p| sinh_point(d, p, true))
    }

    pub fn cosh(&self) -> Result<CertifiedInterval, IntervalError> {
        let prec = self.precision_bits();
        if !self.lo().is_negative() {
            self.monotone_increasing(cosh_point)
        } else if !self.hi().is_positive() {
            (-self).monotone_increasing(cosh_point)
        } else {
            let top = cosh_point(&self.mag(), prec)?;
            Ok(CertifiedInterval::new(Dyadic::one(), top.hi().clone(), prec))
        }
    }
}
