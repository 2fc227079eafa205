//! Certified evaluation of the Rademacher-type series for `p̄(n)`, its
//! truncation error bounds and the explicit exponential bounds derived from it.
//!
//! Throughout, `μ(n) = π√n`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::interval::{cos_sin_pi, pi, CertifiedInterval, Dyadic, IntervalError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AsymptoticsError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("imaginary part of the k = {k} multiplier sum is not certifiably zero: {imag}")]
    NotReal { k: u64, imag: String },
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

/// `μ(n) = π√n`.
pub fn mu(n: u64, prec: u32) -> CertifiedInterval {
    let root = CertifiedInterval::from_int(n, prec).sqrt().expect("n >= 0");
    &pi(prec) * &root
}

/// `π√x` for a nonnegative enclosure `x`.
pub fn mu_of(x: &CertifiedInterval) -> Result<CertifiedInterval, IntervalError> {
    Ok(&pi(x.precision_bits()) * &x.sqrt()?)
}

/// `exp(πi · e)` with the rational exponent `e` kept reduced to `[0, 2)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity {
    exponent: BigRational,
}

impl RootOfUnity {
    pub fn new(exponent: BigRational) -> Self {
        let two_den = exponent.denom() * BigInt::from(2);
        let num = exponent.numer().mod_floor(&two_den);
        RootOfUnity {
            exponent: BigRational::new(num, exponent.denom().clone()),
        }
    }

    pub fn one() -> Self {
        RootOfUnity {
            exponent: BigRational::zero(),
        }
    }

    /// The reduced exponent `e` in `[0, 2)`.
    pub fn exponent(&self) -> &BigRational {
        &self.exponent
    }

    pub fn numerator(&self) -> &BigInt {
        self.exponent.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.exponent.denom()
    }

    pub fn mul(&self, other: &RootOfUnity) -> RootOfUnity {
        RootOfUnity::new(&self.exponent + &other.exponent)
    }

    pub fn div(&self, other: &RootOfUnity) -> RootOfUnity {
        RootOfUnity::new(&self.exponent - &other.exponent)
    }

    pub fn pow(&self, k: i64) -> RootOfUnity {
        RootOfUnity::new(&self.exponent * BigRational::from_integer(k.into()))
    }

    /// `(cos πe, sin πe)`.
    pub fn cos_sin(&self, prec: u32) -> (CertifiedInterval, CertifiedInterval) {
        cos_sin_pi(&self.exponent, prec)
    }
}

/// `Σ_{r=1}^{k-1} (r/k)(hr/k - ⌊hr/k⌋ - 1/2)` in exact arithmetic, for any `h >= 0`.
pub fn sawtooth_sum(h: u64, k: u64) -> BigRational {
    // Each term is r(2·(hr mod k) - k) / (2k²).
    let mut acc = BigInt::zero();
    let kk = BigInt::from(k);
    for r in 1..k {
        let rem = (h as u128 * r as u128 % k as u128) as u64;
        acc += BigInt::from(r) * (BigInt::from(2 * rem) - &kk);
    }
    BigRational::new(acc, BigInt::from(2) * &kk * &kk)
}

/// The multiplier `ω(h, k)` for `k >= 1`, `0 <= h <= k`, `gcd(h, k) = 1`.
pub fn omega(h: u64, k: u64) -> Result<RootOfUnity, AsymptoticsError> {
    if k == 0 || h > k || h.gcd(&k) != 1 {
        return Err(AsymptoticsError::InvalidArgument(format!(
            "omega needs k >= 1, 0 <= h <= k, gcd(h, k) = 1; got h = {h}, k = {k}"
        )));
    }
    Ok(RootOfUnity::new(sawtooth_sum(h, k)))
}

/// The summand multiplier `ω(h,k)² / ω(2h,k) · e^{-2πinh/k}` as a root of unity.
pub fn series_multiplier(n: u64, h: u64, k: u64) -> Result<RootOfUnity, AsymptoticsError> {
    let w = omega(h, k)?;
    let w2 = omega((2 * h) % k, k)?;
    let twist = RootOfUnity::new(BigRational::new(BigInt::from(-2) * BigInt::from(n) * BigInt::from(h), BigInt::from(k)));
    Ok(w.pow(2).div(&w2).mul(&twist))
}

/// Truncation parameters: `n`, the odd-term cutoff `N`, working precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesParams {
    pub n: u64,
    pub cutoff: u64,
    pub precision_bits: u32,
}

impl SeriesParams {
    pub fn new(n: u64, cutoff: u64, precision_bits: u32) -> Result<Self, AsymptoticsError> {
        if n < 1 || cutoff < 1 || precision_bits == 0 {
            return Err(AsymptoticsError::InvalidArgument(format!(
                "series needs n >= 1, N >= 1 and positive precision; got n = {n}, N = {cutoff}, bits = {precision_bits}"
            )));
        }
        Ok(SeriesParams {
            n,
            cutoff,
            precision_bits,
        })
    }
}

/// `d/dn (sinh(π√n/k)/√n) = (π/(2kn)) cosh(μ/k) - sinh(μ/k) / (2 n^{3/2})`.
pub fn series_term_derivative(n: u64, k: u64, prec: u32) -> Result<CertifiedInterval, AsymptoticsError> {
    if n < 1 || k < 1 {
        return Err(AsymptoticsError::InvalidArgument(format!("derivative needs n, k >= 1; got {n}, {k}")));
    }
    let wp = prec + 16;
    let nn = CertifiedInterval::from_int(n, wp);
    let arg = mu(n, wp).div_int(k);
    let first = (&pi(wp) * &arg.cosh()?).div_int(BigInt::from(2 * k) * BigInt::from(n));
    let n32 = &nn * &nn.sqrt()?;
    let second = arg.sinh()?.div_interval(&n32.scale_int(2))?;
    Ok((&first - &second).with_precision(prec))
}

/// Real and imaginary parts of `Σ_{h mod k, (h,k)=1} ω(h,k)²/ω(2h,k) e^{-2πinh/k}`.
///
/// Equal multipliers are grouped first so each distinct exponent costs one
/// cosine/sine evaluation.
pub fn multiplier_sum(n: u64, k: u64, prec: u32) -> Result<(CertifiedInterval, CertifiedInterval), AsymptoticsError> {
    let mut counts: BTreeMap<RootOfUnity, u64> = BTreeMap::new();
    for h in 0..k {
        if h.gcd(&k) != 1 {
            continue;
        }
        *counts.entry(series_multiplier(n, h, k)?).or_default() += 1;
    }
    let mut re = CertifiedInterval::from_int(0, prec);
    let mut im = CertifiedInterval::from_int(0, prec);
    for (root, count) in counts {
        let (c, s) = root.cos_sin(prec);
        re = &re + &c.scale_int(count);
        im = &im + &s.scale_int(count);
    }
    Ok((re, im))
}

/// The series truncated to odd `k <= N`.
///
/// Each multiplier sum's imaginary part must be certified zero to within
/// `2^{-bits/2}`; otherwise the result is rejected.
pub fn rademacher_truncation(params: SeriesParams) -> Result<CertifiedInterval, AsymptoticsError> {
    let SeriesParams {
        n,
        cutoff,
        precision_bits: prec,
    } = params;
    let wp = prec + 16;
    let two_pi = pi(wp).mul_pow2(1);
    let imag_tol = Dyadic::one().mul_pow2(-((prec / 2) as i64));
    let mut total = CertifiedInterval::from_int(0, wp);
    for k in (1..=cutoff).step_by(2) {
        let (re, im) = multiplier_sum(n, k, wp)?;
        if !im.contains_zero() || im.width() >= imag_tol {
            return Err(AsymptoticsError::NotReal {
                k,
                imag: im.to_string(),
            });
        }
        if re.is_point() && re.lo().is_zero() {
            continue;
        }
        let scale = CertifiedInterval::from_int(k, wp).sqrt()?.div_interval(&two_pi)?;
        let term = &(&scale * &re) * &series_term_derivative(n, k, wp)?;
        total = &total + &term;
    }
    Ok(total.with_precision(prec))
}

/// Closed form of the `k = 1` term: `(1/8n)[(1+1/μ)e^{-μ} + (1-1/μ)e^{μ}]`.
pub fn main_term_n3(n: u64, prec: u32) -> Result<CertifiedInterval, AsymptoticsError> {
    if n < 1 {
        return Err(AsymptoticsError::InvalidArgument("main term needs n >= 1".into()));
    }
    let wp = prec + 16;
    let m = mu(n, wp);
    let inv = m.recip()?;
    let one = CertifiedInterval::from_int(1, wp);
    let e = m.exp()?;
    let small = &(&one + &inv) * &e.recip()?;
    let large = &(&one - &inv) * &e;
    Ok((&small + &large).div_int(8 * n).with_precision(prec))
}

/// Upper bound on `|R₂(n, N)|`: `N^{5/2}/(nμ) sinh(μ/N)`, or with
/// `sinh(μ/N) - μ/N` when `tightened`.
pub fn bound_r2(n: u64, cutoff: u64, tightened: bool, prec: u32) -> Result<CertifiedInterval, AsymptoticsError> {
    if n < 1 || cutoff < 1 {
        return Err(AsymptoticsError::InvalidArgument(format!("R2 bound needs n, N >= 1; got {n}, {cutoff}")));
    }
    let wp = prec + 16;
    let m = mu(n, wp);
    let nn = CertifiedInterval::from_int(cutoff, wp);
    let n52 = &nn.sqr() * &nn.sqrt()?;
    let arg = m.div_int(cutoff);
    let s = if tightened { arg.sinh_minus_identity()? } else { arg.sinh()? };
    let denom = m.scale_int(n);
    Ok((&n52 * &s).div_interval(&denom)?.with_precision(prec))
}

/// Decomposition `p̄(n) = α(n)e^μ + E(n)`: returns `α(n) = (1/8n)(1 - 1/μ)`
/// and the bound `5e^{μ/3} / (2n^{3/2})` on `|E(n)|`.
pub fn exp_decomposition(n: u64, prec: u32) -> Result<(CertifiedInterval, CertifiedInterval), AsymptoticsError> {
    if n < 1 {
        return Err(AsymptoticsError::InvalidArgument("decomposition needs n >= 1".into()));
    }
    let wp = prec + 16;
    let m = mu(n, wp);
    let one = CertifiedInterval::from_int(1, wp);
    let alpha = (&one - &m.recip()?).div_int(8 * n);
    let nn = CertifiedInterval::from_int(n, wp);
    let n32 = &nn * &nn.sqrt()?;
    let e_bound = m.div_int(3).exp()?.scale_int(5).div_interval(&n32.scale_int(2))?;
    Ok((alpha.with_precision(prec), e_bound.with_precision(prec)))
}

/// `e^{-μ}(1 + 1/μ)/(8n)`, the part of the main term the decomposition drops.
pub fn decomposition_tail(n: u64, prec: u32) -> Result<CertifiedInterval, AsymptoticsError> {
    if n < 1 {
        return Err(AsymptoticsError::InvalidArgument("tail needs n >= 1".into()));
    }
    let wp = prec + 16;
    let m = mu(n, wp);
    let one = CertifiedInterval::from_int(1, wp);
    let v = (&(&one + &m.recip()?) * &(-&m).exp()?).div_int(8 * n);
    Ok(v.with_precision(prec))
}

/// `e^{π√x/3} x^{-3/2} (5/2 - 3^{5/2}/(2π))` for real `x > 0`.
pub fn decomposition_comparison(x: &CertifiedInterval) -> Result<CertifiedInterval, AsymptoticsError> {
    let prec = x.precision_bits();
    let root = x.sqrt()?;
    let growth = (&pi(prec) * &root).div_int(3).exp()?;
    let x32 = x * &root;
    let three = CertifiedInterval::from_int(3, prec);
    let c = &CertifiedInterval::from_ratio(&5.into(), &2.into(), prec)
        - &(&three.sqr() * &three.sqrt()?).div_interval(&pi(prec).mul_pow2(1))?;
    Ok(&growth.div_interval(&x32)? * &c)
}

/// Elementary exponential bounds for `p̄(n)`.
#[derive(Debug, Clone)]
pub struct SimpleBounds {
    /// `(1/8n)(1 - 2/μ)e^μ`; a lower bound for `n >= 4`.
    pub lower: CertifiedInterval,
    /// `(1/8n)(1 + 1/μ)e^μ`.
    pub upper: CertifiedInterval,
    /// `e^μ/(8n) (1 + 1/n)`.
    pub upper_tight: CertifiedInterval,
    /// `e^μ/(8n) (1 - 1/√n)`.
    pub lower_sqrt: CertifiedInterval,
}

pub fn simple_bounds(n: u64, prec: u32) -> Result<SimpleBounds, AsymptoticsError> {
    if n < 1 {
        return Err(AsymptoticsError::InvalidArgument("bounds need n >= 1".into()));
    }
    let wp = prec + 16;
    let m = mu(n, wp);
    let base = m.exp()?.div_int(8 * n);
    let one = CertifiedInterval::from_int(1, wp);
    let inv_mu = m.recip()?;
    let nn = CertifiedInterval::from_int(n, wp);
    let f = |factor: CertifiedInterval| (&base * &factor).with_precision(prec);
    Ok(SimpleBounds {
        lower: f(&one - &inv_mu.scale_int(2)),
        upper: f(&one + &inv_mu),
        upper_tight: f(&one + &nn.recip()?),
        lower_sqrt: f(&one - &nn.sqrt()?.recip()?),
    })
}

/// `B₁, B₂ = e^μ/(8n) (1 - 1/μ ∓ 1/μ⁵)`.
pub fn b1_b2(n: u64, prec: u32) -> Result<(CertifiedInterval, CertifiedInterval), AsymptoticsError> {
    if n < 1 {
        return Err(AsymptoticsError::InvalidArgument("B1/B2 need n >= 1".into()));
    }
    let wp = prec + 16;
    let m = mu(n, wp);
    let base = m.exp()?.div_int(8 * n);
    let inv = m.recip()?;
    let core = &CertifiedInterval::from_int(1, wp) - &inv;
    let inv5 = inv.powi(5);
    let b1 = &base * &(&core - &inv5);
    let b2 = &base * &(&core + &inv5);
    Ok((b1.with_precision(prec), b2.with_precision(prec)))
}

/// Deviation `p̄(n) - value` as an enclosure.
pub fn deviation(exact: &BigInt, value: &CertifiedInterval) -> CertifiedInterval {
    &CertifiedInterval::from_int(exact.clone(), value.precision_bits().max(exact.bits() as u32 + 8)) - value
}

#[cfg(test)]
/// True when `BigRational` `q` is certified below the enclosure's lower end.
pub(crate) fn rational_below(q: &BigRational, iv: &CertifiedInterval) -> bool {
    iv.lo().cmp_rational(q) == std::cmp::Ordering::Greater
}
