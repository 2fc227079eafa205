//! The ratio `u_n = p̄(n-1)p̄(n+1)/p̄(n)²`, its explicit bounds, the Turán
//! quadratic and Jensen cubics.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::asymptotics::mu;
use crate::exact::{OverpartitionTable, TableError};
use crate::interval::{CertifiedInterval, IntervalError};

#[derive(Debug, Error)]
pub enum RatioError {
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

/// Exact `u_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioValue {
    pub n: u64,
    pub exact: BigRational,
}

impl RatioValue {
    pub fn to_interval(&self, prec: u32) -> CertifiedInterval {
        CertifiedInterval::from_rational(&self.exact, prec)
    }
}

/// `u_n` for `1 <= n <= max_n - 1`.
pub fn u_ratio(table: &OverpartitionTable, n: u64) -> Result<RatioValue, RatioError> {
    if n < 1 || n + 1 > table.max_n() {
        return Err(TableError::OutOfRange {
            n: n.saturating_add(1),
            max_n: table.max_n(),
        }
        .into());
    }
    let prev = table.get(n - 1)?;
    let cur = table.get(n)?;
    let next = table.get(n + 1)?;
    Ok(RatioValue {
        n,
        exact: BigRational::new(prev * next, cur * cur),
    })
}

/// `μ(n-1), μ(n), μ(n+1), μ(n+2)`.
#[derive(Debug, Clone)]
pub struct FourPointGrid {
    pub x: CertifiedInterval,
    pub y: CertifiedInterval,
    pub z: CertifiedInterval,
    pub w: CertifiedInterval,
}

impl FourPointGrid {
    pub fn new(n: u64, prec: u32) -> Result<Self, RatioError> {
        if n < 1 {
            return Err(RatioError::Domain("grid needs n >= 1".into()));
        }
        Ok(FourPointGrid {
            x: mu(n - 1, prec),
            y: mu(n, prec),
            z: mu(n + 1, prec),
            w: mu(n + 2, prec),
        })
    }

    pub fn is_ordered(&self) -> bool {
        self.x.certainly_lt(&self.y) && self.y.certainly_lt(&self.z) && self.z.certainly_lt(&self.w)
    }
}

// v⁵ - v⁴ + s
fn quintic(v: &CertifiedInterval, s: i64) -> CertifiedInterval {
    let v4 = v.powi(4);
    &(&(&v4 * v) - &v4) + &CertifiedInterval::from_int(s, v.precision_bits())
}

// e^{x-2y+z} y¹⁴ (x⁵-x⁴+s)(z⁵-z⁴+s) / (x⁷z⁷(y⁵-y⁴-s)²)
fn fg_shape(x: &CertifiedInterval, y: &CertifiedInterval, z: &CertifiedInterval, s: i64) -> Result<CertifiedInterval, RatioError> {
    let e = (&(x + z) - &y.scale_int(2)).exp()?;
    let num = &(&e * &y.powi(14)) * &(&quintic(x, s) * &quintic(z, s));
    let den = &(x * z).powi(7) * &quintic(y, -s).sqr();
    Ok(num.div_interval(&den)?)
}

fn check_n(n: u64, what: &str) -> Result<(), RatioError> {
    if n < 2 {
        return Err(RatioError::Domain(format!("{what} needs n >= 2, got {n}")));
    }
    Ok(())
}

/// Lower bound `f(n)` for `u_n` built from `μ(n-1), μ(n), μ(n+1)`.
pub fn f_bound(n: u64, prec: u32) -> Result<CertifiedInterval, RatioError> {
    check_n(n, "f")?;
    let g = FourPointGrid::new(n, prec + 32)?;
    Ok(fg_shape(&g.x, &g.y, &g.z, -1)?.with_precision(prec))
}

/// Upper bound `g(n)` for `u_n`.
pub fn g_bound(n: u64, prec: u32) -> Result<CertifiedInterval, RatioError> {
    check_n(n, "g")?;
    let g = FourPointGrid::new(n, prec + 32)?;
    Ok(fg_shape(&g.x, &g.y, &g.z, 1)?.with_precision(prec))
}

/// `1000/μ(n-1)⁵`, the slack term shared by the shifted comparisons.
pub fn slack_term(n: u64, prec: u32) -> Result<CertifiedInterval, RatioError> {
    check_n(n, "slack term")?;
    Ok(mu(n - 1, prec + 32).powi(5).recip()?.scale_int(1000).with_precision(prec))
}

fn require_unit_open(t: &CertifiedInterval, what: &str) -> Result<(), RatioError> {
    let one = CertifiedInterval::from_int(1, t.precision_bits());
    if !t.is_positive() || !t.certainly_lt(&one) {
        return Err(RatioError::Domain(format!("{what} needs 0 < t < 1, got {t}")));
    }
    Ok(())
}

fn sqrt_rational(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let rn = q.numer().sqrt();
    let rd = q.denom().sqrt();
    (&rn * &rn == *q.numer() && &rd * &rd == *q.denom()).then(|| BigRational::new(rn, rd))
}

/// `Q(t)` exactly, when `1 - t` is the square of a rational.
pub fn q_exact(t: &BigRational) -> Option<BigRational> {
    if !t.is_positive() || *t >= BigRational::one() {
        return None;
    }
    let r = sqrt_rational(&(BigRational::one() - t))?;
    let two = BigRational::from_integer(2.into());
    Some((BigRational::from_integer(3.into()) * t + &two * &r * &r * &r - &two) / (t * t))
}

/// The smaller root `P(t)` exactly, when `1 - t` is a rational square.
pub fn p_exact(t: &BigRational) -> Option<BigRational> {
    if !t.is_positive() || *t >= BigRational::one() {
        return None;
    }
    let r = sqrt_rational(&(BigRational::one() - t))?;
    let two = BigRational::from_integer(2.into());
    Some((BigRational::from_integer(3.into()) * t - &two * &r * &r * &r - &two) / (t * t))
}

// (3t + sign·2(1-t)^{3/2} - 2)/t² at an enclosure of t.
fn quad_root(t: &CertifiedInterval, sign: i64) -> Result<CertifiedInterval, RatioError> {
    let prec = t.precision_bits();
    let one = CertifiedInterval::from_int(1, prec);
    let s = &one - t;
    let s32 = &s * &s.sqrt()?;
    let num = &(&t.scale_int(3) + &s32.scale_int(2 * sign)) - &CertifiedInterval::from_int(2, prec);
    Ok(num.div_interval(&t.sqr())?)
}

fn point_at(d: &crate::interval::Dyadic, prec: u32) -> CertifiedInterval {
    CertifiedInterval::point(d.clone(), prec)
}

/// `Q(t) = (3t + 2(1-t)^{3/2} - 2)/t²` on `0 < t < 1`.
///
/// `Q` is increasing, so the enclosure is formed from the endpoint values.
pub fn q_func(t: &CertifiedInterval) -> Result<CertifiedInterval, RatioError> {
    require_unit_open(t, "Q")?;
    let prec = t.precision_bits();
    let wp = prec + 32;
    let at = |d: &crate::interval::Dyadic| -> Result<CertifiedInterval, RatioError> {
        let q = d.to_rational();
        match q_exact(&q) {
            Some(v) => Ok(CertifiedInterval::from_rational(&v, wp)),
            None => quad_root(&point_at(d, wp), 1),
        }
    };
    let lo = at(t.lo())?;
    if t.is_point() {
        return Ok(lo.with_precision(prec));
    }
    let hi = at(t.hi())?;
    Ok(CertifiedInterval::new(lo.lo().clone(), hi.hi().clone(), prec))
}

/// `ψ(t) = Q(t) - t`, decreasing on `0 < t < 1`.
pub fn psi_func(t: &CertifiedInterval) -> Result<CertifiedInterval, RatioError> {
    require_unit_open(t, "psi")?;
    let prec = t.precision_bits();
    let at = |d: &crate::interval::Dyadic| -> Result<CertifiedInterval, RatioError> {
        let p = point_at(d, prec + 32);
        Ok(&q_func(&p)? - &p)
    };
    let left = at(t.lo())?;
    if t.is_point() {
        return Ok(left.with_precision(prec));
    }
    let right = at(t.hi())?;
    Ok(CertifiedInterval::new(right.lo().clone(), left.hi().clone(), prec))
}

/// `F(t) = 4(1-u)(1-t) - (1-ut)²` in exact arithmetic.
pub fn turan_quadratic(u: &BigRational, t: &BigRational) -> BigRational {
    let one = BigRational::one();
    let a = BigRational::from_integer(4.into()) * (&one - u) * (&one - t);
    let b = &one - u * t;
    a - &b * &b
}

/// The higher-order Turán expression `4(1-u_n)(1-u_{n+1}) - (1-u_n u_{n+1})²`.
pub fn turan_expression(u: &RatioValue, v: &RatioValue) -> BigRational {
    turan_quadratic(&u.exact, &v.exact)
}

/// Roots `(P(u), Q(u))` of `t ↦ F(t)` for `0 < u < 1`.
pub fn turan_quadratic_roots(u: &RatioValue, prec: u32) -> Result<(CertifiedInterval, CertifiedInterval), RatioError> {
    if !u.exact.is_positive() || u.exact >= BigRational::one() {
        return Err(RatioError::Domain(format!(
            "Turán quadratic roots need 0 < u < 1, got u_{} = {}",
            u.n, u.exact
        )));
    }
    let wp = prec + 32;
    if let (Some(p), Some(q)) = (p_exact(&u.exact), q_exact(&u.exact)) {
        return Ok((CertifiedInterval::from_rational(&p, prec), CertifiedInterval::from_rational(&q, prec)));
    }
    let t = u.to_interval(wp);
    Ok((quad_root(&t, -1)?.with_precision(prec), quad_root(&t, 1)?.with_precision(prec)))
}

const FACTORIALS: [u64; 8] = [1, 1, 2, 6, 24, 120, 720, 5040];

fn taylor_exact(t: &BigRational, degree: usize) -> BigRational {
    let mut acc = BigRational::zero();
    for j in (0..=degree).rev() {
        acc = acc * t + BigRational::new(BigInt::one(), BigInt::from(FACTORIALS[j]));
    }
    acc
}

fn taylor_interval(t: &CertifiedInterval, degree: usize) -> CertifiedInterval {
    let prec = t.precision_bits();
    let mut acc = CertifiedInterval::from_int(0, prec);
    for j in (0..=degree).rev() {
        acc = &(&acc * t) + &CertifiedInterval::from_ratio(&BigInt::one(), &BigInt::from(FACTORIALS[j]), prec);
    }
    acc
}

fn require_negative(t: &CertifiedInterval, what: &str) -> Result<(), RatioError> {
    if !t.is_negative() {
        return Err(RatioError::Domain(format!("{what} bounds e^t only for t < 0, got {t}")));
    }
    Ok(())
}

/// `Φ(t) = Σ_{j<=6} t^j/j!`, which dominates `e^t` for `t < 0`.
pub fn trunc_exp_upper(t: &CertifiedInterval) -> Result<CertifiedInterval, RatioError> {
    require_negative(t, "Phi")?;
    Ok(taylor_interval(t, 6))
}

/// `φ(t) = Σ_{j<=7} t^j/j!`, which is dominated by `e^t` for `t < 0`.
pub fn trunc_exp_lower(t: &CertifiedInterval) -> Result<CertifiedInterval, RatioError> {
    require_negative(t, "phi")?;
    Ok(taylor_interval(t, 7))
}

pub fn trunc_exp_upper_exact(t: &BigRational) -> BigRational {
    taylor_exact(t, 6)
}

pub fn trunc_exp_lower_exact(t: &BigRational) -> BigRational {
    taylor_exact(t, 7)
}

/// Coefficients of `J^{3,n}(x) = Σ_j C(3,j) p̄(n+j) x^j` and its discriminant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JensenCubic {
    pub n: u64,
    /// Constant term first.
    pub coeffs: [BigInt; 4],
    pub discriminant: BigInt,
}

impl JensenCubic {
    /// All roots real.
    pub fn is_hyperbolic(&self) -> bool {
        !self.discriminant.is_negative()
    }
}

/// `18abcd - 4b³d + b²c² - 4ac³ - 27a²d²` for `ax³ + bx² + cx + d`.
pub fn cubic_discriminant(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> BigInt {
    BigInt::from(18) * a * b * c * d - BigInt::from(4) * b * b * b * d + b * b * c * c
        - BigInt::from(4) * a * c * c * c
        - BigInt::from(27) * a * a * d * d
}

pub fn jensen_cubic(table: &OverpartitionTable, n: u64) -> Result<JensenCubic, RatioError> {
    if n + 3 > table.max_n() {
        return Err(TableError::OutOfRange {
            n: n + 3,
            max_n: table.max_n(),
        }
        .into());
    }
    let c0 = table.get(n)?.clone();
    let c1 = table.get(n + 1)? * 3;
    let c2 = table.get(n + 2)? * 3;
    let c3 = table.get(n + 3)?.clone();
    let discriminant = cubic_discriminant(&c3, &c2, &c1, &c0);
    Ok(JensenCubic {
        n,
        coeffs: [c0, c1, c2, c3],
        discriminant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::build_table;
    use crate::interval::Dyadic;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn dy(n: i64, d_log2: i64) -> CertifiedInterval {
        CertifiedInterval::point(Dyadic::new(n.into(), -d_log2), 128)
    }

    #[test]
    fn u_small_values() {
        let t = build_table(10).unwrap();
        assert_eq!(u_ratio(&t, 2).unwrap().exact, q(1, 1));
        assert_eq!(u_ratio(&t, 3).unwrap().exact, q(7, 8));
        assert_eq!(u_ratio(&t, 4).unwrap().exact, q(48, 49));
        assert!(u_ratio(&t, 10).is_err());
        assert!(u_ratio(&t, 0).is_err());
    }

    #[test]
    fn grid_is_ordered() {
        for n in [1u64, 2, 55, 5000] {
            assert!(FourPointGrid::new(n, 128).unwrap().is_ordered());
        }
    }

    #[test]
    fn fg_sandwich_samples() {
        let t = build_table(2001).unwrap();
        for n in [55u64, 100, 2000] {
            let u = u_ratio(&t, n).unwrap().to_interval(256);
            assert!(f_bound(n, 256).unwrap().certainly_lt(&u), "f at {n}");
            assert!(u.certainly_lt(&g_bound(n, 256).unwrap()), "g at {n}");
        }
    }

    #[test]
    fn f_below_g() {
        for n in (2..=5614).step_by(97) {
            assert!(f_bound(n, 128).unwrap().certainly_lt(&g_bound(n, 128).unwrap()));
        }
        assert!(f_bound(1, 64).is_err());
    }

    #[test]
    fn q_and_psi_at_three_quarters() {
        assert_eq!(q_exact(&q(3, 4)), Some(q(8, 9)));
        assert_eq!(p_exact(&q(3, 4)), Some(q(0, 1)));
        let t = dy(3, 2);
        assert!(q_func(&t).unwrap().contains_rational(&q(8, 9)));
        assert!(psi_func(&t).unwrap().contains_rational(&q(5, 36)));
        assert_eq!(q_exact(&q(1, 2)), None);
    }

    #[test]
    fn q_near_one() {
        let t = CertifiedInterval::new(Dyadic::one().sub(&Dyadic::one().mul_pow2(-40)), Dyadic::one().sub(&Dyadic::one().mul_pow2(-41)), 128);
        let v = q_func(&t).unwrap();
        assert!(v.hi() <= &Dyadic::one().add(&t.width()));
        assert!(v.lo().to_f64() > 0.999);
    }

    #[test]
    fn q_domain() {
        assert!(q_func(&dy(0, 0)).is_err());
        assert!(q_func(&dy(1, 0)).is_err());
        assert!(psi_func(&dy(3, 1)).is_err());
    }

    #[test]
    fn q_psi_monotone_on_grid() {
        let mut prev: Option<(CertifiedInterval, CertifiedInterval)> = None;
        for i in 1..1000i64 {
            let t = CertifiedInterval::from_ratio(&i.into(), &1000.into(), 128);
            let cur = (q_func(&t).unwrap(), psi_func(&t).unwrap());
            if let Some((pq, pp)) = &prev {
                assert!(pq.certainly_lt(&cur.0), "Q at {i}");
                assert!(cur.1.certainly_lt(pp), "psi at {i}");
            }
            prev = Some(cur);
        }
    }

    #[test]
    fn psi_above_three_halves_power() {
        // On ((√5-1)/2, 1) the difference ψ(t) - (1-t)^{3/2} is positive.
        let one = CertifiedInterval::from_int(1, 128);
        for i in 1..100i64 {
            let t = CertifiedInterval::from_ratio(&(620 + i * 379 / 100).into(), &1000.into(), 128);
            let s = &one - &t;
            let s32 = &s * &s.sqrt().unwrap();
            assert!(s32.certainly_lt(&psi_func(&t).unwrap()), "t = {t}");
        }
        // Just below the golden-ratio conjugate the order reverses.
        let t = CertifiedInterval::from_ratio(&61.into(), &100.into(), 128);
        let s = &one - &t;
        assert!(psi_func(&t).unwrap().certainly_lt(&(&s * &s.sqrt().unwrap())));
    }

    #[test]
    fn truncated_exponentials_at_minus_one() {
        assert_eq!(trunc_exp_upper_exact(&q(-1, 1)), q(53, 144));
        assert_eq!(trunc_exp_lower_exact(&q(-1, 1)), q(103, 280));
        let t = CertifiedInterval::from_int(-1, 128);
        let e = t.exp().unwrap();
        assert!(e.certainly_lt(&trunc_exp_upper(&t).unwrap()));
        assert!(trunc_exp_lower(&t).unwrap().certainly_lt(&e));
        assert!(trunc_exp_upper(&CertifiedInterval::from_int(0, 64)).is_err());
        let tiny = CertifiedInterval::point(Dyadic::one().mul_pow2(-30).neg(), 128);
        assert!((trunc_exp_upper(&tiny).unwrap().to_f64() - 1.0).abs() < 1e-8);
        assert!((trunc_exp_lower(&tiny).unwrap().to_f64() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn turan_roots() {
        let r = RatioValue { n: 0, exact: q(3, 4) };
        let (p, qq) = turan_quadratic_roots(&r, 128).unwrap();
        assert!(p.contains_rational(&q(0, 1)) && qq.contains_rational(&q(8, 9)));
        let one = RatioValue { n: 2, exact: q(1, 1) };
        assert!(turan_quadratic_roots(&one, 128).is_err());
        for i in 1..50i64 {
            let u = q(500 + i * 10, 1000);
            let r = RatioValue { n: 0, exact: u.clone() };
            let (p, qq) = turan_quadratic_roots(&r, 128).unwrap();
            let ui = r.to_interval(128);
            assert!(p.certainly_lt(&ui) && p.certainly_lt(&qq));
            let mid = (&p + &qq).div_int(2).midpoint().to_rational();
            assert!(turan_quadratic(&u, &mid).is_positive());
        }
    }

    #[test]
    fn jensen_small() {
        let t = build_table(30).unwrap();
        let j = jensen_cubic(&t, 1).unwrap();
        assert_eq!(j.coeffs, [2, 12, 24, 14].map(BigInt::from));
        assert!(jensen_cubic(&t, 16).unwrap().is_hyperbolic());
        assert!(jensen_cubic(&t, 28).is_err());
        let (a, b, c, d) = (BigInt::from(1), BigInt::from(-6), BigInt::from(11), BigInt::from(-6));
        // (x-1)(x-2)(x-3): discriminant 4
        assert_eq!(cubic_discriminant(&a, &b, &c, &d), BigInt::from(4));
        assert_eq!(cubic_discriminant(&d, &c, &b, &a), BigInt::from(4));
    }

    proptest! {
        #[test]
        fn quadratic_vanishes_at_exact_roots(a in 1u64..60, b in 1u64..60) {
            prop_assume!(a < b);
            // u = 1 - (a/b)², then 1 - u is a rational square.
            let u = BigRational::one() - q((a * a) as i64, (b * b) as i64);
            let qv = q_exact(&u).unwrap();
            let pv = p_exact(&u).unwrap();
            prop_assert!(turan_quadratic(&u, &qv).is_zero());
            prop_assert!(turan_quadratic(&u, &pv).is_zero());
            prop_assert!(pv < qv);
        }

        #[test]
        fn q_interval_matches_exact(a in 1u64..200, b in 1u64..200) {
            prop_assume!(a < b);
            let u = BigRational::one() - q((a * a) as i64, (b * b) as i64);
            let t = CertifiedInterval::from_rational(&u, 128);
            prop_assert!(q_func(&t).unwrap().contains_rational(&q_exact(&u).unwrap()));
            prop_assert!(quad_root(&t, 1).unwrap().contains_rational(&q_exact(&u).unwrap()));
        }
    }
}
