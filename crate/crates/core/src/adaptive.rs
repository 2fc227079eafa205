//! Adaptive-precision sign decisions.

use crate::interval::{CertifiedInterval, IntervalError};

pub const START_BITS: u32 = 128;
pub const MAX_BITS: u32 = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
    /// The enclosure still contains zero at the precision cap.
    Undecided,
}

/// Outcome of [`certify_sign`]: the sign, the final enclosure and the
/// precision at which it was obtained.
#[derive(Debug, Clone)]
pub struct SignDecision {
    pub sign: Sign,
    pub enclosure: CertifiedInterval,
    pub precision_bits: u32,
}

/// Evaluate `eval` at `start_bits`, doubling up to `max_bits` until the
/// enclosure excludes zero. Successive enclosures are intersected.
pub fn certify_sign_with<F>(start_bits: u32, max_bits: u32, mut eval: F) -> Result<SignDecision, IntervalError>
where
    F: FnMut(u32) -> Result<CertifiedInterval, IntervalError>,
{
    let mut bits = start_bits.max(crate::interval::MIN_PRECISION);
    let mut current: Option<CertifiedInterval> = None;
    loop {
        let next = eval(bits)?;
        let enclosure = match &current {
            // Both enclose the same value; a disjoint pair would be a soundness bug.
            Some(prev) => next.intersect(prev).expect("disjoint enclosures of one value"),
            None => next,
        };
        let sign = if enclosure.is_positive() {
            Sign::Positive
        } else if enclosure.is_negative() {
            Sign::Negative
        } else {
            Sign::Undecided
        };
        if sign != Sign::Undecided || bits >= max_bits {
            return Ok(SignDecision {
                sign,
                enclosure,
                precision_bits: bits,
            });
        }
        current = Some(enclosure);
        bits = (bits * 2).min(max_bits);
    }
}

/// [`certify_sign_with`] between `start_bits` and [`MAX_BITS`].
pub fn certify_sign<F>(start_bits: u32, eval: F) -> Result<SignDecision, IntervalError>
where
    F: FnMut(u32) -> Result<CertifiedInterval, IntervalError>,
{
    certify_sign_with(start_bits, MAX_BITS.max(start_bits), eval)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::pi;
    use num_bigint::BigInt;

    #[test]
    fn resolves_small_gap_by_doubling() {
        // π - 3.14159265358979323846264338327950288 > 0 by about 4e-36.
        let approx: BigInt = "314159265358979323846264338327950288".parse().unwrap();
        let scale = num_traits::pow(BigInt::from(10), 35);
        let d = certify_sign(16, |bits| {
            Ok(&pi(bits) - &CertifiedInterval::from_ratio(&approx, &scale, bits))
        })
        .unwrap();
        assert_eq!(d.sign, Sign::Positive);
        assert!(d.precision_bits >= 128);
    }

    #[test]
    fn exact_zero_stays_undecided() {
        let d = certify_sign_with(32, 256, |bits| Ok(&pi(bits) - &pi(bits))).unwrap();
        assert_eq!(d.sign, Sign::Undecided);
        assert_eq!(d.precision_bits, 256);
    }
}
