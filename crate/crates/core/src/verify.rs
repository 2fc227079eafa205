//! Finite-range verification of inequalities for `p̄(n)`.
//!
//! Every check reduces to the sign of a gap that is positive exactly when the
//! inequality holds. Exact checks compute the gap as a rational number; interval
//! checks enclose it and raise precision until the sign is certified.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::adaptive::{certify_sign_with, Sign, MAX_BITS};
use crate::asymptotics::{self, AsymptoticsError, SeriesParams};
use crate::exact::{OverpartitionTable, TableError};
use crate::interval::{pi, CertifiedInterval, Dyadic, IntervalError, Round};
use crate::ratio::{self, RatioError};

/// Contiguous block of indices handed to one worker.
pub const BLOCK_SIZE: u64 = 256;

pub const DEFAULT_PRECISION_BITS: u32 = 128;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error("invalid spec for {check}: {reason}")]
    InvalidSpec { check: CheckId, reason: String },
    #[error("{check} up to n = {to} needs p̄ up to {need}, table stops at {max_n}")]
    TableTooSmall { check: CheckId, to: u64, need: u64, max_n: u64 },
    #[error("bracket failure for a = {a}: {reason}")]
    Bracket { a: u64, reason: String },
    #[error("{check} at {index}: {source}")]
    Evaluation {
        check: CheckId,
        index: Index,
        #[source]
        source: Box<dyn std::error::Error + Send + Sync>,
    },
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error("thread pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckId {
    /// `p̄(n)² - p̄(n-1)p̄(n+1)`.
    LogConcavity,
    /// `p̄(n)² - p̄(n-m)p̄(n+m)` over `n > m >= 1`.
    StrongLogConcavity,
    /// As above with `m >= 2`.
    StrongLogConcavityM2,
    /// `p̄(a)p̄(b) - p̄(a+b)` over `2 <= a <= b`.
    Multiplicative,
    /// `p̄(n-1)p̄(n+1)(4n^{3/2} + π) - 4n^{3/2}p̄(n)²`.
    Delta2Log,
    /// `4(1-u_n)(1-u_{n+1}) - (1-u_n u_{n+1})²`, in integer-cleared form.
    HigherTuran,
    /// Discriminant of `J^{3,n-1}`.
    Jensen,
    /// `min(u_n - f(n), g(n) - u_n)`.
    FgSandwich,
    /// `f(n) + 1000/μ(n-1)⁵ - g(n+1)`.
    GVsFShift,
    /// `Q(u_n) - f(n) - 1000/μ(n-1)⁵`.
    FVsQ,
    /// `u_{n+1} - u_n`.
    UMonotone,
    /// `min(p̄(n) - B₁(n), B₂(n) - p̄(n))`.
    B1B2,
    /// `hi(R₂ bound) + width(T) - |p̄(n) - mid(T)|` for the `N = 3` truncation `T`.
    RademacherBound,
    /// `1/2 - |p̄(n) - T|` for the `N = 3` truncation `T`.
    RademacherNearest,
    /// `5e^{μ/3}/(2n^{3/2}) - |p̄(n) - α(n)e^μ|`.
    ExpDecomposition,
    /// Smallest gap among the four elementary exponential bounds.
    ExpBounds,
}

pub const ALL_CHECKS: [CheckId; 16] = [
    CheckId::LogConcavity,
    CheckId::StrongLogConcavity,
    CheckId::StrongLogConcavityM2,
    CheckId::Multiplicative,
    CheckId::Delta2Log,
    CheckId::HigherTuran,
    CheckId::Jensen,
    CheckId::FgSandwich,
    CheckId::GVsFShift,
    CheckId::FVsQ,
    CheckId::UMonotone,
    CheckId::B1B2,
    CheckId::RademacherBound,
    CheckId::RademacherNearest,
    CheckId::ExpDecomposition,
    CheckId::ExpBounds,
];

impl CheckId {
    pub fn name(self) -> &'static str {
        match self {
            CheckId::LogConcavity => "log-concavity",
            CheckId::StrongLogConcavity => "strong-log-concavity",
            CheckId::StrongLogConcavityM2 => "strong-log-concavity-m2",
            CheckId::Multiplicative => "multiplicative",
            CheckId::Delta2Log => "delta2-log",
            CheckId::HigherTuran => "higher-turan",
            CheckId::Jensen => "jensen",
            CheckId::FgSandwich => "fg-sandwich",
            CheckId::GVsFShift => "g-vs-f-shift",
            CheckId::FVsQ => "f-vs-q",
            CheckId::UMonotone => "u-monotone",
            CheckId::B1B2 => "b1-b2",
            CheckId::RademacherBound => "rademacher-bound",
            CheckId::RademacherNearest => "rademacher-nearest",
            CheckId::ExpDecomposition => "exp-decomposition",
            CheckId::ExpBounds => "exp-bounds",
        }
    }

    /// Whether the gap is a rational function of table values.
    pub fn is_exact(self) -> bool {
        matches!(
            self,
            CheckId::LogConcavity
                | CheckId::StrongLogConcavity
                | CheckId::StrongLogConcavityM2
                | CheckId::Multiplicative
                | CheckId::HigherTuran
                | CheckId::Jensen
                | CheckId::UMonotone
        )
    }

    pub fn natural_mode(self) -> Mode {
        if self.is_exact() {
            Mode::Exact
        } else {
            Mode::Interval
        }
    }

    /// Smallest admissible `n`.
    pub fn min_n(self) -> u64 {
        match self {
            CheckId::StrongLogConcavity | CheckId::Multiplicative | CheckId::FgSandwich | CheckId::GVsFShift => 2,
            CheckId::StrongLogConcavityM2 | CheckId::FVsQ => 3,
            _ => 1,
        }
    }

    /// Largest table index read when checking up to `to`; `None` if no table is needed.
    pub fn table_extent(self, to: u64) -> Option<u64> {
        match self {
            CheckId::GVsFShift => None,
            CheckId::StrongLogConcavity | CheckId::StrongLogConcavityM2 => Some(2 * to - 1),
            CheckId::Multiplicative => Some(2 * to),
            CheckId::HigherTuran | CheckId::Jensen | CheckId::UMonotone => Some(to + 2),
            CheckId::LogConcavity | CheckId::Delta2Log | CheckId::FgSandwich | CheckId::FVsQ => Some(to + 1),
            CheckId::B1B2
            | CheckId::RademacherBound
            | CheckId::RademacherNearest
            | CheckId::ExpDecomposition
            | CheckId::ExpBounds => Some(to),
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckId {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ALL_CHECKS
            .iter()
            .copied()
            .find(|c| c.name() == s)
            .ok_or_else(|| VerifyError::UnknownCheck(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Interval,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckSpec {
    pub check: CheckId,
    pub from_n: u64,
    pub to_n: u64,
    pub mode: Mode,
    /// Starting precision for interval mode.
    pub precision_bits: u32,
    /// Precision cap for interval mode.
    pub max_precision_bits: u32,
}

impl CheckSpec {
    pub fn new(check: CheckId, from_n: u64, to_n: u64) -> Self {
        CheckSpec {
            check,
            from_n,
            to_n,
            mode: check.natural_mode(),
            precision_bits: DEFAULT_PRECISION_BITS,
            max_precision_bits: MAX_BITS,
        }
    }

    pub fn with_precision(mut self, bits: u32) -> Self {
        self.precision_bits = bits;
        self.max_precision_bits = self.max_precision_bits.max(bits);
        self
    }

    pub fn with_max_precision(mut self, bits: u32) -> Self {
        self.max_precision_bits = bits;
        self.precision_bits = self.precision_bits.min(bits);
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<(), VerifyError> {
        let bad = |reason: String| VerifyError::InvalidSpec {
            check: self.check,
            reason,
        };
        if self.from_n > self.to_n {
            return Err(bad(format!("from {} > to {}", self.from_n, self.to_n)));
        }
        if self.from_n < self.check.min_n() {
            return Err(bad(format!("needs n >= {}, got {}", self.check.min_n(), self.from_n)));
        }
        if self.mode == Mode::Exact && !self.check.is_exact() {
            return Err(bad("gap involves irrational quantities; exact mode is unavailable".into()));
        }
        if self.precision_bits == 0 || self.precision_bits > self.max_precision_bits {
            return Err(bad(format!(
                "precision {} outside 1..={}",
                self.precision_bits, self.max_precision_bits
            )));
        }
        Ok(())
    }

    pub fn table_extent(&self) -> Option<u64> {
        self.check.table_extent(self.to_n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Index {
    Single(u64),
    /// `(n, m)` for strong log-concavity, `(a, b)` for multiplicativity.
    Pair(u64, u64),
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Single(n) => write!(f, "n = {n}"),
            Index::Pair(a, b) => write!(f, "({a}, {b})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Holds,
    Equality,
    Fails,
    Undecided,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Equality => "equality",
            Verdict::Fails => "fails",
            Verdict::Undecided => "undecided",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "holds" => Ok(Verdict::Holds),
            "equality" => Ok(Verdict::Equality),
            "fails" => Ok(Verdict::Fails),
            "undecided" => Ok(Verdict::Undecided),
            _ => Err(format!("unknown verdict `{s}`")),
        }
    }
}

/// The gap behind a verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Margin {
    Exact(BigRational),
    Certified(CertifiedInterval),
}

impl Margin {
    /// Decimal rendering: the exact value, or a certified lower bound.
    pub fn render(&self) -> String {
        match self {
            Margin::Exact(q) => q.to_string(),
            Margin::Certified(iv) => iv.lo().to_sci(17, Round::Down),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub index: Index,
    pub verdict: Verdict,
    pub margin: Margin,
    /// Precision at which the verdict was reached; `None` in exact mode.
    pub precision_bits: Option<u32>,
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub spec: CheckSpec,
    pub entries: Vec<Entry>,
    pub counterexamples: Vec<Index>,
    pub wall_time: f64,
}

impl CheckResult {
    pub fn count(&self, verdict: Verdict) -> usize {
        self.entries.iter().filter(|e| e.verdict == verdict).count()
    }

    pub fn verdicts(&self) -> Vec<(Index, Verdict)> {
        self.entries.iter().map(|e| (e.index, e.verdict)).collect()
    }

    pub fn all_hold(&self) -> bool {
        self.entries.iter().all(|e| e.verdict == Verdict::Holds)
    }

    pub fn entry(&self, index: Index) -> Option<&Entry> {
        self.entries.iter().find(|e| e.index == index)
    }
}

fn exact_entry(index: Index, gap: BigRational) -> Entry {
    let verdict = if gap.is_positive() {
        Verdict::Holds
    } else if gap.is_zero() {
        Verdict::Equality
    } else {
        Verdict::Fails
    };
    Entry {
        index,
        verdict,
        margin: Margin::Exact(gap),
        precision_bits: None,
    }
}

fn int(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

/// Interval minimum, used for two-sided checks.
fn min_interval(a: &CertifiedInterval, b: &CertifiedInterval) -> CertifiedInterval {
    let lo = a.lo().min(b.lo()).clone();
    let hi = a.hi().min(b.hi()).clone();
    CertifiedInterval::new(lo, hi, a.precision_bits().max(b.precision_bits()))
}

fn boxed<E: std::error::Error + Send + Sync + 'static>(check: CheckId, index: Index) -> impl FnOnce(E) -> VerifyError {
    move |e| VerifyError::Evaluation {
        check,
        index,
        source: Box::new(e),
    }
}

/// The `4n^{3/2}`-scaled gap of the second-order log-difference inequality at `n`.
pub fn delta2_log_gap(prev: &BigInt, cur: &BigInt, next: &BigInt, n: u64, prec: u32) -> CertifiedInterval {
    let a = prev * next;
    let b = cur * cur;
    let nn = CertifiedInterval::from_int(n, prec);
    let n32 = (&nn * &nn.sqrt().expect("n >= 0")).scale_int(4);
    // 4n^{3/2}(A - B) + πA with A - B exact.
    &(&n32 * &CertifiedInterval::from_int(&a - &b, prec)) + &(&pi(prec) * &CertifiedInterval::from_int(a, prec))
}

/// Integer form `4(a_n² - a_{n-1}a_{n+1})(a_{n+1}² - a_n a_{n+2}) - (a_n a_{n+1} - a_{n-1}a_{n+2})²`.
pub fn higher_turan_integer(a0: &BigInt, a1: &BigInt, a2: &BigInt, a3: &BigInt) -> BigInt {
    let l1 = a1 * a1 - a0 * a2;
    let l2 = a2 * a2 - a1 * a3;
    let c = a1 * a2 - a0 * a3;
    BigInt::from(4) * l1 * l2 - &c * &c
}

struct Evaluator<'a> {
    spec: &'a CheckSpec,
    table: Option<&'a OverpartitionTable>,
}

impl Evaluator<'_> {
    fn p(&self, n: u64) -> &BigInt {
        // Extent was validated up front.
        self.table.expect("table present").get(n).expect("index validated")
    }

    fn exact_gap(&self, index: Index) -> Result<BigRational, VerifyError> {
        let check = self.spec.check;
        let err = |e: RatioError| boxed(check, index)(e);
        Ok(match (check, index) {
            (CheckId::LogConcavity, Index::Single(n)) => {
                int(&(self.p(n) * self.p(n) - self.p(n - 1) * self.p(n + 1)))
            }
            (CheckId::StrongLogConcavity | CheckId::StrongLogConcavityM2, Index::Pair(n, m)) => {
                int(&(self.p(n) * self.p(n) - self.p(n - m) * self.p(n + m)))
            }
            (CheckId::Multiplicative, Index::Pair(a, b)) => int(&(self.p(a) * self.p(b) - self.p(a + b))),
            (CheckId::HigherTuran, Index::Single(n)) => {
                let g = higher_turan_integer(self.p(n - 1), self.p(n), self.p(n + 1), self.p(n + 2));
                let table = self.table.expect("table present");
                let u = ratio::u_ratio(table, n).map_err(err)?;
                let v = ratio::u_ratio(table, n + 1).map_err(err)?;
                let t = ratio::turan_expression(&u, &v);
                assert_eq!(t.signum(), int(&g).signum(), "higher Turán forms disagree at n = {n}");
                int(&g)
            }
            (CheckId::Jensen, Index::Single(n)) => {
                let j = ratio::jensen_cubic(self.table.expect("table present"), n - 1).map_err(err)?;
                int(&j.discriminant)
            }
            (CheckId::UMonotone, Index::Single(n)) => {
                let table = self.table.expect("table present");
                let u = ratio::u_ratio(table, n).map_err(err)?;
                let v = ratio::u_ratio(table, n + 1).map_err(err)?;
                v.exact - u.exact
            }
            _ => unreachable!("{check} has no exact gap for {index}"),
        })
    }

    fn interval_gap(&self, index: Index, bits: u32) -> Result<CertifiedInterval, VerifyError> {
        let check = self.spec.check;
        let ratio_err = |e: RatioError| boxed(check, index)(e);
        let asym_err = |e: AsymptoticsError| boxed(check, index)(e);
        let Index::Single(n) = index else {
            return Ok(CertifiedInterval::from_rational(&self.exact_gap(index)?, bits));
        };
        let exact_p = |n: u64| CertifiedInterval::from_int(self.p(n).clone(), bits);
        Ok(match check {
            CheckId::Delta2Log => delta2_log_gap(self.p(n - 1), self.p(n), self.p(n + 1), n, bits),
            CheckId::FgSandwich => {
                let u = ratio::u_ratio(self.table.expect("table present"), n).map_err(ratio_err)?.to_interval(bits);
                let f = ratio::f_bound(n, bits).map_err(ratio_err)?;
                let g = ratio::g_bound(n, bits).map_err(ratio_err)?;
                min_interval(&(&u - &f), &(&g - &u))
            }
            CheckId::GVsFShift => {
                let f = ratio::f_bound(n, bits).map_err(ratio_err)?;
                let s = ratio::slack_term(n, bits).map_err(ratio_err)?;
                let g = ratio::g_bound(n + 1, bits).map_err(ratio_err)?;
                &(&f + &s) - &g
            }
            CheckId::FVsQ => {
                let u = ratio::u_ratio(self.table.expect("table present"), n).map_err(ratio_err)?.to_interval(bits);
                let q = ratio::q_func(&u).map_err(ratio_err)?;
                let f = ratio::f_bound(n, bits).map_err(ratio_err)?;
                let s = ratio::slack_term(n, bits).map_err(ratio_err)?;
                &(&q - &f) - &s
            }
            CheckId::B1B2 => {
                let (b1, b2) = asymptotics::b1_b2(n, bits).map_err(asym_err)?;
                let p = exact_p(n);
                min_interval(&(&p - &b1), &(&b2 - &p))
            }
            CheckId::RademacherBound => {
                let t = self.truncation(n, bits).map_err(asym_err)?;
                let bound = asymptotics::bound_r2(n, 3, false, bits).map_err(asym_err)?;
                let dev = Dyadic::from_int(self.p(n).clone()).sub(&t.midpoint()).abs();
                CertifiedInterval::point(bound.hi().add(&t.width()).sub(&dev), bits)
            }
            CheckId::RademacherNearest => {
                let t = self.truncation(n, bits).map_err(asym_err)?;
                let dev = asymptotics::deviation(self.p(n), &t).abs();
                &CertifiedInterval::point(Dyadic::one().mul_pow2(-1), bits) - &dev
            }
            CheckId::ExpDecomposition => {
                let (alpha, e_bound) = asymptotics::exp_decomposition(n, bits).map_err(asym_err)?;
                let approx = &alpha * &asymptotics::mu(n, bits + 16).exp()?;
                &e_bound - &(&exact_p(n) - &approx).abs()
            }
            CheckId::ExpBounds => {
                let b = asymptotics::simple_bounds(n, bits).map_err(asym_err)?;
                let p = exact_p(n);
                let lower = min_interval(&(&p - &b.lower), &(&p - &b.lower_sqrt));
                let upper = min_interval(&(&b.upper - &p), &(&b.upper_tight - &p));
                min_interval(&lower, &upper)
            }
            _ => CertifiedInterval::from_rational(&self.exact_gap(index)?, bits),
        })
    }

    fn truncation(&self, n: u64, bits: u32) -> Result<CertifiedInterval, AsymptoticsError> {
        asymptotics::rademacher_truncation(SeriesParams::new(n, 3, bits)?)
    }

    fn entry(&self, index: Index) -> Result<Entry, VerifyError> {
        if self.spec.mode == Mode::Exact {
            return Ok(exact_entry(index, self.exact_gap(index)?));
        }
        let mut failure: Option<VerifyError> = None;
        let decision = certify_sign_with(self.spec.precision_bits, self.spec.max_precision_bits, |bits| {
            match self.interval_gap(index, bits) {
                Ok(iv) => Ok(iv),
                Err(e) => {
                    failure = Some(e);
                    Err(IntervalError::Domain {
                        op: "gap",
                        interval: String::new(),
                    })
                }
            }
        });
        let decision = match (decision, failure) {
            (_, Some(e)) => return Err(e),
            (d, None) => d?,
        };
        let enclosure = decision.enclosure;
        let verdict = match decision.sign {
            Sign::Positive => Verdict::Holds,
            Sign::Negative => Verdict::Fails,
            Sign::Undecided if enclosure.is_point() && enclosure.lo().is_zero() => Verdict::Equality,
            Sign::Undecided => Verdict::Undecided,
        };
        Ok(Entry {
            index,
            verdict,
            margin: Margin::Certified(enclosure),
            precision_bits: Some(decision.precision_bits),
        })
    }

    fn indices(&self, outer: u64) -> Vec<Index> {
        match self.spec.check {
            CheckId::StrongLogConcavity => (1..outer).map(|m| Index::Pair(outer, m)).collect(),
            CheckId::StrongLogConcavityM2 => (2..outer).map(|m| Index::Pair(outer, m)).collect(),
            // Pairs (a, b) with 2 <= a <= b, grouped by b.
            CheckId::Multiplicative => (2..=outer).map(|a| Index::Pair(a, outer)).collect(),
            _ => vec![Index::Single(outer)],
        }
    }
}

fn check_table(spec: &CheckSpec, table: Option<&OverpartitionTable>) -> Result<(), VerifyError> {
    if let Some(need) = spec.table_extent() {
        let max_n = table.map_or(0, |t| t.max_n());
        if table.is_none() || need > max_n {
            return Err(VerifyError::TableTooSmall {
                check: spec.check,
                to: spec.to_n,
                need,
                max_n,
            });
        }
    }
    Ok(())
}

/// Largest table index needed by any spec.
pub fn required_table_max(specs: &[CheckSpec]) -> Option<u64> {
    specs.iter().filter_map(CheckSpec::table_extent).max()
}

fn run_one(spec: &CheckSpec, table: Option<&OverpartitionTable>) -> Result<CheckResult, VerifyError> {
    spec.validate()?;
    check_table(spec, table)?;
    let start = Instant::now();
    let ev = Evaluator { spec, table };
    let blocks: Vec<(u64, u64)> = (spec.from_n..=spec.to_n)
        .step_by(BLOCK_SIZE as usize)
        .map(|lo| (lo, (lo + BLOCK_SIZE - 1).min(spec.to_n)))
        .collect();
    let per_block: Vec<Vec<Entry>> = blocks
        .par_iter()
        .map(|&(lo, hi)| {
            let mut out = Vec::new();
            for outer in lo..=hi {
                for index in ev.indices(outer) {
                    out.push(ev.entry(index)?);
                }
            }
            Ok(out)
        })
        .collect::<Result<_, VerifyError>>()?;
    let entries: Vec<Entry> = per_block.into_iter().flatten().collect();
    let counterexamples = entries.iter().filter(|e| e.verdict == Verdict::Fails).map(|e| e.index).collect();
    Ok(CheckResult {
        spec: spec.clone(),
        entries,
        counterexamples,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Run `specs` in order on a pool of `workers` threads.
pub fn run_campaign(
    specs: &[CheckSpec],
    table: Option<&OverpartitionTable>,
    workers: usize,
) -> Result<Vec<CheckResult>, VerifyError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| VerifyError::Pool(e.to_string()))?;
    pool.install(|| specs.iter().map(|s| run_one(s, table)).collect())
}

/// A single check on the current rayon pool.
pub fn run_check(spec: &CheckSpec, table: Option<&OverpartitionTable>) -> Result<CheckResult, VerifyError> {
    run_one(spec, table)
}

pub fn check_log_concavity(table: &OverpartitionTable, from: u64, to: u64) -> Result<CheckResult, VerifyError> {
    run_check(&CheckSpec::new(CheckId::LogConcavity, from, to), Some(table))
}

/// `m_policy` is the smallest `m` considered: 1 or 2.
pub fn check_strong_log_concavity(
    table: &OverpartitionTable,
    from: u64,
    to: u64,
    m_policy: u64,
) -> Result<CheckResult, VerifyError> {
    let check = match m_policy {
        1 => CheckId::StrongLogConcavity,
        2 => CheckId::StrongLogConcavityM2,
        _ => {
            return Err(VerifyError::InvalidSpec {
                check: CheckId::StrongLogConcavity,
                reason: format!("m policy must be 1 or 2, got {m_policy}"),
            })
        }
    };
    run_check(&CheckSpec::new(check, from.max(check.min_n()), to), Some(table))
}

/// All pairs `2 <= a <= b <= b_max`.
pub fn check_multiplicative(table: &OverpartitionTable, b_max: u64) -> Result<CheckResult, VerifyError> {
    run_check(&CheckSpec::new(CheckId::Multiplicative, 2, b_max), Some(table))
}

pub fn check_delta2_log(table: &OverpartitionTable, from: u64, to: u64) -> Result<CheckResult, VerifyError> {
    run_check(&CheckSpec::new(CheckId::Delta2Log, from, to), Some(table))
}

pub fn check_higher_turan(table: &OverpartitionTable, from: u64, to: u64) -> Result<CheckResult, VerifyError> {
    run_check(&CheckSpec::new(CheckId::HigherTuran, from, to), Some(table))
}

pub fn check_fg_sandwich(table: &OverpartitionTable, from: u64, to: u64, bits: u32) -> Result<CheckResult, VerifyError> {
    run_check(&CheckSpec::new(CheckId::FgSandwich, from, to).with_precision(bits), Some(table))
}

pub fn check_g_vs_f_shift(from: u64, to: u64, bits: u32) -> Result<CheckResult, VerifyError> {
    run_check(&CheckSpec::new(CheckId::GVsFShift, from, to).with_precision(bits), None)
}

pub fn check_f_vs_q(table: &OverpartitionTable, from: u64, to: u64, bits: u32) -> Result<CheckResult, VerifyError> {
    run_check(&CheckSpec::new(CheckId::FVsQ, from, to).with_precision(bits), Some(table))
}

/// Named campaign suites.
pub fn suite(name: &str) -> Option<Vec<CheckSpec>> {
    let desk = |f_vs_q_to: u64| {
        vec![
            CheckSpec::new(CheckId::LogConcavity, 2, 5000),
            CheckSpec::new(CheckId::StrongLogConcavity, 2, 300),
            CheckSpec::new(CheckId::StrongLogConcavityM2, 3, 300),
            CheckSpec::new(CheckId::Multiplicative, 2, 300),
            CheckSpec::new(CheckId::Delta2Log, 2, 5000),
            CheckSpec::new(CheckId::HigherTuran, 2, 5000),
            CheckSpec::new(CheckId::Jensen, 2, 5000),
            CheckSpec::new(CheckId::UMonotone, 2, 5000),
            CheckSpec::new(CheckId::FgSandwich, 55, 2000),
            CheckSpec::new(CheckId::B1B2, 55, 2000),
            CheckSpec::new(CheckId::GVsFShift, 2, 5614),
            CheckSpec::new(CheckId::FVsQ, 92, f_vs_q_to),
            CheckSpec::new(CheckId::ExpBounds, 1, 2000),
            CheckSpec::new(CheckId::ExpDecomposition, 1, 2000),
            CheckSpec::new(CheckId::RademacherBound, 1, 2000).with_precision(256).with_max_precision(256),
            CheckSpec::new(CheckId::RademacherNearest, 50, 2000).with_precision(256),
        ]
    };
    match name {
        "paper-desk" => Some(desk(5000)),
        "paper-full" => Some(desk(30984)),
        _ => None,
    }
}

pub const SUITES: [&str; 2] = ["paper-desk", "paper-full"];

/// `λ_a` for `a = 2..=5`.
#[derive(Debug, Clone)]
pub struct LambdaTable {
    pub entries: BTreeMap<u64, CertifiedInterval>,
}

/// Width target for each `λ_a` enclosure, `2^{-24}`.
const LAMBDA_WIDTH_LOG2: i64 = -24;
const LAMBDA_BITS: u32 = 128;

/// `T_a(λ) - log(4a) - log S_a(λ)`, increasing in `λ >= 1`.
pub fn lambda_difference(a: u64, lambda: &CertifiedInterval) -> Result<CertifiedInterval, IntervalError> {
    let prec = lambda.precision_bits();
    let one = CertifiedInterval::from_int(1, prec);
    let aa = CertifiedInterval::from_int(a, prec);
    let la = &aa * lambda;
    let sum = &aa + &la;
    let (ra, rla) = (aa.sqrt()?, la.sqrt()?);
    let t = &pi(prec) * &(&(&ra + &rla) - &sum.sqrt()?);
    let s_num = &one + &sum.recip()?;
    let s_den = &(&one - &ra.recip()?) * &(&one - &rla.recip()?);
    let s = s_num.div_interval(&s_den)?;
    Ok(&(&t - &aa.scale_int(4).ln()?) - &s.ln()?)
}

fn lambda_sign(a: u64, lambda: &Dyadic) -> Result<Sign, IntervalError> {
    let d = crate::adaptive::certify_sign(LAMBDA_BITS, |bits| {
        lambda_difference(a, &CertifiedInterval::point(lambda.clone(), bits))
    })?;
    Ok(d.sign)
}

/// Root of [`lambda_difference`] for one `a`, by certified bisection on `[1, 16]`.
pub fn solve_lambda(a: u64) -> Result<CertifiedInterval, VerifyError> {
    let bracket = |reason: &str| VerifyError::Bracket {
        a,
        reason: reason.to_string(),
    };
    let mut lo = Dyadic::one();
    let mut hi = Dyadic::from_int(16);
    if lambda_sign(a, &lo)? != Sign::Negative {
        return Err(bracket("difference is not negative at λ = 1"));
    }
    if lambda_sign(a, &hi)? != Sign::Positive {
        return Err(bracket("difference is not positive at λ = 16"));
    }
    let target = Dyadic::one().mul_pow2(LAMBDA_WIDTH_LOG2);
    while hi.sub(&lo) > target {
        let mid = lo.add(&hi).mul_pow2(-1);
        match lambda_sign(a, &mid)? {
            Sign::Negative => lo = mid,
            Sign::Positive => hi = mid,
            Sign::Undecided => return Err(bracket("difference undecided at a bisection point")),
        }
    }
    Ok(CertifiedInterval::new(lo, hi, LAMBDA_BITS))
}

pub fn solve_lambda_a() -> Result<LambdaTable, VerifyError> {
    let entries = (2..=5u64)
        .map(|a| solve_lambda(a).map(|l| (a, l)))
        .collect::<Result<_, _>>()?;
    Ok(LambdaTable { entries })
}

/// True when the difference is already positive at `λ = 1`, so no root is needed.
pub fn lambda_needs_no_root(a: u64) -> Result<bool, IntervalError> {
    Ok(lambda_sign(a, &Dyadic::one())? == Sign::Positive)
}

/// The remaining pairs `(a, b)` with `2 <= a <= 5` and `a <= b <= ⌈λ_a a⌉ + 2`.
pub fn lambda_exceptional_pairs(lambdas: &LambdaTable) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for (&a, l) in &lambdas.entries {
        let top = l.hi().mul(&Dyadic::from_int(a)).to_integer(Round::Up);
        let top: u64 = u64::try_from(top).expect("small bound") + 2;
        out.extend((a..=top).map(|b| (a, b)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::build_table;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn names_round_trip() {
        for c in ALL_CHECKS {
            assert_eq!(c.name().parse::<CheckId>().unwrap(), c);
        }
        assert!("nope".parse::<CheckId>().is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(CheckSpec::new(CheckId::FgSandwich, 10, 5).validate().is_err());
        assert!(CheckSpec::new(CheckId::FgSandwich, 1, 5).validate().is_err());
        assert!(CheckSpec::new(CheckId::FgSandwich, 2, 5).with_mode(Mode::Exact).validate().is_err());
        assert!(CheckSpec::new(CheckId::LogConcavity, 1, 5).with_mode(Mode::Interval).validate().is_ok());
        let t = build_table(10).unwrap();
        assert!(matches!(
            check_log_concavity(&t, 2, 10),
            Err(VerifyError::TableTooSmall { need: 11, .. })
        ));
    }

    #[test]
    fn log_concavity_small() {
        let t = build_table(60).unwrap();
        let r = check_log_concavity(&t, 1, 50).unwrap();
        // p̄(1)² = p̄(0)p̄(2) and p̄(2)² = p̄(1)p̄(3).
        assert_eq!(r.entry(Index::Single(1)).unwrap().verdict, Verdict::Equality);
        let e2 = r.entry(Index::Single(2)).unwrap();
        assert_eq!(e2.verdict, Verdict::Equality);
        assert_eq!(e2.margin, Margin::Exact(rat(0)));
        assert_eq!(r.entry(Index::Single(3)).unwrap().margin, Margin::Exact(rat(8)));
        assert_eq!(r.count(Verdict::Holds), 48);
        assert!(r.counterexamples.is_empty());
    }

    #[test]
    fn strong_log_concavity_policies() {
        let t = build_table(600).unwrap();
        let r1 = check_strong_log_concavity(&t, 2, 300, 1).unwrap();
        assert_eq!(r1.entry(Index::Pair(2, 1)).unwrap().verdict, Verdict::Equality);
        assert_eq!(r1.count(Verdict::Equality), 1);
        assert_eq!(r1.count(Verdict::Fails), 0);
        assert_eq!(r1.entry(Index::Pair(5, 3)).unwrap().margin, Margin::Exact(rat(176)));
        let r2 = check_strong_log_concavity(&t, 2, 300, 2).unwrap();
        assert!(r2.all_hold());
        assert!(check_strong_log_concavity(&t, 2, 10, 3).is_err());
    }

    #[test]
    fn multiplicative_small() {
        let t = build_table(40).unwrap();
        let r = check_multiplicative(&t, 20).unwrap();
        assert_eq!(r.entry(Index::Pair(2, 2)).unwrap().margin, Margin::Exact(rat(2)));
        assert_eq!(r.entry(Index::Pair(2, 3)).unwrap().margin, Margin::Exact(rat(8)));
        assert!(r.all_hold());
        assert_eq!(r.entries.len(), (2..=20).map(|b| b - 1).sum::<usize>());
    }

    #[test]
    fn delta2_at_two_and_scaling() {
        let t = build_table(300).unwrap();
        let r = check_delta2_log(&t, 2, 299).unwrap();
        assert!(r.all_hold());
        // p̄(1)p̄(3) = p̄(2)² = 16, so the gap at n = 2 is exactly 16π.
        let g = delta2_log_gap(&2.into(), &4.into(), &8.into(), 2, 128);
        assert!(g.intersect(&pi(128).scale_int(16)).is_some());
        for n in 2..200u64 {
            let base = delta2_log_gap(t.get(n - 1).unwrap(), t.get(n).unwrap(), t.get(n + 1).unwrap(), n, 256);
            let c = BigInt::from(7919);
            let scaled = delta2_log_gap(
                &(t.get(n - 1).unwrap() * &c),
                &(t.get(n).unwrap() * &c),
                &(t.get(n + 1).unwrap() * &c),
                n,
                256,
            );
            assert_eq!(base.is_positive(), scaled.is_positive());
        }
    }

    #[test]
    fn higher_turan_and_jensen_agree() {
        let t = build_table(502).unwrap();
        let h = check_higher_turan(&t, 2, 500).unwrap();
        let j = run_check(&CheckSpec::new(CheckId::Jensen, 2, 500), Some(&t)).unwrap();
        let fails: Vec<u64> = h
            .counterexamples
            .iter()
            .map(|i| match i {
                Index::Single(n) => *n,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(fails, vec![2, 3, 6, 7, 8, 9, 10, 12, 15]);
        assert_eq!(h.entry(Index::Single(4)).unwrap().verdict, Verdict::Equality);
        assert_eq!(h.entry(Index::Single(5)).unwrap().verdict, Verdict::Equality);
        assert_eq!(h.count(Verdict::Equality), 2);
        for (a, b) in h.entries.iter().zip(&j.entries).skip(1) {
            assert_eq!(a.verdict, b.verdict, "{}", a.index);
        }
        // u_2 = 1 leaves only -(a_2 a_3 - a_1 a_4)² = -(32 - 28)².
        assert_eq!(h.entries[0].margin, Margin::Exact(rat(-16)));
    }

    #[test]
    fn u_monotone_start() {
        let t = build_table(1002).unwrap();
        let r = run_check(&CheckSpec::new(CheckId::UMonotone, 2, 1000), Some(&t)).unwrap();
        let fails: Vec<Index> = [2, 4, 5, 8, 11, 14, 17].map(Index::Single).to_vec();
        assert_eq!(r.counterexamples, fails);
    }

    #[test]
    fn interval_checks_small_ranges() {
        let t = build_table(400).unwrap();
        let fg = check_fg_sandwich(&t, 55, 300, 128).unwrap();
        assert!(fg.all_hold());
        let below = check_fg_sandwich(&t, 2, 54, 128).unwrap();
        assert_eq!(below.count(Verdict::Undecided), 0);
        assert_eq!(below.entry(Index::Single(51)).unwrap().verdict, Verdict::Fails);
        assert!(below.entries.iter().skip(50).all(|e| e.verdict == Verdict::Holds));
        assert!(check_g_vs_f_shift(2, 400, 128).unwrap().all_hold());
        assert!(check_f_vs_q(&t, 92, 399, 128).unwrap().all_hold());
        let b = run_check(&CheckSpec::new(CheckId::B1B2, 55, 400), Some(&t)).unwrap();
        assert!(b.all_hold());
    }

    #[test]
    fn rademacher_checks() {
        let t = build_table(120).unwrap();
        let spec = CheckSpec::new(CheckId::RademacherBound, 1, 120).with_precision(256).with_max_precision(256);
        assert!(run_check(&spec, Some(&t)).unwrap().all_hold());
        let near = run_check(&CheckSpec::new(CheckId::RademacherNearest, 50, 120).with_precision(256), Some(&t)).unwrap();
        assert_eq!(near.count(Verdict::Undecided), 0);
        assert_eq!(near.entry(Index::Single(68)).unwrap().verdict, Verdict::Holds);
        assert_eq!(near.entry(Index::Single(69)).unwrap().verdict, Verdict::Fails);
        assert_eq!(near.entry(Index::Single(100)).unwrap().verdict, Verdict::Fails);
    }

    #[test]
    fn decomposition_first_failure() {
        let t = build_table(500).unwrap();
        let r = run_check(&CheckSpec::new(CheckId::ExpDecomposition, 1, 500), Some(&t)).unwrap();
        assert_eq!(r.counterexamples.first(), Some(&Index::Single(440)));
        assert!(r.counterexamples.iter().all(|i| matches!(i, Index::Single(n) if n % 3 != 1)));
    }

    #[test]
    fn lambda_table() {
        let l = solve_lambda_a().unwrap();
        for (a, expect) in [(2u64, "7.578"), (3, "2.566"), (4, "1.550"), (5, "1.117")] {
            let iv = &l.entries[&a];
            assert!(iv.width().to_f64() <= 1e-6);
            let lo = iv.lo().to_f64();
            assert!(format!("{lo:.6}").starts_with(expect), "a = {a}: {lo}");
            assert!(lambda_difference(a, &CertifiedInterval::point(iv.lo().clone(), 128)).unwrap().is_negative());
            assert!(lambda_difference(a, &CertifiedInterval::point(iv.hi().clone(), 128)).unwrap().is_positive());
        }
        assert!(lambda_needs_no_root(6).unwrap());
        assert!(!lambda_needs_no_root(5).unwrap());
        let pairs = lambda_exceptional_pairs(&l);
        assert!(pairs.contains(&(2, 18)) && pairs.contains(&(5, 8)));
    }

    #[test]
    fn campaign_is_deterministic() {
        let t = build_table(700).unwrap();
        let specs = vec![
            CheckSpec::new(CheckId::LogConcavity, 2, 699),
            CheckSpec::new(CheckId::FgSandwich, 2, 600),
            CheckSpec::new(CheckId::Multiplicative, 2, 40),
        ];
        let one = run_campaign(&specs, Some(&t), 1).unwrap();
        let eight = run_campaign(&specs, Some(&t), 8).unwrap();
        for (a, b) in one.iter().zip(&eight) {
            assert_eq!(a.entries, b.entries);
        }
        assert!(run_campaign(&[], Some(&t), 4).unwrap().is_empty());
    }

    #[test]
    fn precision_increase_never_flips() {
        let t = build_table(201).unwrap();
        for bits in [32u32, 64, 256] {
            let spec = CheckSpec::new(CheckId::FgSandwich, 40, 200).with_precision(bits).with_max_precision(bits);
            let r = run_check(&spec, Some(&t)).unwrap();
            let hi = run_check(&spec.clone().with_max_precision(1024).with_precision(bits.max(512)), Some(&t)).unwrap();
            for (a, b) in r.entries.iter().zip(&hi.entries) {
                if a.verdict != Verdict::Undecided {
                    assert_eq!(a.verdict, b.verdict);
                }
            }
        }
    }
}
