//! Exact overpartition counts.
//!
//! The generating function `∏ (1+q^k)/(1-q^k)` equals `E(q²)/E(q)²` with
//! `E(q) = ∏ (1-q^k)`. Euler's pentagonal number theorem makes `E` sparse, so
//! the table is computed by two sparse divisions by `E(q)`:
//! first the distinct-part counts `D = E(q²)/E(q)`, then `p̄ = D/E(q)`.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Largest `n` accepted by [`enumerate_overpartitions`].
pub const ORACLE_MAX_N: u64 = 60;

/// Default memory budget for a table build (1 GiB).
pub const DEFAULT_MEMORY_BUDGET: u64 = 1 << 30;

const MAGIC: &str = "OPART v1";

#[derive(Debug, Error)]
pub enum TableError {
    #[error("table up to n = {max_n} needs about {estimate} bytes, over the {budget} byte budget")]
    BudgetExceeded { max_n: u64, estimate: u64, budget: u64 },
    #[error("enumeration oracle is limited to n <= {ORACLE_MAX_N}, got {0}")]
    OracleGuard(u64),
    #[error("index {n} outside table range 0..={max_n}")]
    OutOfRange { n: u64, max_n: u64 },
    #[error("malformed table file: {0}")]
    Format(String),
    #[error("table checksum mismatch: recorded {recorded}, computed {computed}")]
    Checksum { recorded: String, computed: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Exact values `p̄(0..=max_n)`. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverpartitionTable {
    values: Vec<BigInt>,
}

/// Signed generalized pentagonal numbers `(k(3k-1)/2, (-1)^k)` for `k = ±1, ±2, …`
/// up to `limit`, in increasing order.
fn pentagonal_offsets(limit: usize) -> Vec<(usize, bool)> {
    let mut out = Vec::new();
    for k in 1usize.. {
        let a = k * (3 * k - 1) / 2;
        if a > limit {
            break;
        }
        let negative = k % 2 == 1;
        out.push((a, negative));
        let b = k * (3 * k + 1) / 2;
        if b <= limit {
            out.push((b, negative));
        }
    }
    out
}

/// Coefficients `c` with `c · E(q) = rhs`, solved term by term.
fn divide_by_euler(rhs: &[BigInt], pent: &[(usize, bool)]) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = Vec::with_capacity(rhs.len());
    for n in 0..rhs.len() {
        // E(q) = 1 + Σ s_j q^{a_j}, so c_n = rhs_n - Σ s_j c_{n - a_j}.
        let mut acc = rhs[n].clone();
        for &(a, negative) in pent {
            if a > n {
                break;
            }
            if negative {
                acc += &out[n - a];
            } else {
                acc -= &out[n - a];
            }
        }
        out.push(acc);
    }
    out
}

/// Rough size of `p̄(0..=max_n)` in memory; `log2 p̄(n) ≈ π√n · log2 e`.
pub fn estimate_table_bytes(max_n: u64) -> u64 {
    let n = max_n as f64 + 1.0;
    // Σ_{m≤n} (4.533 √m / 8 + 32) ≤ 0.378 n^{3/2} + 32 n, doubled for the
    // intermediate distinct-part sequence.
    (2.0 * (0.378 * n.powf(1.5) + 32.0 * n)) as u64
}

/// Build `p̄(0..=max_n)` under the default memory budget.
pub fn build_table(max_n: u64) -> Result<OverpartitionTable, TableError> {
    build_table_with_budget(max_n, DEFAULT_MEMORY_BUDGET)
}

pub fn build_table_with_budget(max_n: u64, budget: u64) -> Result<OverpartitionTable, TableError> {
    let estimate = estimate_table_bytes(max_n);
    if estimate > budget {
        return Err(TableError::BudgetExceeded {
            max_n,
            estimate,
            budget,
        });
    }
    let len = max_n as usize + 1;
    let pent = pentagonal_offsets(max_n as usize);

    // E(q²): coefficient ±1 at twice each pentagonal offset.
    let mut e2 = vec![BigInt::zero(); len];
    e2[0] = BigInt::one();
    for &(a, negative) in &pent {
        if 2 * a < len {
            e2[2 * a] = if negative { -BigInt::one() } else { BigInt::one() };
        }
    }
    let distinct = divide_by_euler(&e2, &pent);
    drop(e2);
    let values = divide_by_euler(&distinct, &pent);
    Ok(OverpartitionTable { values })
}

/// Count overpartitions of `n` by walking every partition of `n` and
/// counting the independent overline choices on its distinct part sizes.
pub fn enumerate_overpartitions(n: u64) -> Result<BigInt, TableError> {
    if n > ORACLE_MAX_N {
        return Err(TableError::OracleGuard(n));
    }
    // Partitions as non-increasing part sequences: remaining sum, largest
    // allowed part, number of distinct sizes used so far.
    fn walk(remaining: u64, max_part: u64, distinct: u32, total: &mut BigInt) {
        if remaining == 0 {
            *total += BigInt::one() << distinct;
            return;
        }
        for part in (1..=max_part.min(remaining)).rev() {
            // Take `mult` copies of `part`, then continue with strictly smaller parts.
            let mut used = 0;
            while used + part <= remaining {
                used += part;
                walk(remaining - used, part - 1, distinct + 1, total);
            }
        }
    }
    let mut total = BigInt::zero();
    walk(n, n, 0, &mut total);
    Ok(total)
}

impl OverpartitionTable {
    /// Wrap externally supplied values; checks `values[0] = 1` and that the
    /// sequence is strictly increasing from `n = 1`.
    pub fn from_values(values: Vec<BigInt>) -> Result<Self, TableError> {
        if values.first() != Some(&BigInt::one()) {
            return Err(TableError::Format("p̄(0) must be 1".into()));
        }
        if values.len() > 2 && values[1..].windows(2).any(|w| w[0] >= w[1]) {
            return Err(TableError::Format("values are not strictly increasing".into()));
        }
        Ok(OverpartitionTable { values })
    }

    pub fn max_n(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn get(&self, n: u64) -> Result<&BigInt, TableError> {
        self.values.get(n as usize).ok_or(TableError::OutOfRange {
            n,
            max_n: self.max_n(),
        })
    }

    /// Text body without the trailing checksum line.
    fn body(&self) -> String {
        let mut s = String::with_capacity(self.values.len() * 32);
        let _ = writeln!(s, "{MAGIC} {}", self.max_n());
        for (n, v) in self.values.iter().enumerate() {
            let _ = writeln!(s, "{n}\t{v}");
        }
        s
    }

    /// Full serialized form including the `#sha256` trailer.
    pub fn to_file_string(&self) -> String {
        let body = self.body();
        let digest = hex::encode(Sha256::digest(body.as_bytes()));
        format!("{body}#sha256 {digest}\n")
    }

    /// Hex SHA-256 of the serialized records.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.body().as_bytes()))
    }

    pub fn parse(text: &str) -> Result<Self, TableError> {
        let trailer_at = text
            .rfind("#sha256 ")
            .ok_or_else(|| TableError::Format("missing #sha256 trailer".into()))?;
        let (body, trailer) = text.split_at(trailer_at);
        let recorded = trailer["#sha256 ".len()..].trim_end_matches('\n');
        if recorded.contains('\n') || recorded.len() != 64 {
            return Err(TableError::Format("malformed #sha256 trailer".into()));
        }
        let computed = hex::encode(Sha256::digest(body.as_bytes()));
        if recorded != computed {
            return Err(TableError::Checksum {
                recorded: recorded.to_string(),
                computed,
            });
        }

        let mut lines = body.lines();
        let header = lines.next().ok_or_else(|| TableError::Format("empty file".into()))?;
        let max_n: u64 = header
            .strip_prefix(MAGIC)
            .and_then(|rest| rest.strip_prefix(' '))
            .and_then(|rest| rest.parse().ok())
            .ok_or_else(|| TableError::Format(format!("bad header line {header:?}")))?;
        let mut values = Vec::with_capacity(max_n as usize + 1);
        for (expected, line) in lines.enumerate() {
            let (idx, digits) = line
                .split_once('\t')
                .ok_or_else(|| TableError::Format(format!("bad record {line:?}")))?;
            if idx.parse::<u64>().ok() != Some(expected as u64) {
                return Err(TableError::Format(format!("record {idx} out of order, expected {expected}")));
            }
            let v: BigInt = digits
                .parse()
                .map_err(|_| TableError::Format(format!("bad value in record {idx}")))?;
            values.push(v);
        }
        if values.len() as u64 != max_n + 1 {
            return Err(TableError::Format(format!(
                "header declares max_n = {max_n} but file holds {} records",
                values.len()
            )));
        }
        OverpartitionTable::from_values(values)
    }
}

pub fn save_table(table: &OverpartitionTable, path: impl AsRef<Path>) -> Result<(), TableError> {
    fs::write(path, table.to_file_string())?;
    Ok(())
}

pub fn load_table(path: impl AsRef<Path>) -> Result<OverpartitionTable, TableError> {
    let text = fs::read_to_string(path)?;
    OverpartitionTable::parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_values() {
        let t = build_table(8).unwrap();
        let expect: Vec<BigInt> = [1, 2, 4, 8, 14, 24, 40, 64, 100].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(t.values(), expect.as_slice());
        assert_eq!(build_table(0).unwrap().values(), &[BigInt::one()]);
    }

    #[test]
    fn enumeration_small_cases() {
        assert_eq!(enumerate_overpartitions(0).unwrap(), BigInt::from(1));
        assert_eq!(enumerate_overpartitions(1).unwrap(), BigInt::from(2));
        assert_eq!(enumerate_overpartitions(2).unwrap(), BigInt::from(4));
        assert!(matches!(enumerate_overpartitions(61), Err(TableError::OracleGuard(61))));
    }

    #[test]
    fn table_matches_oracle_to_40() {
        let t = build_table(40).unwrap();
        for n in 0..=40 {
            assert_eq!(t.get(n).unwrap(), &enumerate_overpartitions(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn equality_case_at_two() {
        let t = build_table(3).unwrap();
        let v = t.values();
        assert_eq!(&v[2] * &v[2] - &v[1] * &v[3], BigInt::zero());
    }

    #[test]
    fn parity_and_monotonicity() {
        let t = build_table(1500).unwrap();
        let v = t.values();
        for n in 1..v.len() {
            assert!((&v[n] % 2u32).is_zero(), "p̄({n}) is odd");
            if n + 1 < v.len() {
                assert!(v[n + 1] > v[n]);
            }
        }
    }

    #[test]
    fn budget_guard() {
        let err = build_table_with_budget(10_000, 1024).unwrap_err();
        assert!(matches!(err, TableError::BudgetExceeded { max_n: 10_000, .. }));
    }

    #[test]
    fn parse_rejects_truncation_and_tampering() {
        let text = build_table(20).unwrap().to_file_string();
        let cut = &text[..text.len() / 2];
        assert!(matches!(OverpartitionTable::parse(cut), Err(TableError::Format(_))));
        let tampered = text.replacen("\t100\n", "\t101\n", 1);
        assert!(matches!(OverpartitionTable::parse(&tampered), Err(TableError::Checksum { .. })));
    }

    #[test]
    fn parse_rejects_record_count_mismatch() {
        let body = "OPART v1 3\n0\t1\n1\t2\n";
        let digest = hex::encode(Sha256::digest(body.as_bytes()));
        let text = format!("{body}#sha256 {digest}\n");
        assert!(matches!(OverpartitionTable::parse(&text), Err(TableError::Format(_))));
    }

    #[test]
    fn out_of_range_lookup() {
        let t = build_table(5).unwrap();
        assert!(matches!(t.get(6), Err(TableError::OutOfRange { n: 6, max_n: 5 })));
    }
}
