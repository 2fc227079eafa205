//! Exact values, certified asymptotics and inequality verification for the
//! overpartition function `p̄(n)`.

pub mod adaptive;
pub mod asymptotics;
pub mod exact;
pub mod interval;
pub mod ratio;
pub mod verify;

pub use adaptive::{certify_sign, Sign, SignDecision};
pub use exact::{build_table, load_table, save_table, OverpartitionTable, TableError};
pub use interval::{CertifiedInterval, Dyadic, IntervalError, Round};
