//! Report records and their CSV / JSONL renderings for the `opart` binary.

pub mod report;
