use std::io::{BufRead, Write};

use opart::verify::{CheckResult, Entry, Index};
use serde::{Deserialize, Serialize};

/// One verdict row. For pair-indexed checks `n`/`m` hold `(n, m)` or `(a, b)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub check: String,
    pub n: u64,
    pub m: Option<u64>,
    pub verdict: String,
    /// Exact gap, or a certified lower bound on it.
    pub margin: String,
    pub precision_bits: Option<u32>,
}

impl ReportRecord {
    pub fn from_entry(check: &str, e: &Entry) -> Self {
        let (n, m) = match e.index {
            Index::Single(n) => (n, None),
            Index::Pair(a, b) => (a, Some(b)),
        };
        ReportRecord {
            check: check.to_string(),
            n,
            m,
            verdict: e.verdict.name().to_string(),
            margin: e.margin.render(),
            precision_bits: e.precision_bits,
        }
    }
}

pub fn records(results: &[CheckResult]) -> Vec<ReportRecord> {
    results
        .iter()
        .flat_map(|r| {
            let name = r.spec.check.name();
            r.entries.iter().map(move |e| ReportRecord::from_entry(name, e))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

pub fn write_records<W: Write>(out: W, format: Format, recs: &[ReportRecord]) -> anyhow::Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in recs {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Jsonl => {
            let mut out = std::io::BufWriter::new(out);
            for r in recs {
                serde_json::to_writer(&mut out, r)?;
                out.write_all(b"\n")?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

pub fn read_records<R: BufRead>(input: R, format: Format) -> anyhow::Result<Vec<ReportRecord>> {
    match format {
        Format::Csv => Ok(csv::Reader::from_reader(input)
            .deserialize()
            .collect::<Result<_, _>>()?),
        Format::Jsonl => input
            .lines()
            .filter(|l| !l.as_ref().is_ok_and(|l| l.trim().is_empty()))
            .map(|l| Ok(serde_json::from_str(&l?)?))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<ReportRecord> {
        vec![
            ReportRecord {
                check: "log-concavity".into(),
                n: 2,
                m: None,
                verdict: "equality".into(),
                margin: "0".into(),
                precision_bits: None,
            },
            ReportRecord {
                check: "fg-sandwich".into(),
                n: 55,
                m: None,
                verdict: "holds".into(),
                margin: "1.2345678901234567e-9".into(),
                precision_bits: Some(128),
            },
            ReportRecord {
                check: "multiplicative".into(),
                n: 2,
                m: Some(3),
                verdict: "holds".into(),
                margin: "8".into(),
                precision_bits: None,
            },
        ]
    }

    #[test]
    fn round_trip_both_formats() {
        for format in [Format::Csv, Format::Jsonl] {
            let mut buf = Vec::new();
            write_records(&mut buf, format, &sample()).unwrap();
            let back = read_records(buf.as_slice(), format).unwrap();
            assert_eq!(back, sample());
        }
    }

    #[test]
    fn csv_has_header() {
        let mut buf = Vec::new();
        write_records(&mut buf, Format::Csv, &sample()).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("check,n,m,verdict,margin,precision_bits\n"));
        assert!(text.contains("log-concavity,2,,equality,0,\n"));
    }
}
