use std::fmt::Write as _;
use std::path::Path;

use super::campaign::RunSummary;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str =
    "oracle,f0,f1,class,encoding,noise_condition,trials,p1,p2,p3,p4,error_rate,stderr";

pub fn csv_string(s: &RunSummary) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for c in &s.cells {
        let p = &c.probabilities;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}",
            c.oracle,
            c.f0,
            c.f1,
            c.class,
            c.encoding,
            c.noise_condition,
            c.trials,
            p[0],
            p[1],
            p[2],
            p[3],
            c.error_rate,
            c.stderr
        )
        .expect("writing to a String");
    }
    out
}

pub fn json_string(s: &RunSummary) -> String {
    let mut text = serde_json::to_string_pretty(s).expect("summary is serializable");
    text.push('\n');
    text
}

pub fn parse_json(text: &str) -> Result<RunSummary> {
    serde_json::from_str(text).map_err(|e| Error::config("json", e.to_string()))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn emit_csv(s: &RunSummary, path: &Path) -> Result<()> {
    write(path, &csv_string(s))
}

pub fn emit_json(s: &RunSummary, path: &Path) -> Result<()> {
    write(path, &json_string(s))
}

/// Aligned plain-text table for terminals.
pub fn text_table(s: &RunSummary) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<6} {:<9} {:<9} {:<12} {:>8} {:>8} {:>8} {:>8} {:>9} {:>9}",
        "oracle", "class", "encoding", "condition", "PD1", "PD2", "PD3", "PD4", "error", "stderr"
    )
    .unwrap();
    for c in &s.cells {
        let p = &c.probabilities;
        writeln!(
            out,
            "{:<6} {:<9} {:<9} {:<12} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>9.4} {:>9.4}",
            c.oracle,
            c.class,
            c.encoding,
            c.noise_condition,
            p[0],
            p[1],
            p[2],
            p[3],
            c.error_rate,
            c.stderr
        )
        .unwrap();
    }
    if let Some(verdicts) = &s.verdicts {
        out.push('\n');
        for v in verdicts {
            writeln!(
                out,
                "{:<28} measured {:.4} ± {:.4}  accepted [{:.2}, {:.2}]  target {:.2}  {}",
                v.name,
                v.measured,
                v.stderr,
                v.lower,
                v.upper,
                v.reference_value,
                if v.passed { "PASS" } else { "FAIL" }
            )
            .unwrap();
        }
    }
    out
}
