//! Report types emitted by the CLI and their json/csv/plain renderings.
//!
//! CSV always uses the columns `program,n,input,side,computed,bound,pass`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::analysis::{rational_string, round_sig, BoundReport, ProgramTag, ScanTable, Side};
use crate::numeric::Rational;

use super::{CliError, OutputFormat};

pub const CSV_HEADER: [&str; 7] = ["program", "n", "input", "side", "computed", "bound", "pass"];

/// Float at 12 significant digits, shortest form.
pub fn fmt_float(x: f64) -> String {
    let r = round_sig(x);
    if r != 0.0 && r.is_finite() && !(1e-4..1e15).contains(&r.abs()) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

pub fn fmt_rational(r: &Rational) -> String {
    r.to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub program: ProgramTag,
    pub n: usize,
    pub input: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub s: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t: Option<usize>,
    /// Raw program output.
    pub value: u8,
    pub verdict: String,
    /// Whether the classical graph oracle gives the same answer.
    pub oracle_agrees: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientEntry {
    pub vector: String,
    pub support: String,
    #[serde(with = "rational_string")]
    pub coefficient: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionalEntry {
    pub basis: String,
    #[serde(with = "rational_string")]
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructedComparison {
    #[serde(with = "rational_string")]
    pub size: Rational,
    pub size_float: f64,
    /// Exact test `optimal <= constructed`.
    pub optimal_within: bool,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub float_size: f64,
    pub abs_diff: f64,
    pub tolerance: f64,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub program: ProgramTag,
    pub n: usize,
    pub input: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub s: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t: Option<usize>,
    pub side: Side,
    #[serde(with = "rational_string")]
    pub size: Rational,
    pub size_float: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub coefficients: Option<Vec<CoefficientEntry>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub functional: Option<Vec<FunctionalEntry>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub constructed: Option<ConstructedComparison>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cross_check: Option<CrossCheck>,
}

impl WitnessReport {
    pub fn pass(&self) -> bool {
        self.constructed.as_ref().is_none_or(|p| p.optimal_within)
            && self.cross_check.as_ref().is_none_or(|c| c.agree)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub program: ProgramTag,
    pub n: usize,
    pub input: String,
    pub rows: Vec<BoundReport>,
    pub pass: bool,
}

/// Everything a command can print.
#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    Eval(EvalReport),
    Witness(Box<WitnessReport>),
    Bounds(BoundsReport),
    Scan(Box<ScanTable>),
}

impl Report {
    pub fn pass(&self) -> bool {
        match self {
            Report::Eval(r) => r.oracle_agrees,
            Report::Witness(r) => r.pass(),
            Report::Bounds(r) => r.pass,
            Report::Scan(t) => t.all_pass(),
        }
    }

    pub fn render(&self, format: OutputFormat) -> Result<String, CliError> {
        match format {
            OutputFormat::Json => self.json(),
            OutputFormat::Csv => self.csv(),
            OutputFormat::Plain => Ok(self.plain()),
        }
    }

    fn json(&self) -> Result<String, CliError> {
        let mut s = match self {
            Report::Eval(r) => serde_json::to_string_pretty(r),
            Report::Witness(r) => serde_json::to_string_pretty(r.as_ref()),
            Report::Bounds(r) => serde_json::to_string_pretty(r),
            Report::Scan(r) => serde_json::to_string_pretty(r.as_ref()),
        }
        .map_err(|e| CliError::Internal(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    fn csv_rows(&self) -> Vec<[String; 7]> {
        let b = |x: bool| x.to_string();
        match self {
            Report::Eval(r) => vec![[
                r.program.to_string(),
                r.n.to_string(),
                r.input.clone(),
                "value".into(),
                r.value.to_string(),
                String::new(),
                b(r.oracle_agrees),
            ]],
            Report::Witness(r) => {
                let mut rows = vec![[
                    r.program.to_string(),
                    r.n.to_string(),
                    r.input.clone(),
                    r.side.to_string(),
                    fmt_rational(&r.size),
                    r.constructed
                        .as_ref()
                        .map(|p| fmt_rational(&p.size))
                        .unwrap_or_default(),
                    b(r.pass()),
                ]];
                if let Some(p) = &r.constructed {
                    rows.push([
                        r.program.to_string(),
                        r.n.to_string(),
                        r.input.clone(),
                        format!("{}-constructed", r.side),
                        fmt_rational(&p.size),
                        String::new(),
                        b(true),
                    ]);
                }
                rows
            }
            Report::Bounds(r) => r
                .rows
                .iter()
                .map(|row| {
                    [
                        row.program.to_string(),
                        row.n.to_string(),
                        row.input.clone(),
                        format!("{}-{}", row.side, row.provenance),
                        fmt_rational(&row.computed),
                        fmt_rational(&row.bound),
                        b(row.pass),
                    ]
                })
                .collect(),
            Report::Scan(t) => {
                let mut rows: Vec<[String; 7]> = t
                    .rows
                    .iter()
                    .map(|row| {
                        [
                            t.program.to_string(),
                            row.n.to_string(),
                            t.family.clone(),
                            "combined".into(),
                            fmt_float(row.combined),
                            fmt_float(row.bound),
                            b(row.pass),
                        ]
                    })
                    .collect();
                rows.push([
                    t.program.to_string(),
                    String::new(),
                    t.family.clone(),
                    "slope".into(),
                    t.slope.map(fmt_float).unwrap_or_default(),
                    fmt_float(t.slope_limit),
                    b(t.slope_pass),
                ]);
                rows
            }
        }
    }

    fn csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| CliError::Internal(e.to_string());
        w.write_record(CSV_HEADER).map_err(err)?;
        for row in self.csv_rows() {
            w.write_record(&row).map_err(err)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| CliError::Internal(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
    }

    fn plain(&self) -> String {
        let mut out = String::new();
        match self {
            Report::Eval(r) => {
                let _ = writeln!(out, "program: {}", r.program);
                let _ = writeln!(out, "n: {}", r.n);
                if let (Some(s), Some(t)) = (r.s, r.t) {
                    let _ = writeln!(out, "s: {s}\nt: {t}");
                }
                let _ = writeln!(out, "value: {}", r.value);
                let _ = writeln!(out, "verdict: {}", r.verdict);
                let _ = writeln!(out, "oracle agrees: {}", r.oracle_agrees);
                if let Some(note) = &r.note {
                    let _ = writeln!(out, "note: {note}");
                }
            }
            Report::Witness(r) => {
                let _ = writeln!(out, "program: {}", r.program);
                let _ = writeln!(out, "n: {}", r.n);
                let _ = writeln!(out, "side: {}", r.side);
                let _ = writeln!(out, "size: {} ({})", r.size, fmt_float(r.size_float));
                if let Some(p) = &r.constructed {
                    let _ = writeln!(
                        out,
                        "constructed size: {} ({})",
                        p.size,
                        fmt_float(p.size_float)
                    );
                    let _ = writeln!(out, "constructed: {}", p.description);
                    let _ = writeln!(out, "optimal <= constructed: {}", p.optimal_within);
                }
                if let Some(c) = &r.cross_check {
                    let _ = writeln!(
                        out,
                        "float size: {} (diff {}, tolerance {}, agree {})",
                        fmt_float(c.float_size),
                        fmt_float(c.abs_diff),
                        fmt_float(c.tolerance),
                        c.agree
                    );
                }
                if let Some(coeffs) = &r.coefficients {
                    let _ = writeln!(out, "coefficients:");
                    for c in coeffs {
                        let _ =
                            writeln!(out, "  {} = {}  [{}]", c.vector, c.coefficient, c.support);
                    }
                }
                if let Some(entries) = &r.functional {
                    let _ = writeln!(out, "functional:");
                    for e in entries {
                        let _ = writeln!(out, "  {} = {}", e.basis, e.value);
                    }
                }
            }
            Report::Bounds(r) => {
                let _ = writeln!(
                    out,
                    "program: {}  n: {}  input: {}",
                    r.program, r.n, r.input
                );
                for row in &r.rows {
                    let _ = writeln!(
                        out,
                        "{:<8} {:<17} {} <= {} [{}]  {}",
                        row.side.to_string(),
                        row.provenance.to_string(),
                        row.computed,
                        row.bound,
                        row.bound_formula,
                        if row.pass { "pass" } else { "FAIL" }
                    );
                }
            }
            Report::Scan(t) => {
                let _ = writeln!(
                    out,
                    "program: {}  family: {}  seed: {}",
                    t.program, t.family, t.seed
                );
                let _ = writeln!(
                    out,
                    "{:>3} {:>5} {:>5} {:>16} {:>16} {:>14} {:>14} pass",
                    "n", "pos", "neg", "wsize1", "wsize0", "combined", "bound"
                );
                for row in &t.rows {
                    let _ = writeln!(
                        out,
                        "{:>3} {:>5} {:>5} {:>16} {:>16} {:>14} {:>14} {}",
                        row.n,
                        row.positive_samples,
                        row.negative_samples,
                        fmt_float(crate::numeric::to_f64(&row.wsize1)),
                        fmt_float(crate::numeric::to_f64(&row.wsize0)),
                        fmt_float(row.combined),
                        fmt_float(row.bound),
                        row.pass
                    );
                }
                let slope = t.slope.map(fmt_float).unwrap_or_else(|| "n/a".into());
                let _ = writeln!(
                    out,
                    "slope: {slope} (limit {}) {}",
                    fmt_float(t.slope_limit),
                    t.slope_pass
                );
            }
        }
        out
    }
}
