//! Output documents and their JSON, CSV and LaTeX renderings.
//!
//! JSON field order is fixed by the struct declarations, so identical inputs
//! give byte-identical output. Rationals are always `["num", "den"]` string
//! pairs.

use std::fmt::Write as _;

use anyhow::{Context, Result};
use clap::ValueEnum;
use diagharm::oracle::VerificationReport;
use diagharm::schedules::BivariateSeries;
use diagharm::{BigInt, BigRational, DimensionPolynomial, Poly};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "diagharm/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Latex,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialDoc {
    pub schema: String,
    pub kind: String,
    pub variable: String,
    pub stable_from: i64,
    pub coeffs: Vec<[String; 2]>,
}

impl PolynomialDoc {
    pub fn new(p: &DimensionPolynomial, stable_from: i64) -> Self {
        PolynomialDoc {
            schema: SCHEMA.into(),
            kind: "polynomial".into(),
            variable: "n".into(),
            stable_from,
            coeffs: encode_coeffs(p),
        }
    }

    pub fn polynomial(&self) -> Result<DimensionPolynomial> {
        decode_coeffs(&self.coeffs)
    }
}

fn encode_coeffs(p: &DimensionPolynomial) -> Vec<[String; 2]> {
    p.coeffs().iter().map(|c| [c.numer().to_string(), c.denom().to_string()]).collect()
}

fn decode_coeffs(coeffs: &[[String; 2]]) -> Result<DimensionPolynomial> {
    let parsed = coeffs
        .iter()
        .map(|[n, d]| {
            let n: BigInt = n.parse().with_context(|| format!("bad numerator {n:?}"))?;
            let d: BigInt = d.parse().with_context(|| format!("bad denominator {d:?}"))?;
            anyhow::ensure!(!d.is_zero(), "zero denominator");
            Ok(BigRational::new(n, d))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::from_coeffs(parsed))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridEntry {
    pub a: usize,
    pub b: usize,
    pub stable_from: i64,
    pub coeffs: Vec<[String; 2]>,
}

/// `P_{a,b}` for every `a ≤ max_a`, `b ≤ max_b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridDoc {
    pub schema: String,
    pub kind: String,
    pub variable: String,
    pub entries: Vec<GridEntry>,
}

impl GridDoc {
    pub fn new(entries: impl IntoIterator<Item = (usize, usize, DimensionPolynomial)>) -> Self {
        GridDoc {
            schema: SCHEMA.into(),
            kind: "polynomial_grid".into(),
            variable: "n".into(),
            entries: entries
                .into_iter()
                .map(|(a, b, p)| GridEntry { a, b, stable_from: (a + b) as i64, coeffs: encode_coeffs(&p) })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesEntry {
    pub q: usize,
    pub t: usize,
    pub c: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesDoc {
    pub schema: String,
    pub kind: String,
    pub n: usize,
    pub entries: Vec<SeriesEntry>,
    pub total: String,
}

impl SeriesDoc {
    pub fn new(n: usize, s: &BivariateSeries) -> Self {
        SeriesDoc {
            schema: SCHEMA.into(),
            kind: "series".into(),
            n,
            entries: s.entries().map(|(&(q, t), c)| SeriesEntry { q, t, c: c.to_string() }).collect(),
            total: s.total().to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountDoc {
    pub schema: String,
    pub kind: String,
    pub n: usize,
    pub value: String,
}

impl CountDoc {
    pub fn new(n: usize, value: u64) -> Self {
        CountDoc { schema: SCHEMA.into(), kind: "count".into(), n, value: value.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordDoc {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub schema: String,
    pub kind: String,
    pub subject: String,
    pub passed: bool,
    pub total: usize,
    pub failures: usize,
    pub records: Vec<RecordDoc>,
}

impl ReportDoc {
    pub fn new(r: &VerificationReport) -> Self {
        ReportDoc {
            schema: SCHEMA.into(),
            kind: "report".into(),
            subject: r.subject.clone(),
            passed: r.passed(),
            total: r.total(),
            failures: r.failures(),
            records: r
                .records
                .iter()
                .map(|c| RecordDoc { name: c.name.clone(), expected: c.expected.clone(), actual: c.actual.clone(), pass: c.pass })
                .collect(),
        }
    }
}

pub enum Document {
    Polynomial(PolynomialDoc),
    Grid(GridDoc),
    Series(SeriesDoc),
    Count(CountDoc),
    Report(ReportDoc),
}

impl Document {
    pub fn render(&self, format: Format) -> Result<String> {
        let mut out = match format {
            Format::Json => match self {
                Document::Polynomial(d) => serde_json::to_string(d)?,
                Document::Grid(d) => serde_json::to_string(d)?,
                Document::Series(d) => serde_json::to_string(d)?,
                Document::Count(d) => serde_json::to_string(d)?,
                Document::Report(d) => serde_json::to_string(d)?,
            },
            Format::Csv => self.csv(),
            Format::Latex => self.latex()?,
        };
        if !out.ends_with('\n') {
            out.push('\n');
        }
        Ok(out)
    }

    fn csv(&self) -> String {
        let mut s = String::new();
        match self {
            Document::Polynomial(d) => {
                s.push_str("power,num,den\n");
                for (i, [n, den]) in d.coeffs.iter().enumerate() {
                    let _ = writeln!(s, "{i},{n},{den}");
                }
            }
            Document::Grid(d) => {
                s.push_str("a,b,power,num,den\n");
                for e in &d.entries {
                    for (i, [n, den]) in e.coeffs.iter().enumerate() {
                        let _ = writeln!(s, "{},{},{i},{n},{den}", e.a, e.b);
                    }
                }
            }
            Document::Series(d) => {
                s.push_str("q,t,c\n");
                for e in &d.entries {
                    let _ = writeln!(s, "{},{},{}", e.q, e.t, e.c);
                }
            }
            Document::Count(d) => {
                let _ = writeln!(s, "n,value\n{},{}", d.n, d.value);
            }
            Document::Report(d) => {
                s.push_str("name,expected,actual,pass\n");
                for r in &d.records {
                    let _ = writeln!(s, "{},{},{},{}", csv_field(&r.name), csv_field(&r.expected), csv_field(&r.actual), r.pass);
                }
            }
        }
        s
    }

    fn latex(&self) -> Result<String> {
        Ok(match self {
            Document::Polynomial(d) => format!("${}$", latex_poly(&d.polynomial()?)),
            Document::Grid(d) => latex_grid(d)?,
            Document::Series(d) => latex_series(d),
            Document::Count(d) => format!("${}$", d.value),
            Document::Report(d) => {
                let mut s = String::from("\\begin{tabular}{|l|l|l|c|}\n\\hline\ncheck & expected & actual & pass \\\\\n\\hline\n");
                for r in &d.records {
                    let mark = if r.pass { "\\checkmark" } else { "$\\times$" };
                    let _ = writeln!(s, "{} & {} & {} & {mark} \\\\", latex_text(&r.name), latex_text(&r.expected), latex_text(&r.actual));
                }
                s.push_str("\\hline\n\\end{tabular}");
                s
            }
        })
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn latex_text(s: &str) -> String {
    s.replace('^', "\\^{}").replace('_', "\\_").replace('<', "$<$").replace('*', "")
}

/// Descending powers with `\frac` coefficients, e.g. `\frac{1}{2}n^{2} - \frac{1}{2}n - 1`.
pub fn latex_poly(p: &DimensionPolynomial) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        if s.is_empty() {
            if c.is_negative() {
                s.push('-');
            }
        } else {
            s.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let mag = c.abs();
        let coeff = if mag.is_integer() {
            mag.numer().to_string()
        } else {
            format!("\\frac{{{}}}{{{}}}", mag.numer(), mag.denom())
        };
        match k {
            0 => s.push_str(&coeff),
            _ => {
                if !mag.is_one() {
                    s.push_str(&coeff);
                }
                s.push('n');
                if k > 1 {
                    let _ = write!(s, "^{{{k}}}");
                }
            }
        }
    }
    s
}

fn latex_grid(d: &GridDoc) -> Result<String> {
    let max_a = d.entries.iter().map(|e| e.a).max().unwrap_or(0);
    let max_b = d.entries.iter().map(|e| e.b).max().unwrap_or(0);
    let mut s = format!("\\begin{{tabular}}{{|c|{}}}\n\\hline\n\\textbf{{/}}", "c|".repeat(max_a + 1));
    for a in 0..=max_a {
        let _ = write!(s, " & \\textbf{{q$^{a}$}}");
    }
    s.push_str(" \\\\\n\\hline\n");
    for b in 0..=max_b {
        let _ = write!(s, "$t^{b}$");
        for a in 0..=max_a {
            let cell = match d.entries.iter().find(|e| e.a == a && e.b == b) {
                Some(e) => format!("${}$", latex_poly(&decode_coeffs(&e.coeffs)?)),
                None => String::new(),
            };
            let _ = write!(s, " & {cell}");
        }
        s.push_str(" \\\\\n\\hline\n");
    }
    s.push_str("\\end{tabular}");
    Ok(s)
}

fn latex_series(d: &SeriesDoc) -> String {
    let max_q = d.entries.iter().map(|e| e.q).max().unwrap_or(0);
    let max_t = d.entries.iter().map(|e| e.t).max().unwrap_or(0);
    let mut s = format!("\\begin{{tabular}}{{|c|{}}}\n\\hline\n\\textbf{{/}}", "c|".repeat(max_q + 1));
    for q in 0..=max_q {
        let _ = write!(s, " & \\textbf{{q$^{q}$}}");
    }
    s.push_str(" \\\\\n\\hline\n");
    for t in 0..=max_t {
        let _ = write!(s, "$t^{t}$");
        for q in 0..=max_q {
            let cell = d.entries.iter().find(|e| e.q == q && e.t == t).map_or("", |e| e.c.as_str());
            let _ = write!(s, " & {cell}");
        }
        s.push_str(" \\\\\n\\hline\n");
    }
    s.push_str("\\end{tabular}");
    s
}
