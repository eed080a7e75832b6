//! Grid evaluation of evolutions and the CSV format shared with the CLI.
//!
//! A CSV file starts with `# key=value` metadata lines, then the header
//! `x,t,re,im`, then one row per grid point with `t` in the outer loop.
//! Floats are written in shortest round-trip form, so parsing a file gives
//! back the exact values.

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kg_spectral::{InitialData, KgEvolution, KgProblem, SourceCase};

pub const CSV_HEADER: &str = "x,t,re,im";

/// `count` equispaced points from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid1d {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Grid1d {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) {
            return Err(Error::param("grid", "bounds must be finite"));
        }
        if count == 0 {
            return Err(Error::param("grid", "count must be at least 1"));
        }
        if min > max || (count > 1 && min == max) {
            return Err(Error::param("grid", format!("degenerate range {min}:{max}:{count}")));
        }
        Ok(Grid1d { min, max, count })
    }

    pub fn point(t: f64) -> Self {
        Grid1d { min: t, max: t, count: 1 }
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let last = self.count - 1;
        let step = (self.max - self.min) / last as f64;
        (0..self.count)
            .map(|i| if i == last { self.max } else { self.min + i as f64 * step })
            .collect()
    }
}

impl FromStr for Grid1d {
    type Err = Error;

    /// `min:max:count`, or a single number for a one-point grid.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let num = |p: &str| {
            p.parse::<f64>()
                .map_err(|_| Error::param("grid", format!("`{p}` is not a number")))
        };
        match parts.as_slice() {
            [v] => {
                let v = num(v)?;
                Grid1d::new(v, v, 1)
            }
            [lo, hi, n] => {
                let n = n
                    .parse::<usize>()
                    .map_err(|_| Error::param("grid", format!("`{n}` is not a count")))?;
                Grid1d::new(num(lo)?, num(hi)?, n)
            }
            _ => Err(Error::param("grid", format!("expected min:max:count, got `{s}`"))),
        }
    }
}

impl std::fmt::Display for Grid1d {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.count)
    }
}

/// Values on a `t × x` grid, row-major with `t` outer.
#[derive(Debug, Clone)]
pub struct SolutionField {
    pub x: Vec<f64>,
    pub t: Vec<f64>,
    pub values: Vec<Complex64>,
    pub problem: KgProblem,
    /// `None` for the `n → ∞` limit.
    pub n: Option<u32>,
}

impl SolutionField {
    pub fn evaluate(evolution: &KgEvolution, x: &[f64], t: &[f64]) -> Self {
        let values = sweep(x, t, |x, t| evolution.eval(x, t));
        SolutionField {
            x: x.to_vec(),
            t: t.to_vec(),
            values,
            problem: *evolution.problem(),
            n: Some(evolution.n()),
        }
    }

    pub fn evaluate_limit(evolution: &KgEvolution, x: &[f64], t: &[f64]) -> Self {
        let values = sweep(x, t, |x, t| evolution.limit(x, t));
        SolutionField {
            x: x.to_vec(),
            t: t.to_vec(),
            values,
            problem: *evolution.problem(),
            n: None,
        }
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        let w = self.x.len();
        &self.values[i * w..(i + 1) * w]
    }

    pub fn rows(&self) -> impl Iterator<Item = (f64, &[Complex64])> {
        self.t.iter().copied().zip(self.values.chunks(self.x.len().max(1)))
    }

    /// `# key=value` lines describing the run.
    pub fn metadata(&self) -> Vec<(String, String)> {
        let mut meta = vec![
            ("n".to_string(), self.n.map_or("inf".to_string(), |n| n.to_string())),
            ("m".to_string(), self.problem.m.to_string()),
        ];
        match self.problem.initial {
            InitialData::ProblemOne { a } => {
                meta.push(("case".into(), "p1".into()));
                meta.push(("a".into(), a.to_string()));
            }
            InitialData::ProblemTwo { a, b } => {
                meta.push(("case".into(), "p2".into()));
                meta.push(("a".into(), a.to_string()));
                meta.push(("b".into(), b.to_string()));
            }
        }
        meta.push(("source".into(), source_name(self.problem.source).into()));
        meta
    }

    pub fn write_csv<W: Write>(&self, out: W, extra: &[(String, String)]) -> io::Result<()> {
        let mut meta = self.metadata();
        meta.extend(extra.iter().cloned());
        write_csv(out, &meta, self.rows().flat_map(|(t, row)| {
            self.x.iter().zip(row).map(move |(&x, &v)| (x, t, v))
        }))
    }

    pub fn to_csv_string(&self, extra: &[(String, String)]) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf, extra).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8 output")
    }
}

fn sweep<F>(x: &[f64], t: &[f64], f: F) -> Vec<Complex64>
where
    F: Fn(f64, f64) -> Complex64 + Sync,
{
    t.par_iter()
        .map(|&t| x.iter().map(|&x| f(x, t)).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .concat()
}

pub fn source_name(s: SourceCase) -> &'static str {
    match s {
        SourceCase::Zero => "zero",
        SourceCase::DiracSpace => "dirac-space",
        SourceCase::DiracSpaceTime => "dirac-spacetime",
    }
}

pub fn parse_source(s: &str) -> Result<SourceCase> {
    match s {
        "zero" | "none" => Ok(SourceCase::Zero),
        "dirac-space" => Ok(SourceCase::DiracSpace),
        "dirac-spacetime" => Ok(SourceCase::DiracSpaceTime),
        other => Err(Error::param("source", format!("unknown source `{other}`"))),
    }
}

pub fn write_csv<W, I>(mut out: W, meta: &[(String, String)], rows: I) -> io::Result<()>
where
    W: Write,
    I: IntoIterator<Item = (f64, f64, Complex64)>,
{
    let mut line = String::new();
    for (k, v) in meta {
        writeln!(out, "# {k}={v}")?;
    }
    writeln!(out, "{CSV_HEADER}")?;
    for (x, t, v) in rows {
        line.clear();
        let _ = write!(line, "{x},{t},{},{}", v.re, v.im);
        writeln!(out, "{line}")?;
    }
    out.flush()
}

/// A parsed CSV document: preamble, header columns and numeric rows.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CsvDocument {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvDocument {
    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

pub fn read_csv<R: BufRead>(input: R) -> Result<CsvDocument> {
    let mut doc = CsvDocument::default();
    for (lineno, line) in input.lines().enumerate() {
        let line = line.map_err(|e| Error::InvalidProblem(format!("read error: {e}")))?;
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.trim().split_once('=') {
                doc.meta.push((k.trim().to_string(), v.trim().to_string()));
            }
            continue;
        }
        if doc.columns.is_empty() {
            doc.columns = line.split(',').map(|c| c.trim().to_string()).collect();
            continue;
        }
        let row = line
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::InvalidProblem(format!("line {}: {e}", lineno + 1)))?;
        if row.len() != doc.columns.len() {
            return Err(Error::InvalidProblem(format!(
                "line {}: {} fields, header has {}",
                lineno + 1,
                row.len(),
                doc.columns.len()
            )));
        }
        doc.rows.push(row);
    }
    Ok(doc)
}

/// Built-in parameter sets for the two published plots.
pub mod presets {
    use super::*;

    pub const FIGURE1_N: u32 = 10;
    pub const FIGURE1_M: f64 = 3.0;
    /// The plotted values of `a` are not stated; these are a documented choice.
    pub const FIGURE1_A: [f64; 3] = [1.5, 2.0, 4.0];
    pub const FIGURE1_X: Grid1d = Grid1d { min: -10.0, max: 10.0, count: 2001 };

    pub const FIGURE2_N: u32 = 10;
    pub const FIGURE2_A: f64 = 1.5;
    pub const FIGURE2_M: f64 = 3.0;
    pub const FIGURE2_X: Grid1d = Grid1d { min: -10.0, max: 10.0, count: 401 };
    pub const FIGURE2_T: Grid1d = Grid1d { min: 0.0, max: 5.0, count: 51 };

    /// `u_n(x, 0)` at `m = 3`, `n = 10`, one field per `a`.
    pub fn figure1(a_list: &[f64], x: Grid1d) -> Result<Vec<(f64, SolutionField)>> {
        let xs = x.points();
        a_list
            .iter()
            .map(|&a| {
                let p = KgProblem::new(FIGURE1_M, InitialData::ProblemOne { a }, SourceCase::Zero)?;
                let ev = KgEvolution::new(FIGURE1_N, p)?;
                Ok((a, SolutionField::evaluate(&ev, &xs, &[0.0])))
            })
            .collect()
    }

    /// `u_n(x, t)` at `n = 10`, `a = 1.5`, `m = 3`.
    pub fn figure2(x: Grid1d, t: Grid1d) -> Result<SolutionField> {
        let p = KgProblem::new(FIGURE2_M, InitialData::ProblemOne { a: FIGURE2_A }, SourceCase::Zero)?;
        let ev = KgEvolution::new(FIGURE2_N, p)?;
        Ok(SolutionField::evaluate(&ev, &x.points(), &t.points()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superosc::{Superoscillation, SuperoscillationParams};

    #[test]
    fn grid_parsing() {
        let g: Grid1d = "-1:1:5".parse().unwrap();
        assert_eq!(g.points(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        let g: Grid1d = "0".parse().unwrap();
        assert_eq!(g.points(), vec![0.0]);
        assert_eq!("0:1:7".parse::<Grid1d>().unwrap().points().last(), Some(&1.0));
        for bad in ["1:0:3", "0:1:0", "0:0:3", "a:1:2", "0:1", "0:1:x"] {
            assert!(bad.parse::<Grid1d>().is_err(), "{bad}");
        }
        assert_eq!("-2.5:3:11".parse::<Grid1d>().unwrap().to_string(), "-2.5:3:11");
    }

    #[test]
    fn dimensions_and_order() {
        let p = KgProblem::new(1.0, InitialData::ProblemOne { a: 2.0 }, SourceCase::Zero).unwrap();
        let ev = KgEvolution::new(4, p).unwrap();
        let f = SolutionField::evaluate(&ev, &[0.0, 1.0, 2.0], &[0.0, 0.5]);
        assert_eq!(f.values.len(), 6);
        assert_eq!(f.row(1)[2], ev.eval(2.0, 0.5));
        let csv = f.to_csv_string(&[]);
        let doc = read_csv(csv.as_bytes()).unwrap();
        assert_eq!(doc.columns, vec!["x", "t", "re", "im"]);
        assert_eq!(doc.rows[4][..2], [1.0, 0.5]);
        assert_eq!(doc.meta_value("case"), Some("p1"));
    }

    #[test]
    fn csv_round_trips_exactly() {
        let f = presets::figure2(Grid1d::new(-3.0, 3.0, 13).unwrap(), Grid1d::new(0.0, 1.0, 3).unwrap()).unwrap();
        let doc = read_csv(f.to_csv_string(&[]).as_bytes()).unwrap();
        for (row, v) in doc.rows.iter().zip(&f.values) {
            assert_eq!(row[2].to_bits(), v.re.to_bits());
            assert_eq!(row[3].to_bits(), v.im.to_bits());
        }
    }

    #[test]
    fn figure1_initial_slice_is_fn() {
        for (a, field) in presets::figure1(&presets::FIGURE1_A, Grid1d::new(-10.0, 10.0, 41).unwrap()).unwrap() {
            let so = Superoscillation::new(SuperoscillationParams::new(10, a).unwrap()).unwrap();
            for (&x, &v) in field.x.iter().zip(field.row(0)) {
                assert_eq!(v, so.eval_sum(x));
            }
        }
    }

    #[test]
    fn output_is_deterministic() {
        let g = Grid1d::new(-2.0, 2.0, 9).unwrap();
        let t = Grid1d::new(0.0, 2.0, 5).unwrap();
        let a = presets::figure2(g, t).unwrap().to_csv_string(&[]);
        let b = presets::figure2(g, t).unwrap().to_csv_string(&[]);
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_ragged_rows() {
        assert!(read_csv("x,t\n1,2,3\n".as_bytes()).is_err());
        assert!(read_csv("x,t\n1,abc\n".as_bytes()).is_err());
    }
}
