//! Report rows and their JSON, CSV and table renderings.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::args::Format;

/// Version tag written at the top of every CSV file.
pub const CSV_SCHEMA: &str = "# schema=1";

const ABSENT: &str = "-";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowVerdict {
    Pass,
    Fail,
    Skipped,
}

impl RowVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            RowVerdict::Pass => "pass",
            RowVerdict::Fail => "fail",
            RowVerdict::Skipped => "skipped",
        }
    }
}

/// One field's spectrum, closed-form branch and verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub p: u64,
    pub n: u32,
    pub q: u64,
    pub d: u64,
    pub gcd: u64,
    pub branch: Option<String>,
    pub lambda1: Option<i64>,
    pub lambda2: Option<i64>,
    pub omega: Vec<u64>,
    pub uniformity: Option<u64>,
    pub n4: Option<u128>,
    pub verdict: RowVerdict,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharsumRow {
    pub curve: u8,
    pub p: u64,
    pub n: u32,
    pub q: u64,
    pub lambda_p1: i64,
    pub s_sequence: Vec<i64>,
    pub lambda_pn: i64,
    /// Direct character sum over F_q, when q is within the enumeration budget.
    pub direct: Option<i64>,
    /// `4q - lambda^2`.
    pub hasse_margin: i128,
    pub points: i128,
    pub verdict: RowVerdict,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub p: u64,
    pub n: u32,
    pub q: u64,
    pub d: u64,
    pub max_uniformity: u64,
    pub worst_c: String,
    pub bound: u64,
    pub verdict: RowVerdict,
    pub wall_ms: f64,
}

/// Flat string columns shared by the CSV and table renderings.
pub trait Tabular: Serialize {
    fn columns(&self, omega_width: usize) -> Vec<(String, String)>;

    fn omega_len(&self) -> usize {
        0
    }
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| ABSENT.to_string(), T::to_string)
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn ms(v: f64) -> String {
    format!("{v:.3}")
}

impl Tabular for ReportRow {
    fn columns(&self, omega_width: usize) -> Vec<(String, String)> {
        let mut cols = vec![
            ("p".into(), self.p.to_string()),
            ("n".into(), self.n.to_string()),
            ("q".into(), self.q.to_string()),
            ("d".into(), self.d.to_string()),
            ("gcd".into(), self.gcd.to_string()),
            ("branch".into(), opt(&self.branch)),
            ("lambda1".into(), opt(&self.lambda1)),
            ("lambda2".into(), opt(&self.lambda2)),
        ];
        for i in 0..omega_width {
            let v = if self.omega.is_empty() {
                ABSENT.to_string()
            } else {
                self.omega.get(i).copied().unwrap_or(0).to_string()
            };
            cols.push((format!("omega_{i}"), v));
        }
        cols.push(("uniformity".into(), opt(&self.uniformity)));
        cols.push(("n4".into(), opt(&self.n4)));
        cols.push(("verdict".into(), self.verdict.as_str().into()));
        cols.push(("wall_ms".into(), ms(self.wall_ms)));
        cols
    }

    fn omega_len(&self) -> usize {
        self.omega.len()
    }
}

impl Tabular for CharsumRow {
    fn columns(&self, _: usize) -> Vec<(String, String)> {
        vec![
            ("curve".into(), self.curve.to_string()),
            ("p".into(), self.p.to_string()),
            ("n".into(), self.n.to_string()),
            ("q".into(), self.q.to_string()),
            ("lambda_p1".into(), self.lambda_p1.to_string()),
            ("s_sequence".into(), join(&self.s_sequence)),
            ("lambda_pn".into(), self.lambda_pn.to_string()),
            ("direct".into(), opt(&self.direct)),
            ("hasse_margin".into(), self.hasse_margin.to_string()),
            ("points".into(), self.points.to_string()),
            ("verdict".into(), self.verdict.as_str().into()),
            ("wall_ms".into(), ms(self.wall_ms)),
        ]
    }
}

impl Tabular for BoundRow {
    fn columns(&self, _: usize) -> Vec<(String, String)> {
        vec![
            ("p".into(), self.p.to_string()),
            ("n".into(), self.n.to_string()),
            ("q".into(), self.q.to_string()),
            ("d".into(), self.d.to_string()),
            ("max_uniformity".into(), self.max_uniformity.to_string()),
            ("worst_c".into(), self.worst_c.clone()),
            ("bound".into(), self.bound.to_string()),
            ("verdict".into(), self.verdict.as_str().into()),
            ("wall_ms".into(), ms(self.wall_ms)),
        ]
    }
}

/// Pads every spectrum with zeros to the widest one so columns line up.
pub fn align(rows: &mut [ReportRow]) {
    let width = rows.iter().map(|r| r.omega.len()).max().unwrap_or(0);
    for r in rows.iter_mut().filter(|r| !r.omega.is_empty()) {
        r.omega.resize(width, 0);
    }
}

pub fn write_rows<R: Tabular>(rows: &[R], format: Format, out: &mut dyn Write) -> io::Result<()> {
    let width = rows.iter().map(Tabular::omega_len).max().unwrap_or(0);
    match format {
        Format::Json => {
            for r in rows {
                serde_json::to_writer(&mut *out, r)?;
                out.write_all(b"\n")?;
            }
        }
        Format::Csv => {
            writeln!(out, "{CSV_SCHEMA}")?;
            let mut w = csv::Writer::from_writer(&mut *out);
            if let Some(first) = rows.first() {
                w.write_record(first.columns(width).iter().map(|(k, _)| k))?;
            }
            for r in rows {
                w.write_record(r.columns(width).iter().map(|(_, v)| v))?;
            }
            w.flush()?;
        }
        Format::Table => {
            let table: Vec<Vec<(String, String)>> = rows.iter().map(|r| r.columns(width)).collect();
            let Some(first) = table.first() else {
                return Ok(());
            };
            let widths: Vec<usize> = (0..first.len())
                .map(|i| {
                    table
                        .iter()
                        .map(|r| r[i].1.len())
                        .chain([first[i].0.len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |cells: Vec<&str>| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            writeln!(
                out,
                "{}",
                line(first.iter().map(|(k, _)| k.as_str()).collect())
            )?;
            for r in &table {
                writeln!(out, "{}", line(r.iter().map(|(_, v)| v.as_str()).collect()))?;
            }
        }
    }
    Ok(())
}

/// `S = {omega_0=2, omega_1=3, omega_2=2}`, listing only nonzero counts.
pub fn multiset(omega: &[u64]) -> String {
    let parts: Vec<String> = omega
        .iter()
        .enumerate()
        .filter(|&(_, &w)| w > 0)
        .map(|(i, w)| format!("omega_{i}={w}"))
        .collect();
    format!("S = {{{}}}", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(omega: Vec<u64>) -> ReportRow {
        ReportRow {
            p: 7,
            n: 1,
            q: 7,
            d: 5,
            gcd: 1,
            branch: Some("3mod4".into()),
            lambda1: Some(0),
            lambda2: None,
            omega,
            uniformity: Some(2),
            n4: Some(73),
            verdict: RowVerdict::Pass,
            wall_ms: 0.5,
        }
    }

    #[test]
    fn csv_marks_absent_values_and_pads() {
        let mut rows = vec![row(vec![2, 3, 2]), row(vec![1, 1, 1, 1])];
        align(&mut rows);
        let mut buf = Vec::new();
        write_rows(&rows, Format::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_SCHEMA);
        assert!(lines[1]
            .starts_with("p,n,q,d,gcd,branch,lambda1,lambda2,omega_0,omega_1,omega_2,omega_3,"));
        assert_eq!(lines[2], "7,1,7,5,1,3mod4,0,-,2,3,2,0,2,73,pass,0.500");
    }

    #[test]
    fn csv_quotes_fields_with_commas() {
        let r = BoundRow {
            p: 5,
            n: 2,
            q: 25,
            d: 14,
            max_uniformity: 4,
            worst_c: "0,1".into(),
            bound: 9,
            verdict: RowVerdict::Pass,
            wall_ms: 0.0,
        };
        let mut buf = Vec::new();
        write_rows(&[r], Format::Csv, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().contains(",\"0,1\","));
    }

    #[test]
    fn multiset_skips_zero_counts() {
        assert_eq!(
            multiset(&[3, 0, 1, 1, 0]),
            "S = {omega_0=3, omega_2=1, omega_3=1}"
        );
    }
}
