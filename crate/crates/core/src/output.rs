//! CSV exports, the report format and tolerance-aware report comparison.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::fields::{ElementField2, ElementField3, NodalScalarField};
use crate::observables::EnergyReport;

pub const REPORT_HEADER: &str =
    "experiment, m_ux, m_uy, m_uz, U_curv, U_fric, U_grav, balance, mean_exit_time";

/// Metadata line written above the report header.
pub const REPORT_UNITS: &str = "# units: m_u in cm/s; U_curv, U_fric, U_grav, balance in erg/s; \
mean_exit_time in s; evaluated in SI from unit-annotated inputs (the published parameter list \
mixes SI and CGS labels)";

/// `tri_id, vx, vy`.
pub fn field2_csv(v: &ElementField2) -> String {
    let mut out = String::from("tri_id, vx, vy\n");
    for (k, x) in v.0.iter().enumerate() {
        writeln!(out, "{k}, {:e}, {:e}", x.x, x.y).unwrap();
    }
    out
}

/// `tri_id, vx, vy, vz`.
pub fn field3_csv(u: &ElementField3) -> String {
    let mut out = String::from("tri_id, vx, vy, vz\n");
    for (k, x) in u.0.iter().enumerate() {
        writeln!(out, "{k}, {:e}, {:e}, {:e}", x.x, x.y, x.z).unwrap();
    }
    out
}

/// `vertex_id, <name>`.
pub fn nodal_csv(name: &str, f: &NodalScalarField) -> String {
    let mut out = format!("vertex_id, {name}\n");
    for (i, x) in f.values().iter().enumerate() {
        writeln!(out, "{i}, {x:e}").unwrap();
    }
    out
}

/// `tri_id, psi`; stranded triangles are written as `inf`.
pub fn psi_csv(psi: &[f64]) -> String {
    let mut out = String::from("tri_id, psi\n");
    for (k, x) in psi.iter().enumerate() {
        writeln!(out, "{k}, {x:e}").unwrap();
    }
    out
}

/// `t, phi_<K1>, phi_<K2>, ...`, one row per time.
pub fn phi_csv(times: &[f64], elements: &[usize], rows: &[Vec<f64>]) -> String {
    let mut out = String::from("t");
    for k in elements {
        write!(out, ", phi_{k}").unwrap();
    }
    out.push('\n');
    for (t, row) in times.iter().zip(rows) {
        write!(out, "{t:e}").unwrap();
        for x in row {
            write!(out, ", {x:e}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Report rows in CGS units under the units line and header.
pub fn report_csv(rows: &[(&str, &EnergyReport)]) -> String {
    let mut out = format!("{REPORT_UNITS}\n{REPORT_HEADER}\n");
    for (name, r) in rows {
        let c = r.to_cgs();
        writeln!(
            out,
            "{name}, {:e}, {:e}, {:e}, {:e}, {:e}, {:e}, {:e}, {:e}",
            c.m_u.x, c.m_u.y, c.m_u.z, c.u_curv, c.u_fric, c.u_grav, c.balance, c.mean_exit_time
        )
        .unwrap();
    }
    out
}

/// Column names after `experiment`.
pub const REPORT_COLUMNS: [&str; 8] =
    ["m_ux", "m_uy", "m_uz", "U_curv", "U_fric", "U_grav", "balance", "mean_exit_time"];

/// One parsed report line.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub experiment: String,
    pub values: [f64; 8],
}

pub fn parse_report_csv(text: &str) -> Result<Vec<ReportRow>> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    match lines.next() {
        Some((_, h)) if h.split(',').map(str::trim).eq(REPORT_HEADER.split(", ")) => {}
        Some((i, _)) => {
            return Err(Error::InvalidInput(format!("line {}: unexpected report header", i + 1)));
        }
        None => return Err(Error::InvalidInput("empty report".into())),
    }
    lines
        .map(|(i, l)| {
            let cells: Vec<&str> = l.split(',').map(str::trim).collect();
            if cells.len() != 9 {
                return Err(Error::InvalidInput(format!(
                    "line {}: expected 9 columns, found {}",
                    i + 1,
                    cells.len()
                )));
            }
            let mut values = [0.0; 8];
            for (v, c) in values.iter_mut().zip(&cells[1..]) {
                *v = c.parse().map_err(|_| {
                    Error::InvalidInput(format!("line {}: `{c}` is not a number", i + 1))
                })?;
            }
            Ok(ReportRow { experiment: cells[0].to_string(), values })
        })
        .collect()
}

/// Relative and absolute tolerances for [`report_diff`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { rel: 1e-9, abs: 1e-12 }
    }
}

impl Tolerance {
    /// Equal infinities match, other non-finite pairs do not; otherwise
    /// `|a − b| ≤ abs + rel·max(|a|, |b|)`.
    pub fn matches(&self, a: f64, b: f64) -> bool {
        if a == b {
            return true;
        }
        if !(a.is_finite() && b.is_finite()) {
            return false;
        }
        (a - b).abs() <= self.abs + self.rel * a.abs().max(b.abs())
    }
}

/// Differences between two reports, one message per mismatch. Rows are
/// matched by experiment name.
pub fn report_diff(a: &[ReportRow], b: &[ReportRow], tol: Tolerance) -> Vec<String> {
    let mut out = Vec::new();
    for ra in a {
        let Some(rb) = b.iter().find(|r| r.experiment == ra.experiment) else {
            out.push(format!("{}: missing from second report", ra.experiment));
            continue;
        };
        for (i, name) in REPORT_COLUMNS.iter().enumerate() {
            let (x, y) = (ra.values[i], rb.values[i]);
            if !tol.matches(x, y) {
                out.push(format!("{}: {name} {x:e} vs {y:e}", ra.experiment));
            }
        }
    }
    for rb in b {
        if !a.iter().any(|r| r.experiment == rb.experiment) {
            out.push(format!("{}: missing from first report", rb.experiment));
        }
    }
    out
}
