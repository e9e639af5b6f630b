//! CSV emission. All floating values are written with 17 significant digits
//! so files round-trip through f64 exactly.

use super::convergence::ConvergenceRow;
use crate::pnp::{State, System};
use crate::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

fn fmt(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.16e}")
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)
        .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))
}

fn header(notes: &[String], columns: &[String]) -> String {
    let mut out = String::new();
    for note in notes {
        let _ = writeln!(out, "# {note}");
    }
    let _ = writeln!(out, "{}", columns.join(","));
    out
}

/// One row per cell: `x, c_1..c_m, psi`.
pub fn snapshot(system: &System, state: &State, notes: &[String]) -> String {
    let m = system.n_species();
    let mut columns = vec!["x".to_string()];
    columns.extend((1..=m).map(|i| format!("c_{i}")));
    columns.push("psi".to_string());
    let mut out = header(notes, &columns);
    for (j, &x) in system.grid().centers().iter().enumerate() {
        let mut row = vec![fmt(x)];
        row.extend((0..m).map(|i| fmt(state.c[i][j])));
        row.push(fmt(state.psi[j]));
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

/// One diagnostics sample: time, free energy (nan when undefined for the
/// boundary conditions), per-species mass, global minimum density, and the
/// max-norm potential increment of the latest step.
#[derive(Debug, Clone)]
pub struct SeriesSample {
    pub t: f64,
    pub energy: Option<f64>,
    pub mass: Vec<f64>,
    pub min_c: f64,
    pub dpsi_inf: f64,
}

pub fn series(samples: &[SeriesSample], n_species: usize, notes: &[String]) -> String {
    let mut columns = vec!["t".to_string(), "E_h".to_string()];
    columns.extend((1..=n_species).map(|i| format!("mass_{i}")));
    columns.push("min_c".to_string());
    columns.push("dpsi_inf".to_string());
    let mut out = header(notes, &columns);
    for s in samples {
        let mut row = vec![fmt(s.t), fmt(s.energy.unwrap_or(f64::NAN))];
        row.extend(s.mass.iter().map(|&m| fmt(m)));
        row.push(fmt(s.min_c));
        row.push(fmt(s.dpsi_inf));
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

/// `N, err_c1, ord_c1, err_c2, ord_c2, err_psi, ord_psi`; orders are nan on
/// the first row.
pub fn convergence(rows: &[ConvergenceRow], notes: &[String]) -> String {
    let columns = [
        "N", "err_c1", "ord_c1", "err_c2", "ord_c2", "err_psi", "ord_psi",
    ]
    .map(String::from);
    let mut out = header(notes, &columns);
    for r in rows {
        let mut row = vec![r.n.to_string()];
        for k in 0..3 {
            row.push(fmt(r.errors[k]));
            row.push(fmt(r.orders[k].unwrap_or(f64::NAN)));
        }
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

pub fn emit(path: &Path, text: &str) -> Result<()> {
    write_file(path, text)
}
