//! One semi-implicit step of the model drift-diffusion equation
//!
//! ```text
//! A(x) u_t = ( B(x) e^phi ( u e^-phi )_x )_x
//! ```
//!
//! in Slotboom variables G_j = u_j^{n+1} e^{-phi_j}. The assembled system is
//! an M-matrix for the zero-flux and first-order Dirichlet boundary fluxes,
//! so nonnegative data stays nonnegative for any time step.

use crate::linalg::TridiagonalSystem;
use crate::{Error, Result};

/// Accuracy of the Dirichlet boundary flux.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluxOrder {
    /// One-sided difference without the factor 2; loses an order at the wall.
    Zeroth,
    /// Ghost-value flux with factor 2; keeps second-order accuracy overall.
    First,
    /// Three-point one-sided flux; second order at the wall but the boundary
    /// rows are not guaranteed to keep the M-structure.
    Second,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoundarySpec {
    /// Prescribed boundary densities (must be nonnegative for the positivity
    /// guarantee to apply).
    Dirichlet { u_l: f64, u_r: f64 },
    ZeroFlux,
}

/// One fully assembled time step of the model equation on N cells.
#[derive(Debug, Clone)]
pub struct TransportProblem {
    /// Cell spacing.
    pub h: f64,
    /// Cell averages A_j, length N.
    pub a_cell: Vec<f64>,
    /// Interface values B_{j+1/2}, length N+1.
    pub b_face: Vec<f64>,
    /// phi^n at cell centers, length N.
    pub phi_cell: Vec<f64>,
    /// phi^n at interfaces, length N+1. Interior faces are usually the
    /// midpoint average of the adjacent cell values; the two boundary faces
    /// carry the prescribed boundary potential.
    pub phi_face: Vec<f64>,
    pub tau: f64,
    pub bc: BoundarySpec,
    pub flux_order: FluxOrder,
    /// Optional per-cell source (units of du/dt); enters the right-hand side
    /// as tau * A_j * f_j. Positivity is not claimed for negative sources.
    pub source_cell: Option<Vec<f64>>,
}

const PHI_LIMIT: f64 = 700.0;

impl TransportProblem {
    fn validate(&self, u_n: &[f64]) -> Result<usize> {
        let n = self.a_cell.len();
        if n < 2 {
            return Err(Error::Config("transport needs at least 2 cells".into()));
        }
        if self.b_face.len() != n + 1
            || self.phi_cell.len() != n
            || self.phi_face.len() != n + 1
            || u_n.len() != n
        {
            return Err(Error::Config(format!(
                "transport dimension mismatch: N={n}, b_face {}, phi_cell {}, phi_face {}, u_n {}",
                self.b_face.len(),
                self.phi_cell.len(),
                self.phi_face.len(),
                u_n.len()
            )));
        }
        if let Some(src) = &self.source_cell {
            if src.len() != n {
                return Err(Error::Config("source length mismatch".into()));
            }
        }
        if !(self.tau > 0.0 && self.h > 0.0) {
            return Err(Error::Config("tau and h must be positive".into()));
        }
        if self
            .phi_cell
            .iter()
            .chain(&self.phi_face)
            .any(|p| !p.is_finite() || p.abs() > PHI_LIMIT)
        {
            return Err(Error::Range(format!(
                "potential magnitude exceeds {PHI_LIMIT}; exponential fitting would overflow"
            )));
        }
        if let BoundarySpec::Dirichlet { u_l, u_r } = self.bc {
            if u_l < 0.0 || u_r < 0.0 {
                return Err(Error::Domain(
                    "Dirichlet boundary densities must be nonnegative".into(),
                ));
            }
        }
        Ok(n)
    }

    /// Assemble the linear system for the Slotboom unknowns G_j.
    pub fn assemble(&self, u_n: &[f64]) -> Result<TridiagonalSystem> {
        let n = self.validate(u_n)?;
        let lam = self.tau / (self.h * self.h);
        // w[j] = lambda * B_{j+1/2} e^{phi_{j+1/2}}, one per interface
        let w: Vec<f64> = (0..=n)
            .map(|j| lam * self.b_face[j] * self.phi_face[j].exp())
            .collect();
        let ec: Vec<f64> = self.phi_cell.iter().map(|p| p.exp()).collect();

        let mut lower = vec![0.0; n - 1];
        let mut upper = vec![0.0; n - 1];
        let mut diag = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for j in 0..n {
            diag[j] = self.a_cell[j] * ec[j] + w[j] + w[j + 1];
            rhs[j] = self.a_cell[j] * u_n[j];
            if j > 0 {
                lower[j - 1] = -w[j];
            }
            if j + 1 < n {
                upper[j] = -w[j + 1];
            }
        }
        if let Some(src) = &self.source_cell {
            for j in 0..n {
                rhs[j] += self.tau * self.a_cell[j] * src[j];
            }
        }

        match self.bc {
            BoundarySpec::ZeroFlux => {
                diag[0] -= w[0];
                diag[n - 1] -= w[n];
            }
            BoundarySpec::Dirichlet { u_l, u_r } => match self.flux_order {
                FluxOrder::Zeroth => {
                    rhs[0] += lam * self.b_face[0] * u_l;
                    rhs[n - 1] += lam * self.b_face[n] * u_r;
                }
                FluxOrder::First => {
                    diag[0] += w[0];
                    diag[n - 1] += w[n];
                    rhs[0] += 2.0 * lam * self.b_face[0] * u_l;
                    rhs[n - 1] += 2.0 * lam * self.b_face[n] * u_r;
                }
                FluxOrder::Second => {
                    diag[0] += 2.0 * w[0];
                    diag[n - 1] += 2.0 * w[n];
                    upper[0] -= w[0] / 3.0;
                    lower[n - 2] -= w[n] / 3.0;
                    rhs[0] += 8.0 / 3.0 * lam * self.b_face[0] * u_l;
                    rhs[n - 1] += 8.0 / 3.0 * lam * self.b_face[n] * u_r;
                }
            },
        }
        TridiagonalSystem::new(lower, diag, upper, rhs)
    }

    /// Advance one time level: solve for G and map back to u^{n+1}.
    pub fn step(&self, u_n: &[f64]) -> Result<Vec<f64>> {
        let sys = self.assemble(u_n)?;
        let g = sys.thomas_solve()?;
        Ok(g
            .iter()
            .zip(&self.phi_cell)
            .map(|(gj, p)| p.exp() * gj)
            .collect())
    }

    /// Interior interface flux U_{j+1/2} of the new iterate,
    /// `1 <= j_face <= N-1`.
    pub fn interior_flux(&self, u_next: &[f64], j_face: usize) -> f64 {
        let r = u_next[j_face] * (-self.phi_cell[j_face]).exp()
            - u_next[j_face - 1] * (-self.phi_cell[j_face - 1]).exp();
        self.b_face[j_face] * self.phi_face[j_face].exp() * r / self.h
    }
}
