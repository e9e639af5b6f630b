//! Discrete Poisson solve for the potential from a given charge state, under
//! Dirichlet or Robin boundary conditions.
//!
//! The flux balance per cell is
//!
//! ```text
//! -( Psi_{j+1/2} - Psi_{j-1/2} ) / h = A_j S_j
//! ```
//!
//! with interior fluxes `Psi_{j+1/2} = eps A_{j+1/2} (psi_{j+1} - psi_j)/h`.
//! The assembled rows below are scaled by h^2/eps.

use crate::linalg::TridiagonalSystem;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PoissonBc {
    /// psi prescribed at both walls; ghost fluxes carry a factor 2.
    Dirichlet { psi_l: f64, psi_r: f64 },
    /// +-eta psi_x + psi prescribed; the natural partner of zero-flux
    /// transport walls.
    Robin { eta: f64, psi_minus: f64, psi_plus: f64 },
}

#[derive(Debug, Clone)]
pub struct PoissonProblem {
    /// Cell spacing.
    pub h: f64,
    /// Cell averages A_j, length N.
    pub a_cell: Vec<f64>,
    /// Interface values A_{j+1/2}, length N+1.
    pub a_face: Vec<f64>,
    pub epsilon: f64,
    pub bc: PoissonBc,
}

impl PoissonProblem {
    fn validate(&self, s_cell: &[f64]) -> Result<usize> {
        let n = self.a_cell.len();
        if n < 2 || self.a_face.len() != n + 1 || s_cell.len() != n {
            return Err(Error::Config(format!(
                "poisson dimension mismatch: N={n}, a_face {}, s {}",
                self.a_face.len(),
                s_cell.len()
            )));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::Config("dielectric coefficient must be positive".into()));
        }
        if let PoissonBc::Robin { eta, .. } = self.bc {
            if !(eta > 0.0) {
                return Err(Error::Config("Robin parameter eta must be positive".into()));
            }
        }
        Ok(n)
    }

    /// Assemble the (h^2/eps)-scaled system for psi.
    pub fn assemble(&self, s_cell: &[f64]) -> Result<TridiagonalSystem> {
        let n = self.validate(s_cell)?;
        let scale = self.h * self.h / self.epsilon;
        let mut lower = vec![0.0; n - 1];
        let mut upper = vec![0.0; n - 1];
        let mut diag = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for j in 0..n {
            diag[j] = self.a_face[j] + self.a_face[j + 1];
            rhs[j] = scale * self.a_cell[j] * s_cell[j];
            if j > 0 {
                lower[j - 1] = -self.a_face[j];
            }
            if j + 1 < n {
                upper[j] = -self.a_face[j + 1];
            }
        }
        match self.bc {
            PoissonBc::Dirichlet { psi_l, psi_r } => {
                diag[0] = 2.0 * self.a_face[0] + self.a_face[1];
                diag[n - 1] = self.a_face[n - 1] + 2.0 * self.a_face[n];
                rhs[0] += 2.0 * self.a_face[0] * psi_l;
                rhs[n - 1] += 2.0 * self.a_face[n] * psi_r;
            }
            PoissonBc::Robin {
                eta,
                psi_minus,
                psi_plus,
            } => {
                let he = self.h / eta;
                diag[0] = he * self.a_face[0] + self.a_face[1];
                diag[n - 1] = self.a_face[n - 1] + he * self.a_face[n];
                rhs[0] += he * self.a_face[0] * psi_minus;
                rhs[n - 1] += he * self.a_face[n] * psi_plus;
            }
        }
        TridiagonalSystem::new(lower, diag, upper, rhs)
    }

    /// Solve for the cell-average potential.
    pub fn solve(&self, s_cell: &[f64]) -> Result<Vec<f64>> {
        self.assemble(s_cell)?.thomas_solve()
    }

    /// Check the quadratic-form bound on the Robin matrix M:
    /// `zeta . M^-1 zeta <= N^2 eta / (A_{1/2} + A_{N+1/2}) * ||zeta||^2`.
    pub fn robin_matrix_bound_check(&self, zeta: &[f64]) -> Result<bool> {
        let PoissonBc::Robin { eta, .. } = self.bc else {
            return Err(Error::Config(
                "robin_matrix_bound_check requires Robin boundary conditions".into(),
            ));
        };
        let n = self.validate(zeta)?;
        let mut sys = self.assemble(&vec![0.0; n])?;
        sys.rhs = zeta.to_vec();
        let w = sys.thomas_solve()?;
        let quad: f64 = zeta.iter().zip(&w).map(|(z, wi)| z * wi).sum();
        let norm2: f64 = zeta.iter().map(|z| z * z).sum();
        let bound = (n * n) as f64 * eta / (self.a_face[0] + self.a_face[n]) * norm2;
        Ok(quad <= bound * (1.0 + 1e-12) + f64::MIN_POSITIVE)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn uniform(n: usize, bc: PoissonBc) -> PoissonProblem {
        PoissonProblem {
            h: 1.0 / n as f64,
            a_cell: vec![1.0; n],
            a_face: vec![1.0; n + 1],
            epsilon: 1.0,
            bc,
        }
    }

    #[test]
    fn zero_data_gives_zero_potential() {
        let p = uniform(10, PoissonBc::Dirichlet { psi_l: 0.0, psi_r: 0.0 });
        let psi = p.solve(&vec![0.0; 10]).unwrap();
        assert!(psi.iter().all(|&v| v.abs() < 1e-15));
    }

    #[test]
    fn robin_constant_solution() {
        let v0 = 2.5;
        let p = uniform(
            12,
            PoissonBc::Robin {
                eta: 0.3,
                psi_minus: v0,
                psi_plus: v0,
            },
        );
        let psi = p.solve(&vec![0.0; 12]).unwrap();
        for v in psi {
            assert!((v - v0).abs() < 1e-12);
        }
    }

    #[test]
    fn both_matrices_are_m_structured() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let n = rng.gen_range(2..40);
            let p = PoissonProblem {
                h: 1.0 / n as f64,
                a_cell: (0..n).map(|_| rng.gen_range(0.1..40.0)).collect(),
                a_face: (0..=n).map(|_| rng.gen_range(0.1..40.0)).collect(),
                epsilon: rng.gen_range(1e-5..1.0),
                bc: PoissonBc::Dirichlet { psi_l: 0.0, psi_r: 0.5 },
            };
            assert!(p.assemble(&vec![0.0; n]).unwrap().verify_m_structure());
            let mut p = p;
            p.bc = PoissonBc::Robin {
                eta: rng.gen_range(1e-3..10.0),
                psi_minus: -0.1,
                psi_plus: 0.1,
            };
            assert!(p.assemble(&vec![0.0; n]).unwrap().verify_m_structure());
        }
    }

    #[test]
    fn dirichlet_maximum_principle_for_zero_charge() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let n = rng.gen_range(2..64);
            let (lo, hi) = (rng.gen_range(-2.0..0.0), rng.gen_range(0.0..2.0));
            let p = PoissonProblem {
                h: 1.0 / n as f64,
                a_cell: (0..n).map(|_| rng.gen_range(0.1..5.0)).collect(),
                a_face: (0..=n).map(|_| rng.gen_range(0.1..5.0)).collect(),
                epsilon: 1.0,
                bc: PoissonBc::Dirichlet { psi_l: lo, psi_r: hi },
            };
            let psi = p.solve(&vec![0.0; n]).unwrap();
            for v in psi {
                assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
            }
        }
    }

    #[test]
    fn manufactured_solution_second_order() {
        // psi_exact = sin(pi x), A = 1, eps = 1: S = pi^2 sin(pi x).
        let exact = |x: f64| (std::f64::consts::PI * x).sin();
        let mut errs = Vec::new();
        for &n in &[20usize, 40, 80] {
            let h = 1.0 / n as f64;
            let p = uniform(n, PoissonBc::Dirichlet { psi_l: 0.0, psi_r: 0.0 });
            let s: Vec<f64> = (0..n)
                .map(|j| {
                    let x = (j as f64 + 0.5) * h;
                    std::f64::consts::PI.powi(2) * exact(x)
                })
                .collect();
            let psi = p.solve(&s).unwrap();
            let err = (0..n)
                .map(|j| (psi[j] - exact((j as f64 + 0.5) * h)).abs())
                .fold(0.0f64, f64::max);
            errs.push(err);
        }
        let order1 = (errs[0] / errs[1]).log2();
        let order2 = (errs[1] / errs[2]).log2();
        assert!(order1 > 1.8 && order2 > 1.8, "orders {order1} {order2}");
    }

    #[test]
    fn residual_of_flux_balance() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let n = 32;
        let h = 1.0 / n as f64;
        let p = PoissonProblem {
            h,
            a_cell: (0..n).map(|_| rng.gen_range(0.5..3.0)).collect(),
            a_face: (0..=n).map(|_| rng.gen_range(0.5..3.0)).collect(),
            epsilon: 0.37,
            bc: PoissonBc::Robin {
                eta: 0.2,
                psi_minus: -1.0,
                psi_plus: 1.0,
            },
        };
        let s: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let psi = p.solve(&s).unwrap();
        // rebuild interface fluxes and check the defining balance
        let eta = 0.2;
        let mut flux = vec![0.0; n + 1];
        for j in 1..n {
            flux[j] = p.epsilon * p.a_face[j] * (psi[j] - psi[j - 1]) / h;
        }
        flux[0] = p.epsilon / eta * p.a_face[0] * (psi[0] - (-1.0));
        flux[n] = p.epsilon / eta * p.a_face[n] * (1.0 - psi[n - 1]);
        for j in 0..n {
            let lhs = -(flux[j + 1] - flux[j]) / h;
            let rhs = p.a_cell[j] * s[j];
            assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()) / h, "j={j}");
        }
    }

    #[test]
    fn robin_bound_zero_zeta_and_constant_counterexample() {
        let p = uniform(
            16,
            PoissonBc::Robin {
                eta: 0.5,
                psi_minus: 0.0,
                psi_plus: 0.0,
            },
        );
        assert!(p.robin_matrix_bound_check(&vec![0.0; 16]).unwrap());
        // The constant direction has Rayleigh quotient exactly equal to the
        // advertised lower bound on the smallest eigenvalue, so the true
        // smallest eigenvalue sits strictly below it and the quadratic-form
        // inequality FAILS here (ratio ~1.27). The check reports that
        // honestly rather than asserting the inequality as a theorem.
        assert!(!p.robin_matrix_bound_check(&vec![1.0; 16]).unwrap());
    }

    #[test]
    fn robin_bound_check_agrees_with_dense_evaluation() {
        // the checker itself must agree with an independent evaluation of
        // the inequality: solve M w = zeta, verify the residual, and compare
        // zeta.w against the bound by hand
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let (mut holds, mut fails) = (0u32, 0u32);
        for _ in 0..200 {
            let n = rng.gen_range(2..128);
            let eta = rng.gen_range(1e-2..10.0f64);
            let p = PoissonProblem {
                h: 1.0 / n as f64,
                a_cell: (0..n).map(|_| rng.gen_range(0.1..40.0)).collect(),
                a_face: (0..=n).map(|_| rng.gen_range(0.1..40.0)).collect(),
                epsilon: 1.0,
                bc: PoissonBc::Robin {
                    eta,
                    psi_minus: 0.0,
                    psi_plus: 0.0,
                },
            };
            let zeta: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut sys = p.assemble(&vec![0.0; n]).unwrap();
            sys.rhs = zeta.clone();
            let w = sys.thomas_solve().unwrap();
            let residual: f64 = sys
                .apply(&w)
                .iter()
                .zip(&zeta)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(residual <= 1e-9, "solve residual {residual}");
            let quad: f64 = zeta.iter().zip(&w).map(|(z, wi)| z * wi).sum();
            let norm2: f64 = zeta.iter().map(|z| z * z).sum();
            let bound = (n * n) as f64 * eta / (p.a_face[0] + p.a_face[n]) * norm2;
            let expected = quad <= bound * (1.0 + 1e-12) + f64::MIN_POSITIVE;
            assert_eq!(p.robin_matrix_bound_check(&zeta).unwrap(), expected);
            if expected {
                holds += 1;
            } else {
                fails += 1;
            }
        }
        // the inequality is usually but not always satisfied on this ensemble
        assert!(holds > 150, "held {holds}/200");
        assert!(fails > 0, "expected at least one violation, saw none");
    }
}
