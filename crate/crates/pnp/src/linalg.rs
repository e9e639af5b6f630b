//! Tridiagonal systems, the Thomas solve, and the M-structure check backing
//! the positivity arguments.

use crate::{Error, Result};

/// Tridiagonal linear system `T x = rhs` with `lower`/`upper` of length N-1.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl TridiagonalSystem {
    pub fn new(lower: Vec<f64>, diag: Vec<f64>, upper: Vec<f64>, rhs: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        if n == 0 || lower.len() != n - 1 || upper.len() != n - 1 || rhs.len() != n {
            return Err(Error::Config(format!(
                "inconsistent tridiagonal dimensions: lower {}, diag {}, upper {}, rhs {}",
                lower.len(),
                n,
                upper.len(),
                rhs.len()
            )));
        }
        Ok(TridiagonalSystem {
            lower,
            diag,
            upper,
            rhs,
        })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// Matrix-vector product `T x` (used by residual checks).
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n();
        (0..n)
            .map(|i| {
                let mut v = self.diag[i] * x[i];
                if i > 0 {
                    v += self.lower[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    v += self.upper[i] * x[i + 1];
                }
                v
            })
            .collect()
    }

    /// Thomas elimination without pivoting. The assembled transport and
    /// Poisson systems are strictly diagonally dominant, so no pivoting is
    /// needed; a zero pivot only defends against caller bugs.
    pub fn thomas_solve(&self) -> Result<Vec<f64>> {
        let n = self.n();
        let mut d = self.diag.clone();
        let mut r = self.rhs.clone();
        for i in 1..n {
            if d[i - 1] == 0.0 {
                return Err(Error::Singular { row: i - 1 });
            }
            let w = self.lower[i - 1] / d[i - 1];
            d[i] -= w * self.upper[i - 1];
            r[i] -= w * r[i - 1];
        }
        if d[n - 1] == 0.0 {
            return Err(Error::Singular { row: n - 1 });
        }
        let mut x = vec![0.0; n];
        x[n - 1] = r[n - 1] / d[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = (r[i] - self.upper[i] * x[i + 1]) / d[i];
        }
        Ok(x)
    }

    /// True iff the matrix has a positive diagonal, nonpositive off-diagonals,
    /// weak row diagonal dominance everywhere, and strict dominance in at
    /// least one row. A tridiagonal matrix with this structure (irreducible
    /// when the off-diagonals are nonzero) has an entrywise-nonnegative
    /// inverse, which is what makes the scheme positivity-preserving. The
    /// transport rows are all strictly dominant; the Poisson rows are weakly
    /// dominant in the interior and strict at the walls.
    pub fn verify_m_structure(&self) -> bool {
        let n = self.n();
        let mut any_strict = false;
        for i in 0..n {
            let mut off = 0.0;
            if i > 0 {
                if self.lower[i - 1] > 0.0 {
                    return false;
                }
                off += self.lower[i - 1].abs();
            }
            if i + 1 < n {
                if self.upper[i] > 0.0 {
                    return false;
                }
                off += self.upper[i].abs();
            }
            if !(self.diag[i] > 0.0 && self.diag[i] >= off && self.diag[i].is_finite()) {
                return false;
            }
            if self.diag[i] > off {
                any_strict = true;
            }
        }
        any_strict
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Dense Gaussian elimination with partial pivoting; the independent
    /// oracle for thomas_solve.
    pub fn dense_solve(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let mut m: Vec<Vec<f64>> = a.iter().map(|row| row.clone()).collect();
        let mut r = b.to_vec();
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
                .unwrap();
            m.swap(col, piv);
            r.swap(col, piv);
            for row in col + 1..n {
                let w = m[row][col] / m[col][col];
                for k in col..n {
                    m[row][k] -= w * m[col][k];
                }
                r[row] -= w * r[col];
            }
        }
        let mut x = vec![0.0; n];
        for row in (0..n).rev() {
            let s: f64 = (row + 1..n).map(|k| m[row][k] * x[k]).sum();
            x[row] = (r[row] - s) / m[row][row];
        }
        x
    }

    fn to_dense(sys: &TridiagonalSystem) -> Vec<Vec<f64>> {
        let n = sys.n();
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            a[i][i] = sys.diag[i];
            if i > 0 {
                a[i][i - 1] = sys.lower[i - 1];
            }
            if i + 1 < n {
                a[i][i + 1] = sys.upper[i];
            }
        }
        a
    }

    #[test]
    fn identity_system() {
        let sys =
            TridiagonalSystem::new(vec![0.0; 3], vec![1.0; 4], vec![0.0; 3], vec![3.0, -1.0, 0.5, 2.0])
                .unwrap();
        assert!(sys.verify_m_structure());
        assert_eq!(sys.thomas_solve().unwrap(), vec![3.0, -1.0, 0.5, 2.0]);
    }

    #[test]
    fn positive_off_diagonal_fails_m_check() {
        let sys =
            TridiagonalSystem::new(vec![-0.2], vec![1.0, 1.0], vec![0.5], vec![0.0, 0.0]).unwrap();
        assert!(!sys.verify_m_structure());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        assert!(TridiagonalSystem::new(vec![0.0; 2], vec![1.0; 4], vec![0.0; 3], vec![0.0; 4]).is_err());
    }

    #[test]
    fn zero_pivot_reported() {
        let sys = TridiagonalSystem::new(vec![1.0], vec![0.0, 1.0], vec![1.0], vec![1.0, 1.0]).unwrap();
        assert!(matches!(sys.thomas_solve(), Err(crate::Error::Singular { row: 0 })));
    }

    #[test]
    fn transport_like_system_matches_dense_oracle_and_is_nonnegative() {
        // The Dirichlet first-order system with A=B=1, phi=0, lambda=1,
        // u^n = (1,2,3), u_l = u_r = 0: diag (4,3,4), off-diagonals -1.
        let sys = TridiagonalSystem::new(
            vec![-1.0, -1.0],
            vec![4.0, 3.0, 4.0],
            vec![-1.0, -1.0],
            vec![1.0, 2.0, 3.0],
        )
        .unwrap();
        assert!(sys.verify_m_structure());
        let x = sys.thomas_solve().unwrap();
        let y = dense_solve(&to_dense(&sys), &sys.rhs);
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() <= 1e-12);
            assert!(*a >= 0.0);
        }
    }

    fn dominant_system(n: usize) -> impl Strategy<Value = TridiagonalSystem> {
        (
            proptest::collection::vec(0.0f64..1.0, n - 1),
            proptest::collection::vec(0.0f64..1.0, n - 1),
            proptest::collection::vec(0.01f64..1.0, n),
            proptest::collection::vec(-1.0f64..1.0, n),
        )
            .prop_map(move |(lo, up, bump, rhs)| {
                let mut diag = vec![0.0; n];
                for i in 0..n {
                    let mut off = 0.0;
                    if i > 0 {
                        off += lo[i - 1];
                    }
                    if i + 1 < n {
                        off += up[i];
                    }
                    diag[i] = off + bump[i];
                }
                TridiagonalSystem::new(
                    lo.iter().map(|v| -v).collect(),
                    diag,
                    up.iter().map(|v| -v).collect(),
                    rhs,
                )
                .unwrap()
            })
    }

    proptest! {
        #[test]
        fn thomas_matches_dense_oracle(sys in (2usize..32).prop_flat_map(dominant_system)) {
            let x = sys.thomas_solve().unwrap();
            let y = dense_solve(&to_dense(&sys), &sys.rhs);
            let scale = 1.0 + y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for (a, b) in x.iter().zip(&y) {
                prop_assert!((a - b).abs() <= 1e-12 * scale);
            }
        }

        #[test]
        fn m_structure_gives_nonnegative_solutions(sys in (2usize..64).prop_flat_map(dominant_system)) {
            let mut sys = sys;
            for r in sys.rhs.iter_mut() {
                *r = r.abs();
            }
            prop_assert!(sys.verify_m_structure());
            let x = sys.thomas_solve().unwrap();
            for v in x {
                prop_assert!(v >= -1e-14);
            }
        }
    }
}
