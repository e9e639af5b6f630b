//! Convergence study on the manufactured problem: run to t = 1 with
//! tau = h^2 at a list of resolutions and report max-norm errors and observed
//! orders for both densities and the potential.

use super::manufactured;
use crate::pnp::Initial;
use crate::transport::FluxOrder;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub n: usize,
    /// Max-norm errors at cell centers: c1, c2, psi.
    pub errors: [f64; 3],
    /// log2(e_N / e_2N) against the previous row; None on the first row.
    pub orders: [Option<f64>; 3],
}

pub fn study(ns: &[usize], flux_order: FluxOrder) -> Result<Vec<ConvergenceRow>> {
    if ns.windows(2).any(|w| w[1] <= w[0]) || ns.first().map_or(true, |&n| n < 4) {
        return Err(Error::Config(
            "resolution list must be strictly increasing with entries >= 4".into(),
        ));
    }
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(ns.len());
    for &n in ns {
        let system = manufactured::build(n, flux_order)?;
        let [p1, p2] = manufactured::initial_profiles();
        let mut state = system.initialize(&[Initial::Profile(p1), Initial::Profile(p2)])?;
        for _ in 0..n * n {
            state = system.step(&state)?;
        }
        let mut errors = [0.0f64; 3];
        for (j, &x) in system.grid().centers().iter().enumerate() {
            errors[0] = errors[0].max((state.c[0][j] - manufactured::exact_c1(x, 1.0)).abs());
            errors[1] = errors[1].max((state.c[1][j] - manufactured::exact_c2(x, 1.0)).abs());
            errors[2] = errors[2].max((state.psi[j] - manufactured::exact_psi(x, 1.0)).abs());
        }
        let orders = match rows.last() {
            None => [None; 3],
            Some(prev) => {
                let ratio = (n as f64 / prev.n as f64).log2();
                std::array::from_fn(|k| Some((prev.errors[k] / errors[k]).log2() / ratio))
            }
        };
        rows.push(ConvergenceRow { n, errors, orders });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_resolution_lists() {
        assert!(study(&[], FluxOrder::First).is_err());
        assert!(study(&[2, 4], FluxOrder::First).is_err());
        assert!(study(&[40, 40], FluxOrder::First).is_err());
        assert!(study(&[80, 40], FluxOrder::First).is_err());
    }

    #[test]
    fn small_study_is_second_order() {
        let rows = study(&[10, 20, 40], FluxOrder::First).unwrap();
        assert_eq!(rows[0].orders, [None; 3]);
        for k in 0..3 {
            let ord = rows[2].orders[k].unwrap();
            assert!(ord > 1.7 && ord < 2.3, "order {ord}");
        }
    }
}
