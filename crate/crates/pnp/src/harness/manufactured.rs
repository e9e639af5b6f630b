//! A manufactured two-species problem with a known closed-form solution, used
//! to measure convergence orders.
//!
//! On [0,1] with A = (5-4x)^2, D = 1, z = (1, -1), eps = 1, rho = 0:
//!
//! ```text
//! c1  = x^2 (1-x)   e^{-t}
//! c2  = x^2 (1-x)^2 e^{-t}
//! psi = -x^5 (3-2x) e^{-t} / 60
//! ```
//!
//! driven by the source terms below. Densities vanish at both walls; the
//! potential is 0 at x=0 and -e^{-t}/60 at x=1.

use crate::mesh::{Grid, PiecewiseCoefficient};
use crate::pnp::{BcKind, Sources, SpeciesSpec, System, SystemSpec, TimeFn};
use crate::transport::FluxOrder;
use crate::Result;
use std::sync::Arc;

pub fn area(x: f64) -> f64 {
    (5.0 - 4.0 * x).powi(2)
}

pub fn exact_c1(x: f64, t: f64) -> f64 {
    x * x * (1.0 - x) * (-t).exp()
}

pub fn exact_c2(x: f64, t: f64) -> f64 {
    x * x * (1.0 - x) * (1.0 - x) * (-t).exp()
}

pub fn exact_psi(x: f64, t: f64) -> f64 {
    -x.powi(5) * (3.0 - 2.0 * x) / 60.0 * (-t).exp()
}

/// Potential at the right wall, `exact_psi(1, t)`.
pub fn applied_voltage(t: f64) -> f64 {
    -(-t).exp() / 60.0
}

pub fn source_c1(x: f64, t: f64) -> f64 {
    (4.0 * x.powi(4) - 9.0 * x.powi(3) + 53.0 * x * x - 54.0 * x + 10.0) / (4.0 * x - 5.0)
        * (-t).exp()
        + (40.0 * x.powi(7) - 71.0 * x.powi(6) + 30.0 * x.powi(5)) / 20.0 * (-2.0 * t).exp()
}

pub fn source_c2(x: f64, t: f64) -> f64 {
    (4.0 * x.powi(5) - 13.0 * x.powi(4) + 94.0 * x.powi(3) - 161.0 * x * x + 84.0 * x - 10.0)
        / (5.0 - 4.0 * x)
        * (-t).exp()
        + (22.0 * x.powi(8) - 60.0 * x.powi(7) + 53.0 * x.powi(6) - 15.0 * x.powi(5)) / 10.0
            * (-2.0 * t).exp()
}

pub fn source_psi(x: f64, t: f64) -> f64 {
    -2.0 * x.powi(4) / 5.0 * (-t).exp()
}

/// Build the system at resolution `n` with tau = h^2.
pub fn build(n: usize, flux_order: FluxOrder) -> Result<System> {
    let grid = Grid::build(n, 0.0, 1.0)?;
    let h = grid.h();
    let spec = SystemSpec {
        grid,
        species: vec![
            SpeciesSpec {
                valence: 1.0,
                diffusion: PiecewiseCoefficient::constant(1.0),
                c_left: 0.0,
                c_right: 0.0,
            },
            SpeciesSpec {
                valence: -1.0,
                diffusion: PiecewiseCoefficient::constant(1.0),
                c_left: 0.0,
                c_right: 0.0,
            },
        ],
        epsilon: 1.0,
        area: PiecewiseCoefficient::from_fn(area),
        rho: PiecewiseCoefficient::constant(0.0),
        tau: h * h,
        bc: BcKind::Dirichlet {
            psi_left: TimeFn::Const(0.0),
            psi_right: TimeFn::Fn(Arc::new(applied_voltage)),
        },
        flux_order,
        sources: Some(Sources {
            species: vec![Arc::new(source_c1), Arc::new(source_c2)],
            poisson: Some(Arc::new(source_psi)),
        }),
    };
    System::new(spec)
}

/// Initial density profiles (the exact solution at t = 0).
pub fn initial_profiles() -> [PiecewiseCoefficient; 2] {
    [
        PiecewiseCoefficient::from_fn(|x| exact_c1(x, 0.0)),
        PiecewiseCoefficient::from_fn(|x| exact_c2(x, 0.0)),
    ]
}
