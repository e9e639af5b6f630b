//! Finite-volume solver for the one-dimensional reduced Poisson-Nernst-Planck
//! (PNP) system used to model ion channels.
//!
//! The transport equations are discretized in Slotboom (non-logarithmic Landau)
//! form with a semi-implicit time discretization: each step solves one
//! tridiagonal system per species plus one tridiagonal Poisson solve, and the
//! resulting densities stay nonnegative for any time step size.
//!
//! Quick start: diffuse two oppositely charged species in a tapered channel
//! and watch the total mass stay put under zero-flux boundary conditions.
//!
//! ```
//! use pnp1d::mesh::{Grid, PiecewiseCoefficient};
//! use pnp1d::pnp::{BcKind, SpeciesSpec, System, SystemSpec};
//! use pnp1d::transport::FluxOrder;
//!
//! let grid = Grid::build(50, 0.0, 1.0).unwrap();
//! let spec = SystemSpec {
//!     grid,
//!     species: vec![
//!         SpeciesSpec::bulk(1.0, PiecewiseCoefficient::constant(1.0)),
//!         SpeciesSpec::bulk(-1.0, PiecewiseCoefficient::constant(1.0)),
//!     ],
//!     epsilon: 1.0,
//!     area: PiecewiseCoefficient::constant(1.0),
//!     rho: PiecewiseCoefficient::constant(0.0),
//!     tau: 1e-3,
//!     bc: BcKind::ZeroFluxRobin { eta: 1.0, psi_minus: 0.0, psi_plus: 0.0 },
//!     flux_order: FluxOrder::First,
//!     sources: None,
//! };
//! let system = System::new(spec).unwrap();
//! let init = PiecewiseCoefficient::from_fn(|x| 0.5 + 0.4 * (3.0 * x).sin());
//! let state0 = system.initialize(&[init.clone().into(), init.into()]).unwrap();
//! let mass0 = system.total_mass(&state0, 0);
//! let mut state = state0;
//! for _ in 0..100 {
//!     state = system.step(&state).unwrap();
//! }
//! assert!((system.total_mass(&state, 0) - mass0).abs() <= 1e-12 * mass0);
//! assert!(state.c.iter().flatten().all(|&v| v >= 0.0));
//! ```

pub mod guide;
pub mod harness;
pub mod linalg;
pub mod mesh;
pub mod pnp;
pub mod poisson;
pub mod transport;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Error, Debug)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("singular tridiagonal system: zero pivot at row {row}")]
    Singular { row: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("out of range: {0}")]
    Range(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
