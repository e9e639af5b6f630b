//! Canned problem setups: a charged ion channel between two baths, its
//! uncharged variant, and a three-species problem with variable diffusion on
//! a wide domain (Dirichlet or zero-flux/Robin walls).

use crate::mesh::{channel_area, channel_charge, ChannelGeometry, Grid, PiecewiseCoefficient};
use crate::pnp::{BcKind, Initial, SpeciesSpec, System, SystemSpec, TimeFn};
use crate::transport::FluxOrder;
use crate::Result;
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Parameters of the two-species channel runs. Defaults follow the reference
/// setup: unit valences, unit diffusion, funnel mouths of half-width 20,
/// reservoir densities 0.5 / 0.4, applied voltage 0.5.
#[derive(Debug, Clone)]
pub struct ChannelParams {
    pub n_cells: usize,
    pub tau: f64,
    pub epsilon: f64,
    pub r_f: f64,
    pub r_c: f64,
    pub l_c: f64,
    pub q0: f64,
    pub voltage: f64,
    pub c_left: f64,
    pub c_right: f64,
    pub flux_order: FluxOrder,
}

impl Default for ChannelParams {
    fn default() -> Self {
        ChannelParams {
            n_cells: 100,
            tau: 5e-5,
            epsilon: 5e-5,
            r_f: 20.0,
            r_c: 0.2,
            l_c: 0.2,
            q0: 0.2,
            voltage: 0.5,
            c_left: 0.5,
            c_right: 0.4,
            flux_order: FluxOrder::First,
        }
    }
}

/// Two-species channel with permanent charge Q0 in the neck. Initial
/// densities interpolate the reservoir values linearly.
pub fn channel(p: &ChannelParams) -> Result<(System, Vec<Initial>)> {
    let geom = ChannelGeometry::new(p.r_f, p.r_c, p.l_c)?;
    let spec = SystemSpec {
        grid: Grid::build(p.n_cells, 0.0, 1.0)?,
        species: vec![
            SpeciesSpec {
                valence: 1.0,
                diffusion: PiecewiseCoefficient::constant(1.0),
                c_left: p.c_left,
                c_right: p.c_right,
            },
            SpeciesSpec {
                valence: -1.0,
                diffusion: PiecewiseCoefficient::constant(1.0),
                c_left: p.c_left,
                c_right: p.c_right,
            },
        ],
        epsilon: p.epsilon,
        area: channel_area(&geom),
        rho: channel_charge(p.q0, &geom),
        tau: p.tau,
        bc: BcKind::Dirichlet {
            psi_left: TimeFn::Const(0.0),
            psi_right: TimeFn::Const(p.voltage),
        },
        flux_order: p.flux_order,
        sources: None,
    };
    let system = System::new(spec)?;
    let (cl, cr) = (p.c_left, p.c_right);
    let ramp = PiecewiseCoefficient::from_fn(move |x| cl + (cr - cl) * x);
    let initial = vec![Initial::Profile(ramp.clone()), Initial::Profile(ramp)];
    Ok((system, initial))
}

/// Parameters of the three-species wide-domain runs on [-10, 10] with
/// A = 1 + x^2, D_i = 20(1 - 0.9 e^{-x^4}), background charge C e^{-x^4},
/// valences (2, -3, 1).
#[derive(Debug, Clone)]
pub struct TripleParams {
    pub n_cells: usize,
    pub tau: f64,
    pub epsilon: f64,
    /// Amplitude of the permanent charge.
    pub charge: f64,
    pub flux_order: FluxOrder,
}

impl Default for TripleParams {
    fn default() -> Self {
        TripleParams {
            n_cells: 200,
            tau: 1e-3,
            epsilon: 0.1,
            charge: 1.0,
            flux_order: FluxOrder::First,
        }
    }
}

fn triple_spec(p: &TripleParams, bc: BcKind) -> Result<SystemSpec> {
    let diffusion = PiecewiseCoefficient::from_fn(|x: f64| 20.0 * (1.0 - 0.9 * (-x.powi(4)).exp()));
    let c = p.charge;
    Ok(SystemSpec {
        grid: Grid::build(p.n_cells, -10.0, 10.0)?,
        species: [2.0, -3.0, 1.0]
            .iter()
            .map(|&z| SpeciesSpec::bulk(z, diffusion.clone()))
            .collect(),
        epsilon: p.epsilon,
        area: PiecewiseCoefficient::from_fn(|x| 1.0 + x * x),
        rho: PiecewiseCoefficient::from_fn(move |x: f64| c * (-x.powi(4)).exp()),
        tau: p.tau,
        bc,
        flux_order: p.flux_order,
        sources: None,
    })
}

/// Three species with Dirichlet walls: c_i = 0.5 and psi = 0 at both ends.
pub fn triple_dirichlet(p: &TripleParams) -> Result<System> {
    System::new(triple_spec(
        p,
        BcKind::Dirichlet {
            psi_left: TimeFn::Const(0.0),
            psi_right: TimeFn::Const(0.0),
        },
    )?)
}

/// Three species with zero-flux walls and Robin potential conditions
/// (eta = 0.1, boundary data -0.1 / +0.1) — the mass-conserving,
/// energy-dissipating configuration.
pub fn triple_robin(p: &TripleParams) -> Result<System> {
    System::new(triple_spec(
        p,
        BcKind::ZeroFluxRobin {
            eta: 0.1,
            psi_minus: -0.1,
            psi_plus: 0.1,
        },
    )?)
}

/// Smooth bump initial data for the three-species runs: each species carries
/// a localized disturbance on the 0.5 background.
pub fn triple_initial_bumps() -> Vec<Initial> {
    vec![
        Initial::Profile(PiecewiseCoefficient::from_fn(|x: f64| {
            0.5 - 0.5 * (-(x + 4.0).powi(4)).exp()
        })),
        Initial::Profile(PiecewiseCoefficient::from_fn(|x: f64| {
            0.5 + 2.0 * (-x.powi(4)).exp()
        })),
        Initial::Profile(PiecewiseCoefficient::from_fn(|x: f64| {
            0.5 + (-(x - 4.0).powi(4)).exp()
        })),
    ]
}

/// Uniform(0,1) per-cell random initial data from a seeded ChaCha8 stream,
/// reproducible across platforms.
pub fn triple_initial_random(n_cells: usize, n_species: usize, seed: u64) -> Vec<Initial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Uniform::new(0.0, 1.0);
    (0..n_species)
        .map(|_| Initial::Cells((0..n_cells).map(|_| dist.sample(&mut rng)).collect()))
        .collect()
}
