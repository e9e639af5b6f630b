//! The coupled multi-species PNP stepper: one Poisson solve followed by an
//! independent semi-implicit transport step per species, plus the mass,
//! free-energy, dissipation, current, and steady-state diagnostics.

use crate::mesh::{cell_averages, Grid, PiecewiseCoefficient};
use crate::poisson::{PoissonBc, PoissonProblem};
use crate::transport::{BoundarySpec, FluxOrder, TransportProblem};
use crate::{Error, Result};
use std::fmt;
use std::sync::Arc;

/// Scalar function of time, used for possibly time-dependent boundary
/// potentials.
#[derive(Clone)]
pub enum TimeFn {
    Const(f64),
    Fn(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl TimeFn {
    pub fn at(&self, t: f64) -> f64 {
        match self {
            TimeFn::Const(v) => *v,
            TimeFn::Fn(f) => f(t),
        }
    }
}

impl fmt::Debug for TimeFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeFn::Const(v) => write!(f, "Const({v})"),
            TimeFn::Fn(_) => write!(f, "Fn(..)"),
        }
    }
}

/// Function of (x, t), used for manufactured sources.
pub type SpaceTimeFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone)]
pub struct SpeciesSpec {
    pub valence: f64,
    pub diffusion: PiecewiseCoefficient,
    /// Dirichlet boundary densities; ignored under zero-flux conditions.
    pub c_left: f64,
    pub c_right: f64,
}

impl SpeciesSpec {
    /// Species with equal boundary densities of 0.5 on both walls.
    pub fn bulk(valence: f64, diffusion: PiecewiseCoefficient) -> Self {
        SpeciesSpec {
            valence,
            diffusion,
            c_left: 0.5,
            c_right: 0.5,
        }
    }
}

#[derive(Debug, Clone)]
pub enum BcKind {
    /// Dirichlet densities and potential; the potential at the right wall is
    /// the applied voltage V and may depend on time.
    Dirichlet { psi_left: TimeFn, psi_right: TimeFn },
    /// Zero ion flux through the walls plus Robin conditions on the
    /// potential. Mass conservation and energy dissipation hold here.
    ZeroFluxRobin {
        eta: f64,
        psi_minus: f64,
        psi_plus: f64,
    },
}

/// Manufactured source terms: one per species plus one for the Poisson
/// right-hand side, all evaluated at cell centers.
#[derive(Clone)]
pub struct Sources {
    pub species: Vec<SpaceTimeFn>,
    pub poisson: Option<SpaceTimeFn>,
}

impl fmt::Debug for Sources {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sources({} species)", self.species.len())
    }
}

#[derive(Debug, Clone)]
pub struct SystemSpec {
    pub grid: Grid,
    pub species: Vec<SpeciesSpec>,
    pub epsilon: f64,
    pub area: PiecewiseCoefficient,
    pub rho: PiecewiseCoefficient,
    pub tau: f64,
    pub bc: BcKind,
    pub flux_order: FluxOrder,
    pub sources: Option<Sources>,
}

/// Time level n of a run: per-species cell-average densities and the
/// cell-average potential solved from them.
#[derive(Debug, Clone)]
pub struct State {
    pub t: f64,
    pub step_index: u64,
    pub c: Vec<Vec<f64>>,
    pub psi: Vec<f64>,
}

/// Initial density data: a profile to be cell-averaged, or explicit values.
#[derive(Debug, Clone)]
pub enum Initial {
    Profile(PiecewiseCoefficient),
    Cells(Vec<f64>),
}

impl From<PiecewiseCoefficient> for Initial {
    fn from(p: PiecewiseCoefficient) -> Self {
        Initial::Profile(p)
    }
}

/// Outcome of [`System::run_to_steady`].
#[derive(Debug, Clone)]
pub struct SteadyReport {
    pub state: State,
    pub steps: u64,
    /// steps * tau
    pub t_s: f64,
    /// Final max-norm of the consecutive potential difference.
    pub dpsi_inf: f64,
    pub converged: bool,
}

/// A [`SystemSpec`] with the grid-sampled coefficient arrays cached, ready to
/// step.
#[derive(Debug, Clone)]
pub struct System {
    spec: SystemSpec,
    a_cell: Vec<f64>,
    a_face: Vec<f64>,
    rho_cell: Vec<f64>,
    /// B_{j+1/2} = A_{j+1/2} D_i(x_{j+1/2}) per species.
    b_face: Vec<Vec<f64>>,
}

impl System {
    pub fn new(spec: SystemSpec) -> Result<Self> {
        if spec.species.is_empty() {
            return Err(Error::Config("at least one species required".into()));
        }
        if !(spec.tau > 0.0) {
            return Err(Error::Config("time step must be positive".into()));
        }
        if !(spec.epsilon > 0.0) {
            return Err(Error::Config("dielectric coefficient must be positive".into()));
        }
        if let Some(src) = &spec.sources {
            if src.species.len() != spec.species.len() {
                return Err(Error::Config("one source per species required".into()));
            }
        }
        if let BcKind::ZeroFluxRobin { eta, .. } = spec.bc {
            if !(eta > 0.0) {
                return Err(Error::Config("Robin parameter eta must be positive".into()));
            }
        }
        for s in &spec.species {
            if s.c_left < 0.0 || s.c_right < 0.0 {
                return Err(Error::Domain(
                    "Dirichlet boundary densities must be nonnegative".into(),
                ));
            }
        }
        let a_cell = cell_averages(&spec.area, &spec.grid);
        if a_cell.iter().any(|&a| a <= 0.0) {
            return Err(Error::Domain("cross-sectional area must be positive".into()));
        }
        let a_face: Vec<f64> = spec
            .grid
            .interfaces()
            .iter()
            .map(|&x| spec.area.eval(x))
            .collect();
        let rho_cell = cell_averages(&spec.rho, &spec.grid);
        let b_face: Vec<Vec<f64>> = spec
            .species
            .iter()
            .map(|s| {
                spec.grid
                    .interfaces()
                    .iter()
                    .zip(&a_face)
                    .map(|(&x, &a)| a * s.diffusion.eval(x))
                    .collect()
            })
            .collect();
        Ok(System {
            spec,
            a_cell,
            a_face,
            rho_cell,
            b_face,
        })
    }

    pub fn spec(&self) -> &SystemSpec {
        &self.spec
    }

    pub fn grid(&self) -> &Grid {
        &self.spec.grid
    }

    pub fn n_species(&self) -> usize {
        self.spec.species.len()
    }

    pub fn a_cell(&self) -> &[f64] {
        &self.a_cell
    }

    /// Charge density S_j = sum_i z_i c_{i,j} - rho_j (+ manufactured Poisson
    /// source at time t when configured).
    fn charge_density(&self, c: &[Vec<f64>], t: f64) -> Vec<f64> {
        let n = self.spec.grid.n_cells();
        let mut s = vec![0.0; n];
        for (sp, ci) in self.spec.species.iter().zip(c) {
            for j in 0..n {
                s[j] += sp.valence * ci[j];
            }
        }
        for j in 0..n {
            s[j] -= self.rho_cell[j];
        }
        if let Some(f3) = self.spec.sources.as_ref().and_then(|s| s.poisson.as_ref()) {
            for (j, &x) in self.spec.grid.centers().iter().enumerate() {
                s[j] += f3(x, t);
            }
        }
        s
    }

    fn poisson_bc(&self, t: f64) -> PoissonBc {
        match &self.spec.bc {
            BcKind::Dirichlet {
                psi_left,
                psi_right,
            } => PoissonBc::Dirichlet {
                psi_l: psi_left.at(t),
                psi_r: psi_right.at(t),
            },
            BcKind::ZeroFluxRobin {
                eta,
                psi_minus,
                psi_plus,
            } => PoissonBc::Robin {
                eta: *eta,
                psi_minus: *psi_minus,
                psi_plus: *psi_plus,
            },
        }
    }

    /// Solve the Poisson equation for the potential induced by densities `c`
    /// at time `t`.
    pub fn solve_potential(&self, c: &[Vec<f64>], t: f64) -> Result<Vec<f64>> {
        let problem = PoissonProblem {
            h: self.spec.grid.h(),
            a_cell: self.a_cell.clone(),
            a_face: self.a_face.clone(),
            epsilon: self.spec.epsilon,
            bc: self.poisson_bc(t),
        };
        problem.solve(&self.charge_density(c, t))
    }

    /// Cell-average the initial densities and solve for the initial
    /// potential.
    pub fn initialize(&self, initial: &[Initial]) -> Result<State> {
        if initial.len() != self.n_species() {
            return Err(Error::Config("one initial profile per species required".into()));
        }
        let n = self.spec.grid.n_cells();
        let mut c = Vec::with_capacity(initial.len());
        for init in initial {
            let ci = match init {
                Initial::Profile(p) => cell_averages(p, &self.spec.grid),
                Initial::Cells(v) => {
                    if v.len() != n {
                        return Err(Error::Config("initial cell data length mismatch".into()));
                    }
                    v.clone()
                }
            };
            if ci.iter().any(|&v| v < 0.0) {
                return Err(Error::Domain("initial densities must be nonnegative".into()));
            }
            c.push(ci);
        }
        let psi = self.solve_potential(&c, 0.0)?;
        Ok(State {
            t: 0.0,
            step_index: 0,
            c,
            psi,
        })
    }

    fn transport_problem(&self, i: usize, psi: &[f64], t_n: f64, t_next: f64) -> TransportProblem {
        let n = self.spec.grid.n_cells();
        let sp = &self.spec.species[i];
        let z = sp.valence;
        let phi_cell: Vec<f64> = psi.iter().map(|&p| -z * p).collect();
        let mut phi_face = vec![0.0; n + 1];
        for j in 1..n {
            phi_face[j] = 0.5 * (phi_cell[j - 1] + phi_cell[j]);
        }
        let bc = match &self.spec.bc {
            BcKind::Dirichlet {
                psi_left,
                psi_right,
            } => {
                phi_face[0] = -z * psi_left.at(t_n);
                phi_face[n] = -z * psi_right.at(t_n);
                BoundarySpec::Dirichlet {
                    u_l: sp.c_left,
                    u_r: sp.c_right,
                }
            }
            BcKind::ZeroFluxRobin { .. } => {
                // boundary fluxes vanish; face potentials are never used
                phi_face[0] = phi_cell[0];
                phi_face[n] = phi_cell[n - 1];
                BoundarySpec::ZeroFlux
            }
        };
        let source_cell = self.spec.sources.as_ref().map(|src| {
            let f = &src.species[i];
            self.spec
                .grid
                .centers()
                .iter()
                .map(|&x| f(x, t_next))
                .collect()
        });
        TransportProblem {
            h: self.spec.grid.h(),
            a_cell: self.a_cell.clone(),
            b_face: self.b_face[i].clone(),
            phi_cell,
            phi_face,
            tau: self.spec.tau,
            bc,
            flux_order: self.spec.flux_order,
            source_cell,
        }
    }

    /// One time step: per-species transport against the current potential,
    /// then a fresh Poisson solve for the new level.
    pub fn step(&self, state: &State) -> Result<State> {
        self.step_with_potential(state, &state.psi)
    }

    /// One time step using `psi` in place of the state's own potential for
    /// the transport sub-step. Positivity of the new densities does not
    /// depend on where the potential came from.
    pub fn step_with_potential(&self, state: &State, psi: &[f64]) -> Result<State> {
        let t_n = state.t;
        let t_next = (state.step_index + 1) as f64 * self.spec.tau;
        let mut c_next = Vec::with_capacity(self.n_species());
        for i in 0..self.n_species() {
            let problem = self.transport_problem(i, psi, t_n, t_next);
            c_next.push(problem.step(&state.c[i])?);
        }
        let psi_next = self.solve_potential(&c_next, t_next)?;
        Ok(State {
            t: t_next,
            step_index: state.step_index + 1,
            c: c_next,
            psi: psi_next,
        })
    }

    /// Total weighted mass sum_j h A_j c_{i,j} of species `i`.
    pub fn total_mass(&self, state: &State, i: usize) -> f64 {
        let h = self.spec.grid.h();
        state.c[i]
            .iter()
            .zip(&self.a_cell)
            .map(|(c, a)| h * a * c)
            .sum()
    }

    /// Discrete free energy: entropy plus electrostatic energy plus the Robin
    /// boundary terms. Defined for zero-flux/Robin runs only. Uses the
    /// convention 0 log 0 = 0.
    pub fn discrete_energy(&self, state: &State) -> Result<f64> {
        let BcKind::ZeroFluxRobin {
            eta,
            psi_minus,
            psi_plus,
        } = self.spec.bc
        else {
            return Err(Error::Config(
                "discrete energy is defined for zero-flux/Robin runs".into(),
            ));
        };
        let n = self.spec.grid.n_cells();
        let h = self.spec.grid.h();
        let s = {
            // S_j without manufactured sources
            let mut s = vec![0.0; n];
            for (sp, ci) in self.spec.species.iter().zip(&state.c) {
                for j in 0..n {
                    s[j] += sp.valence * ci[j];
                }
            }
            for j in 0..n {
                s[j] -= self.rho_cell[j];
            }
            s
        };
        let mut e = 0.0;
        for j in 0..n {
            let mut entropy = 0.0;
            for ci in &state.c {
                let v = ci[j];
                if v < 0.0 {
                    return Err(Error::Domain(format!("negative density {v} in cell {j}")));
                }
                if v > 0.0 {
                    entropy += v * v.ln();
                }
            }
            e += h * self.a_cell[j] * (entropy + 0.5 * s[j] * state.psi[j]);
        }
        e += self.spec.epsilon / (2.0 * eta)
            * (psi_plus * self.a_face[n] * state.psi[n - 1]
                + psi_minus * self.a_face[0] * state.psi[0]);
        Ok(e)
    }

    /// Discrete entropy production I_h^n >= 0, evaluated from the potential
    /// at level n and the densities at level n+1. Face terms where both
    /// Slotboom values vanish contribute 0; a face pairing a zero with a
    /// positive value makes the rate unbounded and returns +inf as a flag.
    pub fn dissipation_rate(&self, psi_n: &[f64], c_next: &[Vec<f64>]) -> Result<f64> {
        let n = self.spec.grid.n_cells();
        let h = self.spec.grid.h();
        let mut total = 0.0;
        for (i, sp) in self.spec.species.iter().enumerate() {
            let z = sp.valence;
            for j in 0..n - 1 {
                let (ca, cb) = (c_next[i][j], c_next[i][j + 1]);
                if ca < 0.0 || cb < 0.0 {
                    return Err(Error::Domain("negative density in dissipation rate".into()));
                }
                if ca == 0.0 && cb == 0.0 {
                    continue;
                }
                if ca == 0.0 || cb == 0.0 {
                    return Ok(f64::INFINITY);
                }
                // face term (B/h) e^{phi_f} (G_b - G_a)(ln G_b - ln G_a) with
                // phi = -z psi and G = c e^{z psi}, evaluated in log space so
                // large potentials cancel instead of overflowing
                let la = ca.ln() + z * psi_n[j];
                let lb = cb.ln() + z * psi_n[j + 1];
                let phi_f = -z * 0.5 * (psi_n[j] + psi_n[j + 1]);
                total += self.b_face[i][j + 1] / h
                    * (lb - la)
                    * ((lb + phi_f).exp() - (la + phi_f).exp());
            }
        }
        Ok(total)
    }

    /// Discrete current J^n_{j+1/2} = -sum_i z_i C_{i,j+1/2} at the N-1
    /// interior faces, evaluated from the level-n densities.
    pub fn current_profile(&self, state: &State) -> Vec<f64> {
        let n = self.spec.grid.n_cells();
        let h = self.spec.grid.h();
        let mut current = vec![0.0; n - 1];
        for (i, sp) in self.spec.species.iter().enumerate() {
            let z = sp.valence;
            for j in 0..n - 1 {
                let mid = 0.5 * (state.psi[j] + state.psi[j + 1]);
                let flux = self.b_face[i][j + 1] * (-z * mid).exp()
                    * (state.c[i][j + 1] * (z * state.psi[j + 1]).exp()
                        - state.c[i][j] * (z * state.psi[j]).exp())
                    / h;
                current[j] -= z * flux;
            }
        }
        current
    }

    /// Step until the max-norm of the consecutive potential difference drops
    /// to `tol`, or `max_steps` is exhausted (reported, not an error).
    pub fn run_to_steady(&self, state0: &State, tol: f64, max_steps: u64) -> Result<SteadyReport> {
        if !(tol > 0.0) {
            return Err(Error::Config("steady-state tolerance must be positive".into()));
        }
        let mut state = state0.clone();
        let mut dpsi = f64::INFINITY;
        for step in 1..=max_steps {
            let next = self.step(&state)?;
            dpsi = next
                .psi
                .iter()
                .zip(&state.psi)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            state = next;
            if dpsi <= tol {
                return Ok(SteadyReport {
                    t_s: step as f64 * self.spec.tau,
                    state,
                    steps: step,
                    dpsi_inf: dpsi,
                    converged: true,
                });
            }
        }
        Ok(SteadyReport {
            t_s: max_steps as f64 * self.spec.tau,
            state,
            steps: max_steps,
            dpsi_inf: dpsi,
            converged: false,
        })
    }
}
