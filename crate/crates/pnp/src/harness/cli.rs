//! Command-line front end: `run` a scenario, `converge` on the manufactured
//! problem, `iv` for current-voltage sweeps, `sweep` over geometry and charge
//! grids.

use super::config::{self, BuiltRun, EndCondition, FluxOrderName, RunConfig};
use super::csv::{self, SeriesSample};
use super::scenarios::ChannelParams;
use super::{convergence, iv};
use crate::pnp::{State, System};
use crate::{Error, Result};
use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(
    name = "pnp1d",
    about = "1D finite-volume solver for ion-channel drift-diffusion systems",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run one scenario to a fixed time or to steady state.
    Run(RunArgs),
    /// Convergence study on the manufactured-solution problem.
    Converge(ConvergeArgs),
    /// Steady current versus applied voltage on the channel scenario.
    Iv(IvArgs),
    /// Steady states over a grid of channel geometries and charges.
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Overrides {
    /// Scenario id (ignored when --config names one).
    #[arg(long)]
    pub scenario: Option<String>,
    #[arg(long)]
    pub n_cells: Option<usize>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, value_enum)]
    pub flux_order: Option<FluxOrderCli>,
    #[arg(long)]
    pub r_f: Option<f64>,
    #[arg(long)]
    pub r_c: Option<f64>,
    #[arg(long)]
    pub l_c: Option<f64>,
    #[arg(long)]
    pub q0: Option<f64>,
    #[arg(long)]
    pub charge: Option<f64>,
    #[arg(long)]
    pub voltage: Option<f64>,
    #[arg(long)]
    pub c_left: Option<f64>,
    #[arg(long)]
    pub c_right: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub steady_tol: Option<f64>,
    #[arg(long)]
    pub max_steps: Option<u64>,
    #[arg(long)]
    pub random_init: bool,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(clap::ValueEnum, Debug, Clone, Copy)]
pub enum FluxOrderCli {
    Zeroth,
    First,
    Second,
}

impl From<FluxOrderCli> for FluxOrderName {
    fn from(f: FluxOrderCli) -> Self {
        match f {
            FluxOrderCli::Zeroth => FluxOrderName::Zeroth,
            FluxOrderCli::First => FluxOrderName::First,
            FluxOrderCli::Second => FluxOrderName::Second,
        }
    }
}

#[derive(Args, Debug)]
pub struct RunArgs {
    /// JSON config file; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub overrides: Overrides,
    /// Output directory for snapshot.csv, series.csv, config.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Record every k-th step in the time series.
    #[arg(long, default_value_t = 1)]
    pub series_every: u64,
}

#[derive(Args, Debug)]
pub struct ConvergeArgs {
    /// Resolutions, strictly increasing.
    #[arg(long, value_delimiter = ',', default_values_t = [40usize, 80, 160, 320])]
    pub ns: Vec<usize>,
    #[arg(long, value_enum, default_value = "first")]
    pub flux_order: FluxOrderCli,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct IvArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 3.0, 5.0])]
    pub voltages: Vec<f64>,
    /// Steady-state tolerance and step cap come from --steady-tol and
    /// --max-steps (defaults 1e-6 and 1e6).
    #[command(flatten)]
    pub overrides: Overrides,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [0.2])]
    pub q0_list: Vec<f64>,
    /// Channel half-widths; paired elementwise with --l-c-list when both are
    /// given, otherwise crossed.
    #[arg(long, value_delimiter = ',', default_values_t = [0.2])]
    pub r_c_list: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub l_c_list: Option<Vec<f64>>,
    /// Steady-state tolerance and step cap come from --steady-tol and
    /// --max-steps (defaults 1e-6 and 1e6).
    #[command(flatten)]
    pub overrides: Overrides,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn apply_overrides(mut cfg: RunConfig, o: &Overrides) -> RunConfig {
    macro_rules! take {
        ($($f:ident),*) => { $( if o.$f.is_some() { cfg.$f = o.$f; } )* };
    }
    take!(r_f, r_c, l_c, q0, charge, voltage, c_left, c_right, t_end, steady_tol, max_steps, seed);
    if let Some(v) = o.n_cells {
        cfg.n_cells = v;
    }
    if let Some(v) = o.tau {
        cfg.tau = v;
    }
    if let Some(v) = o.epsilon {
        cfg.epsilon = v;
    }
    if let Some(f) = o.flux_order {
        cfg.flux_order = Some(f.into());
    }
    if o.random_init {
        cfg.random_init = Some(true);
    }
    cfg
}

fn resolve_config(config: &Option<PathBuf>, o: &Overrides) -> Result<RunConfig> {
    let base = match config {
        Some(path) => RunConfig::load(path)?,
        None => {
            let scenario = o
                .scenario
                .as_deref()
                .ok_or_else(|| Error::Config("provide --config or --scenario".into()))?;
            RunConfig::defaults_for(scenario)?
        }
    };
    Ok(apply_overrides(base, o))
}

fn channel_params(cfg: &RunConfig) -> ChannelParams {
    ChannelParams {
        n_cells: cfg.n_cells,
        tau: cfg.tau,
        epsilon: cfg.epsilon,
        r_f: cfg.r_f.unwrap_or(20.0),
        r_c: cfg.r_c.unwrap_or(0.2),
        l_c: cfg.l_c.unwrap_or(0.2),
        q0: cfg.q0.unwrap_or(0.2),
        voltage: cfg.voltage.unwrap_or(0.5),
        c_left: cfg.c_left.unwrap_or(0.5),
        c_right: cfg.c_right.unwrap_or(0.4),
        flux_order: cfg.flux(),
    }
}

fn ensure_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path)
        .map_err(|e| Error::Io(format!("cannot create {}: {e}", path.display())))
}

/// Outcome of a completed scenario run.
pub struct RunOutcome {
    pub state: State,
    pub steps: u64,
    pub converged: Option<bool>,
    pub dpsi_inf: f64,
    pub series: Vec<SeriesSample>,
}

fn sample(system: &System, state: &State, dpsi: f64) -> SeriesSample {
    SeriesSample {
        t: state.t,
        energy: system.discrete_energy(state).ok(),
        mass: (0..system.n_species())
            .map(|i| system.total_mass(state, i))
            .collect(),
        min_c: state
            .c
            .iter()
            .flatten()
            .copied()
            .fold(f64::INFINITY, f64::min),
        dpsi_inf: dpsi,
    }
}

/// Execute a built run, recording the time series every `series_every` steps
/// (0 disables recording).
pub fn execute(run: &BuiltRun, series_every: u64) -> Result<RunOutcome> {
    let system = &run.system;
    let mut state = system.initialize(&run.initial)?;
    let mut series = Vec::new();
    let record = |series: &mut Vec<SeriesSample>, st: &State, dpsi: f64| {
        if series_every > 0 && (st.step_index % series_every == 0 || st.step_index == 0) {
            series.push(sample(system, st, dpsi));
        }
    };
    record(&mut series, &state, f64::NAN);
    let mut dpsi = f64::INFINITY;
    let (max_steps, steady_tol) = match run.end {
        EndCondition::FixedTime(t) => ((t / system.spec().tau).round() as u64, None),
        EndCondition::Steady { tol, max_steps } => (max_steps, Some(tol)),
    };
    let mut steps = 0;
    let mut converged = steady_tol.map(|_| false);
    while steps < max_steps {
        let next = system.step(&state)?;
        dpsi = next
            .psi
            .iter()
            .zip(&state.psi)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        state = next;
        steps += 1;
        record(&mut series, &state, dpsi);
        if let Some(tol) = steady_tol {
            if dpsi <= tol {
                converged = Some(true);
                break;
            }
        }
    }
    Ok(RunOutcome {
        state,
        steps,
        converged,
        dpsi_inf: dpsi,
        series,
    })
}

fn cmd_run(args: &RunArgs) -> Result<()> {
    let cfg = resolve_config(&args.config, &args.overrides)?;
    let run = config::build(&cfg)?;
    let every = if args.out.is_some() { args.series_every } else { 0 };
    let outcome = execute(&run, every)?;
    let system = &run.system;
    let state = &outcome.state;
    println!(
        "scenario {} finished: steps {}, t {:.6}, dpsi_inf {:.4e}{}",
        cfg.scenario,
        outcome.steps,
        state.t,
        outcome.dpsi_inf,
        match outcome.converged {
            Some(true) => ", steady",
            Some(false) => ", NOT steady",
            None => "",
        }
    );
    for i in 0..system.n_species() {
        println!("mass_{} {:.12e}", i + 1, system.total_mass(state, i));
    }
    if let Ok(e) = system.discrete_energy(state) {
        println!("E_h {e:.12e}");
    }
    if let Some(out) = &args.out {
        ensure_dir(out)?;
        cfg.emit(&out.join("config.json"))?;
        csv::emit(
            &out.join("snapshot.csv"),
            &csv::snapshot(system, state, &run.notes),
        )?;
        csv::emit(
            &out.join("series.csv"),
            &csv::series(&outcome.series, system.n_species(), &run.notes),
        )?;
        println!("wrote {}", out.display());
    }
    Ok(())
}

fn cmd_converge(args: &ConvergeArgs) -> Result<()> {
    let flux = FluxOrderName::from(args.flux_order).into();
    let rows = convergence::study(&args.ns, flux)?;
    println!("N,err_c1,ord_c1,err_c2,ord_c2,err_psi,ord_psi");
    for r in &rows {
        let ord = |o: Option<f64>| o.map_or("-".into(), |v| format!("{v:.4}"));
        println!(
            "{},{:.4e},{},{:.4e},{},{:.4e},{}",
            r.n,
            r.errors[0],
            ord(r.orders[0]),
            r.errors[1],
            ord(r.orders[1]),
            r.errors[2],
            ord(r.orders[2])
        );
    }
    if let Some(out) = &args.out {
        ensure_dir(out)?;
        csv::emit(&out.join("convergence.csv"), &csv::convergence(&rows, &[]))?;
        println!("wrote {}", out.display());
    }
    Ok(())
}

fn cmd_iv(args: &IvArgs) -> Result<()> {
    let mut cfg = RunConfig::defaults_for("channel")?;
    cfg = apply_overrides(cfg, &args.overrides);
    let base = channel_params(&cfg);
    let tol = cfg.steady_tol.unwrap_or(1e-6);
    let max_steps = cfg.max_steps.unwrap_or(1_000_000);
    let points = iv::sweep(&base, &args.voltages, tol, max_steps)?;
    println!("V,J,steps");
    let mut lines = Vec::new();
    for p in &points {
        let j = p
            .current
            .map_or("unconverged".to_string(), |j| format!("{j:.16e}"));
        println!("{},{},{}", p.voltage, j, p.steps);
        lines.push(format!(
            "{:.16e},{},{}",
            p.voltage,
            p.current.map_or(f64::NAN, |j| j),
            p.steps
        ));
    }
    if let Some((slope, intercept, r2)) = iv::linear_fit(&points) {
        println!("fit: J = {slope:.6e} V + {intercept:.6e}, R2 {r2:.6}");
    }
    if let Some(out) = &args.out {
        ensure_dir(out)?;
        let mut text = String::from("V,J,steps\n");
        for l in lines {
            text.push_str(&l);
            text.push('\n');
        }
        csv::emit(&out.join("iv.csv"), &text)?;
        println!("wrote {}", out.display());
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let mut cfg = RunConfig::defaults_for("channel")?;
    cfg = apply_overrides(cfg, &args.overrides);
    let base = channel_params(&cfg);
    // build the point list: geometry pairs crossed (or paired) with charges
    let geoms: Vec<(f64, f64)> = match &args.l_c_list {
        None => args.r_c_list.iter().map(|&r| (r, r)).collect(),
        Some(ls) if ls.len() == args.r_c_list.len() => {
            args.r_c_list.iter().copied().zip(ls.iter().copied()).collect()
        }
        Some(ls) => args
            .r_c_list
            .iter()
            .flat_map(|&r| ls.iter().map(move |&l| (r, l)))
            .collect(),
    };
    let mut points = Vec::new();
    for &(r_c, l_c) in &geoms {
        for &q0 in &args.q0_list {
            points.push((r_c, l_c, q0));
        }
    }
    let tol = cfg.steady_tol.unwrap_or(1e-6);
    let max_steps = cfg.max_steps.unwrap_or(1_000_000);
    let results: Vec<Result<String>> = std::thread::scope(|scope| {
        let handles: Vec<_> = points
            .iter()
            .map(|&(r_c, l_c, q0)| {
                let mut p = base.clone();
                scope.spawn(move || -> Result<String> {
                    p.r_c = r_c;
                    p.l_c = l_c;
                    p.q0 = q0;
                    let (system, initial) = super::scenarios::channel(&p)?;
                    let state0 = system.initialize(&initial)?;
                    let report = system.run_to_steady(&state0, tol, max_steps)?;
                    let mid = system.grid().n_cells() / 2;
                    let split = report.state.c[0][mid] - report.state.c[1][mid];
                    let profile = system.current_profile(&report.state);
                    let j_mean = profile.iter().sum::<f64>() / profile.len() as f64;
                    Ok(format!(
                        "{:.16e},{:.16e},{:.16e},{},{:.16e},{:.4e},{},{:.16e},{:.16e}",
                        r_c, l_c, q0, report.steps, report.t_s, report.dpsi_inf,
                        report.converged, split, j_mean
                    ))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep thread panicked"))
            .collect()
    });
    let header = "r_c,l_c,q0,steps,t_s,dpsi_inf,converged,mid_c1_minus_c2,mean_current";
    println!("{header}");
    let mut text = format!("{header}\n");
    for row in results {
        let row = row?;
        println!("{row}");
        text.push_str(&row);
        text.push('\n');
    }
    if let Some(out) = &args.out {
        ensure_dir(out)?;
        csv::emit(&out.join("sweep.csv"), &text)?;
        println!("wrote {}", out.display());
    }
    Ok(())
}

pub fn dispatch(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Converge(a) => cmd_converge(a),
        Command::Iv(a) => cmd_iv(a),
        Command::Sweep(a) => cmd_sweep(a),
    }
}
