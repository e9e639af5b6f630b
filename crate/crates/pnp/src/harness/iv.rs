//! Current-voltage sweeps: drive the channel scenario to steady state at a
//! list of applied voltages and report the steady current per voltage, with a
//! least-squares linearity check.

use super::scenarios::{channel, ChannelParams};
use crate::Result;

#[derive(Debug, Clone)]
pub struct IvPoint {
    pub voltage: f64,
    /// Spatial mean of the steady interior current; None if the run did not
    /// converge within the step budget.
    pub current: Option<f64>,
    pub steps: u64,
}

/// Run one steady state per voltage. Points are independent and run on their
/// own threads; results come back in input order. Non-convergent points are
/// flagged, not fatal.
pub fn sweep(base: &ChannelParams, voltages: &[f64], tol: f64, max_steps: u64) -> Result<Vec<IvPoint>> {
    let results: Vec<Result<IvPoint>> = std::thread::scope(|scope| {
        let handles: Vec<_> = voltages
            .iter()
            .map(|&v| {
                let mut p = base.clone();
                p.voltage = v;
                scope.spawn(move || -> Result<IvPoint> {
                    let (system, initial) = channel(&p)?;
                    let state0 = system.initialize(&initial)?;
                    let report = system.run_to_steady(&state0, tol, max_steps)?;
                    let current = report.converged.then(|| {
                        let profile = system.current_profile(&report.state);
                        profile.iter().sum::<f64>() / profile.len() as f64
                    });
                    Ok(IvPoint {
                        voltage: v,
                        current,
                        steps: report.steps,
                    })
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep thread panicked"))
            .collect()
    });
    results.into_iter().collect()
}

/// Least-squares line through the converged points: (slope, intercept, r2).
/// Returns None with fewer than two converged points.
pub fn linear_fit(points: &[IvPoint]) -> Option<(f64, f64, f64)> {
    let data: Vec<(f64, f64)> = points
        .iter()
        .filter_map(|p| p.current.map(|j| (p.voltage, j)))
        .collect();
    let n = data.len() as f64;
    if data.len() < 2 {
        return None;
    }
    let mx = data.iter().map(|d| d.0).sum::<f64>() / n;
    let my = data.iter().map(|d| d.1).sum::<f64>() / n;
    let sxx: f64 = data.iter().map(|d| (d.0 - mx).powi(2)).sum();
    let sxy: f64 = data.iter().map(|d| (d.0 - mx) * (d.1 - my)).sum();
    let syy: f64 = data.iter().map(|d| (d.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = data
        .iter()
        .map(|d| (d.1 - slope * d.0 - intercept).powi(2))
        .sum();
    let r2 = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Some((slope, intercept, r2))
}
