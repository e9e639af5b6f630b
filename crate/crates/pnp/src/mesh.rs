//! Uniform finite-volume grids, piecewise coefficient functions, and
//! breakpoint-aware cell-average quadrature.

use crate::{Error, Result};
use std::fmt;
use std::sync::Arc;

/// Uniform partition of `[lo, hi]` into `n_cells` cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    n_cells: usize,
    lo: f64,
    hi: f64,
    h: f64,
    centers: Vec<f64>,
    interfaces: Vec<f64>,
}

impl Grid {
    pub fn build(n_cells: usize, lo: f64, hi: f64) -> Result<Grid> {
        if n_cells < 2 {
            return Err(Error::Config(format!(
                "grid needs at least 2 cells, got {n_cells}"
            )));
        }
        if !(lo < hi) {
            return Err(Error::Config(format!("empty domain [{lo}, {hi}]")));
        }
        let span = hi - lo;
        let h = span / n_cells as f64;
        // Interfaces from the affine map so the endpoints land exactly on
        // lo and hi with no accumulated drift.
        let interfaces: Vec<f64> = (0..=n_cells)
            .map(|i| lo + span * (i as f64 / n_cells as f64))
            .collect();
        let centers: Vec<f64> = (0..n_cells)
            .map(|j| lo + span * ((j as f64 + 0.5) / n_cells as f64))
            .collect();
        Ok(Grid {
            n_cells,
            lo,
            hi,
            h,
            centers,
            interfaces,
        })
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Cell centers x_j, j = 0..N.
    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    /// Cell interfaces x_{j+1/2}, N+1 values.
    pub fn interfaces(&self) -> &[f64] {
        &self.interfaces
    }
}

type Segment = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Scalar function of x defined by closed-form segments between sorted
/// breakpoints. Segment k applies on `(bp[k-1], bp[k]]`.
#[derive(Clone)]
pub struct PiecewiseCoefficient {
    breakpoints: Vec<f64>,
    segments: Vec<Segment>,
}

impl fmt::Debug for PiecewiseCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PiecewiseCoefficient")
            .field("breakpoints", &self.breakpoints)
            .field("segments", &self.segments.len())
            .finish()
    }
}

impl PiecewiseCoefficient {
    pub fn constant(c: f64) -> Self {
        Self::from_fn(move |_| c)
    }

    pub fn from_fn(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        PiecewiseCoefficient {
            breakpoints: Vec::new(),
            segments: vec![Arc::new(f)],
        }
    }

    /// `segments.len()` must be `breakpoints.len() + 1`; breakpoints must be
    /// strictly increasing.
    pub fn from_segments(breakpoints: Vec<f64>, segments: Vec<Segment>) -> Result<Self> {
        if segments.len() != breakpoints.len() + 1 {
            return Err(Error::Config(format!(
                "{} segments for {} breakpoints",
                segments.len(),
                breakpoints.len()
            )));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("breakpoints not strictly increasing".into()));
        }
        Ok(PiecewiseCoefficient {
            breakpoints,
            segments,
        })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn eval(&self, x: f64) -> f64 {
        let k = self.breakpoints.partition_point(|&b| b < x);
        (self.segments[k])(x)
    }
}

/// Symmetric channel/bath geometry on [0, 1]: funnel baths of length
/// l_b = (1 - l_c)/2 tapering from radius r_f to r_c around a straight
/// channel of length l_c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelGeometry {
    pub r_f: f64,
    pub r_c: f64,
    pub l_c: f64,
}

impl ChannelGeometry {
    pub fn new(r_f: f64, r_c: f64, l_c: f64) -> Result<Self> {
        if !(r_c > 0.0 && r_c <= r_f) {
            return Err(Error::Config(format!(
                "channel radius must satisfy 0 < r_c <= r_f, got r_c={r_c}, r_f={r_f}"
            )));
        }
        if !(l_c > 0.0 && l_c < 1.0) {
            return Err(Error::Config(format!(
                "channel length must lie in (0, 1), got {l_c}"
            )));
        }
        Ok(ChannelGeometry { r_f, r_c, l_c })
    }

    /// Bath length, chosen so the geometry is symmetric and fills [0, 1].
    pub fn l_b(&self) -> f64 {
        (1.0 - self.l_c) / 2.0
    }
}

/// Cross-sectional area: linear taper over each bath, constant 2 r_c inside
/// the channel. Continuous at both breakpoints.
pub fn channel_area(geom: &ChannelGeometry) -> PiecewiseCoefficient {
    let ChannelGeometry { r_f, r_c, l_c } = *geom;
    let l_b = geom.l_b();
    PiecewiseCoefficient::from_segments(
        vec![l_b, l_b + l_c],
        vec![
            Arc::new(move |x| 2.0 * (r_f + (r_c - r_f) * x / l_b)),
            Arc::new(move |_| 2.0 * r_c),
            Arc::new(move |x| 2.0 * (r_c + (r_f - r_c) * (x - l_b - l_c) / l_b)),
        ],
    )
    .expect("valid segment layout")
}

/// Permanent charge: 0 in the baths, 2 Q0 inside the channel.
pub fn channel_charge(q0: f64, geom: &ChannelGeometry) -> PiecewiseCoefficient {
    let l_b = geom.l_b();
    let l_c = geom.l_c;
    PiecewiseCoefficient::from_segments(
        vec![l_b, l_b + l_c],
        vec![
            Arc::new(|_| 0.0),
            Arc::new(move |_| 2.0 * q0),
            Arc::new(|_| 0.0),
        ],
    )
    .expect("valid segment layout")
}

// 5-point Gauss-Legendre nodes and weights on [-1, 1]; exact for degree <= 9.
const GL5_X: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL5_W: [f64; 5] = [
    0.236_926_885_056_189_08,
    0.478_628_670_499_366_47,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_47,
    0.236_926_885_056_189_08,
];

fn gauss5(f: &PiecewiseCoefficient, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (&x, &w) in GL5_X.iter().zip(&GL5_W) {
        acc += w * f.eval(mid + half * x);
    }
    acc * half
}

/// Integrate `f` over `[a, b]`, splitting at every interior breakpoint.
pub fn integrate(f: &PiecewiseCoefficient, a: f64, b: f64) -> f64 {
    let mut acc = 0.0;
    let mut left = a;
    for &bp in f.breakpoints() {
        if bp > left && bp < b {
            acc += gauss5(f, left, bp);
            left = bp;
        }
    }
    acc + gauss5(f, left, b)
}

/// Cell average (1/h) ∫_{I_j} f dx, j = 0..N-1.
pub fn cell_average(f: &PiecewiseCoefficient, grid: &Grid, j: usize) -> f64 {
    let a = grid.interfaces()[j];
    let b = grid.interfaces()[j + 1];
    integrate(f, a, b) / grid.h()
}

/// Cell averages of `f` over every cell of `grid`.
pub fn cell_averages(f: &PiecewiseCoefficient, grid: &Grid) -> Vec<f64> {
    (0..grid.n_cells()).map(|j| cell_average(f, grid, j)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_basic() {
        let g = Grid::build(4, 0.0, 1.0).unwrap();
        assert_eq!(g.h(), 0.25);
        assert_eq!(g.centers(), &[0.125, 0.375, 0.625, 0.875]);
        assert_eq!(g.interfaces()[0], 0.0);
        assert_eq!(g.interfaces()[4], 1.0);
    }

    #[test]
    fn grid_paper_resolutions() {
        let g = Grid::build(100, 0.0, 1.0).unwrap();
        assert!((g.h() - 0.01).abs() < 1e-16);
        let g = Grid::build(200, -10.0, 10.0).unwrap();
        assert!((g.h() - 0.1).abs() < 1e-14);
        assert_eq!(g.interfaces()[0], -10.0);
        assert_eq!(g.interfaces()[200], 10.0);
    }

    #[test]
    fn grid_rejects_bad_input() {
        assert!(Grid::build(1, 0.0, 1.0).is_err());
        assert!(Grid::build(10, 1.0, 1.0).is_err());
        assert!(Grid::build(10, 2.0, 1.0).is_err());
    }

    #[test]
    fn cell_average_constant() {
        let g = Grid::build(7, 0.0, 1.0).unwrap();
        let f = PiecewiseCoefficient::constant(3.25);
        for j in 0..7 {
            assert!((cell_average(&f, &g, j) - 3.25).abs() < 1e-14);
        }
    }

    #[test]
    fn cell_average_polynomial_oracle() {
        // (1/h) ∫_0^h (5-4x)^2 dx with antiderivative -(5-4x)^3/12.
        let g = Grid::build(4, 0.0, 1.0).unwrap();
        let f = PiecewiseCoefficient::from_fn(|x| (5.0 - 4.0 * x) * (5.0 - 4.0 * x));
        let anti = |x: f64| -(5.0 - 4.0 * x).powi(3) / 12.0;
        let exact = (anti(0.25) - anti(0.0)) / 0.25;
        let got = cell_average(&f, &g, 0);
        assert!((got - exact).abs() <= 1e-13 * exact.abs());
    }

    #[test]
    fn channel_charge_values() {
        let geom = ChannelGeometry::new(20.0, 0.2, 0.2).unwrap();
        let rho = channel_charge(0.2, &geom);
        assert_eq!(rho.eval(0.5), 0.4);
        assert_eq!(rho.eval(geom.l_b() / 2.0), 0.0);
        let zero = channel_charge(0.0, &geom);
        assert_eq!(zero.eval(0.5), 0.0);
        let rho = channel_charge(0.1, &geom);
        assert_eq!(rho.eval(geom.l_b() / 2.0), 0.0);
    }

    #[test]
    fn channel_area_values_and_continuity() {
        let geom = ChannelGeometry::new(20.0, 0.2, 0.2).unwrap();
        let area = channel_area(&geom);
        assert_eq!(area.eval(0.0), 40.0);
        assert!((area.eval(0.5) - 0.4).abs() < 1e-14);
        for &(r_f, r_c, l_c) in &[(20.0, 0.2, 0.2), (20.0, 1.0 / 3.0, 1.0 / 3.0), (5.0, 1.0 / 11.0, 1.0 / 11.0)] {
            let geom = ChannelGeometry::new(r_f, r_c, l_c).unwrap();
            let area = channel_area(&geom);
            let l_b = geom.l_b();
            // left and right limits at both breakpoints; the slope of the
            // taper is 2(r_f - r_c)/l_b, so keep eps * slope small
            let eps = 1e-12;
            let slope = 2.0 * (r_f - r_c) / l_b;
            assert!((area.eval(l_b) - 2.0 * r_c).abs() < 1e-10 * slope);
            assert!((area.eval(l_b + eps) - 2.0 * r_c).abs() < 1e-10 * slope);
            assert!((area.eval(l_b + l_c) - 2.0 * r_c).abs() < 1e-10 * slope);
            assert!((area.eval(l_b + l_c + eps) - 2.0 * r_c).abs() < 1e-10 * slope);
        }
    }

    #[test]
    fn sum_of_cell_averages_matches_domain_integral() {
        let geom = ChannelGeometry::new(20.0, 1.0 / 3.0, 1.0 / 3.0).unwrap();
        let area = channel_area(&geom);
        // N=100 does not align with l_b = 1/3.
        let g = Grid::build(100, 0.0, 1.0).unwrap();
        let total: f64 = (0..100).map(|j| g.h() * cell_average(&area, &g, j)).sum();
        let whole = integrate(&area, 0.0, 1.0);
        assert!((total - whole).abs() <= 1e-12 * whole.abs());
    }

    #[test]
    fn geometry_validation() {
        assert!(ChannelGeometry::new(1.0, 2.0, 0.2).is_err());
        assert!(ChannelGeometry::new(1.0, 0.5, 1.5).is_err());
        assert!(ChannelGeometry::new(1.0, -0.5, 0.2).is_err());
    }
}
