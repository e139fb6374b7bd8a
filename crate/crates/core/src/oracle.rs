//! Independent numerical machinery used to check the closed forms.
//!
//! Nothing here is used to produce primary outputs, and nothing here calls the
//! hypergeometric kernels or differentiates the Ermakov formulas in time
//! analytically.

use std::f64::consts::PI;

use crate::ermakov::{evolve_closed_form_with, GammaBranch};
use crate::error::{Error, Result};
use crate::fock::FockWave;
use crate::model::{InitialData, ModelParams};
use crate::C64;

/// Uniform grid with an odd number of points, for composite Simpson.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lower: f64,
    pub upper: f64,
    pub num_points: usize,
}

impl GridSpec {
    pub fn new(lower: f64, upper: f64, num_points: usize) -> Result<Self> {
        if num_points < 3 || num_points % 2 == 0 {
            return Err(Error::Domain(format!("grid needs an odd point count >= 3, got {num_points}")));
        }
        if !(lower.is_finite() && upper.is_finite() && upper > lower) {
            return Err(Error::Domain(format!("invalid grid bounds [{lower}, {upper}]")));
        }
        Ok(GridSpec { lower, upper, num_points })
    }

    pub fn symmetric(half_width: f64, num_points: usize) -> Result<Self> {
        Self::new(-half_width, half_width, num_points)
    }

    pub fn step(&self) -> f64 {
        (self.upper - self.lower) / (self.num_points - 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.num_points).map(|j| self.lower + h * j as f64).collect()
    }

    /// Composite Simpson weights.
    pub fn weights(&self) -> Vec<f64> {
        let h = self.step();
        let last = self.num_points - 1;
        (0..self.num_points)
            .map(|j| {
                let c = if j == 0 || j == last {
                    1.0
                } else if j % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                c * h / 3.0
            })
            .collect()
    }
}

/// Composite Simpson rule on uniformly spaced samples (odd length).
pub fn simpson(values: &[f64], h: f64) -> f64 {
    let last = values.len() - 1;
    let mut acc = values[0] + values[last];
    for (j, v) in values.iter().enumerate().take(last).skip(1) {
        acc += if j % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    acc * h / 3.0
}

fn simpson_complex(values: &[C64], h: f64) -> C64 {
    let last = values.len() - 1;
    let mut acc = values[0] + values[last];
    for (j, v) in values.iter().enumerate().take(last).skip(1) {
        acc += v * if j % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * (h / 3.0)
}

/// `∫ f*(x) g(x) dx` by composite Simpson.
pub fn overlap(f: &[C64], g: &[C64], grid: &GridSpec) -> C64 {
    let prod: Vec<C64> = f.iter().zip(g).map(|(a, b)| a.conj() * b).collect();
    simpson_complex(&prod, grid.step())
}

/// Largest magnitude at the two grid ends; a quadrature is trustworthy when this is tiny.
pub fn edge_magnitude(values: &[C64]) -> f64 {
    values[0].norm().max(values[values.len() - 1].norm())
}

/// Classical RK4 for `p(t) y'' + q(t) y' + r(t) y = 0`.
pub fn rk4_integrate(
    coeffs: impl Fn(f64) -> [f64; 3],
    y0: f64,
    dy0: f64,
    t0: f64,
    t1: f64,
    steps: usize,
) -> Result<(f64, f64)> {
    if steps == 0 {
        return Err(Error::Domain("rk4 needs at least one step".into()));
    }
    let f = |t: f64, y: f64, v: f64| {
        let [p, q, r] = coeffs(t);
        (v, -(q * v + r * y) / p)
    };
    let h = (t1 - t0) / steps as f64;
    let (mut y, mut v) = (y0, dy0);
    for i in 0..steps {
        let t = t0 + h * i as f64;
        let k1 = f(t, y, v);
        let k2 = f(t + 0.5 * h, y + 0.5 * h * k1.0, v + 0.5 * h * k1.1);
        let k3 = f(t + 0.5 * h, y + 0.5 * h * k2.0, v + 0.5 * h * k2.1);
        let k4 = f(t + h, y + h * k3.0, v + h * k3.1);
        y += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        v += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        if !(y.is_finite() && v.is_finite()) {
            return Err(Error::Divergence(format!("rk4 state became non-finite at t = {t}")));
        }
    }
    Ok((y, v))
}

/// Default quadrature grid for the state `init` at time `t`.
///
/// Half-width `12/√ω · max(1, 1/|β(0)|, e^{λt})` around the origin, widened by the
/// mean displacement; 4097 points.
pub fn default_grid(init: &InitialData, t: f64, params: &ModelParams) -> Result<GridSpec> {
    let w = params.omega();
    let spread = 1f64.max(1.0 / init.beta0.abs()).max((params.lambda() * t).exp());
    let (q, _) = params.model().means(init, t);
    let half = 12.0 / w.sqrt() * spread * (1.0 + 0.1 * init.n as f64).sqrt() + q.abs();
    GridSpec::symmetric(half, 4097)
}

/// Relative residual of the time-dependent Schrödinger equation for `ψₙ`.
///
/// `max |i∂ₜψ − Hψ| / max |ψ|` over the interior grid points, with ∂ₜ from a
/// central difference (Δt = 1e-4) and the spatial derivatives analytic.
pub fn tdse_residual(init: &InitialData, t: f64, params: &ModelParams, grid: &GridSpec) -> Result<f64> {
    tdse_residual_with(init, t, params, grid, GammaBranch::Continuous)
}

pub fn tdse_residual_with(
    init: &InitialData,
    t: f64,
    params: &ModelParams,
    grid: &GridSpec,
    branch: GammaBranch,
) -> Result<f64> {
    let dt = 1e-4;
    let wave =
        |s: f64| -> Result<FockWave> { Ok(FockWave::new(evolve_closed_form_with(init, s, params, branch)?, init.n)) };
    let (now, fwd, back) = (wave(t)?, wave(t + dt)?, wave(t - dt)?);
    let h = params.model().coeffs(t);
    let i = C64::i();
    let pts = grid.points();
    let (mut worst, mut peak) = (0.0f64, 0.0f64);
    for &x in &pts[1..pts.len() - 1] {
        let [psi, dpsi, ddpsi] = now.with_derivatives(x);
        let dt_psi = (fwd.value(x) - back.value(x)) / (2.0 * dt);
        let h_psi = -h.a * ddpsi + h.b * x * x * psi - i * h.d * (2.0 * x * dpsi + psi);
        worst = worst.max((i * dt_psi - h_psi).norm());
        peak = peak.max(psi.norm());
    }
    Ok(worst / peak)
}

/// `(1/π) ∫ ψ*(x+y) ψ(x−y) e^{2ipy} dy` on the `y` grid.
pub fn wigner_transform(psi: impl Fn(f64) -> C64, grid: &GridSpec, x: f64, p: f64) -> f64 {
    let vals: Vec<C64> =
        grid.points().into_iter().map(|y| psi(x + y).conj() * psi(x - y) * C64::from_polar(1.0, 2.0 * p * y)).collect();
    simpson_complex(&vals, grid.step()).re / PI
}

/// `|φ(p)|²` with `φ(p) = (2π)^{−1/2} ∫ ψ(x) e^{−ipx} dx`, direct discrete Fourier sum.
pub fn momentum_density(values: &[C64], grid: &GridSpec, p: f64) -> f64 {
    let xs = grid.points();
    let vals: Vec<C64> = values.iter().zip(xs).map(|(v, x)| v * C64::from_polar(1.0, -p * x)).collect();
    simpson_complex(&vals, grid.step()).norm_sqr() / (2.0 * PI)
}

/// `∫ exp(i(Az² + Bz + C)) dz = √(πi/A) exp(i(C − B²/(4A)))`.
///
/// Principal square root, which is the branch continuous from `Im A > 0`.
pub fn complex_gaussian_integral(a: C64, b: C64, c: C64) -> Result<C64> {
    if a.norm() == 0.0 {
        return Err(Error::Degenerate("quadratic coefficient is zero".into()));
    }
    if a.im < 0.0 {
        return Err(Error::Degenerate("Im A < 0 makes the integral diverge".into()));
    }
    let i = C64::i();
    Ok((PI * i / a).sqrt() * (i * (c - b * b / (4.0 * a))).exp())
}
