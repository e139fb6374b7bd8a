//! Wave functions, the displacement/squeeze kernels, and transition amplitudes.
//!
//! Every kernel is a terminating hypergeometric sum. The sums are regrouped
//! so that no small parameter ever appears in a denominator, and each term is
//! accumulated from a log-magnitude and a phase so factorials up to the
//! largest supported truncation never overflow.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::ermakov::{evolve_closed_form_with, slow_invariants, slow_vectors, ErmakovState, GammaBranch};
use crate::error::{Error, Result};
use crate::model::{InitialData, ModelParams};
use crate::oracle::{simpson, GridSpec};
use crate::C64;

/// Largest truncation order reached by adaptive growth.
pub const MAX_NMAX: usize = 512;

const TAIL_TARGET: f64 = 1e-10;
const LN_TABLE: usize = 4 * MAX_NMAX + 64;

fn ln_factorials() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut v = vec![0.0; LN_TABLE];
        for k in 1..LN_TABLE {
            v[k] = v[k - 1] + (k as f64).ln();
        }
        v
    })
}

fn ln_fact(k: usize) -> f64 {
    ln_factorials()[k]
}

/// `ln Γ(j + ½)`.
fn ln_gamma_half(j: usize) -> f64 {
    ln_fact(2 * j) - ln_fact(j) - j as f64 * 4f64.ln() + 0.5 * PI.ln()
}

/// Sum of `exp(lm_k + i ph_k)` without overflow; returns `exp(offset + i phase) · sum`.
fn log_sum(terms: impl Iterator<Item = (f64, f64)>, offset: f64, phase: f64) -> C64 {
    let terms: Vec<(f64, f64)> = terms.filter(|(lm, _)| *lm > f64::NEG_INFINITY).collect();
    let Some(top) = terms.iter().map(|t| t.0).reduce(f64::max) else {
        return C64::new(0.0, 0.0);
    };
    let mut acc = C64::new(0.0, 0.0);
    for (lm, ph) in terms {
        acc += C64::from_polar((lm - top).exp(), ph);
    }
    acc * C64::from_polar((top + offset).exp(), phase)
}

/// Physicists' Hermite polynomial by upward recurrence.
pub fn hermite(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Normalized Hermite functions `h_k(y) = e^{−y²/2} H_k(y)/√(2^k k! √π)` for k = 0..=n.
///
/// The recurrence carries a running log scale, so large orders at large |y| neither overflow
/// nor lose the Gaussian factor to underflow.
pub fn hermite_functions(n: usize, y: f64) -> Vec<f64> {
    const BIG: f64 = 1e150;
    let mut out = Vec::with_capacity(n + 1);
    let mut scale = -0.5 * y * y;
    let (mut prev, mut cur) = (0.0, PI.powf(-0.25));
    out.push(cur * scale.exp());
    for k in 0..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * y * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > BIG {
            cur /= BIG;
            prev /= BIG;
            scale += BIG.ln();
        }
        out.push(cur * scale.exp());
    }
    out
}

/// Stationary oscillator eigenfunction `Ψ_m(x)` for frequency ω.
pub fn stationary_wavefunction(m: usize, x: f64, omega: f64) -> f64 {
    omega.powf(0.25) * hermite_functions(m, x * omega.sqrt())[m]
}

/// Dynamical Fock state `ψₙ(x, t)` for a fixed Ermakov state.
#[derive(Debug, Clone, Copy)]
pub struct FockWave {
    state: ErmakovState,
    n: usize,
}

impl FockWave {
    pub fn new(state: ErmakovState, n: usize) -> Self {
        FockWave { state, n }
    }

    fn phase(&self, x: f64) -> f64 {
        let s = &self.state;
        s.alpha * x * x + s.delta * x + s.kappa + (2 * self.n + 1) as f64 * s.gamma
    }

    pub fn value(&self, x: f64) -> C64 {
        let s = &self.state;
        let h = hermite_functions(self.n, s.beta * x + s.eps)[self.n];
        C64::from_polar(s.beta.abs().sqrt() * h, self.phase(x))
    }

    /// `(ψ, ∂ₓψ, ∂ₓ²ψ)` from the Hermite ladder relations.
    pub fn with_derivatives(&self, x: f64) -> [C64; 3] {
        let s = &self.state;
        let n = self.n;
        let y = s.beta * x + s.eps;
        let hs = hermite_functions(n, y);
        let h = hs[n];
        let h_lower = if n > 0 { hs[n - 1] } else { 0.0 };
        let dh = (2.0 * n as f64).sqrt() * h_lower - y * h;
        let ddh = (y * y - 2.0 * n as f64 - 1.0) * h;
        let root = s.beta.abs().sqrt();
        let (f, df, ddf) = (root * h, root * s.beta * dh, root * s.beta * s.beta * ddh);
        let dphi = 2.0 * s.alpha * x + s.delta;
        let ddphi = 2.0 * s.alpha;
        let e = C64::from_polar(1.0, self.phase(x));
        let i = C64::i();
        [e * f, e * (i * dphi * f + df), e * (i * ddphi * f + 2.0 * i * dphi * df - dphi * dphi * f + ddf)]
    }
}

/// `ψₙ(x, t)` with the continuous γ.
pub fn squeezed_wavefunction(init: &InitialData, t: f64, params: &ModelParams, x: f64) -> Result<C64> {
    let st = evolve_closed_form_with(init, t, params, GammaBranch::Continuous)?;
    Ok(FockWave::new(st, init.n).value(x))
}

/// Complex samples of a wave function on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub num_points: usize,
    pub values: Vec<C64>,
    pub t: f64,
    pub n: usize,
}

impl WavefunctionGrid {
    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::new(self.x_min, self.x_max, self.num_points)
    }

    pub fn xs(&self) -> Vec<f64> {
        let h = (self.x_max - self.x_min) / (self.num_points - 1) as f64;
        (0..self.num_points).map(|j| self.x_min + h * j as f64).collect()
    }

    /// L² norm by composite Simpson.
    pub fn norm(&self) -> Result<f64> {
        let g = self.grid()?;
        let dens: Vec<f64> = self.values.iter().map(|v| v.norm_sqr()).collect();
        Ok(simpson(&dens, g.step()).sqrt())
    }
}

/// Samples `ψₙ(·, t)` on `grid`.
pub fn sample_wavefunction(
    init: &InitialData,
    t: f64,
    params: &ModelParams,
    grid: &GridSpec,
) -> Result<WavefunctionGrid> {
    let wave = FockWave::new(evolve_closed_form_with(init, t, params, GammaBranch::Continuous)?, init.n);
    Ok(WavefunctionGrid {
        x_min: grid.lower,
        x_max: grid.upper,
        num_points: grid.num_points,
        values: grid.points().into_iter().map(|x| wave.value(x)).collect(),
        t,
        n: init.n,
    })
}

/// `ln` of `[m!/(m−k)!][n!/(n−k)!]/k!`.
fn ln_binom_pair(m: usize, n: usize, k: usize) -> f64 {
    ln_fact(m) - ln_fact(m - k) + ln_fact(n) - ln_fact(n - k) - ln_fact(k)
}

fn ln_or_skip(x: f64, power: usize) -> f64 {
    if power == 0 {
        0.0
    } else if x == 0.0 {
        f64::NEG_INFINITY
    } else {
        power as f64 * x.ln()
    }
}

/// Displacement kernel `T_mn(A, B, Γ)`.
pub fn matrix_t(m: usize, n: usize, a: f64, b: f64, gamma: f64) -> C64 {
    let nu = 0.5 * (a * a + b * b);
    if nu < 1e-14 {
        return if m == n { C64::from_polar(1.0, gamma) } else { C64::new(0.0, 0.0) };
    }
    let arg_u = C64::new(b, a).arg();
    let arg_v = C64::new(-b, a).arg();
    let ln_r = 0.5 * nu.ln();
    let offset = -0.5 * (ln_fact(m) + ln_fact(n)) - 0.5 * nu;
    let phase = (m as f64 - n as f64) * FRAC_PI_2 + gamma - 0.5 * a * b;
    log_sum(
        (0..=m.min(n)).map(|k| {
            (ln_binom_pair(m, n, k) + (m + n - 2 * k) as f64 * ln_r, (m - k) as f64 * arg_u + (n - k) as f64 * arg_v)
        }),
        offset,
        phase,
    )
}

/// Displacement kernel written in the slow vector ξ.
///
/// `|ξ|²` must equal `B` to 1e-9.
pub fn matrix_r(m: usize, n: usize, xi: C64, b_t: f64, d: f64, omega: f64) -> Result<C64> {
    if (xi.norm_sqr() - b_t).abs() > 1e-9 * b_t.max(1.0) {
        return Err(Error::Domain(format!("|xi|^2 = {} does not match B = {b_t}", xi.norm_sqr())));
    }
    if b_t < 1e-14 {
        return Ok(if m == n { C64::from_polar(1.0, d) } else { C64::new(0.0, 0.0) });
    }
    let ln_x = xi.norm().ln();
    let th = xi.arg();
    let l2w = (2.0 * omega).ln();
    let offset = -0.5 * (ln_fact(m) + ln_fact(n) + (m + n) as f64 * l2w) - b_t / (4.0 * omega);
    let phase = (m + n) as f64 * FRAC_PI_2 + d;
    Ok(log_sum(
        (0..=m.min(n)).map(|k| {
            (
                ln_binom_pair(m, n, k) + k as f64 * l2w + (m + n - 2 * k) as f64 * ln_x,
                k as f64 * PI + (m as f64 - n as f64) * th,
            )
        }),
        offset,
        phase,
    ))
}

/// Sign in the argument `½(1 ± 2iβ√ω/…)` of the squeeze-kernel ₂F₁.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Branch {
    /// The branch that reproduces the overlap integrals.
    #[default]
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Common body of the two squeeze kernels.
///
/// Evaluates `Σ_k (−1)^k |c_k| r^{J−k} q^k` times the prefactor, where
/// `J = (m+n)/2`, `|q| = |big|/2` and the prefactor carries
/// `Γ(J+½) big^{−(J+½)} e^{i(m−n)θ/2}`.
fn squeeze_sum(m: usize, n: usize, r: f64, theta: f64, q: C64, big: C64, ln_pref: f64) -> C64 {
    let j = (m + n) / 2;
    let ln_q = q.norm().ln();
    let arg_q = q.arg();
    let ln_big = big.norm().ln();
    let offset = ln_pref - 0.5 * (ln_fact(m) + ln_fact(n) + PI.ln()) + 0.5 * (m + n) as f64 * 2f64.ln()
        - (j as f64 + 0.5) * ln_big;
    let phase = n as f64 * FRAC_PI_2 + 0.5 * (m as f64 - n as f64) * theta - (j as f64 + 0.5) * big.arg();
    log_sum(
        (0..=m.min(n)).map(|k| {
            (
                ln_fact(m) - ln_fact(m - k) + ln_fact(n) - ln_fact(n - k) - ln_fact(k)
                    + ln_gamma_half(j - k)
                    + ln_or_skip(r, j - k)
                    + k as f64 * ln_q,
                k as f64 * (PI + arg_q),
            )
        }),
        offset,
        phase,
    )
}

/// Squeeze kernel `M_mn(α, β)`: the overlap `⟨Ψ_m | e^{iαx²} √|β| h_n(βx)⟩`.
pub fn matrix_m(m: usize, n: usize, alpha: f64, beta: f64, omega: f64, branch: Branch) -> C64 {
    if (m + n) % 2 == 1 {
        return C64::new(0.0, 0.0);
    }
    let bb = beta * beta;
    if (omega - bb).abs() + alpha.abs() < 1e-12 {
        let s = if beta < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
        return C64::new(if m == n { s } else { 0.0 }, 0.0);
    }
    let x = C64::new(0.5 * (omega - bb), alpha);
    let y = C64::new(0.5 * (omega + bb), -alpha);
    let q = C64::new(x.norm(), branch.sign() * beta.abs() * omega.sqrt()) * 0.5;
    let ln_pref = 0.5 * omega.ln() + 0.5 * (beta.abs().ln() - 0.5 * omega.ln());
    let v = squeeze_sum(m, n, x.norm(), x.arg(), q, y, ln_pref);
    if beta < 0.0 && n % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Squeeze kernel `N_mn(η, ζ)` written in the slow vectors.
///
/// `A` only validates the domain `A ≥ 2ω`. The evaluation uses
/// `|η|² − |ζ|² = 4ωβ(0)²`, which keeps it finite at `A = 2ω`.
pub fn matrix_n(m: usize, n: usize, eta: C64, zeta: C64, a_t: f64, omega: f64) -> Result<C64> {
    if a_t < 2.0 * omega * (1.0 - 1e-12) {
        return Err(Error::Domain(format!("A = {a_t} is below 2*omega = {}", 2.0 * omega)));
    }
    if (m + n) % 2 == 1 {
        return Ok(C64::new(0.0, 0.0));
    }
    let gap = eta.norm_sqr() - zeta.norm_sqr();
    if gap <= 0.0 {
        return Err(Error::Domain("|eta| must exceed |zeta|".into()));
    }
    let s = 0.5 * gap.sqrt();
    let q = C64::new(zeta.norm(), 2.0 * s) * 0.5;
    let ln_pref = 0.5 * (2f64.ln() + omega.ln()) + 0.25 * (gap / (4.0 * omega * omega)).ln();
    Ok(squeeze_sum(m, n, zeta.norm(), zeta.arg(), q, eta, ln_pref))
}

/// How many Fock levels to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    /// Double from a squeezing-based guess until the tail mass is below 1e-10.
    Auto,
    Fixed(usize),
}

/// Column `n` of the transition amplitudes, rows `0..=nmax`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeMatrix {
    /// `c_mn` from the N·S order.
    pub entries: Vec<C64>,
    pub n: usize,
    pub nmax: usize,
    /// `1 − Σ|c_mn|²` over the kept rows, clamped at 0.
    pub tail_mass: f64,
    /// `max_m |(N·S)_mn − (R·N)_mn|`.
    pub order_gap: f64,
}

impl AmplitudeMatrix {
    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `(Σ m p_m, Σ m² p_m − (Σ m p_m)²)`.
    pub fn moments(&self) -> (f64, f64) {
        let p = photon_distribution(self);
        let m1: f64 = p.iter().enumerate().map(|(m, x)| m as f64 * x).sum();
        let m2: f64 = p.iter().enumerate().map(|(m, x)| (m * m) as f64 * x).sum();
        (m1, m2 - m1 * m1)
    }
}

/// `p_m = |c_mn|²`.
pub fn photon_distribution(amps: &AmplitudeMatrix) -> Vec<f64> {
    amps.entries.iter().map(|c| c.norm_sqr()).collect()
}

fn starting_nmax(init: &InitialData, t: f64, params: &ModelParams) -> usize {
    let squeeze = (params.lambda() * t).sinh().powi(2).ceil() as usize;
    let shift = ErmakovState::from_init(init).invariant_c().ceil() as usize;
    (4 * init.n + 8 * squeeze + 4 * shift).clamp(32, MAX_NMAX)
}

/// Transition amplitudes `c_mn`, normalized so each column is a unit vector.
///
/// Both factorization orders are evaluated. `Σ|c|² > 1 + 1e-8`, or a converged
/// column whose two orders disagree by more than 1e-8, is reported as
/// [`Error::Precision`].
pub fn amplitudes(init: &InitialData, t: f64, params: &ModelParams, truncation: Truncation) -> Result<AmplitudeMatrix> {
    init.validate()?;
    match truncation {
        Truncation::Fixed(nmax) => {
            if nmax < init.n {
                return Err(Error::Domain(format!("nmax = {nmax} is below n = {}", init.n)));
            }
            amplitudes_at(init, t, params, nmax, false)
        }
        Truncation::Auto => {
            let mut nmax = starting_nmax(init, t, params).max(init.n);
            loop {
                let amps = amplitudes_at(init, t, params, nmax, true)?;
                if amps.tail_mass < TAIL_TARGET {
                    return Ok(amps);
                }
                if nmax >= MAX_NMAX {
                    return Err(Error::Convergence { nmax, tail: amps.tail_mass });
                }
                nmax = (2 * nmax).min(MAX_NMAX);
            }
        }
    }
}

fn amplitudes_at(
    init: &InitialData,
    t: f64,
    params: &ModelParams,
    nmax: usize,
    strict: bool,
) -> Result<AmplitudeMatrix> {
    let w = params.omega();
    let n = init.n;
    let (ci, flipped) = init.canonical();
    let v = slow_vectors(&ci, t, params);
    let inv = slow_invariants(&ci, t, params);
    let inner = (2 * (nmax + 1) + 32).min(LN_TABLE / 2 - 8);

    let s_col: Vec<C64> = (0..inner).map(|k| matrix_t(k, n, ci.eps0, ci.delta0 / ci.beta0, ci.kappa0)).collect();
    let n_col: Vec<C64> = (0..inner).map(|k| matrix_n(k, n, v.eta, v.zeta, inv.a, w)).collect::<Result<_>>()?;
    let support = |col: &[C64]| {
        let top = col.iter().map(|c| c.norm()).fold(0.0, f64::max);
        col.iter().rposition(|c| c.norm() > 1e-20 * top).map_or(0, |k| k + 1)
    };
    let (ks, kn) = (support(&s_col), support(&n_col));

    let rows: Vec<(C64, C64)> = (0..=nmax)
        .into_par_iter()
        .map(|m| -> Result<(C64, C64)> {
            let mut ns = C64::new(0.0, 0.0);
            for (k, s) in s_col.iter().enumerate().take(ks) {
                ns += matrix_n(m, k, v.eta, v.zeta, inv.a, w)? * s;
            }
            let mut rn = C64::new(0.0, 0.0);
            for (k, nk) in n_col.iter().enumerate().take(kn) {
                rn += matrix_r(m, k, v.xi, inv.b, inv.d, w)? * nk;
            }
            Ok((ns, rn))
        })
        .collect::<Result<_>>()?;

    let sign = |m: usize| if flipped && m % 2 == 1 { -1.0 } else { 1.0 };
    let entries: Vec<C64> = rows.iter().enumerate().map(|(m, r)| r.0 * sign(m)).collect();
    let order_gap = rows.iter().map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    let total: f64 = entries.iter().map(|c| c.norm_sqr()).sum();
    if total > 1.0 + 1e-8 {
        return Err(Error::Precision(format!(
            "column norm {total} exceeds 1 at Nmax = {nmax}; kernel sums lost accuracy"
        )));
    }
    let tail_mass = (1.0 - total).max(0.0);
    if strict && tail_mass < TAIL_TARGET && order_gap > 1e-8 {
        return Err(Error::Precision(format!("factorization orders disagree by {order_gap:e} at Nmax = {nmax}")));
    }
    Ok(AmplitudeMatrix { entries, n, nmax, tail_mass, order_gap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Variant;

    #[test]
    fn hermite_values() {
        assert_eq!(hermite(0, 0.7), 1.0);
        assert_eq!(hermite(3, 1.0), -4.0);
        assert_eq!(hermite(2, 0.0), -2.0);
    }

    #[test]
    fn hermite_functions_match_polynomials() {
        for y in [-2.5, -0.3, 0.0, 1.1, 3.7] {
            let hs = hermite_functions(12, y);
            for (k, h) in hs.iter().enumerate() {
                let norm = (2f64.powi(k as i32) * (1..=k).product::<usize>() as f64 * PI.sqrt()).sqrt();
                let want = (-0.5 * y * y).exp() * hermite(k, y) / norm;
                assert!((h - want).abs() < 1e-13, "k={k} y={y}");
            }
        }
    }

    #[test]
    fn stationary_values_and_large_order() {
        assert!((stationary_wavefunction(0, 0.0, 1.0) - PI.powf(-0.25)).abs() < 1e-15);
        assert_eq!(stationary_wavefunction(1, 0.0, 2.0), 0.0);
        let v = stationary_wavefunction(400, 20.0, 1.0);
        assert!(v.is_finite() && v != 0.0);
        assert_eq!(stationary_wavefunction(400, 60.0, 1.0), 0.0);
    }

    #[test]
    fn t_kernel_limits() {
        assert_eq!(matrix_t(3, 3, 0.0, 0.0, 0.0), C64::new(1.0, 0.0));
        assert_eq!(matrix_t(2, 3, 0.0, 0.0, 0.0), C64::new(0.0, 0.0));
        let (a, b, g): (f64, f64, f64) = (0.4, -0.3, 0.2);
        let nu = 0.5 * (a * a + b * b);
        let want = C64::from_polar((-0.5 * nu).exp(), g - 0.5 * a * b);
        assert!((matrix_t(0, 0, a, b, g) - want).norm() < 1e-15);
        for n in 0..=10 {
            let norm: f64 = (0..80).map(|m| matrix_t(m, n, 1.1, 0.7, 0.3).norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12, "{n} {norm}");
        }
    }

    #[test]
    fn r_kernel_limits() {
        assert_eq!(matrix_r(2, 2, C64::new(0.0, 0.0), 0.0, 0.5, 1.0).unwrap(), C64::from_polar(1.0, 0.5));
        let xi = C64::new(0.3, -0.4);
        let r = matrix_r(0, 0, xi, 0.25, 0.1, 1.0).unwrap();
        assert!((r - C64::from_polar((-0.25f64 / 4.0).exp(), 0.1)).norm() < 1e-15);
        assert!(matrix_r(0, 0, xi, 0.3, 0.1, 1.0).is_err());
    }

    #[test]
    fn n_kernel_identity_and_unitarity() {
        let w = 1.5;
        let eta = C64::new(2.0 * w, 0.0);
        for m in 0..6 {
            for n in 0..6 {
                let v = matrix_n(m, n, eta, C64::new(0.0, 0.0), 2.0 * w, w).unwrap();
                let want = if m == n { 1.0 } else { 0.0 };
                assert!((v - want).norm() < 1e-14, "{m} {n} {v}");
            }
        }
        let init = InitialData::new(0.3, 1.2, 0.0, 0.0, 0.0, 0.0, 0).unwrap();
        let params = ModelParams::new(Variant::PhiZero, 1.0, 0.25).unwrap();
        let v = slow_vectors(&init, 1.3, &params);
        let a = slow_invariants(&init, 1.3, &params).a;
        for n in 0..=8 {
            let norm: f64 = (0..120).map(|m| matrix_n(m, n, v.eta, v.zeta, a, 1.0).unwrap().norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-8, "{n} {norm}");
        }
        assert!(matrix_n(0, 0, eta, C64::new(0.0, 0.0), 1.0, w).unwrap_err().is_domain());
        assert_eq!(matrix_n(1, 0, v.eta, v.zeta, a, 1.0).unwrap(), C64::new(0.0, 0.0));
    }

    #[test]
    fn n00_closed_value() {
        // β(0)² = ω makes the normalization factor one.
        let w = 1.0;
        let init = InitialData::vacuum(w);
        let params = ModelParams::new(Variant::PhiHalfPi, w, 0.3).unwrap();
        let v = slow_vectors(&init, 0.9, &params);
        let a = slow_invariants(&init, 0.9, &params).a;
        let got = matrix_n(0, 0, v.eta, v.zeta, a, w).unwrap();
        assert!((got - (2.0 * w / v.eta).sqrt()).norm() < 1e-14);
    }

    #[test]
    fn m_kernel_identity() {
        for m in 0..5 {
            for n in 0..5 {
                let v = matrix_m(m, n, 0.0, 2f64.sqrt(), 2.0, Branch::Plus);
                assert_eq!(v, C64::new(if m == n { 1.0 } else { 0.0 }, 0.0));
            }
        }
        assert_eq!(matrix_m(3, 0, 0.4, 0.7, 1.0, Branch::Plus), C64::new(0.0, 0.0));
    }

    #[test]
    fn trivial_amplitudes() {
        let params = ModelParams::new(Variant::PhiZero, 1.0, 0.25).unwrap();
        for n in 0..3 {
            let a = amplitudes(&InitialData::vacuum(1.0).with_n(n), 0.0, &params, Truncation::Auto).unwrap();
            for (m, c) in a.entries.iter().enumerate() {
                let want = if m == n { 1.0 } else { 0.0 };
                assert!((c - want).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn vacuum_distribution() {
        let params = ModelParams::new(Variant::PhiHalfPi, 1.0, 0.25).unwrap();
        let t = 2.0;
        let a = amplitudes(&InitialData::vacuum(1.0), t, &params, Truncation::Auto).unwrap();
        assert!(a.tail_mass < 1e-10);
        let (mean, var) = a.moments();
        let s = (0.25 * t).sinh().powi(2);
        assert!((mean - s).abs() < 1e-9);
        assert!((var - 0.5 * (0.5 * t).sinh().powi(2)).abs() < 1e-9);
        for (m, c) in a.entries.iter().enumerate() {
            if m % 2 == 1 {
                assert_eq!(c.norm(), 0.0);
            }
        }
        // Squeezed vacuum: p_{2k} = (2k)!/(4^k k!²) tanh^{2k} r / cosh r.
        let r = 0.25 * t;
        for k in 0..10 {
            let ln = ln_fact(2 * k) - 2.0 * ln_fact(k) - k as f64 * 4f64.ln();
            let want = ln.exp() * r.tanh().powi(2 * k as i32) / r.cosh();
            assert!((a.entries[2 * k].norm_sqr() - want).abs() < 1e-13);
        }
    }

    #[test]
    fn fixed_truncation_reports_tail() {
        let params = ModelParams::new(Variant::PhiZero, 1.0, 0.25).unwrap();
        let a = amplitudes(&InitialData::vacuum(1.0), 4.0, &params, Truncation::Fixed(4)).unwrap();
        assert_eq!(a.entries.len(), 5);
        assert!(a.tail_mass > 1e-3);
        assert!(amplitudes(&InitialData::vacuum(1.0).with_n(3), 1.0, &params, Truncation::Fixed(2)).is_err());
    }
}
