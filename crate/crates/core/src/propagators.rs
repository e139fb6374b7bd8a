//! Green's functions and direct propagation of sampled wave functions.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use rayon::prelude::*;

use crate::ermakov::fundamental;
use crate::error::{require_finite, Error, Result};
use crate::fock::WavefunctionGrid;
use crate::model::ModelParams;
use crate::C64;

fn maslov_factor(k: i64) -> C64 {
    C64::from_polar(1.0, -FRAC_PI_4 - FRAC_PI_2 * k as f64)
}

/// Harmonic-oscillator kernel with the square-root branch continuous from t → 0⁺.
pub fn greens_oscillator(x: f64, y: f64, t: f64, omega: f64) -> Result<C64> {
    require_finite("t", t)?;
    let (s, c) = (omega * t).sin_cos();
    if s.abs() < 1e-12 {
        return Err(Error::Singular { t, what: "caustic of the oscillator kernel" });
    }
    let k = (omega * t / PI).floor() as i64;
    let amp = (omega / (2.0 * PI * s.abs())).sqrt();
    let phase = omega * ((x * x + y * y) * c - 2.0 * x * y) / (2.0 * s);
    Ok(maslov_factor(k) * C64::from_polar(amp, phase))
}

/// Kernel of the inverted-oscillator step generated by `(λ/2ω)(p² − ω²q²)`.
pub fn greens_lambda(x: f64, y: f64, t: f64, omega: f64, lambda: f64) -> Result<C64> {
    require_finite("t", t)?;
    let l = lambda * t;
    if l <= 0.0 {
        return Err(Error::Singular { t, what: "delta-kernel limit of the lambda step" });
    }
    let (ch, sh) = (l.cosh(), l.sinh());
    let amp = (omega / (2.0 * PI * sh)).sqrt();
    let phase = omega * ((x * x + y * y) * ch - 2.0 * x * y) / (2.0 * sh);
    Ok(maslov_factor(0) * C64::from_polar(amp, phase))
}

/// `G(x, y, t) = exp(i(α₀x² + β₀xy + γ₀y²))/√(2πiμ₀)` with the Maslov branch.
pub fn greens_full(x: f64, y: f64, t: f64, params: &ModelParams) -> Result<C64> {
    Ok(FullKernel::new(t, params)?.eval(x, y))
}

/// [`greens_full`] with the t-dependent pieces evaluated once.
#[derive(Debug, Clone, Copy)]
struct FullKernel {
    a: f64,
    b: f64,
    c: f64,
    pref: C64,
}

impl FullKernel {
    fn new(t: f64, params: &ModelParams) -> Result<Self> {
        let f = fundamental(t, params)?.closed;
        let m = params.model();
        let amp = (2.0 * PI * m.mu_pair(t).mu0.abs()).sqrt().recip();
        Ok(FullKernel { a: f.alpha0_f, b: f.beta0_f, c: f.gamma0_f, pref: maslov_factor(m.caustic_index(t)) * amp })
    }

    fn eval(&self, x: f64, y: f64) -> C64 {
        self.pref * C64::from_polar(1.0, self.a * x * x + self.b * x * y + self.c * y * y)
    }
}

fn check_input(input: &WavefunctionGrid) -> Result<()> {
    if input.values.len() != input.num_points {
        return Err(Error::Domain(format!(
            "grid declares {} points but holds {} values",
            input.num_points,
            input.values.len()
        )));
    }
    let norm = input.norm()?;
    if (norm - 1.0).abs() > 1e-6 {
        return Err(Error::Domain(format!("input wave function is not normalized (norm {norm})")));
    }
    Ok(())
}

fn apply_kernel(
    input: &WavefunctionGrid,
    t: f64,
    kernel: impl Fn(f64, f64) -> Result<C64> + Sync,
) -> Result<WavefunctionGrid> {
    check_input(input)?;
    let grid = input.grid()?;
    let ys = grid.points();
    let weighted: Vec<C64> = grid.weights().iter().zip(&input.values).map(|(w, v)| v * *w).collect();
    let values = ys
        .par_iter()
        .map(|&x| {
            let mut acc = C64::new(0.0, 0.0);
            for (&y, v) in ys.iter().zip(&weighted) {
                acc += kernel(x, y)? * v;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<C64>>>()?;
    Ok(WavefunctionGrid { values, t: input.t + t, ..input.clone() })
}

/// `ψ(x, t) = ∫ G(x, y, t) ψ(y) dy` by Simpson quadrature on the input grid.
///
/// The output is sampled on the same grid. The kernel oscillates like
/// `exp(iβ₀xy)`, so the grid step must resolve `|β₀| · max|x|`.
pub fn propagate(input: &WavefunctionGrid, t: f64, params: &ModelParams) -> Result<WavefunctionGrid> {
    let k = FullKernel::new(t, params)?;
    apply_kernel(input, t, |x, y| Ok(k.eval(x, y)))
}

/// Same as [`propagate`] but through the factorized kernel of the strategy.
///
/// For phi90 this is the transport step `χ(y) = e^{−λt/2}ψ(ye^{−λt})` followed by
/// the oscillator kernel, written directly on the input grid.
pub fn propagate_factorized(input: &WavefunctionGrid, t: f64, params: &ModelParams) -> Result<WavefunctionGrid> {
    let m = params.model();
    apply_kernel(input, t, |x, y| m.greens_factorized(x, y, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::sample_wavefunction;
    use crate::model::{InitialData, Variant};
    use crate::oracle::GridSpec;

    fn p(v: Variant, w: f64, l: f64) -> ModelParams {
        ModelParams::new(v, w, l).unwrap()
    }

    #[test]
    fn kernels_are_symmetric_with_expected_modulus() {
        for (x, y, t) in [(0.3, -1.2, 0.4), (2.0, 0.5, 2.9), (-0.7, 0.1, 4.0)] {
            let a = greens_oscillator(x, y, t, 1.3).unwrap();
            assert!((a - greens_oscillator(y, x, t, 1.3).unwrap()).norm() < 1e-15);
            let want = (1.3 / (2.0 * PI * (1.3 * t).sin().abs())).sqrt();
            assert!((a.norm() - want).abs() < 1e-14);
            let b = greens_lambda(x, y, t, 1.0, 0.3).unwrap();
            assert!((b - greens_lambda(y, x, t, 1.0, 0.3).unwrap()).norm() < 1e-15);
            assert!((b.norm() - (1.0 / (2.0 * PI * (0.3 * t).sinh())).sqrt()).abs() < 1e-14);
        }
        assert!(greens_oscillator(0.0, 0.0, PI, 1.0).is_err());
        assert!(greens_lambda(0.0, 0.0, 0.0, 1.0, 0.3).is_err());
    }

    #[test]
    fn lambda_kernel_solves_its_equation() {
        let (w, l, y) = (1.0, 0.3, 0.4);
        let g = |x: f64, t: f64| greens_lambda(x, y, t, w, l).unwrap();
        let (h, k) = (1e-3, 1e-4);
        for (x, t) in [(0.2, 0.9), (-0.5, 1.6)] {
            let gt = (g(x, t + k) - g(x, t - k)) / (2.0 * k);
            let gxx = (g(x + h, t) - 2.0 * g(x, t) + g(x - h, t)) / (h * h);
            let r = C64::i() * gt + (gxx + g(x, t) * (w * w * x * x)) * (l / (2.0 * w));
            assert!(r.norm() / g(x, t).norm() < 1e-5, "{}", r.norm());
        }
    }

    #[test]
    fn harmonic_limit_reduces_to_oscillator() {
        for v in Variant::ALL {
            for t in [0.5, 2.0, 4.5] {
                let a = greens_full(0.3, -0.8, t, &p(v, 1.2, 0.0)).unwrap();
                let b = greens_oscillator(0.3, -0.8, t, 1.2).unwrap();
                assert!((a - b).norm() < 1e-13, "{v} {t}");
            }
        }
    }

    #[test]
    fn factorizations_hold_across_caustics() {
        for v in Variant::ALL {
            let params = p(v, 1.0, 0.25);
            for t in [0.4, 1.7, 3.0, 4.4, 6.0] {
                for (x, y) in [(0.2, 0.9), (-1.1, 0.3)] {
                    let a = greens_full(x, y, t, &params).unwrap();
                    let b = params.model().greens_factorized(x, y, t).unwrap();
                    assert!((a - b).norm() < 1e-10 * a.norm(), "{v} {t}");
                }
            }
        }
    }

    #[test]
    fn ground_state_is_stationary_under_oscillator() {
        let params = p(Variant::PhiZero, 1.0, 0.0);
        let init = InitialData::vacuum(1.0);
        let grid = GridSpec::symmetric(10.0, 2001).unwrap();
        let psi = sample_wavefunction(&init, 0.0, &params, &grid).unwrap();
        let out = propagate(&psi, 0.7, &params).unwrap();
        let phase = C64::from_polar(1.0, -0.35);
        for (a, b) in out.values.iter().zip(&psi.values).step_by(50) {
            assert!((a - phase * b).norm() < 1e-6);
        }
        assert!((out.norm().unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn rejects_unnormalized_input() {
        let params = p(Variant::PhiZero, 1.0, 0.2);
        let grid = GridSpec::symmetric(10.0, 201).unwrap();
        let mut psi = sample_wavefunction(&InitialData::vacuum(1.0), 0.0, &params, &grid).unwrap();
        psi.values.iter_mut().for_each(|v| *v *= 2.0);
        assert!(propagate(&psi, 0.5, &params).unwrap_err().is_domain());
    }
}
