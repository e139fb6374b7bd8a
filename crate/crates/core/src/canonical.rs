//! Ladder-operator form of the Hamiltonian, squeeze/displacement parameters
//! and minimum-uncertainty times.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::ermakov::{evolve_closed_form, ErmakovState};
use crate::error::{require_finite, Error, Result};
use crate::model::{InitialData, ModelParams};
use crate::C64;

/// `H = c_aa â² + c_adad â†² + c_sym(ââ† + â†â) + c_a â + c_ad â† + c_const`,
/// with `â` the annihilation operator of the dynamical invariant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionCoeffs {
    pub c_aa: C64,
    pub c_adad: C64,
    pub c_sym: f64,
    pub c_a: C64,
    pub c_ad: C64,
    pub c_const: f64,
}

pub fn hamiltonian_expansion(state: &ErmakovState, omega: f64) -> ExpansionCoeffs {
    let ErmakovState { alpha: a, beta: b, delta: d, eps: e, .. } = *state;
    let w2 = omega * omega;
    let (b2, b4) = (b * b, b.powi(4));
    let g = d - 2.0 * a * e / b;
    let c_aa = C64::new((4.0 * a * a - b4 + w2) / (4.0 * b2), -a);
    let c_a = C64::new(a / b * g - e * w2 / (2.0 * b2), -0.5 * b * g) * 2f64.sqrt();
    ExpansionCoeffs {
        c_aa,
        c_adad: c_aa.conj(),
        c_sym: (4.0 * a * a + b4 + w2) / (4.0 * b2),
        c_a,
        c_ad: c_a.conj(),
        c_const: 0.5 * g * g + e * e * w2 / (2.0 * b2),
    }
}

/// `⟨n|H|n⟩ = (2n + 1)c_sym + c_const`.
pub fn expectation_h(c: &ExpansionCoeffs, n: usize) -> f64 {
    (2 * n + 1) as f64 * c.c_sym + c.c_const
}

/// `⟨n|H²|n⟩ − ⟨n|H|n⟩²` from the second moments of â, â†.
pub fn variance_h(c: &ExpansionCoeffs, n: usize) -> f64 {
    let nf = n as f64;
    c.c_aa.norm_sqr() * (nf * (nf - 1.0) + (nf + 1.0) * (nf + 2.0)) + c.c_a.norm_sqr() * (2.0 * nf + 1.0)
}

/// Rotation, squeeze and displacement parameters of the state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParams {
    pub theta: f64,
    pub tau: f64,
    pub phi: f64,
    /// `(ε − iδ/β)/√2`.
    pub xi_d: C64,
    /// From the cosh formula alone.
    pub cosh_tau: f64,
    /// From the sinh formula alone.
    pub sinh_tau: f64,
}

fn lhs_pair(state: &ErmakovState, omega: f64) -> (C64, C64) {
    let (a, b) = (state.alpha, state.beta);
    let sw = omega.sqrt();
    let first = C64::new(b, -2.0 * a / b) / sw;
    let second = C64::from(sw / b);
    (first + second, first - second)
}

fn wrap(angle: f64) -> f64 {
    let r = angle.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

pub fn squeeze_parameters(state: &ErmakovState, omega: f64) -> SqueezeParams {
    let ErmakovState { alpha: a, beta: b, delta: d, eps: e, .. } = *state;
    let sw = omega.sqrt();
    let extra = 4.0 * a * a / (omega * b * b);
    let cosh_tau = 0.5 * ((b / sw + sw / b).powi(2) + extra).sqrt();
    let sinh_tau = 0.5 * ((b / sw - sw / b).powi(2) + extra).sqrt();
    let (l1, l2) = lhs_pair(state, omega);

    let theta0 = (2.0 * a / (b * b + omega)).atan();
    let theta = [theta0, theta0 + PI]
        .into_iter()
        .map(wrap)
        .min_by(|x, y| {
            let r = |t: f64| (l1 - C64::from_polar(2.0 * cosh_tau, -t)).norm();
            r(*x).total_cmp(&r(*y))
        })
        .unwrap_or(theta0);

    let phi = if sinh_tau < 1e-14 {
        0.0
    } else {
        let phi0 = 0.5 * (-4.0 * a * b * b / (4.0 * a * a + omega * omega - b.powi(4))).atan();
        [phi0, phi0 + FRAC_PI_2]
            .into_iter()
            .min_by(|x, y| {
                let r = |f: f64| (l2 - C64::from_polar(2.0 * sinh_tau, theta - 2.0 * f)).norm();
                r(*x).total_cmp(&r(*y))
            })
            .unwrap_or(phi0)
    };

    SqueezeParams { theta, tau: sinh_tau.asinh(), phi, xi_d: C64::new(e, -d / b) / 2f64.sqrt(), cosh_tau, sinh_tau }
}

/// Residuals of the two complex defining identities of θ, τ, φ.
pub fn squeeze_identity_residuals(state: &ErmakovState, omega: f64, sp: &SqueezeParams) -> [f64; 2] {
    let (l1, l2) = lhs_pair(state, omega);
    [
        (l1 - C64::from_polar(2.0 * sp.cosh_tau, -sp.theta)).norm(),
        (l2 - C64::from_polar(2.0 * sp.sinh_tau, sp.theta - 2.0 * sp.phi)).norm(),
    ]
}

/// Roots of α(t) on a time range.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MinUncertaintyTimes {
    /// Sign changes (or exact zeros), refined to 1e-10.
    pub roots: Vec<f64>,
    /// Grid points where |α| < 1e-12 without a sign change.
    pub touching: Vec<f64>,
}

const SCAN_POINTS: usize = 10_000;

/// Times where α(t) = 0 in `[t0, t1]`; these are minimum-uncertainty times for n = 0.
pub fn minimum_uncertainty_times(
    init: &InitialData,
    params: &ModelParams,
    t0: f64,
    t1: f64,
) -> Result<MinUncertaintyTimes> {
    require_finite("t0", t0)?;
    require_finite("t1", t1)?;
    if t1 < t0 {
        return Err(Error::Domain(format!("empty time range [{t0}, {t1}]")));
    }
    let alpha = |t: f64| -> Result<f64> { Ok(evolve_closed_form(init, t, params)?.alpha) };
    if t1 == t0 {
        let a = alpha(t0)?;
        return Ok(MinUncertaintyTimes {
            roots: if a == 0.0 { vec![t0] } else { vec![] },
            touching: if a != 0.0 && a.abs() < 1e-12 { vec![t0] } else { vec![] },
        });
    }
    let h = (t1 - t0) / SCAN_POINTS as f64;
    let ts: Vec<f64> = (0..=SCAN_POINTS).map(|k| t0 + h * k as f64).collect();
    let vals: Vec<f64> = ts.iter().map(|&t| alpha(t)).collect::<Result<_>>()?;
    let mut out = MinUncertaintyTimes::default();
    for k in 0..=SCAN_POINTS {
        let (t, a) = (ts[k], vals[k]);
        if a == 0.0 {
            out.roots.push(t);
            continue;
        }
        if k < SCAN_POINTS {
            let b = vals[k + 1];
            if b != 0.0 && a.signum() != b.signum() {
                out.roots.push(bisect(&alpha, t, ts[k + 1], a)?);
                continue;
            }
        }
        let prev = if k > 0 { vals[k - 1] } else { a };
        let next = if k < SCAN_POINTS { vals[k + 1] } else { a };
        if a.abs() < 1e-12 && a.abs() <= prev.abs() && a.abs() <= next.abs() {
            out.touching.push(t);
        }
    }
    Ok(out)
}

fn bisect(f: &impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64, mut flo: f64) -> Result<f64> {
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ermakov::slow_invariants;
    use crate::model::Variant;
    use crate::statistics::{mean_photon_number, photon_number_variance, quadrature_variances};

    fn p(v: Variant, w: f64, l: f64) -> ModelParams {
        ModelParams::new(v, w, l).unwrap()
    }

    fn state(a: f64, b: f64, d: f64, e: f64) -> ErmakovState {
        ErmakovState { t: 0.0, alpha: a, beta: b, gamma: 0.0, delta: d, eps: e, kappa: 0.0 }
    }

    #[test]
    fn free_oscillator_is_diagonal() {
        let w: f64 = 1.7;
        let c = hamiltonian_expansion(&state(0.0, w.sqrt(), 0.0, 0.0), w);
        assert!(c.c_aa.norm() < 1e-15 && c.c_a.norm() == 0.0 && c.c_const == 0.0);
        assert!((c.c_sym - w / 2.0).abs() < 1e-15);
        assert_eq!(c.c_adad, c.c_aa.conj());
    }

    #[test]
    fn expansion_reproduces_photon_statistics() {
        let init = InitialData::new(0.3, 1.2, 0.1, 0.5, -0.4, 0.2, 0).unwrap();
        for v in Variant::ALL {
            let params = p(v, 1.1, 0.3);
            for t in [0.0, 0.8, 2.5] {
                let st = evolve_closed_form(&init, t, &params).unwrap();
                let c = hamiltonian_expansion(&st, 1.1);
                let inv = slow_invariants(&init, t, &params);
                assert!((c.c_sym - inv.a / 4.0).abs() < 1e-12);
                for n in 0..6 {
                    let want = 1.1 * (mean_photon_number(&inv, n, 1.1) + 0.5);
                    assert!((expectation_h(&c, n) - want).abs() < 1e-10);
                    let var = 1.21 * photon_number_variance(&inv, n, 1.1);
                    assert!((variance_h(&c, n) - var).abs() < 1e-9 * var.max(1.0));
                }
            }
        }
    }

    #[test]
    fn squeeze_examples() {
        let sp = squeeze_parameters(&state(0.0, 1.0, 0.4, 0.6), 1.0);
        assert!(sp.theta.abs() < 1e-15 && sp.tau.abs() < 1e-15 && sp.phi == 0.0);
        assert!((sp.xi_d - C64::new(0.6, -0.4) / 2f64.sqrt()).norm() < 1e-15);
        let r: f64 = 0.35;
        let sp = squeeze_parameters(&state(0.0, 2f64.sqrt() * r.exp(), 0.0, 0.0), 2.0);
        assert!((sp.tau - r).abs() < 1e-14);
        assert!((sp.cosh_tau - r.cosh()).abs() < 1e-14);
        assert!(sp.theta.abs() < 1e-15 && sp.phi.abs() < 1e-15);
    }

    #[test]
    fn squeeze_identities_for_many_states() {
        let mut seed = 7u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64 * 4.0 - 2.0
        };
        for _ in 0..200 {
            let (a, b, w) = (next(), next(), next().abs() + 0.1);
            if b.abs() < 0.05 {
                continue;
            }
            let st = state(a, b, next(), next());
            let sp = squeeze_parameters(&st, w);
            assert!((sp.cosh_tau.powi(2) - sp.sinh_tau.powi(2) - 1.0).abs() < 1e-12 * sp.cosh_tau.powi(2));
            let [r1, r2] = squeeze_identity_residuals(&st, w, &sp);
            assert!(r1 < 1e-10 * sp.cosh_tau && r2 < 1e-10 * sp.cosh_tau.max(1.0), "{a} {b} {w}");
            assert!((sp.xi_d.norm_sqr() * 2.0 - (st.eps.powi(2) + (st.delta / st.beta).powi(2))).abs() < 1e-12);
        }
    }

    #[test]
    fn figure_parameters_give_quarter_period_roots() {
        let params = p(Variant::PhiZero, 1.0, 0.25);
        let r = minimum_uncertainty_times(&InitialData::vacuum(1.0), &params, 0.0, PI).unwrap();
        assert_eq!(r.roots.len(), 3);
        for (got, want) in r.roots.iter().zip([0.0, PI / 4.0, 3.0 * PI / 4.0]) {
            assert!((got - want).abs() < 1e-9);
        }
        for &t in &r.roots {
            let st = evolve_closed_form(&InitialData::vacuum(1.0), t, &params).unwrap();
            let (sp, sq, _) = quadrature_variances(&st, 0);
            assert!((sp * sq - 0.25).abs() < 1e-9);
        }
    }

    #[test]
    fn harmonic_roots_every_quarter_period() {
        let w = 2.0;
        let params = p(Variant::PhiHalfPi, w, 0.0);
        let init = InitialData::new(0.0, 1.5, 0.0, 0.0, 0.0, 0.0, 0).unwrap();
        let r = minimum_uncertainty_times(&init, &params, 0.1, 3.0).unwrap();
        let want: Vec<f64> = (1..4).map(|k| k as f64 * PI / (2.0 * w)).collect();
        assert_eq!(r.roots.len(), want.len());
        for (a, b) in r.roots.iter().zip(want) {
            assert!((a - b).abs() < 1e-9);
        }
        assert!(minimum_uncertainty_times(&init, &params, 1.0, 0.0).is_err());
    }
}
