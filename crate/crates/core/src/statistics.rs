//! Quadrature variances, photon-number moments, g², and mean trajectories.

use crate::ermakov::{evolve_closed_form, slow_invariants, ErmakovState, SlowInvariants};
use crate::error::{Error, Result};
use crate::model::{InitialData, ModelParams};

/// Observables of the dynamical Fock state `n` at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatisticsReport {
    pub t: f64,
    pub sigma_p: f64,
    pub sigma_q: f64,
    pub sigma_pq: f64,
    pub mean_n: f64,
    pub var_n: f64,
    /// `None` when ⟨N⟩ = 0.
    pub g2: Option<f64>,
    pub mean_q: f64,
    pub mean_p: f64,
}

/// `(σ_p, σ_q, σ_pq)` of the state.
pub fn quadrature_variances(state: &ErmakovState, n: usize) -> (f64, f64, f64) {
    let h = n as f64 + 0.5;
    let bb = state.beta * state.beta;
    let a = state.alpha;
    (h * (4.0 * a * a + bb * bb) / bb, h / bb, h * 2.0 * a / bb)
}

/// `σ_pσ_q − σ_pq²`, which should equal `(n + ½)²`.
pub fn uncertainty_determinant(state: &ErmakovState, n: usize) -> f64 {
    let (sp, sq, spq) = quadrature_variances(state, n);
    sp * sq - spq * spq
}

/// `⟨N⟩ = (n + ½)A/(2ω) + B/(2ω) − ½`.
pub fn mean_photon_number(inv: &SlowInvariants, n: usize, omega: f64) -> f64 {
    (n as f64 + 0.5) * inv.a / (2.0 * omega) + inv.b / (2.0 * omega) - 0.5
}

/// ⟨N⟩ written out in the Ermakov parameters; agrees with [`mean_photon_number`].
pub fn mean_photon_number_from_state(state: &ErmakovState, n: usize, omega: f64) -> f64 {
    mean_photon_number(&SlowInvariants::from_state(state, omega), n, omega)
}

/// `Var N = (A² − 4ω²)/(8ω²)[(n + ½)² + ¾] + (AB − ω²C)/ω² (n + ½)`.
pub fn photon_number_variance(inv: &SlowInvariants, n: usize, omega: f64) -> f64 {
    let h = n as f64 + 0.5;
    let w2 = omega * omega;
    (inv.a * inv.a - 4.0 * w2) / (8.0 * w2) * (h * h + 0.75) + (inv.a * inv.b - w2 * inv.c) / w2 * h
}

/// Second-order intensity correlation `1 + (Var N − ⟨N⟩)/⟨N⟩²`.
pub fn g2(mean_n: f64, var_n: f64) -> Result<f64> {
    if mean_n == 0.0 {
        return Err(Error::UndefinedCorrelation);
    }
    Ok(1.0 + (var_n - mean_n) / (mean_n * mean_n))
}

/// `(⟨q⟩, ⟨p⟩)` from the closed-form mean trajectories.
pub fn mean_qp(init: &InitialData, t: f64, params: &ModelParams) -> (f64, f64) {
    params.model().means(init, t)
}

/// `(σ_q, σ_p)` from the closed forms, scaled by `2n + 1`.
pub fn qp_variances_closed(init: &InitialData, t: f64, params: &ModelParams, n: usize) -> (f64, f64) {
    let (q, p) = params.model().sigma_ground(init, t);
    let k = 2.0 * n as f64 + 1.0;
    (k * q, k * p)
}

/// Everything above for `init.n` at time `t`.
pub fn report(init: &InitialData, t: f64, params: &ModelParams) -> Result<StatisticsReport> {
    let n = init.n;
    let w = params.omega();
    let st = evolve_closed_form(init, t, params)?;
    let (sigma_p, sigma_q, sigma_pq) = quadrature_variances(&st, n);
    let inv = slow_invariants(init, t, params);
    let mean_n = mean_photon_number(&inv, n, w);
    let var_n = photon_number_variance(&inv, n, w);
    let (mean_q, mean_p) = mean_qp(init, t, params);
    Ok(StatisticsReport { t, sigma_p, sigma_q, sigma_pq, mean_n, var_n, g2: g2(mean_n, var_n).ok(), mean_q, mean_p })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Variant;

    fn p(v: Variant, w: f64, l: f64) -> ModelParams {
        ModelParams::new(v, w, l).unwrap()
    }

    fn generic() -> InitialData {
        InitialData::new(0.3, 1.2, 0.0, 0.5, -0.4, 0.0, 0).unwrap()
    }

    #[test]
    fn ground_state_variances() {
        let w = 2.0;
        let st = ErmakovState::from_init(&InitialData::vacuum(w));
        let (sp, sq, spq) = quadrature_variances(&st, 0);
        assert!((sp - w / 2.0).abs() < 1e-15 && (sq - 0.5 / w).abs() < 1e-15 && spq == 0.0);
        let st = evolve_closed_form(&generic(), 0.77, &p(Variant::PhiZero, 1.0, 0.3)).unwrap();
        assert!((uncertainty_determinant(&st, 0) - 0.25).abs() < 1e-13);
        assert!((uncertainty_determinant(&st, 3) - 12.25).abs() < 1e-12);
    }

    #[test]
    fn vacuum_anchor_values() {
        for v in Variant::ALL {
            let params = p(v, 1.0, 0.25);
            let inv = slow_invariants(&InitialData::vacuum(1.0), 2.0, &params);
            let mean = mean_photon_number(&inv, 0, 1.0);
            let var = photon_number_variance(&inv, 0, 1.0);
            assert!((mean - 0.2715403).abs() < 5e-8);
            assert!((var - 0.6905489).abs() < 5e-8);
            assert!((g2(mean, var).unwrap() - (3.0 + 1.0 / mean)).abs() < 1e-12);
            let zero = slow_invariants(&InitialData::vacuum(1.0), 0.0, &params);
            assert_eq!(mean_photon_number(&zero, 0, 1.0), 0.0);
            assert_eq!(photon_number_variance(&zero, 0, 1.0), 0.0);
        }
    }

    #[test]
    fn coherent_mean_phi90() {
        let (e0, d0, l) = (0.3, -0.7, 0.25);
        let init = InitialData::new(0.0, 1.0, 0.0, d0, e0, 0.0, 0).unwrap();
        let params = p(Variant::PhiHalfPi, 1.0, l);
        for t in [0.5, 1.5, 3.0] {
            let mean = mean_photon_number(&slow_invariants(&init, t, &params), 0, 1.0);
            let want = (l * t).sinh().powi(2) + 0.5 * (e0 * e0 * (2.0 * l * t).exp() + d0 * d0 * (-2.0 * l * t).exp());
            assert!((mean - want).abs() < 1e-13);
        }
    }

    #[test]
    fn g2_cases() {
        assert_eq!(g2(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(g2(0.0, 1.0), Err(Error::UndefinedCorrelation));
    }

    #[test]
    fn means_at_zero_and_phi90_amplified_quadrature() {
        let init = generic();
        for v in Variant::ALL {
            let (q, pp) = mean_qp(&init, 0.0, &p(v, 1.0, 0.25));
            assert!((q - 0.4 / 1.2).abs() < 1e-15);
            assert!((pp - (0.5 + 2.0 * 0.3 * 0.4 / 1.2)).abs() < 1e-15);
            let (q, pp) = mean_qp(&InitialData::vacuum(1.0), 1.3, &p(v, 1.0, 0.25));
            assert_eq!((q, pp), (0.0, 0.0));
        }
        // ε(0) = −β(0)x₀ and δ(0) = 2α(0)ε(0)/β(0) leave only the amplified term.
        let (x0, a0, b0) = (0.8, 0.2, 1.1);
        let e0 = -b0 * x0;
        let init = InitialData::new(a0, b0, 0.0, 2.0 * a0 * e0 / b0, e0, 0.0, 0).unwrap();
        for t in [0.4, 2.2] {
            let (q, _) = mean_qp(&init, t, &p(Variant::PhiHalfPi, 1.0, 0.25));
            assert!((q - x0 * (0.25 * t).exp() * t.cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn means_follow_equations_of_motion_and_state() {
        let h = 1e-5;
        for v in Variant::ALL {
            let params = p(v, 1.2, 0.3);
            let init = generic();
            for k in 1..40 {
                let t = 0.17 * k as f64;
                let c = params.model().coeffs(t);
                let (q, pp) = mean_qp(&init, t, &params);
                let (q1, p1) = mean_qp(&init, t + h, &params);
                let (q0, p0) = mean_qp(&init, t - h, &params);
                assert!(((q1 - q0) / (2.0 * h) - (2.0 * c.a * pp + 2.0 * c.d * q)).abs() < 1e-6);
                assert!(((p1 - p0) / (2.0 * h) - (-2.0 * c.b * q - 2.0 * c.d * pp)).abs() < 1e-6);
                let st = evolve_closed_form(&init, t, &params).unwrap();
                assert!((q + st.eps / st.beta).abs() < 1e-12);
                assert!((pp - (st.delta - 2.0 * st.alpha * st.eps / st.beta)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn closed_variances_match_state() {
        let init = InitialData::new(-0.4, 0.8, 0.0, 0.2, 0.1, 0.0, 0).unwrap();
        for v in Variant::ALL {
            let params = p(v, 1.1, 0.3);
            for n in 0..4 {
                for k in 0..30 {
                    let t = 0.21 * k as f64;
                    let st = evolve_closed_form(&init, t, &params).unwrap();
                    let (sp, sq, _) = quadrature_variances(&st, n);
                    let (cq, cp) = qp_variances_closed(&init, t, &params, n);
                    assert!((sq - cq).abs() < 1e-10 * sq.max(1.0), "{v} {t}");
                    assert!((sp - cp).abs() < 1e-10 * sp.max(1.0), "{v} {t}");
                }
            }
        }
        let params = p(Variant::PhiHalfPi, 1.0, 0.25);
        for t in [0.3, 1.7] {
            let (sq, _) = qp_variances_closed(&InitialData::vacuum(1.0), t, &params, 0);
            let want = ((0.5 * t).cosh() + (0.5 * t).sinh() * (2.0 * t).cos()) / 2.0;
            assert!((sq - want).abs() < 1e-14);
        }
    }

    #[test]
    fn state_and_compact_means_agree() {
        for v in Variant::ALL {
            let params = p(v, 1.0, 0.25);
            let st = evolve_closed_form(&generic(), 1.4, &params).unwrap();
            let inv = slow_invariants(&generic(), 1.4, &params);
            for n in 0..3 {
                let a = mean_photon_number(&inv, n, 1.0);
                let b = mean_photon_number_from_state(&st, n, 1.0);
                assert!((a - b).abs() < 1e-10);
            }
        }
    }
}
