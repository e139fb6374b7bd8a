//! Ermakov-state evolution, the fundamental triple, and the slow variables.

use std::f64::consts::FRAC_PI_2;

use crate::error::{require_finite, Error, Result};
use crate::model::{InitialData, ModelParams};
use crate::C64;

/// The six real parameters of the dynamical Fock states at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErmakovState {
    pub t: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub eps: f64,
    pub kappa: f64,
}

impl ErmakovState {
    pub fn from_init(init: &InitialData) -> Self {
        ErmakovState {
            t: 0.0,
            alpha: init.alpha0,
            beta: init.beta0,
            gamma: init.gamma0,
            delta: init.delta0,
            eps: init.eps0,
            kappa: init.kappa0,
        }
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.alpha, self.beta, self.gamma, self.delta, self.eps, self.kappa]
    }

    /// Largest componentwise `|a − b| / max(1, |a|)`.
    pub fn max_rel_diff(&self, other: &ErmakovState) -> f64 {
        self.to_array().iter().zip(other.to_array()).map(|(a, b)| (a - b).abs() / a.abs().max(1.0)).fold(0.0, f64::max)
    }

    /// `C = ε² + δ²/β²`.
    pub fn invariant_c(&self) -> f64 {
        self.eps * self.eps + (self.delta / self.beta).powi(2)
    }

    /// `D = κ − δε/(2β)`.
    pub fn invariant_d(&self) -> f64 {
        self.kappa - self.delta * self.eps / (2.0 * self.beta)
    }
}

/// How γ(t) is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GammaBranch {
    /// Continuous in t from γ(0).
    #[default]
    Continuous,
    /// Principal arctangent; jumps by π/2. Kept as a negative control.
    Principal,
}

/// `arg P + arg(1 − iρ) + ωt + arg(1 + r e^{−2iωt})` with `r = (1 + iρ)/(1 − iρ)`.
///
/// This is `arg Z` for `Z = P (1 − iρ) e^{iωt} (1 + r e^{−2iωt}) / 2`. Every
/// term is a principal argument that cannot cross the branch cut for
/// `Im ρ > 0` and `P` on the principal sheet, so the sum is continuous in t.
pub(crate) fn unwrapped_phase(p: C64, rho: C64, wt: f64) -> f64 {
    let one_minus = C64::new(1.0 + rho.im, -rho.re);
    let r = C64::new(1.0 - rho.im, rho.re) / one_minus;
    p.arg() + one_minus.arg() + wt + (1.0 + r * C64::from_polar(1.0, -2.0 * wt)).arg()
}

/// `(α₀, β₀, γ₀)` of the Green's function `exp(i(α₀x² + β₀xy + γ₀y²))/√(2πiμ₀)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalTriple {
    pub alpha0_f: f64,
    pub beta0_f: f64,
    pub gamma0_f: f64,
}

/// Closed-form and generic evaluations of the fundamental triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fundamental {
    pub closed: FundamentalTriple,
    pub generic: FundamentalTriple,
}

impl Fundamental {
    /// Largest relative disagreement between the two evaluations.
    pub fn discrepancy(&self) -> f64 {
        let a = [self.closed.alpha0_f, self.closed.beta0_f, self.closed.gamma0_f];
        let b = [self.generic.alpha0_f, self.generic.beta0_f, self.generic.gamma0_f];
        a.iter().zip(b).map(|(x, y)| (x - y).abs() / x.abs().max(1.0)).fold(0.0, f64::max)
    }
}

pub fn fundamental(t: f64, params: &ModelParams) -> Result<Fundamental> {
    require_finite("t", t)?;
    let model = params.model();
    let mu = model.mu_pair(t);
    if mu.mu0.abs() < 1e-12 * (1.0 + mu.mu1.abs()) {
        return Err(Error::Singular { t, what: "zero of mu0" });
    }
    let h = model.coeffs(t);
    let h0 = model.coeffs(0.0);
    let generic = FundamentalTriple {
        alpha0_f: mu.dmu0 / (4.0 * h.a * mu.mu0) - h.d / (2.0 * h.a),
        beta0_f: -1.0 / mu.mu0,
        gamma0_f: mu.mu1 / (2.0 * mu.mu0) + h0.d / (2.0 * h0.a),
    };
    let (a, b, g) = model.fundamental_closed(t);
    Ok(Fundamental { closed: FundamentalTriple { alpha0_f: a, beta0_f: b, gamma0_f: g }, generic })
}

/// Closed-form state with the continuous γ.
pub fn evolve_closed_form(init: &InitialData, t: f64, params: &ModelParams) -> Result<ErmakovState> {
    evolve_closed_form_with(init, t, params, GammaBranch::Continuous)
}

pub fn evolve_closed_form_with(
    init: &InitialData,
    t: f64,
    params: &ModelParams,
    branch: GammaBranch,
) -> Result<ErmakovState> {
    require_finite("t", t)?;
    init.validate()?;
    params.model().evolve(init, t, branch)
}

/// State obtained by composing the initial data with the fundamental triple.
///
/// Past each zero of μ₀ the raw composition flips the signs of β and ε and
/// loses π/2 in γ; the caustic count restores continuity with the closed form.
pub fn evolve_composed(init: &InitialData, t: f64, params: &ModelParams) -> Result<ErmakovState> {
    init.validate()?;
    if t == 0.0 {
        return Ok(ErmakovState::from_init(init));
    }
    let f = fundamental(t, params)?.closed;
    let InitialData { alpha0: a0, beta0: b0, gamma0: g0, delta0: d0, eps0: e0, kappa0: k0, .. } = *init;
    let k = params.model().caustic_index(t);
    let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let s = a0 + f.gamma0_f;
    let b2 = b0 * b0;
    let den = b2 * b2 + 4.0 * s * s;
    let root = den.sqrt();
    Ok(ErmakovState {
        t,
        alpha: f.alpha0_f - f.beta0_f * f.beta0_f * s / den,
        beta: -sign * b0 * f.beta0_f / root,
        gamma: g0 - 0.5 * C64::new(2.0 * s, b2).arg() - FRAC_PI_2 * k as f64,
        delta: -f.beta0_f * (e0 * b0 * b2 + 2.0 * s * d0) / den,
        eps: sign * (2.0 * e0 * s - b0 * d0) / root,
        kappa: k0 - e0 * b0 * b2 * d0 / den + s * (e0 * e0 * b2 - d0 * d0) / den,
    })
}

/// Slow invariants: `A(t)`, `B(t)` and the constants of motion `C`, `D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlowInvariants {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl SlowInvariants {
    /// The same four quantities read off an evolved state.
    pub fn from_state(state: &ErmakovState, omega: f64) -> Self {
        let ErmakovState { alpha, beta, delta, eps, .. } = *state;
        let bb = beta * beta;
        SlowInvariants {
            a: (4.0 * alpha * alpha + bb * bb + omega * omega) / bb,
            b: (delta - 2.0 * alpha * eps / beta).powi(2) + omega * omega * eps * eps / bb,
            c: state.invariant_c(),
            d: state.invariant_d(),
        }
    }
}

pub fn slow_invariants(init: &InitialData, t: f64, params: &ModelParams) -> SlowInvariants {
    let (a, b) = params.model().slow_ab(init, t);
    let s0 = ErmakovState::from_init(init);
    SlowInvariants { a, b, c: s0.invariant_c(), d: s0.invariant_d() }
}

/// Complex slow vectors ξ, z, η, ζ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlowVectors {
    pub xi: C64,
    pub z: C64,
    pub eta: C64,
    pub zeta: C64,
}

pub fn slow_vectors(init: &InitialData, t: f64, params: &ModelParams) -> SlowVectors {
    params.model().slow_vectors(init, t)
}

/// Absolute residuals of the fast/slow complex identities at time `t`:
///
/// 0. `δ/β + iε = (δ(0)/β(0) + iε(0)) e^{2i(γ − γ(0))}`
/// 1. `δ − 2αε/β + iωε/β = e^{−iωt} ξ`
/// 2. `(ω + β²)/2 − iα = ½ e^{iωt} η / z`
/// 3. `(ω − β²)/2 + iα = ½ e^{−iωt} ζ / z`
/// 4. `|ξ|² = B`
pub fn identity_residuals(init: &InitialData, t: f64, params: &ModelParams) -> Result<[f64; 5]> {
    let w = params.omega();
    let st = evolve_closed_form(init, t, params)?;
    let v = slow_vectors(init, t, params);
    let inv = slow_invariants(init, t, params);
    let phase = C64::from_polar(1.0, 2.0 * (st.gamma - init.gamma0));
    let lhs0 = C64::new(st.delta / st.beta, st.eps);
    let rhs0 = C64::new(init.delta0 / init.beta0, init.eps0) * phase;
    let lhs1 = C64::new(st.delta - 2.0 * st.alpha * st.eps / st.beta, w * st.eps / st.beta);
    let rhs1 = C64::from_polar(1.0, -w * t) * v.xi;
    let bb = st.beta * st.beta;
    let lhs2 = C64::new(0.5 * (w + bb), -st.alpha);
    let rhs2 = 0.5 * C64::from_polar(1.0, w * t) * v.eta / v.z;
    let lhs3 = C64::new(0.5 * (w - bb), st.alpha);
    let rhs3 = 0.5 * C64::from_polar(1.0, -w * t) * v.zeta / v.z;
    Ok([
        (lhs0 - rhs0).norm(),
        (lhs1 - rhs1).norm(),
        (lhs2 - rhs2).norm(),
        (lhs3 - rhs3).norm(),
        (v.xi.norm_sqr() - inv.b).abs(),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Variant;
    use std::f64::consts::PI;

    fn p(v: Variant, w: f64, l: f64) -> ModelParams {
        ModelParams::new(v, w, l).unwrap()
    }

    fn generic() -> InitialData {
        InitialData::new(0.3, 1.2, 0.0, 0.5, -0.4, 0.0, 0).unwrap()
    }

    #[test]
    fn closed_form_starts_at_init() {
        let init = InitialData::new(-0.7, -0.8, 0.4, 1.1, 0.3, -0.2, 0).unwrap();
        for v in Variant::ALL {
            let s = evolve_closed_form(&init, 0.0, &p(v, 1.3, 0.4)).unwrap();
            assert!(s.max_rel_diff(&ErmakovState::from_init(&init)) < 1e-14, "{s:?}");
        }
    }

    #[test]
    fn fundamental_examples() {
        let f = fundamental(PI / 2.0, &p(Variant::PhiHalfPi, 1.0, 0.25)).unwrap();
        assert!(f.closed.alpha0_f.abs() < 1e-15);
        assert!((f.closed.beta0_f + (PI / 8.0).exp()).abs() < 1e-14);
        assert!(f.discrepancy() < 1e-12);
        let f = fundamental(PI / 4.0, &p(Variant::PhiZero, 1.0, 0.0)).unwrap();
        assert!((f.closed.alpha0_f - 0.5).abs() < 1e-15);
        assert!((f.closed.beta0_f + 2f64.sqrt()).abs() < 1e-14);
        assert!(matches!(fundamental(0.0, &p(Variant::PhiHalfPi, 1.0, 0.25)), Err(Error::Singular { .. })));
    }

    #[test]
    fn closed_and_generic_triples_agree() {
        for v in Variant::ALL {
            let params = p(v, 1.0, 0.25);
            for k in 1..300 {
                let t = 0.041 * k as f64;
                if let Ok(f) = fundamental(t, &params) {
                    assert!(f.discrepancy() < 1e-9 * (1.0 + f.closed.beta0_f.abs()), "{t} {f:?}");
                }
            }
        }
    }

    #[test]
    fn composed_matches_closed_including_caustics() {
        for v in Variant::ALL {
            let params = p(v, 1.0, 0.25);
            for k in 1..400 {
                let t = 0.9 + 0.031 * k as f64;
                let c = evolve_closed_form(&generic(), t, &params).unwrap();
                let Ok(g) = evolve_composed(&generic(), t, &params) else { continue };
                assert!(c.max_rel_diff(&g) < 1e-9, "{v} t={t}\n{c:?}\n{g:?}");
            }
        }
    }

    #[test]
    fn vacuum_a_is_cosh() {
        for v in Variant::ALL {
            let params = p(v, 1.0, 0.25);
            let init = InitialData::vacuum(1.0);
            for t in [0.0, 0.4, 1.0, 3.3] {
                let inv = slow_invariants(&init, t, &params);
                assert!((inv.a - 2.0 * (0.5 * t).cosh()).abs() < 1e-13);
                assert_eq!((inv.b, inv.c), (0.0, 0.0));
                let s = SlowInvariants::from_state(&evolve_closed_form(&init, t, &params).unwrap(), 1.0);
                assert!((s.a - inv.a).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gamma_is_continuous() {
        for v in Variant::ALL {
            let params = p(v, 1.0, 0.25);
            let mut prev = evolve_closed_form(&generic(), 0.0, &params).unwrap().gamma;
            let mut jumps_principal = 0;
            let mut prev_p = prev;
            for k in 1..=62_832 {
                let t = 1e-4 * k as f64;
                let g = evolve_closed_form(&generic(), t, &params).unwrap().gamma;
                assert!((g - prev).abs() < 0.05, "{v} jump at t={t}");
                prev = g;
                let gp = evolve_closed_form_with(&generic(), t, &params, GammaBranch::Principal).unwrap().gamma;
                if (gp - prev_p).abs() > 0.5 {
                    jumps_principal += 1;
                }
                prev_p = gp;
            }
            assert!(jumps_principal > 0);
        }
    }

    #[test]
    fn complex_identities_hold() {
        let inits = [
            generic(),
            InitialData::new(-0.6, 0.7, 0.3, -0.2, 0.9, 0.1, 0).unwrap(),
            InitialData::new(0.2, -1.5, 0.0, 0.4, 0.25, 0.0, 0).unwrap(),
        ];
        for v in Variant::ALL {
            let params = p(v, 1.3, 0.35);
            for init in &inits {
                for k in 0..60 {
                    let t = 0.1 * k as f64;
                    let r = identity_residuals(init, t, &params).unwrap();
                    for (i, x) in r.iter().enumerate() {
                        assert!(*x < 1e-9, "{v} identity {i} t={t}: {x}");
                    }
                }
            }
        }
    }

    #[test]
    fn phi90_vectors_at_zero() {
        let init = generic();
        let v = slow_vectors(&init, 0.0, &p(Variant::PhiHalfPi, 1.0, 0.25));
        assert!((v.z - 1.0).norm() < 1e-15);
        assert!((v.eta - C64::new(1.44 + 1.0, -0.6)).norm() < 1e-14);
        assert!((v.zeta - C64::new(1.0 - 1.44, 0.6)).norm() < 1e-14);
    }
}
