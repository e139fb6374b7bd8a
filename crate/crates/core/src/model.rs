//! Physical parameters and the variant strategies.
//!
//! Each integrable Hamiltonian is a strategy object implementing
//! [`IntegrableModel`]. Strategies are built by name through
//! [`ModelRegistry`]; the built-in names are `"phi0"` (pump phase 0) and
//! `"phi90"` (pump phase π/2).

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::characteristic::MuPair;
use crate::ermakov::{unwrapped_phase, ErmakovState, GammaBranch, SlowVectors};
use crate::error::{require_finite, Error, Result};
use crate::{oracle, propagators, C64};

/// The two pump phases with closed-form dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    PhiZero,
    PhiHalfPi,
}

impl Variant {
    /// Registry name of the built-in strategy.
    pub fn name(self) -> &'static str {
        match self {
            Variant::PhiZero => "phi0",
            Variant::PhiHalfPi => "phi90",
        }
    }

    pub const ALL: [Variant; 2] = [Variant::PhiZero, Variant::PhiHalfPi];
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Coefficients of `H = a p² + b q² + d (pq + qp)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianCoeffs {
    pub a: f64,
    pub b: f64,
    pub d: f64,
}

/// Initial Ermakov data and the Fock index of the dynamical state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialData {
    pub alpha0: f64,
    pub beta0: f64,
    pub gamma0: f64,
    pub delta0: f64,
    pub eps0: f64,
    pub kappa0: f64,
    pub n: usize,
}

impl InitialData {
    pub fn new(alpha0: f64, beta0: f64, gamma0: f64, delta0: f64, eps0: f64, kappa0: f64, n: usize) -> Result<Self> {
        let init = InitialData { alpha0, beta0, gamma0, delta0, eps0, kappa0, n };
        init.validate()?;
        Ok(init)
    }

    /// Ground state of the oscillator with frequency `omega`.
    pub fn vacuum(omega: f64) -> Self {
        InitialData { alpha0: 0.0, beta0: omega.sqrt(), gamma0: 0.0, delta0: 0.0, eps0: 0.0, kappa0: 0.0, n: 0 }
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("alpha0", self.alpha0),
            ("beta0", self.beta0),
            ("gamma0", self.gamma0),
            ("delta0", self.delta0),
            ("eps0", self.eps0),
            ("kappa0", self.kappa0),
        ] {
            require_finite(name, v)?;
        }
        if self.beta0 == 0.0 {
            return Err(Error::Domain("beta0 must be nonzero".into()));
        }
        Ok(())
    }

    /// `g = δ(0) − 2α(0)ε(0)/β(0)` and `h = ωε(0)/β(0)`, the two slow amplitudes of the mean motion.
    pub(crate) fn displacement_gh(&self, omega: f64) -> (f64, f64) {
        (self.delta0 - 2.0 * self.alpha0 * self.eps0 / self.beta0, omega * self.eps0 / self.beta0)
    }

    /// The same state reflected through x → −x, which has β(0) > 0.
    pub fn canonical(&self) -> (Self, bool) {
        if self.beta0 < 0.0 {
            let mut c = *self;
            c.beta0 = -c.beta0;
            c.delta0 = -c.delta0;
            (c, true)
        } else {
            (*self, false)
        }
    }
}

/// Variant-specific closed forms.
///
/// Everything outside this trait is written against `&ModelParams` and never
/// matches on the variant.
pub trait IntegrableModel: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;
    fn variant(&self) -> Variant;
    fn omega(&self) -> f64;
    fn lambda(&self) -> f64;

    fn coeffs(&self, t: f64) -> HamiltonianCoeffs;

    /// `(p, q, r)` of the characteristic equation `p μ'' + q μ' + r μ = 0`.
    fn ince_coeffs(&self, t: f64) -> [f64; 3];

    /// Analytic fundamental solutions with first and second derivatives.
    fn mu_pair(&self, t: f64) -> MuPair;

    /// Closed form of `μ₀μ₁' − μ₁μ₀'`.
    fn wronskian_closed(&self, t: f64) -> f64;

    /// Number of zeros of μ₀ in `(0, t]` (the Maslov index of the propagator).
    fn caustic_index(&self, t: f64) -> i64;

    /// `(α₀, β₀, γ₀)` of the Green's function, closed form.
    fn fundamental_closed(&self, t: f64) -> (f64, f64, f64);

    /// Evolved Ermakov state, closed form.
    fn evolve(&self, init: &InitialData, t: f64, branch: GammaBranch) -> Result<ErmakovState>;

    /// Slow invariants `A(t)`, `B(t)`.
    fn slow_ab(&self, init: &InitialData, t: f64) -> (f64, f64);

    fn slow_vectors(&self, init: &InitialData, t: f64) -> SlowVectors;

    /// `(⟨q⟩, ⟨p⟩)`.
    fn means(&self, init: &InitialData, t: f64) -> (f64, f64);

    /// `(σ_q, σ_p)` for n = 0.
    fn sigma_ground(&self, init: &InitialData, t: f64) -> (f64, f64);

    /// Rotating coordinates to squeezing coordinates.
    fn squeeze(&self, x_rot: f64, p_rot: f64, t: f64) -> (f64, f64);

    /// Inverse of [`IntegrableModel::squeeze`].
    fn unsqueeze(&self, u: f64, v: f64, t: f64) -> (f64, f64);

    /// Green's function assembled from the interaction-picture factorization.
    fn greens_factorized(&self, x: f64, y: f64, t: f64) -> Result<C64>;
}

fn trig(omega: f64, lambda: f64, t: f64) -> (f64, f64, f64, f64) {
    let (s, c) = (omega * t).sin_cos();
    ((lambda * t).cosh(), (lambda * t).sinh(), c, s)
}

/// Pump phase 0.
#[derive(Debug, Clone, Copy)]
pub struct PhiZero {
    omega: f64,
    lambda: f64,
}

/// Pump phase π/2.
#[derive(Debug, Clone, Copy)]
pub struct PhiHalfPi {
    omega: f64,
    lambda: f64,
}

impl IntegrableModel for PhiZero {
    fn name(&self) -> &'static str {
        "phi0"
    }
    fn variant(&self) -> Variant {
        Variant::PhiZero
    }
    fn omega(&self) -> f64 {
        self.omega
    }
    fn lambda(&self) -> f64 {
        self.lambda
    }

    fn coeffs(&self, t: f64) -> HamiltonianCoeffs {
        let (w, l) = (self.omega, self.lambda);
        let (s2, c2) = (2.0 * w * t).sin_cos();
        HamiltonianCoeffs { a: 0.5 * (1.0 + l / w * c2), b: 0.5 * w * w * (1.0 - l / w * c2), d: 0.5 * l * s2 }
    }

    fn ince_coeffs(&self, t: f64) -> [f64; 3] {
        let (w, l) = (self.omega, self.lambda);
        let (s2, c2) = (2.0 * w * t).sin_cos();
        [w + l * c2, 2.0 * l * w * s2, w * (w * w - 3.0 * l * l) - l * (w * w + l * l) * c2]
    }

    fn mu_pair(&self, t: f64) -> MuPair {
        let (w, l) = (self.omega, self.lambda);
        let (ch, sh, c, s) = trig(w, l, t);
        let (sc, cs, cc, ss) = (sh * c, ch * s, ch * c, sh * s);
        let (lp, lm) = (l * l + 2.0 * l * w - w * w, l * l - 2.0 * l * w - w * w);
        MuPair {
            t,
            mu0: (sc + cs) / w,
            mu1: cc + ss,
            dmu0: ((l + w) * cc + (l - w) * ss) / w,
            dmu1: (l + w) * sc + (l - w) * cs,
            ddmu0: (lp * sc + lm * cs) / w,
            ddmu1: lp * cc + lm * ss,
        }
    }

    fn wronskian_closed(&self, t: f64) -> f64 {
        -1.0 - self.lambda / self.omega * (2.0 * self.omega * t).cos()
    }

    fn caustic_index(&self, t: f64) -> i64 {
        if t == 0.0 {
            return 0;
        }
        let l = self.lambda * t;
        ((self.omega * t + l.sinh().atan2(l.cosh())) / PI).floor() as i64
    }

    fn fundamental_closed(&self, t: f64) -> (f64, f64, f64) {
        let w = self.omega;
        let (ch, sh, c, s) = trig(w, self.lambda, t);
        let den = ch * s + sh * c;
        (0.5 * w * (ch * c - sh * s) / den, -w / den, 0.5 * w * (ch * c + sh * s) / den)
    }

    fn evolve(&self, init: &InitialData, t: f64, branch: GammaBranch) -> Result<ErmakovState> {
        let (w, l) = (self.omega, self.lambda);
        let InitialData { alpha0: a0, beta0: b0, gamma0: g0, delta0: d0, eps0: e0, kappa0: k0, .. } = *init;
        let (ch, sh, c, s) = trig(w, l, t);
        let (s2, c2) = (2.0 * w * t).sin_cos();
        let (ch2, sh2) = ((2.0 * l * t).cosh(), (2.0 * l * t).sinh());
        let p = 4.0 * a0 * a0 + b0.powi(4);
        let ll = (p + w * w + 4.0 * a0 * w * s2) * ch2 + (4.0 * a0 * w + (p + w * w) * s2) * sh2 - (p - w * w) * c2;
        if !(ll > 0.0 && ll.is_finite()) {
            return Err(Error::Singular { t, what: "denominator L(t) of the closed-form state" });
        }
        let alpha = w / (2.0 * ll) * ((p - w * w) * s2 + (4.0 * a0 * w * ch2 + (p + w * w) * sh2) * c2);
        let root = (2.0 / ll).sqrt();
        let beta = b0 * w * root;
        let x = 2.0 * a0 * d0 + b0.powi(3) * e0;
        let delta = 2.0 * w / ll * ((d0 * w * c + x * s) * ch + (x * c + d0 * w * s) * sh);
        let y = 2.0 * a0 * e0 - b0 * d0;
        let eps = root * ((e0 * w * c + y * s) * ch + (y * c + e0 * w * s) * sh);
        let z = 2.0 * (b0.powi(3) * d0 * e0 + a0 * (d0 * d0 - b0 * b0 * e0 * e0));
        let q = d0 * d0 - b0 * b0 * e0 * e0;
        let kappa = k0 + (z * c2 - (z + q * w * s2) * ch2 - (q * w + z * s2) * sh2) / (2.0 * ll);
        let gamma = match branch {
            GammaBranch::Continuous => {
                let k = C64::new(2.0 * a0, b0 * b0) / w;
                let pp = ch + k * sh;
                let qq = sh + k * ch;
                g0 - 0.5 * unwrapped_phase(pp, qq / pp, w * t)
            }
            GammaBranch::Principal => {
                let m = (w * c + 2.0 * a0 * s) * ch + (2.0 * a0 * c + w * s) * sh;
                g0 - 0.5 * (b0 * b0 * (sh * c + ch * s) / m).atan()
            }
        };
        Ok(ErmakovState { t, alpha, beta, gamma, delta, eps, kappa })
    }

    fn slow_ab(&self, init: &InitialData, t: f64) -> (f64, f64) {
        let (w, l) = (self.omega, self.lambda);
        let (a0, b0) = (init.alpha0, init.beta0);
        let (ep, em) = ((2.0 * l * t).exp(), (-2.0 * l * t).exp());
        let b4 = b0.powi(4);
        let a =
            ((2.0 * a0 + w).powi(2) + b4) / (2.0 * b0 * b0) * ep + ((2.0 * a0 - w).powi(2) + b4) / (2.0 * b0 * b0) * em;
        let (g, h) = init.displacement_gh(w);
        let b = 0.5 * (g - h).powi(2) * ep + 0.5 * (g + h).powi(2) * em;
        (a, b)
    }

    fn slow_vectors(&self, init: &InitialData, t: f64) -> SlowVectors {
        let (w, l) = (self.omega, self.lambda);
        let (a0, b0) = (init.alpha0, init.beta0);
        let (ch, sh, c, s) = trig(w, l, t);
        let (g, h) = init.displacement_gh(w);
        let k = C64::new(2.0 * a0, b0 * b0) / w;
        let bb = b0 * b0;
        SlowVectors {
            xi: C64::new(g * ch - h * sh, h * ch - g * sh),
            z: (ch + k * sh) * c + (sh + k * ch) * s,
            eta: C64::new((w + bb) * ch + 2.0 * a0 * sh, -(2.0 * a0 * ch + (w - bb) * sh)),
            zeta: C64::new((w - bb) * ch + 2.0 * a0 * sh, 2.0 * a0 * ch + (w + bb) * sh),
        }
    }

    fn means(&self, init: &InitialData, t: f64) -> (f64, f64) {
        let w = self.omega;
        let (ch, sh, c, s) = trig(w, self.lambda, t);
        let q0 = -init.eps0 / init.beta0;
        let (g, _) = init.displacement_gh(w);
        (q0 * (ch * c + sh * s) + g / w * (ch * s + sh * c), g * (ch * c - sh * s) + w * q0 * (sh * c - ch * s))
    }

    fn sigma_ground(&self, init: &InitialData, t: f64) -> (f64, f64) {
        let (w, l) = (self.omega, self.lambda);
        let (a0, b0) = (init.alpha0, init.beta0);
        let (s2, c2) = (2.0 * w * t).sin_cos();
        let (ch2, sh2) = ((2.0 * l * t).cosh(), (2.0 * l * t).sinh());
        let sq = 4.0 * a0 * a0 + b0.powi(4);
        let dq = 4.0 * b0 * b0 * w * w;
        let dp = 4.0 * b0 * b0;
        let sigma_q = (sq + w * w + 4.0 * a0 * w * s2) / dq * ch2 + (4.0 * a0 * w + (sq + w * w) * s2) / dq * sh2
            - (sq - w * w) / dq * c2;
        let sigma_p = (sq + w * w - 4.0 * a0 * w * s2) / dp * ch2
            + (4.0 * a0 * w - (sq + w * w) * s2) / dp * sh2
            + (sq - w * w) / dp * c2;
        (sigma_q, sigma_p)
    }

    fn squeeze(&self, x_rot: f64, p_rot: f64, t: f64) -> (f64, f64) {
        let (ch, sh) = ((self.lambda * t).cosh(), (self.lambda * t).sinh());
        (x_rot * ch - p_rot * sh, p_rot * ch - x_rot * sh)
    }

    fn unsqueeze(&self, u: f64, v: f64, t: f64) -> (f64, f64) {
        let (ch, sh) = ((self.lambda * t).cosh(), (self.lambda * t).sinh());
        (u * ch + v * sh, u * sh + v * ch)
    }

    fn greens_factorized(&self, x: f64, y: f64, t: f64) -> Result<C64> {
        // ∫ G_ω(x, z, t) G_λ(z, y, t) dz as a complex Gaussian integral in z.
        let w = self.omega;
        let (s, c) = (w * t).sin_cos();
        let (ch, sh) = ((self.lambda * t).cosh(), (self.lambda * t).sinh());
        let outer = propagators::greens_oscillator(0.0, 0.0, t, w)?;
        let inner = propagators::greens_lambda(0.0, 0.0, t, w, self.lambda)?;
        let a = 0.5 * w * (c / s + ch / sh);
        let b = -w * x / s - w * y / sh;
        let cc = 0.5 * w * x * x * c / s + 0.5 * w * y * y * ch / sh;
        let integral = oracle::complex_gaussian_integral(C64::from(a), C64::from(b), C64::from(cc))?;
        Ok(outer * inner * integral)
    }
}

impl IntegrableModel for PhiHalfPi {
    fn name(&self) -> &'static str {
        "phi90"
    }
    fn variant(&self) -> Variant {
        Variant::PhiHalfPi
    }
    fn omega(&self) -> f64 {
        self.omega
    }
    fn lambda(&self) -> f64 {
        self.lambda
    }

    fn coeffs(&self, t: f64) -> HamiltonianCoeffs {
        let (w, l) = (self.omega, self.lambda);
        let (s2, c2) = (2.0 * w * t).sin_cos();
        HamiltonianCoeffs { a: 0.5 * (1.0 - l / w * s2), b: 0.5 * w * w * (1.0 + l / w * s2), d: 0.5 * l * c2 }
    }

    fn ince_coeffs(&self, t: f64) -> [f64; 3] {
        let (w, l) = (self.omega, self.lambda);
        let (s2, c2) = (2.0 * w * t).sin_cos();
        [w - l * s2, 2.0 * l * w * c2, w * (w * w - 3.0 * l * l) + l * (w * w + l * l) * s2]
    }

    fn mu_pair(&self, t: f64) -> MuPair {
        let (w, l) = (self.omega, self.lambda);
        let (s, c) = (w * t).sin_cos();
        let (ep, em) = ((l * t).exp(), (-l * t).exp());
        let (ems, emc, epc, eps) = (em * s, em * c, ep * c, ep * s);
        MuPair {
            t,
            mu0: ems / w,
            mu1: epc - l / w * ems,
            dmu0: (w * emc - l * ems) / w,
            dmu1: l * epc - w * eps + l * l / w * ems - l * emc,
            ddmu0: ((l * l - w * w) * ems - 2.0 * l * w * emc) / w,
            ddmu1: (l * l - w * w) * epc - 2.0 * l * w * eps + (l * w - l.powi(3) / w) * ems + 2.0 * l * l * emc,
        }
    }

    fn wronskian_closed(&self, t: f64) -> f64 {
        -(1.0 - self.lambda / self.omega * (2.0 * self.omega * t).sin())
    }

    fn caustic_index(&self, t: f64) -> i64 {
        if t == 0.0 {
            return 0;
        }
        (self.omega * t / PI).floor() as i64
    }

    fn fundamental_closed(&self, t: f64) -> (f64, f64, f64) {
        let w = self.omega;
        let (s, c) = (w * t).sin_cos();
        let cot = c / s;
        let e = (self.lambda * t).exp();
        (0.5 * w * cot, -e * w / s, 0.5 * w * e * e * cot)
    }

    fn evolve(&self, init: &InitialData, t: f64, branch: GammaBranch) -> Result<ErmakovState> {
        let (w, l) = (self.omega, self.lambda);
        let InitialData { alpha0: a0, beta0: b0, gamma0: g0, delta0: d0, eps0: e0, kappa0: k0, .. } = *init;
        let (s, c) = (w * t).sin_cos();
        let (s2, c2) = (2.0 * w * t).sin_cos();
        let e1 = (l * t).exp();
        let e2 = e1 * e1;
        let p = 4.0 * a0 * a0 + b0.powi(4);
        let u = 2.0 * a0 * s + w * e2 * c;
        let den = b0.powi(4) * s * s + u * u;
        if !(den > 0.0 && den.is_finite()) {
            return Err(Error::Singular { t, what: "denominator of the closed-form state" });
        }
        let root = den.sqrt();
        let alpha = w * (a0 * w * e2 * c2 + 0.25 * s2 * (p - w * w * e2 * e2)) / den;
        let beta = w * b0 * e1 / root;
        let delta = w * e1 * (e0 * b0.powi(3) * s + u * d0) / den;
        let eps = (e0 * u - b0 * d0 * s) / root;
        let kappa = k0
            + s * s * (e0 * b0 * b0 * (a0 * e0 - b0 * d0) - a0 * d0 * d0) / den
            + w * e2 * s2 * (e0 * e0 * b0 * b0 - d0 * d0) / (4.0 * den);
        let gamma = match branch {
            GammaBranch::Continuous => {
                let rho = C64::new(2.0 * a0, b0 * b0) / w / e2;
                g0 - 0.5 * unwrapped_phase(C64::from(e1), rho, w * t)
            }
            GammaBranch::Principal => g0 - 0.5 * (b0 * b0 * s / u).atan(),
        };
        Ok(ErmakovState { t, alpha, beta, gamma, delta, eps, kappa })
    }

    fn slow_ab(&self, init: &InitialData, t: f64) -> (f64, f64) {
        let (w, l) = (self.omega, self.lambda);
        let (a0, b0) = (init.alpha0, init.beta0);
        let (ep, em) = ((2.0 * l * t).exp(), (-2.0 * l * t).exp());
        let a = ((4.0 * a0 * a0 + b0.powi(4)) * em + w * w * ep) / (b0 * b0);
        let (g, h) = init.displacement_gh(w);
        (a, g * g * em + h * h * ep)
    }

    fn slow_vectors(&self, init: &InitialData, t: f64) -> SlowVectors {
        let (w, l) = (self.omega, self.lambda);
        let (a0, bb) = (init.alpha0, init.beta0 * init.beta0);
        let (s, c) = (w * t).sin_cos();
        let (ep, em) = ((l * t).exp(), (-l * t).exp());
        let (g, h) = init.displacement_gh(w);
        SlowVectors {
            xi: C64::new(g * em, h * ep),
            z: ep * c + C64::new(2.0 * a0, bb) * (em * s / w),
            eta: C64::new(bb * em + w * ep, -2.0 * a0 * em),
            zeta: C64::new(-bb * em + w * ep, 2.0 * a0 * em),
        }
    }

    fn means(&self, init: &InitialData, t: f64) -> (f64, f64) {
        let (w, l) = (self.omega, self.lambda);
        let (s, c) = (w * t).sin_cos();
        let (ep, em) = ((l * t).exp(), (-l * t).exp());
        let q0 = -init.eps0 / init.beta0;
        let (g, _) = init.displacement_gh(w);
        (q0 * ep * c + g / w * em * s, g * em * c - w * q0 * ep * s)
    }

    fn sigma_ground(&self, init: &InitialData, t: f64) -> (f64, f64) {
        let (w, l) = (self.omega, self.lambda);
        let (a0, b0) = (init.alpha0, init.beta0);
        let (s2, c2) = (2.0 * w * t).sin_cos();
        let e = (4.0 * a0 * a0 + b0.powi(4)) * (-2.0 * l * t).exp();
        let f = w * w * (2.0 * l * t).exp();
        let bb = b0 * b0;
        let sigma_q = (e + f) / (4.0 * bb * w * w) + a0 / (bb * w) * s2 - (e - f) / (4.0 * bb * w * w) * c2;
        let sigma_p = (e + f) / (4.0 * bb) - a0 * w / bb * s2 + (e - f) / (4.0 * bb) * c2;
        (sigma_q, sigma_p)
    }

    fn squeeze(&self, x_rot: f64, p_rot: f64, t: f64) -> (f64, f64) {
        let e = (self.lambda * t).exp();
        (x_rot / e, p_rot * e)
    }

    fn unsqueeze(&self, u: f64, v: f64, t: f64) -> (f64, f64) {
        let e = (self.lambda * t).exp();
        (u * e, v / e)
    }

    fn greens_factorized(&self, x: f64, y: f64, t: f64) -> Result<C64> {
        let e = (self.lambda * t).exp();
        Ok(e.sqrt() * propagators::greens_oscillator(x, y * e, t, self.omega)?)
    }
}

fn validate_omega_lambda(omega: f64, lambda: f64) -> Result<()> {
    require_finite("omega", omega)?;
    require_finite("lambda", lambda)?;
    if omega <= 0.0 {
        return Err(Error::Domain(format!("omega must be positive, got {omega}")));
    }
    if lambda < 0.0 {
        return Err(Error::Domain(format!("lambda must be non-negative, got {lambda}")));
    }
    if lambda >= omega {
        return Err(Error::Domain(format!(
            "lambda must be below omega so that a(t) stays positive (lambda = {lambda}, omega = {omega})"
        )));
    }
    Ok(())
}

fn build_phi_zero(omega: f64, lambda: f64) -> Result<Arc<dyn IntegrableModel>> {
    validate_omega_lambda(omega, lambda)?;
    Ok(Arc::new(PhiZero { omega, lambda }))
}

fn build_phi_half_pi(omega: f64, lambda: f64) -> Result<Arc<dyn IntegrableModel>> {
    validate_omega_lambda(omega, lambda)?;
    Ok(Arc::new(PhiHalfPi { omega, lambda }))
}

/// Constructor stored in the registry.
pub type ModelFactory = fn(f64, f64) -> Result<Arc<dyn IntegrableModel>>;

/// Name → strategy constructor table.
#[derive(Clone)]
pub struct ModelRegistry {
    entries: Vec<(&'static str, ModelFactory)>,
}

impl Default for ModelRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

impl ModelRegistry {
    pub fn empty() -> Self {
        ModelRegistry { entries: Vec::new() }
    }

    /// Registry holding `"phi0"` and `"phi90"`.
    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register("phi0", build_phi_zero);
        r.register("phi90", build_phi_half_pi);
        r
    }

    /// Adds or replaces a strategy.
    pub fn register(&mut self, name: &'static str, factory: ModelFactory) {
        match self.entries.iter_mut().find(|(n, _)| *n == name) {
            Some(slot) => slot.1 = factory,
            None => self.entries.push((name, factory)),
        }
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|(n, _)| *n).collect()
    }

    pub fn build(&self, name: &str, omega: f64, lambda: f64) -> Result<ModelParams> {
        let factory = self
            .entries
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, f)| *f)
            .ok_or_else(|| Error::Domain(format!("unknown model {name:?}; known: {}", self.names().join(", "))))?;
        Ok(ModelParams { model: factory(omega, lambda)? })
    }
}

/// Validated model: a shared strategy object plus its ω and λ.
#[derive(Clone, Debug)]
pub struct ModelParams {
    model: Arc<dyn IntegrableModel>,
}

impl ModelParams {
    pub fn new(variant: Variant, omega: f64, lambda: f64) -> Result<Self> {
        ModelRegistry::builtin().build(variant.name(), omega, lambda)
    }

    pub fn from_model(model: Arc<dyn IntegrableModel>) -> Self {
        ModelParams { model }
    }

    pub fn model(&self) -> &dyn IntegrableModel {
        self.model.as_ref()
    }

    pub fn omega(&self) -> f64 {
        self.model.omega()
    }

    pub fn lambda(&self) -> f64 {
        self.model.lambda()
    }

    pub fn variant(&self) -> Variant {
        self.model.variant()
    }

    pub fn name(&self) -> &'static str {
        self.model.name()
    }
}

/// `(a, b, d)` at time `t`.
pub fn hamiltonian_coeffs(t: f64, params: &ModelParams) -> Result<HamiltonianCoeffs> {
    require_finite("t", t)?;
    Ok(params.model().coeffs(t))
}
