//! Wigner function of the dynamical vacuum and the rotating/squeezing frames.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{InitialData, ModelParams};
use crate::oracle::{simpson, GridSpec};

/// `(x, p) → (X, P)`, a rotation of `(ωx, p)` by `ωt`.
pub fn rotate(x: f64, p: f64, t: f64, omega: f64) -> (f64, f64) {
    let (s, c) = (omega * t).sin_cos();
    (omega * x * c - p * s, omega * x * s + p * c)
}

/// Inverse of [`rotate`].
pub fn unrotate(x_rot: f64, p_rot: f64, t: f64, omega: f64) -> (f64, f64) {
    let (s, c) = (omega * t).sin_cos();
    ((x_rot * c + p_rot * s) / omega, p_rot * c - x_rot * s)
}

/// `(X, P) → (U, V)` for the selected variant.
pub fn squeeze_coords(x_rot: f64, p_rot: f64, t: f64, params: &ModelParams) -> (f64, f64) {
    params.model().squeeze(x_rot, p_rot, t)
}

/// One point carried through both frames.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpacePoint {
    pub t: f64,
    pub x: f64,
    pub p: f64,
    pub x_rot: f64,
    pub p_rot: f64,
    pub u: f64,
    pub v: f64,
}

impl PhaseSpacePoint {
    pub fn new(x: f64, p: f64, t: f64, params: &ModelParams) -> Self {
        let (x_rot, p_rot) = rotate(x, p, t, params.omega());
        let (u, v) = squeeze_coords(x_rot, p_rot, t, params);
        PhaseSpacePoint { t, x, p, x_rot, p_rot, u, v }
    }
}

/// `Q(U, V)`: the quadratic form whose level sets are the Wigner contours.
pub fn quadratic_q(init: &InitialData, omega: f64, u: f64, v: f64) -> f64 {
    let (a1, a2) = unit_coords(init, omega, u, v);
    a1 * a1 + a2 * a2
}

// Q = a1² + a2²; the map (U, V) → (a1, a2) has Jacobian 1/ω.
fn unit_coords(init: &InitialData, w: f64, u: f64, v: f64) -> (f64, f64) {
    let b0 = init.beta0;
    let a1 = (b0 * u + w * init.eps0) / w;
    let a2 = (2.0 * init.alpha0 * u - w * (v - init.delta0)) / (b0 * w);
    (a1, a2)
}

/// `W(x, p, t) = exp(−Q(U, V))/π` for the n = 0 state.
pub fn wigner_vacuum(init: &InitialData, t: f64, params: &ModelParams, x: f64, p: f64) -> f64 {
    let pt = PhaseSpacePoint::new(x, p, t, params);
    (-quadratic_q(init, params.omega(), pt.u, pt.v)).exp() / PI
}

/// Wigner function sampled on a rectangle.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub t: f64,
    pub x: GridSpec,
    pub p: GridSpec,
    /// Row-major, `values[i * p.num_points + j] = W(x_i, p_j)`.
    pub values: Vec<f64>,
}

impl WignerGrid {
    /// Rectangle of ±8σ around the means, 513 × 513 points.
    pub fn default_for(init: &InitialData, t: f64, params: &ModelParams) -> Result<Self> {
        Self::sample(init, t, params, 513)
    }

    pub fn sample(init: &InitialData, t: f64, params: &ModelParams, points: usize) -> Result<Self> {
        if init.n != 0 {
            return Err(Error::Domain("the closed-form Wigner function covers n = 0 only".into()));
        }
        init.validate()?;
        let m = params.model();
        let (q, pm) = m.means(init, t);
        let (vq, vp) = m.sigma_ground(init, t);
        let x = GridSpec::new(q - 8.0 * vq.sqrt(), q + 8.0 * vq.sqrt(), points)?;
        let p = GridSpec::new(pm - 8.0 * vp.sqrt(), pm + 8.0 * vp.sqrt(), points)?;
        let ps = p.points();
        let values = x
            .points()
            .par_iter()
            .flat_map_iter(|&xi| ps.iter().map(move |&pj| wigner_vacuum(init, t, params, xi, pj)))
            .collect();
        Ok(WignerGrid { t, x, p, values })
    }

    fn row(&self, i: usize) -> &[f64] {
        let n = self.p.num_points;
        &self.values[i * n..(i + 1) * n]
    }

    /// `∫ W dp` at each x.
    pub fn marginal_x(&self) -> Vec<f64> {
        (0..self.x.num_points).map(|i| simpson(self.row(i), self.p.step())).collect()
    }

    /// `∫ W dx` at each p.
    pub fn marginal_p(&self) -> Vec<f64> {
        let n = self.p.num_points;
        (0..n)
            .map(|j| {
                let col: Vec<f64> = (0..self.x.num_points).map(|i| self.values[i * n + j]).collect();
                simpson(&col, self.x.step())
            })
            .collect()
    }

    pub fn integral(&self) -> f64 {
        simpson(&self.marginal_x(), self.x.step())
    }
}

/// Closed polyline of `Q = level` in `(x, p)`; the last point repeats the first.
pub fn contour_q(
    level: f64,
    t: f64,
    init: &InitialData,
    params: &ModelParams,
    num_points: usize,
) -> Result<Vec<(f64, f64)>> {
    if !(level > 0.0 && level.is_finite()) {
        return Err(Error::Domain(format!("contour level must be positive, got {level}")));
    }
    if num_points < 3 {
        return Err(Error::Domain("a contour needs at least 3 points".into()));
    }
    init.validate()?;
    let w = params.omega();
    let r = level.sqrt();
    let m = params.model();
    let mut out: Vec<(f64, f64)> = (0..num_points)
        .map(|k| {
            let th = 2.0 * PI * k as f64 / num_points as f64;
            let (a1, a2) = (r * th.cos(), r * th.sin());
            let u = w * (a1 - init.eps0) / init.beta0;
            let v = (2.0 * init.alpha0 * u + w * init.delta0 - init.beta0 * w * a2) / w;
            let (xr, pr) = m.unsqueeze(u, v, t);
            unrotate(xr, pr, t, w)
        })
        .collect();
    out.push(out[0]);
    Ok(out)
}

/// Shoelace area of a closed polyline.
pub fn polygon_area(points: &[(f64, f64)]) -> f64 {
    let s: f64 = points.windows(2).map(|w| w[0].0 * w[1].1 - w[1].0 * w[0].1).sum();
    0.5 * s.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::squeezed_wavefunction;
    use crate::model::Variant;
    use crate::oracle::wigner_transform;

    fn p(v: Variant, w: f64, l: f64) -> ModelParams {
        ModelParams::new(v, w, l).unwrap()
    }

    #[test]
    fn rotation_examples() {
        let (x, pp) = rotate(0.7, -0.2, 0.0, 1.5);
        assert!((x - 1.05).abs() < 1e-15 && pp == -0.2);
        let (x, pp) = rotate(0.7, -0.2, PI / 3.0, 1.5);
        assert!((x - 0.2).abs() < 1e-15 && (pp - 1.05).abs() < 1e-15);
        for k in 0..20 {
            let t = 0.31 * k as f64;
            let (x, pp) = rotate(0.4, 1.3, t, 2.0);
            assert!((x * x + pp * pp - (0.64 + 1.69)).abs() < 1e-13);
            let (a, b) = unrotate(x, pp, t, 2.0);
            assert!((a - 0.4).abs() < 1e-14 && (b - 1.3).abs() < 1e-14);
        }
    }

    #[test]
    fn squeeze_maps_have_unit_jacobian() {
        for v in Variant::ALL {
            let params = p(v, 1.0, 0.3);
            assert_eq!(squeeze_coords(0.4, -0.9, 0.0, &params), (0.4, -0.9));
            let t = 1.7;
            let (u1, v1) = squeeze_coords(1.0, 0.0, t, &params);
            let (u2, v2) = squeeze_coords(0.0, 1.0, t, &params);
            assert!((u1 * v2 - u2 * v1 - 1.0).abs() < 1e-14);
            let (a, b) = params.model().unsqueeze(u1, v1, t);
            assert!((a - 1.0).abs() < 1e-14 && b.abs() < 1e-14);
        }
    }

    #[test]
    fn vacuum_peak_and_normalization() {
        let params = p(Variant::PhiZero, 2.0, 0.5);
        let init = InitialData::vacuum(2.0);
        assert!((wigner_vacuum(&init, 0.0, &params, 0.0, 0.0) - 1.0 / PI).abs() < 1e-16);
        let g = WignerGrid::sample(&init, 0.8, &params, 257).unwrap();
        assert!((g.integral() - 1.0).abs() < 1e-4);
    }

    #[test]
    fn closed_form_matches_transform() {
        let init = InitialData::new(0.3, 1.2, 0.0, 0.5, -0.4, 0.0, 0).unwrap();
        for v in Variant::ALL {
            let params = p(v, 1.0, 0.25);
            let t = 1.3;
            let grid = GridSpec::symmetric(14.0, 2801).unwrap();
            let psi = |x: f64| squeezed_wavefunction(&init, t, &params, x).unwrap();
            for (x, pp) in [(0.0, 0.0), (0.4, -0.6), (-1.0, 0.8)] {
                let a = wigner_vacuum(&init, t, &params, x, pp);
                let b = wigner_transform(psi, &grid, x, pp);
                assert!((a - b).abs() < 1e-8, "{v} {a} {b}");
            }
        }
    }

    #[test]
    fn contour_area_is_conserved() {
        let params = p(Variant::PhiZero, 1.0, 0.25);
        let init = InitialData::vacuum(1.0);
        let c0 = contour_q(2.0, 0.0, &init, &params, 2000).unwrap();
        for (x, pp) in &c0 {
            assert!((x * x + pp * pp - 2.0).abs() < 1e-12);
        }
        let a0 = polygon_area(&c0);
        for t in [0.5, 1.4, 3.0] {
            let a = polygon_area(&contour_q(2.0, t, &init, &params, 2000).unwrap());
            assert!((a / a0 - 1.0).abs() < 1e-12);
        }
        assert!(contour_q(0.0, 1.0, &init, &params, 10).is_err());
    }

    #[test]
    fn contour_lies_on_level_set() {
        let init = InitialData::new(-0.2, 0.9, 0.0, 0.3, 0.5, 0.0, 0).unwrap();
        for v in Variant::ALL {
            let params = p(v, 1.3, 0.2);
            for &(x, pp) in contour_q(1.5, 2.1, &init, &params, 64).unwrap().iter() {
                let w = wigner_vacuum(&init, 2.1, &params, x, pp);
                assert!((w * PI - (-1.5f64).exp()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn excited_states_rejected() {
        let params = p(Variant::PhiZero, 1.0, 0.25);
        let init = InitialData::vacuum(1.0).with_n(1);
        assert!(WignerGrid::sample(&init, 0.5, &params, 33).unwrap_err().is_domain());
    }
}
