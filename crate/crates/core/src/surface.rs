//! The CMC B-scroll `f_L = γ + tB` in L³, its Gauss map, and the dual
//! timelike minimal surface in Nil₃(H).
//!
//! Nil₃(H) is modelled on ℝ³ with the left-invariant frame in which a
//! tangent vector `v` at `x` has components
//! `(v₁, v₂, v₃ + H(x₂v₁ − x₁v₂))`. The Lorentzian metric `g₊` and the
//! Riemannian metric `g_R` are the L³ and Euclidean forms on these
//! components.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::{FrameSource, NullFrame};
use crate::integrator::{integrate_curve, CurvePath, IntegratorConfig};
use crate::lorentz::{stereo_pi, stereo_pi_l, ParaComplex, Vec3L};

pub type Sym2 = [[f64; 2]; 2];

/// `f_L(s,t) = γ(s) + tB(s)`.
pub fn bscroll_point(frame: &NullFrame, path: &CurvePath, t: f64) -> Result<Vec3L> {
    let (gamma, _) = path.dense_eval(frame.s)?;
    Ok(gamma + frame.b.value() * t)
}

/// `(∂s f_L, ∂t f_L) = (A + tB', B)`.
pub fn bscroll_jacobian(frame: &NullFrame, t: f64) -> [Vec3L; 2] {
    [frame.a.value() + frame.b.derivative(1) * t, frame.b.value()]
}

/// `N_L = −C − tHB`.
pub fn gauss_map_l(frame: &NullFrame, t: f64) -> Vec3L {
    -(frame.c.value() + frame.b.value() * (t * frame.mean_curvature))
}

/// `(∂s N_L, ∂t N_L) = (−C' − tHB', −HB)`.
pub fn gauss_map_l_jacobian(frame: &NullFrame, t: f64) -> [Vec3L; 2] {
    let hh = frame.mean_curvature;
    [
        -(frame.c.derivative(1) + frame.b.derivative(1) * (t * hh)),
        frame.b.value() * -hh,
    ]
}

fn cross_term(x: &Vec3L, v: &Vec3L) -> f64 {
    x[0] * v[1] - x[1] * v[0]
}

/// The Nil₃ surface
/// `f = (γ₁ + tB₁, γ₂ + tB₂, γ₃ − tB₃ + HJ + tH(γ₁B₂ − γ₂B₁))`.
pub fn nil3_point(frame: &NullFrame, path: &CurvePath, t: f64) -> Result<Vec3L> {
    let (gamma, j) = path.dense_eval(frame.s)?;
    Ok(nil3_from_parts(frame, &gamma, j, t))
}

fn nil3_from_parts(frame: &NullFrame, gamma: &Vec3L, j: f64, t: f64) -> Vec3L {
    let b = frame.b.value();
    let hh = frame.mean_curvature;
    Vec3L::new(
        gamma[0] + t * b[0],
        gamma[1] + t * b[1],
        gamma[2] - t * b[2] + hh * j + t * hh * cross_term(gamma, &b),
    )
}

/// Coordinate partials `(∂s f, ∂t f)` of the Nil₃ surface.
pub fn nil3_jacobian(frame: &NullFrame, path: &CurvePath, t: f64) -> Result<[Vec3L; 2]> {
    let (gamma, _) = path.dense_eval(frame.s)?;
    Ok(nil3_jacobian_from_parts(frame, &gamma, t))
}

fn nil3_jacobian_from_parts(frame: &NullFrame, gamma: &Vec3L, t: f64) -> [Vec3L; 2] {
    let hh = frame.mean_curvature;
    let (a, b, db) = (frame.a.value(), frame.b.value(), frame.b.derivative(1));
    let j_prime = cross_term(gamma, &a);
    let fs = Vec3L::new(
        a[0] + t * db[0],
        a[1] + t * db[1],
        a[2] - t * db[2]
            + hh * j_prime
            + t * hh * (a[0] * b[1] + gamma[0] * db[1] - a[1] * b[0] - gamma[1] * db[0]),
    );
    let ft = Vec3L::new(b[0], b[1], -b[2] + hh * cross_term(gamma, &b));
    [fs, ft]
}

/// Components of the tangent vector `v` at `x` in the left-invariant frame.
pub fn left_invariant(x: &Vec3L, v: &Vec3L, mean_curvature: f64) -> Vec3L {
    Vec3L::new(v[0], v[1], v[2] + mean_curvature * (x[1] * v[0] - x[0] * v[1]))
}

fn euclid_cross(u: &Vec3L, v: &Vec3L) -> Vec3L {
    Vec3L::new(
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )
}

fn euclid_det(u: &Vec3L, v: &Vec3L, w: &Vec3L) -> f64 {
    euclid_cross(u, v)
        .0
        .iter()
        .zip(w.0.iter())
        .map(|(a, b)| a * b)
        .sum()
}

/// Singular values of a 2×3 matrix given by its rows, `(σ_min, σ_max)`.
pub fn singular_values(r0: &Vec3L, r1: &Vec3L) -> (f64, f64) {
    let frob = r0.coord_norm().powi(2) + r1.coord_norm().powi(2);
    let area = euclid_cross(r0, r1).coord_norm();
    let disc = (frob * frob - 4.0 * area * area).max(0.0).sqrt();
    let smax = ((frob + disc) / 2.0).sqrt();
    let smin = if smax > 0.0 { area / smax } else { 0.0 };
    (smin, smax)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JacobianMetrics {
    /// Smallest singular value of the coordinate Jacobian of `f`.
    pub sigma_min: f64,
    /// Signed area density `det_R(f_s, f_t, n)` for the extended unit normal.
    pub lambda: f64,
}

/// `g_R`-unit normal of the Nil₃ surface extended across singular points,
/// proportional to `(N₂, −N₁, 1)` in the left-invariant frame.
pub fn nil3_extended_normal(n_l: &Vec3L) -> Vec3L {
    let v = Vec3L::new(n_l[1], -n_l[0], 1.0);
    v * (1.0 / v.coord_norm())
}

pub fn nil3_jacobian_metrics(frame: &NullFrame, path: &CurvePath, t: f64) -> Result<JacobianMetrics> {
    let (gamma, j) = path.dense_eval(frame.s)?;
    let x = nil3_from_parts(frame, &gamma, j, t);
    let [fs, ft] = nil3_jacobian_from_parts(frame, &gamma, t);
    Ok(jacobian_metrics(frame, &x, &fs, &ft, t))
}

fn jacobian_metrics(frame: &NullFrame, x: &Vec3L, fs: &Vec3L, ft: &Vec3L, t: f64) -> JacobianMetrics {
    let hh = frame.mean_curvature;
    let (ws, wt) = (left_invariant(x, fs, hh), left_invariant(x, ft, hh));
    let n = nil3_extended_normal(&gauss_map_l(frame, t));
    JacobianMetrics {
        sigma_min: singular_values(fs, ft).0,
        lambda: euclid_det(&ws, &wt, &n),
    }
}

/// `g = −(N₂ + jN₁)/(1 − N₃)`, i.e. `−j·π_L(N)`.
pub fn normal_gauss_map(n_l: &Vec3L) -> Result<ParaComplex> {
    Ok(-stereo_pi_l(n_l)?.mul_j())
}

/// `N = −(j(g − ḡ), g + ḡ, 1 − |g|²)/(1 + |g|²)` written in components.
pub fn gauss_map_from_g(g: ParaComplex) -> Result<Vec3L> {
    let q = g.sqmod();
    let d = 1.0 + q;
    if d.abs() <= crate::lorentz::PROJ_EPS {
        return Err(Error::Pole {
            sign: '-',
            denom: d.abs(),
        });
    }
    Ok(Vec3L::new(-2.0 * g.im / d, -2.0 * g.re / d, -(1.0 - q) / d))
}

/// Normal Gauss map of the Nil₃ surface computed from its own tangent
/// plane: the `g₊`-unit normal `ν` of the left-invariant tangent components,
/// projected by `π`. Undefined where `f` is singular.
pub fn nil3_normal_gauss_map(frame: &NullFrame, path: &CurvePath, t: f64) -> Result<ParaComplex> {
    let (gamma, j) = path.dense_eval(frame.s)?;
    let x = nil3_from_parts(frame, &gamma, j, t);
    let [fs, ft] = nil3_jacobian_from_parts(frame, &gamma, t);
    let hh = frame.mean_curvature;
    let m = left_invariant(&x, &fs, hh).mcross(&left_invariant(&x, &ft, hh));
    let nn = m.mdot(&m);
    if nn <= 1e-24 {
        return Err(Error::Pole {
            sign: '+',
            denom: nn.max(0.0).sqrt(),
        });
    }
    stereo_pi(&(m * (1.0 / nn.sqrt())))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FundamentalForms {
    pub first: Sym2,
    pub second: Sym2,
    pub mean_curvature: f64,
    pub gauss_curvature: f64,
}

fn inverse2(m: &Sym2) -> Sym2 {
    let d = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    [[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]]
}

/// `I` and `II = −⟨df_L, dN_L⟩` of the B-scroll, with `H = ½ tr(I⁻¹II)`,
/// `K = det(I⁻¹II)`.
pub fn fundamental_forms(frame: &NullFrame, t: f64) -> FundamentalForms {
    let df = bscroll_jacobian(frame, t);
    let dn = gauss_map_l_jacobian(frame, t);
    let first: Sym2 = std::array::from_fn(|i| std::array::from_fn(|j| df[i].mdot(&df[j])));
    let mut second: Sym2 = std::array::from_fn(|i| std::array::from_fn(|j| -df[i].mdot(&dn[j])));
    let off = 0.5 * (second[0][1] + second[1][0]);
    second[0][1] = off;
    second[1][0] = off;
    forms_from(first, second)
}

pub fn forms_from(first: Sym2, second: Sym2) -> FundamentalForms {
    let inv = inverse2(&first);
    let w: Sym2 =
        std::array::from_fn(|i| std::array::from_fn(|j| inv[i][0] * second[0][j] + inv[i][1] * second[1][j]));
    FundamentalForms {
        first,
        second,
        mean_curvature: 0.5 * (w[0][0] + w[1][1]),
        gauss_curvature: w[0][0] * w[1][1] - w[0][1] * w[1][0],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoxResidual {
    /// `min(‖□N_L − 2H²N_L‖, ‖□N_L + 2H²N_L‖)`.
    pub residual: f64,
    /// `+1` if `□N_L = 2H²N_L` matched, `−1` for `−2H²N_L`.
    pub sign: i8,
    pub residual_plus: f64,
    pub residual_minus: f64,
}

/// Finite-difference d'Alembertian of `N_L` for `I = t²H²ds² − 2dsdt`:
/// `□u = ∂ᵢ(gⁱʲ∂ⱼu) = −2u_st − 2tH²u_t − t²H²u_tt`.
pub fn box_residual(source: &dyn FrameSource, s: f64, t: f64, fd_step: f64) -> Result<BoxResidual> {
    if !(1e-4..=1e-2).contains(&fd_step) {
        return Err(Error::Config(format!("fd_step {fd_step} outside [1e-4, 1e-2]")));
    }
    let d = fd_step;
    let hh = source.mean_curvature();
    let (fm, f0, fp) = (
        source.frame_at(s - d)?,
        source.frame_at(s)?,
        source.frame_at(s + d)?,
    );
    let n = |f: &NullFrame, t: f64| gauss_map_l(f, t);
    let u = n(&f0, t);
    let u_t = (n(&f0, t + d) - n(&f0, t - d)) * (1.0 / (2.0 * d));
    let u_tt = (n(&f0, t + d) - u * 2.0 + n(&f0, t - d)) * (1.0 / (d * d));
    let u_st = (n(&fp, t + d) - n(&fp, t - d) - n(&fm, t + d) + n(&fm, t - d)) * (1.0 / (4.0 * d * d));
    let h2 = hh * hh;
    let boxed = u_st * -2.0 - u_t * (2.0 * t * h2) - u_tt * (t * t * h2);
    let plus = (boxed - u * (2.0 * h2)).coord_norm();
    let minus = (boxed + u * (2.0 * h2)).coord_norm();
    Ok(BoxResidual {
        residual: plus.min(minus),
        sign: if plus <= minus { 1 } else { -1 },
        residual_plus: plus,
        residual_minus: minus,
    })
}

/// Everything evaluated at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfaceSample {
    pub s: f64,
    pub t: f64,
    pub f_l: Vec3L,
    pub n_l: Vec3L,
    pub f_nil: Vec3L,
    /// Rows `∂s f`, `∂t f` of the Nil₃ surface.
    pub df: [Vec3L; 2],
    /// `None` at the pole `N₃ = 1`.
    pub g_map: Option<ParaComplex>,
}

/// A B-scroll: a frame source together with its integrated base curve.
#[derive(Debug, Clone)]
pub struct BScroll<S> {
    pub source: S,
    pub path: CurvePath,
}

impl<S: FrameSource> BScroll<S> {
    pub fn new(source: S, s0: f64, s_range: (f64, f64), cfg: &IntegratorConfig) -> Result<Self> {
        let path = integrate_curve(&source, s0, s_range, cfg)?;
        Ok(BScroll { source, path })
    }

    pub fn mean_curvature(&self) -> f64 {
        self.source.mean_curvature()
    }

    pub fn frame_at(&self, s: f64) -> Result<NullFrame> {
        self.source.frame_at(s)
    }

    pub fn sample(&self, s: f64, t: f64) -> Result<SurfaceSample> {
        let frame = self.source.frame_at(s)?;
        self.sample_frame(&frame, t)
    }

    pub fn sample_frame(&self, frame: &NullFrame, t: f64) -> Result<SurfaceSample> {
        let (gamma, j) = self.path.dense_eval(frame.s)?;
        let n_l = gauss_map_l(frame, t);
        Ok(SurfaceSample {
            s: frame.s,
            t,
            f_l: gamma + frame.b.value() * t,
            n_l,
            f_nil: nil3_from_parts(frame, &gamma, j, t),
            df: nil3_jacobian_from_parts(frame, &gamma, t),
            g_map: normal_gauss_map(&n_l).ok(),
        })
    }

    pub fn jacobian_metrics(&self, s: f64, t: f64) -> Result<JacobianMetrics> {
        let frame = self.source.frame_at(s)?;
        nil3_jacobian_metrics(&frame, &self.path, t)
    }

    /// Samples on the tensor grid, row-major with `s` outer.
    pub fn grid(&self, s_values: &[f64], t_values: &[f64]) -> Result<Vec<SurfaceSample>> {
        let rows: Vec<Vec<SurfaceSample>> = s_values
            .par_iter()
            .map(|&s| {
                let frame = self.source.frame_at(s)?;
                t_values.iter().map(|&t| self.sample_frame(&frame, t)).collect()
            })
            .collect::<Result<_>>()?;
        Ok(rows.into_iter().flatten().collect())
    }
}

/// `n` equally spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::GeneratorFrames;

    fn tanh_scroll() -> BScroll<GeneratorFrames> {
        let src = GeneratorFrames::new("tanh(s)", 1.0).unwrap();
        BScroll::new(src, 0.0, (-1.5, 1.5), &IntegratorConfig::default()).unwrap()
    }

    #[test]
    fn tanh_gauss_map_value() {
        let sc = tanh_scroll();
        let f = sc.frame_at(0.3).unwrap();
        let n = gauss_map_l(&f, 0.0);
        assert!((n - Vec3L::new(-(0.6f64).sinh(), 0.0, 0.6f64.cosh())).max_abs() < 1e-12);
        let g = normal_gauss_map(&n).unwrap();
        assert!(g.re.abs() < 1e-12);
        // oracle: -(0 + j N1)/(1 - N3)
        let want = (0.6f64).sinh() / (1.0 - 0.6f64.cosh());
        assert!((g.im - want).abs() < 1e-12);
        assert!((g.im + 3.4327).abs() < 1e-4);
    }

    #[test]
    fn g_round_trip_and_origin() {
        let g = normal_gauss_map(&Vec3L::new(0.0, 0.0, -1.0)).unwrap();
        assert_eq!((g.re, g.im), (0.0, 0.0));
        let n = Vec3L::new(0.3, -1.2, 0.4);
        let n = n * (1.0 / n.mdot(&n).sqrt());
        let back = gauss_map_from_g(normal_gauss_map(&n).unwrap()).unwrap();
        assert!((back - n).max_abs() < 1e-12);
    }

    #[test]
    fn tanh_nil3_at_origin_line() {
        let sc = tanh_scroll();
        let f = sc.frame_at(0.0).unwrap();
        for t in [-1.0, 0.5, 2.0] {
            let p = nil3_point(&f, &sc.path, t).unwrap();
            assert!((p - Vec3L::new(t / 2.0, -t / 2.0, 0.0)).max_abs() < 1e-12);
        }
    }

    #[test]
    fn forms_at_t_zero() {
        let sc = tanh_scroll();
        let ff = fundamental_forms(&sc.frame_at(0.7).unwrap(), 0.0);
        assert!(ff.first[0][0].abs() < 1e-12 && (ff.first[0][1] + 1.0).abs() < 1e-12);
        assert!((ff.mean_curvature - 1.0).abs() < 1e-12);
        assert!((ff.gauss_curvature - 1.0).abs() < 1e-12);
    }

    #[test]
    fn box_sign_and_order() {
        let src = GeneratorFrames::new("tanh(s)", 1.0).unwrap();
        let r1 = box_residual(&src, 0.5, 0.2, 1e-3).unwrap();
        assert!(r1.residual < 1e-4);
        assert_eq!(r1.sign, -1);
        let r2 = box_residual(&src, 0.5, 0.2, 2e-3).unwrap();
        let ratio = r2.residual / r1.residual;
        assert!((2.8..5.2).contains(&ratio), "{ratio}");
        assert!(box_residual(&src, 0.5, 0.2, 0.1).is_err());
    }

    #[test]
    fn linspace_endpoints() {
        let v = linspace(-1.0, 1.0, 5);
        assert_eq!(v, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn nil3_shares_normal_gauss_map() {
        let sc = tanh_scroll();
        for (s, t) in [(0.3, 0.0), (0.8, -1.1), (-0.6, 0.7), (1.2, 2.0)] {
            let f = sc.frame_at(s).unwrap();
            let g = normal_gauss_map(&gauss_map_l(&f, t)).unwrap();
            let g2 = nil3_normal_gauss_map(&f, &sc.path, t).unwrap();
            assert!(
                (g - g2).re.abs() < 1e-9 && (g - g2).im.abs() < 1e-9,
                "{g:?} {g2:?}"
            );
        }
    }

    #[test]
    fn lambda_vanishes_and_flips_on_singular_curve() {
        let sc = tanh_scroll();
        let f = sc.frame_at(0.3).unwrap();
        let (b, c) = (f.b.value(), f.c.value());
        let ts = -c[2] / b[2];
        let m0 = nil3_jacobian_metrics(&f, &sc.path, ts).unwrap();
        assert!(m0.sigma_min < 1e-8 && m0.lambda.abs() < 1e-8, "{m0:?}");
        let lo = nil3_jacobian_metrics(&f, &sc.path, ts - 0.05).unwrap();
        let hi = nil3_jacobian_metrics(&f, &sc.path, ts + 0.05).unwrap();
        assert!(lo.lambda * hi.lambda < 0.0);
        assert!(nil3_jacobian_metrics(&f, &sc.path, ts + 0.1).unwrap().sigma_min > 1e-3);
    }
}
