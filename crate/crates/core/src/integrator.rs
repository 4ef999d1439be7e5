//! Adaptive Dormand–Prince 5(4) integration with cubic Hermite dense output,
//! and the base null curve `γ' = A` together with the Heisenberg area
//! integral `J' = γ₁A₂ − γ₂A₁`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::FrameSource;
use crate::lorentz::Vec3L;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Upper bound on the step; also bounds the Hermite interpolation error.
    pub max_step: f64,
    pub min_step: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_step: 5e-3,
            min_step: 1e-12,
            max_steps: 200_000,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        if !(self.min_step > 0.0 && self.min_step < self.max_step) {
            return Err(Error::Config("need 0 < min_step < max_step".into()));
        }
        Ok(())
    }

    pub fn scaled_tolerances(&self, k: f64) -> IntegratorConfig {
        IntegratorConfig {
            abs_tol: self.abs_tol * k,
            rel_tol: self.rel_tol * k,
            ..*self
        }
    }
}

/// Accepted steps of an integration, ascending in `s`, with exact derivatives
/// at every node.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<const N: usize> {
    pub s: Vec<f64>,
    pub y: Vec<[f64; N]>,
    pub dy: Vec<[f64; N]>,
}

impl<const N: usize> Trajectory<N> {
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn range(&self) -> (f64, f64) {
        (self.s[0], *self.s.last().unwrap())
    }

    /// Index `i` with `s[i] <= s <= s[i+1]`.
    fn locate(&self, s: f64) -> Result<usize> {
        let (lo, hi) = self.range();
        if !(s >= lo && s <= hi) {
            return Err(Error::OutOfRange { s, lo, hi });
        }
        let i = self.s.partition_point(|&x| x <= s);
        Ok(i.saturating_sub(1).min(self.s.len().saturating_sub(2)))
    }

    /// Cubic Hermite interpolation of `(y, y')`; exact at the nodes.
    pub fn interpolate(&self, s: f64) -> Result<([f64; N], [f64; N])> {
        let i = self.locate(s)?;
        if self.s[i] == s || self.s.len() == 1 {
            return Ok((self.y[i], self.dy[i]));
        }
        if self.s[i + 1] == s {
            return Ok((self.y[i + 1], self.dy[i + 1]));
        }
        let h = self.s[i + 1] - self.s[i];
        let t = (s - self.s[i]) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        let d00 = (6.0 * t2 - 6.0 * t) / h;
        let d10 = 3.0 * t2 - 4.0 * t + 1.0;
        let d01 = (-6.0 * t2 + 6.0 * t) / h;
        let d11 = 3.0 * t2 - 2.0 * t;
        let (y0, y1, f0, f1) = (&self.y[i], &self.y[i + 1], &self.dy[i], &self.dy[i + 1]);
        let y = std::array::from_fn(|k| h00 * y0[k] + h10 * h * f0[k] + h01 * y1[k] + h11 * h * f1[k]);
        let dy = std::array::from_fn(|k| d00 * y0[k] + d10 * f0[k] + d01 * y1[k] + d11 * f1[k]);
        Ok((y, dy))
    }
}

// Dormand–Prince 5(4) coefficients.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// fifth-order minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const BETA: f64 = 0.04;

fn error_norm<const N: usize>(err: &[f64; N], y0: &[f64; N], y1: &[f64; N], cfg: &IntegratorConfig) -> f64 {
    let sum: f64 = (0..N)
        .map(|i| {
            let sc = cfg.abs_tol + cfg.rel_tol * y0[i].abs().max(y1[i].abs());
            (err[i] / sc).powi(2)
        })
        .sum();
    (sum / N as f64).sqrt()
}

/// Integrates `y' = rhs(s, y)` from `s0` to `s_end` (either direction). The
/// returned trajectory is in integration order.
pub fn integrate<const N: usize, F>(
    mut rhs: F,
    s0: f64,
    y0: [f64; N],
    s_end: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory<N>>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    cfg.validate()?;
    let f0 = rhs(s0, &y0)?;
    let mut traj = Trajectory {
        s: vec![s0],
        y: vec![y0],
        dy: vec![f0],
    };
    let span = s_end - s0;
    if span == 0.0 {
        return Ok(traj);
    }
    let dir = span.signum();

    // initial step from the derivative scale
    let d0 = error_norm(&y0, &[0.0; N], &y0, cfg).max(1e-5);
    let d1 = error_norm(&f0, &[0.0; N], &y0, cfg).max(1e-5);
    let mut h = (0.01 * d0 / d1)
        .min(cfg.max_step)
        .min(span.abs())
        .max(cfg.min_step * 10.0);

    let (mut s, mut y, mut f) = (s0, y0, f0);
    let mut fac_old: f64 = 1e-4;
    let mut rejected = false;
    let mut steps = 0usize;
    let mut k = [[0.0; N]; 7];

    while dir * (s_end - s) > 0.0 {
        steps += 1;
        if steps > cfg.max_steps {
            return Err(Error::MaxStepsExceeded {
                s,
                max_steps: cfg.max_steps,
            });
        }
        let remaining = (s_end - s).abs();
        let last = h >= remaining * (1.0 - 1e-12);
        if last {
            h = remaining;
        }
        let step = dir * h;

        k[0] = f;
        for stage in 1..7 {
            let ys: [f64; N] =
                std::array::from_fn(|i| y[i] + step * (0..stage).map(|j| A[stage][j] * k[j][i]).sum::<f64>());
            k[stage] = rhs(s + C[stage] * step, &ys)?;
        }
        // stage 7 abscissa is s + step and its state is the 5th-order solution
        let y_new: [f64; N] =
            std::array::from_fn(|i| y[i] + step * (0..6).map(|j| A[6][j] * k[j][i]).sum::<f64>());
        let err_vec: [f64; N] = std::array::from_fn(|i| step * (0..7).map(|j| E[j] * k[j][i]).sum::<f64>());
        let err = error_norm(&err_vec, &y, &y_new, cfg);

        let fac11 = err.powf(0.2 - BETA * 0.75);
        if err <= 1.0 {
            let fac = (fac11 / fac_old.powf(BETA) / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            fac_old = err.max(1e-4);
            s = if last { s_end } else { s + step };
            y = y_new;
            f = k[6];
            traj.s.push(s);
            traj.y.push(y);
            traj.dy.push(f);
            let mut h_new = h / fac;
            if rejected {
                h_new = h_new.min(h);
            }
            rejected = false;
            h = h_new.min(cfg.max_step);
        } else {
            rejected = true;
            h /= (fac11 / SAFETY).min(1.0 / FAC_MIN);
            if h < cfg.min_step {
                return Err(Error::StepUnderflow { s, step: h });
            }
        }
        if !y.iter().all(|v| v.is_finite()) {
            return Err(Error::StepUnderflow { s, step: h });
        }
    }
    Ok(traj)
}

/// Integrates over `[lo, hi]` starting at `s0 ∈ [lo, hi]` and returns an
/// ascending trajectory.
pub fn integrate_span<const N: usize, F>(
    mut rhs: F,
    s0: f64,
    y0: [f64; N],
    (lo, hi): (f64, f64),
    cfg: &IntegratorConfig,
) -> Result<Trajectory<N>>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    if !(lo < hi) {
        return Err(Error::Config(format!("empty range [{lo}, {hi}]")));
    }
    if !(s0 >= lo && s0 <= hi) {
        return Err(Error::OutOfRange { s: s0, lo, hi });
    }
    let back = integrate(&mut rhs, s0, y0, lo, cfg)?;
    let fwd = integrate(&mut rhs, s0, y0, hi, cfg)?;
    let mut out = Trajectory {
        s: Vec::with_capacity(back.len() + fwd.len()),
        y: Vec::new(),
        dy: Vec::new(),
    };
    for i in (1..back.len()).rev() {
        out.s.push(back.s[i]);
        out.y.push(back.y[i]);
        out.dy.push(back.dy[i]);
    }
    out.s.extend_from_slice(&fwd.s);
    out.y.extend_from_slice(&fwd.y);
    out.dy.extend_from_slice(&fwd.dy);
    Ok(out)
}

/// A node of the base curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub s: f64,
    pub gamma: Vec3L,
    /// `∫ (γ₁γ₂' − γ₂γ₁') ds` from `s0`.
    pub j: f64,
    /// Equal to `A(s)` from the frame source.
    pub gamma_prime: Vec3L,
    pub j_prime: f64,
}

/// Sampled solution of `γ' = A`, `J' = γ₁A₂ − γ₂A₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePath {
    traj: Trajectory<4>,
    pub s0: f64,
    pub gamma0: Vec3L,
    pub j0: f64,
}

impl CurvePath {
    pub fn range(&self) -> (f64, f64) {
        self.traj.range()
    }

    pub fn len(&self) -> usize {
        self.traj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traj.is_empty()
    }

    pub fn sample(&self, i: usize) -> CurveSample {
        let (y, dy) = (&self.traj.y[i], &self.traj.dy[i]);
        CurveSample {
            s: self.traj.s[i],
            gamma: Vec3L::new(y[0], y[1], y[2]),
            j: y[3],
            gamma_prime: Vec3L::new(dy[0], dy[1], dy[2]),
            j_prime: dy[3],
        }
    }

    pub fn samples(&self) -> impl Iterator<Item = CurveSample> + '_ {
        (0..self.len()).map(|i| self.sample(i))
    }

    /// `(γ(s), J(s))` by cubic Hermite interpolation.
    pub fn dense_eval(&self, s: f64) -> Result<(Vec3L, f64)> {
        let (y, _) = self.traj.interpolate(s)?;
        Ok((Vec3L::new(y[0], y[1], y[2]), y[3]))
    }
}

/// Integrates the base curve of a frame source with `γ(s0) = 0`, `J(s0) = 0`.
pub fn integrate_curve(
    source: &dyn FrameSource,
    s0: f64,
    s_range: (f64, f64),
    cfg: &IntegratorConfig,
) -> Result<CurvePath> {
    integrate_curve_with_offsets(source, s0, s_range, Vec3L::ZERO, 0.0, cfg)
}

pub fn integrate_curve_with_offsets(
    source: &dyn FrameSource,
    s0: f64,
    s_range: (f64, f64),
    gamma0: Vec3L,
    j0: f64,
    cfg: &IntegratorConfig,
) -> Result<CurvePath> {
    let rhs = |s: f64, y: &[f64; 4]| -> Result<[f64; 4]> {
        let a = source.tangent_at(s)?;
        Ok([a[0], a[1], a[2], y[0] * a[1] - y[1] * a[0]])
    };
    let y0 = [gamma0[0], gamma0[1], gamma0[2], j0];
    let traj = integrate_span(rhs, s0, y0, s_range, cfg)?;
    Ok(CurvePath { traj, s0, gamma0, j0 })
}
