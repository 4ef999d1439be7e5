//! Singular curve of the Nil₃ surface and classification of its points.
//!
//! The surface `f` is singular exactly where `⟨N_L, e₃⟩ = 0`, i.e. on
//! `t(s) = −C₃/(HB₃)`. Along that curve `c_L(s) = f_L(s, t(s))` decides the
//! type: `f` is a front iff `κ₂ ≠ 0`; a front point is a cuspidal edge unless
//! `c_L' ∥ e₃`, in which case it is a swallowtail when `c_L'' ∦ e₃`. Where
//! `κ₂ = 0` and `κ₂' ≠ 0` the point is a cuspidal cross cap.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::{FrameSource, NullFrame};
use crate::lorentz::{LorentzParams, LorentzTransform, Vec3L};
use crate::roots::brent;

pub const TOL_ROOT: f64 = 1e-10;
pub const TOL_CLUSTER: f64 = 1e-6;
/// `|B₃|` below which the singular curve is treated as escaping to infinity.
pub const UNBOUNDED_B3: f64 = 1e-10;
/// How far beyond `tol_root` the two front criteria may disagree before the
/// classifier reports an inconsistency. Between the tolerances the point is
/// in a gray zone where either answer is numerically defensible.
pub const CONSISTENCY_SLACK: f64 = 1e4;

const BRENT_X_TOL: f64 = 1e-15;
const BRENT_MAX_ITER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SingularKind {
    CuspidalEdge,
    Swallowtail,
    CuspidalCrossCap,
    FrontOther,
    NonFrontDegenerate,
    Unbounded,
}

impl SingularKind {
    pub fn name(self) -> &'static str {
        match self {
            SingularKind::CuspidalEdge => "cuspidal_edge",
            SingularKind::Swallowtail => "swallowtail",
            SingularKind::CuspidalCrossCap => "cuspidal_cross_cap",
            SingularKind::FrontOther => "front_other",
            SingularKind::NonFrontDegenerate => "non_front_degenerate",
            SingularKind::Unbounded => "unbounded",
        }
    }

    pub fn is_front(self) -> bool {
        matches!(
            self,
            SingularKind::CuspidalEdge | SingularKind::Swallowtail | SingularKind::FrontOther
        )
    }
}

impl std::fmt::Display for SingularKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Point of the singular curve at `s`, or `None` when `|B₃| < UNBOUNDED_B3`.
pub fn singular_t(frame: &NullFrame) -> Option<f64> {
    let b3 = frame.b.value()[2];
    if b3.abs() < UNBOUNDED_B3 {
        return None;
    }
    Some(-frame.c.value()[2] / (frame.mean_curvature * b3))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveJets {
    /// `c_L'` by differentiating `γ + t(s)B` with jets.
    pub cl1: Vec3L,
    pub cl2: Vec3L,
    /// `c_L'` from `A + (−A₃/B₃ − κ₂/H + C₃²/B₃²)B − (C₃/B₃)C`.
    pub cl1_closed: Vec3L,
}

impl CurveJets {
    pub fn dual_discrepancy(&self) -> f64 {
        (self.cl1 - self.cl1_closed).max_abs() / (1.0 + self.cl1.max_abs())
    }
}

/// `c_L'` and `c_L''` along the singular curve.
pub fn cl_jets(frame: &NullFrame) -> Result<CurveJets> {
    let hh = frame.mean_curvature;
    let (a, b, c) = (frame.a.value(), frame.b.value(), frame.c.value());
    if b[2].abs() < UNBOUNDED_B3 {
        return Err(Error::UnboundedCurve { s: frame.s, b3: b[2] });
    }
    let t = frame.c.0[2].checked_div(&frame.b.0[2])?.scale(-1.0 / hh);
    let tb = frame.b.scale_by(&t);
    let cl1 = a + tb.derivative(1);
    let cl2 = frame.a.derivative(1) + tb.derivative(2);
    let k2 = frame.kappa2.value();
    let coef = -a[2] / b[2] - k2 / hh + (c[2] / b[2]).powi(2);
    let cl1_closed = a + b * coef - c * (c[2] / b[2]);
    Ok(CurveJets { cl1, cl2, cl1_closed })
}

/// `r1 = (κ₂/H)B₃² − 1`, `r2 = 2A₃B₃ + 1 − C₃²`; both vanish exactly when
/// `c_L' ∥ e₃` at a front point.
pub fn notce_residuals(a: &Vec3L, b: &Vec3L, c: &Vec3L, kappa2: f64, mean_curvature: f64) -> (f64, f64) {
    (
        kappa2 / mean_curvature * b[2] * b[2] - 1.0,
        2.0 * a[2] * b[2] + 1.0 - c[2] * c[2],
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Diagnostics {
    pub s_h: f64,
    pub s_h_prime: f64,
    pub kappa2: f64,
    pub kappa2_prime: f64,
    pub b3: f64,
    pub cl1: Option<Vec3L>,
    pub cl2: Option<Vec3L>,
    /// `|⟨c_L', e₃⟩ + κ₂B₃/H|`.
    pub cl1_e3_residual: Option<f64>,
    pub cl1_dual_discrepancy: Option<f64>,
    pub notce: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularPoint {
    pub s: f64,
    pub t: Option<f64>,
    pub kind: SingularKind,
    pub diagnostics: Diagnostics,
}

pub fn classify_point(frame: &NullFrame, tol_root: f64) -> Result<SingularPoint> {
    let hh = frame.mean_curvature;
    let (a, b, c) = (frame.a.value(), frame.b.value(), frame.c.value());
    let k2 = frame.kappa2.value();
    let k2p = frame.kappa2.derivative(1);
    let notce = notce_residuals(&a, &b, &c, k2, hh);
    let mut diagnostics = Diagnostics {
        s_h: -hh * k2,
        s_h_prime: -hh * k2p,
        kappa2: k2,
        kappa2_prime: k2p,
        b3: b[2],
        cl1: None,
        cl2: None,
        cl1_e3_residual: None,
        cl1_dual_discrepancy: None,
        notce,
    };
    let Some(t) = singular_t(frame) else {
        return Ok(SingularPoint {
            s: frame.s,
            t: None,
            kind: SingularKind::Unbounded,
            diagnostics,
        });
    };
    let jets = cl_jets(frame)?;
    diagnostics.cl1 = Some(jets.cl1);
    diagnostics.cl2 = Some(jets.cl2);
    diagnostics.cl1_e3_residual = Some((jets.cl1[2] + k2 * b[2] / hh).abs());
    diagnostics.cl1_dual_discrepancy = Some(jets.dual_discrepancy());

    let kind = if k2.abs() > tol_root {
        let planar = jets.cl1[0].abs().max(jets.cl1[1].abs());
        let parallel = planar < tol_root;
        let residual = notce.0.abs().max(notce.1.abs());
        let notce_holds = residual < tol_root;
        let loud = tol_root * CONSISTENCY_SLACK;
        if (parallel && residual > loud) || (notce_holds && planar > loud) {
            return Err(Error::ClassifierInconsistency {
                s: frame.s,
                detail: format!(
                    "c_L' planar part {planar:e} vs NotCE residuals ({:e}, {:e})",
                    notce.0, notce.1
                ),
            });
        }
        if parallel {
            if jets.cl2[0].abs().max(jets.cl2[1].abs()) > tol_root {
                SingularKind::Swallowtail
            } else {
                SingularKind::FrontOther
            }
        } else {
            SingularKind::CuspidalEdge
        }
    } else if k2p.abs() > tol_root {
        SingularKind::CuspidalCrossCap
    } else {
        SingularKind::NonFrontDegenerate
    };
    Ok(SingularPoint {
        s: frame.s,
        t: Some(t),
        kind,
        diagnostics,
    })
}

// ---- scanning -------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveSample {
    pub s: f64,
    pub t: Option<f64>,
    pub kind: SingularKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ResidualSummary {
    pub cl1_dual_max: f64,
    pub cl1_e3_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularReport {
    pub generator: String,
    pub mean_curvature: f64,
    pub s_range: (f64, f64),
    pub grid_n: usize,
    pub tol_root: f64,
    pub tol_cluster: f64,
    pub curve: Vec<CurveSample>,
    pub points: Vec<SingularPoint>,
    /// Parameters where `B₃` vanishes and the singular curve leaves every
    /// compact set; these are not points of `f`.
    pub unbounded: Vec<f64>,
    pub residuals: ResidualSummary,
    pub warnings: Vec<String>,
}

impl SingularReport {
    pub fn count(&self, kind: SingularKind) -> usize {
        self.points.iter().filter(|p| p.kind == kind).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanConfig {
    pub grid_n: usize,
    pub tol_root: f64,
    pub tol_cluster: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            grid_n: 400,
            tol_root: TOL_ROOT,
            tol_cluster: TOL_CLUSTER,
        }
    }
}

struct GridValue {
    s: f64,
    kappa2: f64,
    b3: f64,
    cl1: Option<Vec3L>,
}

enum Refined {
    Root(f64),
    Warn(String),
}

fn refine<F>(f: F, lo: f64, hi: f64, tol: f64, what: &str) -> Refined
where
    F: Fn(f64) -> Result<f64>,
{
    match brent(&f, lo, hi, BRENT_X_TOL, BRENT_MAX_ITER) {
        Ok(r) if r.fx.abs() <= tol => Refined::Root(r.x),
        Ok(r) => Refined::Warn(format!(
            "{what}: sign change on [{lo}, {hi}] is not a root (|f| = {:e} at s = {}); pole?",
            r.fx.abs(),
            r.x
        )),
        Err(e) => Refined::Warn(format!("{what}: bracket [{lo}, {hi}] failed: {e}")),
    }
}

/// Locates and classifies the singular points of `f` over `s_range`.
pub fn scan_singularities(
    source: &dyn FrameSource,
    s_range: (f64, f64),
    cfg: &ScanConfig,
) -> Result<SingularReport> {
    let (lo, hi) = s_range;
    if !(lo < hi) {
        return Err(Error::Config(format!("empty range [{lo}, {hi}]")));
    }
    if cfg.grid_n < 16 {
        return Err(Error::Config(format!("grid_n must be >= 16, got {}", cfg.grid_n)));
    }
    let tol = cfg.tol_root;
    let grid = crate::surface::linspace(lo, hi, cfg.grid_n + 1);
    let evals: Vec<(GridValue, SingularPoint)> = grid
        .par_iter()
        .map(|&s| {
            let frame = source.frame_at(s)?;
            let point = classify_point(&frame, tol)?;
            let value = GridValue {
                s,
                kappa2: frame.kappa2.value(),
                b3: frame.b.value()[2],
                cl1: point.diagnostics.cl1,
            };
            Ok((value, point))
        })
        .collect::<Result<_>>()?;

    let mut residuals = ResidualSummary::default();
    for (_, p) in &evals {
        let d = &p.diagnostics;
        residuals.cl1_dual_max = residuals.cl1_dual_max.max(d.cl1_dual_discrepancy.unwrap_or(0.0));
        if d.kappa2.abs() > tol {
            residuals.cl1_e3_max = residuals.cl1_e3_max.max(d.cl1_e3_residual.unwrap_or(0.0));
        }
    }
    let curve = evals
        .iter()
        .map(|(_, p)| CurveSample {
            s: p.s,
            t: p.t,
            kind: p.kind,
        })
        .collect();

    let mut warnings = Vec::new();
    let mut roots: Vec<(f64, &'static str)> = Vec::new();
    let kappa2 = |s: f64| Ok(source.frame_at(s)?.kappa2.value());
    let b3 = |s: f64| Ok(source.frame_at(s)?.b.value()[2]);
    let vals: Vec<&GridValue> = evals.iter().map(|(v, _)| v).collect();

    for (i, w) in vals.windows(2).enumerate() {
        let (u, v) = (w[0], w[1]);
        // exact zeros on the grid that are isolated
        let isolated = |k: usize| {
            let z = |j: usize| vals[j].kappa2.abs() <= tol;
            z(k) && (k == 0 || !z(k - 1)) && (k + 1 == vals.len() || !z(k + 1))
        };
        if isolated(i) {
            roots.push((u.s, "kappa2"));
        }
        if i + 2 == vals.len() && isolated(i + 1) {
            roots.push((v.s, "kappa2"));
        }
        if u.kappa2 * v.kappa2 < 0.0 && u.kappa2.abs() > tol && v.kappa2.abs() > tol {
            match refine(kappa2, u.s, v.s, tol, "kappa2") {
                Refined::Root(x) => roots.push((x, "kappa2")),
                Refined::Warn(m) => warnings.push(m),
            }
        }
        if u.b3.abs() < UNBOUNDED_B3 {
            roots.push((u.s, "b3"));
        }
        if i + 2 == vals.len() && v.b3.abs() < UNBOUNDED_B3 {
            roots.push((v.s, "b3"));
        }
        if u.b3 * v.b3 < 0.0 && u.b3.abs() >= UNBOUNDED_B3 && v.b3.abs() >= UNBOUNDED_B3 {
            match refine(b3, u.s, v.s, UNBOUNDED_B3, "B3") {
                Refined::Root(x) => roots.push((x, "b3")),
                Refined::Warn(m) => warnings.push(m),
            }
        }
    }

    // candidates where c_L' ∥ e₃: both planar components of c_L' vanish
    let mut comp_roots: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
    for w in vals.windows(2) {
        let (u, v) = (w[0], w[1]);
        let (Some(cu), Some(cv)) = (u.cl1, v.cl1) else {
            continue;
        };
        if u.b3 * v.b3 <= 0.0 || u.kappa2 * v.kappa2 <= 0.0 {
            continue;
        }
        for (k, list) in comp_roots.iter_mut().enumerate() {
            if cu[k] * cv[k] < 0.0 {
                let comp = |s: f64| {
                    let f = source.frame_at(s)?;
                    Ok(cl_jets(&f)?.cl1[k])
                };
                match refine(comp, u.s, v.s, tol, if k == 0 { "cL1[1]" } else { "cL1[2]" }) {
                    Refined::Root(x) => list.push(x),
                    Refined::Warn(m) => warnings.push(m),
                }
            } else if cu[k] == 0.0 {
                list.push(u.s);
            }
        }
    }
    for &x in &comp_roots[0] {
        let Some(&y) = comp_roots[1]
            .iter()
            .filter(|y| (x - **y).abs() <= cfg.tol_cluster)
            .min_by(|p, q| (x - **p).abs().total_cmp(&(x - **q).abs()))
        else {
            continue;
        };
        let planar = |s: f64| -> Result<f64> {
            let c = cl_jets(&source.frame_at(s)?)?.cl1;
            Ok(c[0].abs().max(c[1].abs()))
        };
        let best = if planar(x)? <= planar(y)? { x } else { y };
        roots.push((best, "cl1"));
    }

    roots.sort_by(|a, b| a.0.total_cmp(&b.0));
    roots.dedup_by(|b, a| (a.0 - b.0).abs() <= cfg.tol_cluster);
    let mut points = Vec::with_capacity(roots.len());
    let mut unbounded = Vec::new();
    for (x, origin) in roots {
        if origin == "b3" {
            unbounded.push(x);
            continue;
        }
        let p = classify_point(&source.frame_at(x)?, tol)?;
        if origin == "cl1" && !matches!(p.kind, SingularKind::Swallowtail | SingularKind::FrontOther) {
            warnings.push(format!(
                "c_L' components vanish within {:e} of s = {x} but the point classifies as {}",
                cfg.tol_cluster, p.kind
            ));
        }
        points.push(p);
    }

    Ok(SingularReport {
        generator: source.describe(),
        mean_curvature: source.mean_curvature(),
        s_range,
        grid_n: cfg.grid_n,
        tol_root: tol,
        tol_cluster: cfg.tol_cluster,
        curve,
        points,
        unbounded,
        residuals,
        warnings,
    })
}

// ---- O(2,1) family --------------------------------------------------------

/// `(OA, OB, OC)` with curvatures unchanged. Rejects `det O = −1`, for which
/// `OA × OB = −OC`.
pub fn transform_frame(o: &LorentzTransform, frame: &NullFrame) -> Result<NullFrame> {
    let det = o.det();
    if det < 0.0 {
        return Err(Error::OrientationBreak { det });
    }
    Ok(NullFrame {
        a: o.apply_jet(&frame.a),
        b: o.apply_jet(&frame.b),
        c: o.apply_jet(&frame.c),
        ..frame.clone()
    })
}

/// Frames of `f^O`, the surface built from the transformed frame.
#[derive(Debug, Clone)]
pub struct TransformedSource<S> {
    pub inner: S,
    pub transform: LorentzTransform,
}

impl<S: FrameSource> TransformedSource<S> {
    pub fn new(inner: S, transform: LorentzTransform) -> Result<Self> {
        let det = transform.det();
        if det < 0.0 {
            return Err(Error::OrientationBreak { det });
        }
        Ok(TransformedSource { inner, transform })
    }
}

impl<S: FrameSource> FrameSource for TransformedSource<S> {
    fn frame_at(&self, s: f64) -> Result<NullFrame> {
        transform_frame(&self.transform, &self.inner.frame_at(s)?)
    }

    fn mean_curvature(&self) -> f64 {
        self.inner.mean_curvature()
    }

    fn describe(&self) -> String {
        format!("O·[{}]", self.inner.describe())
    }

    fn tangent_at(&self, s: f64) -> Result<Vec3L> {
        Ok(self.transform.apply(&self.inner.tangent_at(s)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvarianceEntry {
    pub s: f64,
    pub t: Option<f64>,
    pub t_transformed: Option<f64>,
    pub kind: SingularKind,
    pub kind_transformed: SingularKind,
    pub front_match: bool,
    pub ccr_match: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub transform: LorentzTransform,
    pub points: Vec<InvarianceEntry>,
    /// Grid samples where front status disagreed.
    pub front_mismatches: usize,
    pub samples: usize,
    pub kind_differences: usize,
}

impl InvarianceReport {
    pub fn preserved(&self) -> bool {
        self.front_mismatches == 0 && self.points.iter().all(|e| e.front_match && e.ccr_match)
    }
}

fn entry(p: &SingularPoint, q: &SingularPoint) -> InvarianceEntry {
    let ccr = |k: SingularKind| k == SingularKind::CuspidalCrossCap;
    InvarianceEntry {
        s: p.s,
        t: p.t,
        t_transformed: q.t,
        kind: p.kind,
        kind_transformed: q.kind,
        front_match: p.kind.is_front() == q.kind.is_front()
            || p.kind == SingularKind::Unbounded
            || q.kind == SingularKind::Unbounded,
        ccr_match: ccr(p.kind) == ccr(q.kind),
    }
}

/// Compares the classification of `f` and `f^O` at every singular point of
/// `f` and at every grid sample.
pub fn invariance_check(
    source: &dyn FrameSource,
    o: &LorentzTransform,
    s_range: (f64, f64),
    cfg: &ScanConfig,
) -> Result<InvarianceReport> {
    let transformed = TransformedSource::new(source, *o)?;
    let report = scan_singularities(source, s_range, cfg)?;
    let mut points = Vec::with_capacity(report.points.len());
    for p in &report.points {
        let q = classify_point(&transformed.frame_at(p.s)?, cfg.tol_root)?;
        points.push(entry(p, &q));
    }
    let samples: Vec<InvarianceEntry> = report
        .curve
        .par_iter()
        .map(|c| {
            let p = classify_point(&source.frame_at(c.s)?, cfg.tol_root)?;
            let q = classify_point(&transformed.frame_at(c.s)?, cfg.tol_root)?;
            Ok(entry(&p, &q))
        })
        .collect::<Result<_>>()?;
    let front_mismatches = samples.iter().filter(|e| !e.front_match).count();
    let kind_differences = points.iter().filter(|e| e.kind != e.kind_transformed).count();
    Ok(InvarianceReport {
        transform: *o,
        points,
        front_mismatches,
        samples: samples.len(),
        kind_differences,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NotceSolution {
    pub transform: LorentzTransform,
    pub r1: f64,
    pub r2: f64,
    pub iterations: usize,
}

const NOTCE_TOL: f64 = 1e-8;

fn notce_at(frame: &NullFrame, p: &[f64; 3]) -> [f64; 2] {
    let o = LorentzTransform::from_params(LorentzParams {
        phi: p[0],
        chi: p[1],
        psi: p[2],
        ..Default::default()
    });
    let [a, b, c] = frame.values().map(|v| o.apply(&v));
    let (r1, r2) = notce_residuals(&a, &b, &c, frame.kappa2.value(), frame.mean_curvature);
    [r1, r2]
}

fn norm2(r: &[f64; 2]) -> f64 {
    r[0].hypot(r[1])
}

/// Damped Gauss–Newton with a minimum-norm step for 2 equations in 3
/// unknowns, Levenberg-regularized so rank-deficient Jacobians are harmless.
fn newton(frame: &NullFrame, start: [f64; 3], max_iter: usize) -> ([f64; 3], [f64; 2], usize) {
    let mut p = start;
    let mut r = notce_at(frame, &p);
    for it in 0..max_iter {
        if norm2(&r) < 1e-15 {
            return (p, r, it);
        }
        let h = 1e-7;
        let mut jac = [[0.0; 3]; 2];
        for k in 0..3 {
            let (mut pp, mut pm) = (p, p);
            pp[k] += h;
            pm[k] -= h;
            let (rp, rm) = (notce_at(frame, &pp), notce_at(frame, &pm));
            for i in 0..2 {
                jac[i][k] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        // (J Jᵀ + μI) y = r, step = −Jᵀ y
        let mu = 1e-14 * (1.0 + jac.iter().flatten().map(|x| x * x).sum::<f64>());
        let g = |i: usize, j: usize| (0..3).map(|k| jac[i][k] * jac[j][k]).sum::<f64>();
        let (a11, a12, a22) = (g(0, 0) + mu, g(0, 1), g(1, 1) + mu);
        let d = a11 * a22 - a12 * a12;
        let y = [(a22 * r[0] - a12 * r[1]) / d, (a11 * r[1] - a12 * r[0]) / d];
        let step: [f64; 3] = std::array::from_fn(|k| -(jac[0][k] * y[0] + jac[1][k] * y[1]));
        let mut lambda = 1.0;
        let mut improved = false;
        while lambda > 1e-6 {
            let q: [f64; 3] = std::array::from_fn(|k| p[k] + lambda * step[k]);
            let rq = notce_at(frame, &q);
            if norm2(&rq) < norm2(&r) {
                p = q;
                r = rq;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if !improved {
            return (p, r, it);
        }
    }
    (p, r, max_iter)
}

/// An orientation- and time-orientation-preserving `O` for which the
/// transformed frame satisfies `r1 = r2 = 0` at `frame.s`, so `f^O` has a
/// non-cuspidal-edge front singularity there. Requires `κ₂/H > 0`.
pub fn find_notce_transform(frame: &NullFrame) -> Result<NotceSolution> {
    let ratio = frame.kappa2.value() / frame.mean_curvature;
    if !(ratio > 0.0) {
        return Err(Error::Precondition(format!("need kappa2/H > 0, got {ratio}")));
    }
    let identity = notce_at(frame, &[0.0; 3]);
    if identity[0].abs() < NOTCE_TOL && identity[1].abs() < NOTCE_TOL {
        return Ok(NotceSolution {
            transform: LorentzTransform::identity(),
            r1: identity[0],
            r2: identity[1],
            iterations: 0,
        });
    }
    let pi = std::f64::consts::PI;
    let mut starts: Vec<([f64; 3], f64)> = Vec::new();
    for i in 0..16 {
        for j in 0..13 {
            for k in 0..16 {
                let p = [
                    -pi + 2.0 * pi * i as f64 / 16.0,
                    -3.0 + 0.5 * j as f64,
                    -pi + 2.0 * pi * k as f64 / 16.0,
                ];
                starts.push((p, norm2(&notce_at(frame, &p))));
            }
        }
    }
    starts.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut best = ([0.0; 3], identity, 0);
    for (p, _) in starts.iter().take(8) {
        let (q, r, it) = newton(frame, *p, 100);
        if norm2(&r) < norm2(&best.1) {
            best = (q, r, it);
        }
        if r[0].abs() < NOTCE_TOL * 1e-4 && r[1].abs() < NOTCE_TOL * 1e-4 {
            break;
        }
    }
    let (p, r, iterations) = best;
    if r[0].abs() < NOTCE_TOL && r[1].abs() < NOTCE_TOL {
        Ok(NotceSolution {
            transform: LorentzTransform::from_params(LorentzParams {
                phi: p[0],
                chi: p[1],
                psi: p[2],
                ..Default::default()
            }),
            r1: r[0],
            r2: r[1],
            iterations,
        })
    } else {
        Err(Error::NoSolutionFound { r1: r[0], r2: r[1] })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::GeneratorFrames;

    fn frame(h: &str, hh: f64, s: f64) -> NullFrame {
        GeneratorFrames::new(h, hh).unwrap().frame_at(s).unwrap()
    }

    fn s_plus() -> f64 {
        0.25 * (5.0 + 2.0 * 6f64.sqrt()).ln()
    }

    #[test]
    fn singular_t_tanh() {
        assert_eq!(singular_t(&frame("tanh(s)", 1.0, 0.0)), None);
        let t = singular_t(&frame("tanh(s)", 1.0, 0.5)).unwrap();
        assert!((t + 2.0 / 1f64.tanh()).abs() < 1e-12);
    }

    #[test]
    fn swallowtail_jets() {
        let sq2 = 2f64.sqrt();
        for (s, sign) in [(s_plus(), 1.0), (0.25 * (5.0 - 2.0 * 6f64.sqrt()).ln(), -1.0)] {
            let j = cl_jets(&frame("tanh(s)", 1.0, s)).unwrap();
            assert!((j.cl1 - Vec3L::new(0.0, 0.0, sign * sq2)).max_abs() < 1e-8);
            let want = Vec3L::new(-sign * 6.0 * sq2, sign * 2.0 * 6f64.sqrt(), 2.0 * 3f64.sqrt());
            assert!((j.cl2 - want).max_abs() < 1e-6, "{:?}", j.cl2);
            assert!(j.dual_discrepancy() < 1e-9);
        }
    }

    #[test]
    fn classify_examples() {
        let r = 1.0 / 6f64.sqrt();
        for hh in [1.0, -1.0, 0.5] {
            for s in [r, -r] {
                let p = classify_point(&frame("s + s^3", hh, s), TOL_ROOT).unwrap();
                assert_eq!(p.kind, SingularKind::CuspidalCrossCap);
            }
        }
        let p = classify_point(&frame("tanh(s)", 1.0, s_plus()), TOL_ROOT).unwrap();
        assert_eq!(p.kind, SingularKind::Swallowtail);
        let p = classify_point(&frame("tanh(s)", 1.0, 0.2), TOL_ROOT).unwrap();
        assert_eq!(p.kind, SingularKind::CuspidalEdge);
        let p = classify_point(&frame("tanh(s)", 1.0, 0.0), TOL_ROOT).unwrap();
        assert_eq!(p.kind, SingularKind::Unbounded);
        let p = classify_point(&frame("s", 1.0, 0.3), TOL_ROOT).unwrap();
        assert_eq!(p.kind, SingularKind::NonFrontDegenerate);
    }

    #[test]
    fn scan_cubic() {
        let src = GeneratorFrames::new("s + s^3", 1.0).unwrap();
        let rep = scan_singularities(&src, (-1.0, 1.0), &ScanConfig::default()).unwrap();
        let ccr: Vec<f64> = rep
            .points
            .iter()
            .filter(|p| p.kind == SingularKind::CuspidalCrossCap)
            .map(|p| p.s)
            .collect();
        assert_eq!(ccr.len(), 2, "{:?}", rep.points);
        assert!((ccr[0] + 1.0 / 6f64.sqrt()).abs() < 1e-10);
        assert!((ccr[1] - 1.0 / 6f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn scan_tanh_swallowtail() {
        let src = GeneratorFrames::new("tanh(s)", 1.0).unwrap();
        let rep = scan_singularities(&src, (0.1, 1.0), &ScanConfig::default()).unwrap();
        assert_eq!(rep.points.len(), 1, "{:?}", rep.points);
        assert_eq!(rep.points[0].kind, SingularKind::Swallowtail);
        assert!((rep.points[0].s - s_plus()).abs() < 1e-8);
        assert!(rep.warnings.is_empty(), "{:?}", rep.warnings);
    }

    #[test]
    fn reflection_breaks_orientation() {
        let o = LorentzTransform::from_params(LorentzParams {
            reflection: true,
            ..Default::default()
        });
        assert!(matches!(
            transform_frame(&o, &frame("tanh(s)", 1.0, 0.3)),
            Err(Error::OrientationBreak { .. })
        ));
    }

    #[test]
    fn notce_search() {
        let f = frame("tanh(s)", 1.0, 0.0);
        let sol = find_notce_transform(&f).unwrap();
        assert!(sol.r1.abs() < 1e-8 && sol.r2.abs() < 1e-8);
        let p = classify_point(&transform_frame(&sol.transform, &f).unwrap(), TOL_ROOT).unwrap();
        assert!(
            matches!(p.kind, SingularKind::Swallowtail | SingularKind::FrontOther),
            "{p:?}"
        );
        let at_plus = find_notce_transform(&frame("tanh(s)", 1.0, s_plus())).unwrap();
        assert_eq!(at_plus.iterations, 0);
        assert!(matches!(
            find_notce_transform(&frame("tan(s)", 1.0, 0.3)),
            Err(Error::Precondition(_))
        ));
    }
}
