//! Invariant checks over a sampled B-scroll, collected into one report.

use serde::Serialize;

use crate::error::Result;
use crate::frame::{kappa2_recovery_residual, validate_frame, FrameSource, NullFrame};
use crate::integrator::IntegratorConfig;
use crate::lorentz::Vec3L;
use crate::singularity::{scan_singularities, singular_t, ScanConfig, SingularKind};
use crate::surface::{
    box_residual, bscroll_jacobian, forms_from, fundamental_forms, gauss_map_l, linspace,
    nil3_normal_gauss_map, normal_gauss_map, BScroll, Sym2,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparator {
    /// Passes when `residual <= tolerance`.
    AtMost,
    /// Passes when `residual >= tolerance`.
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub comparator: Comparator,
    pub pass: bool,
    pub samples: usize,
}

impl Check {
    pub fn at_most(name: &str, residual: f64, tolerance: f64, samples: usize) -> Check {
        Check {
            name: name.to_string(),
            residual,
            tolerance,
            comparator: Comparator::AtMost,
            pass: residual <= tolerance,
            samples,
        }
    }

    pub fn at_least(name: &str, residual: f64, tolerance: f64, samples: usize) -> Check {
        Check {
            name: name.to_string(),
            residual,
            tolerance,
            comparator: Comparator::AtLeast,
            pass: residual >= tolerance,
            samples,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub s_range: (f64, f64),
    pub t_range: (f64, f64),
    pub s0: f64,
    pub samples_s: usize,
    pub samples_t: usize,
    /// Step for the d'Alembertian check.
    pub fd_step: f64,
    /// Step and tolerance for the finite-difference cross-checks.
    pub fd_oracle_step: f64,
    pub fd_tol: f64,
    pub tol_root: f64,
    pub scan_grid: usize,
    pub integrator: IntegratorConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            s_range: (-1.0, 1.0),
            t_range: (-2.0, 2.0),
            s0: 0.0,
            samples_s: 21,
            samples_t: 9,
            fd_step: 1e-3,
            fd_oracle_step: 1e-4,
            fd_tol: 1e-6,
            tol_root: crate::singularity::TOL_ROOT,
            scan_grid: 400,
            integrator: IntegratorConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub generator: String,
    pub mean_curvature: f64,
    pub s_range: (f64, f64),
    pub t_range: (f64, f64),
    pub checks: Vec<Check>,
    /// `"-2H^2"` or `"+2H^2"`: which right-hand side of `□N_L = ±2H²N_L`
    /// matched; `"mixed"` if samples disagreed, `null` when not applicable.
    pub box_sign: Option<String>,
    pub singular_kinds: Vec<(SingularKind, usize)>,
    pub warnings: Vec<String>,
    pub all_pass: bool,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

#[derive(Default)]
struct Max {
    value: f64,
    n: usize,
}

impl Max {
    fn add(&mut self, v: f64) {
        self.value = if v.is_nan() { f64::NAN } else { self.value.max(v) };
        self.n += 1;
    }
}

fn rel(v: f64, scale: f64) -> f64 {
    v.abs() / (1.0 + scale)
}

/// Central-difference first and second fundamental forms.
fn forms_fd<S: FrameSource>(sc: &BScroll<S>, s: f64, t: f64, d: f64) -> Result<Sym2x2> {
    let hh = sc.mean_curvature();
    let (fm, fp) = (sc.frame_at(s - d)?, sc.frame_at(s + d)?);
    let f0 = sc.frame_at(s)?;
    let point = |f: &NullFrame, t: f64| -> Result<Vec3L> { Ok(sc.path.dense_eval(f.s)?.0 + f.b.value() * t) };
    let normal = |f: &NullFrame, t: f64| -> Vec3L { -(f.c.value() + f.b.value() * (t * hh)) };
    let inv = 1.0 / (2.0 * d);
    let fs = (point(&fp, t)? - point(&fm, t)?) * inv;
    let ft = (point(&f0, t + d)? - point(&f0, t - d)?) * inv;
    let ns = (normal(&fp, t) - normal(&fm, t)) * inv;
    let nt = (normal(&f0, t + d) - normal(&f0, t - d)) * inv;
    let df = [fs, ft];
    let dn = [ns, nt];
    let first: Sym2 = std::array::from_fn(|i| std::array::from_fn(|j| df[i].mdot(&df[j])));
    let second: Sym2 = std::array::from_fn(|i| std::array::from_fn(|j| -df[i].mdot(&dn[j])));
    Ok([first, second])
}

type Sym2x2 = [Sym2; 2];

fn sym_diff(a: &Sym2, b: &Sym2) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            m = m.max(rel(a[i][j] - b[i][j], a[i][j].abs()));
        }
    }
    m
}

/// Runs every invariant check on the B-scroll built from `source`.
pub fn run_suite(source: &dyn FrameSource, cfg: &VerifyConfig) -> Result<VerifyReport> {
    let hh = source.mean_curvature();
    let sc = BScroll::new(source, cfg.s0, cfg.s_range, &cfg.integrator)?;
    let fine = BScroll::new(
        source,
        cfg.s0,
        cfg.s_range,
        &cfg.integrator.scaled_tolerances(0.01),
    )?;
    let (lo, hi) = cfg.s_range;
    let margin = 4.0 * cfg.fd_step.max(cfg.fd_oracle_step);
    let s_values = linspace(lo + margin, hi - margin, cfg.samples_s);
    let t_values = linspace(cfg.t_range.0, cfg.t_range.1, cfg.samples_t);
    let frames: Vec<NullFrame> = s_values
        .iter()
        .map(|&s| source.frame_at(s))
        .collect::<Result<_>>()?;
    let flat_kappa1 = frames
        .iter()
        .all(|f| f.kappa1.derivatives().iter().all(|&x| x == 0.0));

    let mut checks = Vec::new();
    let mut warnings = Vec::new();

    // frame
    let (mut alg, mut fs, mut arc, mut rec) =
        (Max::default(), Max::default(), Max::default(), Max::default());
    for f in &frames {
        let r = validate_frame(f);
        alg.add(r.algebraic_max());
        fs.add(r.frenet_max());
        let db = f.b.derivative(1);
        arc.add(rel(db.mdot(&db) - hh * hh, hh * hh));
        rec.add(kappa2_recovery_residual(f));
    }
    checks.push(Check::at_most("frame.algebraic", alg.value, 1e-9, alg.n));
    checks.push(Check::at_most("frame.frenet_serret", fs.value, 1e-8, fs.n));
    checks.push(Check::at_most("frame.b_pseudo_arclength", arc.value, 1e-8, arc.n));
    if flat_kappa1 {
        checks.push(Check::at_most("frame.kappa2_recovery", rec.value, 1e-6, rec.n));
    }

    // base curve
    let mut null = Max::default();
    for c in sc.path.samples() {
        let a = c.gamma_prime;
        null.add(rel(a.mdot(&a), a.coord_norm().powi(2)));
    }
    checks.push(Check::at_most("curve.null_tangent", null.value, 1e-12, null.n));
    let mut conv = Max::default();
    for &s in &linspace(lo, hi, 4 * cfg.samples_s + 1) {
        let (g1, j1) = sc.path.dense_eval(s)?;
        let (g2, j2) = fine.path.dense_eval(s)?;
        conv.add(rel(
            (g1 - g2).max_abs().max((j1 - j2).abs()),
            g2.max_abs().max(j2.abs()),
        ));
    }
    checks.push(Check::at_most("curve.refinement", conv.value, 1e-8, conv.n));

    // surface
    let (mut unit, mut orth, mut first, mut hm, mut kg) = (
        Max::default(),
        Max::default(),
        Max::default(),
        Max::default(),
        Max::default(),
    );
    let (mut fd_forms, mut fd_nil, mut gshare) = (Max::default(), Max::default(), Max::default());
    let (mut boxm, mut signs) = (Max::default(), (0usize, 0usize));
    for f in &frames {
        let k1 = f.kappa1.value();
        for &t in &t_values {
            let n = gauss_map_l(f, t);
            unit.add(rel(n.mdot(&n) - 1.0, n.coord_norm().powi(2)));
            let [ds, dt] = bscroll_jacobian(f, t);
            let scale = n.coord_norm() * ds.coord_norm().max(dt.coord_norm());
            orth.add(rel(n.mdot(&ds), scale).max(rel(n.mdot(&dt), scale)));
            let ff = fundamental_forms(f, t);
            let want = [[2.0 * t * k1 + t * t * hh * hh, -1.0], [-1.0, 0.0]];
            first.add(sym_diff(&ff.first, &want));
            hm.add(rel(ff.mean_curvature - hh, hh.abs()));
            kg.add(rel(ff.gauss_curvature - hh * hh, hh * hh));

            let [fd1, fd2] = forms_fd(&sc, f.s, t, cfg.fd_oracle_step)?;
            let fdf = forms_from(fd1, fd2);
            fd_forms.add(sym_diff(&ff.first, &fd1).max(sym_diff(&ff.second, &fd2)));
            fd_forms.add(rel(fdf.mean_curvature - hh, hh.abs()));

            let d = cfg.fd_oracle_step;
            let sample = sc.sample_frame(f, t)?;
            let (fm, fp) = (sc.sample(f.s - d, t)?, sc.sample(f.s + d, t)?);
            let (tm, tp) = (sc.sample_frame(f, t - d)?, sc.sample_frame(f, t + d)?);
            let ds_fd = (fp.f_nil - fm.f_nil) * (0.5 / d);
            let dt_fd = (tp.f_nil - tm.f_nil) * (0.5 / d);
            fd_nil.add(
                rel((ds_fd - sample.df[0]).max_abs(), sample.df[0].max_abs())
                    .max(rel((dt_fd - sample.df[1]).max_abs(), sample.df[1].max_abs())),
            );

            let metrics = sc.jacobian_metrics(f.s, t)?;
            if metrics.sigma_min > 1e-3 {
                if let (Ok(g), Ok(g2)) = (normal_gauss_map(&n), nil3_normal_gauss_map(f, &sc.path, t)) {
                    let scale = g.re.abs().max(g.im.abs());
                    gshare.add(rel((g.re - g2.re).abs().max((g.im - g2.im).abs()), scale));
                }
            }

            if flat_kappa1 {
                let b = box_residual(source, f.s, t, cfg.fd_step)?;
                boxm.add(b.residual / (1.0 + hh * hh));
                if b.sign < 0 {
                    signs.1 += 1;
                } else {
                    signs.0 += 1;
                }
            }
        }
    }
    checks.push(Check::at_most(
        "surface.gauss_map_unit",
        unit.value,
        1e-10,
        unit.n,
    ));
    checks.push(Check::at_most(
        "surface.gauss_map_orthogonal",
        orth.value,
        1e-9,
        orth.n,
    ));
    checks.push(Check::at_most("surface.first_form", first.value, 1e-9, first.n));
    checks.push(Check::at_most("surface.mean_curvature", hm.value, 1e-10, hm.n));
    checks.push(Check::at_most("surface.gauss_curvature", kg.value, 1e-10, kg.n));
    checks.push(Check::at_most(
        "surface.forms_fd",
        fd_forms.value,
        cfg.fd_tol,
        fd_forms.n,
    ));
    checks.push(Check::at_most(
        "surface.nil3_jacobian_fd",
        fd_nil.value,
        cfg.fd_tol,
        fd_nil.n,
    ));
    checks.push(Check::at_most(
        "surface.shared_gauss_map",
        gshare.value,
        1e-8,
        gshare.n,
    ));
    let box_sign = if flat_kappa1 {
        checks.push(Check::at_most("surface.box_residual", boxm.value, 1e-4, boxm.n));
        checks.push(Check::at_most(
            "surface.box_sign_consistent",
            signs.0.min(signs.1) as f64,
            0.0,
            boxm.n,
        ));
        Some(match signs {
            (0, _) => "-2H^2".to_string(),
            (_, 0) => "+2H^2".to_string(),
            _ => "mixed".to_string(),
        })
    } else {
        warnings.push("kappa1 is not identically zero: d'Alembertian check skipped".into());
        None
    };

    // singular curve
    let (mut on_sigma, mut rank, mut gmod, mut nondeg) = (
        Max::default(),
        Max::default(),
        Max::default(),
        Max {
            value: f64::INFINITY,
            n: 0,
        },
    );
    for f in &frames {
        let Some(t) = singular_t(f) else { continue };
        let n = gauss_map_l(f, t);
        on_sigma.add(rel(n[2], n.coord_norm()));
        let b3 = f.b.value()[2];
        nondeg.value = nondeg.value.min((hh * b3).abs());
        nondeg.n += 1;
        if b3.abs() > 0.05 {
            let m = sc.jacobian_metrics(f.s, t)?;
            rank.add(m.sigma_min);
            if let Ok(g) = normal_gauss_map(&n) {
                gmod.add((g.sqmod() - 1.0).abs());
            }
        }
    }
    checks.push(Check::at_most(
        "singular.on_sigma",
        on_sigma.value,
        1e-12,
        on_sigma.n,
    ));
    checks.push(Check::at_most("singular.rank_drop", rank.value, 1e-6, rank.n));
    checks.push(Check::at_most("singular.g_modulus", gmod.value, 1e-8, gmod.n));
    if nondeg.n > 0 {
        checks.push(Check::at_least(
            "singular.non_degenerate",
            nondeg.value,
            cfg.tol_root,
            nondeg.n,
        ));
    }

    let scan_cfg = ScanConfig {
        grid_n: cfg.scan_grid,
        tol_root: cfg.tol_root,
        ..Default::default()
    };
    let mut singular_kinds = Vec::new();
    match scan_singularities(source, cfg.s_range, &scan_cfg) {
        Ok(rep) => {
            let n = rep.curve.len();
            checks.push(Check::at_most(
                "singular.cl1_dual",
                rep.residuals.cl1_dual_max,
                1e-9,
                n,
            ));
            checks.push(Check::at_most(
                "singular.cl1_e3",
                rep.residuals.cl1_e3_max,
                1e-10,
                n,
            ));
            checks.push(Check::at_most("singular.classifier_consistent", 0.0, 0.0, n));
            let mut non_ce = Max::default();
            for p in &rep.points {
                if matches!(p.kind, SingularKind::Swallowtail | SingularKind::FrontOther) {
                    non_ce.add(p.diagnostics.s_h.max(0.0));
                }
            }
            checks.push(Check::at_most(
                "singular.non_ce_sign",
                non_ce.value,
                0.0,
                non_ce.n,
            ));
            let mut kinds: Vec<SingularKind> = rep.curve.iter().map(|c| c.kind).collect();
            kinds.extend(rep.points.iter().map(|p| p.kind));
            kinds.sort();
            for k in kinds {
                match singular_kinds.last_mut() {
                    Some((last, count)) if *last == k => *count += 1,
                    _ => singular_kinds.push((k, 1)),
                }
            }
            warnings.extend(rep.warnings);
        }
        Err(e @ crate::error::Error::ClassifierInconsistency { .. }) => {
            checks.push(Check::at_most("singular.classifier_consistent", 1.0, 0.0, 0));
            warnings.push(e.to_string());
        }
        Err(e) => return Err(e),
    }

    let all_pass = checks.iter().all(|c| c.pass);
    Ok(VerifyReport {
        generator: source.describe(),
        mean_curvature: hh,
        s_range: cfg.s_range,
        t_range: cfg.t_range,
        checks,
        box_sign,
        singular_kinds,
        warnings,
        all_pass,
    })
}
