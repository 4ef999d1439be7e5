use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use bscroll_core::singularity::{ResidualSummary, TOL_CLUSTER};
use bscroll_core::surface::linspace;
use bscroll_core::verify::Comparator;
use bscroll_core::{
    classify_point, find_notce_transform, frame_flow_from_curvatures, frame_from_initial_values,
    invariance_check, parse, run_suite, scan_singularities, transform_frame, validate_frame, BScroll,
    FrameSource, GeneratorFrames, IntegratorConfig, InvarianceReport, LorentzParams, LorentzTransform,
    NotceSolution, NullFrame, ScanConfig, SingularKind, SingularPoint, Vec3L, VerifyConfig,
};
use serde::Serialize;

use crate::io;
use crate::{FamilyArgs, FrameArgs, SingularArgs, SurfaceArgs, Target, VerifyArgs};

pub enum Status {
    Ok,
    ChecksFailed,
}

/// Base point of the curve integration: 0 when inside the range.
fn base_point((lo, hi): (f64, f64)) -> f64 {
    if lo <= 0.0 && 0.0 <= hi {
        0.0
    } else {
        lo
    }
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

#[derive(Serialize)]
struct SurfaceSummary {
    generator: String,
    #[serde(rename = "H")]
    mean_curvature: f64,
    s_range: (f64, f64),
    t_range: (f64, f64),
    grid: (usize, usize),
    files: Vec<String>,
    vertices: usize,
    faces: usize,
}

pub fn surface(args: &SurfaceArgs) -> Result<Status> {
    let g = &args.gen;
    let source = GeneratorFrames::new(&g.h, g.mean_curvature)?;
    let sc = BScroll::new(
        source,
        base_point(g.s_range),
        g.s_range,
        &IntegratorConfig::default(),
    )?;
    let (ns, nt) = args.grid;
    let samples = sc.grid(
        &linspace(g.s_range.0, g.s_range.1, ns),
        &linspace(args.t_range.0, args.t_range.1, nt),
    )?;
    let mut files = Vec::new();
    let mut write = |suffix: &str, pick: fn(&bscroll_core::SurfaceSample) -> Vec3L| -> Result<()> {
        let path = with_suffix(&args.out, suffix);
        let verts: Vec<Vec3L> = samples.iter().map(pick).collect();
        io::write_obj(&path, &verts, ns, nt)?;
        files.push(path.display().to_string());
        Ok(())
    };
    if matches!(args.target, Target::L3 | Target::Both) {
        write("_l3.obj", |p| p.f_l)?;
    }
    if matches!(args.target, Target::Nil3 | Target::Both) {
        write("_nil3.obj", |p| p.f_nil)?;
    }
    let summary = SurfaceSummary {
        generator: g.h.clone(),
        mean_curvature: g.mean_curvature,
        s_range: g.s_range,
        t_range: args.t_range,
        grid: args.grid,
        files,
        vertices: ns * nt,
        faces: (ns - 1) * (nt - 1),
    };
    io::emit_json(&summary, args.report.as_deref())?;
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct SingularJson {
    generator: String,
    #[serde(rename = "H")]
    mean_curvature: f64,
    s_range: (f64, f64),
    grid_n: usize,
    tol_root: f64,
    tol_cluster: f64,
    points: Vec<SingularPoint>,
    counts: BTreeMap<SingularKind, usize>,
    unbounded: Vec<f64>,
    residuals: ResidualSummary,
    warnings: Vec<String>,
    curve_csv_path: String,
}

pub fn singular(args: &SingularArgs) -> Result<Status> {
    let g = &args.gen;
    let source = GeneratorFrames::new(&g.h, g.mean_curvature)?;
    let cfg = ScanConfig {
        grid_n: args.scan_grid,
        tol_root: args.tol_root,
        tol_cluster: TOL_CLUSTER,
    };
    let rep = scan_singularities(&source, g.s_range, &cfg)?;
    let csv_path = with_suffix(&args.out, "_curve.csv");
    let rows: Vec<(f64, Option<f64>)> = rep.curve.iter().map(|c| (c.s, c.t)).collect();
    io::write_curve_csv(&csv_path, &rows)?;
    let mut counts = BTreeMap::new();
    for p in &rep.points {
        *counts.entry(p.kind).or_insert(0) += 1;
    }
    let out = SingularJson {
        generator: g.h.clone(),
        mean_curvature: g.mean_curvature,
        s_range: rep.s_range,
        grid_n: rep.grid_n,
        tol_root: rep.tol_root,
        tol_cluster: rep.tol_cluster,
        points: rep.points,
        counts,
        unbounded: rep.unbounded,
        residuals: rep.residuals,
        warnings: rep.warnings,
        curve_csv_path: csv_path.display().to_string(),
    };
    io::emit_json(&out, args.report.as_deref())?;
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct CheckJson {
    residual: f64,
    tolerance: f64,
    comparator: Comparator,
    pass: bool,
    samples: usize,
}

#[derive(Serialize)]
struct VerifyJson {
    generator: String,
    #[serde(rename = "H")]
    mean_curvature: f64,
    s_range: (f64, f64),
    t_range: (f64, f64),
    checks: BTreeMap<String, CheckJson>,
    failures: Vec<String>,
    box_sign: Option<String>,
    singular_kinds: BTreeMap<SingularKind, usize>,
    warnings: Vec<String>,
    all_pass: bool,
}

pub fn verify(args: &VerifyArgs) -> Result<Status> {
    let g = &args.gen;
    let source = GeneratorFrames::new(&g.h, g.mean_curvature)?;
    let cfg = VerifyConfig {
        s_range: g.s_range,
        t_range: args.t_range,
        s0: base_point(g.s_range),
        samples_s: args.grid.0,
        samples_t: args.grid.1,
        fd_step: args.fd_step,
        fd_tol: args.fd_tol,
        tol_root: args.tol_root,
        ..VerifyConfig::default()
    };
    let rep = run_suite(&source, &cfg)?;
    let checks = rep
        .checks
        .iter()
        .map(|c| {
            let entry = CheckJson {
                residual: c.residual,
                tolerance: c.tolerance,
                comparator: c.comparator,
                pass: c.pass,
                samples: c.samples,
            };
            (c.name.to_string(), entry)
        })
        .collect();
    let out = VerifyJson {
        generator: rep.generator.clone(),
        mean_curvature: rep.mean_curvature,
        s_range: rep.s_range,
        t_range: rep.t_range,
        checks,
        failures: rep.failures().map(|c| c.name.to_string()).collect(),
        box_sign: rep.box_sign.clone(),
        singular_kinds: rep.singular_kinds.iter().copied().collect(),
        warnings: rep.warnings.clone(),
        all_pass: rep.all_pass,
    };
    io::emit_json(&out, args.report.as_deref())?;
    Ok(if rep.all_pass {
        Status::Ok
    } else {
        Status::ChecksFailed
    })
}

#[derive(Serialize)]
struct FrameSampleJson {
    s: f64,
    a: Vec3L,
    b: Vec3L,
    c: Vec3L,
    kappa1: f64,
    kappa2: f64,
    algebraic_residual: f64,
    frenet_residual: f64,
}

#[derive(Serialize)]
struct FrameJson {
    source: String,
    #[serde(rename = "H")]
    mean_curvature: f64,
    s_range: (f64, f64),
    samples: Vec<FrameSampleJson>,
}

fn frame_sample(f: &NullFrame) -> FrameSampleJson {
    let r = validate_frame(f);
    let [a, b, c] = f.values();
    FrameSampleJson {
        s: f.s,
        a,
        b,
        c,
        kappa1: f.kappa1.value(),
        kappa2: f.kappa2.value(),
        algebraic_residual: r.algebraic_max(),
        frenet_residual: r.frenet_max(),
    }
}

pub fn frame(args: &FrameArgs) -> Result<Status> {
    if args.samples < 2 {
        bail!(bscroll_core::Error::Config(format!(
            "need at least 2 samples, got {}",
            args.samples
        )));
    }
    let (lo, hi) = args.s_range;
    let s_values = linspace(lo, hi, args.samples);
    let hh = args.mean_curvature;
    let s0 = args.s.unwrap_or(base_point(args.s_range));
    let (source, frames): (String, Vec<NullFrame>) = match (&args.kappa2, &args.h) {
        (Some(k2_text), _) => {
            let k1 = parse(&args.kappa1)?;
            let k2 = parse(k2_text)?;
            let init = match (&args.init_frame, &args.h) {
                (Some(v), _) => {
                    let vals: [f64; 9] = v.as_slice().try_into().map_err(|_| {
                        bscroll_core::Error::InitFrame(format!("expected 9 numbers, got {}", v.len()))
                    })?;
                    frame_from_initial_values(s0, vals, &k1, &k2, hh)?
                }
                (None, Some(h)) => {
                    let f = GeneratorFrames::new(h, hh)?.frame_at(s0)?;
                    frame_from_initial_values(s0, pack(&f.values()), &k1, &k2, hh)?
                }
                (None, None) => bail!(bscroll_core::Error::Config(
                    "--kappa2 needs --init-frame or --h for the initial frame".into()
                )),
            };
            let flow =
                frame_flow_from_curvatures(&k1, &k2, hh, &init, args.s_range, &IntegratorConfig::default())?;
            let frames = s_values
                .iter()
                .map(|&s| flow.frame_at(s))
                .collect::<Result<_, _>>()?;
            (flow.describe(), frames)
        }
        (None, Some(h)) => {
            let src = GeneratorFrames::new(h, hh)?;
            let frames = s_values
                .iter()
                .map(|&s| src.frame_at(s))
                .collect::<Result<_, _>>()?;
            (src.describe(), frames)
        }
        (None, None) => bail!(bscroll_core::Error::Config("give --h or --kappa2".into())),
    };
    let out = FrameJson {
        source,
        mean_curvature: hh,
        s_range: args.s_range,
        samples: frames.iter().map(frame_sample).collect(),
    };
    io::emit_json(&out, args.report.as_deref())?;
    Ok(Status::Ok)
}

fn pack(v: &[Vec3L; 3]) -> [f64; 9] {
    std::array::from_fn(|i| v[i / 3][i % 3])
}

#[derive(Serialize)]
struct NotceJson {
    s: f64,
    solution: NotceSolution,
    before: SingularPoint,
    after: SingularPoint,
}

#[derive(Serialize)]
struct FamilyJson {
    generator: String,
    #[serde(rename = "H")]
    mean_curvature: f64,
    s_range: (f64, f64),
    invariance: Option<InvarianceReport>,
    notce: Option<NotceJson>,
}

pub fn family(args: &FamilyArgs) -> Result<Status> {
    let g = &args.gen;
    if args.boost.is_none() && args.rot.is_none() && !args.find_notce {
        bail!(bscroll_core::Error::Config(
            "give --boost, --rot or --find-notce".into()
        ));
    }
    let source = GeneratorFrames::new(&g.h, g.mean_curvature)?;
    let cfg = ScanConfig {
        grid_n: args.scan_grid,
        tol_root: args.tol_root,
        tol_cluster: TOL_CLUSTER,
    };
    let invariance = if args.boost.is_some() || args.rot.is_some() {
        let o = LorentzTransform::from_params(LorentzParams {
            phi: args.rot.unwrap_or(0.0),
            chi: args.boost.unwrap_or(0.0),
            ..Default::default()
        });
        Some(invariance_check(&source, &o, g.s_range, &cfg)?)
    } else {
        None
    };
    let notce = if args.find_notce {
        let f = source.frame_at(args.s)?;
        let solution = find_notce_transform(&f)?;
        let before = classify_point(&f, args.tol_root)?;
        let after = classify_point(&transform_frame(&solution.transform, &f)?, args.tol_root)?;
        Some(NotceJson {
            s: args.s,
            solution,
            before,
            after,
        })
    } else {
        None
    };
    let out = FamilyJson {
        generator: g.h.clone(),
        mean_curvature: g.mean_curvature,
        s_range: g.s_range,
        invariance,
        notce,
    };
    io::emit_json(&out, args.report.as_deref())?;
    Ok(Status::Ok)
}
