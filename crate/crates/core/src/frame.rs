//! Null frames `(A, B, C)` along null curves in L³.
//!
//! The frame satisfies `⟨A,A⟩ = ⟨B,B⟩ = 0`, `⟨A,B⟩ = −1`, `C = A×B`, and the
//! Frenet–Serret system
//!
//! ```text
//! A' = κ₁A + κ₂C,   B' = −κ₁B + HC,   C' = HA + κ₂B
//! ```
//!
//! with constant `H ≠ 0`. Components are jets in `s`, so every derivative the
//! singularity analysis needs is exact.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::integrator::{integrate_span, IntegratorConfig, Trajectory};
use crate::jet::{self, Jet, DEFAULT_ORDER};
use crate::lorentz::{det, JetVec, Vec3L};

/// Tolerance for the algebraic frame identities at construction.
pub const FRAME_TOL: f64 = 1e-9;

/// `|h'|` below which a generator is considered degenerate.
pub const DEGENERATE_DERIV: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct NullFrame {
    pub s: f64,
    pub a: JetVec,
    pub b: JetVec,
    pub c: JetVec,
    pub kappa1: Jet,
    pub kappa2: Jet,
    /// The constant mean curvature `H`, also the Heisenberg parameter.
    pub mean_curvature: f64,
}

impl NullFrame {
    /// Lightlike curvature `κ_γ = −κ₂` of the null curve with tangent `B`,
    /// which `s` parametrizes by pseudo-arclength (`⟨B',B'⟩ = H²`).
    pub fn lightlike_curvature(&self) -> f64 {
        -self.kappa2.value()
    }

    /// `S(h)` recovered through `κ₂ = −S(h)/H`.
    pub fn schwarzian(&self) -> Jet {
        self.kappa2.scale(-self.mean_curvature)
    }

    /// Builds jets for a frame given only its values at `s`, by solving the
    /// Frenet–Serret system order by order with the curvature jets.
    pub fn from_values(
        s: f64,
        [a, b, c]: [Vec3L; 3],
        kappa1: &Jet,
        kappa2: &Jet,
        mean_curvature: f64,
    ) -> NullFrame {
        let order = kappa1.order().min(kappa2.order());
        let h = mean_curvature;
        let k1 = kappa1.taylor_coeffs();
        let k2 = kappa2.taylor_coeffs();
        let mut ta = vec![a];
        let mut tb = vec![b];
        let mut tc = vec![c];
        for k in 0..order {
            let mut na = Vec3L::ZERO;
            let mut nb = tc[k] * h;
            let mut nc = ta[k] * h;
            for j in 0..=k {
                na = na + ta[k - j] * k1[j] + tc[k - j] * k2[j];
                nb = nb - tb[k - j] * k1[j];
                nc = nc + tb[k - j] * k2[j];
            }
            let inv = 1.0 / (k + 1) as f64;
            ta.push(na * inv);
            tb.push(nb * inv);
            tc.push(nc * inv);
        }
        let to_jet = |t: &[Vec3L]| -> JetVec {
            Vec3L(std::array::from_fn(|i| {
                Jet::from_taylor(s, t.iter().map(|v| v[i]).collect())
            }))
        };
        NullFrame {
            s,
            a: to_jet(&ta),
            b: to_jet(&tb),
            c: to_jet(&tc),
            kappa1: kappa1.truncate(order),
            kappa2: kappa2.truncate(order),
            mean_curvature,
        }
    }

    pub fn values(&self) -> [Vec3L; 3] {
        [self.a.value(), self.b.value(), self.c.value()]
    }
}

fn check_mean_curvature(h: f64) -> Result<()> {
    if h == 0.0 || !h.is_finite() {
        return Err(Error::Config(format!("H must be finite and non-zero, got {h}")));
    }
    Ok(())
}

/// Frame of the B-scroll generated by `h`:
/// `B = −H/(2h') (−1−h², 1−h², 2h)`, `C = B'/H`, `A = (S(h)B + B'')/H²`,
/// `κ₁ = 0`, `κ₂ = −S(h)/H`.
pub fn frame_from_h(h: &Expr, mean_curvature: f64, s: f64) -> Result<NullFrame> {
    frame_from_h_jet(&h.eval_jet(s, DEFAULT_ORDER)?, mean_curvature)
}

/// As [`frame_from_h`], from an already evaluated jet of `h` (order ≥ 5).
pub fn frame_from_h_jet(hj: &Jet, mean_curvature: f64) -> Result<NullFrame> {
    check_mean_curvature(mean_curvature)?;
    let s = hj.base_point();
    let hh = mean_curvature;
    let d1 = hj.differentiate();
    if d1.value().abs() < DEGENERATE_DERIV {
        return Err(Error::DegenerateGenerator {
            s,
            deriv: d1.value().abs(),
        });
    }
    let h = hj.truncate(d1.order());
    let h2 = &h * &h;
    let factor = d1.recip()?.scale(-hh / 2.0);
    let b = Vec3L([
        &factor * &(-(&h2 + 1.0)),
        &factor * &(-(&h2 - 1.0)),
        &factor * &h.scale(2.0),
    ]);
    let sch = jet::schwarzian(hj)?;
    let b1 = b.differentiate();
    let b2 = b1.differentiate();
    let c = b1.scale(1.0 / hh);
    let a = (b.scale_by(&sch) + b2).scale(1.0 / (hh * hh));
    let kappa2 = sch.scale(-1.0 / hh);
    let kappa1 = Jet::constant(s, 0.0, kappa2.order());
    Ok(NullFrame {
        s,
        a,
        b,
        c,
        kappa1,
        kappa2,
        mean_curvature,
    })
}

fn scale_of(v: &Vec3L) -> f64 {
    1.0 + v.coord_norm().powi(2)
}

/// Checks `⟨B,B⟩ = 0`, `⟨B',B'⟩ = H²` and `H det(B,B',B'') > 0`; returns
/// `(B', B'')`.
fn check_b(b: &JetVec, mean_curvature: f64) -> Result<(JetVec, JetVec)> {
    check_mean_curvature(mean_curvature)?;
    if b.order() < 3 {
        return Err(Error::Config("B needs jets of order >= 3".into()));
    }
    let b1 = b.differentiate();
    let b2 = b1.differentiate();
    let (v, v1, v2) = (b.value(), b1.value(), b2.value());
    let bb = v.mdot(&v);
    if bb.abs() > FRAME_TOL * scale_of(&v) {
        return Err(Error::NotLightlike { residual: bb });
    }
    let norm = v1.mdot(&v1) - mean_curvature * mean_curvature;
    if norm.abs() > FRAME_TOL * scale_of(&v1) {
        return Err(Error::Normalization { residual: norm });
    }
    let orient = mean_curvature * det(&v, &v1, &v2);
    if orient <= 0.0 {
        return Err(Error::Orientation { value: orient });
    }
    Ok((b1, b2))
}

/// `κ₂ = −⟨B'',B''⟩ / (2H³)`.
pub fn kappa2_of_b(b: &JetVec, mean_curvature: f64) -> Result<f64> {
    let (_, b2) = check_b(b, mean_curvature)?;
    let v2 = b2.value();
    Ok(-v2.mdot(&v2) / (2.0 * mean_curvature.powi(3)))
}

/// Frame determined by a lightlike `B` with `⟨B',B'⟩ = H²`, `H det(B,B',B'') > 0`:
/// `C = B'/H`, `A = −(κ₂/H)B + B''/H²`.
pub fn frame_from_b(b: &JetVec, mean_curvature: f64) -> Result<NullFrame> {
    let (b1, b2) = check_b(b, mean_curvature)?;
    let hh = mean_curvature;
    let kappa2 = b2.mdot(&b2).scale(-1.0 / (2.0 * hh.powi(3)));
    let c = b1.scale(1.0 / hh);
    let a = b.scale_by(&kappa2.scale(-1.0 / hh)) + b2.scale(1.0 / (hh * hh));
    let s = b.0[0].base_point();
    let kappa1 = Jet::constant(s, 0.0, kappa2.order());
    Ok(NullFrame {
        s,
        a,
        b: b.clone(),
        c,
        kappa1,
        kappa2,
        mean_curvature,
    })
}

pub mod residual_names {
    pub const AA: &str = "<A,A>";
    pub const BB: &str = "<B,B>";
    pub const AB: &str = "<A,B>+1";
    pub const CC: &str = "<C,C>-1";
    pub const AC: &str = "<A,C>";
    pub const BC: &str = "<B,C>";
    pub const CROSS: &str = "|AxB-C|";
    pub const DET: &str = "det(A,B,C)-1";
    pub const FS_A: &str = "|A'-(k1 A+k2 C)|";
    pub const FS_B: &str = "|B'-(-k1 B+H C)|";
    pub const FS_C: &str = "|C'-(H A+k2 B)|";
    pub const B_NORM: &str = "<B',B'>-H^2";
    pub const B_DET: &str = "H det(B,B',B'')-H^4";

    pub const ALGEBRAIC: [&str; 8] = [AA, BB, AB, CC, AC, BC, CROSS, DET];
    pub const FRENET: [&str; 3] = [FS_A, FS_B, FS_C];
    pub const B_COND: [&str; 2] = [B_NORM, B_DET];
}

/// Absolute residuals of the frame identities, keyed by name.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct FrameResiduals(pub BTreeMap<&'static str, f64>);

impl FrameResiduals {
    pub fn get(&self, name: &str) -> f64 {
        self.0.get(name).copied().unwrap_or(f64::NAN)
    }

    fn max_of(&self, names: &[&str]) -> f64 {
        names
            .iter()
            .filter_map(|n| self.0.get(n))
            .fold(0.0, |m: f64, v| m.max(*v))
    }

    pub fn algebraic_max(&self) -> f64 {
        self.max_of(&residual_names::ALGEBRAIC)
    }

    pub fn frenet_max(&self) -> f64 {
        self.max_of(&residual_names::FRENET)
    }

    pub fn b_cond_max(&self) -> f64 {
        self.max_of(&residual_names::B_COND)
    }
}

/// Residuals of all frame identities. Frenet–Serret and `B`-condition entries
/// are present when the jets are deep enough to evaluate them.
pub fn validate_frame(f: &NullFrame) -> FrameResiduals {
    use residual_names::*;
    let [a, b, c] = f.values();
    let hh = f.mean_curvature;
    let mut r = BTreeMap::new();
    r.insert(AA, a.mdot(&a).abs());
    r.insert(BB, b.mdot(&b).abs());
    r.insert(AB, (a.mdot(&b) + 1.0).abs());
    r.insert(CC, (c.mdot(&c) - 1.0).abs());
    r.insert(AC, a.mdot(&c).abs());
    r.insert(BC, b.mdot(&c).abs());
    r.insert(CROSS, (a.mcross(&b) - c).coord_norm());
    r.insert(DET, (det(&a, &b, &c) - 1.0).abs());

    let (k1, k2) = (f.kappa1.value(), f.kappa2.value());
    if f.a.order() >= 1 && f.b.order() >= 1 && f.c.order() >= 1 {
        let (da, db, dc) = (f.a.derivative(1), f.b.derivative(1), f.c.derivative(1));
        r.insert(FS_A, (da - (a * k1 + c * k2)).coord_norm());
        r.insert(FS_B, (db - (b * -k1 + c * hh)).coord_norm());
        r.insert(FS_C, (dc - (a * hh + b * k2)).coord_norm());
        r.insert(B_NORM, (db.mdot(&db) - hh * hh).abs());
        if f.b.order() >= 2 {
            let d2b = f.b.derivative(2);
            r.insert(B_DET, (hh * det(&b, &db, &d2b) - hh.powi(4)).abs());
        }
    }
    FrameResiduals(r)
}

/// `|−⟨B'',B''⟩/(2H³) − κ₂|`, meaningful when `κ₁ ≡ 0`.
pub fn kappa2_recovery_residual(f: &NullFrame) -> f64 {
    let b2 = f.b.derivative(2);
    (-b2.mdot(&b2) / (2.0 * f.mean_curvature.powi(3)) - f.kappa2.value()).abs()
}

// ---- frame sources ----------------------------------------------------------

/// Anything that can produce the null frame at a parameter value.
pub trait FrameSource: Send + Sync {
    fn frame_at(&self, s: f64) -> Result<NullFrame>;

    fn mean_curvature(&self) -> f64;

    fn describe(&self) -> String;

    /// `A(s)` only; sources may override this with something cheaper.
    fn tangent_at(&self, s: f64) -> Result<Vec3L> {
        Ok(self.frame_at(s)?.a.value())
    }
}

impl<T: FrameSource + ?Sized> FrameSource for &T {
    fn frame_at(&self, s: f64) -> Result<NullFrame> {
        (**self).frame_at(s)
    }
    fn mean_curvature(&self) -> f64 {
        (**self).mean_curvature()
    }
    fn describe(&self) -> String {
        (**self).describe()
    }
    fn tangent_at(&self, s: f64) -> Result<Vec3L> {
        (**self).tangent_at(s)
    }
}

/// Frames generated by an expression `h(s)`.
#[derive(Debug, Clone)]
pub struct GeneratorFrames {
    pub text: String,
    pub expr: Expr,
    pub mean_curvature: f64,
}

impl GeneratorFrames {
    pub fn new(text: &str, mean_curvature: f64) -> Result<GeneratorFrames> {
        check_mean_curvature(mean_curvature)?;
        Ok(GeneratorFrames {
            text: text.to_string(),
            expr: expr::parse(text)?,
            mean_curvature,
        })
    }
}

impl FrameSource for GeneratorFrames {
    fn frame_at(&self, s: f64) -> Result<NullFrame> {
        frame_from_h(&self.expr, self.mean_curvature, s)
    }

    fn mean_curvature(&self) -> f64 {
        self.mean_curvature
    }

    fn describe(&self) -> String {
        format!("h(s) = {}", self.text)
    }

    fn tangent_at(&self, s: f64) -> Result<Vec3L> {
        // A needs four derivatives of h; skip the fifth.
        let hj = self.expr.eval_jet(s, 4)?;
        let f = frame_from_h_jet_shallow(&hj, self.mean_curvature)?;
        Ok(f)
    }
}

// A(s) from an order-4 jet of h: same formulas as frame_from_h_jet.
fn frame_from_h_jet_shallow(hj: &Jet, hh: f64) -> Result<Vec3L> {
    let d1 = hj.differentiate();
    if d1.value().abs() < DEGENERATE_DERIV {
        return Err(Error::DegenerateGenerator {
            s: hj.base_point(),
            deriv: d1.value().abs(),
        });
    }
    let h = hj.truncate(d1.order());
    let h2 = &h * &h;
    let factor = d1.recip()?.scale(-hh / 2.0);
    let b = Vec3L([
        &factor * &(-(&h2 + 1.0)),
        &factor * &(-(&h2 - 1.0)),
        &factor * &h.scale(2.0),
    ]);
    let sch = jet::schwarzian(hj)?.value();
    let b2 = b.derivative(2);
    Ok((b.value() * sch + b2) * (1.0 / (hh * hh)))
}

// ---- Frenet–Serret flow ---------------------------------------------------

/// Frames obtained by integrating the Frenet–Serret system for prescribed
/// curvatures from an initial frame.
#[derive(Debug, Clone)]
pub struct FrameFlow {
    traj: Trajectory<9>,
    pub kappa1: Expr,
    pub kappa2: Expr,
    pub mean_curvature: f64,
    pub order: usize,
}

fn pack(f: &[Vec3L; 3]) -> [f64; 9] {
    std::array::from_fn(|i| f[i / 3][i % 3])
}

fn unpack(y: &[f64; 9]) -> [Vec3L; 3] {
    std::array::from_fn(|k| Vec3L::new(y[3 * k], y[3 * k + 1], y[3 * k + 2]))
}

/// Solves `(A',B',C') = (A,B,C)·M(κ₁,κ₂,H)` over `s_range` from `init`
/// (taken at `init.s`).
pub fn frame_flow_from_curvatures(
    kappa1: &Expr,
    kappa2: &Expr,
    mean_curvature: f64,
    init: &NullFrame,
    s_range: (f64, f64),
    cfg: &IntegratorConfig,
) -> Result<FrameFlow> {
    check_mean_curvature(mean_curvature)?;
    let res = validate_frame(init);
    if res.algebraic_max() > FRAME_TOL {
        return Err(Error::InitFrame(format!(
            "frame identities violated (max residual {:e})",
            res.algebraic_max()
        )));
    }
    let hh = mean_curvature;
    let rhs = |s: f64, y: &[f64; 9]| -> Result<[f64; 9]> {
        let k1 = kappa1.eval_real(s)?;
        let k2 = kappa2.eval_real(s)?;
        let [a, b, c] = unpack(y);
        Ok(pack(&[a * k1 + c * k2, b * -k1 + c * hh, a * hh + b * k2]))
    };
    let traj = integrate_span(rhs, init.s, pack(&init.values()), s_range, cfg)?;
    Ok(FrameFlow {
        traj,
        kappa1: kappa1.clone(),
        kappa2: kappa2.clone(),
        mean_curvature,
        order: DEFAULT_ORDER,
    })
}

/// Initial frame from nine numbers `A, B, C`, validated; jets come from the
/// curvature expressions.
pub fn frame_from_initial_values(
    s: f64,
    values: [f64; 9],
    kappa1: &Expr,
    kappa2: &Expr,
    mean_curvature: f64,
) -> Result<NullFrame> {
    check_mean_curvature(mean_curvature)?;
    let k1 = kappa1.eval_jet(s, DEFAULT_ORDER)?;
    let k2 = kappa2.eval_jet(s, DEFAULT_ORDER)?;
    let f = NullFrame::from_values(s, unpack(&values), &k1, &k2, mean_curvature);
    let res = validate_frame(&f);
    if res.algebraic_max() > FRAME_TOL {
        return Err(Error::InitFrame(format!(
            "frame identities violated (max residual {:e})",
            res.algebraic_max()
        )));
    }
    Ok(f)
}

impl FrameFlow {
    pub fn range(&self) -> (f64, f64) {
        self.traj.range()
    }

    pub fn len(&self) -> usize {
        self.traj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traj.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.traj.s
    }

    fn build(&self, s: f64, values: &[f64; 9]) -> Result<NullFrame> {
        let k1 = self.kappa1.eval_jet(s, self.order)?;
        let k2 = self.kappa2.eval_jet(s, self.order)?;
        Ok(NullFrame::from_values(
            s,
            unpack(values),
            &k1,
            &k2,
            self.mean_curvature,
        ))
    }

    /// Frame at the `i`-th integration node.
    pub fn frame_at_node(&self, i: usize) -> Result<NullFrame> {
        self.build(self.traj.s[i], &self.traj.y[i])
    }
}

impl FrameSource for FrameFlow {
    fn frame_at(&self, s: f64) -> Result<NullFrame> {
        let (y, _) = self.traj.interpolate(s)?;
        self.build(s, &y)
    }

    fn mean_curvature(&self) -> f64 {
        self.mean_curvature
    }

    fn describe(&self) -> String {
        format!("kappa1(s) = {}, kappa2(s) = {}", self.kappa1, self.kappa2)
    }

    fn tangent_at(&self, s: f64) -> Result<Vec3L> {
        let (y, _) = self.traj.interpolate(s)?;
        Ok(Vec3L::new(y[0], y[1], y[2]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn tanh_frame(s: f64) -> NullFrame {
        frame_from_h(&parse("tanh(s)").unwrap(), 1.0, s).unwrap()
    }

    fn assert_vec(got: Vec3L, want: Vec3L, tol: f64) {
        assert!((got - want).max_abs() < tol, "{got:?} vs {want:?}");
    }

    #[test]
    fn tanh_frame_at_zero() {
        let f = tanh_frame(0.0);
        assert_vec(f.a.value(), Vec3L::new(1.0, 1.0, 0.0), 1e-14);
        assert_vec(f.b.value(), Vec3L::new(0.5, -0.5, 0.0), 1e-14);
        assert_vec(f.c.value(), Vec3L::new(0.0, 0.0, -1.0), 1e-14);
        assert!((f.kappa2.value() - 2.0).abs() < 1e-14);
        assert_eq!(f.kappa1.value(), 0.0);
    }

    #[test]
    fn tanh_frame_closed_form() {
        for s in [-1.3, -0.2, 0.45, 1.7] {
            let f = tanh_frame(s);
            let (ch, sh) = ((2.0 * s).cosh(), (2.0 * s).sinh());
            assert_vec(f.a.value(), Vec3L::new(ch, 1.0, -sh), 1e-12);
            assert_vec(f.b.value(), Vec3L::new(ch / 2.0, -0.5, -sh / 2.0), 1e-12);
            assert_vec(f.c.value(), Vec3L::new(sh, 0.0, -ch), 1e-12);
        }
    }

    #[test]
    fn cubic_kappa2_derivative_at_root() {
        let s = 1.0 / 6f64.sqrt();
        let f = frame_from_h(&parse("s + s^3").unwrap(), 1.0, s).unwrap();
        assert!(f.kappa2.value().abs() < 1e-13);
        let want = 16.0 * (2.0f64 / 3.0).sqrt();
        assert!((f.kappa2.derivative(1) - want).abs() < 1e-10);
        assert!((want - 13.063_945_294_843_617).abs() < 1e-12);
    }

    #[test]
    fn affine_generator_is_flat() {
        for hh in [1.0, -2.0] {
            let f = frame_from_h(&parse("s").unwrap(), hh, 0.7).unwrap();
            assert_eq!(f.kappa2.value(), 0.0);
            let r = validate_frame(&f);
            assert!(r.algebraic_max() < 1e-12 && r.frenet_max() < 1e-12, "{r:?}");
        }
    }

    #[test]
    fn degenerate_generator() {
        let e = parse("s^3").unwrap();
        assert!(matches!(
            frame_from_h(&e, 1.0, 0.0),
            Err(Error::DegenerateGenerator { .. })
        ));
        assert!(matches!(frame_from_h(&e, 0.0, 1.0), Err(Error::Config(_))));
    }

    fn tanh_b(s: f64, scale: f64) -> JetVec {
        let comps = ["cosh(2*s)/2", "-1/2", "-sinh(2*s)/2"];
        Vec3L(std::array::from_fn(|i| {
            parse(comps[i]).unwrap().eval_jet(s, 5).unwrap().scale(scale)
        }))
    }

    #[test]
    fn frame_from_b_reproduces_tanh_frame() {
        for s in [-0.8, 0.0, 0.6] {
            let f = frame_from_b(&tanh_b(s, 1.0), 1.0).unwrap();
            let g = tanh_frame(s);
            assert_vec(f.a.value(), g.a.value(), 1e-10);
            assert_vec(f.c.value(), g.c.value(), 1e-10);
            assert!((f.kappa2.value() - 2.0).abs() < 1e-10);
            assert!((kappa2_of_b(&tanh_b(s, 1.0), 1.0).unwrap() - 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn frame_from_b_errors() {
        assert!(matches!(
            frame_from_b(&tanh_b(0.3, -1.0), 1.0),
            Err(Error::Orientation { .. })
        ));
        assert!(matches!(
            frame_from_b(&tanh_b(0.3, 2.0), 1.0),
            Err(Error::Normalization { .. })
        ));
    }

    #[test]
    fn kappa2_of_b_cross_oracle() {
        let e = parse("s + s^3").unwrap();
        let f = frame_from_h(&e, 1.0, 0.1).unwrap();
        let sch = jet::schwarzian(&e.eval_jet(0.1, 5).unwrap()).unwrap();
        assert!((kappa2_of_b(&f.b, 1.0).unwrap() + sch.value()).abs() < 1e-10);
        let flat = frame_from_h(&parse("s").unwrap(), 1.0, 0.1).unwrap();
        assert!(kappa2_of_b(&flat.b, 1.0).unwrap().abs() < 1e-14);
    }

    #[test]
    fn scaled_b_breaks_ab_pairing() {
        let mut f = tanh_frame(0.4);
        f.b = f.b.scale(1.01);
        let r = validate_frame(&f);
        assert!((r.get(residual_names::AB) - 0.01).abs() < 1e-12);
    }

    #[test]
    fn from_values_matches_generator_jets() {
        let g = tanh_frame(0.35);
        let f = NullFrame::from_values(0.35, g.values(), &g.kappa1, &g.kappa2, 1.0);
        for k in 0..=2 {
            assert_vec(f.a.derivative(k), g.a.derivative(k), 1e-11);
            assert_vec(f.b.derivative(k), g.b.derivative(k), 1e-11);
            assert_vec(f.c.derivative(k), g.c.derivative(k), 1e-11);
        }
    }

    #[test]
    fn flow_rejects_invalid_init() {
        let mut init = tanh_frame(0.0);
        init.a = init.a.scale(1.1);
        let k = parse("0").unwrap();
        let r = frame_flow_from_curvatures(&k, &k, 1.0, &init, (0.0, 1.0), &IntegratorConfig::default());
        assert!(matches!(r, Err(Error::InitFrame(_))));
    }

    #[test]
    fn flow_reproduces_tanh_frame() {
        let init = tanh_frame(0.0);
        let (k1, k2) = (parse("0").unwrap(), parse("2").unwrap());
        let flow =
            frame_flow_from_curvatures(&k1, &k2, 1.0, &init, (-1.0, 1.5), &IntegratorConfig::default())
                .unwrap();
        for s in [-1.0, -0.31, 0.77, 1.5] {
            let f = flow.frame_at(s).unwrap();
            let g = tanh_frame(s);
            assert_vec(f.a.value(), g.a.value(), 1e-8);
            assert_vec(f.b.value(), g.b.value(), 1e-8);
            assert_vec(f.c.value(), g.c.value(), 1e-8);
            assert_vec(f.b.derivative(2), g.b.derivative(2), 1e-7);
            assert!(kappa2_recovery_residual(&f) < 1e-7);
        }
    }
}
