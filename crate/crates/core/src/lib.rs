//! B-scrolls in Minkowski 3-space and their dual timelike minimal surfaces in
//! the Lorentzian Heisenberg group.
//!
//! The pipeline runs from a generator `h(s)` (or prescribed curvatures) to a
//! null frame, the base null curve, the CMC B-scroll `f_L` in L³, the dual
//! surface `f` in Nil₃(H), and the classification of the singular points of
//! `f`.
//!
//! ```
//! use bscroll_core::{scan_singularities, GeneratorFrames, ScanConfig, SingularKind};
//!
//! let src = GeneratorFrames::new("s + s^3", 1.0).unwrap();
//! let report = scan_singularities(&src, (-1.0, 1.0), &ScanConfig::default()).unwrap();
//! assert_eq!(report.count(SingularKind::CuspidalCrossCap), 2);
//! ```

// `!(a < b)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod expr;
pub mod frame;
pub mod integrator;
pub mod jet;
pub mod lorentz;
pub mod roots;
pub mod singularity;
pub mod surface;
pub mod verify;

pub use error::{Error, Result, Span};
pub use expr::{parse, Expr};
pub use frame::{
    frame_flow_from_curvatures, frame_from_b, frame_from_h, frame_from_initial_values, kappa2_of_b,
    validate_frame, FrameFlow, FrameResiduals, FrameSource, GeneratorFrames, NullFrame,
};
pub use integrator::{integrate_curve, CurvePath, CurveSample, IntegratorConfig};
pub use jet::{schwarzian, Jet};
pub use lorentz::{det, stereo_pi, stereo_pi_l, LorentzParams, LorentzTransform, Mat3, ParaComplex, Vec3L};
pub use singularity::{
    classify_point, find_notce_transform, invariance_check, scan_singularities, singular_t, transform_frame,
    InvarianceReport, NotceSolution, ScanConfig, SingularKind, SingularPoint, SingularReport,
    TransformedSource,
};
pub use surface::{
    box_residual, fundamental_forms, gauss_map_l, normal_gauss_map, BScroll, FundamentalForms, SurfaceSample,
};
pub use verify::{run_suite, Check, VerifyConfig, VerifyReport};
