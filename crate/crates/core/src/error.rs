use std::fmt;

/// Byte range of an expression node in its source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{func} is undefined at s = {at}")]
    Domain { func: &'static str, at: f64 },

    #[error("{func} is undefined at s = {at} (expression node {span})")]
    DomainAt { func: &'static str, at: f64, span: Span },

    #[error("syntax error at byte {offset}: expected {}", expected.join(" | "))]
    Syntax {
        offset: usize,
        expected: Vec<&'static str>,
    },

    #[error("unknown function or identifier `{name}` at byte {offset}")]
    UnknownFunction { name: String, offset: usize },

    #[error("projection pole: |1 {sign} x3| = {denom:e}")]
    Pole { sign: char, denom: f64 },

    #[error("point is not on the de Sitter sphere: <p,p> - 1 = {residual:e}")]
    NotOnDeSitter { residual: f64 },

    #[error("matrix is not in O(2,1): residual {residual:e}")]
    NotLorentz { residual: f64 },

    #[error("degenerate generator at s = {s}: |h'| = {deriv:e}")]
    DegenerateGenerator { s: f64, deriv: f64 },

    #[error("orientation violated: H det(B, B', B'') = {value:e} <= 0")]
    Orientation { value: f64 },

    #[error("normalization violated: <B',B'> - H^2 = {residual:e}")]
    Normalization { residual: f64 },

    #[error("lightlike condition violated: <B,B> = {residual:e}")]
    NotLightlike { residual: f64 },

    #[error("invalid initial frame: {0}")]
    InitFrame(String),

    #[error("step size underflow at s = {s} (h = {step:e})")]
    StepUnderflow { s: f64, step: f64 },

    #[error("maximum number of steps ({max_steps}) exceeded at s = {s}")]
    MaxStepsExceeded { s: f64, max_steps: usize },

    #[error("s = {s} outside [{lo}, {hi}]")]
    OutOfRange { s: f64, lo: f64, hi: f64 },

    #[error("singular curve escapes to infinity at s = {s} (B3 = {b3:e})")]
    UnboundedCurve { s: f64, b3: f64 },

    #[error("classifier inconsistency at s = {s}: {detail}")]
    ClassifierInconsistency { s: f64, detail: String },

    #[error("transform reverses frame orientation (det = {det})")]
    OrientationBreak { det: f64 },

    #[error("no Lorentz transform found (best residuals {r1:e}, {r2:e})")]
    NoSolutionFound { r1: f64, r2: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    /// True for errors caused by user input (bad expression, bad range, etc.)
    /// as opposed to numerical breakdown.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Domain { .. }
                | Error::DomainAt { .. }
                | Error::Syntax { .. }
                | Error::UnknownFunction { .. }
                | Error::DegenerateGenerator { .. }
                | Error::Orientation { .. }
                | Error::Normalization { .. }
                | Error::NotLightlike { .. }
                | Error::InitFrame(_)
                | Error::OutOfRange { .. }
                | Error::NotLorentz { .. }
                | Error::OrientationBreak { .. }
                | Error::Precondition(_)
                | Error::Config(_)
                | Error::Pole { .. }
                | Error::NotOnDeSitter { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
