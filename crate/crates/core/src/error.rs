use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, LabError>;

/// Every failure the laboratory can report. `code()` gives the stable
/// machine-readable identifier used in JSON reports.
#[derive(Debug, Error, Clone)]
pub enum LabError {
    #[error("degenerate domain: acceptance rate {rate:.3e} after {proposals} proposals")]
    DegenerateDomain { rate: f64, proposals: u64 },
    #[error("empty intersection with the requested ball after {proposals} proposals")]
    EmptyIntersection { proposals: u64 },
    #[error("functional is not supporting: witness point {witness:?}")]
    NotSupporting { witness: Vec<Complex64> },
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),
    #[error("unsupported boundary point: {0}")]
    UnsupportedBoundaryPoint(String),
    #[error("boundary point is not reachable inside the component")]
    UnreachableBoundaryPoint,
    #[error("point lies outside the domain")]
    OutsideDomain,
    #[error("point lies outside the local patch of radius {radius}")]
    OutsideLocalPatch { radius: f64 },
    #[error("principal branch violated: Re(argument) = {re_arg:.3e} at {witness:?}")]
    BranchViolation { witness: Vec<Complex64>, re_arg: f64 },
    #[error("continuation path leaves the domain at {witness:?}")]
    PathEscape { witness: Vec<Complex64> },
    #[error("point is unreachable from the branch base")]
    Unreachable,
    #[error("no theoretical threshold for {0}")]
    NoTheoreticalValue(String),
    #[error("not strictly plurisubharmonic: lambda_min = {lambda_min:.3e} at {witness:?}")]
    NotStrictlyPsh { witness: Vec<Complex64>, lambda_min: f64 },
    #[error("defining function has vanishing gradient at the base point")]
    DegenerateGradient,
    #[error("chart is ill-conditioned (condition number {0:.3e})")]
    IllConditionedChart(f64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unstable estimate: relative error {relative:.3} (estimate {estimate:.6e})")]
    UnstableEstimate { estimate: f64, stderr: f64, relative: f64 },
    #[error("shell starvation: {0} consecutive empty shells")]
    ShellStarvation(usize),
    #[error("insufficient shells: {0} usable, at least 6 required")]
    InsufficientShells(usize),
    #[error("function is not in the space: p_{index} = {p} has divergent mass")]
    NotInSpace { index: usize, p: f64 },
    #[error("compact set is too close to the boundary (distance {0:.3e})")]
    CompactTooClose(f64),
    #[error("probe exhausted: achieved running max {achieved:.6e}, requested {requested:.6e}")]
    ProbeExhausted { achieved: f64, requested: f64 },
    #[error("witness degraded at net points {0:?}")]
    WitnessDegraded(Vec<usize>),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("io error: {0}")]
    Io(String),
}

impl LabError {
    pub fn code(&self) -> &'static str {
        match self {
            LabError::DegenerateDomain { .. } => "degenerate-domain",
            LabError::EmptyIntersection { .. } => "empty-intersection",
            LabError::NotSupporting { .. } => "not-supporting",
            LabError::UnsupportedFamily(_) => "unsupported-family",
            LabError::UnsupportedBoundaryPoint(_) => "unsupported-boundary-point",
            LabError::UnreachableBoundaryPoint => "unreachable-boundary-point",
            LabError::OutsideDomain => "outside-domain",
            LabError::OutsideLocalPatch { .. } => "outside-local-patch",
            LabError::BranchViolation { .. } => "branch-violation",
            LabError::PathEscape { .. } => "path-escape",
            LabError::Unreachable => "unreachable",
            LabError::NoTheoreticalValue(_) => "no-theoretical-value",
            LabError::NotStrictlyPsh { .. } => "not-strictly-psh",
            LabError::DegenerateGradient => "degenerate-gradient",
            LabError::IllConditionedChart(_) => "ill-conditioned-chart",
            LabError::Domain(_) => "domain-error",
            LabError::UnstableEstimate { .. } => "unstable-estimate",
            LabError::ShellStarvation(_) => "shell-starvation",
            LabError::InsufficientShells(_) => "insufficient-shells",
            LabError::NotInSpace { .. } => "not-in-space",
            LabError::CompactTooClose(_) => "compact-too-close",
            LabError::ProbeExhausted { .. } => "probe-exhausted",
            LabError::WitnessDegraded(_) => "witness-degraded",
            LabError::Input(_) => "input-error",
            LabError::Io(_) => "io-error",
        }
    }

    /// Numerical failures (as opposed to bad input).
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            LabError::DegenerateDomain { .. }
                | LabError::UnstableEstimate { .. }
                | LabError::ShellStarvation(_)
                | LabError::InsufficientShells(_)
                | LabError::IllConditionedChart(_)
                | LabError::NotInSpace { .. }
                | LabError::ProbeExhausted { .. }
                | LabError::WitnessDegraded(_)
        )
    }
}

impl From<std::io::Error> for LabError {
    fn from(e: std::io::Error) -> Self {
        LabError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for LabError {
    fn from(e: serde_json::Error) -> Self {
        LabError::Input(e.to_string())
    }
}
