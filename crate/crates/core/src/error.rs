use thiserror::Error;

use crate::algebra::ValidationReport;

/// Errors raised anywhere in the synthesis toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("basis element {index} is not Hermitian (residual {residual:.3e})")]
    NonHermitianInput { index: usize, residual: f64 },
    #[error("Gram matrix is not diagonal: Tr(O_{i} O_{j}) = {value:.3e}")]
    GramNotDiagonal { i: usize, j: usize, value: f64 },
    #[error("basis element {index} has vanishing norm; basis is linearly dependent")]
    LinearlyDependentBasis { index: usize },
    #[error("bracket [O_{i}, O_{j}] leaves the span of the basis (residual {residual:.3e})")]
    BasisNotClosed { i: usize, j: usize, residual: f64 },
    #[error("Killing form is degenerate (smallest/largest singular value = {ratio:.3e})")]
    DegenerateKillingForm { ratio: f64 },
    #[error("Cartan generators {i} and {j} do not commute (residual {residual:.3e})")]
    CsaNotAbelian { i: usize, j: usize, residual: f64 },
    #[error("root pair {root} is not a simultaneous eigenvector of the Cartan subalgebra (residual {residual:.3e})")]
    RootPairNotEigenvector { root: usize, residual: f64 },
    #[error("inconsistent Cartan-Weyl labelling: {0}")]
    InvalidLabelling(String),
    #[error("[E+, E-] vanishes for root {root}")]
    ZeroRootBracket { root: usize },
    #[error("eta is not positive for root {root} after orientation swap ({eta:.3e})")]
    EtaNotPositiveAfterSwap { root: usize, eta: f64 },

    #[error("highest-weight vector is not unique (found {dimension} candidates)")]
    NotUnique { dimension: usize },
    #[error("observable is not Hermitian (residual {residual:.3e})")]
    NonHermitianObservable { residual: f64 },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("root index {index} out of range (L = {num_roots})")]
    InvalidRootIndex { index: usize, num_roots: usize },

    #[error("operator is already in the Cartan subalgebra")]
    AlreadyDiagonal,
    #[error("pivot coefficient vanishes")]
    ZeroPivot,
    #[error("step on root {root} left pivot residual {residual:.3e} under both orientations")]
    StepDidNotReducePivot { root: usize, residual: f64 },
    #[error("diagonalization did not reach d <= {eps_d:.3e} within {max_steps} steps (last d = {last:.3e})")]
    MaxStepsExceeded {
        eps_d: f64,
        max_steps: usize,
        last: f64,
        trace: Vec<f64>,
    },

    #[error("top eigenvalue is degenerate (gap {gap:.3e})")]
    DegenerateTop { gap: f64 },
    #[error("state is not a weight state (residual {residual:.3e})")]
    NotAWeightState { residual: f64 },
    #[error("no Weyl reflection makes progress; state lies outside the coherent-state orbit")]
    NoProgress,

    #[error("highest-weight operator has zero spectral gap")]
    ZeroGap,
    #[error("moment precision {eps_m:.3e} is not below the observable norm {o_norm:.3e}")]
    GapBudgetInfeasible { eps_m: f64, o_norm: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("gate leaves the algebra span (residual {residual:.3e})")]
    LeavesAlgebraSpan { residual: f64 },
    #[error("moments are not those of a coherent state (purity deficit {deficit:.3e})")]
    NotAGcs { deficit: f64 },

    #[error("parse error: {0}")]
    Parse(String),
    #[error("algebra validation failed:\n{0}")]
    ValidationFailed(Box<ValidationReport>),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonHermitianInput { .. } => "NonHermitianInput",
            Error::GramNotDiagonal { .. } => "GramNotDiagonal",
            Error::LinearlyDependentBasis { .. } => "LinearlyDependentBasis",
            Error::BasisNotClosed { .. } => "BasisNotClosed",
            Error::DegenerateKillingForm { .. } => "DegenerateKillingForm",
            Error::CsaNotAbelian { .. } => "CsaNotAbelian",
            Error::RootPairNotEigenvector { .. } => "RootPairNotEigenvector",
            Error::InvalidLabelling(_) => "InvalidLabelling",
            Error::ZeroRootBracket { .. } => "ZeroRootBracket",
            Error::EtaNotPositiveAfterSwap { .. } => "EtaNotPositiveAfterSwap",
            Error::NotUnique { .. } => "NotUnique",
            Error::NonHermitianObservable { .. } => "NonHermitianObservable",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::InvalidRootIndex { .. } => "InvalidRootIndex",
            Error::AlreadyDiagonal => "AlreadyDiagonal",
            Error::ZeroPivot => "ZeroPivot",
            Error::StepDidNotReducePivot { .. } => "StepDidNotReducePivot",
            Error::MaxStepsExceeded { .. } => "MaxStepsExceeded",
            Error::DegenerateTop { .. } => "DegenerateTop",
            Error::NotAWeightState { .. } => "NotAWeightState",
            Error::NoProgress => "NoProgress",
            Error::ZeroGap => "ZeroGap",
            Error::GapBudgetInfeasible { .. } => "GapBudgetInfeasible",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::LeavesAlgebraSpan { .. } => "LeavesAlgebraSpan",
            Error::NotAGcs { .. } => "NotAGcs",
            Error::Parse(_) => "ParseError",
            Error::ValidationFailed(_) => "ValidationFailed",
            Error::Io(_) => "IoError",
        }
    }

    /// Failures of the numerical procedures, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::StepDidNotReducePivot { .. }
                | Error::MaxStepsExceeded { .. }
                | Error::NoProgress
                | Error::DegenerateTop { .. }
                | Error::ZeroGap
                | Error::NotUnique { .. }
                | Error::AlreadyDiagonal
                | Error::ZeroPivot
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
