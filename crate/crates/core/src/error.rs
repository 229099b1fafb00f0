use alloc::string::String;

/// Errors raised by the symplectic and index computations.
///
/// Variants fall into three families: invalid input (structure checks that
/// fail), numerical instability (a rank or gauge decision that cannot be made
/// reliably), and identity violations (a verifier found two sides that
/// disagree, which signals a bug or an exhausted tolerance).
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix has odd dimension {0}")]
    OddDimension(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("structure map is not skew-adjoint (residual {0:.3e})")]
    NotSkewAdjoint(f64),
    #[error("matrix is singular or not invertible to tolerance")]
    Singular,
    #[error("space is not normalized (J^2 + I residual {0:.3e})")]
    NotNormalized(f64),
    #[error("matrix is not symplectic (residual {0:.3e})")]
    NotSymplectic(f64),
    #[error("matrix is not in the symplectic Lie algebra (residual {0:.3e})")]
    NotInAlgebra(f64),
    #[error("frame is rank deficient")]
    RankDeficient,
    #[error("numerical rank is ambiguous: singular value {value:.3e} near threshold {threshold:.3e}")]
    RankAmbiguous { value: f64, threshold: f64 },
    #[error("frames live in different spaces")]
    SpaceMismatch,
    #[error("frame is not Lagrangian (isotropy residual {0:.3e})")]
    NotLagrangian(f64),
    #[error("space has no Lagrangian subspaces (n+ = {plus}, n- = {minus})")]
    NoLagrangians { plus: usize, minus: usize },
    #[error("adaptive subdivision exceeded depth {0}")]
    SubdivisionLimit(u32),
    #[error("gauge-point count is unstable: {0}")]
    GaugeUnstable(String),
    #[error("subspace is not a complement of the Lagrangian")]
    NotComplement,
    #[error("path derivative unavailable")]
    DerivativeUnavailable,
    #[error("degenerate crossing at t = {0}")]
    DegenerateCrossing(f64),
    #[error("crossing at t = {0} is not isolated")]
    NonIsolatedCrossing(f64),
    #[error("index computations disagree: {0}")]
    IdentityMismatch(String),
    #[error("discontinuous junction at t = {t} (mismatch {mismatch:.3e})")]
    DiscontinuousJunction { t: f64, mismatch: f64 },
    #[error("path domains do not match")]
    DomainMismatch,
    #[error("time {0} lies outside the path domain")]
    OutOfDomain(f64),
    #[error("matrix is not an antisymplectic involution (residual {0:.3e})")]
    NotBrakeInvolution(f64),
    #[error("block identity violated: {0}")]
    BlockIdentityViolated(String),
    #[error("identity violated: {0}")]
    IdentityViolated(String),
    #[error("path is not a closed loop (mismatch {0:.3e})")]
    NotALoop(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Whether the error reflects numerical instability rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::RankAmbiguous { .. }
                | Error::SubdivisionLimit(_)
                | Error::GaugeUnstable(_)
                | Error::DegenerateCrossing(_)
                | Error::NonIsolatedCrossing(_)
        )
    }
}

pub type Result<T> = core::result::Result<T, Error>;
