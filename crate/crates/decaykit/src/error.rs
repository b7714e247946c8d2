//! Error type shared by every module.
//!
//! Variants split into two families. Configuration problems (bad input that the
//! caller can fix) map to exit code 2 in the command-line tool, numerical or
//! physical failures map to exit code 3.

use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    // special functions
    #[error("argument {re} + {im}i lies on the branch cut (negative real axis)")]
    BranchCutViolation { re: f64, im: f64 },
    #[error("gamma function pole at non-positive integer {0}")]
    PoleOfGamma(f64),
    #[error("zero raised to non-positive power {0}")]
    ZeroBase(f64),
    #[error("non-finite result in {0}")]
    NonfiniteResult(&'static str),

    // density of states
    #[error("Gaussian form factor is not of exponential order on the imaginary axis")]
    GaussianRejected,
    #[error("exponent nu = {nu} outside the range allowed for the {form_factor} form factor")]
    NuOutOfRange { nu: f64, form_factor: &'static str },
    #[error("constant form factor needs at least two resonances")]
    SingleResonanceConstantFF,
    #[error("constant form factor residues violate the sum rules (residuals {sum_rule:e}, {decay_rule:e})")]
    ConstantFFConditions { sum_rule: f64, decay_rule: f64 },
    #[error("narrow-resonance mode requires x_s <= {limit}, got {x}")]
    NarrowModeInvalid { x: f64, limit: f64 },
    #[error("density is negative at E = {energy} (rho = {value:e}, peak {peak:e})")]
    NegativeDensity { energy: f64, value: f64, peak: f64 },
    #[error("normalisation mismatch: closed form {closed}, quadrature {quadrature}")]
    NormalizationMismatch { closed: f64, quadrature: f64 },
    #[error("invalid pole: {0}")]
    InvalidPole(String),
    #[error("residue count {residues} does not match pole count {poles}")]
    ResidueCountMismatch { residues: usize, poles: usize },

    // quadrature and solvers
    #[error("quadrature did not converge in {context} (error estimate {estimate:e})")]
    QuadratureNonconvergence {
        context: &'static str,
        estimate: f64,
    },
    #[error("no intersection: {0}")]
    NoIntersection(String),
    #[error("{0} is not available for this configuration")]
    NotApplicable(String),

    // moments
    #[error("moment of order {0} diverges or failed its tail test")]
    MomentDivergent(u32),
    #[error("moment order {order} exceeds the supported maximum {max}")]
    OrderTooHigh { order: u32, max: u32 },
    #[error("energy variance is not positive ({0:e})")]
    NegativeVariance(f64),

    // regions
    #[error("transition constant denominator vanishes")]
    DegenerateDenominator,
    #[error("at least two poles are needed")]
    SinglePole,

    // autocorrelation
    #[error("sampled series is too short: {0}")]
    InsufficientSampling(String),
    #[error("level weights sum to {0}, expected 1")]
    WeightsNotNormalized(f64),

    // configuration
    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    /// True for errors caused by invalid user input rather than by the numerics.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config(_)
                | Error::GaussianRejected
                | Error::NuOutOfRange { .. }
                | Error::SingleResonanceConstantFF
                | Error::NarrowModeInvalid { .. }
                | Error::InvalidPole(_)
                | Error::ResidueCountMismatch { .. }
                | Error::OrderTooHigh { .. }
                | Error::WeightsNotNormalized(_)
                | Error::SinglePole
        )
    }

    /// Variant name, printed by the command-line tool next to the message.
    pub fn kind(&self) -> String {
        let debug = format!("{self:?}");
        debug
            .split(|c: char| !c.is_alphanumeric())
            .next()
            .unwrap_or_default()
            .to_string()
    }

    /// Process exit status used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        if self.is_config() {
            2
        } else {
            3
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
