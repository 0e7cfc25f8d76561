use thiserror::Error;

/// Errors raised by frame construction, mass validation and combination.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("frame must contain at least one element")]
    EmptyFrame,
    #[error("frame has {0} elements, at most {max} are supported", max = crate::frame::MAX_FRAME_SIZE)]
    FrameTooLarge(usize),
    #[error("frame labels must be non-empty")]
    EmptyLabel,
    #[error("duplicate frame label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("subset mask {bits:#b} lies outside a frame of {size} elements")]
    SubsetOutOfFrame { bits: u32, size: usize },
    #[error("element index {index} out of range for a frame of {size} elements")]
    ElementOutOfRange { index: usize, size: usize },
    #[error("the empty set carries mass {0}; a normalized assignment requires zero")]
    MassOnEmptySet(f64),
    #[error("mass {mass} on {subset} is not a finite value in [0, 1]")]
    InvalidMass { subset: String, mass: f64 },
    #[error("subset {0} is assigned more than once")]
    DuplicateSubset(String),
    #[error("masses sum to {total}, deviating from 1 by {deviation}")]
    NotNormalized { total: f64, deviation: f64 },
    #[error("cannot renormalize an assignment with zero total mass")]
    ZeroTotal,
    #[error("mass functions are defined over different frames")]
    FrameMismatch,
    #[error("total conflict: normalization denominator {denominator} is below the admissible threshold")]
    TotalConflict { denominator: f64 },
    #[error("lambda {0} is outside [0, 1]")]
    LambdaOutOfRange(f64),
    #[error("conjunctive combination left conflict {0} on the empty set and cannot be chained")]
    UnnormalizedConjunction(f64),
    #[error("no sources to fuse")]
    NoSources,
    #[error("fusion step {step} failed: {source}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("{grouping} grouping failed: {source}")]
    Grouping {
        grouping: &'static str,
        #[source]
        source: Box<Error>,
    },
    #[error("a decision needs at least two alternatives, frame has {0}")]
    TooFewAlternatives(usize),
}

impl Error {
    /// True for failures produced by applying a combination rule, as opposed
    /// to malformed input.
    pub fn is_rule_failure(&self) -> bool {
        match self {
            Error::TotalConflict { .. } | Error::UnnormalizedConjunction(_) => true,
            Error::AtStep { source, .. } | Error::Grouping { source, .. } => source.is_rule_failure(),
            _ => false,
        }
    }

    pub(crate) fn at_step(self, step: usize) -> Self {
        Error::AtStep {
            step,
            source: Box::new(self),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
