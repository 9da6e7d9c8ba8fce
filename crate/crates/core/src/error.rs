use thiserror::Error;

use crate::model::EffectMeasureKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("prevalences sum to {0}, expected exactly 1")]
    PrevalenceSum(String),
    #[error("joint distribution of stratum {label:?} sums to {sum}, expected exactly 1")]
    JointSum { label: String, sum: String },
    #[error("duplicate stratum label {0:?}")]
    DuplicateLabel(String),
    #[error("population has no strata")]
    EmptyPopulation,
    #[error("{0} is not a probability")]
    InvalidProbability(String),
    #[error("stratum {label:?}: {message}")]
    InconsistentCell { label: String, message: String },
    #[error("{kind} is undefined: {denominator}")]
    UndefinedMeasure {
        kind: EffectMeasureKind,
        denominator: &'static str,
    },
    #[error("no general collapsibility weights exist for {0}")]
    NoGeneralWeights(EffectMeasureKind),
    #[error("conditioning event {0} has probability zero")]
    DegenerateConditioningEvent(&'static str),
    #[error("stratum {0:?} has positive weight but an undefined value")]
    UndefinedStratumValue(String),
    #[error("stratum {label:?} is missing {cell}")]
    AbsentCell { label: String, cell: &'static str },
    #[error("{0} has no weight formula under this scheme")]
    UnsupportedKind(EffectMeasureKind),
    #[error("every weight is zero")]
    AllZeroWeights,
    #[error("{0} is zero")]
    ZeroDenominator(&'static str),
    #[error("negative weight {weight} for stratum {label:?}")]
    NegativeWeight { label: String, weight: String },
    #[error("weights do not match strata: {0}")]
    LabelMismatch(String),
    #[error("assignment mechanism is undefined for stratum {0:?}")]
    MechanismUndefined(String),
    #[error("no defined stratum values")]
    NoDefinedValues,
    #[error("unknown scenario {0:?}")]
    UnknownScenario(String),
    #[error("unknown effect measure {0:?}")]
    UnknownKind(String),
    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures that come from the mathematics (a zero denominator,
    /// a measure without weights) rather than from malformed input.
    pub fn is_undefinedness(&self) -> bool {
        matches!(
            self,
            Error::UndefinedMeasure { .. }
                | Error::NoGeneralWeights(_)
                | Error::DegenerateConditioningEvent(_)
                | Error::UndefinedStratumValue(_)
                | Error::AllZeroWeights
                | Error::ZeroDenominator(_)
                | Error::NoDefinedValues
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
