use std::fmt;

use strichartz::atoms::AtomError;
use strichartz::estimator::EstimatorError;
use strichartz::exponents::ExponentError;
use strichartz::propagator::PropagatorError;
use strichartz::whitney::WhitneyError;

pub const FAILURE: u8 = 1;
pub const ASSERTION: u8 = 1;
pub const PARSE: u8 = 2;
pub const RESOLUTION: u8 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        CliError {
            code: PARSE,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<ExponentError> for CliError {
    fn from(e: ExponentError) -> Self {
        CliError::parse(e.to_string())
    }
}

impl From<WhitneyError> for CliError {
    fn from(e: WhitneyError) -> Self {
        CliError::parse(e.to_string())
    }
}

impl From<AtomError> for CliError {
    fn from(e: AtomError) -> Self {
        CliError::parse(e.to_string())
    }
}

impl From<PropagatorError> for CliError {
    fn from(e: PropagatorError) -> Self {
        let code = match e {
            PropagatorError::BeyondHorizon { .. } => RESOLUTION,
            PropagatorError::InvalidGrid(_) | PropagatorError::InvalidTimes => PARSE,
            _ => FAILURE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<EstimatorError> for CliError {
    fn from(e: EstimatorError) -> Self {
        match e {
            EstimatorError::Propagator(p) => p.into(),
            EstimatorError::Whitney(w) => w.into(),
            EstimatorError::UnderResolved(_) => CliError {
                code: RESOLUTION,
                message: e.to_string(),
            },
            EstimatorError::InvalidParams(_) => CliError::parse(e.to_string()),
            _ => CliError {
                code: FAILURE,
                message: e.to_string(),
            },
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError {
            code: FAILURE,
            message: e.to_string(),
        }
    }
}
