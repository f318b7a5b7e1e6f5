use thiserror::Error;

use crate::admittance::FaultType;
use crate::loops::Loop;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The network file is not valid TOML or does not match the schema.
    #[error("parse error: {0}")]
    Parse(String),

    /// The file parsed but describes an unusable network.
    #[error("validation error at {field}: {message}")]
    Validation { field: String, message: String },

    #[error("fault location m_T = {m_t} outside [{lo}, {hi}]")]
    LocationRange { m_t: f64, lo: f64, hi: f64 },

    #[error("fault resistance fraction m_F = {0} outside [0, 1]")]
    ResistanceRange(f64),

    #[error("maximum fault resistance must be positive, got {0}")]
    FaultResistance(f64),

    #[error("{what} requires m_F > 0; bolted faults bypass the network solve")]
    BoltedFault { what: &'static str },

    #[error("singular impedance matrix for {0}")]
    SingularImpedance(String),

    #[error("singular system ({context}), condition estimate {cond:.3e}")]
    Singular { context: String, cond: f64 },

    #[error("loop {lp} is not energized (|i_A| = {magnitude:.3e})")]
    Underexcited { lp: Loop, magnitude: f64 },

    #[error("incremental loop current for {lp} is degenerate (|i_A| = {magnitude:.3e})")]
    DegenerateDenominator { lp: Loop, magnitude: f64 },

    #[error("loop {lp} does not see a {eta} fault")]
    LoopMismatch { lp: Loop, eta: FaultType },

    #[error("empty grid")]
    EmptyGrid,

    #[error("at grid point (m_T = {m_t}, m_F = {m_f}): {source}")]
    AtGridPoint {
        m_t: f64,
        m_f: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn at(self, m_t: f64, m_f: f64) -> Self {
        Error::AtGridPoint {
            m_t,
            m_f,
            source: Box::new(self),
        }
    }
}
