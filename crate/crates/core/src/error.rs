use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A sub-flow left its regime of existence (shock formation, finite-time blow-up).
    #[error("blow-up in flow {flow}: {detail}")]
    BlowUp { flow: String, detail: String },

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    /// Failure raised while advancing step `step` of a splitting run.
    #[error("step {step}: {source}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("point (t={t}, tau={tau}) lies outside the admissible domain of the extension")]
    OutsideDomain { t: f64, tau: f64 },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("time step {dt} is not admissible: must be below {bound}")]
    Inadmissible { dt: f64, bound: f64 },

    #[error("slope unavailable: {0}")]
    SlopeUnavailable(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn at_step(step: usize, source: Error) -> Self {
        Error::AtStep {
            step,
            source: Box::new(source),
        }
    }

    /// Index of the failing step when the error came out of a splitting run.
    pub fn step(&self) -> Option<usize> {
        match self {
            Error::AtStep { step, .. } => Some(*step),
            _ => None,
        }
    }

    /// True when the root cause is a blow-up of a sub-flow.
    pub fn is_blow_up(&self) -> bool {
        match self {
            Error::BlowUp { .. } => true,
            Error::AtStep { source, .. } => source.is_blow_up(),
            _ => false,
        }
    }
}
