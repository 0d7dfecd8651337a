use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be at least 1")]
    InvalidDimension,
    #[error("vector entry {index} is not finite: {value}")]
    NonFiniteEntry { index: usize, value: f64 },
    #[error("dictionary atom count must be even and at least 2, got {0}")]
    BadAtomCount(usize),
    #[error("atom {index} has norm {norm}, expected unit norm")]
    AtomNotUnit { index: usize, norm: f64 },
    #[error("dictionary is empty")]
    EmptyDictionary,
    #[error("p-norm parameter must satisfy p >= 1, got {0}")]
    BadNormExponent(f64),
    #[error("objective evaluated to a non-finite value at lambda = {lambda}")]
    NonFiniteEval { lambda: f64 },
    #[error("free-relaxation minimizer stayed on the search-box boundary after growing it to half-width {half_width}; objective appears unbounded along the search plane")]
    UnboundedDirection { half_width: f64 },
    #[error("search certified gap {gap} exceeds the requested tolerance {tolerance}")]
    GapContract { gap: f64, tolerance: f64 },
    #[error("weakness parameter must lie in (0, 1], got {0}")]
    BadWeakness(f64),
    #[error("error schedule value {value} at k = {k} lies outside [0, 1]")]
    BadDelta { k: usize, value: f64 },
    #[error("relaxation box half-width must be at least 1, got {0}")]
    BadBoxWidth(f64),
    #[error("reference optimum b is required but was not supplied")]
    MissingReference,
    #[error("rate fit needs at least 10 positive points in the window, found {0}")]
    DegenerateWindow(usize),
    #[error("recurrence hypothesis violated at step {step}: {detail}")]
    RecurrenceHypothesis { step: usize, detail: String },
    #[error("domain sampler produced a point outside the declared sublevel set (E = {value}, limit = {limit})")]
    SampleOutsideDomain { value: f64, limit: f64 },
    #[error("iteration {iteration}: {source}")]
    AtIteration {
        iteration: usize,
        source: Box<Error>,
    },
    #[error("config error at `{key}`: {message}")]
    Config { key: String, message: String },
    #[error("brute-force reference solve supports at most 3 atom pairs, dictionary has {0}")]
    ReferenceTooLarge(usize),
    #[error("analytic reference requires the quadratic target inside the unit l1 ball (||f||_1 = {0}); use bref.mode = brute-force")]
    AnalyticReferenceUnavailable(f64),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
