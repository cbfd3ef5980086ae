use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma has a pole at {0}")]
    Pole(f64),

    #[error("rule size {n} outside 1..={max}")]
    RuleSize { n: usize, max: usize },

    #[error("weight exponent {0} must exceed -1")]
    InvalidExponent(f64),

    #[error("alpha must exceed -1/2 (got {0})")]
    InvalidOrder(f64),

    #[error("series argument |z| = {0} exceeds the precision window")]
    PrecisionLoss(f64),

    #[error("{0} is undefined at the origin")]
    Domain(&'static str),

    #[error("derivative order {requested} exceeds the available budget {available}")]
    DerivativeOrder { requested: usize, available: usize },

    #[error("function is not even: |f(x) - f(-x)| = {0:e}")]
    NotEven(f64),

    #[error("spectral window violated: |z|*a = {product} > {limit}")]
    Window { product: f64, limit: f64 },

    #[error("all samples vanish; no envelope can be fitted")]
    Degenerate,

    #[error("no polynomial order m <= {0} majorizes the samples")]
    EnvelopeCap(usize),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
}
