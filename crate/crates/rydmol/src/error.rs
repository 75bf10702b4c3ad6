use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("bad config field `{field}`: {message}")]
    BadField { field: String, message: String },

    #[error(
        "node count mismatch for n={n}: expected {expected}, found {found} \
         (x_step={x_step}; mesh likely too coarse)"
    )]
    NodeCountMismatch {
        n: u32,
        expected: usize,
        found: usize,
        x_step: f64,
    },

    #[error(
        "wavefunction diverged at r = {radius:.3} bohr before the inner cutoff; \
         retry with r_min >= {suggested_cutoff:.3} bohr"
    )]
    Divergence { radius: f64, suggested_cutoff: f64 },

    #[error("grid mismatch: {left} vs {right}")]
    GridMismatch { left: String, right: String },

    #[error(
        "eigenvalues drift by {drift_mhz:.4} MHz between full and half grid \
         (tolerance {tol_mhz} MHz); refine the mesh"
    )]
    GridTooCoarse { drift_mhz: f64, tol_mhz: f64 },

    #[error("fit did not converge after {iterations} iterations: {trace}")]
    NonConvergence { iterations: usize, trace: String },

    #[error("no peak in fit window [{lo}, {hi}]")]
    NoPeak { lo: f64, hi: f64 },

    #[error("decay fit rejected: {0}")]
    NonDecaying(String),

    #[error(
        "chi^2 minimum sits at the edge of the scan range [{lo}, {hi}] bohr; \
         widen a_range"
    )]
    EdgeMinimum { lo: f64, hi: f64 },

    #[error("validity check failed for n = {n}: ratio {ratio:.2} < threshold {threshold}")]
    ValidityFailed { n: u32, ratio: f64, threshold: f64 },

    #[error("no bound level localized in the outermost well: {details}")]
    NoOuterLevel { details: String },

    #[error("{path}:{line}: {message}")]
    CsvParse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("n = {n}: {source}")]
    AtN { n: u32, source: Box<Error> },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn at_n(self, n: u32) -> Error {
        Error::AtN {
            n,
            source: Box::new(self),
        }
    }
}
