use thiserror::Error;

/// Errors from the generic numerical kernels.
#[derive(Debug, Clone, Error)]
pub enum NumericsError {
    #[error("quadrature did not converge after {subdivisions} subdivisions (best {best:e}, error {error:e})")]
    QuadratureNotConverged {
        best: f64,
        error: f64,
        subdivisions: usize,
    },
    #[error("invalid integration interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("summation exceeded {max_terms} terms (partial sum {partial:e})")]
    SumNotConverged { partial: f64, max_terms: usize },
    #[error("no sign change on bracket [{lo}, {hi}]: f(lo)={flo:e}, f(hi)={fhi:e}")]
    NoBracket { lo: f64, hi: f64, flo: f64, fhi: f64 },
    #[error("invalid numerical specification: {0}")]
    InvalidSpec(String),
    #[error("empty permittivity table")]
    EmptyTable,
    #[error("negative Im eps at table row {0} violates passivity")]
    NegativeImEps(usize),
}

/// Errors from permittivity models and optical tables.
#[derive(Debug, Clone, Error)]
pub enum MaterialError {
    #[error("frequency {omega:e} rad/s outside tabulated range [{lo:e}, {hi:e}]")]
    OutOfTableRange { omega: f64, lo: f64, hi: f64 },
    #[error("invalid optical table: {0}")]
    InvalidTable(String),
    #[error("material has no permittivity on this axis: {0}")]
    NoPermittivity(String),
    #[error("failed to read optical data file: {0}")]
    Io(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Errors from single-slab scattering amplitudes.
#[derive(Debug, Clone, Error)]
pub enum ScatteringError {
    #[error("singular mode: {0}")]
    SingularMode(String),
    #[error("invalid mode: {0}")]
    InvalidMode(String),
    #[error(transparent)]
    Material(#[from] MaterialError),
}

/// Errors from many-body cavity composition.
#[derive(Debug, Clone, Error)]
pub enum CavityError {
    #[error("singular intracavity factor {factor}: |1 - rho rho' e^(2 i k_z d)| below floor")]
    SingularCavity { factor: &'static str },
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
}

/// Crate-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Material(#[from] MaterialError),
    #[error(transparent)]
    Scattering(#[from] ScatteringError),
    #[error(transparent)]
    Cavity(#[from] CavityError),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },
    #[error("degenerate denominator: {0}")]
    DegenerateDenominator(String),
    #[error("flux is not monotone in T2 over the bracket; cannot certify a unique equilibrium temperature")]
    NonMonotoneFlux,
    #[error("profile resolution too coarse: {0}")]
    CoarseGrid(String),
}

impl Error {
    /// Wrap an error with a short description of what was being computed.
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
