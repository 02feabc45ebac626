use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("no primitive direction: the zero vector has no primitive multiple")]
    ZeroVector,

    #[error("vector {0} is not primitive (gcd {1}); call primitive() first")]
    NotPrimitive(String, String),

    #[error("matrix is rank deficient: computed rank {rank} < {cols} columns")]
    RankDeficient { rank: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("polytope parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("vertex enumeration is limited to dimension <= {limit}, polyhedron has dimension {dim}")]
    DimensionGuard { dim: usize, limit: usize },

    #[error("polyhedron is not pointed (lineality space of dimension {lineality}); vertices are undefined")]
    NotPointed { lineality: usize },

    #[error("unbounded polyhedron requires a bounding box")]
    UnboundedNeedsBox,

    #[error("polyhedron is unbounded; {0} needs a bounded polytope")]
    Unbounded(&'static str),

    #[error("lattice coordinate {0} does not fit in a 64-bit weight")]
    Overflow(String),

    #[error("rank mismatch: expected rank {0}, found rank {1}")]
    RankMismatch(usize, usize),

    #[error("convolution of two infinite-support characters is not defined")]
    InfiniteConvolution,

    #[error("unsupported character operation: {0}")]
    Unsupported(String),

    #[error(
        "fiber over level {level} of direction {xi} is unbounded; \
         the preimage of each lattice point must be compact"
    )]
    UnboundedFiber { xi: String, level: String },

    #[error("polyhedron fails the Delzant condition: {0}")]
    NotDelzant(String),

    #[error("level {level} is not regular for direction {xi}: attained at vertex {vertex}")]
    IrregularLevel { xi: String, level: i64, vertex: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid model specification: {0}")]
    InvalidModel(String),

    #[error("indicial analysis is ambiguous at the inner radius (exponent {0}); refine the grid")]
    AmbiguousIndicial(f64),

    #[error("index unresolved; refine grid or adjust deformation ({0})")]
    Unresolved(String),
}

impl Error {
    /// Stable snake-case name of the variant, for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroVector => "zero_vector",
            Error::NotPrimitive(..) => "not_primitive",
            Error::RankDeficient { .. } => "rank_deficient",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::Parse { .. } => "parse",
            Error::DimensionGuard { .. } => "dimension_guard",
            Error::NotPointed { .. } => "not_pointed",
            Error::UnboundedNeedsBox => "unbounded_needs_box",
            Error::Unbounded(_) => "unbounded",
            Error::Overflow(_) => "overflow",
            Error::RankMismatch(..) => "rank_mismatch",
            Error::InfiniteConvolution => "infinite_convolution",
            Error::Unsupported(_) => "unsupported",
            Error::UnboundedFiber { .. } => "unbounded_fiber",
            Error::NotDelzant(_) => "not_delzant",
            Error::IrregularLevel { .. } => "irregular_level",
            Error::Precondition(_) => "precondition",
            Error::InvalidModel(_) => "invalid_model",
            Error::AmbiguousIndicial(_) => "ambiguous_indicial",
            Error::Unresolved(_) => "unresolved",
        }
    }
}
