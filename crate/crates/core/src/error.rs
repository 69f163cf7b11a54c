use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("not a permutation: {0}")]
    InvalidPerm(String),

    #[error("cannot parse {what}: {input}")]
    Parse { what: &'static str, input: String },

    #[error("empty generator list with unspecified degree")]
    EmptyGenerators,

    #[error("group is not transitive")]
    Intransitive,

    #[error("partition is not invariant under the group")]
    NotInvariant,

    #[error("partition is not a valid block system: {0}")]
    InvalidPartition(String),

    #[error("group order {order} exceeds the enumeration cap {cap}")]
    TooLarge { order: String, cap: u64 },

    #[error("degree {0} is too small for this operation")]
    DegreeTooSmall(usize),

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("not a subgroup")]
    NotSubgroup,

    #[error("largeness is not applicable for socle degree {0} (abelian or non-simple socle)")]
    NotApplicable(usize),

    #[error("block size {found} does not match socle degree {expected}")]
    BlockSizeMismatch { expected: usize, found: usize },

    #[error("kernel moves block {0}")]
    MovesBlock(usize),

    #[error("block kernel is trivial")]
    TrivialKernel,

    #[error("socle kernel order is not a power of the simple factor order")]
    NotSocleProduct,

    #[error("block systems are not nested")]
    NotNested,

    #[error("leaf count overflow")]
    LeafOverflow,

    #[error("invalid tower: {0}")]
    InvalidTower(String),

    #[error("inadmissible ramification data: {0}")]
    Inadmissible(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("polynomial vanishes modulo {0}")]
    ZeroModP(u64),

    #[error("iterate {iterate} exceeds the bit-size cap of {cap} bits")]
    Overflow { iterate: usize, cap: u64 },

    #[error("all primes in the scan were skipped")]
    AllSkipped,

    #[error("unknown catalog entry {0}")]
    UnknownGroup(String),

    #[error("catalog error: {0}")]
    Catalog(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Catalog(e.to_string())
    }
}
