use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("the positive root of degree {n} of {value} is not rational")]
    IrrationalRoot { value: String, n: u32 },
    #[error("scalar magnitude must be a positive rational, got {0}")]
    NonPositiveMagnitude(String),
    #[error("element list is not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("not an abelian 3-cocycle: {0}")]
    NotACocycle(String),
    #[error("not a symmetric 2-cocycle: {0}")]
    NotAbelian2Cocycle(String),
    #[error("not a quadratic form: {0}")]
    NotAQuadraticForm(String),
    #[error("unsupported values: {0}")]
    UnsupportedValues(String),
    #[error("form takes a value outside {{1, -1}} at {0}")]
    ValuesNotPm1(String),
    #[error("form is not constant on cosets of the subgroup: {0}")]
    NotCosetConstant(String),
    #[error("group of order {order} exceeds the enumeration bound {bound}")]
    GroupTooLarge { order: usize, bound: usize },
    #[error("no embedding into {0}")]
    NoSuchEmbedding(String),
    #[error("series live in different spaces: {0} vs {1}")]
    TagMismatch(String, String),
    #[error("shift diverges in the target space: {0}")]
    DivergentInTarget(String),
    #[error("composites are not proportional at {0}")]
    NotProportional(String),
    #[error("operator vanishes: {0}")]
    ZeroOperator(String),
    #[error("all composites vanish at {0}")]
    ZeroComposite(String),
    #[error("2-cochain is not normalized at {0}")]
    NotNormalized(String),
    #[error("pairing is degenerate")]
    Degenerate,
    #[error("trace is not trivial on the subgroup and constant on its cosets: {0}")]
    TraceNotCosetConstant(String),
    #[error("invalid algebra data: {0}")]
    InvalidData(String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
}
