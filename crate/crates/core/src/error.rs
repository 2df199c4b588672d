use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {what} from {input:?}: {reason}")]
pub struct ParseError {
    pub what: &'static str,
    pub input: String,
    pub reason: String,
}

impl ParseError {
    pub fn new(what: &'static str, input: &str, reason: impl Into<String>) -> ParseError {
        ParseError { what, input: input.to_string(), reason: reason.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("u = {u} and v = {v} differ in parity")]
    Parity { u: i64, v: i64 },
    #[error("point {0} is not on the dyadic triangular lattice")]
    NotLattice(String),
    #[error("vertices do not form an equilateral lattice triangle with a horizontal side: {0}")]
    NotLatticeTriangle(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimilitudeError {
    #[error("source points are collinear or coincide")]
    DegenerateSource,
    #[error("no similitude maps the source triple onto the target triple")]
    NotSimilar,
    #[error("similitude exists but lies outside the lattice class: {0}")]
    OutOfClass(String),
    #[error("map has no unique fixed point (identity, translation or isometric reflection)")]
    NoUniqueFixedPoint,
    #[error("an IFS needs at least one map")]
    EmptyIfs,
    #[error("IFS member {0} is not contractive")]
    NotContractive(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DistanceError {
    #[error("triangle is not separated from piece {0}")]
    NotSeparated(String),
    #[error("distance minimiser {0} is a removed point; the infimum needs finer analysis")]
    RemovedMinimizer(String),
    #[error("target union is empty")]
    EmptyUnion,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("geometry derivation failed: {0}")]
    Geometry(String),
    #[error("unknown sabotage target {0:?}")]
    UnknownSabotage(String),
}
