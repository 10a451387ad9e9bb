use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

/// The first pair of cells that breaks the standard-filling order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableauViolation {
    /// `(column, row)` of the earlier cell, columns zero-based and rows one-based.
    pub first: (usize, usize),
    pub second: (usize, usize),
    pub first_entry: usize,
    pub second_entry: usize,
    pub direction: &'static str,
}

impl core::fmt::Display for TableauViolation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(
            f,
            "{} not increasing: cell (col {}, row {}) holds {} but cell (col {}, row {}) holds {}",
            self.direction,
            self.first.0,
            self.first.1,
            self.first_entry,
            self.second.0,
            self.second.1,
            self.second_entry
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("malformed tableau: {0}")]
    MalformedTableau(String),

    #[error("tableau is not standard: {0}")]
    NotStandard(TableauViolation),

    #[error("vanishing sequence {0} is not strictly decreasing and non-negative")]
    NotDecreasing(String),

    #[error("vanishing sequences have lengths {left} and {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("vanishing pair exceeds degree at t={t}: {sum} > {degree}")]
    PairExceedsDegree { t: usize, sum: i64, degree: i64 },

    #[error("vanishing pair reaches the degree twice, at t={first} and t={second}")]
    TwoEqualities { first: usize, second: usize },

    #[error("node {node}: u_{t}(Q) + u_{{r-t}}(P) = {sum} < {bound}")]
    NodeInequality { node: usize, t: usize, sum: i64, bound: i64 },

    #[error("series is not refined at node {node} (t={t})")]
    NotRefined { node: usize, t: usize },

    #[error("series has a base point at the end of the chain (component {component})")]
    EndpointBasePoint { component: usize },

    #[error("effective series condition ({condition}) fails at {location}")]
    EffectiveCondition { condition: &'static str, location: String },

    #[error("side degree d'_{side}({component}) = {value} is negative")]
    NegativeSideDegree { component: usize, side: &'static str, value: i64 },

    #[error("series data is inconsistent: {0}")]
    InconsistentSeries(String),

    #[error("loop {loop_index}: lengths must be strictly positive")]
    NonPositiveLength { loop_index: usize },

    #[error("point {0} does not lie on the chain")]
    InvalidPoint(String),

    #[error("rank deficiency at loop {loop_index}")]
    RankDeficiency { loop_index: usize },

    #[error("point on loop {loop_index} is special for both t={first} and t={second}; the chain is not generic")]
    AmbiguousSpecialPoint { loop_index: usize, first: usize, second: usize },

    #[error("could not sample a generic point on loop {loop_index}")]
    SamplingFailed { loop_index: usize },

    #[error("oracle too large: {what} is {size}, cap {cap}")]
    OracleTooLarge { what: &'static str, size: u128, cap: u128 },

    #[error("vanishing orders disagree at i={i}, s={s}: {left} vs {right}")]
    VanishingDisagreement { i: usize, s: usize, left: i64, right: i64 },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}
