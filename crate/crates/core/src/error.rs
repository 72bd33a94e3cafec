use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("element {0} is uncuttable and cannot be removed")]
    RemovingUncuttable(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("every {0} path consists of uncuttable elements only")]
    NoFiniteCut(String),

    #[error("unknown atom {0}")]
    UnknownAtom(String),
    #[error("invalid probability space: {0}")]
    InvalidSpace(String),
    #[error("marginal mass of atom {0} is zero")]
    DegenerateMarginal(String),
    #[error("support graph of the correlated space is disconnected")]
    DisconnectedSupport,

    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("size guard: {what} = {count} exceeds limit {limit}")]
    SizeGuard {
        what: &'static str,
        count: u128,
        limit: u128,
    },
    #[error("coordinate {0} out of range")]
    CoordinateOutOfRange(usize),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),

    #[error("infeasible degrees: {0}")]
    InfeasibleDegrees(String),
    #[error("label count mismatch: unique games has {ug} labels, test has {test}")]
    LabelMismatch { ug: usize, test: usize },
    #[error("labeling violates edge ({u}, {w}) incident on W'")]
    LabelingNotPerfectOnWPrime { u: String, w: String },
    #[error("invalid unique games instance: {0}")]
    InvalidUniqueGames(String),

    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("row pool exceeded its cap of {0} rows")]
    RowPoolExhausted(usize),
    #[error("fractional solution leaves a short path with mass {0} < 1")]
    InfeasibleLpInput(String),
    #[error("cannot save {vertex:?} on day {day}: already burning")]
    SaveBurntVertex { vertex: String, day: usize },
    #[error("day {day} spends {spent}, above the budget {budget}")]
    BudgetExceeded {
        day: usize,
        spent: String,
        budget: String,
    },
    #[error("wrong problem kind: expected {0}")]
    WrongProblem(&'static str),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse(err.to_string())
    }
}

pub(crate) fn guard(what: &'static str, count: u128, limit: u128) -> Result<()> {
    if count > limit {
        Err(Error::SizeGuard { what, count, limit })
    } else {
        Ok(())
    }
}
