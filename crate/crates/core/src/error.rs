use thiserror::Error;

/// Position in a game source file (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl std::fmt::Display for Pos {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GameError {
    #[error("prior is not full support: type profile ({0}) has no positive probability")]
    PriorNotFullSupport(String),
    #[error("prior sums to {0}, not 1")]
    PriorNotNormalized(String),
    #[error("player {player} has an empty action set at history {history}")]
    EmptyActionSet { player: usize, history: String },
    #[error("no payoff for type profile ({types}) at terminal history {history}")]
    MissingPayoff { types: String, history: String },
    #[error("history {0} does not exist in the game tree")]
    DanglingHistory(String),
    #[error("invalid game: {0}")]
    Invalid(String),
    #[error("stage {stage} is out of range for horizon {horizon}")]
    StageOutOfRange { stage: usize, horizon: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("{pos}: syntax error: {message}")]
    Syntax { pos: Pos, message: String },
    #[error("{pos}: undeclared label `{label}`")]
    UndeclaredLabel { pos: Pos, label: String },
    #[error("{pos}: duplicate declaration `{what}`")]
    DuplicateDeclaration { pos: Pos, what: String },
    #[error(transparent)]
    Game(#[from] GameError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProfileError {
    #[error("invalid profile: {0}")]
    Invalid(String),
    #[error("unknown action `{label}` for player {player} at history {history}")]
    UnknownAction { player: usize, history: String, label: String },
    #[error("distribution for player {player} at history {history} sums to {sum}")]
    NotNormalized { player: usize, history: String, sum: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("observed opponent actions have zero perceived probability at history {0}")]
    ZeroProbabilityObservation(String),
    #[error("strategy profile is not totally mixed")]
    RequiresTotallyMixed,
    #[error("tremble limit did not stabilize: {0}")]
    LimitDidNotStabilize(String),
    #[error("game has {0} stages; this concept needs a one-stage game")]
    NotOneStage(usize),
    #[error("{0} pure profiles exceed the enumeration limit")]
    CombinatorialLimitExceeded(u128),
    #[error("parameter out of range: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("alpha must lie in (0,1), got {0}")]
    InvalidAlpha(String),
    #[error("epsilon must lie in (0,1/2), got {0}")]
    InvalidEpsilon(String),
    #[error("y must be below 1, got {0}")]
    InvalidY(String),
    #[error("unknown claim `{0}`")]
    UnknownClaim(String),
    #[error("{0}")]
    NoCandidate(String),
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Game(#[from] GameError),
}
