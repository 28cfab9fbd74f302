//! Analysis toolkit for the zombies-and-survivors pursuit game on the
//! n-by-n toroidal grid.
//!
//! Zombies spawn uniformly at random and always step along a shortest path
//! to the survivor, breaking ties uniformly; the survivor follows either a
//! fixed move script or an adaptive rule.  The crate provides:
//!
//! - exact capture-probability fields for scripted survivors, computed by a
//!   backward sweep over the first `M = n/4` rounds ([`field`]);
//! - one-dimensional projections of those fields and two coupled lower-bound
//!   profiles with a bounded-difference property ([`projection`]);
//! - a seeded Monte Carlo simulator of the full game on the torus, with
//!   estimators for the capture probability and the zombie number
//!   ([`sim`]);
//! - exhaustive and heuristic minimization of the field weight over all
//!   length-`M` scripts ([`search`]);
//! - slow reference implementations used to cross-check the fast paths
//!   ([`reference`]).

pub mod field;
pub mod projection;
pub mod reference;
pub mod rng;
pub mod search;
pub mod sim;
pub mod strategy;
pub mod torus;

pub use field::{capture_field, export_field, step_back, terminal_field, weight, ExportFormat, ProbField, WeightSummary};
pub use projection::{check_domination, project, w_profile, z_profile, DominationReport, ProfileKind, ProjProfile};
pub use search::{exact_tn, local_search, scaling_sweep, SearchReport};
pub use sim::{
    bracket_zombie_number, coupled_boards_check, diagonal_survival_experiment, estimate_capture_prob, play,
    r3_return_probability, CaptureEstimate, CoupledReport, GameState, SurvivorPolicy, TrialOutcome,
};
pub use strategy::{builtin, enumerate_f0, format_strategy, parse_strategy, trajectory, Strategy, SurvivorTrajectory};
pub use torus::{apply_move, apply_move_torus, torus_distance, zombie_move_options, Move, PlanePoint, TorusPoint};

/// Errors shared by every module in the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("zombie and survivor occupy the same vertex; the game is already over")]
    ZombieAtSurvivor,
    #[error("grid size {n} is too small: need n >= {min}")]
    GridTooSmall { n: usize, min: usize },
    #[error("strategy header must look like `n=<int> start=<int>,<int>`: {0}")]
    MalformedHeader(String),
    #[error("illegal move character {0:?} (expected one of U, D, L, R, S)")]
    IllegalMoveChar(char),
    #[error("move script has length {got} but n={n} requires exactly {expected}")]
    WrongMoveCount { n: usize, expected: usize, got: usize },
    #[error("unknown strategy name {0:?}")]
    UnknownStrategy(String),
    #[error("square traversal count must be 1, 2, 3 or 8 (got {0})")]
    InvalidSquareCount(u64),
    #[error("strategy must end at the origin for this operation")]
    NotNormalized,
    #[error("horizon M={m} exceeds the exhaustive-enumeration guard M<={max}")]
    EnumerationTooLarge { m: usize, max: usize },
    #[error("survivor position ({x},{y}) lies outside the field window")]
    SurvivorOutOfWindow { x: i64, y: i64 },
    #[error("field round must be between 2 and M={m} to step backwards (got {round})")]
    BadRound { round: usize, m: usize },
    #[error("all coupled boards must share the same grid size and horizon")]
    MismatchedBoards,
    #[error("distance parameter must be even and at least 2 (got {0})")]
    OddDistance(u64),
    #[error("need at least {min} trials (got {got})")]
    TooFewTrials { got: u64, min: u64 },
    #[error("capture probability stayed below 1/2 up to k={k_max}; no crossing found")]
    BracketExhausted { k_max: u64 },
    #[error("size sweep needs at least 3 grid sizes (got {0})")]
    TooFewSizes(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
