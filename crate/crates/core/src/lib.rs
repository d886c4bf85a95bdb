//! Kuhn poker with probabilistic cheating and cheat detection.
//!
//! The crate builds the game variants as extensive-form trees
//! ([`kuhn`]), evaluates and solves them exactly ([`gametree`],
//! [`solver`]), provides the closed-form fair strategies ([`analytic`]) and
//! sweeps the cheat and detection probabilities ([`sweep`]).

pub mod analytic;
pub mod efg;
pub mod error;
pub mod gametree;
pub mod kuhn;
pub mod rational;
pub mod report;
pub mod solver;
pub mod sweep;

pub use error::{Error, Result};
pub use gametree::{
    expected_value, per_deal_breakdown, tree_stats, validate_tree, Action, BehaviorProfile, Card, Deal, DealBreakdown,
    DealRow, GameTree, Player, TreeStats,
};
pub use kuhn::{build_cheating, build_classic, build_detection, build_variant, CheatConfig};
pub use rational::Rational;
pub use solver::{solve_cfr, solve_lp, solve_normal_form, SolveResult};
