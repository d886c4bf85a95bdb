//! Equilibrium computation for two-player zero-sum games with perfect recall.
//!
//! [`solve_lp`] is the primary, exact solver. [`solve_cfr`] and
//! [`solve_normal_form`] are independent cross-checks.

mod best_response;
mod cfr;
pub mod lp;
mod normal_form;
mod sequence;

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::Serialize;

pub use best_response::{best_response, deviation_gains, exploitability, BestResponse};
pub use cfr::solve_cfr;
pub use normal_form::{
    enumerate_normal_form, enumerate_normal_form_with_cap, solve_matrix_game, solve_normal_form, MatrixSolution,
    NormalForm, DEFAULT_CELL_CAP, DEFAULT_STRATEGY_CAP,
};
pub use sequence::{solve_sequence_form, LpEquilibrium, SequenceForm, Sequences};

use crate::error::{Error, Result};
use crate::gametree::{BehaviorProfile, GameTree};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Lp,
    Cfr,
    NormalForm,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Lp => "lp",
            Method::Cfr => "cfr",
            Method::NormalForm => "normal-form",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        match s {
            "lp" => Ok(Method::Lp),
            "cfr" => Ok(Method::Cfr),
            "normal-form" | "enum" => Ok(Method::NormalForm),
            other => Err(Error::Parse(format!("unknown solver method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult<T = Rational> {
    /// Value to player 1.
    pub value: T,
    pub profile: BehaviorProfile<T>,
    pub exploitability: T,
    pub method: Method,
}

/// Exact equilibrium via the sequence-form LP.
///
/// The returned profile is certified: its exploitability is recomputed by
/// exact best responses and must be zero.
pub fn solve_lp(tree: &GameTree) -> Result<SolveResult> {
    let eq = solve_sequence_form(tree)?;
    if eq.value != eq.dual_value {
        return Err(Error::Internal(format!("duality gap: {} vs {}", eq.value, eq.dual_value)));
    }
    let exploitability = exploitability(tree, &eq.profile)?;
    if !exploitability.is_zero() {
        return Err(Error::Internal(format!("LP profile is exploitable by {exploitability}")));
    }
    Ok(SolveResult { value: eq.value, profile: eq.profile, exploitability, method: Method::Lp })
}
