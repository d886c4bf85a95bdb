//! Brute-force normal form: every pure strategy of each player against every
//! pure strategy of the other, evaluated exactly on the tree.
//!
//! Information sets that chance never reaches cannot affect any payoff, so
//! only the reachable ones are enumerated; the rest are pinned to their
//! first action.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gametree::{BehaviorProfile, GameTree, InfosetId, NodeId, NodeKind, Player};
use crate::rational::Rational;
use crate::solver::lp::{LinearProgram, RowKind};
use crate::solver::{exploitability, Method, SequenceForm, SolveResult};

pub const DEFAULT_STRATEGY_CAP: u128 = 1 << 20;

/// Limit on rows times columns. Each entry is an exact tree walk and the
/// matrix LP is dense, so a large product is out of reach even when each
/// player is within the strategy cap.
pub const DEFAULT_CELL_CAP: u128 = 1 << 20;

#[derive(Debug, Clone)]
pub struct NormalForm {
    /// Information sets each player chooses at, in id order.
    pub relevant: [Vec<InfosetId>; 2],
    /// Pure strategies: one action index per relevant information set.
    pub strategies: [Vec<Vec<usize>>; 2],
    /// `payoffs[i][j]`: value to player 1 of row strategy `i` against column `j`.
    pub payoffs: Vec<Vec<Rational>>,
}

impl NormalForm {
    pub fn shape(&self) -> (usize, usize) {
        (self.strategies[0].len(), self.strategies[1].len())
    }

    /// Action index per information set (all of them) for one pure strategy.
    fn choices(&self, tree: &GameTree, player: Player, s: usize, into: &mut [usize]) {
        for (&info, &a) in self.relevant[player.index()].iter().zip(&self.strategies[player.index()][s]) {
            into[info] = a;
        }
        let _ = tree;
    }

    /// The deterministic profile of row `s1` against column `s2`.
    pub fn pure_profile(&self, tree: &GameTree, s1: usize, s2: usize) -> BehaviorProfile {
        let mut choice = vec![0usize; tree.infosets().len()];
        self.choices(tree, Player::One, s1, &mut choice);
        self.choices(tree, Player::Two, s2, &mut choice);
        BehaviorProfile::pure(tree, |i| choice[i.id])
    }
}

pub fn enumerate_normal_form(tree: &GameTree) -> Result<NormalForm> {
    enumerate_normal_form_with_cap(tree, DEFAULT_STRATEGY_CAP)
}

pub fn enumerate_normal_form_with_cap(tree: &GameTree, cap: u128) -> Result<NormalForm> {
    let reach = tree.chance_reach();
    let mut relevant: [Vec<InfosetId>; 2] = [Vec::new(), Vec::new()];
    for info in tree.infosets() {
        if info.members.iter().any(|&m| !reach[m].is_zero()) {
            relevant[info.player.index()].push(info.id);
        }
    }
    let mut strategies: [Vec<Vec<usize>>; 2] = [Vec::new(), Vec::new()];
    for player in Player::BOTH {
        let radices: Vec<usize> = relevant[player.index()].iter().map(|&i| tree.infoset(i).actions.len()).collect();
        let count = radices.iter().try_fold(1u128, |acc, &r| acc.checked_mul(r as u128));
        match count {
            Some(c) if c <= cap => {}
            _ => {
                let shown = count.map_or_else(|| "more than 2^128".to_string(), |c| c.to_string());
                return Err(Error::TooLarge { player: player.number(), count: shown, cap });
            }
        }
        strategies[player.index()] = mixed_radix(&radices);
    }
    let (rows, cols) = (strategies[0].len(), strategies[1].len());
    if rows as u128 * cols as u128 > DEFAULT_CELL_CAP {
        return Err(Error::MatrixTooLarge { rows, cols, cap: DEFAULT_CELL_CAP });
    }

    // chance-weighted payoff at every terminal
    let weight: Vec<Option<Rational>> = tree
        .nodes()
        .iter()
        .map(|n| match &n.kind {
            NodeKind::Terminal(u) if !reach[n.id].is_zero() => Some(&reach[n.id] * u),
            _ => None,
        })
        .collect();

    let mut nf = NormalForm { relevant, strategies, payoffs: Vec::new() };
    let (rows, cols) = nf.shape();
    let mut choice = vec![0usize; tree.infosets().len()];
    let mut payoffs = Vec::with_capacity(rows);
    for s1 in 0..rows {
        nf.choices(tree, Player::One, s1, &mut choice);
        let mut row = Vec::with_capacity(cols);
        for s2 in 0..cols {
            nf.choices(tree, Player::Two, s2, &mut choice);
            row.push(follow(tree, &choice, &weight, tree.root()));
        }
        payoffs.push(row);
    }
    nf.payoffs = payoffs;
    Ok(nf)
}

/// All digit vectors for the given radices, first digit most significant.
fn mixed_radix(radices: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(radices.len())];
    for &r in radices {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..r).map(move |a| {
                    let mut v = prefix.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out
}

fn follow(tree: &GameTree, choice: &[usize], weight: &[Option<Rational>], id: NodeId) -> Rational {
    match &tree.node(id).kind {
        NodeKind::Terminal(_) => weight[id].clone().unwrap_or_else(Rational::zero),
        NodeKind::Chance(branches) => branches
            .iter()
            .filter(|b| !b.prob.is_zero())
            .map(|b| follow(tree, choice, weight, b.child))
            .sum(),
        NodeKind::Decision { infoset, actions, .. } => follow(tree, choice, weight, actions[choice[*infoset]].1),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSolution {
    /// Value to the row (maximizing) player.
    pub value: Rational,
    pub row: Vec<Rational>,
    pub col: Vec<Rational>,
}

/// Exact minimax solution of a matrix game. Duplicate rows and columns are
/// collapsed first; the LP is set up so its constraint count is the smaller
/// dimension.
pub fn solve_matrix_game(payoffs: &[Vec<Rational>]) -> Result<MatrixSolution> {
    let m = payoffs.len();
    let n = payoffs.first().map_or(0, Vec::len);
    if m == 0 || n == 0 || payoffs.iter().any(|r| r.len() != n) {
        return Err(Error::Internal("empty or ragged payoff matrix".into()));
    }
    let rows = distinct(m, |i| payoffs[i].clone());
    let cols = distinct(n, |j| payoffs.iter().map(|r| r[j].clone()).collect::<Vec<_>>());
    let reduced: Vec<Vec<Rational>> =
        rows.iter().map(|&i| cols.iter().map(|&j| payoffs[i][j].clone()).collect()).collect();

    let (value, x, y) = if rows.len() >= cols.len() {
        solve_row_player(&reduced)?
    } else {
        let flipped: Vec<Vec<Rational>> =
            (0..cols.len()).map(|j| (0..rows.len()).map(|i| -&reduced[i][j]).collect()).collect();
        let (v, y, x) = solve_row_player(&flipped)?;
        (-v, x, y)
    };
    let mut row = vec![Rational::zero(); m];
    for (k, &i) in rows.iter().enumerate() {
        row[i] = x[k].clone();
    }
    let mut col = vec![Rational::zero(); n];
    for (k, &j) in cols.iter().enumerate() {
        col[j] = y[k].clone();
    }
    Ok(MatrixSolution { value, row, col })
}

/// First index of every distinct vector.
fn distinct<K: std::hash::Hash + Eq>(count: usize, key: impl Fn(usize) -> K) -> Vec<usize> {
    let mut seen: HashMap<K, usize> = HashMap::new();
    (0..count).filter(|&i| seen.insert(key(i), i).is_none()).collect()
}

/// `max v s.t. v <= x·A[:, j] for all j, sum x = 1`; the column strategy is
/// read from the multipliers.
fn solve_row_player(a: &[Vec<Rational>]) -> Result<(Rational, Vec<Rational>, Vec<Rational>)> {
    let m = a.len();
    let n = a[0].len();
    let mut lp = LinearProgram::new(m + 1);
    lp.set_free(m);
    lp.set_objective(m, Rational::one());
    for j in 0..n {
        let mut coeffs = vec![(m, Rational::one())];
        coeffs.extend((0..m).filter(|&i| !a[i][j].is_zero()).map(|i| (i, -&a[i][j])));
        lp.add_row(coeffs, RowKind::Le, Rational::zero());
    }
    lp.add_row((0..m).map(|i| (i, Rational::one())).collect(), RowKind::Eq, Rational::one());
    let sol = lp.maximize().map_err(|e| Error::Internal(e.to_string()))?;
    lp.verify(&sol).map_err(Error::Internal)?;
    Ok((sol.objective, sol.values[..m].to_vec(), sol.duals[..n].to_vec()))
}

/// Equilibrium from the normal form, converted to behavior strategies
/// through realization plans.
pub fn solve_normal_form(tree: &GameTree) -> Result<SolveResult> {
    let nf = enumerate_normal_form(tree)?;
    let sol = solve_matrix_game(&nf.payoffs)?;
    let sf = SequenceForm::new(tree);
    let mut profile = BehaviorProfile::empty(tree);
    for (player, mix) in [(Player::One, &sol.row), (Player::Two, &sol.col)] {
        let seqs = &sf.players[player.index()];
        let mut plan = vec![Rational::zero(); seqs.count];
        plan[0] = Rational::one();
        let mut choice = vec![0usize; tree.infosets().len()];
        for (s, w) in mix.iter().enumerate().filter(|(_, w)| !w.is_zero()) {
            nf.choices(tree, player, s, &mut choice);
            // infosets come in preorder, so a parent sequence is settled first
            let mut reached = vec![false; seqs.count];
            reached[0] = true;
            for (k, &info) in seqs.infosets.iter().enumerate() {
                if reached[seqs.parent[k]] {
                    let seq = seqs.first[k] + choice[info];
                    reached[seq] = true;
                    plan[seq] += w;
                }
            }
        }
        sf.behavior(tree, player, &plan, &mut profile);
    }
    let exploitability = exploitability(tree, &profile)?;
    Ok(SolveResult { value: sol.value, profile, exploitability, method: Method::NormalForm })
}
