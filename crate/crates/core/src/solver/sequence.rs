//! Sequence-form representation and the zero-sum equilibrium LP.
//!
//! Player 1 solves
//!
//! ```text
//! max v[root]
//!   s.t.  F^T v - A^T x <= 0      one row per player-2 sequence
//!         E x = e                 realization-plan constraints
//!         x >= 0, v free
//! ```
//!
//! The multipliers of the first block are player 2's realization plan, so a
//! single solve yields both strategies and an exact duality certificate.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gametree::{validate_tree, BehaviorProfile, GameTree, InfosetId, NodeId, NodeKind, Player};
use crate::rational::Rational;
use crate::solver::lp::{LinearProgram, LpSolution, RowKind};

/// One player's sequences. Sequence 0 is the empty sequence; information
/// set `k` (local numbering) owns sequences `first[k] .. first[k] + actions`.
#[derive(Debug, Clone)]
pub struct Sequences {
    pub infosets: Vec<InfosetId>,
    pub first: Vec<usize>,
    pub parent: Vec<usize>,
    pub count: usize,
}

impl Sequences {
    fn new(tree: &GameTree, player: Player) -> Sequences {
        let mut infosets = Vec::new();
        let mut first = Vec::new();
        let mut count = 1;
        for info in tree.infosets_of(player) {
            infosets.push(info.id);
            first.push(count);
            count += info.actions.len();
        }
        let n = infosets.len();
        Sequences { infosets, first, parent: vec![usize::MAX; n], count }
    }

    pub fn local(&self, infoset: InfosetId) -> Option<usize> {
        self.infosets.binary_search(&infoset).ok()
    }
}

#[derive(Debug, Clone)]
pub struct SequenceForm {
    pub players: [Sequences; 2],
    /// Chance-weighted payoff to player 1 for each reachable sequence pair.
    pub payoff: BTreeMap<(usize, usize), Rational>,
}

impl SequenceForm {
    pub fn new(tree: &GameTree) -> SequenceForm {
        let mut players = [Sequences::new(tree, Player::One), Sequences::new(tree, Player::Two)];
        let mut payoff: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
        let mut stack: Vec<(NodeId, [usize; 2], Rational)> = vec![(tree.root(), [0, 0], Rational::one())];
        while let Some((id, seq, chance)) = stack.pop() {
            match &tree.node(id).kind {
                NodeKind::Terminal(u) => {
                    if !chance.is_zero() && !u.is_zero() {
                        *payoff.entry((seq[0], seq[1])).or_insert_with(Rational::zero) += &chance * u;
                    }
                }
                NodeKind::Chance(branches) => {
                    for b in branches {
                        stack.push((b.child, seq, &chance * &b.prob));
                    }
                }
                NodeKind::Decision { player, infoset, actions } => {
                    let seqs = &mut players[player.index()];
                    let k = seqs.local(*infoset).expect("infoset of this player");
                    seqs.parent[k] = seq[player.index()];
                    for (a, &(_, child)) in actions.iter().enumerate() {
                        let mut next = seq;
                        next[player.index()] = seqs.first[k] + a;
                        stack.push((child, next, chance.clone()));
                    }
                }
            }
        }
        SequenceForm { players, payoff }
    }

    /// Behavior strategy of `player` from a realization plan. Information
    /// sets whose parent sequence has weight zero get their first action.
    pub fn behavior(&self, tree: &GameTree, player: Player, plan: &[Rational], into: &mut BehaviorProfile) {
        let seqs = &self.players[player.index()];
        for (k, &id) in seqs.infosets.iter().enumerate() {
            let n = tree.infoset(id).actions.len();
            let parent = &plan[seqs.parent[k]];
            let dist = if parent.is_zero() {
                (0..n).map(|a| if a == 0 { Rational::one() } else { Rational::zero() }).collect()
            } else {
                (0..n).map(|a| &plan[seqs.first[k] + a] / parent).collect()
            };
            into.set(id, dist);
        }
    }

    /// Checks `E x = e`, `x >= 0` for `player`'s plan.
    pub fn is_realization_plan(&self, player: Player, plan: &[Rational]) -> bool {
        let seqs = &self.players[player.index()];
        if plan.len() != seqs.count || !plan[0].is_one() || plan.iter().any(|x| x < &Rational::zero()) {
            return false;
        }
        seqs.first.iter().enumerate().all(|(k, &f)| {
            let next = seqs.first.get(k + 1).copied().unwrap_or(seqs.count);
            (f..next).map(|s| &plan[s]).sum::<Rational>() == plan[seqs.parent[k]]
        })
    }

    /// Player 1's LP; see the module docs. Variables are `x` followed by
    /// `v` (root first, then player 2's information sets).
    pub fn equilibrium_lp(&self) -> LinearProgram {
        let [p1, p2] = &self.players;
        let nx = p1.count;
        let nv = p2.infosets.len() + 1;
        let mut lp = LinearProgram::new(nx + nv);
        for j in nx..nx + nv {
            lp.set_free(j);
        }
        lp.set_objective(nx, Rational::one());

        // v index per player-2 sequence, and the infosets each sequence leads to
        let mut owner = vec![0usize; p2.count];
        for (k, &f) in p2.first.iter().enumerate() {
            let next = p2.first.get(k + 1).copied().unwrap_or(p2.count);
            for o in owner.iter_mut().take(next).skip(f) {
                *o = k + 1;
            }
        }
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); p2.count];
        for (k, &parent) in p2.parent.iter().enumerate() {
            children[parent].push(k + 1);
        }
        let mut columns: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); p2.count];
        for ((s1, s2), a) in &self.payoff {
            columns[*s2].push((*s1, -a));
        }
        for s2 in 0..p2.count {
            let mut coeffs = vec![(nx + owner[s2], Rational::one())];
            coeffs.extend(children[s2].iter().map(|&c| (nx + c, -Rational::one())));
            coeffs.extend(columns[s2].iter().cloned());
            lp.add_row(coeffs, RowKind::Le, Rational::zero());
        }

        lp.add_row(vec![(0, Rational::one())], RowKind::Eq, Rational::one());
        for (k, &f) in p1.first.iter().enumerate() {
            let next = p1.first.get(k + 1).copied().unwrap_or(p1.count);
            let mut coeffs = vec![(p1.parent[k], -Rational::one())];
            coeffs.extend((f..next).map(|s| (s, Rational::one())));
            lp.add_row(coeffs, RowKind::Eq, Rational::zero());
        }
        lp
    }
}

/// Output of the sequence-form solve, before conversion to behavior.
#[derive(Debug, Clone)]
pub struct LpEquilibrium {
    pub value: Rational,
    /// Dual objective; equal to `value` for a correct solve.
    pub dual_value: Rational,
    pub plans: [Vec<Rational>; 2],
    pub profile: BehaviorProfile,
    pub pivots: usize,
}

pub fn solve_sequence_form(tree: &GameTree) -> Result<LpEquilibrium> {
    let diagnostics = validate_tree(tree);
    if let Some(d) = diagnostics.first() {
        return Err(Error::Internal(format!("invalid game tree: {d}")));
    }
    let sf = SequenceForm::new(tree);
    let lp = sf.equilibrium_lp();
    let sol: LpSolution = lp.maximize().map_err(|e| Error::Internal(e.to_string()))?;
    lp.verify(&sol).map_err(Error::Internal)?;

    let nx = sf.players[0].count;
    let x: Vec<Rational> = sol.values[..nx].to_vec();
    let y: Vec<Rational> = sol.duals[..sf.players[1].count].to_vec();
    if !sf.is_realization_plan(Player::One, &x) || !sf.is_realization_plan(Player::Two, &y) {
        return Err(Error::Internal("LP returned an invalid realization plan".into()));
    }
    let mut profile = BehaviorProfile::empty(tree);
    sf.behavior(tree, Player::One, &x, &mut profile);
    sf.behavior(tree, Player::Two, &y, &mut profile);
    let dual_value = lp.dual_objective(&sol.duals);
    Ok(LpEquilibrium { value: sol.objective, dual_value, plans: [x, y], profile, pivots: sol.pivots })
}
