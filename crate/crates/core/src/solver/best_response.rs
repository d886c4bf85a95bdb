//! Exact best responses by backward induction over the responder's
//! information sets, deepest first.

use num_traits::Zero;

use crate::error::Result;
use crate::gametree::{expected_value, own_histories, BehaviorProfile, GameTree, NodeId, NodeKind, Player};
use crate::rational::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct BestResponse<T> {
    /// Pure strategy over the responder's information sets only.
    pub strategy: BehaviorProfile<T>,
    /// Value to player 1 when the responder plays `strategy`.
    pub value: T,
}

/// Best response of `responder` to the opponent's part of `fixed`.
///
/// Ties go to the first action in the information set's action order.
/// Information sets the opponent never lets the responder reach get the
/// first action.
pub fn best_response<T: Scalar>(tree: &GameTree, fixed: &BehaviorProfile<T>, responder: Player) -> Result<BestResponse<T>> {
    let opponent = responder.opponent();
    fixed.check_covers(tree, &[opponent])?;

    let nodes = tree.nodes();
    // chance x opponent reach, filled in preorder
    let mut reach = vec![T::zero(); nodes.len()];
    reach[tree.root()] = T::one();
    for node in nodes {
        let here = reach[node.id].clone();
        match &node.kind {
            NodeKind::Chance(branches) => {
                for b in branches {
                    reach[b.child] = here.clone() * T::from_rational(&b.prob);
                }
            }
            NodeKind::Decision { player, infoset, actions } => {
                if *player == opponent {
                    let dist = fixed.get(*infoset).expect("covered");
                    for (&(_, child), p) in actions.iter().zip(dist) {
                        reach[child] = here.clone() * p.clone();
                    }
                } else {
                    for &(_, child) in actions {
                        reach[child] = here.clone();
                    }
                }
            }
            NodeKind::Terminal(_) => {}
        }
    }

    let depth = own_histories(tree);
    let mut order: Vec<_> = tree.infosets_of(responder).collect();
    order.sort_by_key(|i| std::cmp::Reverse(depth[i.members[0]].len()));

    let mut choice: Vec<Option<usize>> = vec![None; tree.infosets().len()];
    for info in order {
        let mut best: Option<(usize, T)> = None;
        for k in 0..info.actions.len() {
            let mut total = T::zero();
            for &h in &info.members {
                if reach[h].is_zero() {
                    continue;
                }
                let NodeKind::Decision { actions, .. } = &nodes[h].kind else { unreachable!() };
                total = total + reach[h].clone() * value_below(tree, fixed, &choice, opponent, actions[k].1);
            }
            let better = match &best {
                None => true,
                Some((_, b)) => match responder {
                    Player::One => total > *b,
                    Player::Two => total < *b,
                },
            };
            if better {
                best = Some((k, total));
            }
        }
        choice[info.id] = best.map(|(k, _)| k);
    }

    let mut strategy = BehaviorProfile::empty(tree);
    for info in tree.infosets_of(responder) {
        let pick = choice[info.id].unwrap_or(0);
        strategy.set(info.id, (0..info.actions.len()).map(|k| if k == pick { T::one() } else { T::zero() }).collect());
    }
    let value = value_below(tree, fixed, &choice, opponent, tree.root());
    Ok(BestResponse { strategy, value })
}

/// Expected payoff to player 1 below `id`, with the responder following
/// `choice` and the opponent following `fixed`.
fn value_below<T: Scalar>(
    tree: &GameTree,
    fixed: &BehaviorProfile<T>,
    choice: &[Option<usize>],
    opponent: Player,
    id: NodeId,
) -> T {
    match &tree.node(id).kind {
        NodeKind::Terminal(payoff) => T::from_rational(payoff),
        NodeKind::Chance(branches) => branches.iter().filter(|b| !b.prob.is_zero()).fold(T::zero(), |acc, b| {
            acc + T::from_rational(&b.prob) * value_below(tree, fixed, choice, opponent, b.child)
        }),
        NodeKind::Decision { player, infoset, actions } if *player == opponent => {
            let dist = fixed.get(*infoset).expect("covered");
            actions.iter().zip(dist).filter(|(_, p)| !p.is_zero()).fold(T::zero(), |acc, (&(_, child), p)| {
                acc + p.clone() * value_below(tree, fixed, choice, opponent, child)
            })
        }
        NodeKind::Decision { infoset, actions, .. } => {
            let k = choice[*infoset].expect("deeper information sets are decided first");
            value_below(tree, fixed, choice, opponent, actions[k].1)
        }
    }
}

/// Total gain both players could get by deviating from `profile`; zero
/// exactly at an equilibrium.
pub fn exploitability<T: Scalar>(tree: &GameTree, profile: &BehaviorProfile<T>) -> Result<T> {
    profile.check_covers(tree, &Player::BOTH)?;
    let best_one = best_response(tree, profile, Player::One)?.value;
    let best_two = best_response(tree, profile, Player::Two)?.value;
    Ok(best_one - best_two)
}

/// Per-player gains `(player 1, player 2)` from deviating, with the
/// profile's own value.
pub fn deviation_gains<T: Scalar>(tree: &GameTree, profile: &BehaviorProfile<T>) -> Result<(T, T, T)> {
    let value = expected_value(tree, profile)?;
    let best_one = best_response(tree, profile, Player::One)?.value;
    let best_two = best_response(tree, profile, Player::Two)?.value;
    Ok((best_one - value.clone(), value.clone() - best_two, value))
}
