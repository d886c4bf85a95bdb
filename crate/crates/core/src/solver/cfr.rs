//! Vanilla counterfactual regret minimization with regret matching.
//!
//! The tree is flattened into `f64` arrays once; chance branches with
//! probability zero are dropped since they never contribute. The current
//! strategy is frozen for the whole of each iteration.

use num_traits::Zero;

use crate::gametree::{expected_value, BehaviorProfile, GameTree, NodeId, NodeKind, Player};
use crate::rational::Scalar;
use crate::solver::{exploitability, Method, SolveResult};

enum Flat {
    Terminal(f64),
    Chance(Vec<(f64, usize)>),
    Decision { player: Player, offset: usize, children: Vec<usize> },
}

struct Compiled {
    nodes: Vec<Flat>,
    /// (offset, action count) per information set.
    slots: Vec<(usize, usize)>,
    width: usize,
}

impl Compiled {
    fn new(tree: &GameTree) -> Compiled {
        let mut slots = Vec::with_capacity(tree.infosets().len());
        let mut width = 0;
        for info in tree.infosets() {
            slots.push((width, info.actions.len()));
            width += info.actions.len();
        }
        let mut nodes = Vec::new();
        compile(tree, tree.root(), &slots, &mut nodes);
        Compiled { nodes, slots, width }
    }
}

fn compile(tree: &GameTree, id: NodeId, slots: &[(usize, usize)], out: &mut Vec<Flat>) -> usize {
    let at = out.len();
    out.push(Flat::Terminal(0.0));
    let flat = match &tree.node(id).kind {
        NodeKind::Terminal(u) => Flat::Terminal(u.to_f64()),
        NodeKind::Chance(branches) => Flat::Chance(
            branches
                .iter()
                .filter(|b| !b.prob.is_zero())
                .map(|b| (b.prob.to_f64(), compile(tree, b.child, slots, out)))
                .collect(),
        ),
        NodeKind::Decision { player, infoset, actions } => Flat::Decision {
            player: *player,
            offset: slots[*infoset].0,
            children: actions.iter().map(|&(_, c)| compile(tree, c, slots, out)).collect(),
        },
    };
    out[at] = flat;
    at
}

struct Run<'a> {
    tree: &'a Compiled,
    regret: Vec<f64>,
    strategy_sum: Vec<f64>,
    current: Vec<f64>,
}

impl Run<'_> {
    fn refresh_current(&mut self) {
        for &(off, n) in &self.tree.slots {
            let positive: f64 = self.regret[off..off + n].iter().map(|r| r.max(0.0)).sum();
            for a in 0..n {
                self.current[off + a] = if positive > 0.0 { self.regret[off + a].max(0.0) / positive } else { 1.0 / n as f64 };
            }
        }
    }

    /// Returns the value to player 1 below `id`; `reach` is each player's own
    /// contribution, `chance` the chance contribution.
    fn walk(&mut self, id: usize, reach: [f64; 2], chance: f64) -> f64 {
        if reach[0] == 0.0 && reach[1] == 0.0 {
            return 0.0;
        }
        let tree = self.tree;
        match &tree.nodes[id] {
            Flat::Terminal(u) => *u,
            Flat::Chance(branches) => branches.iter().map(|&(p, c)| p * self.walk(c, reach, chance * p)).sum(),
            Flat::Decision { player, offset, children } => {
                let i = player.index();
                let n = children.len();
                let mut utils = [0.0f64; 4];
                let mut node_util = 0.0;
                for (a, &child) in children.iter().enumerate() {
                    let sigma = self.current[offset + a];
                    let mut next = reach;
                    next[i] *= sigma;
                    utils[a] = self.walk(child, next, chance);
                    node_util += sigma * utils[a];
                }
                let counterfactual = reach[1 - i] * chance;
                let sign = if i == 0 { 1.0 } else { -1.0 };
                for a in 0..n {
                    self.regret[offset + a] += counterfactual * sign * (utils[a] - node_util);
                    self.strategy_sum[offset + a] += reach[i] * self.current[offset + a];
                }
                node_util
            }
        }
    }

    fn average(&self, tree: &GameTree) -> BehaviorProfile<f64> {
        let mut profile = BehaviorProfile::empty(tree);
        for (info, &(off, n)) in tree.infosets().iter().zip(&self.tree.slots) {
            let total: f64 = self.strategy_sum[off..off + n].iter().sum();
            let dist = if total > 0.0 {
                self.strategy_sum[off..off + n].iter().map(|s| s / total).collect()
            } else {
                vec![1.0 / n as f64; n]
            };
            profile.set(info.id, dist);
        }
        profile
    }
}

/// Runs `iterations` rounds of regret-matching self-play and returns the
/// average profile with its value and exploitability, in floating point.
pub fn solve_cfr(tree: &GameTree, iterations: usize) -> SolveResult<f64> {
    let iterations = iterations.max(1);
    let compiled = Compiled::new(tree);
    assert!(tree.infosets().iter().all(|i| i.actions.len() <= 4));
    let width = compiled.width;
    let mut run = Run { tree: &compiled, regret: vec![0.0; width], strategy_sum: vec![0.0; width], current: vec![0.0; width] };
    for _ in 0..iterations {
        run.refresh_current();
        run.walk(0, [1.0, 1.0], 1.0);
    }
    let profile = run.average(tree);
    let value = expected_value(tree, &profile).expect("average profile covers every information set");
    let exploitability = exploitability(tree, &profile).expect("average profile covers every information set");
    SolveResult { value, profile, exploitability, method: Method::Cfr }
}
