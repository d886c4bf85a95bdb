//! Immutable extensive-form game trees with information sets, and exact
//! evaluation of behavior profiles on them.
//!
//! Nodes live in a dense arena indexed in depth-first preorder; node 0 is the
//! root. Payoffs are stored for player 1 only, so every terminal is zero-sum
//! by construction.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kuhn::CheatConfig;
use crate::rational::{Rational, Scalar};

pub type NodeId = usize;
pub type InfosetId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::One, Player::Two];

    pub fn index(self) -> usize {
        match self {
            Player::One => 0,
            Player::Two => 1,
        }
    }

    pub fn number(self) -> u8 {
        self.index() as u8 + 1
    }

    pub fn from_number(n: u8) -> Option<Player> {
        match n {
            1 => Some(Player::One),
            2 => Some(Player::Two),
            _ => None,
        }
    }

    pub fn opponent(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.number())
    }
}

/// Card rank; the derived order gives `K > Q > J`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Card {
    J,
    Q,
    K,
}

impl Card {
    pub const ALL: [Card; 3] = [Card::K, Card::Q, Card::J];

    pub fn symbol(self) -> char {
        match self {
            Card::J => 'J',
            Card::Q => 'Q',
            Card::K => 'K',
        }
    }

    pub fn from_symbol(c: char) -> Option<Card> {
        match c {
            'J' => Some(Card::J),
            'Q' => Some(Card::Q),
            'K' => Some(Card::K),
            _ => None,
        }
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// One of the six ways to deal three distinct cards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Deal {
    pub p1_card: Card,
    pub p2_card: Card,
    pub down_card: Card,
}

impl Deal {
    pub fn new(p1_card: Card, p2_card: Card) -> Option<Deal> {
        if p1_card == p2_card {
            return None;
        }
        let down_card = Card::ALL.into_iter().find(|&c| c != p1_card && c != p2_card)?;
        Some(Deal { p1_card, p2_card, down_card })
    }

    /// All six deals, in the row order of the per-deal winnings tables.
    pub fn all() -> [Deal; 6] {
        use Card::*;
        [(K, J), (K, Q), (Q, J), (Q, K), (J, K), (J, Q)].map(|(a, b)| Deal::new(a, b).unwrap())
    }

    pub fn card(&self, player: Player) -> Card {
        match player {
            Player::One => self.p1_card,
            Player::Two => self.p2_card,
        }
    }

    /// Chance-branch label, e.g. `"KJQ"` (player 1, player 2, face down).
    pub fn label(&self) -> String {
        format!("{}{}{}", self.p1_card, self.p2_card, self.down_card)
    }

    pub fn parse_label(label: &str) -> Option<Deal> {
        let cards: Vec<Card> = label.chars().map(Card::from_symbol).collect::<Option<_>>()?;
        match cards.as_slice() {
            [a, b, c] => {
                let deal = Deal::new(*a, *b)?;
                (deal.down_card == *c).then_some(deal)
            }
            _ => None,
        }
    }

    /// Winner of a showdown.
    pub fn showdown_winner(&self) -> Player {
        if self.p1_card > self.p2_card {
            Player::One
        } else {
            Player::Two
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Action {
    Bet,
    Check,
    Call,
    Fold,
}

impl Action {
    pub fn name(self) -> &'static str {
        match self {
            Action::Bet => "Bet",
            Action::Check => "Check",
            Action::Call => "Call",
            Action::Fold => "Fold",
        }
    }

    /// Single-letter code used in information-set labels.
    pub fn code(self) -> char {
        match self {
            Action::Bet => 'b',
            Action::Check => 'k',
            Action::Call => 'c',
            Action::Fold => 'f',
        }
    }

    /// True when the action needs an outstanding bet to be legal.
    pub fn faces_bet(self) -> bool {
        matches!(self, Action::Call | Action::Fold)
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Action {
    type Err = Error;

    fn from_str(s: &str) -> Result<Action> {
        match s {
            "Bet" => Ok(Action::Bet),
            "Check" => Ok(Action::Check),
            "Call" => Ok(Action::Call),
            "Fold" => Ok(Action::Fold),
            other => Err(Error::Parse(format!("unknown action {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChanceBranch {
    pub label: String,
    pub prob: Rational,
    pub child: NodeId,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NodeKind {
    Chance(Vec<ChanceBranch>),
    Decision {
        player: Player,
        infoset: InfosetId,
        actions: Vec<(Action, NodeId)>,
    },
    /// Payoff to player 1 in dollars; player 2 receives the negation.
    Terminal(Rational),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: NodeId,
    pub parent: Option<NodeId>,
    pub kind: NodeKind,
}

impl Node {
    pub fn children(&self) -> Vec<NodeId> {
        match &self.kind {
            NodeKind::Chance(branches) => branches.iter().map(|b| b.child).collect(),
            NodeKind::Decision { actions, .. } => actions.iter().map(|&(_, c)| c).collect(),
            NodeKind::Terminal(_) => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfoSet {
    pub id: InfosetId,
    pub player: Player,
    pub label: String,
    pub actions: Vec<Action>,
    pub members: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameTree {
    pub(crate) variant: String,
    pub(crate) config: Option<CheatConfig>,
    pub(crate) nodes: Vec<Node>,
    pub(crate) infosets: Vec<InfoSet>,
}

impl GameTree {
    pub fn variant(&self) -> &str {
        &self.variant
    }

    pub fn config(&self) -> Option<&CheatConfig> {
        self.config.as_ref()
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn infosets(&self) -> &[InfoSet] {
        &self.infosets
    }

    pub fn infoset(&self, id: InfosetId) -> &InfoSet {
        &self.infosets[id]
    }

    pub fn infosets_of(&self, player: Player) -> impl Iterator<Item = &InfoSet> {
        self.infosets.iter().filter(move |i| i.player == player)
    }

    pub fn infoset_by_label(&self, player: Player, label: &str) -> Option<&InfoSet> {
        self.infosets.iter().find(|i| i.player == player && i.label == label)
    }

    /// Labels of the chance branches taken on the path from the root to `id`.
    pub fn chance_path(&self, id: NodeId) -> Vec<&str> {
        let mut labels = Vec::new();
        let mut cur = id;
        while let Some(parent) = self.nodes[cur].parent {
            if let NodeKind::Chance(branches) = &self.nodes[parent].kind {
                if let Some(b) = branches.iter().find(|b| b.child == cur) {
                    labels.push(b.label.as_str());
                }
            }
            cur = parent;
        }
        labels.reverse();
        labels
    }

    /// Product of chance probabilities from the root to every node.
    pub fn chance_reach(&self) -> Vec<Rational> {
        let mut reach = vec![Rational::zero(); self.nodes.len()];
        reach[0] = Rational::one();
        for node in &self.nodes {
            let here = reach[node.id].clone();
            match &node.kind {
                NodeKind::Chance(branches) => {
                    for b in branches {
                        reach[b.child] = &here * &b.prob;
                    }
                }
                NodeKind::Decision { actions, .. } => {
                    for &(_, child) in actions {
                        reach[child] = here.clone();
                    }
                }
                NodeKind::Terminal(_) => {}
            }
        }
        reach
    }
}

/// Incremental arena construction. Node ids are handed out in call order,
/// so reserving a node before recursing into its children yields preorder
/// ids. Information sets are numbered at `finish` by first member.
#[derive(Debug, Default)]
pub struct TreeBuilder {
    nodes: Vec<Node>,
    labels: Vec<Option<(Player, String)>>,
}

impl TreeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn reserve(&mut self, parent: Option<NodeId>) -> NodeId {
        let id = self.nodes.len();
        self.nodes.push(Node { id, parent, kind: NodeKind::Terminal(Rational::zero()) });
        self.labels.push(None);
        id
    }

    pub fn set_chance(&mut self, id: NodeId, branches: Vec<ChanceBranch>) {
        self.nodes[id].kind = NodeKind::Chance(branches);
    }

    pub fn set_decision(&mut self, id: NodeId, player: Player, infoset_label: &str, actions: Vec<(Action, NodeId)>) {
        self.nodes[id].kind = NodeKind::Decision { player, infoset: usize::MAX, actions };
        self.labels[id] = Some((player, infoset_label.to_string()));
    }

    pub fn set_terminal(&mut self, id: NodeId, payoff: Rational) {
        self.nodes[id].kind = NodeKind::Terminal(payoff);
    }

    pub fn finish(mut self, variant: impl Into<String>, config: Option<CheatConfig>) -> GameTree {
        let mut index: HashMap<(Player, String), InfosetId> = HashMap::new();
        let mut infosets: Vec<InfoSet> = Vec::new();
        for (node, label) in self.nodes.iter_mut().zip(self.labels) {
            let Some(key) = label else { continue };
            let NodeKind::Decision { player, infoset, actions } = &mut node.kind else {
                continue;
            };
            let id = *index.entry(key.clone()).or_insert_with(|| {
                infosets.push(InfoSet {
                    id: infosets.len(),
                    player: *player,
                    label: key.1.clone(),
                    actions: actions.iter().map(|&(a, _)| a).collect(),
                    members: Vec::new(),
                });
                infosets.len() - 1
            });
            *infoset = id;
            infosets[id].members.push(node.id);
        }
        GameTree { variant: variant.into(), config, nodes: self.nodes, infosets }
    }
}

/// Per-information-set action distributions.
#[derive(Debug, Clone, PartialEq)]
pub struct BehaviorProfile<T = Rational> {
    dists: Vec<Option<Vec<T>>>,
}

impl<T: Scalar> BehaviorProfile<T> {
    /// Empty profile sized for `tree`.
    pub fn empty(tree: &GameTree) -> Self {
        BehaviorProfile { dists: vec![None; tree.infosets.len()] }
    }

    pub fn uniform(tree: &GameTree) -> Self {
        let dists = tree
            .infosets
            .iter()
            .map(|i| {
                let n = T::from_rational(&Rational::from_integer(i.actions.len().into()));
                Some(vec![T::one() / n; i.actions.len()])
            })
            .collect();
        BehaviorProfile { dists }
    }

    /// Pure profile built from one action index per information set.
    pub fn pure(tree: &GameTree, choice: impl Fn(&InfoSet) -> usize) -> Self {
        let dists = tree
            .infosets
            .iter()
            .map(|i| {
                let pick = choice(i);
                Some((0..i.actions.len()).map(|k| if k == pick { T::one() } else { T::zero() }).collect())
            })
            .collect();
        BehaviorProfile { dists }
    }

    pub fn len(&self) -> usize {
        self.dists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dists.iter().all(Option::is_none)
    }

    pub fn set(&mut self, infoset: InfosetId, dist: Vec<T>) {
        self.dists[infoset] = Some(dist);
    }

    pub fn get(&self, infoset: InfosetId) -> Option<&[T]> {
        self.dists.get(infoset).and_then(|d| d.as_deref())
    }

    /// Probability of `action` at `infoset`, if the profile covers it.
    pub fn prob(&self, tree: &GameTree, infoset: InfosetId, action: Action) -> Option<&T> {
        let k = tree.infosets[infoset].actions.iter().position(|&a| a == action)?;
        self.get(infoset).map(|d| &d[k])
    }

    /// Keeps only `player`'s distributions.
    pub fn restricted(&self, tree: &GameTree, player: Player) -> Self {
        let dists = self
            .dists
            .iter()
            .zip(&tree.infosets)
            .map(|(d, i)| if i.player == player { d.clone() } else { None })
            .collect();
        BehaviorProfile { dists }
    }

    /// Fills every uncovered information set from `other`.
    pub fn merged(&self, other: &Self) -> Self {
        let dists = self.dists.iter().zip(&other.dists).map(|(a, b)| a.clone().or_else(|| b.clone())).collect();
        BehaviorProfile { dists }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> BehaviorProfile<U> {
        let dists = self.dists.iter().map(|d| d.as_ref().map(|v| v.iter().map(&f).collect())).collect();
        BehaviorProfile { dists }
    }

    pub fn to_f64(&self) -> BehaviorProfile<f64> {
        self.map(|x| x.to_f64())
    }

    /// Error naming the first information set of `players` the profile misses.
    pub fn check_covers(&self, tree: &GameTree, players: &[Player]) -> Result<()> {
        if self.dists.len() != tree.infosets.len() {
            return Err(Error::InvalidProfile(format!(
                "profile sized for {} information sets, tree has {}",
                self.dists.len(),
                tree.infosets.len()
            )));
        }
        for info in tree.infosets.iter().filter(|i| players.contains(&i.player)) {
            match &self.dists[info.id] {
                None => return Err(Error::MissingInfoset(format!("{} {:?}", info.player, info.label))),
                Some(d) if d.len() != info.actions.len() => {
                    return Err(Error::InvalidProfile(format!(
                        "{} {:?} has {} probabilities for {} actions",
                        info.player,
                        info.label,
                        d.len(),
                        info.actions.len()
                    )))
                }
                Some(_) => {}
            }
        }
        Ok(())
    }
}

impl BehaviorProfile<Rational> {
    /// Checks coverage of both players and that each distribution sums to
    /// exactly one with nonnegative entries.
    pub fn validate(&self, tree: &GameTree) -> Result<()> {
        self.check_covers(tree, &Player::BOTH)?;
        for info in &tree.infosets {
            let d = self.dists[info.id].as_ref().expect("covered");
            if d.iter().any(|p| p.is_negative()) {
                return Err(Error::InvalidProfile(format!("negative probability at {:?}", info.label)));
            }
            let sum: Rational = d.iter().sum();
            if !sum.is_one() {
                return Err(Error::InvalidProfile(format!("distribution at {:?} sums to {sum}", info.label)));
            }
        }
        Ok(())
    }
}

/// Exact expectation of the terminal payoff to player 1.
pub fn expected_value<T: Scalar>(tree: &GameTree, profile: &BehaviorProfile<T>) -> Result<T> {
    profile.check_covers(tree, &Player::BOTH)?;
    Ok(subtree_value(tree, profile, tree.root()))
}

pub(crate) fn subtree_value<T: Scalar>(tree: &GameTree, profile: &BehaviorProfile<T>, id: NodeId) -> T {
    match &tree.nodes[id].kind {
        NodeKind::Terminal(payoff) => T::from_rational(payoff),
        NodeKind::Chance(branches) => branches
            .iter()
            .filter(|b| !b.prob.is_zero())
            .fold(T::zero(), |acc, b| acc + T::from_rational(&b.prob) * subtree_value(tree, profile, b.child)),
        NodeKind::Decision { infoset, actions, .. } => {
            let dist = profile.get(*infoset).expect("coverage checked");
            actions
                .iter()
                .zip(dist)
                .filter(|(_, p)| !p.is_zero())
                .fold(T::zero(), |acc, (&(_, child), p)| acc + p.clone() * subtree_value(tree, profile, child))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DealRow<T = Rational> {
    pub p1_card: Card,
    pub p2_card: Card,
    /// Reach-weighted winnings of player 1, counting only outcomes player 1 wins.
    pub p1_gross: T,
    /// Same for player 2.
    pub p2_gross: T,
}

/// Expected winnings split by deal, each entry already weighted by the
/// probability of reaching it (so the six rows of a plain deal sum to the
/// game value).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DealBreakdown<T = Rational> {
    pub rows: Vec<DealRow<T>>,
    pub net: T,
}

impl<T: Scalar> DealBreakdown<T> {
    pub fn row(&self, p1_card: Card, p2_card: Card) -> &DealRow<T> {
        self.rows
            .iter()
            .find(|r| r.p1_card == p1_card && r.p2_card == p2_card)
            .expect("every valid deal has a row")
    }

    /// Recomputes `net` from the rows.
    pub fn row_total(&self) -> T {
        self.rows.iter().fold(T::zero(), |acc, r| acc + r.p1_gross.clone() - r.p2_gross.clone())
    }
}

/// Splits the profile's value by deal into gross winnings per player.
///
/// The deal of a terminal is read from the chance branch labelled with a
/// deal (see [`Deal::label`]) on its root path.
pub fn per_deal_breakdown<T: Scalar>(tree: &GameTree, profile: &BehaviorProfile<T>) -> Result<DealBreakdown<T>> {
    profile.check_covers(tree, &Player::BOTH)?;
    let deals = Deal::all();
    let mut gross: Vec<(T, T)> = vec![(T::zero(), T::zero()); deals.len()];
    let mut stack: Vec<(NodeId, T, Option<usize>)> = vec![(tree.root(), T::one(), None)];
    while let Some((id, reach, deal)) = stack.pop() {
        match &tree.nodes[id].kind {
            NodeKind::Terminal(payoff) => {
                let Some(d) = deal else {
                    return Err(Error::UnsupportedVariant(format!(
                        "terminal {id} is not below a deal chance layer"
                    )));
                };
                let value = reach * T::from_rational(payoff);
                if payoff.is_positive() {
                    gross[d].0 = gross[d].0.clone() + value;
                } else if payoff.is_negative() {
                    gross[d].1 = gross[d].1.clone() - value;
                }
            }
            NodeKind::Chance(branches) => {
                for b in branches.iter().rev() {
                    let here = Deal::parse_label(&b.label).and_then(|x| deals.iter().position(|d| *d == x));
                    let next = reach.clone() * T::from_rational(&b.prob);
                    stack.push((b.child, next, here.or(deal)));
                }
            }
            NodeKind::Decision { infoset, actions, .. } => {
                let dist = profile.get(*infoset).expect("coverage checked");
                for (&(_, child), p) in actions.iter().zip(dist).rev() {
                    stack.push((child, reach.clone() * p.clone(), deal));
                }
            }
        }
    }
    let rows: Vec<DealRow<T>> = deals
        .iter()
        .zip(gross)
        .map(|(d, (p1, p2))| DealRow { p1_card: d.p1_card, p2_card: d.p2_card, p1_gross: p1, p2_gross: p2 })
        .collect();
    let net = rows.iter().fold(T::zero(), |acc, r| acc + r.p1_gross.clone() - r.p2_gross.clone());
    Ok(DealBreakdown { rows, net })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TreeStats {
    pub chance_nodes: usize,
    pub decision_nodes: usize,
    pub terminal_nodes: usize,
    pub infosets_p1: usize,
    pub infosets_p2: usize,
}

impl TreeStats {
    pub fn total_nodes(&self) -> usize {
        self.chance_nodes + self.decision_nodes + self.terminal_nodes
    }

    pub fn infosets(&self) -> usize {
        self.infosets_p1 + self.infosets_p2
    }
}

impl fmt::Display for TreeStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "decision_nodes={} infosets={} chance_nodes={} terminal_nodes={} total_nodes={} infosets_p1={} infosets_p2={}",
            self.decision_nodes,
            self.infosets(),
            self.chance_nodes,
            self.terminal_nodes,
            self.total_nodes(),
            self.infosets_p1,
            self.infosets_p2
        )
    }
}

pub fn tree_stats(tree: &GameTree) -> TreeStats {
    let mut stats = TreeStats {
        chance_nodes: 0,
        decision_nodes: 0,
        terminal_nodes: 0,
        infosets_p1: tree.infosets_of(Player::One).count(),
        infosets_p2: tree.infosets_of(Player::Two).count(),
    };
    for node in &tree.nodes {
        match node.kind {
            NodeKind::Chance(_) => stats.chance_nodes += 1,
            NodeKind::Decision { .. } => stats.decision_nodes += 1,
            NodeKind::Terminal(_) => stats.terminal_nodes += 1,
        }
    }
    stats
}

/// A violated structural invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    EmptyTree,
    BadId { node: NodeId },
    BadParent { node: NodeId },
    Unreachable { node: NodeId },
    Childless { node: NodeId },
    NegativeProbability { node: NodeId, label: String },
    ChanceSum { node: NodeId, sum: Rational },
    UnknownInfoset { node: NodeId },
    InfosetOwner { infoset: InfosetId, node: NodeId },
    InfosetActionMismatch { infoset: InfosetId, node: NodeId },
    InfosetMembership { node: NodeId },
    EmptyInfoset { infoset: InfosetId },
    PerfectRecall { infoset: InfosetId, node: NodeId },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::EmptyTree => write!(f, "tree has no nodes"),
            Diagnostic::BadId { node } => write!(f, "node at index {node} carries a different id"),
            Diagnostic::BadParent { node } => write!(f, "node {node}: parent link inconsistent"),
            Diagnostic::Unreachable { node } => write!(f, "node {node}: not reachable from the root exactly once"),
            Diagnostic::Childless { node } => write!(f, "node {node}: non-terminal without children"),
            Diagnostic::NegativeProbability { node, label } => {
                write!(f, "node {node}: negative chance probability on {label:?}")
            }
            Diagnostic::ChanceSum { node, sum } => write!(f, "node {node}: chance probabilities sum ≠ 1 (sum {sum})"),
            Diagnostic::UnknownInfoset { node } => write!(f, "node {node}: refers to an unknown infoset"),
            Diagnostic::InfosetOwner { infoset, node } => {
                write!(f, "infoset {infoset}: member node {node} belongs to another player")
            }
            Diagnostic::InfosetActionMismatch { infoset, node } => {
                write!(f, "infoset {infoset}: infoset action mismatch at node {node}")
            }
            Diagnostic::InfosetMembership { node } => {
                write!(f, "node {node}: not listed exactly once among its infoset's members")
            }
            Diagnostic::EmptyInfoset { infoset } => write!(f, "infoset {infoset}: no member nodes"),
            Diagnostic::PerfectRecall { infoset, node } => {
                write!(f, "infoset {infoset}: perfect recall violated at node {node}")
            }
        }
    }
}

/// Checks every structural invariant; an empty list means the tree is valid.
pub fn validate_tree(tree: &GameTree) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let n = tree.nodes.len();
    if n == 0 {
        return vec![Diagnostic::EmptyTree];
    }

    let mut incoming = vec![0usize; n];
    for (idx, node) in tree.nodes.iter().enumerate() {
        if node.id != idx {
            out.push(Diagnostic::BadId { node: idx });
        }
        let children = node.children();
        if children.is_empty() && !matches!(node.kind, NodeKind::Terminal(_)) {
            out.push(Diagnostic::Childless { node: idx });
        }
        for c in children {
            if c >= n || c <= idx || tree.nodes[c].parent != Some(idx) {
                out.push(Diagnostic::BadParent { node: c.min(n - 1) });
                continue;
            }
            incoming[c] += 1;
        }
        if let NodeKind::Chance(branches) = &node.kind {
            for b in branches.iter().filter(|b| b.prob.is_negative()) {
                out.push(Diagnostic::NegativeProbability { node: idx, label: b.label.clone() });
            }
            let sum: Rational = branches.iter().map(|b| &b.prob).sum();
            if !sum.is_one() {
                out.push(Diagnostic::ChanceSum { node: idx, sum });
            }
        }
    }
    if tree.nodes[0].parent.is_some() {
        out.push(Diagnostic::BadParent { node: 0 });
    }
    // children always have larger ids, so the arena is acyclic
    for (idx, &count) in incoming.iter().enumerate().skip(1) {
        if count != 1 {
            out.push(Diagnostic::Unreachable { node: idx });
        }
    }

    let mut listed = vec![0usize; n];
    for info in &tree.infosets {
        if info.members.is_empty() {
            out.push(Diagnostic::EmptyInfoset { infoset: info.id });
        }
        for &m in &info.members {
            if m >= n {
                continue;
            }
            listed[m] += 1;
            match &tree.nodes[m].kind {
                NodeKind::Decision { player, infoset, actions } => {
                    if *infoset != info.id {
                        out.push(Diagnostic::InfosetMembership { node: m });
                    }
                    if *player != info.player {
                        out.push(Diagnostic::InfosetOwner { infoset: info.id, node: m });
                    }
                    if !actions.iter().map(|&(a, _)| a).eq(info.actions.iter().copied()) {
                        out.push(Diagnostic::InfosetActionMismatch { infoset: info.id, node: m });
                    }
                }
                _ => out.push(Diagnostic::InfosetMembership { node: m }),
            }
        }
    }
    for node in &tree.nodes {
        if let NodeKind::Decision { infoset, .. } = node.kind {
            if infoset >= tree.infosets.len() {
                out.push(Diagnostic::UnknownInfoset { node: node.id });
            } else if listed[node.id] != 1 {
                out.push(Diagnostic::InfosetMembership { node: node.id });
            }
        }
    }

    if out.is_empty() {
        out.extend(check_perfect_recall(tree));
    }
    out
}

/// The owner's (infoset, action) history on the path to each decision node.
pub(crate) fn own_histories(tree: &GameTree) -> Vec<Vec<(InfosetId, usize)>> {
    let mut hist: Vec<[Vec<(InfosetId, usize)>; 2]> = vec![[Vec::new(), Vec::new()]; tree.nodes.len()];
    let mut out = vec![Vec::new(); tree.nodes.len()];
    for node in &tree.nodes {
        let here = hist[node.id].clone();
        match &node.kind {
            NodeKind::Chance(branches) => {
                for b in branches {
                    hist[b.child] = here.clone();
                }
            }
            NodeKind::Decision { player, infoset, actions } => {
                out[node.id] = here[player.index()].clone();
                for (k, &(_, child)) in actions.iter().enumerate() {
                    let mut next = here.clone();
                    next[player.index()].push((*infoset, k));
                    hist[child] = next;
                }
            }
            NodeKind::Terminal(_) => {}
        }
    }
    out
}

fn check_perfect_recall(tree: &GameTree) -> Vec<Diagnostic> {
    let hist = own_histories(tree);
    let mut out = Vec::new();
    for info in &tree.infosets {
        let first = &hist[info.members[0]];
        for &m in &info.members[1..] {
            if &hist[m] != first {
                out.push(Diagnostic::PerfectRecall { infoset: info.id, node: m });
            }
        }
    }
    out
}
