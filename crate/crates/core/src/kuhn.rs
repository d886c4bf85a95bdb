//! Builders for classic Kuhn poker and its cheating / detection variants.
//!
//! Cheating and detection are chance events with fixed, commonly known
//! probabilities. Chance layers sit above the deal in the order
//! P1-cheat, P2-cheat, P1-detect, P2-detect; every layer is built on every
//! branch, even when one side has probability zero.
//!
//! A cheater sees the face-down card and therefore knows the whole deal. A
//! detector learns only that the opponent cheated, never the opponent's
//! card. Nobody learns whether they themselves were caught.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gametree::{Action, Card, ChanceBranch, Deal, GameTree, NodeId, Player, TreeBuilder};
use crate::rational::{int, Rational};

/// Cheat probabilities `p`, `q` and detection probabilities `r1`, `r2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CheatConfig {
    pub p: Rational,
    pub q: Rational,
    pub r1: Rational,
    pub r2: Rational,
}

impl CheatConfig {
    pub fn new(p: Rational, q: Rational, r1: Rational, r2: Rational) -> Result<Self> {
        for (name, v) in [("p", &p), ("q", &q), ("r1", &r1), ("r2", &r2)] {
            check_probability(name, v)?;
        }
        Ok(CheatConfig { p, q, r1, r2 })
    }

    pub fn classic() -> Self {
        CheatConfig { p: Rational::zero(), q: Rational::zero(), r1: Rational::zero(), r2: Rational::zero() }
    }

    pub fn cheating(p: Rational, q: Rational) -> Result<Self> {
        Self::new(p, q, Rational::zero(), Rational::zero())
    }

    pub fn is_classic(&self) -> bool {
        self.p.is_zero() && self.q.is_zero() && self.r1.is_zero() && self.r2.is_zero()
    }

    pub fn has_detection(&self) -> bool {
        !(self.r1.is_zero() && self.r2.is_zero())
    }
}

impl fmt::Display for CheatConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} q={} r1={} r2={}", self.p, self.q, self.r1, self.r2)
    }
}

impl Serialize for CheatConfig {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CheatConfig", 4)?;
        st.serialize_field("p", &self.p.to_string())?;
        st.serialize_field("q", &self.q.to_string())?;
        st.serialize_field("r1", &self.r1.to_string())?;
        st.serialize_field("r2", &self.r2.to_string())?;
        st.end()
    }
}

pub(crate) fn check_probability(name: &str, v: &Rational) -> Result<()> {
    if v < &Rational::zero() || v > &Rational::one() {
        return Err(Error::OutOfRange { name: name.into(), value: v.to_string(), low: "0".into(), high: "1".into() });
    }
    Ok(())
}

/// What happened before the cards were dealt.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
pub struct RoundFlags {
    pub p1_cheated: bool,
    pub p2_cheated: bool,
    pub p1_caught_p2: bool,
    pub p2_caught_p1: bool,
}

impl RoundFlags {
    pub fn validate(&self) -> Result<()> {
        if self.p1_caught_p2 && !self.p2_cheated {
            return Err(Error::InvalidFlags("player 1 caught player 2, who did not cheat".into()));
        }
        if self.p2_caught_p1 && !self.p1_cheated {
            return Err(Error::InvalidFlags("player 2 caught player 1, who did not cheat".into()));
        }
        Ok(())
    }

    pub fn cheated(&self, player: Player) -> bool {
        match player {
            Player::One => self.p1_cheated,
            Player::Two => self.p2_cheated,
        }
    }

    /// Whether `player` caught the opponent cheating.
    pub fn caught_opponent(&self, player: Player) -> bool {
        match player {
            Player::One => self.p1_caught_p2,
            Player::Two => self.p2_caught_p1,
        }
    }
}

/// The five ways a betting round can end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BettingOutcome {
    BetFold,
    BetCall,
    CheckBetFold,
    CheckBetCall,
    CheckCheck,
}

impl BettingOutcome {
    pub const ALL: [BettingOutcome; 5] = [
        BettingOutcome::BetFold,
        BettingOutcome::BetCall,
        BettingOutcome::CheckBetFold,
        BettingOutcome::CheckBetCall,
        BettingOutcome::CheckCheck,
    ];

    /// Total dollars put in by (player 1, player 2), antes included.
    pub fn contributions(self) -> (i64, i64) {
        match self {
            BettingOutcome::BetFold => (2, 1),
            BettingOutcome::BetCall | BettingOutcome::CheckBetCall => (2, 2),
            BettingOutcome::CheckBetFold => (1, 2),
            BettingOutcome::CheckCheck => (1, 1),
        }
    }

    pub fn from_actions(actions: &[Action]) -> Option<BettingOutcome> {
        use Action::*;
        match actions {
            [Bet, Fold] => Some(BettingOutcome::BetFold),
            [Bet, Call] => Some(BettingOutcome::BetCall),
            [Check, Bet, Fold] => Some(BettingOutcome::CheckBetFold),
            [Check, Bet, Call] => Some(BettingOutcome::CheckBetCall),
            [Check, Check] => Some(BettingOutcome::CheckCheck),
            _ => None,
        }
    }
}

/// Dollars to player 1 at the end of a round.
///
/// Mutual catching voids the round; a single catch hands the catcher the
/// cheater's whole contribution; otherwise ordinary Kuhn rules apply.
pub fn compute_terminal_payoff(deal: Deal, outcome: BettingOutcome, flags: RoundFlags) -> Result<Rational> {
    flags.validate()?;
    let (c1, c2) = outcome.contributions();
    let value = match (flags.p1_caught_p2, flags.p2_caught_p1) {
        (true, true) => 0,
        (true, false) => c2,
        (false, true) => -c1,
        (false, false) => match outcome {
            BettingOutcome::BetFold => c2,
            BettingOutcome::CheckBetFold => -c1,
            _ => match deal.showdown_winner() {
                Player::One => c2,
                Player::Two => -c1,
            },
        },
    };
    Ok(int(value))
}

/// Which cheat layer sits nearer the root. Only used to check that the
/// layer order does not matter.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum CheatLayerOrder {
    #[default]
    PlayerOneFirst,
    PlayerTwoFirst,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildOptions {
    pub cheat_order: CheatLayerOrder,
}

pub const VARIANT_CLASSIC: &str = "classic";
pub const VARIANT_CHEATING: &str = "cheating";
pub const VARIANT_DETECTION: &str = "detection";

/// Classic Kuhn poker: a six-way deal followed by one betting round.
pub fn build_classic() -> GameTree {
    let mut b = TreeBuilder::new();
    let root = b.reserve(None);
    build_deal_layer(&mut b, root, RoundFlags::default());
    b.finish(VARIANT_CLASSIC, Some(CheatConfig::classic()))
}

/// Probabilistic cheating by either or both players, no detection.
pub fn build_cheating(config: &CheatConfig) -> Result<GameTree> {
    build_cheating_with(config, BuildOptions::default())
}

pub fn build_cheating_with(config: &CheatConfig, options: BuildOptions) -> Result<GameTree> {
    if config.has_detection() {
        return Err(Error::WrongVariant(format!(
            "build_cheating needs r1 = r2 = 0 (got r1={}, r2={}); use build_detection",
            config.r1, config.r2
        )));
    }
    Ok(build_layered(config, options, false))
}

/// Cheating plus probabilistic detection by either player.
pub fn build_detection(config: &CheatConfig) -> GameTree {
    build_detection_with(config, BuildOptions::default())
}

pub fn build_detection_with(config: &CheatConfig, options: BuildOptions) -> GameTree {
    build_layered(config, options, true)
}

/// The smallest variant that can express `config`.
pub fn build_variant(config: &CheatConfig) -> GameTree {
    if config.is_classic() {
        build_classic()
    } else if config.has_detection() {
        build_detection(config)
    } else {
        build_layered(config, BuildOptions::default(), false)
    }
}

#[derive(Debug, Clone, Copy)]
enum Layer {
    Cheat(Player),
    Detect(Player),
}

fn build_layered(config: &CheatConfig, options: BuildOptions, detection: bool) -> GameTree {
    let mut layers = match options.cheat_order {
        CheatLayerOrder::PlayerOneFirst => vec![Layer::Cheat(Player::One), Layer::Cheat(Player::Two)],
        CheatLayerOrder::PlayerTwoFirst => vec![Layer::Cheat(Player::Two), Layer::Cheat(Player::One)],
    };
    if detection {
        layers.extend([Layer::Detect(Player::One), Layer::Detect(Player::Two)]);
    }
    // detection outcome per player: whether the detector's check fired
    let mut b = TreeBuilder::new();
    let root = b.reserve(None);
    build_layers(&mut b, root, config, &layers, RoundFlags::default(), [false, false]);
    let variant = if detection { VARIANT_DETECTION } else { VARIANT_CHEATING };
    b.finish(variant, Some(config.clone()))
}

fn layer_labels(layer: Layer) -> (&'static str, &'static str) {
    match layer {
        Layer::Cheat(Player::One) => ("P1C", "P1N"),
        Layer::Cheat(Player::Two) => ("P2C", "P2N"),
        Layer::Detect(Player::One) => ("P1D", "P1F"),
        Layer::Detect(Player::Two) => ("P2D", "P2F"),
    }
}

fn layer_prob(config: &CheatConfig, layer: Layer) -> &Rational {
    match layer {
        Layer::Cheat(Player::One) => &config.p,
        Layer::Cheat(Player::Two) => &config.q,
        Layer::Detect(Player::One) => &config.r1,
        Layer::Detect(Player::Two) => &config.r2,
    }
}

fn build_layers(
    b: &mut TreeBuilder,
    id: NodeId,
    config: &CheatConfig,
    layers: &[Layer],
    flags: RoundFlags,
    fired: [bool; 2],
) {
    let Some((&layer, rest)) = layers.split_first() else {
        let flags = RoundFlags {
            p1_caught_p2: fired[0] && flags.p2_cheated,
            p2_caught_p1: fired[1] && flags.p1_cheated,
            ..flags
        };
        build_deal_layer(b, id, flags);
        return;
    };
    let prob = layer_prob(config, layer);
    let (yes_label, no_label) = layer_labels(layer);
    let mut branches = Vec::with_capacity(2);
    for (happened, label, p) in [(true, yes_label, prob.clone()), (false, no_label, Rational::one() - prob)] {
        let child = b.reserve(Some(id));
        let mut flags = flags;
        let mut fired = fired;
        match layer {
            Layer::Cheat(Player::One) => flags.p1_cheated = happened,
            Layer::Cheat(Player::Two) => flags.p2_cheated = happened,
            Layer::Detect(pl) => fired[pl.index()] = happened,
        }
        build_layers(b, child, config, rest, flags, fired);
        branches.push(ChanceBranch { label: label.into(), prob: p, child });
    }
    b.set_chance(id, branches);
}

fn build_deal_layer(b: &mut TreeBuilder, id: NodeId, flags: RoundFlags) {
    let sixth = Rational::new(1.into(), 6.into());
    let branches = Deal::all()
        .into_iter()
        .map(|deal| {
            let child = b.reserve(Some(id));
            build_betting(b, child, deal, flags, &mut Vec::new());
            ChanceBranch { label: deal.label(), prob: sixth.clone(), child }
        })
        .collect();
    b.set_chance(id, branches);
}

/// Plays out the betting round below `id`; `history` holds the actions so far.
fn build_betting(b: &mut TreeBuilder, id: NodeId, deal: Deal, flags: RoundFlags, history: &mut Vec<Action>) {
    if let Some(outcome) = BettingOutcome::from_actions(history) {
        let payoff = compute_terminal_payoff(deal, outcome, flags).expect("builder flags are consistent");
        b.set_terminal(id, payoff);
        return;
    }
    let player = if history.len() % 2 == 0 { Player::One } else { Player::Two };
    let facing_bet = history.last() == Some(&Action::Bet);
    let legal = if facing_bet { [Action::Call, Action::Fold] } else { [Action::Bet, Action::Check] };
    let key = InfoKey::observe(player, deal, flags, history);
    let mut actions = Vec::with_capacity(2);
    for action in legal {
        let child = b.reserve(Some(id));
        history.push(action);
        build_betting(b, child, deal, flags, history);
        history.pop();
        actions.push((action, child));
    }
    b.set_decision(id, player, &key.to_string(), actions);
}

/// Everything a player knows at a decision point. The string form is the
/// information-set label, e.g. `P1 K|`, `P2 Q|b`, `P1 K>J|kb`, `P2 J!|k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InfoKey {
    pub player: Player,
    pub card: Card,
    /// Opponent's card, known only to a cheater.
    pub peeked: Option<Card>,
    /// The opponent was caught cheating by this player.
    pub caught: bool,
    pub history: Vec<Action>,
}

impl InfoKey {
    pub fn observe(player: Player, deal: Deal, flags: RoundFlags, history: &[Action]) -> InfoKey {
        InfoKey {
            player,
            card: deal.card(player),
            peeked: flags.cheated(player).then(|| deal.card(player.opponent())),
            caught: flags.caught_opponent(player),
            history: history.to_vec(),
        }
    }

    pub fn parse(player: Player, label: &str) -> Option<InfoKey> {
        let rest = label.strip_prefix(&format!("{player} "))?;
        let (obs, hist) = rest.split_once('|')?;
        let mut chars = obs.chars();
        let card = Card::from_symbol(chars.next()?)?;
        let mut peeked = None;
        let mut caught = false;
        let tail: Vec<char> = chars.collect();
        let mut i = 0;
        if tail.get(i) == Some(&'>') {
            peeked = Some(Card::from_symbol(*tail.get(i + 1)?)?);
            i += 2;
        }
        if tail.get(i) == Some(&'!') {
            caught = true;
            i += 1;
        }
        if i != tail.len() {
            return None;
        }
        let history = hist
            .chars()
            .map(|c| match c {
                'b' => Some(Action::Bet),
                'k' => Some(Action::Check),
                'c' => Some(Action::Call),
                'f' => Some(Action::Fold),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Some(InfoKey { player, card, peeked, caught, history })
    }
}

impl fmt::Display for InfoKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.player, self.card)?;
        if let Some(c) = self.peeked {
            write!(f, ">{c}")?;
        }
        if self.caught {
            f.write_str("!")?;
        }
        f.write_str("|")?;
        for a in &self.history {
            write!(f, "{}", a.code())?;
        }
        Ok(())
    }
}

/// Deal and pre-deal flags of a node, recovered from the chance labels on
/// its root path.
pub fn round_of(tree: &GameTree, node: NodeId) -> Option<(Deal, RoundFlags)> {
    let mut deal = None;
    let mut flags = RoundFlags::default();
    let mut fired = [false, false];
    for label in tree.chance_path(node) {
        match label {
            "P1C" => flags.p1_cheated = true,
            "P2C" => flags.p2_cheated = true,
            "P1D" => fired[0] = true,
            "P2D" => fired[1] = true,
            "P1N" | "P2N" | "P1F" | "P2F" => {}
            other => deal = Some(Deal::parse_label(other)?),
        }
    }
    flags.p1_caught_p2 = fired[0] && flags.p2_cheated;
    flags.p2_caught_p1 = fired[1] && flags.p1_cheated;
    Some((deal?, flags))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gametree::{tree_stats, validate_tree, NodeKind};
    use crate::rational::ratio;

    fn deal(a: Card, b: Card) -> Deal {
        Deal::new(a, b).unwrap()
    }

    #[test]
    fn terminal_payoff_rules() {
        let any = deal(Card::Q, Card::K);
        let caught_p2 = RoundFlags { p2_cheated: true, p1_caught_p2: true, ..Default::default() };
        assert_eq!(compute_terminal_payoff(any, BettingOutcome::CheckCheck, caught_p2).unwrap(), int(1));
        let caught_p1 = RoundFlags { p1_cheated: true, p2_caught_p1: true, ..Default::default() };
        assert_eq!(compute_terminal_payoff(any, BettingOutcome::BetCall, caught_p1).unwrap(), int(-2));
        assert_eq!(
            compute_terminal_payoff(deal(Card::K, Card::J), BettingOutcome::BetCall, RoundFlags::default()).unwrap(),
            int(2)
        );
        let both = RoundFlags { p1_cheated: true, p2_cheated: true, p1_caught_p2: true, p2_caught_p1: true };
        for o in BettingOutcome::ALL {
            assert_eq!(compute_terminal_payoff(any, o, both).unwrap(), int(0));
        }
    }

    #[test]
    fn plain_kuhn_payoffs() {
        let kj = deal(Card::K, Card::J);
        let jk = deal(Card::J, Card::K);
        let none = RoundFlags::default();
        let pay = |d, o| compute_terminal_payoff(d, o, none).unwrap();
        assert_eq!(pay(jk, BettingOutcome::BetFold), int(1));
        assert_eq!(pay(kj, BettingOutcome::CheckBetFold), int(-1));
        assert_eq!(pay(jk, BettingOutcome::CheckCheck), int(-1));
        assert_eq!(pay(kj, BettingOutcome::CheckBetCall), int(2));
        assert_eq!(pay(jk, BettingOutcome::BetCall), int(-2));
    }

    #[test]
    fn vacuous_catch_is_rejected() {
        let bad = RoundFlags { p1_caught_p2: true, ..Default::default() };
        assert!(matches!(
            compute_terminal_payoff(deal(Card::K, Card::Q), BettingOutcome::CheckCheck, bad),
            Err(Error::InvalidFlags(_))
        ));
    }

    #[test]
    fn cheating_rejects_detection() {
        let cfg = CheatConfig::new(int(1), int(1), ratio(1, 2), int(0)).unwrap();
        assert!(matches!(build_cheating(&cfg), Err(Error::WrongVariant(_))));
    }

    #[test]
    fn config_range_is_checked() {
        assert!(CheatConfig::new(ratio(3, 2), int(0), int(0), int(0)).is_err());
        assert!(CheatConfig::new(int(0), int(0), int(0), ratio(-1, 2)).is_err());
    }

    #[test]
    fn sizes() {
        let cheat = build_cheating(&CheatConfig::cheating(ratio(1, 2), ratio(1, 2)).unwrap()).unwrap();
        let s = tree_stats(&cheat);
        assert_eq!(s.decision_nodes, 4 * 24);
        assert_eq!((s.infosets_p1, s.infosets_p2), (18, 18));
        let det = build_detection(&CheatConfig::new(int(1), int(1), ratio(1, 2), ratio(1, 2)).unwrap());
        let s = tree_stats(&det);
        assert_eq!(s.total_nodes(), 31 + 16 * 6 * 9);
        assert!((800..=1100).contains(&s.total_nodes()));
        assert_eq!((s.infosets_p1, s.infosets_p2), (36, 36));
        assert!(validate_tree(&det).is_empty());
    }

    #[test]
    fn info_key_round_trips() {
        let key = InfoKey {
            player: Player::Two,
            card: Card::Q,
            peeked: Some(Card::J),
            caught: true,
            history: vec![Action::Check],
        };
        assert_eq!(key.to_string(), "P2 Q>J!|k");
        assert_eq!(InfoKey::parse(Player::Two, "P2 Q>J!|k"), Some(key));
        assert_eq!(InfoKey::parse(Player::One, "P2 Q|"), None);
        assert_eq!(InfoKey::parse(Player::One, "P1 Q?|"), None);
    }

    #[test]
    fn round_of_recovers_flags() {
        let cfg = CheatConfig::new(int(1), int(1), int(1), int(0)).unwrap();
        let tree = build_detection(&cfg);
        for node in tree.nodes() {
            if let NodeKind::Terminal(_) = node.kind {
                let (_, flags) = round_of(&tree, node.id).unwrap();
                flags.validate().unwrap();
            }
        }
    }
}
