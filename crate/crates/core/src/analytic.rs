//! Closed-form fair strategies of classic Kuhn poker, their per-deal
//! winnings, and the exploitation of a fair player by a cheater who best
//! responds while the fair player does not adapt.
//!
//! Player 1's equilibrium strategies form a one-parameter family indexed by
//! the bluff rate `a` in `[0, 1/3]`; player 2's strategy is the same for
//! every `a`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gametree::{per_deal_breakdown, Action, BehaviorProfile, Card, DealBreakdown, DealRow, GameTree, Player};
use crate::kuhn::{build_cheating, build_classic, CheatConfig, InfoKey};
use crate::rational::{ratio, Rational};
use crate::solver::best_response;

/// Player 1's bluff parameter, validated to lie in `[0, 1/3]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FairParam(Rational);

impl FairParam {
    pub fn new(a: Rational) -> Result<FairParam> {
        let high = ratio(1, 3);
        if a < Rational::zero() || a > high {
            return Err(Error::OutOfRange { name: "a".into(), value: a.to_string(), low: "0".into(), high: "1/3".into() });
        }
        Ok(FairParam(a))
    }

    pub fn zero() -> FairParam {
        FairParam(Rational::zero())
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }
}

/// Probability of the first action (Bet or Call) for a fair player holding
/// `card` with betting `history` so far.
fn fair_first_action(player: Player, card: Card, history: &[Action], a: &Rational) -> Rational {
    let third = ratio(1, 3);
    let one = Rational::one;
    let zero = Rational::zero;
    match (player, history) {
        // opening bet
        (Player::One, []) => match card {
            Card::K => a * Rational::from_integer(3.into()),
            Card::Q => zero(),
            Card::J => a.clone(),
        },
        // call after check, bet
        (Player::One, _) => match card {
            Card::K => one(),
            Card::Q => &third + a,
            Card::J => zero(),
        },
        // call facing a bet
        (Player::Two, [Action::Bet]) => match card {
            Card::K => one(),
            Card::Q => third,
            Card::J => zero(),
        },
        // bet after a check
        (Player::Two, _) => match card {
            Card::K => one(),
            Card::Q => zero(),
            Card::J => third,
        },
    }
}

/// The fair equilibrium profile of the classic game for bluff rate `a`.
pub fn fair_profile(a: &FairParam) -> BehaviorProfile {
    let tree = build_classic();
    let mut profile = fair_profile_on(&tree, a, Player::One);
    profile = profile.merged(&fair_profile_on(&tree, a, Player::Two));
    profile
}

/// `player`'s fair strategy on any Kuhn variant tree. The strategy depends
/// only on the player's own card and the betting so far, so anything extra
/// the player observes (a peeked card, a caught opponent) is ignored.
pub fn fair_profile_on(tree: &GameTree, a: &FairParam, player: Player) -> BehaviorProfile {
    let mut profile = BehaviorProfile::empty(tree);
    for info in tree.infosets_of(player) {
        let key = InfoKey::parse(player, &info.label).expect("Kuhn variant labels parse");
        let first = fair_first_action(player, key.card, &key.history, a.value());
        let rest = Rational::one() - &first;
        profile.set(info.id, vec![first, rest]);
    }
    profile
}

/// `constant + slope * a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Affine {
    pub constant: Rational,
    pub slope: Rational,
}

impl Affine {
    fn new(constant: Rational, slope: Rational) -> Affine {
        Affine { constant, slope }
    }

    pub fn at(&self, a: &Rational) -> Rational {
        &self.constant + &self.slope * a
    }
}

/// Per-deal gross winnings under the fair profile, as affine functions of `a`,
/// in deal-table order: `(p1 card, p2 card, p1 gross, p2 gross)`.
pub fn fair_breakdown_entries() -> Vec<(Card, Card, Affine, Affine)> {
    use Card::*;
    let zero = || Affine::new(Rational::zero(), Rational::zero());
    vec![
        (K, J, Affine::new(ratio(2, 9), ratio(-1, 6)), zero()),
        (K, Q, Affine::new(ratio(1, 6), ratio(1, 6)), zero()),
        (Q, J, Affine::new(ratio(4, 27), ratio(1, 9)), Affine::new(ratio(1, 27), ratio(-1, 18))),
        (Q, K, zero(), Affine::new(ratio(2, 9), ratio(1, 6))),
        (J, K, zero(), Affine::new(ratio(1, 6), ratio(1, 6))),
        (J, Q, Affine::new(Rational::zero(), ratio(1, 9)), Affine::new(ratio(1, 6), ratio(-1, 18))),
    ]
}

/// The closed-form breakdown evaluated at `a`.
pub fn fair_breakdown_formula(a: &FairParam) -> DealBreakdown {
    let rows: Vec<DealRow> = fair_breakdown_entries()
        .into_iter()
        .map(|(p1_card, p2_card, g1, g2)| DealRow {
            p1_card,
            p2_card,
            p1_gross: g1.at(a.value()),
            p2_gross: g2.at(a.value()),
        })
        .collect();
    let net = rows.iter().map(|r| &r.p1_gross - &r.p2_gross).sum();
    DealBreakdown { rows, net }
}

/// A cheater's best response against a fair player who keeps playing the
/// fair strategy.
#[derive(Debug, Clone)]
pub struct NaiveExploitation {
    pub cheater: Player,
    pub a: FairParam,
    /// The one-sided cheating tree (cheat probability 1) the values refer to.
    pub tree: GameTree,
    /// Value to player 1.
    pub value: Rational,
    pub breakdown: DealBreakdown,
    /// The cheater's best response; covers only the cheater's information sets.
    pub cheater_strategy: BehaviorProfile,
    /// The value printed in the published winnings table for this case.
    pub published_value: Rational,
}

impl NaiveExploitation {
    pub fn discrepancy(&self) -> bool {
        self.value != self.published_value
    }
}

/// The net winnings printed alongside the per-deal tables for a cheater who
/// faces a non-adapting fair player. These are kept for comparison only;
/// they do not agree with their own row entries.
pub fn published_naive_value(cheater: Player, a: &FairParam) -> Rational {
    match cheater {
        Player::One => ratio(7, 18),
        Player::Two => ratio(-2, 3) - a.value() / Rational::from_integer(9.into()),
    }
}

pub fn naive_exploitation(cheater: Player, a: &FairParam) -> Result<NaiveExploitation> {
    let config = match cheater {
        Player::One => CheatConfig::cheating(Rational::one(), Rational::zero())?,
        Player::Two => CheatConfig::cheating(Rational::zero(), Rational::one())?,
    };
    let tree = build_cheating(&config)?;
    let fair = fair_profile_on(&tree, a, cheater.opponent());
    let response = best_response(&tree, &fair, cheater)?;
    let profile = fair.merged(&response.strategy);
    let breakdown = per_deal_breakdown(&tree, &profile)?;
    Ok(NaiveExploitation {
        cheater,
        a: a.clone(),
        value: response.value,
        breakdown,
        cheater_strategy: response.strategy,
        published_value: published_naive_value(cheater, a),
        tree,
    })
}
