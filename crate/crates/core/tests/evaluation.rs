//! Exact evaluation of profiles: linearity, breakdown consistency and the
//! hand-enumerated reference values.

use num_traits::{One, Zero};
use proptest::prelude::*;

use kuhn_cheat::analytic::{fair_breakdown_formula, fair_profile, FairParam};
use kuhn_cheat::gametree::{expected_value, per_deal_breakdown, Action, BehaviorProfile, Card, GameTree, TreeBuilder};
use kuhn_cheat::kuhn::{build_cheating, build_classic, build_detection, CheatConfig};
use kuhn_cheat::rational::{int, ratio, Rational};
use kuhn_cheat::Error;

/// A random distribution for every information set, from integer weights.
fn profile_from(tree: &GameTree, weights: &[(u8, u8)]) -> BehaviorProfile {
    let mut profile = BehaviorProfile::empty(tree);
    for info in tree.infosets() {
        let (a, b) = weights[info.id % weights.len()];
        let total = Rational::from_integer((u32::from(a) + u32::from(b)).into());
        profile.set(info.id, vec![int(a.into()) / &total, int(b.into()) / &total]);
    }
    profile
}

fn weights() -> impl Strategy<Value = Vec<(u8, u8)>> {
    prop::collection::vec((0u8..6, 0u8..6).prop_map(|(a, b)| if a + b == 0 { (1, 0) } else { (a, b) }), 1..40)
}

fn trees() -> Vec<GameTree> {
    vec![
        build_classic(),
        build_cheating(&CheatConfig::cheating(ratio(1, 3), ratio(2, 3)).unwrap()).unwrap(),
        build_detection(&CheatConfig::new(ratio(1, 2), int(1), ratio(1, 4), ratio(3, 4)).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn value_is_linear_in_one_infoset(w in weights(), pick in 0usize..200, t in 0u8..=10) {
        for tree in trees() {
            let base = profile_from(&tree, &w);
            let info = &tree.infosets()[pick % tree.infosets().len()];
            let lam = ratio(t.into(), 10);
            let at = |dist: Vec<Rational>| {
                let mut p = base.clone();
                p.set(info.id, dist);
                expected_value(&tree, &p).unwrap()
            };
            let first = at(vec![Rational::one(), Rational::zero()]);
            let second = at(vec![Rational::zero(), Rational::one()]);
            let mixed = at(vec![lam.clone(), Rational::one() - &lam]);
            prop_assert_eq!(mixed, &lam * first + (Rational::one() - &lam) * second);
        }
    }

    #[test]
    fn breakdown_nets_to_the_value(w in weights()) {
        for tree in trees() {
            let profile = profile_from(&tree, &w);
            let breakdown = per_deal_breakdown(&tree, &profile).unwrap();
            let value = expected_value(&tree, &profile).unwrap();
            prop_assert_eq!(&breakdown.net, &value);
            prop_assert_eq!(breakdown.row_total(), value);
            prop_assert!(breakdown.rows.iter().all(|r| r.p1_gross >= Rational::zero() && r.p2_gross >= Rational::zero()));
        }
    }
}

#[test]
fn everyone_betting_and_calling_is_even() {
    // every deal reaches a $2 showdown, and the deals pair off symmetrically
    let tree = build_classic();
    let profile = BehaviorProfile::<Rational>::pure(&tree, |_| 0);
    assert_eq!(expected_value(&tree, &profile).unwrap(), int(0));
    let b = per_deal_breakdown(&tree, &profile).unwrap();
    assert_eq!(b.row(Card::K, Card::J).p1_gross, ratio(1, 3));
    assert_eq!(b.row(Card::J, Card::K).p2_gross, ratio(1, 3));
}

#[test]
fn fair_table_rows() {
    let tree = build_classic();
    for a in [ratio(0, 1), ratio(1, 12), ratio(1, 6), ratio(1, 4), ratio(1, 3)] {
        let param = FairParam::new(a.clone()).unwrap();
        let b = per_deal_breakdown(&tree, &fair_profile(&param)).unwrap();
        assert_eq!(b.row(Card::K, Card::J).p1_gross, ratio(2, 9) - &a / int(6));
        assert_eq!(b.row(Card::K, Card::Q).p1_gross, ratio(1, 6) + &a / int(6));
        assert_eq!(b.row(Card::Q, Card::J).p1_gross, ratio(4, 27) + &a / int(9));
        assert_eq!(b.row(Card::Q, Card::J).p2_gross, ratio(1, 27) - &a / int(18));
        assert_eq!(b.row(Card::J, Card::Q).p1_gross, &a / int(9));
        assert_eq!(b.row(Card::J, Card::Q).p2_gross, ratio(1, 6) - &a / int(18));
        assert_eq!(b, fair_breakdown_formula(&param));
        assert_eq!(b.net, ratio(-1, 18));
    }
}

#[test]
fn missing_infoset_is_named() {
    let tree = build_classic();
    let mut profile = fair_profile(&FairParam::zero());
    let q_call = tree.infoset_by_label(kuhn_cheat::Player::Two, "P2 Q|b").unwrap().id;
    let mut partial = BehaviorProfile::empty(&tree);
    for info in tree.infosets().iter().filter(|i| i.id != q_call) {
        partial.set(info.id, profile.get(info.id).unwrap().to_vec());
    }
    profile = partial;
    match expected_value(&tree, &profile) {
        Err(Error::MissingInfoset(name)) => assert!(name.contains("P2 Q|b"), "{name}"),
        other => panic!("expected a missing-infoset error, got {other:?}"),
    }
}

#[test]
fn tree_without_deal_layer_is_unsupported() {
    let mut b = TreeBuilder::new();
    let root = b.reserve(None);
    let x = b.reserve(Some(root));
    let y = b.reserve(Some(root));
    b.set_decision(root, kuhn_cheat::Player::One, "only", vec![(Action::Bet, x), (Action::Check, y)]);
    b.set_terminal(x, int(1));
    b.set_terminal(y, int(-1));
    let tree = b.finish("toy", None);
    let profile = BehaviorProfile::<Rational>::uniform(&tree);
    assert!(matches!(per_deal_breakdown(&tree, &profile), Err(Error::UnsupportedVariant(_))));
}
