//! Acceptance suite: runs every exit criterion and prints one PASS/FAIL
//! line each. Exits non-zero if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::Instant;

use num_traits::{One, Zero};

use kuhn_cheat::analytic::{fair_breakdown_formula, fair_profile, naive_exploitation, FairParam};
use kuhn_cheat::efg::{export_efg, parse_efg};
use kuhn_cheat::gametree::{expected_value, per_deal_breakdown, tree_stats, Card, GameTree, Player};
use kuhn_cheat::kuhn::{build_cheating, build_classic, build_detection, build_variant, CheatConfig};
use kuhn_cheat::rational::{int, parse_rational, ratio, Rational};
use kuhn_cheat::solver::{exploitability, solve_cfr, solve_lp, solve_normal_form};
use kuhn_cheat::sweep::{detection_monotonicity, run_sweep, DetectionGains, SweepMode, SweepSpec};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    let detail = detail.into();
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn bluff_grid() -> Vec<FairParam> {
    [ratio(0, 1), ratio(1, 12), ratio(1, 6), ratio(1, 4), ratio(1, 3)]
        .into_iter()
        .map(|a| FairParam::new(a).unwrap())
        .collect()
}

fn cheating(p: Rational, q: Rational) -> GameTree {
    build_cheating(&CheatConfig::cheating(p, q).unwrap()).unwrap()
}

fn classic_value() -> Outcome {
    let value = solve_lp(&build_classic()).map_err(|e| e.to_string())?.value;
    check(value == ratio(-1, 18), format!("value {value}"))
}

fn strategy_family() -> Outcome {
    let tree = build_classic();
    for a in bluff_grid() {
        let profile = fair_profile(&a);
        let value = expected_value(&tree, &profile).map_err(|e| e.to_string())?;
        let gap = exploitability(&tree, &profile).map_err(|e| e.to_string())?;
        if value != ratio(-1, 18) || !gap.is_zero() {
            return Err(format!("a = {}: value {value}, exploitability {gap}", a.value()));
        }
    }
    Ok("value -1/18 and exploitability 0 for a in {0, 1/12, 1/6, 1/4, 1/3}".into())
}

fn fair_breakdown_table() -> Outcome {
    let tree = build_classic();
    for a in bluff_grid() {
        let computed = per_deal_breakdown(&tree, &fair_profile(&a)).map_err(|e| e.to_string())?;
        if computed != fair_breakdown_formula(&a) {
            return Err(format!("a = {}: {computed:?}", a.value()));
        }
    }
    Ok("all eight closed-form entries match on the a grid".into())
}

fn player_two_marginals() -> Outcome {
    let tree = build_classic();
    let res = solve_lp(&tree).map_err(|e| e.to_string())?;
    let first = |label: &str| res.profile.get(tree.infoset_by_label(Player::Two, label).unwrap().id).unwrap()[0].clone();
    let got = [first("P2 Q|b"), first("P2 J|k"), first("P2 K|b"), first("P2 K|k"), first("P2 Q|k"), first("P2 J|b")];
    let want = [ratio(1, 3), ratio(1, 3), int(1), int(1), int(0), int(0)];
    check(got == want, format!("call Q {}, bet J {}, K call/bet {}/{}", got[0], got[1], got[2], got[3]))
}

fn adaptive_corners() -> Outcome {
    let v10 = solve_lp(&cheating(int(1), int(0))).map_err(|e| e.to_string())?.value;
    let v01 = solve_lp(&cheating(int(0), int(1))).map_err(|e| e.to_string())?.value;
    let v11 = solve_lp(&cheating(int(1), int(1))).map_err(|e| e.to_string())?.value;
    check(
        v10 == ratio(1, 9) && v01 == ratio(-1, 9) && v11.is_zero(),
        format!("V(1,0) = {v10}, V(0,1) = {v01}, V(1,1) = {v11}"),
    )
}

fn zero_plateau() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (p, q) in [("0.9", "0.9"), ("0.89", "0.9"), ("0.91", "0.9")] {
        let tree = cheating(parse_rational(p).unwrap(), parse_rational(q).unwrap());
        let v = solve_lp(&tree).map_err(|e| e.to_string())?.value;
        ok &= v.is_zero();
        parts.push(format!("V({p},{q}) = {v}"));
    }
    check(ok, parts.join(", "))
}

fn structural_counts() -> Outcome {
    let classic = tree_stats(&build_classic());
    let config = CheatConfig::new(int(1), int(1), ratio(1, 2), ratio(1, 2)).unwrap();
    let detection = tree_stats(&build_detection(&config));
    check(
        classic.decision_nodes == 24 && classic.infosets() == 12 && (800..=1100).contains(&detection.total_nodes()),
        format!(
            "classic {} decision nodes / {} infosets; detection tree {} nodes",
            classic.decision_nodes,
            classic.infosets(),
            detection.total_nodes()
        ),
    )
}

fn naive_oracle() -> Outcome {
    let zero = FairParam::zero();
    let one = naive_exploitation(Player::One, &zero).map_err(|e| e.to_string())?;
    let mut problems = Vec::new();
    if one.value != ratio(1, 3) {
        problems.push(format!("player 1 cheats: {}", one.value));
    }
    let b = &one.breakdown;
    let reproduced = [
        b.row(Card::K, Card::J).p1_gross.clone(),
        b.row(Card::K, Card::Q).p1_gross.clone(),
        b.row(Card::Q, Card::J).p1_gross.clone(),
        b.row(Card::Q, Card::K).p2_gross.clone(),
        b.row(Card::J, Card::K).p2_gross.clone(),
    ];
    if reproduced != [ratio(2, 9), ratio(2, 9), ratio(2, 9), ratio(1, 6), ratio(1, 6)] {
        problems.push(format!("player 1 cheats, rows {reproduced:?}"));
    }
    if !one.discrepancy() {
        problems.push("player 1 cheats: discrepancy not flagged".into());
    }
    for a in bluff_grid() {
        let two = naive_exploitation(Player::Two, &a).map_err(|e| e.to_string())?;
        if two.value != ratio(-2, 9) || !two.discrepancy() {
            problems.push(format!("player 2 cheats, a = {}: {}", a.value(), two.value));
        }
        if a.value().is_zero() {
            let rows = [two.breakdown.row(Card::K, Card::J).p1_gross.clone(), two.breakdown.row(Card::K, Card::Q).p1_gross.clone()];
            if rows != [ratio(1, 6), ratio(1, 6)] {
                problems.push(format!("player 2 cheats, rows {rows:?}"));
            }
        }
    }
    check(
        problems.is_empty(),
        if problems.is_empty() {
            format!(
                "player 1 cheats: 1/3 (published {}); player 2 cheats: -2/9 for every a (published {} at a = 0); \
                 consistent rows reproduced, discrepancies flagged",
                one.published_value,
                ratio(-2, 3)
            )
        } else {
            problems.join("; ")
        },
    )
}

fn oracle_equivalence() -> Outcome {
    let mut notes = Vec::new();
    for (name, tree) in [
        ("classic", build_classic()),
        ("p=1", cheating(int(1), int(0))),
        ("q=1", cheating(int(0), int(1))),
    ] {
        let lp = solve_lp(&tree).map_err(|e| e.to_string())?.value;
        let nf = solve_normal_form(&tree).map_err(|e| e.to_string())?.value;
        if lp != nf {
            return Err(format!("{name}: LP {lp} vs normal form {nf}"));
        }
        notes.push(format!("{name} {lp}"));
    }
    let halves = [int(0), ratio(1, 2), int(1)];
    let mut worst_gap = 0.0f64;
    let mut worst_exploit = 0.0f64;
    for p in &halves {
        for q in &halves {
            for r1 in &halves {
                for r2 in &halves {
                    let config = CheatConfig::new(p.clone(), q.clone(), r1.clone(), r2.clone()).unwrap();
                    let tree = build_variant(&config);
                    let lp = solve_lp(&tree).map_err(|e| e.to_string())?.value;
                    let cfr = solve_cfr(&tree, 100_000);
                    let gap = (cfr.value - kuhn_cheat::rational::Scalar::to_f64(&lp)).abs();
                    worst_gap = worst_gap.max(gap);
                    worst_exploit = worst_exploit.max(cfr.exploitability);
                }
            }
        }
    }
    check(
        worst_gap <= 1e-2 && worst_exploit <= 1e-2,
        format!(
            "normal form = LP ({}); 81 configs: max |CFR - LP| = {worst_gap:.2e}, max CFR exploitability = {worst_exploit:.2e}",
            notes.join(", ")
        ),
    )
}

fn detection_asymmetry() -> Outcome {
    let gains = DetectionGains::measure(&int(1), &int(1)).map_err(|e| e.to_string())?;
    let spec = SweepSpec::new(SweepMode::Detect { p: int(1), q: int(1) }, 11).unwrap();
    let cells = run_sweep(&spec).map_err(|e| e.to_string())?;
    let violations = detection_monotonicity(&cells, 11).map_err(|e| e.to_string())?;
    let (g1, g2) = (gains.g1(), gains.g2());
    check(
        g1 > g2 && gains.v10.is_one() && violations.is_empty(),
        format!(
            "V(0,0) = {}, V(1,0) = {}, V(0,1) = {}; G1 = {g1}, G2 = {g2} (need G1 > G2); \
             {} monotonicity violations on the n = 11 grid",
            gains.v00,
            gains.v10,
            gains.v01,
            violations.len()
        ),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let file = dir.path().join("out");
    let f = file.to_str().unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec!["solve", "--p", "0", "--q", "1", "--out", f],
        vec!["solve", "--algo", "cfr", "--iterations", "1000", "--p", "1/2", "--json"],
        vec!["solve", "--algo", "enum", "--p", "1"],
        vec!["eval", "--a", "1/4", "--out", f],
        vec!["naive", "--cheater", "2", "--a", "1/6", "--out", f],
        vec!["sweep", "--mode", "cheat", "--n", "3", "--format", "csv", "--out", f],
        vec!["sweep", "--mode", "detect", "--n", "2", "--format", "json"],
        vec!["export-efg", "--p", "1", "--q", "1", "--r1", "0.5", "--r2", "0.5", "--out", f],
        vec!["stats", "--p", "1/2", "--r1", "1"],
    ];
    for args in &commands {
        let mut runs = Vec::new();
        for _ in 0..2 {
            let out = Command::new(env!("CARGO_BIN_EXE_kuhn-cheat")).args(args).output().map_err(|e| e.to_string())?;
            if !out.status.success() {
                return Err(format!("{args:?} exited with {:?}", out.status.code()));
            }
            let written = if args.contains(&f) { std::fs::read(&file).map_err(|e| e.to_string())? } else { Vec::new() };
            runs.push((out.stdout, written));
        }
        if runs[0] != runs[1] {
            return Err(format!("{args:?} is not byte-identical across runs"));
        }
    }
    let tree = build_detection(&CheatConfig::new(int(1), int(1), ratio(1, 2), ratio(1, 2)).unwrap());
    let back = parse_efg(&export_efg(&tree)).map_err(|e| e.to_string())?;
    check(
        tree_stats(&back) == tree_stats(&tree),
        format!("{} commands byte-identical; .efg round trip keeps {}", commands.len(), tree_stats(&back)),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("classic value", classic_value),
        ("fair strategy family", strategy_family),
        ("fair per-deal table", fair_breakdown_table),
        ("player 2 equilibrium marginals", player_two_marginals),
        ("adaptive cheating corners", adaptive_corners),
        ("zero plateau near 0.9", zero_plateau),
        ("structural counts", structural_counts),
        ("non-adaptive cheater oracle", naive_oracle),
        ("oracle equivalence", oracle_equivalence),
        ("detection asymmetry", detection_asymmetry),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
