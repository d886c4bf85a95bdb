//! Sweep invariants: corners, the zero plateau, detection behavior and
//! continuity.

use num_traits::{Signed, Zero};

use kuhn_cheat::rational::{int, parse_rational, ratio, Rational};
use kuhn_cheat::sweep::{
    detection_monotonicity, emit_surface, parse_surface, run_points, run_sweep, solve_cell, zero_plateau, Format,
    SweepMode, SweepSpec,
};

#[test]
fn corner_csv() {
    let cells = run_sweep(&SweepSpec::new(SweepMode::Cheat, 2).unwrap()).unwrap();
    let csv = String::from_utf8(emit_surface(&cells, Format::Csv).unwrap()).unwrap();
    let exact: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(exact, vec!["-1/18", "-1/9", "1/9", "0"]);
    assert_eq!(parse_surface(csv.as_bytes(), Format::Csv).unwrap(), cells);
}

#[test]
fn plateau_around_ninety_percent() {
    let at = |s: &str| parse_rational(s).unwrap();
    for (p, q) in [("0.9", "0.9"), ("0.89", "0.9"), ("0.91", "0.9")] {
        assert!(solve_cell(&SweepMode::Cheat, &at(p), &at(q)).unwrap().is_zero(), "({p}, {q})");
    }
    // every point of a 0.01 grid over [0.85, 0.95]^2
    let axis: Vec<Rational> = (85..=95).map(|i| ratio(i, 100)).collect();
    let points: Vec<(Rational, Rational)> =
        axis.iter().flat_map(|a| axis.iter().map(move |b| (a.clone(), b.clone()))).collect();
    let cells = run_points(&SweepMode::Cheat, &points).unwrap();
    assert_eq!(zero_plateau(&cells).cells, cells.len());
}

#[test]
fn detect_sweep_at_full_cheating() {
    let spec = SweepSpec::new(SweepMode::Detect { p: int(1), q: int(1) }, 11).unwrap();
    let cells = run_sweep(&spec).unwrap();
    assert_eq!(cells.len(), 121);
    let csv = emit_surface(&cells, Format::Csv).unwrap();
    assert_eq!(String::from_utf8(csv.clone()).unwrap().lines().count(), 122);
    assert_eq!(parse_surface(&csv, Format::Csv).unwrap(), cells);
    assert!(cells[0].value.is_zero());
    assert_eq!(cells[110].value, int(1)); // (r1, r2) = (1, 0)
    assert_eq!(cells[10].value, int(-1)); // (0, 1)
    assert!(detection_monotonicity(&cells, 11).unwrap().is_empty());
    assert!(cells.iter().all(|c| c.value.abs() <= int(2)));
}

#[test]
fn sweep_is_deterministic() {
    let spec = SweepSpec::new(SweepMode::Detect { p: ratio(1, 2), q: int(1) }, 3).unwrap();
    let a = emit_surface(&run_sweep(&spec).unwrap(), Format::Json).unwrap();
    let b = emit_surface(&run_sweep(&spec).unwrap(), Format::Json).unwrap();
    assert_eq!(a, b);
}

#[test]
fn adjacent_cells_are_close_along_a_fine_line() {
    // q fixed at 9/10, p over a 101-point grid
    let n = 101;
    let points: Vec<(Rational, Rational)> = (0..n).map(|i| (ratio(i, n - 1), ratio(9, 10))).collect();
    let cells = run_points(&SweepMode::Cheat, &points).unwrap();
    let bound = ratio(4, n - 1);
    for w in cells.windows(2) {
        assert!((&w[1].value - &w[0].value).abs() <= bound, "{} -> {}", w[0].axis1, w[1].axis1);
    }
}
