//! Solve and evaluation reports shared by the CLI: a JSON document and a
//! plain-text rendering of the same data.

use std::fmt::Write as _;

use num_rational::BigRational;
use serde::Serialize;

use crate::analytic::NaiveExploitation;
use crate::gametree::{BehaviorProfile, DealBreakdown, GameTree};
use crate::kuhn::CheatConfig;
use crate::rational::{format_decimal, Rational, Scalar};
use crate::sweep::DECIMAL_DIGITS;

/// A number as an exact string (when known) and a 12-digit decimal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Number {
    pub exact: Option<String>,
    pub decimal: String,
}

impl Number {
    pub fn exact(r: &Rational) -> Number {
        Number { exact: Some(r.to_string()), decimal: format_decimal(r, DECIMAL_DIGITS) }
    }

    pub fn float(x: f64) -> Number {
        let decimal = BigRational::from_float(x).map_or_else(|| x.to_string(), |r| format_decimal(&r, DECIMAL_DIGITS));
        Number { exact: None, decimal }
    }

    fn text(&self) -> String {
        match &self.exact {
            Some(e) if *e != self.decimal => format!("{e} ({})", self.decimal),
            _ => self.decimal.clone(),
        }
    }
}

/// Conversion of solver scalars into report numbers.
pub trait Reportable: Scalar {
    fn number(&self) -> Number;
}

impl Reportable for Rational {
    fn number(&self) -> Number {
        Number::exact(self)
    }
}

impl Reportable for f64 {
    fn number(&self) -> Number {
        Number::float(*self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActionProb {
    pub action: String,
    pub prob: Number,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfosetStrategy {
    pub infoset: String,
    pub actions: Vec<ActionProb>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BreakdownRow {
    pub p1_card: String,
    pub p2_card: String,
    pub p1_gross: Number,
    pub p2_gross: Number,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Discrepancy {
    pub published_value: Number,
    pub computed_value: Number,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub variant: String,
    pub config: CheatConfig,
    pub method: String,
    pub value_exact: Option<String>,
    pub value_decimal: String,
    pub exploitability: Number,
    pub breakdown: Vec<BreakdownRow>,
    pub net: Number,
    pub strategy: Vec<InfosetStrategy>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub paper_discrepancy: Option<Discrepancy>,
}

pub fn strategy_rows<T: Reportable>(tree: &GameTree, profile: &BehaviorProfile<T>) -> Vec<InfosetStrategy> {
    tree.infosets()
        .iter()
        .filter_map(|info| {
            let dist = profile.get(info.id)?;
            Some(InfosetStrategy {
                infoset: info.label.clone(),
                actions: info
                    .actions
                    .iter()
                    .zip(dist)
                    .map(|(a, p)| ActionProb { action: a.name().to_string(), prob: p.number() })
                    .collect(),
            })
        })
        .collect()
}

pub fn breakdown_rows<T: Reportable>(breakdown: &DealBreakdown<T>) -> Vec<BreakdownRow> {
    breakdown
        .rows
        .iter()
        .map(|r| BreakdownRow {
            p1_card: r.p1_card.to_string(),
            p2_card: r.p2_card.to_string(),
            p1_gross: r.p1_gross.number(),
            p2_gross: r.p2_gross.number(),
        })
        .collect()
}

impl Report {
    pub fn new<T: Reportable>(
        tree: &GameTree,
        method: &str,
        value: &T,
        exploitability: &T,
        profile: &BehaviorProfile<T>,
        breakdown: &DealBreakdown<T>,
    ) -> Report {
        let value = value.number();
        Report {
            variant: tree.variant().to_string(),
            config: tree.config().cloned().unwrap_or_else(CheatConfig::classic),
            method: method.to_string(),
            value_exact: value.exact,
            value_decimal: value.decimal,
            exploitability: exploitability.number(),
            breakdown: breakdown_rows(breakdown),
            net: breakdown.net.number(),
            strategy: strategy_rows(tree, profile),
            paper_discrepancy: None,
        }
    }

    /// Report for a cheater's best response against a non-adapting fair
    /// player. `exploitability` is that of the combined profile.
    pub fn naive(n: &NaiveExploitation, exploitability: &Rational) -> Report {
        let mut report = Report::new(
            &n.tree,
            "best-response",
            &n.value,
            exploitability,
            &n.cheater_strategy,
            &n.breakdown,
        );
        if n.discrepancy() {
            report.paper_discrepancy = Some(Discrepancy {
                published_value: Number::exact(&n.published_value),
                computed_value: Number::exact(&n.value),
            });
        }
        report
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let value = Number { exact: self.value_exact.clone(), decimal: self.value_decimal.clone() };
        writeln!(out, "variant: {}", self.variant).unwrap();
        writeln!(out, "config: {}", self.config).unwrap();
        writeln!(out, "method: {}", self.method).unwrap();
        writeln!(out, "value: {}", value.text()).unwrap();
        writeln!(out, "exploitability: {}", self.exploitability.text()).unwrap();
        if let Some(d) = &self.paper_discrepancy {
            writeln!(out, "published value: {}", d.published_value.text()).unwrap();
            writeln!(out, "paper_discrepancy: computed {} differs from published {}", d.computed_value.text(), d.published_value.text()).unwrap();
        }
        writeln!(out, "breakdown (p1 card, p2 card, p1 gross, p2 gross):").unwrap();
        for r in &self.breakdown {
            writeln!(out, "  {} {}  {}  {}", r.p1_card, r.p2_card, r.p1_gross.text(), r.p2_gross.text()).unwrap();
        }
        writeln!(out, "  net {}", self.net.text()).unwrap();
        writeln!(out, "strategy:").unwrap();
        for s in &self.strategy {
            let probs: Vec<String> = s.actions.iter().map(|a| format!("{}={}", a.action, a.prob.text())).collect();
            writeln!(out, "  {:<12} {}", s.infoset, probs.join(" ")).unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gametree::per_deal_breakdown;
    use crate::kuhn::build_classic;
    use crate::solver::solve_lp;

    #[test]
    fn classic_report() {
        let tree = build_classic();
        let res = solve_lp(&tree).unwrap();
        let breakdown = per_deal_breakdown(&tree, &res.profile).unwrap();
        let report = Report::new(&tree, "lp", &res.value, &res.exploitability, &res.profile, &breakdown);
        assert_eq!(report.value_exact.as_deref(), Some("-1/18"));
        assert_eq!(report.value_decimal, "-0.0555555555556");
        assert_eq!(report.strategy.len(), 12);
        let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(json["config"]["p"], "0");
        assert!(json.get("paper_discrepancy").is_none());
        assert!(report.to_text().contains("value: -1/18 (-0.0555555555556)"));
    }

    #[test]
    fn float_numbers_have_no_exact_form() {
        let n = Number::float(0.1);
        assert_eq!(n.exact, None);
        assert_eq!(n.decimal, "0.1");
    }
}
