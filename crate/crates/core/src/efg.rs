//! Reading and writing the Gambit `.efg` extensive-form text format
//! (`EFG 2 R`, rational payoffs).
//!
//! Nodes are written in preorder. Each chance node gets its own chance
//! information set; player information sets are numbered per player in
//! order of first appearance, and every terminal has its own outcome.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gametree::{Action, ChanceBranch, GameTree, NodeId, NodeKind, Player, TreeBuilder};
use crate::kuhn::CheatConfig;
use crate::rational::{parse_rational, Rational};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Serializes `tree`. The game title carries the variant name and the
/// comment line carries the cheat configuration, so [`parse_efg`] can
/// restore both.
pub fn export_efg(tree: &GameTree) -> String {
    let mut out = String::new();
    let title = format!("kuhn-cheat {}", tree.variant());
    let comment = tree.config().map(ToString::to_string).unwrap_or_default();
    writeln!(out, "EFG 2 R {} {{ \"Player 1\" \"Player 2\" }}", quote(&title)).unwrap();
    writeln!(out, "{}", quote(&comment)).unwrap();
    writeln!(out).unwrap();

    // per-player numbering, 1-based, by first appearance
    let mut number = vec![0usize; tree.infosets().len()];
    let mut next = [0usize; 2];
    for info in tree.infosets() {
        next[info.player.index()] += 1;
        number[info.id] = next[info.player.index()];
    }
    let mut seen = vec![false; tree.infosets().len()];
    let mut chance_sets = 0;
    let mut outcomes = 0;
    let mut stack = vec![tree.root()];
    while let Some(id) = stack.pop() {
        let node = tree.node(id);
        match &node.kind {
            NodeKind::Chance(branches) => {
                chance_sets += 1;
                let body: Vec<String> = branches.iter().map(|b| format!("{} {}", quote(&b.label), b.prob)).collect();
                writeln!(out, "c \"\" {chance_sets} \"\" {{ {} }} 0", body.join(" ")).unwrap();
                stack.extend(branches.iter().rev().map(|b| b.child));
            }
            NodeKind::Decision { player, infoset, actions } => {
                let info = tree.infoset(*infoset);
                if seen[*infoset] {
                    writeln!(out, "p \"\" {} {} 0", player.number(), number[*infoset]).unwrap();
                } else {
                    seen[*infoset] = true;
                    let names: Vec<String> = info.actions.iter().map(|a| quote(a.name())).collect();
                    writeln!(
                        out,
                        "p \"\" {} {} {} {{ {} }} 0",
                        player.number(),
                        number[*infoset],
                        quote(&info.label),
                        names.join(" ")
                    )
                    .unwrap();
                }
                stack.extend(actions.iter().rev().map(|&(_, c)| c));
            }
            NodeKind::Terminal(u) => {
                outcomes += 1;
                writeln!(out, "t \"\" {outcomes} \"\" {{ {}, {} }}", u, -u).unwrap();
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Str(String),
    Word(String),
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() || c == ',' => {
                chars.next();
            }
            '{' => {
                chars.next();
                tokens.push(Token::Open);
            }
            '}' => {
                chars.next();
                tokens.push(Token::Close);
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        None => return Err(Error::Parse("unterminated string".into())),
                        Some('\\') => match chars.next() {
                            Some(e) => s.push(e),
                            None => return Err(Error::Parse("unterminated string".into())),
                        },
                        Some('"') => break,
                        Some(ch) => s.push(ch),
                    }
                }
                tokens.push(Token::Str(s));
            }
            _ => {
                let mut w = String::new();
                while let Some(&ch) = chars.peek() {
                    if ch.is_whitespace() || matches!(ch, '{' | '}' | '"' | ',') {
                        break;
                    }
                    w.push(ch);
                    chars.next();
                }
                tokens.push(Token::Word(w));
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Result<Token> {
        let t = self.tokens.get(self.pos).cloned().ok_or_else(|| Error::Parse("unexpected end of file".into()))?;
        self.pos += 1;
        Ok(t)
    }

    fn word(&mut self) -> Result<String> {
        match self.next()? {
            Token::Word(w) => Ok(w),
            other => Err(Error::Parse(format!("expected a word, found {other:?}"))),
        }
    }

    fn string(&mut self) -> Result<String> {
        match self.next()? {
            Token::Str(s) => Ok(s),
            other => Err(Error::Parse(format!("expected a quoted string, found {other:?}"))),
        }
    }

    fn number(&mut self) -> Result<usize> {
        let w = self.word()?;
        w.parse().map_err(|_| Error::Parse(format!("expected a number, found {w:?}")))
    }

    fn rational(&mut self) -> Result<Rational> {
        parse_rational(&self.word()?)
    }

    fn open(&mut self) -> Result<()> {
        match self.next()? {
            Token::Open => Ok(()),
            other => Err(Error::Parse(format!("expected '{{', found {other:?}"))),
        }
    }

    fn at_close(&mut self) -> bool {
        if self.peek() == Some(&Token::Close) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn at_open(&self) -> bool {
        self.peek() == Some(&Token::Open)
    }

    fn at_string(&self) -> bool {
        matches!(self.peek(), Some(Token::Str(_)))
    }
}

struct Reader {
    parser: Parser,
    builder: TreeBuilder,
    /// (player, number) -> (label, actions)
    infosets: HashMap<(u8, usize), (String, Vec<Action>)>,
    /// chance set number -> branches (label, probability)
    chance: HashMap<usize, Vec<(String, Rational)>>,
    /// outcome number -> payoff to player 1
    outcomes: HashMap<usize, Rational>,
}

impl Reader {
    fn node(&mut self, parent: Option<NodeId>) -> Result<NodeId> {
        let id = self.builder.reserve(parent);
        let kind = self.parser.word()?;
        self.parser.string()?; // node name
        match kind.as_str() {
            "c" => {
                let set = self.parser.number()?;
                let branches = if self.parser.at_string() {
                    self.parser.string()?;
                    self.parser.open()?;
                    let mut branches = Vec::new();
                    while !self.parser.at_close() {
                        let label = self.parser.string()?;
                        branches.push((label, self.parser.rational()?));
                    }
                    self.chance.insert(set, branches.clone());
                    branches
                } else {
                    self.chance.get(&set).cloned().ok_or_else(|| Error::Parse(format!("chance set {set} used before definition")))?
                };
                self.outcome()?;
                let mut out = Vec::with_capacity(branches.len());
                for (label, prob) in branches {
                    let child = self.node(Some(id))?;
                    out.push(ChanceBranch { label, prob, child });
                }
                self.builder.set_chance(id, out);
            }
            "p" => {
                let number = self.parser.number()?;
                let player = u8::try_from(number)
                    .ok()
                    .and_then(Player::from_number)
                    .ok_or_else(|| Error::Parse(format!("unsupported player {number}")))?;
                let set = self.parser.number()?;
                let (label, actions) = if self.parser.at_string() {
                    let mut label = self.parser.string()?;
                    if label.is_empty() {
                        label = format!("{player} #{set}");
                    }
                    self.parser.open()?;
                    let mut actions = Vec::new();
                    while !self.parser.at_close() {
                        actions.push(self.parser.string()?.parse::<Action>()?);
                    }
                    if let Some(prev) = self.infosets.get(&(player.number(), set)) {
                        if prev != &(label.clone(), actions.clone()) {
                            return Err(Error::Parse(format!("information set {set} of {player} redefined")));
                        }
                    }
                    self.infosets.insert((player.number(), set), (label.clone(), actions.clone()));
                    (label, actions)
                } else {
                    self.infosets
                        .get(&(player.number(), set))
                        .cloned()
                        .ok_or_else(|| Error::Parse(format!("information set {set} of {player} used before definition")))?
                };
                self.outcome()?;
                let mut out = Vec::with_capacity(actions.len());
                for action in actions {
                    let child = self.node(Some(id))?;
                    out.push((action, child));
                }
                self.builder.set_decision(id, player, &label, out);
            }
            "t" => {
                let payoff = self.outcome()?;
                self.builder.set_terminal(id, payoff.unwrap_or_else(Rational::zero));
            }
            other => return Err(Error::Parse(format!("unknown node type {other:?}"))),
        }
        Ok(id)
    }

    /// Outcome number with an optional name and payoff list; returns the
    /// payoff to player 1 if the outcome is nonzero.
    fn outcome(&mut self) -> Result<Option<Rational>> {
        let number = self.parser.number()?;
        if self.parser.at_string() {
            self.parser.string()?;
        }
        if self.parser.at_open() {
            self.parser.open()?;
            let mut payoffs = Vec::new();
            while !self.parser.at_close() {
                payoffs.push(self.parser.rational()?);
            }
            let [u1, u2] = <[Rational; 2]>::try_from(payoffs)
                .map_err(|p| Error::Parse(format!("outcome {number} has {} payoffs, expected 2", p.len())))?;
            if &u1 + &u2 != Rational::zero() {
                return Err(Error::Parse(format!("outcome {number} is not zero-sum: {u1}, {u2}")));
            }
            self.outcomes.insert(number, u1);
        }
        if number == 0 {
            return Ok(None);
        }
        self.outcomes
            .get(&number)
            .cloned()
            .map(Some)
            .ok_or_else(|| Error::Parse(format!("outcome {number} used before definition")))
    }
}

fn parse_config(comment: &str) -> Option<CheatConfig> {
    let mut values = HashMap::new();
    for part in comment.split_whitespace() {
        let (k, v) = part.split_once('=')?;
        values.insert(k, parse_rational(v).ok()?);
    }
    let mut take = |k| values.remove(k);
    CheatConfig::new(take("p")?, take("q")?, take("r1")?, take("r2")?).ok()
}

/// Reads a two-player zero-sum tree written in the `.efg` format.
pub fn parse_efg(text: &str) -> Result<GameTree> {
    let mut parser = Parser { tokens: tokenize(text)?, pos: 0 };
    if parser.word()? != "EFG" || parser.word()? != "2" || parser.word()? != "R" {
        return Err(Error::Parse("missing \"EFG 2 R\" header".into()));
    }
    let title = parser.string()?;
    parser.open()?;
    let mut players = 0;
    while !parser.at_close() {
        parser.string()?;
        players += 1;
    }
    if players != 2 {
        return Err(Error::Parse(format!("expected 2 players, found {players}")));
    }
    let comment = if parser.at_string() { parser.string()? } else { String::new() };
    let mut reader = Reader {
        parser,
        builder: TreeBuilder::new(),
        infosets: HashMap::new(),
        chance: HashMap::new(),
        outcomes: HashMap::new(),
    };
    reader.node(None)?;
    if let Some(t) = reader.parser.peek() {
        return Err(Error::Parse(format!("trailing input starting at {t:?}")));
    }
    let variant = title.strip_prefix("kuhn-cheat ").unwrap_or(&title).to_string();
    Ok(reader.builder.finish(variant, parse_config(&comment)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gametree::{tree_stats, validate_tree};
    use crate::kuhn::{build_classic, build_detection};
    use crate::rational::ratio;

    #[test]
    fn classic_round_trip() {
        let tree = build_classic();
        let text = export_efg(&tree);
        assert!(text.starts_with("EFG 2 R \"kuhn-cheat classic\""));
        assert_eq!(text, export_efg(&tree));
        let back = parse_efg(&text).unwrap();
        assert_eq!(back, tree);
        assert!(validate_tree(&back).is_empty());
    }

    #[test]
    fn detection_round_trip() {
        let config = CheatConfig::new(ratio(1, 1), ratio(1, 1), ratio(1, 2), ratio(1, 2)).unwrap();
        let tree = build_detection(&config);
        let back = parse_efg(&export_efg(&tree)).unwrap();
        assert_eq!(tree_stats(&back), tree_stats(&tree));
        assert_eq!(back.config(), Some(&config));
        assert_eq!(back, tree);
    }

    #[test]
    fn gambit_style_shorthand_is_accepted() {
        let text = r#"EFG 2 R "tiny" { "A" "B" }
p "" 1 1 "x" { "Bet" "Check" } 0
t "" 1 "win" { 1, -1 }
p "" 2 1 "y" { "Bet" "Check" } 0
t "" 1
t "" 2 "lose" { -1 1 }
"#;
        let tree = parse_efg(text).unwrap();
        assert_eq!(tree.nodes().len(), 5);
        assert!(matches!(tree.node(3).kind, NodeKind::Terminal(ref u) if *u == ratio(1, 1)));
        assert_eq!(tree.config(), None);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_efg("NFG 1 R").is_err());
        let not_zero_sum = "EFG 2 R \"\" { \"A\" \"B\" } t \"\" 1 \"\" { 1, 1 }";
        assert!(matches!(parse_efg(not_zero_sum), Err(Error::Parse(_))));
        let unknown_action = "EFG 2 R \"\" { \"A\" \"B\" } p \"\" 1 1 \"x\" { \"Raise\" } 0 t \"\" 0";
        assert!(parse_efg(unknown_action).is_err());
    }
}
