use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use kuhn_cheat::analytic::{fair_profile_on, naive_exploitation, FairParam};
use kuhn_cheat::efg::{export_efg, parse_efg};
use kuhn_cheat::gametree::{expected_value, per_deal_breakdown, tree_stats, Player};
use kuhn_cheat::kuhn::{build_variant, CheatConfig};
use kuhn_cheat::rational::{parse_rational, Rational};
use kuhn_cheat::report::Report;
use kuhn_cheat::solver::{exploitability, solve_cfr, solve_lp, solve_normal_form};
use kuhn_cheat::sweep::{
    bilinear_midpoint_report, emit_surface, run_sweep, zero_plateau, Format, SweepMode, SweepSpec,
    DEFAULT_RESOLUTION,
};
use kuhn_cheat::{Error, Result};

#[derive(Parser)]
#[command(name = "kuhn-cheat", version, about = "Kuhn poker with cheating and cheat detection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the game implied by the probability flags
    Solve {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, value_enum, default_value_t = Algo::Lp)]
        algo: Algo,
        /// CFR iterations
        #[arg(long, default_value_t = 100_000)]
        iterations: usize,
        #[command(flatten)]
        output: ReportArgs,
    },
    /// Evaluate both players playing the fair strategy with bluff rate --a
    Eval {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, value_parser = bluff_rate, default_value = "0")]
        a: Rational,
        #[command(flatten)]
        output: ReportArgs,
    },
    /// Best response of a cheater against a fair player who does not adapt
    Naive {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        cheater: u8,
        #[arg(long, value_parser = bluff_rate, default_value = "0")]
        a: Rational,
        #[command(flatten)]
        output: ReportArgs,
    },
    /// Equilibrium values over a grid of cheat or detection probabilities
    Sweep {
        #[arg(long, value_enum, default_value_t = Mode::Cheat)]
        mode: Mode,
        /// Points per axis, endpoints included
        #[arg(long, default_value_t = DEFAULT_RESOLUTION, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(2..))]
        n: usize,
        /// Fixed cheat probability of player 1 (detect mode)
        #[arg(long, value_parser = probability, default_value = "1")]
        p: Rational,
        /// Fixed cheat probability of player 2 (detect mode)
        #[arg(long, value_parser = probability, default_value = "1")]
        q: Rational,
        #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
        format: OutFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also print the zero-plateau extent and bilinear midpoint deviations
        #[arg(long)]
        report: bool,
    },
    /// Write the game tree in .efg format
    ExportEfg {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Node and information-set counts
    Stats {
        #[command(flatten)]
        game: GameArgs,
        /// Read the tree from an .efg file instead of building it
        #[arg(long)]
        from: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GameArgs {
    /// Probability that player 1 cheats
    #[arg(long, value_parser = probability, default_value = "0")]
    p: Rational,
    /// Probability that player 2 cheats
    #[arg(long, value_parser = probability, default_value = "0")]
    q: Rational,
    /// Probability that player 1 detects cheating
    #[arg(long, value_parser = probability, default_value = "0")]
    r1: Rational,
    /// Probability that player 2 detects cheating
    #[arg(long, value_parser = probability, default_value = "0")]
    r2: Rational,
}

impl GameArgs {
    fn config(&self) -> CheatConfig {
        CheatConfig::new(self.p.clone(), self.q.clone(), self.r1.clone(), self.r2.clone())
            .expect("flags are range-checked by the parser")
    }
}

#[derive(Args)]
struct ReportArgs {
    /// Write the JSON report here
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the JSON report instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Lp,
    Cfr,
    Enum,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Cheat,
    Detect,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

fn probability(s: &str) -> std::result::Result<Rational, String> {
    let r = parse_rational(s).map_err(|e| e.to_string())?;
    CheatConfig::new(r.clone(), r.clone(), r.clone(), r.clone()).map_err(|_| format!("{s} is outside [0, 1]"))?;
    Ok(r)
}

fn bluff_rate(s: &str) -> std::result::Result<Rational, String> {
    let r = parse_rational(s).map_err(|e| e.to_string())?;
    FairParam::new(r.clone()).map_err(|_| format!("{s} is outside [0, 1/3]"))?;
    Ok(r)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn emit(report: &Report, output: &ReportArgs) -> Result<String> {
    if let Some(path) = &output.out {
        write_file(path, report.to_json().as_bytes())?;
    }
    Ok(if output.json { report.to_json() } else { report.to_text() })
}

fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Solve { game, algo, iterations, output } => {
            let tree = build_variant(&game.config());
            let report = match algo {
                Algo::Lp | Algo::Enum => {
                    let res = if matches!(algo, Algo::Lp) { solve_lp(&tree)? } else { solve_normal_form(&tree)? };
                    let breakdown = per_deal_breakdown(&tree, &res.profile)?;
                    let method = res.method.to_string();
                    Report::new(&tree, &method, &res.value, &res.exploitability, &res.profile, &breakdown)
                }
                Algo::Cfr => {
                    let res = solve_cfr(&tree, iterations);
                    let breakdown = per_deal_breakdown(&tree, &res.profile)?;
                    Report::new(&tree, "cfr", &res.value, &res.exploitability, &res.profile, &breakdown)
                }
            };
            emit(&report, &output)
        }
        Command::Eval { game, a, output } => {
            let tree = build_variant(&game.config());
            let a = FairParam::new(a)?;
            let profile =
                fair_profile_on(&tree, &a, Player::One).merged(&fair_profile_on(&tree, &a, Player::Two));
            let value = expected_value(&tree, &profile)?;
            let gap = exploitability(&tree, &profile)?;
            let breakdown = per_deal_breakdown(&tree, &profile)?;
            emit(&Report::new(&tree, "fair", &value, &gap, &profile, &breakdown), &output)
        }
        Command::Naive { cheater, a, output } => {
            let cheater = Player::from_number(cheater).expect("range-checked by the parser");
            let n = naive_exploitation(cheater, &FairParam::new(a)?)?;
            let fair = fair_profile_on(&n.tree, &n.a, cheater.opponent());
            let gap = exploitability(&n.tree, &fair.merged(&n.cheater_strategy))?;
            emit(&Report::naive(&n, &gap), &output)
        }
        Command::Sweep { mode, n, p, q, format, out, report } => {
            let mode = match mode {
                Mode::Cheat => SweepMode::Cheat,
                Mode::Detect => SweepMode::Detect { p, q },
            };
            let spec = SweepSpec::new(mode, n)?;
            let cells = run_sweep(&spec)?;
            let format = match format {
                OutFormat::Csv => Format::Csv,
                OutFormat::Json => Format::Json,
            };
            let bytes = emit_surface(&cells, format)?;
            let mut text = String::new();
            match &out {
                Some(path) => {
                    write_file(path, &bytes)?;
                    text.push_str(&format!("wrote {} cells to {}\n", cells.len(), path.display()));
                }
                None => text.push_str(&String::from_utf8(bytes).expect("surface output is UTF-8")),
            }
            if report {
                text.push_str(&sweep_summary(&spec, &cells)?);
            }
            Ok(text)
        }
        Command::ExportEfg { game, out } => {
            let text = export_efg(&build_variant(&game.config()));
            match out {
                Some(path) => {
                    write_file(&path, text.as_bytes())?;
                    Ok(String::new())
                }
                None => Ok(text),
            }
        }
        Command::Stats { game, from } => {
            let tree = match from {
                Some(path) => {
                    let text = fs::read_to_string(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                    parse_efg(&text)?
                }
                None => build_variant(&game.config()),
            };
            Ok(format!("{}\n", tree_stats(&tree)))
        }
    }
}

fn sweep_summary(spec: &SweepSpec, cells: &[kuhn_cheat::sweep::SurfaceCell]) -> Result<String> {
    let mut out = String::new();
    let plateau = zero_plateau(cells);
    match plateau.bounds {
        Some((lo1, hi1, lo2, hi2)) => out.push_str(&format!(
            "zero cells: {} spanning axis1 [{lo1}, {hi1}] axis2 [{lo2}, {hi2}]\n",
            plateau.cells
        )),
        None => out.push_str("zero cells: 0\n"),
    }
    let patches = bilinear_midpoint_report(spec, cells)?;
    if let Some(worst) = patches.iter().max_by(|a, b| a.deviation.cmp(&b.deviation)) {
        let flat = patches.iter().filter(|p| p.deviation == Rational::from_integer(0.into())).count();
        out.push_str(&format!(
            "bilinear midpoint deviation: max {} at square ({}, {}); {} of {} squares exactly bilinear at the midpoint\n",
            worst.deviation,
            worst.i,
            worst.j,
            flat,
            patches.len()
        ));
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
