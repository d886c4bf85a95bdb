//! Equilibrium value over a grid of cheat probabilities `(p, q)` or
//! detection probabilities `(r1, r2)`, with CSV/JSON output and a few
//! post-processing reports.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kuhn::{build_detection, build_variant, CheatConfig};
use crate::rational::{format_decimal, parse_rational, Rational};
use crate::solver::{solve_lp, Method};

pub const DEFAULT_RESOLUTION: usize = 21;

/// Significant digits of the decimal column.
pub const DECIMAL_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SweepMode {
    /// Vary `(p, q)` with no detection.
    Cheat,
    /// Vary `(r1, r2)` with the cheat probabilities fixed.
    Detect { p: Rational, q: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepSpec {
    pub mode: SweepMode,
    /// Points per axis, endpoints included.
    pub n: usize,
}

impl SweepSpec {
    pub fn new(mode: SweepMode, n: usize) -> Result<SweepSpec> {
        if n < 2 {
            return Err(Error::OutOfRange { name: "n".into(), value: n.to_string(), low: "2".into(), high: "inf".into() });
        }
        if let SweepMode::Detect { p, q } = &mode {
            CheatConfig::new(p.clone(), q.clone(), Rational::zero(), Rational::zero())?;
        }
        Ok(SweepSpec { mode, n })
    }

    /// `i / (n - 1)` for `i = 0 .. n`.
    pub fn axis(&self) -> Vec<Rational> {
        let d = Rational::from_integer((self.n - 1).into());
        (0..self.n).map(|i| Rational::from_integer(i.into()) / &d).collect()
    }

    /// The game configuration at one grid point.
    pub fn config(&self, axis1: &Rational, axis2: &Rational) -> Result<CheatConfig> {
        match &self.mode {
            SweepMode::Cheat => CheatConfig::cheating(axis1.clone(), axis2.clone()),
            SweepMode::Detect { p, q } => CheatConfig::new(p.clone(), q.clone(), axis1.clone(), axis2.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceCell {
    pub axis1: Rational,
    pub axis2: Rational,
    /// Equilibrium value to player 1.
    pub value: Rational,
    pub method: Method,
}

/// Exact equilibrium value at one point of a sweep.
pub fn solve_cell(mode: &SweepMode, axis1: &Rational, axis2: &Rational) -> Result<Rational> {
    let tree = match mode {
        SweepMode::Cheat => build_variant(&CheatConfig::cheating(axis1.clone(), axis2.clone())?),
        SweepMode::Detect { p, q } => {
            build_detection(&CheatConfig::new(p.clone(), q.clone(), axis1.clone(), axis2.clone())?)
        }
    };
    Ok(solve_lp(&tree)?.value)
}

/// Solves every grid cell, in parallel, returning cells row-major with
/// `axis1` as the outer index.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SurfaceCell>> {
    let axis = spec.axis();
    let points: Vec<(Rational, Rational)> =
        axis.iter().flat_map(|a| axis.iter().map(move |b| (a.clone(), b.clone()))).collect();
    run_points(&spec.mode, &points)
}

/// Solves arbitrary points, keeping their order.
pub fn run_points(mode: &SweepMode, points: &[(Rational, Rational)]) -> Result<Vec<SurfaceCell>> {
    points
        .par_iter()
        .map(|(a, b)| {
            let value = solve_cell(mode, a, b).map_err(|e| Error::Cell {
                axis1: a.to_string(),
                axis2: b.to_string(),
                source: Box::new(e),
            })?;
            Ok(SurfaceCell { axis1: a.clone(), axis2: b.clone(), value, method: Method::Lp })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Parse(format!("unknown format {other:?}"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct Record {
    axis1: String,
    axis2: String,
    value_exact: String,
    value_decimal: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonRecord {
    axis1: String,
    axis2: String,
    value_exact: String,
    value_decimal: String,
    method: String,
}

/// Renders cells, sorted by `(axis1, axis2)`.
pub fn emit_surface(cells: &[SurfaceCell], format: Format) -> Result<Vec<u8>> {
    let mut sorted: Vec<&SurfaceCell> = cells.iter().collect();
    sorted.sort_by(|x, y| (&x.axis1, &x.axis2).cmp(&(&y.axis1, &y.axis2)));
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
            for c in sorted {
                w.serialize(Record {
                    axis1: c.axis1.to_string(),
                    axis2: c.axis2.to_string(),
                    value_exact: c.value.to_string(),
                    value_decimal: format_decimal(&c.value, DECIMAL_DIGITS),
                })
                .map_err(|e| Error::Internal(e.to_string()))?;
            }
            w.into_inner().map_err(|e| Error::Internal(e.to_string()))
        }
        Format::Json => {
            let records: Vec<JsonRecord> = sorted
                .into_iter()
                .map(|c| JsonRecord {
                    axis1: c.axis1.to_string(),
                    axis2: c.axis2.to_string(),
                    value_exact: c.value.to_string(),
                    value_decimal: format_decimal(&c.value, DECIMAL_DIGITS),
                    method: c.method.to_string(),
                })
                .collect();
            let mut out = serde_json::to_vec_pretty(&records).map_err(|e| Error::Internal(e.to_string()))?;
            out.push(b'\n');
            Ok(out)
        }
    }
}

/// Inverse of [`emit_surface`]. CSV carries no method column; sweeps
/// always use the LP solver, so that is assumed.
pub fn parse_surface(bytes: &[u8], format: Format) -> Result<Vec<SurfaceCell>> {
    let parse = |s: &str| parse_rational(s);
    match format {
        Format::Csv => {
            let mut r = csv::Reader::from_reader(bytes);
            r.deserialize::<Record>()
                .map(|rec| {
                    let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
                    Ok(SurfaceCell {
                        axis1: parse(&rec.axis1)?,
                        axis2: parse(&rec.axis2)?,
                        value: parse(&rec.value_exact)?,
                        method: Method::Lp,
                    })
                })
                .collect()
        }
        Format::Json => {
            let records: Vec<JsonRecord> = serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))?;
            records
                .into_iter()
                .map(|rec| {
                    Ok(SurfaceCell {
                        axis1: parse(&rec.axis1)?,
                        axis2: parse(&rec.axis2)?,
                        value: parse(&rec.value_exact)?,
                        method: rec.method.parse()?,
                    })
                })
                .collect()
        }
    }
}

/// Row-major `n x n` view of a full sweep.
#[derive(Debug, Clone)]
pub struct Grid<'a> {
    pub n: usize,
    cells: &'a [SurfaceCell],
}

impl<'a> Grid<'a> {
    pub fn new(cells: &'a [SurfaceCell], n: usize) -> Result<Grid<'a>> {
        if cells.len() != n * n {
            return Err(Error::Internal(format!("{} cells do not form a {n} x {n} grid", cells.len())));
        }
        Ok(Grid { n, cells })
    }

    pub fn cell(&self, i: usize, j: usize) -> &'a SurfaceCell {
        &self.cells[i * self.n + j]
    }

    pub fn value(&self, i: usize, j: usize) -> &'a Rational {
        &self.cell(i, j).value
    }
}

/// How far the surface is from bilinear on one grid square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatchDeviation {
    pub i: usize,
    pub j: usize,
    /// `|V(midpoint) - mean of the four corners|`.
    pub deviation: Rational,
}

/// For every grid square, solves the midpoint and compares it with the
/// bilinear interpolant of the corners (which at the midpoint is the corner
/// mean). No threshold is applied.
pub fn bilinear_midpoint_report(spec: &SweepSpec, cells: &[SurfaceCell]) -> Result<Vec<PatchDeviation>> {
    let grid = Grid::new(cells, spec.n)?;
    let axis = spec.axis();
    let half = Rational::new(1.into(), 2.into());
    let squares: Vec<(usize, usize)> = (0..spec.n - 1).flat_map(|i| (0..spec.n - 1).map(move |j| (i, j))).collect();
    let mids: Vec<(Rational, Rational)> = squares
        .iter()
        .map(|&(i, j)| ((&axis[i] + &axis[i + 1]) * &half, (&axis[j] + &axis[j + 1]) * &half))
        .collect();
    let solved = run_points(&spec.mode, &mids)?;
    let quarter = Rational::new(1.into(), 4.into());
    Ok(squares
        .into_iter()
        .zip(solved)
        .map(|((i, j), mid)| {
            let mean = (grid.value(i, j) + grid.value(i + 1, j) + grid.value(i, j + 1) + grid.value(i + 1, j + 1)) * &quarter;
            let d = mid.value - mean;
            PatchDeviation { i, j, deviation: if d < Rational::zero() { -d } else { d } }
        })
        .collect())
}

/// Extent of the zero-valued cells of a sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plateau {
    pub cells: usize,
    /// `(min axis1, max axis1, min axis2, max axis2)` over the zero cells.
    pub bounds: Option<(Rational, Rational, Rational, Rational)>,
}

pub fn zero_plateau(cells: &[SurfaceCell]) -> Plateau {
    let zeros: Vec<&SurfaceCell> = cells.iter().filter(|c| c.value.is_zero()).collect();
    let bounds = zeros.first().map(|first| {
        zeros.iter().fold(
            (first.axis1.clone(), first.axis1.clone(), first.axis2.clone(), first.axis2.clone()),
            |(lo1, hi1, lo2, hi2), c| {
                (lo1.min(c.axis1.clone()), hi1.max(c.axis1.clone()), lo2.min(c.axis2.clone()), hi2.max(c.axis2.clone()))
            },
        )
    });
    Plateau { cells: zeros.len(), bounds }
}

/// Gains from perfect detection at a fixed `(p, q)`:
/// `G1 = V(1, 0) - V(0, 0)` and `G2 = V(0, 0) - V(0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectionGains {
    pub v00: Rational,
    pub v10: Rational,
    pub v01: Rational,
}

impl DetectionGains {
    pub fn measure(p: &Rational, q: &Rational) -> Result<DetectionGains> {
        let mode = SweepMode::Detect { p: p.clone(), q: q.clone() };
        let (zero, one) = (Rational::zero(), Rational::one());
        Ok(DetectionGains {
            v00: solve_cell(&mode, &zero, &zero)?,
            v10: solve_cell(&mode, &one, &zero)?,
            v01: solve_cell(&mode, &zero, &one)?,
        })
    }

    pub fn g1(&self) -> Rational {
        &self.v10 - &self.v00
    }

    pub fn g2(&self) -> Rational {
        &self.v00 - &self.v01
    }
}

/// A grid step along which the value moved against the detector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotonicityViolation {
    pub from: (Rational, Rational),
    pub to: (Rational, Rational),
    pub values: (Rational, Rational),
}

/// Checks that a detection sweep is nondecreasing in `r1` and
/// nonincreasing in `r2` along every grid line.
pub fn detection_monotonicity(cells: &[SurfaceCell], n: usize) -> Result<Vec<MonotonicityViolation>> {
    let grid = Grid::new(cells, n)?;
    let mut out = Vec::new();
    let mut push = |a: &SurfaceCell, b: &SurfaceCell| {
        out.push(MonotonicityViolation {
            from: (a.axis1.clone(), a.axis2.clone()),
            to: (b.axis1.clone(), b.axis2.clone()),
            values: (a.value.clone(), b.value.clone()),
        })
    };
    for i in 0..n {
        for j in 0..n {
            if i + 1 < n && grid.value(i + 1, j) < grid.value(i, j) {
                push(grid.cell(i, j), grid.cell(i + 1, j));
            }
            if j + 1 < n && grid.value(i, j + 1) > grid.value(i, j) {
                push(grid.cell(i, j), grid.cell(i, j + 1));
            }
        }
    }
    Ok(out)
}
