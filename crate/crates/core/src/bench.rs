//! Benchmark harness for the fast producibility decider.

use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gen::{generate_line, generate_square};
use crate::producible::{is_producible_naive, run_fast, FastOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Square,
    Line,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Square => "square",
            Family::Line => "line",
        }
    }

    /// Instance with roughly `n` tiles: a `round(sqrt n)` square, or a row.
    pub fn instance(self, n: u64, tau: u32) -> (crate::tile::TileSystem, crate::assembly::Assembly) {
        match self {
            Family::Square => generate_square(((n as f64).sqrt().round() as u32).max(1), tau),
            Family::Line => generate_line(n.max(1) as u32, tau),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "square" => Ok(Family::Square),
            "line" => Ok(Family::Line),
            _ => Err(Error::Parse {
                line: 0,
                message: format!("unknown family `{s}`"),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchRecord {
    pub family: String,
    /// Tile count.
    pub n: u64,
    /// Median wall time of the fast decider.
    pub ns: u64,
    pub pops: u64,
    pub folds: u64,
    /// Whether the naive decider agreed, when it was run.
    #[serde(skip)]
    pub naive_agrees: Option<bool>,
}

#[derive(Debug, Clone, Copy)]
pub struct BenchConfig {
    pub tau: u32,
    pub repetitions: usize,
    /// Run the naive decider too on instances with at most this many tiles.
    pub naive_limit: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            tau: 1,
            repetitions: 3,
            naive_limit: 10_000,
        }
    }
}

/// `min, min*factor, ...` up to `max`.
pub fn geometric_sizes(min: u64, max: u64, factor: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut n = min.max(1);
    while n <= max {
        out.push(n);
        if factor <= 1 {
            break;
        }
        n = n.saturating_mul(factor);
    }
    out
}

pub fn bench_one(family: Family, n: u64, cfg: &BenchConfig) -> Result<BenchRecord> {
    let (sys, a) = family.instance(n, cfg.tau);
    let opts = FastOptions {
        self_check: false,
        ..FastOptions::default()
    };
    let mut times = Vec::with_capacity(cfg.repetitions.max(1));
    let mut last = None;
    for _ in 0..cfg.repetitions.max(1) {
        let start = Instant::now();
        let run = run_fast(&a, &sys.tileset, cfg.tau, opts)?;
        times.push(start.elapsed().as_nanos() as u64);
        last = Some(run);
    }
    times.sort_unstable();
    let run = last.expect("at least one repetition");
    let naive_agrees = if a.len() as u64 <= cfg.naive_limit {
        Some(is_producible_naive(&a, &sys.tileset, cfg.tau)?.0 == run.producible)
    } else {
        None
    };
    Ok(BenchRecord {
        family: family.name().to_string(),
        n: a.len() as u64,
        ns: times[times.len() / 2],
        pops: run.counters.pops,
        folds: run.counters.folds,
        naive_agrees,
    })
}

pub fn bench(family: Family, sizes: &[u64], cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    sizes.iter().map(|&n| bench_one(family, n, cfg)).collect()
}

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(geometric_sizes(10, 1000, 10), vec![10, 100, 1000]);
        assert_eq!(geometric_sizes(3, 20, 2), vec![3, 6, 12]);
        assert_eq!(geometric_sizes(5, 4, 2), Vec::<u64>::new());
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [10.0, 100.0, 1000.0]
            .iter()
            .map(|&x: &f64| (x, 3.0 * x.powf(1.5)))
            .collect();
        assert!((loglog_slope(&pts) - 1.5).abs() < 1e-9);
    }

    #[test]
    fn csv_columns() {
        let cfg = BenchConfig {
            repetitions: 1,
            ..BenchConfig::default()
        };
        let recs = bench(Family::Square, &[4, 16], &cfg).unwrap();
        assert_eq!(recs.iter().map(|r| r.n).collect::<Vec<_>>(), vec![4, 16]);
        assert!(recs.iter().all(|r| r.naive_agrees == Some(true)));
        assert!(recs[0].pops <= recs[1].pops && recs[0].folds <= recs[1].folds);
        let mut buf = Vec::new();
        write_csv(&recs, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("family,n,ns,pops,folds\nsquare,4,"), "{text}");
    }
}
