//! Timed n-Queens runs behind the command-line front end.

use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::BddError;
use crate::manager::{Exec, Manager, ManagerConfig, ParallelConfig};
use crate::node::NodeRef;
use crate::oracle::queens_backtrack;
use crate::queens::queens;
use crate::store::{AllocationConfig, AllocationMode};

/// Largest board the backtracking counter checks.
pub const VERIFY_LIMIT: u32 = 10;

/// Boards built in sequence by [`run_memory_comparison`].
pub const MEMORY_SEQUENCE: [u32; 3] = [6, 7, 8];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RunMode {
    Seq,
    Par,
}

impl fmt::Display for RunMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RunMode::Seq => "seq",
            RunMode::Par => "par",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkReport {
    pub n: u32,
    pub mode: RunMode,
    pub workers: usize,
    pub memory_mode: AllocationMode,
    pub samples: usize,
    pub mean_ms: f64,
    pub min_ms: f64,
    pub max_ms: f64,
    pub speedup: Option<f64>,
    pub solution_count: u64,
    pub node_count: usize,
    pub peak_table_bytes: usize,
}

impl fmt::Display for BenchmarkReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} mode={} workers={} memory_mode={} samples={} mean_ms={:.2} min_ms={:.2} max_ms={:.2} speedup=",
            self.n, self.mode, self.workers, self.memory_mode, self.samples, self.mean_ms, self.min_ms, self.max_ms
        )?;
        match self.speedup {
            Some(s) => write!(f, "{s:.2}")?,
            None => f.write_str("-")?,
        }
        write!(
            f,
            " solution_count={} node_count={} peak_table_bytes={}",
            self.solution_count, self.node_count, self.peak_table_bytes
        )
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Bdd(#[from] BddError),
    #[error("n={n}: counted {got} solutions, expected {expected}")]
    Mismatch { n: u32, expected: u64, got: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchConfig {
    pub n: u32,
    pub modes: &'static [RunMode],
    pub workers: usize,
    pub memory: AllocationMode,
    /// Initial table budget; `None` picks [`BenchConfig::default_table_bytes`].
    pub table_bytes: Option<usize>,
    pub cache_slots: usize,
    pub spawn_depth: u32,
    pub samples: usize,
}

impl BenchConfig {
    pub const DEFAULT_SAMPLES: usize = 50;
    pub const STATIC_TABLE_BYTES: usize = 16 << 20;
    pub const DYNAMIC_TABLE_BYTES: usize = 1 << 20;

    pub fn new(n: u32) -> Self {
        BenchConfig {
            n,
            modes: &[RunMode::Seq],
            workers: ParallelConfig::default().workers,
            memory: AllocationMode::Static,
            table_bytes: None,
            cache_slots: crate::ComputeCache::DEFAULT_SLOTS,
            spawn_depth: ParallelConfig::DEFAULT_SPAWN_DEPTH,
            samples: Self::DEFAULT_SAMPLES,
        }
    }

    pub fn default_table_bytes(mode: AllocationMode) -> usize {
        match mode {
            AllocationMode::Static => Self::STATIC_TABLE_BYTES,
            AllocationMode::Dynamic => Self::DYNAMIC_TABLE_BYTES,
        }
    }

    fn manager_config(&self, memory: AllocationMode, num_vars: u32) -> ManagerConfig {
        let bytes = self.table_bytes.unwrap_or_else(|| Self::default_table_bytes(memory));
        ManagerConfig::new(AllocationConfig::new(memory, bytes), num_vars).with_cache_slots(self.cache_slots)
    }

    fn exec(&self, mode: RunMode) -> Exec {
        match mode {
            RunMode::Seq => Exec::Sequential,
            RunMode::Par => Exec::Parallel(ParallelConfig::new(self.workers).with_spawn_depth(self.spawn_depth)),
        }
    }

    fn workers(&self, mode: RunMode) -> usize {
        match mode {
            RunMode::Seq => 1,
            RunMode::Par => self.workers.max(1),
        }
    }
}

#[derive(Debug)]
pub struct BenchOutcome {
    pub reports: Vec<BenchmarkReport>,
    /// Root of the last build, with the manager that owns it.
    pub last: Option<(Manager, NodeRef)>,
}

fn millis(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn to_u64(n: u32, c: num_bigint::BigUint) -> Result<u64, BenchError> {
    u64::try_from(&c).map_err(|_| BenchError::Bdd(BddError::Config(format!("n={n}: count {c} exceeds u64"))))
}

fn check(n: u32, got: u64) -> Result<(), BenchError> {
    if n <= VERIFY_LIMIT {
        let expected = queens_backtrack(n);
        if expected != got {
            return Err(BenchError::Mismatch { n, expected, got });
        }
    }
    Ok(())
}

fn warm_up(m: &Manager, exec: &Exec) -> Result<(), BddError> {
    match exec {
        Exec::Parallel(cfg) => m.prepare_workers(cfg),
        Exec::Sequential => Ok(()),
    }
}

/// Times `samples` builds of `queens(n)` plus the model count for each
/// requested mode. Each sample gets a fresh manager whose setup is not timed.
pub fn run_queens_benchmark(cfg: &BenchConfig) -> Result<BenchOutcome, BenchError> {
    crate::queens::Board::new(cfg.n)?;
    if cfg.samples == 0 {
        return Err(BddError::Config("samples must be at least 1".into()).into());
    }
    let num_vars = cfg.n * cfg.n;
    let mut reports = Vec::new();
    let mut last = None;
    for &mode in cfg.modes {
        let exec = cfg.exec(mode);
        let mut times = Vec::with_capacity(cfg.samples);
        let mut peak = 0;
        let mut seen: Option<(u64, usize)> = None;
        for _ in 0..cfg.samples {
            let m = Manager::new(cfg.manager_config(cfg.memory, num_vars))?;
            warm_up(&m, &exec)?;
            let start = Instant::now();
            let root = m.ops_with(exec).batch(|ops| queens(ops, cfg.n))?;
            let count = m.sat_count(root, num_vars)?;
            times.push(start.elapsed());
            let count = to_u64(cfg.n, count)?;
            let nodes = m.node_count(root);
            match seen {
                None => check(cfg.n, count)?,
                Some((c, _)) if c != count => return Err(BenchError::Mismatch { n: cfg.n, expected: c, got: count }),
                Some(_) => {}
            }
            seen = Some((count, nodes));
            peak = peak.max(m.table().reserved_bytes());
            last = Some((m, root));
        }
        let (solution_count, node_count) = seen.expect("at least one sample");
        let ms: Vec<f64> = times.iter().copied().map(millis).collect();
        reports.push(BenchmarkReport {
            n: cfg.n,
            mode,
            workers: cfg.workers(mode),
            memory_mode: cfg.memory,
            samples: cfg.samples,
            mean_ms: ms.iter().sum::<f64>() / ms.len() as f64,
            min_ms: ms.iter().copied().fold(f64::INFINITY, f64::min),
            max_ms: ms.iter().copied().fold(0.0, f64::max),
            speedup: None,
            solution_count,
            node_count,
            peak_table_bytes: peak,
        });
    }
    if let [a, b] = &reports[..] {
        if a.solution_count != b.solution_count {
            return Err(BenchError::Mismatch { n: cfg.n, expected: a.solution_count, got: b.solution_count });
        }
    }
    let seq = reports.iter().find(|r| r.mode == RunMode::Seq).map(|r| r.mean_ms);
    let par = reports.iter().find(|r| r.mode == RunMode::Par).map(|r| r.mean_ms);
    if let (Some(s), Some(p)) = (seq, par) {
        for r in &mut reports {
            r.speedup = Some(s / p);
        }
    }
    Ok(BenchOutcome { reports, last })
}

/// One memory mode's pass over [`MEMORY_SEQUENCE`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MemoryRun {
    pub report: BenchmarkReport,
    /// Solution count after each board of the sequence.
    pub counts: Vec<u64>,
}

/// Builds the 6, 7, 8 boards in turn on one manager per memory mode, so later
/// boards reuse nodes left by earlier ones. Timing covers the whole sequence;
/// `cfg.n` is ignored.
pub fn run_memory_comparison(cfg: &BenchConfig) -> Result<[MemoryRun; 2], BenchError> {
    if cfg.samples == 0 {
        return Err(BddError::Config("samples must be at least 1".into()).into());
    }
    let mode = *cfg.modes.last().unwrap_or(&RunMode::Seq);
    let exec = cfg.exec(mode);
    let last_n = MEMORY_SEQUENCE[MEMORY_SEQUENCE.len() - 1];
    let num_vars = last_n * last_n;
    let run = |memory: AllocationMode| -> Result<MemoryRun, BenchError> {
        let mut times = Vec::with_capacity(cfg.samples);
        let mut peak = 0;
        let mut counts = Vec::new();
        let mut node_count = 0;
        for _ in 0..cfg.samples {
            let m = Manager::new(cfg.manager_config(memory, num_vars))?;
            warm_up(&m, &exec)?;
            let ops = m.ops_with(exec);
            let mut step = Vec::with_capacity(MEMORY_SEQUENCE.len());
            let start = Instant::now();
            let mut root = NodeRef::FALSE;
            for n in MEMORY_SEQUENCE {
                root = ops.batch(|ops| queens(ops, n))?;
                step.push(m.sat_count(root, n * n)?);
            }
            times.push(start.elapsed());
            let step = MEMORY_SEQUENCE
                .iter()
                .zip(step)
                .map(|(&n, c)| {
                    let c = to_u64(n, c)?;
                    check(n, c)?;
                    Ok(c)
                })
                .collect::<Result<Vec<u64>, BenchError>>()?;
            counts = step;
            node_count = m.node_count(root);
            peak = peak.max(m.table().reserved_bytes());
        }
        let ms: Vec<f64> = times.iter().copied().map(millis).collect();
        Ok(MemoryRun {
            report: BenchmarkReport {
                n: last_n,
                mode,
                workers: cfg.workers(mode),
                memory_mode: memory,
                samples: cfg.samples,
                mean_ms: ms.iter().sum::<f64>() / ms.len() as f64,
                min_ms: ms.iter().copied().fold(f64::INFINITY, f64::min),
                max_ms: ms.iter().copied().fold(0.0, f64::max),
                speedup: None,
                solution_count: *counts.last().expect("non-empty sequence"),
                node_count,
                peak_table_bytes: peak,
            },
            counts,
        })
    };
    Ok([run(AllocationMode::Static)?, run(AllocationMode::Dynamic)?])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(n: u32) -> BenchConfig {
        BenchConfig { samples: 2, cache_slots: 1 << 12, table_bytes: Some(8 << 20), ..BenchConfig::new(n) }
    }

    #[test]
    fn seq_report() {
        let out = run_queens_benchmark(&small(6)).unwrap();
        let [r] = &out.reports[..] else { panic!() };
        assert_eq!(r.solution_count, 4);
        assert_eq!(r.mode, RunMode::Seq);
        assert_eq!(r.workers, 1);
        assert_eq!(r.speedup, None);
        assert!(r.min_ms <= r.mean_ms && r.mean_ms <= r.max_ms);
        let (m, root) = out.last.unwrap();
        assert_eq!(m.node_count(root), r.node_count);
    }

    #[test]
    fn both_modes_report_speedup() {
        let cfg = BenchConfig { modes: &[RunMode::Seq, RunMode::Par], workers: 2, ..small(5) };
        let out = run_queens_benchmark(&cfg).unwrap();
        assert_eq!(out.reports.len(), 2);
        assert!(out.reports.iter().all(|r| r.solution_count == 10 && r.speedup.is_some()));
        assert_eq!(out.reports[0].node_count, out.reports[1].node_count);
    }

    #[test]
    fn undersized_static_table_is_reported() {
        let cfg = BenchConfig { table_bytes: Some(AllocationConfig::MIN_BYTES * 8), ..small(6) };
        let err = run_queens_benchmark(&cfg).unwrap_err();
        assert!(matches!(err, BenchError::Bdd(BddError::TableFull { .. })));
    }

    #[test]
    fn zero_board_is_a_config_error() {
        assert!(matches!(run_queens_benchmark(&small(0)), Err(BenchError::Bdd(BddError::Config(_)))));
    }

    #[test]
    fn text_record_has_two_decimals() {
        let r = BenchmarkReport {
            n: 8,
            mode: RunMode::Par,
            workers: 4,
            memory_mode: AllocationMode::Static,
            samples: 50,
            mean_ms: 423.333,
            min_ms: 400.0,
            max_ms: 450.126,
            speedup: Some(18.7312),
            solution_count: 92,
            node_count: 10,
            peak_table_bytes: 1024,
        };
        assert_eq!(
            r.to_string(),
            "n=8 mode=par workers=4 memory_mode=static samples=50 mean_ms=423.33 min_ms=400.00 \
             max_ms=450.13 speedup=18.73 solution_count=92 node_count=10 peak_table_bytes=1024"
        );
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["memory_mode"], "static");
        assert_eq!(v["mode"], "par");
    }
}
