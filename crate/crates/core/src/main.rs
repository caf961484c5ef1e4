use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use parbdd::bench::{run_memory_comparison, run_queens_benchmark, BenchConfig, BenchError, BenchmarkReport, RunMode};
use parbdd::{AllocationMode, BddError, ComputeCache, ParallelConfig};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Seq,
    Par,
    Both,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MemoryArg {
    Static,
    Dynamic,
}

/// Times n-Queens BDD construction and model counting.
#[derive(Debug, Parser)]
#[command(name = "parbdd", version)]
struct Args {
    /// Board side length.
    #[arg(long, value_name = "N", required_unless_present = "compare_memory")]
    queens: Option<u32>,

    #[arg(long, value_enum, default_value = "seq")]
    mode: ModeArg,

    /// Worker threads for parallel ITE [default: logical CPUs].
    #[arg(long, value_name = "K")]
    workers: Option<usize>,

    #[arg(long, value_enum, default_value = "static")]
    memory: MemoryArg,

    /// Initial unique-table budget in bytes.
    #[arg(long, value_name = "M")]
    table_bytes: Option<usize>,

    /// Compute-cache entries; 0 disables the cache.
    #[arg(long, value_name = "K", default_value_t = ComputeCache::DEFAULT_SLOTS)]
    cache_slots: usize,

    /// Recursion levels that fork onto the pool.
    #[arg(long, value_name = "D", default_value_t = ParallelConfig::DEFAULT_SPAWN_DEPTH)]
    spawn_depth: u32,

    #[arg(long, value_name = "K", default_value_t = BenchConfig::DEFAULT_SAMPLES)]
    samples: usize,

    /// Write the reports as a JSON array.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,

    /// Write the final BDD as Graphviz text.
    #[arg(long, value_name = "PATH")]
    dot: Option<PathBuf>,

    /// Build the 6, 7, 8 boards in one table per memory mode and compare.
    #[arg(long)]
    compare_memory: bool,
}

const EXIT_USAGE: u8 = 1;
const EXIT_RESOURCES: u8 = 2;
const EXIT_MISMATCH: u8 = 3;

fn exit_code(err: &BenchError) -> u8 {
    match err {
        BenchError::Bdd(BddError::TableFull { .. } | BddError::AllocationFailure { .. }) => EXIT_RESOURCES,
        BenchError::Bdd(_) => EXIT_USAGE,
        BenchError::Mismatch { .. } => EXIT_MISMATCH,
    }
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), ExitCode> {
    std::fs::write(path, text).map_err(|e| {
        eprintln!("error: cannot write {}: {e}", path.display());
        ExitCode::from(EXIT_USAGE)
    })
}

fn run(args: Args) -> Result<(), ExitCode> {
    let modes: &'static [RunMode] = match args.mode {
        ModeArg::Seq => &[RunMode::Seq],
        ModeArg::Par => &[RunMode::Par],
        ModeArg::Both => &[RunMode::Seq, RunMode::Par],
    };
    let cfg = BenchConfig {
        modes,
        workers: args.workers.unwrap_or_else(|| ParallelConfig::default().workers),
        memory: match args.memory {
            MemoryArg::Static => AllocationMode::Static,
            MemoryArg::Dynamic => AllocationMode::Dynamic,
        },
        table_bytes: args.table_bytes,
        cache_slots: args.cache_slots,
        spawn_depth: args.spawn_depth,
        samples: args.samples,
        ..BenchConfig::new(args.queens.unwrap_or(0))
    };
    let fail = |e: BenchError| {
        eprintln!("error: {e}");
        ExitCode::from(exit_code(&e))
    };

    let reports: Vec<BenchmarkReport> = if args.compare_memory {
        let runs = run_memory_comparison(&cfg).map_err(fail)?;
        for r in &runs {
            println!("{} sequence_counts={:?}", r.report, r.counts);
        }
        let [s, d] = &runs;
        let overhead = (d.report.mean_ms / s.report.mean_ms - 1.0) * 100.0;
        println!("dynamic_overhead_pct={overhead:.2}");
        runs.into_iter().map(|r| r.report).collect()
    } else {
        let out = run_queens_benchmark(&cfg).map_err(fail)?;
        for r in &out.reports {
            println!("{r}");
        }
        if let (Some(path), Some((m, root))) = (&args.dot, &out.last) {
            write_file(path, &m.to_dot(*root))?;
        }
        out.reports
    };

    if let Some(path) = &args.json {
        let text = serde_json::to_string_pretty(&reports).expect("reports serialize");
        write_file(path, &text)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if args.queens == Some(0) {
        eprintln!("error: --queens must be at least 1");
        return ExitCode::from(EXIT_USAGE);
    }
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}
