//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each, and
//! fails at the end if any criterion failed.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::sync::{mpsc, Arc};
use std::thread;
use std::time::{Duration, Instant};

use num_bigint::BigUint;

use parbdd::bench::{run_memory_comparison, BenchConfig, RunMode};
use parbdd::oracle::{bdd_of, queens_backtrack, truth_table, FormulaGen};
use parbdd::queens::queens;
use parbdd::{
    AllocationConfig, AllocationMode, Assignment, BddError, ComputeCache, Exec, Manager, ManagerConfig, Node, NodeRef,
    ParallelConfig, Var, Vertex,
};

/// Upper bound on mean parallel time relative to mean sequential time.
const SLOWDOWN_TOLERANCE: f64 = 1.10;
const SPEEDUP_SAMPLES: usize = 20;
const SPEEDUP_MIN_WORKERS: usize = 4;
const CORRECTNESS_BUDGET: Duration = Duration::from_secs(10);
const QUEENS8_BUDGET: Duration = Duration::from_secs(60);
const STRESS_TIMEOUT: Duration = Duration::from_secs(30);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn manager(alloc: AllocationConfig, vars: u32) -> Manager {
    Manager::new(ManagerConfig::new(alloc, vars).with_cache_slots(1 << 16)).expect("manager")
}

fn random_bdds(m: &Manager, seed: u64, vars: u32, count: usize) -> Vec<NodeRef> {
    let ops = m.ops();
    FormulaGen::new(seed, vars).take(count).map(|e| bdd_of(&ops, &e).expect("build")).collect()
}

fn correctness() -> Outcome {
    const VARS: u32 = 4;
    let start = Instant::now();
    let m = manager(AllocationConfig::doubling(1 << 16), VARS);
    let ops = m.ops();
    let mut mismatches = 0;
    for e in FormulaGen::new(0xC0FFEE, VARS).take(1000) {
        let r = bdd_of(&ops, &e).map_err(|e| e.to_string())?;
        let table = truth_table(&e, VARS).map_err(|e| e.to_string())?;
        mismatches += table
            .iter()
            .enumerate()
            .filter(|&(i, &want)| m.evaluate(r, &Assignment::from_index(i as u64, VARS)) != want)
            .count();
    }
    let elapsed = start.elapsed();
    ensure(mismatches == 0, || format!("{mismatches} mismatching assignments"))?;
    ensure(elapsed < CORRECTNESS_BUDGET, || format!("took {elapsed:.2?}"))?;
    Ok(format!("1000 formulas, 0 mismatches in {elapsed:.2?}"))
}

fn queens_counts() -> Outcome {
    let mut counts = Vec::new();
    let mut eight = Duration::ZERO;
    for n in 1..=8u32 {
        let m = manager(AllocationConfig::doubling(1 << 20), n * n);
        let start = Instant::now();
        let root = queens(&m.ops(), n).map_err(|e| e.to_string())?;
        let count = m.sat_count(root, n * n).map_err(|e| e.to_string())?;
        if n == 8 {
            eight = start.elapsed();
        }
        let want = queens_backtrack(n);
        ensure(count == BigUint::from(want), || format!("n={n}: {count} != {want}"))?;
        counts.push(want);
    }
    ensure(counts == [1, 0, 0, 2, 10, 4, 40, 92], || format!("oracle drifted: {counts:?}"))?;
    ensure(eight < QUEENS8_BUDGET, || format!("n=8 took {eight:.2?}"))?;
    Ok(format!("counts {counts:?}, n=8 sequential in {eight:.2?}"))
}

fn parallel_determinism() -> Outcome {
    let workers = [1, 2, 4, 8];
    for n in 4..=7u32 {
        let m = manager(AllocationConfig::fixed(16 << 20), n * n);
        let seq = queens(&m.ops(), n).map_err(|e| e.to_string())?;
        for w in workers {
            m.clear_cache();
            let par = queens(&m.par_ops(ParallelConfig::new(w)), n).map_err(|e| e.to_string())?;
            ensure(par == seq, || format!("n={n} workers={w}: {par:?} != {seq:?}"))?;
        }
    }
    let m = manager(AllocationConfig::doubling(1 << 20), 10);
    let pool = random_bdds(&m, 7, 10, 300);
    for (i, t) in pool.chunks_exact(3).enumerate() {
        m.clear_cache();
        let seq = m.ite(t[0], t[1], t[2]).map_err(|e| e.to_string())?;
        for w in workers {
            m.clear_cache();
            let par = m.p_ite(t[0], t[1], t[2], &ParallelConfig::new(w)).map_err(|e| e.to_string())?;
            ensure(par == seq, || format!("triple {i} workers={w}: {par:?} != {seq:?}"))?;
        }
    }
    Ok("queens 4..7 and 100 random triples identical at 1, 2, 4, 8 workers".into())
}

fn speedup() -> Outcome {
    let workers = ParallelConfig::default().workers.max(SPEEDUP_MIN_WORKERS);
    let par = ParallelConfig::new(workers);
    let config = ManagerConfig::new(AllocationConfig::fixed(BenchConfig::STATIC_TABLE_BYTES), 64)
        .with_cache_slots(ComputeCache::DEFAULT_SLOTS);
    let time = |exec: Exec| -> Result<f64, String> {
        let m = Manager::new(config).map_err(|e| e.to_string())?;
        m.prepare_workers(&par).map_err(|e| e.to_string())?;
        let start = Instant::now();
        let root = m.ops_with(exec).batch(|ops| queens(ops, 8)).map_err(|e| e.to_string())?;
        let count = m.sat_count(root, 64).map_err(|e| e.to_string())?;
        let ms = start.elapsed().as_secs_f64() * 1e3;
        ensure(count == BigUint::from(92u32), || format!("count {count}"))?;
        Ok(ms)
    };
    let (mut seq, mut parallel) = (0.0, 0.0);
    // alternate the order so drift hits both modes equally
    for i in 0..SPEEDUP_SAMPLES {
        if i % 2 == 0 {
            seq += time(Exec::Sequential)?;
            parallel += time(Exec::Parallel(par))?;
        } else {
            parallel += time(Exec::Parallel(par))?;
            seq += time(Exec::Sequential)?;
        }
    }
    let (seq, parallel) = (seq / SPEEDUP_SAMPLES as f64, parallel / SPEEDUP_SAMPLES as f64);
    let cores = thread::available_parallelism().map_or(1, |n| n.get());
    let detail = format!(
        "queens(8) seq {seq:.2} ms, par {parallel:.2} ms with {workers} workers on {cores} cores, S = {:.2}",
        seq / parallel
    );
    ensure(parallel <= SLOWDOWN_TOLERANCE * seq, || format!("{detail}; limit {SLOWDOWN_TOLERANCE} x seq"))?;
    Ok(detail)
}

fn memory_modes() -> Outcome {
    // nodes queens(6) leaves in a fresh table
    let probe = manager(AllocationConfig::doubling(1 << 20), 36);
    queens(&probe.ops(), 6).map_err(|e| e.to_string())?;
    let needed = probe.table().node_total();
    let small = AllocationConfig::for_nodes(AllocationMode::Static, needed / 2);

    let m = manager(small, 36);
    match queens(&m.ops(), 6) {
        Err(BddError::TableFull { .. }) => {}
        other => return Err(format!("static table of {} nodes gave {other:?}", needed / 2)),
    }
    let bytes = small.initial_bytes.to_string();
    let out = Command::new(env!("CARGO_BIN_EXE_parbdd"))
        .args(["--queens", "6", "--memory", "static", "--table-bytes", &bytes, "--samples", "1"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(2), || format!("cli exit {:?}", out.status.code()))?;

    let m = manager(AllocationConfig::new(AllocationMode::Dynamic, small.initial_bytes), 36);
    let ops = m.ops();
    let early: Vec<(NodeRef, Vertex)> = (0..36)
        .map(|v| {
            let r = ops.var(v)?;
            Ok((r, m.resolve(r)?))
        })
        .collect::<Result<_, BddError>>()
        .map_err(|e| e.to_string())?;
    ensure(m.table().resizes() == 0, || "literals alone triggered a resize".into())?;
    let root = queens(&ops, 6).map_err(|e| e.to_string())?;
    let resizes = m.table().resizes();
    ensure(resizes > 0, || "dynamic table never doubled".into())?;
    for (r, v) in &early {
        ensure(m.resolve(*r).as_ref() == Ok(v), || format!("{r:?} changed after resize"))?;
    }
    ensure(m.sat_count(root, 36) == Ok(4u32.into()), || "dynamic count".into())?;

    let cfg = BenchConfig { samples: 1, modes: &[RunMode::Seq], ..BenchConfig::new(8) };
    let [s, d] = run_memory_comparison(&cfg).map_err(|e| e.to_string())?;
    ensure(s.counts == [4, 40, 92] && d.counts == s.counts, || format!("{:?} vs {:?}", s.counts, d.counts))?;
    Ok(format!(
        "static {} nodes: TableFull, exit 2; dynamic: {resizes} doublings, 36 early refs intact; \
         6-7-8 counts {:?} in both modes (static {:.2} ms, dynamic {:.2} ms)",
        needed / 2,
        s.counts,
        s.report.mean_ms,
        d.report.mean_ms
    ))
}

fn canonicity() -> Outcome {
    const VARS: u32 = 6;
    let m = manager(AllocationConfig::doubling(1 << 20), VARS);
    let ops = m.ops();
    let fs = random_bdds(&m, 0xCA70, VARS, 200);
    let gs = random_bdds(&m, 0xCA71, VARS, 200);
    let e = |r: parbdd::Result<NodeRef>| r.map_err(|e| e.to_string());
    for (i, (&f, &g)) in fs.iter().zip(&gs).enumerate() {
        let len = m.table().len();
        ensure(ops.not(ops.not(f)) == f, || format!("#{i}: double complement"))?;
        ensure(m.table().len() == len, || format!("#{i}: complement inserted nodes"))?;
        let and = e(ops.and(f, g))?;
        ensure(ops.not(and) == e(ops.or(ops.not(f), ops.not(g)))?, || format!("#{i}: not-and"))?;
        let or = e(ops.or(f, g))?;
        ensure(ops.not(or) == e(ops.and(ops.not(f), ops.not(g)))?, || format!("#{i}: not-or"))?;
        ensure(e(ops.xor(f, f))? == NodeRef::FALSE, || format!("#{i}: xor"))?;
        let x = Var(i as u32 % VARS);
        let lit = e(ops.var(x))?;
        let hi = e(ops.and(lit, e(m.cofactor(f, x, true))?))?;
        let lo = e(ops.and(ops.not(lit), e(m.cofactor(f, x, false))?))?;
        ensure(e(ops.or(hi, lo))? == f, || format!("#{i}: Shannon on {x}"))?;
    }
    Ok("200 random diagrams: double complement, De Morgan both ways, xor, Shannon".into())
}

fn counting_identity() -> Outcome {
    const VARS: u32 = 12;
    let m = manager(AllocationConfig::doubling(1 << 20), VARS);
    for (i, f) in random_bdds(&m, 0x5A7, VARS, 100).into_iter().enumerate() {
        for n in [VARS, 64, 200] {
            let c = m.sat_count(f, n).map_err(|e| e.to_string())?;
            let nc = m.sat_count(f.complement(), n).map_err(|e| e.to_string())?;
            ensure(c + nc == BigUint::from(1u32) << n as usize, || format!("#{i} n={n}"))?;
        }
    }
    Ok("100 random diagrams at n = 12, 64, 200".into())
}

fn concurrency_stress() -> Outcome {
    const THREADS: usize = 8;
    const CALLS: usize = 10_000;
    const POOL: u32 = 1000;
    let m = Arc::new(manager(AllocationConfig::fixed(1 << 20), POOL));
    let pool: Arc<Vec<Node>> = Arc::new(
        (0..POOL)
            .map(|i| {
                let then_edge = if i % 2 == 0 { NodeRef::TRUE } else { NodeRef::FALSE.complement() };
                Node::new(Var(i), then_edge, NodeRef::FALSE)
            })
            .collect(),
    );
    let (tx, rx) = mpsc::channel();
    let runner = {
        let m = Arc::clone(&m);
        thread::spawn(move || {
            let handles: Vec<_> = (0..THREADS)
                .map(|t| {
                    let m = Arc::clone(&m);
                    let pool = Arc::clone(&pool);
                    thread::spawn(move || {
                        let mut seen = vec![None; pool.len()];
                        for c in 0..CALLS {
                            let k = (c * 7919 + t * 104_729) % pool.len();
                            let r = m.table().lookup_or_create(pool[k]).expect("insert");
                            if let Some(prev) = seen[k] {
                                assert_eq!(prev, r);
                            }
                            seen[k] = Some(r);
                        }
                        seen
                    })
                })
                .collect();
            let all: Vec<_> = handles.into_iter().map(|h| h.join()).collect();
            let _ = tx.send(all);
        })
    };
    let results = rx.recv_timeout(STRESS_TIMEOUT).map_err(|_| format!("no completion within {STRESS_TIMEOUT:?}"))?;
    runner.join().map_err(|_| "runner panicked".to_string())?;
    let mut canon: Vec<Option<NodeRef>> = vec![None; POOL as usize];
    for seen in results {
        let seen = seen.map_err(|_| "worker panicked".to_string())?;
        for (k, r) in seen.into_iter().enumerate() {
            let Some(r) = r else { continue };
            match canon[k] {
                Some(c) if c != r => return Err(format!("triple {k} got refs {c:?} and {r:?}")),
                _ => canon[k] = Some(r),
            }
        }
    }
    let entries = m.table().node_total();
    ensure(entries == POOL as usize, || format!("{entries} entries"))?;
    let distinct: HashSet<_> = m.table().nodes().map(|(_, n)| (n.var, n.then_edge, n.else_edge)).collect();
    ensure(distinct.len() == entries, || "duplicate entries".into())?;
    Ok(format!("{THREADS} threads x {CALLS} calls: {entries} entries, no duplicates"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 oracle equivalence", correctness),
        ("2 n-queens counts", queens_counts),
        ("3 parallel determinism", parallel_determinism),
        ("4 no parallel slowdown", speedup),
        ("5 memory modes", memory_modes),
        ("6 canonicity", canonicity),
        ("7 counting identity", counting_identity),
        ("8 concurrency stress", concurrency_stress),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("criterion {name}: PASS ({detail})"),
            Err(detail) => {
                println!("criterion {name}: FAIL ({detail})");
                failed.push(name);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
