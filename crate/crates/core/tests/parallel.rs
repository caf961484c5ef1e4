use std::sync::Arc;
use std::thread;

use parbdd::oracle::{bdd_of, truth_table, FormulaGen};
use parbdd::queens::queens;
use parbdd::{
    AllocationConfig, AllocationMode, Assignment, Exec, Manager, ManagerConfig, Node, NodeRef, ParallelConfig, Var,
};

fn manager(alloc: AllocationConfig, vars: u32) -> Manager {
    Manager::new(ManagerConfig::new(alloc, vars).with_cache_slots(1 << 14)).unwrap()
}

#[test]
fn p_ite_queens_matches_sequential_without_new_nodes() {
    let m = manager(AllocationConfig::fixed(8 << 20), 36);
    let par = queens(&m.par_ops(ParallelConfig::new(8)), 6).unwrap();
    m.clear_cache();
    let len = m.table().len();
    let seq = queens(&m.ops(), 6).unwrap();
    assert_eq!(par, seq);
    assert_eq!(m.table().len(), len);
    assert_eq!(m.sat_count(par, 36).unwrap(), 4u32.into());
}

#[test]
fn spawn_depth_and_worker_count_do_not_change_results() {
    let m = manager(AllocationConfig::fixed(8 << 20), 25);
    let want = queens(&m.ops(), 5).unwrap();
    for workers in [1, 2, 3, 8] {
        for depth in [0, 1, 4, 64] {
            m.clear_cache();
            let cfg = ParallelConfig::new(workers).with_spawn_depth(depth);
            assert_eq!(queens(&m.par_ops(cfg), 5).unwrap(), want, "workers={workers} depth={depth}");
        }
    }
}

#[test]
fn threads_building_in_one_table_agree_with_a_sequential_rebuild() {
    const VARS: u32 = 8;
    let m = Arc::new(manager(AllocationConfig::doubling(1 << 10), VARS));
    let handles: Vec<_> = (0..8u64)
        .map(|seed| {
            let m = Arc::clone(&m);
            thread::spawn(move || {
                let ops = m.ops_with(Exec::Parallel(ParallelConfig::new(2).with_spawn_depth(3)));
                FormulaGen::new(seed, VARS)
                    .with_max_depth(6)
                    .take(40)
                    .map(|e| (bdd_of(&ops, &e).unwrap(), e))
                    .collect::<Vec<_>>()
            })
        })
        .collect();
    let built: Vec<_> = handles.into_iter().flat_map(|h| h.join().unwrap()).collect();
    assert!(m.table().resizes() > 0, "table should have doubled during the run");

    m.clear_cache();
    let len = m.table().len();
    let ops = m.ops();
    for (r, e) in &built {
        assert_eq!(bdd_of(&ops, e).unwrap(), *r);
        let table = truth_table(e, VARS).unwrap();
        for (i, want) in table.iter().enumerate() {
            assert_eq!(m.evaluate(*r, &Assignment::from_index(i as u64, VARS)), *want);
        }
    }
    assert_eq!(m.table().len(), len, "sequential rebuild found every node");
}

#[test]
fn concurrent_inserts_during_doubling_keep_refs_valid() {
    let m = Arc::new(manager(AllocationConfig::new(AllocationMode::Dynamic, AllocationConfig::MIN_BYTES), 64));
    let handles: Vec<_> = (0..8u32)
        .map(|t| {
            let m = Arc::clone(&m);
            thread::spawn(move || {
                let mut mine = Vec::new();
                for i in 0..2000u32 {
                    let v = (i * 8 + t) % 64;
                    let then_edge = if i % 3 == 0 { NodeRef::TRUE } else { m.var(63).unwrap() };
                    let var = Var(v.min(62));
                    let r = m.table().lookup_or_create(Node::new(var, then_edge, NodeRef::FALSE)).unwrap();
                    mine.push((r, var, then_edge));
                }
                mine
            })
        })
        .collect();
    for h in handles {
        for (r, var, then_edge) in h.join().unwrap() {
            assert_eq!(m.resolve(r).unwrap(), parbdd::Vertex::Decision(Node::new(var, then_edge, NodeRef::FALSE)));
        }
    }
    assert!(m.table().resizes() > 0);
    // 63 single-literal shapes over x0..x62 plus the ones pointing at x63, plus x63 itself
    assert_eq!(m.table().node_total(), 63 * 2 + 1);
}

#[test]
fn static_table_fills_identically_in_parallel() {
    let cfg = ManagerConfig::new(AllocationConfig::for_nodes(AllocationMode::Static, 40), 36).with_cache_slots(1 << 10);
    for exec in [Exec::Sequential, Exec::Parallel(ParallelConfig::new(4))] {
        let m = Manager::new(cfg).unwrap();
        let err = queens(&m.ops_with(exec), 6).unwrap_err();
        assert!(matches!(err, parbdd::BddError::TableFull { .. }), "{exec:?}: {err}");
    }
}
