use crate::cache::ComputeCache;
use crate::error::{BddError, Result};
use crate::node::{Node, NodeRef, Var, Vertex};
use crate::store::{AllocationConfig, AllocationMode, UniqueTable};

#[cfg(feature = "parallel")]
use std::{collections::HashMap, sync::Arc};

/// Fork/join settings for [`Manager::p_ite`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParallelConfig {
    /// Execution lanes in the pool. One lane means plain sequential ITE.
    pub workers: usize,
    /// Recursion levels that hand both cofactor subproblems to the pool.
    /// Deeper calls run inline.
    pub spawn_depth: u32,
}

impl ParallelConfig {
    pub const DEFAULT_SPAWN_DEPTH: u32 = 8;

    pub fn new(workers: usize) -> Self {
        ParallelConfig { workers: workers.max(1), spawn_depth: Self::DEFAULT_SPAWN_DEPTH }
    }

    pub fn with_spawn_depth(self, spawn_depth: u32) -> Self {
        ParallelConfig { spawn_depth, ..self }
    }
}

impl Default for ParallelConfig {
    fn default() -> Self {
        Self::new(std::thread::available_parallelism().map_or(1, |n| n.get()))
    }
}

/// Which ITE recursion an [`Ops`](crate::Ops) view routes through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    #[default]
    Sequential,
    Parallel(ParallelConfig),
}

#[derive(Debug, Clone, Copy)]
pub struct ManagerConfig {
    pub allocation: AllocationConfig,
    pub num_vars: u32,
    /// Compute cache entries; 0 disables the cache.
    pub cache_slots: usize,
}

impl ManagerConfig {
    pub fn new(allocation: AllocationConfig, num_vars: u32) -> Self {
        ManagerConfig { allocation, num_vars, cache_slots: ComputeCache::DEFAULT_SLOTS }
    }

    pub fn with_cache_slots(self, cache_slots: usize) -> Self {
        ManagerConfig { cache_slots, ..self }
    }
}

impl Default for ManagerConfig {
    fn default() -> Self {
        Self::new(AllocationConfig::new(AllocationMode::Dynamic, 1 << 20), 0)
    }
}

/// Shared unique table and compute cache. All operations take `&self` and may
/// run from many threads at once.
pub struct Manager {
    pub(crate) table: UniqueTable,
    pub(crate) cache: ComputeCache,
    #[cfg(feature = "parallel")]
    pools: parking_lot::Mutex<HashMap<usize, Arc<rayon::ThreadPool>>>,
}

impl std::fmt::Debug for Manager {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Manager").field("table", &self.table).field("cache", &self.cache).finish()
    }
}

impl Manager {
    pub fn new(config: ManagerConfig) -> Result<Manager> {
        Ok(Manager {
            table: UniqueTable::new(config.allocation, config.num_vars)?,
            cache: ComputeCache::new(config.cache_slots),
            #[cfg(feature = "parallel")]
            pools: Default::default(),
        })
    }

    /// Dynamic table starting at 1 MiB with the default cache.
    pub fn with_vars(num_vars: u32) -> Result<Manager> {
        Self::new(ManagerConfig { num_vars, ..Default::default() })
    }

    pub fn table(&self) -> &UniqueTable {
        &self.table
    }

    pub fn cache(&self) -> &ComputeCache {
        &self.cache
    }

    pub fn num_vars(&self) -> u32 {
        self.table.num_vars()
    }

    pub fn clear_cache(&self) {
        self.cache.clear();
    }

    pub fn constant(&self, value: bool) -> NodeRef {
        if value {
            NodeRef::TRUE
        } else {
            NodeRef::FALSE
        }
    }

    /// Positive literal of `var`.
    pub fn var(&self, var: impl Into<Var>) -> Result<NodeRef> {
        let var = var.into();
        if var.0 >= self.num_vars() {
            return Err(BddError::UnknownVariable { var, num_vars: self.num_vars() });
        }
        self.mk(var, NodeRef::TRUE, NodeRef::FALSE)
    }

    pub fn resolve(&self, r: NodeRef) -> Result<Vertex> {
        self.table.resolve(r)
    }

    /// Root variable of `r`, or `None` for a constant.
    pub fn root_var(&self, r: NodeRef) -> Option<Var> {
        (!r.is_terminal()).then(|| self.table.node(r.index()).var)
    }

    /// Canonical ref for `ITE(x, t, e)`, checking that `x` lies above both
    /// children.
    pub fn make_node(&self, x: impl Into<Var>, t: NodeRef, e: NodeRef) -> Result<NodeRef> {
        let x = x.into();
        if x.0 >= self.num_vars() {
            return Err(BddError::UnknownVariable { var: x, num_vars: self.num_vars() });
        }
        for child in [t, e] {
            if !child.is_terminal() && child.index() as usize >= self.table.len() {
                return Err(BddError::InvalidRef(child.raw()));
            }
            if self.root_var(child).is_some_and(|v| v <= x) {
                return Err(BddError::OrderViolation { var: x });
            }
        }
        self.mk(x, t, e)
    }

    /// Stores `(x, t, e)` with a regular else edge; the complement moves to
    /// the returned ref.
    #[inline]
    pub(crate) fn mk(&self, x: Var, t: NodeRef, e: NodeRef) -> Result<NodeRef> {
        if t == e {
            return Ok(e);
        }
        if e.is_complemented() {
            let n = self.table.lookup_or_create(Node::new(x, t.complement(), e.complement()))?;
            Ok(n.complement())
        } else {
            self.table.lookup_or_create(Node::new(x, t, e))
        }
    }

    /// Root variable plus both cofactors of `r` with respect to it.
    #[inline]
    pub(crate) fn expand(&self, r: NodeRef) -> (Var, NodeRef, NodeRef) {
        if r.is_terminal() {
            return (Var::TERMINAL, r, r);
        }
        let n = self.table.node(r.index());
        let c = r.is_complemented();
        (n.var, n.then_edge.complement_if(c), n.else_edge.complement_if(c))
    }

    /// Restriction `f|x←b`.
    ///
    /// Free when `x` is at or above the root of `f`. A variable below the
    /// root is eliminated by rebuilding the paths that reach it, which may
    /// insert nodes.
    pub fn cofactor(&self, f: NodeRef, x: impl Into<Var>, b: bool) -> Result<NodeRef> {
        let x = x.into();
        let (var, t, e) = self.expand(f);
        if var > x {
            return Ok(f);
        }
        if var == x {
            return Ok(if b { t } else { e });
        }
        self.cofactor_rec(f, x, b, &mut std::collections::HashMap::new())
    }

    fn cofactor_rec(
        &self,
        f: NodeRef,
        x: Var,
        b: bool,
        memo: &mut std::collections::HashMap<NodeRef, NodeRef>,
    ) -> Result<NodeRef> {
        let (var, t, e) = self.expand(f);
        if var > x {
            return Ok(f);
        }
        if var == x {
            return Ok(if b { t } else { e });
        }
        if let Some(&r) = memo.get(&f) {
            return Ok(r);
        }
        let rt = self.cofactor_rec(t, x, b, memo)?;
        let re = self.cofactor_rec(e, x, b, memo)?;
        let r = self.mk(var, rt, re)?;
        memo.insert(f, r);
        Ok(r)
    }

    /// Closest-to-root variable among the non-terminal arguments.
    pub fn top(&self, f: NodeRef, g: NodeRef, h: NodeRef) -> Result<Var> {
        [f, g, h].into_iter().filter_map(|r| self.root_var(r)).min().ok_or(BddError::NoVariable)
    }

    /// Starts the worker pool `cfg` names ahead of the first [`p_ite`](Self::p_ite)
    /// call, so that call does not pay for thread start-up.
    pub fn prepare_workers(&self, cfg: &ParallelConfig) -> Result<()> {
        #[cfg(feature = "parallel")]
        if cfg.workers > 1 {
            self.pool(cfg.workers)?;
        }
        #[cfg(not(feature = "parallel"))]
        let _ = cfg;
        Ok(())
    }

    /// Runs `op` on a worker of the pool `cfg` names. ITE calls made inside
    /// `op` with the same worker count then skip the hop onto the pool.
    #[cfg(feature = "parallel")]
    pub fn in_pool<R: Send>(&self, cfg: &ParallelConfig, op: impl FnOnce() -> R + Send) -> Result<R> {
        let inside = rayon::current_thread_index().is_some() && rayon::current_num_threads() == cfg.workers;
        if cfg.workers <= 1 || inside {
            return Ok(op());
        }
        Ok(self.pool(cfg.workers)?.install(op))
    }

    #[cfg(not(feature = "parallel"))]
    pub fn in_pool<R>(&self, _cfg: &ParallelConfig, op: impl FnOnce() -> R) -> Result<R> {
        Ok(op())
    }

    #[cfg(feature = "parallel")]
    pub(crate) fn pool(&self, workers: usize) -> Result<Arc<rayon::ThreadPool>> {
        let mut pools = self.pools.lock();
        if let Some(p) = pools.get(&workers) {
            return Ok(Arc::clone(p));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .thread_name(|i| format!("bdd-worker-{i}"))
            .build()
            .map_err(|e| BddError::Config(format!("cannot start {workers} workers: {e}")))?;
        let pool = Arc::new(pool);
        pools.insert(workers, Arc::clone(&pool));
        Ok(pool)
    }

    #[cfg(all(test, feature = "parallel"))]
    pub(crate) fn pools_len(&self) -> usize {
        self.pools.lock().len()
    }
}
