//! Sequential and fork/join If-Then-Else.
//!
//! Both recursions share the unique table and the compute cache, so a
//! subproblem finished by one worker is a cache hit for every other one, and
//! canonicity makes the two produce bit-identical refs.

use crate::cache::IteTriple;
use crate::error::Result;
use crate::manager::{Exec, Manager, ParallelConfig};
use crate::node::{NodeRef, Var};

enum Step {
    Done(NodeRef),
    Split { key: IteTriple, x: Var, high: IteTriple, low: IteTriple },
}

/// The five constant-time cases. Everything else recurses.
#[inline]
fn terminal_case(f: NodeRef, g: NodeRef, h: NodeRef) -> Option<NodeRef> {
    if f == NodeRef::TRUE {
        Some(g)
    } else if f == NodeRef::FALSE || g == h {
        Some(h)
    } else if g == NodeRef::TRUE && h == NodeRef::FALSE {
        Some(f)
    } else if g == NodeRef::FALSE && h == NodeRef::TRUE {
        Some(f.complement())
    } else {
        None
    }
}

/// `ITE(¬f, g, h) = ITE(f, h, g)`: cache keys always carry a regular `f`.
#[inline]
fn normalize(f: NodeRef, g: NodeRef, h: NodeRef) -> IteTriple {
    if f.is_complemented() {
        IteTriple::new(f.complement(), h, g)
    } else {
        IteTriple::new(f, g, h)
    }
}

impl Manager {
    #[inline]
    fn ite_step(&self, f: NodeRef, g: NodeRef, h: NodeRef) -> Step {
        if let Some(r) = terminal_case(f, g, h) {
            return Step::Done(r);
        }
        let key = normalize(f, g, h);
        if let Some(r) = self.cache.get(&key) {
            return Step::Done(r);
        }
        let (vf, f1, f0) = self.expand(key.f);
        let (vg, g1, g0) = self.expand(key.g);
        let (vh, h1, h0) = self.expand(key.h);
        let x = vf.min(vg).min(vh);
        let pick = |v: Var, hi: NodeRef, lo: NodeRef, r: NodeRef| if v == x { (hi, lo) } else { (r, r) };
        let (f1, f0) = pick(vf, f1, f0, key.f);
        let (g1, g0) = pick(vg, g1, g0, key.g);
        let (h1, h0) = pick(vh, h1, h0, key.h);
        Step::Split { key, x, high: IteTriple::new(f1, g1, h1), low: IteTriple::new(f0, g0, h0) }
    }

    #[inline]
    fn ite_finish(&self, key: &IteTriple, x: Var, t: NodeRef, e: NodeRef) -> Result<NodeRef> {
        let r = if t == e { t } else { self.mk(x, t, e)? };
        self.cache.put(key, r);
        Ok(r)
    }

    /// `(f ∧ g) ∨ (¬f ∧ h)` on the calling thread.
    pub fn ite(&self, f: NodeRef, g: NodeRef, h: NodeRef) -> Result<NodeRef> {
        match self.ite_step(f, g, h) {
            Step::Done(r) => Ok(r),
            Step::Split { key, x, high, low } => {
                let t = self.ite(high.f, high.g, high.h)?;
                let e = self.ite(low.f, low.g, low.h)?;
                self.ite_finish(&key, x, t, e)
            }
        }
    }

    /// Fork/join ITE. Down to `cfg.spawn_depth` levels, both cofactor
    /// subproblems are submitted to the worker pool before either is awaited;
    /// deeper levels run the sequential recursion. Errors surface only after
    /// both halves have settled.
    pub fn p_ite(&self, f: NodeRef, g: NodeRef, h: NodeRef, cfg: &ParallelConfig) -> Result<NodeRef> {
        if let Some(r) = terminal_case(f, g, h) {
            return Ok(r);
        }
        if cfg.workers <= 1 || cfg.spawn_depth == 0 {
            return self.ite(f, g, h);
        }
        if let Some(r) = self.cache.get(&normalize(f, g, h)) {
            return Ok(r);
        }
        self.run_parallel(cfg, || self.p_ite_rec(f, g, h, cfg.spawn_depth))
    }

    #[cfg(feature = "parallel")]
    fn run_parallel<R: Send>(&self, cfg: &ParallelConfig, op: impl FnOnce() -> Result<R> + Send) -> Result<R> {
        if rayon::current_thread_index().is_some() && rayon::current_num_threads() == cfg.workers {
            return op();
        }
        self.pool(cfg.workers)?.install(op)
    }

    #[cfg(not(feature = "parallel"))]
    fn run_parallel<R>(&self, _cfg: &ParallelConfig, op: impl FnOnce() -> Result<R>) -> Result<R> {
        op()
    }

    fn p_ite_rec(&self, f: NodeRef, g: NodeRef, h: NodeRef, spawn_left: u32) -> Result<NodeRef> {
        if spawn_left == 0 {
            return self.ite(f, g, h);
        }
        match self.ite_step(f, g, h) {
            Step::Done(r) => Ok(r),
            Step::Split { key, x, high, low } => {
                let (t, e) = crate::join::join(
                    || self.p_ite_rec(high.f, high.g, high.h, spawn_left - 1),
                    || self.p_ite_rec(low.f, low.g, low.h, spawn_left - 1),
                );
                let (t, e) = (t?, e?);
                self.ite_finish(&key, x, t, e)
            }
        }
    }

    /// ITE through whichever recursion `exec` names.
    pub fn apply(&self, exec: &Exec, f: NodeRef, g: NodeRef, h: NodeRef) -> Result<NodeRef> {
        match exec {
            Exec::Sequential => self.ite(f, g, h),
            Exec::Parallel(cfg) => self.p_ite(f, g, h, cfg),
        }
    }
}
