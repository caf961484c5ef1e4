use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::OnceLock;

use crate::node::{Node, NodeRef, Var};
use crate::zeroed::{try_zeroed_slice, Zeroable};

/// One arena record. Fields are atomics so a node can be written through a
/// shared reference before its index is published.
#[repr(C)]
pub(crate) struct NodeCell {
    var: AtomicU32,
    then_edge: AtomicU32,
    else_edge: AtomicU32,
}

// SAFETY: three AtomicU32, each valid when zeroed.
unsafe impl Zeroable for NodeCell {}

pub(crate) const NODE_RECORD_BYTES: usize = std::mem::size_of::<NodeCell>();

/// Segments never exceed this count: the last one ends past `NodeRef::MAX_INDEX`.
const MAX_SEGMENTS: usize = 33;

/// Append-only node storage with stable indices.
///
/// Segment 0 holds `base` cells. Segment `k >= 1` holds `base << (k - 1)`
/// cells, so each new segment doubles the total. Growing the arena never
/// moves existing cells, and readers never need a lock.
pub(crate) struct Arena {
    base: usize,
    base_shift: u32,
    segments: [OnceLock<Box<[NodeCell]>>; MAX_SEGMENTS],
}

impl Arena {
    /// `base` must be a power of two if the arena will ever grow.
    pub(crate) fn new(base: usize) -> Option<Arena> {
        let arena =
            Arena { base, base_shift: base.trailing_zeros(), segments: std::array::from_fn(|_| OnceLock::new()) };
        let first = try_zeroed_slice::<NodeCell>(base)?;
        let _ = arena.segments[0].set(first);
        Some(arena)
    }

    #[inline]
    fn locate(&self, index: u32) -> (usize, usize) {
        let index = index as usize;
        if index < self.base {
            return (0, index);
        }
        debug_assert!(self.base.is_power_of_two());
        let q = index >> self.base_shift;
        let k = (usize::BITS - q.leading_zeros()) as usize;
        (k, index - (self.base << (k - 1)))
    }

    #[inline]
    fn cell(&self, index: u32) -> &NodeCell {
        let (seg, off) = self.locate(index);
        &self.segments[seg].get().expect("index inside an allocated segment")[off]
    }

    #[inline]
    pub(crate) fn get(&self, index: u32) -> Node {
        let c = self.cell(index);
        Node {
            var: Var(c.var.load(Ordering::Relaxed)),
            then_edge: NodeRef::from_raw(c.then_edge.load(Ordering::Relaxed)),
            else_edge: NodeRef::from_raw(c.else_edge.load(Ordering::Relaxed)),
        }
    }

    /// Callers publish the index with a release store afterwards.
    #[inline]
    pub(crate) fn write(&self, index: u32, node: &Node) {
        let c = self.cell(index);
        c.var.store(node.var.0, Ordering::Relaxed);
        c.then_edge.store(node.then_edge.raw(), Ordering::Relaxed);
        c.else_edge.store(node.else_edge.raw(), Ordering::Relaxed);
    }

    pub(crate) fn segment_count(&self) -> usize {
        self.segments.iter().take_while(|s| s.get().is_some()).count()
    }

    /// Cells across all allocated segments.
    pub(crate) fn allocated_cells(&self) -> usize {
        self.segments.iter().filter_map(|s| s.get()).map(|s| s.len()).sum()
    }

    /// Appends the next segment, doubling the total cell count. Returns the
    /// number of cells added, or `None` if the host refused the memory or the
    /// index space is exhausted.
    pub(crate) fn grow(&self) -> Option<usize> {
        let k = self.segment_count();
        if k >= MAX_SEGMENTS || !self.base.is_power_of_two() {
            return None;
        }
        let len = self.base.checked_shl(k as u32 - 1)?;
        let seg = try_zeroed_slice::<NodeCell>(len)?;
        self.segments[k].set(seg).ok()?;
        Some(len)
    }
}
