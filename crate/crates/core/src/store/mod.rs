//! Node memory and the concurrent unique table.
//!
//! Nodes live in an append-only [`arena`](arena::Arena) addressed by stable
//! indices. A separate bucketized hash index maps `(var, then, else)` triples
//! to arena indices. Keeping the two apart lets a dynamic table double its
//! index without moving a single node, so refs stay valid across resizes.

mod arena;
mod index;

use std::sync::atomic::{AtomicU32, AtomicUsize, Ordering};

use parking_lot::RwLock;

use self::arena::{Arena, NODE_RECORD_BYTES};
use self::index::{IndexTable, SLOTS_PER_NODE};
use crate::error::{BddError, Result};
use crate::hash::hash3;
use crate::node::{Node, NodeRef, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AllocationMode {
    /// Capacity fixed at construction. Inserting past it fails with
    /// [`BddError::TableFull`].
    Static,
    /// Capacity doubles whenever the table fills.
    Dynamic,
}

impl std::fmt::Display for AllocationMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AllocationMode::Static => "static",
            AllocationMode::Dynamic => "dynamic",
        })
    }
}

/// How much memory the unique table reserves up front.
///
/// The byte budget converts to node slots at
/// [`BYTES_PER_NODE`](Self::BYTES_PER_NODE) bytes each: a 12-byte arena record, two 4-byte
/// index slots, and one byte covering the per-bucket lock share. Dynamic
/// tables round the slot count down to a power of two so that every doubling
/// lands on a segment boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AllocationConfig {
    pub mode: AllocationMode,
    pub initial_bytes: usize,
}

impl AllocationConfig {
    pub const BYTES_PER_NODE: usize = NODE_RECORD_BYTES + SLOTS_PER_NODE * 4 + 1;

    /// Terminal plus one decision node.
    pub const MIN_BYTES: usize = 2 * Self::BYTES_PER_NODE;

    pub fn new(mode: AllocationMode, initial_bytes: usize) -> Self {
        AllocationConfig { mode, initial_bytes }
    }

    pub fn fixed(initial_bytes: usize) -> Self {
        Self::new(AllocationMode::Static, initial_bytes)
    }

    pub fn doubling(initial_bytes: usize) -> Self {
        Self::new(AllocationMode::Dynamic, initial_bytes)
    }

    /// Budget that holds exactly `decision_nodes` nodes besides the terminal
    /// (dynamic mode may round down to a power of two).
    pub fn for_nodes(mode: AllocationMode, decision_nodes: usize) -> Self {
        Self::new(mode, (decision_nodes + 1) * Self::BYTES_PER_NODE)
    }

    /// Arena slots (terminal included) the initial reservation holds.
    pub fn node_capacity(&self) -> usize {
        let raw = (self.initial_bytes / Self::BYTES_PER_NODE).min(NodeRef::MAX_INDEX as usize + 1);
        match self.mode {
            AllocationMode::Static => raw,
            AllocationMode::Dynamic if raw == 0 => 0,
            AllocationMode::Dynamic => 1 << (usize::BITS - 1 - raw.leading_zeros()),
        }
    }

    fn validate(&self) -> Result<usize> {
        let cap = self.node_capacity();
        if cap < 2 {
            return Err(BddError::Config(format!(
                "{} bytes hold {cap} node slots; at least {} bytes are needed",
                self.initial_bytes,
                Self::MIN_BYTES
            )));
        }
        Ok(cap)
    }
}

enum Index {
    Fixed(IndexTable),
    /// The write side is the stop-the-world resize latch.
    Growable(RwLock<IndexTable>),
}

/// Arena plus hash index enforcing one arena entry per node triple.
pub struct UniqueTable {
    mode: AllocationMode,
    num_vars: u32,
    arena: Arena,
    index: Index,
    /// Arena entries in use, terminal included.
    len: AtomicU32,
    capacity: AtomicUsize,
    resizes: AtomicU32,
}

impl std::fmt::Debug for UniqueTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("UniqueTable")
            .field("mode", &self.mode)
            .field("len", &self.len())
            .field("capacity", &self.capacity())
            .finish()
    }
}

impl UniqueTable {
    /// A table holding only the 0-leaf.
    pub fn new(config: AllocationConfig, num_vars: u32) -> Result<UniqueTable> {
        let cap = config.validate()?;
        let oom = || BddError::AllocationFailure { requested_nodes: cap };
        let arena = Arena::new(cap).ok_or_else(oom)?;
        let table = IndexTable::for_cells(cap).ok_or_else(oom)?;
        let index = match config.mode {
            AllocationMode::Static => Index::Fixed(table),
            AllocationMode::Dynamic => Index::Growable(RwLock::new(table)),
        };
        Ok(UniqueTable {
            mode: config.mode,
            num_vars,
            arena,
            index,
            len: AtomicU32::new(1),
            capacity: AtomicUsize::new(cap),
            resizes: AtomicU32::new(0),
        })
    }

    pub fn mode(&self) -> AllocationMode {
        self.mode
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    /// Arena entries in use, terminal included.
    pub fn len(&self) -> usize {
        self.len.load(Ordering::Acquire) as usize
    }

    /// Decision nodes stored (terminal excluded).
    pub fn node_total(&self) -> usize {
        self.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() <= 1
    }

    pub fn capacity(&self) -> usize {
        self.capacity.load(Ordering::Acquire)
    }

    /// Number of completed doublings.
    pub fn resizes(&self) -> u32 {
        self.resizes.load(Ordering::Acquire)
    }

    /// Bytes currently reserved by the arena and the index. Tables never
    /// shrink, so this is also the peak.
    pub fn reserved_bytes(&self) -> usize {
        let index = match &self.index {
            Index::Fixed(t) => t.bytes(),
            Index::Growable(l) => l.read().bytes(),
        };
        self.arena.allocated_cells() * NODE_RECORD_BYTES + index
    }

    #[inline]
    fn with_index<R>(&self, f: impl FnOnce(&IndexTable) -> R) -> R {
        match &self.index {
            Index::Fixed(t) => f(t),
            Index::Growable(l) => f(&l.read()),
        }
    }

    /// Returns the ref of the entry holding `node`, inserting it first if
    /// absent. The check and the insert happen under one bucket lock.
    ///
    /// The triple must already be normalized; see
    /// [`Manager::make_node`](crate::Manager::make_node).
    pub fn lookup_or_create(&self, node: Node) -> Result<NodeRef> {
        let hash = hash3(node.var.0, node.then_edge.raw(), node.else_edge.raw());
        loop {
            match self.with_index(|t| self.probe_insert(t, &node, hash)) {
                Some(i) => return Ok(NodeRef::new(i, false)),
                None => match self.mode {
                    AllocationMode::Static => return Err(BddError::TableFull { capacity: self.capacity() }),
                    AllocationMode::Dynamic => self.grow()?,
                },
            }
        }
    }

    /// `None` means the table is out of arena slots.
    fn probe_insert(&self, t: &IndexTable, node: &Node, hash: u64) -> Option<u32> {
        let mut b = t.bucket_of(hash);
        loop {
            let group = t.group(b);
            let mut vacant = false;
            for slot in group {
                let i = slot.load(Ordering::Acquire);
                if i == 0 {
                    vacant = true;
                    break;
                }
                if self.arena.get(i) == *node {
                    return Some(i);
                }
            }
            if vacant {
                let _guard = t.lock(b);
                for slot in group {
                    let i = slot.load(Ordering::Acquire);
                    if i == 0 {
                        let fresh = self.allocate()?;
                        self.arena.write(fresh, node);
                        slot.store(fresh, Ordering::Release);
                        return Some(fresh);
                    }
                    if self.arena.get(i) == *node {
                        return Some(i);
                    }
                }
                // group filled while we were acquiring the lock
            }
            b = t.next(b);
        }
    }

    fn allocate(&self) -> Option<u32> {
        let cap = self.capacity.load(Ordering::Relaxed);
        self.len.fetch_update(Ordering::AcqRel, Ordering::Acquire, |n| ((n as usize) < cap).then_some(n + 1)).ok()
    }

    /// Doubles arena and index while holding the resize latch exclusively.
    fn grow(&self) -> Result<()> {
        let Index::Growable(latch) = &self.index else { unreachable!("static tables never grow") };
        let mut index = latch.write();
        let cap = self.capacity.load(Ordering::Acquire);
        if self.len() < cap {
            return Ok(()); // another thread already grew it
        }
        let added = self.arena.grow().ok_or(BddError::AllocationFailure { requested_nodes: cap })?;
        let new_cap = cap + added;
        let rebuilt = IndexTable::for_cells(new_cap).ok_or(BddError::AllocationFailure { requested_nodes: new_cap })?;
        for i in 1..self.len() as u32 {
            let n = self.arena.get(i);
            rebuilt.place_exclusive(hash3(n.var.0, n.then_edge.raw(), n.else_edge.raw()), i);
        }
        *index = rebuilt;
        self.capacity.store(new_cap, Ordering::Release);
        self.resizes.fetch_add(1, Ordering::AcqRel);
        Ok(())
    }

    /// Exact-match query; never inserts.
    pub fn get_from_utable(&self, node: Node) -> Option<NodeRef> {
        let hash = hash3(node.var.0, node.then_edge.raw(), node.else_edge.raw());
        self.with_index(|t| {
            let mut b = t.bucket_of(hash);
            loop {
                for slot in t.group(b) {
                    let i = slot.load(Ordering::Acquire);
                    if i == 0 {
                        return None;
                    }
                    if self.arena.get(i) == node {
                        return Some(NodeRef::new(i, false));
                    }
                }
                b = t.next(b);
            }
        })
    }

    /// Looks up the vertex behind `r`, pushing a complement bit down onto
    /// both edges.
    pub fn resolve(&self, r: NodeRef) -> Result<Vertex> {
        if r.is_terminal() {
            return Ok(Vertex::Terminal(r.is_complemented()));
        }
        if r.index() as usize >= self.len() {
            return Err(BddError::InvalidRef(r.raw()));
        }
        let c = r.is_complemented();
        let n = self.arena.get(r.index());
        Ok(Vertex::Decision(Node {
            var: n.var,
            then_edge: n.then_edge.complement_if(c),
            else_edge: n.else_edge.complement_if(c),
        }))
    }

    /// Stored node at `index` exactly as written (no complement applied).
    /// The index must be a non-terminal index handed out by this table.
    #[inline]
    pub(crate) fn node(&self, index: u32) -> Node {
        self.arena.get(index)
    }

    /// Every stored decision node with its arena index.
    pub fn nodes(&self) -> impl Iterator<Item = (u32, Node)> + '_ {
        (1..self.len() as u32).map(|i| (i, self.arena.get(i)))
    }
}
