//! Lossy direct-mapped memo table for ITE results.
//!
//! Each entry is published with a sequence counter: writers move it to an odd
//! value, store the fields, then move it to the next even value. Readers accept
//! an entry only if they saw the same even, non-zero counter before and after
//! reading the fields, so a torn entry is never returned. Writers that find an
//! entry mid-update give up; a lost memoization only costs a recomputation.

use std::sync::atomic::{fence, AtomicU32, Ordering};

use crate::hash::hash3;
use crate::node::NodeRef;
use crate::zeroed::{try_zeroed_slice, Zeroable};

/// Operand triple of an ITE call; compared bitwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IteTriple {
    pub f: NodeRef,
    pub g: NodeRef,
    pub h: NodeRef,
}

impl IteTriple {
    pub fn new(f: NodeRef, g: NodeRef, h: NodeRef) -> Self {
        IteTriple { f, g, h }
    }

    #[inline]
    fn hash(&self) -> u64 {
        hash3(self.f.raw(), self.g.raw(), self.h.raw())
    }
}

#[repr(C)]
struct Entry {
    seq: AtomicU32,
    f: AtomicU32,
    g: AtomicU32,
    h: AtomicU32,
    result: AtomicU32,
}

// SAFETY: five AtomicU32, each valid when zeroed.
unsafe impl Zeroable for Entry {}

pub struct ComputeCache {
    entries: Box<[Entry]>,
    mask: usize,
}

impl std::fmt::Debug for ComputeCache {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ComputeCache").field("slots", &self.slots()).finish()
    }
}

impl ComputeCache {
    pub const DEFAULT_SLOTS: usize = 1 << 20;

    /// `slots` is rounded up to a power of two. Zero disables caching.
    pub fn new(slots: usize) -> ComputeCache {
        let n = if slots == 0 { 0 } else { slots.next_power_of_two() };
        ComputeCache {
            entries: try_zeroed_slice(n)
                .unwrap_or_else(|| std::alloc::handle_alloc_error(std::alloc::Layout::array::<Entry>(n).unwrap())),
            mask: n.wrapping_sub(1),
        }
    }

    pub fn slots(&self) -> usize {
        self.entries.len()
    }

    pub fn is_enabled(&self) -> bool {
        !self.entries.is_empty()
    }

    pub fn bytes(&self) -> usize {
        self.entries.len() * std::mem::size_of::<Entry>()
    }

    #[inline]
    fn entry(&self, key: &IteTriple) -> Option<&Entry> {
        if self.entries.is_empty() {
            return None;
        }
        Some(&self.entries[key.hash() as usize & self.mask])
    }

    #[inline]
    pub fn get(&self, key: &IteTriple) -> Option<NodeRef> {
        let e = self.entry(key)?;
        let s1 = e.seq.load(Ordering::Acquire);
        if s1 == 0 || s1 & 1 == 1 {
            return None;
        }
        let f = e.f.load(Ordering::Relaxed);
        let g = e.g.load(Ordering::Relaxed);
        let h = e.h.load(Ordering::Relaxed);
        let r = e.result.load(Ordering::Relaxed);
        fence(Ordering::Acquire);
        if e.seq.load(Ordering::Relaxed) != s1 {
            return None;
        }
        (f == key.f.raw() && g == key.g.raw() && h == key.h.raw()).then(|| NodeRef::from_raw(r))
    }

    /// Overwrites whatever the slot held.
    #[inline]
    pub fn put(&self, key: &IteTriple, result: NodeRef) {
        let Some(e) = self.entry(key) else { return };
        let s = e.seq.load(Ordering::Relaxed);
        if s & 1 == 1 || e.seq.compare_exchange(s, s.wrapping_add(1), Ordering::Acquire, Ordering::Relaxed).is_err() {
            return;
        }
        fence(Ordering::Release);
        e.f.store(key.f.raw(), Ordering::Relaxed);
        e.g.store(key.g.raw(), Ordering::Relaxed);
        e.h.store(key.h.raw(), Ordering::Relaxed);
        e.result.store(result.raw(), Ordering::Relaxed);
        // skip 0 on wrap-around; 0 marks a never-written entry
        let next = match s.wrapping_add(2) {
            0 => 2,
            n => n,
        };
        e.seq.store(next, Ordering::Release);
    }

    /// Forgets every entry. Concurrent writers may leave a few entries behind.
    pub fn clear(&self) {
        for e in self.entries.iter() {
            let s = e.seq.load(Ordering::Relaxed);
            if s & 1 == 0 {
                let _ = e.seq.compare_exchange(s, 0, Ordering::AcqRel, Ordering::Relaxed);
            }
        }
    }
}
