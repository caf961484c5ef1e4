//! Bucketized hash index over arena indices.
//!
//! Each bucket is a probe group of [`GROUP`] slots guarded by one spinlock.
//! A slot holds an arena index, or 0 while empty (index 0 is the terminal,
//! which is never indexed). Slots are filled in order and never cleared, so
//! an empty slot ends every probe sequence that reaches it.

use std::hint::spin_loop;
use std::sync::atomic::{AtomicBool, AtomicU32, Ordering};

use crate::zeroed::try_zeroed_slice;

pub(crate) const GROUP: usize = 8;

/// Index slots reserved per arena cell.
pub(crate) const SLOTS_PER_NODE: usize = 2;

/// Spins before the waiting thread starts yielding its time slice.
const SPINS_BEFORE_YIELD: u32 = 64;

pub(crate) struct IndexTable {
    slots: Box<[AtomicU32]>,
    locks: Box<[AtomicBool]>,
}

pub(crate) struct BucketGuard<'a>(&'a AtomicBool);

impl Drop for BucketGuard<'_> {
    #[inline]
    fn drop(&mut self) {
        self.0.store(false, Ordering::Release);
    }
}

impl IndexTable {
    /// Sized for `cells` arena cells.
    pub(crate) fn for_cells(cells: usize) -> Option<IndexTable> {
        let buckets = (cells.max(1) * SLOTS_PER_NODE).div_ceil(GROUP);
        Some(IndexTable { slots: try_zeroed_slice(buckets * GROUP)?, locks: try_zeroed_slice(buckets)? })
    }

    #[inline]
    pub(crate) fn buckets(&self) -> usize {
        self.locks.len()
    }

    pub(crate) fn bytes(&self) -> usize {
        self.slots.len() * std::mem::size_of::<AtomicU32>() + self.locks.len()
    }

    /// Maps a hash onto `[0, buckets)` by multiply-high.
    #[inline]
    pub(crate) fn bucket_of(&self, hash: u64) -> usize {
        ((hash as u128 * self.buckets() as u128) >> 64) as usize
    }

    #[inline]
    pub(crate) fn next(&self, bucket: usize) -> usize {
        let b = bucket + 1;
        if b == self.buckets() {
            0
        } else {
            b
        }
    }

    #[inline]
    pub(crate) fn group(&self, bucket: usize) -> &[AtomicU32] {
        &self.slots[bucket * GROUP..(bucket + 1) * GROUP]
    }

    /// Busy-waits on the bucket flag.
    #[inline]
    pub(crate) fn lock(&self, bucket: usize) -> BucketGuard<'_> {
        let flag = &self.locks[bucket];
        let mut spins = 0u32;
        while flag.compare_exchange_weak(false, true, Ordering::Acquire, Ordering::Relaxed).is_err() {
            while flag.load(Ordering::Relaxed) {
                if spins < SPINS_BEFORE_YIELD {
                    spins += 1;
                    spin_loop();
                } else {
                    std::thread::yield_now();
                }
            }
        }
        BucketGuard(flag)
    }

    #[cfg(test)]
    pub(crate) fn is_locked(&self, bucket: usize) -> bool {
        self.locks[bucket].load(Ordering::Relaxed)
    }

    /// Single-threaded placement used while rebuilding under the resize latch.
    pub(crate) fn place_exclusive(&self, hash: u64, index: u32) {
        let mut b = self.bucket_of(hash);
        loop {
            for slot in self.group(b) {
                if slot.load(Ordering::Relaxed) == 0 {
                    slot.store(index, Ordering::Relaxed);
                    return;
                }
            }
            b = self.next(b);
        }
    }
}
