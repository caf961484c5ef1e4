//! Two-way fork/join used by the parallel ITE recursion.

/// Runs both closures, potentially in parallel on the current rayon pool, and
/// returns once both have finished.
#[cfg(feature = "parallel")]
#[inline]
pub(crate) fn join<A, B, RA, RB>(a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    rayon::join(a, b)
}

/// Sequential fallback: left then right on the calling thread.
#[cfg(not(feature = "parallel"))]
#[inline]
pub(crate) fn join<A, B, RA, RB>(a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA,
    B: FnOnce() -> RB,
{
    (a(), b())
}
