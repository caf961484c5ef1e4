use std::alloc::{alloc_zeroed, Layout};
use std::ptr::{slice_from_raw_parts_mut, NonNull};
use std::sync::atomic::{AtomicBool, AtomicU32};

/// Types for which the all-zero bit pattern is a valid value.
///
/// # Safety
///
/// Implementors must be valid when every byte is zero.
pub(crate) unsafe trait Zeroable: Sized {}

unsafe impl Zeroable for AtomicU32 {}
unsafe impl Zeroable for AtomicBool {}

/// Fallibly allocates a zero-initialised boxed slice.
///
/// Large tables are requested through `alloc_zeroed`, so untouched pages stay
/// uncommitted until first written.
pub(crate) fn try_zeroed_slice<T: Zeroable>(len: usize) -> Option<Box<[T]>> {
    if len == 0 || std::mem::size_of::<T>() == 0 {
        return Some(std::iter::empty().collect());
    }
    let layout = Layout::array::<T>(len).ok()?;
    // SAFETY: layout has non-zero size; T is valid when zeroed; the box is
    // later freed with the same `Layout::array::<T>(len)` layout.
    unsafe {
        let ptr = NonNull::new(alloc_zeroed(layout) as *mut T)?;
        Some(Box::from_raw(slice_from_raw_parts_mut(ptr.as_ptr(), len)))
    }
}
