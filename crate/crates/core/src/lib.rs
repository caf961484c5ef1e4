//! Multi-threaded reduced ordered binary decision diagrams with complemented
//! edges.
//!
//! A [`Manager`] owns one shared unique table and one compute cache. Every
//! operation takes `&self`, so any number of threads can build diagrams in
//! the same manager at once. [`Manager::ite`] runs the If-Then-Else recursion
//! on the calling thread and [`Manager::p_ite`] forks the two cofactor
//! subproblems onto a worker pool; both return bit-identical refs.
//!
//! ```
//! use parbdd::{Manager, NodeRef};
//!
//! let m = Manager::with_vars(3)?;
//! let ops = m.ops();
//! let (x, y) = (ops.var(0)?, ops.var(1)?);
//! let f = ops.and(x, y)?;
//! assert_eq!(ops.not(ops.or(ops.not(x), ops.not(y))?), f);
//! assert_eq!(m.sat_count(f, 3)?, 2u32.into());
//! assert_eq!(ops.xor(f, f)?, NodeRef::FALSE);
//! # Ok::<(), parbdd::BddError>(())
//! ```

mod analysis;
pub mod bench;
mod cache;
mod error;
mod hash;
mod ite;
mod join;
mod manager;
mod node;
mod ops;
pub mod oracle;
pub mod queens;
mod store;
mod zeroed;

pub use analysis::Assignment;
pub use cache::{ComputeCache, IteTriple};
pub use error::{BddError, Result};
pub use manager::{Exec, Manager, ManagerConfig, ParallelConfig};
pub use node::{Node, NodeRef, Var, Vertex};
pub use ops::{BinaryOp, Ops};
pub use store::{AllocationConfig, AllocationMode, UniqueTable};
