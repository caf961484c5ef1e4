use thiserror::Error;

use crate::node::Var;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BddError {
    #[error("invalid table configuration: {0}")]
    Config(String),

    /// A static table ran out of node slots.
    #[error("unique table full ({capacity} node slots)")]
    TableFull { capacity: usize },

    /// A dynamic table could not obtain memory for the next doubling.
    #[error("allocation of {requested_nodes} additional node slots failed")]
    AllocationFailure { requested_nodes: usize },

    #[error("node reference {0:#x} does not belong to this table")]
    InvalidRef(u32),

    #[error("variable {var} outside the declared universe of {num_vars}")]
    UnknownVariable { var: Var, num_vars: u32 },

    #[error("variable {var} is not above the roots of both children")]
    OrderViolation { var: Var },

    #[error("all operands are terminal")]
    NoVariable,

    #[error("support variable {var} not covered by a universe of {n} variables")]
    UniverseTooSmall { var: Var, n: u32 },
}

pub type Result<T, E = BddError> = std::result::Result<T, E>;
