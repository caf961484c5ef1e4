//! Two-argument Boolean operators, each one ITE call.

use crate::error::Result;
use crate::manager::{Exec, Manager, ParallelConfig};
use crate::node::{NodeRef, Var};

/// The sixteen Boolean functions of two arguments, numbered by their ITE
/// table row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    False,
    And,
    /// `f ∧ ¬g`
    NImplies,
    F,
    /// `¬f ∧ g`
    NConverse,
    G,
    Xor,
    Or,
    Nor,
    Equiv,
    NotG,
    /// `f ∨ ¬g`
    ConverseImplies,
    NotF,
    /// `¬f ∨ g`
    Implies,
    Nand,
    True,
}

impl BinaryOp {
    pub const ALL: [BinaryOp; 16] = [
        BinaryOp::False,
        BinaryOp::And,
        BinaryOp::NImplies,
        BinaryOp::F,
        BinaryOp::NConverse,
        BinaryOp::G,
        BinaryOp::Xor,
        BinaryOp::Or,
        BinaryOp::Nor,
        BinaryOp::Equiv,
        BinaryOp::NotG,
        BinaryOp::ConverseImplies,
        BinaryOp::NotF,
        BinaryOp::Implies,
        BinaryOp::Nand,
        BinaryOp::True,
    ];

    pub fn row(self) -> usize {
        self as usize
    }

    /// Reference truth table, evaluated directly.
    pub fn eval(self, f: bool, g: bool) -> bool {
        match self {
            BinaryOp::False => false,
            BinaryOp::And => f && g,
            BinaryOp::NImplies => f && !g,
            BinaryOp::F => f,
            BinaryOp::NConverse => !f && g,
            BinaryOp::G => g,
            BinaryOp::Xor => f != g,
            BinaryOp::Or => f || g,
            BinaryOp::Nor => !(f || g),
            BinaryOp::Equiv => f == g,
            BinaryOp::NotG => !g,
            BinaryOp::ConverseImplies => f || !g,
            BinaryOp::NotF => !f,
            BinaryOp::Implies => !f || g,
            BinaryOp::Nand => !(f && g),
            BinaryOp::True => true,
        }
    }
}

/// Operator front end bound to one manager and one ITE recursion.
#[derive(Debug, Clone, Copy)]
pub struct Ops<'a> {
    mgr: &'a Manager,
    exec: Exec,
}

impl Manager {
    /// Operators running the sequential recursion.
    pub fn ops(&self) -> Ops<'_> {
        Ops { mgr: self, exec: Exec::Sequential }
    }

    pub fn ops_with(&self, exec: Exec) -> Ops<'_> {
        Ops { mgr: self, exec }
    }

    pub fn par_ops(&self, cfg: ParallelConfig) -> Ops<'_> {
        self.ops_with(Exec::Parallel(cfg))
    }
}

impl<'a> Ops<'a> {
    pub fn manager(&self) -> &'a Manager {
        self.mgr
    }

    pub fn exec(&self) -> Exec {
        self.exec
    }

    #[inline]
    pub fn ite(&self, f: NodeRef, g: NodeRef, h: NodeRef) -> Result<NodeRef> {
        self.mgr.apply(&self.exec, f, g, h)
    }

    pub fn var(&self, v: impl Into<Var>) -> Result<NodeRef> {
        self.mgr.var(v)
    }

    /// Complement bit flip; no ITE call, no table access.
    #[inline]
    pub fn not(&self, f: NodeRef) -> NodeRef {
        f.complement()
    }

    pub fn and(&self, f: NodeRef, g: NodeRef) -> Result<NodeRef> {
        self.ite(f, g, NodeRef::FALSE)
    }

    pub fn or(&self, f: NodeRef, g: NodeRef) -> Result<NodeRef> {
        self.ite(f, NodeRef::TRUE, g)
    }

    pub fn xor(&self, f: NodeRef, g: NodeRef) -> Result<NodeRef> {
        self.ite(f, g.complement(), g)
    }

    /// `¬(f ∧ g)`, i.e. `ITE(f, ¬g, 1)`.
    pub fn nand(&self, f: NodeRef, g: NodeRef) -> Result<NodeRef> {
        self.ite(f, g.complement(), NodeRef::TRUE)
    }

    pub fn nor(&self, f: NodeRef, g: NodeRef) -> Result<NodeRef> {
        self.ite(f, NodeRef::FALSE, g.complement())
    }

    /// `f ⇒ g`
    pub fn implies(&self, f: NodeRef, g: NodeRef) -> Result<NodeRef> {
        self.ite(f, g, NodeRef::TRUE)
    }

    /// `g ⇒ f`
    pub fn converse_implies(&self, f: NodeRef, g: NodeRef) -> Result<NodeRef> {
        self.ite(f, NodeRef::TRUE, g.complement())
    }

    /// `¬(f ⇒ g)`
    pub fn nimplies(&self, f: NodeRef, g: NodeRef) -> Result<NodeRef> {
        self.ite(f, g.complement(), NodeRef::FALSE)
    }

    /// `¬(g ⇒ f)`
    pub fn nconverse(&self, f: NodeRef, g: NodeRef) -> Result<NodeRef> {
        self.ite(f, NodeRef::FALSE, g)
    }

    pub fn equiv(&self, f: NodeRef, g: NodeRef) -> Result<NodeRef> {
        self.ite(f, g, g.complement())
    }

    pub fn apply(&self, op: BinaryOp, f: NodeRef, g: NodeRef) -> Result<NodeRef> {
        match op {
            BinaryOp::False => Ok(NodeRef::FALSE),
            BinaryOp::And => self.and(f, g),
            BinaryOp::NImplies => self.nimplies(f, g),
            BinaryOp::F => Ok(f),
            BinaryOp::NConverse => self.nconverse(f, g),
            BinaryOp::G => Ok(g),
            BinaryOp::Xor => self.xor(f, g),
            BinaryOp::Or => self.or(f, g),
            BinaryOp::Nor => self.nor(f, g),
            BinaryOp::Equiv => self.equiv(f, g),
            BinaryOp::NotG => Ok(self.not(g)),
            BinaryOp::ConverseImplies => self.converse_implies(f, g),
            BinaryOp::NotF => Ok(self.not(f)),
            BinaryOp::Implies => self.implies(f, g),
            BinaryOp::Nand => self.nand(f, g),
            BinaryOp::True => Ok(NodeRef::TRUE),
        }
    }

    /// Runs a whole construction in one go. Under a parallel exec the closure
    /// runs on a pool worker, so every ITE it issues forks without first
    /// crossing threads.
    pub fn batch<R: Send>(&self, op: impl FnOnce(&Ops<'a>) -> Result<R> + Send) -> Result<R> {
        match &self.exec {
            Exec::Sequential => op(self),
            Exec::Parallel(cfg) => self.mgr.in_pool(cfg, || op(self))?,
        }
    }

    /// Conjunction of all operands; `TRUE` for none.
    pub fn and_all(&self, operands: impl IntoIterator<Item = NodeRef>) -> Result<NodeRef> {
        operands.into_iter().try_fold(NodeRef::TRUE, |acc, f| self.and(acc, f))
    }

    /// Disjunction of all operands; `FALSE` for none.
    pub fn or_all(&self, operands: impl IntoIterator<Item = NodeRef>) -> Result<NodeRef> {
        operands.into_iter().try_fold(NodeRef::FALSE, |acc, f| self.or(acc, f))
    }
}
