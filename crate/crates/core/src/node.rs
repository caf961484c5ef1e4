//! References and decision vertices.
//!
//! A [`NodeRef`] packs an arena index and a complement bit into one `u32`:
//! `index << 1 | complemented`. Index 0 is the single terminal, the 0-leaf, so
//! [`NodeRef::FALSE`] is `0` and [`NodeRef::TRUE`] is its complement, `1`.

use std::fmt;

/// Variable index. Smaller indices sit nearer the root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl Var {
    /// Variable reported for the terminal. Orders after every real variable,
    /// so `min` over root variables ignores terminals.
    pub(crate) const TERMINAL: Var = Var(u32::MAX);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

impl From<u32> for Var {
    fn from(v: u32) -> Self {
        Var(v)
    }
}

/// Handle to a Boolean function inside one unique table.
///
/// Two refs from the same table denote the same function iff they are
/// bit-identical.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeRef(u32);

impl NodeRef {
    pub const FALSE: NodeRef = NodeRef(0);
    pub const TRUE: NodeRef = NodeRef(1);

    /// Largest arena index representable in a ref.
    pub const MAX_INDEX: u32 = u32::MAX >> 1;

    #[inline]
    pub(crate) const fn new(index: u32, complemented: bool) -> NodeRef {
        NodeRef((index << 1) | complemented as u32)
    }

    #[inline]
    pub(crate) const fn from_raw(raw: u32) -> NodeRef {
        NodeRef(raw)
    }

    #[inline]
    pub const fn raw(self) -> u32 {
        self.0
    }

    #[inline]
    pub const fn index(self) -> u32 {
        self.0 >> 1
    }

    #[inline]
    pub const fn is_complemented(self) -> bool {
        self.0 & 1 == 1
    }

    /// Negation in O(1); never touches a table.
    #[inline]
    #[must_use]
    pub const fn complement(self) -> NodeRef {
        NodeRef(self.0 ^ 1)
    }

    /// The same ref with the complement bit cleared.
    #[inline]
    pub const fn regular(self) -> NodeRef {
        NodeRef(self.0 & !1)
    }

    #[inline]
    pub(crate) const fn complement_if(self, c: bool) -> NodeRef {
        NodeRef(self.0 ^ c as u32)
    }

    #[inline]
    pub const fn is_terminal(self) -> bool {
        self.0 >> 1 == 0
    }

    #[inline]
    pub const fn is_const(self, value: bool) -> bool {
        self.0 == value as u32
    }
}

impl fmt::Debug for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            NodeRef::FALSE => f.write_str("FALSE"),
            NodeRef::TRUE => f.write_str("TRUE"),
            r => write!(f, "{}@{}", if r.is_complemented() { "!" } else { "" }, r.index()),
        }
    }
}

/// A stored decision vertex. The else edge is never complemented and the two
/// edges always differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Node {
    pub var: Var,
    pub then_edge: NodeRef,
    pub else_edge: NodeRef,
}

impl Node {
    pub fn new(var: Var, then_edge: NodeRef, else_edge: NodeRef) -> Node {
        Node { var, then_edge, else_edge }
    }
}

/// What a ref points at, with the ref's complement bit already pushed onto
/// the outgoing edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vertex {
    Terminal(bool),
    Decision(Node),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        assert_eq!(NodeRef::FALSE.complement(), NodeRef::TRUE);
        assert!(NodeRef::TRUE.is_terminal() && NodeRef::FALSE.is_terminal());
        assert!(NodeRef::TRUE.is_complemented());
        assert_eq!(NodeRef::TRUE.index(), 0);
    }

    #[test]
    fn packing() {
        let r = NodeRef::new(12345, true);
        assert_eq!(r.index(), 12345);
        assert!(r.is_complemented());
        assert_eq!(r.regular(), NodeRef::new(12345, false));
        assert_eq!(r.complement_if(false), r);
        assert_eq!(r.complement_if(true), r.complement());
    }

    proptest::proptest! {
        #[test]
        fn complement_is_an_involution(raw in proptest::num::u32::ANY) {
            let r = NodeRef::from_raw(raw);
            proptest::prop_assert_eq!(r.complement().complement(), r);
            proptest::prop_assert_ne!(r.complement(), r);
            proptest::prop_assert_eq!(r.complement().index(), r.index());
        }
    }
}
