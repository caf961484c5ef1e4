//! Read-only queries over built diagrams.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

use num_bigint::BigUint;

use crate::error::{BddError, Result};
use crate::manager::Manager;
use crate::node::{NodeRef, Var};

/// Total assignment over variables `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    bits: Vec<bool>,
}

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Assignment { bits }
    }

    /// Binary encoding of `index` with variable 0 as the least significant bit.
    pub fn from_index(index: u64, n: u32) -> Self {
        Assignment { bits: (0..n).map(|v| index >> v & 1 == 1).collect() }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, v: Var) -> bool {
        self.bits[v.index() as usize]
    }

    pub fn set(&mut self, v: Var, value: bool) {
        self.bits[v.index() as usize] = value;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}

impl From<Vec<bool>> for Assignment {
    fn from(bits: Vec<bool>) -> Self {
        Assignment { bits }
    }
}

impl Manager {
    /// Follows the path selected by `a` and XORs complement bits along it.
    ///
    /// # Panics
    /// If `a` does not cover a variable tested on the path.
    pub fn evaluate(&self, f: NodeRef, a: &Assignment) -> bool {
        let mut r = f;
        let mut neg = false;
        while !r.is_terminal() {
            neg ^= r.is_complemented();
            let n = self.table.node(r.index());
            r = if a.get(n.var) { n.then_edge } else { n.else_edge };
        }
        neg ^ (r == NodeRef::TRUE)
    }

    /// Satisfying assignments of `f` among all `2^n` assignments to
    /// variables `0..n`.
    pub fn sat_count(&self, f: NodeRef, n: u32) -> Result<BigUint> {
        if let Some(&v) = self.support(f).iter().next_back() {
            if v.0 >= n {
                return Err(BddError::UniverseTooSmall { var: v, n });
            }
        }
        let mut memo = HashMap::new();
        let (level, c) = self.count_rec(f, n, &mut memo);
        Ok(c << (level as usize))
    }

    /// Count of `r` over variables `level(r)..n`, returned with that level.
    fn count_rec(&self, r: NodeRef, n: u32, memo: &mut HashMap<NodeRef, BigUint>) -> (u32, BigUint) {
        if r.is_terminal() {
            return (n, BigUint::from((r == NodeRef::TRUE) as u32));
        }
        let node = self.table.node(r.index());
        let level = node.var.0;
        if let Some(c) = memo.get(&r) {
            return (level, c.clone());
        }
        let c = if r.is_complemented() {
            let (_, plain) = self.count_rec(r.regular(), n, memo);
            (BigUint::from(1u32) << ((n - level) as usize)) - plain
        } else {
            let (lt, ct) = self.count_rec(node.then_edge, n, memo);
            let (le, ce) = self.count_rec(node.else_edge, n, memo);
            (ct << ((lt - level - 1) as usize)) + (ce << ((le - level - 1) as usize))
        };
        memo.insert(r, c.clone());
        (level, c)
    }

    /// Internal nodes reachable from `f`, ignoring complement bits.
    pub fn node_count(&self, f: NodeRef) -> usize {
        self.reachable(f).len()
    }

    pub fn support(&self, f: NodeRef) -> BTreeSet<Var> {
        self.reachable(f).into_iter().map(|i| self.table.node(i).var).collect()
    }

    fn reachable(&self, f: NodeRef) -> HashSet<u32> {
        let mut seen = HashSet::new();
        let mut stack = vec![f];
        while let Some(r) = stack.pop() {
            if r.is_terminal() || !seen.insert(r.index()) {
                continue;
            }
            let n = self.table.node(r.index());
            stack.push(n.then_edge);
            stack.push(n.else_edge);
        }
        seen
    }

    /// Graphviz digraph of `f`. Nodes are named `n<arena index>`, the single
    /// terminal is the box `n0` standing for 0, then edges are solid, else edges
    /// dashed, and complemented edges end in an `odot` arrowhead. The graph
    /// label names the root, prefixed with `!` when the root ref is complemented.
    pub fn to_dot(&self, f: NodeRef) -> String {
        let mut nodes: Vec<u32> = self.reachable(f).into_iter().collect();
        nodes.sort_unstable();
        let mut out = String::from("digraph bdd {\n");
        let bang = if f.is_complemented() { "!" } else { "" };
        let _ = writeln!(out, "  label=\"f = {bang}n{}\";", f.index());
        out.push_str("  n0 [shape=box, label=\"0\"];\n");
        for &i in &nodes {
            let n = self.table.node(i);
            let _ = writeln!(out, "  n{i} [shape=circle, label=\"{}\"];", n.var);
            write_edge(&mut out, &format!("n{i}"), n.then_edge, "solid");
            write_edge(&mut out, &format!("n{i}"), n.else_edge, "dashed");
        }
        out.push_str("}\n");
        out
    }
}

fn write_edge(out: &mut String, from: &str, to: NodeRef, style: &str) {
    let head = if to.is_complemented() { ", arrowhead=odot" } else { "" };
    let _ = writeln!(out, "  {from} -> n{} [style={style}{head}];", to.index());
}
