//! n-Queens as a diagram, built one row at a time.

use crate::error::{BddError, Result};
use crate::node::{NodeRef, Var};
use crate::ops::Ops;

/// `n × n` board with cell `(r, c)` mapped to variable `r·n + c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Board {
    n: u32,
}

impl Board {
    pub fn new(n: u32) -> Result<Board> {
        if n == 0 {
            return Err(BddError::Config("board side must be at least 1".into()));
        }
        if n.checked_mul(n).is_none_or(|v| v > NodeRef::MAX_INDEX) {
            return Err(BddError::Config(format!("board side {n} is too large")));
        }
        Ok(Board { n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn num_vars(&self) -> u32 {
        self.n * self.n
    }

    pub fn var(&self, r: u32, c: u32) -> Var {
        Var(r * self.n + c)
    }

    /// Cells in rows above `r` that a queen on `(r, c)` attacks.
    fn attacked_above(&self, r: u32, c: u32) -> impl Iterator<Item = Var> + '_ {
        (0..r).flat_map(move |r2| {
            let d = r - r2;
            let mut cells = vec![c];
            if c >= d {
                cells.push(c - d);
            }
            if c + d < self.n {
                cells.push(c + d);
            }
            cells.into_iter().map(move |c2| self.var(r2, c2))
        })
    }
}

/// Conjunction of literals, built bottom-up so every step adds one node on top.
fn cube(ops: &Ops<'_>, mut lits: Vec<(Var, bool)>) -> Result<NodeRef> {
    lits.sort_unstable_by_key(|&(v, _)| std::cmp::Reverse(v));
    lits.into_iter().try_fold(NodeRef::TRUE, |acc, (v, positive)| {
        let x = ops.var(v)?;
        ops.and(if positive { x } else { ops.not(x) }, acc)
    })
}

/// Exactly one queen in row `r`, and none of its cells attacked from rows
/// above.
pub fn row_constraint(ops: &Ops<'_>, board: &Board, r: u32) -> Result<NodeRef> {
    if r >= board.n {
        return Err(BddError::Config(format!("row {r} outside a board of side {}", board.n)));
    }
    let mut row = NodeRef::FALSE;
    for c in 0..board.n {
        let mut lits: Vec<(Var, bool)> = (0..board.n).map(|c2| (board.var(r, c2), c2 == c)).collect();
        lits.extend(board.attacked_above(r, c).map(|v| (v, false)));
        row = ops.or(row, cube(ops, lits)?)?;
    }
    Ok(row)
}

/// Legal placements of `n` queens, accumulated over rows `0..n`.
pub fn queens(ops: &Ops<'_>, n: u32) -> Result<NodeRef> {
    let board = Board::new(n)?;
    let mut acc = NodeRef::TRUE;
    for r in 0..n {
        let row = row_constraint(ops, &board, r)?;
        acc = ops.and(acc, row)?;
    }
    Ok(acc)
}
