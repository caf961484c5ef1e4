//! Brute-force references: formula truth tables and a backtracking n-Queens
//! counter. Nothing here goes through the ITE recursion except [`bdd_of`],
//! which is the bridge under test.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::node::NodeRef;
use crate::ops::Ops;

pub const MAX_TABLE_VARS: u32 = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Const(bool),
    Var(u32),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Xor(Box<Formula>, Box<Formula>),
    Ite(Box<Formula>, Box<Formula>, Box<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("truth table over {n} variables exceeds the limit of {MAX_TABLE_VARS}")]
pub struct TooManyVars {
    pub n: u32,
}

impl Formula {
    pub fn var(v: u32) -> Self {
        Formula::Var(v)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(f: Formula, g: Formula) -> Self {
        Formula::And(Box::new(f), Box::new(g))
    }

    pub fn or(f: Formula, g: Formula) -> Self {
        Formula::Or(Box::new(f), Box::new(g))
    }

    pub fn xor(f: Formula, g: Formula) -> Self {
        Formula::Xor(Box::new(f), Box::new(g))
    }

    pub fn ite(f: Formula, g: Formula, h: Formula) -> Self {
        Formula::Ite(Box::new(f), Box::new(g), Box::new(h))
    }

    /// Value under the assignment whose bit `v` is variable `v`.
    pub fn eval(&self, bits: u64) -> bool {
        match self {
            Formula::Const(b) => *b,
            Formula::Var(v) => bits >> v & 1 == 1,
            Formula::Not(f) => !f.eval(bits),
            Formula::And(f, g) => f.eval(bits) && g.eval(bits),
            Formula::Or(f, g) => f.eval(bits) || g.eval(bits),
            Formula::Xor(f, g) => f.eval(bits) != g.eval(bits),
            Formula::Ite(f, g, h) => {
                if f.eval(bits) {
                    g.eval(bits)
                } else {
                    h.eval(bits)
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Const(_) | Formula::Var(_) => 0,
            Formula::Not(f) => 1 + f.depth(),
            Formula::And(f, g) | Formula::Or(f, g) | Formula::Xor(f, g) => 1 + f.depth().max(g.depth()),
            Formula::Ite(f, g, h) => 1 + f.depth().max(g.depth()).max(h.depth()),
        }
    }
}

/// Entry `i` is the value under [`Assignment::from_index(i, n)`](crate::Assignment::from_index).
pub fn truth_table(expr: &Formula, n: u32) -> std::result::Result<Vec<bool>, TooManyVars> {
    if n > MAX_TABLE_VARS {
        return Err(TooManyVars { n });
    }
    Ok((0..1u64 << n).map(|i| expr.eval(i)).collect())
}

/// Solutions of the n-Queens puzzle by row-recursive backtracking.
pub fn queens_backtrack(n: u32) -> u64 {
    fn place(n: u32, row: u32, cols: u64, diag: u64, anti: u64) -> u64 {
        if row == n {
            return 1;
        }
        let full = (1u64 << n) - 1;
        let mut free = full & !(cols | diag | anti);
        let mut count = 0;
        while free != 0 {
            let bit = free & free.wrapping_neg();
            free ^= bit;
            count += place(n, row + 1, cols | bit, (diag | bit) << 1 & full, (anti | bit) >> 1);
        }
        count
    }
    assert!(n < 64, "board side {n} too large");
    place(n, 0, 0, 0, 0)
}

/// Structural fold of `expr` through the operator wrappers.
pub fn bdd_of(ops: &Ops<'_>, expr: &Formula) -> Result<NodeRef> {
    Ok(match expr {
        Formula::Const(b) => ops.manager().constant(*b),
        Formula::Var(v) => ops.var(*v)?,
        Formula::Not(f) => ops.not(bdd_of(ops, f)?),
        Formula::And(f, g) => ops.and(bdd_of(ops, f)?, bdd_of(ops, g)?)?,
        Formula::Or(f, g) => ops.or(bdd_of(ops, f)?, bdd_of(ops, g)?)?,
        Formula::Xor(f, g) => ops.xor(bdd_of(ops, f)?, bdd_of(ops, g)?)?,
        Formula::Ite(f, g, h) => ops.ite(bdd_of(ops, f)?, bdd_of(ops, g)?, bdd_of(ops, h)?)?,
    })
}

/// Seeded generator of random formulas over `vars` variables.
#[derive(Debug, Clone)]
pub struct FormulaGen {
    rng: ChaCha8Rng,
    vars: u32,
    max_depth: usize,
}

impl FormulaGen {
    pub const MAX_DEPTH: usize = 8;

    pub fn new(seed: u64, vars: u32) -> Self {
        FormulaGen { rng: ChaCha8Rng::seed_from_u64(seed), vars: vars.max(1), max_depth: Self::MAX_DEPTH }
    }

    pub fn with_max_depth(self, max_depth: usize) -> Self {
        FormulaGen { max_depth: max_depth.min(Self::MAX_DEPTH), ..self }
    }

    pub fn formula(&mut self) -> Formula {
        let depth = self.rng.gen_range(0..=self.max_depth);
        self.build(depth)
    }

    fn build(&mut self, depth: usize) -> Formula {
        let leaf = |g: &mut Self| {
            if g.rng.gen_ratio(1, 8) {
                Formula::Const(g.rng.gen())
            } else {
                Formula::Var(g.rng.gen_range(0..g.vars))
            }
        };
        if depth == 0 {
            return leaf(self);
        }
        let d = depth - 1;
        match self.rng.gen_range(0..7) {
            0 => Formula::Const(self.rng.gen()),
            1 => Formula::Var(self.rng.gen_range(0..self.vars)),
            2 => Formula::not(self.build(d)),
            3 => Formula::and(self.build(d), self.build(d)),
            4 => Formula::or(self.build(d), self.build(d)),
            5 => Formula::xor(self.build(d), self.build(d)),
            _ => Formula::ite(self.build(d), self.build(d), self.build(d)),
        }
    }
}

impl Iterator for FormulaGen {
    type Item = Formula;

    fn next(&mut self) -> Option<Formula> {
        Some(self.formula())
    }
}
