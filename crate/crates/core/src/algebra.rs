//! Finite dimensional nest algebras as ordered atom-rank compositions.
//!
//! A nest algebra here is the block upper triangular subalgebra of a full
//! matrix algebra cut out by an ordered list of diagonal block sizes
//! `(r_1, ..., r_l)`.  Everything else in the crate works through the
//! position/block arithmetic exposed by [`NestAlgebra`].

use crate::error::{Error, Result};

/// A block upper triangular algebra determined by its ordered atom ranks.
///
/// Positions are 1-based: positions `1..=n` split into `l` consecutive
/// intervals of lengths `r_1, ..., r_l`.  Values are immutable after
/// construction; block boundaries are precomputed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NestAlgebra {
    atom_ranks: Vec<u32>,
    // starts[a-1] is the first position of atom a; starts[l] = n + 1.
    starts: Vec<usize>,
}

/// An upper block cell `(i, j)` with `1 <= i <= j <= l`, indexing the
/// block subspace between the i-th and j-th atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub fn new(row: usize, col: usize) -> Self {
        Cell { row, col }
    }

    pub fn is_diagonal(&self) -> bool {
        self.row == self.col
    }
}

impl NestAlgebra {
    /// Builds the algebra `T(r_1, ..., r_l)`.
    pub fn new(atom_ranks: &[u32]) -> Result<Self> {
        if atom_ranks.is_empty() {
            return Err(Error::EmptyComposition);
        }
        for &r in atom_ranks {
            if r == 0 {
                return Err(Error::NonPositiveRank(r as i64));
            }
        }
        let mut starts = Vec::with_capacity(atom_ranks.len() + 1);
        let mut acc = 1usize;
        starts.push(acc);
        for &r in atom_ranks {
            acc += r as usize;
            starts.push(acc);
        }
        Ok(NestAlgebra {
            atom_ranks: atom_ranks.to_vec(),
            starts,
        })
    }

    /// The triangular algebra `T_n` (all atom ranks 1).
    pub fn triangular(n: usize) -> Self {
        NestAlgebra::new(&vec![1; n]).expect("n >= 1")
    }

    pub fn atom_ranks(&self) -> &[u32] {
        &self.atom_ranks
    }

    /// Number of atoms `l`.
    pub fn num_atoms(&self) -> usize {
        self.atom_ranks.len()
    }

    /// Total rank `n = sum r_i`.
    pub fn total_rank(&self) -> usize {
        self.starts[self.atom_ranks.len()] - 1
    }

    pub fn rank_of_atom(&self, atom: usize) -> u32 {
        self.atom_ranks[atom - 1]
    }

    /// All atom ranks are 1, i.e. the algebra is some `T_n`.
    pub fn is_triangular(&self) -> bool {
        self.atom_ranks.iter().all(|&r| r == 1)
    }

    /// The unique atom whose interval contains position `p`.
    pub fn block_of(&self, p: usize) -> Result<usize> {
        if p == 0 || p > self.total_rank() {
            return Err(Error::PositionOutOfRange {
                position: p,
                total: self.total_rank(),
            });
        }
        // starts is sorted; find the last start <= p.
        Ok(self.starts.partition_point(|&s| s <= p))
    }

    /// The half-open position interval of an atom, as `start..end`.
    pub fn atom_interval(&self, atom: usize) -> std::ops::Range<usize> {
        self.starts[atom - 1]..self.starts[atom]
    }

    /// All upper cells `(i, j)` with `i <= j`, in lexicographic order.
    pub fn cells(&self) -> Vec<Cell> {
        let l = self.num_atoms();
        let mut out = Vec::with_capacity(l * (l + 1) / 2);
        for i in 1..=l {
            for j in i..=l {
                out.push(Cell::new(i, j));
            }
        }
        out
    }

    /// Membership test for a cell in the upper block structure.
    pub fn contains_cell(&self, c: &Cell) -> bool {
        c.row >= 1 && c.row <= c.col && c.col <= self.num_atoms()
    }
}

impl std::fmt::Display for NestAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "T(")?;
        for (k, r) in self.atom_ranks.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}
