//! Partial permutation matrices in a nest algebra and their block-support
//! combinatorics.
//!
//! A [`StandardPisom`] is a regular partial isometry given concretely as a
//! sum of matrix units, i.e. a set of `(row, col)` position pairs with
//! distinct rows and distinct columns, supported on or above the block
//! diagonal.  The order conservation and order preservation predicates only
//! depend on the block support, so they are defined on [`CellSet`]s through
//! the single "strictly northeast" conflict relation.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{Cell, NestAlgebra};
use crate::error::{Error, Result};

/// A set of upper cells within an ambient algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellSet {
    ambient: NestAlgebra,
    cells: BTreeSet<Cell>,
}

/// `(s,t)` lies strictly northeast of `(i,j)`: smaller row atom and larger
/// column atom.  Both staircase and strict monotonicity are phrased through
/// this one relation.
pub fn strictly_northeast(a: &Cell, b: &Cell) -> bool {
    a.row < b.row && a.col > b.col
}

/// `(s,t)` weakly dominates `(i,j)` to the northeast without being equal.
fn weakly_northeast(a: &Cell, b: &Cell) -> bool {
    (a != b) && a.row <= b.row && a.col >= b.col
}

impl CellSet {
    pub fn new(ambient: NestAlgebra, cells: impl IntoIterator<Item = Cell>) -> Result<Self> {
        let cells: BTreeSet<Cell> = cells.into_iter().collect();
        for c in &cells {
            if !ambient.contains_cell(c) {
                return Err(Error::NotInAlgebra {
                    row: c.row,
                    col: c.col,
                });
            }
        }
        Ok(CellSet { ambient, cells })
    }

    pub fn ambient(&self) -> &NestAlgebra {
        &self.ambient
    }

    pub fn cells(&self) -> &BTreeSet<Cell> {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// No cell lies strictly northeast of another.
    pub fn is_staircase(&self) -> bool {
        cells_are_staircase(&self.cells)
    }

    /// Distinct row atoms, distinct column atoms, and sorting by row atom
    /// strictly sorts by column atom.
    pub fn is_strictly_monotone(&self) -> bool {
        cells_are_strictly_monotone(&self.cells)
    }
}

pub fn cells_are_staircase<'a>(cells: impl IntoIterator<Item = &'a Cell> + Copy) -> bool {
    for a in cells {
        for b in cells {
            if strictly_northeast(a, b) {
                return false;
            }
        }
    }
    true
}

pub fn cells_are_strictly_monotone<'a>(
    cells: impl IntoIterator<Item = &'a Cell> + Copy,
) -> bool {
    for a in cells {
        for b in cells {
            if weakly_northeast(a, b) {
                return false;
            }
        }
    }
    true
}

/// A partial permutation matrix in the ambient algebra: position pairs with
/// distinct rows, distinct columns, and `block(row) <= block(col)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardPisom {
    ambient: NestAlgebra,
    pairs: BTreeSet<(usize, usize)>,
}

impl StandardPisom {
    pub fn new(
        ambient: NestAlgebra,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let pairs: BTreeSet<(usize, usize)> = pairs.into_iter().collect();
        let mut rows = BTreeSet::new();
        let mut cols = BTreeSet::new();
        for &(r, c) in &pairs {
            let rb = ambient.block_of(r)?;
            let cb = ambient.block_of(c)?;
            if rb > cb {
                return Err(Error::NotInAlgebra { row: r, col: c });
            }
            if !rows.insert(r) || !cols.insert(c) {
                return Err(Error::DuplicatePosition);
            }
        }
        Ok(StandardPisom { ambient, pairs })
    }

    pub fn empty(ambient: NestAlgebra) -> Self {
        StandardPisom {
            ambient,
            pairs: BTreeSet::new(),
        }
    }

    /// The diagonal identity `1` of the ambient algebra.
    pub fn identity(ambient: NestAlgebra) -> Self {
        let pairs = (1..=ambient.total_rank()).map(|p| (p, p)).collect();
        StandardPisom { ambient, pairs }
    }

    pub fn ambient(&self) -> &NestAlgebra {
        &self.ambient
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    pub fn rank(&self) -> usize {
        self.pairs.len()
    }

    /// Row (final projection) positions.
    pub fn row_positions(&self) -> BTreeSet<usize> {
        self.pairs.iter().map(|&(r, _)| r).collect()
    }

    /// Column (initial projection) positions.
    pub fn col_positions(&self) -> BTreeSet<usize> {
        self.pairs.iter().map(|&(_, c)| c).collect()
    }

    /// The adjoint: pairs transposed.  Fails when the result leaves the
    /// ambient algebra.
    pub fn adjoint(&self) -> Result<StandardPisom> {
        StandardPisom::new(
            self.ambient.clone(),
            self.pairs.iter().map(|&(r, c)| (c, r)),
        )
    }

    /// Whether the transposed pair set would still lie in the algebra,
    /// i.e. the support is block diagonal.
    pub fn is_block_diagonal(&self) -> bool {
        self.pairs
            .iter()
            .all(|&(r, c)| self.ambient.block_of(r) == self.ambient.block_of(c))
    }

    /// Product of two partial permutations: `(r, c)` whenever `(r, m)` is in
    /// `self` and `(m, c)` in `rhs`.  Fails if the product leaves the algebra.
    pub fn multiply(&self, rhs: &StandardPisom) -> Result<StandardPisom> {
        let by_row: BTreeMap<usize, usize> = rhs.pairs.iter().map(|&(r, c)| (r, c)).collect();
        let pairs = self
            .pairs
            .iter()
            .filter_map(|&(r, m)| by_row.get(&m).map(|&c| (r, c)));
        StandardPisom::new(self.ambient.clone(), pairs)
    }

    /// The set of block cells `(block(r), block(c))` met by the pairs.
    pub fn block_support(&self) -> CellSet {
        let cells = self.pairs.iter().map(|&(r, c)| {
            Cell::new(
                self.ambient.block_of(r).expect("validated"),
                self.ambient.block_of(c).expect("validated"),
            )
        });
        CellSet::new(self.ambient.clone(), cells).expect("support within algebra")
    }

    /// Order conserving: staircase block support.
    pub fn is_oc(&self) -> bool {
        self.block_support().is_staircase()
    }

    /// Order preserving: strictly monotone block support.
    pub fn is_op(&self) -> bool {
        self.block_support().is_strictly_monotone()
    }

    /// The per-cell rank counts as a nonnegative group element.
    pub fn rank_distribution(&self) -> GElement {
        let mut entries: BTreeMap<Cell, i64> = BTreeMap::new();
        for &(r, c) in &self.pairs {
            let cell = Cell::new(
                self.ambient.block_of(r).expect("validated"),
                self.ambient.block_of(c).expect("validated"),
            );
            *entries.entry(cell).or_insert(0) += 1;
        }
        GElement {
            ambient: self.ambient.clone(),
            entries,
        }
    }
}

/// An element of the free abelian group on the upper cells of an ambient
/// algebra (the group `T_l(Z)`).  Entries may be negative; rank
/// distributions are the nonnegative elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GElement {
    ambient: NestAlgebra,
    entries: BTreeMap<Cell, i64>,
}

impl GElement {
    pub fn new(ambient: NestAlgebra, entries: impl IntoIterator<Item = (Cell, i64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (c, v) in entries {
            if !ambient.contains_cell(&c) {
                return Err(Error::NotInAlgebra {
                    row: c.row,
                    col: c.col,
                });
            }
            if v != 0 {
                *map.entry(c).or_insert(0) += v;
            }
        }
        map.retain(|_, v| *v != 0);
        Ok(GElement {
            ambient,
            entries: map,
        })
    }

    pub fn zero(ambient: NestAlgebra) -> Self {
        GElement {
            ambient,
            entries: BTreeMap::new(),
        }
    }

    pub fn ambient(&self) -> &NestAlgebra {
        &self.ambient
    }

    pub fn entries(&self) -> &BTreeMap<Cell, i64> {
        &self.entries
    }

    pub fn get(&self, cell: &Cell) -> i64 {
        self.entries.get(cell).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.values().all(|&v| v >= 0)
    }

    pub fn support(&self) -> CellSet {
        CellSet::new(self.ambient.clone(), self.entries.keys().copied())
            .expect("support within algebra")
    }

    /// Support contained in the diagonal cells.
    pub fn is_diagonal(&self) -> bool {
        self.entries.keys().all(Cell::is_diagonal)
    }

    /// Row sums per row atom (the final-projection K0 vector).
    pub fn pi_f(&self) -> Vec<i64> {
        let mut v = vec![0i64; self.ambient.num_atoms()];
        for (c, &x) in &self.entries {
            v[c.row - 1] += x;
        }
        v
    }

    /// Column sums per column atom (the initial-projection K0 vector).
    pub fn pi_i(&self) -> Vec<i64> {
        let mut v = vec![0i64; self.ambient.num_atoms()];
        for (c, &x) in &self.entries {
            v[c.col - 1] += x;
        }
        v
    }

    pub fn add(&self, rhs: &GElement) -> GElement {
        assert_eq!(self.ambient, rhs.ambient);
        let mut entries = self.entries.clone();
        for (c, v) in &rhs.entries {
            *entries.entry(*c).or_insert(0) += v;
        }
        entries.retain(|_, v| *v != 0);
        GElement {
            ambient: self.ambient.clone(),
            entries,
        }
    }

    pub fn scale(&self, k: i64) -> GElement {
        let mut entries = self.entries.clone();
        entries.values_mut().for_each(|v| *v *= k);
        entries.retain(|_, v| *v != 0);
        GElement {
            ambient: self.ambient.clone(),
            entries,
        }
    }

    /// Membership in the scale: nonnegative with both margins within the
    /// atom ranks.
    pub fn in_scale(&self) -> bool {
        if !self.is_nonnegative() {
            return false;
        }
        let ranks = self.ambient.atom_ranks();
        self.pi_f()
            .iter()
            .zip(ranks)
            .all(|(&s, &r)| s <= r as i64)
            && self
                .pi_i()
                .iter()
                .zip(ranks)
                .all(|(&s, &r)| s <= r as i64)
    }
}

/// Builds a canonical standard pisom with the given nonnegative rank
/// distribution, taking the lowest free positions in each atom first.
///
/// Cells are consumed in lexicographic order, so the rows used in atom `i`
/// and the columns used in atom `j` are always consecutive runs.
pub fn realize_distribution(g: &GElement) -> Result<StandardPisom> {
    if !g.is_nonnegative() {
        return Err(Error::MarginMismatch("negative entry".into()));
    }
    let a = g.ambient();
    let ranks = a.atom_ranks();
    for (vec, label) in [(g.pi_f(), "row"), (g.pi_i(), "column")] {
        for (atom, (&s, &r)) in vec.iter().zip(ranks).enumerate() {
            if s > r as i64 {
                return Err(Error::CapacityExceeded {
                    atom: atom + 1,
                    rank: r,
                    needed: s as u32,
                });
            }
            let _ = label;
        }
    }
    let mut next_row: Vec<usize> = (1..=a.num_atoms()).map(|i| a.atom_interval(i).start).collect();
    let mut next_col = next_row.clone();
    let mut pairs = Vec::new();
    for (cell, &count) in g.entries() {
        for _ in 0..count {
            let r = next_row[cell.row - 1];
            let c = next_col[cell.col - 1];
            next_row[cell.row - 1] += 1;
            next_col[cell.col - 1] += 1;
            pairs.push((r, c));
        }
    }
    StandardPisom::new(a.clone(), pairs)
}

/// All nonempty staircase cell sets whose per-block-row and per-block-column
/// cell counts fit within the atom ranks: exactly the supports realizable by
/// a regular partial isometry with rank at least one in every cell.
///
/// Output order is deterministic: by size, then lexicographically.
pub fn enumerate_feasible_staircase_supports(a: &NestAlgebra) -> Vec<CellSet> {
    let cells = a.cells();
    let l = a.num_atoms();
    let ranks = a.atom_ranks();
    let mut out: Vec<Vec<Cell>> = Vec::new();
    let mut chosen: Vec<Cell> = Vec::new();
    let mut row_count = vec![0u32; l];
    let mut col_count = vec![0u32; l];

    fn rec(
        idx: usize,
        cells: &[Cell],
        ranks: &[u32],
        chosen: &mut Vec<Cell>,
        row_count: &mut [u32],
        col_count: &mut [u32],
        out: &mut Vec<Vec<Cell>>,
    ) {
        if idx == cells.len() {
            if !chosen.is_empty() {
                out.push(chosen.clone());
            }
            return;
        }
        // skip cells[idx]
        rec(idx + 1, cells, ranks, chosen, row_count, col_count, out);
        // take cells[idx] when capacity and staircase permit
        let c = cells[idx];
        if row_count[c.row - 1] + 1 <= ranks[c.row - 1]
            && col_count[c.col - 1] + 1 <= ranks[c.col - 1]
            && chosen
                .iter()
                .all(|p| !strictly_northeast(p, &c) && !strictly_northeast(&c, p))
        {
            chosen.push(c);
            row_count[c.row - 1] += 1;
            col_count[c.col - 1] += 1;
            rec(idx + 1, cells, ranks, chosen, row_count, col_count, out);
            chosen.pop();
            row_count[c.row - 1] -= 1;
            col_count[c.col - 1] -= 1;
        }
    }

    rec(
        0,
        &cells,
        ranks,
        &mut chosen,
        &mut row_count,
        &mut col_count,
        &mut out,
    );
    out.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    out.into_iter()
        .map(|cells| CellSet::new(a.clone(), cells).expect("valid"))
        .collect()
}

/// All partial permutation matrices of the algebra, including the empty one.
/// Brute-force; intended for oracle tests on small algebras.
pub fn enumerate_all_pisoms(a: &NestAlgebra) -> Vec<StandardPisom> {
    let n = a.total_rank();
    let mut out = vec![StandardPisom::empty(a.clone())];
    // grow by deciding, for each row position in order, its image column or none
    fn rec(
        a: &NestAlgebra,
        row: usize,
        used_cols: &mut Vec<bool>,
        pairs: &mut Vec<(usize, usize)>,
        out: &mut Vec<StandardPisom>,
    ) {
        let n = a.total_rank();
        if row > n {
            if !pairs.is_empty() {
                out.push(StandardPisom::new(a.clone(), pairs.iter().copied()).expect("valid"));
            }
            return;
        }
        rec(a, row + 1, used_cols, pairs, out);
        let rb = a.block_of(row).expect("in range");
        for col in 1..=n {
            if !used_cols[col - 1] && a.block_of(col).expect("in range") >= rb {
                used_cols[col - 1] = true;
                pairs.push((row, col));
                rec(a, row + 1, used_cols, pairs, out);
                pairs.pop();
                used_cols[col - 1] = false;
            }
        }
    }
    let mut used = vec![false; n];
    let mut pairs = Vec::new();
    rec(a, 1, &mut used, &mut pairs, &mut out);
    out
}
