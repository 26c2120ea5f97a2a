//! Star-extendible regular embeddings between nest algebras.
//!
//! An embedding is stored as a multiset of multiplicity-one summands, each a
//! weakly monotone atom map.  A deterministic slot assignment turns the
//! multiset into a concrete algebra injection: summands are sorted
//! lexicographically, and within each codomain atom slots are filled in
//! order of (summand, domain position).  All invariants of the theory (order
//! flags, K0 data, dimension distribution maps) are computed from the atom
//! maps.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{Cell, NestAlgebra};
use crate::error::{Error, Result};
use crate::pisom::{
    cells_are_staircase, cells_are_strictly_monotone, enumerate_feasible_staircase_supports,
    CellSet, GElement, StandardPisom,
};

/// A multiplicity-one summand: a weakly monotone map from domain atoms to
/// codomain atoms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SummandMap {
    f: Vec<usize>,
}

impl SummandMap {
    pub fn new(domain: &NestAlgebra, codomain: &NestAlgebra, f: &[usize]) -> Result<Self> {
        if f.len() != domain.num_atoms() {
            return Err(Error::DomainMismatch);
        }
        for &a in f {
            if a == 0 || a > codomain.num_atoms() {
                return Err(Error::PositionOutOfRange {
                    position: a,
                    total: codomain.num_atoms(),
                });
            }
        }
        if f.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::NotMonotone);
        }
        Ok(SummandMap { f: f.to_vec() })
    }

    /// Image atom of domain atom `a`.
    pub fn image(&self, a: usize) -> usize {
        self.f[a - 1]
    }

    pub fn atoms(&self) -> &[usize] {
        &self.f
    }

    /// The hull interval [min image, max image] of the diagonal support.
    pub fn hull(&self) -> (usize, usize) {
        (*self.f.first().unwrap(), *self.f.last().unwrap())
    }
}

/// A regular star-extendible embedding: a sorted multiset of summands plus
/// the canonical slot assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    domain: NestAlgebra,
    codomain: NestAlgebra,
    summands: Vec<SummandMap>,
    // slots[s][p-1] = codomain position of domain position p under summand s
    slots: Vec<Vec<usize>>,
}

impl Embedding {
    pub fn new(
        domain: NestAlgebra,
        codomain: NestAlgebra,
        summands: impl IntoIterator<Item = SummandMap>,
    ) -> Result<Self> {
        let mut summands: Vec<SummandMap> = summands.into_iter().collect();
        if summands.is_empty() {
            return Err(Error::EmptySummandList);
        }
        summands.sort();
        for s in &summands {
            // revalidate against the actual pair of algebras
            SummandMap::new(&domain, &codomain, s.atoms())?;
        }
        // capacity per codomain atom, then the canonical slot assignment
        let l2 = codomain.num_atoms();
        let mut needed = vec![0u32; l2];
        for s in &summands {
            for a in 1..=domain.num_atoms() {
                needed[s.image(a) - 1] += domain.rank_of_atom(a);
            }
        }
        for atom in 1..=l2 {
            if needed[atom - 1] > codomain.rank_of_atom(atom) {
                return Err(Error::CapacityExceeded {
                    atom,
                    rank: codomain.rank_of_atom(atom),
                    needed: needed[atom - 1],
                });
            }
        }
        let mut next: Vec<usize> = (1..=l2).map(|a| codomain.atom_interval(a).start).collect();
        let mut slots = Vec::with_capacity(summands.len());
        for s in &summands {
            let mut row = Vec::with_capacity(domain.total_rank());
            for p in 1..=domain.total_rank() {
                let target = s.image(domain.block_of(p)?);
                row.push(next[target - 1]);
                next[target - 1] += 1;
            }
            slots.push(row);
        }
        Ok(Embedding {
            domain,
            codomain,
            summands,
            slots,
        })
    }

    /// Convenience constructor from raw atom lists.
    pub fn from_atom_lists(
        domain: NestAlgebra,
        codomain: NestAlgebra,
        lists: &[&[usize]],
    ) -> Result<Self> {
        let summands: Result<Vec<_>> = lists
            .iter()
            .map(|f| SummandMap::new(&domain, &codomain, f))
            .collect();
        Embedding::new(domain, codomain, summands?)
    }

    /// The identity embedding of an algebra.
    pub fn identity(a: NestAlgebra) -> Self {
        let f: Vec<usize> = (1..=a.num_atoms()).collect();
        let s = SummandMap { f };
        Embedding::new(a.clone(), a, [s]).expect("identity is valid")
    }

    pub fn domain(&self) -> &NestAlgebra {
        &self.domain
    }

    pub fn codomain(&self) -> &NestAlgebra {
        &self.codomain
    }

    pub fn summands(&self) -> &[SummandMap] {
        &self.summands
    }

    /// Multiplicity μ = number of summands.
    pub fn multiplicity(&self) -> usize {
        self.summands.len()
    }

    /// Codomain position of domain position `p` under summand `s` (0-based
    /// summand index).
    pub fn slot(&self, s: usize, p: usize) -> usize {
        self.slots[s][p - 1]
    }

    /// Weighted row sums of K0 equal the codomain ranks.
    pub fn is_unital(&self) -> bool {
        let k = self.k0_matrix();
        let sums = k.weighted_row_sums();
        sums.iter()
            .zip(self.codomain.atom_ranks())
            .all(|(&s, &r)| s == r as i64)
    }

    /// Image of a standard pisom: the union over summands of the
    /// slot-assigned images of each pair.
    pub fn apply(&self, v: &StandardPisom) -> Result<StandardPisom> {
        if v.ambient() != &self.domain {
            return Err(Error::NotInDomain);
        }
        let mut pairs = Vec::new();
        for s in 0..self.summands.len() {
            for &(r, c) in v.pairs() {
                pairs.push((self.slots[s][r - 1], self.slots[s][c - 1]));
            }
        }
        StandardPisom::new(self.codomain.clone(), pairs)
    }

    /// Image of the domain matrix unit e_{rc} (requires block(r) <= block(c)).
    pub fn unit_image(&self, r: usize, c: usize) -> Result<StandardPisom> {
        let rb = self.domain.block_of(r)?;
        let cb = self.domain.block_of(c)?;
        if rb > cb {
            return Err(Error::NotInDomain);
        }
        let pairs = (0..self.summands.len()).map(|s| (self.slots[s][r - 1], self.slots[s][c - 1]));
        StandardPisom::new(self.codomain.clone(), pairs)
    }

    /// K0 matrix in rank-one-basis normalization: n_{A,a} = #{s : f_s(a) = A}.
    pub fn k0_matrix(&self) -> K0Matrix {
        let rows = self.codomain.num_atoms();
        let cols = self.domain.num_atoms();
        let mut n = vec![vec![0i64; cols]; rows];
        for s in &self.summands {
            for a in 1..=cols {
                n[s.image(a) - 1][a - 1] += 1;
            }
        }
        K0Matrix {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            n,
        }
    }

    /// Image cell multiset of a rank-one at domain cell (a,b): one codomain
    /// cell per summand, with multiplicity.
    pub fn image_cells(&self, cell: &Cell) -> Vec<Cell> {
        self.summands
            .iter()
            .map(|s| Cell::new(s.image(cell.row), s.image(cell.col)))
            .collect()
    }

    /// The induced π-respecting group homomorphism on cell lattices.
    pub fn g_map(&self) -> GHom {
        let mut x = BTreeMap::new();
        for cell in self.domain.cells() {
            let mut entries: BTreeMap<Cell, i64> = BTreeMap::new();
            for c in self.image_cells(&cell) {
                *entries.entry(c).or_insert(0) += 1;
            }
            let g = GElement::new(self.codomain.clone(), entries).expect("cells in codomain");
            x.insert(cell, g);
        }
        GHom::new(self.domain.clone(), self.codomain.clone(), x).expect("embedding data consistent")
    }

    /// Codomain cells where the embedding's image has a nonzero entry.
    pub fn bimodule_cells(&self) -> CellSet {
        let mut cells = BTreeSet::new();
        for cell in self.domain.cells() {
            cells.extend(self.image_cells(&cell));
        }
        CellSet::new(self.codomain.clone(), cells).expect("cells in codomain")
    }

    /// The four order-property flags (regularity is automatic for this
    /// representation).
    pub fn classify_order_properties(&self) -> OrderFlags {
        let loc = self
            .domain
            .cells()
            .iter()
            .all(|c| cells_are_staircase(&self.dedup_image(c)));
        let lop = self
            .domain
            .cells()
            .iter()
            .all(|c| cells_are_strictly_monotone(&self.dedup_image(c)));
        let mut oc = true;
        let mut op = true;
        if loc || lop {
            for s in enumerate_feasible_staircase_supports(&self.domain) {
                let image = self.dedup_image_of_support(&s);
                if oc && !cells_are_staircase(&image) {
                    oc = false;
                }
                if op && s.is_strictly_monotone() && !cells_are_strictly_monotone(&image) {
                    op = false;
                }
                if !oc && !op {
                    break;
                }
            }
        }
        oc = oc && loc;
        op = op && lop;
        OrderFlags {
            regular: true,
            loc,
            lop,
            oc,
            op,
        }
    }

    fn dedup_image(&self, cell: &Cell) -> Vec<Cell> {
        let set: BTreeSet<Cell> = self.image_cells(cell).into_iter().collect();
        set.into_iter().collect()
    }

    fn dedup_image_of_support(&self, s: &CellSet) -> Vec<Cell> {
        let mut set = BTreeSet::new();
        for c in s.cells() {
            set.extend(self.image_cells(c));
        }
        set.into_iter().collect()
    }

    /// A witness for an order-conservation failure: a feasible staircase
    /// domain support whose image is not staircase, with the image cells.
    pub fn oc_failure_witness(&self) -> Option<(Vec<Cell>, Vec<Cell>)> {
        for s in enumerate_feasible_staircase_supports(&self.domain) {
            let image = self.dedup_image_of_support(&s);
            if !cells_are_staircase(&image) {
                return Some((s.cells().iter().copied().collect(), image));
            }
        }
        None
    }

    /// First domain cell whose rank-one image cell-set is not staircase.
    pub fn loc_failure_cell(&self) -> Option<(Cell, Vec<Cell>)> {
        self.domain
            .cells()
            .into_iter()
            .map(|c| (c, self.dedup_image(&c)))
            .find(|(_, img)| !cells_are_staircase(img))
    }

    /// First domain cell whose rank-one image cell-set is not strictly
    /// monotone.
    pub fn lop_failure_cell(&self) -> Option<(Cell, Vec<Cell>)> {
        self.domain
            .cells()
            .into_iter()
            .map(|c| (c, self.dedup_image(&c)))
            .find(|(_, img)| !cells_are_strictly_monotone(img))
    }

    /// Composition `self ∘ inner` (apply `inner` first).
    pub fn compose(&self, inner: &Embedding) -> Result<Embedding> {
        if inner.codomain != self.domain {
            return Err(Error::DomainMismatch);
        }
        let mut summands = Vec::new();
        for g in &self.summands {
            for f in &inner.summands {
                let composed: Vec<usize> = f.atoms().iter().map(|&a| g.image(a)).collect();
                summands.push(SummandMap { f: composed });
            }
        }
        Embedding::new(inner.domain.clone(), self.codomain.clone(), summands)
    }
}

/// The order-property flags of an embedding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderFlags {
    pub regular: bool,
    pub loc: bool,
    pub lop: bool,
    pub oc: bool,
    pub op: bool,
}

/// The induced map on projection classes, stored in the rank-one basis so
/// that matrices compose multiplicatively.  The display form weights column
/// `a` by the domain atom rank `r_a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct K0Matrix {
    domain: NestAlgebra,
    codomain: NestAlgebra,
    // n[A-1][a-1], rows indexed by codomain atoms, columns by domain atoms
    n: Vec<Vec<i64>>,
}

impl K0Matrix {
    pub fn new(domain: NestAlgebra, codomain: NestAlgebra, n: Vec<Vec<i64>>) -> Result<Self> {
        if n.len() != codomain.num_atoms()
            || n.iter().any(|row| row.len() != domain.num_atoms())
        {
            return Err(Error::DomainMismatch);
        }
        Ok(K0Matrix {
            domain,
            codomain,
            n,
        })
    }

    pub fn domain(&self) -> &NestAlgebra {
        &self.domain
    }

    pub fn codomain(&self) -> &NestAlgebra {
        &self.codomain
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.n
    }

    pub fn entry(&self, codomain_atom: usize, domain_atom: usize) -> i64 {
        self.n[codomain_atom - 1][domain_atom - 1]
    }

    /// The paper-style display form r_a * n_{A,a}.
    pub fn display_form(&self) -> Vec<Vec<i64>> {
        self.n
            .iter()
            .map(|row| {
                row.iter()
                    .zip(self.domain.atom_ranks())
                    .map(|(&v, &r)| v * r as i64)
                    .collect()
            })
            .collect()
    }

    /// Column sums; all equal to μ for a K0 matrix of an embedding.
    pub fn column_sums(&self) -> Vec<i64> {
        let mut sums = vec![0i64; self.domain.num_atoms()];
        for row in &self.n {
            for (s, &v) in sums.iter_mut().zip(row) {
                *s += v;
            }
        }
        sums
    }

    /// Weighted row sums Σ_a n_{A,a} r_a.
    pub fn weighted_row_sums(&self) -> Vec<i64> {
        self.n
            .iter()
            .map(|row| {
                row.iter()
                    .zip(self.domain.atom_ranks())
                    .map(|(&v, &r)| v * r as i64)
                    .sum()
            })
            .collect()
    }

    /// Matrix product `self * rhs` (rank-one-basis normalization composes
    /// multiplicatively).
    pub fn multiply(&self, rhs: &K0Matrix) -> Result<K0Matrix> {
        if rhs.codomain != self.domain {
            return Err(Error::DomainMismatch);
        }
        let rows = self.codomain.num_atoms();
        let mid = self.domain.num_atoms();
        let cols = rhs.domain.num_atoms();
        let mut n = vec![vec![0i64; cols]; rows];
        for i in 0..rows {
            for k in 0..mid {
                if self.n[i][k] == 0 {
                    continue;
                }
                for j in 0..cols {
                    n[i][j] += self.n[i][k] * rhs.n[k][j];
                }
            }
        }
        Ok(K0Matrix {
            domain: rhs.domain.clone(),
            codomain: self.codomain.clone(),
            n,
        })
    }
}

/// A π-respecting group homomorphism given on the cell generators: one
/// nonnegative codomain element per domain cell, with consistent margins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GHom {
    domain: NestAlgebra,
    codomain: NestAlgebra,
    x: BTreeMap<Cell, GElement>,
}

impl GHom {
    /// Validates the margin and scale invariants: π_f(X(a,b)) depends only
    /// on a, π_i(X(a,b)) only on b, X(a,a) is diagonal with diagonal y_a,
    /// and Σ_a r_a y_a fits within the codomain ranks.
    pub fn new(
        domain: NestAlgebra,
        codomain: NestAlgebra,
        x: BTreeMap<Cell, GElement>,
    ) -> Result<Self> {
        let cells = domain.cells();
        if x.len() != cells.len() || cells.iter().any(|c| !x.contains_key(c)) {
            return Err(Error::MarginMismatch(
                "one image element required per domain cell".into(),
            ));
        }
        for (c, g) in &x {
            if g.ambient() != &codomain {
                return Err(Error::DomainMismatch);
            }
            if !g.is_nonnegative() {
                return Err(Error::MarginMismatch(format!(
                    "negative entry in image of cell ({},{})",
                    c.row, c.col
                )));
            }
        }
        let l = domain.num_atoms();
        let y: Vec<Vec<i64>> = (1..=l)
            .map(|a| x[&Cell::new(a, a)].pi_f())
            .collect();
        for a in 1..=l {
            let diag = &x[&Cell::new(a, a)];
            if !diag.is_diagonal() {
                return Err(Error::MarginMismatch(format!(
                    "image of diagonal cell ({a},{a}) is not diagonal"
                )));
            }
        }
        for (c, g) in &x {
            if g.pi_f() != y[c.row - 1] || g.pi_i() != y[c.col - 1] {
                return Err(Error::MarginMismatch(format!(
                    "margins of cell ({},{}) disagree with the diagonal data",
                    c.row, c.col
                )));
            }
        }
        let mut total = vec![0i64; codomain.num_atoms()];
        for a in 1..=l {
            let r = domain.rank_of_atom(a) as i64;
            for (t, &v) in total.iter_mut().zip(&y[a - 1]) {
                *t += r * v;
            }
        }
        for (atom, (&t, &r)) in total.iter().zip(codomain.atom_ranks()).enumerate() {
            if t > r as i64 {
                return Err(Error::CapacityExceeded {
                    atom: atom + 1,
                    rank: r,
                    needed: t as u32,
                });
            }
        }
        Ok(GHom {
            domain,
            codomain,
            x,
        })
    }

    pub fn domain(&self) -> &NestAlgebra {
        &self.domain
    }

    pub fn codomain(&self) -> &NestAlgebra {
        &self.codomain
    }

    pub fn image_of_cell(&self, c: &Cell) -> &GElement {
        &self.x[c]
    }

    pub fn images(&self) -> &BTreeMap<Cell, GElement> {
        &self.x
    }

    /// The margin vector y_a (π_f of any X(a,b)).
    pub fn y(&self, a: usize) -> Vec<i64> {
        self.x[&Cell::new(a, a)].pi_f()
    }

    /// The K0 matrix read off the margins: entry (A,a) = y_a[A].
    pub fn k0_matrix(&self) -> K0Matrix {
        let n = (1..=self.codomain.num_atoms())
            .map(|aa| {
                (1..=self.domain.num_atoms())
                    .map(|a| self.y(a)[aa - 1])
                    .collect()
            })
            .collect();
        K0Matrix {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            n,
        }
    }

    /// Linear extension to arbitrary group elements of the domain.
    pub fn apply(&self, g: &GElement) -> Result<GElement> {
        if g.ambient() != &self.domain {
            return Err(Error::DomainMismatch);
        }
        let mut out = GElement::zero(self.codomain.clone());
        for (c, &v) in g.entries() {
            out = out.add(&self.x[c].scale(v));
        }
        Ok(out)
    }

    /// Composition `self ∘ inner`.
    pub fn compose(&self, inner: &GHom) -> Result<GHom> {
        if inner.codomain != self.domain {
            return Err(Error::DomainMismatch);
        }
        let mut x = BTreeMap::new();
        for (c, g) in &inner.x {
            x.insert(*c, self.apply(g)?);
        }
        GHom::new(inner.domain.clone(), self.codomain.clone(), x)
    }

    /// Every cell image has staircase support.
    pub fn is_cellwise_staircase(&self) -> bool {
        self.x.values().all(|g| g.support().is_staircase())
    }

    /// Every cell image has strictly monotone support.
    pub fn is_cellwise_strictly_monotone(&self) -> bool {
        self.x.values().all(|g| g.support().is_strictly_monotone())
    }
}

/// Raw matrix-unit image data for a star homomorphism: diagonal projections
/// as codomain position sets, superdiagonal unit images as pisoms, and
/// optionally further unit images to cross-check against products.
#[derive(Debug, Clone)]
pub struct MatrixUnitTable {
    pub domain: NestAlgebra,
    pub codomain: NestAlgebra,
    /// `diagonal[p-1]` = image of e_{pp}, one entry per domain position.
    pub diagonal: Vec<BTreeSet<usize>>,
    /// `superdiagonal[p-1]` = image of e_{p,p+1}, for p = 1..n-1.
    pub superdiagonal: Vec<StandardPisom>,
    /// Optional extra unit images keyed by (row, col) domain positions.
    pub extra: BTreeMap<(usize, usize), StandardPisom>,
}

/// Validates a matrix-unit table as a star-extendible homomorphism and
/// decomposes it into multiplicity-one summands by orbit following: each
/// position in the image of e_{11} tracks one summand through the
/// superdiagonal images.
pub fn from_matrix_unit_images(table: &MatrixUnitTable) -> Result<Embedding> {
    let n = table.domain.total_rank();
    if table.diagonal.len() != n || table.superdiagonal.len() + 1 != n {
        return Err(Error::RelationViolation(
            "wrong number of generating unit images".into(),
        ));
    }
    let total2 = table.codomain.total_rank();
    let mu = table.diagonal[0].len();
    if mu == 0 {
        return Err(Error::EmptySummandList);
    }
    let mut seen = vec![false; total2];
    for d in &table.diagonal {
        if d.len() != mu {
            return Err(Error::RelationViolation(
                "diagonal projections have unequal ranks".into(),
            ));
        }
        for &q in d {
            if q == 0 || q > total2 {
                return Err(Error::NotInCodomainAlgebra(format!(
                    "position {q} outside the codomain"
                )));
            }
            if seen[q - 1] {
                return Err(Error::RelationViolation(
                    "diagonal projections are not orthogonal".into(),
                ));
            }
            seen[q - 1] = true;
        }
    }
    for (p, v) in table.superdiagonal.iter().enumerate() {
        if v.ambient() != &table.codomain {
            return Err(Error::NotInCodomainAlgebra(format!(
                "image of unit ({},{})",
                p + 1,
                p + 2
            )));
        }
        if v.row_positions() != table.diagonal[p] || v.col_positions() != table.diagonal[p + 1] {
            return Err(Error::RelationViolation(format!(
                "unit ({},{}) does not match the adjacent diagonal projections",
                p + 1,
                p + 2
            )));
        }
    }
    let orbits = table_orbits(table)?;
    // every domain matrix unit must land inside the codomain algebra
    for track in &orbits {
        for r in 1..=n {
            for c in 1..=n {
                let rb = table.domain.block_of(r)?;
                let cb = table.domain.block_of(c)?;
                if rb > cb {
                    continue;
                }
                let ib = table.codomain.block_of(track[r - 1])?;
                let jb = table.codomain.block_of(track[c - 1])?;
                if ib > jb {
                    return Err(Error::NotInCodomainAlgebra(format!(
                        "image of unit ({r},{c}) falls below the block diagonal"
                    )));
                }
            }
        }
    }
    // extra units must equal the superdiagonal products (or transposes for
    // within-atom lower units)
    for (&(r, c), given) in &table.extra {
        if r == 0 || r > n || c == 0 || c > n {
            return Err(Error::PositionOutOfRange {
                position: r.max(c),
                total: n,
            });
        }
        let rb = table.domain.block_of(r)?;
        let cb = table.domain.block_of(c)?;
        if rb > cb {
            return Err(Error::NotInDomain);
        }
        let expected: BTreeSet<(usize, usize)> = orbits
            .iter()
            .map(|track| (track[r - 1], track[c - 1]))
            .collect();
        if given.pairs() != &expected {
            return Err(Error::RelationViolation(format!(
                "image of unit ({r},{c}) disagrees with the generating products"
            )));
        }
    }
    // atom maps: orbits stay in a single codomain atom across each domain
    // atom (forced by the within-atom lower units, already checked above)
    let mut summands = Vec::with_capacity(mu);
    for track in &orbits {
        let mut f = Vec::with_capacity(table.domain.num_atoms());
        for a in 1..=table.domain.num_atoms() {
            let iv = table.domain.atom_interval(a);
            let start = iv.start;
            let atom = table.codomain.block_of(track[start - 1])?;
            for p in iv {
                if table.codomain.block_of(track[p - 1])? != atom {
                    return Err(Error::IrregularImage);
                }
            }
            f.push(atom);
        }
        summands.push(SummandMap::new(&table.domain, &table.codomain, &f)?);
    }
    Embedding::new(table.domain.clone(), table.codomain.clone(), summands)
}

/// Follows each position in the image of e_{11} through the superdiagonal
/// unit images: `result[k][p-1]` is the image position of domain position
/// `p` on the k-th orbit.
pub fn table_orbits(table: &MatrixUnitTable) -> Result<Vec<Vec<usize>>> {
    let mut orbits = Vec::with_capacity(table.diagonal[0].len());
    for &q0 in &table.diagonal[0] {
        let mut track = vec![q0];
        let mut q = q0;
        for v in &table.superdiagonal {
            let next = v
                .pairs()
                .iter()
                .find(|&&(r, _)| r == q)
                .map(|&(_, c)| c)
                .ok_or_else(|| Error::RelationViolation("broken orbit".into()))?;
            track.push(next);
            q = next;
        }
        orbits.push(track);
    }
    Ok(orbits)
}

/// The canonical matrix-unit table of an embedding (diagonals plus
/// superdiagonals from the slot assignment).
pub fn to_matrix_unit_table(phi: &Embedding) -> MatrixUnitTable {
    let n = phi.domain().total_rank();
    let diagonal = (1..=n)
        .map(|p| {
            (0..phi.multiplicity())
                .map(|s| phi.slot(s, p))
                .collect::<BTreeSet<usize>>()
        })
        .collect();
    let superdiagonal = (1..n)
        .map(|p| {
            StandardPisom::new(
                phi.codomain().clone(),
                (0..phi.multiplicity()).map(|s| (phi.slot(s, p), phi.slot(s, p + 1))),
            )
            .expect("canonical images are valid")
        })
        .collect();
    MatrixUnitTable {
        domain: phi.domain().clone(),
        codomain: phi.codomain().clone(),
        diagonal,
        superdiagonal,
        extra: BTreeMap::new(),
    }
}

/// All weakly monotone maps {1..n} -> {1..m}; test helper shared by the
/// exhaustive suites.
#[cfg(test)]
pub(crate) fn monotone_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, m: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for a in lo..=m {
            cur.push(a);
            rec(n, m, a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, m, 1, &mut Vec::new(), &mut out);
    out
}
