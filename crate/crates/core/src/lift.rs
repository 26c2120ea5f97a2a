//! Lifting invariant data back to embeddings.
//!
//! The central device is the staircase corner fact: in a staircase-supported
//! nonnegative matrix the cell (first nonzero row, first nonzero column) is
//! itself nonzero.  Peeling one unit from that corner in every cell image of
//! a margin-consistent homomorphism extracts one multiplicity-one summand
//! and preserves all margins, so the peel terminates in exactly μ rounds.

use std::collections::BTreeMap;

use crate::algebra::{Cell, NestAlgebra};
use crate::embedding::{from_matrix_unit_images, Embedding, GHom, MatrixUnitTable, SummandMap};
use crate::error::{Error, Result};
use crate::pisom::{GElement, StandardPisom};

/// Which order class the lifted embedding must land in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftMode {
    Loc,
    Op,
}

/// Lifts a cell-level group homomorphism to an embedding with `g_map` equal
/// to it, by corner peeling.
pub fn lift_ghom(gamma: &GHom, mode: LiftMode) -> Result<Embedding> {
    match mode {
        LiftMode::Loc => {
            if !gamma.is_cellwise_staircase() {
                return Err(Error::NotStaircase);
            }
        }
        LiftMode::Op => {
            if !gamma.is_cellwise_strictly_monotone() {
                return Err(Error::NotStrictlyMonotone);
            }
        }
    }
    let dom = gamma.domain().clone();
    let cod = gamma.codomain().clone();
    let l = dom.num_atoms();
    let mu = {
        let sums: Vec<i64> = (1..=l).map(|a| gamma.y(a).iter().sum()).collect();
        if sums.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::MarginMismatch(
                "margin columns have unequal sums".into(),
            ));
        }
        sums[0]
    };
    let mut x: BTreeMap<Cell, BTreeMap<Cell, i64>> = gamma
        .images()
        .iter()
        .map(|(c, g)| (*c, g.entries().clone()))
        .collect();
    let mut summands = Vec::with_capacity(mu as usize);
    for _ in 0..mu {
        // f(a) = first codomain atom with remaining diagonal mass
        let mut f = Vec::with_capacity(l);
        for a in 1..=l {
            let diag = &x[&Cell::new(a, a)];
            let atom = diag
                .iter()
                .find(|&(_, &v)| v > 0)
                .map(|(c, _)| c.row)
                .ok_or(Error::MarginMismatch("margin exhausted early".into()))?;
            f.push(atom);
        }
        // the corner entry must be present in every cell image
        for a in 1..=l {
            for b in a..=l {
                let corner = Cell::new(f[a - 1], f[b - 1]);
                let cell = Cell::new(a, b);
                let entry = x[&cell].get(&corner).copied().unwrap_or(0);
                if entry <= 0 {
                    return Err(Error::CornerMissing(corner.row, corner.col));
                }
                *x.get_mut(&cell).unwrap().get_mut(&corner).unwrap() -= 1;
            }
        }
        summands.push(SummandMap::new(&dom, &cod, &f)?);
    }
    if x.values().flat_map(|m| m.values()).any(|&v| v != 0) {
        return Err(Error::MarginMismatch("data left over after peeling".into()));
    }
    let phi = Embedding::new(dom, cod, summands)?;
    if &phi.g_map() != gamma {
        return Err(Error::MarginMismatch(
            "lift does not reproduce the input homomorphism".into(),
        ));
    }
    let flags = phi.classify_order_properties();
    match mode {
        LiftMode::Loc if !flags.loc => Err(Error::NotStaircase),
        LiftMode::Op if !flags.lop => Err(Error::NotStrictlyMonotone),
        _ => Ok(phi),
    }
}

/// The concrete partial-isometry lift: given a target rank distribution `x`,
/// partial isometries `vs` with a common final projection and rank
/// distributions `ys`, and prescribed product distributions `zs`, builds a
/// partial isometry `u` with distribution `x`, initial projection the
/// common final projection of the `vs`, and `rank_distribution(u * vs[k]) =
/// zs[k]` for every k.  The construction assigns a row atom to each final
/// projection position by backtracking over the remaining capacity of `x`
/// and the `zs`.
pub fn lemma_lift(
    x: &GElement,
    ys: &[GElement],
    zs: &[GElement],
    vs: &[StandardPisom],
) -> Result<StandardPisom> {
    let ambient = x.ambient().clone();
    if x.is_zero() {
        return Err(Error::DegenerateInput);
    }
    if ys.len() != vs.len() || zs.len() != vs.len() {
        return Err(Error::MarginMismatch("list lengths differ".into()));
    }
    for g in [x].into_iter().chain(ys).chain(zs) {
        if g.ambient() != &ambient {
            return Err(Error::DomainMismatch);
        }
        if !g.support().is_staircase() {
            return Err(Error::NotStaircase);
        }
        if !g.is_nonnegative() {
            return Err(Error::MarginMismatch("negative entry".into()));
        }
    }
    if !x.in_scale() {
        return Err(Error::MarginMismatch("distribution exceeds atom ranks".into()));
    }
    for k in 0..vs.len() {
        if x.pi_f() != zs[k].pi_f()
            || x.pi_i() != ys[k].pi_f()
            || ys[k].pi_i() != zs[k].pi_i()
        {
            return Err(Error::MarginMismatch(format!("margin chain broken at {k}")));
        }
        if vs[k].rank_distribution() != ys[k] {
            return Err(Error::MarginMismatch(format!(
                "vs[{k}] does not realize its distribution"
            )));
        }
    }
    let final_proj: Vec<usize> = if vs.is_empty() {
        // no product constraints: realize x on its canonical initial slots
        let mut cols = Vec::new();
        let mut next: Vec<usize> = (1..=ambient.num_atoms())
            .map(|a| ambient.atom_interval(a).start)
            .collect();
        for (cell, &count) in x.entries() {
            for _ in 0..count {
                cols.push(next[cell.col - 1]);
                next[cell.col - 1] += 1;
            }
        }
        cols.sort_unstable();
        cols
    } else {
        let f = vs[0].row_positions();
        for v in vs {
            if v.row_positions() != f {
                return Err(Error::MarginMismatch(
                    "final projections of vs differ".into(),
                ));
            }
        }
        f.into_iter().collect()
    };
    if final_proj.len() as i64 != x.pi_i().iter().sum::<i64>() {
        return Err(Error::MarginMismatch(
            "final projection rank does not match the distribution".into(),
        ));
    }
    // assign a row atom to each initial-projection position
    let col_map: Vec<BTreeMap<usize, usize>> = vs
        .iter()
        .map(|v| v.pairs().iter().map(|&(r, c)| (r, c)).collect())
        .collect();
    let mut xr: BTreeMap<Cell, i64> = x.entries().clone();
    let mut zr: Vec<BTreeMap<Cell, i64>> = zs.iter().map(|z| z.entries().clone()).collect();
    let mut alpha = vec![0usize; final_proj.len()];

    fn assign(
        idx: usize,
        final_proj: &[usize],
        ambient: &NestAlgebra,
        col_map: &[BTreeMap<usize, usize>],
        xr: &mut BTreeMap<Cell, i64>,
        zr: &mut [BTreeMap<Cell, i64>],
        alpha: &mut [usize],
    ) -> bool {
        if idx == final_proj.len() {
            return true;
        }
        let m = final_proj[idx];
        let mb = ambient.block_of(m).expect("in range");
        for a in 1..=mb {
            let xc = Cell::new(a, mb);
            if xr.get(&xc).copied().unwrap_or(0) <= 0 {
                continue;
            }
            let mut cells = Vec::with_capacity(col_map.len());
            let mut ok = true;
            for (k, cm) in col_map.iter().enumerate() {
                let c = cm[&m];
                let cb = ambient.block_of(c).expect("in range");
                let zc = Cell::new(a, cb);
                if zr[k].get(&zc).copied().unwrap_or(0) <= 0 {
                    ok = false;
                    break;
                }
                cells.push(zc);
            }
            if !ok {
                continue;
            }
            *xr.get_mut(&xc).unwrap() -= 1;
            for (k, zc) in cells.iter().enumerate() {
                *zr[k].get_mut(zc).unwrap() -= 1;
            }
            alpha[idx] = a;
            if assign(idx + 1, final_proj, ambient, col_map, xr, zr, alpha) {
                return true;
            }
            *xr.get_mut(&xc).unwrap() += 1;
            for (k, zc) in cells.iter().enumerate() {
                *zr[k].get_mut(zc).unwrap() += 1;
            }
        }
        false
    }

    if !assign(
        0,
        &final_proj,
        &ambient,
        &col_map,
        &mut xr,
        &mut zr,
        &mut alpha,
    ) {
        return Err(Error::CornerMissing(0, 0));
    }
    // concrete rows: lowest free position of the assigned atom first
    let mut next: Vec<usize> = (1..=ambient.num_atoms())
        .map(|a| ambient.atom_interval(a).start)
        .collect();
    let mut pairs = Vec::with_capacity(final_proj.len());
    for (idx, &m) in final_proj.iter().enumerate() {
        let a = alpha[idx];
        pairs.push((next[a - 1], m));
        next[a - 1] += 1;
    }
    let u = StandardPisom::new(ambient, pairs)?;
    // self-validation of the postconditions
    if &u.rank_distribution() != x {
        return Err(Error::MarginMismatch("constructed u has wrong distribution".into()));
    }
    for (k, v) in vs.iter().enumerate() {
        let prod = u.multiply(v)?;
        if prod.rank_distribution() != zs[k] {
            return Err(Error::MarginMismatch(format!(
                "product with vs[{k}] has wrong distribution"
            )));
        }
    }
    Ok(u)
}

/// Lifts an order preserving homomorphism over a triangular domain by
/// building the diagonal projections and superdiagonal partial isometries
/// directly and decoding the resulting matrix-unit table.
pub fn lift_op_chain(gamma: &GHom) -> Result<Embedding> {
    let dom = gamma.domain().clone();
    let cod = gamma.codomain().clone();
    if !dom.is_triangular() {
        return Err(Error::NotTriangularDomain);
    }
    if !gamma.is_cellwise_strictly_monotone() {
        return Err(Error::NotOrderPreserving);
    }
    let n = dom.num_atoms();
    // diagonal projections: lowest free positions per codomain atom
    let mut next: Vec<usize> = (1..=cod.num_atoms())
        .map(|a| cod.atom_interval(a).start)
        .collect();
    let mut proj: Vec<Vec<usize>> = Vec::with_capacity(n);
    for a in 1..=n {
        let y = gamma.y(a);
        let mut positions = Vec::new();
        for (atom0, &count) in y.iter().enumerate() {
            for _ in 0..count {
                positions.push(next[atom0]);
                next[atom0] += 1;
            }
        }
        proj.push(positions);
    }
    // superdiagonal images: strict monotonicity makes the matching per cell
    // canonical (each atom of y_a occurs in exactly one support cell)
    let mut superdiagonal = Vec::with_capacity(n.saturating_sub(1));
    for a in 1..n {
        let xg = gamma.image_of_cell(&Cell::new(a, a + 1));
        let mut rows: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &q in &proj[a - 1] {
            rows.entry(cod.block_of(q)?).or_default().push(q);
        }
        let mut cols: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &q in &proj[a] {
            cols.entry(cod.block_of(q)?).or_default().push(q);
        }
        let mut pairs = Vec::new();
        for (cell, &count) in xg.entries() {
            let rs = rows.get_mut(&cell.row).ok_or(Error::MarginMismatch(
                "support atom missing from projection".into(),
            ))?;
            let cs = cols.get_mut(&cell.col).ok_or(Error::MarginMismatch(
                "support atom missing from projection".into(),
            ))?;
            for _ in 0..count {
                pairs.push((rs.remove(0), cs.remove(0)));
            }
        }
        superdiagonal.push(StandardPisom::new(cod.clone(), pairs)?);
    }
    let table = MatrixUnitTable {
        domain: dom,
        codomain: cod,
        diagonal: proj.into_iter().map(|p| p.into_iter().collect()).collect(),
        superdiagonal,
        extra: BTreeMap::new(),
    };
    let phi = from_matrix_unit_images(&table)?;
    if phi.g_map() != *gamma {
        return Err(Error::MarginMismatch(
            "chain lift does not reproduce the input homomorphism".into(),
        ));
    }
    Ok(phi)
}
