//! Ordered-sum decompositions and the classification of order-irreducible
//! order conserving embeddings into refinement-type and T2-degenerate
//! pieces.

use crate::embedding::{Embedding, SummandMap};
use crate::error::{Error, Result};

/// An ordered-sum decomposition: the summand multiset partitioned into
/// order-irreducible groups occupying weakly increasing diagonal regions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedDecomposition {
    groups: Vec<Embedding>,
    hulls: Vec<(usize, usize)>,
}

impl OrderedDecomposition {
    pub fn groups(&self) -> &[Embedding] {
        &self.groups
    }

    /// Hull interval [min image atom, max image atom] of each group.
    pub fn hulls(&self) -> &[(usize, usize)] {
        &self.hulls
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.multiplicity()).collect()
    }
}

/// The classification of one order-irreducible group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupType {
    RefinementType,
    T2Degenerate,
    Both,
    Neither,
}

/// Two hull intervals can be ordered (one entirely at or before the other)
/// exactly when they do not conflict.
fn conflicts(a: (usize, usize), b: (usize, usize)) -> bool {
    !(a.1 <= b.0 || b.1 <= a.0)
}

/// Groups the summands into connected components of the conflict graph on
/// hull intervals and orders the components; the result is the unique
/// maximal ordered-sum decomposition, with equal-hull singleton components
/// ordered lexicographically.
pub fn ordered_decomposition(phi: &Embedding) -> OrderedDecomposition {
    let summands = phi.summands();
    let n = summands.len();
    let hull: Vec<(usize, usize)> = summands.iter().map(SummandMap::hull).collect();
    let mut comp: Vec<usize> = (0..n).collect();
    // union-find by repeated relabeling (n is tiny)
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if conflicts(hull[i], hull[j]) && comp[i] != comp[j] {
                    let m = comp[i].min(comp[j]);
                    comp[i] = m;
                    comp[j] = m;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut by_comp: Vec<(usize, Vec<SummandMap>)> = Vec::new();
    for root in 0..n {
        let members: Vec<SummandMap> = (0..n)
            .filter(|&i| comp[i] == root)
            .map(|i| summands[i].clone())
            .collect();
        if !members.is_empty() {
            by_comp.push((root, members));
        }
    }
    let mut groups: Vec<(Vec<SummandMap>, (usize, usize))> = by_comp
        .into_iter()
        .map(|(_, members)| {
            let lo = members.iter().map(|s| s.hull().0).min().unwrap();
            let hi = members.iter().map(|s| s.hull().1).max().unwrap();
            (members, (lo, hi))
        })
        .collect();
    groups.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    let hulls = groups.iter().map(|g| g.1).collect();
    let groups = groups
        .into_iter()
        .map(|(members, _)| {
            Embedding::new(phi.domain().clone(), phi.codomain().clone(), members)
                .expect("sub-multisets stay valid")
        })
        .collect();
    OrderedDecomposition { groups, hulls }
}

/// Decides whether the embedding is of refinement type; on success returns
/// the witness image slot sets per domain position (in a codomain ordering
/// that separates them strictly).
///
/// Interleaving is decided by a single frontier scan: positions within one
/// domain atom consume identical codomain-atom multisets, so the only
/// freedom — within-atom orderings on both sides — never changes the
/// consumption sequence.  Each domain position takes the next slot in every
/// summand's target atom; the embedding is of refinement type iff each
/// position's consumed slots lie strictly after the previous position's in
/// the (atom, slot index) order, and the embedding is locally order
/// conserving.
pub fn is_refinement_type(phi: &Embedding) -> (bool, Option<Vec<Vec<usize>>>) {
    if !phi.classify_order_properties().loc {
        return (false, None);
    }
    let dom = phi.domain();
    let cod = phi.codomain();
    let l2 = cod.num_atoms();
    let mut consumed = vec![0usize; l2];
    let mut prev_max: Option<(usize, usize)> = None;
    let mut witness: Vec<Vec<usize>> = Vec::with_capacity(dom.total_rank());
    for p in 1..=dom.total_rank() {
        let a = dom.block_of(p).expect("in range");
        let mut taken: Vec<(usize, usize)> = Vec::with_capacity(phi.multiplicity());
        for s in phi.summands() {
            let target = s.image(a);
            consumed[target - 1] += 1;
            taken.push((target, consumed[target - 1]));
        }
        taken.sort();
        if let Some(m) = prev_max {
            if taken[0] <= m {
                return (false, None);
            }
        }
        prev_max = Some(*taken.last().unwrap());
        witness.push(
            taken
                .iter()
                .map(|&(atom, idx)| cod.atom_interval(atom).start + idx - 1)
                .collect(),
        );
    }
    (true, Some(witness))
}

/// The codomain atoms met by the image of the identity.
pub fn touched_atoms(phi: &Embedding) -> Vec<usize> {
    let mut atoms: Vec<usize> = phi
        .summands()
        .iter()
        .flat_map(|s| s.atoms().iter().copied())
        .collect();
    atoms.sort_unstable();
    atoms.dedup();
    atoms
}

/// At most two codomain atoms meet the image.
pub fn is_t2_degenerate(phi: &Embedding) -> bool {
    touched_atoms(phi).len() <= 2
}

/// The multiplicity signature (r_1, ..., r_{p+1}) of a T2-degenerate
/// embedding with p domain atoms: r_k counts the summands that place the
/// last k-1 domain atoms into the second touched codomain atom.
pub fn multiplicity_signature(phi: &Embedding) -> Result<Vec<usize>> {
    let atoms = touched_atoms(phi);
    if atoms.len() > 2 {
        return Err(Error::NotT2Degenerate { atoms: atoms.len() });
    }
    let p = phi.domain().num_atoms();
    let first = atoms[0];
    let mut sig = vec![0usize; p + 1];
    for s in phi.summands() {
        let tail = s.atoms().iter().filter(|&&a| a != first).count();
        sig[tail] += 1;
    }
    Ok(sig)
}

/// The two-row K0 display predicted by a multiplicity signature for a
/// T2-degenerate embedding with p rank-m domain atoms: entry (1,a) counts
/// summands keeping atom a in the first touched atom, entry (2,a) those
/// moving it to the second.
pub fn signature_k0_rows(sig: &[usize], m: i64) -> (Vec<i64>, Vec<i64>) {
    let p = sig.len() - 1;
    let mut row1 = Vec::with_capacity(p);
    let mut row2 = Vec::with_capacity(p);
    for a in 1..=p {
        let keep: usize = sig[..=(p - a)].iter().sum();
        let moved: usize = sig[(p - a + 1)..].iter().sum();
        row1.push(keep as i64 * m);
        row2.push(moved as i64 * m);
    }
    (row1, row2)
}

fn group_type(g: &Embedding) -> GroupType {
    let r = is_refinement_type(g).0;
    let t = is_t2_degenerate(g);
    match (r, t) {
        (true, true) => GroupType::Both,
        (true, false) => GroupType::RefinementType,
        (false, true) => GroupType::T2Degenerate,
        (false, false) => GroupType::Neither,
    }
}

/// The structure verdict: the ordered decomposition with each group
/// classified, plus the two structure-theorem claims when their hypotheses
/// apply (triangular domain, resp. no rank-one domain atoms, with the
/// embedding order conserving).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub decomposition: OrderedDecomposition,
    pub types: Vec<GroupType>,
    /// Some(true) when the domain is triangular, the embedding is order
    /// conserving, and every group is refinement type (expected always).
    pub triangular_all_refinement: Option<bool>,
    /// Some(true) when no domain atom has rank one, the embedding is order
    /// conserving, and every group is refinement type or T2-degenerate.
    pub no_rank_one_dichotomy: Option<bool>,
}

pub fn structure_verdict(phi: &Embedding) -> StructureReport {
    let decomposition = ordered_decomposition(phi);
    let types: Vec<GroupType> = decomposition.groups().iter().map(group_type).collect();
    let oc = phi.classify_order_properties().oc;
    let triangular_all_refinement = if phi.domain().is_triangular() && oc {
        Some(types.iter().all(|t| {
            matches!(t, GroupType::RefinementType | GroupType::Both)
        }))
    } else {
        None
    };
    let no_rank_one_dichotomy = if phi.domain().atom_ranks().iter().all(|&r| r >= 2) && oc {
        Some(types.iter().all(|t| !matches!(t, GroupType::Neither)))
    } else {
        None
    };
    StructureReport {
        decomposition,
        types,
        triangular_all_refinement,
        no_rank_one_dichotomy,
    }
}
