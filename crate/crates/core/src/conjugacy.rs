//! Inner conjugacy of embeddings and the constructive K0-uniqueness
//! recovery for locally order conserving data.
//!
//! Inner conjugacy is implemented at the standard level: the conjugating
//! diagonal unitary is a permutation of codomain positions preserving every
//! atom interval.  Two embeddings in canonical form are inner conjugate
//! exactly when their summand multisets coincide; nontrivial witnesses
//! arise when aligning raw matrix-unit tables with the canonical form.

use std::collections::BTreeMap;

use crate::algebra::NestAlgebra;
use crate::embedding::{from_matrix_unit_images, table_orbits, Embedding, K0Matrix, MatrixUnitTable, SummandMap};
use crate::error::{Error, Result};
use crate::pisom::StandardPisom;

/// A permutation of positions preserving each atom interval: the standard
/// shadow of a diagonal unitary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPermutation {
    ambient: NestAlgebra,
    // sigma[p-1] = image of position p
    sigma: Vec<usize>,
}

impl BlockPermutation {
    pub fn new(ambient: NestAlgebra, sigma: Vec<usize>) -> Result<Self> {
        let n = ambient.total_rank();
        if sigma.len() != n {
            return Err(Error::NotBlockPreserving);
        }
        let mut seen = vec![false; n];
        for (p, &q) in sigma.iter().enumerate() {
            if q == 0 || q > n || seen[q - 1] {
                return Err(Error::NotBlockPreserving);
            }
            seen[q - 1] = true;
            if ambient.block_of(p + 1)? != ambient.block_of(q)? {
                return Err(Error::NotBlockPreserving);
            }
        }
        Ok(BlockPermutation { ambient, sigma })
    }

    pub fn identity(ambient: NestAlgebra) -> Self {
        let sigma = (1..=ambient.total_rank()).collect();
        BlockPermutation { ambient, sigma }
    }

    pub fn ambient(&self) -> &NestAlgebra {
        &self.ambient
    }

    pub fn apply(&self, p: usize) -> usize {
        self.sigma[p - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.sigma.iter().enumerate().all(|(i, &q)| q == i + 1)
    }

    /// Conjugation action on a standard pisom: pairs map through σ on both
    /// sides.  Block preservation keeps the result in the algebra.
    pub fn conjugate(&self, v: &StandardPisom) -> StandardPisom {
        StandardPisom::new(
            self.ambient.clone(),
            v.pairs().iter().map(|&(r, c)| (self.apply(r), self.apply(c))),
        )
        .expect("block permutations preserve the algebra")
    }
}

/// Decides inner conjugacy of two embeddings with common domain and
/// codomain.  In canonical form the criterion is summand-multiset
/// equality, so a positive answer carries the identity witness.
pub fn inner_conjugate(phi: &Embedding, psi: &Embedding) -> Option<BlockPermutation> {
    if phi.domain() != psi.domain() || phi.codomain() != psi.codomain() {
        return None;
    }
    if phi.summands() == psi.summands() {
        Some(BlockPermutation::identity(phi.codomain().clone()))
    } else {
        None
    }
}

/// Aligns a raw matrix-unit table with the canonical form of the embedding
/// it determines: returns σ with σ(table images) = canonical images,
/// unit by unit, or None if the table does not determine `phi`'s class.
pub fn table_conjugacy_witness(
    table: &MatrixUnitTable,
    phi: &Embedding,
) -> Result<Option<BlockPermutation>> {
    let decoded = from_matrix_unit_images(table)?;
    if decoded.summands() != phi.summands()
        || decoded.domain() != phi.domain()
        || decoded.codomain() != phi.codomain()
    {
        return Ok(None);
    }
    let orbits = table_orbits(table)?;
    // match each raw orbit to a distinct canonical summand with the same
    // atom map
    let n = phi.domain().total_rank();
    let mut used = vec![false; phi.multiplicity()];
    let mut sigma_map: BTreeMap<usize, usize> = BTreeMap::new();
    for track in &orbits {
        let f: Vec<usize> = (1..=phi.domain().num_atoms())
            .map(|a| {
                let p = phi.domain().atom_interval(a).start;
                phi.codomain().block_of(track[p - 1]).expect("validated")
            })
            .collect();
        let s = (0..phi.multiplicity())
            .find(|&s| !used[s] && phi.summands()[s].atoms() == f.as_slice())
            .expect("multisets agree");
        used[s] = true;
        for p in 1..=n {
            sigma_map.insert(track[p - 1], phi.slot(s, p));
        }
    }
    // extend to the untouched positions, order preserving within each atom
    let cod = phi.codomain();
    let mut sigma = vec![0usize; cod.total_rank()];
    for (&from, &to) in &sigma_map {
        sigma[from - 1] = to;
    }
    for atom in 1..=cod.num_atoms() {
        let iv = cod.atom_interval(atom);
        let free_targets: Vec<usize> = iv
            .clone()
            .filter(|q| !sigma_map.values().any(|&t| t == *q))
            .collect();
        let mut next = free_targets.into_iter();
        for q in iv {
            if sigma[q - 1] == 0 {
                sigma[q - 1] = next.next().expect("counts match");
            }
        }
    }
    Ok(Some(BlockPermutation::new(cod.clone(), sigma)?))
}

/// Recovers the unique locally order conserving summand multiset realizing
/// a K0 matrix, by the greedy peel: each pass takes, for every domain atom,
/// the first codomain atom with remaining mass in that column.
pub fn recover_summands_from_k0(
    domain: &NestAlgebra,
    codomain: &NestAlgebra,
    k: &K0Matrix,
) -> Result<Vec<SummandMap>> {
    if k.domain() != domain || k.codomain() != codomain {
        return Err(Error::DomainMismatch);
    }
    if k.entries().iter().flatten().any(|&v| v < 0) {
        return Err(Error::InconsistentColumns);
    }
    let sums = k.column_sums();
    let mu = sums[0];
    if sums.iter().any(|&s| s != mu) {
        return Err(Error::InconsistentColumns);
    }
    let mut n: Vec<Vec<i64>> = k.entries().to_vec();
    let mut summands = Vec::with_capacity(mu as usize);
    for _ in 0..mu {
        let mut f = Vec::with_capacity(domain.num_atoms());
        for a in 1..=domain.num_atoms() {
            let atom = (1..=codomain.num_atoms())
                .find(|&aa| n[aa - 1][a - 1] > 0)
                .ok_or(Error::InconsistentColumns)?;
            n[atom - 1][a - 1] -= 1;
            f.push(atom);
        }
        summands.push(
            SummandMap::new(domain, codomain, &f).map_err(|_| Error::NoLocRealization)?,
        );
    }
    // post-validation: the result must reproduce K and be locally order
    // conserving
    let phi = Embedding::new(domain.clone(), codomain.clone(), summands.clone())
        .map_err(|_| Error::NoLocRealization)?;
    if &phi.k0_matrix() != k || !phi.classify_order_properties().loc {
        return Err(Error::NoLocRealization);
    }
    Ok(summands)
}
