//! Built-in example embeddings and direct systems used across the test
//! suites and exposed through the CLI `examples` command.

use crate::algebra::NestAlgebra;
use crate::embedding::Embedding;

fn alg(ranks: &[u32]) -> NestAlgebra {
    NestAlgebra::new(ranks).expect("valid ranks")
}

/// T(2,2,2) -> T(6,8,10), summands {(1,1,2),(1,2,2),(2,3,3),(3,3,3)}:
/// unital, order conserving, all groups T2-degenerate.
pub fn phi1() -> Embedding {
    Embedding::from_atom_lists(
        alg(&[2, 2, 2]),
        alg(&[6, 8, 10]),
        &[&[1, 1, 2], &[1, 2, 2], &[2, 3, 3], &[3, 3, 3]],
    )
    .expect("phi1 is valid")
}

/// T(1,1,1,1) -> T(4,4), summands {(1,2,2,2),(1,1,1,2)}: T2-degenerate,
/// order irreducible, not refinement type.
pub fn phi2() -> Embedding {
    Embedding::from_atom_lists(
        alg(&[1, 1, 1, 1]),
        alg(&[4, 4]),
        &[&[1, 2, 2, 2], &[1, 1, 1, 2]],
    )
    .expect("phi2 is valid")
}

/// T(2,2,1) -> T(6,3,1), summands {(1,1,2),(1,2,3)}: order conserving and
/// order irreducible but neither T2-degenerate nor refinement type.
pub fn phi3() -> Embedding {
    Embedding::from_atom_lists(alg(&[2, 2, 1]), alg(&[6, 3, 1]), &[&[1, 1, 2], &[1, 2, 3]])
        .expect("phi3 is valid")
}

/// T(2,2) -> T(2,2,2,2), summands {(1,3),(2,4)}: order preserving but not
/// order conserving.
pub fn phi4() -> Embedding {
    Embedding::from_atom_lists(alg(&[2, 2]), alg(&[2, 2, 2, 2]), &[&[1, 3], &[2, 4]])
        .expect("phi4 is valid")
}

/// T(1,1) -> T(3,3), summands {(1,1),(1,2),(2,2)}: order conserving but not
/// locally order preserving.
pub fn phi5() -> Embedding {
    Embedding::from_atom_lists(alg(&[1, 1]), alg(&[3, 3]), &[&[1, 1], &[1, 2], &[2, 2]])
        .expect("phi5 is valid")
}

/// T(1,1) -> T(1,2,1), summands {(1,2),(2,3)}: a refinement-style first leg.
pub fn phi6a() -> Embedding {
    Embedding::from_atom_lists(alg(&[1, 1]), alg(&[1, 2, 1]), &[&[1, 2], &[2, 3]])
        .expect("phi6a is valid")
}

/// T(1,2,1) -> T(1,1,4,1,1), summands {(1,3,5),(2,3,4)}: not locally order
/// conserving on its own, although the composite with [`phi6a`] is.
pub fn phi6b() -> Embedding {
    Embedding::from_atom_lists(
        alg(&[1, 2, 1]),
        alg(&[1, 1, 4, 1, 1]),
        &[&[1, 3, 5], &[2, 3, 4]],
    )
    .expect("phi6b is valid")
}

/// The standard embedding T_n -> T_{2n}: summands {i -> i, i -> i+n}.
pub fn standard_embedding(n: usize) -> Embedding {
    let dom = NestAlgebra::triangular(n);
    let cod = NestAlgebra::triangular(2 * n);
    let id: Vec<usize> = (1..=n).collect();
    let shift: Vec<usize> = (1..=n).map(|i| i + n).collect();
    Embedding::from_atom_lists(dom, cod, &[&id, &shift]).expect("standard embedding is valid")
}

/// The refinement embedding T_n -> T_{2n}: summands {i -> 2i-1, i -> 2i}.
pub fn refinement_embedding(n: usize) -> Embedding {
    let dom = NestAlgebra::triangular(n);
    let cod = NestAlgebra::triangular(2 * n);
    let odd: Vec<usize> = (1..=n).map(|i| 2 * i - 1).collect();
    let even: Vec<usize> = (1..=n).map(|i| 2 * i).collect();
    Embedding::from_atom_lists(dom, cod, &[&odd, &even]).expect("refinement embedding is valid")
}

/// The chain of standard embeddings T_2 -> T_4 -> ... -> T_{2^stages}.
pub fn standard_chain(stages: usize) -> Vec<Embedding> {
    (1..stages).map(|k| standard_embedding(1 << k)).collect()
}

/// The chain of refinement embeddings T_2 -> T_4 -> ... -> T_{2^stages}.
pub fn refinement_chain(stages: usize) -> Vec<Embedding> {
    (1..stages).map(|k| refinement_embedding(1 << k)).collect()
}
