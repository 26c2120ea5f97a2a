//! Exact combinatorial invariants of finite dimensional nest algebras and
//! their direct systems: order-conservation predicates, structure
//! decompositions, K0-style invariants, conjugacy decisions, lifting of
//! invariant data, and bounded intertwining searches.

pub mod algebra;
pub mod conjugacy;
pub mod corpus;
pub mod embedding;
pub mod error;
pub mod lift;
pub mod pisom;
pub mod structure;
pub mod system;

pub use algebra::{Cell, NestAlgebra};
pub use conjugacy::BlockPermutation;
pub use embedding::{Embedding, GHom, K0Matrix, MatrixUnitTable, OrderFlags, SummandMap};
pub use error::{Error, Result};
pub use lift::LiftMode;
pub use pisom::{CellSet, GElement, StandardPisom};
pub use structure::{GroupType, OrderedDecomposition, StructureReport};
pub use system::{DirectSystem, Intertwining, LimitElement, ScaleKind, SystemReport, Verdict};
