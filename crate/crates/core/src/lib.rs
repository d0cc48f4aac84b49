//! Exact-arithmetic workbench for heterogeneous Ramsey algebras.
//!
//! The crate enumerates orderly terms over many-sorted signatures, decides
//! reductions between finite sorted prefixes, computes finite FR-set
//! approximations, and mechanically re-checks the witness constructions
//! and structural lemmas of the matrix-algebra theorems at desk scale.
//! All arithmetic is exact: arbitrary-precision integers, canonical
//! rationals, and rational matrices.

pub mod algebra;
pub mod matrices;
pub mod reduction;
pub mod terms;
pub mod verify;

pub use algebra::{
    element_equal, is_e_sorted, Element, Matrix, OpId, OpKind, OpSemantics, OperationDecl,
    Signature, SignatureError, SortId, SortWord, SortedPrefix,
};
pub use matrices::{
    coloring_test, det, det_cofactor, diag_embed, g_matrix, Coloring, MatrixAlgebraConfig,
    MatrixAlgebraOp, MatrixError,
};
pub use reduction::{
    check_homogeneous, check_reduction, enumerate_sorted_reductions, fr_set, schedule_sort_word,
    FrSet, Provenance, ReductionError, ReductionWitness, SearchBounds, Verdict, WitnessPart,
};
pub use terms::{
    enumerate_orderly_terms, evaluate, is_orderly, parse_term, term_profile, Term, TermError,
    TermProfile,
};
pub use verify::{Exhibit, Status, SweepOptions, VerifyError, WitnessReport};
