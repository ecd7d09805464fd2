//! Quivers of mutation type A, their gentle algebras, and reduction to a
//! normal form by mutations that keep the number of oriented 3-cycles.

pub mod canon;
pub mod error;
pub mod format;
pub mod gentle;
pub mod linalg;
pub mod normalform;
pub mod quiver;
pub mod scalar;
pub mod type_a;

pub use canon::{canonical_form, is_isomorphic, CanonicalForm};
pub use error::{Error, Result};
pub use gentle::{
    cartan_det, cartan_matrix, check_gentle, derived_equivalent, path_basis, presentation_of, CartanMatrix,
    GentlePresentation, GentleReport, Path,
};
pub use normalform::{
    allowed_mutation_vertices, cycle_distance, normal_form_target, ordered_cycle_sequence, preserves_signature,
    reduce_to_normal_form, restricted_reachability, verify_sequence, CycleDistance, OrderedCycleSequence,
    SequenceCheck,
};
pub use quiver::{MutationSequence, Quiver};
pub use scalar::ExactInteger;
pub use type_a::{
    a_n_class, build_from_a1, count_3cycles, enlarge_cycle, enlarge_pendant, enlargement_decomposition,
    enumerate_mutation_class, enumerate_qn_directly, is_in_qn, ClassSignature, Direction, Enlargement,
    MembershipReport, MutationClass, Orientation, Violation,
};

/// Cartan matrix over machine integers; entries of class members stay tiny.
pub type Cartan = CartanMatrix<i64>;
/// Cartan matrix over arbitrary-precision integers.
pub type BigCartan = CartanMatrix<num_bigint::BigInt>;
