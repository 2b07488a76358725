//! Exact computation with toric monoids and monoidal complexes.

pub mod arith;
pub mod blowup;
pub mod bmap;
pub mod complex;
pub mod cone;
pub mod error;
pub mod lattice;
pub mod monoid;

pub use blowup::{
    blowup_atlas, blowup_base, blowup_complex, identity_refinement, localize_blowup,
    localize_blowup_from, pullback_refinement, refinement_from_fan, resolve, stellar_subdivision, validate_refinement,
    BlowupAtlas, BlowupBase, BlowupChart, Fan, GluingDatum, LocalizedBlowup, PullbackData,
    Refinement, RefinementViolation,
};
pub use bmap::{
    blowdown_map, factors_through, induced_morphism, is_b_etale, is_b_transverse, lift,
    lift_into, lift_through, make_monomial_map, normal_monoid_data, tangent_map, verify_lift_numeric, Lift,
    MonomialMap, NormalMonoidData, TangentMatrix,
};
pub use complex::{
    face_complex_of_monoid, restrict_complex, validate_complex, validate_morphism, Arrow,
    ComplexMorphism, FaceComplex, MonoidalComplex, Subcomplex,
};
pub use cone::{Cone, ConeFace, FaceLattice};
pub use monoid::{FaceHandle, MonoidHom, ToricMonoid};
pub use error::Error;
pub use lattice::{
    hermite_normal_form, lattice_quotient, left_inverse_on_sublattice, smith_normal_form,
    solve_integer, IntMatrix, LatticeQuotient, Sublattice,
};

/// Result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
