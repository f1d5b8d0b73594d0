pub mod approximation;
pub mod complex;
pub mod constructions;
pub mod error;
pub mod field;
pub mod functors;
pub mod groebner;
pub mod homotopy;
pub mod linalg;
pub mod monomial;
pub mod poly;
pub mod resolution;
pub mod ring;

pub use approximation::{
    cone_of_counit, factor_through_left, factor_through_right, left_approximation, minimality_witness,
    right_approximation, triangle_resolution, ConeOfCounit, LeftApproximation, MinimalityVerdict, TowerLevel,
    TriangleResolution,
};
pub use complex::{ChainComplex, ChainMap, Homotopy, ModulePresentation, Tail, ValidationReport};
pub use constructions::{
    cone, cone_with_maps, dual_base_change_iso, tensor_complexes, total_acyclicity_check, truncated_cone,
    validate_complex, AcyclicityFailure, AcyclicityReport, Cone, DualBaseChange, TruncatedCone,
};
pub use error::{Error, Result};
pub use field::{Coeff, PrimeField, DEFAULT_CHARACTERISTIC};
pub use functors::{
    comparison_map, compose_functors_check, equivalence_from_pair, image_module, BaseChange, CompositionReport, Counit,
    TriangleIdentities, TsIdentification,
};
pub use homotopy::{
    build_null_homotopic, find_equivalence, find_homotopy, find_homotopy_on, hom_generators, homotopy_inverse,
    random_chain_map, Equivalence,
};
pub use linalg::{
    buchberger, membership_with_witness, normal_form, solve_left, solve_right, syzygies, FreeMap, LinearSystem, Solver,
    Unknown, VectorElement,
};
pub use monomial::Monomial;
pub use poly::{Poly, PolyRing, Term};
pub use resolution::{
    complete_resolution, complete_resolution_with, detect_periodicity, extend_morphism, lift_through, mcm_syzygy,
    minimal_free_resolution, minimal_presentation, projective_dimension, restrict_scalars, ring_pd, ring_resolution,
    CompleteMethod, CompleteResolution, MinimalPresentation, Resolution, MAX_RESOLUTION_LENGTH,
};
pub use ring::{QuotientRing, RingClass};
