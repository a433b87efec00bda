//! Exact reflection-group geometry over ℚ(√5).
//!
//! The crate realizes every finite Coxeter root system with scalars of the
//! form a + b√5 (a, b rational) and verifies, with no floating point on any
//! load-bearing path:
//!
//! * the solid angle of the cone spanned by a simple system,
//!   ∏ᵢ (dᵢ−1)/dᵢ over the degrees dᵢ, and its Monte Carlo estimate;
//! * the exact count of group translates of that cone containing a generic
//!   point, ∏ᵢ (dᵢ−1), by full enumeration of the group;
//! * the factored Poincaré polynomial ∏ᵢ (1 + (dᵢ−1)t) of the reflecting
//!   arrangement, its rank truncation, and Zaslavsky's chamber counts;
//! * the affine deletion identity Σᵢ ∏ⱼ (dⱼ⁽ⁱ⁾−1)/dⱼ⁽ⁱ⁾ = 1 for every
//!   crystallographic family, with its alcove-partition interpretation;
//! * an exhaustive search showing no single-vertex extension of H3 or H4
//!   satisfies the same identity.
//!
//! Geometry convention: points and roots live in simple-root coordinates,
//! and every inner product goes through the realization's exact Gram form,
//! so full-rank realizations exist for all types — including H3 and H4 —
//! without leaving ℚ(√5).

pub mod arrangement;
pub mod catalog;
pub mod diagram;
pub mod error;
pub mod generic;
pub mod group;
pub mod identity;
pub mod linalg;
pub mod roots;
pub mod scalar;
pub mod volume;

pub use arrangement::{
    chamber_counts, exponents_from_lattice, factor_poincare, intersection_lattice,
    intersection_lattice_with_budget, is_general_position, poincare_polynomial,
    reflection_arrangement, slice_region_counts_rank2, truncated_poincare, verify_factorization,
    AffineSlice, CentralArrangement, Factorization, Flat, IntPolynomial, IntersectionLattice,
};
pub use catalog::{
    build_diagram, degrees, degrees_of_decomposition, extended_diagram,
    standard_crystallographic_families, DegreeMultiset, ExtendedDiagram, Family, Realization,
};
pub use diagram::{classify_finite, CoxeterDiagram, FiniteType, TypeDecomposition};
pub use error::{Error, Result};
pub use generic::{
    bounded_orbit_count, count_containing_cones, is_generic, random_generic_point, Certificate,
    GenericityContext, SamplePoint,
};
pub use group::{generate_group, generate_group_with_cap, ReflectionGroup, DEFAULT_GROUP_CAP};
pub use identity::{
    alcove_partition_check, deletion_identity, formal_identity_sum, search_h_extensions,
    search_h_extensions_with_bound, AlcoveReport, DeletionRecord, ExtensionCandidate, FormalSum,
    IdentityReport,
};
pub use linalg::{inner_product, Matrix, Vector};
pub use roots::{ConeCoefficients, RootSystem};
pub use scalar::{rat, ratio_string, Rat, Scalar};
pub use volume::{
    chamber_volume_exact, cone_volume_exact, monte_carlo_chamber_volume,
    monte_carlo_chamber_volume_with, monte_carlo_cone_volume, monte_carlo_cone_volume_with,
    verify_count_theorem, CountReport, McOptions, VolumeReport,
};
