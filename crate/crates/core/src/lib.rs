//! Exact computations in free nonsymmetric operads on one n-ary generator:
//! planar trees, Koszul duals of quadratic presentations, dimensions of
//! quotient components, n-ary algebras, and cup products on decomposable
//! operadic cochains.

pub mod algebra;
pub mod cli;
pub mod cochain;
pub mod components;
pub mod error;
pub mod freeops;
pub mod linalg;
pub mod par;
pub mod quadratic;
pub mod scalar;
pub mod trees;

pub use error::{OperadError, Result};
pub use freeops::{compose, pair, Element, GeneratorSpec, Monomial};
pub use quadratic::{pa_presentation, ta_presentation, Family, QuadraticPresentation};
pub use scalar::{Field, Scalar};
pub use trees::{catalan, enumerate_trees, path_glex_compare, PlanarTree};
pub use algebra::{check_total_associativity, evaluate_tree, sample_algebra, AlgebraElement, NAryAlgebra, SampleKind};
pub use cochain::{
    cup, evaluate_cochain, nested_symbolic_eval, pa_defect_numeric, theorem_check_symbolic, ContextMonomial,
    CupExpression, DecomposableCochain, Endomorphism,
};
pub use components::{component_basis, dims, groebner_check_even, ideal_span, ComponentBasis, ComponentTower};
