//! Finite measurable spaces, exact signed measures and their decompositions.

mod algebra;
mod decomposition;
mod limsup;
mod signed;
mod space;

pub use algebra::FiniteAlgebra;
pub(crate) use decomposition::require_absolutely_continuous;
pub use decomposition::{
    affine_combine, construct_positive_subset, construct_positive_subset_traced, drop_negative_atoms,
    hahn_decomposition, is_absolutely_continuous, jordan_decomposition, AbsoluteContinuity, HahnDecomposition,
    JordanDecomposition, PositiveSubset, Removal,
};
pub use limsup::{limsup_sets, SetSequenceSpec};
pub use signed::{Measure, SignedMeasure};
pub(crate) use space::ensure_same;
pub use space::{AtomSpace, MeasurableSet};
