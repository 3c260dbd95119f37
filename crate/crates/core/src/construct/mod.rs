//! Radon–Nikodym construction on finite algebras: atom-ratio densities,
//! level sets, dyadic approximants and refinement chains.

mod chain;
mod density;
mod dyadic;
mod verify;

pub use chain::{rn_derive, Derivation, LevelReport, RefinementChain};
pub use density::{
    atom_density, condition_on, hahn_level_correspondence, integrate, level_band, level_set, LevelHahnCorrespondence,
    SimpleDensity,
};
pub use dyadic::{approximation_report, dyadic_approximation, markov_tail, ApproximationReport};
pub use verify::{verify_density, verify_density_sampled, Discrepancy, DEFAULT_SAMPLES, EXHAUSTIVE_LIMIT};
