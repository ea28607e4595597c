//! Objects and morphisms of the category, duality and the part decomposition.

mod construct;
mod dual;
mod iso;
mod object;
mod parts;

pub(crate) use construct::present;
pub use iso::{is_isomorphic, EXHAUSTIVE_LIMIT};
pub(crate) use object::check_same_params;
pub use object::{hom_dimension, hom_space, PhiModule, PhiMorphism};
pub use parts::{product_cutoff, PartsDecomposition};
