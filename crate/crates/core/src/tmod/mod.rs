//! Modules over a Hecke algebra: lattices with commuting operators, their
//! duals, tensor products modulo torsion, Hom modules, torsion and quotients
//! by ideals, base change to a new quotient, finite modules with their
//! support, and a certified search for isomorphisms away from a set of
//! maximal ideals.

mod finite;
mod module;
mod ops;
mod search;

pub use finite::{FiniteTModule, SupportSet};
pub use module::{complement, TModule};
pub use ops::{
    base_change_new, combine, dual, duality_maps, evaluation, hom_maps, hom_module, ideal_quotient, ideal_torsion,
    old_part_action, tensor_mod_torsion, tensor_with_maps, unit_map, DualityMaps, Evaluation, TensorProduct,
};
pub(crate) use ops::ideal_times;
pub use search::{build_l, s_isomorphism_search, Certificate, LModule, SearchBudget, SearchOutcome};
