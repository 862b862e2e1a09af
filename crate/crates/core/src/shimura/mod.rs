//! The Ribet-kernel pipeline for a level `N = pq`: character groups of
//! `J_0(pq)` at `p` and at `q` from the two supersingular graphs, the
//! character groups of the Shimura-curve Jacobian as degeneracy kernels,
//! and the checks comparing them over the new Hecke quotient.

mod case;
mod control;
mod verify;

pub use case::{generator_bound, CaseData, CaseGraphs, RibetSequence, Side};
pub use control::{controllability_report, find_higher_multiplicity, residue_dim, IdealRecord, MultiplicityHit};
pub use verify::{
    chargp_modules, component_group_shimura, globalmult1_modules, GlobalMultOneModules, eisenstein_support_verdict, verify_chargp, verify_component_eisenstein,
    verify_globalmult1, verify_ribexact2, verify_thm_main, CheckResult, Verdict,
};

#[cfg(test)]
mod tests;
