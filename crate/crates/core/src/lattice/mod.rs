//! Lattice discretization of `Ω`, piecewise-constant functions and the
//! discrete functional `J_h`.

mod checks;
mod domain;
mod function;
mod functional;
pub mod io;

pub use checks::{
    coarea_check, coarea_check_with, submodularity_of_jh_check, total_variation_bounds_check,
    CoareaReport, SetSubmodularityReport, TvBoundsReport, SET_SUBMODULARITY_SLACK,
};
pub use domain::GridDomain;
pub use function::{GridFunction, GridSet};
pub use functional::{eval_jh, eval_jh_set, gather, interior_nodes, LatticeFunctional};
