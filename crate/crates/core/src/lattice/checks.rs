//! Diagnostic checks of the structural properties of `J_h`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::function::{GridFunction, GridSet};
use crate::lattice::functional::LatticeFunctional;
use crate::potential::StencilPotential;

/// Both sides of `J_h(u) = ∫ J_h(χ_{u>s}) ds`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoareaReport {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

impl CoareaReport {
    /// `gap ≤ 1e-10 (1 + lhs)`.
    pub fn holds(&self) -> bool {
        self.gap <= 1e-10 * (1.0 + self.lhs)
    }
}

/// Evaluates `J_h(u)` directly and as the exact level-set integral
/// `Σ_j (s_j - s_{j+1}) J_h({u > s_{j+1}})` over the distinct values
/// `s_1 > s_2 > ...` of `u`.
pub fn coarea_check(u: &GridFunction, potential: &StencilPotential) -> Result<CoareaReport> {
    let functional = LatticeFunctional::new(u.domain().clone(), potential.clone())?;
    coarea_check_with(&functional, u)
}

pub fn coarea_check_with(functional: &LatticeFunctional, u: &GridFunction) -> Result<CoareaReport> {
    let lhs = functional.eval(u)?;
    let levels = u.distinct_values_desc();
    let mut rhs = 0.0;
    for pair in levels.windows(2) {
        let set = u.superlevel_set(pair[1]);
        rhs += (pair[0] - pair[1]) * functional.eval_set(&set)?;
    }
    Ok(CoareaReport {
        lhs,
        rhs,
        gap: (lhs - rhs).abs(),
    })
}

/// Lattice inequality `J(E1∩E2) + J(E1∪E2) ≤ J(E1) + J(E2)` on sets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SetSubmodularityReport {
    pub meet_plus_join: f64,
    pub sum: f64,
    pub ok: bool,
}

pub const SET_SUBMODULARITY_SLACK: f64 = 1e-10;

pub fn submodularity_of_jh_check(
    e1: &GridSet,
    e2: &GridSet,
    potential: &StencilPotential,
) -> Result<SetSubmodularityReport> {
    let functional = LatticeFunctional::new(e1.domain().clone(), potential.clone())?;
    let meet = e1.intersection(e2)?;
    let join = e1.union(e2)?;
    let meet_plus_join = functional.eval_set(&meet)? + functional.eval_set(&join)?;
    let sum = functional.eval_set(e1)? + functional.eval_set(e2)?;
    Ok(SetSubmodularityReport {
        meet_plus_join,
        sum,
        ok: meet_plus_join <= sum + SET_SUBMODULARITY_SLACK,
    })
}

/// Two-sided comparison of `J_h` with discrete total variations:
///
/// ```text
/// c · TV_1(u; A) ≤ J_h(u) ≤ C · TV_Σ(u)
/// ```
///
/// `TV_1` sums `|u(x+he_i) - u(x)|` over the interior nodes in `A`,
/// `TV_Σ` sums `|u(x+hy) - u(x)|` over all `y ∈ Σ` and all interior nodes,
/// both weighted by `h^{N-1}`. `c` is the coercivity constant and `C` the
/// pairwise upper constant of the potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TvBoundsReport {
    pub c_lower: f64,
    pub c_upper: f64,
    pub lower: f64,
    pub jh: f64,
    pub upper: f64,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

impl TvBoundsReport {
    pub fn ok(&self) -> bool {
        self.lower_ok && self.upper_ok
    }
}

/// `window` selects the node set `A` of the lower bound (all interior nodes
/// when `None`).
pub fn total_variation_bounds_check(
    u: &GridFunction,
    potential: &StencilPotential,
    window: Option<&GridSet>,
) -> Result<TvBoundsReport> {
    let c_lower = potential.coercivity_c();
    if c_lower <= 0.0 {
        return Err(Error::Precondition(
            "total variation bounds need a coercive potential (c > 0)".into(),
        ));
    }
    if let Some(w) = window {
        if !(Arc::ptr_eq(w.domain(), u.domain()) || **w.domain() == **u.domain()) {
            return Err(Error::Precondition("window lives on a different domain".into()));
        }
    }
    let functional = LatticeFunctional::new(u.domain().clone(), potential.clone())?;
    let stencil = potential.stencil();
    let origin = stencil.origin_index();
    let basis = stencil.basis_indices();
    let n = stencil.len();
    let values = u.values();
    let mut buf = vec![0.0; n];
    let mut tv1 = 0.0;
    let mut tv_sigma = 0.0;
    for (k, &node) in functional.nodes().iter().enumerate() {
        functional.gather_into(k, values, &mut buf);
        let center = buf[origin];
        if window.is_none_or(|w| w.contains(node)) {
            tv1 += basis.iter().map(|&i| (buf[i] - center).abs()).sum::<f64>();
        }
        tv_sigma += buf.iter().map(|&v| (v - center).abs()).sum::<f64>();
    }
    let w = functional.weight();
    let jh = functional.eval_values(values);
    let c_upper = potential.pairwise_upper_constant();
    let lower = c_lower * w * tv1;
    let upper = c_upper * w * tv_sigma;
    let slack = 1e-12 * (1.0 + jh);
    Ok(TvBoundsReport {
        c_lower,
        c_upper,
        lower,
        jh,
        upper,
        lower_ok: lower <= jh + slack,
        upper_ok: jh <= upper + slack,
    })
}
