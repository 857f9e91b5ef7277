//! Anisotropic ROF denoising
//!
//! ```text
//! min_u  J_h(u, Ω) + λ ‖u - g‖²_{L²(Ω)}
//! ```
//!
//! on a grid, where the `L²` norm of a piecewise-constant function carries
//! the cell volume `h^N`. Two solvers are provided: an exhaustive oracle
//! over a quantized level grid for tiny problems and a first-order dual
//! solver with a certified duality gap for real images.

mod consistency;
mod first_order;
mod oracle;

use std::fmt::Write as _;

pub use consistency::{ConsistencyReport, FlipViolation};
pub use first_order::{FirstOrderOptions, SweepOrder};
pub use oracle::{level_function_search, OracleReport, SearchMethod, MAX_ORACLE_CELLS};

use crate::error::{Error, Result};
use crate::lattice::{GridFunction, LatticeFunctional};
use crate::potential::StencilPotential;

/// Data of a denoising problem.
#[derive(Debug, Clone)]
pub struct DenoiseProblem {
    g: GridFunction,
    fidelity_weight: f64,
    level_grid: Vec<f64>,
    functional: LatticeFunctional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    Oracle,
    FirstOrder,
}

impl SolverKind {
    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Oracle => "oracle",
            SolverKind::FirstOrder => "first_order",
        }
    }
}

/// One checkpoint of the first-order solver: best energy so far and the
/// duality gap certifying it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub iter: usize,
    pub energy: f64,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct DenoiseResult {
    pub u: GridFunction,
    pub energy: f64,
    pub solver: SolverKind,
    /// Sweeps over all nodes (first-order only).
    pub iterations: Option<usize>,
    /// Final duality gap, an upper bound on `energy - min` (first-order only).
    pub residual: Option<f64>,
    /// Set when the iteration budget ran out before the tolerance was met.
    pub warning: Option<String>,
    pub trace: Vec<TraceRow>,
    pub oracle: Option<OracleReport>,
}

impl DenoiseResult {
    /// `energy=..., iters=..., residual=...`
    pub fn report_line(&self) -> String {
        let mut s = format!("solver={}, energy={:.15e}", self.solver.name(), self.energy);
        if let Some(it) = self.iterations {
            write!(s, ", iters={it}").unwrap();
        }
        if let Some(r) = self.residual {
            write!(s, ", residual={r:.6e}").unwrap();
        }
        if let Some(w) = &self.warning {
            write!(s, ", warning={w}").unwrap();
        }
        s
    }
}

/// CSV `iter,energy,residual`.
pub fn trace_csv(trace: &[TraceRow]) -> String {
    let mut out = String::from("iter,energy,residual\n");
    for r in trace {
        writeln!(out, "{},{:.15e},{:.15e}", r.iter, r.energy, r.residual).unwrap();
    }
    out
}

/// Distinct values of `g` on `Ω` and the midpoints between consecutive
/// ones; each gap is then split into `refine` equal parts (`refine = 1`
/// keeps the grid as is).
pub fn default_level_grid(g: &GridFunction, refine: usize) -> Result<Vec<f64>> {
    if refine == 0 {
        return Err(Error::Config("level refinement must be at least 1".into()));
    }
    let mut distinct = g.distinct_values_desc();
    distinct.reverse();
    let mut base = Vec::with_capacity(2 * distinct.len());
    for (k, &v) in distinct.iter().enumerate() {
        if k > 0 {
            base.push(0.5 * (distinct[k - 1] + v));
        }
        base.push(v);
    }
    let mut grid = Vec::with_capacity(base.len() * refine);
    for (k, &v) in base.iter().enumerate() {
        if k > 0 {
            let a = base[k - 1];
            for j in 1..refine {
                grid.push(a + (v - a) * j as f64 / refine as f64);
            }
        }
        grid.push(v);
    }
    Ok(grid)
}

/// `lo, lo + (hi-lo)/(n-1), ..., hi`.
pub fn uniform_level_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 || !(lo < hi) {
        return Err(Error::Config(format!("invalid uniform level grid [{lo}, {hi}] with {n} levels")));
    }
    Ok((0..n)
        .map(|k| if k + 1 == n { hi } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 })
        .collect())
}

impl DenoiseProblem {
    /// Problem with the default level grid.
    pub fn new(g: GridFunction, potential: StencilPotential, fidelity_weight: f64) -> Result<Self> {
        if !(fidelity_weight.is_finite() && fidelity_weight > 0.0) {
            return Err(Error::Config(format!(
                "fidelity weight must be positive and finite, got {fidelity_weight}"
            )));
        }
        let level_grid = default_level_grid(&g, 1)?;
        let functional = LatticeFunctional::new(g.domain().clone(), potential)?;
        Ok(DenoiseProblem {
            g,
            fidelity_weight,
            level_grid,
            functional,
        })
    }

    /// Replaces the level grid; it must be strictly increasing and cover
    /// `[min g, max g]`.
    pub fn with_level_grid(mut self, level_grid: Vec<f64>) -> Result<Self> {
        if level_grid.is_empty() || level_grid.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("level grid must be nonempty and finite".into()));
        }
        if level_grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Config("level grid must be strictly increasing".into()));
        }
        let (lo, hi) = self.g_range();
        if level_grid[0] > lo || level_grid[level_grid.len() - 1] < hi {
            return Err(Error::Config(format!(
                "level grid [{}, {}] does not cover the datum range [{lo}, {hi}]",
                level_grid[0],
                level_grid[level_grid.len() - 1]
            )));
        }
        self.level_grid = level_grid;
        Ok(self)
    }

    /// Default grid with every gap split into `refine` parts.
    pub fn with_refined_levels(self, refine: usize) -> Result<Self> {
        let grid = default_level_grid(&self.g, refine)?;
        self.with_level_grid(grid)
    }

    pub fn g(&self) -> &GridFunction {
        &self.g
    }

    pub fn potential(&self) -> &StencilPotential {
        self.functional.potential()
    }

    pub fn functional(&self) -> &LatticeFunctional {
        &self.functional
    }

    pub fn fidelity_weight(&self) -> f64 {
        self.fidelity_weight
    }

    pub fn level_grid(&self) -> &[f64] {
        &self.level_grid
    }

    /// `λ h^N`, the weight of one cell in the fidelity term.
    pub fn fidelity_scale(&self) -> f64 {
        self.fidelity_weight * self.g.domain().cell_volume()
    }

    /// Midpoints of consecutive levels: the thresholds whose superlevel
    /// sets determine a level-valued function.
    pub fn thresholds(&self) -> Vec<f64> {
        self.level_grid
            .windows(2)
            .map(|w| 0.5 * (w[0] + w[1]))
            .collect()
    }

    /// `(min g, max g)` over `Ω`, `(0, 0)` for an empty domain.
    pub fn g_range(&self) -> (f64, f64) {
        let mut it = self.g.inside_values();
        let Some(first) = it.next() else {
            return (0.0, 0.0);
        };
        it.fold((first, first), |(lo, hi), v| (lo.min(v), hi.max(v)))
    }

    pub(crate) fn energy_values(&self, values: &[f64]) -> f64 {
        let domain = self.g.domain();
        let g = self.g.values();
        let fid: f64 = (0..domain.num_cells())
            .filter(|&c| domain.is_inside(c))
            .map(|c| (values[c] - g[c]) * (values[c] - g[c]))
            .sum();
        self.functional.eval_values(values) + self.fidelity_scale() * fid
    }

    /// `J_h(u) + λ h^N Σ_x (u(x) - g(x))²`.
    pub fn energy(&self, u: &GridFunction) -> Result<f64> {
        u.require_same_domain(self.g.domain())?;
        Ok(self.energy_values(u.values()))
    }

    /// `-T ∨ u ∧ T`.
    pub fn truncate(&self, u: &GridFunction, t: f64) -> Result<GridFunction> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("truncation level must be nonnegative, got {t}")));
        }
        u.map(|v| v.clamp(-t, t))
    }

    pub fn solve_oracle(&self) -> Result<DenoiseResult> {
        oracle::solve(self)
    }

    pub fn solve_first_order(&self, max_iter: usize, tol: f64) -> Result<DenoiseResult> {
        self.solve_first_order_with(&FirstOrderOptions {
            max_iter,
            tol,
            ..FirstOrderOptions::default()
        })
    }

    pub fn solve_first_order_with(&self, options: &FirstOrderOptions) -> Result<DenoiseResult> {
        first_order::solve(self, options)
    }

    /// Single-cell flip test of every superlevel set `{u > s}`.
    pub fn level_set_consistency_check(
        &self,
        u: &GridFunction,
        thresholds: &[f64],
    ) -> Result<ConsistencyReport> {
        consistency::check(self, u, thresholds)
    }
}

/// Free-function form of [`DenoiseProblem::energy`].
pub fn energy(problem: &DenoiseProblem, u: &GridFunction) -> Result<f64> {
    problem.energy(u)
}
