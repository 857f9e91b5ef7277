use crate::denoise::DenoiseProblem;
use crate::error::{Error, Result};
use crate::lattice::GridFunction;

/// A single-cell flip that lowers a level-set energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlipViolation {
    pub threshold: f64,
    pub cell: usize,
    /// Energy decrease achieved by the flip, positive.
    pub decrease: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport {
    pub thresholds: Vec<f64>,
    pub tolerance: f64,
    pub violations: Vec<FlipViolation>,
    /// Largest decrease over all flips and thresholds, `0` if none helps.
    pub worst: f64,
}

impl ConsistencyReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For each `s`, flips every cell of `Ω` in and out of `E = {u > s}` and
/// records flips lowering `J_h(E) + λh^N Σ_{x∈E} 2(s - g(x))` by more
/// than a rounding tolerance.
pub(super) fn check(
    problem: &DenoiseProblem,
    u: &GridFunction,
    thresholds: &[f64],
) -> Result<ConsistencyReport> {
    u.require_same_domain(problem.g().domain())?;
    if let Some(s) = thresholds.iter().find(|s| !s.is_finite()) {
        return Err(Error::Domain(format!("non-finite threshold {s}")));
    }
    let f = problem.functional();
    let domain = u.domain();
    let g = problem.g().values();
    let scale = problem.fidelity_scale();
    let w = f.weight();

    let mut touching = vec![Vec::new(); domain.num_cells()];
    for k in 0..f.nodes().len() {
        for c in f.stencil_cells(k) {
            touching[c].push(k);
        }
    }
    let magnitude = 1.0
        + w * f.nodes().len() as f64 * problem.potential().max_value()
        + scale * g.iter().map(|v| v.abs()).sum::<f64>();
    let tolerance = 1e-10 * magnitude;

    let mut violations = Vec::new();
    let mut worst = 0.0f64;
    for &s in thresholds {
        let mut member = u.superlevel_set(s).members().to_vec();
        for cell in 0..domain.num_cells() {
            if !domain.is_inside(cell) {
                continue;
            }
            let before: f64 = touching[cell].iter().map(|&k| f.node_term_mask(k, &member)).sum();
            member[cell] = !member[cell];
            let after: f64 = touching[cell].iter().map(|&k| f.node_term_mask(k, &member)).sum();
            let entering = member[cell];
            member[cell] = !member[cell];
            let linear = scale * 2.0 * (s - g[cell]);
            let delta = w * (after - before) + if entering { linear } else { -linear };
            let decrease = -delta;
            worst = worst.max(decrease);
            if decrease > tolerance {
                violations.push(FlipViolation {
                    threshold: s,
                    cell,
                    decrease,
                });
            }
        }
    }
    Ok(ConsistencyReport {
        thresholds: thresholds.to_vec(),
        tolerance,
        violations,
        worst,
    })
}
