//! Block-coordinate pairwise Frank–Wolfe on the dual problem.
//!
//! Writing each node term as `F(P_x u) = max_{s ∈ B(F)} ⟨s, P_x u⟩` over the
//! base polytope, with `w = h^{N-1}` and `μ = λh^N`,
//!
//! ```text
//! min_u w Σ_x F(P_x u) + μ‖u-g‖² = max_{s_x ∈ B(F)} μ(‖g‖² - ‖u(s)‖²),
//! u(s) = g - w Σ_x P_xᵀ s_x / (2μ).
//! ```
//!
//! Each `s_x` is kept as a convex combination of greedy vertices. A node
//! step moves weight from the worst active vertex to the greedy vertex at
//! `P_x u` with exact line search. The primal candidate is `u(s)` clipped to
//! `[min g, max g]`, which never raises the energy; the gap between its
//! energy and the dual value bounds the distance to the optimum.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::denoise::{DenoiseProblem, DenoiseResult, SolverKind, TraceRow};
use crate::error::{Error, Result};
use crate::lattice::GridFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepOrder {
    /// Interior nodes in lexicographic order every sweep.
    Lexicographic,
    /// A fresh permutation every sweep drawn from the seeded generator.
    Shuffled { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrderOptions {
    /// Maximum number of sweeps.
    pub max_iter: usize,
    /// Stop once the duality gap is at most `tol` times the energy.
    pub tol: f64,
    pub order: SweepOrder,
}

impl Default for FirstOrderOptions {
    fn default() -> Self {
        FirstOrderOptions {
            max_iter: 10_000,
            tol: 1e-8,
            order: SweepOrder::Lexicographic,
        }
    }
}

/// Gap below which iterates count as optimal regardless of `tol`.
const ABSOLUTE_GAP_FLOOR: f64 = 1e-14;

struct Vertex {
    s: Vec<f64>,
    weight: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(super) fn solve(problem: &DenoiseProblem, options: &FirstOrderOptions) -> Result<DenoiseResult> {
    if !(options.tol >= 0.0) {
        return Err(Error::Config(format!("tolerance must be nonnegative, got {}", options.tol)));
    }
    let report = problem.potential().check_submodular();
    if !report.ok {
        return Err(Error::Precondition(
            "the first-order solver needs a submodular potential".into(),
        ));
    }
    let f = problem.functional();
    let potential = problem.potential();
    let domain = problem.g().domain().clone();
    let g = problem.g().values();
    let inside: Vec<usize> = (0..domain.num_cells()).filter(|&c| domain.is_inside(c)).collect();
    let (lo, hi) = problem.g_range();
    let w = f.weight();
    let mu = problem.fidelity_scale();

    if lo == hi || f.nodes().is_empty() {
        // u = g has zero fidelity and zero variation
        let energy = problem.energy(problem.g())?;
        return Ok(DenoiseResult {
            u: problem.g().clone(),
            energy,
            solver: SolverKind::FirstOrder,
            iterations: Some(0),
            residual: Some(0.0),
            warning: None,
            trace: vec![TraceRow {
                iter: 0,
                energy,
                residual: 0.0,
            }],
            oracle: None,
        });
    }

    let m = potential.stencil().len();
    let node_cells: Vec<Vec<usize>> = (0..f.nodes().len())
        .map(|k| f.stencil_cells(k).collect())
        .collect();
    let mut pu = vec![0.0; m];
    let mut vertex = vec![0.0; m];

    let mut active: Vec<Vec<Vertex>> = node_cells
        .iter()
        .map(|cells| {
            for (slot, &c) in pu.iter_mut().zip(cells) {
                *slot = g[c];
            }
            potential.subgradient_unchecked(&pu, &mut vertex);
            vec![Vertex {
                s: vertex.clone(),
                weight: 1.0,
            }]
        })
        .collect();

    let mut u = vec![0.0; domain.num_cells()];
    let rebuild = |active: &[Vec<Vertex>], u: &mut Vec<f64>| {
        let mut z = vec![0.0; u.len()];
        for (cells, verts) in node_cells.iter().zip(active) {
            for v in verts {
                for (&c, &s) in cells.iter().zip(&v.s) {
                    z[c] += v.weight * s;
                }
            }
        }
        for &c in &inside {
            u[c] = g[c] - w * z[c] / (2.0 * mu);
        }
    };
    rebuild(&active, &mut u);

    let mut order: Vec<usize> = (0..node_cells.len()).collect();
    let mut rng = match options.order {
        SweepOrder::Shuffled { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        SweepOrder::Lexicographic => None,
    };

    let mut best_u = vec![0.0; domain.num_cells()];
    let mut best_primal = f64::INFINITY;
    let mut best_dual = f64::NEG_INFINITY;
    let mut clipped = vec![0.0; domain.num_cells()];
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    let mut evaluate = |u: &[f64], best_u: &mut Vec<f64>, best_primal: &mut f64, best_dual: &mut f64| {
        for &c in &inside {
            clipped[c] = u[c].clamp(lo, hi);
        }
        let primal = problem.energy_values(&clipped);
        let dual = mu * inside.iter().map(|&c| (g[c] - u[c]) * (g[c] + u[c])).sum::<f64>();
        if primal < *best_primal {
            *best_primal = primal;
            best_u.copy_from_slice(&clipped);
        }
        *best_dual = best_dual.max(dual);
        (*best_primal - *best_dual).max(0.0)
    };

    let gap0 = evaluate(&u, &mut best_u, &mut best_primal, &mut best_dual);
    trace.push(TraceRow {
        iter: 0,
        energy: best_primal,
        residual: gap0,
    });
    let done = |gap: f64, primal: f64| gap <= options.tol * primal.abs() || gap <= ABSOLUTE_GAP_FLOOR;
    if done(gap0, best_primal) {
        converged = true;
    }

    while !converged && iterations < options.max_iter {
        iterations += 1;
        if let Some(rng) = rng.as_mut() {
            order.shuffle(rng);
        }
        for &k in &order {
            let cells = &node_cells[k];
            for (slot, &c) in pu.iter_mut().zip(cells) {
                *slot = u[c];
            }
            potential.subgradient_unchecked(&pu, &mut vertex);
            let verts = &mut active[k];
            let (away, _) = verts
                .iter()
                .enumerate()
                .map(|(i, v)| (i, dot(&v.s, &pu)))
                .fold((0, f64::INFINITY), |acc, (i, val)| if val < acc.1 { (i, val) } else { acc });
            let slope = dot(&vertex, &pu) - dot(&verts[away].s, &pu);
            if !(slope > 0.0) {
                continue;
            }
            let dd: f64 = vertex
                .iter()
                .zip(&verts[away].s)
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            if dd == 0.0 {
                continue;
            }
            let alpha = verts[away].weight;
            let gamma = (2.0 * mu * slope / (w * dd)).min(alpha);
            for (i, &c) in cells.iter().enumerate() {
                u[c] -= w * gamma * (vertex[i] - verts[away].s[i]) / (2.0 * mu);
            }
            match verts.iter().position(|v| v.s == vertex) {
                Some(j) => verts[j].weight += gamma,
                None => verts.push(Vertex {
                    s: vertex.clone(),
                    weight: gamma,
                }),
            }
            if gamma >= alpha {
                verts.swap_remove(away);
            } else {
                verts[away].weight -= gamma;
            }
        }
        rebuild(&active, &mut u);
        let gap = evaluate(&u, &mut best_u, &mut best_primal, &mut best_dual);
        trace.push(TraceRow {
            iter: iterations,
            energy: best_primal,
            residual: gap,
        });
        converged = done(gap, best_primal);
    }

    let residual = trace.last().map_or(0.0, |r| r.residual);
    let warning = (!converged).then(|| {
        format!("no convergence within {} sweeps (gap {residual:.3e})", options.max_iter)
    });
    Ok(DenoiseResult {
        u: GridFunction::new(domain, best_u)?,
        energy: best_primal,
        solver: SolverKind::FirstOrder,
        iterations: Some(iterations),
        residual: Some(residual),
        warning,
        trace,
        oracle: None,
    })
}
