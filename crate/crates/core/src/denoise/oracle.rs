//! Exhaustive solvers for the problem restricted to level-grid values.
//!
//! With levels `l_0 < ... < l_{L-1}` a level-valued `u` is determined by the
//! nested sets `E_k = {u ≥ l_k}`, `k ≥ 1`, and
//!
//! ```text
//! J_h(u) + λh^N Σ (u-g)² = const + Σ_k (l_k - l_{k-1}) [J_h(E_k) + λh^N Σ_{x∈E_k} 2(s_k - g(x))]
//! ```
//!
//! with `s_k = (l_{k-1} + l_k)/2`. Each bracket is minimized separately
//! over all subsets; submodularity makes the largest minimizers nested.
//! The second oracle searches level-valued functions directly.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::denoise::{DenoiseProblem, DenoiseResult, SolverKind};
use crate::error::{Error, Result};
use crate::lattice::{GridFunction, GridSet};

/// Largest number of cells of `Ω` the oracles accept.
pub const MAX_ORACLE_CELLS: usize = 20;

const ENUMERATION_LIMIT: u64 = 1 << 18;
const DP_STATE_LIMIT: usize = 1 << 22;

#[derive(Debug, Clone)]
pub struct OracleReport {
    /// Thresholds `s_k`, increasing.
    pub thresholds: Vec<f64>,
    /// Largest minimizer for each threshold, decreasing.
    pub level_sets: Vec<GridSet>,
    /// Energy of the function rebuilt from the level sets.
    pub level_set_energy: f64,
    /// Energy found by searching level-valued functions directly.
    pub exhaustive_energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMethod {
    /// Plain enumeration of all `L^n` functions.
    Enumerate,
    /// Dynamic program over cells in flat order; the state is the values of
    /// cells still needed by unfinished stencil terms.
    FrontierDp,
    Auto,
}

/// Variables are the cells of `Ω` in flat order.
struct Compiled {
    cells: Vec<usize>,
    g: Vec<f64>,
    /// Per interior node, the variable of each stencil slot.
    node_vars: Vec<Vec<usize>>,
    weight: f64,
    scale: f64,
}

impl Compiled {
    fn new(problem: &DenoiseProblem) -> Result<Self> {
        let domain = problem.g().domain();
        let cells: Vec<usize> = (0..domain.num_cells()).filter(|&c| domain.is_inside(c)).collect();
        if cells.len() > MAX_ORACLE_CELLS {
            return Err(Error::Precondition(format!(
                "oracle grid too large: {} cells (at most {MAX_ORACLE_CELLS})",
                cells.len()
            )));
        }
        let mut var_of = vec![usize::MAX; domain.num_cells()];
        for (v, &c) in cells.iter().enumerate() {
            var_of[c] = v;
        }
        let f = problem.functional();
        let node_vars = (0..f.nodes().len())
            .map(|k| f.stencil_cells(k).map(|c| var_of[c]).collect())
            .collect();
        Ok(Compiled {
            g: cells.iter().map(|&c| problem.g().value(c)).collect(),
            cells,
            node_vars,
            weight: f.weight(),
            scale: problem.fidelity_scale(),
        })
    }

    fn to_function(&self, problem: &DenoiseProblem, vals: &[f64]) -> Result<GridFunction> {
        let domain = problem.g().domain();
        let mut values = vec![0.0; domain.num_cells()];
        for (v, &c) in self.cells.iter().enumerate() {
            values[c] = vals[v];
        }
        GridFunction::new(domain.clone(), values)
    }

    fn set_energy(&self, problem: &DenoiseProblem, bits: u32, linear: &[f64]) -> f64 {
        let potential = problem.potential();
        let mut tv = 0.0;
        for vars in &self.node_vars {
            let mut mask = 0u32;
            for (i, &v) in vars.iter().enumerate() {
                mask |= ((bits >> v) & 1) << i;
            }
            tv += potential.value(mask);
        }
        let mut lin = 0.0;
        for (v, &a) in linear.iter().enumerate() {
            if bits >> v & 1 == 1 {
                lin += a;
            }
        }
        self.weight * tv + lin
    }
}

/// Largest minimizer of `J_h(E) + λh^N Σ_{x∈E} 2(s - g(x))` over all
/// subsets, as a bit mask over variables.
fn largest_minimizer(c: &Compiled, problem: &DenoiseProblem, s: f64) -> Result<u32> {
    let n = c.cells.len();
    let linear: Vec<f64> = c.g.iter().map(|g| c.scale * 2.0 * (s - g)).collect();
    let energies: Vec<f64> = (0..1u32 << n)
        .map(|bits| c.set_energy(problem, bits, &linear))
        .collect();
    let min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let magnitude = 1.0
        + c.weight * c.node_vars.len() as f64 * problem.potential().max_value()
        + linear.iter().map(|a| a.abs()).sum::<f64>();
    let eps = 1e-12 * magnitude;
    let union = energies
        .iter()
        .enumerate()
        .filter(|(_, &e)| e <= min + eps)
        .fold(0u32, |acc, (bits, _)| acc | bits as u32);
    if energies[union as usize] > min + 2.0 * eps {
        return Err(Error::Internal(format!(
            "minimizers at threshold {s} are not closed under union; the potential is not submodular"
        )));
    }
    Ok(union)
}

fn enumerate(c: &Compiled, problem: &DenoiseProblem) -> Vec<f64> {
    let levels = problem.level_grid();
    let n = c.cells.len();
    let mut idx = vec![0usize; n];
    let mut vals = vec![levels[0]; n];
    let mut best = (f64::INFINITY, vals.clone());
    let potential = problem.potential();
    let mut buf = Vec::new();
    loop {
        let mut tv = 0.0;
        for vars in &c.node_vars {
            buf.clear();
            buf.extend(vars.iter().map(|&v| vals[v]));
            tv += potential.extend_unchecked(&buf);
        }
        let fid: f64 = vals.iter().zip(&c.g).map(|(u, g)| (u - g) * (u - g)).sum();
        let e = c.weight * tv + c.scale * fid;
        if e < best.0 {
            best = (e, vals.clone());
        }
        // odometer
        let mut k = 0;
        loop {
            if k == n {
                return best.1;
            }
            idx[k] += 1;
            if idx[k] < levels.len() {
                vals[k] = levels[idx[k]];
                break;
            }
            idx[k] = 0;
            vals[k] = levels[0];
            k += 1;
        }
    }
}

fn frontier_dp(c: &Compiled, problem: &DenoiseProblem) -> Result<Vec<f64>> {
    let levels = problem.level_grid();
    let potential = problem.potential();
    let n = c.cells.len();
    // a term is added once its last variable is assigned
    let mut terms_at = vec![Vec::new(); n];
    let mut last_use: Vec<usize> = (0..n).collect();
    for (k, vars) in c.node_vars.iter().enumerate() {
        let done = *vars.iter().max().expect("stencil is nonempty");
        terms_at[done].push(k);
        for &v in vars {
            last_use[v] = last_use[v].max(done);
        }
    }

    // layer t holds (state, cost, parent, level) after assigning variable t
    let mut frontier: Vec<usize> = Vec::new();
    let mut states: Vec<(Vec<u8>, f64)> = vec![(Vec::new(), 0.0)];
    let mut back: Vec<Vec<(usize, u8)>> = Vec::with_capacity(n);
    let mut buf = Vec::new();
    #[allow(clippy::needless_range_loop)]
    for t in 0..n {
        let mut full = frontier.clone();
        full.push(t);
        let keep: Vec<usize> = (0..full.len()).filter(|&i| last_use[full[i]] > t).collect();
        let term_pos: Vec<Vec<usize>> = terms_at[t]
            .iter()
            .map(|&k| {
                c.node_vars[k]
                    .iter()
                    .map(|v| full.binary_search(v).expect("term variables are active"))
                    .collect()
            })
            .collect();
        let mut next: BTreeMap<Vec<u8>, (f64, usize, u8)> = BTreeMap::new();
        let mut assignment = Vec::with_capacity(full.len());
        for (parent, (key, cost)) in states.iter().enumerate() {
            for (li, &level) in levels.iter().enumerate() {
                assignment.clear();
                assignment.extend_from_slice(key);
                assignment.push(li as u8);
                let mut tv = 0.0;
                for pos in &term_pos {
                    buf.clear();
                    buf.extend(pos.iter().map(|&p| levels[usize::from(assignment[p])]));
                    tv += potential.extend_unchecked(&buf);
                }
                let d = level - c.g[t];
                let total = cost + c.weight * tv + c.scale * d * d;
                let new_key: Vec<u8> = keep.iter().map(|&i| assignment[i]).collect();
                match next.get_mut(&new_key) {
                    Some(slot) if slot.0 <= total => {}
                    Some(slot) => *slot = (total, parent, li as u8),
                    None => {
                        next.insert(new_key, (total, parent, li as u8));
                    }
                }
            }
        }
        if next.len() > DP_STATE_LIMIT {
            return Err(Error::Precondition(format!(
                "exhaustive search frontier too large ({} states)",
                next.len()
            )));
        }
        frontier = keep.iter().map(|&i| full[i]).collect();
        let mut layer = Vec::with_capacity(next.len());
        states = Vec::with_capacity(next.len());
        for (key, (cost, parent, li)) in next {
            layer.push((parent, li));
            states.push((key, cost));
        }
        back.push(layer);
    }
    if states.len() != 1 {
        return Err(Error::Internal("frontier did not close".into()));
    }
    let mut vals = vec![0.0; n];
    let mut id = 0;
    for t in (0..n).rev() {
        let (parent, li) = back[t][id];
        vals[t] = levels[usize::from(li)];
        id = parent;
    }
    Ok(vals)
}

/// Minimizer of the energy over functions with values in the level grid.
pub fn level_function_search(
    problem: &DenoiseProblem,
    method: SearchMethod,
) -> Result<(GridFunction, f64)> {
    let c = Compiled::new(problem)?;
    let n = c.cells.len();
    let l = problem.level_grid().len() as u64;
    if l > u64::from(u8::MAX) + 1 {
        return Err(Error::Precondition(format!("{l} levels exceed the search limit of 256")));
    }
    let small = l.checked_pow(n as u32).is_some_and(|t| t <= ENUMERATION_LIMIT);
    let vals = match method {
        SearchMethod::Enumerate => {
            if !small {
                return Err(Error::Precondition(format!(
                    "{l}^{n} functions exceed the enumeration limit"
                )));
            }
            enumerate(&c, problem)
        }
        SearchMethod::FrontierDp => frontier_dp(&c, problem)?,
        SearchMethod::Auto if small => enumerate(&c, problem),
        SearchMethod::Auto => frontier_dp(&c, problem)?,
    };
    let u = c.to_function(problem, &vals)?;
    let e = problem.energy(&u)?;
    Ok((u, e))
}

pub(super) fn solve(problem: &DenoiseProblem) -> Result<DenoiseResult> {
    let c = Compiled::new(problem)?;
    let levels = problem.level_grid();
    let thresholds = problem.thresholds();
    let mut masks: Vec<u32> = Vec::with_capacity(thresholds.len());
    for (k, &s) in thresholds.iter().enumerate() {
        let m = largest_minimizer(&c, problem, s)?;
        if k > 0 && m & !masks[k - 1] != 0 {
            return Err(Error::Internal(format!(
                "level sets not nested between thresholds {} and {s}; the potential is not submodular",
                thresholds[k - 1]
            )));
        }
        masks.push(m);
    }
    let vals: Vec<f64> = (0..c.cells.len())
        .map(|v| {
            let top = masks.iter().rposition(|m| m >> v & 1 == 1);
            top.map_or(levels[0], |k| levels[k + 1])
        })
        .collect();
    let u = c.to_function(problem, &vals)?;
    let level_set_energy = problem.energy(&u)?;
    let (_, exhaustive_energy) = level_function_search(problem, SearchMethod::Auto)?;
    if (level_set_energy - exhaustive_energy).abs() > 1e-9 * level_set_energy.abs().max(1.0) {
        return Err(Error::Internal(format!(
            "oracles disagree: level sets give {level_set_energy}, direct search gives {exhaustive_energy}"
        )));
    }
    let domain: &Arc<_> = problem.g().domain();
    let level_sets = masks
        .iter()
        .map(|&m| {
            let mut member = vec![false; domain.num_cells()];
            for (v, &cell) in c.cells.iter().enumerate() {
                member[cell] = m >> v & 1 == 1;
            }
            GridSet::new(domain.clone(), member)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DenoiseResult {
        u,
        energy: level_set_energy,
        solver: SolverKind::Oracle,
        iterations: None,
        residual: None,
        warning: None,
        trace: Vec::new(),
        oracle: Some(OracleReport {
            thresholds,
            level_sets,
            level_set_energy,
            exhaustive_energy,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::GridDomain;
    use crate::presets;
    use crate::stencil::Stencil;
    use crate::StencilPotential;

    fn line(values: Vec<f64>) -> GridFunction {
        let n = values.len();
        let d = Arc::new(GridDomain::new(1.0, vec![0], vec![n]).unwrap());
        GridFunction::new(d, values).unwrap()
    }

    #[test]
    fn shrunk_step_in_one_dimension() {
        let g = line(vec![0.0, 0.0, 1.0, 1.0]);
        let p = DenoiseProblem::new(g, presets::nearest_neighbor(1), 1.0)
            .unwrap()
            .with_refined_levels(2)
            .unwrap();
        let r = p.solve_oracle().unwrap();
        assert_eq!(r.u.values(), &[0.25, 0.25, 0.75, 0.75]);
        assert!((r.energy - 0.75).abs() < 1e-15);
        let rep = r.oracle.unwrap();
        assert!((rep.exhaustive_energy - rep.level_set_energy).abs() < 1e-12);
    }

    #[test]
    fn constant_datum_is_fixed() {
        let g = line(vec![0.3; 5]);
        let p = DenoiseProblem::new(g.clone(), presets::nearest_neighbor(1), 1.0).unwrap();
        let r = p.solve_oracle().unwrap();
        assert_eq!(r.u, g);
        assert_eq!(r.energy, 0.0);
    }

    #[test]
    fn frontier_dp_matches_enumeration() {
        let d = Arc::new(GridDomain::new(0.25, vec![0, 0], vec![3, 3]).unwrap());
        let vals = vec![0.0, 1.0, 0.5, 1.0, 0.0, 0.5, 0.5, 1.0, 0.0];
        let g = GridFunction::new(d, vals).unwrap();
        for pot in [presets::nearest_neighbor(2), presets::corner_euclidean()] {
            let p = DenoiseProblem::new(g.clone(), pot, 3.0)
                .unwrap()
                .with_level_grid(vec![0.0, 0.5, 1.0])
                .unwrap();
            let (_, a) = level_function_search(&p, SearchMethod::Enumerate).unwrap();
            let (_, b) = level_function_search(&p, SearchMethod::FrontierDp).unwrap();
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn too_many_cells() {
        let d = Arc::new(GridDomain::new(0.1, vec![0, 0], vec![5, 5]).unwrap());
        let g = GridFunction::constant(d, 0.0).unwrap();
        let p = DenoiseProblem::new(g, presets::nearest_neighbor(2), 1.0).unwrap();
        assert!(matches!(p.solve_oracle(), Err(Error::Precondition(_))));
    }

    #[test]
    fn zero_potential_keeps_datum() {
        let stencil = Stencil::new(1, vec![vec![0], vec![1]]).unwrap();
        let pot = StencilPotential::zero(stencil);
        let p = DenoiseProblem::new(line(vec![0.0, 1.0, 0.5]), pot, 1.0).unwrap();
        let r = p.solve_oracle().unwrap();
        assert_eq!(r.u.values(), &[0.0, 1.0, 0.5]);
        assert_eq!(r.energy, 0.0);
    }
}
