//! The discrete functional
//!
//! ```text
//! J_h(u, Ω) = h^{N-1} Σ_{x ∈ I^h(Ω)} F(u[x + hΣ])
//! ```
//!
//! where `I^h(Ω)` holds the nodes `x` whose sample points `x + hy`, `y ∈ Σ`,
//! all fall in cells of `Ω`. Terms are summed in lexicographic node order,
//! so results are reproducible bit for bit.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::domain::GridDomain;
use crate::lattice::function::{GridFunction, GridSet};
use crate::potential::StencilPotential;
use crate::stencil::Stencil;

/// Nodes of `I^h(Ω)` as flat cell indices, in lexicographic order.
pub fn interior_nodes(domain: &GridDomain, stencil: &Stencil) -> Result<Vec<usize>> {
    if stencil.dim() != domain.dim() {
        return Err(Error::DimensionMismatch {
            expected: domain.dim(),
            found: stencil.dim(),
        });
    }
    let mut nodes = Vec::new();
    let mut probe = vec![0i64; domain.dim()];
    for cell in 0..domain.num_cells() {
        if !domain.is_inside(cell) {
            continue;
        }
        let index = domain.cell_index(cell);
        let interior = stencil.offsets().iter().all(|y| {
            for k in 0..probe.len() {
                probe[k] = index[k] + y[k];
            }
            domain.cell_at(&probe).is_some_and(|c| domain.is_inside(c))
        });
        if interior {
            nodes.push(cell);
        }
    }
    Ok(nodes)
}

/// `J_h(·, Ω)` for a fixed domain and potential, with the interior node
/// list and stencil cell offsets precomputed.
#[derive(Debug, Clone)]
pub struct LatticeFunctional {
    domain: Arc<GridDomain>,
    potential: StencilPotential,
    nodes: Vec<usize>,
    flat_offsets: Vec<isize>,
    weight: f64,
}

impl LatticeFunctional {
    pub fn new(domain: Arc<GridDomain>, potential: StencilPotential) -> Result<Self> {
        let nodes = interior_nodes(&domain, potential.stencil())?;
        let strides = domain.strides();
        let flat_offsets = potential
            .stencil()
            .offsets()
            .iter()
            .map(|y| {
                y.iter()
                    .zip(strides)
                    .map(|(&c, &s)| c as isize * s as isize)
                    .sum()
            })
            .collect();
        let weight = domain.h().powi(domain.dim() as i32 - 1);
        Ok(LatticeFunctional {
            domain,
            potential,
            nodes,
            flat_offsets,
            weight,
        })
    }

    pub fn domain(&self) -> &Arc<GridDomain> {
        &self.domain
    }

    pub fn potential(&self) -> &StencilPotential {
        &self.potential
    }

    /// Interior nodes, lexicographic.
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    /// `h^{N-1}`.
    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// Cells `x + hy`, `y ∈ Σ`, seen by the `k`-th interior node.
    #[inline]
    pub fn stencil_cells(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        let node = self.nodes[k] as isize;
        self.flat_offsets.iter().map(move |&o| (node + o) as usize)
    }

    /// `u[x + hΣ]` for the `k`-th interior node.
    #[inline]
    pub fn gather_into(&self, k: usize, values: &[f64], out: &mut [f64]) {
        for (slot, cell) in out.iter_mut().zip(self.stencil_cells(k)) {
            *slot = values[cell];
        }
    }

    /// Unweighted term `F(u[x + hΣ])` of the `k`-th node.
    #[inline]
    pub fn node_term(&self, k: usize, values: &[f64]) -> f64 {
        let mut buf = [0.0; crate::stencil::MAX_STENCIL_LEN];
        let buf = &mut buf[..self.flat_offsets.len()];
        self.gather_into(k, values, buf);
        self.potential.extend_unchecked(buf)
    }

    /// Unweighted binary term `F(χ_E[x + hΣ])` by table lookup.
    #[inline]
    pub fn node_term_mask(&self, k: usize, member: &[bool]) -> f64 {
        let mask = self
            .stencil_cells(k)
            .enumerate()
            .fold(0u32, |m, (i, c)| m | (u32::from(member[c]) << i));
        self.potential.value(mask)
    }

    /// `J_h` on raw per-cell values (no domain check).
    pub fn eval_values(&self, values: &[f64]) -> f64 {
        let sum: f64 = (0..self.nodes.len()).map(|k| self.node_term(k, values)).sum();
        self.weight * sum
    }

    /// `J_h` on raw membership bits (no domain check).
    pub fn eval_members(&self, member: &[bool]) -> f64 {
        let sum: f64 = (0..self.nodes.len())
            .map(|k| self.node_term_mask(k, member))
            .sum();
        self.weight * sum
    }

    pub fn eval(&self, u: &GridFunction) -> Result<f64> {
        u.require_same_domain(&self.domain)?;
        Ok(self.eval_values(u.values()))
    }

    pub fn eval_set(&self, e: &GridSet) -> Result<f64> {
        if !(Arc::ptr_eq(e.domain(), &self.domain) || **e.domain() == *self.domain) {
            return Err(Error::Precondition("set lives on a different domain".into()));
        }
        Ok(self.eval_members(e.members()))
    }

    /// Position of `node` in the interior node list.
    pub fn node_position(&self, node: usize) -> Option<usize> {
        self.nodes.binary_search(&node).ok()
    }
}

/// `u[x + hΣ]` at the interior node `node` (a flat cell index).
pub fn gather(u: &GridFunction, node: usize, stencil: &Stencil) -> Result<Vec<f64>> {
    let domain = u.domain();
    if stencil.dim() != domain.dim() {
        return Err(Error::DimensionMismatch {
            expected: domain.dim(),
            found: stencil.dim(),
        });
    }
    if node >= domain.num_cells() {
        return Err(Error::Precondition(format!("node {node} outside the grid")));
    }
    let index = domain.cell_index(node);
    stencil
        .offsets()
        .iter()
        .map(|y| {
            let probe: Vec<i64> = index.iter().zip(y).map(|(a, b)| a + b).collect();
            domain
                .cell_at(&probe)
                .filter(|&c| domain.is_inside(c))
                .map(|c| u.value(c))
                .ok_or_else(|| {
                    Error::Precondition(format!("node {index:?} is not in I^h(Ω)"))
                })
        })
        .collect()
}

/// `J_h(u, Ω)`.
pub fn eval_jh(u: &GridFunction, potential: &StencilPotential) -> Result<f64> {
    LatticeFunctional::new(u.domain().clone(), potential.clone())?.eval(u)
}

/// `J_h(χ_E, Ω)` via table lookups.
pub fn eval_jh_set(e: &GridSet, potential: &StencilPotential) -> Result<f64> {
    LatticeFunctional::new(e.domain().clone(), potential.clone())?.eval_set(e)
}
