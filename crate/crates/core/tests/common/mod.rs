#![allow(dead_code)]

use coarea_core::lattice::{GridDomain, GridFunction};
use coarea_core::StencilPotential;

/// Coarea extension by direct integration over the distinct values of `u`:
/// `min u · F(1) + Σ_k (v_k - v_{k+1}) F({u ≥ v_k})`, with `F(1) = 0`.
pub fn lovasz_by_levels(potential: &StencilPotential, u: &[f64]) -> f64 {
    let mut levels: Vec<f64> = u.to_vec();
    levels.sort_by(|a, b| b.partial_cmp(a).unwrap());
    levels.dedup();
    let mut total = 0.0;
    for k in 0..levels.len().saturating_sub(1) {
        let mask = u
            .iter()
            .enumerate()
            .filter(|(_, &x)| x >= levels[k])
            .fold(0u32, |m, (i, _)| m | 1 << i);
        total += (levels[k] - levels[k + 1]) * potential.value(mask);
    }
    total
}

/// `φ(ν)` from the definition `F((ν·y)_{y∈Σ})`.
pub fn phi_by_definition(potential: &StencilPotential, nu: &[f64]) -> f64 {
    let projected: Vec<f64> = potential
        .stencil()
        .offsets()
        .iter()
        .map(|y| y.iter().zip(nu).map(|(a, b)| *a as f64 * b).sum())
        .collect();
    lovasz_by_levels(potential, &projected)
}

/// `J_h` by walking every cell's multi-index and testing every stencil
/// sample for membership in `Ω`.
pub fn jh_by_walking(u: &GridFunction, potential: &StencilPotential) -> f64 {
    let d: &GridDomain = u.domain();
    let n = d.dim();
    let h = d.h();
    let mut total = 0.0;
    for cell in 0..d.num_cells() {
        if !d.is_inside(cell) {
            continue;
        }
        let idx = d.cell_index(cell);
        let mut samples = Vec::new();
        let mut interior = true;
        for y in potential.stencil().offsets() {
            let probe: Vec<i64> = (0..n).map(|k| idx[k] + y[k]).collect();
            match d.cell_at(&probe).filter(|&c| d.is_inside(c)) {
                Some(c) => samples.push(u.value(c)),
                None => {
                    interior = false;
                    break;
                }
            }
        }
        if interior {
            total += lovasz_by_levels(potential, &samples);
        }
    }
    h.powi(n as i32 - 1) * total
}

/// Region formulas of `φ` for the corner potential.
pub fn corner_phi_formula(nu: [f64; 2]) -> f64 {
    let s2 = std::f64::consts::SQRT_2;
    let [a, b] = nu;
    if a * b <= 0.0 {
        a.abs() + b.abs()
    } else if a.abs() >= b.abs() {
        s2 * b.abs() + (a - b).abs()
    } else {
        s2 * a.abs() + (b - a).abs()
    }
}
