//! Built-in potentials.

use crate::potential::StencilPotential;
use crate::stencil::Stencil;

/// `F(u) = Σ_i |u(e_i) - u(0)|` on `Σ = {0, e_1, ..., e_N}`.
pub fn nearest_neighbor(dim: usize) -> StencilPotential {
    let stencil = Stencil::nearest_neighbor(dim);
    StencilPotential::from_fn(stencil, |b| {
        (1..=dim).filter(|&i| b.get(i) != b.get(0)).count() as f64
    })
    .expect("nearest-neighbor table is valid")
}

/// Corner potential on `{(0,0), (1,0), (0,1)}`: the Euclidean norm of the
/// two forward differences, restricted to binary vectors. Takes the values
/// `1`, `1` and `√2` on `{e_1}`, `{e_2}` and `{e_1, e_2}` and is invariant
/// under complement. It is not a sum of pair interactions, and its limit
/// density is crystalline rather than Euclidean.
pub fn corner_euclidean() -> StencilPotential {
    let stencil = Stencil::nearest_neighbor(2);
    StencilPotential::from_fn(stencil, |b| {
        let d1 = f64::from(u8::from(b.get(1) != b.get(0)));
        let d2 = f64::from(u8::from(b.get(2) != b.get(0)));
        (d1 * d1 + d2 * d2).sqrt()
    })
    .expect("corner table is valid")
}

/// Pairwise interactions with the four neighbors `e_1`, `e_2`, `e_1+e_2`,
/// `e_2-e_1`, diagonals weighted by `1/√2`.
pub fn octagonal() -> StencilPotential {
    let stencil = Stencil::new(
        2,
        vec![
            vec![0, 0],
            vec![1, 0],
            vec![0, 1],
            vec![1, 1],
            vec![-1, 1],
        ],
    )
    .expect("octagonal stencil is well formed");
    let w = std::f64::consts::FRAC_1_SQRT_2;
    StencilPotential::from_fn(stencil, |b| {
        let jump = |i: usize| f64::from(u8::from(b.get(i) != b.get(0)));
        jump(1) + jump(2) + w * (jump(3) + jump(4))
    })
    .expect("octagonal table is valid")
}

/// A complement-symmetric corner table that fails submodularity:
/// `F({e_1}) = F({e_2}) = 1` but `F({e_1, e_2}) = 3`.
pub fn non_submodular_corner() -> StencilPotential {
    let stencil = Stencil::nearest_neighbor(2);
    let mut values = vec![0.0; 8];
    for (mask, v) in [(0b010u32, 1.0), (0b100, 1.0), (0b110, 3.0)] {
        values[mask as usize] = v;
        values[(!mask & 0b111) as usize] = v;
    }
    StencilPotential::new(stencil, values).expect("table is structurally valid")
}
