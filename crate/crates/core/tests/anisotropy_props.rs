mod common;

use std::f64::consts::{PI, SQRT_2};

use coarea_core::anisotropy::{polyhedral_perimeter, AnisotropyDensity, PolyhedralSet, Rect};
use coarea_core::presets;
use coarea_core::stencil::Stencil;
use coarea_core::StencilPotential;
use proptest::prelude::*;

fn densities() -> Vec<AnisotropyDensity> {
    vec![
        AnisotropyDensity::new(presets::nearest_neighbor(2)),
        AnisotropyDensity::new(presets::corner_euclidean()),
        AnisotropyDensity::new(presets::octagonal()),
    ]
}

#[test]
fn phi_matches_definition_on_sweep() {
    for d in densities() {
        for (a, phi) in d.sweep(720).unwrap() {
            let nu = [a.cos(), a.sin()];
            assert!((phi - common::phi_by_definition(d.potential(), &nu)).abs() < 1e-12);
        }
    }
}

#[test]
fn euclidean_pair_potential_is_crystalline() {
    // the corner potential's unit ball is a polygon, not a disc
    let d = AnisotropyDensity::new(presets::corner_euclidean());
    let radii: Vec<f64> = d
        .frank_diagram(360)
        .unwrap()
        .iter()
        .map(|p| p.point.iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    let lo = radii.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = radii.iter().copied().fold(0.0, f64::max);
    assert!(hi - lo > 0.1, "radius range {lo}..{hi}");
    // on the sector 0 < ν2 < ν1 φ is linear, so that part of the ball is a flat facet
    for k in 1..20 {
        let a = PI / 4.0 * k as f64 / 20.0;
        let nu = [a.cos(), a.sin()];
        let linear = nu[0] + (SQRT_2 - 1.0) * nu[1];
        assert!((d.phi(&nu).unwrap() - linear).abs() < 1e-12);
    }
}

#[test]
fn three_dimensional_nearest_neighbor() {
    let d = AnisotropyDensity::new(presets::nearest_neighbor(3));
    assert_eq!(d.phi(&[1.0, -2.0, 0.5]).unwrap(), 3.5);
}

#[test]
fn zero_potential_has_no_diagram() {
    let d = AnisotropyDensity::new(StencilPotential::zero(Stencil::nearest_neighbor(2)));
    assert!(d.frank_diagram(12).is_err());
}

#[test]
fn edges_on_window_boundary_do_not_count() {
    let d = AnisotropyDensity::new(presets::nearest_neighbor(2));
    let p = PolyhedralSet::rectangle([0.0, 0.0], [0.5, 1.0], Rect::unit()).unwrap();
    let rep = polyhedral_perimeter(&d, &p).unwrap();
    assert!((rep.total - 1.0).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn phi_is_positively_homogeneous(a in -PI..PI, t in 0.0f64..50.0, which in 0usize..3) {
        let d = &densities()[which];
        let nu = [a.cos(), a.sin()];
        let x = d.phi(&[t * nu[0], t * nu[1]]).unwrap();
        let y = t * d.phi(&nu).unwrap();
        prop_assert!((x - y).abs() <= 1e-12 * (1.0 + y));
    }

    #[test]
    fn phi_is_subadditive(p in prop::array::uniform2(-3.0f64..3.0), q in prop::array::uniform2(-3.0f64..3.0), which in 0usize..3) {
        let d = &densities()[which];
        let s = d.phi(&[p[0] + q[0], p[1] + q[1]]).unwrap();
        prop_assert!(s <= d.phi(&p).unwrap() + d.phi(&q).unwrap() + 1e-12);
    }

    #[test]
    fn phi_is_even_for_symmetric_tables(a in -PI..PI, which in 0usize..3) {
        let d = &densities()[which];
        prop_assume!(d.potential().is_complement_symmetric());
        let nu = [a.cos(), a.sin()];
        let x = d.phi(&nu).unwrap();
        let y = d.phi(&[-nu[0], -nu[1]]).unwrap();
        prop_assert!((x - y).abs() <= 1e-12);
    }

    #[test]
    fn frank_points_have_unit_phi(n in 8usize..200, which in 0usize..3) {
        let d = &densities()[which];
        for p in d.frank_diagram(n).unwrap() {
            prop_assert!((d.phi(&p.point).unwrap() - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn perimeter_is_translation_invariant(
        cx in 0.3f64..0.7, cy in 0.3f64..0.7, r in 0.05f64..0.25,
        tx in -0.05f64..0.05, ty in -0.05f64..0.05, which in 0usize..3,
    ) {
        let d = &densities()[which];
        let p = PolyhedralSet::diamond([cx, cy], r, Rect::unit()).unwrap();
        prop_assume!(p.translate([tx, ty]).is_inside_window(1e-9));
        let a = p.perimeter(d).unwrap().total;
        let b = p.translate([tx, ty]).perimeter(d).unwrap().total;
        prop_assert!((a - b).abs() <= 1e-12 * a);
    }

    #[test]
    fn perimeter_is_additive_over_disjoint_sets(
        w1 in 0.05f64..0.3, w2 in 0.05f64..0.3, hgt in 0.1f64..0.8, which in 0usize..3,
    ) {
        // two separated rectangles versus the sum of their perimeters
        let d = &densities()[which];
        let a = PolyhedralSet::rectangle([0.05, 0.1], [0.05 + w1, 0.1 + hgt], Rect::unit()).unwrap();
        let b = PolyhedralSet::rectangle([0.6, 0.1], [0.6 + w2, 0.1 + hgt], Rect::unit()).unwrap();
        let pa = a.perimeter(d).unwrap().total;
        let pb = b.perimeter(d).unwrap().total;
        let phi_x = d.phi(&[1.0, 0.0]).unwrap() + d.phi(&[-1.0, 0.0]).unwrap();
        let phi_y = d.phi(&[0.0, 1.0]).unwrap() + d.phi(&[0.0, -1.0]).unwrap();
        let expected = (w1 + w2) * phi_y + 2.0 * hgt * phi_x;
        prop_assert!((pa + pb - expected).abs() <= 1e-12 * expected);
    }
}
