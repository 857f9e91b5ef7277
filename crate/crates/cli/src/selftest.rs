//! Fixed-seed property suites behind `coarea selftest`.

use std::sync::Arc;

use coarea_core::anisotropy::AnisotropyDensity;
use coarea_core::convergence::{dyadic_schedule, ConvergenceExperiment, Geometry};
use coarea_core::denoise::{uniform_level_grid, DenoiseProblem};
use coarea_core::extension::extension_properties_check;
use coarea_core::lattice::{
    coarea_check, eval_jh, submodularity_of_jh_check, GridDomain, GridFunction, GridSet,
};
use coarea_core::{presets, StencilPotential};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn presets_2d() -> Vec<(&'static str, StencilPotential)> {
    vec![
        ("nearest_neighbor", presets::nearest_neighbor(2)),
        ("corner_euclidean", presets::corner_euclidean()),
        ("octagonal", presets::octagonal()),
    ]
}

fn random_grid(rng: &mut ChaCha8Rng, max: usize) -> GridFunction {
    let cols = rng.gen_range(2..=max);
    let rows = rng.gen_range(2..=max);
    let d = Arc::new(GridDomain::new(0.125, vec![0, 0], vec![cols, rows]).expect("valid grid"));
    let values = (0..cols * rows)
        .map(|_| {
            if rng.gen_bool(0.5) {
                f64::from(rng.gen_range(-3i32..=3))
            } else {
                rng.gen_range(-2.0..2.0)
            }
        })
        .collect();
    GridFunction::new(d, values).expect("finite values")
}

fn submodular_presets() -> Outcome {
    for (name, p) in presets_2d() {
        let rep = p.check_submodular();
        if !rep.ok {
            return Err(format!("{name}: witness {:?}", rep.witness));
        }
    }
    let bad = presets::non_submodular_corner().check_submodular();
    if bad.ok {
        return Err("non-submodular table accepted".into());
    }
    Ok("3 presets accepted, counterexample rejected".into())
}

fn coercivity_constants() -> Outcome {
    let nn = presets::nearest_neighbor(2).coercivity_c();
    let corner = presets::corner_euclidean().coercivity_c();
    let expected = std::f64::consts::FRAC_1_SQRT_2;
    if (nn - 1.0).abs() > 1e-12 || (corner - expected).abs() > 1e-12 {
        return Err(format!("nearest_neighbor c = {nn}, corner c = {corner}"));
    }
    Ok(format!("nearest_neighbor c = {nn}, corner c = {corner:.6}"))
}

fn extension_properties(seed: u64) -> Outcome {
    for (name, p) in presets_2d() {
        let rep = extension_properties_check(&p, 1000, seed);
        if !rep.ok() {
            return Err(format!("{name}: {} failures", rep.failures.len()));
        }
    }
    Ok("1000 samples per preset".into())
}

fn density_formulas() -> Outcome {
    let nn = AnisotropyDensity::new(presets::nearest_neighbor(2));
    let corner = AnisotropyDensity::new(presets::corner_euclidean());
    let mut worst = 0.0f64;
    for k in 0..360 {
        let a = (k as f64).to_radians();
        let (c, s) = (a.cos(), a.sin());
        let got = nn.phi(&[c, s]).map_err(|e| e.to_string())?;
        worst = worst.max((got - (c.abs() + s.abs())).abs());
        let expected = if c * s <= 0.0 {
            c.abs() + s.abs()
        } else {
            2f64.sqrt() * c.abs().min(s.abs()) + (c - s).abs()
        };
        let got = corner.phi(&[c, s]).map_err(|e| e.to_string())?;
        worst = worst.max((got - expected).abs());
    }
    if worst > 1e-12 {
        return Err(format!("worst deviation {worst:.3e}"));
    }
    Ok(format!("360 directions, worst deviation {worst:.1e}"))
}

fn lattice_identities(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pots = presets_2d();
    for i in 0..50 {
        let (name, pot) = &pots[i % pots.len()];
        let u = random_grid(&mut rng, 8);
        let rep = coarea_check(&u, pot).map_err(|e| e.to_string())?;
        if !rep.holds() {
            return Err(format!("{name}: coarea gap {:.3e}", rep.gap));
        }
        let t = rng.gen_range(0.0..5.0);
        let s = rng.gen_range(-3.0..3.0);
        let base = eval_jh(&u, pot).map_err(|e| e.to_string())?;
        let scaled = eval_jh(&u.map(|x| t * x + s).map_err(|e| e.to_string())?, pot)
            .map_err(|e| e.to_string())?;
        if (scaled - t * base).abs() > 1e-9 * (1.0 + t * base) {
            return Err(format!("{name}: J_h(tu + s) = {scaled}, t J_h(u) = {}", t * base));
        }
        let d = u.domain().clone();
        let n = d.num_cells();
        let a = GridSet::new(d.clone(), (0..n).map(|_| rng.gen_bool(0.5)).collect())
            .map_err(|e| e.to_string())?;
        let b = GridSet::new(d, (0..n).map(|_| rng.gen_bool(0.5)).collect())
            .map_err(|e| e.to_string())?;
        let rep = submodularity_of_jh_check(&a, &b, pot).map_err(|e| e.to_string())?;
        if !rep.ok {
            return Err(format!("{name}: J_h not submodular on random sets"));
        }
    }
    Ok("50 random grids: coarea, homogeneity, shift, lattice inequality".into())
}

fn halfspace_convergence() -> Outcome {
    let nu = [std::f64::consts::FRAC_1_SQRT_2; 2];
    let exp = ConvergenceExperiment::new(
        Geometry::HalfSpace { nu: nu.to_vec() },
        vec![-0.5, -0.5],
        vec![0.5, 0.5],
        dyadic_schedule(1.0 / 16.0, 1.0 / 256.0).map_err(|e| e.to_string())?,
        presets::corner_euclidean(),
    )
    .map_err(|e| e.to_string())?;
    let rows = exp.run().map_err(|e| e.to_string())?;
    let last = rows.last().ok_or("empty schedule")?;
    if last.rel_err() > 0.05 {
        return Err(format!("relative error {:.3e} at h = {}", last.rel_err(), last.h));
    }
    Ok(format!("relative error {:.3e} at h = 1/256", last.rel_err()))
}

fn denoise_agreement(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let levels = uniform_level_grid(0.0, 1.0, 4).map_err(|e| e.to_string())?;
    let mut worst_excess = 0.0f64;
    for i in 0..10 {
        let cols = rng.gen_range(2..=3);
        let rows = rng.gen_range(2..=3);
        let d = Arc::new(GridDomain::new(0.25, vec![0, 0], vec![cols, rows]).map_err(|e| e.to_string())?);
        let values = (0..cols * rows).map(|_| levels[rng.gen_range(0..4)]).collect();
        let g = GridFunction::new(d, values).map_err(|e| e.to_string())?;
        let pot = if i % 2 == 0 {
            presets::nearest_neighbor(2)
        } else {
            presets::corner_euclidean()
        };
        let p = DenoiseProblem::new(g.clone(), pot, 0.5 + i as f64)
            .and_then(|p| p.with_level_grid(levels.clone()))
            .map_err(|e| e.to_string())?;
        let oracle = p.solve_oracle().map_err(|e| e.to_string())?;
        let fo = p.solve_first_order(20_000, 1e-9).map_err(|e| e.to_string())?;
        if fo.u.max_abs() > g.max_abs() + 1e-12 {
            return Err("first-order output exceeds the datum's sup norm".into());
        }
        let excess = (fo.energy - oracle.energy) / oracle.energy.max(1e-300);
        if excess > 1e-3 {
            return Err(format!("first-order energy exceeds oracle by {excess:.3e}"));
        }
        worst_excess = worst_excess.max(excess);
    }
    Ok(format!("10 instances, first-order excess ≤ {worst_excess:.2e}"))
}

/// Runs every suite and prints one line each. Returns `true` if all pass.
pub fn run(seed: u64) -> bool {
    let suites: Vec<(&str, Outcome)> = vec![
        ("submodularity of presets", submodular_presets()),
        ("coercivity constants", coercivity_constants()),
        ("extension properties", extension_properties(seed)),
        ("closed-form densities", density_formulas()),
        ("lattice identities", lattice_identities(seed)),
        ("half-space convergence", halfspace_convergence()),
        ("denoise oracle vs first-order", denoise_agreement(seed)),
    ];
    let mut all = true;
    for (name, outcome) in suites {
        match outcome {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(detail) => {
                all = false;
                println!("[FAIL] {name}: {detail}");
            }
        }
    }
    println!("selftest seed={seed}: {}", if all { "all passed" } else { "FAILED" });
    all
}
