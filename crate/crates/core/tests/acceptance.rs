//! Acceptance suite. Runs every criterion at its pinned tolerance, prints one
//! line per criterion and exits nonzero if any fails.

mod common;

use std::f64::consts::{PI, SQRT_2};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use coarea_core::anisotropy::{AnisotropyDensity, PolyhedralSet, Rect};
use coarea_core::convergence::{ConvergenceExperiment, ConvergenceRow, Geometry};
use coarea_core::denoise::{uniform_level_grid, DenoiseProblem};
use coarea_core::extension::{extension_properties_check, ExtensionProperty};
use coarea_core::lattice::{coarea_check, GridDomain, GridFunction};
use coarea_core::{presets, StencilPotential};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn report(id: &str, name: &str, outcome: &Outcome, elapsed: Duration) -> bool {
    println!(
        "criterion {id:<2} [{}] {name}: {} ({:.2} s)",
        if outcome.pass { "PASS" } else { "FAIL" },
        outcome.detail,
        elapsed.as_secs_f64()
    );
    outcome.pass
}

fn directions(n: usize) -> impl Iterator<Item = [f64; 2]> {
    (0..n).map(move |k| {
        let a = 2.0 * PI * k as f64 / n as f64;
        [a.cos(), a.sin()]
    })
}

fn nearest_neighbor_is_l1() -> Outcome {
    let d = AnisotropyDensity::new(presets::nearest_neighbor(2));
    let worst = directions(360)
        .map(|nu| (d.phi(&nu).unwrap() - (nu[0].abs() + nu[1].abs())).abs())
        .fold(0.0, f64::max);
    Outcome {
        pass: worst <= 1e-12,
        detail: format!("max |phi - l1| = {worst:.2e} over 360 directions"),
    }
}

fn corner_region_formulas() -> Outcome {
    let d = AnisotropyDensity::new(presets::corner_euclidean());
    let worst = directions(360)
        .map(|nu| (d.phi(&nu).unwrap() - common::corner_phi_formula(nu)).abs())
        .fold(0.0, f64::max);
    let diag = d.phi(&[1.0, 1.0]).unwrap();
    let anti = d.phi(&[1.0, -1.0]).unwrap();
    let pass = worst <= 1e-12 && (diag - SQRT_2).abs() <= 1e-12 && (anti - 2.0).abs() <= 1e-12;
    Outcome {
        pass,
        detail: format!(
            "max |phi - formula| = {worst:.2e}, phi(1,1) = {diag:.15}, phi(1,-1) = {anti}"
        ),
    }
}

fn schedule() -> Vec<f64> {
    (4..=8).map(|k| 2f64.powi(-k)).collect()
}

fn rel(row: &ConvergenceRow) -> f64 {
    row.abs_err / row.limit
}

fn halfspace_limits() -> Outcome {
    let mut pass = true;
    let mut worst = 0.0f64;
    let mut lines = Vec::new();
    let normals: [[f64; 2]; 3] = [[1.0, 0.0], [1.0, 1.0], [2.0, 1.0]];
    for (pname, pot) in [
        ("nearest_neighbor", presets::nearest_neighbor(2)),
        ("corner", presets::corner_euclidean()),
    ] {
        for raw in normals {
            let norm = (raw[0] * raw[0] + raw[1] * raw[1]).sqrt();
            let nu: Vec<f64> = vec![raw[0] / norm, raw[1] / norm];
            // interface length inside (-1/2, 1/2)^2 for a line through the center
            let len = 1.0 / nu[0].abs().max(nu[1].abs());
            let expected = common::phi_by_definition(&pot, &nu) * len;
            let exp = ConvergenceExperiment::new(
                Geometry::HalfSpace { nu: nu.clone() },
                vec![-0.5, -0.5],
                vec![0.5, 0.5],
                schedule(),
                pot.clone(),
            )
            .unwrap();
            let rows = exp.run().unwrap();
            let first = rows.first().unwrap();
            let last = rows.last().unwrap();
            let ok_limit = (first.limit - expected).abs() <= 1e-12 * expected;
            let ok = ok_limit && rel(last) <= 0.05 && last.abs_err <= first.abs_err;
            worst = worst.max(rel(last));
            pass &= ok;
            lines.push(format!(
                "{pname} nu=({},{}) rel {:.2e} err(2^-4) {:.2e} err(2^-8) {:.2e}",
                raw[0], raw[1], rel(last), first.abs_err, last.abs_err
            ));
            if !ok {
                println!("    failing: {}", lines.last().unwrap());
            }
        }
    }
    Outcome {
        pass,
        detail: format!("6 experiments, worst relative error at h=2^-8 {worst:.2e}"),
    }
}

fn polygon_limits() -> Outcome {
    let square = PolyhedralSet::rectangle([0.25, 0.25], [0.75, 0.75], Rect::unit()).unwrap();
    let r = 0.3;
    let diamond = PolyhedralSet::diamond([0.5, 0.5], r, Rect::unit()).unwrap();
    let s = r * SQRT_2;
    let cases: Vec<(&str, PolyhedralSet, StencilPotential, f64)> = vec![
        ("square/nearest_neighbor", square.clone(), presets::nearest_neighbor(2), 2.0),
        ("square/corner", square, presets::corner_euclidean(), 2.0),
        ("diamond/corner", diamond, presets::corner_euclidean(), s * (2.0 + 2.0 * SQRT_2)),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, poly, pot, expected) in cases {
        let exp = ConvergenceExperiment::new(
            Geometry::Polygon(poly),
            vec![0.0, 0.0],
            vec![1.0, 1.0],
            schedule(),
            pot,
        )
        .unwrap();
        let rows = exp.run().unwrap();
        let last = rows.last().unwrap();
        let ok = (last.limit - expected).abs() <= 1e-12 * expected && rel(last) <= 0.05;
        pass &= ok;
        parts.push(format!("{name} limit {:.6} rel {:.2e}", last.limit, rel(last)));
    }
    Outcome {
        pass,
        detail: parts.join("; "),
    }
}

fn coarea_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0A5EA);
    let mut worst_ratio = 0.0f64;
    let mut pass = true;
    for i in 0..200 {
        let pot = if i % 2 == 0 {
            presets::nearest_neighbor(2)
        } else {
            presets::corner_euclidean()
        };
        let rows = rng.gen_range(2..=32);
        let cols = rng.gen_range(2..=32);
        let k = rng.gen_range(1..=8);
        let palette: Vec<f64> = (0..k).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let d = Arc::new(GridDomain::new(1.0 / 32.0, vec![0, 0], vec![cols, rows]).unwrap());
        let values = (0..rows * cols).map(|_| palette[rng.gen_range(0..k)]).collect();
        let u = GridFunction::new(d, values).unwrap();
        let rep = coarea_check(&u, &pot).unwrap();
        let walked = common::jh_by_walking(&u, &pot);
        let bound = 1e-10 * (1.0 + rep.lhs);
        worst_ratio = worst_ratio.max(rep.gap / bound);
        pass &= rep.gap <= bound && (walked - rep.lhs).abs() <= bound;
    }
    Outcome {
        pass,
        detail: format!("200 grids, worst gap / (1e-10 (1 + lhs)) = {worst_ratio:.2e}"),
    }
}

fn extension_properties() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, pot) in [
        ("nearest_neighbor", presets::nearest_neighbor(2)),
        ("corner", presets::corner_euclidean()),
        ("octagonal", presets::octagonal()),
    ] {
        let rep = extension_properties_check(&pot, 1000, 7);
        let ok = ExtensionProperty::ALL.iter().all(|&p| rep.passed(p)) && rep.samples == 1000;
        pass &= ok;
        parts.push(format!("{name} {} failures", rep.failures.len()));
    }
    Outcome {
        pass,
        detail: format!("1000 samples each: {}", parts.join(", ")),
    }
}

/// Minimum over all level-valued functions by direct enumeration.
fn brute_force_levels(p: &DenoiseProblem) -> f64 {
    let d = p.g().domain().clone();
    let n = d.num_cells();
    let levels = p.level_grid();
    let mut best = f64::INFINITY;
    for code in 0..levels.len().pow(n as u32) {
        let mut c = code;
        let values: Vec<f64> = (0..n)
            .map(|_| {
                let l = levels[c % levels.len()];
                c /= levels.len();
                l
            })
            .collect();
        let u = GridFunction::new(d.clone(), values).unwrap();
        best = best.min(p.energy(&u).unwrap());
    }
    best
}

struct DenoiseMatrix {
    oracle: Outcome,
    sup_norm_excess: f64,
    runs: usize,
}

fn denoiser_oracles() -> DenoiseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD3);
    let levels = uniform_level_grid(0.0, 1.0, 4).unwrap();
    let mut max_ab = 0.0f64;
    let mut max_rel = f64::NEG_INFINITY;
    let mut brute_checked = 0;
    let mut pass = true;
    let mut excess = f64::NEG_INFINITY;
    let mut runs = 0;
    for i in 0..50 {
        let rows = rng.gen_range(2..=4);
        let cols = rng.gen_range(2..=4);
        let d = Arc::new(GridDomain::new(0.25, vec![0, 0], vec![cols, rows]).unwrap());
        let values = (0..rows * cols)
            .map(|_| levels[rng.gen_range(0..levels.len())])
            .collect();
        let g = GridFunction::new(d, values).unwrap();
        let pot = if i % 2 == 0 {
            presets::nearest_neighbor(2)
        } else {
            presets::corner_euclidean()
        };
        let lambda = [0.1, 1.0, 10.0][i % 3];
        let p = DenoiseProblem::new(g.clone(), pot, lambda)
            .unwrap()
            .with_level_grid(levels.clone())
            .unwrap();
        let oracle = p.solve_oracle().unwrap();
        let rep = oracle.oracle.as_ref().unwrap();
        let ab = (rep.level_set_energy - rep.exhaustive_energy).abs();
        max_ab = max_ab.max(ab);
        let nested = rep
            .level_sets
            .windows(2)
            .all(|w| w[1].is_subset(&w[0]));
        if g.domain().num_cells() <= 8 {
            let brute = brute_force_levels(&p);
            pass &= (brute - rep.exhaustive_energy).abs() <= 1e-9;
            brute_checked += 1;
        }
        let fo = p.solve_first_order(50_000, 1e-9).unwrap();
        let r = (fo.energy - oracle.energy) / oracle.energy.abs().max(f64::MIN_POSITIVE);
        max_rel = max_rel.max(r);
        pass &= ab <= 1e-9 && nested && fo.energy <= oracle.energy * (1.0 + 1e-3);
        for u in [&oracle.u, &fo.u] {
            excess = excess.max(u.max_abs() - g.max_abs());
            runs += 1;
        }
    }
    DenoiseMatrix {
        oracle: Outcome {
            pass,
            detail: format!(
                "50 instances, max |A - B| {max_ab:.2e}, nested level sets, \
                 max (first-order - oracle)/oracle {max_rel:.2e}, {brute_checked} cross-checked by enumeration"
            ),
        },
        sup_norm_excess: excess,
        runs,
    }
}

fn truncation_bound(matrix: &DenoiseMatrix) -> Outcome {
    let mut excess = matrix.sup_norm_excess;
    let mut runs = matrix.runs;
    let mut rng = ChaCha8Rng::seed_from_u64(0x7C);
    // larger first-order runs: noisy step and dominant fidelity
    let d = Arc::new(GridDomain::new(1.0 / 64.0, vec![0, 0], vec![64, 64]).unwrap());
    let values: Vec<f64> = (0..d.num_cells())
        .map(|c| {
            let step = if d.cell_center(c)[0] > 0.5 { 1.0 } else { -1.0 };
            step + 0.3 * (rng.gen::<f64>() - 0.5)
        })
        .collect();
    let g = GridFunction::new(d, values).unwrap();
    for (pot, lambda) in [
        (presets::nearest_neighbor(2), 20.0),
        (presets::corner_euclidean(), 5.0),
        (presets::nearest_neighbor(2), 1e6),
    ] {
        let p = DenoiseProblem::new(g.clone(), pot, lambda).unwrap();
        let r = p.solve_first_order(300, 1e-6).unwrap();
        excess = excess.max(r.u.max_abs() - g.max_abs());
        runs += 1;
    }
    Outcome {
        pass: excess <= 1e-12,
        detail: format!("{runs} outputs, max (|u|_inf - |g|_inf) = {excess:.2e}"),
    }
}

fn main() -> ExitCode {
    let mut all = true;
    let mut run = |id: &str, name: &str, limit: Option<f64>, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let mut outcome = f();
        let elapsed = t.elapsed();
        if let Some(secs) = limit {
            if elapsed.as_secs_f64() > secs {
                outcome.pass = false;
                outcome.detail.push_str(&format!(", exceeded {secs} s"));
            }
        }
        all &= report(id, name, &outcome, elapsed);
    };
    run("1", "nearest-neighbor anisotropy is the l1 norm", Some(1.0), &mut nearest_neighbor_is_l1);
    run("2", "corner potential region formulas", Some(1.0), &mut corner_region_formulas);
    run("3", "half-space limits", Some(30.0), &mut halfspace_limits);
    run("4", "polygon perimeters", None, &mut polygon_limits);
    run("5", "coarea identity on random grids", Some(10.0), &mut coarea_identity);
    run("6", "extension properties", None, &mut extension_properties);
    let t = Instant::now();
    let matrix = denoiser_oracles();
    all &= report("7", "denoiser oracle equivalence", &matrix.oracle, t.elapsed());
    let t = Instant::now();
    let trunc = truncation_bound(&matrix);
    all &= report("8", "denoiser sup-norm bound", &trunc, t.elapsed());
    println!(
        "criterion 9  [N/A ] asymptotic statements: the liminf inequality over arbitrary L1 sequences \
         and L1 convergence of denoised minimizers as h -> 0 have no finite certificate; \
         criteria 3, 4 and 7 check their finite counterparts"
    );
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
