use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn repo_file(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn coarea(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coarea"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_noisy_pgm(path: &Path) {
    let (w, h) = (10, 8);
    let mut s = format!("P2\n# test image\n{w} {h}\n255\n");
    for r in 0..h {
        let row: Vec<String> = (0..w)
            .map(|c| {
                let base = if c >= w / 2 { 190 } else { 50 };
                // deterministic pseudo-noise
                let n = (c * 7 + r * 13) % 11 - 5;
                (base + 4 * n).to_string()
            })
            .collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    fs::write(path, s).unwrap();
}

fn header_line(path: &Path) -> String {
    fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}

#[test]
fn check_accepts_bundled_potentials() {
    for name in ["nearest_neighbor", "corner_euclidean", "octagonal", "nearest_neighbor_3d"] {
        let p = repo_file(&format!("potentials/{name}.pot"));
        let out = coarea(&["check", path_str(&p), "--samples", "200"]);
        assert_eq!(code(&out), 0, "{name}: {}", String::from_utf8_lossy(&out.stdout));
    }
    let out = coarea(&["check", path_str(&repo_file("potentials/corner_euclidean.pot"))]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("c = 0.7071067811865476"), "{stdout}");
}

#[test]
fn check_rejects_non_submodular_with_witness() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("bad.pot");
    fs::write(
        &p,
        "dim 2\nsymmetric_complement\noffsets\n0 0\n1 0\n0 1\nvalues\n0b000 0\n0b010 1\n0b100 1\n0b110 3\n",
    )
    .unwrap();
    let out = coarea(&["check", path_str(&p)]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    if code(&out) == 2 {
        panic!("fixture did not parse: {}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(code(&out), 1, "{stdout}");
    assert!(stdout.contains("witness"), "{stdout}");
}

#[test]
fn corrupted_potential_is_a_parse_error() {
    let dir = TempDir::new().unwrap();
    let good = fs::read_to_string(repo_file("potentials/corner_euclidean.pot")).unwrap();
    let p = dir.path().join("broken.pot");
    let truncated: Vec<&str> = good.lines().take(good.lines().count() - 2).collect();
    fs::write(&p, truncated.join("\n")).unwrap();
    assert_eq!(code(&coarea(&["check", path_str(&p)])), 2);
    fs::write(&p, good.replace("0b010 1", "0b010 one")).unwrap();
    assert_eq!(code(&coarea(&["check", path_str(&p)])), 2);
    let missing = dir.path().join("missing.pot");
    assert_eq!(code(&coarea(&["check", path_str(&missing)])), 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&coarea(&["no-such-command"])), 2);
    assert_eq!(code(&coarea(&["denoise", "--lambda", "1"])), 2);
}

#[test]
fn anisotropy_creates_output_dir_and_refuses_zero_potential() {
    let dir = TempDir::new().unwrap();
    let out_dir = dir.path().join("nested/out");
    let out = coarea(&[
        "anisotropy",
        path_str(&repo_file("potentials/octagonal.pot")),
        "--output-dir",
        path_str(&out_dir),
        "--samples",
        "90",
    ]);
    assert_eq!(code(&out), 0);
    let frank = fs::read_to_string(out_dir.join("frank_octagonal.csv")).unwrap();
    assert!(frank.starts_with("# coarea "));
    assert_eq!(frank.lines().count(), 2 + 90);
    assert!(out_dir.join("phi_octagonal.csv").exists());

    let zero = dir.path().join("zero.pot");
    fs::write(
        &zero,
        "dim 2\nsymmetric_complement\noffsets\n0 0\n1 0\n0 1\nvalues\n0b000 0\n0b001 0\n0b010 0\n0b100 0\n",
    )
    .unwrap();
    let out = coarea(&["anisotropy", path_str(&zero), "--output-dir", path_str(&out_dir)]);
    assert_eq!(code(&out), 1, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!out_dir.join("frank_zero.csv").exists());
}

#[test]
fn converge_runs_bundled_configs_deterministically() {
    let dir = TempDir::new().unwrap();
    let cfg = repo_file("configs/square_nn.cfg");
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for d in [&a, &b] {
        assert_eq!(code(&coarea(&["converge", path_str(&cfg), "--output-dir", path_str(d)])), 0);
    }
    let x = fs::read(a.join("square_nn.csv")).unwrap();
    let y = fs::read(b.join("square_nn.csv")).unwrap();
    assert_eq!(x, y);
    let text = String::from_utf8(x).unwrap();
    assert_eq!(text.lines().nth(1), Some("h,Jh,limit,abs_err,err_over_h"));
}

#[test]
fn converge_with_no_configs_is_a_no_op() {
    let dir = TempDir::new().unwrap();
    let out_dir = dir.path().join("out");
    let out = coarea(&["converge", "--output-dir", path_str(&out_dir)]);
    assert_eq!(code(&out), 0);
    assert!(!out_dir.exists());
}

#[test]
fn converge_rejects_invalid_config() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(
        &cfg,
        format!(
            "kind=halfspace\npotential_file={}\nnu=1,0\nh_max=0.01\nh_min=0.1\n",
            path_str(&repo_file("potentials/nearest_neighbor.pot"))
        ),
    )
    .unwrap();
    let out = coarea(&["converge", path_str(&cfg), "--output-dir", path_str(dir.path())]);
    assert_eq!(code(&out), 1, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn denoise_is_byte_reproducible_and_seed_changes_header() {
    let dir = TempDir::new().unwrap();
    let img = dir.path().join("in.pgm");
    write_noisy_pgm(&img);
    let pot = repo_file("potentials/corner_euclidean.pot");
    let run = |out: &Path, seed: &str| {
        let o = coarea(&[
            "denoise",
            "--input",
            path_str(&img),
            "--potential",
            path_str(&pot),
            "--lambda",
            "30",
            "--shuffle",
            "--seed",
            seed,
            "--output-dir",
            path_str(out),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    };
    let (a, b, c) = (dir.path().join("a"), dir.path().join("b"), dir.path().join("c"));
    run(&a, "7");
    run(&b, "7");
    run(&c, "8");
    for f in ["denoised.pgm", "report.txt", "trace.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    assert!(header_line(&a.join("report.txt")).contains("seed=7"));
    assert_ne!(header_line(&a.join("report.txt")), header_line(&c.join("report.txt")));
    // the header sits on the comment line after the magic number
    let pgm = fs::read_to_string(a.join("denoised.pgm")).unwrap();
    let mut lines = pgm.lines();
    assert_eq!(lines.next(), Some("P2"));
    assert!(lines.next().unwrap().starts_with("# coarea "));
    assert_eq!(lines.next(), Some("10 8"));
    assert_eq!(lines.next(), Some("255"));
}

#[test]
fn denoise_keeps_constant_image() {
    let dir = TempDir::new().unwrap();
    let img = dir.path().join("flat.pgm");
    let mut bytes = b"P5\n5 4\n255\n".to_vec();
    bytes.extend([123u8; 20]);
    fs::write(&img, &bytes).unwrap();
    for solver in ["first-order", "oracle"] {
        let out_dir = dir.path().join(solver);
        let o = coarea(&[
            "denoise",
            "--input",
            path_str(&img),
            "--potential",
            path_str(&repo_file("potentials/nearest_neighbor.pot")),
            "--solver",
            solver,
            "--output-dir",
            path_str(&out_dir),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let out = fs::read(out_dir.join("denoised.pgm")).unwrap();
        assert_eq!(&out[out.len() - 20..], &bytes[bytes.len() - 20..]);
        assert!(out.starts_with(b"P5\n# coarea "));
    }
}

#[test]
fn denoise_rejects_bad_inputs() {
    let dir = TempDir::new().unwrap();
    let img = dir.path().join("in.pgm");
    write_noisy_pgm(&img);
    let pot = repo_file("potentials/nearest_neighbor.pot");
    let base = |extra: &[&str]| {
        let mut args = vec![
            "denoise",
            "--input",
            path_str(&img),
            "--potential",
            path_str(&pot),
            "--output-dir",
            path_str(dir.path()),
        ];
        args.extend_from_slice(extra);
        code(&coarea(&args))
    };
    assert_eq!(base(&["--lambda", "-1"]), 1);
    assert_eq!(base(&["--solver", "oracle"]), 1);
    let truncated = dir.path().join("truncated.pgm");
    fs::write(&truncated, "P2\n4 4\n255\n1 2 3\n").unwrap();
    let o = coarea(&[
        "denoise",
        "--input",
        path_str(&truncated),
        "--potential",
        path_str(&pot),
        "--output-dir",
        path_str(dir.path()),
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn selftest_passes() {
    let out = coarea(&["selftest", "--seed", "11"]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(code(&out), 0, "{stdout}");
    assert!(!stdout.contains("[FAIL]"));
}
