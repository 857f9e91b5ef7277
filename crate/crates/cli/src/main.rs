//! `coarea`: validation, anisotropy export, convergence experiments and
//! denoising from the command line.
//!
//! Exit codes: 0 success, 1 validation failure, 2 parse or I/O error.

mod selftest;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use coarea_core::anisotropy::{frank_diagram_csv, AnisotropyDensity};
use coarea_core::convergence::{rows_csv, ExperimentConfig};
use coarea_core::denoise::{trace_csv, DenoiseProblem, FirstOrderOptions, SweepOrder};
use coarea_core::extension::{extension_properties_check, ExtensionProperty};
use coarea_core::lattice::io::{read_pgm, write_pgm};
use coarea_core::lattice::GridFunction;
use coarea_core::potential_file::parse_potential;
use coarea_core::{Error, StencilPotential};
use sha2::{Digest, Sha256};

#[derive(Parser, Debug)]
#[command(name = "coarea", version, about = "Discrete anisotropic total variation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a potential file: submodularity, coercivity, extension properties.
    Check {
        potential: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write the unit-ball and direction-sweep CSVs of each potential.
    Anisotropy {
        #[arg(required = true)]
        potentials: Vec<PathBuf>,
        #[arg(long, default_value = "out")]
        output_dir: PathBuf,
        #[arg(long, default_value_t = 360)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run key=value experiment configs and write one CSV table each.
    Converge {
        configs: Vec<PathBuf>,
        #[arg(long, default_value = "out")]
        output_dir: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Denoise a PGM image.
    Denoise {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        potential: PathBuf,
        #[arg(long, default_value = "out")]
        output_dir: PathBuf,
        /// Fidelity weight.
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        lambda: f64,
        /// Mesh size; defaults to 1 / max(width, height).
        #[arg(long)]
        h: Option<f64>,
        #[arg(long, value_enum, default_value_t = Solver::FirstOrder)]
        solver: Solver,
        #[arg(long, default_value_t = 2000)]
        max_iter: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Split each gap of the oracle level grid into this many parts.
        #[arg(long, default_value_t = 1)]
        refine: usize,
        /// Visit nodes in a seeded random order each sweep.
        #[arg(long)]
        shuffle: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the built-in property suites with a fixed seed.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Solver {
    Oracle,
    FirstOrder,
}

/// A command failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::Io(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    }
}

fn validation(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

type CmdResult = Result<(), Failure>;

/// Inputs that determine a run; hashed into every output header.
struct RunRecord {
    seed: u64,
    hasher: Sha256,
}

impl RunRecord {
    fn new(subcommand: &str, seed: u64) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(format!("subcommand={subcommand}\n"));
        RunRecord { seed, hasher }
    }

    fn param(&mut self, key: &str, value: impl std::fmt::Display) {
        self.hasher.update(format!("{key}={value}\n"));
    }

    fn file(&mut self, key: &str, bytes: &[u8]) {
        self.hasher.update(format!("{key}:{}\n", bytes.len()));
        self.hasher.update(bytes);
    }

    fn header(&self) -> String {
        let hash = hex::encode(self.hasher.clone().finalize());
        format!(
            "# coarea {} seed={} config={hash}",
            env!("CARGO_PKG_VERSION"),
            self.seed
        )
    }
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| io_failure(path, e))
}

fn load_potential(path: &Path) -> Result<(StencilPotential, Vec<u8>), Failure> {
    let bytes = read_bytes(path)?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Failure {
        code: 2,
        message: format!("{}: not valid UTF-8", path.display()),
    })?;
    let potential = parse_potential(&text).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })?;
    Ok((potential, bytes))
}

fn write_output(dir: &Path, name: &str, header: &str, body: &str) -> Result<PathBuf, Failure> {
    fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, format!("{header}\n{body}")).map_err(|e| io_failure(&path, e))?;
    Ok(path)
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "output".into())
}

fn cmd_check(potential: &Path, samples: usize, seed: u64) -> CmdResult {
    let (pot, _) = load_potential(potential)?;
    let stencil = pot.stencil();
    println!(
        "potential {}: N = {}, |Σ| = {}",
        potential.display(),
        stencil.dim(),
        stencil.len()
    );
    println!("structure: F(0) = F(1) = 0 ok");
    let mut ok = true;

    let sub = pot.check_submodular();
    if sub.ok {
        println!("submodularity: ok (worst excess {:.3e})", sub.worst_excess);
    } else {
        ok = false;
        let (u, v) = sub.witness.expect("failing report has a witness");
        println!(
            "submodularity: FAIL, F({}) + F({}) = {} < F(u∧v) + F(u∨v) = {}",
            u,
            v,
            pot.value_of(u) + pot.value_of(v),
            pot.value_of(u.meet(v)) + pot.value_of(u.join(v))
        );
        println!("  witness u = {u}, v = {v}, u∧v = {}, u∨v = {}", u.meet(v), u.join(v));
    }

    let c = pot.coercivity_c();
    if stencil.has_full_basis() && c > 0.0 {
        println!(
            "coercivity: ok, c = {c}, pairwise upper constant = {}",
            pot.pairwise_upper_constant()
        );
    } else {
        ok = false;
        println!("coercivity: FAIL, c = {c}");
    }

    let rep = extension_properties_check(&pot, samples, seed);
    for p in ExtensionProperty::ALL {
        let n = rep.failures_of(p);
        if n == 0 {
            println!("extension {}: ok ({} samples)", p.name(), rep.samples);
        } else {
            ok = false;
            let first = rep.failures.iter().find(|f| f.property == p).unwrap();
            println!(
                "extension {}: FAIL, {n} of {} samples; first witness u = {:?}, v = {:?}, lhs = {}, rhs = {}",
                p.name(),
                rep.samples,
                first.u,
                first.v,
                first.lhs,
                first.rhs
            );
        }
    }
    if ok {
        println!("check passed");
        Ok(())
    } else {
        Err(validation("check failed"))
    }
}

fn cmd_anisotropy(potentials: &[PathBuf], output_dir: &Path, samples: usize, seed: u64) -> CmdResult {
    if samples == 0 {
        return Err(validation("--samples must be positive"));
    }
    for path in potentials {
        let (pot, bytes) = load_potential(path)?;
        let mut rec = RunRecord::new("anisotropy", seed);
        rec.file("potential", &bytes);
        rec.param("samples", samples);
        let header = rec.header();
        let density = AnisotropyDensity::new(pot);
        let points = density.frank_diagram(samples).map_err(|e| {
            validation(format!("{}: refused: {e}", path.display()))
        })?;
        let name = stem(path);
        let frank = write_output(output_dir, &format!("frank_{name}.csv"), &header, &frank_diagram_csv(&points))?;
        println!("wrote {}", frank.display());
        if density.dim() == 2 {
            let mut body = String::from("angle,phi\n");
            for (a, phi) in density.sweep(samples)? {
                writeln!(body, "{a:.15e},{phi:.15e}").unwrap();
            }
            let sweep = write_output(output_dir, &format!("phi_{name}.csv"), &header, &body)?;
            println!("wrote {}", sweep.display());
        }
    }
    Ok(())
}

fn cmd_converge(configs: &[PathBuf], output_dir: &Path, seed: u64) -> CmdResult {
    if configs.is_empty() {
        println!("no experiments given");
        return Ok(());
    }
    for path in configs {
        let bytes = read_bytes(path)?;
        let text = String::from_utf8(bytes.clone()).map_err(|_| Failure {
            code: 2,
            message: format!("{}: not valid UTF-8", path.display()),
        })?;
        let cfg = ExperimentConfig::parse(&text).map_err(|e| {
            let mut f = Failure::from(e);
            f.message = format!("{}: {}", path.display(), f.message);
            f
        })?;
        let pot_file = cfg
            .potential_file
            .as_ref()
            .ok_or_else(|| validation(format!("{}: missing potential_file", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let (pot, pot_bytes) = load_potential(&base.join(pot_file))?;
        let mut rec = RunRecord::new("converge", seed);
        rec.file("config", &bytes);
        rec.file("potential", &pot_bytes);
        let exp = cfg.build(pot).map_err(|e| {
            let mut f = Failure::from(e);
            f.message = format!("{}: {}", path.display(), f.message);
            f
        })?;
        let rows = exp.run()?;
        println!("{} ({}):", path.display(), exp.geometry.kind());
        println!("  {:>12} {:>14} {:>14} {:>12} {:>10}", "h", "J_h", "limit", "abs_err", "err/h");
        for r in &rows {
            println!(
                "  {:>12.6e} {:>14.10} {:>14.10} {:>12.4e} {:>10.4}",
                r.h, r.jh, r.limit, r.abs_err, r.err_over_h
            );
        }
        let out = write_output(output_dir, &format!("{}.csv", stem(path)), &rec.header(), &rows_csv(&rows))?;
        println!("wrote {}", out.display());
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_denoise(
    input: &Path,
    potential: &Path,
    output_dir: &Path,
    lambda: f64,
    h: Option<f64>,
    solver: Solver,
    max_iter: usize,
    tol: f64,
    refine: usize,
    shuffle: bool,
    seed: u64,
) -> CmdResult {
    let image_bytes = read_bytes(input)?;
    let (pot, pot_bytes) = load_potential(potential)?;
    let probe = read_pgm(&image_bytes, 1.0)?;
    let (width, height) = probe.size();
    let h = h.unwrap_or(1.0 / width.max(height) as f64);
    let image = read_pgm(&image_bytes, h)?;

    let mut rec = RunRecord::new("denoise", seed);
    rec.file("image", &image_bytes);
    rec.file("potential", &pot_bytes);
    rec.param("lambda", lambda);
    rec.param("h", h);
    rec.param("solver", format!("{solver:?}"));
    rec.param("max_iter", max_iter);
    rec.param("tol", tol);
    rec.param("refine", refine);
    rec.param("shuffle", shuffle);
    let header = rec.header();

    let mut problem = DenoiseProblem::new(image.function.clone(), pot, lambda)?;
    if refine > 1 {
        problem = problem.with_refined_levels(refine)?;
    }
    let result = match solver {
        Solver::Oracle => problem.solve_oracle()?,
        Solver::FirstOrder => problem.solve_first_order_with(&FirstOrderOptions {
            max_iter,
            tol,
            order: if shuffle {
                SweepOrder::Shuffled { seed }
            } else {
                SweepOrder::Lexicographic
            },
        })?,
    };
    let line = result.report_line();
    println!("{line}");
    if let Some(w) = &result.warning {
        eprintln!("warning: {w}");
    }

    fs::create_dir_all(output_dir).map_err(|e| io_failure(output_dir, e))?;
    let pgm = with_pgm_header(&write_pgm(&result.u, image.maxval, image.format)?, &header);
    let pgm_path = output_dir.join("denoised.pgm");
    fs::write(&pgm_path, pgm).map_err(|e| io_failure(&pgm_path, e))?;
    println!("wrote {}", pgm_path.display());
    let report = write_output(output_dir, "report.txt", &header, &format!("{line}\n"))?;
    println!("wrote {}", report.display());
    if !result.trace.is_empty() {
        let trace = write_output(output_dir, "trace.csv", &header, &trace_csv(&result.trace))?;
        println!("wrote {}", trace.display());
    }
    let g: &GridFunction = problem.g();
    if result.u.max_abs() > g.max_abs() + 1e-12 {
        return Err(validation("denoised image exceeds the datum's sup norm"));
    }
    Ok(())
}

/// PGM needs its magic number first, so the header goes in as the comment
/// on the second line.
fn with_pgm_header(pgm: &[u8], header: &str) -> Vec<u8> {
    let split = pgm.iter().position(|&b| b == b'\n').map_or(pgm.len(), |i| i + 1);
    let mut out = pgm[..split].to_vec();
    out.extend_from_slice(header.as_bytes());
    out.push(b'\n');
    out.extend_from_slice(&pgm[split..]);
    out
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Check {
            potential,
            samples,
            seed,
        } => cmd_check(&potential, samples, seed),
        Command::Anisotropy {
            potentials,
            output_dir,
            samples,
            seed,
        } => cmd_anisotropy(&potentials, &output_dir, samples, seed),
        Command::Converge {
            configs,
            output_dir,
            seed,
        } => cmd_converge(&configs, &output_dir, seed),
        Command::Denoise {
            input,
            potential,
            output_dir,
            lambda,
            h,
            solver,
            max_iter,
            tol,
            refine,
            shuffle,
            seed,
        } => cmd_denoise(
            &input, &potential, &output_dir, lambda, h, solver, max_iter, tol, refine, shuffle, seed,
        ),
        Command::Selftest { seed } => {
            if selftest::run(seed) {
                Ok(())
            } else {
                Err(validation("selftest failed"))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
