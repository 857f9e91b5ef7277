use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::potential::StencilPotential;

/// The surface tension `φ(ν) = F(ν·Σ) = F((ν·y)_{y∈Σ})` of the continuum
/// limit. Convex and positively 1-homogeneous when `F` is submodular.
#[derive(Debug, Clone, PartialEq)]
pub struct AnisotropyDensity {
    potential: StencilPotential,
}

/// One sample of the boundary of `{p : φ(p) ≤ 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrankPoint {
    /// Unit direction.
    pub theta: Vec<f64>,
    pub phi: f64,
    /// `θ / φ(θ)`.
    pub point: Vec<f64>,
}

impl AnisotropyDensity {
    pub fn new(potential: StencilPotential) -> Self {
        AnisotropyDensity { potential }
    }

    pub fn potential(&self) -> &StencilPotential {
        &self.potential
    }

    pub fn dim(&self) -> usize {
        self.potential.stencil().dim()
    }

    pub fn phi(&self, nu: &[f64]) -> Result<f64> {
        if let Some(x) = nu.iter().find(|x| !x.is_finite()) {
            return Err(Error::Domain(format!("non-finite direction component {x}")));
        }
        let projected = self.potential.stencil().project(nu)?;
        Ok(self.potential.extend_unchecked(&projected))
    }

    /// Samples `φ` on `n` equally spaced angles `2πk/n` (2D only).
    pub fn sweep(&self, n: usize) -> Result<Vec<(f64, f64)>> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: self.dim(),
            });
        }
        (0..n)
            .map(|k| {
                let a = 2.0 * PI * k as f64 / n as f64;
                self.phi(&[a.cos(), a.sin()]).map(|p| (a, p))
            })
            .collect()
    }

    /// Boundary points `θ/φ(θ)` of the unit ball `{φ ≤ 1}`.
    ///
    /// In 2D the `n_samples` directions are equally spaced by angle. In 3D
    /// they form a latitude/longitude grid with about `n_samples` points.
    pub fn frank_diagram(&self, n_samples: usize) -> Result<Vec<FrankPoint>> {
        let directions: Vec<Vec<f64>> = match self.dim() {
            2 => (0..n_samples)
                .map(|k| {
                    let a = 2.0 * PI * k as f64 / n_samples as f64;
                    vec![a.cos(), a.sin()]
                })
                .collect(),
            3 => {
                let rows = ((n_samples as f64 / 2.0).sqrt().round() as usize).max(1);
                let per_row = n_samples.div_ceil(rows).max(1);
                let mut dirs = Vec::with_capacity(rows * per_row);
                for j in 0..rows {
                    let polar = PI * (j as f64 + 0.5) / rows as f64;
                    for k in 0..per_row {
                        let az = 2.0 * PI * k as f64 / per_row as f64;
                        dirs.push(vec![
                            polar.sin() * az.cos(),
                            polar.sin() * az.sin(),
                            polar.cos(),
                        ]);
                    }
                }
                dirs
            }
            d => {
                return Err(Error::Config(format!(
                    "frank diagram sampling supports N = 2 or 3, got {d}"
                )))
            }
        };
        directions
            .into_iter()
            .map(|theta| {
                let phi = self.phi(&theta)?;
                if phi <= 1e-14 {
                    return Err(Error::Domain(format!(
                        "φ vanishes at direction {theta:?}: the potential is not coercive"
                    )));
                }
                let point = theta.iter().map(|t| t / phi).collect();
                Ok(FrankPoint { theta, phi, point })
            })
            .collect()
    }
}

/// CSV `theta_x,theta_y,phi,p_x,p_y` (with `theta_z`, `p_z` in 3D).
pub fn frank_diagram_csv(points: &[FrankPoint]) -> String {
    let mut out = String::new();
    let three = points.first().is_some_and(|p| p.theta.len() == 3);
    if three {
        out.push_str("theta_x,theta_y,theta_z,phi,p_x,p_y,p_z\n");
    } else {
        out.push_str("theta_x,theta_y,phi,p_x,p_y\n");
    }
    for p in points {
        let t: Vec<String> = p.theta.iter().map(|v| format!("{v:.15e}")).collect();
        let q: Vec<String> = p.point.iter().map(|v| format!("{v:.15e}")).collect();
        writeln!(out, "{},{:.15e},{}", t.join(","), p.phi, q.join(",")).unwrap();
    }
    out
}
