//! Convergence experiments: rasterize a reference set or function on
//! meshes `h → 0`, evaluate `J_h`, and compare with the limit value
//! computed independently from `φ` and exact polygon geometry.
//!
//! Sets are rasterized by sampling each cell at `x + h·s`, with `s` the
//! cell center `(1/2, ..., 1/2)` by default or any fixed shift in
//! `[0,1)^N`. The result is always a characteristic function of cells.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::anisotropy::{axis_box_perimeter, AnisotropyDensity, PolyhedralSet, Rect};
use crate::error::{Error, Result};
use crate::lattice::{GridDomain, GridFunction, GridSet, LatticeFunctional};
use crate::potential::StencilPotential;

/// Where each cell is probed when rasterizing.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Sampling {
    #[default]
    Center,
    /// Probe `x + h·shift`, `shift ∈ [0,1)^N`.
    Shifted(Vec<f64>),
}

impl Sampling {
    fn point(&self, domain: &GridDomain, cell: usize) -> Vec<f64> {
        match self {
            Sampling::Center => domain.cell_center(cell),
            Sampling::Shifted(s) => domain
                .node_position(cell)
                .iter()
                .zip(s)
                .map(|(x, t)| x + domain.h() * t)
                .collect(),
        }
    }

    fn validate(&self, dim: usize) -> Result<()> {
        if let Sampling::Shifted(s) = self {
            if s.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: s.len(),
                });
            }
            if s.iter().any(|t| !(0.0..1.0).contains(t)) {
                return Err(Error::Config(format!("sampling shift {s:?} outside [0,1)^N")));
            }
        }
        Ok(())
    }
}

/// Reference geometry of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    /// `I_ν = {x·ν > 0}`, `ν` a unit vector.
    HalfSpace { nu: Vec<f64> },
    Polygon(PolyhedralSet),
    /// `u = base + Σ_k weight_k χ_{P_k}` with `P_1 ⊃ P_2 ⊃ ...` and positive
    /// weights, so that every superlevel set is one of the polygons.
    FunctionTv {
        base: f64,
        layers: Vec<(f64, PolyhedralSet)>,
    },
}

impl Geometry {
    pub fn kind(&self) -> &'static str {
        match self {
            Geometry::HalfSpace { .. } => "halfspace",
            Geometry::Polygon(_) => "polygon",
            Geometry::FunctionTv { .. } => "function_tv",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceExperiment {
    pub geometry: Geometry,
    pub window_lo: Vec<f64>,
    pub window_hi: Vec<f64>,
    pub h_schedule: Vec<f64>,
    pub potential: StencilPotential,
    pub sampling: Sampling,
}

/// One mesh size of a convergence table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub h: f64,
    pub jh: f64,
    pub limit: f64,
    pub abs_err: f64,
    pub err_over_h: f64,
}

impl ConvergenceRow {
    fn new(h: f64, jh: f64, limit: f64) -> Self {
        let abs_err = (jh - limit).abs();
        ConvergenceRow {
            h,
            jh,
            limit,
            abs_err,
            err_over_h: abs_err / h,
        }
    }

    pub fn rel_err(&self) -> f64 {
        if self.limit == 0.0 {
            self.abs_err
        } else {
            self.abs_err / self.limit.abs()
        }
    }
}

/// `h_max, h_max/2, ...` down to `h_min` inclusive.
pub fn dyadic_schedule(h_max: f64, h_min: f64) -> Result<Vec<f64>> {
    if !(h_max > 0.0 && h_min > 0.0 && h_min <= h_max) {
        return Err(Error::Config(format!("invalid mesh range h_min={h_min}, h_max={h_max}")));
    }
    let mut out = vec![h_max];
    let mut h = h_max;
    while h / 2.0 >= h_min * (1.0 - 1e-12) {
        h /= 2.0;
        out.push(h);
    }
    Ok(out)
}

/// Cells whose sample point satisfies `p·ν > 0`.
pub fn rasterize_halfspace(nu: &[f64], domain: &Arc<GridDomain>) -> Result<GridSet> {
    rasterize_halfspace_with(nu, domain, &Sampling::Center)
}

pub fn rasterize_halfspace_with(
    nu: &[f64],
    domain: &Arc<GridDomain>,
    sampling: &Sampling,
) -> Result<GridSet> {
    if nu.len() != domain.dim() {
        return Err(Error::DimensionMismatch {
            expected: domain.dim(),
            found: nu.len(),
        });
    }
    let norm = nu.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!("half-space normal must be a unit vector, |ν| = {norm}")));
    }
    sampling.validate(domain.dim())?;
    let member = (0..domain.num_cells())
        .map(|c| {
            let p = sampling.point(domain, c);
            p.iter().zip(nu).map(|(a, b)| a * b).sum::<f64>() > 0.0
        })
        .collect();
    GridSet::new(domain.clone(), member)
}

/// Cells whose sample point lies inside the polygon.
pub fn rasterize_polygon(
    polygon: &PolyhedralSet,
    domain: &Arc<GridDomain>,
    sampling: &Sampling,
) -> Result<GridSet> {
    if domain.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: domain.dim(),
        });
    }
    sampling.validate(2)?;
    let member = (0..domain.num_cells())
        .map(|c| polygon.contains(&sampling.point(domain, c)))
        .collect();
    GridSet::new(domain.clone(), member)
}

fn unit_normal(nu: &[f64]) -> Result<Vec<f64>> {
    let norm = nu.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::Domain("normal must be nonzero and finite".into()));
    }
    Ok(nu.iter().map(|v| v / norm).collect())
}

impl ConvergenceExperiment {
    pub fn new(
        geometry: Geometry,
        window_lo: Vec<f64>,
        window_hi: Vec<f64>,
        h_schedule: Vec<f64>,
        potential: StencilPotential,
    ) -> Result<Self> {
        let exp = ConvergenceExperiment {
            geometry,
            window_lo,
            window_hi,
            h_schedule,
            potential,
            sampling: Sampling::Center,
        };
        exp.validate()?;
        Ok(exp)
    }

    pub fn with_sampling(mut self, sampling: Sampling) -> Result<Self> {
        sampling.validate(self.dim())?;
        self.sampling = sampling;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.potential.stencil().dim()
    }

    fn window_rect(&self) -> Result<Rect> {
        if self.window_lo.len() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: self.window_lo.len(),
            });
        }
        Rect::new(
            [self.window_lo[0], self.window_lo[1]],
            [self.window_hi[0], self.window_hi[1]],
        )
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim();
        if self.window_lo.len() != n || self.window_hi.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.window_lo.len().min(self.window_hi.len()),
            });
        }
        if self.h_schedule.is_empty() {
            return Err(Error::Config("empty mesh schedule".into()));
        }
        if self.h_schedule.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Error::Config("mesh schedule must be strictly decreasing".into()));
        }
        let side = self
            .window_lo
            .iter()
            .zip(&self.window_hi)
            .map(|(a, b)| b - a)
            .fold(f64::INFINITY, f64::min);
        let rho = self.potential.stencil().radius();
        if let Some(&h) = self.h_schedule.iter().find(|&&h| !(h > 0.0 && rho * h < side)) {
            return Err(Error::Config(format!(
                "mesh size {h} too large for a window of side {side} (ρ_Σ = {rho})"
            )));
        }
        let h_max = self.h_schedule[0];
        let margin = rho * h_max;
        match &self.geometry {
            Geometry::HalfSpace { nu } => {
                if nu.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: nu.len(),
                    });
                }
                let norm = nu.iter().map(|v| v * v).sum::<f64>().sqrt();
                if (norm - 1.0).abs() > 1e-12 {
                    return Err(Error::Domain("half-space normal must be a unit vector".into()));
                }
                if n != 2 && nu.iter().filter(|v| **v != 0.0).count() != 1 {
                    return Err(Error::Config(
                        "half-spaces in N != 2 must be orthogonal to a coordinate axis".into(),
                    ));
                }
            }
            Geometry::Polygon(p) => {
                if n != 2 {
                    return Err(Error::Config("polygon experiments are two-dimensional".into()));
                }
                if *p.window() != self.window_rect()? {
                    return Err(Error::Config("polygon window differs from experiment window".into()));
                }
                if !p.is_inside_window(margin) {
                    return Err(Error::Config(format!(
                        "polygon must stay farther than ρ_Σ·h_max = {margin} from the window boundary"
                    )));
                }
            }
            Geometry::FunctionTv { base, layers } => {
                if n != 2 {
                    return Err(Error::Config("function experiments are two-dimensional".into()));
                }
                if !base.is_finite() {
                    return Err(Error::Domain("non-finite base value".into()));
                }
                let window = self.window_rect()?;
                for (k, (w, p)) in layers.iter().enumerate() {
                    if !(w.is_finite() && *w > 0.0) {
                        return Err(Error::Config(format!("layer {k} needs a positive weight")));
                    }
                    if *p.window() != window {
                        return Err(Error::Config(format!("layer {k} has a different window")));
                    }
                    if !p.is_inside_window(margin) {
                        return Err(Error::Config(format!(
                            "layer {k} must stay farther than {margin} from the window boundary"
                        )));
                    }
                    if k > 0 {
                        let outer = &layers[k - 1].1;
                        if !p.vertices().iter().all(|v| outer.contains(v)) {
                            return Err(Error::Config(format!(
                                "layer {k} is not nested inside layer {}",
                                k - 1
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The exact continuum value, from `φ` and the reference geometry only.
    pub fn limit(&self) -> Result<f64> {
        let density = AnisotropyDensity::new(self.potential.clone());
        match &self.geometry {
            Geometry::HalfSpace { nu } => {
                if self.dim() == 2 {
                    PolyhedralSet::halfplane([nu[0], nu[1]], 0.0, self.window_rect()?)?
                        .perimeter(&density)
                        .map(|r| r.total)
                } else {
                    let axis = nu.iter().position(|v| *v != 0.0).expect("validated");
                    let (mut lo, mut hi) = (self.window_lo.clone(), self.window_hi.clone());
                    if nu[axis] > 0.0 {
                        lo[axis] = 0.0;
                    } else {
                        hi[axis] = 0.0;
                    }
                    axis_box_perimeter(&density, &lo, &hi, &self.window_lo, &self.window_hi)
                }
            }
            Geometry::Polygon(p) => p.perimeter(&density).map(|r| r.total),
            Geometry::FunctionTv { layers, .. } => layers.iter().try_fold(0.0, |acc, (w, p)| {
                p.perimeter(&density).map(|r| acc + w * r.total)
            }),
        }
    }

    fn domain(&self, h: f64) -> Result<Arc<GridDomain>> {
        Ok(Arc::new(GridDomain::from_box(h, &self.window_lo, &self.window_hi)?))
    }

    /// The rasterized reference function at mesh `h`.
    pub fn rasterize(&self, h: f64) -> Result<GridFunction> {
        let domain = self.domain(h)?;
        match &self.geometry {
            Geometry::HalfSpace { nu } => {
                Ok(rasterize_halfspace_with(nu, &domain, &self.sampling)?.indicator())
            }
            Geometry::Polygon(p) => Ok(rasterize_polygon(p, &domain, &self.sampling)?.indicator()),
            Geometry::FunctionTv { base, layers } => {
                let mut values = vec![*base; domain.num_cells()];
                for (w, p) in layers {
                    let set = rasterize_polygon(p, &domain, &self.sampling)?;
                    for c in set.cells() {
                        values[c] += w;
                    }
                }
                GridFunction::new(domain, values)
            }
        }
    }

    /// Rows ordered by the schedule (decreasing `h`).
    pub fn run(&self) -> Result<Vec<ConvergenceRow>> {
        let limit = self.limit()?;
        self.h_schedule
            .iter()
            .map(|&h| {
                let u = self.rasterize(h)?;
                let functional = LatticeFunctional::new(u.domain().clone(), self.potential.clone())?;
                let jh = match &self.geometry {
                    Geometry::FunctionTv { .. } => functional.eval(&u)?,
                    _ => functional.eval_set(&u.superlevel_set(0.5))?,
                };
                Ok(ConvergenceRow::new(h, jh, limit))
            })
            .collect()
    }
}

fn require_kind(exp: &ConvergenceExperiment, kind: &str) -> Result<()> {
    if exp.geometry.kind() == kind {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "expected a {kind} experiment, got {}",
            exp.geometry.kind()
        )))
    }
}

/// `J_h(χ_{I_ν})` against `φ(ν)·H^{N-1}(∂I_ν ∩ Ω)`.
pub fn run_halfspace_experiment(exp: &ConvergenceExperiment) -> Result<Vec<ConvergenceRow>> {
    require_kind(exp, "halfspace")?;
    exp.run()
}

/// `J_h` of the rasterized polygon against its limit perimeter.
pub fn run_polygon_experiment(exp: &ConvergenceExperiment) -> Result<Vec<ConvergenceRow>> {
    require_kind(exp, "polygon")?;
    exp.run()
}

/// `J_h(u)` against `Σ_k weight_k · Per_φ(P_k)`.
pub fn run_function_tv_experiment(exp: &ConvergenceExperiment) -> Result<Vec<ConvergenceRow>> {
    require_kind(exp, "function_tv")?;
    exp.run()
}

/// CSV `h,Jh,limit,abs_err,err_over_h`.
pub fn rows_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from("h,Jh,limit,abs_err,err_over_h\n");
    for r in rows {
        writeln!(
            out,
            "{:.15e},{:.15e},{:.15e},{:.15e},{:.15e}",
            r.h, r.jh, r.limit, r.abs_err, r.err_over_h
        )
        .unwrap();
    }
    out
}

/// Parsed `key=value` experiment description.
///
/// ```text
/// kind=polygon                       # halfspace | polygon | function_tv
/// potential_file=nearest_neighbor.pot
/// window=0,0,1,1                     # lo..., hi...
/// h_max=0.0625
/// h_min=0.00390625
/// nu=1,1                             # halfspace (normalized on load)
/// polygon=0.25,0.25;0.75,0.25;0.75,0.75;0.25,0.75
/// diamond=0.5,0.5,0.3                # center and half-diagonal
/// base=0                             # function_tv
/// layer=1:0.2,0.2;0.8,0.2;0.8,0.8;0.2,0.8   # repeatable, outermost first
/// shift=0.5,0.5                      # optional sampling shift
/// ```
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentConfig {
    pub kind: String,
    pub potential_file: Option<String>,
    pub window: Option<(Vec<f64>, Vec<f64>)>,
    pub h_max: Option<f64>,
    pub h_min: Option<f64>,
    pub nu: Option<Vec<f64>>,
    pub polygon: Option<Vec<[f64; 2]>>,
    pub diamond: Option<([f64; 2], f64)>,
    pub base: f64,
    pub layers: Vec<(f64, Vec<[f64; 2]>)>,
    pub shift: Option<Vec<f64>>,
}

fn parse_floats(value: &str, line: usize) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|t| {
            t.trim().parse::<f64>().map_err(|_| Error::Parse {
                line,
                message: format!("invalid number '{t}'"),
            })
        })
        .collect()
}

fn parse_points(value: &str, line: usize) -> Result<Vec<[f64; 2]>> {
    value
        .split(';')
        .map(|p| {
            let xy = parse_floats(p, line)?;
            if xy.len() != 2 {
                return Err(Error::Parse {
                    line,
                    message: format!("expected 'x,y', got '{p}'"),
                });
            }
            Ok([xy[0], xy[1]])
        })
        .collect()
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| Error::Parse {
                line,
                message: format!("expected key=value, got '{content}'"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            let single = |v: &str| -> Result<f64> {
                let xs = parse_floats(v, line)?;
                if xs.len() == 1 {
                    Ok(xs[0])
                } else {
                    Err(Error::Parse {
                        line,
                        message: format!("expected one number for '{key}'"),
                    })
                }
            };
            match key {
                "kind" => cfg.kind = value.to_string(),
                "potential_file" => cfg.potential_file = Some(value.to_string()),
                "window" => {
                    let xs = parse_floats(value, line)?;
                    if xs.is_empty() || xs.len() % 2 != 0 {
                        return Err(Error::Parse {
                            line,
                            message: "window needs lo and hi coordinates".into(),
                        });
                    }
                    let n = xs.len() / 2;
                    cfg.window = Some((xs[..n].to_vec(), xs[n..].to_vec()));
                }
                "h_max" => cfg.h_max = Some(single(value)?),
                "h_min" => cfg.h_min = Some(single(value)?),
                "nu" => cfg.nu = Some(parse_floats(value, line)?),
                "polygon" => cfg.polygon = Some(parse_points(value, line)?),
                "diamond" => {
                    let xs = parse_floats(value, line)?;
                    if xs.len() != 3 {
                        return Err(Error::Parse {
                            line,
                            message: "diamond needs cx,cy,r".into(),
                        });
                    }
                    cfg.diamond = Some(([xs[0], xs[1]], xs[2]));
                }
                "base" => cfg.base = single(value)?,
                "layer" => {
                    let (w, pts) = value.split_once(':').ok_or_else(|| Error::Parse {
                        line,
                        message: "layer needs 'weight:x,y;x,y;...'".into(),
                    })?;
                    cfg.layers.push((single(w)?, parse_points(pts, line)?));
                }
                "shift" => cfg.shift = Some(parse_floats(value, line)?),
                other => {
                    return Err(Error::Parse {
                        line,
                        message: format!("unknown key '{other}'"),
                    })
                }
            }
        }
        if cfg.kind.is_empty() {
            return Err(Error::Parse {
                line: 0,
                message: "missing 'kind'".into(),
            });
        }
        Ok(cfg)
    }

    /// Builds the experiment with an already loaded potential.
    pub fn build(&self, potential: StencilPotential) -> Result<ConvergenceExperiment> {
        let n = potential.stencil().dim();
        let (lo, hi) = match &self.window {
            Some(w) => w.clone(),
            None if self.kind == "halfspace" => (vec![-0.5; n], vec![0.5; n]),
            None => (vec![0.0; n], vec![1.0; n]),
        };
        if lo.len() != 2 && self.kind != "halfspace" {
            return Err(Error::Config("polygon and function experiments need a 2D window".into()));
        }
        let rect = || Rect::new([lo[0], lo[1]], [hi[0], hi[1]]);
        let h_max = self.h_max.unwrap_or(0.125);
        let h_min = self.h_min.unwrap_or(1.0 / 256.0);
        let schedule = dyadic_schedule(h_max, h_min)?;
        let geometry = match self.kind.as_str() {
            "halfspace" => {
                let nu = self
                    .nu
                    .as_ref()
                    .ok_or_else(|| Error::Config("halfspace experiment needs 'nu'".into()))?;
                Geometry::HalfSpace {
                    nu: unit_normal(nu)?,
                }
            }
            "polygon" => {
                let polygon = match (&self.polygon, &self.diamond) {
                    (Some(v), None) => PolyhedralSet::new(v.clone(), rect()?)?,
                    (None, Some((c, r))) => PolyhedralSet::diamond(*c, *r, rect()?)?,
                    _ => {
                        return Err(Error::Config(
                            "polygon experiment needs exactly one of 'polygon' or 'diamond'".into(),
                        ))
                    }
                };
                Geometry::Polygon(polygon)
            }
            "function_tv" => {
                let layers = self
                    .layers
                    .iter()
                    .map(|(w, pts)| Ok((*w, PolyhedralSet::new(pts.clone(), rect()?)?)))
                    .collect::<Result<Vec<_>>>()?;
                Geometry::FunctionTv {
                    base: self.base,
                    layers,
                }
            }
            other => return Err(Error::Config(format!("unknown experiment kind '{other}'"))),
        };
        let exp = ConvergenceExperiment::new(geometry, lo, hi, schedule, potential)?;
        match &self.shift {
            Some(s) => exp.with_sampling(Sampling::Shifted(s.clone())),
            None => Ok(exp),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn schedule_is_dyadic() {
        assert_eq!(dyadic_schedule(0.5, 0.0625).unwrap(), vec![0.5, 0.25, 0.125, 0.0625]);
        assert!(dyadic_schedule(0.1, 0.2).is_err());
    }

    #[test]
    fn halfspace_e1_quarter_mesh() {
        let d = Arc::new(GridDomain::from_box(0.25, &[-0.5, -0.5], &[0.5, 0.5]).unwrap());
        let e = rasterize_halfspace(&[1.0, 0.0], &d).unwrap();
        let cols: Vec<i64> = e.cells().iter().map(|&c| d.cell_index(c)[0]).collect();
        assert_eq!(e.len(), 8);
        assert!(cols.iter().all(|&i| i >= 0));
        let f = rasterize_halfspace(&[-1.0, 0.0], &d).unwrap();
        assert_eq!(f, e.complement());
    }

    #[test]
    fn rejects_non_unit_normal() {
        let d = Arc::new(GridDomain::from_box(0.25, &[-0.5, -0.5], &[0.5, 0.5]).unwrap());
        assert!(rasterize_halfspace(&[1.0, 1.0], &d).is_err());
    }

    #[test]
    fn config_roundtrip_to_experiment() {
        let text = "kind=polygon\nwindow=0,0,1,1\nh_max=0.125\nh_min=0.03125\n\
                    polygon=0.25,0.25;0.75,0.25;0.75,0.75;0.25,0.75\n";
        let cfg = ExperimentConfig::parse(text).unwrap();
        let exp = cfg.build(presets::nearest_neighbor(2)).unwrap();
        assert_eq!(exp.h_schedule, vec![0.125, 0.0625, 0.03125]);
        assert_eq!(exp.limit().unwrap(), 2.0);
        let rows = run_polygon_experiment(&exp).unwrap();
        // the square is cell aligned at these meshes, so J_h is exact
        assert!(rows.iter().all(|r| r.abs_err < 1e-12));
    }

    #[test]
    fn config_errors() {
        assert!(ExperimentConfig::parse("nu=1,0\n").is_err());
        assert!(ExperimentConfig::parse("kind=halfspace\nfoo=1\n").is_err());
        let cfg = ExperimentConfig::parse("kind=halfspace\n").unwrap();
        assert!(cfg.build(presets::nearest_neighbor(2)).is_err());
    }

    #[test]
    fn polygon_too_close_to_window() {
        let p = PolyhedralSet::rectangle([0.01, 0.2], [0.5, 0.5], Rect::unit()).unwrap();
        let exp = ConvergenceExperiment::new(
            Geometry::Polygon(p),
            vec![0.0, 0.0],
            vec![1.0, 1.0],
            vec![0.125],
            presets::nearest_neighbor(2),
        );
        assert!(exp.is_err());
    }

    #[test]
    fn wrong_runner_kind() {
        let exp = ConvergenceExperiment::new(
            Geometry::HalfSpace { nu: vec![1.0, 0.0] },
            vec![-0.5, -0.5],
            vec![0.5, 0.5],
            vec![0.125],
            presets::nearest_neighbor(2),
        )
        .unwrap();
        assert!(run_polygon_experiment(&exp).is_err());
        assert!(run_halfspace_experiment(&exp).is_ok());
    }
}
