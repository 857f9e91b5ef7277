//! Polygonal sets in the plane and their anisotropic perimeter
//! `Σ_edges |edge ∩ Ω| φ(inner normal)`.

use std::fmt::Write as _;

use crate::anisotropy::density::AnisotropyDensity;
use crate::error::{Error, Result};

/// Open axis-aligned rectangle `(lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub lo: [f64; 2],
    pub hi: [f64; 2],
}

impl Rect {
    pub fn new(lo: [f64; 2], hi: [f64; 2]) -> Result<Self> {
        if !(lo[0] < hi[0] && lo[1] < hi[1]) {
            return Err(Error::Config(format!("empty rectangle {lo:?}..{hi:?}")));
        }
        Ok(Rect { lo, hi })
    }

    pub fn unit() -> Self {
        Rect {
            lo: [0.0, 0.0],
            hi: [1.0, 1.0],
        }
    }

    /// `(-1/2, 1/2)^2`.
    pub fn centered_unit() -> Self {
        Rect {
            lo: [-0.5, -0.5],
            hi: [0.5, 0.5],
        }
    }

    pub fn translate(&self, v: [f64; 2]) -> Rect {
        Rect {
            lo: [self.lo[0] + v[0], self.lo[1] + v[1]],
            hi: [self.hi[0] + v[0], self.hi[1] + v[1]],
        }
    }

    /// Corners in counterclockwise order.
    pub fn corners(&self) -> Vec<[f64; 2]> {
        vec![
            self.lo,
            [self.hi[0], self.lo[1]],
            self.hi,
            [self.lo[0], self.hi[1]],
        ]
    }

    fn scale(&self) -> f64 {
        (self.hi[0] - self.lo[0]).max(self.hi[1] - self.lo[1])
    }

    /// Distance from `p` to the complement of the rectangle (negative
    /// outside).
    pub fn inner_distance(&self, p: [f64; 2]) -> f64 {
        (p[0] - self.lo[0])
            .min(self.hi[0] - p[0])
            .min(p[1] - self.lo[1])
            .min(self.hi[1] - p[1])
    }
}

/// A simple counterclockwise polygon `E` observed through the window `Ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyhedralSet {
    vertices: Vec<[f64; 2]>,
    window: Rect,
}

/// Contribution of one polygon edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeContribution {
    pub edge_index: usize,
    /// Length of the edge inside the open window.
    pub len: f64,
    /// Inner unit normal.
    pub normal: [f64; 2],
    pub phi: f64,
    pub contrib: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerimeterReport {
    pub total: f64,
    pub edges: Vec<EdgeContribution>,
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn segments_intersect(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |a: [f64; 2], b: [f64; 2], p: [f64; 2], d: f64| {
        d == 0.0
            && p[0] >= a[0].min(b[0])
            && p[0] <= a[0].max(b[0])
            && p[1] >= a[1].min(b[1])
            && p[1] <= a[1].max(b[1])
    };
    on(q1, q2, p1, d1) || on(q1, q2, p2, d2) || on(p1, p2, q1, d3) || on(p1, p2, q2, d4)
}

impl PolyhedralSet {
    /// Validates the polygon: at least three distinct vertices, finite,
    /// simple and counterclockwise. Repeated consecutive vertices are
    /// dropped.
    pub fn new(vertices: Vec<[f64; 2]>, window: Rect) -> Result<Self> {
        if vertices.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::Domain("non-finite polygon vertex".into()));
        }
        let mut clean: Vec<[f64; 2]> = Vec::with_capacity(vertices.len());
        for v in vertices {
            if clean.last() != Some(&v) {
                clean.push(v);
            }
        }
        while clean.len() > 1 && clean.first() == clean.last() {
            clean.pop();
        }
        if clean.len() < 3 {
            return Err(Error::Config("polygon needs at least three vertices".into()));
        }
        let set = PolyhedralSet {
            vertices: clean,
            window,
        };
        let area = set.signed_area();
        if area <= 0.0 {
            return Err(Error::Config(format!(
                "polygon must be counterclockwise with positive area (signed area {area})"
            )));
        }
        let n = set.vertices.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    continue;
                }
                let (a1, a2) = set.edge(i);
                let (b1, b2) = set.edge(j);
                if segments_intersect(a1, a2, b1, b2) {
                    return Err(Error::Config(format!(
                        "polygon is not simple: edges {i} and {j} intersect"
                    )));
                }
            }
        }
        Ok(set)
    }

    /// Axis-aligned rectangle `[lo, hi]` as a polygon.
    pub fn rectangle(lo: [f64; 2], hi: [f64; 2], window: Rect) -> Result<Self> {
        Self::new(Rect::new(lo, hi)?.corners(), window)
    }

    /// Square rotated by 45°, centered at `center`, with half-diagonal `r`
    /// (side `r√2`).
    pub fn diamond(center: [f64; 2], r: f64, window: Rect) -> Result<Self> {
        let [cx, cy] = center;
        Self::new(
            vec![[cx + r, cy], [cx, cy + r], [cx - r, cy], [cx, cy - r]],
            window,
        )
    }

    /// `{x : x·ν > c} ∩ Ω`, whose only edge inside `Ω` is the interface.
    pub fn halfplane(nu: [f64; 2], c: f64, window: Rect) -> Result<Self> {
        let norm = nu[0].hypot(nu[1]);
        if !(norm > 0.0) {
            return Err(Error::Domain("half-plane normal must be nonzero".into()));
        }
        let level = |p: [f64; 2]| p[0] * nu[0] + p[1] * nu[1] - c;
        let corners = window.corners();
        let mut out = Vec::new();
        for i in 0..4 {
            let a = corners[i];
            let b = corners[(i + 1) % 4];
            let (la, lb) = (level(a), level(b));
            if la > 0.0 {
                out.push(a);
            }
            if (la > 0.0) != (lb > 0.0) {
                let t = la / (la - lb);
                out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
            }
        }
        Self::new(out, window)
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn window(&self) -> &Rect {
        &self.window
    }

    pub fn num_edges(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge(&self, i: usize) -> ([f64; 2], [f64; 2]) {
        (self.vertices[i], self.vertices[(i + 1) % self.vertices.len()])
    }

    pub fn signed_area(&self) -> f64 {
        let n = self.vertices.len();
        0.5 * (0..n)
            .map(|i| {
                let (a, b) = self.edge(i);
                a[0] * b[1] - b[0] * a[1]
            })
            .sum::<f64>()
    }

    /// Rigid translation of both the polygon and its window.
    pub fn translate(&self, v: [f64; 2]) -> Self {
        PolyhedralSet {
            vertices: self
                .vertices
                .iter()
                .map(|p| [p[0] + v[0], p[1] + v[1]])
                .collect(),
            window: self.window.translate(v),
        }
    }

    /// Same polygon seen through another window.
    pub fn with_window(&self, window: Rect) -> Self {
        PolyhedralSet {
            vertices: self.vertices.clone(),
            window,
        }
    }

    /// Point-in-polygon by crossing number. Points on edges may land on
    /// either side.
    pub fn contains(&self, p: &[f64]) -> bool {
        let (x, y) = (p[0], p[1]);
        let n = self.vertices.len();
        let mut inside = false;
        let mut j = n - 1;
        for i in 0..n {
            let (xi, yi) = (self.vertices[i][0], self.vertices[i][1]);
            let (xj, yj) = (self.vertices[j][0], self.vertices[j][1]);
            if (yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi {
                inside = !inside;
            }
            j = i;
        }
        inside
    }

    /// Smallest distance from a vertex or edge point to `∂Ω`; negative when
    /// the polygon leaves the window.
    pub fn margin(&self) -> f64 {
        self.vertices
            .iter()
            .map(|&v| self.window.inner_distance(v))
            .fold(f64::INFINITY, f64::min)
    }

    /// `true` when every vertex is farther than `margin` from `∂Ω`.
    pub fn is_inside_window(&self, margin: f64) -> bool {
        self.margin() > margin
    }

    /// Portion of edge `i` inside the closed window, by Liang–Barsky
    /// clipping. Segments lying on `∂Ω` are discarded.
    fn clipped_edge(&self, i: usize) -> Option<([f64; 2], [f64; 2])> {
        let (a, b) = self.edge(i);
        let d = [b[0] - a[0], b[1] - a[1]];
        let (mut t0, mut t1) = (0.0f64, 1.0f64);
        for axis in 0..2 {
            for (p, q) in [
                (-d[axis], a[axis] - self.window.lo[axis]),
                (d[axis], self.window.hi[axis] - a[axis]),
            ] {
                if p == 0.0 {
                    if q < 0.0 {
                        return None;
                    }
                } else {
                    let r = q / p;
                    if p < 0.0 {
                        t0 = t0.max(r);
                    } else {
                        t1 = t1.min(r);
                    }
                }
            }
        }
        if t0 >= t1 {
            return None;
        }
        let p0 = [a[0] + t0 * d[0], a[1] + t0 * d[1]];
        let p1 = [a[0] + t1 * d[0], a[1] + t1 * d[1]];
        let tol = 1e-12 * self.window.scale();
        for axis in 0..2 {
            for bound in [self.window.lo[axis], self.window.hi[axis]] {
                if (p0[axis] - bound).abs() <= tol && (p1[axis] - bound).abs() <= tol {
                    return None;
                }
            }
        }
        Some((p0, p1))
    }

    /// `Per_φ(E, Ω) = Σ_edges |edge ∩ Ω| φ(ν_edge)`, `ν` the inner normal.
    pub fn perimeter(&self, density: &AnisotropyDensity) -> Result<PerimeterReport> {
        polyhedral_perimeter(density, self)
    }
}

/// Exact limit perimeter of a polygon: clipped edge lengths weighted by
/// `φ` at the inner unit normal.
pub fn polyhedral_perimeter(
    density: &AnisotropyDensity,
    set: &PolyhedralSet,
) -> Result<PerimeterReport> {
    if density.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: density.dim(),
        });
    }
    let mut edges = Vec::with_capacity(set.num_edges());
    let mut total = 0.0;
    for i in 0..set.num_edges() {
        let (a, b) = set.edge(i);
        let d = [b[0] - a[0], b[1] - a[1]];
        let length = d[0].hypot(d[1]);
        let normal = [-d[1] / length, d[0] / length];
        let phi = density.phi(&normal)?;
        let len = set
            .clipped_edge(i)
            .map(|(p, q)| (q[0] - p[0]).hypot(q[1] - p[1]))
            .unwrap_or(0.0);
        let contrib = len * phi;
        total += contrib;
        edges.push(EdgeContribution {
            edge_index: i,
            len,
            normal,
            phi,
            contrib,
        });
    }
    Ok(PerimeterReport { total, edges })
}

/// CSV `edge_index,len,nu_x,nu_y,phi,contrib`.
pub fn perimeter_csv(report: &PerimeterReport) -> String {
    let mut out = String::from("edge_index,len,nu_x,nu_y,phi,contrib\n");
    for e in &report.edges {
        writeln!(
            out,
            "{},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e}",
            e.edge_index, e.len, e.normal[0], e.normal[1], e.phi, e.contrib
        )
        .unwrap();
    }
    out
}

/// Limit perimeter of an axis box `[lo, hi]` inside the open window
/// `(window_lo, window_hi)` in any dimension: each face strictly inside
/// the window contributes its clipped area times `φ` at its inner normal.
pub fn axis_box_perimeter(
    density: &AnisotropyDensity,
    lo: &[f64],
    hi: &[f64],
    window_lo: &[f64],
    window_hi: &[f64],
) -> Result<f64> {
    let n = density.dim();
    for v in [lo, hi, window_lo, window_hi] {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
    }
    let overlap = |j: usize| (hi[j].min(window_hi[j]) - lo[j].max(window_lo[j])).max(0.0);
    let mut total = 0.0;
    for i in 0..n {
        let area: f64 = (0..n).filter(|&j| j != i).map(overlap).product();
        for (pos, sign) in [(lo[i], 1.0), (hi[i], -1.0)] {
            if pos > window_lo[i] && pos < window_hi[i] {
                let mut normal = vec![0.0; n];
                normal[i] = sign;
                total += area * density.phi(&normal)?;
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn axis_square_nearest_neighbor() {
        let d = AnisotropyDensity::new(presets::nearest_neighbor(2));
        let sq = PolyhedralSet::rectangle([0.25, 0.25], [0.75, 0.75], Rect::unit()).unwrap();
        let r = sq.perimeter(&d).unwrap();
        assert!((r.total - 2.0).abs() < 1e-15);
        assert_eq!(r.edges[0].normal, [0.0, 1.0]);
    }

    #[test]
    fn diamond_corner_potential() {
        let d = AnisotropyDensity::new(presets::corner_euclidean());
        let r = 0.3;
        let side = r * 2f64.sqrt();
        let dia = PolyhedralSet::diamond([0.5, 0.5], r, Rect::unit()).unwrap();
        let p = dia.perimeter(&d).unwrap().total;
        let expected = side * (2.0 + 2.0 * 2f64.sqrt());
        assert!((p - expected).abs() < 1e-14, "{p} vs {expected}");
    }

    #[test]
    fn halfplane_contributes_only_interface() {
        let d = AnisotropyDensity::new(presets::corner_euclidean());
        let nu = [2.0 / 5f64.sqrt(), 1.0 / 5f64.sqrt()];
        let hp = PolyhedralSet::halfplane(nu, 0.0, Rect::centered_unit()).unwrap();
        let r = hp.perimeter(&d).unwrap();
        let interface = 5f64.sqrt() / 2.0;
        let expected = interface * d.phi(&nu).unwrap();
        assert!((r.total - expected).abs() < 1e-14);
        assert_eq!(r.edges.iter().filter(|e| e.len > 0.0).count(), 1);
    }

    #[test]
    fn edges_on_window_boundary_are_dropped() {
        let d = AnisotropyDensity::new(presets::nearest_neighbor(2));
        let sq = PolyhedralSet::rectangle([0.0, 0.0], [0.5, 1.0], Rect::unit()).unwrap();
        assert!((sq.perimeter(&d).unwrap().total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_clockwise_and_self_intersecting() {
        let w = Rect::unit();
        let cw = vec![[0.2, 0.2], [0.2, 0.8], [0.8, 0.8], [0.8, 0.2]];
        assert!(PolyhedralSet::new(cw, w).is_err());
        let bowtie = vec![[0.2, 0.2], [0.8, 0.8], [0.8, 0.2], [0.2, 0.8]];
        assert!(PolyhedralSet::new(bowtie, w).is_err());
        assert!(PolyhedralSet::new(vec![[0.0, 0.0], [1.0, 0.0]], w).is_err());
    }

    #[test]
    fn contains_by_crossing() {
        let dia = PolyhedralSet::diamond([0.5, 0.5], 0.3, Rect::unit()).unwrap();
        assert!(dia.contains(&[0.5, 0.5]));
        assert!(!dia.contains(&[0.75, 0.75]));
    }

    #[test]
    fn axis_box_in_3d() {
        let d = AnisotropyDensity::new(presets::nearest_neighbor(3));
        let p = axis_box_perimeter(&d, &[0.25; 3], &[0.75; 3], &[0.0; 3], &[1.0; 3]).unwrap();
        assert!((p - 1.5).abs() < 1e-15);
        let half = axis_box_perimeter(&d, &[0.0; 3], &[0.5, 1.0, 1.0], &[0.0; 3], &[1.0; 3]).unwrap();
        assert!((half - 1.0).abs() < 1e-15);
    }
}
