use crate::error::{Error, Result};

/// Cells `Q_x^h = x + h[0,1)^N` of a box-shaped window on `hZ^N`, with a
/// mask selecting the cells that belong to `Ω`.
///
/// Cells are addressed by a flat index in row-major order (axis 0 slowest),
/// which is also the lexicographic order of their integer indices. The
/// node `x` of a cell is its lower corner.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDomain {
    h: f64,
    lo: Vec<i64>,
    shape: Vec<usize>,
    strides: Vec<usize>,
    inside: Vec<bool>,
}

impl GridDomain {
    /// All cells `lo[k] <= i_k < lo[k] + shape[k]`, every cell inside `Ω`.
    pub fn new(h: f64, lo: Vec<i64>, shape: Vec<usize>) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::Config(format!("mesh size must be positive, got {h}")));
        }
        if shape.is_empty() || lo.len() != shape.len() {
            return Err(Error::Config("domain needs matching lo/shape of length >= 1".into()));
        }
        if shape.contains(&0) {
            return Err(Error::Config("domain has an empty axis".into()));
        }
        let mut strides = vec![1usize; shape.len()];
        for k in (0..shape.len() - 1).rev() {
            strides[k] = strides[k + 1] * shape[k + 1];
        }
        let n = strides[0] * shape[0];
        Ok(GridDomain {
            h,
            lo,
            shape,
            strides,
            inside: vec![true; n],
        })
    }

    /// The cells of `hZ^N` lying in the closed box `[box_lo, box_hi]`.
    /// Box faces are snapped to the lattice when within `1e-9 h`; cells cut
    /// by an unaligned face are left out.
    pub fn from_box(h: f64, box_lo: &[f64], box_hi: &[f64]) -> Result<Self> {
        if box_lo.len() != box_hi.len() {
            return Err(Error::DimensionMismatch {
                expected: box_lo.len(),
                found: box_hi.len(),
            });
        }
        if box_lo.iter().zip(box_hi).any(|(a, b)| !(a < b)) {
            return Err(Error::Config("box_lo must be below box_hi componentwise".into()));
        }
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::Config(format!("mesh size must be positive, got {h}")));
        }
        let mut lo = Vec::with_capacity(box_lo.len());
        let mut shape = Vec::with_capacity(box_lo.len());
        for (a, b) in box_lo.iter().zip(box_hi) {
            let first = (a / h - 1e-9).ceil() as i64;
            let last = (b / h + 1e-9).floor() as i64;
            if last <= first {
                return Err(Error::Config(format!(
                    "box [{a}, {b}] contains no cell at h = {h}"
                )));
            }
            lo.push(first);
            shape.push((last - first) as usize);
        }
        Self::new(h, lo, shape)
    }

    /// Replaces the inside mask. `mask.len()` must equal the cell count.
    pub fn with_mask(mut self, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != self.inside.len() {
            return Err(Error::DimensionMismatch {
                expected: self.inside.len(),
                found: mask.len(),
            });
        }
        self.inside = mask;
        Ok(self)
    }

    /// Keeps only cells whose center satisfies `pred`.
    pub fn restrict(self, pred: impl Fn(&[f64]) -> bool) -> Self {
        let mask = (0..self.num_cells())
            .map(|c| self.inside[c] && pred(&self.cell_center(c)))
            .collect();
        GridDomain {
            inside: mask,
            ..self
        }
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    /// Number of cells in the bounding box.
    pub fn num_cells(&self) -> usize {
        self.inside.len()
    }

    /// Number of cells marked inside `Ω`.
    pub fn num_inside(&self) -> usize {
        self.inside.iter().filter(|&&b| b).count()
    }

    pub fn inside_mask(&self) -> &[bool] {
        &self.inside
    }

    #[inline]
    pub fn is_inside(&self, cell: usize) -> bool {
        self.inside[cell]
    }

    pub fn box_lo(&self) -> Vec<f64> {
        self.lo.iter().map(|&i| i as f64 * self.h).collect()
    }

    pub fn box_hi(&self) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.shape)
            .map(|(&i, &n)| (i + n as i64) as f64 * self.h)
            .collect()
    }

    /// Integer lattice index of a cell.
    pub fn cell_index(&self, cell: usize) -> Vec<i64> {
        let mut rem = cell;
        self.strides
            .iter()
            .zip(&self.lo)
            .map(|(&s, &l)| {
                let k = rem / s;
                rem %= s;
                l + k as i64
            })
            .collect()
    }

    /// Flat index of the cell with lattice index `index`, if in the box.
    pub fn cell_at(&self, index: &[i64]) -> Option<usize> {
        if index.len() != self.dim() {
            return None;
        }
        let mut flat = 0usize;
        for (k, &i) in index.iter().enumerate() {
            let local = i - self.lo[k];
            if local < 0 || local >= self.shape[k] as i64 {
                return None;
            }
            flat += local as usize * self.strides[k];
        }
        Some(flat)
    }

    /// Flat index of the cell containing point `p` (half-open cells).
    pub fn cell_containing(&self, p: &[f64]) -> Option<usize> {
        let index: Vec<i64> = p.iter().map(|x| (x / self.h).floor() as i64).collect();
        self.cell_at(&index)
    }

    /// The node `x ∈ hZ^N` of a cell (its lower corner).
    pub fn node_position(&self, cell: usize) -> Vec<f64> {
        self.cell_index(cell)
            .into_iter()
            .map(|i| i as f64 * self.h)
            .collect()
    }

    pub fn cell_center(&self, cell: usize) -> Vec<f64> {
        self.cell_index(cell)
            .into_iter()
            .map(|i| (i as f64 + 0.5) * self.h)
            .collect()
    }

    /// Volume `h^N` of one cell.
    pub fn cell_volume(&self) -> f64 {
        self.h.powi(self.dim() as i32)
    }
}
