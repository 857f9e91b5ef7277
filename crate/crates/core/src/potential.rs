//! Submodular stencil potentials and their coarea (Lovász) extension.
//!
//! A potential `F` is stored as a flat table over `{0,1}^Σ`: bit `i` of the
//! table index is the value at `offsets[i]`. It is extended to real vectors
//! by the coarea formula
//!
//! ```text
//! F(u) = ∫ F(χ_{u>s}) ds,     {u>s} = { y ∈ Σ : u(y) > s }
//! ```
//!
//! with strict level sets. Since `F(0) = F(χ_Σ) = 0`, the integrand vanishes
//! outside `[min u, max u]` and the integral is a finite sum over the sorted
//! distinct values of `u`.
//!
//! Coercivity `F(u) ≥ c Σ_i |u(e_i) - u(0)|` is certified on binary vectors
//! only. The right-hand side obeys the same coarea formula,
//! `|a - b| = ∫ |χ_{a>s} - χ_{b>s}| ds`, so integrating the binary inequality
//! over `s` gives it for every real `u`.

use crate::error::{Error, Result};
use crate::stencil::{BinaryVector, Stencil};

/// Above this stencil size the pairwise submodularity scan switches to the
/// equivalent local (diminishing returns) test.
const PAIRWISE_SCAN_MAX_LEN: usize = 12;

/// A nonnegative potential on `{0,1}^Σ` with `F(0) = F(χ_Σ) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct StencilPotential {
    stencil: Stencil,
    values: Vec<f64>,
    coercivity_c: f64,
}

/// Outcome of [`StencilPotential::check_submodular`].
#[derive(Debug, Clone, PartialEq)]
pub struct SubmodularityReport {
    pub ok: bool,
    /// A pair `(u, v)` with `F(u∧v) + F(u∨v) > F(u) + F(v) + τ`.
    pub witness: Option<(BinaryVector, BinaryVector)>,
    /// Largest observed `F(u∧v) + F(u∨v) - F(u) - F(v)`.
    pub worst_excess: f64,
    pub slack: f64,
}

impl StencilPotential {
    /// Validates the table: `2^|Σ|` finite nonnegative entries vanishing on
    /// the all-zeros and all-ones vectors. Submodularity is not enforced
    /// here; see [`check_submodular`](Self::check_submodular).
    pub fn new(stencil: Stencil, values: Vec<f64>) -> Result<Self> {
        if values.len() != stencil.table_len() {
            return Err(Error::Config(format!(
                "potential table has {} entries, expected 2^{} = {}",
                values.len(),
                stencil.len(),
                stencil.table_len()
            )));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::Config(format!(
                "potential value at mask {i:#b} must be finite and nonnegative, got {v}"
            )));
        }
        let full = stencil.full_mask() as usize;
        if values[0] != 0.0 || values[full] != 0.0 {
            return Err(Error::Config(format!(
                "potential must vanish on constant vectors: F(0) = {}, F(1) = {}",
                values[0], values[full]
            )));
        }
        let mut potential = StencilPotential {
            stencil,
            values,
            coercivity_c: 0.0,
        };
        potential.coercivity_c = potential.check_coercivity();
        Ok(potential)
    }

    /// Builds the table by evaluating `f` on every binary vector.
    pub fn from_fn(stencil: Stencil, f: impl Fn(BinaryVector) -> f64) -> Result<Self> {
        let n = stencil.len();
        let values = (0..stencil.table_len() as u32)
            .map(|m| f(BinaryVector::new(m, n).expect("mask fits stencil")))
            .collect();
        Self::new(stencil, values)
    }

    /// The zero potential on `stencil`.
    pub fn zero(stencil: Stencil) -> Self {
        let values = vec![0.0; stencil.table_len()];
        Self::new(stencil, values).expect("zero table is valid")
    }

    pub fn stencil(&self) -> &Stencil {
        &self.stencil
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Table lookup by bitmask.
    #[inline]
    pub fn value(&self, mask: u32) -> f64 {
        self.values[mask as usize]
    }

    pub fn value_of(&self, u: BinaryVector) -> f64 {
        self.value(u.bits())
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Largest certified coercivity constant (0 when the assumption fails).
    pub fn coercivity_c(&self) -> f64 {
        self.coercivity_c
    }

    /// Slack used by inequality checks, `1e-12 · max(1, max F)`.
    pub fn slack(&self) -> f64 {
        1e-12 * self.max_value().max(1.0)
    }

    /// `true` when `F(1 - u) = F(u)` for every binary `u`.
    pub fn is_complement_symmetric(&self) -> bool {
        let full = self.stencil.full_mask();
        (0..self.values.len() as u32).all(|m| self.value(m) == self.value(!m & full))
    }

    /// Exhaustive submodularity test.
    ///
    /// For `|Σ| ≤ 12` every incomparable pair is scanned. Larger stencils use
    /// the equivalent local form `F(S+a) + F(S+b) ≥ F(S) + F(S+a+b)`, which
    /// visits `O(2^|Σ| |Σ|^2)` quadruples instead of `4^|Σ|` pairs.
    pub fn check_submodular(&self) -> SubmodularityReport {
        let n = self.stencil.len();
        let slack = self.slack();
        let mut worst = f64::NEG_INFINITY;
        let mut witness = None;
        let mut record = |u: u32, v: u32, excess: f64| {
            if excess > worst {
                worst = excess;
                if excess > slack {
                    witness = Some((u, v));
                }
            }
        };
        let table_len = self.values.len() as u32;
        if n <= PAIRWISE_SCAN_MAX_LEN {
            for u in 0..table_len {
                for v in (u + 1)..table_len {
                    let meet = u & v;
                    if meet == u || meet == v {
                        continue;
                    }
                    let excess = self.value(meet) + self.value(u | v)
                        - self.value(u)
                        - self.value(v);
                    record(u, v, excess);
                }
            }
        } else {
            for s in 0..table_len {
                for a in 0..n {
                    if s >> a & 1 == 1 {
                        continue;
                    }
                    for b in (a + 1)..n {
                        if s >> b & 1 == 1 {
                            continue;
                        }
                        let u = s | 1 << a;
                        let v = s | 1 << b;
                        let excess = self.value(s) + self.value(u | v)
                            - self.value(u)
                            - self.value(v);
                        record(u, v, excess);
                    }
                }
            }
        }
        let witness = witness.map(|(u, v)| {
            (
                BinaryVector::new(u, n).expect("mask fits"),
                BinaryVector::new(v, n).expect("mask fits"),
            )
        });
        SubmodularityReport {
            ok: witness.is_none(),
            witness,
            worst_excess: if worst.is_finite() { worst } else { 0.0 },
            slack,
        }
    }

    /// Largest `c ≥ 0` with `F(u) ≥ c Σ_i |u(e_i) - u(0)|` on binary `u`
    /// (hence on all real `u`, see the module docs). Zero when the stencil
    /// lacks a basis vector.
    pub fn check_coercivity(&self) -> f64 {
        if !self.stencil.has_full_basis() {
            return 0.0;
        }
        let origin = self.stencil.origin_index();
        let basis = self.stencil.basis_indices();
        let mut c = f64::INFINITY;
        for m in 0..self.values.len() as u32 {
            let at_origin = m >> origin & 1;
            let jumps = basis.iter().filter(|&&i| m >> i & 1 != at_origin).count();
            if jumps > 0 {
                c = c.min(self.value(m) / jumps as f64);
            }
        }
        if c.is_finite() {
            c
        } else {
            0.0
        }
    }

    /// Largest ratio `F(w) / #{y ∈ Σ : w(y) ≠ w(0)}` over binary `w` with
    /// `F(w) > 0`. Bounds `F(u) ≤ C Σ_y |u(y) - u(0)|` for every real `u`.
    pub fn pairwise_upper_constant(&self) -> f64 {
        let origin = self.stencil.origin_index();
        let n = self.stencil.len();
        let mut best = 0.0f64;
        for m in 0..self.values.len() as u32 {
            let f = self.value(m);
            if f <= 0.0 {
                continue;
            }
            let at_origin = m >> origin & 1;
            let differing = (0..n).filter(|&i| m >> i & 1 != at_origin).count();
            // F(w) > 0 forces w to be nonconstant, so `differing > 0`.
            best = best.max(f / differing as f64);
        }
        best
    }

    /// Coarea extension `∫ F(χ_{u>s}) ds` of the table to a real vector.
    pub fn lovasz_extend(&self, u: &[f64]) -> Result<f64> {
        self.check_vector(u)?;
        Ok(self.extend_unchecked(u))
    }

    /// Extension without length or finiteness checks; used in inner loops
    /// where inputs are valid by construction.
    #[inline]
    pub(crate) fn extend_unchecked(&self, u: &[f64]) -> f64 {
        let n = u.len();
        let mut order = [0u8; crate::stencil::MAX_STENCIL_LEN];
        let order = &mut order[..n];
        sort_descending(u, order);
        let mut mask = 0u32;
        let mut total = 0.0;
        for k in 0..n {
            let i = usize::from(order[k]);
            mask |= 1 << i;
            if k + 1 < n {
                let next = u[usize::from(order[k + 1])];
                if next < u[i] {
                    // on (next, u[i]) the level set {u > s} is `mask`
                    total += (u[i] - next) * self.value(mask);
                }
            }
        }
        total
    }

    /// Greedy subgradient of the extension at `u`: with `π` sorting `u` in
    /// decreasing order (ties by index), `s[π_k] = F(S_k) - F(S_{k-1})` where
    /// `S_k = {π_1, ..., π_k}`. Satisfies `⟨s, u⟩ = F(u)` and `⟨s, w⟩ ≤ F(w)`
    /// for all `w` when `F` is submodular.
    pub fn greedy_subgradient(&self, u: &[f64], out: &mut [f64]) -> Result<()> {
        self.check_vector(u)?;
        if out.len() != u.len() {
            return Err(Error::DimensionMismatch {
                expected: u.len(),
                found: out.len(),
            });
        }
        self.subgradient_unchecked(u, out);
        Ok(())
    }

    #[inline]
    pub(crate) fn subgradient_unchecked(&self, u: &[f64], out: &mut [f64]) {
        let n = u.len();
        let mut order = [0u8; crate::stencil::MAX_STENCIL_LEN];
        let order = &mut order[..n];
        sort_descending(u, order);
        let mut mask = 0u32;
        let mut prev = 0.0;
        for &i in order.iter() {
            mask |= 1 << i;
            let cur = self.value(mask);
            out[usize::from(i)] = cur - prev;
            prev = cur;
        }
    }

    fn check_vector(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.stencil.len() {
            return Err(Error::DimensionMismatch {
                expected: self.stencil.len(),
                found: u.len(),
            });
        }
        if let Some(x) = u.iter().find(|x| !x.is_finite()) {
            return Err(Error::Domain(format!("non-finite stencil entry {x}")));
        }
        Ok(())
    }
}

/// Indices of `u` sorted by decreasing value; ties keep index order.
#[inline]
fn sort_descending(u: &[f64], order: &mut [u8]) {
    for (k, slot) in order.iter_mut().enumerate() {
        *slot = k as u8;
    }
    // insertion sort: |Σ| ≤ 20 and usually 3..9
    for k in 1..order.len() {
        let cur = order[k];
        let mut j = k;
        while j > 0 && u[usize::from(order[j - 1])] < u[usize::from(cur)] {
            order[j] = order[j - 1];
            j -= 1;
        }
        order[j] = cur;
    }
}
