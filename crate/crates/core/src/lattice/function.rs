use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::domain::GridDomain;

/// A piecewise-constant function `u = Σ_x u(x) χ_{Q_x^h}` on `Ω`.
///
/// One value is stored per box cell; cells outside `Ω` hold `0` and are
/// never read by the functionals.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    domain: Arc<GridDomain>,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(domain: Arc<GridDomain>, mut values: Vec<f64>) -> Result<Self> {
        if values.len() != domain.num_cells() {
            return Err(Error::DimensionMismatch {
                expected: domain.num_cells(),
                found: values.len(),
            });
        }
        for (c, v) in values.iter_mut().enumerate() {
            if !domain.is_inside(c) {
                *v = 0.0;
            } else if !v.is_finite() {
                return Err(Error::Domain(format!("non-finite value {v} at cell {c}")));
            }
        }
        Ok(GridFunction { domain, values })
    }

    pub fn constant(domain: Arc<GridDomain>, value: f64) -> Result<Self> {
        let n = domain.num_cells();
        Self::new(domain, vec![value; n])
    }

    /// Samples `f` at cell centers.
    pub fn from_fn(domain: Arc<GridDomain>, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let values = (0..domain.num_cells())
            .map(|c| if domain.is_inside(c) { f(&domain.cell_center(c)) } else { 0.0 })
            .collect();
        Self::new(domain, values)
    }

    pub fn domain(&self) -> &Arc<GridDomain> {
        &self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn value(&self, cell: usize) -> f64 {
        self.values[cell]
    }

    /// Values on the cells of `Ω`, in flat order.
    pub fn inside_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(c, _)| self.domain.is_inside(*c))
            .map(|(_, &v)| v)
    }

    /// Sorted distinct values on `Ω`, decreasing.
    pub fn distinct_values_desc(&self) -> Vec<f64> {
        let mut vals: Vec<f64> = self.inside_values().collect();
        vals.sort_by(|a, b| b.total_cmp(a));
        vals.dedup();
        vals
    }

    pub fn max_abs(&self) -> f64 {
        self.inside_values().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Applies `f` to every value on `Ω`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = self.values.iter().map(|&v| f(v)).collect();
        Self::new(self.domain.clone(), values)
    }

    /// Pointwise combination with another function on the same domain.
    pub fn zip_with(&self, other: &GridFunction, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.require_same_domain(other.domain())?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self::new(self.domain.clone(), values)
    }

    /// The level set `{u > s}`.
    pub fn superlevel_set(&self, s: f64) -> GridSet {
        let member = self.values.iter().map(|&v| v > s).collect();
        GridSet::new(self.domain.clone(), member).expect("same domain")
    }

    pub(crate) fn require_same_domain(&self, other: &Arc<GridDomain>) -> Result<()> {
        if Arc::ptr_eq(&self.domain, other) || *self.domain == **other {
            Ok(())
        } else {
            Err(Error::Precondition("grid functions live on different domains".into()))
        }
    }
}

/// A discrete set `E` given by its characteristic function on `Ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSet {
    domain: Arc<GridDomain>,
    member: Vec<bool>,
}

impl GridSet {
    /// Membership bits outside `Ω` are cleared.
    pub fn new(domain: Arc<GridDomain>, mut member: Vec<bool>) -> Result<Self> {
        if member.len() != domain.num_cells() {
            return Err(Error::DimensionMismatch {
                expected: domain.num_cells(),
                found: member.len(),
            });
        }
        for (c, m) in member.iter_mut().enumerate() {
            *m &= domain.is_inside(c);
        }
        Ok(GridSet { domain, member })
    }

    pub fn empty(domain: Arc<GridDomain>) -> Self {
        let n = domain.num_cells();
        Self::new(domain, vec![false; n]).expect("sized to domain")
    }

    /// All of `Ω`.
    pub fn full(domain: Arc<GridDomain>) -> Self {
        let n = domain.num_cells();
        Self::new(domain, vec![true; n]).expect("sized to domain")
    }

    /// Cells whose center satisfies `pred`.
    pub fn from_predicate(domain: Arc<GridDomain>, pred: impl Fn(&[f64]) -> bool) -> Self {
        let member = (0..domain.num_cells())
            .map(|c| pred(&domain.cell_center(c)))
            .collect();
        Self::new(domain, member).expect("sized to domain")
    }

    pub fn domain(&self) -> &Arc<GridDomain> {
        &self.domain
    }

    pub fn members(&self) -> &[bool] {
        &self.member
    }

    #[inline]
    pub fn contains(&self, cell: usize) -> bool {
        self.member[cell]
    }

    pub fn len(&self) -> usize {
        self.member.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.member.iter().any(|&b| b)
    }

    /// Flat indices of member cells.
    pub fn cells(&self) -> Vec<usize> {
        (0..self.member.len()).filter(|&c| self.member[c]).collect()
    }

    pub fn intersection(&self, other: &GridSet) -> Result<GridSet> {
        self.combine(other, |a, b| a && b)
    }

    pub fn union(&self, other: &GridSet) -> Result<GridSet> {
        self.combine(other, |a, b| a || b)
    }

    /// `Ω \ E`.
    pub fn complement(&self) -> GridSet {
        let member = self.member.iter().map(|&b| !b).collect();
        Self::new(self.domain.clone(), member).expect("same domain")
    }

    pub fn is_subset(&self, other: &GridSet) -> bool {
        self.member.iter().zip(&other.member).all(|(&a, &b)| !a || b)
    }

    /// `χ_E` as a grid function.
    pub fn indicator(&self) -> GridFunction {
        let values = self.member.iter().map(|&b| f64::from(u8::from(b))).collect();
        GridFunction::new(self.domain.clone(), values).expect("same domain")
    }

    fn combine(&self, other: &GridSet, op: impl Fn(bool, bool) -> bool) -> Result<GridSet> {
        if !(Arc::ptr_eq(&self.domain, &other.domain) || *self.domain == *other.domain) {
            return Err(Error::Precondition("grid sets live on different domains".into()));
        }
        let member = self
            .member
            .iter()
            .zip(&other.member)
            .map(|(&a, &b)| op(a, b))
            .collect();
        GridSet::new(self.domain.clone(), member)
    }
}
