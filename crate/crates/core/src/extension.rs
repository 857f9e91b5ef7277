//! Randomized verification of the algebraic properties of the coarea
//! extension: homogeneity, shift invariance, the lattice inequality and
//! convexity.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::potential::StencilPotential;

/// Relative tolerance used by [`extension_properties_check`].
pub const PROPERTY_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtensionProperty {
    /// `F(λu) = λ F(u)`, `λ > 0`.
    Homogeneity,
    /// `F(u + c·1) = F(u)`.
    ShiftInvariance,
    /// `F(u∧v) + F(u∨v) ≤ F(u) + F(v)`.
    Lattice,
    /// `F(tu + (1-t)v) ≤ t F(u) + (1-t) F(v)`.
    Convexity,
}

impl ExtensionProperty {
    pub const ALL: [ExtensionProperty; 4] = [
        ExtensionProperty::Homogeneity,
        ExtensionProperty::ShiftInvariance,
        ExtensionProperty::Lattice,
        ExtensionProperty::Convexity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExtensionProperty::Homogeneity => "homogeneity",
            ExtensionProperty::ShiftInvariance => "shift_invariance",
            ExtensionProperty::Lattice => "lattice_inequality",
            ExtensionProperty::Convexity => "convexity",
        }
    }
}

impl fmt::Display for ExtensionProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One violated sample.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyFailure {
    pub property: ExtensionProperty,
    pub u: Vec<f64>,
    pub v: Option<Vec<f64>>,
    /// The scalar parameter of the test (`λ`, `c` or `t`), if any.
    pub parameter: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExtensionReport {
    pub samples: usize,
    pub failures: Vec<PropertyFailure>,
}

impl ExtensionReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failures_of(&self, property: ExtensionProperty) -> usize {
        self.failures.iter().filter(|f| f.property == property).count()
    }

    pub fn passed(&self, property: ExtensionProperty) -> bool {
        self.failures_of(property) == 0
    }
}

fn close(lhs: f64, rhs: f64) -> bool {
    (lhs - rhs).abs() <= PROPERTY_RTOL * lhs.abs().max(rhs.abs()).max(1e-300)
}

fn at_most(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs + PROPERTY_RTOL * lhs.abs().max(rhs.abs()).max(1e-300)
}

/// Draws a test vector; a quarter of the draws use a few integer levels so
/// that ties and exactly binary patterns are exercised.
fn random_vector(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    if rng.gen_bool(0.25) {
        (0..n).map(|_| f64::from(rng.gen_range(-2i32..=2))).collect()
    } else {
        (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
    }
}

/// Checks the four extension properties on `samples` random draws.
///
/// Every sample evaluates all four properties; each violation is recorded
/// with its witness vectors. Submodular potentials are expected to pass
/// all of them, non-submodular ones typically fail the lattice and
/// convexity checks.
pub fn extension_properties_check(
    potential: &StencilPotential,
    samples: usize,
    rng_seed: u64,
) -> ExtensionReport {
    let n = potential.stencil().len();
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let f = |u: &[f64]| potential.extend_unchecked(u);
    let mut failures = Vec::new();

    for _ in 0..samples {
        let u = random_vector(&mut rng, n);
        let v = random_vector(&mut rng, n);
        let lambda = 10f64.powf(rng.gen_range(-1.0..1.0));
        let c = rng.gen_range(-5.0..5.0);
        let t = rng.gen_range(0.0..1.0);
        let fu = f(&u);
        let fv = f(&v);

        let scaled: Vec<f64> = u.iter().map(|x| lambda * x).collect();
        let (lhs, rhs) = (f(&scaled), lambda * fu);
        if !close(lhs, rhs) {
            failures.push(PropertyFailure {
                property: ExtensionProperty::Homogeneity,
                u: u.clone(),
                v: None,
                parameter: Some(lambda),
                lhs,
                rhs,
            });
        }

        let shifted: Vec<f64> = u.iter().map(|x| x + c).collect();
        let lhs = f(&shifted);
        if !close(lhs, fu) {
            failures.push(PropertyFailure {
                property: ExtensionProperty::ShiftInvariance,
                u: u.clone(),
                v: None,
                parameter: Some(c),
                lhs,
                rhs: fu,
            });
        }

        let meet: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a.min(*b)).collect();
        let join: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a.max(*b)).collect();
        let (lhs, rhs) = (f(&meet) + f(&join), fu + fv);
        if !at_most(lhs, rhs) {
            failures.push(PropertyFailure {
                property: ExtensionProperty::Lattice,
                u: u.clone(),
                v: Some(v.clone()),
                parameter: None,
                lhs,
                rhs,
            });
        }

        let mix: Vec<f64> = u.iter().zip(&v).map(|(a, b)| t * a + (1.0 - t) * b).collect();
        let (lhs, rhs) = (f(&mix), t * fu + (1.0 - t) * fv);
        if !at_most(lhs, rhs) {
            failures.push(PropertyFailure {
                property: ExtensionProperty::Convexity,
                u,
                v: Some(v),
                parameter: Some(t),
                lhs,
                rhs,
            });
        }
    }

    ExtensionReport { samples, failures }
}
