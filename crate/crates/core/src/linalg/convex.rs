//! Sign orthants and open polyhedral regions, decided exactly with
//! Fourier–Motzkin elimination.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::{dot, Scalar};

use super::fm::{is_feasible, Inequality};
use super::{LinalgError, Matrix, Subspace};

/// A sign vector `(σ_1, …, σ_k)` with every `σ_i = ±1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct Orthant(Vec<i8>);

impl Orthant {
    pub fn new(signs: Vec<i8>) -> Result<Self, LinalgError> {
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(LinalgError::InvalidSign);
        }
        Ok(Self(signs))
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All `2^k` orthants in scan order: index bit `j` clear means `σ_j = +1`,
    /// so `(+,…,+)` comes first.
    pub fn all(k: usize) -> impl Iterator<Item = Orthant> {
        (0u64..1u64 << k).map(move |idx| {
            Orthant((0..k).map(|j| if idx >> j & 1 == 0 { 1 } else { -1 }).collect())
        })
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|s| -s).collect())
    }
}

impl TryFrom<Vec<i8>> for Orthant {
    type Error = LinalgError;
    fn try_from(v: Vec<i8>) -> Result<Self, Self::Error> {
        Self::new(v)
    }
}

impl From<Orthant> for Vec<i8> {
    fn from(o: Orthant) -> Self {
        o.0
    }
}

impl fmt::Display for Orthant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", if *s > 0 { '+' } else { '-' })?;
        }
        write!(f, ")")
    }
}

/// Whether some `x ∈ u` has `sign(λ_i(x)) = σ_i` for every `i`.
pub fn orthant_meets_subspace<T: Scalar>(
    functionals: &[Vec<T>],
    sigma: &Orthant,
    u: &Subspace<T>,
) -> bool {
    assert_eq!(functionals.len(), sigma.len(), "one sign per functional");
    // Coordinates t on the basis of u: σ_i λ_i(B t) > 0, written as -σ_i λ_i(B t) < 0.
    let system: Vec<Inequality<T>> = functionals
        .iter()
        .zip(sigma.signs())
        .map(|(f, &s)| {
            let coeffs = u
                .basis()
                .iter()
                .map(|b| {
                    let e = dot(f, b);
                    if s > 0 {
                        -e
                    } else {
                        e
                    }
                })
                .collect();
            Inequality::strict(coeffs, T::zero())
        })
        .collect();
    is_feasible(u.dim(), &system)
}

/// `{x : λ_i(x) < a_i for all i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct StrictRegion<T> {
    ambient_dim: usize,
    constraints: Vec<(Vec<T>, T)>,
}

/// Invariance dimension; `Empty` orders below every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum InvDim {
    Empty,
    Finite(usize),
}

impl<T: Scalar> StrictRegion<T> {
    pub fn new(ambient_dim: usize, constraints: Vec<(Vec<T>, T)>) -> Result<Self, LinalgError> {
        for (f, _) in &constraints {
            if f.len() != ambient_dim {
                return Err(LinalgError::DimensionMismatch {
                    expected: ambient_dim,
                    found: f.len(),
                });
            }
            if f.iter().all(|c| c.is_zero()) {
                return Err(LinalgError::ZeroConstraint);
            }
        }
        Ok(Self {
            ambient_dim,
            constraints,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn constraints(&self) -> &[(Vec<T>, T)] {
        &self.constraints
    }

    fn strict_system(&self, skip: Option<usize>) -> Vec<Inequality<T>> {
        self.constraints
            .iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != skip)
            .map(|(_, (f, a))| Inequality::strict(f.clone(), a.clone()))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        !is_feasible(self.ambient_dim, &self.strict_system(None))
    }

    /// Constraint `i` is redundant when the others already force it, i.e.
    /// the others together with `λ_i(x) >= a_i` have no solution.
    pub fn is_redundant(&self, i: usize) -> bool {
        let (f, a) = &self.constraints[i];
        let mut sys = self.strict_system(Some(i));
        sys.push(Inequality::non_strict(
            f.iter().map(|c| -c.clone()).collect(),
            -a.clone(),
        ));
        !is_feasible(self.ambient_dim, &sys)
    }

    /// Indices of constraints that cannot be dropped. Duplicated constraints
    /// make each other redundant, so only the first of any run of mutually
    /// redundant copies is kept.
    pub fn irredundant(&self) -> Vec<usize> {
        let mut kept: Vec<usize> = (0..self.constraints.len()).collect();
        let mut i = 0;
        while i < kept.len() {
            let trial = Self {
                ambient_dim: self.ambient_dim,
                constraints: kept.iter().map(|&k| self.constraints[k].clone()).collect(),
            };
            if trial.is_redundant(i) {
                kept.remove(i);
            } else {
                i += 1;
            }
        }
        kept
    }
}

/// Dimension of the translation stabilizer of the region: `n` minus the rank
/// of its irredundant constraint functionals, or `Empty`.
pub fn invdim<T: Scalar>(region: &StrictRegion<T>) -> InvDim {
    if region.is_empty() {
        return InvDim::Empty;
    }
    let rows: Vec<Vec<T>> = region
        .irredundant()
        .into_iter()
        .map(|i| region.constraints[i].0.clone())
        .collect();
    let rank = Matrix::from_rows(region.ambient_dim, &rows)
        .expect("constraint lengths checked")
        .rank();
    InvDim::Finite(region.ambient_dim - rank)
}
