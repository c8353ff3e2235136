//! Root data for the `res-sl` family: `G(R) = SL_n(R)^m` with the diagonal
//! `Q`-split torus, so the `Q`-rank is `n - 1`.
//!
//! Cartan vectors live in `Q^{m n}`: factor `k` occupies coordinates
//! `k*n .. (k+1)*n` and every block sums to zero. The invariant form is the
//! standard dot product, so the dual vector of a functional is its covector
//! projected to the trace-zero subspace.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{BilinearForm, Matrix};
use crate::scalar::{dot, int};
use crate::{RatMatrix, RatSubspace, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("SL_n factor size must be at least 2, got {0}")]
    FactorSize(usize),
    #[error("number of factors must be at least 1, got {0}")]
    FactorCount(usize),
    #[error("index {index} out of range 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("vector of length {found} is not a Cartan vector of length {expected}")]
    CartanLength { expected: usize, found: usize },
    #[error("Cartan vector block {0} does not sum to zero")]
    TraceNonzero(usize),
    #[error("Lie element factor {factor}: {reason}")]
    LieShape { factor: usize, reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "res-sl")]
    ResSl,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::ResSl => write!(f, "res-sl"),
        }
    }
}

/// `Res_{K/Q} SL_n` with `[K:Q] = m`, realized as `m` copies of `SL_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    n: usize,
    m: usize,
    family: Family,
}

impl GroupSpec {
    pub fn res_sl(n: usize, m: usize) -> Result<Self, RootError> {
        if n < 2 {
            return Err(RootError::FactorSize(n));
        }
        if m < 1 {
            return Err(RootError::FactorCount(m));
        }
        Ok(Self {
            n,
            m,
            family: Family::ResSl,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// `Q`-rank `r`.
    pub fn rank(&self) -> usize {
        self.n - 1
    }

    /// Number of coordinates of a Cartan vector.
    pub fn ambient_dim(&self) -> usize {
        self.n * self.m
    }

    fn check_index(&self, i: usize) -> Result<(), RootError> {
        if i == 0 || i > self.rank() {
            return Err(RootError::IndexOutOfRange {
                index: i,
                rank: self.rank(),
            });
        }
        Ok(())
    }
}

/// Side of a parabolic: the standard block-upper one or its image under the
/// Cartan involution (block-lower).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParabolicSide {
    Standard,
    Opposite,
}

impl ParabolicSide {
    pub const BOTH: [ParabolicSide; 2] = [ParabolicSide::Standard, ParabolicSide::Opposite];
}

/// A rational linear functional on the Cartan space, stored as its dual
/// vector (trace zero in every block).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Functional {
    dual: Vec<Rational>,
}

impl Functional {
    pub fn dual(&self) -> &[Rational] {
        &self.dual
    }

    /// Caller guarantees `dual` is already a trace-zero representative.
    pub(crate) fn from_dual_unchecked(dual: Vec<Rational>) -> Self {
        Self { dual }
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        dot(&self.dual, x)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            dual: self.dual.iter().map(|x| x * c).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    /// `Some(c)` with `self = c · other` when the two are proportional.
    pub fn ratio_to(&self, other: &Functional) -> Option<Rational> {
        let pivot = other.dual.iter().position(|x| !x.is_zero())?;
        let c = &self.dual[pivot] / &other.dual[pivot];
        (*self == other.scale(&c)).then_some(c)
    }
}

/// The Cartan space `Lie(T)` of a [`GroupSpec`] with its invariant form.
#[derive(Clone, Debug)]
pub struct CartanSpace {
    spec: GroupSpec,
    form: BilinearForm<Rational>,
}

impl CartanSpace {
    pub fn new(spec: GroupSpec) -> Self {
        Self {
            form: BilinearForm::standard(spec.ambient_dim()),
            spec,
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn form(&self) -> &BilinearForm<Rational> {
        &self.form
    }

    pub fn ambient_dim(&self) -> usize {
        self.spec.ambient_dim()
    }

    /// `m (n - 1)`.
    pub fn dim(&self) -> usize {
        self.spec.m * (self.spec.n - 1)
    }

    pub fn check_vector(&self, x: &[Rational]) -> Result<(), RootError> {
        if x.len() != self.ambient_dim() {
            return Err(RootError::CartanLength {
                expected: self.ambient_dim(),
                found: x.len(),
            });
        }
        let n = self.spec.n;
        for k in 0..self.spec.m {
            if !x[k * n..(k + 1) * n].iter().sum::<Rational>().is_zero() {
                return Err(RootError::TraceNonzero(k));
            }
        }
        Ok(())
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.check_vector(x).is_ok()
    }

    /// Basis `e_{k,a} - e_{k,n}` of the trace-zero subspace.
    pub fn full_subspace(&self) -> RatSubspace {
        let n = self.spec.n;
        let basis = (0..self.spec.m)
            .flat_map(|k| {
                (0..n - 1).map(move |a| {
                    let mut v = vec![Rational::zero(); n * self.spec.m];
                    v[k * n + a] = Rational::one();
                    v[k * n + n - 1] = -Rational::one();
                    v
                })
            })
            .collect();
        RatSubspace::new(self.ambient_dim(), basis).expect("independent")
    }

    /// Functional from an arbitrary covector on `Q^{mn}`: subtract each
    /// block's mean to reach the trace-zero dual vector.
    pub fn functional_from_covector(&self, covector: &[Rational]) -> Result<Functional, RootError> {
        if covector.len() != self.ambient_dim() {
            return Err(RootError::CartanLength {
                expected: self.ambient_dim(),
                found: covector.len(),
            });
        }
        let n = self.spec.n;
        let nn = int(n as i64);
        let mut dual = covector.to_vec();
        for k in 0..self.spec.m {
            let mean = covector[k * n..(k + 1) * n].iter().sum::<Rational>() / &nn;
            for x in &mut dual[k * n..(k + 1) * n] {
                *x -= &mean;
            }
        }
        Ok(Functional { dual })
    }

    fn per_factor_covector(&self, block: &[Rational]) -> Vec<Rational> {
        (0..self.spec.m).flat_map(|_| block.iter().cloned()).collect()
    }

    /// `χ_i(x) = Σ_k (x_{k,1} + … + x_{k,i})`.
    pub fn fundamental_weight(&self, i: usize) -> Result<Functional, RootError> {
        self.spec.check_index(i)?;
        let block: Vec<Rational> = (0..self.spec.n)
            .map(|a| if a < i { Rational::one() } else { Rational::zero() })
            .collect();
        self.functional_from_covector(&self.per_factor_covector(&block))
    }

    pub fn fundamental_weights(&self) -> Vec<Functional> {
        (1..=self.spec.rank())
            .map(|i| self.fundamental_weight(i).expect("index in range"))
            .collect()
    }

    /// `α_i(x) = Σ_k (x_{k,i} - x_{k,i+1})`.
    pub fn simple_root(&self, i: usize) -> Result<Functional, RootError> {
        self.spec.check_index(i)?;
        let block: Vec<Rational> = (0..self.spec.n)
            .map(|a| {
                if a + 1 == i {
                    Rational::one()
                } else if a == i {
                    -Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        self.functional_from_covector(&self.per_factor_covector(&block))
    }

    /// Character by which the torus acts on the wedge line of the nilradical
    /// of the `i`-th maximal parabolic (sum of its roots). On the standard
    /// side this is `n · χ_i`.
    pub fn weight_of_nilradical(&self, i: usize, side: ParabolicSide) -> Result<Functional, RootError> {
        self.spec.check_index(i)?;
        let n = self.spec.n;
        let mut cov = vec![Rational::zero(); self.ambient_dim()];
        for x in nilradical_basis(&self.spec, i, side)? {
            let (k, a, b) = x.single_unit().expect("matrix unit");
            cov[k * n + a] += Rational::one();
            cov[k * n + b] -= Rational::one();
        }
        self.functional_from_covector(&cov)
    }
}

/// An element of `Lie(G) = sl_n(R)^m` with rational entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LieElement {
    factors: Vec<RatMatrix>,
}

impl LieElement {
    pub fn new(spec: &GroupSpec, factors: Vec<RatMatrix>) -> Result<Self, RootError> {
        if factors.len() != spec.m {
            return Err(RootError::LieShape {
                factor: factors.len(),
                reason: format!("expected {} factor matrices", spec.m),
            });
        }
        for (k, f) in factors.iter().enumerate() {
            if f.rows() != spec.n || f.cols() != spec.n {
                return Err(RootError::LieShape {
                    factor: k,
                    reason: format!("matrix is {}x{}, expected {}x{}", f.rows(), f.cols(), spec.n, spec.n),
                });
            }
            if !f.trace().is_zero() {
                return Err(RootError::LieShape {
                    factor: k,
                    reason: "trace is not zero".into(),
                });
            }
        }
        Ok(Self { factors })
    }

    pub(crate) fn from_factors_unchecked(factors: Vec<RatMatrix>) -> Self {
        Self { factors }
    }

    pub fn zero(spec: &GroupSpec) -> Self {
        Self {
            factors: vec![RatMatrix::zeros(spec.n, spec.n); spec.m],
        }
    }

    /// `E_{ab}` (0-based indices, `a != b`) in factor `k`, zero elsewhere.
    pub fn matrix_unit(spec: &GroupSpec, k: usize, a: usize, b: usize) -> Self {
        assert!(a != b, "diagonal matrix units are not trace zero");
        let mut x = Self::zero(spec);
        x.factors[k][(a, b)] = Rational::one();
        x
    }

    /// The diagonal element with the given Cartan coordinates.
    pub fn from_cartan(spec: &GroupSpec, x: &[Rational]) -> Self {
        let n = spec.n;
        Self {
            factors: (0..spec.m)
                .map(|k| RatMatrix::diagonal(&x[k * n..(k + 1) * n]))
                .collect(),
        }
    }

    pub fn factors(&self) -> &[RatMatrix] {
        &self.factors
    }

    pub fn is_zero(&self) -> bool {
        self.factors.iter().all(|f| f.is_zero())
    }

    /// Diagonal entries, if the element is diagonal.
    pub fn to_cartan(&self) -> Option<Vec<Rational>> {
        let mut out = Vec::new();
        for f in &self.factors {
            for i in 0..f.rows() {
                for j in 0..f.cols() {
                    if i != j && !f[(i, j)].is_zero() {
                        return None;
                    }
                }
                out.push(f[(i, i)].clone());
            }
        }
        Some(out)
    }

    pub fn bracket(&self, other: &Self) -> Self {
        Self {
            factors: self
                .factors
                .iter()
                .zip(&other.factors)
                .map(|(x, y)| {
                    let xy = x.mul(y).expect("square");
                    let yx = y.mul(x).expect("square");
                    xy.add(&yx.scale(&-Rational::one())).expect("same shape")
                })
                .collect(),
        }
    }

    /// `g X g^{-1}` factorwise, given `g` and its inverse.
    pub fn conjugate(&self, g: &[RatMatrix], g_inv: &[RatMatrix]) -> Self {
        Self {
            factors: self
                .factors
                .iter()
                .zip(g.iter().zip(g_inv))
                .map(|(x, (a, ai))| a.mul(x).and_then(|ax| ax.mul(ai)).expect("square"))
                .collect(),
        }
    }

    /// `τ(X) = -X^T`, the differential of the Cartan involution inverting
    /// the diagonal torus.
    pub fn cartan_involution(&self) -> Self {
        Self {
            factors: self
                .factors
                .iter()
                .map(|f| f.transpose().scale(&-Rational::one()))
                .collect(),
        }
    }

    /// `(factor, row, col)` when this is a single matrix unit.
    fn single_unit(&self) -> Option<(usize, usize, usize)> {
        let mut found = None;
        for (k, f) in self.factors.iter().enumerate() {
            for i in 0..f.rows() {
                for j in 0..f.cols() {
                    let e = &f[(i, j)];
                    if e.is_zero() {
                        continue;
                    }
                    if !e.is_one() || found.is_some() {
                        return None;
                    }
                    found = Some((k, i, j));
                }
            }
        }
        found
    }
}

/// Whether every factor of `x` is block upper (Standard) or block lower
/// (Opposite) triangular for each cut `i ∈ cuts` (blocks of size `i`, `n-i`).
pub fn parabolic_contains(
    spec: &GroupSpec,
    cuts: &BTreeSet<usize>,
    x: &LieElement,
    side: ParabolicSide,
) -> Result<bool, RootError> {
    for &i in cuts {
        spec.check_index(i)?;
    }
    Ok(x.factors.iter().all(|f| cuts.iter().all(|&i| block_triangular_at(f, i, side))))
}

pub(crate) fn block_triangular_at(f: &RatMatrix, cut: usize, side: ParabolicSide) -> bool {
    let n = f.rows();
    let (rows, cols) = match side {
        ParabolicSide::Standard => (cut..n, 0..cut),
        ParabolicSide::Opposite => (0..cut, cut..n),
    };
    rows.into_iter()
        .all(|a| cols.clone().all(|b| f[(a, b)].is_zero()))
}

/// Matrix units spanning the nilradical of the `i`-th maximal parabolic,
/// factor-major then row-major. There are `m i (n - i)` of them.
pub fn nilradical_basis(spec: &GroupSpec, i: usize, side: ParabolicSide) -> Result<Vec<LieElement>, RootError> {
    spec.check_index(i)?;
    let n = spec.n;
    let mut out = Vec::with_capacity(spec.m * i * (n - i));
    for k in 0..spec.m {
        for a in 0..n {
            for b in 0..n {
                let inside = match side {
                    ParabolicSide::Standard => a < i && b >= i,
                    ParabolicSide::Opposite => b < i && a >= i,
                };
                if inside {
                    out.push(LieElement::matrix_unit(spec, k, a, b));
                }
            }
        }
    }
    Ok(out)
}

/// Square rational matrix from integer rows (test and config convenience).
pub fn int_matrix(rows: &[&[i64]]) -> RatMatrix {
    let cols = rows.first().map_or(0, |r| r.len());
    Matrix::from_rows(
        cols,
        &rows
            .iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect::<Vec<_>>(),
    )
    .expect("rectangular rows")
}
