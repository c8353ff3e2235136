//! The Weyl group `W(G) = S_n^m` of the `res-sl` family and validated
//! representatives of the centralizer Weyl group `W(Z_G(M))`.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::roots::{Functional, GroupSpec, LieElement};
use crate::{RatMatrix, RatSubspace, Rational};

/// One permutation of `{0..n-1}` per factor; `perm[b]` is the image of `b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement {
    perms: Vec<Vec<usize>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeylError {
    #[error("factor {factor}: {reason}")]
    NotPermutation { factor: usize, reason: String },
    #[error("expected {expected} factors, found {found}")]
    FactorCount { expected: usize, found: usize },
    #[error("centralizer Weyl element {index}: {reason}")]
    InvalidCentralizerWeyl { index: usize, reason: String },
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Permutations of `0..n` in lexicographic order of one-line notation.
fn lex_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(factorial(n));
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

fn lex_rank(p: &[usize]) -> usize {
    let n = p.len();
    let mut rank = 0;
    for i in 0..n {
        let smaller = p[i + 1..].iter().filter(|&&x| x < p[i]).count();
        rank += smaller * factorial(n - 1 - i);
    }
    rank
}

impl WeylElement {
    pub fn new(spec: &GroupSpec, perms: Vec<Vec<usize>>) -> Result<Self, WeylError> {
        if perms.len() != spec.m() {
            return Err(WeylError::FactorCount {
                expected: spec.m(),
                found: perms.len(),
            });
        }
        for (k, p) in perms.iter().enumerate() {
            if p.len() != spec.n() || !is_permutation(p) {
                return Err(WeylError::NotPermutation {
                    factor: k,
                    reason: format!("{p:?} is not a permutation of 0..{}", spec.n()),
                });
            }
        }
        Ok(Self { perms })
    }

    /// Build from 1-based one-line notation.
    pub fn from_one_based(spec: &GroupSpec, perms: &[Vec<usize>]) -> Result<Self, WeylError> {
        let zero_based = perms
            .iter()
            .enumerate()
            .map(|(k, p)| {
                p.iter()
                    .map(|&x| {
                        x.checked_sub(1).ok_or_else(|| WeylError::NotPermutation {
                            factor: k,
                            reason: "entries are 1-based".into(),
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(spec, zero_based)
    }

    pub fn identity(spec: &GroupSpec) -> Self {
        Self {
            perms: vec![(0..spec.n()).collect(); spec.m()],
        }
    }

    pub fn perms(&self) -> &[Vec<usize>] {
        &self.perms
    }

    pub fn one_based(&self) -> Vec<Vec<usize>> {
        self.perms.iter().map(|p| p.iter().map(|x| x + 1).collect()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.perms.iter().all(|p| p.iter().enumerate().all(|(i, &x)| i == x))
    }

    fn n(&self) -> usize {
        self.perms.first().map_or(0, |p| p.len())
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            perms: self
                .perms
                .iter()
                .zip(&other.perms)
                .map(|(p, q)| q.iter().map(|&b| p[b]).collect())
                .collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            perms: self
                .perms
                .iter()
                .map(|p| {
                    let mut inv = vec![0; p.len()];
                    for (b, &pb) in p.iter().enumerate() {
                        inv[pb] = b;
                    }
                    inv
                })
                .collect(),
        }
    }

    /// Position in [`enumerate_weyl`] order.
    pub fn index(&self) -> usize {
        let f = factorial(self.n());
        self.perms.iter().fold(0, |acc, p| acc * f + lex_rank(p))
    }

    /// `Ad(w) diag(x)`: coordinate `b` of factor `k` moves to `p_k(b)`.
    pub fn act_on_cartan<T: Clone>(&self, x: &[T]) -> Vec<T> {
        let n = self.n();
        let mut y = x.to_vec();
        for (k, p) in self.perms.iter().enumerate() {
            for b in 0..n {
                y[k * n + p[b]] = x[k * n + b].clone();
            }
        }
        y
    }

    /// `w(f) = f ∘ Ad(w^{-1})`; on dual vectors this is the same coordinate
    /// permutation as on Cartan vectors.
    pub fn act_on_functional(&self, f: &Functional) -> Functional {
        Functional::from_dual_unchecked(self.act_on_cartan(f.dual()))
    }

    /// Sign `s_b` of the representative column `b` of factor `k`:
    /// `P e_b = s_b e_{p(b)}`.
    fn column_signs(p: &[usize]) -> Vec<i8> {
        let mut signs = vec![1i8; p.len()];
        if permutation_is_odd(p) {
            let largest_moved = (0..p.len()).rev().find(|&a| p[a] != a).expect("odd permutation moves something");
            let col = p.iter().position(|&x| x == largest_moved).expect("bijection");
            signs[col] = -1;
        }
        signs
    }

    /// Signed permutation matrix of factor `k`, of determinant 1. For an odd
    /// permutation the row of the largest moved index is negated.
    pub fn representative(&self, k: usize) -> RatMatrix {
        let p = &self.perms[k];
        let signs = Self::column_signs(p);
        let mut m = RatMatrix::zeros(p.len(), p.len());
        for (b, &pb) in p.iter().enumerate() {
            m[(pb, b)] = Rational::from_integer(signs[b].into());
        }
        m
    }

    pub fn representatives(&self) -> Vec<RatMatrix> {
        (0..self.perms.len()).map(|k| self.representative(k)).collect()
    }

    /// `Ad(P) X = P X P^{-1}` for the signed representative `P`.
    pub fn act_on_lie(&self, x: &LieElement) -> LieElement {
        let factors = x
            .factors()
            .iter()
            .zip(&self.perms)
            .map(|(f, p)| {
                let s = Self::column_signs(p);
                let n = p.len();
                let mut out = RatMatrix::zeros(n, n);
                for a in 0..n {
                    for b in 0..n {
                        let e = &f[(a, b)];
                        if !e.is_zero() {
                            out[(p[a], p[b])] = if s[a] * s[b] > 0 { e.clone() } else { -e.clone() };
                        }
                    }
                }
                out
            })
            .collect();
        LieElement::from_factors_unchecked(factors)
    }
}

fn permutation_is_odd(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0;
    for start in 0..p.len() {
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        if len > 0 {
            transpositions += len - 1;
        }
    }
    transpositions % 2 == 1
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, p) in self.perms.iter().enumerate() {
            if k > 0 {
                write!(f, "|")?;
            }
            for x in p {
                write!(f, "{}", x + 1)?;
            }
        }
        Ok(())
    }
}

impl Serialize for WeylElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeylElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let perms = Vec::<Vec<usize>>::deserialize(d)?;
        let m = perms.len();
        let n = perms.first().map_or(0, |p| p.len());
        let spec = GroupSpec::res_sl(n, m).map_err(serde::de::Error::custom)?;
        Self::from_one_based(&spec, &perms).map_err(serde::de::Error::custom)
    }
}

/// All `(n!)^m` elements, lexicographic in the factor tuple with factor 0
/// most significant. `enumerate_weyl(spec)[w.index()] == w`.
pub fn enumerate_weyl(spec: &GroupSpec) -> Vec<WeylElement> {
    let perms = lex_permutations(spec.n());
    let total = perms.len().pow(spec.m() as u32);
    (0..total)
        .map(|mut idx| {
            let mut tuple = vec![Vec::new(); spec.m()];
            for k in (0..spec.m()).rev() {
                tuple[k] = perms[idx % perms.len()].clone();
                idx /= perms.len();
            }
            WeylElement { perms: tuple }
        })
        .collect()
}

/// Composition on [`enumerate_weyl`] indices without building elements.
#[derive(Clone, Debug)]
pub struct CompositionTable {
    m: usize,
    size: usize,
    /// `table[a * size + b]` = lex rank of `perm_a ∘ perm_b` in one factor.
    table: Vec<usize>,
}

impl CompositionTable {
    pub fn new(spec: &GroupSpec) -> Self {
        let perms = lex_permutations(spec.n());
        let size = perms.len();
        let mut table = Vec::with_capacity(size * size);
        for p in &perms {
            for q in &perms {
                let pq: Vec<usize> = q.iter().map(|&b| p[b]).collect();
                table.push(lex_rank(&pq));
            }
        }
        Self { m: spec.m(), size, table }
    }

    /// Index of `enumerate_weyl[a] ∘ enumerate_weyl[b]`.
    pub fn compose(&self, mut a: usize, mut b: usize) -> usize {
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.m {
            let (da, db) = (a % self.size, b % self.size);
            out += self.table[da * self.size + db] * scale;
            scale *= self.size;
            a /= self.size;
            b /= self.size;
        }
        out
    }
}

/// A representative `w'` of an element of `W(Z_G(M))`: one invertible
/// rational matrix per factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralizerWeylElement {
    matrices: Vec<RatMatrix>,
    inverses: Vec<RatMatrix>,
    monomial: Option<WeylElement>,
}

impl CentralizerWeylElement {
    /// Unvalidated construction; see [`centralizer_weyl_validate`].
    pub fn from_matrices(spec: &GroupSpec, matrices: Vec<RatMatrix>) -> Result<Self, String> {
        if matrices.len() != spec.m() {
            return Err(format!("expected {} factor matrices, found {}", spec.m(), matrices.len()));
        }
        let mut inverses = Vec::with_capacity(matrices.len());
        for (k, g) in matrices.iter().enumerate() {
            if g.rows() != spec.n() || g.cols() != spec.n() {
                return Err(format!("factor {} is {}x{}, expected {}x{}", k + 1, g.rows(), g.cols(), spec.n(), spec.n()));
            }
            let det = g.determinant().map_err(|e| e.to_string())?;
            if !det.is_one() {
                return Err(format!("factor {} has determinant {det}, expected 1", k + 1));
            }
            inverses.push(g.inverse().expect("determinant is 1"));
        }
        let monomial = monomial_pattern(&matrices).map(|perms| WeylElement { perms });
        Ok(Self {
            matrices,
            inverses,
            monomial,
        })
    }

    pub fn identity(spec: &GroupSpec) -> Self {
        Self::from_weyl(&WeylElement::identity(spec))
    }

    /// The signed permutation representative of a `W(G)` element.
    pub fn from_weyl(w: &WeylElement) -> Self {
        let matrices = w.representatives();
        // Signed permutation matrices are orthogonal.
        let inverses = matrices.iter().map(|a| a.transpose()).collect();
        Self {
            matrices,
            inverses,
            monomial: Some(w.clone()),
        }
    }

    pub fn matrices(&self) -> &[RatMatrix] {
        &self.matrices
    }

    pub fn inverses(&self) -> &[RatMatrix] {
        &self.inverses
    }

    /// The permutation of Cartan coordinates when every factor is a
    /// (scaled) permutation matrix.
    pub fn monomial(&self) -> Option<&WeylElement> {
        self.monomial.as_ref()
    }

    pub fn is_identity(&self) -> bool {
        self.matrices.iter().all(|g| *g == RatMatrix::identity(g.rows()))
    }

    pub fn ad(&self, x: &LieElement) -> LieElement {
        x.conjugate(&self.matrices, &self.inverses)
    }

    pub fn ad_inv(&self, x: &LieElement) -> LieElement {
        x.conjugate(&self.inverses, &self.matrices)
    }

    /// `Ad(w'^{-1}) diag(x)` as Cartan coordinates, or `None` when the
    /// result leaves the diagonal.
    pub fn act_inv_on_cartan(&self, spec: &GroupSpec, x: &[Rational]) -> Option<Vec<Rational>> {
        match &self.monomial {
            Some(w) => Some(w.inverse().act_on_cartan(x)),
            None => self.ad_inv(&LieElement::from_cartan(spec, x)).to_cartan(),
        }
    }

    pub fn act_on_cartan(&self, spec: &GroupSpec, x: &[Rational]) -> Option<Vec<Rational>> {
        match &self.monomial {
            Some(w) => Some(w.act_on_cartan(x)),
            None => self.ad(&LieElement::from_cartan(spec, x)).to_cartan(),
        }
    }
}

fn monomial_pattern(matrices: &[RatMatrix]) -> Option<Vec<Vec<usize>>> {
    matrices
        .iter()
        .map(|g| {
            let n = g.rows();
            let mut p = vec![usize::MAX; n];
            for b in 0..n {
                let nz: Vec<usize> = (0..n).filter(|&a| !g[(a, b)].is_zero()).collect();
                if nz.len() != 1 {
                    return None;
                }
                p[b] = nz[0];
            }
            is_permutation(&p).then_some(p)
        })
        .collect()
}

/// Check each candidate against the two algebraic conditions: it fixes every
/// generator of `Lie(M)` under `Ad`, and `Ad` maps `d` onto itself inside
/// the diagonal. The identity is prepended when no candidate is the identity.
pub fn centralizer_weyl_validate(
    spec: &GroupSpec,
    m_gens: &[LieElement],
    d: &RatSubspace,
    elems: Vec<Vec<RatMatrix>>,
) -> Result<Vec<CentralizerWeylElement>, WeylError> {
    let mut out = Vec::with_capacity(elems.len() + 1);
    for (index, mats) in elems.into_iter().enumerate() {
        let invalid = |reason: String| WeylError::InvalidCentralizerWeyl { index, reason };
        let w = CentralizerWeylElement::from_matrices(spec, mats).map_err(invalid)?;
        if let Some(j) = m_gens.iter().position(|x| w.ad(x) != *x) {
            return Err(invalid(format!("does not centralize M (generator {})", j + 1)));
        }
        let mut images = Vec::with_capacity(d.dim());
        for b in d.basis() {
            match w.act_on_cartan(spec, b) {
                Some(y) if d.contains(&y) => images.push(y),
                _ => return Err(invalid("does not normalize D".into())),
            }
        }
        let image = RatSubspace::span(d.ambient_dim(), &images).expect("Cartan vectors");
        if !image.same_space(d) {
            return Err(invalid("does not normalize D".into()));
        }
        out.push(w);
    }
    if !out.iter().any(CentralizerWeylElement::is_identity) {
        out.insert(0, CentralizerWeylElement::identity(spec));
    }
    Ok(out)
}

/// `W(G)` itself as centralizer data, for trivial `M` and `D = T`.
pub fn auto_trivial_m(spec: &GroupSpec) -> Vec<CentralizerWeylElement> {
    enumerate_weyl(spec).iter().map(CentralizerWeylElement::from_weyl).collect()
}
