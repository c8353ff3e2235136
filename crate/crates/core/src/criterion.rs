//! The finite Weyl-enumeration criterion: the torus case (`M` trivial,
//! `D = T`) and the general `H = A·M` case, with replayable certificates.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{evaluation_matrix, restricted_independent, Matrix, Subspace};
use crate::roots::{block_triangular_at, parabolic_contains, CartanSpace, GroupSpec, LieElement, ParabolicSide};
use crate::scalar::{dot, is_integral, primitive_integer_vector};
use crate::weyl::{
    auto_trivial_m, centralizer_weyl_validate, enumerate_weyl, CentralizerWeylElement, CompositionTable, WeylElement,
};
use crate::{RatMatrix, RatSubspace, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CriterionError {
    #[error("{field}: {reason}")]
    Config { field: String, reason: String },
    /// The admissibility audit failed: `D` is not maximal as declared.
    #[error("configuration inconsistent: subset {subset:?}, w = {w}: weights are dependent on Lie(D)")]
    Inconsistent { subset: Vec<usize>, w: WeylElement },
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

fn config_err(field: impl Into<String>, reason: impl Into<String>) -> CriterionError {
    CriterionError::Config {
        field: field.into(),
        reason: reason.into(),
    }
}

/// Where the `W(Z_G(M))` representatives come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CentralizerSource {
    /// `M` trivial: use all of `W(G)`.
    AutoTrivialM,
    Explicit(Vec<Vec<RatMatrix>>),
}

/// A validated problem instance.
#[derive(Clone, Debug)]
pub struct GroupConfig {
    space: CartanSpace,
    m_generators: Vec<LieElement>,
    d_basis: RatSubspace,
    a_basis: RatSubspace,
    centralizer_weyl: Vec<CentralizerWeylElement>,
}

impl GroupConfig {
    pub fn new(
        spec: GroupSpec,
        m_generators: Vec<LieElement>,
        d_basis: Vec<Vec<Rational>>,
        a_basis: Vec<Vec<Rational>>,
        centralizer: CentralizerSource,
    ) -> Result<Self, CriterionError> {
        let space = CartanSpace::new(spec);
        let ambient = space.ambient_dim();
        for (field, basis) in [("torus-d.basis", &d_basis), ("torus-a.basis", &a_basis)] {
            for (i, x) in basis.iter().enumerate() {
                space
                    .check_vector(x)
                    .map_err(|e| config_err(format!("{field}[{i}]"), e.to_string()))?;
            }
        }
        let d = RatSubspace::new(ambient, d_basis)
            .map_err(|e| config_err("torus-d.basis", e.to_string()))?;
        let a = RatSubspace::new(ambient, a_basis)
            .map_err(|e| config_err("torus-a.basis", e.to_string()))?;
        if let Some(i) = a.basis().iter().position(|x| !d.contains(x)) {
            return Err(config_err(format!("torus-a.basis[{i}]"), "not contained in Lie(D)"));
        }
        for (j, x) in m_generators.iter().enumerate() {
            for (i, b) in d.basis().iter().enumerate() {
                if !LieElement::from_cartan(&spec, b).bracket(x).is_zero() {
                    return Err(config_err(
                        format!("subgroup-m.generators[{j}]"),
                        format!("does not commute with torus-d.basis[{i}]"),
                    ));
                }
            }
        }
        if m_generators.is_empty() && d.dim() != space.dim() {
            return Err(config_err(
                "torus-d.basis",
                format!("M is trivial, so Lie(D) must be all of Lie(T) (dimension {})", space.dim()),
            ));
        }
        let centralizer_weyl = match centralizer {
            CentralizerSource::AutoTrivialM => {
                if !m_generators.is_empty() {
                    return Err(config_err("centralizer-weyl.mode", "auto-trivial-m requires trivial M"));
                }
                auto_trivial_m(&spec)
            }
            CentralizerSource::Explicit(elems) => centralizer_weyl_validate(&spec, &m_generators, &d, elems)
                .map_err(|e| config_err("centralizer-weyl.elements", e.to_string()))?,
        };
        Ok(Self {
            space,
            m_generators,
            d_basis: d,
            a_basis: a,
            centralizer_weyl,
        })
    }

    /// `M` trivial and `D = T` with only the identity in the centralizer
    /// list; this is the setting of [`check_torus`].
    pub fn torus(spec: GroupSpec, a_basis: Vec<Vec<Rational>>) -> Result<Self, CriterionError> {
        let space = CartanSpace::new(spec);
        let d = space.full_subspace().basis().to_vec();
        Self::new(spec, Vec::new(), d, a_basis, CentralizerSource::Explicit(Vec::new()))
    }

    pub fn spec(&self) -> &GroupSpec {
        self.space.spec()
    }

    pub fn space(&self) -> &CartanSpace {
        &self.space
    }

    pub fn m_generators(&self) -> &[LieElement] {
        &self.m_generators
    }

    pub fn d_basis(&self) -> &RatSubspace {
        &self.d_basis
    }

    pub fn a_basis(&self) -> &RatSubspace {
        &self.a_basis
    }

    pub fn centralizer_weyl(&self) -> &[CentralizerWeylElement] {
        &self.centralizer_weyl
    }

    pub fn m_is_trivial(&self) -> bool {
        self.m_generators.is_empty()
    }

    /// `Ad(w'^{-1}) Lie(A)` as a basis.
    pub fn a_prime_basis(&self, w_prime: &CentralizerWeylElement) -> Vec<Vec<Rational>> {
        self.a_basis
            .basis()
            .iter()
            .map(|a| {
                w_prime
                    .act_inv_on_cartan(self.spec(), a)
                    .expect("validated w' normalizes Lie(D)")
            })
            .collect()
    }
}

/// A failing triple `(I, w, w')` with the dependence relation
/// `Σ c_j · w'w(χ_{i_j}) = 0` on `Lie(A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    /// 1-based, sorted.
    pub subset: Vec<usize>,
    pub w: WeylElement,
    /// Position of `w'` in the configuration's centralizer list.
    pub w_prime_index: usize,
    pub w_prime: CentralizerWeylElement,
    /// Primitive integral direction with positive leading entry.
    pub dependence: Vec<Rational>,
    /// Present when the evaluation matrix on the chosen basis is integral.
    pub integer_dependence: Option<Vec<BigInt>>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub subsets: usize,
    pub pairs_examined: usize,
    pub pairs_admissible: usize,
    pub triples_tested: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    UniformlyNondivergent(SearchStats),
    NotUniformlyNondivergent(Box<Certificate>),
}

impl Verdict {
    pub fn is_nondivergent(&self) -> bool {
        matches!(self, Verdict::UniformlyNondivergent(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Verdict::NotUniformlyNondivergent(c) => Some(c),
            Verdict::UniformlyNondivergent(_) => None,
        }
    }
}

/// Rational and (when applicable) integral dependence coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dependence {
    pub rational: Vec<Rational>,
    pub integer: Option<Vec<BigInt>>,
}

/// A nonzero `c` with `Σ c_i λ_i ≡ 0` on `w`, or `None` when the restricted
/// functionals are independent. `c` is the first vector of the canonical
/// kernel basis of the transposed evaluation matrix, scaled to a primitive
/// integer vector with positive leading entry.
pub fn dependence_coefficients(functionals: &[Vec<Rational>], w: &RatSubspace) -> Option<Dependence> {
    let e = evaluation_matrix(functionals, w);
    let kernel = e.transpose().kernel_basis();
    let first = kernel.into_iter().next()?;
    let mut ints = primitive_integer_vector(&first);
    if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.sign() == num_bigint::Sign::Minus) {
        ints.iter_mut().for_each(|x| *x = -x.clone());
    }
    let rational: Vec<Rational> = ints.iter().cloned().map(Rational::from_integer).collect();
    let integer = e.entries().iter().all(is_integral).then(|| ints.clone());
    Some(Dependence { rational, integer })
}

/// Nonempty subsets of `{1..r}`, by cardinality then lexicographically.
pub fn subsets_in_order(r: usize) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = (1u64..1 << r)
        .map(|mask| (1..=r).filter(|i| mask >> (i - 1) & 1 == 1).collect())
        .collect();
    all.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    all
}

/// Bit `i` set when every `Ad(w^{-1})X` is block diagonal at cut `i`, that is,
/// lies in both the standard and the opposite parabolic for that cut.
fn admissible_cuts(config: &GroupConfig, w: &WeylElement) -> u64 {
    let r = config.spec().rank();
    let all: u64 = ((1u64 << r) - 1) << 1;
    if config.m_is_trivial() {
        return all;
    }
    let w_inv = w.inverse();
    let conjugated: Vec<LieElement> = config.m_generators.iter().map(|x| w_inv.act_on_lie(x)).collect();
    (1..=r)
        .filter(|&i| {
            conjugated.iter().all(|y| {
                y.factors().iter().all(|f| {
                    ParabolicSide::BOTH.iter().all(|&side| block_triangular_at(f, i, side))
                })
            })
        })
        .fold(0, |acc, i| acc | 1 << i)
}

fn subset_mask(subset: &[usize]) -> u64 {
    subset.iter().fold(0, |acc, i| acc | 1 << i)
}

fn build_pool(workers: Option<usize>) -> Result<rayon::ThreadPool, CriterionError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        builder = builder.num_threads(n.max(1));
    }
    builder.build().map_err(|e| CriterionError::Pool(e.to_string()))
}

enum PreparedPrime {
    /// Monomial `w' = π`: `w'w(χ)` on `A` equals `(π∘w)(χ)` on `A`.
    Monomial(usize),
    /// Otherwise test `w(χ)` on `Ad(w'^{-1}) A`.
    General(RatSubspace),
}

/// Decide uniform nondivergence for the torus case: `H = A`, `M` trivial,
/// `D = T`. Uses the same search as [`check_general`] with only the identity
/// as `w'`, so the two agree certificate for certificate.
pub fn check_torus(spec: GroupSpec, a_basis: Vec<Vec<Rational>>) -> Result<Verdict, CriterionError> {
    check_torus_with_workers(spec, a_basis, None)
}

pub fn check_torus_with_workers(
    spec: GroupSpec,
    a_basis: Vec<Vec<Rational>>,
    workers: Option<usize>,
) -> Result<Verdict, CriterionError> {
    let config = GroupConfig::torus(spec, a_basis)?;
    check_general_with_workers(&config, workers)
}

pub fn check_general(config: &GroupConfig) -> Result<Verdict, CriterionError> {
    check_general_with_workers(config, None)
}

/// Search order: subsets `I` by cardinality then lex; for each `I`, `w'` in
/// list order; for each `w'`, admissible `w` in enumeration order. The first
/// failing triple is returned. `workers = None` uses all cores; the result
/// does not depend on the worker count.
pub fn check_general_with_workers(config: &GroupConfig, workers: Option<usize>) -> Result<Verdict, CriterionError> {
    build_pool(workers)?.install(|| search(config))
}

fn search(config: &GroupConfig) -> Result<Verdict, CriterionError> {
    let spec = *config.spec();
    let weyl = enumerate_weyl(&spec);
    let chis: Vec<Vec<Rational>> = config.space.fundamental_weights().into_iter().map(|f| f.dual().to_vec()).collect();
    // images[u][i-1] = dual vector of u(χ_i)
    let images: Vec<Vec<Vec<Rational>>> = weyl
        .par_iter()
        .map(|w| chis.iter().map(|c| w.act_on_cartan(c)).collect())
        .collect();
    let cuts: Vec<u64> = weyl.par_iter().map(|w| admissible_cuts(config, w)).collect();
    let table = CompositionTable::new(&spec);
    let primes: Vec<PreparedPrime> = config
        .centralizer_weyl
        .iter()
        .map(|wp| match wp.monomial() {
            Some(pi) => PreparedPrime::Monomial(pi.index()),
            None => PreparedPrime::General(
                Subspace::new(config.space.ambient_dim(), config.a_prime_basis(wp)).expect("Ad is injective"),
            ),
        })
        .collect();

    let funcs = |subset: &[usize], u: usize| -> Vec<Vec<Rational>> {
        subset.iter().map(|&i| images[u][i - 1].clone()).collect()
    };
    // Row i-1: u(χ_i) evaluated on the basis of the subspace. Independence on
    // the subspace is full row rank of the selected rows.
    let eval_on = |u: usize, w: &RatSubspace| evaluation_matrix(&images[u], w);
    let independent = |eval: &RatMatrix, subset: &[usize]| {
        Matrix::from_fn(subset.len(), eval.cols(), |s, j| eval[(subset[s] - 1, j)].clone()).rank() == subset.len()
    };
    let on_d: Vec<RatMatrix> = (0..weyl.len()).into_par_iter().map(|u| eval_on(u, &config.d_basis)).collect();
    let on_a: Vec<OnceLock<RatMatrix>> = (0..weyl.len()).map(|_| OnceLock::new()).collect();

    let mut stats = SearchStats::default();
    for subset in subsets_in_order(spec.rank()) {
        stats.subsets += 1;
        stats.pairs_examined += weyl.len();
        let mask = subset_mask(&subset);
        let admissible: Vec<usize> = (0..weyl.len()).filter(|&u| cuts[u] & mask == mask).collect();
        stats.pairs_admissible += admissible.len();

        let bad = admissible
            .par_iter()
            .find_first(|&&u| !independent(&on_d[u], &subset));
        if let Some(&u) = bad {
            return Err(CriterionError::Inconsistent {
                subset,
                w: weyl[u].clone(),
            });
        }

        // Independence of the composite (π∘w)(χ_I) on A, shared by all
        // monomial w'.
        let composite: Vec<OnceLock<bool>> = (0..weyl.len()).map(|_| OnceLock::new()).collect();
        for (j, prime) in primes.iter().enumerate() {
            stats.triples_tested += admissible.len();
            let failing = admissible.par_iter().find_first(|&&u| match prime {
                PreparedPrime::Monomial(pi) => {
                    let c = table.compose(*pi, u);
                    !*composite[c].get_or_init(|| independent(on_a[c].get_or_init(|| eval_on(c, &config.a_basis)), &subset))
                }
                PreparedPrime::General(a_prime) => !restricted_independent(&funcs(&subset, u), a_prime),
            });
            if let Some(&u) = failing {
                return Ok(Verdict::NotUniformlyNondivergent(Box::new(make_certificate(
                    config, subset, &weyl[u], j,
                ))));
            }
        }
    }
    Ok(Verdict::UniformlyNondivergent(stats))
}

fn make_certificate(config: &GroupConfig, subset: Vec<usize>, w: &WeylElement, j: usize) -> Certificate {
    let w_prime = config.centralizer_weyl[j].clone();
    let a_prime = Subspace::new(config.space.ambient_dim(), config.a_prime_basis(&w_prime)).expect("Ad is injective");
    let functionals: Vec<Vec<Rational>> = subset
        .iter()
        .map(|&i| w.act_on_cartan(config.space.fundamental_weight(i).expect("index in range").dual()))
        .collect();
    let dep = dependence_coefficients(&functionals, &a_prime).expect("failing triple is dependent");
    Certificate {
        subset,
        w: w.clone(),
        w_prime_index: j,
        w_prime,
        dependence: dep.rational,
        integer_dependence: dep.integer,
    }
}

/// Why a certificate failed to replay.
pub fn replay_certificate_detailed(config: &GroupConfig, cert: &Certificate) -> Result<(), String> {
    let spec = config.spec();
    let r = spec.rank();
    if cert.subset.is_empty() {
        return Err("subset is empty".into());
    }
    if cert.subset.windows(2).any(|p| p[0] >= p[1]) || cert.subset.iter().any(|&i| i == 0 || i > r) {
        return Err(format!("subset {:?} is not a sorted subset of 1..={r}", cert.subset));
    }
    WeylElement::new(spec, cert.w.perms().to_vec()).map_err(|e| format!("w: {e}"))?;

    // w' must be one of the configured elements and pass validation afresh.
    let listed = config
        .centralizer_weyl
        .get(cert.w_prime_index)
        .ok_or_else(|| format!("w' index {} out of range", cert.w_prime_index))?;
    if listed.matrices() != cert.w_prime.matrices() {
        return Err("w' does not match the configured centralizer element".into());
    }
    centralizer_weyl_validate(spec, &config.m_generators, &config.d_basis, vec![cert.w_prime.matrices().to_vec()])
        .map_err(|e| format!("w': {e}"))?;

    // Containment of Ad(w^{-1}) Lie(M) in both parabolics, by explicit
    // conjugation with the signed permutation representative.
    let p: Vec<RatMatrix> = cert.w.representatives();
    let p_inv: Vec<RatMatrix> = p.iter().map(|m| m.inverse().expect("determinant 1")).collect();
    let cuts: BTreeSet<usize> = cert.subset.iter().copied().collect();
    for (j, x) in config.m_generators.iter().enumerate() {
        let y = x.conjugate(&p_inv, &p);
        for side in ParabolicSide::BOTH {
            if !parabolic_contains(spec, &cuts, &y, side).map_err(|e| e.to_string())? {
                return Err(format!("Ad(w^-1) of generator {} is not in the {side:?} parabolic", j + 1));
            }
        }
    }

    if cert.dependence.len() != cert.subset.len() {
        return Err("dependence has the wrong length".into());
    }
    if cert.dependence.iter().all(Zero::is_zero) {
        return Err("dependence is zero".into());
    }
    let wp_inv = cert.w_prime.inverses();
    let wp = cert.w_prime.matrices();
    for (l, a) in config.a_basis.basis().iter().enumerate() {
        // (w'w)^{-1} a (w'w) = w^{-1} w'^{-1} a w' w
        let y = LieElement::from_cartan(spec, a).conjugate(wp_inv, wp).conjugate(&p_inv, &p);
        let y = y
            .to_cartan()
            .ok_or_else(|| format!("Ad((w'w)^-1) of torus-a.basis[{l}] is not diagonal"))?;
        let total = cert
            .subset
            .iter()
            .zip(&cert.dependence)
            .fold(Rational::zero(), |acc, (&i, c)| {
                acc + c * config.space.fundamental_weight(i).expect("index checked").eval(&y)
            });
        if !total.is_zero() {
            return Err(format!("dependence identity fails on torus-a.basis[{l}]"));
        }
    }
    if let Some(ints) = &cert.integer_dependence {
        if ints.len() != cert.dependence.len() {
            return Err("integer dependence has the wrong length".into());
        }
        let g = ints.iter().fold(BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
        if !g.is_one() {
            return Err("integer dependence is not primitive".into());
        }
        let as_rat: Vec<Rational> = ints.iter().cloned().map(Rational::from_integer).collect();
        let pivot = as_rat.iter().position(|x| !x.is_zero()).expect("gcd 1 means nonzero");
        let ratio = &cert.dependence[pivot] / &as_rat[pivot];
        if as_rat.iter().zip(&cert.dependence).any(|(x, c)| x * &ratio != *c) {
            return Err("integer dependence is not proportional to the rational one".into());
        }
    }
    Ok(())
}

/// Re-check a certificate from scratch, independently of the search.
pub fn replay_certificate(config: &GroupConfig, cert: &Certificate) -> bool {
    replay_certificate_detailed(config, cert).is_ok()
}

/// `Σ c_i λ_i` vanishes on every basis vector of `w`.
pub fn vanishes_on(functionals: &[Vec<Rational>], coeffs: &[Rational], w: &RatSubspace) -> bool {
    w.basis().iter().all(|b| {
        functionals
            .iter()
            .zip(coeffs)
            .fold(Rational::zero(), |acc, (f, c)| acc + c * dot(f, b))
            .is_zero()
    })
}
