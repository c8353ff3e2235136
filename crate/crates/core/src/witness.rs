//! Divergence witnesses for a failing certificate: the escape vector `v`,
//! the sequence `g_N = w' exp(N v) w`, and wedge-line norms along sampled
//! points of `H`.
//!
//! Everything deciding the witness is exact. Norms are evaluated in `f64`
//! and only corroborate.

use nalgebra::DMatrix;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::criterion::{replay_certificate_detailed, Certificate, GroupConfig};
use crate::linalg::{orthant_meets_subspace, project_subspace, Matrix, Orthant, Subspace};
use crate::roots::{nilradical_basis, GroupSpec, LieElement, ParabolicSide};
use crate::scalar::{dot, int, Scalar};
use crate::{RatMatrix, RatSubspace, Rational};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WitnessError {
    #[error("projected subspace U' equals U; the functionals are independent on Ad(w'^-1) Lie(A)")]
    NotProper,
    #[error("every orthant meets U'")]
    NoMissedOrthant,
    #[error("weights of the certificate are not linearly independent")]
    DependentWeights,
    #[error("exact check failed: {0}")]
    ExactCheckFailed(String),
}

/// Escape data `(σ₀, v)` for a set of functionals `λ_j` and a subspace
/// `U' ⊂ U = span{u_j}` (standard form, so `u_j` is the dual vector of `λ_j`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EscapeWitness {
    /// 1-based indices `i_j` of the certificate subset.
    pub subset: Vec<usize>,
    /// Dual vectors `u_j` of `λ_j = w(χ_{i_j})`.
    pub u_vectors: Vec<Vec<Rational>>,
    pub u_space: RatSubspace,
    pub u_prime: RatSubspace,
    pub sigma0: Orthant,
    /// `λ_j(v) = 2 σ₀_j` exactly.
    pub v: Vec<Rational>,
}

impl EscapeWitness {
    pub fn lambda_of_v(&self) -> Vec<Rational> {
        self.u_vectors.iter().map(|u| dot(u, &self.v)).collect()
    }

    /// Orthant emptiness, `v ∈ U`, and `λ_j(v) = 2 σ₀_j`, rechecked exactly.
    pub fn exact_check(&self) -> Result<(), WitnessError> {
        let fail = |s: &str| Err(WitnessError::ExactCheckFailed(s.into()));
        if self.u_prime.dim() >= self.u_space.dim() || !self.u_space.contains_subspace(&self.u_prime) {
            return fail("U' is not a proper subspace of U");
        }
        if orthant_meets_subspace(&self.u_vectors, &self.sigma0, &self.u_prime) {
            return fail("sigma0 meets U'");
        }
        if !self.u_space.contains(&self.v) {
            return fail("v is not in U");
        }
        for (lv, &s) in self.lambda_of_v().iter().zip(self.sigma0.signs()) {
            if *lv != int(2 * s as i64) {
                return fail("lambda_j(v) differs from 2 sigma0_j");
            }
        }
        Ok(())
    }

    /// Side whose wedge line decays along `g_N` for position `j` of the
    /// subset: the weight on the opposite side is `-n χ`, so the decaying
    /// side has sign `-σ₀_j`.
    pub fn decaying_side(&self, j: usize) -> ParabolicSide {
        if self.sigma0.signs()[j] > 0 {
            ParabolicSide::Opposite
        } else {
            ParabolicSide::Standard
        }
    }
}

/// Find the first orthant (scan order) missed by `u_prime` and the vector
/// `v ∈ U` with `λ_j(v) = 2σ₀_j`.
pub fn escape_vector(lambdas: &[Vec<Rational>], u_prime: &RatSubspace) -> Result<(Orthant, Vec<Rational>), WitnessError> {
    let dim = u_prime.ambient_dim();
    let u = Subspace::new(dim, lambdas.to_vec()).map_err(|_| WitnessError::DependentWeights)?;
    if u_prime.dim() >= u.dim() {
        return Err(WitnessError::NotProper);
    }
    let sigma0 = Orthant::all(lambdas.len())
        .find(|s| !orthant_meets_subspace(lambdas, s, u_prime))
        .ok_or(WitnessError::NoMissedOrthant)?;
    let k = lambdas.len();
    let gram = RatMatrix::from_fn(k, k, |a, b| dot(&lambdas[a], &lambdas[b]));
    let rhs: Vec<Rational> = sigma0.signs().iter().map(|&s| int(2 * s as i64)).collect();
    let coeffs = gram.inverse().expect("independent vectors").mul_vec(&rhs).expect("dimension");
    let mut v = vec![Rational::zero(); dim];
    for (c, u) in coeffs.iter().zip(lambdas) {
        for (x, y) in v.iter_mut().zip(u) {
            *x += c * y;
        }
    }
    Ok((sigma0, v))
}

/// `U`, `U' = π_U(Ad(w'^{-1}) Lie(A))`, `σ₀` and `v` for a certificate.
pub fn build_escape_witness(cert: &Certificate, config: &GroupConfig) -> Result<EscapeWitness, WitnessError> {
    replay_certificate_detailed(config, cert).map_err(WitnessError::ExactCheckFailed)?;
    let space = config.space();
    let u_vectors: Vec<Vec<Rational>> = cert
        .subset
        .iter()
        .map(|&i| cert.w.act_on_cartan(space.fundamental_weight(i).expect("replayed subset").dual()))
        .collect();
    let dim = space.ambient_dim();
    let u_space = Subspace::new(dim, u_vectors.clone()).map_err(|_| WitnessError::DependentWeights)?;
    let a_prime = Subspace::new(dim, config.a_prime_basis(&cert.w_prime)).expect("Ad is injective");
    let u_prime = project_subspace(&a_prime, &u_space, space.form()).expect("same ambient dimension");
    if u_prime.same_space(&u_space) {
        return Err(WitnessError::NotProper);
    }
    let (sigma0, v) = escape_vector(&u_vectors, &u_prime)?;
    let witness = EscapeWitness {
        subset: cert.subset.clone(),
        u_vectors,
        u_space,
        u_prime,
        sigma0,
        v,
    };
    witness.exact_check()?;
    Ok(witness)
}

/// An element of `G` with its inverse, one real matrix per factor.
#[derive(Clone, Debug, PartialEq)]
pub struct RealElement {
    pub g: Vec<DMatrix<f64>>,
    pub g_inv: Vec<DMatrix<f64>>,
}

impl RealElement {
    pub fn identity(spec: &GroupSpec) -> Self {
        let id = vec![DMatrix::identity(spec.n(), spec.n()); spec.m()];
        Self {
            g: id.clone(),
            g_inv: id,
        }
    }

    pub fn from_rational(g: &[RatMatrix], g_inv: &[RatMatrix]) -> Self {
        Self {
            g: g.iter().map(to_real).collect(),
            g_inv: g_inv.iter().map(to_real).collect(),
        }
    }

    /// `exp(x)` for a Cartan vector `x`.
    pub fn torus(spec: &GroupSpec, x: &[f64]) -> Self {
        let n = spec.n();
        let diag = |sign: f64| -> Vec<DMatrix<f64>> {
            (0..spec.m())
                .map(|k| DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(n, x[k * n..(k + 1) * n].iter().map(|t| (sign * t).exp()))))
                .collect()
        };
        Self {
            g: diag(1.0),
            g_inv: diag(-1.0),
        }
    }

    /// `exp(t X)` for a Lie algebra element.
    pub fn exp_lie(x: &LieElement, t: f64) -> Self {
        let mats: Vec<DMatrix<f64>> = x.factors().iter().map(|f| to_real(f) * t).collect();
        Self {
            g: mats.iter().map(|m| m.clone().exp()).collect(),
            g_inv: mats.iter().map(|m| (-m.clone()).exp()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            g: self.g.iter().zip(&other.g).map(|(a, b)| a * b).collect(),
            g_inv: other.g_inv.iter().zip(&self.g_inv).map(|(a, b)| a * b).collect(),
        }
    }

    pub fn max_det_error(&self) -> f64 {
        self.g.iter().map(|m| (m.determinant() - 1.0).abs()).fold(0.0, f64::max)
    }
}

pub fn to_real(m: &RatMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)].to_f64())
}

/// The wedge of the nilradical basis of the `index`-th maximal parabolic on
/// the given side.
#[derive(Clone, Debug)]
pub struct WedgeLine {
    pub index: usize,
    pub side: ParabolicSide,
    pub basis: Vec<LieElement>,
}

impl WedgeLine {
    pub fn new(spec: &GroupSpec, index: usize, side: ParabolicSide) -> Self {
        Self {
            index,
            side,
            basis: nilradical_basis(spec, index, side).expect("index in range"),
        }
    }
}

/// `ln ‖ρ(g) p‖` with matrix units orthonormal: `ln sqrt det Gram` of the
/// vectors `Ad(g) b_l`, computed as `Σ ln |R_ll|` of a QR factorization.
pub fn ln_wedge_norm(line: &WedgeLine, g: &RealElement) -> f64 {
    let m = g.g.len();
    let n = g.g.first().map_or(0, |x| x.nrows());
    let cols: Vec<DMatrix<f64>> = line
        .basis
        .iter()
        .map(|b| {
            let mut flat = DMatrix::zeros(m * n * n, 1);
            for (k, f) in b.factors().iter().enumerate() {
                if f.is_zero() {
                    continue;
                }
                let y = &g.g[k] * to_real(f) * &g.g_inv[k];
                for a in 0..n {
                    for c in 0..n {
                        flat[(k * n * n + a * n + c, 0)] = y[(a, c)];
                    }
                }
            }
            flat
        })
        .collect();
    let mat = DMatrix::from_fn(m * n * n, cols.len(), |r, c| cols[c][(r, 0)]);
    let r = mat.qr().r();
    (0..cols.len()).map(|i| r[(i, i)].abs().ln()).sum()
}

pub fn wedge_norm(line: &WedgeLine, g: &RealElement) -> f64 {
    ln_wedge_norm(line, g).exp()
}

/// `g_N = w' exp(N v) w` for a certificate and its escape witness.
#[derive(Clone, Debug)]
pub struct DivergenceSequence {
    pub spec: GroupSpec,
    pub certificate: Certificate,
    pub witness: EscapeWitness,
    w_prime: RealElement,
    w: RealElement,
    v: Vec<f64>,
}

impl DivergenceSequence {
    pub fn new(config: &GroupConfig, certificate: Certificate, witness: EscapeWitness) -> Self {
        let w_reps = certificate.w.representatives();
        let w_inv: Vec<RatMatrix> = w_reps.iter().map(Matrix::transpose).collect();
        Self {
            spec: *config.spec(),
            w_prime: RealElement::from_rational(certificate.w_prime.matrices(), certificate.w_prime.inverses()),
            w: RealElement::from_rational(&w_reps, &w_inv),
            v: witness.v.iter().map(Scalar::to_f64).collect(),
            certificate,
            witness,
        }
    }

    pub fn element(&self, big_n: f64) -> RealElement {
        let nv: Vec<f64> = self.v.iter().map(|x| big_n * x).collect();
        self.w_prime.mul(&RealElement::torus(&self.spec, &nv)).mul(&self.w)
    }

    pub fn v_real(&self) -> &[f64] {
        &self.v
    }

    /// Lines `(j, side)` for every subset position and both sides.
    pub fn lines(&self) -> Vec<(usize, WedgeLine)> {
        self.certificate
            .subset
            .iter()
            .enumerate()
            .flat_map(|(j, &i)| ParabolicSide::BOTH.map(|side| (j, WedgeLine::new(&self.spec, i, side))))
            .collect()
    }
}

/// `ln` of the wedge norm in closed form for `h = exp(a)` and a monomial
/// `w'`: `s · n · w(χ_i)(Ad(w'^{-1}) a + N v)`, `s = ±1` by side.
pub fn closed_form_ln_norm(seq: &DivergenceSequence, j: usize, side: ParabolicSide, a: &[f64], big_n: f64) -> Option<f64> {
    let pi = seq.certificate.w_prime.monomial()?;
    let a_prime = pi.inverse().act_on_cartan(a);
    let lambda: Vec<f64> = seq.witness.u_vectors[j].iter().map(Scalar::to_f64).collect();
    let x: f64 = lambda
        .iter()
        .zip(a_prime.iter().zip(&seq.v))
        .map(|(l, (a, v))| l * (a + big_n * v))
        .sum();
    let s = match side {
        ParabolicSide::Standard => 1.0,
        ParabolicSide::Opposite => -1.0,
    };
    Some(s * seq.spec.n() as f64 * x)
}

/// Deterministic samples `h = exp(a) · m_s` of `H`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HSampler {
    pub radius: f64,
    pub points: usize,
    pub words: usize,
    pub max_word_len: usize,
    pub seed: u64,
    /// Upper bound on grid size; points per dimension is reduced (keeping it
    /// odd so 0 stays on the grid) until the grid fits.
    pub max_grid: usize,
}

impl Default for HSampler {
    fn default() -> Self {
        Self {
            radius: 5.0,
            points: 21,
            words: 8,
            max_word_len: 3,
            seed: 0x5EED,
            max_grid: 4096,
        }
    }
}

/// One sample: grid coefficients on `torus-a.basis` and a word in
/// `exp(±X_j)` (generator index, sign).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HSample {
    pub coeffs: Vec<f64>,
    pub word: Vec<(usize, i8)>,
}

impl HSampler {
    pub fn points_per_dim(&self, dim: usize) -> usize {
        let mut p = self.points.max(1);
        while p > 1 && p.checked_pow(dim as u32).is_none_or(|t| t > self.max_grid) {
            p -= if p % 2 == 1 { 2 } else { 1 };
        }
        p
    }

    pub fn samples(&self, config: &GroupConfig) -> Vec<HSample> {
        let dim = config.a_basis().dim();
        let p = self.points_per_dim(dim);
        let grid: Vec<f64> = if p == 1 {
            vec![0.0]
        } else {
            (0..p).map(|i| -self.radius + 2.0 * self.radius * i as f64 / (p - 1) as f64).collect()
        };
        let mut words = vec![Vec::new()];
        let gens = config.m_generators().len();
        if gens > 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            for _ in 0..self.words {
                let len = rng.random_range(1..=self.max_word_len.max(1));
                words.push(
                    (0..len)
                        .map(|_| (rng.random_range(0..gens), if rng.random_bool(0.5) { 1 } else { -1 }))
                        .collect(),
                );
            }
        }
        let total = p.pow(dim as u32);
        let mut out = Vec::with_capacity(total * words.len());
        for idx in 0..total {
            let mut rem = idx;
            let mut coeffs = vec![0.0; dim];
            for c in coeffs.iter_mut().rev() {
                *c = grid[rem % p];
                rem /= p;
            }
            for word in &words {
                out.push(HSample {
                    coeffs: coeffs.clone(),
                    word: word.clone(),
                });
            }
        }
        out
    }

    /// Cartan vector `a = Σ c_l a_l` of a sample.
    pub fn cartan_part(config: &GroupConfig, s: &HSample) -> Vec<f64> {
        let mut a = vec![0.0; config.space().ambient_dim()];
        for (c, b) in s.coeffs.iter().zip(config.a_basis().basis()) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += c * y.to_f64();
            }
        }
        a
    }

    pub fn realize(config: &GroupConfig, s: &HSample) -> RealElement {
        let spec = config.spec();
        let mut h = RealElement::torus(spec, &Self::cartan_part(config, s));
        for &(j, sign) in &s.word {
            h = h.mul(&RealElement::exp_lie(&config.m_generators()[j], sign as f64));
        }
        h
    }
}

/// Smallest wedge norm over the certificate's lines for one element, with
/// the line that attained it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineMin {
    pub norm: f64,
    /// 1-based index `i_j` of the line.
    pub index: usize,
    pub side: ParabolicSide,
}

fn min_over_lines(lines: &[(usize, WedgeLine)], g: &RealElement) -> LineMin {
    lines
        .iter()
        .map(|(_, line)| LineMin {
            norm: wedge_norm(line, g),
            index: line.index,
            side: line.side,
        })
        .fold(None, |best: Option<LineMin>, x| match best {
            Some(b) if b.norm <= x.norm => Some(b),
            _ => Some(x),
        })
        .expect("nonempty subset")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub n: u32,
    /// Max over samples of the min-over-lines norm.
    pub max_min_norm: f64,
    pub argmax_sample: usize,
    pub attained_by: LineMin,
    pub standard_fired: usize,
    pub opposite_fired: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceExceeded {
    pub sample: usize,
    pub value: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivergenceReport {
    pub samples: usize,
    pub rows: Vec<DecayRow>,
    /// Max over samples of the smallest decaying-side norm at `N = 0`.
    pub baseline: f64,
    pub n_target: u32,
    pub n0: u32,
    pub max_at_n0: f64,
    pub max_det_error: f64,
    pub tolerance_exceeded: Option<ToleranceExceeded>,
}

fn evaluate(seq: &DivergenceSequence, hs: &[RealElement], big_n: u32) -> (Vec<LineMin>, f64) {
    let lines = seq.lines();
    let g = seq.element(big_n as f64);
    let det_err = g.max_det_error();
    let mins = hs.par_iter().map(|h| min_over_lines(&lines, &h.mul(&g))).collect();
    (mins, det_err)
}

/// Exact part first (fatal on failure), then the numeric decay table.
/// `N₀ = ⌊ln(n_target · c)⌋ + 1` with `c` the max over samples of the
/// smallest decaying-side norm at `N = 0`; along each decaying line the norm
/// is multiplied by `exp(-2nN)`, so every sample is below `c · e^{-N}`.
pub fn verify_divergence(
    seq: &DivergenceSequence,
    config: &GroupConfig,
    sampler: &HSampler,
    ns: &[u32],
    n_target: u32,
) -> Result<DivergenceReport, WitnessError> {
    seq.witness.exact_check()?;
    let samples = sampler.samples(config);
    let hs: Vec<RealElement> = samples.par_iter().map(|s| HSampler::realize(config, s)).collect();

    let mut max_det_error = 0.0f64;
    let mut rows = Vec::with_capacity(ns.len());
    for &big_n in ns {
        let (mins, det_err) = evaluate(seq, &hs, big_n);
        max_det_error = max_det_error.max(det_err);
        let (argmax, best) = mins
            .iter()
            .enumerate()
            .fold((0, mins[0]), |(ai, a), (i, x)| if x.norm > a.norm { (i, *x) } else { (ai, a) });
        rows.push(DecayRow {
            n: big_n,
            max_min_norm: best.norm,
            argmax_sample: argmax,
            attained_by: best,
            standard_fired: mins.iter().filter(|x| x.side == ParabolicSide::Standard).count(),
            opposite_fired: mins.iter().filter(|x| x.side == ParabolicSide::Opposite).count(),
        });
    }

    let decaying: Vec<(usize, WedgeLine)> = seq
        .certificate
        .subset
        .iter()
        .enumerate()
        .map(|(j, &i)| (j, WedgeLine::new(&seq.spec, i, seq.witness.decaying_side(j))))
        .collect();
    let g0 = seq.element(0.0);
    let baseline = hs
        .par_iter()
        .map(|h| min_over_lines(&decaying, &h.mul(&g0)).norm)
        .collect::<Vec<_>>()
        .into_iter()
        .fold(0.0f64, f64::max);
    let n0 = ((n_target as f64 * baseline).ln().floor() + 1.0).max(0.0) as u32;
    let (mins, det_err) = evaluate(seq, &hs, n0);
    max_det_error = max_det_error.max(det_err);
    let bound = 1.0 / n_target as f64;
    let (argmax, max_at_n0) = mins
        .iter()
        .enumerate()
        .fold((0, f64::MIN), |(ai, a), (i, x)| if x.norm > a { (i, x.norm) } else { (ai, a) });
    let tolerance_exceeded = (max_at_n0 >= bound).then_some(ToleranceExceeded {
        sample: argmax,
        value: max_at_n0,
        bound,
    });
    Ok(DivergenceReport {
        samples: samples.len(),
        rows,
        baseline,
        n_target,
        n0,
        max_at_n0,
        max_det_error,
        tolerance_exceeded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criterion::{check_torus, CentralizerSource};

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn escape_vector_examples() {
        let coords = vec![v(&[1, 0]), v(&[0, 1])];
        let diag = RatSubspace::new(2, vec![v(&[1, 1])]).unwrap();
        let (s, x) = escape_vector(&coords, &diag).unwrap();
        assert_eq!(s, Orthant::new(vec![-1, 1]).unwrap());
        assert_eq!(x, v(&[-2, 2]));

        let (s, _) = escape_vector(&coords, &RatSubspace::zero(2)).unwrap();
        assert_eq!(s, Orthant::new(vec![1, 1]).unwrap());

        let (s, x) = escape_vector(&[v(&[1])], &RatSubspace::zero(1)).unwrap();
        assert_eq!(s, Orthant::new(vec![1]).unwrap());
        assert_eq!(x, v(&[2]));

        assert_eq!(escape_vector(&coords, &RatSubspace::full(2)), Err(WitnessError::NotProper));
    }

    #[test]
    fn wedge_norm_examples() {
        let s = GroupSpec::res_sl(2, 1).unwrap();
        let line = WedgeLine::new(&s, 1, ParabolicSide::Standard);
        assert!((wedge_norm(&line, &RealElement::identity(&s)) - 1.0).abs() < 1e-12);
        for t in [0.7, -1.0] {
            let g = RealElement::torus(&s, &[t, -t]);
            let expected = (2.0 * t).exp();
            assert!((wedge_norm(&line, &g) - expected).abs() < 1e-9 * expected);
        }
    }

    fn example_one_m2() -> (GroupConfig, Certificate) {
        let s = GroupSpec::res_sl(2, 2).unwrap();
        let a = vec![v(&[1, -1, 1, -1])];
        let cert = check_torus(s, a.clone()).unwrap().certificate().unwrap().clone();
        (GroupConfig::torus(s, a).unwrap(), cert)
    }

    #[test]
    fn example_one_witness() {
        let (config, cert) = example_one_m2();
        let w = build_escape_witness(&cert, &config).unwrap();
        assert_eq!(w.u_prime.dim(), 0);
        assert_eq!(w.sigma0, Orthant::new(vec![1]).unwrap());
        assert_eq!(w.v, v(&[1, -1, -1, 1]));
        assert_eq!(w.lambda_of_v(), v(&[2]));
        assert_eq!(w.decaying_side(0), ParabolicSide::Opposite);
    }

    #[test]
    fn example_one_decay() {
        let (config, cert) = example_one_m2();
        let w = build_escape_witness(&cert, &config).unwrap();
        let seq = DivergenceSequence::new(&config, cert, w);
        let report = verify_divergence(&seq, &config, &HSampler::default(), &[0, 20], 100).unwrap();
        assert_eq!(report.samples, 21);
        assert!((report.rows[0].max_min_norm - 1.0).abs() < 1e-9);
        assert!(report.rows[1].max_min_norm < 1e-6 * report.rows[0].max_min_norm);
        assert!(report.tolerance_exceeded.is_none());
        assert!(report.max_det_error < 1e-9);
    }

    #[test]
    fn closed_form_matches_gram() {
        let (config, cert) = example_one_m2();
        let w = build_escape_witness(&cert, &config).unwrap();
        let seq = DivergenceSequence::new(&config, cert, w);
        for (t, big_n) in [(0.3, 0.0), (-2.0, 1.5), (4.0, 3.0)] {
            let a = [t, -t, t, -t];
            let h = RealElement::torus(config.spec(), &a);
            for (j, line) in seq.lines() {
                let gram = ln_wedge_norm(&line, &h.mul(&seq.element(big_n)));
                let closed = closed_form_ln_norm(&seq, j, line.side, &a, big_n).unwrap();
                assert!((gram.exp() - closed.exp()).abs() <= 1e-9 * closed.exp());
            }
        }
    }

    #[test]
    fn grid_is_capped() {
        let s = HSampler::default();
        assert_eq!(s.points_per_dim(0), 21);
        assert_eq!(s.points_per_dim(1), 21);
        assert_eq!(s.points_per_dim(2), 21);
        assert_eq!(s.points_per_dim(3), 15);
        assert_eq!(s.points_per_dim(4), 7);
    }

    #[test]
    fn m_words_are_deterministic() {
        let s = GroupSpec::res_sl(3, 1).unwrap();
        let mut x = LieElement::matrix_unit(&s, 0, 0, 1).factors().to_vec();
        x[0][(1, 0)] = int(-1);
        let gen = LieElement::new(&s, x).unwrap();
        let d = vec![v(&[1, 1, -2])];
        let config = GroupConfig::new(s, vec![gen], d.clone(), d, CentralizerSource::Explicit(vec![])).unwrap();
        let a = HSampler::default().samples(&config);
        let b = HSampler::default().samples(&config);
        assert_eq!(a, b);
        assert_eq!(a.len(), 21 * 9);
        assert!(a[1..9].iter().all(|s| (1..=3).contains(&s.word.len())));
    }
}
