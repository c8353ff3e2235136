//! Shortest vectors of module lattices `O_K^n` twisted by points of `G`,
//! sampled along torus orbits. This only corroborates a certificate: the
//! verdict itself comes from [`crate::criterion`].

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::witness::RealElement;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProbeError {
    #[error("d = {0} must be squarefree, greater than 1, and 2 or 3 mod 4")]
    BadDiscriminant(u64),
    #[error("the probe supports m = 1 or m = 2 factors, got {0}")]
    FactorCount(usize),
    #[error("lattice basis is singular")]
    Singular,
}

/// `Z[√d]` with `d` squarefree and `d ≡ 2, 3 (mod 4)`, so it is the full
/// ring of integers of `Q(√d)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadraticOrder {
    d: u64,
}

impl QuadraticOrder {
    pub fn new(d: u64) -> Result<Self, ProbeError> {
        let squarefree = (2..).take_while(|p| p * p <= d).all(|p| d % (p * p) != 0);
        if d < 2 || !squarefree || !matches!(d % 4, 2 | 3) {
            return Err(ProbeError::BadDiscriminant(d));
        }
        Ok(Self { d })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn sqrt_d(&self) -> f64 {
        (self.d as f64).sqrt()
    }
}

/// A full-rank lattice; column `j` of `basis` is the `j`-th basis vector.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleLattice {
    pub basis: DMatrix<f64>,
}

impl ModuleLattice {
    pub fn new(basis: DMatrix<f64>) -> Result<Self, ProbeError> {
        if !basis.is_square() || basis.determinant().abs() < f64::MIN_POSITIVE {
            return Err(ProbeError::Singular);
        }
        Ok(Self { basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn covolume(&self) -> f64 {
        self.basis.determinant().abs()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            basis: &self.basis * c,
        }
    }
}

/// Columns `(g₁σ₁(v), g₂σ₂(v))` for `v` in `e_1, …, e_n, √d e_1, …, √d e_n`.
pub fn embed_lattice(order: &QuadraticOrder, g: &RealElement) -> Result<ModuleLattice, ProbeError> {
    if g.g.len() != 2 {
        return Err(ProbeError::FactorCount(g.g.len()));
    }
    let n = g.g[0].nrows();
    let s = order.sqrt_d();
    let mut basis = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for r in 0..n {
            basis[(r, i)] = g.g[0][(r, i)];
            basis[(n + r, i)] = g.g[1][(r, i)];
            basis[(r, n + i)] = s * g.g[0][(r, i)];
            basis[(n + r, n + i)] = -s * g.g[1][(r, i)];
        }
    }
    ModuleLattice::new(basis)
}

/// `g · Z^n` for a single factor.
pub fn embed_integer_lattice(g: &RealElement) -> Result<ModuleLattice, ProbeError> {
    if g.g.len() != 1 {
        return Err(ProbeError::FactorCount(g.g.len()));
    }
    ModuleLattice::new(g.g[0].clone())
}

/// The probe lattice for `m ∈ {1, 2}`.
pub fn embed(order: &QuadraticOrder, g: &RealElement) -> Result<ModuleLattice, ProbeError> {
    match g.g.len() {
        1 => embed_integer_lattice(g),
        2 => embed_lattice(order, g),
        m => Err(ProbeError::FactorCount(m)),
    }
}

fn columns(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.ncols()).map(|j| m.column(j).iter().copied().collect()).collect()
}

fn dotf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gram–Schmidt data: `μ_{ij}` and `|b*_i|²`.
fn gram_schmidt(b: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let k = b.len();
    let mut star: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut mu = vec![vec![0.0; k]; k];
    let mut norms = vec![0.0; k];
    for i in 0..k {
        let mut v = b[i].clone();
        for j in 0..i {
            mu[i][j] = dotf(&b[i], &star[j]) / norms[j];
            for (x, y) in v.iter_mut().zip(&star[j]) {
                *x -= mu[i][j] * y;
            }
        }
        norms[i] = dotf(&v, &v);
        star.push(v);
    }
    (mu, norms)
}

/// LLL reduction with parameter `δ = 0.99`; returns the reduced basis.
pub fn lll_reduce(basis: &[Vec<f64>]) -> Vec<Vec<f64>> {
    const DELTA: f64 = 0.99;
    let mut b = basis.to_vec();
    let k = b.len();
    let mut i = 1;
    while i < k {
        for j in (0..i).rev() {
            let (mu, _) = gram_schmidt(&b[..=i]);
            let q = mu[i][j].round();
            if q != 0.0 {
                let bj = b[j].clone();
                for (x, y) in b[i].iter_mut().zip(&bj) {
                    *x -= q * y;
                }
            }
        }
        let (mu, norms) = gram_schmidt(&b[..=i]);
        if norms[i] >= (DELTA - mu[i][i - 1] * mu[i][i - 1]) * norms[i - 1] {
            i += 1;
        } else {
            b.swap(i, i - 1);
            i = i.max(2) - 1;
        }
    }
    b
}

/// A shortest nonzero vector: its length and its coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ShortestVector {
    pub length: f64,
    pub vector: Vec<f64>,
}

/// Exact-optimal (up to rounding) shortest vector: LLL followed by
/// Fincke–Pohst enumeration of all integer combinations inside the ball of
/// radius `|b_1|`.
pub fn shortest_vector(lat: &ModuleLattice) -> ShortestVector {
    let b = lll_reduce(&columns(&lat.basis));
    let (mu, norms) = gram_schmidt(&b);
    let k = b.len();
    let mut best_sq = dotf(&b[0], &b[0]);
    let mut best = vec![0i64; k];
    best[0] = 1;
    let mut x = vec![0i64; k];
    enumerate(k, &mu, &norms, &mut x, 0.0, &mut best_sq, &mut best);
    let mut vector = vec![0.0; b[0].len()];
    for (c, bi) in best.iter().zip(&b) {
        for (v, y) in vector.iter_mut().zip(bi) {
            *v += *c as f64 * y;
        }
    }
    ShortestVector {
        length: dotf(&vector, &vector).sqrt(),
        vector,
    }
}

/// Depth-first over levels `level-1, …, 0`, each coordinate restricted to
/// the interval allowed by the remaining squared radius.
fn enumerate(
    level: usize,
    mu: &[Vec<f64>],
    norms: &[f64],
    x: &mut [i64],
    partial: f64,
    best_sq: &mut f64,
    best: &mut [i64],
) {
    if level == 0 {
        if x.iter().any(|&c| c != 0) && partial < *best_sq * (1.0 - 1e-12) {
            *best_sq = partial;
            best.copy_from_slice(x);
        }
        return;
    }
    let i = level - 1;
    let k = x.len();
    let center: f64 = -((i + 1)..k).map(|j| mu[j][i] * x[j] as f64).sum::<f64>();
    let room = (*best_sq - partial).max(0.0) / norms[i];
    let radius = room.sqrt();
    let lo = (center - radius).ceil() as i64;
    let hi = (center + radius).floor() as i64;
    for c in lo..=hi {
        let d = c as f64 - center;
        let next = partial + d * d * norms[i];
        if next > *best_sq {
            continue;
        }
        x[i] = c;
        enumerate(i, mu, norms, x, next, best_sq, best);
    }
    x[i] = 0;
}

/// Torus directions and grid for [`orbit_probe`].
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeGrid {
    /// Cartan vectors `a_l`; sample `a = Σ t_l a_l`.
    pub directions: Vec<Vec<f64>>,
    pub radius: f64,
    pub points: usize,
}

impl ProbeGrid {
    pub fn coefficients(&self) -> Vec<Vec<f64>> {
        let dim = self.directions.len();
        let p = self.points.max(1);
        let axis: Vec<f64> = if p == 1 {
            vec![0.0]
        } else {
            (0..p).map(|i| -self.radius + 2.0 * self.radius * i as f64 / (p - 1) as f64).collect()
        };
        (0..p.pow(dim as u32))
            .map(|mut idx| {
                let mut c = vec![0.0; dim];
                for x in c.iter_mut().rev() {
                    *x = axis[idx % p];
                    idx /= p;
                }
                c
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeStats {
    pub min: f64,
    pub max: f64,
    pub argmin: Vec<f64>,
    pub argmax: Vec<f64>,
    pub covolume_min: f64,
    pub covolume_max: f64,
}

/// Shortest vectors of `embed(exp(a) · g0)` for every grid point `a`.
pub fn orbit_probe(order: &QuadraticOrder, g0: &RealElement, grid: &ProbeGrid) -> Result<ProbeStats, ProbeError> {
    let m = g0.g.len();
    let n = g0.g.first().map_or(0, |x| x.nrows());
    let spec = crate::roots::GroupSpec::res_sl(n, m).map_err(|_| ProbeError::FactorCount(m))?;
    let coeffs = grid.coefficients();
    let results: Vec<(f64, f64)> = coeffs
        .par_iter()
        .map(|c| {
            let mut a = vec![0.0; n * m];
            for (t, dir) in c.iter().zip(&grid.directions) {
                for (x, y) in a.iter_mut().zip(dir) {
                    *x += t * y;
                }
            }
            let lat = embed(order, &RealElement::torus(&spec, &a).mul(g0))?;
            Ok((shortest_vector(&lat).length, lat.covolume()))
        })
        .collect::<Result<_, ProbeError>>()?;
    let (mut imin, mut imax) = (0, 0);
    for (i, (len, _)) in results.iter().enumerate() {
        if *len < results[imin].0 {
            imin = i;
        }
        if *len > results[imax].0 {
            imax = i;
        }
    }
    let cov = results.iter().map(|r| r.1);
    Ok(ProbeStats {
        min: results[imin].0,
        max: results[imax].0,
        argmin: coeffs[imin].clone(),
        argmax: coeffs[imax].clone(),
        covolume_min: cov.clone().fold(f64::INFINITY, f64::min),
        covolume_max: cov.fold(0.0, f64::max),
    })
}
