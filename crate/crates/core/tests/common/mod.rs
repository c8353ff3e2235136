#![allow(dead_code)]

use nondiv::criterion::{CentralizerSource, GroupConfig};
use nondiv::linalg::Matrix;
use nondiv::roots::{GroupSpec, LieElement};
use nondiv::scalar::int;
use nondiv::weyl::{enumerate_weyl, WeylElement};
use nondiv::{RatMatrix, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ints(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| int(x)).collect()
}

pub fn rat_matrix(rows: &[Vec<i64>]) -> RatMatrix {
    let cols = rows.first().map_or(0, |r| r.len());
    Matrix::from_rows(cols, &rows.iter().map(|r| ints(r)).collect::<Vec<_>>()).unwrap()
}

pub fn random_int_matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> RatMatrix {
    Matrix::from_fn(rows, cols, |_, _| int(r.random_range(-bound..=bound)))
}

/// A random rational vector with small numerators and denominators.
pub fn random_rational_vector(r: &mut ChaCha8Rng, len: usize) -> Vec<Rational> {
    (0..len)
        .map(|_| Rational::new(r.random_range(-4i64..=4).into(), r.random_range(1i64..=3).into()))
        .collect()
}

/// A random trace-zero Cartan vector (possibly zero).
pub fn random_cartan_vector(r: &mut ChaCha8Rng, spec: &GroupSpec) -> Vec<Rational> {
    let n = spec.n();
    let mut x = random_rational_vector(r, spec.ambient_dim());
    for k in 0..spec.m() {
        let block = &mut x[k * n..(k + 1) * n];
        let mean = block.iter().cloned().sum::<Rational>() / int(n as i64);
        block.iter_mut().for_each(|c| *c -= mean.clone());
    }
    x
}

/// Up to `dim` random linearly independent trace-zero Cartan vectors (fewer
/// if a draw degenerates).
pub fn random_cartan_subspace(r: &mut ChaCha8Rng, spec: &GroupSpec, dim: usize) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = Vec::new();
    for _ in 0..dim {
        let x = random_cartan_vector(r, spec);
        let mut trial = out.clone();
        trial.push(x);
        let rows = Matrix::from_rows(spec.ambient_dim(), &trial).unwrap();
        if rows.rank() == trial.len() {
            out = trial;
        }
    }
    out
}

/// Random integer combinations of `basis`, of the requested dimension when
/// possible.
pub fn random_subspace_of(r: &mut ChaCha8Rng, basis: &[Vec<Rational>], dim: usize) -> Vec<Vec<Rational>> {
    let ambient = basis.first().map_or(0, |b| b.len());
    let mut out: Vec<Vec<Rational>> = Vec::new();
    for _ in 0..4 * dim + 4 {
        if out.len() == dim {
            break;
        }
        let mut x = vec![int(0); ambient];
        for b in basis {
            let c = int(r.random_range(-2i64..=2));
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi += c.clone() * bi.clone();
            }
        }
        let mut trial = out.clone();
        trial.push(x);
        if Matrix::from_rows(ambient, &trial).unwrap().rank() == trial.len() {
            out = trial;
        }
    }
    out
}

/// How `M` acts on one factor: on the coordinates `support` (empty for no
/// action), through all of `sl(support)` or through `so(2,1)` when
/// `support` has three elements.
#[derive(Clone, Debug)]
pub struct FactorPattern {
    pub support: Vec<usize>,
    pub so21: bool,
}

/// A valid `(M, D, W(Z_G(M)))` triple built from per-factor patterns: `D`
/// is constant on each support and free elsewhere, and the centralizer Weyl
/// group permutes the complement of each support.
#[derive(Clone, Debug)]
pub struct BlockConfig {
    pub spec: GroupSpec,
    pub patterns: Vec<FactorPattern>,
    pub m_generators: Vec<LieElement>,
    pub d_basis: Vec<Vec<Rational>>,
    pub centralizer: Vec<Vec<RatMatrix>>,
}

impl BlockConfig {
    pub fn with_a(&self, a_basis: Vec<Vec<Rational>>) -> GroupConfig {
        let source = if self.m_generators.is_empty() {
            CentralizerSource::AutoTrivialM
        } else {
            CentralizerSource::Explicit(self.centralizer.clone())
        };
        GroupConfig::new(self.spec, self.m_generators.clone(), self.d_basis.clone(), a_basis, source)
            .expect("block configurations are valid")
    }
}

fn unit(spec: &GroupSpec, k: usize, entries: &[(usize, usize, i64)]) -> LieElement {
    let n = spec.n();
    let factors = (0..spec.m())
        .map(|f| {
            let mut m = RatMatrix::zeros(n, n);
            if f == k {
                for &(a, b, v) in entries {
                    m[(a, b)] = int(v);
                }
            }
            m
        })
        .collect();
    LieElement::new(spec, factors).unwrap()
}

pub fn block_config(spec: GroupSpec, patterns: Vec<FactorPattern>) -> BlockConfig {
    let n = spec.n();
    let mut gens = Vec::new();
    for (k, p) in patterns.iter().enumerate() {
        let s = &p.support;
        if p.so21 {
            let (a, b, c) = (s[0], s[1], s[2]);
            gens.push(unit(&spec, k, &[(a, b, 1), (b, a, -1)]));
            gens.push(unit(&spec, k, &[(a, c, 1), (c, a, 1)]));
            gens.push(unit(&spec, k, &[(b, c, 1), (c, b, 1)]));
        } else {
            for &a in s {
                for &b in s {
                    if a != b {
                        gens.push(unit(&spec, k, &[(a, b, 1)]));
                    }
                }
            }
        }
    }

    // Lie(D): trace zero per factor and equal coordinates on each support.
    let dim = spec.ambient_dim();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for (k, p) in patterns.iter().enumerate() {
        let mut tr = vec![int(0); dim];
        (0..n).for_each(|a| tr[k * n + a] = int(1));
        rows.push(tr);
        for w in p.support.windows(2) {
            let mut e = vec![int(0); dim];
            e[k * n + w[0]] = int(1);
            e[k * n + w[1]] = int(-1);
            rows.push(e);
        }
    }
    let d_basis = Matrix::from_rows(dim, &rows).unwrap().kernel_basis();

    // Permutations of each complement, combined over factors.
    let per_factor: Vec<Vec<Vec<usize>>> = patterns
        .iter()
        .map(|p| {
            let free: Vec<usize> = (0..n).filter(|a| !p.support.contains(a)).collect();
            let mut perms = Vec::new();
            permute(&mut free.clone(), 0, &mut |img| {
                let mut perm: Vec<usize> = (0..n).collect();
                for (src, dst) in free.iter().zip(img) {
                    perm[*src] = *dst;
                }
                perms.push(perm);
            });
            perms
        })
        .collect();
    let mut combos: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for options in &per_factor {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                options.iter().map(move |p| {
                    let mut c = c.clone();
                    c.push(p.clone());
                    c
                })
            })
            .collect();
    }
    let centralizer = if gens.is_empty() {
        Vec::new()
    } else {
        combos
            .into_iter()
            .map(|perms| WeylElement::new(&spec, perms).unwrap().representatives())
            .collect()
    };
    BlockConfig {
        spec,
        patterns,
        m_generators: gens,
        d_basis,
        centralizer,
    }
}

fn permute(cur: &mut Vec<usize>, i: usize, f: &mut impl FnMut(&[usize])) {
    if i == cur.len() {
        f(cur);
        return;
    }
    for j in i..cur.len() {
        cur.swap(i, j);
        permute(cur, i + 1, f);
        cur.swap(i, j);
    }
}

/// A random block configuration with `n <= 4`, `m <= 2`.
pub fn random_block_config(r: &mut ChaCha8Rng) -> BlockConfig {
    let n = r.random_range(2..=4);
    let m = r.random_range(1..=2);
    let spec = GroupSpec::res_sl(n, m).unwrap();
    let patterns = (0..m)
        .map(|_| {
            let size = match r.random_range(0..3) {
                0 => 0,
                _ => r.random_range(2..=n),
            };
            let mut coords: Vec<usize> = (0..n).collect();
            coords.shuffle(r);
            let mut support: Vec<usize> = coords[..size].to_vec();
            support.sort_unstable();
            let so21 = size == 3 && r.random_bool(0.5);
            FactorPattern { support, so21 }
        })
        .collect();
    block_config(spec, patterns)
}

pub fn example1_a(m: usize) -> Vec<Vec<Rational>> {
    vec![(0..m).flat_map(|_| [int(1), int(-1)]).collect()]
}

/// `Δ(Lie S)` for `S` the diagonal of `SL_n`: the same trace-zero diagonal
/// in every factor.
pub fn diagonal_cartan(n: usize, m: usize) -> Vec<Vec<Rational>> {
    (0..n - 1)
        .map(|a| {
            (0..m)
                .flat_map(|_| (0..n).map(move |b| int(if b == a { 1 } else if b == a + 1 { -1 } else { 0 })))
                .collect()
        })
        .collect()
}

/// Independent decision for the torus case: for every nonempty `I` and every
/// `w ∈ W(G)`, conjugate the basis of `Lie(A)` by the signed permutation
/// matrices of `w^{-1}` and evaluate partial sums of the diagonal directly.
pub fn oracle_torus_nondivergent(spec: &GroupSpec, a_basis: &[Vec<Rational>]) -> bool {
    let n = spec.n();
    let r = n - 1;
    for w in enumerate_weyl(spec) {
        let reps = w.representatives();
        // Column j: the diagonal of P^{-1} diag(a_j) P, i.e. w^{-1}(a_j).
        let moved: Vec<Vec<Rational>> = a_basis
            .iter()
            .map(|a| {
                let mut out = Vec::with_capacity(a.len());
                for (k, p) in reps.iter().enumerate() {
                    let diag = Matrix::diagonal(&a[k * n..(k + 1) * n]);
                    let conj = p.transpose().mul(&diag).unwrap().mul(p).unwrap();
                    out.extend((0..n).map(|b| conj[(b, b)].clone()));
                }
                out
            })
            .collect();
        // χ_i(x) = Σ_k Σ_{b < i} x_{k,b}
        let chi = |i: usize, x: &[Rational]| -> Rational {
            (0..spec.m()).flat_map(|k| (0..i).map(move |b| k * n + b)).map(|c| x[c].clone()).sum()
        };
        for mask in 1u32..(1 << r) {
            let subset: Vec<usize> = (1..=r).filter(|i| mask >> (i - 1) & 1 == 1).collect();
            let e = Matrix::from_fn(subset.len(), moved.len(), |s, j| chi(subset[s], &moved[j]));
            if e.rank() < subset.len() {
                return false;
            }
        }
    }
    true
}
