mod common;

use common::rng;
use nalgebra::DMatrix;
use nondiv::probe::{embed, lll_reduce, shortest_vector, ModuleLattice, QuadraticOrder};
use nondiv::roots::GroupSpec;
use nondiv::witness::RealElement;
use rand::Rng;

/// Shortest length by brute force over the box `|c_i| <= R sqrt((G^{-1})_ii)`,
/// `R` the shortest basis vector length: every vector of length at most `R`
/// has coefficients in that box.
fn box_oracle(basis: &DMatrix<f64>) -> f64 {
    let n = basis.ncols();
    let gram = basis.transpose() * basis;
    let inv = gram.clone().try_inverse().unwrap();
    let r = (0..n).map(|i| gram[(i, i)].sqrt()).fold(f64::INFINITY, f64::min);
    let bounds: Vec<i64> = (0..n).map(|i| (r * inv[(i, i)].sqrt()).floor() as i64).collect();
    let mut best = f64::INFINITY;
    let mut c = bounds.iter().map(|b| -b).collect::<Vec<_>>();
    loop {
        if c.iter().any(|&x| x != 0) {
            let v = basis * DMatrix::from_iterator(n, 1, c.iter().map(|&x| x as f64));
            best = best.min(v.norm());
        }
        let mut i = 0;
        loop {
            if i == n {
                return best;
            }
            if c[i] < bounds[i] {
                c[i] += 1;
                break;
            }
            c[i] = -bounds[i];
            i += 1;
        }
    }
}

fn random_lattice(seed: u64, dim: usize) -> DMatrix<f64> {
    let mut r = rng(seed);
    loop {
        let b = DMatrix::<f64>::from_fn(dim, dim, |_, _| r.random_range(-2.0..2.0));
        if b.determinant().abs() > 0.3 {
            return b;
        }
    }
}

#[test]
fn shortest_vector_matches_box_enumeration_on_50_lattices() {
    for seed in 0..50 {
        let b = random_lattice(seed, 4);
        let expected = box_oracle(&b);
        let got = shortest_vector(&ModuleLattice::new(b).unwrap());
        assert!((got.length - expected).abs() <= 1e-9 * expected, "seed {seed}: {} vs {expected}", got.length);
        assert!((got.vector.iter().map(|x| x * x).sum::<f64>().sqrt() - got.length).abs() < 1e-9);
    }
}

#[test]
fn lll_preserves_the_lattice() {
    for seed in 0..30 {
        let b = random_lattice(100 + seed, 4);
        let cols: Vec<Vec<f64>> = (0..4).map(|j| b.column(j).iter().copied().collect()).collect();
        let reduced = lll_reduce(&cols);
        let r = DMatrix::from_fn(4, 4, |i, j| reduced[j][i]);
        // Change of basis b^{-1} r is unimodular.
        let u = b.clone().try_inverse().unwrap() * &r;
        assert!(u.iter().all(|x| (x - x.round()).abs() < 1e-6), "seed {seed}");
        assert!((u.determinant().abs() - 1.0).abs() < 1e-6);
    }
}

#[test]
fn torus_action_preserves_covolume() {
    let order = QuadraticOrder::new(2).unwrap();
    for seed in 0..20 {
        let mut r = rng(200 + seed);
        let n = r.random_range(2..=3);
        let spec = GroupSpec::res_sl(n, 2).unwrap();
        let mut a = vec![0.0; 2 * n];
        for k in 0..2 {
            for b in 0..n - 1 {
                let t = r.random_range(-3.0..3.0);
                a[k * n + b] += t;
                a[k * n + b + 1] -= t;
            }
        }
        let base = embed(&order, &RealElement::identity(&spec)).unwrap().covolume();
        let moved = embed(&order, &RealElement::torus(&spec, &a)).unwrap().covolume();
        assert!((base - moved).abs() <= 1e-9 * base, "seed {seed}");
    }
}
