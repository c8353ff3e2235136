mod common;

use common::{ints, random_int_matrix, random_rational_vector, rng};
use nondiv::linalg::{
    independent_by_projection, integral_kernel_vector, invdim, orthant_meets_subspace, project_subspace,
    restricted_independent, BilinearForm, InvDim, Matrix, Orthant, StrictRegion, Subspace,
};
use nondiv::scalar::{int, is_integral};
use nondiv::{RatMatrix, Rational};
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;

fn matrix_strategy(max_rows: usize, max_cols: usize) -> impl Strategy<Value = RatMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec((-3i64..=3, 1i64..=3), r * c).prop_map(move |entries| {
            let data = entries
                .into_iter()
                .map(|(p, q)| Rational::new(p.into(), q.into()))
                .collect();
            Matrix::new(r, c, data).unwrap()
        })
    })
}

/// A subspace spanned by random rational vectors; may have lower dimension
/// than requested.
fn random_span(seed: u64, ambient: usize, count: usize) -> Subspace<Rational> {
    let mut r = rng(seed);
    let vs: Vec<Vec<Rational>> = (0..count).map(|_| random_rational_vector(&mut r, ambient)).collect();
    Subspace::span(ambient, &vs).unwrap()
}

proptest! {
    #[test]
    fn rank_equals_rank_of_transpose(m in matrix_strategy(5, 5)) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn kernel_vectors_are_annihilated(m in matrix_strategy(5, 6)) {
        let kernel = m.kernel_basis();
        prop_assert_eq!(kernel.len() + m.rank(), m.cols());
        for v in &kernel {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn projection_is_idempotent(seed in any::<u64>(), ambient in 2usize..=5) {
        let mut r = rng(seed);
        let u_dim = r.random_range(1..=ambient);
        let u = random_span(seed ^ 1, ambient, u_dim);
        let w = random_span(seed ^ 2, ambient, r.random_range(1..=ambient));
        let form = BilinearForm::standard(ambient);
        let once = project_subspace(&w, &u, &form).unwrap();
        let twice = project_subspace(&once, &u, &form).unwrap();
        prop_assert!(once.same_space(&twice));
        prop_assert!(u.contains_subspace(&once));
    }

    #[test]
    fn scaling_functionals_keeps_independence(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ambient = r.random_range(2..=5);
        let k = r.random_range(1..=ambient);
        let fs: Vec<Vec<Rational>> = (0..k).map(|_| random_rational_vector(&mut r, ambient)).collect();
        let w = random_span(seed ^ 3, ambient, r.random_range(1..=ambient));
        let c = Rational::new(r.random_range(1i64..=5).into(), r.random_range(1i64..=5).into());
        let scaled: Vec<Vec<Rational>> = fs.iter().map(|f| f.iter().map(|x| x * &c).collect()).collect();
        prop_assert_eq!(restricted_independent(&fs, &w), restricted_independent(&scaled, &w));
    }
}

/// Independence of restricted functionals, decided by evaluation rank and by
/// the projection route, over random instances including degenerate ones.
#[test]
fn projection_equivalence_200_instances() {
    let mut agreed = 0;
    for seed in 0..200u64 {
        let mut r = rng(seed);
        let ambient = r.random_range(1..=5);
        let k = r.random_range(1..=ambient);
        let mut fs: Vec<Vec<Rational>> = (0..k).map(|_| random_rational_vector(&mut r, ambient)).collect();
        if k > 1 && r.random_bool(0.2) {
            fs[k - 1] = fs[0].iter().map(|x| x * int(2)).collect();
        }
        let w = random_span(seed.wrapping_mul(31), ambient, r.random_range(0..=ambient));
        let diag: Vec<Rational> = (0..ambient).map(|_| int(r.random_range(1..=4))).collect();
        let form = BilinearForm::new(Matrix::diagonal(&diag)).unwrap();
        let by_rank = nondiv::linalg::evaluation_matrix(&fs, &w).rank() == k;
        assert_eq!(by_rank, independent_by_projection(&fs, &w, &form), "seed {seed}");
        agreed += 1;
    }
    assert_eq!(agreed, 200);
}

/// A subspace meets every open orthant of the coordinate functionals iff it
/// is everything; a proper subspace misses some orthant.
#[test]
fn sign_orthant_spanning_200_instances() {
    for seed in 0..200u64 {
        let mut r = rng(1000 + seed);
        let k = 1 + (seed as usize % 5);
        let coords: Vec<Vec<Rational>> = (0..k)
            .map(|i| (0..k).map(|j| int((i == j) as i64)).collect())
            .collect();
        let u = random_span(seed, k, r.random_range(0..=k));
        let meets_all = Orthant::all(k).all(|s| orthant_meets_subspace(&coords, &s, &u));
        assert_eq!(meets_all, u.dim() == k, "seed {seed}, dim {}", u.dim());
        // Orthants come in antipodal pairs: a subspace meets σ iff it meets -σ.
        for s in Orthant::all(k) {
            assert_eq!(
                orthant_meets_subspace(&coords, &s, &u),
                orthant_meets_subspace(&coords, &s.negated(), &u)
            );
        }
    }
}

#[test]
fn integral_kernel_vectors_100_matrices() {
    for seed in 0..100u64 {
        let mut r = rng(2000 + seed);
        let rows = r.random_range(1..=4);
        let cols = r.random_range(rows..=5);
        let m = random_int_matrix(&mut r, rows, cols, 4);
        match integral_kernel_vector(&m).unwrap() {
            Some(v) => {
                assert_eq!(v.len(), cols);
                let rv: Vec<Rational> = v.iter().cloned().map(Rational::from_integer).collect();
                assert!(rv.iter().all(is_integral));
                assert!(m.mul_vec(&rv).unwrap().iter().all(Zero::is_zero), "seed {seed}");
                assert!(v.iter().any(|x| !x.is_zero()));
                let g = v.iter().fold(num_bigint::BigInt::zero(), |a, b| num_integer::Integer::gcd(&a, b));
                assert_eq!(g, 1.into(), "primitive");
            }
            None => assert_eq!(m.rank(), cols),
        }
    }
}

#[test]
fn integral_kernel_rejects_fractions() {
    let m = Matrix::new(1, 2, vec![Rational::new(1.into(), 2.into()), int(1)]).unwrap();
    assert!(integral_kernel_vector(&m).is_err());
}

fn random_region(r: &mut rand_chacha::ChaCha8Rng, n: usize, k: usize) -> Vec<(Vec<Rational>, Rational)> {
    (0..k)
        .map(|_| loop {
            let f: Vec<Rational> = (0..n).map(|_| int(r.random_range(-2..=2))).collect();
            if f.iter().any(|x| !x.is_zero()) {
                break (f, int(r.random_range(-2..=2)));
            }
        })
        .collect()
}

/// `k` independent irredundant constraints leave exactly `n - k` invariant
/// directions (so at most `n - k`).
fn check_n_minus_k(region: &StrictRegion<Rational>) -> Option<bool> {
    let InvDim::Finite(x) = invdim(region) else { return None };
    let kept = region.irredundant();
    let rows: Vec<Vec<Rational>> = kept.iter().map(|&i| region.constraints()[i].0.clone()).collect();
    let n = region.ambient_dim();
    let rank = if rows.is_empty() { 0 } else { Matrix::from_rows(n, &rows).unwrap().rank() };
    (rank == kept.len()).then(|| x == n - kept.len())
}

/// Nested regions `C' ⊂ C` (C' has extra constraints): invdim is monotone
/// and obeys the `n - k` bound.
#[test]
fn invdim_monotone_and_bounded_100_pairs() {
    let mut bounded = 0;
    for seed in 0..100u64 {
        let mut r = rng(3000 + seed);
        let n = r.random_range(1..=4);
        let k = r.random_range(1..=4);
        let outer = random_region(&mut r, n, k);
        let mut inner = outer.clone();
        let extra = r.random_range(1..=2);
        inner.extend(random_region(&mut r, n, extra));
        let c = StrictRegion::new(n, outer).unwrap();
        let c_inner = StrictRegion::new(n, inner).unwrap();
        let (d, d_inner) = (invdim(&c), invdim(&c_inner));
        assert!(d_inner <= d, "seed {seed}: {d_inner:?} > {d:?}");
        for region in [&c, &c_inner] {
            if let Some(ok) = check_n_minus_k(region) {
                assert!(ok, "seed {seed}");
                bounded += 1;
            }
        }
    }
    assert!(bounded > 50);
}

#[test]
fn invdim_examples() {
    let half = StrictRegion::new(2, vec![(ints(&[1, 0]), int(0))]).unwrap();
    assert_eq!(invdim(&half), InvDim::Finite(1));
    let empty = StrictRegion::new(1, vec![(ints(&[1]), int(0)), (ints(&[-1]), int(0))]).unwrap();
    assert_eq!(invdim(&empty), InvDim::Empty);
}
