mod common;

use common::{example1_a, random_cartan_subspace, random_rational_vector, rng};
use nondiv::criterion::{check_general, GroupConfig};
use nondiv::linalg::{orthant_meets_subspace, Subspace};
use nondiv::roots::{GroupSpec, LieElement, ParabolicSide};
use nondiv::scalar::{dot, int, Scalar};
use nondiv::witness::{
    build_escape_witness, closed_form_ln_norm, escape_vector, ln_wedge_norm, verify_divergence, DivergenceSequence,
    HSampler, RealElement, WedgeLine,
};
use nondiv::{RatMatrix, Rational};
use proptest::prelude::*;
use rand::Rng;

fn divergent_torus(seed: u64) -> Option<(GroupConfig, DivergenceSequence)> {
    let mut r = rng(seed);
    let (n, m) = [(2, 2), (2, 4), (3, 1), (3, 2)][r.random_range(0..4)];
    let spec = GroupSpec::res_sl(n, m).unwrap();
    let dim = r.random_range(0..=spec.rank() * m);
    let config = GroupConfig::torus(spec, random_cartan_subspace(&mut r, &spec, dim)).unwrap();
    let cert = check_general(&config).unwrap().certificate()?.clone();
    let witness = build_escape_witness(&cert, &config).unwrap();
    let seq = DivergenceSequence::new(&config, cert, witness);
    Some((config, seq))
}

/// A random element of `SO(n)^m` as `exp` of a skew-symmetric matrix.
fn rotation(spec: &GroupSpec, seed: u64) -> RealElement {
    let mut r = rng(seed);
    let n = spec.n();
    let factors = (0..spec.m())
        .map(|_| {
            let mut x = RatMatrix::zeros(n, n);
            for a in 0..n {
                for b in a + 1..n {
                    let c = int(r.random_range(-3..=3));
                    x[(a, b)] = c.clone();
                    x[(b, a)] = -c;
                }
            }
            x
        })
        .collect();
    RealElement::exp_lie(&LieElement::new(spec, factors).unwrap(), 0.37)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// For a proper `U' ⊂ U`, the escape vector lies in `U`, takes the values
    /// `2σ₀` on the weights, and `σ₀` is missed by `U'`.
    #[test]
    fn escape_vectors_are_exact(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ambient = r.random_range(2..=5);
        let k = r.random_range(1..=ambient);
        let lambdas: Vec<Vec<Rational>> = (0..k).map(|_| random_rational_vector(&mut r, ambient)).collect();
        let Ok(u) = Subspace::new(ambient, lambdas.clone()) else { return Ok(()) };
        let picks = r.random_range(0..k);
        let gens: Vec<Vec<Rational>> = (0..picks)
            .map(|_| {
                let mut x = vec![int(0); ambient];
                for b in u.basis() {
                    let c = int(r.random_range(-2..=2));
                    x.iter_mut().zip(b).for_each(|(xi, bi)| *xi += c.clone() * bi);
                }
                x
            })
            .collect();
        let u_prime = Subspace::span(ambient, &gens).unwrap();
        let (sigma0, v) = escape_vector(&lambdas, &u_prime).unwrap();
        prop_assert!(!orthant_meets_subspace(&lambdas, &sigma0, &u_prime));
        prop_assert!(u.contains(&v));
        for (l, s) in lambdas.iter().zip(sigma0.signs()) {
            prop_assert_eq!(dot(l, &v), int(2 * *s as i64));
        }
    }

    /// Every torus certificate yields an exact witness, and the wedge norms
    /// agree with the closed form at torus points.
    #[test]
    fn torus_witnesses_match_closed_form(seed in any::<u64>()) {
        let Some((config, seq)) = divergent_torus(seed) else { return Ok(()) };
        prop_assert!(seq.witness.exact_check().is_ok());
        let mut r = rng(seed ^ 0x77);
        let a: Vec<f64> = config
            .a_basis()
            .basis()
            .iter()
            .fold(vec![0.0; config.space().ambient_dim()], |mut acc, b| {
                let t = r.random_range(-2.0..2.0);
                acc.iter_mut().zip(b).for_each(|(x, y)| *x += t * y.to_f64());
                acc
            });
        let big_n = r.random_range(0.0..4.0);
        let g = RealElement::torus(config.spec(), &a).mul(&seq.element(big_n));
        for (j, &i) in seq.certificate.subset.iter().enumerate() {
            for side in ParabolicSide::BOTH {
                let numeric = ln_wedge_norm(&WedgeLine::new(config.spec(), i, side), &g);
                let exact = closed_form_ln_norm(&seq, j, side, &a, big_n).unwrap();
                prop_assert!((numeric - exact).abs() <= 1e-9 * (1.0 + exact.abs()), "{numeric} vs {exact}");
            }
        }
    }

    /// Wedge norms use an orthonormal basis of matrix units, so rotating on
    /// the left by `SO(n)^m` does not change them.
    #[test]
    fn wedge_norms_are_rotation_invariant(seed in any::<u64>()) {
        let Some((config, seq)) = divergent_torus(seed) else { return Ok(()) };
        let g = seq.element(1.5);
        let k = rotation(config.spec(), seed);
        for &i in &seq.certificate.subset {
            for side in ParabolicSide::BOTH {
                let line = WedgeLine::new(config.spec(), i, side);
                let (a, b) = (ln_wedge_norm(&line, &g), ln_wedge_norm(&line, &k.mul(&g)));
                prop_assert!((a - b).abs() < 1e-9 * (1.0 + a.abs()));
            }
        }
    }
}

#[test]
fn decay_table_decreases_along_the_sequence() {
    let spec = GroupSpec::res_sl(2, 2).unwrap();
    let config = GroupConfig::torus(spec, example1_a(2)).unwrap();
    let cert = check_general(&config).unwrap().certificate().unwrap().clone();
    let witness = build_escape_witness(&cert, &config).unwrap();
    let seq = DivergenceSequence::new(&config, cert, witness);
    let report = verify_divergence(&seq, &config, &HSampler::default(), &[0, 1, 2, 5, 10], 100).unwrap();
    for pair in report.rows.windows(2) {
        assert!(pair[1].max_min_norm < pair[0].max_min_norm);
    }
    assert!(report.tolerance_exceeded.is_none());
    assert!(report.max_det_error < 1e-9);
}

#[test]
fn block_configuration_witnesses_are_exact() {
    let mut found = 0;
    for seed in 0..60 {
        let mut r = rng(900 + seed);
        let block = common::random_block_config(&mut r);
        let dim = r.random_range(0..=block.d_basis.len());
        let config = block.with_a(common::random_subspace_of(&mut r, &block.d_basis, dim));
        if let Some(cert) = check_general(&config).unwrap().certificate() {
            let w = build_escape_witness(cert, &config).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
            assert!(w.exact_check().is_ok());
            found += 1;
        }
    }
    assert!(found > 0);
}
