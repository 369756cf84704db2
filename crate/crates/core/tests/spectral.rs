use nalgebra::DMatrix;
use proptest::prelude::*;
use udec_core::decodability::{build_q_moore, spectral_radius, DEFAULT_SPECTRAL_TOLERANCE};
use udec_core::sweep::{family, FamilyParams};
use udec_core::{check_necessary_condition, example, Codebook, Word};

fn dense_radius(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let dm = DMatrix::from_fn(n, n, |i, j| m[i][j]);
    dm.complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Dense eigenvalues are only accurate to about sqrt(eps) on defective
/// blocks, so the oracle splits the matrix into strongly connected blocks
/// first (by transitive closure) and solves each irreducible block densely.
fn block_radius(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut reach: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| m[i][j] > 0.0).collect())
        .collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                reach[i][j] |= reach[i][k] && reach[k][j];
            }
        }
    }
    let mut best = 0.0f64;
    for i in 0..n {
        let block: Vec<usize> = (0..n)
            .filter(|&j| j == i || (reach[i][j] && reach[j][i]))
            .collect();
        let sub: Vec<Vec<f64>> = block
            .iter()
            .map(|&a| block.iter().map(|&b| m[a][b]).collect())
            .collect();
        best = best.max(dense_radius(&sub));
    }
    best
}

fn matrix(max: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1..=max).prop_flat_map(|n| {
        proptest::collection::vec(
            proptest::collection::vec(prop_oneof![2 => Just(0.0), 3 => 0.0f64..1.5], n),
            n,
        )
    })
}

#[test]
fn example_pair_sits_on_the_boundary() {
    let q = build_q_moore(&example::source(), &example::alternative_code()).unwrap();
    let rho = q.spectral_radius(DEFAULT_SPECTRAL_TOLERANCE).unwrap();
    assert!((rho - 1.0).abs() <= 1e-8, "{rho}");
    assert!((dense_radius(&q.entries) - 1.0).abs() <= 1e-8);
    assert_eq!(example::alternative_code().kraft_sum(), 1.5);
}

#[test]
fn full_support_reduces_to_kraft() {
    for radix in [2u8, 3] {
        let params = FamilyParams {
            max_symbols: 6,
            max_len: 6,
            radix,
            full_support: true,
        };
        for case in family(&params, 100, 11 + radix as u64) {
            let rho = check_necessary_condition(&case.source, &case.code)
                .unwrap()
                .rho;
            let kraft = case.code.kraft_sum();
            assert!((rho - kraft).abs() <= 1e-9, "rho {rho} kraft {kraft}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn agrees_with_dense_eigenvalues(m in matrix(6)) {
        let rho = spectral_radius(&m, 1e-12).unwrap();
        let oracle = block_radius(&m);
        prop_assert!((rho - oracle).abs() <= 1e-8 * oracle.max(1.0), "rho {} oracle {}", rho, oracle);
    }

    #[test]
    fn monotone_in_entries(m in matrix(5), i in 0usize..5, j in 0usize..5, bump in 0.0f64..1.0) {
        let n = m.len();
        let mut bigger = m.clone();
        bigger[i % n][j % n] += bump;
        let a = spectral_radius(&m, 1e-12).unwrap();
        let b = spectral_radius(&bigger, 1e-12).unwrap();
        prop_assert!(b >= a - 1e-9, "{} then {}", a, b);
    }

    #[test]
    fn longer_words_never_raise_rho(seed in 0u64..1000, which in 0usize..4) {
        let case = family(&FamilyParams::SMALL, 1, seed).pop().unwrap();
        let mut words = case.code.words().to_vec();
        let k = which % words.len();
        let mut digits = words[k].digits().to_vec();
        digits.push(1);
        words[k] = Word::new(digits, 2).unwrap();
        let longer = Codebook::new(2, words).unwrap();
        let a = check_necessary_condition(&case.source, &case.code).unwrap().rho;
        let b = check_necessary_condition(&case.source, &longer).unwrap().rho;
        prop_assert!(b <= a + 1e-9);
    }
}
