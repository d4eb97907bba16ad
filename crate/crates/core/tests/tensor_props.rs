mod common;

use catbell_core::tensor::{apply, embed, matrix_exp, partial_trace};
use catbell_core::{CMatrix, DensityMatrix, OperatorMatrix, SpaceLayout, C64};
use common::{complex_matrix, complex_vec, hermitian_part, ket};
use proptest::prelude::*;

fn random_unitary(n: usize, m: &CMatrix) -> OperatorMatrix {
    let h = OperatorMatrix::standalone(&[n], hermitian_part(m)).unwrap();
    matrix_exp(&h, C64::new(0.0, -1.0)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn matrix_exp_of_anti_hermitian_is_unitary(
        (n, m) in (2usize..=60).prop_flat_map(|n| (Just(n), complex_matrix(n)))
    ) {
        let u = random_unitary(n, &m);
        prop_assert!(u.unitarity_residual() < 1e-10, "n={} residual={}", n, u.unitarity_residual());
    }

    #[test]
    fn apply_preserves_norm(m in complex_matrix(6), amps in complex_vec(12)) {
        let layout = SpaceLayout::new([2, 6]).unwrap();
        let Some(psi) = ket(&layout, amps) else { return Ok(()) };
        let u = random_unitary(6, &m).on(&layout, &[1]).unwrap();
        let out = apply(&u, &psi).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn embedding_is_a_homomorphism(a in complex_matrix(3), b in complex_matrix(6)) {
        let layout = SpaceLayout::new([2, 3, 2]).unwrap();
        let a = OperatorMatrix::standalone(&[3], a).unwrap().on(&layout, &[1]).unwrap();
        let b = OperatorMatrix::standalone(&[3, 2], b).unwrap().on(&layout, &[1, 2]).unwrap();
        let ab = embed(&a.compose(&b).unwrap(), &layout).unwrap();
        let ea = embed(&a, &layout).unwrap();
        let eb = embed(&b, &layout).unwrap();
        let prod = ea.matrix().matmul(eb.matrix());
        prop_assert!(ab.matrix().max_abs_diff(&prod) < 1e-12);
    }

    #[test]
    fn partial_trace_preserves_trace(amps in prop::collection::vec(complex_vec(12), 3),
                                     w in prop::collection::vec(0.05f64..1.0, 3)) {
        let layout = SpaceLayout::new([2, 3, 2]).unwrap();
        let kets: Vec<_> = amps.into_iter().filter_map(|a| ket(&layout, a)).collect();
        prop_assume!(!kets.is_empty());
        let total: f64 = w[..kets.len()].iter().sum();
        let comps: Vec<_> = kets.iter().zip(&w).map(|(k, &wi)| (wi / total, k)).collect();
        let rho = DensityMatrix::from_mixture(&comps).unwrap();
        for keep in [&[0usize][..], &[1], &[2], &[0, 2], &[1, 2]] {
            let r = partial_trace(&rho, keep).unwrap();
            prop_assert!((r.trace().re - 1.0).abs() < 1e-12);
            prop_assert!(r.trace().im.abs() < 1e-12);
        }
        let same = partial_trace(&rho, &[0, 1, 2]).unwrap();
        prop_assert!(same.matrix().max_abs_diff(rho.matrix()) < 1e-15);
    }
}
