mod common;

use common::*;
use num_traits::Zero;
use powercone::boundary::four_zero_system;
use powercone::forms::BinaryForm;
use powercone::linalg::{det_exact, eigen_sym, kernel_exact, rank_exact, ExactMatrix, SymMatrix};
use powercone::scalar::{q, qi, Rational};
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = ExactMatrix> {
    prop::collection::vec(prop::collection::vec(rat(), cols), rows).prop_map(ExactMatrix::from_rows)
}

fn cofactor_det(m: &ExactMatrix) -> Rational {
    let n = m.rows();
    if n == 0 {
        return qi(1);
    }
    (0..n)
        .map(|j| {
            let sign = if j % 2 == 0 { qi(1) } else { qi(-1) };
            sign * m.get(0, j).clone() * cofactor_det(&m.minor_matrix(0, j))
        })
        .fold(Rational::zero(), |a, b| a + b)
}

#[test]
fn rank_examples() {
    assert_eq!(rank_exact(&ExactMatrix::identity(9)), 9);
    assert_eq!(rank_exact(&ExactMatrix::zeros(4, 5)), 0);
    // Degree-8 multiples m·(xy)³ and m·(x²−y²)³ for the three quadratic monomials m:
    // a regular sequence of two sextics has no syzygy in degree 8, so 2·3 = 6.
    let a = BinaryForm::<Rational>::x().mul(&BinaryForm::y()).pow(3);
    let b = BinaryForm::quadratic(qi(-1), qi(0), qi(1)).pow(3);
    let mut rows = Vec::new();
    for g in [&a, &b] {
        for i in 0..=2 {
            rows.push(g.mul(&BinaryForm::monomial(2, i, qi(1))).coeffs().to_vec());
        }
    }
    let m = ExactMatrix::from_rows(rows);
    assert_eq!(rank_exact(&m), 6);
    // Brute-force cross-check: no nontrivial combination vanishes, i.e. the kernel of Mᵀ is empty.
    assert!(kernel_exact(&m.transpose()).is_empty());
}

#[test]
fn determinant_examples() {
    assert_eq!(det_exact(&ExactMatrix::from_i64(&[&[1, 2], &[3, 4]])).unwrap(), qi(-2));
    assert_eq!(det_exact(&ExactMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 5]])).unwrap(), qi(0));
    let pts = [[qi(1), qi(2), qi(-1)], [q(1, 2), qi(0), qi(3)], [qi(-2), qi(1), qi(1)]];
    assert!(!four_zero_system(&pts).unwrap().det15.is_zero());
}

#[test]
fn eigen_examples() {
    let (vals, _) = eigen_sym(&SymMatrix::diag(&[3.0, 1.0, 2.0]), 1e-14).unwrap();
    assert_eq!(vals, vec![1.0, 2.0, 3.0]);
    let g = SymMatrix::from_rows(&[
        vec![2.0, 0.0, -1.0, 0.0],
        vec![0.0, 3.0, 0.0, 0.0],
        vec![-1.0, 0.0, 2.0, 0.0],
        vec![0.0, 0.0, 0.0, 3.0],
    ]);
    let (vals, _) = eigen_sym(&g, 1e-14).unwrap();
    for (v, want) in vals.iter().zip([1.0, 3.0, 3.0, 3.0]) {
        assert!((v - want).abs() < 1e-12);
    }
    let v = [1.0, -2.0, 2.0];
    let (vals, _) = eigen_sym(&SymMatrix::outer(&v), 1e-14).unwrap();
    assert!((vals[2] - 9.0).abs() < 1e-12 && vals[..2].iter().all(|x| x.abs() < 1e-12));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_of_transpose(m in (1usize..6, 1usize..6).prop_flat_map(|(r, c)| matrix(r, c))) {
        prop_assert_eq!(rank_exact(&m), rank_exact(&m.transpose()));
    }

    #[test]
    fn bareiss_matches_cofactors(m in (1usize..=4).prop_flat_map(|n| matrix(n, n))) {
        prop_assert_eq!(det_exact(&m).unwrap(), cofactor_det(&m));
    }

    #[test]
    fn kernel_is_exact(m in (1usize..5, 1usize..7).prop_flat_map(|(r, c)| matrix(r, c))) {
        let ker = kernel_exact(&m);
        prop_assert_eq!(ker.len() + rank_exact(&m), m.cols());
        for v in ker {
            prop_assert!(m.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn jacobi_reconstructs(a in (2usize..8).prop_flat_map(|n| (Just(n), prop::collection::vec(-5.0f64..5.0, n * n)))) {
        let (n, raw) = a;
        let m = SymMatrix::from_dense(n, &raw).add_scaled(&SymMatrix::from_dense(n, &transpose(n, &raw)), 1.0).scale(0.5);
        let tol = 1e-12;
        let (vals, vecs) = eigen_sym(&m, tol).unwrap();
        let norm = m.frobenius();
        let mut recon = SymMatrix::zeros(n);
        for (lam, v) in vals.iter().zip(&vecs) {
            recon = recon.add_scaled(&SymMatrix::outer(v), *lam);
        }
        prop_assert!(recon.add_scaled(&m, -1.0).frobenius() <= 10.0 * tol * norm.max(1.0));
        for i in 0..n {
            for j in 0..n {
                let d: f64 = vecs[i].iter().zip(&vecs[j]).map(|(a, b)| a * b).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((d - want).abs() <= 10.0 * tol);
            }
        }
    }
}

fn transpose(n: usize, a: &[f64]) -> Vec<f64> {
    (0..n * n).map(|k| a[(k % n) * n + k / n]).collect()
}
