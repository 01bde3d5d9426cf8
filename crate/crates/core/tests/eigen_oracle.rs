mod common;

use common::*;
use entforge::linalg::{hermitian_eigenvalues, CMatrix};
use entforge::qstate::{trace_norm, Bipartition};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn to_nalgebra(m: &CMatrix) -> DMatrix<Complex64> {
    let d = m.dim();
    DMatrix::from_fn(d, d, |i, j| m.get(i, j))
}

fn random_hermitian(d: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let mut m = CMatrix::zeros(d);
    for i in 0..d {
        for j in i..d {
            let z = gaussian(rng);
            if i == j {
                m.set(i, i, c(z.re, 0.0));
            } else {
                m.set(i, j, z);
                m.set(j, i, z.conj());
            }
        }
    }
    m
}

#[test]
fn eigenvalues_match_nalgebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for d in [1, 2, 3, 5, 8, 16, 33, 64] {
        for _ in 0..5 {
            let h = random_hermitian(d, &mut rng);
            let ours = hermitian_eigenvalues(&h);
            let mut theirs: Vec<f64> = to_nalgebra(&h).symmetric_eigenvalues().iter().copied().collect();
            theirs.sort_by(f64::total_cmp);
            let scale = theirs.iter().fold(1.0f64, |a, x| a.max(x.abs()));
            for (a, b) in ours.iter().zip(&theirs) {
                assert!((a - b).abs() < 1e-10 * scale, "d={d}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn degenerate_spectra() {
    let h = CMatrix::from_real_diagonal(&[2.0, 2.0, -1.0, 2.0]);
    assert_eq!(hermitian_eigenvalues(&h), vec![-1.0, 2.0, 2.0, 2.0]);
    let ev = hermitian_eigenvalues(&CMatrix::zeros(6));
    assert!(ev.iter().all(|&x| x == 0.0));
}

#[test]
fn trace_norm_of_partial_transpose_matches_singular_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let rho = random_density(3, 2, &mut rng);
        let pt = rho.partial_transpose(&Bipartition::new(vec![1]).unwrap()).unwrap();
        let ours = trace_norm(&pt).unwrap();
        let theirs: f64 = to_nalgebra(&pt).singular_values().iter().sum();
        assert!((ours - theirs).abs() < 1e-10, "{ours} vs {theirs}");
    }
}
