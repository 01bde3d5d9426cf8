#![allow(dead_code)]

use entforge::linalg::CMatrix;
use entforge::qstate::{DensityMatrix, StateVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn gaussian(rng: &mut impl Rng) -> Complex64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-like random pure state from normalized complex Gaussians.
pub fn random_state(n: usize, rng: &mut impl Rng) -> StateVector {
    let mut a: Vec<Complex64> = (0..1 << n).map(|_| gaussian(rng)).collect();
    let norm = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    a.iter_mut().for_each(|x| *x /= norm);
    StateVector::from_amplitudes(a).unwrap()
}

/// `G G^dagger / Tr` for a square Gaussian `G` with `rank` columns.
pub fn random_density(n: usize, rank: usize, rng: &mut impl Rng) -> DensityMatrix {
    let d = 1 << n;
    let g: Vec<Complex64> = (0..d * rank).map(|_| gaussian(rng)).collect();
    let mut m = CMatrix::zeros(d);
    for i in 0..d {
        for j in 0..d {
            let mut s = c(0.0, 0.0);
            for k in 0..rank {
                s += g[i * rank + k] * g[j * rank + k].conj();
            }
            m.set(i, j, s);
        }
    }
    let tr = m.trace().re;
    DensityMatrix::from_matrix(m.scale(c(1.0 / tr, 0.0))).unwrap()
}

pub fn random_product_state(n: usize, rng: &mut impl Rng) -> StateVector {
    let mut amps = vec![c(1.0, 0.0)];
    for _ in 0..n {
        let q = random_state(1, rng);
        let q = q.amplitudes();
        amps = amps.iter().flat_map(|a| [a * q[0], a * q[1]]).collect();
    }
    StateVector::from_amplitudes(amps).unwrap()
}

/// `exp(i phi) RZ(a) RY(b) RZ(g)`.
pub fn random_unitary_1q(rng: &mut impl Rng) -> CMatrix {
    let [phi, a, b, g]: [f64; 4] = std::array::from_fn(|_| rng.random_range(-3.2..3.2));
    let (cb, sb) = ((b / 2.0).cos(), (b / 2.0).sin());
    let e = |t: f64| Complex64::from_polar(1.0, t);
    CMatrix::from_rows([
        [e(phi - (a + g) / 2.0) * cb, -e(phi - (a - g) / 2.0) * sb],
        [e(phi + (a - g) / 2.0) * sb, e(phi + (a + g) / 2.0) * cb],
    ])
}

pub fn ghz(n: usize) -> StateVector {
    let mut a = vec![c(0.0, 0.0); 1 << n];
    let s = std::f64::consts::FRAC_1_SQRT_2;
    a[0] = c(s, 0.0);
    a[(1 << n) - 1] = c(s, 0.0);
    StateVector::from_amplitudes(a).unwrap()
}

pub fn w3() -> StateVector {
    let s = 1.0 / 3f64.sqrt();
    let z = c(0.0, 0.0);
    StateVector::from_amplitudes(vec![z, c(s, 0.0), c(s, 0.0), z, c(s, 0.0), z, z, z]).unwrap()
}

/// Brute-force marginal of wire `w`: sum over every other index.
pub fn marginal_oracle(psi: &StateVector, w: usize) -> [[Complex64; 2]; 2] {
    let n = psi.num_qubits();
    let a = psi.amplitudes();
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for i in 0..1usize << n {
        for j in 0..1usize << n {
            let rest_i = i & !(1 << (n - 1 - w));
            let rest_j = j & !(1 << (n - 1 - w));
            if rest_i == rest_j {
                let bi = (i >> (n - 1 - w)) & 1;
                let bj = (j >> (n - 1 - w)) & 1;
                out[bi][bj] += a[i] * a[j].conj();
            }
        }
    }
    out
}

/// Permutes qubits: output qubit `perm[q]` carries input qubit `q`.
pub fn permute_qubits(psi: &StateVector, perm: &[usize]) -> StateVector {
    let n = psi.num_qubits();
    let mut out = vec![c(0.0, 0.0); 1 << n];
    for (i, amp) in psi.amplitudes().iter().enumerate() {
        let mut j = 0;
        for q in 0..n {
            let bit = (i >> (n - 1 - q)) & 1;
            j |= bit << (n - 1 - perm[q]);
        }
        out[j] = *amp;
    }
    StateVector::from_amplitudes(out).unwrap()
}
