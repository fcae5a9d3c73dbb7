#![allow(dead_code)]

use num_complex::Complex64 as C64;
use paramstab::linalg::{eigenvalues, DenseMatrix, Lu};
use paramstab::models::{KktSystem, PendulumParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
    let data = (0..rows * cols)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), 0.0))
        .collect();
    DenseMatrix::from_row_major(rows, cols, data).unwrap()
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), 0.0))
        .collect()
}

/// `GGᵀ + nI`.
pub fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> DenseMatrix {
    let g = random_matrix(rng, n, n);
    g.matmul(&g.transpose())
        .unwrap()
        .add_scaled(&DenseMatrix::identity(n), C64::new(n as f64, 0.0))
        .unwrap()
}

/// Random `(A₀, B₀)` with SPD `B₀`.
pub fn random_pencil(rng: &mut ChaCha8Rng, n: usize) -> (DenseMatrix, DenseMatrix) {
    (random_matrix(rng, n, n), random_spd(rng, n))
}

/// Positive parameters around the documented set; always a damped, stable
/// base system.
pub fn random_pendulum(rng: &mut ChaCha8Rng) -> PendulumParams {
    PendulumParams {
        m_s: rng.gen_range(2.0..20.0),
        m_p: rng.gen_range(0.2..3.0),
        ell: rng.gen_range(1.0..10.0),
        k_s: rng.gen_range(500.0..8000.0),
        gamma_s: rng.gen_range(0.5..10.0),
        gamma_p: rng.gen_range(5.0..100.0),
        g0: 981.0,
    }
}

/// Constrained system with `n` coordinates and `m` constraints and a
/// negative definite stiffness.
pub fn random_kkt(rng: &mut ChaCha8Rng, n: usize, m: usize) -> KktSystem {
    let k0 = random_spd(rng, n)
        .scale(C64::new(-1.0, 0.0))
        .add_scaled(&random_matrix(rng, n, n), C64::new(0.3, 0.0))
        .unwrap();
    KktSystem {
        m0: random_spd(rng, n),
        k0,
        a: random_vector(rng, n),
        b: random_vector(rng, n),
        c: random_matrix(rng, m, n),
    }
}

/// Finite eigenvalues of the singular pencil `(A, B)`: with `θ` the
/// eigenvalues of `(A − sB)⁻¹B`, the finite ones are `s + 1/θ` for the
/// `count` largest `|θ|`.
pub fn finite_pencil_eigenvalues(
    a: &DenseMatrix,
    b: &DenseMatrix,
    shift: C64,
    count: usize,
) -> Vec<C64> {
    let n = a.rows();
    let lu = Lu::factor(&a.add_scaled(b, -shift).unwrap()).unwrap();
    let mut t = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let col = lu.solve(&b.column(j)).unwrap();
        for i in 0..n {
            t[(i, j)] = col[i];
        }
    }
    let mut theta = eigenvalues(&t).unwrap();
    theta.sort_by(|x, y| y.norm().partial_cmp(&x.norm()).unwrap());
    theta.truncate(count);
    theta.into_iter().map(|th| shift + 1.0 / th).collect()
}

/// Largest distance from an element of `a` to its nearest unused partner
/// in `b`, relative to `scale`.
pub fn multiset_distance(a: &[C64], b: &[C64], scale: f64) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (k, d) = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, y)| (k, (x - y).norm()))
            .min_by(|p, q| p.1.partial_cmp(&q.1).unwrap())
            .unwrap();
        used[k] = true;
        worst = worst.max(d / scale);
    }
    worst
}

pub fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}
