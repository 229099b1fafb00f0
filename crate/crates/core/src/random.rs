//! Seeded random matrices.
//!
//! Every generator takes an explicit `&mut Rng`, so a trial is reproducible
//! from its seed alone.

use num_complex::Complex64;
#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;
use rand::{Rng as _, SeedableRng};
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{c, hermitian_part, identity, CMat};

pub type Rng = rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer of `master ⊕ index`, used to derive per-trial seeds.
pub fn mix_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn gaussian(rng: &mut Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Standard complex Gaussian (`E|z|² = 1`).
pub fn complex_gaussian(rng: &mut Rng) -> Complex64 {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    c(gaussian(rng) * s, gaussian(rng) * s)
}

pub fn uniform(rng: &mut Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

pub fn uniform_int(rng: &mut Rng, lo: usize, hi_inclusive: usize) -> usize {
    rng.random_range(lo..=hi_inclusive)
}

pub fn gaussian_matrix(rng: &mut Rng, rows: usize, cols: usize) -> CMat {
    // Column-major fill keeps the draw order fixed for a given shape.
    CMat::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-distributed unitary: QR of a Gaussian matrix with the phases of
/// `diag(R)` moved into `Q`.
pub fn haar_unitary(rng: &mut Rng, n: usize) -> CMat {
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    let qr = gaussian_matrix(rng, n, n).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        q.column_mut(j).iter_mut().for_each(|z| *z *= phase);
    }
    q
}

pub fn random_hermitian(rng: &mut Rng, n: usize, scale: f64) -> CMat {
    hermitian_part(&gaussian_matrix(rng, n, n)).map(|z| z * scale)
}

/// Hermitian positive definite with smallest eigenvalue at least `floor`.
pub fn random_positive_definite(rng: &mut Rng, n: usize, floor: f64) -> CMat {
    let g = gaussian_matrix(rng, n, n).map(|z| z * (1.0 / (n as f64).sqrt()));
    &g * g.adjoint() + identity(n).map(|z| z * floor)
}

/// Random invertible matrix with smallest singular value at least `floor`.
pub fn random_well_conditioned(rng: &mut Rng, n: usize, floor: f64) -> CMat {
    let u = haar_unitary(rng, n);
    let v = haar_unitary(rng, n);
    let mut d = CMat::zeros(n, n);
    for i in 0..n {
        d[(i, i)] = c(floor + uniform(rng, 0.0, 1.5), 0.0);
    }
    u * d * v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frobenius, relative_distance};

    #[test]
    fn same_seed_same_matrix() {
        let a = haar_unitary(&mut rng(42), 3);
        let b = haar_unitary(&mut rng(42), 3);
        assert_eq!(a, b);
    }

    #[test]
    fn haar_is_unitary() {
        let u = haar_unitary(&mut rng(1), 4);
        assert!(relative_distance(&(u.adjoint() * &u), &identity(4)) < 1e-13);
    }

    #[test]
    fn positive_definite_floor() {
        let p = random_positive_definite(&mut rng(2), 3, 0.25);
        let eig = crate::linalg::hermitian_eigen(&p);
        assert!(eig.values[0] >= 0.25 - 1e-12);
        assert!(frobenius(&(&p - p.adjoint())) < 1e-14);
    }

    #[test]
    fn mixed_seeds_differ() {
        assert_ne!(mix_seed(7, 0), mix_seed(7, 1));
        assert_ne!(mix_seed(7, 0), mix_seed(8, 0));
    }
}
