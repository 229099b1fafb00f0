//! Seeded instance generators for the verifiers.
//!
//! Generic draws avoid every special configuration with probability one, so
//! each family also has a structured variant that places eigenvalues and
//! intersections exactly where the identities have something to say.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

use crate::error::Result;
use crate::iteration::brake::BrakeSymmetry;
use crate::linalg::{block_diag, c, identity, try_inverse, unit, CMat};
use crate::path::{Domain, SymplecticPath};
use crate::polar::{random_symplectic, unitary_from_blocks};
use crate::random::{
    gaussian, haar_unitary, random_hermitian, random_well_conditioned, uniform, uniform_int, Rng,
};
use crate::space::{NormalizedSpace, SymplecticSpace};
use crate::tolerance::Tolerances;

/// Random symplectic matrix of any valid space, drawn on the normalized copy
/// and carried back.
pub fn random_symplectic_in(space: &SymplecticSpace, rng: &mut Rng, scale: f64) -> Result<CMat> {
    let norm = space.normalize()?;
    let m = random_symplectic(&norm.normalized, rng, scale);
    Ok(norm.conjugate_back(&m))
}

/// `J⁻¹H` for a random Hermitian `H`, drawn on the normalized copy and carried
/// back so that badly scaled `J` does not inflate the generator.
pub fn random_generator(space: &SymplecticSpace, rng: &mut Rng, scale: f64) -> Result<CMat> {
    let norm = space.normalize()?;
    let g = norm.normalized.space().generator(&random_hermitian(rng, space.dim(), scale));
    Ok(norm.conjugate_back(&g))
}

/// `M₀ · exp(tΛ₁) · exp(tΛ₂)` on `domain`; `M₀ = I` when `from_identity`.
pub fn random_path(
    space: &SymplecticSpace,
    rng: &mut Rng,
    domain: Domain,
    scale: f64,
    from_identity: bool,
) -> Result<SymplecticPath> {
    let g1 = random_generator(space, rng, scale)?;
    let g2 = random_generator(space, rng, 0.5 * scale)?;
    let shift = -domain.start;
    let e1 = SymplecticPath::exp_affine(g1, 1.0, shift, domain);
    let e2 = SymplecticPath::exp_affine(g2, 1.0, shift, domain);
    let body = SymplecticPath::product(e1, e2)?;
    if from_identity {
        Ok(body)
    } else {
        let m0 = random_symplectic_in(space, rng, 0.5)?;
        SymplecticPath::left_mul(m0, body)
    }
}

/// Symplectic with prescribed unit-circle spectrum: `Q (e^{iθ⁺} ⊕ e^{iθ⁻}) Q⁻¹`.
pub fn elliptic_symplectic(ns: &NormalizedSpace, rng: &mut Rng, plus: &[f64], minus: &[f64], spread: f64) -> CMat {
    let d_plus = CMat::from_fn(plus.len(), plus.len(), |i, j| if i == j { unit(plus[i]) } else { c(0.0, 0.0) });
    let d_minus = CMat::from_fn(minus.len(), minus.len(), |i, j| if i == j { unit(minus[i]) } else { c(0.0, 0.0) });
    let d = unitary_from_blocks(ns, &d_plus, &d_minus);
    let q = random_symplectic(ns, rng, spread);
    let q_inv = ns.space().symplectic_inverse(&q);
    q * d * q_inv
}

/// `t ↦ Q exp(tD) Q⁻¹` on `[0, 1]`, where `exp(D)` has eigenvalues `e^{iθ}`
/// at the given angles.
pub fn elliptic_path(
    ns: &NormalizedSpace,
    rng: &mut Rng,
    plus: &[f64],
    minus: &[f64],
    spread: f64,
) -> Result<SymplecticPath> {
    let n = plus.len();
    let mut diag = Vec::with_capacity(2 * n);
    diag.extend(plus.iter().map(|&a| c(0.0, a)));
    diag.extend(minus.iter().map(|&a| c(0.0, a)));
    let d_plus = CMat::from_fn(n, n, |i, j| if i == j { diag[i] } else { c(0.0, 0.0) });
    let d_minus = CMat::from_fn(n, n, |i, j| if i == j { diag[n + i] } else { c(0.0, 0.0) });
    let gen = unitary_from_blocks(ns, &d_plus, &d_minus);
    let q = random_symplectic(ns, rng, spread);
    let q_inv = ns.space().symplectic_inverse(&q);
    let path = SymplecticPath::exp(gen, Domain::unit());
    SymplecticPath::right_mul(SymplecticPath::left_mul(q, path)?, q_inv)
}

/// Angle menu mixing roots of unity of order up to `k` with generic angles.
pub fn special_angles(rng: &mut Rng, count: usize, k: usize) -> Vec<f64> {
    (0..count)
        .map(|_| match uniform_int(rng, 0, 3) {
            0 => uniform(rng, -PI, PI),
            1 => TAU * uniform_int(rng, 0, k.max(1) - 1) as f64 / k.max(1) as f64,
            2 => PI * uniform_int(rng, 1, k.max(1)) as f64 / k.max(1) as f64,
            _ => TAU * uniform_int(rng, 1, 2 * k.max(1)) as f64 / (2 * k.max(1) + 1) as f64,
        })
        .collect()
}

/// Brake data in normal form with `σ_min(K) ≥ 0.1`; with `twist`, also
/// `S = NQNQ⁻¹` for a random symplectic `Q`.
pub fn random_brake(rng: &mut Rng, n: usize, twist: bool, tol: Tolerances) -> Result<BrakeSymmetry> {
    let k = random_well_conditioned(rng, n, 0.1);
    let brake = BrakeSymmetry::from_normal_form(k, tol)?;
    if twist {
        let q = random_symplectic_in(brake.space(), rng, 0.5)?;
        let s = brake.n() * &q * brake.n() * try_inverse(&q)?;
        brake.with_twist(s)
    } else {
        Ok(brake)
    }
}

/// Darboux brake model: `K = I`, so each coordinate pair `(i, n+i)` is a copy
/// of the standard plane with `N = diag(−1, 1)`.
pub fn darboux_brake(n: usize, tol: Tolerances) -> Result<BrakeSymmetry> {
    BrakeSymmetry::from_normal_form(identity(n), tol)
}

/// `diag(g, g^{-*})`: commutes with `N` and preserves `J` of the Darboux model.
pub fn darboux_gauge(rng: &mut Rng, n: usize) -> Result<(CMat, CMat)> {
    let g = random_well_conditioned(rng, n, 0.3);
    let g_inv = try_inverse(&g)?;
    let big = block_diag(&g, &g_inv.adjoint());
    let big_inv = block_diag(&g_inv, &g.adjoint());
    Ok((big, big_inv))
}

/// Per-pair generator of the Darboux model: `φ·J₂` (rotation), hyperbolic,
/// shear or zero, chosen from a menu whose rotation angles are multiples of
/// `π/(2k)` so that brake products land on the special roots.
pub fn darboux_generator(rng: &mut Rng, n: usize, k: usize) -> CMat {
    let mut g = CMat::zeros(2 * n, 2 * n);
    let k = k.max(1);
    for i in 0..n {
        let (lo, hi) = (i, n + i);
        match uniform_int(rng, 0, 5) {
            0 | 1 => {
                let phi = PI * uniform_int(rng, 0, 2 * k) as f64 / (2 * k) as f64;
                g[(lo, hi)] = c(-phi, 0.0);
                g[(hi, lo)] = c(phi, 0.0);
            }
            2 => {
                let phi = PI * uniform_int(rng, 1, 2 * k) as f64 / (2 * k + 1) as f64;
                g[(lo, hi)] = c(-phi, 0.0);
                g[(hi, lo)] = c(phi, 0.0);
            }
            3 => {
                let s = 0.5 * gaussian(rng);
                g[(lo, hi)] = c(s, 0.0);
                g[(hi, lo)] = c(s, 0.0);
            }
            4 => {
                g[(hi, lo)] = c(gaussian(rng), 0.0);
            }
            _ => {
                let phi = uniform(rng, -PI, PI);
                g[(lo, hi)] = c(-phi, 0.0);
                g[(hi, lo)] = c(phi, 0.0);
            }
        }
    }
    g
}

/// `G exp(tΛ) G⁻¹` on `[0, 1]` for a Darboux generator `Λ` and gauge `G`.
pub fn darboux_path(rng: &mut Rng, n: usize, k: usize) -> Result<SymplecticPath> {
    let gen = darboux_generator(rng, n, k);
    let (g, g_inv) = darboux_gauge(rng, n)?;
    let path = SymplecticPath::exp(gen, Domain::unit());
    SymplecticPath::right_mul(SymplecticPath::left_mul(g, path)?, g_inv)
}

/// A random phase `e^{iβ}` times a Haar unitary block, for tests that need
/// unitary symplectic matrices in the normalized picture.
pub fn random_unitary_symplectic(ns: &NormalizedSpace, rng: &mut Rng) -> CMat {
    let u = haar_unitary(rng, ns.n_plus());
    let v = haar_unitary(rng, ns.n_minus());
    unitary_from_blocks(ns, &u, &v)
}
