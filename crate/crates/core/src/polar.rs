//! Polar decomposition `M = AU` of symplectic matrices on a normalized space
//! and the global coordinates `(S₁₂, U₁₁, U₂₂)` it induces.

#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::lagrangian::reference_lagrangian;
use crate::linalg::{frobenius, hermitian_function, hermitian_part, svd, CMat};
use crate::random::{gaussian_matrix, haar_unitary, Rng};
use crate::space::NormalizedSpace;

#[derive(Debug, Clone)]
pub struct PolarDecomposition {
    /// Positive definite symplectic factor, `A = exp(S)`.
    pub positive: CMat,
    /// Unitary symplectic factor, block diagonal over `H⁺ ⊕ H⁻`.
    pub unitary: CMat,
    /// Hermitian element of `sp` with `exp(S) = A`.
    pub log_positive: CMat,
    /// `S₁₂ = P*SQ : H⁻ → H⁺`.
    pub s12: CMat,
    /// `U₁₁ = P*UP ∈ U(H⁺)`.
    pub u11: CMat,
    /// `U₂₂ = Q*UQ ∈ U(H⁻)`.
    pub u22: CMat,
    /// `‖AU − M‖ / ‖M‖`.
    pub residual: f64,
}

pub fn polar_decompose(ns: &NormalizedSpace, m: &CMat) -> Result<PolarDecomposition> {
    ns.space().check_symplectic(m)?;
    // From the SVD M = WΣV*: U = WV*, A = WΣW*. Forming MM* instead would
    // square the condition number and cost unitarity of U.
    let d = svd(m);
    if d.values.last().map_or(true, |&s| s <= 0.0) {
        return Err(Error::Singular);
    }
    let w = &d.u;
    let on_w = |f: fn(f64) -> f64| {
        let scaled = CMat::from_fn(w.nrows(), w.ncols(), |i, j| w[(i, j)] * f(d.values[j]));
        hermitian_part(&(scaled * w.adjoint()))
    };
    let positive = on_w(|x| x);
    let log_positive = on_w(|x| x.ln());
    let unitary = w * d.v.adjoint();
    let p = ns.plus();
    let q = ns.minus();
    let s12 = p.adjoint() * &log_positive * q;
    let u11 = p.adjoint() * &unitary * p;
    let u22 = q.adjoint() * &unitary * q;
    let residual = frobenius(&(&positive * &unitary - m)) / frobenius(m);
    Ok(PolarDecomposition {
        positive,
        unitary,
        log_positive,
        s12,
        u11,
        u22,
        residual,
    })
}

/// `S = P S₁₂ Q* + Q S₁₂* P*`, Hermitian and in `sp`.
pub fn hermitian_generator(ns: &NormalizedSpace, s12: &CMat) -> CMat {
    let upper = ns.plus() * s12 * ns.minus().adjoint();
    &upper + upper.adjoint()
}

/// `U₁₁ ⊕ U₂₂` in the ambient coordinates.
pub fn unitary_from_blocks(ns: &NormalizedSpace, u11: &CMat, u22: &CMat) -> CMat {
    ns.plus() * u11 * ns.plus().adjoint() + ns.minus() * u22 * ns.minus().adjoint()
}

/// `exp(S(S₁₂)) · (U₁₁ ⊕ U₂₂)`.
pub fn from_coordinates(ns: &NormalizedSpace, s12: &CMat, u11: &CMat, u22: &CMat) -> CMat {
    let a = hermitian_function(&hermitian_generator(ns, s12), |x| x.exp());
    a * unitary_from_blocks(ns, u11, u22)
}

/// `exp(S)·(U₁₁ ⊕ U₂₂)` with Gaussian `S₁₂` scaled by `scale` and Haar
/// unitary blocks.
pub fn random_symplectic(ns: &NormalizedSpace, rng: &mut Rng, scale: f64) -> CMat {
    let s12 = gaussian_matrix(rng, ns.n_plus(), ns.n_minus()).map(|z| z * scale);
    let u11 = haar_unitary(rng, ns.n_plus());
    let u22 = haar_unitary(rng, ns.n_minus());
    from_coordinates(ns, &s12, &u11, &u22)
}

/// Image of the reference Lagrangian under a random symplectic matrix.
pub fn random_lagrangian(ns: &NormalizedSpace, rng: &mut Rng, scale: f64) -> Result<CMat> {
    let reference = reference_lagrangian(ns)?;
    Ok(random_symplectic(ns, rng, scale) * reference)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lagrangian::check_lagrangian;
    use crate::linalg::{c, identity, relative_distance};
    use crate::random::rng;

    #[test]
    fn identity_decomposes_trivially() {
        let ns = NormalizedSpace::canonical(2);
        let d = polar_decompose(&ns, &identity(4)).unwrap();
        assert!(relative_distance(&d.positive, &identity(4)) < 1e-14);
        assert!(relative_distance(&d.unitary, &identity(4)) < 1e-14);
        assert!(frobenius(&d.log_positive) < 1e-14);
    }

    #[test]
    fn cosh_sinh_example() {
        let ns = NormalizedSpace::canonical(1);
        let (ch, sh) = (1f64.cosh(), 1f64.sinh());
        let m = CMat::from_row_slice(2, 2, &[c(ch, 0.0), c(sh, 0.0), c(sh, 0.0), c(ch, 0.0)]);
        let d = polar_decompose(&ns, &m).unwrap();
        assert!(relative_distance(&d.positive, &m) < 1e-12);
        assert!(relative_distance(&d.unitary, &identity(2)) < 1e-12);
        let s = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(relative_distance(&d.log_positive, &s) < 1e-12);
        assert!(ns.space().algebra_residual(&s) < 1e-15);
    }

    #[test]
    fn unitary_symplectic_is_its_own_factor() {
        let ns = NormalizedSpace::canonical(2);
        let mut r = rng(3);
        let u = random_symplectic(&ns, &mut r, 0.0);
        assert!(relative_distance(&(u.adjoint() * &u), &identity(4)) < 1e-12);
        let d = polar_decompose(&ns, &u).unwrap();
        assert!(relative_distance(&d.unitary, &u) < 1e-12);
        assert!(relative_distance(&d.positive, &identity(4)) < 1e-12);
    }

    #[test]
    fn random_symplectic_is_deterministic_and_symplectic() {
        let ns = NormalizedSpace::canonical(3);
        let a = random_symplectic(&ns, &mut rng(21), 0.7);
        let b = random_symplectic(&ns, &mut rng(21), 0.7);
        assert_eq!(a, b);
        assert!(ns.space().symplectic_residual(&a) < 1e-10);
    }

    #[test]
    fn decomposition_structure() {
        let ns = NormalizedSpace::canonical(3);
        let m = random_symplectic(&ns, &mut rng(22), 0.8);
        let d = polar_decompose(&ns, &m).unwrap();
        assert!(d.residual < 1e-12);
        let space = ns.space();
        assert!(space.symplectic_residual(&d.positive) < 1e-10);
        assert!(space.symplectic_residual(&d.unitary) < 1e-10);
        assert!(space.algebra_residual(&d.log_positive) < 1e-10);
        // Diagonal blocks of S and off-diagonal blocks of U vanish.
        let p = ns.plus();
        let q = ns.minus();
        assert!(frobenius(&(p.adjoint() * &d.log_positive * p)) < 1e-10);
        assert!(frobenius(&(p.adjoint() * &d.unitary * q)) < 1e-10);
        let rebuilt = from_coordinates(&ns, &d.s12, &d.u11, &d.u22);
        assert!(relative_distance(&rebuilt, &m) < 1e-10);
    }

    #[test]
    fn random_lagrangians_are_lagrangian() {
        let ns = NormalizedSpace::canonical(2);
        let f = random_lagrangian(&ns, &mut rng(4), 0.5).unwrap();
        assert!(check_lagrangian(ns.space(), &f).is_ok());
    }
}
