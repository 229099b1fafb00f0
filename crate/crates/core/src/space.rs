//! Complex symplectic spaces `(ℂ^{2n}, ω)` with `ω(x, y) = ⟨Jx, y⟩`.
//!
//! The inner product is conjugate-linear in its first argument:
//! `⟨x, y⟩ = x* y`. Hence `ω(x, y) = x* J* y = −x* J y`.

#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{
    block_diag, expm, frobenius, hermitian_eigen, hermitian_function, identity, op_norm, scale,
    svd, try_inverse, CMat, CVec, IMAG,
};
use crate::tolerance::Tolerances;

/// Slot convention of the Hermitian inner product, fixed crate-wide.
pub const INNER_PRODUCT_CONVENTION: &str = "conjugate-linear in the first argument";

/// A validated structure map `J` (`J* = −J`, invertible, even size).
#[derive(Debug, Clone)]
pub struct SymplecticSpace {
    j: CMat,
    j_inv: CMat,
    tol: Tolerances,
}

impl SymplecticSpace {
    pub fn new(j: CMat, tol: Tolerances) -> Result<Self> {
        let (rows, cols) = j.shape();
        if rows != cols {
            return Err(Error::DimensionMismatch {
                expected: rows,
                found: cols,
            });
        }
        if rows == 0 || rows % 2 == 1 {
            return Err(Error::OddDimension(rows));
        }
        let norm = frobenius(&j);
        if norm == 0.0 {
            return Err(Error::Singular);
        }
        let skew = frobenius(&(j.adjoint() + &j)) / norm;
        if skew > tol.structure {
            return Err(Error::NotSkewAdjoint(skew));
        }
        let values = svd(&j).values;
        let smin = values.iter().cloned().fold(f64::INFINITY, f64::min);
        if smin <= tol.structure * values[0] {
            return Err(Error::Singular);
        }
        let j_inv = try_inverse(&j)?;
        Ok(SymplecticSpace { j, j_inv, tol })
    }

    /// `J₀ = diag(iI_n, −iI_n)`.
    pub fn canonical(n: usize) -> Self {
        let mut j = CMat::zeros(2 * n, 2 * n);
        for i in 0..n {
            j[(i, i)] = IMAG;
            j[(n + i, n + i)] = -IMAG;
        }
        SymplecticSpace::new(j, Tolerances::default()).expect("canonical structure is valid")
    }

    /// The real form `[[0, −I], [I, 0]]`.
    pub fn standard(n: usize) -> Self {
        let mut j = CMat::zeros(2 * n, 2 * n);
        for i in 0..n {
            j[(i, n + i)] = -crate::linalg::ONE;
            j[(n + i, i)] = crate::linalg::ONE;
        }
        SymplecticSpace::new(j, Tolerances::default()).expect("standard structure is valid")
    }

    pub fn dim(&self) -> usize {
        self.j.nrows()
    }

    pub fn half_dim(&self) -> usize {
        self.j.nrows() / 2
    }

    pub fn j(&self) -> &CMat {
        &self.j
    }

    pub fn j_inv(&self) -> &CMat {
        &self.j_inv
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn with_tolerances(&self, tol: Tolerances) -> Self {
        SymplecticSpace {
            j: self.j.clone(),
            j_inv: self.j_inv.clone(),
            tol,
        }
    }

    /// The same space with the opposite form `−ω`.
    pub fn negated(&self) -> Self {
        SymplecticSpace {
            j: -&self.j,
            j_inv: -&self.j_inv,
            tol: self.tol,
        }
    }

    /// `H₁ × H₂` with structure `J₁ ⊕ J₂`.
    pub fn direct_sum(&self, other: &SymplecticSpace) -> Self {
        SymplecticSpace {
            j: block_diag(&self.j, &other.j),
            j_inv: block_diag(&self.j_inv, &other.j_inv),
            tol: self.tol,
        }
    }

    pub fn omega(&self, x: &CVec, y: &CVec) -> num_complex::Complex64 {
        (&self.j * x).dotc(y)
    }

    /// Gram matrix of `ω` between the columns of `a` and `b`.
    pub fn form(&self, a: &CMat, b: &CMat) -> CMat {
        -(a.adjoint() * &self.j * b)
    }

    pub fn is_normalized(&self) -> bool {
        self.normalization_residual() <= self.tol.structure
    }

    fn normalization_residual(&self) -> f64 {
        let n = self.dim();
        frobenius(&(&self.j * &self.j + identity(n))) / (n as f64).sqrt()
    }

    /// `‖M*JM − J‖ / ‖J‖`.
    pub fn symplectic_residual(&self, m: &CMat) -> f64 {
        frobenius(&(m.adjoint() * &self.j * m - &self.j)) / frobenius(&self.j)
    }

    pub fn is_symplectic(&self, m: &CMat) -> bool {
        self.check_symplectic(m).is_ok()
    }

    pub fn check_symplectic(&self, m: &CMat) -> Result<()> {
        if m.shape() != self.j.shape() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: m.nrows(),
            });
        }
        // Round-off in M*JM grows with ‖M‖², so the threshold does too.
        let r = self.symplectic_residual(m);
        let growth = (frobenius(m).powi(2) / self.dim() as f64).max(1.0);
        if r > self.tol.symplectic * growth {
            return Err(Error::NotSymplectic(r));
        }
        Ok(())
    }

    pub fn symplectic(&self, m: CMat) -> Result<SymplecticMatrix> {
        self.check_symplectic(&m)?;
        Ok(SymplecticMatrix(m))
    }

    /// `‖M*J + JM‖ / ‖J‖`.
    pub fn algebra_residual(&self, m: &CMat) -> f64 {
        frobenius(&(m.adjoint() * &self.j + &self.j * m)) / frobenius(&self.j)
    }

    pub fn algebra_element(&self, m: CMat) -> Result<SpAlgebraElement> {
        if m.shape() != self.j.shape() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: m.nrows(),
            });
        }
        let r = self.algebra_residual(&m);
        if r > self.tol.structure * frobenius(&m).max(1.0) {
            return Err(Error::NotInAlgebra(r));
        }
        Ok(SpAlgebraElement(m))
    }

    /// `J⁻¹H`, which lies in `sp` for every Hermitian `H`.
    pub fn generator(&self, hermitian: &CMat) -> CMat {
        &self.j_inv * hermitian
    }

    /// `−J⁻¹P`; for `P > 0` the path `e^{tΛ}` is positive.
    pub fn positive_generator(&self, positive: &CMat) -> CMat {
        -(&self.j_inv * positive)
    }

    /// `M⁻¹ = J⁻¹M*J`.
    pub fn symplectic_inverse(&self, m: &CMat) -> CMat {
        &self.j_inv * m.adjoint() * &self.j
    }

    /// `e^{sJ}`.
    pub fn exp_j(&self, s: f64) -> CMat {
        expm(&scale(&self.j, s))
    }

    /// Transfer to the normalized structure `J₁ = (−J²)^{−1/2}J`.
    pub fn normalize(&self) -> Result<Normalization> {
        let gram = -(&self.j * &self.j);
        let eig = hermitian_eigen(&gram);
        let top = eig.values.last().copied().unwrap_or(0.0);
        if eig.values[0] <= self.tol.structure * top {
            return Err(Error::Singular);
        }
        let inv_sqrt = hermitian_function(&gram, |x| 1.0 / x.sqrt());
        let quarter = hermitian_function(&gram, |x| x.sqrt().sqrt());
        let quarter_inv = hermitian_function(&gram, |x| 1.0 / x.sqrt().sqrt());
        let j1 = &inv_sqrt * &self.j;
        let j1 = (&j1 - j1.adjoint()).map(|z| z * 0.5);
        let normalized = NormalizedSpace::new(SymplecticSpace::new(j1, self.tol)?)?;
        Ok(Normalization {
            normalized,
            transfer: quarter,
            transfer_inv: quarter_inv,
        })
    }
}

/// A symplectic space with `J² = −I` together with orthonormal bases of
/// `H± = ker(J ∓ i)`.
#[derive(Debug, Clone)]
pub struct NormalizedSpace {
    space: SymplecticSpace,
    plus: CMat,
    minus: CMat,
}

impl NormalizedSpace {
    pub fn new(space: SymplecticSpace) -> Result<Self> {
        let r = space.normalization_residual();
        if r > space.tol.structure.max(1e-12) * 10.0 {
            return Err(Error::NotNormalized(r));
        }
        // −iJ is Hermitian with spectrum {±1}.
        let h = space.j.map(|z| z * -IMAG);
        let eig = hermitian_eigen(&h);
        let n_minus = eig.values.iter().filter(|&&v| v < 0.0).count();
        let dim = space.dim();
        let minus = eig.vectors.columns(0, n_minus).into_owned();
        let plus = eig.vectors.columns(n_minus, dim - n_minus).into_owned();
        Ok(NormalizedSpace { space, plus, minus })
    }

    pub fn canonical(n: usize) -> Self {
        NormalizedSpace::new(SymplecticSpace::canonical(n)).expect("canonical space is normalized")
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn plus(&self) -> &CMat {
        &self.plus
    }

    pub fn minus(&self) -> &CMat {
        &self.minus
    }

    pub fn n_plus(&self) -> usize {
        self.plus.ncols()
    }

    pub fn n_minus(&self) -> usize {
        self.minus.ncols()
    }

    pub fn require_lagrangians(&self) -> Result<()> {
        if self.n_plus() != self.n_minus() {
            return Err(Error::NoLagrangians {
                plus: self.n_plus(),
                minus: self.n_minus(),
            });
        }
        Ok(())
    }
}

/// Output of [`SymplecticSpace::normalize`]: the normalized space and the
/// symplectic transfer `T = (−J²)^{1/4} : (H, ω) → (H, ω₁)`.
#[derive(Debug, Clone)]
pub struct Normalization {
    pub normalized: NormalizedSpace,
    pub transfer: CMat,
    pub transfer_inv: CMat,
}

impl Normalization {
    /// `M ↦ T M T⁻¹`, carrying `Sp(H, ω)` onto `Sp(H, ω₁)`.
    pub fn conjugate(&self, m: &CMat) -> CMat {
        &self.transfer * m * &self.transfer_inv
    }

    pub fn conjugate_back(&self, m: &CMat) -> CMat {
        &self.transfer_inv * m * &self.transfer
    }

    pub fn frame(&self, f: &CMat) -> CMat {
        &self.transfer * f
    }

    pub fn frame_back(&self, f: &CMat) -> CMat {
        &self.transfer_inv * f
    }

    pub fn is_trivial(&self) -> bool {
        let n = self.transfer.nrows();
        frobenius(&(&self.transfer - identity(n))) < 1e-14 * (n as f64)
    }
}

/// A matrix that passed the symplectic check of its space.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix(CMat);

impl SymplecticMatrix {
    pub fn matrix(&self) -> &CMat {
        &self.0
    }

    pub fn into_matrix(self) -> CMat {
        self.0
    }
}

/// A matrix that passed the `sp` membership check of its space.
#[derive(Debug, Clone, PartialEq)]
pub struct SpAlgebraElement(CMat);

impl SpAlgebraElement {
    pub fn matrix(&self) -> &CMat {
        &self.0
    }

    pub fn into_matrix(self) -> CMat {
        self.0
    }

    /// `exp(sΛ)`, symplectic for every real `s`.
    pub fn exp(&self, s: f64) -> CMat {
        expm(&scale(&self.0, s))
    }
}

/// Largest distance between a matrix and its symplectic inverse formula.
pub fn inverse_formula_residual(space: &SymplecticSpace, m: &CMat) -> f64 {
    let inv = space.symplectic_inverse(m);
    op_norm(&(&inv * m - identity(space.dim())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, relative_distance, unit, ZERO};
    use crate::random::{gaussian_matrix, rng};

    #[test]
    fn canonical_space_splits_evenly() {
        let ns = NormalizedSpace::canonical(2);
        assert_eq!((ns.n_plus(), ns.n_minus()), (2, 2));
        assert!(ns.require_lagrangians().is_ok());
    }

    #[test]
    fn diag_i_i_has_no_lagrangians() {
        let j = CMat::from_diagonal(&CVec::from_vec(alloc::vec![IMAG, IMAG]));
        let ns = NormalizedSpace::new(SymplecticSpace::new(j, Tolerances::default()).unwrap())
            .unwrap();
        assert_eq!((ns.n_plus(), ns.n_minus()), (2, 0));
        assert!(matches!(
            ns.require_lagrangians(),
            Err(Error::NoLagrangians { plus: 2, minus: 0 })
        ));
    }

    #[test]
    fn rejects_bad_structure_maps() {
        let tol = Tolerances::default();
        assert!(matches!(
            SymplecticSpace::new(CMat::identity(2, 2), tol),
            Err(Error::NotSkewAdjoint(_))
        ));
        assert!(matches!(
            SymplecticSpace::new(CMat::zeros(3, 3), tol),
            Err(Error::OddDimension(3))
        ));
        let singular = CMat::from_diagonal(&CVec::from_vec(alloc::vec![IMAG, ZERO]));
        assert!(matches!(
            SymplecticSpace::new(singular, tol),
            Err(Error::Singular)
        ));
    }

    #[test]
    fn standard_real_form_is_normalized() {
        assert!(SymplecticSpace::standard(1).is_normalized());
    }

    #[test]
    fn normalization_of_scaled_canonical() {
        // −J² = 4I, so J₁ = J/2 and T = √2·I.
        let j = CMat::from_diagonal(&CVec::from_vec(alloc::vec![c(0.0, 2.0), c(0.0, -2.0)]));
        let space = SymplecticSpace::new(j, Tolerances::default()).unwrap();
        let norm = space.normalize().unwrap();
        let expected = SymplecticSpace::canonical(1);
        assert!(relative_distance(norm.normalized.space().j(), expected.j()) < 1e-14);
        assert!(relative_distance(&norm.transfer, &scale(&identity(2), 2f64.sqrt())) < 1e-14);
    }

    fn random_structure(seed: u64, n: usize) -> SymplecticSpace {
        let g = gaussian_matrix(&mut rng(seed), 2 * n, 2 * n);
        let j = (&g - g.adjoint()).map(|z| z * 0.5);
        SymplecticSpace::new(j, Tolerances::default()).unwrap()
    }

    #[test]
    fn normalization_transfer_is_symplectic() {
        let space = random_structure(7, 2);
        let norm = space.normalize().unwrap();
        let j1 = norm.normalized.space().j();
        assert!(frobenius(&(j1 + j1.adjoint())) < 1e-10);
        assert!(frobenius(&(j1 * j1 + identity(4))) < 1e-10);
        // ω₁(Tx, Ty) = ω(x, y): T* J₁ T = J.
        let pulled = norm.transfer.adjoint() * j1 * &norm.transfer;
        assert!(relative_distance(&pulled, space.j()) < 1e-10);
    }

    #[test]
    fn conjugation_needs_inverse_on_the_right() {
        let space = random_structure(8, 2);
        let norm = space.normalize().unwrap();
        let m = space.exp_j(0.3) * expm(&space.generator(&crate::random::random_hermitian(&mut rng(3), 4, 0.5)));
        assert!(space.symplectic_residual(&m) < 1e-10);
        let good = norm.conjugate(&m);
        assert!(norm.normalized.space().symplectic_residual(&good) < 1e-10);
        let naive = &norm.transfer * &m * &norm.transfer;
        assert!(norm.normalized.space().symplectic_residual(&naive) > 1e-3);
    }

    #[test]
    fn exp_j_is_symplectic_on_grid() {
        let space = SymplecticSpace::canonical(2);
        for k in 0..40 {
            let m = space.exp_j(0.1 * k as f64);
            assert!(space.is_symplectic(&m));
        }
    }

    #[test]
    fn unimodular_scalars_are_symplectic() {
        let space = random_structure(4, 2);
        for k in 0..8 {
            let z = unit(0.7 * k as f64);
            assert!(space.is_symplectic(&identity(4).map(|w| w * z)));
        }
    }

    #[test]
    fn generators_lie_in_algebra() {
        let space = random_structure(5, 3);
        let h = crate::random::random_hermitian(&mut rng(6), 6, 1.0);
        assert!(space.algebra_element(space.generator(&h)).is_ok());
        assert!(space.algebra_element(space.j().clone()).is_ok());
    }

    #[test]
    fn omega_matches_form() {
        let space = random_structure(9, 1);
        let x = gaussian_matrix(&mut rng(1), 2, 1);
        let y = gaussian_matrix(&mut rng(2), 2, 1);
        let direct = space.omega(&x.column(0).into_owned(), &y.column(0).into_owned());
        let via_form = space.form(&x, &y)[(0, 0)];
        assert!((direct - via_form).norm() < 1e-14);
    }
}
