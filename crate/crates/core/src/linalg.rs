//! Dense complex linear algebra helpers on top of nalgebra.
//!
//! Everything integer-valued (ranks, kernel dimensions) goes through
//! [`numerical_rank`], which refuses to classify singular values that sit
//! inside the ambiguity band around the threshold.

use alloc::vec::Vec;
use core::cmp::Ordering;

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen, SVD};
pub use num_complex::Complex64;
#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const IMAG: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// `e^{iθ}`.
#[inline]
pub fn unit(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

pub fn scale(m: &CMat, s: f64) -> CMat {
    m.map(|z| z * s)
}

pub fn frobenius(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest singular value.
pub fn op_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .fold(0.0_f64, |acc, &s| acc.max(s))
}

fn one_norm(m: &CMat) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
///
/// The argument is scaled until its 1-norm is at most 1/4, where 18 Taylor
/// terms are accurate to well below machine precision.
pub fn expm(m: &CMat) -> CMat {
    let n = m.nrows();
    let norm = one_norm(m);
    let mut squarings = 0u32;
    if norm > 0.25 {
        squarings = (norm / 0.25).log2().ceil() as u32;
    }
    let a = scale(m, 2.0_f64.powi(-(squarings as i32)));
    let mut result = identity(n);
    let mut term = identity(n);
    for k in 1..=18 {
        term = &term * &a;
        term.scale_mut(1.0 / k as f64);
        result += &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

pub fn try_inverse(m: &CMat) -> Result<CMat> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    m.clone().try_inverse().ok_or(Error::Singular)
}

pub fn determinant(m: &CMat) -> Complex64 {
    m.clone().lu().determinant()
}

pub fn power(m: &CMat, k: usize) -> CMat {
    let mut result = identity(m.nrows());
    let mut base = m.clone();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            result = &result * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    result
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).map(|z| z * 0.5)
}

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

pub fn hermitian_eigen(m: &CMat) -> HermitianEigen {
    let h = hermitian_part(m);
    let n = h.nrows();
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(Ordering::Equal)
    });
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    HermitianEigen { values, vectors }
}

/// Spectral calculus `f(H)` for a Hermitian `H`.
pub fn hermitian_function(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let eig = hermitian_eigen(m);
    let mut scaled = eig.vectors.clone();
    for (j, &lambda) in eig.values.iter().enumerate() {
        let fl = f(lambda);
        scaled.column_mut(j).iter_mut().for_each(|z| *z *= fl);
    }
    scaled * eig.vectors.adjoint()
}

/// Eigenvalues of a general square matrix via the complex Schur form.
pub fn eigenvalues(m: &CMat) -> Vec<Complex64> {
    if m.is_empty() {
        return Vec::new();
    }
    let (_, t) = Schur::new(m.clone()).unpack();
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

/// Eigen-decomposition of a unitary matrix, `u = q diag(values) q*`.
///
/// A generic real combination of the Hermitian and skew parts shares the
/// eigenvectors of `u`, so a Hermitian solver does the work. Complex Schur
/// iteration stalls on clustered unit-circle spectra. Clusters that the
/// combination fails to separate are finished by a Schur pass on the
/// already nearly diagonal compression.
pub fn unitary_eigen(u: &CMat) -> (Vec<Complex64>, CMat) {
    const MIX: f64 = 0.577_215_664_901_532_9;
    let n = u.nrows();
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let ua = u.adjoint();
    let re = (u + &ua).map(|z| z * 0.5);
    let im = (u - &ua).map(|z| z * c(0.0, -0.5));
    let h = re + im.map(|z| z * MIX);
    let q = hermitian_eigen(&h).vectors;
    let d = q.adjoint() * u * &q;
    let off = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .map(|(i, j)| d[(i, j)].norm())
        .fold(0.0, f64::max);
    if off <= 1e-10 {
        return ((0..n).map(|i| d[(i, i)]).collect(), q);
    }
    let (z, t) = Schur::try_new(d.clone(), f64::EPSILON, 200 * n)
        .or_else(|| Schur::try_new(d, 1e-13, 2000 * n))
        .map(|s| s.unpack())
        .expect("Schur iteration on a nearly diagonal normal matrix");
    ((0..n).map(|i| t[(i, i)]).collect(), q * z)
}

/// Principal logarithm of a unitary (normal) matrix.
///
/// Eigenvalues within `1e-6` of `-1` are rotated onto the branch `+π` so that
/// the result stays skew-Hermitian and deterministic.
pub fn unitary_log(u: &CMat) -> CMat {
    let n = u.nrows();
    let (values, q) = unitary_eigen(u);
    let mut d = CMat::zeros(n, n);
    for (i, z) in values.iter().enumerate() {
        let mut theta = z.arg();
        if theta < -core::f64::consts::PI + 1e-6 {
            theta = core::f64::consts::PI;
        }
        d[(i, i)] = c(0.0, theta);
    }
    &q * d * q.adjoint()
}

/// Singular value decomposition with singular values sorted descending and
/// a full square right factor.
#[derive(Debug, Clone)]
pub struct Svd {
    pub values: Vec<f64>,
    /// Left singular vectors matching `values` (thin).
    pub u: CMat,
    /// Right singular vectors as columns; always `ncols × ncols`.
    pub v: CMat,
}

pub fn svd(m: &CMat) -> Svd {
    let (rows, cols) = m.shape();
    let padded = if rows < cols {
        let mut p = CMat::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let dec = SVD::new(padded, true, true);
    let u_raw = dec.u.expect("left singular vectors requested");
    let v_raw = dec.v_t.expect("right singular vectors requested").adjoint();
    let k = dec.singular_values.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        dec.singular_values[b]
            .partial_cmp(&dec.singular_values[a])
            .unwrap_or(Ordering::Equal)
    });
    let values: Vec<f64> = order.iter().map(|&i| dec.singular_values[i]).collect();
    let mut u = CMat::zeros(rows, k.min(rows));
    let mut v = CMat::zeros(cols, cols);
    for (dst, &src) in order.iter().enumerate() {
        if dst < u.ncols() {
            u.set_column(dst, &u_raw.column(src).rows(0, rows));
        }
        v.set_column(dst, &v_raw.column(src));
    }
    let values = values.into_iter().take(rows.min(cols)).collect();
    Svd { values, u, v }
}

/// Number of singular values above `tol.rank · σ_max`.
///
/// Singular values within a factor `tol.ambiguity` of the threshold make the
/// decision unreliable and are reported as [`Error::RankAmbiguous`].
pub fn numerical_rank(values: &[f64], tol: &Tolerances) -> Result<usize> {
    let smax = values.iter().cloned().fold(0.0_f64, f64::max);
    if smax == 0.0 {
        return Ok(0);
    }
    let threshold = tol.rank * smax;
    let mut rank = 0;
    for &s in values {
        if s > threshold * tol.ambiguity {
            rank += 1;
        } else if s >= threshold / tol.ambiguity {
            return Err(Error::RankAmbiguous {
                value: s,
                threshold,
            });
        }
    }
    Ok(rank)
}

pub fn rank(m: &CMat, tol: &Tolerances) -> Result<usize> {
    if m.is_empty() {
        return Ok(0);
    }
    numerical_rank(&svd(m).values, tol)
}

/// Orthonormal basis (columns) of the kernel of `m`.
pub fn null_space(m: &CMat, tol: &Tolerances) -> Result<CMat> {
    let cols = m.ncols();
    if m.nrows() == 0 {
        return Ok(identity(cols));
    }
    let dec = svd(m);
    let r = numerical_rank(&dec.values, tol)?;
    Ok(dec.v.columns(r, cols - r).into_owned())
}

/// Orthonormal basis (columns) of the range of `m`.
pub fn range_basis(m: &CMat, tol: &Tolerances) -> Result<CMat> {
    let dec = svd(m);
    let r = numerical_rank(&dec.values, tol)?;
    Ok(dec.u.columns(0, r).into_owned())
}

/// Orthonormalizes the columns of a full-rank frame (thin QR).
pub fn orthonormalize(m: &CMat) -> CMat {
    m.clone().qr().q()
}

pub fn hstack(a: &CMat, b: &CMat) -> CMat {
    assert_eq!(a.nrows(), b.nrows(), "hstack row mismatch");
    let mut out = CMat::zeros(a.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    out
}

pub fn vstack(a: &CMat, b: &CMat) -> CMat {
    assert_eq!(a.ncols(), b.ncols(), "vstack column mismatch");
    let mut out = CMat::zeros(a.nrows() + b.nrows(), a.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), 0), b.shape()).copy_from(b);
    out
}

pub fn block_diag(a: &CMat, b: &CMat) -> CMat {
    let mut out = CMat::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut(a.shape(), b.shape()).copy_from(b);
    out
}

/// Dimension of `span(a) ∩ span(b)` for full-rank frames.
pub fn intersection_dim(a: &CMat, b: &CMat, tol: &Tolerances) -> Result<usize> {
    let qa = orthonormalize(a);
    let qb = orthonormalize(b);
    let r = rank(&hstack(&qa, &qb), tol)?;
    Ok(qa.ncols() + qb.ncols() - r)
}

/// Whether two full-rank frames span the same subspace.
pub fn same_span(a: &CMat, b: &CMat, tol: &Tolerances) -> Result<bool> {
    if a.nrows() != b.nrows() {
        return Err(Error::SpaceMismatch);
    }
    let ra = rank(a, tol)?;
    let rb = rank(b, tol)?;
    if ra != rb {
        return Ok(false);
    }
    let joint = rank(&hstack(a, b), tol)?;
    Ok(joint == ra)
}

/// Relative distance `‖a − b‖_F / max(1, ‖b‖_F)`.
pub fn relative_distance(a: &CMat, b: &CMat) -> f64 {
    frobenius(&(a - b)) / frobenius(b).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rotation_generator(theta: f64) -> CMat {
        CMat::from_row_slice(2, 2, &[ZERO, c(-theta, 0.0), c(theta, 0.0), ZERO])
    }

    #[test]
    fn expm_of_rotation_generator() {
        let theta = 2.5;
        let e = expm(&rotation_generator(theta));
        let expected = CMat::from_row_slice(
            2,
            2,
            &[
                c(theta.cos(), 0.0),
                c(-theta.sin(), 0.0),
                c(theta.sin(), 0.0),
                c(theta.cos(), 0.0),
            ],
        );
        assert!(relative_distance(&e, &expected) < 1e-13);
    }

    #[test]
    fn expm_of_diagonal_with_large_norm() {
        let m = CMat::from_diagonal(&CVec::from_vec(alloc::vec![c(3.0, 7.0), c(-2.0, 0.5)]));
        let e = expm(&m);
        let z0 = c(3.0, 7.0).exp();
        assert!((e[(0, 0)] - z0).norm() / z0.norm() < 1e-12);
        assert!(e[(0, 1)].norm() < 1e-12);
    }

    #[test]
    fn power_matches_repeated_product() {
        let m = CMat::from_row_slice(2, 2, &[c(1.0, 0.2), c(0.3, 0.0), c(0.0, -0.1), c(0.9, 0.0)]);
        let mut direct = identity(2);
        for _ in 0..7 {
            direct = &direct * &m;
        }
        assert!(relative_distance(&power(&m, 7), &direct) < 1e-13);
    }

    #[test]
    fn rank_flags_ambiguous_values() {
        let tol = Tolerances::default();
        assert_eq!(numerical_rank(&[1.0, 0.5, 1e-14], &tol).unwrap(), 2);
        assert!(matches!(
            numerical_rank(&[1.0, 5e-9], &tol),
            Err(Error::RankAmbiguous { .. })
        ));
        assert_eq!(numerical_rank(&[0.0, 0.0], &tol).unwrap(), 0);
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let tol = Tolerances::default();
        let m = CMat::from_row_slice(1, 3, &[ONE, ONE, ZERO]);
        let k = null_space(&m, &tol).unwrap();
        assert_eq!(k.ncols(), 2);
        assert!(frobenius(&(&m * &k)) < 1e-14);
    }

    #[test]
    fn svd_sorted_and_reconstructs() {
        let m = CMat::from_row_slice(3, 2, &[c(1.0, 1.0), c(0.0, 2.0), c(3.0, 0.0), ONE, ZERO, c(0.5, -0.5)]);
        let d = svd(&m);
        assert!(d.values[0] >= d.values[1]);
        let sigma = CMat::from_diagonal(&CVec::from_iterator(2, d.values.iter().map(|&s| c(s, 0.0))));
        let rebuilt = &d.u * sigma * d.v.adjoint();
        assert!(relative_distance(&rebuilt, &m) < 1e-13);
    }

    #[test]
    fn unitary_log_round_trip() {
        let u = CMat::from_diagonal(&CVec::from_vec(alloc::vec![unit(0.4), unit(-2.9), unit(core::f64::consts::PI)]));
        let l = unitary_log(&u);
        assert!(relative_distance(&expm(&l), &u) < 1e-12);
        assert!(frobenius(&(&l + l.adjoint())) < 1e-12);
    }
}
