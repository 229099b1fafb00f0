//! Lagrangian frames, annihilators and the unitary (Souriau) chart.
//!
//! A frame is a `2n × n` matrix whose columns span the subspace. Everything
//! here depends only on the span, never on the particular frame.

#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{
    block_diag, frobenius, hstack, identity, null_space, orthonormalize, rank, same_span, svd,
    try_inverse, vstack, CMat,
};
use crate::space::{NormalizedSpace, SymplecticSpace};

/// A full-rank frame whose span is Lagrangian.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianFrame(CMat);

impl LagrangianFrame {
    pub fn new(space: &SymplecticSpace, frame: CMat) -> Result<Self> {
        check_lagrangian(space, &frame)?;
        Ok(LagrangianFrame(frame))
    }

    pub fn matrix(&self) -> &CMat {
        &self.0
    }

    pub fn into_matrix(self) -> CMat {
        self.0
    }
}

/// `‖F*JF‖ / (‖J‖ ‖F‖²)`, zero exactly for isotropic spans.
pub fn isotropy_residual(space: &SymplecticSpace, frame: &CMat) -> f64 {
    let scale = frobenius(space.j()) * frobenius(frame).powi(2);
    if scale == 0.0 {
        return 0.0;
    }
    frobenius(&space.form(frame, frame)) / scale
}

pub fn check_lagrangian(space: &SymplecticSpace, frame: &CMat) -> Result<()> {
    if frame.nrows() != space.dim() {
        return Err(Error::SpaceMismatch);
    }
    if frame.ncols() != space.half_dim() {
        return Err(Error::NotLagrangian(f64::INFINITY));
    }
    let r = rank(frame, space.tolerances())?;
    if r != frame.ncols() {
        return Err(Error::RankDeficient);
    }
    let iso = isotropy_residual(space, frame);
    if iso > space.tolerances().lagrangian {
        return Err(Error::NotLagrangian(iso));
    }
    Ok(())
}

/// Frame of `λ^ω = {y : ω(x, y) = 0 ∀x ∈ λ}`, the kernel of `y ↦ F*J y`.
pub fn annihilator(space: &SymplecticSpace, frame: &CMat) -> Result<CMat> {
    if frame.nrows() != space.dim() {
        return Err(Error::SpaceMismatch);
    }
    if frame.ncols() == 0 {
        return Ok(identity(space.dim()));
    }
    let r = rank(frame, space.tolerances())?;
    if r != frame.ncols() {
        return Err(Error::RankDeficient);
    }
    let q = orthonormalize(frame);
    null_space(&(q.adjoint() * space.j()), space.tolerances())
}

/// Whether the span equals its annihilator.
pub fn is_lagrangian(space: &SymplecticSpace, frame: &CMat) -> Result<bool> {
    let ann = annihilator(space, frame)?;
    if ann.ncols() != frame.ncols() {
        return Ok(false);
    }
    same_span(frame, &ann, space.tolerances())
}

/// The Fredholm-pair data `dim(λ∩μ)`, `dim V/(λ+μ)` and their difference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairIndex {
    pub dim_cap: usize,
    pub codim_sum: usize,
    pub index: i64,
}

pub fn pair_index(space: &SymplecticSpace, lambda: &CMat, mu: &CMat) -> Result<PairIndex> {
    if lambda.nrows() != mu.nrows() || lambda.nrows() != space.dim() {
        return Err(Error::SpaceMismatch);
    }
    check_lagrangian(space, lambda)?;
    check_lagrangian(space, mu)?;
    let tol = space.tolerances();
    let ql = orthonormalize(lambda);
    let qm = orthonormalize(mu);
    let sum_rank = rank(&hstack(&ql, &qm), tol)?;
    let dim_cap = null_space(&hstack(&ql, &(-&qm)), tol)?.ncols();
    let codim_sum = space.dim() - sum_rank;
    let index = dim_cap as i64 - codim_sum as i64;
    if index != 0 {
        return Err(Error::IdentityViolated(alloc::format!(
            "Lagrangian pair has Fredholm index {index}"
        )));
    }
    Ok(PairIndex {
        dim_cap,
        codim_sum,
        index,
    })
}

/// The unitary `U : H⁺ → H⁻` with `λ = {x + Ux : x ∈ H⁺}`, written in the
/// orthonormal bases of `H±`.
pub fn souriau_unitary(ns: &NormalizedSpace, frame: &CMat) -> Result<CMat> {
    let p = ns.plus().adjoint() * frame;
    let q = ns.minus().adjoint() * frame;
    let p_inv = try_inverse(&p)?;
    Ok(q * p_inv)
}

/// The Lagrangian with Souriau unitary `U`.
pub fn frame_from_unitary(ns: &NormalizedSpace, u: &CMat) -> CMat {
    ns.plus() + ns.minus() * u
}

/// Lagrangian spanned by `p_i + q_i` over the orthonormal bases of `H±`.
pub fn reference_lagrangian(ns: &NormalizedSpace) -> Result<CMat> {
    ns.require_lagrangians()?;
    Ok(ns.plus() + ns.minus())
}

/// `Gr(M) = {(x, Mx)}` as the frame `[I; M]`.
pub fn graph_frame(m: &CMat) -> CMat {
    vstack(&identity(m.ncols()), m)
}

/// `λ₁ × λ₂` as a block-diagonal frame.
pub fn product_frame(first: &CMat, second: &CMat) -> CMat {
    block_diag(first, second)
}

/// Frame of `ker(N − zI)`.
pub fn eigenspace(n: &CMat, z: num_complex::Complex64, space: &SymplecticSpace) -> Result<CMat> {
    let shifted = n - identity(n.nrows()).map(|w| w * z);
    null_space(&shifted, space.tolerances())
}

/// Smallest singular value of the stacked orthonormal frames; vanishes
/// exactly when the spans intersect.
pub fn intersection_gap(lambda: &CMat, mu: &CMat) -> f64 {
    let stacked = hstack(&orthonormalize(lambda), &orthonormalize(mu));
    svd(&stacked).values.last().copied().unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, relative_distance, CVec, ONE, ZERO};
    use crate::polar::random_lagrangian;
    use crate::random::{random_well_conditioned, rng};

    fn col(entries: &[num_complex::Complex64]) -> CMat {
        CMat::from_column_slice(entries.len(), 1, entries)
    }

    #[test]
    fn annihilator_of_e1_is_e2() {
        let space = SymplecticSpace::canonical(1);
        let ann = annihilator(&space, &col(&[ONE, ZERO])).unwrap();
        assert!(same_span(&ann, &col(&[ZERO, ONE]), space.tolerances()).unwrap());
    }

    #[test]
    fn diagonal_line_is_lagrangian() {
        let space = SymplecticSpace::canonical(1);
        let l0 = col(&[ONE, ONE]);
        let ann = annihilator(&space, &l0).unwrap();
        assert!(same_span(&ann, &l0, space.tolerances()).unwrap());
        assert!(is_lagrangian(&space, &l0).unwrap());
        assert!(!is_lagrangian(&space, &col(&[ONE, ZERO])).unwrap());
    }

    #[test]
    fn full_space_has_trivial_annihilator() {
        let space = SymplecticSpace::canonical(2);
        assert_eq!(annihilator(&space, &identity(4)).unwrap().ncols(), 0);
    }

    #[test]
    fn pair_index_fixtures() {
        let space = SymplecticSpace::canonical(1);
        let l0 = col(&[ONE, ONE]);
        let l1 = col(&[ONE, -ONE]);
        let same = pair_index(&space, &l0, &l0).unwrap();
        assert_eq!((same.dim_cap, same.codim_sum, same.index), (1, 1, 0));
        let transverse = pair_index(&space, &l0, &l1).unwrap();
        assert_eq!(
            (transverse.dim_cap, transverse.codim_sum, transverse.index),
            (0, 0, 0)
        );
    }

    #[test]
    fn random_pair_in_c8_has_index_zero() {
        let ns = NormalizedSpace::canonical(4);
        let mut r = rng(11);
        let a = random_lagrangian(&ns, &mut r, 0.8).unwrap();
        let b = random_lagrangian(&ns, &mut r, 0.8).unwrap();
        assert_eq!(pair_index(ns.space(), &a, &b).unwrap().index, 0);
    }

    #[test]
    fn souriau_round_trip_and_frame_independence() {
        let ns = NormalizedSpace::canonical(3);
        let mut r = rng(12);
        let f = random_lagrangian(&ns, &mut r, 0.8).unwrap();
        let g = random_well_conditioned(&mut r, 3, 0.2);
        let u = souriau_unitary(&ns, &f).unwrap();
        let u2 = souriau_unitary(&ns, &(&f * g)).unwrap();
        assert!(relative_distance(&u, &u2) < 1e-12);
        assert!(relative_distance(&(u.adjoint() * &u), &identity(3)) < 1e-12);
        let back = frame_from_unitary(&ns, &u);
        assert!(same_span(&back, &f, ns.space().tolerances()).unwrap());
    }

    #[test]
    fn graph_of_symplectic_is_lagrangian_in_product() {
        let space = SymplecticSpace::canonical(1);
        let x = space.negated().direct_sum(&space);
        let m = space.exp_j(0.4);
        assert!(check_lagrangian(&x, &graph_frame(&m)).is_ok());
        let d = CMat::from_diagonal(&CVec::from_vec(alloc::vec![c(2.0, 0.0), c(0.5, 0.0)]));
        assert!(check_lagrangian(&x, &graph_frame(&d)).is_err());
    }
}
