//! Antisymplectic involutions and their normal form.

use alloc::format;

#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::lagrangian::{check_lagrangian, eigenspace};
use crate::linalg::{block_diag, frobenius, hstack, identity, rank, relative_distance, try_inverse, vstack, CMat, ONE};
use crate::space::SymplecticSpace;

/// `N` with `N² = I`, `N*JN = −J`, its Lagrangian eigenspaces `U± = ker(N ∓ I)`
/// and optionally `S` with `(NS)² = I` and `V± = ker(NS ∓ I)`.
#[derive(Debug, Clone)]
pub struct BrakeSymmetry {
    space: SymplecticSpace,
    n: CMat,
    u_plus: CMat,
    u_minus: CMat,
    /// `K` when the coordinates are the adapted splitting `U⁻ ⊕ U⁺`.
    normal_form: Option<CMat>,
    s: Option<BrakeTwist>,
}

#[derive(Debug, Clone)]
pub struct BrakeTwist {
    pub s: CMat,
    pub v_plus: CMat,
    pub v_minus: CMat,
}

/// `‖N² − I‖` and `‖N*JN + J‖`, relative.
pub fn involution_residuals(space: &SymplecticSpace, n: &CMat) -> (f64, f64) {
    let dim = space.dim();
    let sq = relative_distance(&(n * n), &identity(dim));
    let anti = frobenius(&(n.adjoint() * space.j() * n + space.j())) / frobenius(space.j());
    (sq, anti)
}

impl BrakeSymmetry {
    pub fn new(space: &SymplecticSpace, n: CMat) -> Result<Self> {
        if n.nrows() != space.dim() || n.ncols() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: n.nrows(),
            });
        }
        let (sq, anti) = involution_residuals(space, &n);
        let tol = space.tolerances().structure.max(1e-12) * 10.0;
        if sq > tol || anti > tol {
            return Err(Error::NotBrakeInvolution(sq.max(anti)));
        }
        let u_plus = eigenspace(&n, ONE, space)?;
        let u_minus = eigenspace(&n, -ONE, space)?;
        check_lagrangian(space, &u_plus)?;
        check_lagrangian(space, &u_minus)?;
        if rank(&hstack(&u_plus, &u_minus), space.tolerances())? != space.dim() {
            return Err(Error::NotBrakeInvolution(0.0));
        }
        Ok(BrakeSymmetry {
            space: space.clone(),
            n,
            u_plus,
            u_minus,
            normal_form: None,
            s: None,
        })
    }

    /// `J = [[0, −K*], [K, 0]]`, `N = (−I) ⊕ I` on `U⁻ ⊕ U⁺`.
    pub fn from_normal_form(k: CMat, tol: crate::tolerance::Tolerances) -> Result<Self> {
        let n = k.nrows();
        if k.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: k.ncols(),
            });
        }
        let zero = CMat::zeros(n, n);
        let j = vstack(&hstack(&zero, &(-k.adjoint())), &hstack(&k, &zero));
        let space = SymplecticSpace::new(j, tol)?;
        let inv = block_diag(&(-identity(n)), &identity(n));
        let mut b = BrakeSymmetry::new(&space, inv)?;
        // Adapted frames, so that block formulas read directly off coordinates.
        b.u_minus = vstack(&identity(n), &zero);
        b.u_plus = vstack(&zero, &identity(n));
        b.normal_form = Some(k);
        Ok(b)
    }

    pub fn with_twist(mut self, s: CMat) -> Result<Self> {
        self.space.check_symplectic(&s)?;
        let ns = &self.n * &s;
        let dim = self.space.dim();
        let defect = relative_distance(&(&ns * &ns), &identity(dim));
        if defect > 1e-8 {
            return Err(Error::NotBrakeInvolution(defect));
        }
        let v_plus = eigenspace(&ns, ONE, &self.space)?;
        let v_minus = eigenspace(&ns, -ONE, &self.space)?;
        check_lagrangian(&self.space, &v_plus)?;
        check_lagrangian(&self.space, &v_minus)?;
        self.s = Some(BrakeTwist { s, v_plus, v_minus });
        Ok(self)
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn n(&self) -> &CMat {
        &self.n
    }

    pub fn u_plus(&self) -> &CMat {
        &self.u_plus
    }

    pub fn u_minus(&self) -> &CMat {
        &self.u_minus
    }

    pub fn normal_form(&self) -> Option<&CMat> {
        self.normal_form.as_ref()
    }

    pub fn twist(&self) -> Option<&BrakeTwist> {
        self.s.as_ref()
    }

    pub fn half_dim(&self) -> usize {
        self.space.half_dim()
    }

    /// `Nγ⁻¹N`.
    pub fn reflect(&self, m: &CMat) -> Result<CMat> {
        Ok(&self.n * try_inverse(m)? * &self.n)
    }

    /// `NP⁻¹NP`.
    pub fn brake_product(&self, p: &CMat) -> Result<CMat> {
        Ok(self.reflect(p)? * p)
    }

    /// `‖(NM)² − I‖`, relative.
    pub fn involution_defect(&self, m: &CMat) -> f64 {
        let nm = &self.n * m;
        relative_distance(&(&nm * &nm), &identity(self.space.dim()))
    }

    pub fn require_involutive(&self, m: &CMat, tol: f64) -> Result<()> {
        let d = self.involution_defect(m);
        if d > tol {
            return Err(Error::IdentityViolated(format!("(NM)^2 differs from I by {d:e}")));
        }
        Ok(())
    }

    /// Blocks `(A, B, C, D)` of `M` on `U⁻ ⊕ U⁺` (normal form only).
    pub fn blocks(&self, m: &CMat) -> Result<Blocks> {
        if self.normal_form.is_none() {
            return Err(Error::InvalidArgument("blocks need the adapted normal form".into()));
        }
        let n = self.half_dim();
        Ok(Blocks {
            a: m.view((0, 0), (n, n)).into_owned(),
            b: m.view((0, n), (n, n)).into_owned(),
            c: m.view((n, 0), (n, n)).into_owned(),
            d: m.view((n, n), (n, n)).into_owned(),
        })
    }
}

/// `M = [[A, B], [C, D]]` on `U⁻ ⊕ U⁺`.
#[derive(Debug, Clone)]
pub struct Blocks {
    pub a: CMat,
    pub b: CMat,
    pub c: CMat,
    pub d: CMat,
}

impl Blocks {
    pub fn assemble(&self) -> CMat {
        vstack(&hstack(&self.a, &self.b), &hstack(&self.c, &self.d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::tolerance::Tolerances;

    #[test]
    fn standard_brake_model() {
        let k = CMat::from_element(1, 1, c(1.0, 0.0));
        let b = BrakeSymmetry::from_normal_form(k, Tolerances::default()).unwrap();
        assert!(relative_distance(b.space().j(), crate::space::SymplecticSpace::standard(1).j()) < 1e-15);
        assert_eq!(b.u_plus().ncols(), 1);
    }

    #[test]
    fn rejects_symplectic_involution() {
        let space = SymplecticSpace::canonical(1);
        assert!(matches!(
            BrakeSymmetry::new(&space, -identity(2)),
            Err(Error::NotBrakeInvolution(_))
        ));
    }
}
