//! Positive paths and winding pairs of loops.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, TAU};

#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;
use num_traits::Euclid;

use crate::error::{Error, Result};
use crate::linalg::{determinant, frobenius, hermitian_eigen, relative_distance, try_inverse, CMat};
use crate::path::SymplecticPath;
use crate::polar::polar_decompose;
use crate::space::{NormalizedSpace, SymplecticSpace};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Positivity {
    pub positive: bool,
    /// Smallest eigenvalue of `−Jγ̇γ⁻¹` over the grid.
    pub margin: f64,
    /// Largest relative anti-Hermitian part seen.
    pub hermitian_residual: f64,
}

/// `−Jγ̇(t)γ(t)⁻¹`, Hermitian for symplectic paths.
pub fn velocity_form(space: &SymplecticSpace, m: &CMat, dm: &CMat) -> Result<CMat> {
    Ok(-(space.j() * dm * try_inverse(m)?))
}

/// Checks positive definiteness of `−Jγ̇γ⁻¹` at `grid + 1` equally spaced points.
pub fn is_positive_path(space: &SymplecticSpace, path: &SymplecticPath, grid: usize) -> Result<Positivity> {
    let d = path.domain();
    let grid = grid.max(1);
    let mut margin = f64::INFINITY;
    let mut residual: f64 = 0.0;
    for i in 0..=grid {
        let t = d.start + d.length() * i as f64 / grid as f64;
        let (m, dm) = path.eval_with_derivative(t)?;
        let a = velocity_form(space, &m, &dm)?;
        let skew = frobenius(&(&a - a.adjoint())) * 0.5;
        residual = residual.max(skew / frobenius(&a).max(1e-300));
        let h = (&a + a.adjoint()).map(|z| z * 0.5);
        margin = margin.min(hermitian_eigen(&h).values[0]);
    }
    Ok(Positivity {
        positive: margin > 0.0 && residual < 1e-6,
        margin,
        hermitian_residual: residual,
    })
}

/// Winding numbers `(w⁺, w⁻)` of `det U₁₁(t)` and `det U₂₂(t)` along a loop,
/// where `γ(t) = A(t)U(t)` is the pointwise polar decomposition.
pub fn winding_pair(ns: &NormalizedSpace, path: &SymplecticPath) -> Result<(i64, i64)> {
    let d = path.domain();
    let start = path.eval(d.start);
    let end = path.eval(d.end);
    let gap = relative_distance(&end, &start);
    if gap > 1e-9 {
        return Err(Error::NotALoop(gap));
    }
    let phases = |t: f64| -> Result<(f64, f64)> {
        let p = polar_decompose(ns, &path.eval(t))?;
        let a = determinant(&p.u11);
        let b = determinant(&p.u22);
        Ok((a.arg(), b.arg()))
    };
    let steps = 32;
    let mut total = (0.0, 0.0);
    let mut left = (d.start, phases(d.start)?);
    for i in 1..=steps {
        let t = if i == steps {
            d.end
        } else {
            d.start + d.length() * i as f64 / steps as f64
        };
        let right = (t, phases(t)?);
        let inc = accumulate(&phases, left, right, 0)?;
        total.0 += inc.0;
        total.1 += inc.1;
        left = right;
    }
    let wind = |x: f64| -> Result<i64> {
        let w = x / TAU;
        if (w - w.round()).abs() > 1e-6 {
            return Err(Error::GaugeUnstable(format!("non-integral winding {w}")));
        }
        Ok(w.round() as i64)
    };
    Ok((wind(total.0)?, wind(total.1)?))
}

fn principal(x: f64) -> f64 {
    let y = Euclid::rem_euclid(&x, &TAU);
    if y > core::f64::consts::PI {
        y - TAU
    } else {
        y
    }
}

type PhasePoint = (f64, (f64, f64));

/// Phase increments over `[l, r]`, bisecting until each step moves less
/// than `π/2` and agrees with its two halves.
fn accumulate(
    phases: &dyn Fn(f64) -> Result<(f64, f64)>,
    l: PhasePoint,
    r: PhasePoint,
    depth: u32,
) -> Result<(f64, f64)> {
    if depth > 40 {
        return Err(Error::SubdivisionLimit(40));
    }
    let mt = 0.5 * (l.0 + r.0);
    let m = (mt, phases(mt)?);
    let whole = (principal(r.1 .0 - l.1 .0), principal(r.1 .1 - l.1 .1));
    let h1 = (principal(m.1 .0 - l.1 .0), principal(m.1 .1 - l.1 .1));
    let h2 = (principal(r.1 .0 - m.1 .0), principal(r.1 .1 - m.1 .1));
    let small = [whole.0, whole.1, h1.0, h1.1, h2.0, h2.1]
        .iter()
        .all(|x| x.abs() < FRAC_PI_2);
    let agree = (whole.0 - h1.0 - h2.0).abs() < 1e-9 && (whole.1 - h1.1 - h2.1).abs() < 1e-9;
    if small && agree {
        return Ok((h1.0 + h2.0, h1.1 + h2.1));
    }
    let a = accumulate(phases, l, m, depth + 1)?;
    let b = accumulate(phases, m, r, depth + 1)?;
    Ok((a.0 + b.0, a.1 + b.1))
}

/// Smallest eigenvalue margins of `−Jγ̇γ⁻¹` along a grid, for reporting.
pub fn margins(space: &SymplecticSpace, path: &SymplecticPath, grid: usize) -> Result<Vec<f64>> {
    let d = path.domain();
    (0..=grid)
        .map(|i| {
            let t = d.start + d.length() * i as f64 / grid.max(1) as f64;
            let (m, dm) = path.eval_with_derivative(t)?;
            let a = velocity_form(space, &m, &dm)?;
            Ok(hermitian_eigen(&(&a + a.adjoint()).map(|z| z * 0.5)).values[0])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, identity, CVec, ZERO};
    use crate::path::Domain;
    use crate::random::{random_positive_definite, rng};

    #[test]
    fn exponential_of_j_is_positive_with_margin_one() {
        let space = SymplecticSpace::canonical(2);
        let p = SymplecticPath::exp(space.j().clone(), Domain::unit());
        let r = is_positive_path(&space, &p, 16).unwrap();
        assert!(r.positive);
        assert!((r.margin - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_path_is_not_positive() {
        let space = SymplecticSpace::canonical(1);
        let p = SymplecticPath::constant(identity(2), Domain::unit());
        assert!(!is_positive_path(&space, &p, 8).unwrap().positive);
    }

    #[test]
    fn product_of_positive_paths_is_positive() {
        let space = SymplecticSpace::canonical(2);
        let mut r = rng(5);
        let g1 = space.positive_generator(&random_positive_definite(&mut r, 4, 0.2));
        let g2 = space.positive_generator(&random_positive_definite(&mut r, 4, 0.2));
        let p1 = SymplecticPath::exp(g1, Domain::unit());
        let p2 = SymplecticPath::exp(g2, Domain::unit());
        assert!(is_positive_path(&space, &p1, 8).unwrap().positive);
        let prod = SymplecticPath::product(p1, p2).unwrap();
        assert!(is_positive_path(&space, &prod, 32).unwrap().positive);
    }

    #[test]
    fn winding_pair_fixtures() {
        let ns = NormalizedSpace::canonical(1);
        let gen = CMat::from_diagonal(&CVec::from_vec(alloc::vec![c(0.0, TAU), ZERO]));
        let lp = SymplecticPath::exp(gen, Domain::unit());
        assert_eq!(winding_pair(&ns, &lp).unwrap(), (1, 0));
        let constant = SymplecticPath::constant(identity(2), Domain::unit());
        assert_eq!(winding_pair(&ns, &constant).unwrap(), (0, 0));
        let open = SymplecticPath::exp(ns.space().j().clone(), Domain::unit());
        assert!(matches!(winding_pair(&ns, &open), Err(Error::NotALoop(_))));
    }
}
