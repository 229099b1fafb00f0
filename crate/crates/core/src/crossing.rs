//! Crossing forms and the crossing-form index, an oracle independent of the
//! spectral winding.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{frobenius, hermitian_eigen, hermitian_part, hstack, orthonormalize, svd, CMat};
use crate::maslov::{
    CrossingRecord, IndexOptions, IndexReport, LagrangianPath, Method, Signature, CONVENTION,
};
use crate::path::Domain;
use crate::space::SymplecticSpace;

/// Relative eigenvalue level below which a crossing form counts as degenerate.
pub const DEGENERACY_THRESHOLD: f64 = 1e-6;

/// Gap below which two Lagrangians are taken to intersect.
pub const CROSSING_THRESHOLD: f64 = 1e-7;

/// `q(x, y) = d/ds ω(x, y(s))` on `λ(t₀)` with `y(s) ∈ λ(s)`, `y(s) − y ∈ μ′`,
/// written in the basis of the path's frame at `t₀`.
pub fn crossing_form(
    space: &SymplecticSpace,
    path: &dyn LagrangianPath,
    t0: f64,
    complement: &CMat,
) -> Result<CMat> {
    let (f, df) = path.frame_with_derivative(t0)?;
    let n = f.ncols();
    if complement.nrows() != space.dim() || complement.ncols() + n != space.dim() {
        return Err(Error::NotComplement);
    }
    let split = hstack(&f, complement);
    let dec = svd(&split);
    let smax = dec.values[0];
    let smin = *dec.values.last().expect("square matrix");
    if smin <= space.tolerances().rank * smax {
        return Err(Error::NotComplement);
    }
    // Ḟc = F a + M′ b; moving along μ′ by M′b keeps y(s) on λ(s).
    let coeffs = split.lu().solve(&df).ok_or(Error::NotComplement)?;
    let b = coeffs.rows(n, space.dim() - n).into_owned();
    let q = space.form(&f, &(complement * b));
    Ok(hermitian_part(&q))
}

/// The same form read off the frame: `F* J* Ḟ`.
pub fn frame_crossing_form(space: &SymplecticSpace, path: &dyn LagrangianPath, t0: f64) -> Result<CMat> {
    let (f, df) = path.frame_with_derivative(t0)?;
    Ok(hermitian_part(&space.form(&f, &df)))
}

/// `(m⁺, m⁰, m⁻)` with zero meaning below `threshold` in absolute value.
pub fn signature(form: &CMat, threshold: f64) -> Signature {
    let eig = hermitian_eigen(form);
    let mut s = Signature::default();
    for &v in &eig.values {
        if v > threshold {
            s.positive += 1;
        } else if v < -threshold {
            s.negative += 1;
        } else {
            s.zero += 1;
        }
    }
    s
}

/// Smallest singular value of the stacked orthonormal frames.
fn gap(lambda: &CMat, mu: &CMat) -> f64 {
    let stacked = hstack(&orthonormalize(lambda), &orthonormalize(mu));
    *svd(&stacked).values.last().expect("nonempty")
}

fn golden_minimum(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, width: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > width {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Intersection basis and relative crossing form of `(λ, μ)` at `t`.
fn crossing_at(
    space: &SymplecticSpace,
    lambda: &dyn LagrangianPath,
    mu: &dyn LagrangianPath,
    t: f64,
) -> Result<(CMat, CMat, f64)> {
    let (fl, dl) = lambda.frame_with_derivative(t)?;
    let (fm, dm) = mu.frame_with_derivative(t)?;
    let n = fl.ncols();
    let ortho = svd(&hstack(&orthonormalize(&fl), &orthonormalize(&fm)));
    let dim = ortho.values.iter().filter(|&&s| s < 1e-6).count();
    let raw = svd(&hstack(&fl, &(-&fm)));
    let total = raw.v.ncols();
    let null = raw.v.columns(total - dim, dim).into_owned();
    let c = null.rows(0, n).into_owned();
    let d = null.rows(n, total - n).into_owned();
    let ql = space.form(&fl, &dl);
    let qm = space.form(&fm, &dm);
    let form = hermitian_part(&(c.adjoint() * ql * &c - d.adjoint() * qm * &d));
    let scale = frobenius(&fl) * frobenius(&dl) + frobenius(&fm) * frobenius(&dm);
    Ok((&fl * c, form, scale))
}

/// Index as a signed sum of crossing signatures, using the endpoint
/// convention of [`CONVENTION`]: `−m⁻` at `t = a`, `m⁺ − m⁻` inside, `m⁺` at `t = b`.
pub fn maslov_pairs_crossingform(
    space: &SymplecticSpace,
    lambda: &dyn LagrangianPath,
    mu: &dyn LagrangianPath,
    domain: Domain,
    opts: &IndexOptions,
) -> Result<IndexReport> {
    let space = space.with_tolerances(opts.tol);
    if lambda.ambient_dim() != space.dim() || mu.ambient_dim() != space.dim() {
        return Err(Error::SpaceMismatch);
    }
    let (a, b) = (domain.start, domain.end);
    let g = |t: f64| gap(&lambda.frame(t), &mu.frame(t));
    let n = opts.scan_points.max(8);
    let times: Vec<f64> = (0..=n)
        .map(|i| if i == n { b } else { a + (b - a) * i as f64 / n as f64 })
        .collect();
    let gaps: Vec<f64> = times.iter().map(|&t| g(t)).collect();
    for i in 0..n {
        if gaps[i] < CROSSING_THRESHOLD && gaps[i + 1] < CROSSING_THRESHOLD {
            return Err(Error::NonIsolatedCrossing(times[i]));
        }
    }

    let edge = 1e-9 * (b - a);
    let mut found: Vec<f64> = Vec::new();
    if gaps[0] < CROSSING_THRESHOLD {
        found.push(a);
    }
    if gaps[n] < CROSSING_THRESHOLD {
        found.push(b);
    }
    for i in 0..=n {
        let left = if i == 0 { f64::INFINITY } else { gaps[i - 1] };
        let right = if i == n { f64::INFINITY } else { gaps[i + 1] };
        if !(gaps[i] <= left && gaps[i] <= right) {
            continue;
        }
        let lo = times[i.saturating_sub(1)];
        let hi = times[(i + 1).min(n)];
        let t = golden_minimum(&g, lo, hi, 1e-13 * (b - a).max(1.0));
        if t - a < edge || b - t < edge {
            continue;
        }
        if g(t) < CROSSING_THRESHOLD && !found.iter().any(|&s| (s - t).abs() < 1e-8 * (b - a)) {
            found.push(t);
        }
    }
    found.sort_by(|x, y| x.partial_cmp(y).unwrap_or(core::cmp::Ordering::Equal));

    let mut crossings = Vec::with_capacity(found.len());
    for &t in &found {
        let (basis, form, scale) = crossing_at(&space, lambda, mu, t)?;
        let sig = signature(&form, DEGENERACY_THRESHOLD * scale.max(1e-300));
        if sig.zero > 0 {
            return Err(Error::DegenerateCrossing(t));
        }
        let contribution = if t == a {
            -(sig.negative as i64)
        } else if t == b {
            sig.positive as i64
        } else {
            sig.positive as i64 - sig.negative as i64
        };
        crossings.push(CrossingRecord {
            time: t,
            intersection: basis,
            form,
            signature: sig,
            contribution,
        });
    }
    let index = crossings.iter().map(|c| c.contribution).sum();
    Ok(IndexReport {
        index,
        crossings,
        events: Vec::new(),
        method: Method::CrossingForm,
        depth: 0,
        steps: n,
        epsilon: 0.0,
        convention: CONVENTION.into(),
        traces: Vec::new(),
    })
}

/// Nullity sum `Σ dim(λ(t) ∩ μ(t))` over crossings in `(a, b]` of a pair
/// path whose crossings must all be positive definite.
pub fn positive_crossing_nullity(
    space: &SymplecticSpace,
    lambda: &dyn LagrangianPath,
    mu: &dyn LagrangianPath,
    domain: Domain,
    opts: &IndexOptions,
) -> Result<usize> {
    let report = maslov_pairs_crossingform(space, lambda, mu, domain, opts)?;
    let mut total = 0;
    for c in &report.crossings {
        if c.signature.negative > 0 {
            return Err(Error::IdentityViolated(format!(
                "crossing at {} of a positive path has negative directions",
                c.time
            )));
        }
        if c.time > domain.start {
            total += c.signature.positive;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, relative_distance, vstack};
    use crate::maslov::{maslov_pairs, ActionPath, ConstantFrame};
    use crate::path::SymplecticPath;
    use core::f64::consts::PI;

    fn model(sign: f64, end: f64) -> (SymplecticSpace, ActionPath, ConstantFrame) {
        let space = SymplecticSpace::canonical(1);
        let l0 = vstack(&identity(1), &identity(1));
        let domain = Domain::new(0.0, end).unwrap();
        let path = SymplecticPath::exp(space.j().map(|z| z * sign), domain);
        (space, ActionPath { path, base: l0.clone() }, ConstantFrame { frame: l0, domain })
    }

    #[test]
    fn model_crossing_form_is_two() {
        let (space, l, _) = model(1.0, PI);
        let e2 = CMat::from_column_slice(2, 1, &[crate::linalg::ZERO, crate::linalg::ONE]);
        let q = crossing_form(&space, &l, 0.0, &e2).unwrap();
        assert!((q[(0, 0)].re - 2.0).abs() < 1e-12);
        let (space, l, _) = model(-1.0, PI);
        let q = crossing_form(&space, &l, 0.0, &e2).unwrap();
        assert!((q[(0, 0)].re + 2.0).abs() < 1e-12);
    }

    #[test]
    fn constant_path_has_zero_form() {
        let (space, _, m) = model(1.0, 1.0);
        let e2 = CMat::from_column_slice(2, 1, &[crate::linalg::ZERO, crate::linalg::ONE]);
        let q = crossing_form(&space, &m, 0.5, &e2).unwrap();
        assert!(frobenius(&q) < 1e-15);
    }

    #[test]
    fn form_is_independent_of_complement() {
        let (space, l, _) = model(1.0, PI);
        let e1 = CMat::from_column_slice(2, 1, &[crate::linalg::ONE, crate::linalg::ZERO]);
        let other = CMat::from_column_slice(2, 1, &[crate::linalg::c(0.3, 0.2), crate::linalg::ONE]);
        let q1 = crossing_form(&space, &l, 0.0, &e1).unwrap();
        let q2 = crossing_form(&space, &l, 0.0, &other).unwrap();
        assert!(relative_distance(&q1, &q2) < 1e-12);
        assert!(relative_distance(&q1, &frame_crossing_form(&space, &l, 0.0).unwrap()) < 1e-12);
        let l0 = vstack(&identity(1), &identity(1));
        assert!(matches!(crossing_form(&space, &l, 0.0, &l0), Err(Error::NotComplement)));
    }

    #[test]
    fn crossing_form_index_of_model_paths() {
        let opts = IndexOptions::default();
        let (space, l, m) = model(1.0, PI);
        let r = maslov_pairs_crossingform(&space, &l, &m, l.domain(), &opts).unwrap();
        assert_eq!(r.index, 1);
        assert_eq!(r.index, r.reconstructed());
        assert_eq!(r.crossings.len(), 2);
        let (space, l, m) = model(-1.0, PI);
        let r = maslov_pairs_crossingform(&space, &l, &m, l.domain(), &opts).unwrap();
        let w = maslov_pairs(&space, &l, &m, l.domain(), &opts).unwrap();
        assert_eq!(r.index, -1);
        assert_eq!(w.index, -1);
    }

    #[test]
    fn no_crossings_gives_zero() {
        let (space, l, _) = model(1.0, 1.0);
        let far = ConstantFrame {
            frame: vstack(&identity(1), &(-identity(1))),
            domain: l.domain(),
        };
        // e^{is}/e^{-is} = −1 first happens at s = π/2 > 1.
        let r = maslov_pairs_crossingform(&space, &l, &far, l.domain(), &IndexOptions::default()).unwrap();
        assert_eq!(r.index, 0);
        assert!(r.crossings.is_empty());
    }
}
