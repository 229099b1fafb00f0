//! Canonical fixtures with known answers.

use std::f64::consts::{PI, TAU};
use std::fmt::Debug;

use maslov_core::crossing::{crossing_form, frame_crossing_form, maslov_pairs_crossingform};
use maslov_core::iteration::chebyshev::{chebyshev_r, chebyshev_t, eval};
use maslov_core::iteration::nullity::{cheb_power, split_nullity_brake, split_nullity_power};
use maslov_core::iteration::sampling::{darboux_brake, darboux_path, elliptic_symplectic, random_brake, random_path, special_angles};
use maslov_core::iteration::verify::{
    a_iterate, brake_iterate, delta_k, delta_k_along, verify_bott, verify_brake2, verify_brake_k, AIterationSpec,
    BrakeIdentity, VerdictReport,
};
use maslov_core::lagrangian::{annihilator, is_lagrangian, pair_index};
use maslov_core::linalg::{c, expm, identity, relative_distance, same_span, CMat, Complex64, IMAG};
use maslov_core::maslov::{
    index_vs_n, iz, maslov_pairs, nullities, ActionPath, ConstantFrame, IndexOptions, ProductSpace,
};
use maslov_core::path::{Domain, SymplecticPath};
use maslov_core::polar::{polar_decompose, random_lagrangian, random_symplectic};
use maslov_core::positivity::{is_positive_path, winding_pair};
use maslov_core::random::{random_hermitian, rng};
use maslov_core::space::inverse_formula_residual;
use maslov_core::{Error, NormalizedSpace, SymplecticSpace, Tolerances};
use serde::Serialize;

use crate::exit;

#[derive(Debug)]
enum Failure {
    Mismatch(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<(), Failure>;

fn expect_eq<T: PartialEq + Debug>(what: &str, got: T, want: T) -> Outcome {
    if got == want {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!("{what}: got {got:?}, want {want:?}")))
    }
}

fn expect_small(what: &str, value: f64, bound: f64) -> Outcome {
    if value <= bound {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!("{what}: {value:.3e} exceeds {bound:.1e}")))
    }
}

fn expect(what: &str, ok: bool) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(Failure::Mismatch(what.to_string()))
    }
}

fn expect_verdict(v: &VerdictReport, lhs: i64, rhs: &[i64]) -> Outcome {
    expect_eq(&v.identity, (v.lhs, v.rhs_terms.as_slice()), (lhs, rhs))
}

fn expect_matched(v: &VerdictReport) -> Outcome {
    expect(&format!("{}: {} vs {:?}", v.identity, v.lhs, v.rhs_terms), v.matched)
}

fn diag(entries: &[Complex64]) -> CMat {
    let n = entries.len();
    CMat::from_fn(n, n, |i, j| if i == j { entries[i] } else { c(0.0, 0.0) })
}

fn col(entries: &[f64]) -> CMat {
    CMat::from_fn(entries.len(), 1, |i, _| c(entries[i], 0.0))
}

/// `(C², J₀)` with `J₀ = diag(i, −i)`.
fn plane(tol: &Tolerances) -> NormalizedSpace {
    NormalizedSpace::new(SymplecticSpace::canonical(1).with_tolerances(*tol)).expect("canonical plane")
}

fn opts(tol: &Tolerances) -> IndexOptions {
    IndexOptions::with_tolerances(*tol)
}

fn domain(a: f64, b: f64) -> Domain {
    Domain::new(a, b).expect("valid fixture domain")
}

/// `t ↦ e^{tJ₀}` on `[a, b]`.
fn model(space: &SymplecticSpace, a: f64, b: f64) -> SymplecticPath {
    SymplecticPath::exp(space.j().clone(), domain(a, b))
}

fn lambda0() -> CMat {
    col(&[1.0, 1.0])
}

fn space_fixtures(tol: &Tolerances) -> Outcome {
    let j0 = diag(&[IMAG, -IMAG]);
    let s = SymplecticSpace::new(j0, *tol)?;
    expect_eq("n of diag(i, -i)", s.half_dim(), 1)?;
    let s = SymplecticSpace::new(diag(&[IMAG, IMAG]), *tol)?;
    let ns = NormalizedSpace::new(s)?;
    expect_eq("(n+, n-) of diag(i, i)", (ns.n_plus(), ns.n_minus()), (2, 0))?;
    expect("diag(i, i) has no Lagrangians", matches!(ns.require_lagrangians(), Err(Error::NoLagrangians { .. })))?;
    let std = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
    let s = SymplecticSpace::new(std, *tol)?;
    expect("real standard form is normalized", s.is_normalized())
}

fn normalize_fixtures(tol: &Tolerances) -> Outcome {
    let s = plane(tol).space().clone();
    let norm = s.normalize()?;
    expect_small("J1 = J", relative_distance(norm.normalized.space().j(), s.j()), 1e-12)?;
    expect_small("T = I", relative_distance(&norm.transfer, &identity(2)), 1e-12)?;

    let s = SymplecticSpace::new(diag(&[c(0.0, 2.0), c(0.0, -2.0)]), *tol)?;
    let norm = s.normalize()?;
    expect_small("J1 of diag(2i, -2i)", relative_distance(norm.normalized.space().j(), &diag(&[IMAG, -IMAG])), 1e-12)?;
    let root2 = identity(2).map(|z| z * 2f64.sqrt());
    expect_small("T of diag(2i, -2i)", relative_distance(&norm.transfer, &root2), 1e-12)?;

    let mut r = rng(7);
    let h = random_hermitian(&mut r, 4, 1.0) + diag(&[c(2.0, 0.0), c(2.5, 0.0), c(-2.0, 0.0), c(-3.0, 0.0)]);
    let s = SymplecticSpace::new(h.map(|z| z * IMAG), *tol)?;
    let norm = s.normalize()?;
    let j1 = norm.normalized.space().j();
    expect_small("J1 skew", relative_distance(&j1.adjoint(), &(-j1)), 1e-10)?;
    expect_small("J1^2 = -I", relative_distance(&(j1 * j1), &(-identity(4))), 1e-10)?;
    let t = &norm.transfer;
    expect_small("T carries omega to omega1", relative_distance(&(t.adjoint() * j1 * t), s.j()), 1e-10)
}

fn polar_fixtures(tol: &Tolerances) -> Outcome {
    let ns = plane(tol);
    let p = polar_decompose(&ns, &identity(2))?;
    expect_small("polar(I).A", relative_distance(&p.positive, &identity(2)), 1e-12)?;
    expect_small("polar(I).U", relative_distance(&p.unitary, &identity(2)), 1e-12)?;
    expect_small("polar(I).S", p.log_positive.norm(), 1e-12)?;

    let u = diag(&[c(0.0, 1.0), c(0.6, 0.8)]);
    let p = polar_decompose(&ns, &u)?;
    expect_small("polar(unitary).A", relative_distance(&p.positive, &identity(2)), 1e-12)?;
    expect_small("polar(unitary).U", relative_distance(&p.unitary, &u), 1e-12)?;

    let s = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
    ns.space().algebra_element(s.clone())?;
    let m = expm(&s);
    let p = polar_decompose(&ns, &m)?;
    expect_small("cosh/sinh A", relative_distance(&p.positive, &m), 1e-12)?;
    expect_small("cosh/sinh U", relative_distance(&p.unitary, &identity(2)), 1e-12)?;

    let big = NormalizedSpace::new(SymplecticSpace::canonical(3).with_tolerances(*tol))?;
    let m = random_symplectic(&big, &mut rng(21), 0.8);
    let p = polar_decompose(&big, &m)?;
    expect_small("polar round trip", p.residual, 1e-9)?;
    let again = polar_decompose(&big, &(&p.positive * &p.unitary))?;
    expect_small("polar uniqueness", relative_distance(&again.positive, &p.positive), 1e-9)?;
    expect_small("M^-1 = J^-1 M* J", inverse_formula_residual(big.space(), &m), 1e-9)
}

fn random_symplectic_fixtures(tol: &Tolerances) -> Outcome {
    let ns = NormalizedSpace::new(SymplecticSpace::canonical(2).with_tolerances(*tol))?;
    let a = random_symplectic(&ns, &mut rng(5), 0.7);
    let b = random_symplectic(&ns, &mut rng(5), 0.7);
    expect("same seed, same matrix", a == b)?;
    expect_small("symplectic residual", ns.space().symplectic_residual(&a), 1e-10)?;
    let u = random_symplectic(&ns, &mut rng(6), 0.0);
    expect_small("scale 0 is unitary", relative_distance(&(u.adjoint() * &u), &identity(4)), 1e-12)
}

fn annihilator_fixtures(tol: &Tolerances) -> Outcome {
    let s = plane(tol).space().clone();
    let ann = annihilator(&s, &col(&[1.0, 0.0]))?;
    expect("annihilator of e1 is e2", same_span(&ann, &col(&[0.0, 1.0]), tol)?)?;
    expect("lambda0 is Lagrangian", is_lagrangian(&s, &lambda0())?)?;
    expect_eq("annihilator of the whole plane", annihilator(&s, &identity(2))?.ncols(), 0)
}

fn pair_index_fixtures(tol: &Tolerances) -> Outcome {
    let s = plane(tol).space().clone();
    let p = pair_index(&s, &lambda0(), &lambda0())?;
    expect_eq("pair(l0, l0)", (p.dim_cap, p.codim_sum, p.index), (1, 1, 0))?;
    let p = pair_index(&s, &lambda0(), &col(&[1.0, -1.0]))?;
    expect_eq("pair(l0, l0')", (p.dim_cap, p.codim_sum, p.index), (0, 0, 0))?;
    let ns = NormalizedSpace::new(SymplecticSpace::canonical(4).with_tolerances(*tol))?;
    let mut r = rng(11);
    let l = random_lagrangian(&ns, &mut r, 0.5)?;
    let m = random_lagrangian(&ns, &mut r, 0.5)?;
    expect_eq("random pair index in C^8", pair_index(ns.space(), &l, &m)?.index, 0)
}

fn crossing_form_fixtures(tol: &Tolerances) -> Outcome {
    let s = plane(tol).space().clone();
    let forward = ActionPath {
        path: model(&s, -1.0, 1.0),
        base: lambda0(),
    };
    let q = crossing_form(&s, &forward, 0.0, &col(&[1.0, -1.0]))?;
    expect_small("q of e^{Js} l0", (q[(0, 0)] - c(2.0, 0.0)).norm(), 1e-9)?;
    let q = frame_crossing_form(&s, &forward, 0.0)?;
    expect_small("frame form of e^{Js} l0", (q[(0, 0)] - c(2.0, 0.0)).norm(), 1e-9)?;
    let still = ActionPath {
        path: SymplecticPath::constant(identity(2), domain(-1.0, 1.0)),
        base: lambda0(),
    };
    expect_small("q of a constant path", crossing_form(&s, &still, 0.0, &col(&[1.0, -1.0]))?.norm(), 1e-12)?;
    let backward = ActionPath {
        path: SymplecticPath::exp_affine(s.j().clone(), -1.0, 0.0, domain(-1.0, 1.0)),
        base: lambda0(),
    };
    let q = crossing_form(&s, &backward, 0.0, &col(&[1.0, -1.0]))?;
    expect_small("q of e^{-Js} l0", (q[(0, 0)] + c(2.0, 0.0)).norm(), 1e-9)
}

fn maslov_pairs_fixtures(tol: &Tolerances) -> Outcome {
    let s = plane(tol).space().clone();
    let o = opts(tol);
    let run = |a: f64, b: f64, reverse: bool| -> Result<(i64, i64), Error> {
        let mut path = model(&s, a, b);
        if reverse {
            path = SymplecticPath::reverse(path);
        }
        let d = path.domain();
        let lambda = ActionPath { path, base: lambda0() };
        let mu = ConstantFrame { frame: lambda0(), domain: d };
        let w = maslov_pairs(&s, &lambda, &mu, d, &o)?.index;
        let x = maslov_pairs_crossingform(&s, &lambda, &mu, d, &o)?.index;
        Ok((w, x))
    };
    expect_eq("Mas{e^{Js} l0, l0; [0, pi]}", run(0.0, PI, false)?, (1, 1))?;
    expect_eq("Mas{e^{Js} l0, l0; [0, 2pi]}", run(0.0, TAU, false)?, (2, 2))?;
    expect_eq("reversed model on [0, pi]", run(0.0, PI, true)?, (-1, -1))?;
    expect_eq("no crossings", run(0.3, 2.5, false)?, (0, 0))?;
    let d = domain(0.0, 1.0);
    let still = ActionPath {
        path: SymplecticPath::constant(identity(2), d),
        base: lambda0(),
    };
    let mu = ConstantFrame { frame: lambda0(), domain: d };
    expect_eq("constant pair", maslov_pairs(&s, &still, &mu, d, &o)?.index, 0)
}

fn graph_index_fixtures(tol: &Tolerances) -> Outcome {
    let s = plane(tol).space().clone();
    let ps = ProductSpace::new(&s);
    let o = opts(tol);
    expect_eq("i_1(e^{J0 t}, [0, 2pi])", iz(&ps, &model(&s, 0.0, TAU), c(1.0, 0.0), &o)?, 2)?;
    let constant = SymplecticPath::constant(expm(&s.j().map(|z| z * 0.7)), domain(0.0, 1.0));
    expect_eq("i_1 of a constant path", iz(&ps, &constant, c(1.0, 0.0), &o)?, 0)?;
    expect_eq("i_-1(e^{J0 t}, [0, pi])", iz(&ps, &model(&s, 0.0, PI), c(-1.0, 0.0), &o)?, 2)?;
    expect_eq("i_I via index_vs_n", index_vs_n(&ps, &model(&s, 0.0, TAU), &identity(2), &o)?, 2)?;
    expect_eq("i_-I via index_vs_n", index_vs_n(&ps, &model(&s, 0.0, TAU), &(-identity(2)), &o)?, 2)?;
    let big = SymplecticSpace::canonical(3).with_tolerances(*tol);
    let mut r = rng(17);
    let g = random_path(&big, &mut r, Domain::unit(), 1.5, false)?;
    let n = random_symplectic(&NormalizedSpace::new(big.clone())?, &mut r, 0.5);
    index_vs_n(&ProductSpace::new(&big), &g, &n, &o)?;

    let tol = *s.tolerances();
    expect_eq("nu_1(I)", nullities(&ps, &identity(2), &ps.circle_graph(c(1.0, 0.0)), &tol)?, (2, 2))?;
    let rot = diag(&[c(1f64.cos(), 1f64.sin()), c(1f64.cos(), -1f64.sin())]);
    expect_eq("nu_1(e^{J0})", nullities(&ps, &rot, &ps.circle_graph(c(1.0, 0.0)), &tol)?, (0, 0))?;
    let half = model(&s, 0.0, PI).end();
    expect_eq("nu_-1(e^{J0 pi})", nullities(&ps, &half, &ps.circle_graph(c(-1.0, 0.0)), &tol)?, (2, 2))
}

fn sign_fixture(tol: &Tolerances) -> Outcome {
    let s = plane(tol).space().clone();
    let o = opts(tol);
    let path = model(&s, 0.0, TAU);
    let plus = iz(&ProductSpace::new(&s), &path, c(1.0, 0.0), &o)?;
    let minus = iz(&ProductSpace::new(&s.negated()), &path, c(1.0, 0.0), &o)?;
    expect_eq("index under J and -J", (plus, minus), (2, -2))
}

fn positivity_fixtures(tol: &Tolerances) -> Outcome {
    let s = plane(tol).space().clone();
    let p = is_positive_path(&s, &model(&s, 0.0, 1.0), 32)?;
    expect("e^{Jt} is positive", p.positive)?;
    expect_small("margin of e^{Jt}", (p.margin - 1.0).abs(), 1e-9)?;
    let q = is_positive_path(&s, &SymplecticPath::constant(identity(2), Domain::unit()), 8)?;
    expect("constant path is not positive", !q.positive)?;
    let skew = SymplecticPath::exp(s.positive_generator(&diag(&[c(2.0, 0.0), c(0.5, 0.0)])), Domain::unit());
    let prod = SymplecticPath::product(model(&s, 0.0, 1.0), skew)?;
    expect("product of positive paths", is_positive_path(&s, &prod, 32)?.positive)
}

fn winding_fixtures(tol: &Tolerances) -> Outcome {
    let ns = plane(tol);
    let constant = SymplecticPath::constant(identity(2), Domain::unit());
    expect_eq("constant loop", winding_pair(&ns, &constant)?, (0, 0))?;
    let lp = SymplecticPath::exp(diag(&[c(0.0, TAU), c(0.0, 0.0)]), Domain::unit());
    expect_eq("diag(e^{2 pi i t}, 1)", winding_pair(&ns, &lp)?, (1, 0))?;
    let other = SymplecticPath::exp(diag(&[c(0.0, -TAU), c(0.0, 2.0 * TAU)]), Domain::unit());
    let prod = SymplecticPath::product(lp, other)?;
    expect_eq("product of loops", winding_pair(&ns, &prod)?, (0, 2))
}

fn a_iterate_fixtures(tol: &Tolerances) -> Outcome {
    let s = plane(tol).space().clone();
    let gamma = model(&s, 0.0, 1.0);
    let spec = AIterationSpec::new(&s, gamma.clone(), identity(2), 2)?;
    let it = a_iterate(&spec)?;
    let long = model(&s, 0.0, 2.0);
    let gap = (0..=20).map(|i| relative_distance(&it.eval(0.1 * i as f64), &long.eval(0.1 * i as f64))).fold(0.0, f64::max);
    expect_small("A = I, k = 2", gap, 1e-12)?;
    let a = random_symplectic(&plane(tol), &mut rng(2), 0.5);
    let once = a_iterate(&AIterationSpec::new(&s, gamma.clone(), a, 1)?)?;
    let gap = (0..=10).map(|i| relative_distance(&once.eval(0.1 * i as f64), &gamma.eval(0.1 * i as f64))).fold(0.0, f64::max);
    expect_small("k = 1", gap, 1e-12)?;
    let big = SymplecticSpace::canonical(2).with_tolerances(*tol);
    let mut r = rng(3);
    let g = random_path(&big, &mut r, Domain::unit(), 1.0, true)?;
    let a = random_symplectic(&NormalizedSpace::new(big.clone())?, &mut r, 0.3);
    let it = a_iterate(&AIterationSpec::new(&big, g, a, 4)?)?;
    let worst = it.junction_mismatches().into_iter().map(|(_, m)| m).fold(0.0, f64::max);
    expect_small("junction mismatch", worst, 1e-10)
}

fn brake_iterate_fixtures(tol: &Tolerances) -> Outcome {
    let brake = darboux_brake(1, *tol)?;
    let still = SymplecticPath::constant(identity(2), Domain::unit());
    let it = brake_iterate(&still, 3, &brake)?;
    let gap = (0..=30).map(|i| relative_distance(&it.eval(0.1 * i as f64), &identity(2))).fold(0.0, f64::max);
    expect_small("constant brake iteration", gap, 1e-12)?;
    let mut r = rng(5);
    let g = random_path(brake.space(), &mut r, Domain::unit(), 0.8, true)?;
    let two = brake_iterate(&g, 2, &brake)?;
    let want = brake.brake_product(&g.end())?;
    expect_small("gamma^(2)(2)", relative_distance(&two.eval(2.0), &want), 1e-10)?;
    let five = brake_iterate(&g, 5, &brake)?;
    let worst = five.junction_mismatches().into_iter().map(|(_, m)| m).fold(0.0, f64::max);
    expect_small("brake junction mismatch", worst, 1e-10)
}

fn chebyshev_fixtures(tol: &Tolerances) -> Outcome {
    let t2 = eval(&chebyshev_t(2)?, (PI / 3.0).cos());
    expect_small("T_2(cos pi/3) + 1/2", (t2 + 0.5).abs(), 1e-12)?;
    let r1 = eval(&chebyshev_r(1)?, (TAU / 3.0).cos());
    expect_small("R_1(cos 2pi/3)", r1.abs(), 1e-12)?;
    let brake = darboux_brake(2, *tol)?;
    for k in 1..=12 {
        let cp = cheb_power(&identity(4), k, &brake)?;
        expect_small("Chebyshev power of I", cp.residual, 1e-12)?;
    }
    Ok(())
}

fn nullity_fixtures(tol: &Tolerances) -> Outcome {
    let split = split_nullity_power(&identity(2), 2, tol)?;
    let dims: Vec<usize> = split.roots.iter().map(|r| r.nullity).collect();
    expect_eq("split of I, k = 2", (dims, split.power_nullity), (vec![2, 0], 2))?;
    let split = split_nullity_power(&(-identity(2)), 2, tol)?;
    let dims: Vec<usize> = split.roots.iter().map(|r| r.nullity).collect();
    expect_eq("split of -I, k = 2", (dims, split.power_nullity), (vec![0, 2], 2))?;
    let ns = NormalizedSpace::new(SymplecticSpace::canonical(3).with_tolerances(*tol))?;
    let mut r = rng(9);
    let plus = special_angles(&mut r, 3, 5);
    let minus = special_angles(&mut r, 3, 5);
    split_nullity_power(&elliptic_symplectic(&ns, &mut r, &plus, &minus, 0.3), 5, tol)?;

    let brake = darboux_brake(2, *tol)?;
    let split = split_nullity_brake(&identity(4), 4, &brake)?;
    expect_eq("P = I: (m, p++, p+-)", (split.m_pp.0, split.p_pp.0, split.p_pm.0), (2, 2, 0))?;
    expect("M = I has no half-root nullity", split.half_roots.iter().all(|p| p.0 == 0))?;
    let mut r = rng(13);
    let p = darboux_path(&mut r, 2, 3)?.end();
    split_nullity_brake(&p, 3, &brake)?;
    Ok(())
}

fn bott_fixtures(tol: &Tolerances) -> Outcome {
    let s = plane(tol).space().clone();
    let o = opts(tol);
    expect_verdict(&verify_bott(&s, &model(&s, 0.0, PI), 2, &o)?, 2, &[0, 2])?;
    let lp = SymplecticPath::exp(s.j().map(|z| z * TAU), Domain::unit());
    expect_verdict(&verify_bott(&s, &lp, 2, &o)?, 4, &[2, 2])?;
    expect_eq("delta_2(I)", delta_k(&s, &identity(2), 2, &o)?, 0)?;
    expect_eq("delta_2 along the loop", delta_k_along(&s, &lp, 2, &o)?, 0)
}

fn brake_identity_fixtures(tol: &Tolerances) -> Outcome {
    let o = opts(tol);
    let mut r = rng(31);
    let brake = random_brake(&mut r, 2, true, *tol)?;
    let still = SymplecticPath::constant(identity(4), Domain::unit());
    for v in verify_brake2(&still, &brake, &o)? {
        expect_verdict(&v, 0, &[0, 0])?;
    }
    let plain = random_brake(&mut r, 2, false, *tol)?;
    let untwisted = plain.clone().with_twist(identity(4))?;
    let g = random_path(untwisted.space(), &mut r, Domain::unit(), 1.0, false)?;
    for v in verify_brake2(&g, &untwisted, &o)? {
        expect_matched(&v)?;
    }
    for kind in BrakeIdentity::ALL {
        let v = verify_brake_k(kind, &still, 3, &plain, &o)?;
        expect(&format!("{} of a constant path", kind.as_str()), v.lhs == 0 && v.rhs() == 0)?;
    }
    let model = darboux_brake(1, *tol)?;
    let g = random_path(model.space(), &mut r, Domain::unit(), 1.0, true)?;
    expect_matched(&verify_brake_k(BrakeIdentity::Power, &g, 2, &model, &o)?)
}

/// A named fixture.
pub struct Fixture {
    pub name: &'static str,
    run: fn(&Tolerances) -> Outcome,
}

pub fn fixtures() -> Vec<Fixture> {
    macro_rules! f {
        ($name:expr, $run:expr) => {
            Fixture { name: $name, run: $run }
        };
    }
    vec![
        f!("space-construction", space_fixtures),
        f!("normalize-space", normalize_fixtures),
        f!("polar-decompose", polar_fixtures),
        f!("random-symplectic", random_symplectic_fixtures),
        f!("annihilator", annihilator_fixtures),
        f!("pair-index", pair_index_fixtures),
        f!("crossing-form", crossing_form_fixtures),
        f!("maslov-pairs", maslov_pairs_fixtures),
        f!("graph-index", graph_index_fixtures),
        f!("convention-sign", sign_fixture),
        f!("positive-paths", positivity_fixtures),
        f!("winding-pair", winding_fixtures),
        f!("a-iterate", a_iterate_fixtures),
        f!("brake-iterate", brake_iterate_fixtures),
        f!("chebyshev", chebyshev_fixtures),
        f!("nullity-splitting", nullity_fixtures),
        f!("bott", bott_fixtures),
        f!("brake-identities", brake_identity_fixtures),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FixtureStatus {
    Pass,
    Fail,
    Unstable,
}

#[derive(Debug, Clone, Serialize)]
pub struct FixtureResult {
    pub name: &'static str,
    pub status: FixtureStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

pub fn run_fixture(f: &Fixture, tol: &Tolerances) -> FixtureResult {
    let (status, detail) = match (f.run)(tol) {
        Ok(()) => (FixtureStatus::Pass, None),
        Err(Failure::Mismatch(m)) => (FixtureStatus::Fail, Some(m)),
        Err(Failure::Core(e)) if e.is_numerical() => (FixtureStatus::Unstable, Some(e.to_string())),
        Err(Failure::Core(e)) => (FixtureStatus::Fail, Some(e.to_string())),
    };
    FixtureResult {
        name: f.name,
        status,
        detail,
    }
}

pub fn run_all(tol: &Tolerances) -> Vec<FixtureResult> {
    fixtures().iter().map(|f| run_fixture(f, tol)).collect()
}

/// Numerical instability outranks a failed fixture: under an unusable
/// tolerance the remaining verdicts are not trustworthy either.
pub fn exit_code(results: &[FixtureResult]) -> i32 {
    if results.iter().any(|r| r.status == FixtureStatus::Unstable) {
        exit::NUMERICAL
    } else if results.iter().any(|r| r.status == FixtureStatus::Fail) {
        exit::VIOLATION
    } else {
        exit::OK
    }
}
