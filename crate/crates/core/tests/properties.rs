use std::f64::consts::{PI, TAU};

use maslov_core::iteration::chebyshev::{chebyshev_r, chebyshev_t, chebyshev_u, eval};
use maslov_core::iteration::nullity::split_nullity_power;
use maslov_core::iteration::sampling::{random_path, random_symplectic_in};
use maslov_core::lagrangian::{is_lagrangian, pair_index};
use maslov_core::linalg::{identity, relative_distance, unit, unitary_eigen, CMat};
use maslov_core::maslov::{graph_index, iz, maslov_pairs, nullities, ActionPath, ConstantFrame, IndexOptions, ProductSpace};
use maslov_core::path::{Domain, SymplecticPath};
use maslov_core::polar::{from_coordinates, polar_decompose, random_lagrangian, random_symplectic};
use maslov_core::positivity::winding_pair;
use maslov_core::random::{haar_unitary, random_hermitian, random_well_conditioned, rng, uniform};
use maslov_core::space::inverse_formula_residual;
use maslov_core::{NormalizedSpace, SymplecticSpace, Tolerances};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

/// Fixed seed and case count unless overridden through the usual
/// `PROPTEST_CASES` / `PROPTEST_RNG_SEED` variables.
fn config(cases: u32) -> ProptestConfig {
    let mut c = ProptestConfig::default();
    if std::env::var_os("PROPTEST_CASES").is_none() {
        c.cases = cases;
    }
    if std::env::var_os("PROPTEST_RNG_SEED").is_none() {
        c.rng_seed = RngSeed::Fixed(0x6d61_736c_6f76);
    }
    c.failure_persistence = None;
    c
}

/// Structure map `iH` for a random invertible Hermitian `H` with both signs.
fn skew_space(seed: u64, n: usize) -> SymplecticSpace {
    let mut r = rng(seed);
    let q = haar_unitary(&mut r, 2 * n);
    let d = CMat::from_fn(2 * n, 2 * n, |i, j| {
        if i != j {
            maslov_core::linalg::c(0.0, 0.0)
        } else {
            let mag = uniform(&mut r, 0.5, 3.0);
            maslov_core::linalg::c(0.0, if i < n { mag } else { -mag })
        }
    });
    SymplecticSpace::new(&q * d * q.adjoint(), Tolerances::default()).unwrap()
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn normalization_postconditions(seed in any::<u64>(), n in 1usize..=3) {
        let s = skew_space(seed, n);
        let norm = s.normalize().unwrap();
        let j1 = norm.normalized.space().j();
        prop_assert!(relative_distance(&(j1 * j1), &(-identity(2 * n))) < 1e-10);
        prop_assert!(relative_distance(&(norm.transfer.adjoint() * j1 * &norm.transfer), s.j()) < 1e-10);
        let m = random_symplectic_in(&s, &mut rng(seed ^ 1), 0.5).unwrap();
        prop_assert!(s.symplectic_residual(&m) < 1e-9);
        prop_assert!(norm.normalized.space().symplectic_residual(&norm.conjugate(&m)) < 1e-9);
    }

    #[test]
    fn inverse_formula_holds(seed in any::<u64>(), n in 1usize..=3) {
        let s = skew_space(seed, n);
        let m = random_symplectic_in(&s, &mut rng(seed), 0.6).unwrap();
        prop_assert!(inverse_formula_residual(&s, &m) < 1e-9);
    }

    #[test]
    fn polar_round_trip_and_uniqueness(seed in any::<u64>(), n in 1usize..=3, scale in 0.0f64..1.5) {
        let ns = NormalizedSpace::canonical(n);
        let m = random_symplectic(&ns, &mut rng(seed), scale);
        let p = polar_decompose(&ns, &m).unwrap();
        prop_assert!(p.residual <= 1e-9);
        prop_assert!(relative_distance(&(&p.unitary.adjoint() * &p.unitary), &identity(2 * n)) < 1e-10);
        prop_assert!(ns.space().symplectic_residual(&p.positive) < 1e-9);
        let back = from_coordinates(&ns, &p.s12, &p.u11, &p.u22);
        prop_assert!(relative_distance(&back, &m) < 1e-9);
        let again = polar_decompose(&ns, &(&p.positive * &p.unitary)).unwrap();
        prop_assert!(relative_distance(&again.unitary, &p.unitary) < 1e-9);
    }

    #[test]
    fn pair_index_is_a_function_of_spans(seed in any::<u64>(), n in 1usize..=3) {
        let ns = NormalizedSpace::canonical(n);
        let mut r = rng(seed);
        let l = random_lagrangian(&ns, &mut r, 0.7).unwrap();
        let m = if seed % 3 == 0 { l.clone() } else { random_lagrangian(&ns, &mut r, 0.7).unwrap() };
        let g = random_well_conditioned(&mut r, n, 0.3);
        let h = random_well_conditioned(&mut r, n, 0.3);
        let a = pair_index(ns.space(), &l, &m).unwrap();
        let b = pair_index(ns.space(), &(&l * g), &(&m * h)).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!(is_lagrangian(ns.space(), &l).unwrap());
        prop_assert_eq!(a.dim_cap, a.codim_sum);
    }

    #[test]
    fn maslov_index_ignores_frame_choice(seed in any::<u64>(), n in 1usize..=2) {
        let ns = NormalizedSpace::canonical(n);
        let mut r = rng(seed);
        let base = random_lagrangian(&ns, &mut r, 0.5).unwrap();
        let target = random_lagrangian(&ns, &mut r, 0.5).unwrap();
        let path = random_path(ns.space(), &mut r, Domain::unit(), 1.5, false).unwrap();
        let g = random_well_conditioned(&mut r, n, 0.3);
        let opts = IndexOptions::default();
        let run = |b: &CMat, t: &CMat| {
            let lambda = ActionPath { path: path.clone(), base: b.clone() };
            let mu = ConstantFrame { frame: t.clone(), domain: Domain::unit() };
            maslov_pairs(ns.space(), &lambda, &mu, Domain::unit(), &opts).unwrap().index
        };
        prop_assert_eq!(run(&base, &target), run(&(&base * &g), &(&target * g.adjoint())));
    }

    #[test]
    fn index_is_additive_under_concatenation(seed in any::<u64>(), n in 1usize..=3, theta in -PI..PI) {
        let ns = NormalizedSpace::canonical(n);
        let ps = ProductSpace::new(ns.space());
        let mut r = rng(seed);
        let first = random_path(ns.space(), &mut r, Domain::unit(), 1.5, true).unwrap();
        let gen = ns.space().generator(&random_hermitian(&mut r, 2 * n, 1.5));
        let step = SymplecticPath::exp_affine(gen, 1.0, -1.0, Domain::new(1.0, 2.0).unwrap());
        let second = SymplecticPath::right_mul(step, first.end()).unwrap();
        let whole = SymplecticPath::concat(first.clone(), second.clone()).unwrap();
        let opts = IndexOptions::default();
        let z = unit(theta);
        let a = iz(&ps, &first, z, &opts).unwrap();
        let b = iz(&ps, &second, z, &opts).unwrap();
        prop_assert_eq!(iz(&ps, &whole, z, &opts).unwrap(), a + b);
    }

    #[test]
    fn sign_flips_with_the_structure(seed in any::<u64>(), n in 1usize..=3, theta in -PI..PI) {
        let ns = NormalizedSpace::canonical(n);
        let mut r = rng(seed);
        let path = random_path(ns.space(), &mut r, Domain::unit(), 1.5, false).unwrap();
        let opts = IndexOptions::default();
        let plus = ProductSpace::new(ns.space());
        let minus = ProductSpace::new(&ns.space().negated());
        let v = plus.circle_graph(unit(theta));
        let a = graph_index(&plus, &path, &v, &opts).unwrap().index;
        let b = graph_index(&minus, &path, &v, &opts).unwrap().index;
        prop_assert_eq!(a, -b);
    }

    #[test]
    fn nullity_equals_conullity(seed in any::<u64>(), n in 1usize..=3, theta in -PI..PI) {
        let ns = NormalizedSpace::canonical(n);
        let ps = ProductSpace::new(ns.space());
        let m = random_symplectic(&ns, &mut rng(seed), 0.5);
        let (nu, co) = nullities(&ps, &m, &ps.circle_graph(unit(theta)), &Tolerances::default()).unwrap();
        prop_assert_eq!(nu, co);
        let (nu, co) = nullities(&ps, &identity(2 * n), &ps.circle_graph(unit(0.0)), &Tolerances::default()).unwrap();
        prop_assert_eq!((nu, co), (2 * n, 2 * n));
    }

    #[test]
    fn winding_pair_adds_over_products(seed in any::<u64>(), n in 1usize..=2, a in -3i64..=3, b in -3i64..=3) {
        let ns = NormalizedSpace::canonical(n);
        let mut r = rng(seed);
        let q = random_symplectic(&ns, &mut r, 0.0);
        let loop_with = |p: i64, m: i64| {
            let d = CMat::from_fn(2 * n, 2 * n, |i, j| {
                let w = if i != j { 0.0 } else if i == 0 { p as f64 } else if i == n { m as f64 } else { 0.0 };
                maslov_core::linalg::c(0.0, TAU * w)
            });
            SymplecticPath::exp(&q * d * q.adjoint(), Domain::unit())
        };
        prop_assert_eq!(winding_pair(&ns, &loop_with(a, b)).unwrap(), (a, b));
        let prod = SymplecticPath::product(loop_with(a, 0), loop_with(0, b)).unwrap();
        prop_assert_eq!(winding_pair(&ns, &prod).unwrap(), (a, b));
    }

    #[test]
    fn power_nullity_splits_over_roots(seed in any::<u64>(), n in 1usize..=3, k in 1usize..=6) {
        let ns = NormalizedSpace::canonical(n);
        let m = random_symplectic(&ns, &mut rng(seed), 0.4);
        let split = split_nullity_power(&m, k, &Tolerances::default()).unwrap();
        prop_assert_eq!(split.total, split.power_nullity);
    }

    #[test]
    fn chebyshev_polynomials_match_trigonometry(theta in 0.05f64..3.09, k in 1usize..=12) {
        let x = theta.cos();
        let t = eval(&chebyshev_t(k).unwrap(), x);
        prop_assert!((t - (k as f64 * theta).cos()).abs() < 1e-9);
        let u = eval(&chebyshev_u(k as i64 - 1).unwrap(), x);
        prop_assert!((u - (k as f64 * theta).sin() / theta.sin()).abs() < 1e-7);
        prop_assert!(chebyshev_r(k).is_ok());
    }

    #[test]
    fn unitary_eigen_diagonalizes(seed in any::<u64>(), n in 1usize..=6, clustered in any::<bool>()) {
        let mut r = rng(seed);
        let q = haar_unitary(&mut r, n);
        let d = CMat::from_fn(n, n, |i, j| {
            if i != j {
                maslov_core::linalg::c(0.0, 0.0)
            } else if clustered {
                unit(1.0 + 1e-9 * i as f64)
            } else {
                unit(uniform(&mut r, -PI, PI))
            }
        });
        let u = &q * d * q.adjoint();
        let (values, vectors) = unitary_eigen(&u);
        let rebuilt = &vectors * CMat::from_diagonal(&nalgebra_diag(&values)) * vectors.adjoint();
        prop_assert!(relative_distance(&rebuilt, &u) < 1e-9);
    }
}

fn nalgebra_diag(values: &[maslov_core::linalg::Complex64]) -> maslov_core::linalg::CVec {
    maslov_core::linalg::CVec::from_column_slice(values)
}

#[test]
fn seeded_generators_are_deterministic() {
    let ns = NormalizedSpace::canonical(2);
    let a = random_symplectic(&ns, &mut rng(42), 0.9);
    let b = random_symplectic(&ns, &mut rng(42), 0.9);
    assert_eq!(a, b);
    let p = random_path(ns.space(), &mut rng(42), Domain::unit(), 1.0, true).unwrap();
    let q = random_path(ns.space(), &mut rng(42), Domain::unit(), 1.0, true).unwrap();
    assert_eq!(p.eval(0.37), q.eval(0.37));
}
