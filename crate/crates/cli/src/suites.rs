//! Seeded instance families, one per check, and the suite names that group them.
//!
//! Every family draws its instance from `rng(seed)` alone, so a
//! `(check, seed, config)` triple reproduces a trial exactly.

use std::f64::consts::{PI, TAU};

use maslov_core::crossing::maslov_pairs_crossingform;
use maslov_core::iteration::brake::BrakeSymmetry;
use maslov_core::iteration::nullity::{cheb_power, split_nullity_brake, NullityPair, POWER_TOLERANCE};
use maslov_core::iteration::sampling::{
    darboux_brake, darboux_path, elliptic_path, elliptic_symplectic, random_brake, random_path, random_symplectic_in,
    special_angles,
};
use maslov_core::iteration::verify::{
    reference_path, verify_a_iteration, verify_bott, verify_bott_nullity, verify_brake2, verify_brake_k,
    verify_deformation, verify_delta_formula, verify_delta_well_defined, verify_product_positivity,
    verify_reflection_positivity, AIterationSpec, BrakeIdentity, VerdictReport,
};
use maslov_core::linalg::{block_diag, c, identity, try_inverse, unit, CMat};
use maslov_core::maslov::{graph_index, ConstantFrame, GraphPath, IndexOptions, ProductSpace};
use maslov_core::path::{Domain, SymplecticPath};
use maslov_core::polar::{random_lagrangian, unitary_from_blocks};
use maslov_core::random::{random_positive_definite, random_well_conditioned, rng, uniform, uniform_int, Rng};
use maslov_core::{Error, NormalizedSpace, Result, SymplecticSpace, Tolerances};

/// Largest Chebyshev power exercised.
pub const CHEBYSHEV_K_MAX: usize = 12;

/// Grid of the positivity checks.
const POSITIVITY_GRID: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    Bott,
    AIteration,
    Delta,
    Brake2,
    BrakeK(BrakeIdentity),
    NullityPower,
    NullityBrake,
    Chebyshev,
    Oracle,
    Deformation,
    Positivity,
    Sign,
}

impl Check {
    pub const ALL: [Check; 17] = [
        Check::Bott,
        Check::AIteration,
        Check::Delta,
        Check::Brake2,
        Check::BrakeK(BrakeIdentity::Product),
        Check::BrakeK(BrakeIdentity::Power),
        Check::BrakeK(BrakeIdentity::Odd),
        Check::BrakeK(BrakeIdentity::Doubled),
        Check::BrakeK(BrakeIdentity::IdentityIterate),
        Check::BrakeK(BrakeIdentity::OddIterate),
        Check::NullityPower,
        Check::NullityBrake,
        Check::Chebyshev,
        Check::Oracle,
        Check::Deformation,
        Check::Positivity,
        Check::Sign,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Check::Bott => "bott",
            Check::AIteration => "a-iteration",
            Check::Delta => "delta",
            Check::Brake2 => "brake2",
            Check::BrakeK(kind) => kind.as_str(),
            Check::NullityPower => "nullity-power",
            Check::NullityBrake => "nullity-brake",
            Check::Chebyshev => "chebyshev",
            Check::Oracle => "oracle",
            Check::Deformation => "deformation",
            Check::Positivity => "positivity",
            Check::Sign => "sign",
        }
    }

    /// Stable salt mixed into the trial seed; never renumber.
    pub fn salt(&self) -> u64 {
        Check::ALL.iter().position(|c| c == self).expect("listed") as u64 + 1
    }

    pub fn from_name(name: &str) -> Option<Check> {
        Check::ALL.iter().copied().find(|c| c.name() == name)
    }
}

pub const SUITES: [&str; 7] = ["bott", "brake2", "brake-k", "nullity", "chebyshev", "convention", "all"];

/// Checks run by a suite name; a single check name selects just that check.
pub fn resolve_suite(name: &str) -> Option<Vec<Check>> {
    let brake_k = BrakeIdentity::ALL.iter().map(|&k| Check::BrakeK(k));
    Some(match name {
        "bott" => vec![Check::Bott, Check::AIteration, Check::Delta],
        "brake2" => vec![Check::Brake2],
        "brake-k" => brake_k.collect(),
        "nullity" => vec![Check::NullityPower, Check::NullityBrake],
        "chebyshev" => vec![Check::Chebyshev],
        "convention" => vec![Check::Oracle, Check::Deformation, Check::Positivity, Check::Sign],
        "all" => Check::ALL.to_vec(),
        other => vec![Check::from_name(other)?],
    })
}

/// Sampling ranges and tolerances of a campaign.
#[derive(Debug, Clone, Copy)]
pub struct Ranges {
    pub dims: [usize; 2],
    pub k: [usize; 2],
    pub tol: Tolerances,
}

impl Ranges {
    fn n(&self, r: &mut Rng, cap: usize) -> usize {
        let hi = self.dims[1].min(cap).max(self.dims[0]);
        uniform_int(r, self.dims[0], hi)
    }

    fn k(&self, r: &mut Rng, cap: usize) -> usize {
        let hi = self.k[1].min(cap).max(self.k[0]);
        uniform_int(r, self.k[0], hi)
    }

    fn opts(&self) -> IndexOptions {
        IndexOptions::with_tolerances(self.tol)
    }

    fn canonical(&self, n: usize) -> Result<NormalizedSpace> {
        NormalizedSpace::new(SymplecticSpace::canonical(n).with_tolerances(self.tol))
    }
}

/// Runs one check on the instance drawn from `seed`.
pub fn run_check(check: Check, seed: u64, ranges: &Ranges) -> Result<Vec<VerdictReport>> {
    let mut r = rng(seed);
    let r = &mut r;
    let out = match check {
        Check::Bott => bott(r, ranges),
        Check::AIteration => a_iteration(r, ranges),
        Check::Delta => delta(r, ranges),
        Check::Brake2 => brake2(r, ranges),
        Check::BrakeK(kind) => brake_k(kind, r, ranges),
        Check::NullityPower => nullity_power(r, ranges),
        Check::NullityBrake => nullity_brake(r, ranges),
        Check::Chebyshev => chebyshev(r, ranges),
        Check::Oracle => oracle(r, ranges),
        Check::Deformation => deformation(r, ranges),
        Check::Positivity => positivity(r, ranges),
        Check::Sign => sign(r, ranges),
    }?;
    Ok(out.into_iter().map(|v| v.with_seed(seed)).collect())
}

fn bott(r: &mut Rng, g: &Ranges) -> Result<Vec<VerdictReport>> {
    let n = g.n(r, usize::MAX);
    let k = g.k(r, usize::MAX);
    let ns = g.canonical(n)?;
    let space = ns.space();
    let gamma = match uniform_int(r, 0, 2) {
        0 => tame_path(space, r, 1.5, true, k, |p| Ok(p.end().norm()))?,
        1 => tame_path(space, r, 1.5, false, k, |p| Ok(p.end().norm()))?,
        _ => {
            let plus = special_angles(r, n, k);
            let minus = special_angles(r, n, k);
            elliptic_path(&ns, r, &plus, &minus, 0.3)?
        }
    };
    Ok(vec![verify_bott(space, &gamma, k, &g.opts())?])
}

fn random_a(ns: &NormalizedSpace, r: &mut Rng, n: usize, k: usize) -> Result<CMat> {
    if uniform_int(r, 0, 2) == 0 {
        let plus = special_angles(r, n, k);
        let minus = special_angles(r, n, k);
        Ok(elliptic_symplectic(ns, r, &plus, &minus, 0.3))
    } else {
        random_symplectic_in(ns.space(), r, 0.3)
    }
}

fn a_spec(r: &mut Rng, g: &Ranges) -> Result<(NormalizedSpace, AIterationSpec)> {
    let n = g.n(r, usize::MAX);
    let k = g.k(r, usize::MAX);
    let ns = g.canonical(n)?;
    let gamma = random_path(ns.space(), r, Domain::unit(), 1.0, true)?;
    let a = random_a(&ns, r, n, k)?;
    let spec = AIterationSpec::new(ns.space(), gamma, a, k)?;
    Ok((ns, spec))
}

fn a_iteration(r: &mut Rng, g: &Ranges) -> Result<Vec<VerdictReport>> {
    let (ns, spec) = a_spec(r, g)?;
    Ok(verify_a_iteration(ns.space(), &spec, &g.opts())?.to_vec())
}

/// `t ↦ Q exp(tD) Q⁻¹` with `exp(D) = I`: a loop at `I` winding a random
/// number of times in each coordinate.
fn identity_loop(ns: &NormalizedSpace, r: &mut Rng) -> Result<SymplecticPath> {
    let n = ns.n_plus();
    let mut plus = CMat::zeros(n, n);
    let mut minus = CMat::zeros(n, n);
    for i in 0..n {
        plus[(i, i)] = c(0.0, TAU * (uniform_int(r, 0, 2) as f64 - 1.0));
        minus[(i, i)] = c(0.0, TAU * (uniform_int(r, 0, 2) as f64 - 1.0));
    }
    let generator = unitary_from_blocks(ns, &plus, &minus);
    let q = random_symplectic_in(ns.space(), r, 0.3)?;
    let q_inv = ns.space().symplectic_inverse(&q);
    SymplecticPath::right_mul(
        SymplecticPath::left_mul(q, SymplecticPath::exp(generator, Domain::unit()))?,
        q_inv,
    )
}

fn delta(r: &mut Rng, g: &Ranges) -> Result<Vec<VerdictReport>> {
    let (ns, spec) = a_spec(r, g)?;
    let space = ns.space();
    let opts = g.opts();
    let formula = verify_delta_formula(space, &spec, &opts)?;
    let end = spec.gamma.end();
    let first = reference_path(&ns, &end)?;
    let second = SymplecticPath::product(identity_loop(&ns, r)?, spec.gamma.clone())?;
    let well_defined = verify_delta_well_defined(space, &first, &second, spec.k, &opts)?;
    Ok(vec![formula, well_defined])
}

fn brake2(r: &mut Rng, g: &Ranges) -> Result<Vec<VerdictReport>> {
    let n = g.n(r, 3);
    let brake = if uniform_int(r, 0, 3) == 0 {
        let plain = random_brake(r, n, false, g.tol)?;
        let dim = plain.space().dim();
        plain.with_twist(identity(dim))?
    } else {
        random_brake(r, n, true, g.tol)?
    };
    let from_identity = uniform_int(r, 0, 2) != 0;
    let gamma1 = random_path(brake.space(), r, Domain::unit(), 1.5, from_identity)?;
    verify_brake2(&gamma1, &brake, &g.opts())
}

/// `diag(I, K^{-*})` and its inverse: carries the Darboux model symplectically
/// onto the normal form with block `K`, commuting with `N`.
/// Bound on `‖M‖^k` for generic instances.
const POWER_GROWTH_LIMIT: f64 = 1e6;
const MAX_REDRAWS: usize = 16;

/// Random path whose monodromy size `growth(path)` satisfies
/// `growth^k ≤ POWER_GROWTH_LIMIT`. Rank decisions on `M^k` are meaningless
/// once `‖M‖^k` approaches `1/ε`, so such draws are replaced; after
/// `MAX_REDRAWS` attempts the last draw is kept.
fn tame_path(
    space: &SymplecticSpace,
    r: &mut Rng,
    scale: f64,
    from_identity: bool,
    k: usize,
    growth: impl Fn(&SymplecticPath) -> Result<f64>,
) -> Result<SymplecticPath> {
    let mut path = random_path(space, r, Domain::unit(), scale, from_identity)?;
    for _ in 0..MAX_REDRAWS {
        if (k as f64) * growth(&path)?.ln() <= POWER_GROWTH_LIMIT.ln() {
            break;
        }
        path = random_path(space, r, Domain::unit(), scale, from_identity)?;
    }
    Ok(path)
}

fn darboux_transfer(k: &CMat) -> Result<(CMat, CMat)> {
    let n = k.nrows();
    let k_inv = try_inverse(k)?;
    Ok((
        block_diag(&identity(n), &k_inv.adjoint()),
        block_diag(&identity(n), &k.adjoint()),
    ))
}

/// Brake data with a path from `I`; structured draws land on the special
/// roots the identities care about. Draws whose brake product `M` has
/// `‖M‖^k` beyond `POWER_GROWTH_LIMIT` are replaced, as for [`tame_path`].
fn brake_instance(r: &mut Rng, n: usize, k: usize, tol: Tolerances) -> Result<(BrakeSymmetry, SymplecticPath)> {
    let mut drawn = draw_brake_instance(r, n, k, tol)?;
    for _ in 0..MAX_REDRAWS {
        let m = drawn.0.brake_product(&drawn.1.end())?;
        if (k as f64) * m.norm().ln() <= POWER_GROWTH_LIMIT.ln() {
            break;
        }
        drawn = draw_brake_instance(r, n, k, tol)?;
    }
    Ok(drawn)
}

fn draw_brake_instance(r: &mut Rng, n: usize, k: usize, tol: Tolerances) -> Result<(BrakeSymmetry, SymplecticPath)> {
    match uniform_int(r, 0, 2) {
        0 => Ok((darboux_brake(n, tol)?, darboux_path(r, n, k)?)),
        1 => {
            let kk = random_well_conditioned(r, n, 0.1);
            let brake = BrakeSymmetry::from_normal_form(kk.clone(), tol)?;
            let (t, t_inv) = darboux_transfer(&kk)?;
            let path = SymplecticPath::right_mul(SymplecticPath::left_mul(t, darboux_path(r, n, k)?)?, t_inv)?;
            Ok((brake, path))
        }
        _ => {
            let brake = random_brake(r, n, false, tol)?;
            let path = random_path(brake.space(), r, Domain::unit(), 0.8, true)?;
            Ok((brake, path))
        }
    }
}

fn brake_k(kind: BrakeIdentity, r: &mut Rng, g: &Ranges) -> Result<Vec<VerdictReport>> {
    let n = g.n(r, 2);
    let k = g.k(r, 5);
    let (brake, gamma1) = brake_instance(r, n, k, g.tol)?;
    Ok(vec![verify_brake_k(kind, &gamma1, k, &brake, &g.opts())?])
}

fn nullity_power(r: &mut Rng, g: &Ranges) -> Result<Vec<VerdictReport>> {
    let n = g.n(r, usize::MAX);
    let k = g.k(r, usize::MAX);
    let (space, m) = match uniform_int(r, 0, 3) {
        0 => {
            let ns = g.canonical(n)?;
            let plus = special_angles(r, n, k);
            let minus = special_angles(r, n, k);
            let m = elliptic_symplectic(&ns, r, &plus, &minus, 0.3);
            (ns.space().clone(), m)
        }
        1 => {
            let brake = darboux_brake(n, g.tol)?;
            let m = darboux_path(r, n, k)?.end();
            (brake.space().clone(), m)
        }
        2 => {
            let ns = g.canonical(n)?;
            let m = random_symplectic_in(ns.space(), r, 0.5)?;
            (ns.space().clone(), m)
        }
        _ => {
            let ns = g.canonical(n)?;
            let z = unit(TAU * uniform_int(r, 0, k - 1) as f64 / k as f64);
            (ns.space().clone(), identity(2 * n).map(|x| x * z))
        }
    };
    Ok(vec![verify_bott_nullity(&space, &m, k)?])
}

fn pair_verdicts(name: &str, lhs: NullityPair, rhs: &[NullityPair], n: usize, k: usize) -> [VerdictReport; 2] {
    [
        VerdictReport::new(name, lhs.0 as i64, rhs.iter().map(|p| p.0 as i64).collect(), n).with_k(k),
        VerdictReport::new(
            &format!("{name}-co"),
            lhs.1 as i64,
            rhs.iter().map(|p| p.1 as i64).collect(),
            n,
        )
        .with_k(k),
    ]
}

fn nullity_brake(r: &mut Rng, g: &Ranges) -> Result<Vec<VerdictReport>> {
    let n = g.n(r, usize::MAX);
    let k = g.k(r, usize::MAX);
    let (brake, path) = brake_instance(r, n, k, g.tol)?;
    let split = split_nullity_brake(&path.end(), k, &brake)?;
    let mut out = Vec::with_capacity(6);
    out.extend(pair_verdicts("brake-product-nullity", split.m_pp, &[split.p_pp, split.p_pm], n, k));
    let mut power_rhs = vec![split.m_pp];
    power_rhs.extend(split.half_roots.iter().copied());
    out.extend(pair_verdicts("brake-power-nullity", split.mk_pp, &power_rhs, n, k));
    let mut odd_rhs = vec![split.p_pp];
    odd_rhs.extend(split.odd_roots.iter().copied());
    out.extend(pair_verdicts("brake-odd-nullity", split.pmk_pp, &odd_rhs, n, k));
    let last = out.len() - 1;
    out[last] = out[last]
        .clone()
        .detail("triangular_residual", split.triangular_residual)
        .detail("b3_residual", split.b3_residual);
    Ok(out)
}

fn chebyshev(r: &mut Rng, g: &Ranges) -> Result<Vec<VerdictReport>> {
    let n = g.n(r, usize::MAX);
    let k = uniform_int(r, 1, CHEBYSHEV_K_MAX);
    let (brake, p) = if uniform_int(r, 0, 1) == 0 {
        let (brake, path) = brake_instance(r, n, k, g.tol)?;
        (brake, path.end())
    } else {
        let brake = random_brake(r, n, false, g.tol)?;
        let p = random_symplectic_in(brake.space(), r, 0.4)?;
        (brake, p)
    };
    let m = brake.brake_product(&p)?;
    let cp = cheb_power(&m, k, &brake)?;
    let within = (cp.residual <= POWER_TOLERANCE) as i64;
    Ok(vec![VerdictReport::new("chebyshev-power", within, vec![1], n)
        .with_k(k)
        .detail("residual", cp.residual)
        .detail("block_residual", cp.blocks.max())])
}

fn oracle(r: &mut Rng, g: &Ranges) -> Result<Vec<VerdictReport>> {
    let n = g.n(r, usize::MAX);
    let ns = g.canonical(n)?;
    let space = ns.space();
    let ps = ProductSpace::new(space);
    let gamma = random_path(space, r, Domain::unit(), 1.5, false)?;
    let v = if uniform_int(r, 0, 1) == 0 {
        ps.circle_graph(unit(uniform(r, -PI, PI)))
    } else {
        let nx = NormalizedSpace::new(ps.total().clone())?;
        random_lagrangian(&nx, r, 0.5)?
    };
    let opts = g.opts();
    let winding = graph_index(&ps, &gamma, &v, &opts)?;
    let domain = gamma.domain();
    let crossing = maslov_pairs_crossingform(
        ps.total(),
        &GraphPath(gamma),
        &ConstantFrame { frame: v, domain },
        domain,
        &opts,
    )?;
    Ok(vec![VerdictReport::new("oracle", winding.index, vec![crossing.index], n)
        .detail("crossings", crossing.crossings.len() as f64)])
}

fn deformation(r: &mut Rng, g: &Ranges) -> Result<Vec<VerdictReport>> {
    let n = g.n(r, usize::MAX);
    let ns = g.canonical(n)?;
    let space = ns.space();
    let ps = ProductSpace::new(space);
    let gamma = random_path(space, r, Domain::unit(), 1.5, false)?;
    let v = ps.circle_graph(unit(uniform(r, 0.0, TAU)));
    let s0 = uniform(r, 0.5, 7.0);
    Ok(vec![verify_deformation(space, &gamma, &v, s0, &g.opts())?])
}

/// `e^{tX}M₀` with `−JX = P > 0`.
fn positive_path(space: &SymplecticSpace, r: &mut Rng) -> Result<SymplecticPath> {
    let p = random_positive_definite(r, space.dim(), 0.2);
    let x = space.positive_generator(&p);
    let m0 = random_symplectic_in(space, r, 0.4)?;
    SymplecticPath::right_mul(SymplecticPath::exp(x, Domain::unit()), m0)
}

fn positivity(r: &mut Rng, g: &Ranges) -> Result<Vec<VerdictReport>> {
    let n = g.n(r, usize::MAX);
    let brake = random_brake(r, n, false, g.tol)?;
    let space = brake.space();
    let first = positive_path(space, r)?;
    let second = positive_path(space, r)?;
    let product = verify_product_positivity(space, &first, &second, POSITIVITY_GRID)?;
    let reflection = verify_reflection_positivity(&first, &brake, POSITIVITY_GRID)?;
    for v in [&product, &reflection] {
        if v.rhs() != 1 {
            return Err(Error::IdentityViolated(format!("{}: sampled input path is not positive", v.identity)));
        }
    }
    Ok(vec![product, reflection])
}

fn sign(r: &mut Rng, g: &Ranges) -> Result<Vec<VerdictReport>> {
    let n = g.n(r, usize::MAX);
    let ns = g.canonical(n)?;
    let space = ns.space();
    let gamma = random_path(space, r, Domain::unit(), 1.5, false)?;
    let v = ProductSpace::new(space).circle_graph(unit(uniform(r, -PI, PI)));
    let opts = g.opts();
    let plus = graph_index(&ProductSpace::new(space), &gamma, &v, &opts)?.index;
    let minus = graph_index(&ProductSpace::new(&space.negated()), &gamma, &v, &opts)?.index;
    Ok(vec![VerdictReport::new("sign-flip", minus, vec![-plus], n)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_resolve() {
        for s in SUITES {
            assert!(!resolve_suite(s).unwrap().is_empty(), "{s}");
        }
        for c in Check::ALL {
            let got = resolve_suite(c.name()).unwrap();
            if SUITES.contains(&c.name()) {
                assert!(got.contains(&c), "{}", c.name());
            } else {
                assert_eq!(got, vec![c]);
            }
        }
        assert!(resolve_suite("nope").is_none());
        assert_eq!(resolve_suite("all").unwrap().len(), Check::ALL.len());
    }

    #[test]
    fn salts_are_distinct() {
        let mut salts: Vec<u64> = Check::ALL.iter().map(|c| c.salt()).collect();
        salts.sort();
        salts.dedup();
        assert_eq!(salts.len(), Check::ALL.len());
    }

    #[test]
    fn darboux_transfer_is_symplectic() {
        let mut r = rng(4);
        let kk = random_well_conditioned(&mut r, 2, 0.1);
        let brake = BrakeSymmetry::from_normal_form(kk.clone(), Tolerances::default()).unwrap();
        let model = darboux_brake(2, Tolerances::default()).unwrap();
        let (t, t_inv) = darboux_transfer(&kk).unwrap();
        let pulled = t.adjoint() * brake.space().j() * &t;
        assert!((pulled - model.space().j()).norm() < 1e-10);
        assert!((&t * &t_inv - identity(4)).norm() < 1e-12);
        assert!((&t * brake.n() - brake.n() * &t).norm() < 1e-12);
    }
}
