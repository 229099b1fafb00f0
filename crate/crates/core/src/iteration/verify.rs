//! Dual-side verifiers: each computes both sides of an iteration identity
//! independently and reports an exact integer verdict.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

use crate::crossing::positive_crossing_nullity;
use crate::error::{Error, Result};
use crate::iteration::brake::BrakeSymmetry;
use crate::iteration::nullity::{split_nullity_power, twist_splitting};
use crate::lagrangian::{check_lagrangian, graph_frame, product_frame};
use crate::linalg::{identity, power, relative_distance, try_inverse, unit, unitary_log, CMat};
use crate::maslov::{graph_index, nullity, ConstantFrame, GraphPath, IndexOptions, ProductSpace};
use crate::path::{Domain, SymplecticPath};
use crate::polar::{hermitian_generator, polar_decompose, unitary_from_blocks};
use crate::positivity::is_positive_path;
use crate::space::{NormalizedSpace, SymplecticSpace};

/// Outcome of one identity check: `lhs` against `Σ rhs_terms`.
#[derive(Debug, Clone, PartialEq)]
pub struct VerdictReport {
    pub identity: String,
    pub lhs: i64,
    pub rhs_terms: Vec<i64>,
    pub matched: bool,
    pub seed: Option<u64>,
    /// Half dimension `n`.
    pub dims: usize,
    pub k: Option<usize>,
    /// Free-form diagnostics (margins, residuals, side counts).
    pub details: Vec<(String, f64)>,
}

impl VerdictReport {
    pub fn new(identity: &str, lhs: i64, rhs_terms: Vec<i64>, dims: usize) -> Self {
        let matched = lhs == rhs_terms.iter().sum::<i64>();
        VerdictReport {
            identity: identity.to_string(),
            lhs,
            rhs_terms,
            matched,
            seed: None,
            dims,
            k: None,
            details: Vec::new(),
        }
    }

    pub fn rhs(&self) -> i64 {
        self.rhs_terms.iter().sum()
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    pub fn detail(mut self, name: &str, value: f64) -> Self {
        self.details.push((name.to_string(), value));
        self
    }
}

/// Input of the `A`-iteration: `γ ∈ P_τ` (so `γ(0) = I`), `A` symplectic, `k ≥ 1`.
#[derive(Debug, Clone)]
pub struct AIterationSpec {
    pub a: CMat,
    pub k: usize,
    pub gamma: SymplecticPath,
}

impl AIterationSpec {
    pub fn new(space: &SymplecticSpace, gamma: SymplecticPath, a: CMat, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("iteration count must be positive".into()));
        }
        space.check_symplectic(&a)?;
        let d = gamma.domain();
        if d.start != 0.0 {
            return Err(Error::InvalidArgument("A-iteration paths start at t = 0".into()));
        }
        let start = gamma.eval(0.0);
        let gap = relative_distance(&start, &identity(space.dim()));
        if gap > 1e-9 {
            return Err(Error::InvalidArgument(alloc::format!(
                "A-iteration needs gamma(0) = I (mismatch {gap:.3e})"
            )));
        }
        Ok(AIterationSpec { a, k, gamma })
    }

    pub fn tau(&self) -> f64 {
        self.gamma.domain().end
    }

    /// `A⁻¹γ(τ)`.
    pub fn poincare_map(&self) -> Result<CMat> {
        Ok(try_inverse(&self.a)? * self.gamma.eval(self.tau()))
    }
}

/// The `k`-th `A`-iteration `γ̃` on `[0, kτ]`.
pub fn a_iterate(spec: &AIterationSpec) -> Result<SymplecticPath> {
    SymplecticPath::a_iterate(spec.gamma.clone(), spec.a.clone(), spec.k)
}

/// The `k`-th `N`-brake iteration `γ^{(k)}` on `[0, kτ]`.
pub fn brake_iterate(gamma: &SymplecticPath, k: usize, brake: &BrakeSymmetry) -> Result<SymplecticPath> {
    SymplecticPath::brake_iterate(gamma.clone(), brake.n().clone(), k)
}

/// `Nγ(τ)⁻¹Nγ(τ)`, the `2τ` Poincaré map of the brake iteration.
pub fn brake_poincare_map(gamma: &SymplecticPath, brake: &BrakeSymmetry) -> Result<CMat> {
    brake.brake_product(&gamma.end())
}

/// `t ↦ Nγ₁(t)⁻¹Nγ₁(t)`.
pub fn brake_product_path(gamma1: &SymplecticPath, brake: &BrakeSymmetry) -> Result<SymplecticPath> {
    SymplecticPath::product(
        SymplecticPath::conjugation(brake.n().clone(), gamma1.clone()),
        gamma1.clone(),
    )
}

/// Largest `‖(Nγ(t))² − I‖` over a grid, for directly supplied paths that
/// claim the brake hypothesis.
pub fn check_brake_path(gamma: &SymplecticPath, brake: &BrakeSymmetry, grid: usize) -> Result<f64> {
    let d = gamma.domain();
    let grid = grid.max(1);
    let mut worst: f64 = 0.0;
    for i in 0..=grid {
        let t = d.start + d.length() * i as f64 / grid as f64;
        worst = worst.max(brake.involution_defect(&gamma.eval(t)));
    }
    if worst > 1e-8 {
        return Err(Error::NotBrakeInvolution(worst));
    }
    Ok(worst)
}

fn index(ps: &ProductSpace, gamma: &SymplecticPath, v: &CMat, opts: &IndexOptions) -> Result<i64> {
    Ok(graph_index(ps, gamma, v, opts)?.index)
}

fn iz(ps: &ProductSpace, gamma: &SymplecticPath, angle: f64, opts: &IndexOptions) -> Result<i64> {
    index(ps, gamma, &ps.circle_graph(unit(angle)), opts)
}

/// `i₁(γ^k) = Σ_{z^k=1} i_z(γ)` for the pointwise power.
pub fn verify_bott(space: &SymplecticSpace, gamma: &SymplecticPath, k: usize, opts: &IndexOptions) -> Result<VerdictReport> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let ps = ProductSpace::new(space);
    let lhs = iz(&ps, &SymplecticPath::power(gamma.clone(), k), 0.0, opts)?;
    let rhs = (0..k)
        .map(|j| iz(&ps, gamma, TAU * j as f64 / k as f64, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerdictReport::new("bott", lhs, rhs, space.half_dim()).with_k(k))
}

/// `ν₁(M^k) = Σ_{z^k=1} ν_z(M)` through the graph intersections in `X`,
/// cross-checked against the eigenspace count.
pub fn verify_bott_nullity(space: &SymplecticSpace, m: &CMat, k: usize) -> Result<VerdictReport> {
    let ps = ProductSpace::new(space);
    let tol = space.tolerances();
    let lhs = nullity(&ps, &power(m, k), &ps.circle_graph(unit(0.0)), tol)?;
    let rhs = (0..k)
        .map(|j| nullity(&ps, m, &ps.circle_graph(unit(TAU * j as f64 / k as f64)), tol).map(|x| x as i64))
        .collect::<Result<Vec<_>>>()?;
    let split = split_nullity_power(m, k, tol)?;
    let eigen: Vec<usize> = split.roots.iter().map(|r| r.nullity).collect();
    if eigen.iter().zip(&rhs).any(|(&a, &b)| a as i64 != b) {
        return Err(Error::IdentityViolated(alloc::format!(
            "graph nullities {rhs:?} differ from eigenspace dimensions {eigen:?}"
        )));
    }
    Ok(VerdictReport::new("bott-nullity", lhs as i64, rhs, space.half_dim()).with_k(k))
}

/// Index and nullity forms of the `A`-iteration identity:
/// `i_{A^k}(γ̃) = Σ_z i_{zA}(γ)` and `ν_{A^k}(γ̃(kτ)) = Σ_z ν_{zA}(γ(τ))`.
pub fn verify_a_iteration(
    space: &SymplecticSpace,
    spec: &AIterationSpec,
    opts: &IndexOptions,
) -> Result<[VerdictReport; 2]> {
    let ps = ProductSpace::new(space);
    let k = spec.k;
    let tilde = a_iterate(spec)?;
    let ak = power(&spec.a, k);
    let lhs = index(&ps, &tilde, &graph_frame(&ak), opts)?;
    let end = spec.gamma.end();
    let mut rhs = Vec::with_capacity(k);
    let mut rhs_nullity = Vec::with_capacity(k);
    for j in 0..k {
        let za = spec.a.map(|x| x * unit(TAU * j as f64 / k as f64));
        let v = graph_frame(&za);
        rhs.push(index(&ps, &spec.gamma, &v, opts)?);
        rhs_nullity.push(nullity(&ps, &end, &v, &opts.tol)? as i64);
    }
    let lhs_nullity = nullity(&ps, &tilde.end(), &graph_frame(&ak), &opts.tol)? as i64;
    let n = space.half_dim();
    let mismatch = tilde.junction_mismatches().into_iter().map(|(_, m)| m).fold(0.0, f64::max);
    Ok([
        VerdictReport::new("a-iteration", lhs, rhs, n)
            .with_k(k)
            .detail("junction_mismatch", mismatch),
        VerdictReport::new("a-iteration-nullity", lhs_nullity, rhs_nullity, n).with_k(k),
    ])
}

/// Reference path from `I` to `M`: `exp(tS(S₁₂)) exp(tL)` on `[0, 1]`, where
/// `M = exp(S(S₁₂))(U₁₁ ⊕ U₂₂)` and `L` is the principal logarithm of the
/// unitary factor.
pub fn reference_path(ns: &NormalizedSpace, m: &CMat) -> Result<SymplecticPath> {
    let polar = polar_decompose(ns, m)?;
    let s = hermitian_generator(ns, &polar.s12);
    let log_u = unitary_from_blocks(ns, &unitary_log(&polar.u11), &unitary_log(&polar.u22));
    let domain = Domain::unit();
    let path = SymplecticPath::product(SymplecticPath::exp(s, domain), SymplecticPath::exp(log_u, domain))?;
    let gap = relative_distance(&path.end(), m);
    if gap > 1e-8 {
        return Err(Error::IdentityViolated(alloc::format!(
            "reference path misses its endpoint by {gap:.3e}"
        )));
    }
    Ok(path)
}

/// `i₁(α, k, I) − k·i₁(α, 1, I)` along a given `α ∈ P_τ`.
pub fn delta_k_along(space: &SymplecticSpace, alpha: &SymplecticPath, k: usize, opts: &IndexOptions) -> Result<i64> {
    let ps = ProductSpace::new(space);
    let id = identity(space.dim());
    let spec = AIterationSpec::new(space, alpha.clone(), id.clone(), k)?;
    let v = graph_frame(&id);
    let iterated = index(&ps, &a_iterate(&spec)?, &v, opts)?;
    let single = index(&ps, alpha, &v, opts)?;
    Ok(iterated - k as i64 * single)
}

/// `δ_k(M)` along the reference path; non-normalized spaces are first carried
/// to their normalized copy.
pub fn delta_k(space: &SymplecticSpace, m: &CMat, k: usize, opts: &IndexOptions) -> Result<i64> {
    space.check_symplectic(m)?;
    let norm = space.normalize()?;
    let ns = norm.normalized.clone();
    let m1 = norm.conjugate(m);
    let alpha = reference_path(&ns, &m1)?;
    delta_k_along(ns.space(), &alpha, k, opts)
}

/// `δ_k` through two paths with common endpoints.
pub fn verify_delta_well_defined(
    space: &SymplecticSpace,
    alpha1: &SymplecticPath,
    alpha2: &SymplecticPath,
    k: usize,
    opts: &IndexOptions,
) -> Result<VerdictReport> {
    let gap = relative_distance(&alpha1.end(), &alpha2.end());
    if gap > 1e-8 {
        return Err(Error::InvalidArgument(alloc::format!("paths end apart ({gap:.3e})")));
    }
    let first = delta_k_along(space, alpha1, k, opts)?;
    let second = delta_k_along(space, alpha2, k, opts)?;
    Ok(VerdictReport::new("delta-well-defined", first, vec![second], space.half_dim()).with_k(k))
}

/// `i₁(γ, k, A) − k·i₁(γ, 1, A) = δ_k(A⁻¹γ(τ)) − δ_k(A⁻¹)`.
pub fn verify_delta_formula(space: &SymplecticSpace, spec: &AIterationSpec, opts: &IndexOptions) -> Result<VerdictReport> {
    let ps = ProductSpace::new(space);
    let k = spec.k;
    let lhs_k = index(&ps, &a_iterate(spec)?, &graph_frame(&power(&spec.a, k)), opts)?;
    let lhs_1 = index(&ps, &spec.gamma, &graph_frame(&spec.a), opts)?;
    let a_inv = try_inverse(&spec.a)?;
    let end = delta_k(space, &spec.poincare_map()?, k, opts)?;
    let start = delta_k(space, &a_inv, k, opts)?;
    Ok(VerdictReport::new("delta-formula", lhs_k - k as i64 * lhs_1, vec![end, -start], space.half_dim()).with_k(k))
}

fn require_product_lagrangian(ps: &ProductSpace, v: &CMat) -> Result<()> {
    check_lagrangian(ps.total(), v)
}

/// Two-times brake identities for the twist `S` of `brake`:
/// `i_S(Nγ₁⁻¹Nγ₁) = i_{V⁺×U⁺}(γ₁) + i_{V⁻×U⁻}(γ₁)`, and for `γ₁ ∈ P_τ` the
/// same right side against `i_S(γ₁^{(2)})`. The kernel splitting behind it is
/// checked at both endpoints.
pub fn verify_brake2(gamma1: &SymplecticPath, brake: &BrakeSymmetry, opts: &IndexOptions) -> Result<Vec<VerdictReport>> {
    let twist = brake
        .twist()
        .ok_or_else(|| Error::InvalidArgument("brake data carries no twist S".into()))?;
    let space = brake.space();
    let ps = ProductSpace::new(space);
    let n = brake.half_dim();
    let v_plus = product_frame(&twist.v_plus, brake.u_plus());
    let v_minus = product_frame(&twist.v_minus, brake.u_minus());
    require_product_lagrangian(&ps, &v_plus)?;
    require_product_lagrangian(&ps, &v_minus)?;
    let gs = graph_frame(&twist.s);
    let rhs = vec![
        index(&ps, gamma1, &v_plus, opts)?,
        index(&ps, gamma1, &v_minus, opts)?,
    ];
    let gamma = brake_product_path(gamma1, brake)?;
    let lhs = index(&ps, &gamma, &gs, opts)?;
    let d = gamma1.domain();
    let mut antidiagonal: f64 = 0.0;
    for t in [d.start, d.end] {
        antidiagonal = antidiagonal.max(twist_splitting(&gamma1.eval(t), brake)?.antidiagonal_residual);
    }
    let mut out = vec![VerdictReport::new("brake2", lhs, rhs.clone(), n).detail("antidiagonal_residual", antidiagonal)];
    let starts_at_identity = d.start == 0.0 && relative_distance(&gamma1.start(), &identity(space.dim())) <= 1e-9;
    if starts_at_identity {
        let doubled = brake_iterate(gamma1, 2, brake)?;
        let lhs2 = index(&ps, &doubled, &gs, opts)?;
        out.push(VerdictReport::new("brake2-iterated", lhs2, rhs, n));
    }
    Ok(out)
}

/// Positivity of `Nγ⁻¹N` for a positive `γ`; lhs/rhs are 1 for positive.
pub fn verify_reflection_positivity(
    gamma: &SymplecticPath,
    brake: &BrakeSymmetry,
    grid: usize,
) -> Result<VerdictReport> {
    let space = brake.space();
    let before = is_positive_path(space, gamma, grid)?;
    let reflected = SymplecticPath::conjugation(brake.n().clone(), gamma.clone());
    let after = is_positive_path(space, &reflected, grid)?;
    Ok(VerdictReport::new(
        "reflection-positivity",
        after.positive as i64,
        vec![before.positive as i64],
        brake.half_dim(),
    )
    .detail("margin_in", before.margin)
    .detail("margin_out", after.margin))
}

/// Positivity of `γ₁γ₂` for positive `γ₁, γ₂`.
pub fn verify_product_positivity(
    space: &SymplecticSpace,
    first: &SymplecticPath,
    second: &SymplecticPath,
    grid: usize,
) -> Result<VerdictReport> {
    let a = is_positive_path(space, first, grid)?;
    let b = is_positive_path(space, second, grid)?;
    let product = SymplecticPath::product(first.clone(), second.clone())?;
    let p = is_positive_path(space, &product, grid)?;
    Ok(VerdictReport::new(
        "product-positivity",
        p.positive as i64,
        vec![(a.positive && b.positive) as i64],
        space.half_dim(),
    )
    .detail("margin_first", a.margin)
    .detail("margin_second", b.margin)
    .detail("margin_product", p.margin))
}

/// Which brake iteration identity to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BrakeIdentity {
    /// `i_{U⁺×U⁺}(Nγ₁⁻¹Nγ₁) = i_{U⁺×U⁺}(γ₁) + i_{U⁺×U⁻}(γ₁)`.
    Product,
    /// `i_{U⁺×U⁺}(γ^k) = i_{U⁺×U⁺}(γ) + Σ_{j<k} i_{e^{ijπ/k}}(γ)`, `γ = Nγ₁⁻¹Nγ₁`.
    Power,
    /// `i_{U⁺×U⁺}(γ₁γ^k) = i_{U⁺×U⁺}(γ₁) + Σ_{j≤k} i_{e^{2ijπ/(2k+1)}}(γ)`.
    Odd,
    /// `i_{U⁺×U⁺}(γ^{(2)}) = i_{U⁺×U⁺}(γ) + i_{U⁺×U⁻}(γ)`, `γ ∈ P_τ`.
    Doubled,
    /// `i_{U⁺×U⁺}(γ̃) = i_{U⁺×U⁺}(γ) + Σ_{j<k} i_{e^{ijπ/k}}(γ)` for the
    /// `I`-iteration of `γ = γ₁^{(2)}`.
    IdentityIterate,
    /// `i_{U⁺×U⁺}(γ^{(2k+1)}) = i_{U⁺×U⁺}(γ) + Σ_{j≤k} i_{e^{2ijπ/(2k+1)}}(γ^{(2)})`.
    OddIterate,
}

impl BrakeIdentity {
    pub const ALL: [BrakeIdentity; 6] = [
        BrakeIdentity::Product,
        BrakeIdentity::Power,
        BrakeIdentity::Odd,
        BrakeIdentity::Doubled,
        BrakeIdentity::IdentityIterate,
        BrakeIdentity::OddIterate,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BrakeIdentity::Product => "brake-product",
            BrakeIdentity::Power => "brake-power",
            BrakeIdentity::Odd => "brake-odd",
            BrakeIdentity::Doubled => "brake-doubled",
            BrakeIdentity::IdentityIterate => "brake-identity-iterate",
            BrakeIdentity::OddIterate => "brake-odd-iterate",
        }
    }

    /// Whether the identity needs `γ₁(0) = I` on a domain starting at 0.
    pub fn needs_identity_start(&self) -> bool {
        matches!(
            self,
            BrakeIdentity::Doubled | BrakeIdentity::IdentityIterate | BrakeIdentity::OddIterate
        )
    }
}

/// One brake iteration identity for `γ₁` and `k`.
pub fn verify_brake_k(
    identity_kind: BrakeIdentity,
    gamma1: &SymplecticPath,
    k: usize,
    brake: &BrakeSymmetry,
    opts: &IndexOptions,
) -> Result<VerdictReport> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let space = brake.space();
    let ps = ProductSpace::new(space);
    let n = brake.half_dim();
    let pp = product_frame(brake.u_plus(), brake.u_plus());
    let pm = product_frame(brake.u_plus(), brake.u_minus());
    let half = |j: usize| PI * j as f64 / k as f64;
    let odd = |j: usize| TAU * j as f64 / (2 * k + 1) as f64;
    if identity_kind.needs_identity_start() {
        AIterationSpec::new(space, gamma1.clone(), identity(space.dim()), 1)?;
    }
    let (lhs, rhs) = match identity_kind {
        BrakeIdentity::Product => {
            let gamma = brake_product_path(gamma1, brake)?;
            (
                index(&ps, &gamma, &pp, opts)?,
                vec![index(&ps, gamma1, &pp, opts)?, index(&ps, gamma1, &pm, opts)?],
            )
        }
        BrakeIdentity::Power => {
            let gamma = brake_product_path(gamma1, brake)?;
            let mut rhs = vec![index(&ps, &gamma, &pp, opts)?];
            for j in 1..k {
                rhs.push(iz(&ps, &gamma, half(j), opts)?);
            }
            (index(&ps, &SymplecticPath::power(gamma, k), &pp, opts)?, rhs)
        }
        BrakeIdentity::Odd => {
            let gamma = brake_product_path(gamma1, brake)?;
            let mut rhs = vec![index(&ps, gamma1, &pp, opts)?];
            for j in 1..=k {
                rhs.push(iz(&ps, &gamma, odd(j), opts)?);
            }
            let lhs_path = SymplecticPath::product(gamma1.clone(), SymplecticPath::power(gamma, k))?;
            (index(&ps, &lhs_path, &pp, opts)?, rhs)
        }
        BrakeIdentity::Doubled => {
            let doubled = brake_iterate(gamma1, 2, brake)?;
            (
                index(&ps, &doubled, &pp, opts)?,
                vec![index(&ps, gamma1, &pp, opts)?, index(&ps, gamma1, &pm, opts)?],
            )
        }
        BrakeIdentity::IdentityIterate => {
            let gamma = brake_iterate(gamma1, 2, brake)?;
            let defect = brake.involution_defect(&gamma.end());
            if defect > 1e-8 {
                return Err(Error::NotBrakeInvolution(defect));
            }
            let spec = AIterationSpec::new(space, gamma.clone(), identity(space.dim()), k)?;
            let mut rhs = vec![index(&ps, &gamma, &pp, opts)?];
            for j in 1..k {
                rhs.push(iz(&ps, &gamma, half(j), opts)?);
            }
            (index(&ps, &a_iterate(&spec)?, &pp, opts)?, rhs)
        }
        BrakeIdentity::OddIterate => {
            let doubled = brake_iterate(gamma1, 2, brake)?;
            let mut rhs = vec![index(&ps, gamma1, &pp, opts)?];
            for j in 1..=k {
                rhs.push(iz(&ps, &doubled, odd(j), opts)?);
            }
            let iterated = brake_iterate(gamma1, 2 * k + 1, brake)?;
            (index(&ps, &iterated, &pp, opts)?, rhs)
        }
    };
    Ok(VerdictReport::new(identity_kind.as_str(), lhs, rhs, n).with_k(k))
}

/// `i_V(e^{Js₀}γ) − i_V(γ)` against the nullities swept by `s ↦ e^{Js}γ(b)`
/// minus those swept by `s ↦ e^{Js}γ(a)`, both over `(0, s₀]`.
pub fn verify_deformation(
    space: &SymplecticSpace,
    gamma: &SymplecticPath,
    v: &CMat,
    s0: f64,
    opts: &IndexOptions,
) -> Result<VerdictReport> {
    if !(s0 > 0.0) {
        return Err(Error::InvalidArgument("push length must be positive".into()));
    }
    let ps = ProductSpace::new(space);
    let pushed = SymplecticPath::left_mul(space.exp_j(s0), gamma.clone())?;
    let before = index(&ps, gamma, v, opts)?;
    let after = index(&ps, &pushed, v, opts)?;
    let sweep = Domain::new(0.0, s0)?;
    let swept = |m: CMat| -> Result<i64> {
        let lifted = GraphPath(SymplecticPath::right_mul(SymplecticPath::exp(space.j().clone(), sweep), m)?);
        let mu = ConstantFrame {
            frame: v.clone(),
            domain: sweep,
        };
        Ok(positive_crossing_nullity(ps.total(), &lifted, &mu, sweep, opts)? as i64)
    };
    let d = gamma.domain();
    let at_end = swept(gamma.eval(d.end))?;
    let at_start = swept(gamma.eval(d.start))?;
    Ok(VerdictReport::new("deformation", after - before, vec![at_end, -at_start], space.half_dim()).detail("push", s0))
}
