//! Maslov index of paths of Lagrangian pairs by spectral winding.
//!
//! Both Lagrangians are reduced to their Souriau unitaries `U(λ), U(μ)` on a
//! normalized copy of the space. `W = U(μ)*U(λ)` is unitary on `H⁺` with
//! `dim ker(W − I) = dim(λ ∩ μ)`, and the index counts eigenvalues of `W`
//! passing the gauge point just behind `1`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;
use num_traits::Euclid;

use crate::error::{Error, Result};
use crate::lagrangian::{check_lagrangian, graph_frame, pair_index, product_frame, souriau_unitary};
use crate::linalg::{determinant, frobenius, identity, try_inverse, unit, unitary_eigen, vstack, CMat};
use crate::path::{Domain, SymplecticPath};
use crate::space::{Normalization, SymplecticSpace};
use crate::tolerance::Tolerances;

/// Endpoint and direction convention of every index this crate reports.
pub const CONVENTION: &str = "winding of W = U(mu)^* U(lambda) through exp(-i*g), g = -eps; \
positive direction calibrated so that lambda(s) = e^{Js} lambda0 counts +1 per crossing; \
crossings at the initial time are not counted for positive motion, crossings at the final time are (interval (a, b])";

/// A continuously differentiable path of Lagrangian frames.
pub trait LagrangianPath {
    fn domain(&self) -> Domain;

    /// Dimension of the ambient symplectic space.
    fn ambient_dim(&self) -> usize;

    fn frame(&self, t: f64) -> CMat;

    /// `(F(t), Ḟ(t))`.
    fn frame_with_derivative(&self, t: f64) -> Result<(CMat, CMat)>;
}

/// `t ↦ F` on a given domain.
#[derive(Debug, Clone)]
pub struct ConstantFrame {
    pub frame: CMat,
    pub domain: Domain,
}

impl LagrangianPath for ConstantFrame {
    fn domain(&self) -> Domain {
        self.domain
    }

    fn ambient_dim(&self) -> usize {
        self.frame.nrows()
    }

    fn frame(&self, _t: f64) -> CMat {
        self.frame.clone()
    }

    fn frame_with_derivative(&self, _t: f64) -> Result<(CMat, CMat)> {
        Ok((
            self.frame.clone(),
            CMat::zeros(self.frame.nrows(), self.frame.ncols()),
        ))
    }
}

/// `t ↦ Gr(γ(t)) = [I; γ(t)]` in the product space.
#[derive(Debug, Clone)]
pub struct GraphPath(pub SymplecticPath);

impl LagrangianPath for GraphPath {
    fn domain(&self) -> Domain {
        self.0.domain()
    }

    fn ambient_dim(&self) -> usize {
        2 * self.0.dim()
    }

    fn frame(&self, t: f64) -> CMat {
        graph_frame(&self.0.eval(t))
    }

    fn frame_with_derivative(&self, t: f64) -> Result<(CMat, CMat)> {
        let (m, dm) = self.0.eval_with_derivative(t)?;
        let n = m.ncols();
        Ok((graph_frame(&m), vstack(&CMat::zeros(n, n), &dm)))
    }
}

/// `t ↦ γ(t)·λ₀`.
#[derive(Debug, Clone)]
pub struct ActionPath {
    pub path: SymplecticPath,
    pub base: CMat,
}

impl LagrangianPath for ActionPath {
    fn domain(&self) -> Domain {
        self.path.domain()
    }

    fn ambient_dim(&self) -> usize {
        self.base.nrows()
    }

    fn frame(&self, t: f64) -> CMat {
        self.path.eval(t) * &self.base
    }

    fn frame_with_derivative(&self, t: f64) -> Result<(CMat, CMat)> {
        let (m, dm) = self.path.eval_with_derivative(t)?;
        Ok((m * &self.base, dm * &self.base))
    }
}

/// `t ↦ λ₁(t) × λ₂(t)` in `H₁ × H₂`.
pub struct DirectSum {
    pub first: Box<dyn LagrangianPath + Send + Sync>,
    pub second: Box<dyn LagrangianPath + Send + Sync>,
}

impl LagrangianPath for DirectSum {
    fn domain(&self) -> Domain {
        self.first.domain()
    }

    fn ambient_dim(&self) -> usize {
        self.first.ambient_dim() + self.second.ambient_dim()
    }

    fn frame(&self, t: f64) -> CMat {
        product_frame(&self.first.frame(t), &self.second.frame(t))
    }

    fn frame_with_derivative(&self, t: f64) -> Result<(CMat, CMat)> {
        let (f1, d1) = self.first.frame_with_derivative(t)?;
        let (f2, d2) = self.second.frame_with_derivative(t)?;
        Ok((product_frame(&f1, &f2), product_frame(&d1, &d2)))
    }
}

/// `X = H × H` with `J̃ = (−J) ⊕ J`, the home of graphs.
#[derive(Debug, Clone)]
pub struct ProductSpace {
    base: SymplecticSpace,
    total: SymplecticSpace,
}

impl ProductSpace {
    pub fn new(base: &SymplecticSpace) -> Self {
        ProductSpace {
            base: base.clone(),
            total: base.negated().direct_sum(base),
        }
    }

    pub fn base(&self) -> &SymplecticSpace {
        &self.base
    }

    pub fn total(&self) -> &SymplecticSpace {
        &self.total
    }

    /// `ω̃((x₁,x₂),(y₁,y₂)) = −ω(x₁,y₁) + ω(x₂,y₂)`.
    pub fn omega(&self, x: &crate::linalg::CVec, y: &crate::linalg::CVec) -> num_complex::Complex64 {
        self.total.omega(x, y)
    }

    /// `Gr(M)`, checked to be Lagrangian.
    pub fn graph(&self, m: &CMat) -> Result<CMat> {
        let f = graph_frame(m);
        check_lagrangian(&self.total, &f)?;
        Ok(f)
    }

    /// `Gr(zI)`.
    pub fn circle_graph(&self, z: num_complex::Complex64) -> CMat {
        graph_frame(&identity(self.base.dim()).map(|w| w * z))
    }

    /// `λ₁ × λ₂`, checked to be Lagrangian in `X`.
    pub fn product(&self, first: &CMat, second: &CMat) -> Result<CMat> {
        let f = product_frame(first, second);
        check_lagrangian(&self.total, &f)?;
        Ok(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Winding,
    CrossingForm,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Winding => "winding",
            Method::CrossingForm => "crossing-form",
        }
    }
}

/// Counts of positive, zero and negative eigenvalues of a crossing form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Signature {
    pub positive: usize,
    pub zero: usize,
    pub negative: usize,
}

#[derive(Debug, Clone)]
pub struct CrossingRecord {
    pub time: f64,
    /// Basis of `λ(t) ∩ μ(t)`.
    pub intersection: CMat,
    /// Relative crossing form in that basis.
    pub form: CMat,
    pub signature: Signature,
    /// Signed contribution to the index under [`CONVENTION`].
    pub contribution: i64,
}

/// A step of the winding method across which eigenvalues passed the gauge point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowEvent {
    pub start: f64,
    pub end: f64,
    pub flow: i64,
}

/// Eigenangles `−arg eig W(t)` at an accepted sample.
#[derive(Debug, Clone)]
pub struct Trace {
    pub t: f64,
    pub angles: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct IndexReport {
    pub index: i64,
    pub crossings: Vec<CrossingRecord>,
    pub events: Vec<FlowEvent>,
    pub method: Method,
    pub depth: u32,
    pub steps: usize,
    pub epsilon: f64,
    pub convention: String,
    pub traces: Vec<Trace>,
}

impl IndexReport {
    /// Signed count rebuilt from the crossing list.
    pub fn reconstructed(&self) -> i64 {
        self.crossings.iter().map(|c| c.contribution).sum()
    }
}

#[derive(Debug, Clone)]
pub struct IndexOptions {
    pub tol: Tolerances,
    pub initial_steps: usize,
    pub max_depth: u32,
    pub record_traces: bool,
    /// Grid size for the crossing scan of the crossing-form method.
    pub scan_points: usize,
}

impl Default for IndexOptions {
    fn default() -> Self {
        IndexOptions {
            tol: Tolerances::default(),
            initial_steps: 24,
            max_depth: 40,
            record_traces: false,
            scan_points: 1600,
        }
    }
}

impl IndexOptions {
    pub fn with_tolerances(tol: Tolerances) -> Self {
        IndexOptions {
            tol,
            ..Default::default()
        }
    }
}

/// Souriau reduction on a (possibly normalized) copy of a space.
struct Reducer {
    normalization: Normalization,
    trivial: bool,
}

impl Reducer {
    fn new(space: &SymplecticSpace) -> Result<Self> {
        let normalization = space.normalize()?;
        normalization.normalized.require_lagrangians()?;
        let trivial = normalization.is_trivial();
        Ok(Reducer {
            normalization,
            trivial,
        })
    }

    fn unitary(&self, frame: &CMat) -> Result<CMat> {
        let ns = &self.normalization.normalized;
        if self.trivial {
            souriau_unitary(ns, frame)
        } else {
            souriau_unitary(ns, &self.normalization.frame(frame))
        }
    }
}

#[derive(Clone)]
struct Sample {
    t: f64,
    w: CMat,
    det: num_complex::Complex64,
    angles: Vec<f64>,
}

fn sample(f: &dyn Fn(f64) -> Result<CMat>, t: f64) -> Result<Sample> {
    let w = f(t)?;
    let d = determinant(&w);
    let det = if d.norm() > 0.0 { d / d.norm() } else { d };
    let mut angles: Vec<f64> = unitary_eigen(&w).0.iter().map(|z| -z.arg()).collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    Ok(Sample { t, w, det, angles })
}

/// Change of `Σ −arg λⱼ` from `a` to `b`, valid for small steps.
fn phase_step(a: &Sample, b: &Sample) -> f64 {
    -(b.det * a.det.conj()).arg()
}

fn reduced_sum(angles: &[f64], gauge: f64) -> f64 {
    angles.iter().map(|&x| Euclid::rem_euclid(&(x - gauge), &TAU)).sum()
}

/// Gauge offset for the endpoint spectra: half the smallest nonzero endpoint
/// eigenangle, capped at `10⁻³`.
fn choose_epsilon(ends: &[&[f64]], tol: &Tolerances) -> Result<f64> {
    let zero = tol.rank / tol.ambiguity;
    let nonzero = tol.rank * tol.ambiguity;
    let mut eps: f64 = 1e-3;
    for angles in ends {
        for &x in angles.iter() {
            let a = x.abs();
            if a <= zero {
                continue;
            }
            if a < nonzero {
                return Err(Error::RankAmbiguous {
                    value: a,
                    threshold: tol.rank,
                });
            }
            eps = eps.min(0.5 * a);
        }
    }
    Ok(eps)
}

struct Walker<'a> {
    f: &'a dyn Fn(f64) -> Result<CMat>,
    rho: f64,
    max_depth: u32,
    depth: u32,
}

impl Walker<'_> {
    fn accept(&self, l: &Sample, m: &Sample, r: &Sample) -> bool {
        let close = |a: &Sample, b: &Sample| frobenius(&(&b.w - &a.w)) <= self.rho;
        if !(close(l, r) && close(l, m) && close(m, r)) {
            return false;
        }
        let whole = phase_step(l, r);
        let split = phase_step(l, m) + phase_step(m, r);
        (whole - split).abs() < 1e-6
    }
}

/// Spectral winding of a unitary path on `[a, b]`.
pub fn unitary_winding(
    f: &dyn Fn(f64) -> Result<CMat>,
    domain: Domain,
    opts: &IndexOptions,
) -> Result<IndexReport> {
    let (a, b) = (domain.start, domain.end);
    let first = sample(f, a)?;
    let dim = first.w.nrows();
    if dim == 0 {
        return Ok(empty_report(Method::Winding));
    }
    let rho = (1.8 / (dim as f64).sqrt()).min(0.5);
    let mut walker = Walker {
        f,
        rho,
        max_depth: opts.max_depth,
        depth: 0,
    };
    let steps = opts.initial_steps.max(1);
    let mut samples: Vec<Sample> = Vec::new();
    let mut left = first;
    for i in 1..=steps {
        let t = if i == steps {
            b
        } else {
            a + (b - a) * i as f64 / steps as f64
        };
        let right = sample(f, t)?;
        let mut seg = Vec::new();
        walk(&mut walker, &left, right, 0, &mut seg)?;
        samples.push(left);
        left = seg.pop().expect("segment ends at its right sample");
        samples.extend(seg);
    }
    samples.push(left);

    let start = &samples[0];
    let end = samples.last().expect("nonempty");
    let eps = choose_epsilon(&[&start.angles, &end.angles], &opts.tol)?;

    let mut total_phase = 0.0;
    let mut events = Vec::new();
    let gauge = -eps;
    for pair in samples.windows(2) {
        let d = phase_step(&pair[0], &pair[1]);
        total_phase += d;
        let flow = (d + reduced_sum(&pair[0].angles, gauge) - reduced_sum(&pair[1].angles, gauge)) / TAU;
        let rounded = flow.round();
        if (flow - rounded).abs() > 1e-6 {
            return Err(Error::GaugeUnstable(format!(
                "non-integral step flow {flow} on [{}, {}]",
                pair[0].t, pair[1].t
            )));
        }
        if rounded != 0.0 {
            events.push(FlowEvent {
                start: pair[0].t,
                end: pair[1].t,
                flow: rounded as i64,
            });
        }
    }

    let count = |g: f64| -> Result<i64> {
        let raw =
            (total_phase + reduced_sum(&start.angles, g) - reduced_sum(&end.angles, g)) / TAU;
        let rounded = raw.round();
        if (raw - rounded).abs() > 1e-6 {
            return Err(Error::GaugeUnstable(format!("non-integral index {raw}")));
        }
        Ok(rounded as i64)
    };
    let index = count(gauge)?;
    let check = count(-0.5 * eps)?;
    if index != check {
        return Err(Error::GaugeUnstable(format!(
            "index {index} at eps = {eps} but {check} at eps/2"
        )));
    }
    let step_sum: i64 = events.iter().map(|e| e.flow).sum();
    if step_sum != index {
        return Err(Error::GaugeUnstable(format!(
            "step flows sum to {step_sum}, endpoint formula gives {index}"
        )));
    }

    let traces = if opts.record_traces {
        samples
            .iter()
            .map(|s| Trace {
                t: s.t,
                angles: s.angles.clone(),
            })
            .collect()
    } else {
        Vec::new()
    };
    Ok(IndexReport {
        index,
        crossings: Vec::new(),
        events,
        method: Method::Winding,
        depth: walker.depth,
        steps: samples.len() - 1,
        epsilon: eps,
        convention: CONVENTION.into(),
        traces,
    })
}

/// Adaptive bisection of `[l, r]`; pushes the accepted interior samples and
/// `r` in order.
fn walk(w: &mut Walker, l: &Sample, r: Sample, depth: u32, out: &mut Vec<Sample>) -> Result<()> {
    if depth > w.max_depth {
        return Err(Error::SubdivisionLimit(w.max_depth));
    }
    w.depth = w.depth.max(depth);
    let m = sample(w.f, 0.5 * (l.t + r.t))?;
    if w.accept(l, &m, &r) {
        out.push(m);
        out.push(r);
        return Ok(());
    }
    walk(w, l, m, depth + 1, out)?;
    let mid = out.last().expect("walk pushes its right sample last").clone();
    walk(w, &mid, r, depth + 1, out)
}

fn empty_report(method: Method) -> IndexReport {
    IndexReport {
        index: 0,
        crossings: Vec::new(),
        events: Vec::new(),
        method,
        depth: 0,
        steps: 0,
        epsilon: 1e-3,
        convention: CONVENTION.into(),
        traces: Vec::new(),
    }
}

/// Maslov index of the pair path `(λ(t), μ(t))`, `t ∈ domain`, by spectral winding.
pub fn maslov_pairs(
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
    let reducer = Reducer::new(&space)?;
    check_lagrangian(&space, &lambda.frame(domain.start))?;
    check_lagrangian(&space, &mu.frame(domain.start))?;
    let f = |t: f64| -> Result<CMat> {
        let ul = reducer.unitary(&lambda.frame(t))?;
        let um = reducer.unitary(&mu.frame(t))?;
        Ok(um.adjoint() * ul)
    };
    unitary_winding(&f, domain, opts)
}

/// `i_V(γ) = Mas{Gr(γ), V}` over the domain of `γ`.
pub fn graph_index(
    ps: &ProductSpace,
    gamma: &SymplecticPath,
    v: &CMat,
    opts: &IndexOptions,
) -> Result<IndexReport> {
    let total = ps.total().with_tolerances(opts.tol);
    check_lagrangian(&total, v)?;
    let domain = gamma.domain();
    let lambda = GraphPath(gamma.clone());
    let mu = ConstantFrame {
        frame: v.clone(),
        domain,
    };
    maslov_pairs(&total, &lambda, &mu, domain, opts)
}

/// `i_z(γ) = i_{Gr(zI)}(γ)`.
pub fn iz(ps: &ProductSpace, gamma: &SymplecticPath, z: num_complex::Complex64, opts: &IndexOptions) -> Result<i64> {
    if (z.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("|z| = {} is not 1", z.norm())));
    }
    Ok(graph_index(ps, gamma, &ps.circle_graph(z), opts)?.index)
}

/// `i_z(γ)` for `z = e^{iθ}`.
pub fn iz_angle(ps: &ProductSpace, gamma: &SymplecticPath, theta: f64, opts: &IndexOptions) -> Result<i64> {
    iz(ps, gamma, unit(theta), opts)
}

/// `i_N(γ)` computed directly, as `i₁(γN⁻¹)` and as `i₁(N⁻¹γ)`; the three
/// must agree.
pub fn index_vs_n(ps: &ProductSpace, gamma: &SymplecticPath, n: &CMat, opts: &IndexOptions) -> Result<i64> {
    ps.base().check_symplectic(n)?;
    let n_inv = try_inverse(n)?;
    let direct = graph_index(ps, gamma, &graph_frame(n), opts)?.index;
    let ident = graph_frame(&identity(n.nrows()));
    let right = SymplecticPath::right_mul(gamma.clone(), n_inv.clone())?;
    let left = SymplecticPath::left_mul(n_inv, gamma.clone())?;
    let via_right = graph_index(ps, &right, &ident, opts)?.index;
    let via_left = graph_index(ps, &left, &ident, opts)?.index;
    if direct != via_right || direct != via_left {
        return Err(Error::IdentityMismatch(format!(
            "direct {direct}, right {via_right}, left {via_left}"
        )));
    }
    Ok(direct)
}

/// `(ν_V(M), ν̃_V(M)) = (dim(Gr(M) ∩ V), dim X/(Gr(M) + V))`.
pub fn nullities(ps: &ProductSpace, m: &CMat, v: &CMat, tol: &Tolerances) -> Result<(usize, usize)> {
    let total = ps.total().with_tolerances(*tol);
    let p = pair_index(&total, &graph_frame(m), v)?;
    if p.dim_cap > p.codim_sum {
        return Err(Error::IdentityViolated(format!(
            "nullity {} exceeds co-nullity {}",
            p.dim_cap, p.codim_sum
        )));
    }
    Ok((p.dim_cap, p.codim_sum))
}

/// `ν_V(M)`.
pub fn nullity(ps: &ProductSpace, m: &CMat, v: &CMat, tol: &Tolerances) -> Result<usize> {
    Ok(nullities(ps, m, v, tol)?.0)
}

/// Wraps an angle into `(−π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = Euclid::rem_euclid(&(x + PI), &TAU) - PI;
    if y <= -PI {
        y + TAU
    } else {
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, ONE};

    fn model(ns_n: usize, end: f64) -> (SymplecticSpace, ActionPath, ConstantFrame) {
        let space = SymplecticSpace::canonical(ns_n);
        let l0 = vstack(&identity(ns_n), &identity(ns_n));
        let domain = Domain::new(0.0, end).unwrap();
        let path = SymplecticPath::exp(space.j().clone(), domain);
        (
            space,
            ActionPath {
                path,
                base: l0.clone(),
            },
            ConstantFrame { frame: l0, domain },
        )
    }

    #[test]
    fn model_path_half_turn() {
        let (space, l, m) = model(1, PI);
        let r = maslov_pairs(&space, &l, &m, l.domain(), &IndexOptions::default()).unwrap();
        assert_eq!(r.index, 1);
        assert_eq!(r.convention, CONVENTION);
    }

    #[test]
    fn model_path_full_turn() {
        let (space, l, m) = model(1, TAU);
        let r = maslov_pairs(&space, &l, &m, l.domain(), &IndexOptions::default()).unwrap();
        assert_eq!(r.index, 2);
        assert_eq!(r.events.len(), 2);
    }

    #[test]
    fn constant_pair_has_index_zero() {
        let (space, _, m) = model(2, 1.0);
        let r = maslov_pairs(&space, &m, &m, m.domain, &IndexOptions::default()).unwrap();
        assert_eq!(r.index, 0);
    }

    #[test]
    fn graph_index_fixtures() {
        let space = SymplecticSpace::canonical(1);
        let ps = ProductSpace::new(&space);
        let opts = IndexOptions::default();
        let full = SymplecticPath::exp(space.j().clone(), Domain::new(0.0, TAU).unwrap());
        assert_eq!(iz(&ps, &full, ONE, &opts).unwrap(), 2);
        let half = SymplecticPath::exp(space.j().clone(), Domain::new(0.0, PI).unwrap());
        assert_eq!(iz(&ps, &half, -ONE, &opts).unwrap(), 2);
        assert_eq!(index_vs_n(&ps, &full, &(-identity(2)), &opts).unwrap(), 2);
        let constant = SymplecticPath::constant(space.exp_j(0.3), Domain::unit());
        assert_eq!(iz(&ps, &constant, ONE, &opts).unwrap(), 0);
    }

    #[test]
    fn nullity_fixtures() {
        let space = SymplecticSpace::canonical(1);
        let ps = ProductSpace::new(&space);
        let tol = Tolerances::default();
        let one = ps.circle_graph(ONE);
        assert_eq!(nullities(&ps, &identity(2), &one, &tol).unwrap(), (2, 2));
        let rot = CMat::from_diagonal(&crate::linalg::CVec::from_vec(alloc::vec![unit(1.0), unit(-1.0)]));
        assert_eq!(nullities(&ps, &rot, &one, &tol).unwrap(), (0, 0));
        let minus = ps.circle_graph(c(-1.0, 0.0));
        assert_eq!(nullities(&ps, &space.exp_j(PI), &minus, &tol).unwrap(), (2, 2));
    }

    #[test]
    fn wrap_angle_range() {
        assert!((wrap_angle(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_angle(-PI) - PI).abs() < 1e-12);
        assert!(wrap_angle(0.5).abs() - 0.5 < 1e-15);
    }
}
