//! Paths of symplectic matrices as expression trees.
//!
//! Every node evaluates `t ↦ M(t)` together with `Ṁ(t)`. Derivatives are
//! exact (product rule through the tree) except for [`SymplecticPath::Sampled`],
//! which uses a symmetric difference.

use alloc::boxed::Box;
use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{expm, frobenius, identity, power, scale, try_inverse, CMat};
use crate::space::SymplecticSpace;

/// Closed parameter interval `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub start: f64,
    pub end: f64,
}

impl Domain {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        if !(start.is_finite() && end.is_finite()) || end <= start {
            return Err(Error::InvalidArgument(alloc::format!(
                "invalid domain [{start}, {end}]"
            )));
        }
        Ok(Domain { start, end })
    }

    pub fn unit() -> Self {
        Domain {
            start: 0.0,
            end: 1.0,
        }
    }

    pub fn length(&self) -> f64 {
        self.end - self.start
    }

    pub fn contains(&self, t: f64) -> bool {
        let slack = 1e-12 * self.length().max(1.0);
        t >= self.start - slack && t <= self.end + slack
    }

    fn clamp(&self, t: f64) -> f64 {
        t.max(self.start).min(self.end)
    }

    fn matches(&self, other: &Domain) -> bool {
        let slack = 1e-12 * self.length().max(1.0);
        (self.start - other.start).abs() <= slack && (self.end - other.end).abs() <= slack
    }
}

/// Junction values of concatenated pieces must agree to this relative level.
pub const JUNCTION_TOLERANCE: f64 = 1e-9;

/// Interpolation chart for [`SymplecticPath::Sampled`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    /// `M(t) = Mᵢ·cay(sΛᵢ)` with `cay(X) = (I − X)⁻¹(I + X)` and
    /// `cay(Λᵢ) = Mᵢ⁻¹Mᵢ₊₁`; stays exactly symplectic between nodes.
    Cayley,
}

#[derive(Debug, Clone)]
pub struct SampledPath {
    times: Vec<f64>,
    matrices: Vec<CMat>,
    generators: Vec<CMat>,
    chart: Chart,
}

impl SampledPath {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn matrices(&self) -> &[CMat] {
        &self.matrices
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }
}

/// `γ̃(t) = A^j γ(t − jτ) P^j` on `[s₀ + jτ, s₀ + (j+1)τ]`, `P = A⁻¹γ(s₀ + τ)`.
#[derive(Debug, Clone)]
pub struct AIteratePath {
    base: SymplecticPath,
    a: CMat,
    k: usize,
    a_powers: Vec<CMat>,
    p_powers: Vec<CMat>,
}

impl AIteratePath {
    pub fn base(&self) -> &SymplecticPath {
        &self.base
    }

    pub fn a(&self) -> &CMat {
        &self.a
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `A⁻¹γ(τ)`.
    pub fn poincare_map(&self) -> &CMat {
        &self.p_powers[1]
    }
}

/// The `k`-th `N`-brake iteration of a path on `[s₀, s₀ + τ]`.
#[derive(Debug, Clone)]
pub struct BrakeIteratePath {
    base: SymplecticPath,
    n: CMat,
    k: usize,
    /// Powers of `γ(2τ) = Nγ(τ)⁻¹Nγ(τ)`.
    p_powers: Vec<CMat>,
}

impl BrakeIteratePath {
    pub fn base(&self) -> &SymplecticPath {
        &self.base
    }

    pub fn n(&self) -> &CMat {
        &self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `γ(2τ) = Nγ(τ)⁻¹Nγ(τ)`.
    pub fn poincare_map(&self) -> &CMat {
        &self.p_powers[1]
    }
}

#[derive(Debug, Clone)]
pub enum SymplecticPath {
    Constant {
        matrix: CMat,
        domain: Domain,
    },
    /// `exp((slope·t + offset)·Λ)`.
    Exp {
        generator: CMat,
        slope: f64,
        offset: f64,
        domain: Domain,
    },
    /// Pointwise product on a common domain.
    Product(Box<SymplecticPath>, Box<SymplecticPath>),
    /// `first` followed by `second`, the latter shifted to start where
    /// `first` ends.
    Concat(Box<SymplecticPath>, Box<SymplecticPath>),
    /// `t ↦ γ(a + b − t)`.
    Reverse(Box<SymplecticPath>),
    /// `t ↦ N γ(t)⁻¹ N`.
    Conjugation { n: CMat, inner: Box<SymplecticPath> },
    /// `t ↦ γ(t)^k`.
    Power { inner: Box<SymplecticPath>, k: usize },
    /// The inner path pulled back along the affine map of `domain` onto its
    /// own domain.
    Reparam {
        inner: Box<SymplecticPath>,
        domain: Domain,
    },
    AIterate(Box<AIteratePath>),
    BrakeIterate(Box<BrakeIteratePath>),
    Sampled(SampledPath),
}

fn check_junction(t: f64, left: &CMat, right: &CMat) -> Result<()> {
    let mismatch = frobenius(&(left - right)) / frobenius(left).max(1.0);
    if mismatch > JUNCTION_TOLERANCE {
        return Err(Error::DiscontinuousJunction { t, mismatch });
    }
    Ok(())
}

impl SymplecticPath {
    pub fn constant(matrix: CMat, domain: Domain) -> Self {
        SymplecticPath::Constant { matrix, domain }
    }

    /// `t ↦ exp(tΛ)`.
    pub fn exp(generator: CMat, domain: Domain) -> Self {
        SymplecticPath::Exp {
            generator,
            slope: 1.0,
            offset: 0.0,
            domain,
        }
    }

    pub fn exp_affine(generator: CMat, slope: f64, offset: f64, domain: Domain) -> Self {
        SymplecticPath::Exp {
            generator,
            slope,
            offset,
            domain,
        }
    }

    pub fn product(left: SymplecticPath, right: SymplecticPath) -> Result<Self> {
        if !left.domain().matches(&right.domain()) {
            return Err(Error::DomainMismatch);
        }
        if left.dim() != right.dim() {
            return Err(Error::DimensionMismatch {
                expected: left.dim(),
                found: right.dim(),
            });
        }
        Ok(SymplecticPath::Product(Box::new(left), Box::new(right)))
    }

    /// Left multiplication by a constant matrix.
    pub fn left_mul(matrix: CMat, path: SymplecticPath) -> Result<Self> {
        let domain = path.domain();
        SymplecticPath::product(SymplecticPath::constant(matrix, domain), path)
    }

    /// Right multiplication by a constant matrix.
    pub fn right_mul(path: SymplecticPath, matrix: CMat) -> Result<Self> {
        let domain = path.domain();
        SymplecticPath::product(path, SymplecticPath::constant(matrix, domain))
    }

    pub fn concat(first: SymplecticPath, second: SymplecticPath) -> Result<Self> {
        let junction = first.domain().end;
        check_junction(
            junction,
            &first.eval(junction),
            &second.eval(second.domain().start),
        )?;
        Ok(SymplecticPath::Concat(Box::new(first), Box::new(second)))
    }

    pub fn reverse(path: SymplecticPath) -> Self {
        SymplecticPath::Reverse(Box::new(path))
    }

    pub fn conjugation(n: CMat, inner: SymplecticPath) -> Self {
        SymplecticPath::Conjugation {
            n,
            inner: Box::new(inner),
        }
    }

    pub fn power(inner: SymplecticPath, k: usize) -> Self {
        SymplecticPath::Power {
            inner: Box::new(inner),
            k,
        }
    }

    pub fn reparam(inner: SymplecticPath, domain: Domain) -> Self {
        SymplecticPath::Reparam {
            inner: Box::new(inner),
            domain,
        }
    }

    pub fn sampled(times: Vec<f64>, matrices: Vec<CMat>, chart: Chart) -> Result<Self> {
        if times.len() < 2 || times.len() != matrices.len() {
            return Err(Error::InvalidArgument(
                "sampled path needs at least two (time, matrix) pairs".into(),
            ));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument(
                "sample times must increase strictly".into(),
            ));
        }
        let dim = matrices[0].nrows();
        let mut generators = Vec::with_capacity(times.len() - 1);
        for w in matrices.windows(2) {
            let step = try_inverse(&w[0])? * &w[1];
            let plus = &step + identity(dim);
            let x = (&step - identity(dim)) * try_inverse(&plus)?;
            generators.push(x);
        }
        Ok(SymplecticPath::Sampled(SampledPath {
            times,
            matrices,
            generators,
            chart,
        }))
    }

    /// The `k`-th `A`-iteration of `base`.
    pub fn a_iterate(base: SymplecticPath, a: CMat, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("iteration count must be positive".into()));
        }
        let d = base.domain();
        let a_inv = try_inverse(&a)?;
        let p = &a_inv * base.eval(d.end);
        let a_powers: Vec<CMat> = (0..k).map(|j| power(&a, j)).collect();
        let p_powers: Vec<CMat> = (0..=k.max(1)).map(|j| power(&p, j)).collect();
        let it = AIteratePath {
            base,
            a,
            k,
            a_powers,
            p_powers,
        };
        let path = SymplecticPath::AIterate(Box::new(it));
        path.check_junctions()?;
        Ok(path)
    }

    /// The `k`-th `N`-brake iteration of `base`.
    pub fn brake_iterate(base: SymplecticPath, n: CMat, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("iteration count must be positive".into()));
        }
        let end = base.eval(base.domain().end);
        let p2 = &n * try_inverse(&end)? * &n * &end;
        let p_powers: Vec<CMat> = (0..=k.max(1)).map(|j| power(&p2, j)).collect();
        let it = BrakeIteratePath {
            base,
            n,
            k,
            p_powers,
        };
        let path = SymplecticPath::BrakeIterate(Box::new(it));
        path.check_junctions()?;
        Ok(path)
    }

    pub fn domain(&self) -> Domain {
        match self {
            SymplecticPath::Constant { domain, .. }
            | SymplecticPath::Exp { domain, .. }
            | SymplecticPath::Reparam { domain, .. } => *domain,
            SymplecticPath::Product(left, _) => left.domain(),
            SymplecticPath::Concat(first, second) => {
                let f = first.domain();
                Domain {
                    start: f.start,
                    end: f.end + second.domain().length(),
                }
            }
            SymplecticPath::Reverse(inner)
            | SymplecticPath::Conjugation { inner, .. }
            | SymplecticPath::Power { inner, .. } => inner.domain(),
            SymplecticPath::AIterate(it) => {
                let d = it.base.domain();
                Domain {
                    start: d.start,
                    end: d.start + it.k as f64 * d.length(),
                }
            }
            SymplecticPath::BrakeIterate(it) => {
                let d = it.base.domain();
                Domain {
                    start: d.start,
                    end: d.start + it.k as f64 * d.length(),
                }
            }
            SymplecticPath::Sampled(s) => Domain {
                start: s.times[0],
                end: *s.times.last().expect("at least two samples"),
            },
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            SymplecticPath::Constant { matrix, .. } => matrix.nrows(),
            SymplecticPath::Exp { generator, .. } => generator.nrows(),
            SymplecticPath::Product(left, _) | SymplecticPath::Concat(left, _) => left.dim(),
            SymplecticPath::Reverse(inner)
            | SymplecticPath::Conjugation { inner, .. }
            | SymplecticPath::Power { inner, .. }
            | SymplecticPath::Reparam { inner, .. } => inner.dim(),
            SymplecticPath::AIterate(it) => it.a.nrows(),
            SymplecticPath::BrakeIterate(it) => it.n.nrows(),
            SymplecticPath::Sampled(s) => s.matrices[0].nrows(),
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            SymplecticPath::Constant { .. } => true,
            SymplecticPath::Exp { generator, slope, .. } => {
                *slope == 0.0 || generator.iter().all(|z| z.norm() == 0.0)
            }
            SymplecticPath::Product(l, r) | SymplecticPath::Concat(l, r) => {
                l.is_constant() && r.is_constant()
            }
            SymplecticPath::Reverse(inner)
            | SymplecticPath::Conjugation { inner, .. }
            | SymplecticPath::Power { inner, .. }
            | SymplecticPath::Reparam { inner, .. } => inner.is_constant(),
            _ => false,
        }
    }

    pub fn start(&self) -> CMat {
        self.eval(self.domain().start)
    }

    pub fn end(&self) -> CMat {
        self.eval(self.domain().end)
    }

    /// `M(t)`, with `t` clamped to the domain.
    pub fn eval(&self, t: f64) -> CMat {
        let t = self.domain().clamp(t);
        match self {
            SymplecticPath::Constant { matrix, .. } => matrix.clone(),
            SymplecticPath::Exp {
                generator,
                slope,
                offset,
                ..
            } => expm(&scale(generator, slope * t + offset)),
            SymplecticPath::Product(left, right) => left.eval(t) * right.eval(t),
            SymplecticPath::Concat(first, second) => {
                let f = first.domain();
                if t <= f.end {
                    first.eval(t)
                } else {
                    second.eval(t - f.end + second.domain().start)
                }
            }
            SymplecticPath::Reverse(inner) => {
                let d = inner.domain();
                inner.eval(d.start + d.end - t)
            }
            SymplecticPath::Conjugation { n, inner } => {
                let m = inner.eval(t);
                let m_inv = try_inverse(&m).unwrap_or_else(|_| CMat::zeros(m.nrows(), m.ncols()));
                n * m_inv * n
            }
            SymplecticPath::Power { inner, k } => power(&inner.eval(t), *k),
            SymplecticPath::Reparam { inner, domain } => inner.eval(pull_back(domain, &inner.domain(), t)),
            SymplecticPath::AIterate(it) => {
                let (j, local) = segment(&it.base.domain(), it.k, t);
                &it.a_powers[j] * it.base.eval(local) * &it.p_powers[j]
            }
            SymplecticPath::BrakeIterate(it) => {
                let d = it.base.domain();
                let (seg, local) = segment(&d, it.k, t);
                if seg % 2 == 0 {
                    it.base.eval(local) * &it.p_powers[seg / 2]
                } else {
                    let mirrored = d.start + d.end - local;
                    &it.n * it.base.eval(mirrored) * &it.n * &it.p_powers[(seg + 1) / 2]
                }
            }
            SymplecticPath::Sampled(s) => {
                let (i, frac) = sample_segment(&s.times, t);
                &s.matrices[i] * cayley(&s.generators[i], frac)
            }
        }
    }

    /// `M(t)` after checking that `t` lies in the domain and the value is
    /// symplectic for `space`.
    pub fn eval_checked(&self, space: &SymplecticSpace, t: f64) -> Result<CMat> {
        if !self.domain().contains(t) {
            return Err(Error::OutOfDomain(t));
        }
        let m = self.eval(t);
        space.check_symplectic(&m)?;
        Ok(m)
    }

    /// `(M(t), Ṁ(t))`.
    pub fn eval_with_derivative(&self, t: f64) -> Result<(CMat, CMat)> {
        let t = self.domain().clamp(t);
        Ok(match self {
            SymplecticPath::Constant { matrix, .. } => {
                (matrix.clone(), CMat::zeros(matrix.nrows(), matrix.ncols()))
            }
            SymplecticPath::Exp {
                generator,
                slope,
                offset,
                ..
            } => {
                let m = expm(&scale(generator, slope * t + offset));
                let dm = scale(&(generator * &m), *slope);
                (m, dm)
            }
            SymplecticPath::Product(left, right) => {
                let (l, dl) = left.eval_with_derivative(t)?;
                let (r, dr) = right.eval_with_derivative(t)?;
                (&l * &r, dl * &r + &l * dr)
            }
            SymplecticPath::Concat(first, second) => {
                let f = first.domain();
                if t < f.end || (t == f.end && second.domain().length() == 0.0) {
                    first.eval_with_derivative(t)?
                } else {
                    second.eval_with_derivative(t - f.end + second.domain().start)?
                }
            }
            SymplecticPath::Reverse(inner) => {
                let d = inner.domain();
                let (m, dm) = inner.eval_with_derivative(d.start + d.end - t)?;
                (m, -dm)
            }
            SymplecticPath::Conjugation { n, inner } => {
                let (m, dm) = inner.eval_with_derivative(t)?;
                let m_inv = try_inverse(&m)?;
                let value = n * &m_inv * n;
                let deriv = -(n * &m_inv * dm * &m_inv * n);
                (value, deriv)
            }
            SymplecticPath::Power { inner, k } => {
                let (m, dm) = inner.eval_with_derivative(t)?;
                let powers: Vec<CMat> = (0..=*k).map(|j| power(&m, j)).collect();
                let mut deriv = CMat::zeros(m.nrows(), m.ncols());
                for j in 0..*k {
                    deriv += &powers[j] * &dm * &powers[k - 1 - j];
                }
                (powers[*k].clone(), deriv)
            }
            SymplecticPath::Reparam { inner, domain } => {
                let d = inner.domain();
                let rate = d.length() / domain.length();
                let (m, dm) = inner.eval_with_derivative(pull_back(domain, &d, t))?;
                (m, scale(&dm, rate))
            }
            SymplecticPath::AIterate(it) => {
                let (j, local) = segment(&it.base.domain(), it.k, t);
                let (m, dm) = it.base.eval_with_derivative(local)?;
                let a = &it.a_powers[j];
                let p = &it.p_powers[j];
                (a * m * p, a * dm * p)
            }
            SymplecticPath::BrakeIterate(it) => {
                let d = it.base.domain();
                let (seg, local) = segment(&d, it.k, t);
                if seg % 2 == 0 {
                    let (m, dm) = it.base.eval_with_derivative(local)?;
                    let p = &it.p_powers[seg / 2];
                    (m * p, dm * p)
                } else {
                    let (m, dm) = it.base.eval_with_derivative(d.start + d.end - local)?;
                    let p = &it.p_powers[(seg + 1) / 2];
                    (&it.n * m * &it.n * p, -(&it.n * dm * &it.n * p))
                }
            }
            SymplecticPath::Sampled(_) => {
                let d = self.domain();
                let h = d.length() * 1e-5;
                let lo = (t - h).max(d.start);
                let hi = (t + h).min(d.end);
                let deriv = scale(&(self.eval(hi) - self.eval(lo)), 1.0 / (hi - lo));
                (self.eval(t), deriv)
            }
        })
    }

    pub fn derivative(&self, t: f64) -> Result<CMat> {
        Ok(self.eval_with_derivative(t)?.1)
    }

    /// Parameter values where the tree switches between pieces.
    pub fn junctions(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.collect_junctions(&mut out);
        out.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
        out.dedup();
        out
    }

    fn collect_junctions(&self, out: &mut Vec<f64>) {
        let d = self.domain();
        match self {
            SymplecticPath::Product(l, r) => {
                l.collect_junctions(out);
                r.collect_junctions(out);
            }
            SymplecticPath::Concat(first, second) => {
                first.collect_junctions(out);
                let f = first.domain();
                out.push(f.end);
                let shift = f.end - second.domain().start;
                let mut inner = Vec::new();
                second.collect_junctions(&mut inner);
                out.extend(inner.into_iter().map(|t| t + shift));
            }
            SymplecticPath::Reverse(inner) => {
                let id = inner.domain();
                let mut tmp = Vec::new();
                inner.collect_junctions(&mut tmp);
                out.extend(tmp.into_iter().map(|t| id.start + id.end - t));
            }
            SymplecticPath::Conjugation { inner, .. } | SymplecticPath::Power { inner, .. } => {
                inner.collect_junctions(out)
            }
            SymplecticPath::Reparam { inner, domain } => {
                let id = inner.domain();
                let mut tmp = Vec::new();
                inner.collect_junctions(&mut tmp);
                out.extend(
                    tmp.into_iter()
                        .map(|t| domain.start + (t - id.start) * domain.length() / id.length()),
                );
            }
            SymplecticPath::AIterate(it) => {
                let tau = it.base.domain().length();
                for j in 1..it.k {
                    out.push(d.start + j as f64 * tau);
                }
            }
            SymplecticPath::BrakeIterate(it) => {
                let tau = it.base.domain().length();
                for j in 1..it.k {
                    out.push(d.start + j as f64 * tau);
                }
            }
            SymplecticPath::Sampled(s) => {
                out.extend_from_slice(&s.times[1..s.times.len() - 1]);
            }
            SymplecticPath::Constant { .. } | SymplecticPath::Exp { .. } => {}
        }
    }

    /// Largest relative jump across the iteration junctions of this node.
    pub fn junction_mismatches(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        match self {
            SymplecticPath::AIterate(it) => {
                let d = it.base.domain();
                let start = it.base.eval(d.start);
                let end = it.base.eval(d.end);
                for j in 1..it.k {
                    // Left limit of segment j−1 against the value of segment j.
                    let left = &it.a_powers[j - 1] * &end * &it.p_powers[j - 1];
                    let right = &it.a_powers[j] * &start * &it.p_powers[j];
                    let t = d.start + j as f64 * d.length();
                    out.push((t, frobenius(&(&left - &right)) / frobenius(&left).max(1.0)));
                }
            }
            SymplecticPath::BrakeIterate(it) => {
                let d = it.base.domain();
                let start = it.base.eval(d.start);
                let end = it.base.eval(d.end);
                for seg in 1..it.k {
                    let t = d.start + seg as f64 * d.length();
                    let (left, right) = if seg % 2 == 1 {
                        // Even piece ends at γ(τ)P^j, odd piece starts at Nγ(τ)N P^{j+1}.
                        let j = (seg - 1) / 2;
                        (
                            &end * &it.p_powers[j],
                            &it.n * &end * &it.n * &it.p_powers[j + 1],
                        )
                    } else {
                        let j = seg / 2;
                        (
                            &it.n * &start * &it.n * &it.p_powers[j],
                            &start * &it.p_powers[j],
                        )
                    };
                    out.push((t, frobenius(&(&left - &right)) / frobenius(&left).max(1.0)));
                }
            }
            _ => {}
        }
        out
    }

    fn check_junctions(&self) -> Result<()> {
        for (t, mismatch) in self.junction_mismatches() {
            if mismatch > JUNCTION_TOLERANCE {
                return Err(Error::DiscontinuousJunction { t, mismatch });
            }
        }
        Ok(())
    }
}

fn pull_back(outer: &Domain, inner: &Domain, t: f64) -> f64 {
    inner.start + (t - outer.start) * inner.length() / outer.length()
}

/// Piece index and local parameter for a `k`-fold iteration of `base`.
fn segment(base: &Domain, k: usize, t: f64) -> (usize, f64) {
    let tau = base.length();
    let rel = (t - base.start) / tau;
    let mut j = Float::floor(rel).max(0.0) as usize;
    if j >= k {
        j = k - 1;
    }
    let local = base.start + (t - base.start - j as f64 * tau);
    (j, local.max(base.start).min(base.end))
}

fn sample_segment(times: &[f64], t: f64) -> (usize, f64) {
    let last = times.len() - 2;
    let i = match times.binary_search_by(|x| x.partial_cmp(&t).unwrap_or(core::cmp::Ordering::Less)) {
        Ok(i) => i.min(last),
        Err(i) => i.saturating_sub(1).min(last),
    };
    let frac = (t - times[i]) / (times[i + 1] - times[i]);
    (i, frac.max(0.0).min(1.0))
}

/// `(I − sX)⁻¹(I + sX)`.
fn cayley(x: &CMat, s: f64) -> CMat {
    let n = x.nrows();
    let sx = scale(x, s);
    let minus = identity(n) - &sx;
    let plus = identity(n) + &sx;
    minus.lu().solve(&plus).unwrap_or_else(|| identity(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::relative_distance;
    use crate::polar::random_symplectic;
    use crate::random::{random_hermitian, rng};
    use crate::space::NormalizedSpace;

    fn random_exp_path(seed: u64, n: usize, domain: Domain) -> (SymplecticSpace, SymplecticPath) {
        let space = SymplecticSpace::canonical(n);
        let h = random_hermitian(&mut rng(seed), 2 * n, 1.0);
        let gen = space.generator(&h);
        (space, SymplecticPath::exp(gen, domain))
    }

    fn fd(path: &SymplecticPath, t: f64) -> CMat {
        let h = 1e-6;
        scale(&(path.eval(t + h) - path.eval(t - h)), 0.5 / h)
    }

    #[test]
    fn exact_derivatives_match_differences() {
        let (space, p) = random_exp_path(1, 2, Domain::unit());
        let (_, q) = random_exp_path(2, 2, Domain::unit());
        let n = crate::linalg::block_diag(&identity(2), &-identity(2));
        let trees = [
            SymplecticPath::product(p.clone(), q.clone()).unwrap(),
            SymplecticPath::conjugation(n, p.clone()),
            SymplecticPath::power(q.clone(), 3),
            SymplecticPath::reverse(p.clone()),
            SymplecticPath::reparam(q.clone(), Domain::new(2.0, 4.0).unwrap()),
        ];
        for tree in &trees {
            let t = tree.domain().start + 0.37 * tree.domain().length();
            let exact = tree.derivative(t).unwrap();
            assert!(relative_distance(&exact, &fd(tree, t)) < 1e-6);
            assert!(space.is_symplectic(&tree.eval(t)));
        }
    }

    #[test]
    fn concat_rejects_jumps() {
        let (_, p) = random_exp_path(3, 1, Domain::unit());
        let (_, q) = random_exp_path(4, 1, Domain::unit());
        assert!(matches!(
            SymplecticPath::concat(p.clone(), SymplecticPath::reverse(q)),
            Err(Error::DiscontinuousJunction { .. })
        ));
        let loop_path = SymplecticPath::concat(p.clone(), SymplecticPath::reverse(p)).unwrap();
        assert_eq!(loop_path.domain(), Domain::new(0.0, 2.0).unwrap());
        assert!(relative_distance(&loop_path.end(), &identity(2)) < 1e-12);
    }

    #[test]
    fn a_iteration_with_identity_and_commuting_exponential() {
        let space = SymplecticSpace::canonical(1);
        let tau = 0.8;
        let p = SymplecticPath::exp(space.j().clone(), Domain::new(0.0, tau).unwrap());
        let it = SymplecticPath::a_iterate(p, identity(2), 2).unwrap();
        for k in 0..=20 {
            let t = 2.0 * tau * k as f64 / 20.0;
            assert!(relative_distance(&it.eval(t), &space.exp_j(t)) < 1e-12);
        }
    }

    #[test]
    fn a_iteration_with_k_one_is_base() {
        let (_, p) = random_exp_path(5, 2, Domain::unit());
        let a = random_symplectic(&NormalizedSpace::canonical(2), &mut rng(6), 0.5);
        let it = SymplecticPath::a_iterate(p.clone(), a, 1).unwrap();
        assert!(relative_distance(&it.eval(0.6), &p.eval(0.6)) < 1e-13);
    }

    #[test]
    fn random_a_iteration_is_continuous() {
        let (_, p) = random_exp_path(3, 2, Domain::unit());
        let a = random_symplectic(&NormalizedSpace::canonical(2), &mut rng(3), 0.5);
        let it = SymplecticPath::a_iterate(p, a, 4).unwrap();
        for (_, mismatch) in it.junction_mismatches() {
            assert!(mismatch <= 1e-10);
        }
        for t in it.junctions() {
            let left = it.eval(t - 1e-9);
            let right = it.eval(t + 1e-9);
            assert!(relative_distance(&left, &right) < 1e-7);
        }
    }

    #[test]
    fn a_iteration_rejects_paths_not_starting_at_identity() {
        let (space, p) = random_exp_path(7, 1, Domain::unit());
        let shifted = SymplecticPath::left_mul(space.exp_j(0.5), p).unwrap();
        assert!(matches!(
            SymplecticPath::a_iterate(shifted, space.exp_j(0.2), 3),
            Err(Error::DiscontinuousJunction { .. })
        ));
    }

    #[test]
    fn sampled_path_interpolates_symplectically() {
        let (space, p) = random_exp_path(8, 2, Domain::unit());
        let times: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let mats: Vec<CMat> = times.iter().map(|&t| p.eval(t)).collect();
        let s = SymplecticPath::sampled(times, mats, Chart::Cayley).unwrap();
        assert!(relative_distance(&s.eval(0.3), &p.eval(0.3)) < 1e-12);
        let mid = s.eval(0.35);
        assert!(space.is_symplectic(&mid));
        assert!(relative_distance(&mid, &p.eval(0.35)) < 1e-2);
        let d = s.derivative(0.35).unwrap();
        assert!(relative_distance(&d, &fd(&s, 0.35)) < 1e-4);
    }
}
