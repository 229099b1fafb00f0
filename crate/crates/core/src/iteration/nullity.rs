//! Nullity splittings, Chebyshev block powers and the block identities of
//! brake-involutive symplectic matrices.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::iteration::brake::{BrakeSymmetry, Blocks};
use crate::iteration::chebyshev::{eval_matrix, ChebyshevTriple};
use crate::lagrangian::product_frame;
use crate::linalg::{
    frobenius, hstack, identity, intersection_dim, numerical_rank, power, rank, svd, relative_distance,
    try_inverse, unit, vstack, CMat, IMAG,
};
use crate::maslov::{nullities, ProductSpace};
use crate::tolerance::Tolerances;

/// Relative level for the block identities.
pub const BLOCK_TOLERANCE: f64 = 1e-9;

/// Relative level for the Chebyshev power against the direct power.
pub const POWER_TOLERANCE: f64 = 1e-8;

/// `dim ker m`.
pub fn kernel_dim(m: &CMat, tol: &Tolerances) -> Result<usize> {
    Ok(m.ncols() - rank(m, tol)?)
}

pub fn spectral_norm(m: &CMat) -> f64 {
    svd(m).values.iter().cloned().fold(0.0, f64::max)
}

/// `dim ker m`, with singular values measured against `reference` instead of `‖m‖`.
pub fn kernel_dim_scaled(m: &CMat, reference: f64, tol: &Tolerances) -> Result<usize> {
    let mut values = svd(m).values;
    let n = values.len();
    values.push(reference.max(values.iter().cloned().fold(0.0, f64::max)));
    Ok(m.ncols() + 1 - numerical_rank(&values, tol)?.min(n + 1))
}

/// `dim ker(M − zI)`, thresholded relative to `‖M‖₂ + |z|`.
pub fn eigen_nullity(m: &CMat, z: num_complex::Complex64, tol: &Tolerances) -> Result<usize> {
    let reference = spectral_norm(m) + z.norm();
    kernel_dim_scaled(&(m - identity(m.nrows()).map(|w| w * z)), reference, tol)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootNullity {
    pub j: usize,
    pub angle: f64,
    pub nullity: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerSplit {
    pub k: usize,
    pub roots: Vec<RootNullity>,
    pub total: usize,
    pub power_nullity: usize,
}

/// `ν₁(M^k)` against `Σ_{z^k=1} ν_z(M)`.
pub fn split_nullity_power(m: &CMat, k: usize, tol: &Tolerances) -> Result<PowerSplit> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let roots: Vec<RootNullity> = (0..k)
        .map(|j| {
            let angle = TAU * j as f64 / k as f64;
            eigen_nullity(m, unit(angle), tol).map(|nullity| RootNullity { j, angle, nullity })
        })
        .collect::<Result<_>>()?;
    let total = roots.iter().map(|r| r.nullity).sum();
    let power_nullity = eigen_nullity(&power(m, k), unit(0.0), tol)?;
    if total != power_nullity {
        return Err(Error::IdentityViolated(format!(
            "nu_1(M^{k}) = {power_nullity} but the root sum is {total}"
        )));
    }
    Ok(PowerSplit {
        k,
        roots,
        total,
        power_nullity,
    })
}

/// Residuals of `KA = D*K`, `KB = B*K*`, `K*C = C*K`, `AB = BD`, `CA = DC`,
/// `A² − BC = I`, `D² − CB = I`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockResiduals {
    pub ka: f64,
    pub kb: f64,
    pub kc: f64,
    pub ab: f64,
    pub ca: f64,
    pub a2: f64,
    pub d2: f64,
}

impl BlockResiduals {
    pub fn max(&self) -> f64 {
        [self.ka, self.kb, self.kc, self.ab, self.ca, self.a2, self.d2]
            .iter()
            .cloned()
            .fold(0.0, f64::max)
    }
}

fn rel(lhs: &CMat, rhs: &CMat, scale: f64) -> f64 {
    frobenius(&(lhs - rhs)) / scale.max(1.0)
}

pub fn block_residuals(k: &CMat, b: &Blocks) -> BlockResiduals {
    let n = k.nrows();
    let id = identity(n);
    let nk = frobenius(k);
    let s = |x: &CMat, y: &CMat| frobenius(x) * frobenius(y);
    BlockResiduals {
        ka: rel(&(k * &b.a), &(b.d.adjoint() * k), nk * frobenius(&b.a).max(frobenius(&b.d))),
        kb: rel(&(k * &b.b), &(b.b.adjoint() * k.adjoint()), nk * frobenius(&b.b)),
        kc: rel(&(k.adjoint() * &b.c), &(b.c.adjoint() * k), nk * frobenius(&b.c)),
        ab: rel(&(&b.a * &b.b), &(&b.b * &b.d), s(&b.a, &b.b).max(s(&b.b, &b.d))),
        ca: rel(&(&b.c * &b.a), &(&b.d * &b.c), s(&b.c, &b.a).max(s(&b.d, &b.c))),
        a2: rel(&(&b.a * &b.a - &b.b * &b.c), &id, s(&b.a, &b.a).max(s(&b.b, &b.c))),
        d2: rel(&(&b.d * &b.d - &b.c * &b.b), &id, s(&b.d, &b.d).max(s(&b.c, &b.b))),
    }
}

#[derive(Debug, Clone)]
pub struct ChebPower {
    pub k: usize,
    /// `[[T_k(A), U_{k−1}(A)B], [CU_{k−1}(A), T_k(D)]]`.
    pub power: CMat,
    pub direct: CMat,
    /// `‖power − M^k‖ / ‖M^k‖`.
    pub residual: f64,
    pub blocks: BlockResiduals,
}

/// `M^k` through Chebyshev polynomials of the blocks of a matrix with `(NM)² = I`.
pub fn cheb_power(m: &CMat, k: usize, brake: &BrakeSymmetry) -> Result<ChebPower> {
    let kk = brake
        .normal_form()
        .ok_or_else(|| Error::InvalidArgument("cheb_power needs the adapted normal form".into()))?
        .clone();
    let defect = brake.involution_defect(m);
    if defect > 1e-8 {
        return Err(Error::NotBrakeInvolution(defect));
    }
    let b = brake.blocks(m)?;
    let residuals = block_residuals(&kk, &b);
    if residuals.max() > BLOCK_TOLERANCE {
        return Err(Error::BlockIdentityViolated(format!("{residuals:?}")));
    }
    let cheb = ChebyshevTriple::new(k)?;
    let t_a = eval_matrix(&cheb.t, &b.a);
    let t_d = eval_matrix(&cheb.t, &b.d);
    let u_a = eval_matrix(&cheb.u_prev, &b.a);
    let power_blocks = Blocks {
        a: t_a,
        b: &u_a * &b.b,
        c: &b.c * &u_a,
        d: t_d,
    };
    let assembled = power_blocks.assemble();
    let direct = power(m, k);
    let residual = frobenius(&(&assembled - &direct)) / frobenius(&direct).max(1e-300);
    if residual > POWER_TOLERANCE {
        return Err(Error::BlockIdentityViolated(format!(
            "Chebyshev power differs from M^{k} by {residual:e}"
        )));
    }
    Ok(ChebPower {
        k,
        power: assembled,
        direct,
        residual,
        blocks: residuals,
    })
}

/// Nullity and co-nullity of `Gr(M)` against a Lagrangian of `X`.
pub type NullityPair = (usize, usize);

#[derive(Debug, Clone)]
pub struct BrakeSplit {
    pub k: usize,
    /// `ν, ν̃` of `M = NP⁻¹NP` against `U⁺ × U⁺`.
    pub m_pp: NullityPair,
    pub p_pp: NullityPair,
    pub p_pm: NullityPair,
    pub mk_pp: NullityPair,
    /// `ν_{e^{ijπ/k}}(M)`, `j = 1..k−1`.
    pub half_roots: Vec<NullityPair>,
    pub pmk_pp: NullityPair,
    /// `ν_{e^{2ijπ/(2k+1)}}(M)`, `j = 1..k`.
    pub odd_roots: Vec<NullityPair>,
    /// `(dim ker(D − cos α), dim ker(M − e^{iα}))` for every angle above.
    pub cosine_kernels: Vec<(f64, usize, usize)>,
    /// Largest deviation of `(I − λ⁻¹MN)(M − λI)` from its triangular form.
    pub triangular_residual: f64,
    /// `‖B₃ − B₁R_k(D)‖`, relative.
    pub b3_residual: f64,
}

fn sum_pairs(pairs: &[NullityPair]) -> NullityPair {
    pairs.iter().fold((0, 0), |acc, p| (acc.0 + p.0, acc.1 + p.1))
}

fn add_pairs(a: NullityPair, b: NullityPair) -> NullityPair {
    (a.0 + b.0, a.1 + b.1)
}

/// All nullity identities for `M = NP⁻¹NP` and its `k`-th power, plus the
/// block relations behind them.
pub fn split_nullity_brake(p: &CMat, k: usize, brake: &BrakeSymmetry) -> Result<BrakeSplit> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let space = brake.space();
    let tol = *space.tolerances();
    space.check_symplectic(p)?;
    let ps = ProductSpace::new(space);
    let up = brake.u_plus();
    let um = brake.u_minus();
    let pp = product_frame(up, up);
    let pm = product_frame(up, um);
    let m = brake.brake_product(p)?;
    let nul = |x: &CMat, v: &CMat| nullities(&ps, x, v, &tol);

    let m_pp = nul(&m, &pp)?;
    let p_pp = nul(p, &pp)?;
    let p_pm = nul(p, &pm)?;
    let mk = power(&m, k);
    let mk_pp = nul(&mk, &pp)?;
    let half_angles: Vec<f64> = (1..k).map(|j| PI * j as f64 / k as f64).collect();
    let half_roots: Vec<NullityPair> = half_angles
        .iter()
        .map(|&a| nul(&m, &ps.circle_graph(unit(a))))
        .collect::<Result<_>>()?;
    let pmk = p * &mk;
    let pmk_pp = nul(&pmk, &pp)?;
    let odd_angles: Vec<f64> = (1..=k).map(|j| TAU * j as f64 / (2 * k + 1) as f64).collect();
    let odd_roots: Vec<NullityPair> = odd_angles
        .iter()
        .map(|&a| nul(&m, &ps.circle_graph(unit(a))))
        .collect::<Result<_>>()?;

    let check = |name: &str, lhs: NullityPair, rhs: NullityPair| -> Result<()> {
        if lhs != rhs {
            return Err(Error::IdentityViolated(format!("{name}: {lhs:?} vs {rhs:?}")));
        }
        Ok(())
    };
    check("brake product nullity", m_pp, add_pairs(p_pp, p_pm))?;
    check("brake power nullity", mk_pp, add_pairs(m_pp, sum_pairs(&half_roots)))?;
    check("brake odd nullity", pmk_pp, add_pairs(p_pp, sum_pairs(&odd_roots)))?;

    let mut cosine_kernels = Vec::new();
    let mut triangular_residual: f64 = 0.0;
    let mut b3_residual = 0.0;
    if brake.normal_form().is_some() {
        let n = brake.half_dim();
        let blocks = brake.blocks(&m)?;
        let dim = space.dim();
        for &alpha in half_angles.iter().chain(odd_angles.iter()) {
            let shifted = &blocks.d - identity(n).map(|z| z * alpha.cos());
            let d_norm = spectral_norm(&blocks.d);
            let lhs = kernel_dim_scaled(&shifted, d_norm + 1.0, &tol)?;
            let rhs = eigen_nullity(&m, unit(alpha), &tol)?;
            if lhs != rhs {
                return Err(Error::IdentityViolated(format!(
                    "dim ker(D - cos a) = {lhs}, dim ker(M - e^(ia)) = {rhs} at a = {alpha}"
                )));
            }
            cosine_kernels.push((alpha, lhs, rhs));
            let lam = unit(alpha);
            let mn = &m * brake.n();
            let prod = (identity(dim) - mn.map(|z| z / lam)) * (&m - identity(dim).map(|z| z * lam));
            let expected = vstack(
                &hstack(
                    &identity(n).map(|z| z * IMAG * (-2.0 * alpha.sin())),
                    &blocks.b.map(|z| z * 2.0),
                ),
                &hstack(&CMat::zeros(n, n), &shifted.map(|z| z * 2.0)),
            );
            triangular_residual = triangular_residual.max(relative_distance(&prod, &expected));
        }
        let pb = brake.blocks(p)?;
        let b3 = brake.blocks(&pmk)?.b;
        let r = eval_matrix(&ChebyshevTriple::new(k)?.r, &blocks.d);
        let rhs = &pb.b * r;
        b3_residual = relative_distance(&b3, &rhs);
        if triangular_residual > 1e-8 || b3_residual > 1e-8 {
            return Err(Error::BlockIdentityViolated(format!(
                "triangular product {triangular_residual:e}, B3 relation {b3_residual:e}"
            )));
        }
    }

    Ok(BrakeSplit {
        k,
        m_pp,
        p_pp,
        p_pm,
        mk_pp,
        half_roots,
        pmk_pp,
        odd_roots,
        cosine_kernels,
        triangular_residual,
        b3_residual,
    })
}

/// Kernel bookkeeping of `K − S` for `K = NM⁻¹NM` and a twist `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistSplit {
    pub ker_k_minus_s: usize,
    pub ker_c: usize,
    pub ker_b: usize,
    /// `dim(V⁺ ∩ M⁻¹U⁺)`.
    pub cap_plus: usize,
    /// `dim(V⁻ ∩ M⁻¹U⁻)`.
    pub cap_minus: usize,
    /// `ν_S(K)`, `ν_{V⁺×U⁺}(M)`, `ν_{V⁻×U⁻}(M)` from graph intersections.
    pub graph_nullities: (usize, usize, usize),
    /// `‖U-coordinates of (NM − MNS) − [[0, 2B], [−2C, 0]]‖`, relative.
    pub antidiagonal_residual: f64,
}

pub fn twist_splitting(m: &CMat, brake: &BrakeSymmetry) -> Result<TwistSplit> {
    let twist = brake
        .twist()
        .ok_or_else(|| Error::InvalidArgument("brake data carries no twist S".into()))?;
    let space = brake.space();
    let tol = *space.tolerances();
    let n = brake.half_dim();
    let dim = space.dim();
    let nmat = brake.n();
    let s = &twist.s;
    let m_inv = try_inverse(m)?;
    let k = nmat * &m_inv * nmat * m;
    let ker_k_minus_s = kernel_dim_scaled(&(&k - s), spectral_norm(&k) + spectral_norm(s), &tol)?;

    let eu = hstack(brake.u_plus(), brake.u_minus());
    let ev = hstack(&twist.v_plus, &twist.v_minus);
    let eu_inv = try_inverse(&eu)?;
    let coords = &eu_inv * m * &ev;
    let b = coords.view((0, n), (n, n)).into_owned();
    let c = coords.view((n, 0), (n, n)).into_owned();
    let reference = spectral_norm(&coords);
    let ker_b = kernel_dim_scaled(&b, reference, &tol)?;
    let ker_c = kernel_dim_scaled(&c, reference, &tol)?;
    let lhs = &eu_inv * (nmat * m - m * nmat * s) * &ev;
    let zero = CMat::zeros(n, n);
    let expected = vstack(
        &hstack(&zero, &b.map(|z| z * 2.0)),
        &hstack(&c.map(|z| z * -2.0), &zero),
    );
    let antidiagonal_residual = relative_distance(&lhs, &expected);
    let cap_plus = intersection_dim(&twist.v_plus, &(&m_inv * brake.u_plus()), &tol)?;
    let cap_minus = intersection_dim(&twist.v_minus, &(&m_inv * brake.u_minus()), &tol)?;

    let ps = ProductSpace::new(space);
    let nu_s = nullities(&ps, &k, &crate::lagrangian::graph_frame(s), &tol)?.0;
    let nu_plus = nullities(&ps, m, &product_frame(&twist.v_plus, brake.u_plus()), &tol)?.0;
    let nu_minus = nullities(&ps, m, &product_frame(&twist.v_minus, brake.u_minus()), &tol)?.0;

    let out = TwistSplit {
        ker_k_minus_s,
        ker_c,
        ker_b,
        cap_plus,
        cap_minus,
        graph_nullities: (nu_s, nu_plus, nu_minus),
        antidiagonal_residual,
    };
    let consistent = ker_k_minus_s == ker_c + ker_b
        && ker_c == cap_plus
        && ker_b == cap_minus
        && nu_s == nu_plus + nu_minus
        && nu_s == ker_k_minus_s
        && antidiagonal_residual < 1e-8;
    if !consistent || dim != 2 * n {
        return Err(Error::IdentityViolated(format!("twist splitting {out:?}")));
    }
    Ok(out)
}
