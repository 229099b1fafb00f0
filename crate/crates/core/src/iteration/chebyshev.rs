//! Chebyshev polynomials with exact integer coefficients.
//!
//! Coefficient vectors are in increasing degree. All arithmetic is checked;
//! overflow surfaces as [`Error::InvalidArgument`].

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{c, identity, CMat};

pub type Poly = Vec<i64>;

fn overflow() -> Error {
    Error::InvalidArgument("Chebyshev coefficient overflow".into())
}

fn add(a: &[i64], b: &[i64]) -> Result<Poly> {
    let len = a.len().max(b.len());
    (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            x.checked_add(y).ok_or_else(overflow)
        })
        .collect()
}

/// `2x·p − q`.
fn step(p: &[i64], q: &[i64]) -> Result<Poly> {
    let mut out = vec![0i64; p.len() + 1];
    for (i, &x) in p.iter().enumerate() {
        out[i + 1] = x.checked_mul(2).ok_or_else(overflow)?;
    }
    for (i, &y) in q.iter().enumerate() {
        out[i] = out[i].checked_sub(y).ok_or_else(overflow)?;
    }
    trim(&mut out);
    Ok(out)
}

fn trim(p: &mut Poly) {
    while p.len() > 1 && *p.last().expect("nonempty") == 0 {
        p.pop();
    }
}

/// `p_k` of the recurrence `p_{k+1} = 2x·p_k − p_{k−1}` from `p_0`, `p_1`.
fn recurrence(p0: Poly, p1: Poly, k: usize) -> Result<Poly> {
    if k == 0 {
        return Ok(p0);
    }
    let (mut prev, mut cur) = (p0, p1);
    for _ in 1..k {
        let next = step(&cur, &prev)?;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// First kind, `T_k(cos α) = cos kα`.
pub fn chebyshev_t(k: usize) -> Result<Poly> {
    recurrence(vec![1], vec![0, 1], k)
}

/// Second kind, `U_k(cos α) = sin((k+1)α)/sin α`; `U_{−1} = 0`.
pub fn chebyshev_u(k: i64) -> Result<Poly> {
    if k < 0 {
        return Ok(vec![0]);
    }
    recurrence(vec![1], vec![0, 2], k as usize)
}

/// `R_k(x) = (x + 1)U_{k−1}(x) + T_k(x)`.
pub fn chebyshev_r(k: usize) -> Result<Poly> {
    let u = chebyshev_u(k as i64 - 1)?;
    let mut shifted = vec![0i64; u.len() + 1];
    for (i, &x) in u.iter().enumerate() {
        shifted[i + 1] = x;
    }
    let mut r = add(&add(&shifted, &u)?, &chebyshev_t(k)?)?;
    trim(&mut r);
    Ok(r)
}

/// Horner evaluation at a real point.
pub fn eval(p: &[i64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, &a| acc * x + a as f64)
}

/// Horner evaluation at a square matrix.
pub fn eval_matrix(p: &[i64], m: &CMat) -> CMat {
    let n = m.nrows();
    let mut acc = CMat::zeros(n, n);
    for &a in p.iter().rev() {
        acc = &acc * m + identity(n).map(|z| z * c(a as f64, 0.0));
    }
    acc
}

/// `T_k`, `U_{k−1}` and `R_k` for one `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChebyshevTriple {
    pub k: usize,
    pub t: Poly,
    pub u_prev: Poly,
    pub r: Poly,
}

impl ChebyshevTriple {
    pub fn new(k: usize) -> Result<Self> {
        Ok(ChebyshevTriple {
            k,
            t: chebyshev_t(k)?,
            u_prev: chebyshev_u(k as i64 - 1)?,
            r: chebyshev_r(k)?,
        })
    }
}
