//! Residue operations: finite linear combinations of mode products
//! weighted by residue kernel coefficients. Both twisted products and
//! their classical counterparts are instances of these two primitives.

use num::Zero;

use crate::rational::{binom_rat, Rat};
use crate::series::log_kernel_coeff;
use crate::sparse::SparseVector;
use crate::voa::{AlgebraDescription, Vector};
use crate::Result;

fn max_weight(v: &Vector) -> i64 {
    v.keys().map(|m| m.weight()).max().unwrap_or(0)
}

/// Logarithmic-kernel residue operation:
///   sum_m (u_m v) * Res_y (1+y)^A y^{-B} (log(1+y))^{-m-1}.
/// The kernel coefficient vanishes for m < -B and the mode product
/// vanishes for m >= wt u + wt v, so the sum is finite.
pub fn resop(alg: &AlgebraDescription, u: &Vector, v: &Vector, a: &Rat, b: i64) -> Result<Vector> {
    if u.is_zero() || v.is_zero() {
        return Ok(Vector::zero());
    }
    let m_max = max_weight(u) + max_weight(v) - 1;
    let mut out = Vector::zero();
    for m in -b..=m_max {
        let c = log_kernel_coeff(a, b, m)?;
        if c.is_zero() {
            continue;
        }
        out.add_scaled(&alg.mode_product_vec(u, m, v), &c);
    }
    Ok(out)
}

/// Polynomial-kernel residue operation:
///   sum_{i>=0} binom(A, i) u_{i-B} v,
/// finite by the truncation axiom.
pub fn resop_poly(
    alg: &AlgebraDescription,
    u: &Vector,
    v: &Vector,
    a: &Rat,
    b: i64,
) -> Result<Vector> {
    if u.is_zero() || v.is_zero() {
        return Ok(Vector::zero());
    }
    let i_max = max_weight(u) + max_weight(v) - 1 + b;
    let mut out = Vector::zero();
    for i in 0..=i_max.max(-1) {
        if i < 0 {
            break;
        }
        let c = binom_rat(a, i as u64);
        if c.is_zero() {
            continue;
        }
        out.add_scaled(&alg.mode_product_vec(u, i - b, v), &c);
    }
    Ok(out)
}

/// Exponential-kernel residue operation with the same mode products but
/// coefficients Res_x e^{x alpha} (e^x - 1)^{-b} x^{-m-1}; used as an
/// independent oracle for `resop` (alpha = A + 1) and as the bracket-side
/// form of the twisted products.
pub fn resop_exp(
    alg: &AlgebraDescription,
    u: &Vector,
    v: &Vector,
    alpha: &Rat,
    b: i64,
) -> Result<Vector> {
    if u.is_zero() || v.is_zero() {
        return Ok(Vector::zero());
    }
    let m_max = max_weight(u) + max_weight(v) - 1;
    let mut out = Vector::zero();
    for m in -b..=m_max {
        let c = crate::series::exp_kernel_residue(alpha, b, -m - 1)?;
        if c.is_zero() {
            continue;
        }
        out.add_scaled(&alg.mode_product_vec(u, m, v), &c);
    }
    Ok(out)
}

/// Convenience: u_k v lifted to sparse vectors as a SparseVector result.
pub fn single_mode(alg: &AlgebraDescription, u: &Vector, k: i64, v: &Vector) -> SparseVector<crate::basis::BasisMonomial> {
    alg.mode_product_vec(u, k, v)
}
