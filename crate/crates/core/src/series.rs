//! Exact truncated Laurent series in one variable, and the residue
//! kernels the twisted products are built from: generalized binomial
//! expansions of (1+y)^A, integer powers of log(1+y), and the
//! exponential-variable kernels e^{ax}/(e^x-1)^b.
//!
//! Requesting a coefficient above the truncation order is an error,
//! never a silent zero.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::rational::{binom_rat, factorial, int, Rat};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentSeriesTrunc {
    /// min degree with possibly-nonzero coefficient
    lower: i64,
    /// degrees > trunc are unknown
    trunc: i64,
    coeffs: BTreeMap<i64, Rat>,
}

impl LaurentSeriesTrunc {
    pub fn zero(trunc: i64) -> Self {
        LaurentSeriesTrunc {
            lower: 0,
            trunc,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(trunc: i64) -> Self {
        Self::monomial(0, Rat::one(), trunc)
    }

    pub fn monomial(degree: i64, coeff: Rat, trunc: i64) -> Self {
        assert!(degree <= trunc, "monomial degree above truncation");
        let mut coeffs = BTreeMap::new();
        if !coeff.is_zero() {
            coeffs.insert(degree, coeff);
        }
        LaurentSeriesTrunc {
            lower: degree,
            trunc,
            coeffs,
        }
    }

    pub fn from_fn(lower: i64, trunc: i64, f: impl Fn(i64) -> Rat) -> Self {
        let mut coeffs = BTreeMap::new();
        for d in lower..=trunc {
            let c = f(d);
            if !c.is_zero() {
                coeffs.insert(d, c);
            }
        }
        LaurentSeriesTrunc {
            lower,
            trunc,
            coeffs,
        }
    }

    pub fn lower(&self) -> i64 {
        self.lower
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    /// Coefficient of degree d. Errors above the truncation order.
    pub fn coeff(&self, d: i64) -> Result<Rat> {
        if d > self.trunc {
            return Err(Error::Precondition(format!(
                "coefficient at degree {d} requested above truncation {}",
                self.trunc
            )));
        }
        Ok(self.coeffs.get(&d).cloned().unwrap_or_else(Rat::zero))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            let mut z = Self::zero(self.trunc);
            z.lower = self.lower;
            return z;
        }
        LaurentSeriesTrunc {
            lower: self.lower,
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|(d, v)| (*d, v * c)).collect(),
        }
    }

    /// Multiply by y^k.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeriesTrunc {
            lower: self.lower + k,
            trunc: self.trunc + k,
            coeffs: self.coeffs.iter().map(|(d, v)| (d + k, v.clone())).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let trunc = self.trunc.min(other.trunc);
        let lower = self.lower.min(other.lower);
        let mut coeffs = BTreeMap::new();
        for (d, v) in self.coeffs.iter().chain(other.coeffs.iter()) {
            if *d > trunc {
                continue;
            }
            let e = coeffs.entry(*d).or_insert_with(Rat::zero);
            *e += v;
        }
        coeffs.retain(|_, v: &mut Rat| !v.is_zero());
        LaurentSeriesTrunc {
            lower,
            trunc,
            coeffs,
        }
    }

    /// Product; the result is valid through min over the valid range of
    /// the factors.
    pub fn mul(&self, other: &Self) -> Self {
        let lower = self.lower + other.lower;
        let trunc = (self.trunc + other.lower).min(other.trunc + self.lower);
        let mut coeffs: BTreeMap<i64, Rat> = BTreeMap::new();
        for (d1, v1) in &self.coeffs {
            for (d2, v2) in &other.coeffs {
                let d = d1 + d2;
                if d > trunc {
                    continue;
                }
                let e = coeffs.entry(d).or_insert_with(Rat::zero);
                *e += v1 * v2;
            }
        }
        coeffs.retain(|_, v: &mut Rat| !v.is_zero());
        LaurentSeriesTrunc {
            lower,
            trunc,
            coeffs,
        }
    }

    /// Inverse of a series with nonzero constant term and lower = 0.
    pub fn invert_unit(&self) -> Result<Self> {
        if self.lower != 0 {
            return Err(Error::Precondition("invert_unit needs lower = 0".into()));
        }
        let a0 = self.coeff(0)?;
        if a0.is_zero() {
            return Err(Error::Precondition("invert_unit needs a unit".into()));
        }
        let mut b: Vec<Rat> = Vec::with_capacity((self.trunc + 1) as usize);
        b.push(Rat::one() / &a0);
        for n in 1..=self.trunc {
            let mut acc = Rat::zero();
            for i in 1..=n {
                acc += self.coeff(i)? * &b[(n - i) as usize];
            }
            b.push(-acc / &a0);
        }
        Ok(Self::from_fn(0, self.trunc, |d| b[d as usize].clone()))
    }

    /// Integer power of a unit series (lower = 0, nonzero constant term).
    pub fn pow_unit(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.invert_unit()? } else { self.clone() };
        let mut acc = Self::one(self.trunc);
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }
}

/// (1 + y)^A for rational A: coefficients binom(A, i).
pub fn binom_series(a: &Rat, trunc: i64) -> LaurentSeriesTrunc {
    assert!(trunc >= 0);
    LaurentSeriesTrunc::from_fn(0, trunc, |d| binom_rat(a, d as u64))
}

/// log(1+y)/y, a unit series.
pub fn log_unit_series(trunc: i64) -> LaurentSeriesTrunc {
    LaurentSeriesTrunc::from_fn(0, trunc, |d| {
        let sign = if d % 2 == 0 { 1 } else { -1 };
        int(sign) / int(d + 1)
    })
}

/// (log(1+y))^k as a truncated Laurent series with lower order exactly k.
/// Negative powers go through exact inversion of the unit part.
pub fn log_power_series(k: i64, trunc: i64) -> Result<LaurentSeriesTrunc> {
    if k == 0 {
        return Ok(LaurentSeriesTrunc::one(trunc));
    }
    let unit = log_unit_series(trunc - k);
    Ok(unit.pow_unit(k)?.shift(k))
}

/// e^{wy} as a power series.
pub fn exp_series(w: &Rat, trunc: i64) -> LaurentSeriesTrunc {
    LaurentSeriesTrunc::from_fn(0, trunc, |d| {
        let mut p = Rat::one();
        for _ in 0..d {
            p *= w;
        }
        p / factorial(d as u64)
    })
}

/// (e^y - 1)/y, a unit series with coefficients 1/(d+1)!.
pub fn exp_minus_one_unit_series(trunc: i64) -> LaurentSeriesTrunc {
    LaurentSeriesTrunc::from_fn(0, trunc, |d| Rat::one() / factorial((d + 1) as u64))
}

/// Res_y (1+y)^A y^{-B} (log(1+y))^{-m-1}, the per-mode kernel
/// coefficient of the log-variable residue operations.
pub fn log_kernel_coeff(a: &Rat, b: i64, m: i64) -> Result<Rat> {
    // (1+y)^A y^{-B} log^{-m-1} = y^{-B-m-1} (1+y)^A u^{-m-1}, u = log(1+y)/y
    let target = b + m; // coefficient of y^{B+m} in (1+y)^A u^{-m-1}
    if target < 0 {
        return Ok(Rat::zero());
    }
    let bin = binom_series(a, target);
    let u = log_unit_series(target).pow_unit(-m - 1)?;
    bin.mul(&u).coeff(target)
}

/// Res_x e^{x alpha} (e^x - 1)^{-b} x^p, the exponential-variable form of
/// the same kernels.
pub fn exp_kernel_residue(alpha: &Rat, b: i64, p: i64) -> Result<Rat> {
    // (e^x-1)^{-b} = x^{-b} E^{-b}, E = (e^x-1)/x
    let target = b - p - 1; // coefficient of x^{b-p-1} in e^{x alpha} E^{-b}
    if target < 0 {
        return Ok(Rat::zero());
    }
    let e = exp_series(alpha, target);
    let u = exp_minus_one_unit_series(target).pow_unit(-b)?;
    e.mul(&u).coeff(target)
}

/// The change-of-variable coefficients B_j: rationals with
/// log(1+y) = exp(sum_j B_j y^{j+1} d/dy) applied to y.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChangeVarCoeffs {
    b: Vec<Rat>,
}

impl ChangeVarCoeffs {
    pub fn order(&self) -> usize {
        self.b.len() - 1
    }

    pub fn coeff(&self, j: usize) -> &Rat {
        &self.b[j]
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.b
    }
}

/// Apply exp(sum_j bs[j] y^{j+1} d/dy) to y, as a polynomial mod y^{maxdeg+1}.
/// Requires bs[0] = 0 so that the derivation strictly raises degree.
fn exp_derivation_applied_to_y(bs: &[Rat], maxdeg: i64) -> Vec<Rat> {
    assert!(bs.is_empty() || bs[0].is_zero());
    let n = (maxdeg + 1) as usize;
    let apply = |p: &[Rat]| -> Vec<Rat> {
        let mut out = vec![Rat::zero(); n];
        for (d, c) in p.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, bj) in bs.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                // the j-th term is the vector field y^{j+1} d/dy
                let nd = d + j;
                if nd < n {
                    out[nd] += c * bj * int(d as i64);
                }
            }
        }
        out
    };
    let mut acc = vec![Rat::zero(); n];
    let mut term = vec![Rat::zero(); n];
    if n > 1 {
        term[1] = Rat::one();
    }
    for k in 0..n as i64 {
        if k > 0 {
            term = apply(&term);
            for c in term.iter_mut() {
                *c /= int(k);
            }
        }
        if term.iter().all(|c| c.is_zero()) && k > 0 {
            break;
        }
        for (a, t) in acc.iter_mut().zip(term.iter()) {
            *a += t;
        }
    }
    acc
}

fn log_coeff(d: i64) -> Rat {
    if d == 0 {
        Rat::zero()
    } else {
        int(if d % 2 == 1 { 1 } else { -1 }) / int(d)
    }
}

/// Order-by-order solve of the defining equation for the B_j.
pub fn solve_changevar_coeffs(order: usize) -> ChangeVarCoeffs {
    // degree-1 matching forces e^{B_0} = 1, so B_0 = 0 over the rationals
    let mut bs = vec![Rat::zero()];
    for j in 1..=order {
        bs.push(Rat::zero());
        let cur = exp_derivation_applied_to_y(&bs, (j + 1) as i64);
        // coefficient of y^{j+1} is B_j plus terms in earlier coefficients
        bs[j] = log_coeff((j + 1) as i64) - &cur[j + 1];
    }
    let c = ChangeVarCoeffs { b: bs };
    debug_assert!(verify_changevar(&c));
    c
}

/// Check the defining invariant: applying the exponentiated derivation to
/// y reproduces log(1+y) through degree order+1 exactly.
pub fn verify_changevar(c: &ChangeVarCoeffs) -> bool {
    let maxdeg = (c.order() + 1) as i64;
    let got = exp_derivation_applied_to_y(&c.b, maxdeg);
    (0..=maxdeg).all(|d| got[d as usize] == log_coeff(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn binom_series_values() {
        let s = binom_series(&int(1), 4);
        assert_eq!(s.coeff(0).unwrap(), int(1));
        assert_eq!(s.coeff(1).unwrap(), int(1));
        assert_eq!(s.coeff(2).unwrap(), int(0));
        assert_eq!(binom_series(&int(0), 4), LaurentSeriesTrunc::one(4));
        let h = binom_series(&rat(-1, 2), 4);
        assert_eq!(h.coeff(1).unwrap(), rat(-1, 2));
        assert_eq!(h.coeff(2).unwrap(), rat(3, 8));
    }

    #[test]
    fn log_powers() {
        let l1 = log_power_series(1, 5).unwrap();
        assert_eq!(l1.lower(), 1);
        assert_eq!(l1.coeff(1).unwrap(), int(1));
        assert_eq!(l1.coeff(2).unwrap(), rat(-1, 2));
        assert_eq!(l1.coeff(3).unwrap(), rat(1, 3));
        let l0 = log_power_series(0, 5).unwrap();
        assert_eq!(l0, LaurentSeriesTrunc::one(5));
        // k = -1 against the series-inversion oracle: l1 * lm1 = 1
        let lm1 = log_power_series(-1, 5).unwrap();
        assert_eq!(lm1.lower(), -1);
        assert_eq!(lm1.coeff(-1).unwrap(), int(1));
        assert_eq!(lm1.coeff(0).unwrap(), rat(1, 2));
        assert_eq!(lm1.coeff(1).unwrap(), rat(-1, 12));
        let prod = l1.mul(&lm1);
        assert_eq!(prod.coeff(0).unwrap(), int(1));
        for d in 1..=prod.trunc() {
            assert_eq!(prod.coeff(d).unwrap(), int(0));
        }
    }

    #[test]
    fn log_power_additivity() {
        for j in -4i64..=4 {
            for k in -4i64..=4 {
                let a = log_power_series(j, 6 + j.max(0)).unwrap();
                let b = log_power_series(k, 6 + k.max(0)).unwrap();
                let prod = a.mul(&b);
                let direct = log_power_series(j + k, prod.trunc()).unwrap();
                for d in prod.lower()..=prod.trunc() {
                    assert_eq!(prod.coeff(d).unwrap(), direct.coeff(d).unwrap());
                }
            }
        }
    }

    #[test]
    fn binom_series_additivity() {
        let cases = [rat(1, 2), rat(-1, 2), rat(1, 3), rat(-1, 3), int(2)];
        for a in &cases {
            for b in &cases {
                let s = binom_series(a, 6).mul(&binom_series(b, 6));
                let direct = binom_series(&(a + b), 6);
                for d in 0..=6 {
                    assert_eq!(s.coeff(d).unwrap(), direct.coeff(d).unwrap());
                }
            }
        }
    }

    #[test]
    fn coeff_above_trunc_errors() {
        let s = binom_series(&int(1), 3);
        assert!(s.coeff(4).is_err());
        assert!(s.coeff(3).is_ok());
        let p = s.mul(&binom_series(&int(1), 5));
        assert_eq!(p.trunc(), 3);
        assert!(p.coeff(4).is_err());
    }

    #[test]
    fn kernel_two_routes_agree() {
        // Res_y (1+y)^A y^{-B} log^{-m-1} = Res_x e^{x(A+1)} (e^x-1)^{-B} x^{-m-1}
        for (p, q) in [(0i64, 1i64), (1, 2), (-1, 2), (2, 3), (3, 1)] {
            let a = rat(p, q);
            for b in 0..=4i64 {
                for m in -4..=4i64 {
                    let lhs = log_kernel_coeff(&a, b, m).unwrap();
                    let rhs = exp_kernel_residue(&(&a + int(1)), b, -m - 1).unwrap();
                    assert_eq!(lhs, rhs, "A={a} B={b} m={m}");
                }
            }
        }
    }

    #[test]
    fn changevar_first_coeffs() {
        let c = solve_changevar_coeffs(6);
        assert_eq!(*c.coeff(0), int(0));
        assert_eq!(*c.coeff(1), rat(-1, 2));
        assert!(verify_changevar(&c));
    }
}
