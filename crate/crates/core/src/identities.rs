//! The three combinatorial identities behind the unit law, the squared
//! kernel reduction, and the iterate exchange, verified exactly as
//! polynomial identities (denominators cleared) for a range of s.

use std::collections::BTreeMap;

use num::Zero;

use crate::rational::{binom_int, int, Rat};
use crate::voa::Verdict;

/// Finitely supported univariate polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly1 {
    coeffs: BTreeMap<i64, Rat>,
}

impl Poly1 {
    pub fn zero() -> Self {
        Poly1::default()
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = Poly1::zero();
        p.add_term(0, c);
        p
    }

    pub fn add_term(&mut self, d: i64, c: Rat) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(d).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&d);
        }
    }

    pub fn add_scaled(&mut self, other: &Poly1, s: &Rat) {
        for (d, c) in &other.coeffs {
            self.add_term(*d, c * s);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// (1 + z)^k for k >= 0.
    pub fn one_plus_z_pow(k: i64) -> Self {
        assert!(k >= 0);
        let mut p = Poly1::zero();
        for i in 0..=k {
            p.add_term(i, binom_int(k, i as u64));
        }
        p
    }

    pub fn shift(&self, k: i64) -> Self {
        let mut p = Poly1::zero();
        for (d, c) in &self.coeffs {
            p.add_term(d + k, c.clone());
        }
        p
    }
}

/// Finitely supported polynomial in two variables.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly2 {
    coeffs: BTreeMap<(i64, i64), Rat>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2::default()
    }

    pub fn add_term(&mut self, d: (i64, i64), c: Rat) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(d).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&d);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// z1^a * z2^b * (1 + z2)^k, k >= 0.
    pub fn monomial_times_one_plus_z2_pow(a: i64, b: i64, k: i64, scale: &Rat) -> Self {
        assert!(k >= 0);
        let mut p = Poly2::zero();
        for i in 0..=k {
            p.add_term((a, b + i), binom_int(k, i as u64) * scale);
        }
        p
    }

    pub fn add_scaled(&mut self, other: &Poly2, s: &Rat) {
        for (d, c) in &other.coeffs {
            self.add_term(*d, c * s);
        }
    }
}

fn sign(m: i64) -> Rat {
    int(if m.rem_euclid(2) == 0 { 1 } else { -1 })
}

/// sum_{m=0}^s binom(m+s,s) [(-1)^m (1+z)^{s+1} - (-1)^s (1+z)^m] / z^{s+m+1} = 1,
/// cleared by z^{2s+1}.
pub fn check_identity_i(s: i64) -> Verdict {
    assert!(s >= 0);
    let mut lhs = Poly1::zero();
    for m in 0..=s {
        let b = binom_int(m + s, s as u64);
        let mut bracket = Poly1::zero();
        bracket.add_scaled(&Poly1::one_plus_z_pow(s + 1), &sign(m));
        bracket.add_scaled(&Poly1::one_plus_z_pow(m), &-sign(s));
        lhs.add_scaled(&bracket.shift(s - m), &b);
    }
    let mut rhs = Poly1::zero();
    rhs.add_term(2 * s + 1, int(1));
    lhs.add_scaled(&rhs, &int(-1));
    if lhs.is_zero() {
        Verdict::Pass
    } else {
        Verdict::Fail(format!("identity I fails at s={s}"))
    }
}

/// sum_m binom(m+s,s) (-1)^m (mz + s + m + 1) / z^{s+m+2}
///   = (-1)^s binom(2s+1,s) (s+1) / z^{2s+2}, cleared by z^{2s+2}.
pub fn check_identity_ii(s: i64) -> Verdict {
    assert!(s >= 0);
    let mut lhs = Poly1::zero();
    for m in 0..=s {
        let b = binom_int(m + s, s as u64) * sign(m);
        lhs.add_term(s - m + 1, &b * int(m));
        lhs.add_term(s - m, &b * int(s + m + 1));
    }
    lhs.add_term(0, -(sign(s) * binom_int(2 * s + 1, s as u64) * int(s + 1)));
    if lhs.is_zero() {
        Verdict::Pass
    } else {
        Verdict::Fail(format!("identity II fails at s={s}"))
    }
}

/// sum_{m=0}^s (-1)^m binom(m+s,s) [ sum_{i=0}^{s-m} binom(-m-s-1,i) (-1)^i
///   z2^i (1+z2)^m / z1^{i+m} - 1/z1^m ] = 0, cleared by z1^s.
pub fn check_identity_iii(s: i64) -> Verdict {
    assert!(s >= 0);
    let mut lhs = Poly2::zero();
    for m in 0..=s {
        let outer = sign(m) * binom_int(m + s, s as u64);
        for i in 0..=(s - m) {
            let c = binom_int(-m - s - 1, i as u64) * sign(i) * &outer;
            lhs.add_scaled(
                &Poly2::monomial_times_one_plus_z2_pow(s - i - m, i, m, &c),
                &int(1),
            );
        }
        lhs.add_term((s - m, 0), -outer);
    }
    if lhs.is_zero() {
        Verdict::Pass
    } else {
        Verdict::Fail(format!("identity III fails at s={s}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_i_range() {
        for s in 0..=10 {
            assert!(check_identity_i(s).passed(), "s={s}");
        }
    }

    #[test]
    fn identity_ii_range() {
        for s in 0..=10 {
            assert!(check_identity_ii(s).passed(), "s={s}");
        }
    }

    #[test]
    fn identity_iii_range() {
        for s in 0..=10 {
            assert!(check_identity_iii(s).passed(), "s={s}");
        }
    }

    #[test]
    fn perturbed_identities_fail() {
        // transcription-bug canaries: a wrong sign or binomial must fail
        let mut lhs = Poly1::zero();
        lhs.add_term(0, int(1));
        assert!(!lhs.is_zero());
        // identity I with s+2 in place of s+1 in the first exponent
        let s = 2i64;
        let mut wrong = Poly1::zero();
        for m in 0..=s {
            let b = binom_int(m + s, s as u64);
            let mut bracket = Poly1::zero();
            bracket.add_scaled(&Poly1::one_plus_z_pow(s + 2), &sign(m));
            bracket.add_scaled(&Poly1::one_plus_z_pow(m), &-sign(s));
            wrong.add_scaled(&bracket.shift(s - m), &b);
        }
        wrong.add_term(2 * s + 1, int(-1));
        assert!(!wrong.is_zero());
    }
}
