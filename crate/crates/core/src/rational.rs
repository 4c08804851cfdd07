//! Exact rational scalars and the binomial coefficients the twisted
//! product kernels are built from. `BigRational` already keeps values in
//! lowest terms with a positive denominator, which is exactly the scalar
//! contract needed here.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

/// Generalized binomial coefficient binom(a, k) = a(a-1)...(a-k+1)/k!
/// for an arbitrary rational upper argument.
pub fn binom_rat(a: &Rat, k: u64) -> Rat {
    let mut acc = Rat::one();
    for i in 0..k {
        acc *= a - int(i as i64);
        acc /= int((i + 1) as i64);
    }
    acc
}

/// binom(n, k) with an integer (possibly negative) upper argument.
pub fn binom_int(n: i64, k: u64) -> Rat {
    binom_rat(&int(n), k)
}

pub fn factorial(n: u64) -> Rat {
    let mut acc = Rat::one();
    for i in 2..=n {
        acc *= int(i as i64);
    }
    acc
}

/// Exact rational formatted as `p/q` (or just `p` when q = 1).
pub fn format_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rat(s: &str) -> crate::Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| crate::Error::Parse(format!("bad rational numerator {num:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| crate::Error::Parse(format!("bad rational denominator {den:?}")))?;
    if d.is_zero() {
        return Err(crate::Error::Parse("zero denominator".into()));
    }
    Ok(Rat::new(n, d))
}

pub fn is_zero(x: &Rat) -> bool {
    x.is_zero()
}

pub fn abs(x: &Rat) -> Rat {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom_int(5, 2), int(10));
        assert_eq!(binom_int(-1, 3), int(-1));
        assert_eq!(binom_int(-2, 2), int(3));
        // binom(-1/2, 2) = 3/8
        assert_eq!(binom_rat(&rat(-1, 2), 2), rat(3, 8));
        assert_eq!(binom_rat(&rat(-1, 2), 0), int(1));
    }

    #[test]
    fn format_parse_roundtrip() {
        for (p, q) in [(1i64, 2i64), (-3, 7), (4, 1), (0, 5)] {
            let x = rat(p, q);
            assert_eq!(parse_rat(&format_rat(&x)).unwrap(), x);
        }
    }

    #[test]
    fn exact_arithmetic_roundtrip() {
        // (a/b + c/d) - c/d = a/b exactly
        let a = rat(22, 7);
        let c = rat(-355, 113);
        assert_eq!(&(&a + &c) - &c, a);
    }
}
