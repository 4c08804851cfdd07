//! States: exact-rational combinations of basis monomials carried with a
//! mandatory weight cap. A computation whose result would exceed the cap
//! errors out; nothing is ever truncated.

use std::fmt;

use num::{One, Zero};

use crate::basis::{BasisMonomial, Family};
use crate::rational::{format_rat, parse_rat, Rat};
use crate::sparse::SparseVector;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    family: Family,
    terms: SparseVector<BasisMonomial>,
    cap: i64,
}

impl State {
    pub fn zero(family: Family, cap: i64) -> Self {
        State {
            family,
            terms: SparseVector::zero(),
            cap,
        }
    }

    pub fn vacuum(family: Family, cap: i64) -> Self {
        State {
            family,
            terms: SparseVector::unit(BasisMonomial::vacuum(family)),
            cap,
        }
    }

    pub fn monomial(m: BasisMonomial, cap: i64) -> Result<Self> {
        Self::from_terms(m.family(), cap, [(m, Rat::one())])
    }

    pub fn from_terms(
        family: Family,
        cap: i64,
        terms: impl IntoIterator<Item = (BasisMonomial, Rat)>,
    ) -> Result<Self> {
        let mut s = State::zero(family, cap);
        for (m, c) in terms {
            s.add_term(m, c)?;
        }
        Ok(s)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn cap(&self) -> i64 {
        self.cap
    }

    pub fn terms(&self) -> &SparseVector<BasisMonomial> {
        &self.terms
    }

    pub fn into_terms(self) -> SparseVector<BasisMonomial> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    /// Max weight of the support (0 for the zero state).
    pub fn weight(&self) -> i64 {
        self.terms.keys().map(|m| m.weight()).max().unwrap_or(0)
    }

    /// True when every term has the same weight w (vacuously for zero).
    pub fn is_weight_homogeneous(&self) -> bool {
        let mut it = self.terms.keys();
        match it.next() {
            None => true,
            Some(first) => {
                let w = first.weight();
                it.all(|m| m.weight() == w)
            }
        }
    }

    pub fn add_term(&mut self, m: BasisMonomial, c: Rat) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        if m.family() != self.family {
            return Err(Error::Precondition("family mismatch".into()));
        }
        if m.weight() > self.cap {
            return Err(Error::CapExceeded {
                needed: m.weight(),
                cap: self.cap,
                context: format!("term {m}"),
            });
        }
        self.terms.add_term(m, c);
        Ok(())
    }

    pub fn add_scaled(&mut self, other: &State, scale: &Rat) -> Result<()> {
        if other.family != self.family {
            return Err(Error::Precondition("family mismatch".into()));
        }
        for (m, c) in other.terms.iter() {
            self.add_term(m.clone(), c * scale)?;
        }
        Ok(())
    }

    pub fn add(&self, other: &State) -> Result<State> {
        let mut out = self.clone();
        out.cap = self.cap.min(other.cap);
        out.check_cap()?;
        out.add_scaled(other, &Rat::one())?;
        Ok(out)
    }

    pub fn sub(&self, other: &State) -> Result<State> {
        let mut out = self.clone();
        out.cap = self.cap.min(other.cap);
        out.check_cap()?;
        out.add_scaled(other, &-Rat::one())?;
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> State {
        State {
            family: self.family,
            terms: self.terms.scale(c),
            cap: self.cap,
        }
    }

    fn check_cap(&self) -> Result<()> {
        let w = self.weight();
        if w > self.cap {
            return Err(Error::CapExceeded {
                needed: w,
                cap: self.cap,
                context: "state".into(),
            });
        }
        Ok(())
    }

    /// Split into weight-homogeneous components, ascending in weight.
    pub fn weight_components(&self) -> Vec<(i64, State)> {
        let mut by_weight: std::collections::BTreeMap<i64, State> = Default::default();
        for (m, c) in self.terms.iter() {
            by_weight
                .entry(m.weight())
                .or_insert_with(|| State::zero(self.family, self.cap))
                .add_term(m.clone(), c.clone())
                .expect("component within cap");
        }
        by_weight.into_iter().collect()
    }
}

impl fmt::Display for State {
    /// Text format `family:coeff*[n1,n2,...] + ...`, bit-exact.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.family.tag())?;
        if self.terms.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*{}", format_rat(c), m)?;
        }
        Ok(())
    }
}

fn parse_monomial(family: Family, s: &str) -> Result<BasisMonomial> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("bad monomial {s:?}")))?;
    let mut parts = Vec::new();
    for piece in inner.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let p: u32 = piece
            .parse()
            .map_err(|_| Error::Parse(format!("bad part {piece:?}")))?;
        if p < family.min_part() {
            return Err(Error::Parse(format!(
                "part {p} below minimum {} for {}",
                family.min_part(),
                family.tag()
            )));
        }
        parts.push(p);
    }
    Ok(BasisMonomial::new(family, parts))
}

/// Parse the `family:coeff*[..] + ...` format. A bare `[..]` term means
/// coefficient 1; the `family:` prefix may be omitted when a default
/// family is supplied.
pub fn parse_state(input: &str, default_family: Option<Family>, cap: i64) -> Result<State> {
    let input = input.trim();
    let (family, rest) = if let Some(r) = input.strip_prefix("heis:") {
        (Family::Heisenberg, r)
    } else if let Some(r) = input.strip_prefix("vir:") {
        (Family::Virasoro, r)
    } else {
        let fam = default_family
            .ok_or_else(|| Error::Parse("state needs a family prefix (heis:/vir:)".into()))?;
        (fam, input)
    };
    let rest = rest.trim();
    let mut state = State::zero(family, cap);
    if rest == "0" || rest.is_empty() {
        return Ok(state);
    }
    for term in rest.split('+') {
        let term = term.trim();
        let (coeff, mono) = match term.split_once('*') {
            Some((c, m)) => (parse_rat(c)?, m),
            None => (Rat::one(), term),
        };
        state.add_term(parse_monomial(family, mono)?, coeff)?;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn mono(parts: &[u32]) -> BasisMonomial {
        BasisMonomial::new(Family::Heisenberg, parts.to_vec())
    }

    #[test]
    fn display_parse_roundtrip() {
        let s = State::from_terms(
            Family::Heisenberg,
            10,
            [
                (mono(&[2, 1]), rat(-1, 3)),
                (mono(&[1]), int(2)),
                (BasisMonomial::vacuum(Family::Heisenberg), rat(7, 2)),
            ],
        )
        .unwrap();
        let text = s.to_string();
        let back = parse_state(&text, None, 10).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_string(), text);
        // zero state
        let z = State::zero(Family::Virasoro, 5);
        assert_eq!(parse_state(&z.to_string(), None, 5).unwrap(), z);
    }

    #[test]
    fn bare_partition_with_default_family() {
        let s = parse_state("[1]", Some(Family::Heisenberg), 4).unwrap();
        assert_eq!(s, State::monomial(mono(&[1]), 4).unwrap());
    }

    #[test]
    fn cap_enforced() {
        let r = State::monomial(mono(&[3, 3]), 5);
        assert!(matches!(r, Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn cancellation_is_exact() {
        let a = State::monomial(mono(&[2]), 5).unwrap();
        let b = a.scale(&rat(1, 3));
        let c = a.sub(&b).unwrap().sub(&a.scale(&rat(2, 3))).unwrap();
        assert!(c.is_zero());
    }
}
