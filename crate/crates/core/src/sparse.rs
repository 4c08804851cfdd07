//! Sparse vectors over an ordered key type. No explicit zero entries are
//! ever stored, so structural equality is semantic equality.

use std::collections::BTreeMap;

use num::Zero;

use crate::rational::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseVector<K: Ord + Clone> {
    entries: BTreeMap<K, Rat>,
}

impl<K: Ord + Clone> SparseVector<K> {
    pub fn zero() -> Self {
        SparseVector {
            entries: BTreeMap::new(),
        }
    }

    pub fn unit(key: K) -> Self {
        let mut v = Self::zero();
        v.add_term(key, Rat::from_integer(1.into()));
        v
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (K, Rat)>) -> Self {
        let mut v = Self::zero();
        for (k, c) in terms {
            v.add_term(k, c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn coeff(&self, key: &K) -> Rat {
        self.entries.get(key).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Rat)> {
        self.entries.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.entries.keys()
    }

    pub fn add_term(&mut self, key: K, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        match self.entries.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, scale: &Rat) {
        if scale.is_zero() {
            return;
        }
        for (k, c) in other.iter() {
            self.add_term(k.clone(), c * scale);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Rat::from_integer(1.into()));
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Rat::from_integer((-1).into()));
        out
    }

    pub fn scale(&self, scale: &Rat) -> Self {
        if scale.is_zero() {
            return Self::zero();
        }
        SparseVector {
            entries: self.entries.iter().map(|(k, c)| (k.clone(), c * scale)).collect(),
        }
    }

    pub fn map_keys<L: Ord + Clone>(&self, f: impl Fn(&K) -> L) -> SparseVector<L> {
        let mut out = SparseVector::zero();
        for (k, c) in self.iter() {
            out.add_term(f(k), c.clone());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn no_explicit_zeros() {
        let mut v: SparseVector<u32> = SparseVector::zero();
        v.add_term(3, rat(1, 2));
        v.add_term(3, rat(-1, 2));
        assert!(v.is_zero());
        assert_eq!(v, SparseVector::zero());
    }

    #[test]
    fn linear_ops() {
        let v = SparseVector::from_terms([(1u32, int(2)), (2, int(3))]);
        let w = SparseVector::from_terms([(2u32, int(-3)), (4, int(1))]);
        let s = v.add(&w);
        assert_eq!(s.coeff(&1), int(2));
        assert_eq!(s.coeff(&2), int(0));
        assert_eq!(s.coeff(&4), int(1));
        assert_eq!(v.sub(&v), SparseVector::zero());
    }
}
