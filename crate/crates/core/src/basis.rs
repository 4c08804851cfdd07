//! Partition-indexed basis monomials of the two built-in vertex algebra
//! families, and the canonical elimination order: weight-descending, then
//! lexicographic on partitions. High weight comes first so that window
//! intersections eliminate out-of-window coordinates first.

use std::cmp::Ordering;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// rank-one free boson: a(-n1)...a(-nk)|0>, parts >= 1
    Heisenberg,
    /// universal Virasoro vacuum module with L(-1)|0> = 0: parts >= 2
    Virasoro,
}

impl Family {
    pub fn min_part(self) -> u32 {
        match self {
            Family::Heisenberg => 1,
            Family::Virasoro => 2,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Family::Heisenberg => "heis",
            Family::Virasoro => "vir",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisMonomial {
    family: Family,
    /// weakly decreasing positive parts; empty = vacuum
    parts: Vec<u32>,
}

impl BasisMonomial {
    pub fn new(family: Family, mut parts: Vec<u32>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        for &p in &parts {
            assert!(p >= family.min_part(), "part below family minimum");
        }
        BasisMonomial { family, parts }
    }

    pub fn vacuum(family: Family) -> Self {
        BasisMonomial {
            family,
            parts: Vec::new(),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn is_vacuum(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn weight(&self) -> i64 {
        self.parts.iter().map(|&p| p as i64).sum()
    }

    /// Leading part together with the remainder monomial.
    pub fn split_leading(&self) -> Option<(u32, BasisMonomial)> {
        let (&head, tail) = self.parts.split_first()?;
        Some((
            head,
            BasisMonomial {
                family: self.family,
                parts: tail.to_vec(),
            },
        ))
    }

    /// Monomial with one extra part inserted (kept weakly decreasing).
    pub fn with_part(&self, part: u32) -> BasisMonomial {
        assert!(part >= self.family.min_part());
        let mut parts = self.parts.clone();
        let pos = parts.iter().position(|&p| p < part).unwrap_or(parts.len());
        parts.insert(pos, part);
        BasisMonomial {
            family: self.family,
            parts,
        }
    }
}

impl Ord for BasisMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.family
            .cmp(&other.family)
            .then(other.weight().cmp(&self.weight()))
            .then(self.parts.cmp(&other.parts))
    }
}

impl PartialOrd for BasisMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BasisMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

/// All partitions of `weight` with parts >= min_part, weakly decreasing.
fn partitions(weight: u32, max_part: u32, min_part: u32) -> Vec<Vec<u32>> {
    if weight == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let hi = max_part.min(weight);
    for first in (min_part..=hi).rev() {
        for mut rest in partitions(weight - first, first, min_part) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

pub fn monomials_of_weight(family: Family, weight: i64) -> Vec<BasisMonomial> {
    if weight < 0 {
        return Vec::new();
    }
    let w = weight as u32;
    let mut out: Vec<BasisMonomial> = partitions(w, w.max(1), family.min_part())
        .into_iter()
        .map(|parts| BasisMonomial { family, parts })
        .collect();
    out.sort();
    out
}

/// All basis monomials of weight <= cap, in elimination order
/// (weight-descending, then lexicographic).
pub fn monomials_up_to(family: Family, cap: i64) -> Vec<BasisMonomial> {
    let mut out = Vec::new();
    for w in (0..=cap).rev() {
        out.extend(monomials_of_weight(family, w));
    }
    out
}
