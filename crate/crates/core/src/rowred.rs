//! Exact row reduction over an explicit basis ordering, with membership
//! certificates expressed in the original (pre-reduction) generators.
//!
//! Elimination is fraction-free on primitive integer rows (the stored
//! scale is carried separately), with a final normalization pass that
//! brings the span into reduced echelon form.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};

use crate::rational::Rat;
use crate::sparse::SparseVector;
use crate::{Error, Result};

/// An ordered ambient basis. The order is the elimination order: earlier
/// keys are eliminated first.
#[derive(Debug)]
pub struct BasisOrdering<K: Ord + Clone> {
    keys: Vec<K>,
    index: BTreeMap<K, usize>,
}

impl<K: Ord + Clone> BasisOrdering<K> {
    pub fn new(keys: Vec<K>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, k) in keys.iter().enumerate() {
            if index.insert(k.clone(), i).is_some() {
                return Err(Error::Config("duplicate basis key in ordering".into()));
            }
        }
        Ok(BasisOrdering { keys, index })
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn key(&self, col: usize) -> &K {
        &self.keys[col]
    }

    pub fn keys(&self) -> &[K] {
        &self.keys
    }

    pub fn col(&self, key: &K) -> Option<usize> {
        self.index.get(key).copied()
    }
}

type Row = BTreeMap<usize, Rat>;

fn row_from_sparse<K: Ord + Clone>(
    v: &SparseVector<K>,
    ord: &BasisOrdering<K>,
) -> Result<Row> {
    let mut row = Row::new();
    for (k, c) in v.iter() {
        let col = ord
            .col(k)
            .ok_or_else(|| Error::DimensionMismatch("key outside ambient basis".into()))?;
        row.insert(col, c.clone());
    }
    Ok(row)
}

fn sparse_from_row<K: Ord + Clone>(row: &Row, ord: &BasisOrdering<K>) -> SparseVector<K> {
    SparseVector::from_terms(row.iter().map(|(c, v)| (ord.key(*c).clone(), v.clone())))
}

/// Divide out the integer content and make the leading coefficient
/// positive. Returns the scale s with `input = s * output`.
fn primitivize(row: &mut Row) -> Rat {
    if row.is_empty() {
        return Rat::one();
    }
    let mut den_lcm = BigInt::one();
    for v in row.values() {
        den_lcm = den_lcm.lcm(v.denom());
    }
    let mut num_gcd = BigInt::zero();
    for v in row.values() {
        num_gcd = num_gcd.gcd(&(v.numer() * &den_lcm / v.denom()));
    }
    let mut scale = Rat::new(num_gcd, den_lcm);
    if row.values().next().unwrap().is_negative() {
        scale = -scale;
    }
    for v in row.values_mut() {
        *v /= &scale;
    }
    scale
}

/// A membership certificate: coefficients over the original generators,
/// indexed by insertion order.
pub type Certificate = SparseVector<usize>;

/// Row-reduced spanning set with an elimination transcript.
pub struct SubspaceSpan<K: Ord + Clone> {
    ordering: Arc<BasisOrdering<K>>,
    /// Echelon rows, sorted by pivot column.
    rows: Vec<Row>,
    /// pivot column -> index into `rows`
    pivots: BTreeMap<usize, usize>,
    /// Each stored row expressed in the original generators.
    transcripts: Vec<Certificate>,
    generators: Vec<SparseVector<K>>,
    reduced: bool,
}

impl<K: Ord + Clone> SubspaceSpan<K> {
    pub fn empty(ordering: Arc<BasisOrdering<K>>) -> Self {
        SubspaceSpan {
            ordering,
            rows: Vec::new(),
            pivots: BTreeMap::new(),
            transcripts: Vec::new(),
            generators: Vec::new(),
            reduced: true,
        }
    }

    pub fn ordering(&self) -> &Arc<BasisOrdering<K>> {
        &self.ordering
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn generators(&self) -> &[SparseVector<K>] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    /// Reduce `row` against the current echelon rows. Returns the residual
    /// (true value) and the combination of stored rows that was removed.
    fn reduce_row(&self, v: &SparseVector<K>) -> Result<(Row, Rat, Vec<(usize, Rat)>)> {
        let mut row = row_from_sparse(v, &self.ordering)?;
        let mut sigma = primitivize(&mut row);
        let mut combo: Vec<(usize, Rat)> = Vec::new();
        if row.is_empty() {
            return Ok((row, sigma, combo));
        }
        let mut cursor = 0usize;
        while let Some((&col, _)) = row.range(cursor..).next() {
            match self.pivots.get(&col) {
                None => {
                    cursor = col + 1;
                }
                Some(&ri) => {
                    let pivot_row = &self.rows[ri];
                    let p = pivot_row[&col].clone();
                    let val = row[&col].clone();
                    // true factor removed: sigma * val / p
                    combo.push((ri, &sigma * &val / &p));
                    // row <- p*row - val*pivot_row (stays integer)
                    for v in row.values_mut() {
                        *v *= &p;
                    }
                    for (c, pv) in pivot_row.iter() {
                        let delta = -(&val * pv);
                        match row.entry(*c) {
                            std::collections::btree_map::Entry::Vacant(e) => {
                                if !delta.is_zero() {
                                    e.insert(delta);
                                }
                            }
                            std::collections::btree_map::Entry::Occupied(mut e) => {
                                *e.get_mut() += delta;
                                if e.get().is_zero() {
                                    e.remove();
                                }
                            }
                        }
                    }
                    sigma /= &p;
                    sigma *= primitivize(&mut row);
                    cursor = col + 1;
                    if row.is_empty() {
                        break;
                    }
                }
            }
        }
        Ok((row, sigma, combo))
    }

    /// Insert a vector with an explicit transcript over the generators.
    /// Returns true when the rank increased.
    pub fn insert_with_transcript(
        &mut self,
        v: SparseVector<K>,
        transcript: Certificate,
    ) -> Result<bool> {
        let (row, sigma, combo) = self.reduce_row(&v)?;
        if row.is_empty() {
            return Ok(false);
        }
        let mut t = transcript;
        for (ri, c) in &combo {
            t.add_scaled(&self.transcripts[*ri], &-c.clone());
        }
        // stored row = residual_true / sigma
        let t = t.scale(&(Rat::one() / &sigma));
        let pivot = *row.keys().next().unwrap();
        let pos = self
            .rows
            .iter()
            .position(|r| *r.keys().next().unwrap() > pivot)
            .unwrap_or(self.rows.len());
        self.rows.insert(pos, row);
        self.transcripts.insert(pos, t);
        self.pivots = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| (*r.keys().next().unwrap(), i))
            .collect();
        self.reduced = false;
        Ok(true)
    }

    /// Insert a new generator. Returns true when the rank increased.
    pub fn insert_generator(&mut self, v: SparseVector<K>) -> Result<bool> {
        let idx = self.generators.len();
        self.generators.push(v.clone());
        self.insert_with_transcript(v, Certificate::unit(idx))
    }

    /// Back-substitution pass: brings the rows into reduced echelon form
    /// with unit pivots. Idempotent.
    pub fn normalize(&mut self) {
        if self.reduced {
            return;
        }
        for i in (0..self.rows.len()).rev() {
            // eliminate later pivots from row i
            let later: Vec<(usize, usize)> = self
                .pivots
                .iter()
                .filter(|(c, ri)| **ri > i && self.rows[i].contains_key(c))
                .map(|(c, ri)| (*c, *ri))
                .collect();
            for (c, ri) in later {
                let factor = &self.rows[i][&c] / &self.rows[ri][&c];
                let (pr, pt) = (self.rows[ri].clone(), self.transcripts[ri].clone());
                for (col, pv) in pr.iter() {
                    let delta = -(&factor * pv);
                    match self.rows[i].entry(*col) {
                        std::collections::btree_map::Entry::Vacant(e) => {
                            if !delta.is_zero() {
                                e.insert(delta);
                            }
                        }
                        std::collections::btree_map::Entry::Occupied(mut e) => {
                            *e.get_mut() += delta;
                            if e.get().is_zero() {
                                e.remove();
                            }
                        }
                    }
                }
                self.transcripts[i].add_scaled(&pt, &-factor);
            }
            // unit pivot
            let lead = self.rows[i].values().next().unwrap().clone();
            if !lead.is_one() {
                for v in self.rows[i].values_mut() {
                    *v /= &lead;
                }
                self.transcripts[i] = self.transcripts[i].scale(&(Rat::one() / &lead));
            }
        }
        self.reduced = true;
    }

    pub fn rows(&self) -> Vec<SparseVector<K>> {
        self.rows
            .iter()
            .map(|r| sparse_from_row(r, &self.ordering))
            .collect()
    }

    pub fn row(&self, i: usize) -> SparseVector<K> {
        sparse_from_row(&self.rows[i], &self.ordering)
    }

    pub fn transcript(&self, i: usize) -> &Certificate {
        &self.transcripts[i]
    }

    pub fn pivot_cols(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }

    /// Membership test. On success the certificate reproduces `x` as a
    /// combination of the original generators; this is re-checked before
    /// returning.
    pub fn membership(&self, x: &SparseVector<K>) -> Result<Option<Certificate>> {
        let (row, _sigma, combo) = self.reduce_row(x)?;
        if !row.is_empty() {
            return Ok(None);
        }
        let mut cert = Certificate::zero();
        for (ri, c) in &combo {
            cert.add_scaled(&self.transcripts[*ri], c);
        }
        // re-check the certificate against the original generators
        let mut recomb = SparseVector::zero();
        for (gi, c) in cert.iter() {
            recomb.add_scaled(&self.generators[*gi], c);
        }
        debug_assert!(recomb == *x, "certificate failed to reproduce the target");
        if recomb != *x {
            return Err(Error::DimensionMismatch(
                "internal: certificate re-check failed".into(),
            ));
        }
        Ok(Some(cert))
    }

    /// Reduce `x` modulo the span: returns the canonical residual
    /// (supported only on non-pivot columns once the span is normalized)
    /// together with the certificate for the removed part.
    pub fn residual(&self, x: &SparseVector<K>) -> Result<(SparseVector<K>, Certificate)> {
        let (row, sigma, combo) = self.reduce_row(x)?;
        let mut cert = Certificate::zero();
        for (ri, c) in &combo {
            cert.add_scaled(&self.transcripts[*ri], c);
        }
        let res = sparse_from_row(&row, &self.ordering).scale(&sigma);
        Ok((res, cert))
    }
}

/// Row-reduce a list of vectors. The result is in reduced echelon form.
pub fn reduce<K: Ord + Clone>(
    rows: Vec<SparseVector<K>>,
    ordering: Arc<BasisOrdering<K>>,
) -> Result<SubspaceSpan<K>> {
    let mut span = SubspaceSpan::empty(ordering);
    for r in rows {
        span.insert_generator(r)?;
    }
    span.normalize();
    Ok(span)
}

/// Basis of the subspace of span(S) supported only on window keys,
/// obtained by eliminating out-of-window keys first.
pub fn intersect_with_window<K: Ord + Clone>(
    s: &SubspaceSpan<K>,
    window: impl Fn(&K) -> bool,
) -> Result<SubspaceSpan<K>> {
    let base = s.ordering();
    let mut keys: Vec<K> = base.keys().iter().filter(|k| !window(k)).cloned().collect();
    keys.extend(base.keys().iter().filter(|k| window(k)).cloned());
    let reordered = Arc::new(BasisOrdering::new(keys)?);
    let mut tmp = SubspaceSpan::empty(reordered);
    for i in 0..s.rank() {
        tmp.insert_with_transcript(s.row(i), s.transcript(i).clone())?;
    }
    tmp.normalize();
    // echelon form: a row whose pivot is in-window has no out-of-window
    // support, since all out-of-window columns precede it
    let mut out = SubspaceSpan::empty(base.clone());
    out.generators = s.generators.to_vec();
    for i in 0..tmp.rank() {
        let row = tmp.row(i);
        if row.keys().all(|k| window(k)) {
            out.insert_with_transcript(row, tmp.transcript(i).clone())?;
        }
    }
    out.normalize();
    Ok(out)
}

/// Two spans over the same ordering are equal iff their reduced echelon
/// rows coincide.
pub fn spans_equal<K: Ord + Clone>(a: &mut SubspaceSpan<K>, b: &mut SubspaceSpan<K>) -> bool {
    a.normalize();
    b.normalize();
    a.rank() == b.rank() && (0..a.rank()).all(|i| a.row(i) == b.row(i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn ord(n: usize) -> Arc<BasisOrdering<usize>> {
        Arc::new(BasisOrdering::new((0..n).collect()).unwrap())
    }

    fn vecn(entries: &[i64]) -> SparseVector<usize> {
        SparseVector::from_terms(entries.iter().enumerate().map(|(i, &c)| (i, int(c))))
    }

    #[test]
    fn duplicate_keys_rejected() {
        assert!(BasisOrdering::new(vec![1, 2, 1]).is_err());
    }

    #[test]
    fn unit_vectors_identity_case() {
        let s = reduce(vec![vecn(&[1, 0]), vecn(&[0, 1])], ord(2)).unwrap();
        assert_eq!(s.rank(), 2);
        assert_eq!(s.row(0), vecn(&[1, 0]));
        assert_eq!(s.row(1), vecn(&[0, 1]));
    }

    #[test]
    fn scalar_multiple_rank_one() {
        let v = vecn(&[2, -3, 1]);
        let s = reduce(vec![v.clone(), v.scale(&int(2))], ord(3)).unwrap();
        assert_eq!(s.rank(), 1);
    }

    #[test]
    fn hand_reduced_rank_two() {
        // rows (1,2,0),(0,1,1),(1,3,1): third = first + second
        let s = reduce(
            vec![vecn(&[1, 2, 0]), vecn(&[0, 1, 1]), vecn(&[1, 3, 1])],
            ord(3),
        )
        .unwrap();
        assert_eq!(s.rank(), 2);
    }

    #[test]
    fn membership_certificates() {
        let g0 = vecn(&[1, 2, 0, 0]);
        let g1 = vecn(&[0, 1, 1, 0]);
        let s = reduce(vec![g0.clone(), g1.clone()], ord(4)).unwrap();
        // zero vector: all-zero certificate
        let c = s.membership(&SparseVector::zero()).unwrap().unwrap();
        assert!(c.is_zero());
        // first generator
        let c = s.membership(&g0).unwrap().unwrap();
        assert_eq!(c, Certificate::unit(0));
        // g0 + 3 g1
        let mut x = g0.clone();
        x.add_scaled(&g1, &int(3));
        let c = s.membership(&x).unwrap().unwrap();
        assert_eq!(c.coeff(&0), int(1));
        assert_eq!(c.coeff(&1), int(3));
        // something outside
        assert!(s.membership(&vecn(&[0, 0, 0, 1])).unwrap().is_none());
        // key outside ambient basis
        let bad = SparseVector::from_terms([(7usize, int(1))]);
        assert!(s.membership(&bad).is_err());
    }

    #[test]
    fn membership_iff_rank_unchanged() {
        let rows = vec![vecn(&[1, 2, 3]), vecn(&[0, 1, -1])];
        let s = reduce(rows.clone(), ord(3)).unwrap();
        for x in [vecn(&[1, 3, 2]), vecn(&[2, 4, 7]), vecn(&[0, 0, 1])] {
            let mut ext = rows.clone();
            ext.push(x.clone());
            let s2 = reduce(ext, ord(3)).unwrap();
            let inside = s.membership(&x).unwrap().is_some();
            assert_eq!(inside, s2.rank() == s.rank());
        }
    }

    #[test]
    fn window_intersection() {
        // window = columns {1,2} (treat column 0 as "out")
        let win = |k: &usize| *k >= 1;
        // span{e_in + e_out} -> zero span
        let s = reduce(vec![vecn(&[1, 1, 0])], ord(3)).unwrap();
        let w = intersect_with_window(&s, win).unwrap();
        assert_eq!(w.rank(), 0);
        // span{e_in + e_out, e_out} -> span{e_in}
        let s = reduce(vec![vecn(&[1, 1, 0]), vecn(&[1, 0, 0])], ord(3)).unwrap();
        let w = intersect_with_window(&s, win).unwrap();
        assert_eq!(w.rank(), 1);
        assert_eq!(w.row(0), vecn(&[0, 1, 0]));
        // certificate of the windowed row is over the original generators
        let c = w.membership(&vecn(&[0, 1, 0])).unwrap().unwrap();
        assert_eq!(c.coeff(&0), int(1));
        assert_eq!(c.coeff(&1), int(-1));
        // all-keys window: same span; no-keys window: zero span
        let s = reduce(vec![vecn(&[1, 2, 0]), vecn(&[0, 0, 3])], ord(3)).unwrap();
        let mut all = intersect_with_window(&s, |_| true).unwrap();
        let mut s2 = reduce(vec![vecn(&[1, 2, 0]), vecn(&[0, 0, 3])], ord(3)).unwrap();
        assert!(spans_equal(&mut all, &mut s2));
        let none = intersect_with_window(&s, |_| false).unwrap();
        assert_eq!(none.rank(), 0);
    }

    #[test]
    fn span_invariant_under_shuffle() {
        let rows = vec![
            vecn(&[1, 2, 3, 4]),
            vecn(&[0, 1, 1, 0]),
            vecn(&[1, 3, 4, 4]),
            vecn(&[2, 0, 0, 1]),
        ];
        let mut shuffled = rows.clone();
        shuffled.reverse();
        let mut a = reduce(rows, ord(4)).unwrap();
        let mut b = reduce(shuffled, ord(4)).unwrap();
        assert!(spans_equal(&mut a, &mut b));
    }

    #[test]
    fn rational_entries() {
        let v = SparseVector::from_terms([(0usize, rat(1, 2)), (1, rat(-1, 3))]);
        let s = reduce(vec![v.clone()], ord(2)).unwrap();
        let c = s.membership(&v.scale(&rat(7, 5))).unwrap().unwrap();
        assert_eq!(c.coeff(&0), rat(7, 5));
    }
}
