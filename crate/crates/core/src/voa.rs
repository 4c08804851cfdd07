//! Concrete vertex algebra kernel: generator mode actions on the
//! partition basis, the general mode product u_k v via the iterate
//! recursion, the translation operator, automorphism eigenspaces, and
//! conformal-vector verification.
//!
//! Modes are indexed so that Y(gen, z) = sum_m gen_m z^{-m-1} for the
//! distinguished generator (the weight-1 current a for the Heisenberg
//! family, the conformal vector for the Virasoro family, where
//! omega_m = L(m-1)).

use std::collections::HashMap;
use std::sync::Mutex;

use num::{One, Zero};

use crate::basis::{BasisMonomial, Family};
use crate::rational::{binom_int, int, rat, Rat};
use crate::sparse::SparseVector;
use crate::state::State;
use crate::{Error, Result};

pub type Vector = SparseVector<BasisMonomial>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AutomorphismKind {
    Identity,
    /// a -> -a on the Heisenberg family; eigenvalue index is the parity
    /// of the partition length.
    HeisenbergParity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Automorphism {
    pub kind: AutomorphismKind,
    /// The declared T; the actual automorphism order divides it.
    pub order: u32,
}

impl Automorphism {
    pub fn identity(order: u32) -> Self {
        assert!(order >= 1);
        Automorphism {
            kind: AutomorphismKind::Identity,
            order,
        }
    }

    pub fn heisenberg_parity() -> Self {
        Automorphism {
            kind: AutomorphismKind::HeisenbergParity,
            order: 2,
        }
    }

    /// r with gv = e^{-2 pi i r / T} v for a basis monomial.
    pub fn eigen_index(&self, m: &BasisMonomial) -> u32 {
        match self.kind {
            AutomorphismKind::Identity => 0,
            AutomorphismKind::HeisenbergParity => (m.len() % 2) as u32,
        }
    }
}

pub struct AlgebraDescription {
    family: Family,
    /// Central charge of the Virasoro bracket (Virasoro family only).
    central_charge: Rat,
    automorphism: Automorphism,
    memo: Mutex<HashMap<(BasisMonomial, i64, BasisMonomial), Vector>>,
}

impl AlgebraDescription {
    pub fn heisenberg(automorphism: Automorphism) -> Self {
        if automorphism.kind == AutomorphismKind::HeisenbergParity {
            assert_eq!(automorphism.order, 2);
        }
        AlgebraDescription {
            family: Family::Heisenberg,
            central_charge: Rat::zero(),
            automorphism,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn virasoro(central_charge: Rat, order: u32) -> Self {
        AlgebraDescription {
            family: Family::Virasoro,
            central_charge,
            automorphism: Automorphism::identity(order),
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn automorphism(&self) -> Automorphism {
        self.automorphism
    }

    pub fn order(&self) -> u32 {
        self.automorphism.order
    }

    pub fn central_charge(&self) -> &Rat {
        &self.central_charge
    }

    /// Generator-mode index of a partition part: a(-n) = a_{-n} for the
    /// Heisenberg family, L(-n) = omega_{-n+1} for the Virasoro family.
    fn part_mode(&self, part: u32) -> i64 {
        match self.family {
            Family::Heisenberg => part as i64,
            Family::Virasoro => part as i64 - 1,
        }
    }

    /// Action of the generator mode gen_m on a basis monomial.
    pub fn gen_mode_mono(&self, m: i64, mono: &BasisMonomial) -> Vector {
        match self.family {
            Family::Heisenberg => self.heis_mode(m, mono),
            Family::Virasoro => self.vir_l_mode(m - 1, mono),
        }
    }

    pub fn gen_mode(&self, m: i64, v: &Vector) -> Vector {
        let mut out = Vector::zero();
        for (mono, c) in v.iter() {
            out.add_scaled(&self.gen_mode_mono(m, mono), c);
        }
        out
    }

    fn heis_mode(&self, m: i64, mono: &BasisMonomial) -> Vector {
        if m < 0 {
            return Vector::unit(mono.with_part((-m) as u32));
        }
        if m == 0 {
            return Vector::zero();
        }
        // [a_m, a_{-n}] = m delta_{m,n}; a_m |0> = 0 for m >= 0
        let count = mono.parts().iter().filter(|&&p| p as i64 == m).count();
        if count == 0 {
            return Vector::zero();
        }
        let mut parts = mono.parts().to_vec();
        let pos = parts.iter().position(|&p| p as i64 == m).unwrap();
        parts.remove(pos);
        let rest = BasisMonomial::new(Family::Heisenberg, parts);
        Vector::unit(rest).scale(&int(m * count as i64))
    }

    /// L(l) acting on a PBW monomial L(-n1)...L(-nk)|0>, n1 >= ... >= 2.
    fn vir_l_mode(&self, l: i64, mono: &BasisMonomial) -> Vector {
        match mono.split_leading() {
            None => {
                // L(l)|0> = 0 for l >= -1
                if l <= -2 {
                    Vector::unit(BasisMonomial::new(Family::Virasoro, vec![(-l) as u32]))
                } else {
                    Vector::zero()
                }
            }
            Some((head, tail)) => {
                let n1 = head as i64;
                if l <= -2 && -l >= n1 {
                    return Vector::unit(mono.with_part((-l) as u32));
                }
                // L(l) L(-n1) = [L(l), L(-n1)] + L(-n1) L(l)
                let mut out = Vector::zero();
                let bracket = self.vir_l_mode(l - n1, &tail).scale(&int(l + n1));
                out.add_scaled(&bracket, &Rat::one());
                if l == n1 {
                    let central = int(l * l * l - l) / int(12) * &self.central_charge;
                    out.add_scaled(&Vector::unit(tail.clone()), &central);
                }
                let inner = self.vir_l_mode(l, &tail);
                for (m2, c) in inner.iter() {
                    out.add_scaled(&self.vir_l_mode(-n1, m2), c);
                }
                out
            }
        }
    }

    /// The general mode product u_k v on basis monomials, via the iterate
    /// recursion on the leading generator of u. Results are memoized.
    pub fn mode_product_mono(&self, u: &BasisMonomial, k: i64, v: &BasisMonomial) -> Vector {
        if u.is_vacuum() {
            return if k == -1 {
                Vector::unit(v.clone())
            } else {
                Vector::zero()
            };
        }
        let key = (u.clone(), k, v.clone());
        if let Some(hit) = self.memo.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let (head, u_rest) = u.split_leading().unwrap();
        let p = self.part_mode(head); // u = gen_{-p} u_rest, p >= 1
        let mut out = Vector::zero();
        // first sum: gen_{-p-i} (u'_{k+i} v), bounded by the truncation axiom
        let imax1 = u_rest.weight() + v.weight() - 1 - k;
        for i in 0..=imax1.max(-1) {
            if i < 0 {
                break;
            }
            let inner = self.mode_product_mono(&u_rest, k + i, v);
            if inner.is_zero() {
                continue;
            }
            let coeff = int(if i % 2 == 0 { 1 } else { -1 }) * binom_int(-p, i as u64);
            out.add_scaled(&self.gen_mode(-p - i, &inner), &coeff);
        }
        // second sum: u'_{-p+k-i} (gen_i v), bounded by the grading
        let imax2 = v.weight() + 1;
        for i in 0..=imax2 {
            let gv = self.gen_mode_mono(i, v);
            if gv.is_zero() {
                continue;
            }
            let sign = if (i + p) % 2 == 0 { 1 } else { -1 };
            let coeff = int(-sign) * binom_int(-p, i as u64);
            let mut term = Vector::zero();
            for (m2, c) in gv.iter() {
                term.add_scaled(&self.mode_product_mono(&u_rest, -p + k - i, m2), c);
            }
            out.add_scaled(&term, &coeff);
        }
        self.memo.lock().unwrap().insert(key, out.clone());
        out
    }

    /// Mode product on raw vectors, no cap bookkeeping.
    pub fn mode_product_vec(&self, u: &Vector, k: i64, v: &Vector) -> Vector {
        let mut out = Vector::zero();
        for (mu, cu) in u.iter() {
            for (mv, cv) in v.iter() {
                out.add_scaled(&self.mode_product_mono(mu, k, mv), &(cu * cv));
            }
        }
        out
    }

    /// u_k v with cap enforcement: min of the input caps.
    pub fn mode_product(&self, u: &State, k: i64, v: &State) -> Result<State> {
        if u.family() != self.family || v.family() != self.family {
            return Err(Error::Precondition("state family differs from algebra".into()));
        }
        let cap = u.cap().min(v.cap());
        let terms = self.mode_product_vec(u.terms(), k, v.terms());
        State::from_terms(self.family, cap, terms.iter().map(|(m, c)| (m.clone(), c.clone())))
    }

    /// D(v) = v_{-2} |0>.
    pub fn translate(&self, v: &State) -> Result<State> {
        let vac = State::vacuum(self.family, v.cap());
        self.mode_product(v, -2, &vac)
    }

    pub fn translate_vec(&self, v: &Vector) -> Vector {
        let vac = Vector::unit(BasisMonomial::vacuum(self.family));
        self.mode_product_vec(v, -2, &vac)
    }

    /// Projection onto the eigenspace V^r.
    pub fn g_project(&self, v: &State, r: u32) -> State {
        let mut out = State::zero(self.family, v.cap());
        for (m, c) in v.terms().iter() {
            if self.automorphism.eigen_index(m) == r % self.automorphism.order {
                out.add_term(m.clone(), c.clone()).expect("projection within cap");
            }
        }
        out
    }

    /// Eigen index of a g-homogeneous state; errors when mixed.
    pub fn eigen_index(&self, v: &State) -> Result<u32> {
        let mut found: Option<u32> = None;
        for (m, _) in v.terms().iter() {
            let r = self.automorphism.eigen_index(m);
            match found {
                None => found = Some(r),
                Some(prev) if prev != r => {
                    return Err(Error::Precondition(
                        "state is not g-homogeneous; project first".into(),
                    ))
                }
                _ => {}
            }
        }
        Ok(found.unwrap_or(0))
    }

    /// Apply g itself (eigenvalues are +-1 for the built-in automorphisms).
    pub fn apply_automorphism(&self, v: &State) -> State {
        match self.automorphism.kind {
            AutomorphismKind::Identity => v.clone(),
            AutomorphismKind::HeisenbergParity => {
                let mut out = State::zero(self.family, v.cap());
                for (m, c) in v.terms().iter() {
                    let sign = if m.len() % 2 == 0 { Rat::one() } else { -Rat::one() };
                    out.add_term(m.clone(), c * sign).expect("within cap");
                }
                out
            }
        }
    }
}

/// Outcome of an exact verification with a failure witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(String),
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

/// Skew symmetry Y(u,x)v = e^{xD} Y(v,-x)u, checked mode by mode:
/// u_k v = sum_j (-1)^{k+j+1} (1/j!) D^j (v_{k+j} u). The check covers
/// every mode whose result weight stays within `weight_window`, plus one
/// mode beyond the truncation bound to confirm vanishing.
pub fn verify_skew_symmetry(
    alg: &AlgebraDescription,
    u: &Vector,
    v: &Vector,
    weight_window: i64,
) -> Verdict {
    let wu: i64 = u.keys().map(|m| m.weight()).max().unwrap_or(0);
    let wv: i64 = v.keys().map(|m| m.weight()).max().unwrap_or(0);
    let k_hi = wu + wv; // one beyond the last possibly-nonzero mode
    let k_lo = wu + wv - 1 - weight_window;
    for k in k_lo..=k_hi {
        let lhs = alg.mode_product_vec(u, k, v);
        let mut rhs = Vector::zero();
        let mut j = 0i64;
        let mut fact = Rat::one();
        loop {
            if k + j > wu + wv - 1 && j > 0 {
                break;
            }
            let mut term = alg.mode_product_vec(v, k + j, u);
            if !term.is_zero() {
                for _ in 0..j {
                    term = alg.translate_vec(&term);
                }
                let sign = if (k + j + 1).rem_euclid(2) == 0 { 1 } else { -1 };
                rhs.add_scaled(&term, &(int(sign) / &fact));
            }
            j += 1;
            fact *= int(j);
        }
        if lhs != rhs {
            return Verdict::Fail(format!("skew symmetry fails at mode k={k}"));
        }
    }
    Verdict::Pass
}

/// A claimed conformal vector with its central charge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConformalSpec {
    pub omega: State,
    pub central_charge: Rat,
    /// Heisenberg family parameter of omega_lambda; None for other vectors.
    pub lambda: Option<Rat>,
}

impl ConformalSpec {
    /// omega_lambda = (1/2) a(-1)^2 |0> + lambda a(-2)|0>, c = 1 - 12 lambda^2.
    pub fn heisenberg(lambda: Rat, cap: i64) -> Result<Self> {
        let omega = State::from_terms(
            Family::Heisenberg,
            cap,
            [
                (BasisMonomial::new(Family::Heisenberg, vec![1, 1]), rat(1, 2)),
                (BasisMonomial::new(Family::Heisenberg, vec![2]), lambda.clone()),
            ],
        )?;
        let central_charge = int(1) - int(12) * &lambda * &lambda;
        Ok(ConformalSpec {
            omega,
            central_charge,
            lambda: Some(lambda),
        })
    }

    /// The canonical conformal vector L(-2)|0> of the Virasoro family.
    pub fn virasoro(central_charge: Rat, cap: i64) -> Result<Self> {
        let omega = State::monomial(BasisMonomial::new(Family::Virasoro, vec![2]), cap)?;
        Ok(ConformalSpec {
            omega,
            central_charge,
            lambda: None,
        })
    }

    /// L(n) = omega_{n+1} as an operator on raw vectors.
    pub fn l_mode(&self, alg: &AlgebraDescription, n: i64, v: &Vector) -> Vector {
        alg.mode_product_vec(self.omega.terms(), n + 1, v)
    }
}

/// Check the Virasoro bracket of the claimed conformal vector with its
/// claimed central charge on all basis states of weight <= cap, together
/// with L(-1) = D and L(0) = weight grading.
pub fn verify_conformal(alg: &AlgebraDescription, spec: &ConformalSpec, cap: i64) -> Verdict {
    let omega = spec.omega.terms();
    let c = &spec.central_charge;
    let l = |n: i64, v: &Vector| alg.mode_product_vec(omega, n + 1, v);
    for mono in crate::basis::monomials_up_to(alg.family(), cap) {
        let b = Vector::unit(mono.clone());
        // L(-1) = D
        if l(-1, &b) != alg.translate_vec(&b) {
            return Verdict::Fail(format!("L(-1) != D on {mono}"));
        }
        // L(0) acts by the weight
        if l(0, &b) != b.scale(&int(mono.weight())) {
            return Verdict::Fail(format!("L(0) eigenvalue mismatch on {mono}"));
        }
        // Virasoro bracket on a small mode grid
        for m in -2i64..=3 {
            for n in -2i64..=3 {
                let lhs = l(m, &l(n, &b)).sub(&l(n, &l(m, &b)));
                let mut rhs = l(m + n, &b).scale(&int(m - n));
                if m + n == 0 {
                    let central = int(m * m * m - m) / int(12) * c;
                    rhs.add_scaled(&b, &central);
                }
                if lhs != rhs {
                    return Verdict::Fail(format!("[L({m}),L({n})] mismatch on {mono}"));
                }
            }
        }
    }
    Verdict::Pass
}
