//! The default verification suite: a deterministic battery of checks over
//! both generator families, seeded sampling for the randomized portions,
//! and a line-per-check report. Same seed, same report bytes. Each named
//! part can run on its own; the default suite is their concatenation.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::basis::{monomials_up_to, BasisMonomial, Family};
use crate::bracket::{
    verify_conformal_independence, verify_lemma41, verify_thm42_iso, BracketContext,
};
use crate::identities::{check_identity_i, check_identity_ii, check_identity_iii};
use crate::rational::{int, rat};
use crate::report::{Report, Status};
use crate::twist::{
    bullet_vec, default_schedule, membership_mod_ideal, quotient_algebra, radical_diagnostic,
    verify_associativity, verify_commutator, verify_ideal_property, verify_lemma31,
    verify_lemma32_alt, verify_skew_mod_ideal, verify_surjection, IdealKind, IdealSpan,
    TwistParams,
};
use crate::voa::{
    verify_conformal, verify_skew_symmetry, AlgebraDescription, Automorphism, ConformalSpec,
    Vector, Verdict,
};
use crate::Result;

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    /// largest s for the combinatorial identities
    pub identity_max_s: i64,
    /// extra generator-level headroom added to every deepening schedule
    pub schedule_offset: i64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 42,
            identity_max_s: 8,
            schedule_offset: 0,
        }
    }
}

/// A named, independently runnable part of the suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuitePart {
    Identities,
    Skew,
    Conformal,
    Unit,
    Lemma31,
    Lemma32,
    Ideal,
    Assoc,
    Surjection,
    Lemma41,
    Thm42,
    ConformalIndependence,
    CentralOmega,
}

impl SuitePart {
    pub const ALL: [SuitePart; 13] = [
        SuitePart::Identities,
        SuitePart::Skew,
        SuitePart::Conformal,
        SuitePart::Unit,
        SuitePart::Lemma31,
        SuitePart::Lemma32,
        SuitePart::Ideal,
        SuitePart::Assoc,
        SuitePart::Surjection,
        SuitePart::Lemma41,
        SuitePart::Thm42,
        SuitePart::ConformalIndependence,
        SuitePart::CentralOmega,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuitePart::Identities => "identities",
            SuitePart::Skew => "skew",
            SuitePart::Conformal => "conformal",
            SuitePart::Unit => "unit",
            SuitePart::Lemma31 => "lemma31",
            SuitePart::Lemma32 => "lemma32",
            SuitePart::Ideal => "ideal",
            SuitePart::Assoc => "assoc",
            SuitePart::Surjection => "surjection",
            SuitePart::Lemma41 => "lemma41",
            SuitePart::Thm42 => "thm42",
            SuitePart::ConformalIndependence => "conformal-independence",
            SuitePart::CentralOmega => "central-omega",
        }
    }

    pub fn from_name(name: &str) -> Option<SuitePart> {
        SuitePart::ALL.iter().copied().find(|p| p.name() == name)
    }
}

fn schedule_for(cfg: &SuiteConfig, w: i64) -> Vec<i64> {
    default_schedule(w + cfg.schedule_offset)
}

/// Per-part RNG so each part's samples are stable no matter which other
/// parts run alongside it.
fn part_rng(cfg: &SuiteConfig, part: SuitePart) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9e3779b97f4a7c15) ^ part as u64)
}

fn sample<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T]) -> &'a T {
    &items[rng.gen_range(0..items.len())]
}

fn mono_vec(m: &BasisMonomial) -> Vector {
    Vector::unit(m.clone())
}

fn heis_id() -> AlgebraDescription {
    AlgebraDescription::heisenberg(Automorphism::identity(1))
}

fn heis_parity() -> AlgebraDescription {
    AlgebraDescription::heisenberg(Automorphism::heisenberg_parity())
}

fn vir_half() -> AlgebraDescription {
    AlgebraDescription::virasoro(rat(1, 2), 1)
}

fn push_grid_verdict(
    report: &mut Report,
    name: &str,
    inputs: String,
    failures: Vec<String>,
    total: usize,
) {
    if failures.is_empty() {
        report.push(name, inputs, Status::Pass, format!("cases={total}"));
    } else {
        report.push(
            name,
            inputs,
            Status::Fail,
            format!("cases={total} first_failure={}", failures[0]),
        );
    }
}

fn identities_part(cfg: &SuiteConfig, report: &mut Report) {
    for s in 0..=cfg.identity_max_s {
        report.push_verdict("identity-unit-law", format!("s={s}"), &check_identity_i(s));
        report.push_verdict(
            "identity-squared-kernel",
            format!("s={s}"),
            &check_identity_ii(s),
        );
        report.push_verdict(
            "identity-iterate-exchange",
            format!("s={s}"),
            &check_identity_iii(s),
        );
    }
}

fn skew_part(report: &mut Report) {
    for (label, alg, w) in [
        ("heis", heis_id(), 3i64),
        ("vir c=1/2", vir_half(), 4i64),
    ] {
        let monos = monomials_up_to(alg.family(), w);
        let mut exact_failures = Vec::new();
        let mut witness_failures = Vec::new();
        let mut total = 0usize;
        for u in &monos {
            for v in &monos {
                total += 1;
                if let Verdict::Fail(why) =
                    verify_skew_symmetry(&alg, &mono_vec(u), &mono_vec(v), w)
                {
                    exact_failures.push(format!("u={u} v={v}: {why}"));
                }
                if let Verdict::Fail(why) =
                    verify_skew_mod_ideal(&alg, &mono_vec(u), &mono_vec(v), w)
                {
                    witness_failures.push(format!("u={u} v={v}: {why}"));
                }
            }
        }
        push_grid_verdict(
            report,
            "skew-symmetry",
            format!("alg={label} wt<={w}"),
            exact_failures,
            total,
        );
        push_grid_verdict(
            report,
            "skew-mod-ideal-witness",
            format!("alg={label} wt<={w}"),
            witness_failures,
            total,
        );
    }
}

fn conformal_part(report: &mut Report) -> Result<()> {
    let heis = heis_id();
    for lambda in [int(0), rat(1, 2), rat(-1, 3)] {
        let spec = ConformalSpec::heisenberg(lambda.clone(), 16)?;
        report.push_verdict(
            "verify-conformal",
            format!("alg=heis lambda={lambda} cap=4"),
            &verify_conformal(&heis, &spec, 4),
        );
    }
    // negative control: wrong central charge must be rejected
    let mut bad = ConformalSpec::heisenberg(rat(1, 2), 16)?;
    bad.central_charge = int(1);
    let v = verify_conformal(&heis, &bad, 3);
    report.push(
        "verify-conformal-negative-control",
        "alg=heis lambda=1/2 c=1 cap=3".to_string(),
        if v.passed() { Status::Fail } else { Status::Pass },
        "perturbed central charge is rejected",
    );
    let vir = vir_half();
    let spec = ConformalSpec::virasoro(rat(1, 2), 16)?;
    report.push_verdict(
        "verify-conformal",
        "alg=vir c=1/2 cap=4".to_string(),
        &verify_conformal(&vir, &spec, 4),
    );
    Ok(())
}

fn unit_part(cfg: &SuiteConfig, report: &mut Report) -> Result<()> {
    let cases: Vec<(&str, AlgebraDescription, u32)> = vec![
        ("heis", heis_id(), 1),
        ("heis g=parity", heis_parity(), 2),
        ("vir c=1/2", AlgebraDescription::virasoro(rat(1, 2), 2), 2),
    ];
    for (label, alg, t) in cases {
        for numer in 0..=(t as i64 + 1) {
            let tw = TwistParams::from_fraction(numer, t)?;
            let vac = mono_vec(&BasisMonomial::vacuum(alg.family()));
            let mut failures = Vec::new();
            let mut total = 0usize;
            // right units at floor(n) >= 1 only hold mod the ideal
            let schedule = schedule_for(cfg, 3 + 2 * tw.floor_n());
            let mut span = IdealSpan::for_schedule(&alg, tw, IdealKind::Tilde, &schedule)?;
            for m in monomials_up_to(alg.family(), 3) {
                total += 1;
                let v = mono_vec(&m);
                let left = bullet_vec(&alg, &tw, &vac, &v)?;
                let right = bullet_vec(&alg, &tw, &v, &vac)?;
                // the eigensector projection sits on the left factor, so
                // |0> • v = v always, while v • |0> is v exactly when
                // floor(n) = 0, v mod the ideal otherwise, and 0 off
                // sector 0
                let r = alg.automorphism().eigen_index(&m);
                if left != v {
                    failures.push(format!("v={m} (left unit)"));
                }
                if r == 0 {
                    if tw.floor_n() == 0 {
                        if right != v {
                            failures.push(format!("v={m} (right unit)"));
                        }
                    } else {
                        let mut diff = right.clone();
                        diff.add_scaled(&v, &int(-1));
                        if !membership_mod_ideal(&mut span, &diff, &schedule)?.is_certified() {
                            failures.push(format!("v={m} (right unit mod ideal)"));
                        }
                    }
                } else if !right.is_zero() {
                    failures.push(format!("v={m} (nonzero on twisted sector)"));
                }
            }
            push_grid_verdict(
                report,
                "unit-law",
                format!("alg={label} n={numer}/{t} wt<=3"),
                failures,
                total,
            );
        }
    }
    Ok(())
}

fn lemma31_part(cfg: &SuiteConfig, report: &mut Report) -> Result<()> {
    let mut rng = part_rng(cfg, SuitePart::Lemma31);
    let parity = heis_parity();
    let tw = TwistParams::from_fraction(1, 2)?;
    let schedule = schedule_for(cfg, 4);
    let mut span = IdealSpan::for_schedule(&parity, tw, IdealKind::Tilde, &schedule)?;
    let monos = monomials_up_to(Family::Heisenberg, 2);
    for (k, m) in [(0i64, 0i64), (0, 1), (1, 1)] {
        let u = sample(&mut rng, &monos).clone();
        let v = sample(&mut rng, &monos).clone();
        let outcome =
            verify_lemma31(&parity, &mut span, &mono_vec(&u), &mono_vec(&v), k, m, &schedule)?;
        report.push_membership(
            "kernel-shift-in-ideal",
            format!("alg=heis g=parity n=1/2 u={u} v={v} k={k} m={m}"),
            &outcome,
        );
    }
    Ok(())
}

fn lemma32_part(cfg: &SuiteConfig, report: &mut Report) -> Result<()> {
    let mut rng = part_rng(cfg, SuitePart::Lemma32);
    // odd-sector monomials are certified members of the parity tilde ideal
    let parity = heis_parity();
    for numer in [0i64, 1] {
        let tw = TwistParams::from_fraction(numer, 2)?;
        let schedule = schedule_for(cfg, 3);
        let mut span = IdealSpan::for_schedule(&parity, tw, IdealKind::Tilde, &schedule)?;
        for m in monomials_up_to(Family::Heisenberg, 3) {
            if parity.automorphism().eigen_index(&m) != 1 {
                continue;
            }
            let outcome = membership_mod_ideal(&mut span, &mono_vec(&m), &schedule)?;
            report.push_membership(
                "odd-sector-in-ideal",
                format!("alg=heis g=parity n={numer}/2 u={m}"),
                &outcome,
            );
        }
    }
    // alternative right-hand form of the bullet product
    let heis = heis_id();
    let tw = TwistParams::from_fraction(1, 1)?;
    let schedule = schedule_for(cfg, 6);
    let mut span = IdealSpan::for_schedule(&heis, tw, IdealKind::Tilde, &schedule)?;
    let monos = monomials_up_to(Family::Heisenberg, 2);
    for _ in 0..2 {
        let u = sample(&mut rng, &monos).clone();
        let v = sample(&mut rng, &monos).clone();
        let outcome =
            verify_lemma32_alt(&heis, &mut span, &mono_vec(&u), &mono_vec(&v), &schedule)?;
        report.push_membership(
            "bullet-alternative-form",
            format!("alg=heis n=1 u={u} v={v}"),
            &outcome,
        );
    }
    Ok(())
}

fn ideal_part(cfg: &SuiteConfig, report: &mut Report) -> Result<()> {
    let mut rng = part_rng(cfg, SuitePart::Ideal);
    let parity = heis_parity();
    let tw = TwistParams::from_fraction(1, 2)?;
    let schedule = schedule_for(cfg, 6);
    let mut span = IdealSpan::for_schedule(&parity, tw, IdealKind::Tilde, &schedule)?;
    let monos = monomials_up_to(Family::Heisenberg, 2);
    for _ in 0..2 {
        let u1 = sample(&mut rng, &monos).clone();
        let u2 = sample(&mut rng, &monos).clone();
        let u3 = sample(&mut rng, &monos).clone();
        for (target, outcome) in verify_ideal_property(
            &parity,
            &mut span,
            &mono_vec(&u1),
            &mono_vec(&u2),
            &mono_vec(&u3),
            &schedule,
        )? {
            report.push_membership(
                "ideal-absorbs-products",
                format!("alg=heis g=parity n=1/2 u1={u1} u2={u2} u3={u3} target={target}"),
                &outcome,
            );
        }
    }
    Ok(())
}

fn assoc_part(cfg: &SuiteConfig, report: &mut Report) -> Result<()> {
    let mut rng = part_rng(cfg, SuitePart::Assoc);
    let heis = heis_id();
    let vir = vir_half();
    for (label, alg, numer) in [
        ("heis", &heis, 0i64),
        ("heis", &heis, 1),
        ("vir c=1/2", &vir, 0),
    ] {
        let tw = TwistParams::from_fraction(numer, 1)?;
        let w_target = 4 + 4 * tw.floor_n();
        let schedule = schedule_for(cfg, w_target);
        let mut span = IdealSpan::for_schedule(alg, tw, IdealKind::Tilde, &schedule)?;
        let monos = monomials_up_to(alg.family(), 2);
        for _ in 0..2 {
            let u = sample(&mut rng, &monos).clone();
            let v = sample(&mut rng, &monos).clone();
            let outcome =
                verify_commutator(alg, &mut span, &mono_vec(&u), &mono_vec(&v), &schedule)?;
            report.push_membership(
                "commutator-mod-ideal",
                format!("alg={label} n={numer} u={u} v={v}"),
                &outcome,
            );
        }
        let w_assoc = 6 + 4 * tw.floor_n();
        let schedule = schedule_for(cfg, w_assoc);
        for _ in 0..2 {
            let u = sample(&mut rng, &monos).clone();
            let v = sample(&mut rng, &monos).clone();
            let w = sample(&mut rng, &monos).clone();
            let outcome = verify_associativity(
                alg,
                &mut span,
                &mono_vec(&u),
                &mono_vec(&v),
                &mono_vec(&w),
                &schedule,
            )?;
            report.push_membership(
                "associativity-mod-ideal",
                format!("alg={label} n={numer} u={u} v={v} w={w}"),
                &outcome,
            );
        }
    }
    Ok(())
}

fn surjection_part(cfg: &SuiteConfig, report: &mut Report) -> Result<()> {
    let parity = heis_parity();
    let tw = TwistParams::from_fraction(1, 2)?;
    let a11 = BasisMonomial::new(Family::Heisenberg, vec![1, 1]);
    let a2 = BasisMonomial::new(Family::Heisenberg, vec![2]);
    let pairs = vec![
        (mono_vec(&a11), mono_vec(&a2)),
        (mono_vec(&a2), mono_vec(&a11)),
    ];
    let schedule = schedule_for(cfg, 4);
    let sr = verify_surjection(&parity, &tw, 2, &pairs, &schedule)?;
    report.push(
        "surjection-to-lower-level",
        "alg=heis g=parity n=1/2 window=2 pairs=2".to_string(),
        if sr.all_certified() {
            Status::Certified
        } else {
            Status::Inconclusive
        },
        format!(
            "generators={}+{} products={}+{}",
            sr.generators_certified,
            sr.generators_inconclusive,
            sr.products_certified,
            sr.products_inconclusive
        ),
    );
    Ok(())
}

fn lemma41_part(report: &mut Report) -> Result<()> {
    // exact agreement of the classical products with their bracket-mode forms
    let cases: Vec<(&str, AlgebraDescription)> = vec![
        ("heis", heis_id()),
        ("heis g=parity", heis_parity()),
        ("vir c=1/2", vir_half()),
    ];
    for (label, alg) in &cases {
        let t = alg.order();
        for numer in 0..=(t as i64) {
            let tw = TwistParams::from_fraction(numer, t)?;
            let monos = monomials_up_to(alg.family(), 2);
            let mut failures = Vec::new();
            let mut total = 0usize;
            for u in &monos {
                for v in &monos {
                    total += 1;
                    if let Verdict::Fail(why) =
                        verify_lemma41(alg, &tw, &mono_vec(u), &mono_vec(v))?
                    {
                        failures.push(format!("u={u} v={v}: {why}"));
                    }
                }
            }
            push_grid_verdict(
                report,
                "bracket-product-agreement",
                format!("alg={label} n={numer}/{t} wt<=2"),
                failures,
                total,
            );
        }
    }
    Ok(())
}

fn thm42_part(report: &mut Report) -> Result<()> {
    let heis = heis_id();
    let spec = ConformalSpec::heisenberg(rat(1, 2), 24)?;
    let ctx = BracketContext::new(&heis, spec, 8, 3)?;
    let monos = monomials_up_to(Family::Heisenberg, 2);
    let mut failures = Vec::new();
    let mut total = 0usize;
    for u in &monos {
        for v in &monos {
            for m in -2..=1i64 {
                total += 1;
                if let Verdict::Fail(why) =
                    verify_thm42_iso(&heis, &ctx, &mono_vec(u), m, &mono_vec(v))?
                {
                    failures.push(format!("u={u} v={v} m={m}: {why}"));
                }
            }
        }
    }
    push_grid_verdict(
        report,
        "changevar-conjugation",
        "alg=heis lambda=1/2 wt<=2 m=-2..1".to_string(),
        failures,
        total,
    );
    Ok(())
}

fn conformal_independence_part(cfg: &SuiteConfig, report: &mut Report) -> Result<()> {
    let heis = heis_id();
    let tw0 = TwistParams::from_fraction(0, 1)?;
    let spec0 = ConformalSpec::heisenberg(int(0), 32)?;
    let spec_half = ConformalSpec::heisenberg(rat(1, 2), 32)?;
    let ir = verify_conformal_independence(
        &heis,
        &tw0,
        &spec0,
        &spec_half,
        2,
        &schedule_for(cfg, 2),
    )?;
    let dims: Vec<String> = ir
        .dims
        .iter()
        .map(|(p, a, b)| format!("{p}:{a}/{b}"))
        .collect();
    report.push(
        "conformal-independence",
        "alg=heis lambda=0 vs lambda=1/2 n=0 window=2".to_string(),
        if ir.dims_equal && ir.tilde_side_identical && ir.transported_inconclusive == 0 {
            Status::Certified
        } else {
            Status::Inconclusive
        },
        format!(
            "dims={} transported={}+{}",
            dims.join(","),
            ir.transported_certified,
            ir.transported_inconclusive
        ),
    );
    Ok(())
}

fn central_omega_part(cfg: &SuiteConfig, report: &mut Report) -> Result<()> {
    let heis = heis_id();
    let parity = heis_parity();
    let tw0 = TwistParams::from_fraction(0, 1)?;
    let tw0_t2 = TwistParams::from_fraction(0, 2)?;

    let q = quotient_algebra(&heis, &tw0, IdealKind::Tilde, 3, &schedule_for(cfg, 3), None)?;
    let dims: Vec<String> = q
        .dims_by_level
        .iter()
        .map(|(p, d)| format!("{p}:{d}"))
        .collect();
    report.push(
        "quotient-tilde",
        "alg=heis n=0 window=3".to_string(),
        if q.stabilized && q.is_commutative() {
            Status::Pass
        } else {
            Status::Inconclusive
        },
        format!(
            "dim={} dims_by_level={} commutative={}",
            q.dim(),
            dims.join(","),
            q.is_commutative()
        ),
    );
    let rad = radical_diagnostic(&q)?;
    report.push(
        "quotient-radical-diagnostic",
        "alg=heis n=0 window=3".to_string(),
        Status::Pass,
        format!("trace_form_nullity={rad} dim={}", q.dim()),
    );

    let qp = quotient_algebra(
        &parity,
        &tw0_t2,
        IdealKind::Tilde,
        3,
        &schedule_for(cfg, 3),
        None,
    )?;
    report.push(
        "quotient-tilde",
        "alg=heis g=parity n=0 window=3".to_string(),
        if qp.stabilized && qp.dim() == 1 {
            Status::Pass
        } else {
            Status::Inconclusive
        },
        format!("dim={} stabilized={}", qp.dim(), qp.stabilized),
    );

    let spec0 = ConformalSpec::heisenberg(int(0), 32)?;
    let qc = quotient_algebra(
        &heis,
        &tw0,
        IdealKind::Classic,
        2,
        &schedule_for(cfg, 2),
        Some(&spec0),
    )?;
    report.push(
        "quotient-classic",
        "alg=heis lambda=0 n=0 window=2".to_string(),
        if qc.stabilized && qc.is_commutative() && qc.omega_central == Some(true) {
            Status::Pass
        } else {
            Status::Inconclusive
        },
        format!(
            "dim={} commutative={} omega_central={:?}",
            qc.dim(),
            qc.is_commutative(),
            qc.omega_central
        ),
    );
    Ok(())
}

/// Runs one named part into the report.
pub fn run_part(cfg: &SuiteConfig, part: SuitePart, report: &mut Report) -> Result<()> {
    match part {
        SuitePart::Identities => {
            identities_part(cfg, report);
            Ok(())
        }
        SuitePart::Skew => {
            skew_part(report);
            Ok(())
        }
        SuitePart::Conformal => conformal_part(report),
        SuitePart::Unit => unit_part(cfg, report),
        SuitePart::Lemma31 => lemma31_part(cfg, report),
        SuitePart::Lemma32 => lemma32_part(cfg, report),
        SuitePart::Ideal => ideal_part(cfg, report),
        SuitePart::Assoc => assoc_part(cfg, report),
        SuitePart::Surjection => surjection_part(cfg, report),
        SuitePart::Lemma41 => lemma41_part(report),
        SuitePart::Thm42 => thm42_part(report),
        SuitePart::ConformalIndependence => conformal_independence_part(cfg, report),
        SuitePart::CentralOmega => central_omega_part(cfg, report),
    }
}

/// Runs every check family at a moderate grid and returns the report.
/// The output is a pure function of the configuration.
pub fn run_default_suite(cfg: &SuiteConfig) -> Result<Report> {
    let mut report = Report::new();
    for part in SuitePart::ALL {
        run_part(cfg, part, &mut report)?;
    }
    Ok(report)
}
