//! Acceptance gate: thirteen criteria, one printed pass/fail line each.
//! Everything is exact arithmetic; membership checks are certificates and
//! a missing certificate within the schedule is a failure of the relevant
//! criterion, never silently ignored.

use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use twisted_zhu::basis::{monomials_up_to, BasisMonomial, Family};
use twisted_zhu::bracket::{
    verify_conformal_independence, verify_lemma41, verify_thm42_iso, BracketContext,
};
use twisted_zhu::identities::{check_identity_i, check_identity_ii, check_identity_iii};
use twisted_zhu::rational::{int, rat};
use twisted_zhu::series::{solve_changevar_coeffs, verify_changevar};
use twisted_zhu::suite::{run_default_suite, SuiteConfig};
use twisted_zhu::twist::{
    bullet_vec, default_schedule, membership_mod_ideal, quotient_algebra, verify_associativity,
    verify_ideal_property, verify_surjection, IdealKind, IdealSpan, TwistParams,
};
use twisted_zhu::voa::{
    verify_conformal, verify_skew_symmetry, AlgebraDescription, Automorphism, ConformalSpec,
    Vector, Verdict,
};

type CritResult = Result<String, String>;

fn mono_vec(m: &BasisMonomial) -> Vector {
    Vector::unit(m.clone())
}

fn pick(rng: &mut ChaCha8Rng, monos: &[BasisMonomial]) -> BasisMonomial {
    monos[rng.gen_range(0..monos.len())].clone()
}

// 1. combinatorial kernel identities for 0 <= s <= 10, under a minute
fn criterion_01() -> CritResult {
    let start = Instant::now();
    for s in 0..=10 {
        for (label, v) in [
            ("unit-law", check_identity_i(s)),
            ("squared-kernel", check_identity_ii(s)),
            ("iterate-exchange", check_identity_iii(s)),
        ] {
            if let Verdict::Fail(w) = v {
                return Err(format!("identity {label} failed at s={s}: {w}"));
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs() >= 60 {
        return Err(format!("identities took {elapsed:?} (budget 1 minute)"));
    }
    Ok(format!("s<=10 in {} ms", elapsed.as_millis()))
}

// 2. skew symmetry, truncation, and the translation derivation property
fn criterion_02() -> CritResult {
    let cases = [
        (AlgebraDescription::heisenberg(Automorphism::identity(1)), 4i64),
        (AlgebraDescription::virasoro(rat(1, 2), 1), 5i64),
    ];
    let mut checked = 0usize;
    for (alg, w) in &cases {
        let monos = monomials_up_to(alg.family(), *w);
        for u in &monos {
            for v in &monos {
                checked += 1;
                let uv = mono_vec(u);
                let vv = mono_vec(v);
                if let Verdict::Fail(why) = verify_skew_symmetry(alg, &uv, &vv, *w) {
                    return Err(format!("skew symmetry: u={u} v={v}: {why}"));
                }
                // truncation axiom at and above the weight bound
                for k in [u.weight() + v.weight(), u.weight() + v.weight() + 1] {
                    if !alg.mode_product_vec(&uv, k, &vv).is_zero() {
                        return Err(format!("truncation fails: u={u} v={v} k={k}"));
                    }
                }
                // D as a derivation of the modes: D(u_k v) = (Du)_k v + u_k Dv
                // together with (Du)_k = -k u_{k-1}
                let du = alg.translate_vec(&uv);
                let dv = alg.translate_vec(&vv);
                for k in -2..=(u.weight() + v.weight()) {
                    let mut lhs = alg.translate_vec(&alg.mode_product_vec(&uv, k, &vv));
                    lhs.add_scaled(&alg.mode_product_vec(&uv, k, &dv), &int(-1));
                    let via_du = alg.mode_product_vec(&du, k, &vv);
                    if lhs != via_du {
                        return Err(format!("derivation fails: u={u} v={v} k={k}"));
                    }
                    let shifted = alg.mode_product_vec(&uv, k - 1, &vv).scale(&int(-k));
                    if via_du != shifted {
                        return Err(format!("(Du)_k != -k u_(k-1): u={u} v={v} k={k}"));
                    }
                }
            }
        }
    }
    Ok(format!("{checked} pairs"))
}

// 3. conformal verification for the omega_lambda family plus a negative control
fn criterion_03() -> CritResult {
    let heis = AlgebraDescription::heisenberg(Automorphism::identity(1));
    for lambda in [int(0), rat(1, 2), rat(-1, 3)] {
        let spec = ConformalSpec::heisenberg(lambda.clone(), 24).map_err(|e| e.to_string())?;
        if let Verdict::Fail(w) = verify_conformal(&heis, &spec, 5) {
            return Err(format!("lambda={lambda}: {w}"));
        }
    }
    let mut bad = ConformalSpec::heisenberg(rat(1, 2), 24).map_err(|e| e.to_string())?;
    bad.central_charge = int(1);
    if verify_conformal(&heis, &bad, 5).passed() {
        return Err("negative control passed".into());
    }
    Ok("lambda in {0, 1/2, -1/3}, cap 5, control rejected".into())
}

// 4. odd-parity monomials of weight <= 5 certified in the tilde ideal span
fn criterion_04() -> CritResult {
    let parity = AlgebraDescription::heisenberg(Automorphism::heisenberg_parity());
    let mut certified = 0usize;
    for numer in [0i64, 1, 2] {
        let tw = TwistParams::from_fraction(numer, 2).map_err(|e| e.to_string())?;
        let schedule = default_schedule(5);
        let mut span = IdealSpan::for_schedule(&parity, tw, IdealKind::Tilde, &schedule)
            .map_err(|e| e.to_string())?;
        for m in monomials_up_to(Family::Heisenberg, 5) {
            if parity.automorphism().eigen_index(&m) != 1 {
                continue;
            }
            let outcome = membership_mod_ideal(&mut span, &mono_vec(&m), &schedule)
                .map_err(|e| e.to_string())?;
            if !outcome.is_certified() {
                return Err(format!("n={numer}/2: no certificate for {m}"));
            }
            certified += 1;
        }
    }
    Ok(format!("{certified} certificates over n in {{0, 1/2, 1}}"))
}

// 5. unit law: |0> bullet v = v exactly up to weight 6; twisted-sector
// left factors give 0 exactly
fn criterion_05() -> CritResult {
    let cases = [
        AlgebraDescription::heisenberg(Automorphism::heisenberg_parity()),
        AlgebraDescription::virasoro(rat(1, 2), 2),
    ];
    let mut checked = 0usize;
    for alg in &cases {
        let vac = mono_vec(&BasisMonomial::vacuum(alg.family()));
        for numer in [0i64, 1, 2, 3] {
            let tw = TwistParams::from_fraction(numer, 2).map_err(|e| e.to_string())?;
            for m in monomials_up_to(alg.family(), 6) {
                checked += 1;
                let v = mono_vec(&m);
                let left = bullet_vec(alg, &tw, &vac, &v).map_err(|e| e.to_string())?;
                if left != v {
                    return Err(format!("|0> bullet {m} != {m} at n={numer}/2"));
                }
                if alg.automorphism().eigen_index(&m) != 0 {
                    let z = bullet_vec(alg, &tw, &v, &vac).map_err(|e| e.to_string())?;
                    if !z.is_zero() {
                        return Err(format!("twisted-sector bullet nonzero: {m} at n={numer}/2"));
                    }
                }
            }
        }
    }
    Ok(format!("{checked} cases, both algebras, n in {{0,1/2,1,3/2}}"))
}

// 6 + 7 share spans per (algebra, twist) combination.
struct Combo {
    label: &'static str,
    alg: AlgebraDescription,
    numer: i64,
}

fn combos() -> Vec<Combo> {
    let mut out = Vec::new();
    for numer in [0i64, 1, 2] {
        out.push(Combo {
            label: "heis g=neg1",
            alg: AlgebraDescription::heisenberg(Automorphism::heisenberg_parity()),
            numer,
        });
        out.push(Combo {
            label: "vir c=1/2",
            alg: AlgebraDescription::virasoro(rat(1, 2), 2),
            numer,
        });
    }
    out
}

// 6. associativity mod the tilde ideal on seeded triples of weight <= 3
fn criterion_06() -> CritResult {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut total = 0usize;
    let mut inconclusive_wt3 = 0usize;
    for combo in combos() {
        let tw = TwistParams::from_fraction(combo.numer, 2).map_err(|e| e.to_string())?;
        let target_max = 9 + 4 * tw.floor_n();
        let schedule = default_schedule(target_max);
        let mut span = IdealSpan::for_schedule(&combo.alg, tw, IdealKind::Tilde, &schedule)
            .map_err(|e| e.to_string())?;
        let small = monomials_up_to(combo.alg.family(), 2);
        let large = monomials_up_to(combo.alg.family(), 3);
        for (wt_cap, monos) in [(2i64, &small), (3i64, &large)] {
            for _ in 0..2 {
                let u = pick(&mut rng, monos);
                let v = pick(&mut rng, monos);
                let w = pick(&mut rng, monos);
                total += 1;
                let outcome = verify_associativity(
                    &combo.alg,
                    &mut span,
                    &mono_vec(&u),
                    &mono_vec(&v),
                    &mono_vec(&w),
                    &schedule,
                )
                .map_err(|e| {
                    format!("hard failure at {} n={}/2: {e}", combo.label, combo.numer)
                })?;
                if !outcome.is_certified() {
                    if wt_cap <= 2 {
                        return Err(format!(
                            "weight-<=2 triple inconclusive at final level: {} n={}/2 ({u},{v},{w})",
                            combo.label, combo.numer
                        ));
                    }
                    inconclusive_wt3 += 1;
                }
            }
        }
    }
    if total < 20 {
        return Err(format!("only {total} triples sampled"));
    }
    Ok(format!(
        "{total} triples, 0 hard failures, inconclusive={inconclusive_wt3} (weight-3 only)"
    ))
}

// 7. the span absorbs products: >= 20 certified target memberships per algebra
fn criterion_07() -> CritResult {
    let mut rng = ChaCha8Rng::seed_from_u64(4096);
    let cases = [
        (
            "heis g=neg1",
            AlgebraDescription::heisenberg(Automorphism::heisenberg_parity()),
            2i64,
        ),
        ("vir c=1/2", AlgebraDescription::virasoro(rat(1, 2), 2), 3i64),
    ];
    let mut detail = Vec::new();
    for (label, alg, wt) in cases {
        let tw = TwistParams::from_fraction(1, 2).map_err(|e| e.to_string())?;
        let schedule = default_schedule(3 * wt + 2);
        let mut span = IdealSpan::for_schedule(&alg, tw, IdealKind::Tilde, &schedule)
            .map_err(|e| e.to_string())?;
        let monos = monomials_up_to(alg.family(), wt);
        let mut certified = 0usize;
        for _ in 0..5 {
            let u1 = pick(&mut rng, &monos);
            let u2 = pick(&mut rng, &monos);
            let u3 = pick(&mut rng, &monos);
            for (target, outcome) in verify_ideal_property(
                &alg,
                &mut span,
                &mono_vec(&u1),
                &mono_vec(&u2),
                &mono_vec(&u3),
                &schedule,
            )
            .map_err(|e| e.to_string())?
            {
                if !outcome.is_certified() {
                    return Err(format!(
                        "{label}: target {target} inconclusive for ({u1},{u2},{u3})"
                    ));
                }
                certified += 1;
            }
        }
        if certified < 20 {
            return Err(format!("{label}: only {certified} certified targets"));
        }
        detail.push(format!("{label}:{certified}"));
    }
    Ok(detail.join(" "))
}

// 8. surjection onto the n - 1/T level for n in {1/2, 1, 3/2}
fn criterion_08() -> CritResult {
    let parity = AlgebraDescription::heisenberg(Automorphism::heisenberg_parity());
    let mut rng = ChaCha8Rng::seed_from_u64(515);
    let monos = monomials_up_to(Family::Heisenberg, 3);
    let mut detail = Vec::new();
    for numer in [1i64, 2, 3] {
        let tw = TwistParams::from_fraction(numer, 2).map_err(|e| e.to_string())?;
        let mut pairs = Vec::new();
        for _ in 0..3 {
            pairs.push((mono_vec(&pick(&mut rng, &monos)), mono_vec(&pick(&mut rng, &monos))));
        }
        let schedule = default_schedule(6 + 2 * tw.floor_n());
        let sr = verify_surjection(&parity, &tw, 3, &pairs, &schedule).map_err(|e| e.to_string())?;
        if !sr.all_certified() {
            return Err(format!(
                "n={numer}/2: generators {}+{} products {}+{}",
                sr.generators_certified,
                sr.generators_inconclusive,
                sr.products_certified,
                sr.products_inconclusive
            ));
        }
        detail.push(format!(
            "n={numer}/2:{}+{}",
            sr.generators_certified, sr.products_certified
        ));
    }
    Ok(detail.join(" "))
}

// 9. exact agreement of the classical products with the bracket-mode forms
fn criterion_09() -> CritResult {
    let cases: Vec<(&str, AlgebraDescription, i64)> = vec![
        ("heis g=id", AlgebraDescription::heisenberg(Automorphism::identity(2)), 4),
        ("heis g=neg1", AlgebraDescription::heisenberg(Automorphism::heisenberg_parity()), 4),
        ("vir c=1/2", AlgebraDescription::virasoro(rat(1, 2), 2), 4),
    ];
    let mut checked = 0usize;
    for (label, alg, w) in &cases {
        let monos = monomials_up_to(alg.family(), *w);
        for numer in [0i64, 1, 2] {
            let tw = TwistParams::from_fraction(numer, 2).map_err(|e| e.to_string())?;
            for u in &monos {
                for v in &monos {
                    checked += 1;
                    match verify_lemma41(alg, &tw, &mono_vec(u), &mono_vec(v)) {
                        Ok(Verdict::Pass) => {}
                        Ok(Verdict::Fail(why)) => {
                            return Err(format!("{label} n={numer}/2 u={u} v={v}: {why}"))
                        }
                        Err(e) => return Err(format!("{label} n={numer}/2 u={u} v={v}: {e}")),
                    }
                }
            }
        }
    }
    Ok(format!("{checked} exact pair checks"))
}

// 10. change-of-variable coefficients and the conjugation isomorphism
fn criterion_10() -> CritResult {
    let coeffs = solve_changevar_coeffs(6);
    if *coeffs.coeff(0) != int(0) {
        return Err("B_0 != 0".into());
    }
    if *coeffs.coeff(1) != rat(-1, 2) {
        return Err(format!("B_1 = {} != -1/2", coeffs.coeff(1)));
    }
    if !verify_changevar(&coeffs) {
        return Err("defining relation fails through order 6".into());
    }
    let heis = AlgebraDescription::heisenberg(Automorphism::identity(1));
    let spec = ConformalSpec::heisenberg(int(0), 24).map_err(|e| e.to_string())?;
    let ctx = BracketContext::new(&heis, spec, 14, 4).map_err(|e| e.to_string())?;
    let monos = monomials_up_to(Family::Heisenberg, 4);
    let mut checked = 0usize;
    for u in &monos {
        for v in &monos {
            for m in -2..=2i64 {
                checked += 1;
                match verify_thm42_iso(&heis, &ctx, &mono_vec(u), m, &mono_vec(v)) {
                    Ok(Verdict::Pass) => {}
                    Ok(Verdict::Fail(why)) => {
                        return Err(format!("u={u} v={v} m={m}: {why}"))
                    }
                    Err(e) => return Err(format!("u={u} v={v} m={m}: {e}")),
                }
            }
        }
    }
    Ok(format!(
        "B_0..B_6 solved, {checked} conjugation checks on the weight-<=4 grid"
    ))
}

// 11. same quotient through two conformal vectors, n in {0, 1}, W = 3
fn criterion_11() -> CritResult {
    let heis = AlgebraDescription::heisenberg(Automorphism::identity(1));
    let spec0 = ConformalSpec::heisenberg(int(0), 48).map_err(|e| e.to_string())?;
    let spec_half = ConformalSpec::heisenberg(rat(1, 2), 48).map_err(|e| e.to_string())?;
    let mut detail = Vec::new();
    for numer in [0i64, 1] {
        let tw = TwistParams::from_fraction(numer, 1).map_err(|e| e.to_string())?;
        let schedule = default_schedule(3 + 2 * tw.floor_n());
        let ir = verify_conformal_independence(&heis, &tw, &spec0, &spec_half, 3, &schedule)
            .map_err(|e| format!("n={numer}: {e}"))?;
        if !ir.dims_equal {
            return Err(format!("n={numer}: dimension mismatch {:?}", ir.dims));
        }
        if !ir.tilde_side_identical {
            return Err(format!("n={numer}: conformal-free side differed"));
        }
        if ir.transported_inconclusive != 0 {
            return Err(format!(
                "n={numer}: {} transported products inconclusive",
                ir.transported_inconclusive
            ));
        }
        detail.push(format!(
            "n={numer}: dims {:?} transported={}",
            ir.dims.last().map(|(_, a, b)| (*a, *b)).unwrap_or((0, 0)),
            ir.transported_certified
        ));
    }
    Ok(detail.join("; "))
}

// 12. quotient stabilization for the free boson and its sign involution
fn criterion_12() -> CritResult {
    let heis = AlgebraDescription::heisenberg(Automorphism::identity(1));
    let parity = AlgebraDescription::heisenberg(Automorphism::heisenberg_parity());
    let spec0 = ConformalSpec::heisenberg(int(0), 48).map_err(|e| e.to_string())?;
    let tw0 = TwistParams::from_fraction(0, 1).map_err(|e| e.to_string())?;
    let tw0_t2 = TwistParams::from_fraction(0, 2).map_err(|e| e.to_string())?;

    let q = quotient_algebra(&heis, &tw0, IdealKind::Classic, 4, &default_schedule(4), Some(&spec0))
        .map_err(|e| e.to_string())?;
    for pair in q.dims_by_level.windows(2) {
        if pair[1].1 > pair[0].1 {
            return Err(format!("dimension sequence increases: {:?}", q.dims_by_level));
        }
    }
    if !q.stabilized || q.dim() != 5 {
        return Err(format!(
            "expected stabilized dimension 5, got dim={} stabilized={} ({:?})",
            q.dim(),
            q.stabilized,
            q.dims_by_level
        ));
    }
    if !q.is_commutative() {
        return Err("structure constants not commutative".into());
    }
    if q.omega_central != Some(true) {
        return Err(format!("omega centrality not certified: {:?}", q.omega_central));
    }

    let qp = quotient_algebra(
        &parity,
        &tw0_t2,
        IdealKind::Classic,
        4,
        &default_schedule(4),
        Some(&spec0),
    )
    .map_err(|e| e.to_string())?;
    if !qp.stabilized || qp.dim() != 1 {
        return Err(format!(
            "parity quotient: dim={} stabilized={}",
            qp.dim(),
            qp.stabilized
        ));
    }
    Ok(format!(
        "free boson dim {} (levels {:?}), parity dim {}",
        q.dim(),
        q.dims_by_level,
        qp.dim()
    ))
}

// 13. full default suite byte-identical across runs with one seed
fn criterion_13() -> CritResult {
    let cfg = SuiteConfig::default();
    let start = Instant::now();
    let a = run_default_suite(&cfg).map_err(|e| e.to_string())?.render();
    let b = run_default_suite(&cfg).map_err(|e| e.to_string())?.render();
    let elapsed = start.elapsed();
    if a != b {
        return Err("reports differ between runs with the same seed".into());
    }
    if a.contains("status=fail") {
        return Err("default suite contains failures".into());
    }
    Ok(format!(
        "{} report bytes, identical; two runs in {} s",
        a.len(),
        elapsed.as_secs()
    ))
}

#[test]
fn acceptance() {
    let overall = Instant::now();
    let criteria: Vec<(&str, fn() -> CritResult)> = vec![
        ("01 kernel identities", criterion_01),
        ("02 skew/truncation/derivation", criterion_02),
        ("03 conformal verification", criterion_03),
        ("04 odd sector in ideal", criterion_04),
        ("05 unit law", criterion_05),
        ("06 associativity mod ideal", criterion_06),
        ("07 ideal absorbs products", criterion_07),
        ("08 surjection between levels", criterion_08),
        ("09 bracket-product agreement", criterion_09),
        ("10 change-of-variable isomorphism", criterion_10),
        ("11 conformal independence", criterion_11),
        ("12 quotient stabilization", criterion_12),
        ("13 determinism", criterion_13),
    ];
    let mut failures = Vec::new();
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("criterion {name}: pass ({detail})"),
            Err(why) => {
                println!("criterion {name}: FAIL ({why})");
                failures.push(format!("{name}: {why}"));
            }
        }
    }
    let elapsed = overall.elapsed();
    eprintln!("acceptance elapsed: {} s", elapsed.as_secs());
    assert!(
        failures.is_empty(),
        "acceptance criteria failed:\n{}",
        failures.join("\n")
    );
    assert!(
        elapsed.as_secs() < 900,
        "acceptance suite exceeded 15 minutes ({} s)",
        elapsed.as_secs()
    );
}
