//! Command-line driver. All numeric output is exact-rational text; reports
//! are a deterministic function of the resolved run configuration (timing
//! goes to stderr only).
//!
//! Exit codes: 0 = all checks passed / all memberships certified,
//! 1 = hard failure, 2 = usage or configuration error, 3 = inconclusive
//! memberships present (caps too small).

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use twisted_zhu::basis::{monomials_up_to, BasisMonomial, Family};
use twisted_zhu::bracket::{
    verify_conformal_independence, verify_lemma41, verify_thm42_iso, BracketContext,
};
use twisted_zhu::identities::{check_identity_i, check_identity_ii, check_identity_iii};
use twisted_zhu::rational::{int, parse_rat, rat, Rat};
use twisted_zhu::report::{structure_constants_csv, Report, Status};
use twisted_zhu::state::{parse_state, State};
use twisted_zhu::suite::{run_default_suite, run_part, SuiteConfig, SuitePart};
use twisted_zhu::twist::{
    bullet, circ_classic, default_schedule, diamond, membership_mod_ideal, quotient_algebra,
    star_classic, verify_associativity, verify_commutator, verify_ideal_property, verify_lemma31,
    verify_lemma32_alt, verify_surjection, IdealKind, IdealSpan, TwistParams,
};
use twisted_zhu::voa::{
    verify_conformal, verify_skew_symmetry, AlgebraDescription, Automorphism, ConformalSpec,
    Vector,
};
use twisted_zhu::Error;

const SCHEDULE_ENV: &str = "TZHU_SCHEDULE";
const DEFAULT_CAP: i64 = 48;

#[derive(Parser)]
#[command(name = "tzhu", version, about = "Exact twisted Zhu algebra computations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyOpt {
    Heis,
    Vir,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AutoOpt {
    Id,
    Neg1,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindOpt {
    Tilde,
    Classic,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProductOp {
    Diamond,
    Bullet,
    Circ,
    Star,
}

/// Algebra, twist, and cap options shared by most subcommands; any of
/// them may instead come from a `key=value` config file (flags win).
#[derive(Args, Clone, Default)]
struct CommonOpts {
    /// generator family
    #[arg(long, value_enum)]
    family: Option<FamilyOpt>,
    /// automorphism: identity or the Heisenberg sign involution
    #[arg(long, value_enum)]
    g: Option<AutoOpt>,
    /// automorphism period T (the twist denominator)
    #[arg(long = "T")]
    t: Option<u32>,
    /// twist level n as `k/T` with the explicit T above
    #[arg(long)]
    n: Option<String>,
    /// Virasoro central charge, exact rational
    #[arg(long)]
    c: Option<String>,
    /// Heisenberg conformal-vector parameter (omega_lambda)
    #[arg(long)]
    lambda: Option<String>,
    /// seed for all sampling
    #[arg(long)]
    seed: Option<u64>,
    /// weight bound for sampled/gridded states
    #[arg(long)]
    wt: Option<i64>,
    /// weight window W for quotients and spans
    #[arg(long)]
    window: Option<i64>,
    /// comma-separated generator-level schedule, e.g. 6,8,10
    /// (also settable via the TZHU_SCHEDULE environment variable)
    #[arg(long)]
    schedule: Option<String>,
    /// key=value config file mirroring these options
    #[arg(long)]
    config: Option<PathBuf>,
    /// also write the report (or CSV) to this path
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the three combinatorial kernel identities up to --max-s
    Identities {
        #[arg(long, default_value_t = 10)]
        max_s: i64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Evaluate one twisted product on two states
    Product {
        #[arg(long, value_enum)]
        op: ProductOp,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Build an ideal span approximation and print its per-level ranks
    IdealSpan {
        #[arg(long, value_enum, default_value = "tilde")]
        kind: KindOpt,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Build a quotient approximation and print its basis and dimensions
    Quotient {
        #[arg(long, value_enum, default_value = "tilde")]
        kind: KindOpt,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run a verification suite (a named part, or `all`)
    Verify {
        /// all | identities | skew | conformal | unit | lemma31 | lemma32 |
        /// ideal | assoc | surjection | lemma41 | thm42 |
        /// conformal-independence | central-omega
        suite: String,
        #[arg(long, default_value_t = 10)]
        max_s: i64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Write structure constants of a quotient approximation as CSV
    Export {
        #[arg(long, value_enum, default_value = "tilde")]
        kind: KindOpt,
        #[command(flatten)]
        common: CommonOpts,
    },
}

/// Options after merging flags, config file, and environment.
struct Resolved {
    family: Family,
    auto: AutoOpt,
    t: u32,
    numer: i64,
    c: Rat,
    lambda: Rat,
    seed: u64,
    wt: i64,
    window: i64,
    schedule: Option<Vec<i64>>,
    out: Option<PathBuf>,
    /// true when the caller pinned any algebra/twist selection
    targeted: bool,
}

type CliResult<T> = Result<T, CliError>;

enum CliError {
    Usage(String),
    Hard(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::Parse(_) | Error::Precondition(_) | Error::CapExceeded { .. } => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Hard(other.to_string()),
        }
    }
}

fn read_config_file(path: &PathBuf) -> CliResult<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("config line {} is not key=value", lineno + 1))
        })?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn parse_schedule(s: &str) -> CliResult<Vec<i64>> {
    let mut out = Vec::new();
    for piece in s.split(',') {
        let p: i64 = piece
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad schedule entry {piece:?}")))?;
        out.push(p);
    }
    if out.is_empty() {
        return Err(CliError::Usage("empty schedule".into()));
    }
    Ok(out)
}

impl CommonOpts {
    fn resolve(&self) -> CliResult<Resolved> {
        let cfg = match &self.config {
            Some(p) => read_config_file(p)?,
            None => BTreeMap::new(),
        };
        let get = |key: &str| cfg.get(key).cloned();

        let family_s = self
            .family
            .map(|f| match f {
                FamilyOpt::Heis => "heis".to_string(),
                FamilyOpt::Vir => "vir".to_string(),
            })
            .or_else(|| get("family"));
        let family = match family_s.as_deref() {
            None | Some("heis") => Family::Heisenberg,
            Some("vir") => Family::Virasoro,
            Some(other) => return Err(CliError::Usage(format!("unknown family {other:?}"))),
        };

        let auto_s = self
            .g
            .map(|g| match g {
                AutoOpt::Id => "id".to_string(),
                AutoOpt::Neg1 => "neg1".to_string(),
            })
            .or_else(|| get("g"));
        let auto = match auto_s.as_deref() {
            None | Some("id") => AutoOpt::Id,
            Some("neg1") => AutoOpt::Neg1,
            Some(other) => return Err(CliError::Usage(format!("unknown automorphism {other:?}"))),
        };
        if auto == AutoOpt::Neg1 && family != Family::Heisenberg {
            return Err(CliError::Usage(
                "the sign involution is only defined for the Heisenberg family".into(),
            ));
        }

        let t: u32 = match self.t.map(|t| t.to_string()).or_else(|| get("T")) {
            Some(s) => s
                .parse()
                .map_err(|_| CliError::Usage(format!("bad T {s:?}")))?,
            None => {
                if auto == AutoOpt::Neg1 {
                    2
                } else {
                    1
                }
            }
        };
        if t == 0 {
            return Err(CliError::Usage("T must be >= 1".into()));
        }
        if auto == AutoOpt::Neg1 && t != 2 {
            return Err(CliError::Usage("the sign involution has period 2".into()));
        }

        // n is written k/T with the explicit T; a bare integer means an
        // integral twist level
        let n_s = self.n.clone().or_else(|| get("n"));
        let numer: i64 = match n_s.as_deref() {
            None => 0,
            Some(s) => {
                if let Some((a, b)) = s.split_once('/') {
                    let a: i64 = a
                        .trim()
                        .parse()
                        .map_err(|_| CliError::Usage(format!("bad twist numerator in {s:?}")))?;
                    let b: u32 = b
                        .trim()
                        .parse()
                        .map_err(|_| CliError::Usage(format!("bad twist denominator in {s:?}")))?;
                    if b != t {
                        return Err(CliError::Usage(format!(
                            "twist denominator {b} does not match T={t}"
                        )));
                    }
                    a
                } else {
                    let a: i64 = s
                        .trim()
                        .parse()
                        .map_err(|_| CliError::Usage(format!("bad twist level {s:?}")))?;
                    a * t as i64
                }
            }
        };
        if numer < 0 {
            return Err(CliError::Usage("twist level must be >= 0".into()));
        }

        let c = match self.c.clone().or_else(|| get("c")) {
            Some(s) => parse_rat(&s).map_err(CliError::from)?,
            None => rat(1, 2),
        };
        let lambda = match self.lambda.clone().or_else(|| get("lambda")) {
            Some(s) => parse_rat(&s).map_err(CliError::from)?,
            None => int(0),
        };
        let seed = match self.seed.map(|s| s.to_string()).or_else(|| get("seed")) {
            Some(s) => s
                .parse()
                .map_err(|_| CliError::Usage(format!("bad seed {s:?}")))?,
            None => 42,
        };
        let wt = match self.wt.map(|w| w.to_string()).or_else(|| get("wt")) {
            Some(s) => s
                .parse()
                .map_err(|_| CliError::Usage(format!("bad wt {s:?}")))?,
            None => 2,
        };
        let window = match self.window.map(|w| w.to_string()).or_else(|| get("window")) {
            Some(s) => s
                .parse()
                .map_err(|_| CliError::Usage(format!("bad window {s:?}")))?,
            None => 3,
        };
        let schedule = match self
            .schedule
            .clone()
            .or_else(|| get("schedule"))
            .or_else(|| std::env::var(SCHEDULE_ENV).ok())
        {
            Some(s) => Some(parse_schedule(&s)?),
            None => None,
        };
        let targeted = self.family.is_some()
            || self.g.is_some()
            || self.t.is_some()
            || self.n.is_some()
            || self.c.is_some()
            || self.lambda.is_some()
            || !cfg.is_empty();

        Ok(Resolved {
            family,
            auto,
            t,
            numer,
            c,
            lambda,
            seed,
            wt,
            window,
            schedule,
            out: self.out.clone(),
            targeted,
        })
    }
}

impl Resolved {
    fn algebra(&self) -> AlgebraDescription {
        match (self.family, self.auto) {
            (Family::Heisenberg, AutoOpt::Id) => {
                AlgebraDescription::heisenberg(Automorphism::identity(self.t))
            }
            (Family::Heisenberg, AutoOpt::Neg1) => {
                AlgebraDescription::heisenberg(Automorphism::heisenberg_parity())
            }
            (Family::Virasoro, _) => AlgebraDescription::virasoro(self.c.clone(), self.t),
        }
    }

    fn twist(&self) -> CliResult<TwistParams> {
        TwistParams::from_fraction(self.numer, self.t).map_err(CliError::from)
    }

    fn schedule_for(&self, w: i64) -> Vec<i64> {
        match &self.schedule {
            Some(s) => s.clone(),
            None => default_schedule(w),
        }
    }

    fn conformal_spec(&self) -> CliResult<ConformalSpec> {
        let spec = match self.family {
            Family::Heisenberg => ConformalSpec::heisenberg(self.lambda.clone(), DEFAULT_CAP)?,
            Family::Virasoro => ConformalSpec::virasoro(self.c.clone(), DEFAULT_CAP)?,
        };
        Ok(spec)
    }

    fn label(&self) -> String {
        let g = match self.auto {
            AutoOpt::Id => "id",
            AutoOpt::Neg1 => "neg1",
        };
        format!(
            "family={} g={g} n={}/{}",
            self.family.tag(),
            self.numer,
            self.t
        )
    }
}

fn write_out(res: &Resolved, text: &str) -> CliResult<()> {
    if let Some(path) = &res.out {
        std::fs::write(path, text)
            .map_err(|e| CliError::Hard(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn emit_report(res: &Resolved, report: &Report) -> CliResult<ExitCode> {
    let text = report.render();
    print!("{text}");
    write_out(res, &text)?;
    Ok(ExitCode::from(report.exit_code() as u8))
}

// --- deterministic sampling (same generator the library suite uses) ---

struct Sampler {
    rng: rand_chacha::ChaCha8Rng,
}

impl Sampler {
    fn new(seed: u64) -> Self {
        use rand::SeedableRng;
        Sampler {
            rng: rand_chacha::ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn pick(&mut self, monos: &[BasisMonomial]) -> BasisMonomial {
        use rand::Rng;
        monos[self.rng.gen_range(0..monos.len())].clone()
    }
}

fn mono_vec(m: &BasisMonomial) -> Vector {
    Vector::unit(m.clone())
}

// --- subcommand bodies ---

fn cmd_identities(max_s: i64, common: &CommonOpts) -> CliResult<ExitCode> {
    let res = common.resolve()?;
    let mut report = Report::new();
    for s in 0..=max_s {
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
    emit_report(&res, &report)
}

fn cmd_product(op: ProductOp, u: &str, v: &str, common: &CommonOpts) -> CliResult<ExitCode> {
    let res = common.resolve()?;
    let alg = res.algebra();
    let tw = res.twist()?;
    let u = parse_state(u, Some(res.family), DEFAULT_CAP)?;
    let v = parse_state(v, Some(res.family), DEFAULT_CAP)?;
    let result: State = match op {
        ProductOp::Bullet => bullet(&alg, &tw, &u, &v)?,
        ProductOp::Diamond => {
            // split a mixed left factor into eigencomponents and sum
            let mut acc = State::zero(res.family, u.cap().min(v.cap()));
            for r in 0..res.t {
                let ur = alg.g_project(&u, r);
                if ur.is_zero() {
                    continue;
                }
                acc = acc.add(&diamond(&alg, &tw, &ur, &v)?)?;
            }
            acc
        }
        ProductOp::Circ => circ_classic(&alg, &tw, &res.conformal_spec()?, &u, &v)?,
        ProductOp::Star => star_classic(&alg, &tw, &res.conformal_spec()?, &u, &v)?,
    };
    let text = format!("{result}\n");
    print!("{text}");
    write_out(&res, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn kind_of(k: KindOpt) -> IdealKind {
    match k {
        KindOpt::Tilde => IdealKind::Tilde,
        KindOpt::Classic => IdealKind::Classic,
    }
}

fn cmd_ideal_span(kind: KindOpt, common: &CommonOpts) -> CliResult<ExitCode> {
    let res = common.resolve()?;
    let alg = res.algebra();
    let tw = res.twist()?;
    let schedule = res.schedule_for(res.window);
    let mut span = IdealSpan::for_schedule(&alg, tw, kind_of(kind), &schedule)?;
    let mut text = format!(
        "ideal-span kind={} {} ambient={}\n",
        kind_of(kind).tag(),
        res.label(),
        span.ambient()
    );
    for &p in &schedule {
        span.extend_to(p)?;
        text.push_str(&format!(
            "level={} generators={} rank={}\n",
            p,
            span.tags().len(),
            span.rank()
        ));
    }
    print!("{text}");
    write_out(&res, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn quotient_for(res: &Resolved, kind: KindOpt) -> CliResult<twisted_zhu::twist::QuotientAlgebra> {
    let alg = res.algebra();
    let tw = res.twist()?;
    let schedule = res.schedule_for(res.window);
    let spec;
    let omega = match kind {
        KindOpt::Tilde => None,
        KindOpt::Classic => {
            spec = res.conformal_spec()?;
            Some(&spec)
        }
    };
    Ok(quotient_algebra(
        &alg,
        &tw,
        kind_of(kind),
        res.window,
        &schedule,
        omega,
    )?)
}

fn cmd_quotient(kind: KindOpt, common: &CommonOpts) -> CliResult<ExitCode> {
    let res = common.resolve()?;
    let q = quotient_for(&res, kind)?;
    let dims: Vec<String> = q
        .dims_by_level
        .iter()
        .map(|(p, d)| format!("{p}:{d}"))
        .collect();
    let mut text = format!(
        "quotient kind={} {} window={} dim={} stabilized={} commutative={}\n",
        q.kind.tag(),
        res.label(),
        q.window,
        q.dim(),
        q.stabilized,
        q.is_commutative()
    );
    text.push_str(&format!("dims_by_level={}\n", dims.join(",")));
    if let Some(oc) = q.omega_central {
        text.push_str(&format!("omega_central={oc}\n"));
    }
    for (i, rep) in q.reps.iter().enumerate() {
        text.push_str(&format!("rep {i} = {rep}\n"));
    }
    print!("{text}");
    write_out(&res, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_export(kind: KindOpt, common: &CommonOpts) -> CliResult<ExitCode> {
    let res = common.resolve()?;
    let q = quotient_for(&res, kind)?;
    let csv = structure_constants_csv(&q);
    match &res.out {
        Some(_) => write_out(&res, &csv)?,
        None => print!("{csv}"),
    }
    Ok(ExitCode::SUCCESS)
}

// --- targeted verify runners (the suite defaults cover the no-flag case) ---

fn targeted_skew(res: &Resolved, report: &mut Report) -> CliResult<()> {
    let alg = res.algebra();
    let monos = monomials_up_to(res.family, res.wt.max(2));
    for u in &monos {
        for v in &monos {
            report.push_verdict(
                "skew-symmetry",
                format!("{} u={u} v={v}", res.label()),
                &verify_skew_symmetry(&alg, &mono_vec(u), &mono_vec(v), res.wt.max(2)),
            );
        }
    }
    Ok(())
}

fn targeted_unit(res: &Resolved, report: &mut Report) -> CliResult<()> {
    let alg = res.algebra();
    let tw = res.twist()?;
    let vac = mono_vec(&BasisMonomial::vacuum(res.family));
    let wt = res.wt.max(3);
    // right units at floor(n) >= 1 only hold mod the ideal
    let schedule = res.schedule_for(wt + 2 * tw.floor_n());
    let mut span = IdealSpan::for_schedule(&alg, tw, IdealKind::Tilde, &schedule)?;
    for m in monomials_up_to(res.family, wt) {
        let v = mono_vec(&m);
        let left = twisted_zhu::twist::bullet_vec(&alg, &tw, &vac, &v)?;
        let right = twisted_zhu::twist::bullet_vec(&alg, &tw, &v, &vac)?;
        let r = alg.automorphism().eigen_index(&m);
        let right_ok = if r != 0 {
            right.is_zero()
        } else if tw.floor_n() == 0 {
            right == v
        } else {
            let mut diff = right.clone();
            diff.add_scaled(&v, &int(-1));
            membership_mod_ideal(&mut span, &diff, &schedule)?.is_certified()
        };
        let ok = left == v && right_ok;
        report.push(
            "unit-law",
            format!("{} v={m}", res.label()),
            if ok { Status::Pass } else { Status::Fail },
            "",
        );
    }
    Ok(())
}

fn targeted_conformal(res: &Resolved, report: &mut Report) -> CliResult<()> {
    let alg = res.algebra();
    let spec = res.conformal_spec()?;
    report.push_verdict(
        "verify-conformal",
        format!("{} cap={}", res.label(), res.wt.max(4)),
        &verify_conformal(&alg, &spec, res.wt.max(4)),
    );
    Ok(())
}

fn targeted_lemma31(res: &Resolved, report: &mut Report) -> CliResult<()> {
    let alg = res.algebra();
    let tw = res.twist()?;
    let schedule = res.schedule_for(res.wt * 2 + tw.h_max());
    let mut span = IdealSpan::for_schedule(&alg, tw, IdealKind::Tilde, &schedule)?;
    let mut sampler = Sampler::new(res.seed);
    let monos = monomials_up_to(res.family, res.wt);
    for (k, m) in [(0i64, 0i64), (0, 1), (1, 1), (1, 2)] {
        let u = sampler.pick(&monos);
        let v = sampler.pick(&monos);
        let outcome = verify_lemma31(&alg, &mut span, &mono_vec(&u), &mono_vec(&v), k, m, &schedule)?;
        report.push_membership(
            "kernel-shift-in-ideal",
            format!("{} u={u} v={v} k={k} m={m}", res.label()),
            &outcome,
        );
    }
    Ok(())
}

fn targeted_lemma32(res: &Resolved, report: &mut Report) -> CliResult<()> {
    let alg = res.algebra();
    let tw = res.twist()?;
    let schedule = res.schedule_for(res.wt.max(3));
    let mut span = IdealSpan::for_schedule(&alg, tw, IdealKind::Tilde, &schedule)?;
    for m in monomials_up_to(res.family, res.wt.max(3)) {
        if alg.automorphism().eigen_index(&m) == 0 {
            continue;
        }
        let outcome = membership_mod_ideal(&mut span, &mono_vec(&m), &schedule)?;
        report.push_membership(
            "odd-sector-in-ideal",
            format!("{} u={m}", res.label()),
            &outcome,
        );
    }
    let schedule = res.schedule_for(2 * res.wt + 2 * tw.floor_n() + 2);
    let mut span = IdealSpan::for_schedule(&alg, tw, IdealKind::Tilde, &schedule)?;
    let mut sampler = Sampler::new(res.seed);
    let monos = monomials_up_to(res.family, res.wt);
    for _ in 0..3 {
        let u = sampler.pick(&monos);
        let v = sampler.pick(&monos);
        let outcome = verify_lemma32_alt(&alg, &mut span, &mono_vec(&u), &mono_vec(&v), &schedule)?;
        report.push_membership(
            "bullet-alternative-form",
            format!("{} u={u} v={v}", res.label()),
            &outcome,
        );
    }
    Ok(())
}

fn targeted_ideal(res: &Resolved, report: &mut Report) -> CliResult<()> {
    let alg = res.algebra();
    let tw = res.twist()?;
    let schedule = res.schedule_for(3 * res.wt + 4 * tw.floor_n());
    let mut span = IdealSpan::for_schedule(&alg, tw, IdealKind::Tilde, &schedule)?;
    let mut sampler = Sampler::new(res.seed);
    let monos = monomials_up_to(res.family, res.wt);
    for _ in 0..3 {
        let u1 = sampler.pick(&monos);
        let u2 = sampler.pick(&monos);
        let u3 = sampler.pick(&monos);
        for (target, outcome) in verify_ideal_property(
            &alg,
            &mut span,
            &mono_vec(&u1),
            &mono_vec(&u2),
            &mono_vec(&u3),
            &schedule,
        )? {
            report.push_membership(
                "ideal-absorbs-products",
                format!("{} u1={u1} u2={u2} u3={u3} target={target}", res.label()),
                &outcome,
            );
        }
    }
    Ok(())
}

fn targeted_assoc(res: &Resolved, report: &mut Report) -> CliResult<()> {
    let alg = res.algebra();
    let tw = res.twist()?;
    let schedule = res.schedule_for(3 * res.wt + 4 * tw.floor_n());
    let mut span = IdealSpan::for_schedule(&alg, tw, IdealKind::Tilde, &schedule)?;
    let mut sampler = Sampler::new(res.seed);
    let monos = monomials_up_to(res.family, res.wt);
    for _ in 0..3 {
        let u = sampler.pick(&monos);
        let v = sampler.pick(&monos);
        let outcome = verify_commutator(&alg, &mut span, &mono_vec(&u), &mono_vec(&v), &schedule)?;
        report.push_membership(
            "commutator-mod-ideal",
            format!("{} u={u} v={v}", res.label()),
            &outcome,
        );
    }
    for _ in 0..5 {
        let u = sampler.pick(&monos);
        let v = sampler.pick(&monos);
        let w = sampler.pick(&monos);
        let outcome = verify_associativity(
            &alg,
            &mut span,
            &mono_vec(&u),
            &mono_vec(&v),
            &mono_vec(&w),
            &schedule,
        )?;
        report.push_membership(
            "associativity-mod-ideal",
            format!("{} u={u} v={v} w={w}", res.label()),
            &outcome,
        );
    }
    Ok(())
}

fn targeted_surjection(res: &Resolved, report: &mut Report) -> CliResult<()> {
    let alg = res.algebra();
    let tw = res.twist()?;
    let mut sampler = Sampler::new(res.seed);
    let monos = monomials_up_to(res.family, res.wt);
    let mut pairs = Vec::new();
    for _ in 0..3 {
        pairs.push((
            mono_vec(&sampler.pick(&monos)),
            mono_vec(&sampler.pick(&monos)),
        ));
    }
    let schedule = res.schedule_for(2 * res.wt + 2 * tw.floor_n() + 2);
    let sr = verify_surjection(&alg, &tw, res.wt, &pairs, &schedule)?;
    report.push(
        "surjection-to-lower-level",
        format!("{} window={} pairs={}", res.label(), res.wt, pairs.len()),
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

fn targeted_lemma41(res: &Resolved, report: &mut Report) -> CliResult<()> {
    let alg = res.algebra();
    let tw = res.twist()?;
    let monos = monomials_up_to(res.family, res.wt);
    for u in &monos {
        for v in &monos {
            report.push_verdict(
                "bracket-product-agreement",
                format!("{} u={u} v={v}", res.label()),
                &verify_lemma41(&alg, &tw, &mono_vec(u), &mono_vec(v))?,
            );
        }
    }
    Ok(())
}

fn targeted_thm42(res: &Resolved, report: &mut Report) -> CliResult<()> {
    let alg = res.algebra();
    let spec = res.conformal_spec()?;
    let order = (2 * res.wt + 6).max(8) as usize;
    let ctx = BracketContext::new(&alg, spec, order, 3)?;
    let monos = monomials_up_to(res.family, res.wt);
    for u in &monos {
        for v in &monos {
            for m in -2..=2i64 {
                report.push_verdict(
                    "changevar-conjugation",
                    format!("{} u={u} v={v} m={m}", res.label()),
                    &verify_thm42_iso(&alg, &ctx, &mono_vec(u), m, &mono_vec(v))?,
                );
            }
        }
    }
    Ok(())
}

fn targeted_conformal_independence(res: &Resolved, report: &mut Report) -> CliResult<()> {
    if res.family != Family::Heisenberg {
        return Err(CliError::Usage(
            "conformal-independence compares the Heisenberg omega_lambda family".into(),
        ));
    }
    let alg = res.algebra();
    let tw = res.twist()?;
    let spec1 = ConformalSpec::heisenberg(res.lambda.clone(), DEFAULT_CAP)?;
    let spec2 = ConformalSpec::heisenberg(&res.lambda + rat(1, 2), DEFAULT_CAP)?;
    let schedule = res.schedule_for(res.window);
    let ir = verify_conformal_independence(&alg, &tw, &spec1, &spec2, res.window, &schedule)?;
    let dims: Vec<String> = ir
        .dims
        .iter()
        .map(|(p, a, b)| format!("{p}:{a}/{b}"))
        .collect();
    report.push(
        "conformal-independence",
        format!(
            "{} lambda={} vs lambda={} window={}",
            res.label(),
            twisted_zhu::rational::format_rat(&res.lambda),
            twisted_zhu::rational::format_rat(&(&res.lambda + rat(1, 2))),
            res.window
        ),
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

fn targeted_central_omega(res: &Resolved, report: &mut Report) -> CliResult<()> {
    let q = quotient_for(res, KindOpt::Classic)?;
    report.push(
        "quotient-classic",
        format!("{} window={}", res.label(), res.window),
        if q.stabilized && q.omega_central == Some(true) {
            Status::Pass
        } else {
            Status::Inconclusive
        },
        format!(
            "dim={} commutative={} omega_central={:?}",
            q.dim(),
            q.is_commutative(),
            q.omega_central
        ),
    );
    Ok(())
}

fn cmd_verify(suite: &str, max_s: i64, common: &CommonOpts) -> CliResult<ExitCode> {
    let res = common.resolve()?;
    let cfg = SuiteConfig {
        seed: res.seed,
        identity_max_s: max_s,
        schedule_offset: 0,
    };
    let mut report = Report::new();
    if suite == "all" {
        report = run_default_suite(&cfg)?;
        return emit_report(&res, &report);
    }
    if suite == "identities" {
        return cmd_identities(max_s, common);
    }
    let part = SuitePart::from_name(suite)
        .ok_or_else(|| CliError::Usage(format!("unknown verify suite {suite:?}")))?;
    if !res.targeted {
        run_part(&cfg, part, &mut report)?;
        return emit_report(&res, &report);
    }
    match part {
        SuitePart::Identities => unreachable!("handled above"),
        SuitePart::Skew => targeted_skew(&res, &mut report)?,
        SuitePart::Conformal => targeted_conformal(&res, &mut report)?,
        SuitePart::Unit => targeted_unit(&res, &mut report)?,
        SuitePart::Lemma31 => targeted_lemma31(&res, &mut report)?,
        SuitePart::Lemma32 => targeted_lemma32(&res, &mut report)?,
        SuitePart::Ideal => targeted_ideal(&res, &mut report)?,
        SuitePart::Assoc => targeted_assoc(&res, &mut report)?,
        SuitePart::Surjection => targeted_surjection(&res, &mut report)?,
        SuitePart::Lemma41 => targeted_lemma41(&res, &mut report)?,
        SuitePart::Thm42 => targeted_thm42(&res, &mut report)?,
        SuitePart::ConformalIndependence => targeted_conformal_independence(&res, &mut report)?,
        SuitePart::CentralOmega => targeted_central_omega(&res, &mut report)?,
    }
    emit_report(&res, &report)
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    match &cli.cmd {
        Cmd::Identities { max_s, common } => cmd_identities(*max_s, common),
        Cmd::Product { op, u, v, common } => cmd_product(*op, u, v, common),
        Cmd::IdealSpan { kind, common } => cmd_ideal_span(*kind, common),
        Cmd::Quotient { kind, common } => cmd_quotient(*kind, common),
        Cmd::Verify {
            suite,
            max_s,
            common,
        } => cmd_verify(suite, *max_s, common),
        Cmd::Export { kind, common } => cmd_export(*kind, common),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let code = match run(cli) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Hard(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    };
    // timing never enters the deterministic report stream
    eprintln!("elapsed: {} ms", started.elapsed().as_millis());
    code
}
