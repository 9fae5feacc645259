//! One function per subcommand, each returning a report and a verdict.

use std::collections::BTreeMap;

use epw_core::chern::chern_report;
use epw_core::epw::{
    dual_point_check, local_model, point_scalars, points_on_sextic, sextic_cross_check_20x20, sextic_equation,
    strata_scan, DualityCheck, LocalModelJson, StrataScan, StratumPoint,
};
use epw_core::lagrangian::{lg_certificates, perp, CertificatePrimes, LagrangianJson, LgReport};
use epw_core::mukai::{
    build_mukai_data, discriminant_septic, multiplicity_at_qa, qa_from_lagrangian, sample_rank7_lagrangian,
    sextic_via_quadrics,
};
use epw_core::poly::PolyJson;
use epw_core::symplectic::{symplectic_uniqueness, witness_lines, SymplecticForm};
use epw_core::{Field, LagrangianSubspace, MultiPoly};
use serde::Serialize;
use serde_json::{json, Value};

use crate::input::{checked_prime, lagrangian, over_prime, sample_field, DEFAULT_PRIME};
use crate::report::{envelope, CliError, CliResult, Outcome};
use crate::{Command, GlobalArgs, MukaiMode};

/// Strata and local models scan all of `P^5(F_p)`; small default prime.
const SCAN_PRIME: u64 = 5;
/// Seeds tried after `--seed` when a Mukai sample is degenerate.
const MUKAI_RESEEDS: u64 = 16;

fn config(name: &str, args: &GlobalArgs, extra: Value) -> Value {
    let mut c = json!({
        "command": name,
        "seed": args.seed,
        "prime": args.prime,
        "field": args.field.map(|f| format!("{f:?}")),
        "input": args.input.as_ref().map(|p| p.display().to_string()),
    });
    if let (Value::Object(m), Value::Object(e)) = (&mut c, extra) {
        m.extend(e);
    }
    c
}

pub fn run(cmd: &Command, args: &GlobalArgs) -> CliResult<Outcome> {
    match cmd {
        Command::Sample => sample(args),
        Command::Check {
            decomposable_prime,
            corank_prime,
        } => check(args, *decomposable_prime, *corank_prime),
        Command::Sextic { cross_check } => sextic(args, *cross_check),
        Command::Strata => strata(args),
        Command::Dual => dual(args),
        Command::VerifyDuality { points } => verify_duality(args, *points),
        Command::LocalModels { limit } => local_models(args, *limit),
        Command::Chern => chern(args),
        Command::Mukai { mode } => mukai(args, *mode),
        Command::SymplecticUnique => symplectic_unique(args),
    }
}

#[derive(Serialize)]
struct SampleResult {
    lagrangian: LagrangianJson,
}

fn sample(args: &GlobalArgs) -> CliResult<Outcome> {
    let a = lagrangian(args)?;
    envelope(config("sample", args, json!({})), SampleResult { lagrangian: a.to_json() }, true)
}

#[derive(Serialize)]
struct CheckResult {
    certificates: LgReport,
    certified: bool,
}

fn check(args: &GlobalArgs, decomposable: u64, corank: u64) -> CliResult<Outcome> {
    let a = lagrangian(args)?;
    for p in [decomposable, corank] {
        if epw_core::modp::check_prime(p).is_err() {
            return Err(CliError::Usage(format!("certificate prime {p} is not prime")));
        }
    }
    let report = lg_certificates(&a, CertificatePrimes { decomposable, corank })?;
    let certified = report.certified();
    envelope(
        config("check", args, json!({"decomposable_prime": decomposable, "corank_prime": corank})),
        CheckResult {
            certificates: report,
            certified,
        },
        certified,
    )
}

#[derive(Serialize)]
struct SexticResult {
    field: Field,
    sextic: PolyJson,
    degree: i64,
    homogeneous: bool,
    terms: usize,
    chart: usize,
    second_chart: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    cross_check: Option<bool>,
}

fn sextic(args: &GlobalArgs, cross_check: bool) -> CliResult<Outcome> {
    let a = lagrangian(args)?;
    let s = sextic_equation(&a)?;
    let cross = if cross_check {
        Some(sextic_cross_check_20x20(&a, s.chart, &s)?)
    } else {
        None
    };
    let degree = s.f.degree();
    let homogeneous = s.f.is_homogeneous();
    let passed = degree == 6 && homogeneous && cross.unwrap_or(true);
    envelope(
        config("sextic", args, json!({"cross_check": cross_check})),
        SexticResult {
            field: a.field(),
            sextic: s.to_json(),
            degree,
            homogeneous,
            terms: s.f.num_terms(),
            chart: s.chart,
            second_chart: s.second_chart,
            cross_check: cross,
        },
        passed,
    )
}

fn histogram_map(scan: &StrataScan) -> BTreeMap<String, u64> {
    scan.histogram
        .iter()
        .enumerate()
        .filter(|(c, n)| *c <= 3 || **n > 0)
        .map(|(c, n)| (c.to_string(), *n))
        .collect()
}

#[derive(Serialize)]
struct StrataResult<'a> {
    prime: u64,
    total: u64,
    histogram: BTreeMap<String, u64>,
    points: &'a [StratumPoint],
    max_corank: usize,
}

fn strata(args: &GlobalArgs) -> CliResult<Outcome> {
    let a = over_prime(lagrangian(args)?, args, SCAN_PRIME)?;
    let scan = strata_scan(&a)?;
    let max_corank = (0..scan.histogram.len()).rev().find(|&c| scan.count(c) > 0).unwrap_or(0);
    envelope(
        config("strata", args, json!({"scan_prime": scan.prime})),
        StrataResult {
            prime: scan.prime,
            total: scan.total,
            histogram: histogram_map(&scan),
            points: &scan.points,
            max_corank,
        },
        max_corank <= 2,
    )
}

#[derive(Serialize)]
struct DualResult {
    perp: LagrangianJson,
    involution: bool,
}

fn dual(args: &GlobalArgs) -> CliResult<Outcome> {
    let a = lagrangian(args)?;
    let p = perp(&a)?;
    let involution = perp(&p)?.basis() == a.basis();
    envelope(
        config("dual", args, json!({})),
        DualResult {
            perp: p.to_json(),
            involution,
        },
        involution,
    )
}

#[derive(Serialize)]
struct DualityResult {
    prime: u64,
    requested: usize,
    samples: Vec<DualityCheck>,
    skipped_singular: usize,
}

fn verify_duality(args: &GlobalArgs, points: usize) -> CliResult<Outcome> {
    let a = over_prime(lagrangian(args)?, args, DEFAULT_PRIME)?;
    let Field::Prime(p) = a.field() else { unreachable!() };
    let s = sextic_equation(&a)?;
    let ps = sextic_equation(&perp(&a)?)?;
    let candidates = points_on_sextic(&s, args.seed, 4 * points.max(1), 64 * points.max(1))?;
    let mut samples = Vec::new();
    let mut skipped_singular = 0;
    for v in candidates {
        if samples.len() == points {
            break;
        }
        match dual_point_check(&a, &v, &s, Some(&ps)) {
            Ok(d) => samples.push(d),
            Err(epw_core::Error::Precondition(_)) => skipped_singular += 1,
            Err(e) => return Err(e.into()),
        }
    }
    let passed = samples.len() == points && samples.iter().all(|d| d.holds && d.perp_sextic_vanishes == Some(true));
    envelope(
        config("verify-duality", args, json!({"points": points, "duality_prime": p})),
        DualityResult {
            prime: p,
            requested: points,
            samples,
            skipped_singular,
        },
        passed,
    )
}

#[derive(Serialize)]
struct LocalModelsResult {
    prime: u64,
    histogram: BTreeMap<String, u64>,
    corank2_points: u64,
    models: Vec<LocalModelJson>,
    all_pass: bool,
}

fn local_models(args: &GlobalArgs, limit: usize) -> CliResult<Outcome> {
    let a = over_prime(lagrangian(args)?, args, SCAN_PRIME)?;
    let scan = strata_scan(&a)?;
    let s = sextic_equation(&a)?;
    let mut models = Vec::new();
    let mut all_pass = true;
    for pt in scan.points_of_corank(2).take(limit) {
        let m = local_model(&a, &point_scalars(a.field(), &pt.point), &s)?;
        all_pass &= m.passes();
        models.push(m.to_json());
    }
    let no_higher = scan.histogram[3..].iter().all(|&n| n == 0);
    envelope(
        config("local-models", args, json!({"limit": limit, "scan_prime": scan.prime})),
        LocalModelsResult {
            prime: scan.prime,
            histogram: histogram_map(&scan),
            corank2_points: scan.count(2),
            models,
            all_pass,
        },
        all_pass && no_higher,
    )
}

fn chern(args: &GlobalArgs) -> CliResult<Outcome> {
    let r = chern_report()?;
    let passed = r.matches;
    envelope(config("chern", args, json!({})), r, passed)
}

#[derive(Serialize)]
struct SepticResult {
    data_seed: u64,
    septic: PolyJson,
    septic_degree: i64,
    sextic: PolyJson,
    sextic_degree: i64,
    l5_multiplicity: usize,
}

#[derive(Serialize)]
struct QuadricsResult {
    discriminant_terms: usize,
    s: PolyJson,
    s_degree: i64,
    proportional: bool,
}

#[derive(Serialize)]
struct MultiplicityResult {
    q_a_rank: usize,
    multiplicity: usize,
}

fn mukai(args: &GlobalArgs, mode: MukaiMode) -> CliResult<Outcome> {
    let field = sample_field(args)?;
    let cfg = |extra| config("mukai", args, extra);
    match mode {
        MukaiMode::Septic => {
            let mut last = None;
            for s in args.seed..args.seed.saturating_add(MUKAI_RESEEDS) {
                let d = match build_mukai_data(s, field).and_then(|data| discriminant_septic(&data.system)) {
                    Ok(d) => d,
                    Err(e @ epw_core::Error::Geometry(_)) => {
                        last = Some(e);
                        continue;
                    }
                    Err(e) => return Err(e.into()),
                };
                let l5 = MultiPoly::var(field, d.septic.vars(), 5);
                let once = &d.sextic * &l5 == d.septic && !d.sextic.specialize(5, &field.zero()).is_zero();
                let passed = d.septic.degree() == 7 && d.sextic.degree() == 6 && once;
                return envelope(
                    cfg(json!({"mode": "septic"})),
                    SepticResult {
                        data_seed: s,
                        septic: d.septic.to_json(),
                        septic_degree: d.septic.degree(),
                        sextic: d.sextic.to_json(),
                        sextic_degree: d.sextic.degree(),
                        l5_multiplicity: if once { 1 } else { 0 },
                    },
                    passed,
                );
            }
            Err(last.map(CliError::Core).unwrap_or_else(|| CliError::Usage("no seed tried".into())))
        }
        MukaiMode::Quadrics => {
            let a = lagrangian(args)?;
            let q = sextic_via_quadrics(&a, None)?;
            let passed = q.proportional;
            envelope(
                cfg(json!({"mode": "quadrics"})),
                QuadricsResult {
                    discriminant_terms: q.discriminant.num_terms(),
                    s: q.s.to_json(),
                    s_degree: q.s.degree(),
                    proportional: q.proportional,
                },
                passed,
            )
        }
        MukaiMode::Multiplicity => {
            let a: LagrangianSubspace = match &args.input {
                Some(_) => lagrangian(args)?,
                None => sample_rank7_lagrangian(args.seed, field)?,
            };
            let rank = qa_from_lagrangian(&a)?.rank();
            let m = multiplicity_at_qa(&a)?;
            envelope(
                cfg(json!({"mode": "multiplicity"})),
                MultiplicityResult {
                    q_a_rank: rank,
                    multiplicity: m,
                },
                m >= 3,
            )
        }
    }
}

#[derive(Serialize)]
struct UniquenessResult {
    field: Field,
    lines: usize,
    constraints: usize,
    kernel_dim: usize,
    proportional_to_sigma: bool,
}

fn symplectic_unique(args: &GlobalArgs) -> CliResult<Outcome> {
    let field = sample_field(args)?;
    if let Some(p) = args.prime {
        checked_prime(p)?;
    }
    let lines = witness_lines(field);
    let u = symplectic_uniqueness(&lines)?;
    let gram = SymplecticForm::new(field).gram().clone();
    let proportional = u.generator.as_ref().is_some_and(|g| {
        let pivot = (0..gram.entries().len()).find(|&k| !gram.entries()[k].is_zero()).unwrap();
        let gp = &g.entries()[pivot];
        !gp.is_zero() && g.scale(&gram.entries()[pivot]) == gram.scale(gp)
    });
    envelope(
        config("symplectic-unique", args, json!({})),
        UniquenessResult {
            field,
            lines: lines.len(),
            constraints: u.constraints,
            kernel_dim: u.kernel_dim,
            proportional_to_sigma: proportional,
        },
        u.kernel_dim == 1 && proportional,
    )
}
