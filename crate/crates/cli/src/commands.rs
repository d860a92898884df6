use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::Zero;

use fracbilevel::certfile::{format_certificate, parse_cert_file, BlockKind, CertBlock};
use fracbilevel::certify::{
    assemble, check_acq, convexity_suite, find_certificate, sufficiency_verdict, verify_certificate, AcqConfig,
    Certificate, ConvexityConfig, ConvexityReport, OracleCheck, Sampled, Scope, StationaryData, SufficiencyClaim,
};
use fracbilevel::certify::convexity::carrier_f64;
use fracbilevel::cone::{star_shaped_sample, Cone, StarShaped};
use fracbilevel::duality::{dual_feasible, strong_duality_construct, weak_duality_scan, DualPoint};
use fracbilevel::expr::{fmt_vector, parse_problem, BilevelProblem, ConeSpec, PiecewiseFn, ScalarFunction, Target};
use fracbilevel::nonsmooth::{continuity_directions_sample, default_directions, validate_convexificator, Convexificator, DiniSchedule};
use fracbilevel::scalar::{parse_rational, rational_to_f64};
use fracbilevel::single_level::{
    scalarize, weak_pareto_check, weak_pareto_set, OracleConfig, ParetoVerdict, PointVerdict, Reformulation, COARSE_STEP,
};
use fracbilevel::{Error, Scalar};

use crate::args::{Command, GlobalArgs, Mode};
use crate::report::{RunReport, Status};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_MISSING: i32 = 3;

const DIRECTIONS: usize = 64;
const STAR_SAMPLES: usize = 50;
const DUAL_SAMPLES: usize = 200;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        Self { code: EXIT_INPUT, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => EXIT_INPUT,
            Error::MissingDeclaration(_) => EXIT_MISSING,
            _ => EXIT_VERDICT,
        };
        Self { code, message: e.to_string() }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Runs one command. Failures are recorded in the report, whose exit code is set.
pub fn run(command: &Command, args: &GlobalArgs) -> RunReport {
    let mut report = RunReport::new(command.name(), args.seed);
    let outcome = match command {
        Command::CheckNecessary { file } => check_necessary(file, args, &mut report),
        Command::CheckSufficient { file, certificate } => check_sufficient(file, certificate.as_deref(), args, &mut report),
        Command::Duality { file, dual, from_primal } => duality(file, dual.as_deref(), from_primal.as_deref(), args, &mut report),
        Command::Oracle { file, dump } => oracle(file, dump.as_deref(), args, &mut report),
        Command::Validate { file } => validate(file, args, &mut report),
    };
    report.exit_code = match outcome {
        Ok(()) if report.all_ok() => EXIT_OK,
        Ok(()) => EXIT_VERDICT,
        Err(e) => {
            report.error = Some(e.message);
            e.code
        }
    };
    report
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn load_problem(path: &Path, args: &GlobalArgs, report: &mut RunReport) -> CliResult<BilevelProblem> {
    let text = read(path)?;
    let mut prob = parse_problem(&text).map_err(|e| CliError::input(format!("{}:{e}", path.display())))?;
    if let Some(step) = args.step {
        if !(step > 0.0 && step.is_finite()) {
            return Err(CliError::input(format!("--step must be positive, got {step}")));
        }
        prob.set_step(step);
    }
    report.describe_problem(&prob);
    if prob.max_step() > COARSE_STEP {
        report.warnings.push(format!(
            "grid step {} exceeds {COARSE_STEP}; grid verdicts are resolution-limited",
            prob.max_step()
        ));
    }
    Ok(prob)
}

fn parse_point(text: &str, dim: usize) -> CliResult<Vec<BigRational>> {
    let v = text
        .split(',')
        .map(|s| parse_rational(s.trim()).ok_or_else(|| CliError::input(format!("bad coordinate `{}` in point `{text}`", s.trim()))))
        .collect::<CliResult<Vec<_>>>()?;
    if v.len() != dim {
        return Err(CliError::input(format!("point `{text}` has {} coordinates, the problem has {dim}", v.len())));
    }
    Ok(v)
}

fn resolve_point(prob: &BilevelProblem, text: Option<&str>, report: &mut RunReport) -> CliResult<Vec<BigRational>> {
    let point = match (text, &prob.reference) {
        (Some(t), _) => parse_point(t, prob.dim())?,
        (None, Some(r)) => r.clone(),
        (None, None) => return Err(CliError::input("no --point given and the problem declares no reference point")),
    };
    report.value("point", fmt_vector(&point));
    Ok(point)
}

fn to_f64(v: &[BigRational]) -> Vec<f64> {
    v.iter().map(rational_to_f64).collect()
}

fn fmt_f64(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
    format!("({})", parts.join(", "))
}

fn fmt_list<S: Scalar>(v: &[S]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn oracle_cfg() -> OracleConfig {
    OracleConfig::default()
}

/// Float values rewritten as their shortest decimals, so a float certificate
/// can be printed and read back.
fn decimal_certificate(c: &Certificate<f64>) -> Certificate<BigRational> {
    let d = |v: &f64| parse_rational(&format!("{v}")).unwrap_or_else(BigRational::zero);
    let dv = |v: &[f64]| v.iter().map(d).collect::<Vec<_>>();
    Certificate {
        point: c.point.clone(),
        xi: dv(&c.xi),
        tau: dv(&c.tau),
        rho: dv(&c.rho),
        eta: d(&c.eta),
        weights: c.weights.iter().map(|(t, w)| (*t, dv(w))).collect(),
        z: dv(&c.z),
    }
}

fn record_certificate<S: Scalar>(report: &mut RunReport, cert: &Certificate<S>) {
    report.value("certificate.xi", fmt_list(&cert.xi));
    report.value("certificate.tau", fmt_list(&cert.tau));
    report.value("certificate.rho", fmt_list(&cert.rho));
    report.value("certificate.eta", cert.eta.to_string());
    report.value("certificate.z", fmt_list(&cert.z));
}

/// Outcome of a certificate search or check in the chosen arithmetic.
struct CertOutcome {
    found: bool,
    passed: bool,
    residual: f64,
    issues: Vec<String>,
}

fn search_certificate<S: Scalar>(
    prob: &BilevelProblem,
    data: &StationaryData<BigRational>,
    report: &mut RunReport,
    exact_block: impl Fn(&Certificate<S>) -> Certificate<BigRational>,
) -> CliResult<CertOutcome> {
    let data: StationaryData<S> = data.convert();
    let Some(cert) = find_certificate(&data, prob.upper.len(), prob.lower.len())? else {
        return Ok(CertOutcome { found: false, passed: false, residual: f64::NAN, issues: vec![] });
    };
    let v = verify_certificate(&data, &cert)?;
    record_certificate(report, &cert);
    report.certificates.push(format_certificate(&exact_block(&cert), BlockKind::Certificate));
    Ok(CertOutcome { found: true, passed: v.passed(), residual: v.residual_norm().to_f64(), issues: v.issues })
}

fn failure_reason(issues: &[String], residual: impl std::fmt::Display) -> String {
    let mut parts = vec![format!("residual {residual}")];
    parts.extend(issues.iter().cloned());
    format!("verification failed: {}", parts.join("; "))
}

fn certificate_step(prob: &BilevelProblem, point: &[BigRational], mode: Mode, report: &mut RunReport) -> CliResult<()> {
    let start = Instant::now();
    let data = assemble(prob, point, Scope::Active)?;
    let out = match mode {
        Mode::Float => search_certificate::<f64>(prob, &data, report, decimal_certificate)?,
        Mode::Rational => search_certificate::<BigRational>(prob, &data, report, Clone::clone)?,
    };
    report.time("certificate", start.elapsed());
    if !out.found {
        report.verdict("certificate", Status::Fail, "no multipliers satisfy the stationarity inclusion");
        return Ok(());
    }
    report.value("certificate.residual", out.residual);
    if out.passed {
        report.verdict("certificate", Status::Pass, format!("found and verified, residual {}", out.residual));
    } else {
        report.verdict("certificate", Status::Fail, failure_reason(&out.issues, out.residual));
    }
    Ok(())
}

fn validate_step(prob: &BilevelProblem, point: &[BigRational], seed: u64, report: &mut RunReport) -> CliResult<()> {
    let start = Instant::now();
    let decls = prob.convexificators_at(point);
    if decls.is_empty() {
        return Err(Error::MissingDeclaration(format!("no convexificator declared at {}", fmt_vector(point))).into());
    }
    let x = to_f64(point);
    let d: Cone<f64> = Cone::from_spec(&prob.cone.clone().unwrap_or(ConeSpec::Full), prob.dim());
    let dirs = default_directions(&d, DIRECTIONS, seed)?;
    let sched = DiniSchedule::default();
    let reform = Reformulation::new(prob);
    let psi = reform.psi_function();
    let mut scalarized: Option<Vec<PiecewiseFn>> = None;
    for decl in decls {
        let stored;
        let h: &dyn ScalarFunction = match decl.target {
            Target::Psi => &psi,
            Target::Varphi(k) => {
                if scalarized.is_none() {
                    scalarized = Some(scalarize(prob, point)?.into_iter().map(|s| s.function).collect());
                }
                let fs = scalarized.as_ref().expect("scalarized above");
                fs.get(k).ok_or_else(|| Error::MissingDeclaration(format!("{} has no objective", decl.target)))?
            }
            t => {
                stored = prob.stored_function(t);
                stored.as_ref().ok_or_else(|| Error::MissingDeclaration(format!("{t} is not defined by the problem")))?
            }
        };
        let key = format!("validate.{}.{}", decl.target, decl.kind.keyword());
        let cont = continuity_directions_sample(h, &x, &dirs, &sched).map_err(Error::from)?;
        let used: Vec<Vec<f64>> = dirs.iter().zip(&cont).filter(|(_, c)| **c).map(|(d, _)| d.clone()).collect();
        if used.is_empty() {
            report.verdict(key, Status::Skipped, "no continuity direction among the sampled directions");
            continue;
        }
        let c = Convexificator::new(decl.target, decl.kind, carrier_f64(&decl.carrier))?;
        let r = validate_convexificator(h, &c, &x, &used, &sched)?;
        if r.passed() {
            report.verdict(key, Status::Supported, format!("{} directions, worst margin {:.3e}", used.len(), r.worst_margin()));
        } else {
            let v = r.violations().next().expect("failed report has a violation");
            report.verdict(
                key,
                Status::Violated,
                format!("along {}: Dini derivative {:.6} exceeds support {:.6}", fmt_f64(&v.direction), v.dini, v.support),
            );
        }
    }
    report.time("validate", start.elapsed());
    Ok(())
}

fn acq_step(prob: &BilevelProblem, point: &[BigRational], args: &GlobalArgs, report: &mut RunReport) -> CliResult<fracbilevel::certify::AcqReport> {
    let start = Instant::now();
    let mut cfg = AcqConfig { seed: args.seed, ..AcqConfig::default() };
    if let Some(s) = args.samples {
        cfg.samples = s;
    }
    let acq = check_acq(prob, point, &cfg)?;
    report.time("acq", start.elapsed());
    let gens: Vec<String> = acq.polar_generators().iter().map(|g| fmt_f64(g)).collect();
    report.value("acq.polar_generators", format!("[{}]", gens.join(", ")));
    report.value("acq.directions", acq.checked.len());
    match acq.verdict {
        Sampled::Supported => report.verdict("acq", Status::Supported, format!("{} polar directions tangent and in D", acq.checked.len())),
        Sampled::Violated => report.verdict(
            "acq",
            Status::Violated,
            format!("polar direction {} is not in T cap D", acq.witness.as_deref().map(fmt_f64).unwrap_or_default()),
        ),
    }
    Ok(acq)
}

fn star_step(prob: &BilevelProblem, point: &[BigRational], args: &GlobalArgs, report: &mut RunReport) -> CliResult<()> {
    let start = Instant::now();
    let reform = Reformulation::new(prob);
    let cfg = oracle_cfg();
    let candidates: Vec<Vec<f64>> = reform.feasible_grid(&cfg)?.into_iter().map(|p| p.point).collect();
    let base = to_f64(point);
    let member = |p: &[f64]| reform.is_in_e(p, cfg.feas_tol).map_err(Error::from);
    let wanted = args.samples.unwrap_or(STAR_SAMPLES);
    let available = candidates.iter().filter(|c| c.as_slice() != base.as_slice()).count();
    let samples = wanted.min(available);
    let outcome = star_shaped_sample(&member, &base, &candidates, samples, args.seed);
    report.time("star_shaped", start.elapsed());
    match outcome {
        Ok(StarShaped::Supported { checked }) => {
            report.verdict("star_shaped", Status::Supported, format!("{checked} segments to feasible grid points stay in the set"))
        }
        Ok(StarShaped::Violated { point, lambda }) => report.verdict(
            "star_shaped",
            Status::Violated,
            format!("segment to {} leaves the set at lambda {lambda}", fmt_f64(&point)),
        ),
        Err(Error::InsufficientSamples { found, wanted }) => {
            report.verdict("star_shaped", Status::Skipped, format!("only {found} of {wanted} candidates usable"))
        }
        Err(e) => report.verdict("star_shaped", Status::Skipped, format!("base point rejected: {e}")),
    }
    Ok(())
}

fn oracle_point(prob: &BilevelProblem, point: &[BigRational], report: &mut RunReport) -> CliResult<PointVerdict> {
    let start = Instant::now();
    let v = weak_pareto_check(prob, &to_f64(point), &oracle_cfg())?;
    report.time("oracle", start.elapsed());
    report.value("oracle.feasible_points", v.feasible_points);
    report.value("oracle.on_feasible_grid", v.on_feasible_grid);
    report.value("oracle.values", fmt_f64(&v.values));
    match &v.verdict {
        ParetoVerdict::WeakPareto => report.verdict(
            "oracle",
            Status::Pass,
            format!("WEAK-PARETO against {} feasible grid points", v.feasible_points),
        ),
        ParetoVerdict::NotWeakPareto { witness } => {
            report.value("oracle.witness", fmt_f64(&witness.point));
            report.verdict(
                "oracle",
                Status::Fail,
                format!("NOT-WEAK-PARETO: {} has objective {}", fmt_f64(&witness.point), fmt_f64(&witness.values)),
            )
        }
    }
    Ok(v)
}

fn check_necessary(file: &Path, args: &GlobalArgs, report: &mut RunReport) -> CliResult<()> {
    let prob = load_problem(file, args, report)?;
    let point = resolve_point(&prob, args.point.as_deref(), report)?;
    report.value("mode", mode_name(args.mode));
    validate_step(&prob, &point, args.seed, report)?;
    acq_step(&prob, &point, args, report)?;
    star_step(&prob, &point, args, report)?;
    certificate_step(&prob, &point, args.mode, report)
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Float => "float",
        Mode::Rational => "rational",
    }
}

fn load_blocks(path: &Path) -> CliResult<Vec<CertBlock>> {
    let text = read(path)?;
    parse_cert_file(&text).map_err(|e| CliError::input(format!("{}:{e}", path.display())))
}

fn sufficiency_for<S: Scalar>(
    prob: &BilevelProblem,
    data: &StationaryData<BigRational>,
    cert: Option<&Certificate<BigRational>>,
    convexity: &[ConvexityReport],
    oracle: Option<PointVerdict>,
    report: &mut RunReport,
) -> CliResult<fracbilevel::certify::SufficiencyReport> {
    let data: StationaryData<S> = data.convert();
    let cert: Certificate<S> = match cert {
        Some(c) => c.convert(),
        None => match find_certificate(&data, prob.upper.len(), prob.lower.len())? {
            Some(c) => c,
            None => {
                report.verdict("certificate", Status::Fail, "no multipliers satisfy the stationarity inclusion");
                return Ok(fracbilevel::certify::SufficiencyReport {
                    claim: SufficiencyClaim::NotCertified,
                    failures: vec!["no certificate".into()],
                    oracle: oracle.map_or(OracleCheck::Skipped, OracleCheck::Agrees),
                    anomaly: false,
                });
            }
        },
    };
    let v = verify_certificate(&data, &cert)?;
    record_certificate(report, &cert);
    report.value("certificate.residual", v.residual_norm().to_f64());
    if v.passed() {
        report.verdict("certificate", Status::Pass, format!("verified, residual {}", v.residual_norm()));
    } else {
        report.verdict("certificate", Status::Fail, failure_reason(&v.issues, v.residual_norm()));
    }
    Ok(sufficiency_verdict(&data, &v, convexity, oracle))
}

fn check_sufficient(file: &Path, cert_path: Option<&Path>, args: &GlobalArgs, report: &mut RunReport) -> CliResult<()> {
    let prob = load_problem(file, args, report)?;
    let point = resolve_point(&prob, args.point.as_deref(), report)?;
    report.value("mode", mode_name(args.mode));
    let cert = match cert_path {
        Some(path) => {
            let blocks = load_blocks(path)?;
            let block = blocks
                .iter()
                .find(|b| b.kind == BlockKind::Certificate)
                .or(blocks.first())
                .ok_or_else(|| CliError::input(format!("{}: no certificate block", path.display())))?;
            let c = block.resolve(&prob)?;
            if c.point != point {
                return Err(CliError::input(format!(
                    "certificate is for {}, the checked point is {}",
                    fmt_vector(&c.point),
                    fmt_vector(&point)
                )));
            }
            report.value("certificate.source", path.display());
            Some(c)
        }
        None => None,
    };
    let data = assemble(&prob, &point, Scope::Active)?;

    let start = Instant::now();
    let mut ccfg = ConvexityConfig { seed: args.seed, ..ConvexityConfig::default() };
    if let Some(s) = args.samples {
        ccfg.samples = s;
    }
    let convexity = convexity_suite(&prob, &point, &ccfg)?;
    report.time("convexity", start.elapsed());
    for r in &convexity {
        let key = format!("convexity.{}.{}", r.name, r.kind.label());
        match r.verdict() {
            Sampled::Supported => report.verdict(key, Status::Supported, format!("{} samples", r.checked)),
            Sampled::Violated => {
                let w = &r.violations[0];
                report.verdict(
                    key,
                    Status::Violated,
                    format!("{} of {} samples fail, first at {}", r.violations.len(), r.checked, fmt_f64(&w.point)),
                )
            }
        }
    }

    let oracle = if args.skip_oracle {
        report.verdict("oracle", Status::Skipped, "--skip-oracle given");
        None
    } else {
        Some(oracle_point(&prob, &point, report)?)
    };

    let start = Instant::now();
    let suff = match args.mode {
        Mode::Float => sufficiency_for::<f64>(&prob, &data, cert.as_ref(), &convexity, oracle, report)?,
        Mode::Rational => sufficiency_for::<BigRational>(&prob, &data, cert.as_ref(), &convexity, oracle, report)?,
    };
    report.time("certificate", start.elapsed());
    report.value("sufficiency.claim", suff.claim.label());
    report.value(
        "sufficiency.oracle",
        match suff.oracle {
            OracleCheck::Skipped => "SKIPPED",
            OracleCheck::Agrees(_) => "AGREES",
            OracleCheck::Disagrees(_) => "DISAGREES",
        },
    );
    match suff.claim {
        SufficiencyClaim::Certified => report.verdict("sufficiency", Status::Pass, suff.claim.label()),
        SufficiencyClaim::NotCertified => {
            report.verdict("sufficiency", Status::Fail, format!("{}: {}", suff.claim.label(), suff.failures.join("; ")))
        }
    }
    if suff.anomaly {
        report.warnings.push("hypotheses hold but the grid oracle found a dominating point".into());
    }
    Ok(())
}

fn duality(
    file: &Path,
    dual_path: Option<&Path>,
    from_primal: Option<&str>,
    args: &GlobalArgs,
    report: &mut RunReport,
) -> CliResult<()> {
    if dual_path.is_none() && from_primal.is_none() {
        return Err(CliError::input("duality needs --dual FILE or --from-primal POINT"));
    }
    let prob = load_problem(file, args, report)?;
    let mut duals = Vec::new();
    let mut all_feasible = true;

    if let Some(path) = dual_path {
        let blocks = load_blocks(path)?;
        if blocks.is_empty() {
            return Err(CliError::input(format!("{}: no dual point block", path.display())));
        }
        let start = Instant::now();
        for (i, b) in blocks.iter().enumerate() {
            let dp = DualPoint::new(b.resolve(&prob)?);
            let r = dual_feasible(&prob, &dp)?;
            let key = format!("dual.{}", i + 1);
            report.value(format!("{key}.anchor"), fmt_vector(dp.anchor()));
            report.value(format!("{key}.objective"), fmt_list(&r.objective));
            report.value(format!("{key}.residual"), fmt_list(&r.verify.residual));
            if r.feasible() {
                report.verdict(format!("{key}.feasible"), Status::Pass, format!("anchor {} satisfies every dual constraint", fmt_vector(dp.anchor())));
                duals.push(dp);
            } else {
                all_feasible = false;
                let mut why = r.verify.issues.join("; ");
                if !r.verify.residual.iter().all(Zero::is_zero) {
                    if !why.is_empty() {
                        why.push_str("; ");
                    }
                    let _ = write!(why, "inclusion residual {}", fmt_list(&r.verify.residual));
                }
                report.verdict(format!("{key}.feasible"), Status::Fail, why);
            }
        }
        report.time("dual_feasible", start.elapsed());
    }

    if let Some(text) = from_primal {
        let point = parse_point(text, prob.dim())?;
        report.value("strong_duality.primal", fmt_vector(&point));
        let acq = acq_step(&prob, &point, args, report)?;
        let oracle = if args.skip_oracle {
            report.verdict("oracle", Status::Skipped, "--skip-oracle given");
            None
        } else {
            Some(oracle_point(&prob, &point, report)?)
        };
        let start = Instant::now();
        let ccfg = ConvexityConfig { seed: args.seed, samples: args.samples.unwrap_or(ConvexityConfig::default().samples) };
        let convexity = convexity_suite(&prob, &point, &ccfg)?;
        match strong_duality_construct(&prob, &point, &acq, Some(&convexity), oracle.as_ref()) {
            Ok(s) => {
                let c = &s.dual.certificate;
                report.value("strong_duality.anchor", fmt_vector(&c.point));
                report.value("strong_duality.objective", fmt_list(&s.feasibility.objective));
                report.value("strong_duality.weak_pareto_of_dual", s.weak_pareto_of_dual);
                record_certificate(report, c);
                report.certificates.push(format_certificate(c, BlockKind::DualPoint));
                let tail = if s.weak_pareto_of_dual {
                    "convexity hypotheses SUPPORTED, so it is weak Pareto for the dual"
                } else {
                    "convexity hypotheses not all SUPPORTED, dual optimality not claimed"
                };
                report.verdict("strong_duality", Status::Pass, format!("constructed dual point is feasible; {tail}"));
                duals.push(s.dual);
            }
            Err(e @ (Error::HypothesisMissing(_) | Error::Anomaly(_))) => {
                report.verdict("strong_duality", Status::Fail, e.to_string());
            }
            Err(e) => return Err(e.into()),
        }
        report.time("strong_duality", start.elapsed());
    }

    if duals.is_empty() {
        report.verdict("weak_duality", Status::Skipped, "no feasible dual point to scan against");
        return Ok(());
    }
    let start = Instant::now();
    let samples = args.samples.unwrap_or(DUAL_SAMPLES);
    let r = weak_duality_scan(&prob, samples, &duals, &oracle_cfg(), args.seed)?;
    report.time("weak_duality", start.elapsed());
    report.value("weak_duality.feasible_points", r.feasible_points);
    report.value("weak_duality.sampled", r.sampled);
    report.value("weak_duality.pairs", r.pairs);
    report.value("weak_duality.d_admissible_pairs", r.d_admissible_pairs);
    report.value("weak_duality.violations", r.violations.len());
    if r.violations.is_empty() {
        report.verdict(
            "weak_duality",
            Status::Pass,
            format!("{} primal points x {} dual points, no violation", r.sampled, duals.len()),
        );
    } else {
        let v = &r.violations[0];
        report.verdict(
            "weak_duality",
            Status::Fail,
            format!(
                "{} violations, first: primal {} objective {} beats dual {} objective {}",
                r.violations.len(),
                fmt_f64(&v.primal.point),
                fmt_f64(&v.primal.values),
                v.dual_index + 1,
                fmt_f64(&v.dual_objective)
            ),
        );
    }
    if !all_feasible {
        report.note("infeasible dual points were left out of the weak-duality scan");
    }
    Ok(())
}

fn fmt_set(points: &[Vec<f64>]) -> String {
    let parts: Vec<String> = points
        .iter()
        .map(|p| if p.len() == 1 { format!("{}", p[0]) } else { fmt_f64(p) })
        .collect();
    format!("{{{}}}", parts.join(", "))
}

fn oracle(file: &Path, dump: Option<&Path>, args: &GlobalArgs, report: &mut RunReport) -> CliResult<()> {
    let prob = load_problem(file, args, report)?;
    let reform = Reformulation::new(&prob);
    let cfg = oracle_cfg();
    match args.point.as_deref() {
        Some(text) => {
            let point = parse_point(text, prob.dim())?;
            report.value("point", fmt_vector(&point));
            let v = oracle_point(&prob, &point, report)?;
            let x = &v.point[..prob.n1];
            let ll = reform.lower_level_solutions(x, &cfg).map_err(Error::from)?;
            let set = fmt_set(&ll.solutions);
            report.value("lower_level.x", fmt_f64(x));
            report.value("lower_level.solutions", &set);
            report.note(format!("lower-level solutions at x = {}: {set} (grid step {})", fmt_f64(x), ll.step));
            if v.coarse() {
                report.warnings.push(format!("verdict computed at grid step {}", v.grid_step));
            }
        }
        None => {
            let start = Instant::now();
            let set = weak_pareto_set(&prob, &cfg)?;
            report.time("oracle", start.elapsed());
            let points: Vec<Vec<f64>> = set.iter().map(|p| p.point.clone()).collect();
            report.value("pareto.count", set.len());
            report.value("pareto.points", fmt_set(&points));
            report.verdict("oracle", Status::Pass, format!("{} weak-Pareto grid points", set.len()));
            for p in &set {
                report.note(format!("weak Pareto {} objective {}", fmt_f64(&p.point), fmt_f64(&p.values)));
            }
        }
    }
    if let Some(path) = dump {
        let feasible = reform.feasible_grid(&cfg)?;
        let pareto: Vec<Vec<f64>> = weak_pareto_set(&prob, &cfg)?.into_iter().map(|p| p.point).collect();
        let mut out = String::new();
        let mut header: Vec<String> = (1..=prob.n1).map(|i| format!("x{i}")).collect();
        header.extend((1..=prob.n2).map(|i| format!("y{i}")));
        header.extend((1..=prob.objectives()).map(|k| format!("Phi{k}")));
        header.push("weak_pareto".into());
        let _ = writeln!(out, "{}", header.join("\t"));
        for p in &feasible {
            let mut row: Vec<String> = p.point.iter().chain(&p.values).map(|v| format!("{v}")).collect();
            row.push(if pareto.contains(&p.point) { "1".into() } else { "0".into() });
            let _ = writeln!(out, "{}", row.join("\t"));
        }
        fs::write(path, out).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        report.value("dump.rows", feasible.len());
    }
    Ok(())
}

fn validate(file: &Path, args: &GlobalArgs, report: &mut RunReport) -> CliResult<()> {
    let prob = load_problem(file, args, report)?;
    let point = resolve_point(&prob, args.point.as_deref(), report)?;
    validate_step(&prob, &point, args.seed, report)
}
