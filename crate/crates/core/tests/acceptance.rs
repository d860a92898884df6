//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use fracbilevel::certfile::parse_cert_file;
use fracbilevel::certify::{
    assemble, check_acq, check_generalized_convexity, convexity_suite, find_certificate, verify_certificate, AcqConfig,
    ConvexityConfig, ConvexityKind, Sampled, Scope, StationaryData,
};
use fracbilevel::cone::Cone;
use fracbilevel::corpus;
use fracbilevel::duality::{dual_feasible, weak_duality_scan, DualPoint};
use fracbilevel::expr::{BilevelProblem, ConeSpec, ConvexificatorKind, FnScalar, Interval, ScalarFunction, Target};
use fracbilevel::nonsmooth::{dini, validate_convexificator, Convexificator, DiniSchedule};
use fracbilevel::single_level::{signed_distance_orthant, weak_pareto_check, OracleConfig, Reformulation};
use fracbilevel::Rational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FLOAT_RESIDUAL_TOL: f64 = 1e-9;
const POLAR_MEMBERSHIP_TOL: f64 = 1e-9;
const HOMOGENEITY_TOL: f64 = 1e-9;
const VALUE_TOL: f64 = 1e-6;
const DINI_TOL: f64 = 1e-4;
const LIMIT_CERT_VERIFY: Duration = Duration::from_millis(100);
const LIMIT_FIND: Duration = Duration::from_secs(1);
const LIMIT_ACQ: Duration = Duration::from_secs(5);
const LIMIT_ORACLE: Duration = Duration::from_secs(30);

type Outcome = Result<String, String>;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fmt_q(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn origin() -> Vec<Rational> {
    vec![q(0, 1), q(0, 1)]
}

fn load(name: &str) -> BilevelProblem {
    match name {
        "q1_sec3" => corpus::q1_sec3(),
        "q1_sec4" => corpus::q1_sec4(),
        _ => corpus::mq_sec5(),
    }
    .expect("bundled problem parses")
}

fn carriers(data: &StationaryData<Rational>) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = data.objectives.iter().flat_map(|t| t.carrier.clone()).collect();
    out.extend(data.upper.iter().flat_map(|(_, t)| t.carrier.clone()));
    out.extend(data.lower.iter().flat_map(|(_, t)| t.carrier.clone()));
    out.extend(data.psi.iter().flat_map(|t| t.carrier.clone()));
    out
}

/// Verifies a bundled certificate in exact arithmetic.
fn exact_certificate(prob: &BilevelProblem, text: &str, scope: Scope, expect_carriers: &[(i64, i64, i64, i64)]) -> Outcome {
    let start = Instant::now();
    let cert = parse_cert_file(text).map_err(|e| e.to_string())?[0].resolve(prob).map_err(|e| e.to_string())?;
    let data = assemble(prob, &cert.point, scope).map_err(|e| e.to_string())?;
    let report = verify_certificate(&data, &cert).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let want: Vec<Vec<Rational>> = expect_carriers.iter().map(|&(a, b, c, d)| vec![q(a, b), q(c, d)]).collect();
    ensure(carriers(&data) == want, || format!("carriers {:?} differ from the expected list", carriers(&data)))?;
    ensure(report.passed(), || format!("issues: {:?}", report.issues))?;
    ensure(report.residual.iter().all(Zero::is_zero), || format!("residual {}", fmt_q(&report.residual)))?;
    if scope == Scope::Active {
        ensure(report.complementarity.iter().all(|(_, v)| v.is_zero()), || {
            format!("complementarity {:?}", report.complementarity)
        })?;
    }
    ensure(elapsed < LIMIT_CERT_VERIFY, || format!("took {elapsed:?}"))?;
    Ok(format!("residual {} exactly, {} complementarity terms, {:.3} s", fmt_q(&report.residual), report.complementarity.len(), elapsed.as_secs_f64()))
}

fn c1() -> Outcome {
    let prob = load("q1_sec3");
    exact_certificate(&prob, corpus::Q1_SEC3_CERT, Scope::Active, &[(1, 1, -2, 1), (1, 1, 1, 1), (-1, 1, 0, 1), (0, 1, 1, 1), (0, 1, -1, 1), (0, 1, 0, 1)])
}

fn c2() -> Outcome {
    let prob = load("q1_sec4");
    exact_certificate(&prob, corpus::Q1_SEC4_CERT, Scope::Active, &[(1, 1, 2, 1), (-2, 1, 1, 1), (-1, 1, -1, 1), (0, 1, 1, 1), (0, 1, -1, 1), (0, 1, 0, 1)])
}

fn c3() -> Outcome {
    let prob = load("mq_sec5");
    let msg = exact_certificate(&prob, corpus::MQ_DUAL_CERT, Scope::Declared, &[(1, 1, 0, 1), (2, 1, 7, 3), (-1, 1, -1, 1), (0, 1, 1, 1), (0, 1, -1, 1), (0, 1, 0, 1)])?;
    let dp = DualPoint::new(parse_cert_file(corpus::MQ_DUAL_CERT).unwrap()[0].resolve(&prob).unwrap());
    let r = dual_feasible(&prob, &dp).map_err(|e| e.to_string())?;
    ensure(r.feasible(), || format!("dual infeasible: {:?}", r.verify.issues))?;
    let tau1_h1 = &r.verify.complementarity[0].1;
    ensure(*tau1_h1 >= q(0, 1), || format!("tau1*H1 = {tau1_h1}"))?;
    Ok(format!("{msg}; dual feasible, tau1*H1(-1,0) = {tau1_h1} >= 0, objective {}", fmt_q(&r.objective)))
}

fn c4() -> Outcome {
    let mut lines = Vec::new();
    for (name, point, scope) in [("q1_sec3", origin(), Scope::Active), ("q1_sec4", origin(), Scope::Active), ("mq_sec5", vec![q(-1, 1), q(0, 1)], Scope::Declared)] {
        let prob = load(name);
        let data = assemble(&prob, &point, scope).map_err(|e| e.to_string())?;
        let (p, s) = (prob.upper.len(), prob.lower.len());
        let start = Instant::now();
        let exact = find_certificate(&data, p, s).map_err(|e| e.to_string())?.ok_or(format!("{name}: rational search infeasible"))?;
        let rep = verify_certificate(&data, &exact).map_err(|e| e.to_string())?;
        ensure(rep.passed() && rep.residual.iter().all(Zero::is_zero), || format!("{name}: rational residual {}", fmt_q(&rep.residual)))?;
        let fdata = data.convert::<f64>();
        let float = find_certificate(&fdata, p, s).map_err(|e| e.to_string())?.ok_or(format!("{name}: float search infeasible"))?;
        let frep = verify_certificate(&fdata, &float).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        ensure(frep.passed() && frep.residual_norm() <= FLOAT_RESIDUAL_TOL, || format!("{name}: float residual {:e}", frep.residual_norm()))?;
        ensure(elapsed < LIMIT_FIND, || format!("{name}: took {elapsed:?}"))?;
        lines.push(format!("{name} float {:.1e} rational 0 ({:.3} s)", frep.residual_norm(), elapsed.as_secs_f64()));
    }
    Ok(lines.join("; "))
}

fn c5() -> Outcome {
    let prob = load("q1_sec3");
    let start = Instant::now();
    let r = check_acq(&prob, &origin(), &AcqConfig::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let polar: Cone<f64> = r.polar.convert();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..500 {
        let u: Vec<f64> = if i % 2 == 0 {
            vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]
        } else {
            vec![rng.gen_range(-1.0..1.0), 0.0]
        };
        let expected = u[0] >= 0.0 && u[1].abs() <= POLAR_MEMBERSHIP_TOL;
        let got = polar.contains_tol(&u, &POLAR_MEMBERSHIP_TOL).map_err(|e| e.to_string())?;
        ensure(got == expected, || format!("membership disagrees at {u:?}"))?;
    }
    ensure(r.verdict == Sampled::Supported, || format!("ACQ {} with witness {:?}", r.verdict.label(), r.witness))?;
    ensure(elapsed < LIMIT_ACQ, || format!("took {elapsed:?}"))?;
    Ok(format!("polar generators {:?}, {} directions accepted, SUPPORTED, {:.2} s", r.polar_generators(), r.checked.len(), elapsed.as_secs_f64()))
}

fn c6() -> Outcome {
    let d = signed_distance_orthant;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let interior = [rng.gen_range(-2.0..-1e-3), rng.gen_range(-2.0..-1e-3)];
        ensure(d(&interior) < 0.0, || format!("interior {interior:?}"))?;
        let exterior = if rng.gen_bool(0.5) { [rng.gen_range(1e-3..2.0), rng.gen_range(-2.0..2.0)] } else { [rng.gen_range(-2.0..2.0), rng.gen_range(1e-3..2.0)] };
        ensure(d(&exterior) > 0.0, || format!("exterior {exterior:?}"))?;
        let boundary = if rng.gen_bool(0.5) { [0.0, rng.gen_range(-2.0..0.0)] } else { [rng.gen_range(-2.0..0.0), 0.0] };
        ensure(d(&boundary).abs() <= HOMOGENEITY_TOL, || format!("boundary {boundary:?}"))?;
    }
    for _ in 0..1000 {
        let u: [f64; 2] = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
        let v: [f64; 2] = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
        let dist = ((u[0] - v[0]).powi(2) + (u[1] - v[1]).powi(2)).sqrt();
        ensure((d(&u) - d(&v)).abs() <= dist + 1e-12, || format!("Lipschitz fails at {u:?}, {v:?}"))?;
        for t in [0.5, 2.0, 10.0] {
            ensure((d(&[t * u[0], t * u[1]]) - t * d(&u)).abs() <= HOMOGENEITY_TOL, || format!("homogeneity fails at {u:?}, t = {t}"))?;
        }
    }
    // nearest-point oracle on a 400 x 400 grid of [-2, 2]^2
    let n = 400;
    let step = 4.0 / (n - 1) as f64;
    let axis: Vec<f64> = (0..n).map(|i| -2.0 + step * i as f64).collect();
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let u = [rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)];
        let inside = u[0] <= 0.0 && u[1] <= 0.0;
        let mut best = f64::INFINITY;
        for &a in &axis {
            for &b in &axis {
                let g_in = a <= 0.0 && b <= 0.0;
                if g_in != inside {
                    best = best.min(((u[0] - a).powi(2) + (u[1] - b).powi(2)).sqrt());
                }
            }
        }
        let oracle = if inside { -best } else { best };
        let err = (oracle - d(&u)).abs();
        worst = worst.max(err);
        ensure(err <= 2.0 * step, || format!("grid oracle {oracle} vs {} at {u:?}", d(&u)))?;
    }
    Ok(format!("300 classified points, 1000 Lipschitz pairs, homogeneity, grid error {worst:.2e} <= {:.2e}", 2.0 * step))
}

fn c7() -> Outcome {
    let cfg = OracleConfig::default();
    let mut prob = load("q1_sec4");
    prob.set_step(0.01);
    let reform = Reformulation::new(&prob);
    let step = reform.y_grid().step();
    for x in [0.0, 0.5, 1.0, 2.0] {
        let ll = reform.lower_level_solutions(&[x], &cfg).map_err(|e| e.to_string())?;
        let ys: Vec<f64> = ll.solutions.iter().map(|y| y[0]).collect();
        ensure(ys.iter().all(|y| y.abs() <= step || (y - 1.0).abs() <= step), || format!("x = {x}: solutions {ys:?}"))?;
        ensure(ys.iter().any(|y| y.abs() <= step) && ys.iter().any(|y| (y - 1.0).abs() <= step), || format!("x = {x}: solutions {ys:?}"))?;
        let minimum = ll.minimum.ok_or(format!("x = {x}: lower level infeasible"))?;
        for y in &ll.solutions {
            let v = prob.lower_objective.eval(&[x, y[0]]).map_err(|e| e.to_string())?;
            ensure((v - minimum).abs() <= VALUE_TOL, || format!("x = {x}: value {v} vs minimum {minimum}"))?;
        }
    }
    let prob3 = load("q1_sec3");
    let reform3 = Reformulation::new(&prob3);
    for x in [0.0, 0.5, 1.0, 2.0] {
        let ll = reform3.lower_level_solutions(&[x], &cfg).map_err(|e| e.to_string())?;
        let ys: Vec<f64> = ll.solutions.iter().map(|y| y[0]).collect();
        ensure(ys == vec![0.0], || format!("q1_sec3, x = {x}: solutions {ys:?}"))?;
    }
    Ok(format!("q1_sec4 lower-level solutions {{0, 1}} at step {step}; q1_sec3 {{0}}"))
}

fn c8() -> Outcome {
    let prob = load("q1_sec4");
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().map_err(|e| e.to_string())?;
    let start = Instant::now();
    let v = pool.install(|| weak_pareto_check(&prob, &[0.0, 0.0], &OracleConfig::default())).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(v.grid_step == 0.05, || format!("grid step {}", v.grid_step))?;
    ensure(prob.x_box[0] == Interval::new(0.0, 2.0, 0.05) && prob.y_box[0] == Interval::new(-1.0, 1.0, 0.05), || "boxes differ".into())?;
    ensure(v.is_weak_pareto(), || format!("verdict {:?}", v.verdict))?;
    ensure(elapsed < LIMIT_ORACLE, || format!("took {elapsed:?}"))?;
    Ok(format!("WEAK-PARETO against {} feasible points, single thread {:.2} s", v.feasible_points, elapsed.as_secs_f64()))
}

fn c9() -> Outcome {
    let prob = load("q1_sec4");
    let reports = convexity_suite(&prob, &origin(), &ConvexityConfig::default()).map_err(|e| e.to_string())?;
    let want = [
        (Target::Varphi(0), ConvexityKind::Pseudo),
        (Target::Varphi(1), ConvexityKind::Pseudo),
        (Target::H(0), ConvexityKind::Quasi),
        (Target::H(1), ConvexityKind::Quasi),
        (Target::Phi(0), ConvexityKind::Quasi),
        (Target::Psi, ConvexityKind::Quasi),
    ];
    ensure(reports.len() == want.len(), || format!("{} reports", reports.len()))?;
    for (t, k) in want {
        let r = reports.iter().find(|r| r.target == Some(t) && r.kind == k).ok_or(format!("no {} report for {t}", k.label()))?;
        ensure(r.checked == 500 && r.violations.is_empty(), || format!("{t}: {} checked, {} violations", r.checked, r.violations.len()))?;
    }
    let concave = FnScalar(|p: &[f64]| Ok(-(p[0] * p[0]) - p[1] * p[1]));
    let box2 = [Interval::new(0.0, 2.0, 0.05), Interval::new(-1.0, 1.0, 0.05)];
    let planted = check_generalized_convexity(&concave, "planted", &[vec![0.0, 0.0]], &[0.0, 0.0], ConvexityKind::Pseudo, &box2, &Cone::full(2), &ConvexityConfig::default())
        .map_err(|e| e.to_string())?;
    ensure(planted.verdict() == Sampled::Violated, || "planted counterexample not detected".into())?;
    let w = &planted.violations[0];
    Ok(format!("6 checks x 500 samples SUPPORTED; planted concave VIOLATED, witness {:?}", w.point))
}

fn c10() -> Outcome {
    let mut primal = load("q1_sec4");
    primal.x_box[0].step = 0.01;
    let dual_prob = load("mq_sec5");
    let dp = DualPoint::new(parse_cert_file(corpus::MQ_DUAL_CERT).unwrap()[0].resolve(&dual_prob).unwrap());
    ensure(dual_feasible(&dual_prob, &dp).map_err(|e| e.to_string())?.feasible(), || "dual point infeasible".into())?;
    let r = weak_duality_scan(&primal, 200, &[dp], &OracleConfig::default(), 10).map_err(|e| e.to_string())?;
    ensure(r.sampled == 200, || format!("only {} primal samples", r.sampled))?;
    ensure(r.violations.is_empty(), || format!("{} violations, first {:?}", r.violations.len(), r.violations[0].primal.point))?;
    Ok(format!("200 of {} feasible primal points vs dual anchor (-1, 0): 0 violations", r.feasible_points))
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 {
            return v.iter().map(|x| x / n).collect();
        }
    }
}

fn c11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    // double polar
    for _ in 0..50 {
        let dim = rng.gen_range(1..=3);
        let gens: Vec<Vec<Rational>> = (0..rng.gen_range(1..=4)).map(|_| (0..dim).map(|_| q(rng.gen_range(-3..=3), 1)).collect()).collect();
        let c = Cone::generated(dim, gens);
        let cc: Cone<f64> = c.polar().and_then(|p| p.polar()).map_err(|e| e.to_string())?.convert();
        let cf: Cone<f64> = c.convert();
        for _ in 0..200 {
            let u = random_unit(&mut rng, dim);
            ensure(cf.contains_tol(&u, &POLAR_MEMBERSHIP_TOL).unwrap() == cc.contains_tol(&u, &POLAR_MEMBERSHIP_TOL).unwrap(), || format!("double polar disagrees at {u:?}"))?;
        }
    }
    // semiregular validation implies upper validation
    let dirs: Vec<Vec<f64>> = (0..32).map(|i| {
        let a = std::f64::consts::TAU * i as f64 / 32.0;
        vec![a.cos(), a.sin()]
    }).collect();
    for _ in 0..20 {
        let a: Vec<f64> = (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let aa = a.clone();
        let h = FnScalar(move |p: &[f64]| Ok((aa[0] * p[0] + aa[1] * p[1]).max(aa[2] * p[0] + aa[3] * p[1]) + p[0].abs().sqrt() * f64::from(u8::from(aa[0] > 0.0))));
        let carrier: Vec<Vec<f64>> = vec![vec![a[0], a[1]], vec![a[2], a[3]], vec![rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)]];
        let sched = DiniSchedule::default();
        let upper = validate_convexificator(&h, &Convexificator::new(Target::H(0), ConvexificatorKind::Upper, carrier.clone()).unwrap(), &[0.0, 0.0], &dirs, &sched).map_err(|e| e.to_string())?;
        let semi = validate_convexificator(&h, &Convexificator::new(Target::H(0), ConvexificatorKind::SemiRegular, carrier).unwrap(), &[0.0, 0.0], &dirs, &sched).map_err(|e| e.to_string())?;
        for (u, s) in upper.checks.iter().zip(&semi.checks) {
            ensure(!s.passes() || u.passes(), || format!("ordering fails along {:?}", s.direction))?;
        }
    }
    // scaling invariance on perturbed corpus data
    let bases: Vec<(StationaryData<Rational>, usize, usize)> = [("q1_sec3", origin(), Scope::Active), ("q1_sec4", origin(), Scope::Active), ("mq_sec5", vec![q(-1, 1), q(0, 1)], Scope::Declared)]
        .into_iter()
        .map(|(name, p, s)| {
            let prob = load(name);
            (assemble(&prob, &p, s).expect("corpus data assembles"), prob.upper.len(), prob.lower.len())
        })
        .collect();
    for i in 0..20 {
        let (base, p, s) = &bases[i % 3];
        let mut data = base.clone();
        for t in data.objectives.iter_mut().chain(data.upper.iter_mut().map(|(_, t)| t)) {
            for v in t.carrier.iter_mut().flatten() {
                *v += q(rng.gen_range(-4..=4), 4);
            }
        }
        let factor = q(rng.gen_range(1..=9), rng.gen_range(1..=9));
        let a = find_certificate(&data, *p, *s).map_err(|e| e.to_string())?.is_some();
        let b = find_certificate(&data.scale_carriers(&factor), *p, *s).map_err(|e| e.to_string())?.is_some();
        ensure(a == b, || format!("instance {i}: verdict changes under scaling by {factor}"))?;
    }
    // full continuity cone
    for (name, point, scope) in [("q1_sec3", origin(), Scope::Active), ("q1_sec4", origin(), Scope::Active), ("mq_sec5", vec![q(-1, 1), q(0, 1)], Scope::Declared)] {
        let mut prob = load(name);
        prob.cone = Some(ConeSpec::Full);
        let data = assemble(&prob, &point, scope).map_err(|e| e.to_string())?;
        let a = find_certificate(&data, prob.upper.len(), prob.lower.len()).map_err(|e| e.to_string())?.is_some();
        let b = find_certificate(&data.without_cone(), prob.upper.len(), prob.lower.len()).map_err(|e| e.to_string())?.is_some();
        ensure(a == b, || format!("{name}: full-space verdicts differ"))?;
    }
    Ok("double polar 50 cones x 200 directions; kind ordering 20 pairs; scaling 20 instances; full-D reduction 3 problems".into())
}

fn c12() -> Outcome {
    let s3 = load("q1_sec3");
    let s4 = load("q1_sec4");
    let abs = FnScalar(|p: &[f64]| Ok(p[0].abs()));
    let sq = FnScalar(|p: &[f64]| Ok(p[0] * p[0]));
    let cases: Vec<(&str, &dyn ScalarFunction, Vec<f64>, Vec<f64>, f64)> = vec![
        ("|x| at 0 along +1", &abs, vec![0.0], vec![1.0], 1.0),
        ("|x| at 0 along -1", &abs, vec![0.0], vec![-1.0], 1.0),
        ("x^2 at 1 along +1", &sq, vec![1.0], vec![1.0], 2.0),
        ("x^2 at 1 along -1", &sq, vec![1.0], vec![-1.0], -2.0),
        ("q1_sec3 F1 at (0,0) along (1,0)", &s3.numerators[0], vec![0.0, 0.0], vec![1.0, 0.0], 6.0),
        ("q1_sec3 H1 at (0,0) along (1,0)", &s3.upper[0], vec![0.0, 0.0], vec![1.0, 0.0], -1.0),
        ("q1_sec3 f at (1,0) along (1,0)", &s3.lower_objective, vec![1.0, 0.0], vec![1.0, 0.0], 8.0 / 3.0),
        ("q1_sec3 F2 at (1,1) along (1,0)", &s3.numerators[1], vec![1.0, 1.0], vec![1.0, 0.0], 3.0),
        ("q1_sec3 F2 at (1,-1) along (0,-1)", &s3.numerators[1], vec![1.0, -1.0], vec![0.0, -1.0], 1.0),
        ("q1_sec4 F1 at (0,0) along (1,0)", &s4.numerators[0], vec![0.0, 0.0], vec![1.0, 0.0], 2.0),
        ("q1_sec4 F1 at (1,-1) along (0,1)", &s4.numerators[0], vec![1.0, -1.0], vec![0.0, 1.0], -10.0),
        ("q1_sec4 f at (1,0) along (1,0)", &s4.lower_objective, vec![1.0, 0.0], vec![1.0, 0.0], 5.0 / 6.0),
    ];
    let sched = DiniSchedule::default();
    let mut worst: f64 = 0.0;
    for (name, h, x, d, exact) in &cases {
        let est = dini(*h, x, d, &sched).map_err(|e| format!("{name}: {e}"))?;
        let err = (est.lower - exact).abs().max((est.upper - exact).abs());
        worst = worst.max(err);
        ensure(err <= DINI_TOL, || format!("{name}: [{}, {}] vs {exact}", est.lower, est.upper))?;
    }
    Ok(format!("{} cases, worst error {worst:.1e}", cases.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("q1_sec3 certificate verifies exactly", c1),
        ("q1_sec4 certificate verifies exactly", c2),
        ("mq_sec5 dual certificate verifies, dual feasible", c3),
        ("certificate search on the three corpus instances", c4),
        ("constraint qualification on q1_sec3", c5),
        ("signed distance property suite", c6),
        ("lower-level solution map", c7),
        ("weak-Pareto oracle at the q1_sec4 origin", c8),
        ("generalized convexity hypotheses on q1_sec4", c9),
        ("weak duality scan", c10),
        ("cone, validation and certificate property suite", c11),
        ("Dini derivative closed forms", c12),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS [{secs:.2} s] {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL [{secs:.2} s] {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
