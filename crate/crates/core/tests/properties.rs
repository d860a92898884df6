use fracbilevel::certify::{assemble, find_certificate, verify_certificate, Scope, StationaryData};
use fracbilevel::cone::{tangent_cone_sample, weak_feasible_sample, Cone, TangentConfig};
use fracbilevel::corpus;
use fracbilevel::expr::{parse_problem, ConeSpec, ConvexificatorKind, FnScalar, ScalarFunction, Sign, Target};
use fracbilevel::nonsmooth::{dini, validate_convexificator, Convexificator, DiniSchedule};
use fracbilevel::single_level::{scalarize, signed_distance_orthant, OracleConfig, Reformulation};
use fracbilevel::{Rational, Result};
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
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

fn rational_cone(dim: usize, gens: &[Vec<i64>]) -> Cone<Rational> {
    Cone::generated(dim, gens.iter().map(|g| g.iter().map(|&v| q(v, 1)).collect()).collect())
}

fn generators(dim: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, dim), 1..=4)
}

fn cone_case() -> impl Strategy<Value = (usize, Vec<Vec<i64>>, u64)> {
    (1usize..=3).prop_flat_map(|d| (Just(d), generators(d), any::<u64>()))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 50, ..ProptestConfig::default() })]

    #[test]
    fn double_polar_agrees_with_the_cone((dim, gens, seed) in cone_case()) {
        let c = rational_cone(dim, &gens);
        let cc: Cone<f64> = c.polar().unwrap().polar().unwrap().convert();
        let cf: Cone<f64> = c.convert();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..200 {
            let u = random_unit(&mut rng, dim);
            prop_assert_eq!(cf.contains_tol(&u, &1e-9).unwrap(), cc.contains_tol(&u, &1e-9).unwrap(), "u = {:?}", u);
        }
        // generators are members of the double polar
        for g in cf.generators().unwrap() {
            prop_assert!(cc.contains(g).unwrap());
        }
    }

    #[test]
    fn polar_is_antimonotone((dim, gens, seed) in cone_case(), extra in generators(3)) {
        let mut bigger = gens.clone();
        bigger.extend(extra.into_iter().map(|g| g[..dim].to_vec()));
        let pa: Cone<f64> = rational_cone(dim, &gens).polar().unwrap().convert();
        let pb: Cone<f64> = rational_cone(dim, &bigger).polar().unwrap().convert();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..400 {
            let u = random_unit(&mut rng, dim);
            if pb.contains(&u).unwrap() {
                prop_assert!(pa.contains(&u).unwrap());
            }
        }
        // the generators of polar(B) are members too, even when sampling hits none
        for g in pb.generators().unwrap() {
            prop_assert!(pa.contains(g).unwrap());
        }
    }

    #[test]
    fn polar_of_intersection_is_sum_of_polars(
        s1 in prop::collection::vec(0u8..3, 1..=3),
        s2 in prop::collection::vec(0u8..3, 3),
        seed in any::<u64>(),
    ) {
        let dim = s1.len();
        let sign = |v: u8| match v { 0 => Sign::Nonneg, 1 => Sign::Nonpos, _ => Sign::Free };
        let a: Cone<f64> = Cone::orthant(&s1.iter().map(|&v| sign(v)).collect::<Vec<_>>());
        let b: Cone<f64> = Cone::orthant(&s2[..dim].iter().map(|&v| sign(v)).collect::<Vec<_>>());
        let lhs = a.intersection(&b).unwrap().polar().unwrap();
        let rhs = a.polar().unwrap().sum(&b.polar().unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..200 {
            let u = random_unit(&mut rng, dim);
            prop_assert_eq!(lhs.contains(&u).unwrap(), rhs.contains(&u).unwrap());
        }
    }

    #[test]
    fn weak_feasible_directions_are_tangent(kind in 0usize..3, seed in any::<u64>()) {
        // a wedge, a parabola region and a union of two rays, all through the origin
        let member = move |p: &[f64]| -> Result<bool> {
            Ok(match kind {
                0 => p[1] >= 0.0 && p[1] <= 2.0 * p[0],
                1 => p[1] >= p[0] * p[0],
                _ => (p[1] == 0.0 && p[0] >= 0.0) || (p[0] == 0.0 && p[1] >= 0.0),
            })
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut dirs: Vec<Vec<f64>> = (0..40).map(|_| random_unit(&mut rng, 2)).collect();
        dirs.extend([vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0], vec![-1.0, 0.0]]);
        let cfg = TangentConfig { seed, ..TangentConfig::default() };
        let w = weak_feasible_sample(&member, &[0.0, 0.0], &dirs, &cfg).unwrap();
        let t = tangent_cone_sample(&member, &[0.0, 0.0], &dirs, &cfg).unwrap();
        for ((d, w), t) in dirs.iter().zip(w).zip(t) {
            prop_assert!(!w || t, "direction {:?} is weakly feasible but not tangent", d);
        }
    }
}

#[test]
fn signed_distance_is_lipschitz_homogeneous_and_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let sample = |rng: &mut ChaCha8Rng| -> Vec<f64> { (0..2).map(|_| rng.gen_range(-3.0..3.0)).collect() };
    for _ in 0..1000 {
        let u = sample(&mut rng);
        let v = sample(&mut rng);
        let dist = u.iter().zip(&v).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        assert!((signed_distance_orthant(&u) - signed_distance_orthant(&v)).abs() <= dist + 1e-12);
        for t in [0.5, 2.0, 10.0] {
            let tu: Vec<f64> = u.iter().map(|x| t * x).collect();
            assert!((signed_distance_orthant(&tu) - t * signed_distance_orthant(&u)).abs() <= 1e-9);
        }
        // componentwise larger points are farther inside the complement
        let w: Vec<f64> = u.iter().map(|x| x + rng.gen_range(0.0..1.0)).collect();
        assert!(signed_distance_orthant(&u) <= signed_distance_orthant(&w) + 1e-12);
    }
}

#[test]
fn dini_is_positively_homogeneous_in_the_direction() {
    let h = FnScalar(|p: &[f64]| Ok(p[0].abs() + p[0] * p[1] + (p[1] - 1.0).abs().sqrt()));
    let sched = DiniSchedule::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let x = [rng.gen_range(-1.0..1.0), rng.gen_range(-0.5..0.5)];
        let d = random_unit(&mut rng, 2);
        let d2: Vec<f64> = d.iter().map(|v| 2.0 * v).collect();
        let one = dini(&h, &x, &d, &sched).unwrap();
        let two = dini(&h, &x, &d2, &sched.scaled(0.5)).unwrap();
        assert!((two.lower - 2.0 * one.lower).abs() <= 1e-6, "{x:?} {d:?}");
        assert!((two.upper - 2.0 * one.upper).abs() <= 1e-6);
    }
}

#[test]
fn dini_matches_directional_derivative_of_polynomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..100 {
        let c: Vec<f64> = (0..6).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let cc = c.clone();
        let h = FnScalar(move |p: &[f64]| {
            let (x, y) = (p[0], p[1]);
            Ok(cc[0] * x + cc[1] * y + cc[2] * x * x + cc[3] * x * y + cc[4] * y * y * y + cc[5] * x * x * y)
        });
        let x = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let d = random_unit(&mut rng, 2);
        let gx = c[0] + 2.0 * c[2] * x[0] + c[3] * x[1] + 2.0 * c[5] * x[0] * x[1];
        let gy = c[1] + c[3] * x[0] + 3.0 * c[4] * x[1] * x[1] + c[5] * x[0] * x[0];
        let exact = gx * d[0] + gy * d[1];
        let est = dini(&h, &x, &d, &DiniSchedule::default()).unwrap();
        assert!((est.lower - exact).abs() <= 1e-4 && (est.upper - exact).abs() <= 1e-4);
    }
}

#[test]
fn semiregular_validation_implies_upper_validation() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let dirs: Vec<Vec<f64>> = (0..32)
        .map(|i| {
            let a = std::f64::consts::TAU * i as f64 / 32.0;
            vec![a.cos(), a.sin()]
        })
        .collect();
    let mut semiregular_passes = 0;
    for _ in 0..20 {
        // max of two affine pieces, optionally with an oscillating term
        let a: Vec<f64> = (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let wiggle = rng.gen_bool(0.5);
        let aa = a.clone();
        let h = FnScalar(move |p: &[f64]| {
            let base = (aa[0] * p[0] + aa[1] * p[1]).max(aa[2] * p[0] + aa[3] * p[1]);
            let osc = if wiggle && p[0] != 0.0 { p[0].abs() * (1.0 / p[0].abs()).ln().sin() } else { 0.0 };
            Ok(base + osc)
        });
        let carrier: Vec<Vec<f64>> = (0..rng.gen_range(1..=3))
            .map(|_| vec![rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)])
            .chain([vec![a[0], a[1]], vec![a[2], a[3]]])
            .collect();
        let upper = Convexificator::new(Target::H(0), ConvexificatorKind::Upper, carrier.clone()).unwrap();
        let semi = Convexificator::new(Target::H(0), ConvexificatorKind::SemiRegular, carrier).unwrap();
        let sched = DiniSchedule::default();
        let ru = validate_convexificator(&h, &upper, &[0.0, 0.0], &dirs, &sched).unwrap();
        let rs = validate_convexificator(&h, &semi, &[0.0, 0.0], &dirs, &sched).unwrap();
        for (cu, cs) in ru.checks.iter().zip(&rs.checks) {
            assert!(!cs.passes() || cu.passes(), "direction {:?}", cs.direction);
        }
        if rs.passed() {
            semiregular_passes += 1;
            assert!(ru.passed());
        }
    }
    assert!(semiregular_passes > 0);
}

#[test]
fn printed_problems_parse_back_to_the_same_functions() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for prob in [corpus::q1_sec3().unwrap(), corpus::q1_sec4().unwrap(), corpus::mq_sec5().unwrap()] {
        let again = parse_problem(&prob.to_string()).unwrap();
        let strip = |p: &fracbilevel::expr::BilevelProblem| {
            p.convexificators.iter().map(|c| (c.target, c.kind, c.anchor.clone(), c.carrier.clone())).collect::<Vec<_>>()
        };
        assert_eq!(strip(&again), strip(&prob));
        assert_eq!(again.reference, prob.reference);
        assert_eq!(again.cone, prob.cone);
        assert_eq!((again.x_box.clone(), again.y_box.clone(), again.theta.clone()), (prob.x_box.clone(), prob.y_box.clone(), prob.theta.clone()));
        let pairs = prob
            .numerators
            .iter()
            .zip(&again.numerators)
            .chain(prob.denominators.iter().zip(&again.denominators))
            .chain(prob.upper.iter().zip(&again.upper))
            .chain(prob.lower.iter().zip(&again.lower))
            .chain(std::iter::once((&prob.lower_objective, &again.lower_objective)));
        let domain = prob.domain();
        let points: Vec<Vec<f64>> =
            (0..1000).map(|_| domain.iter().map(|iv| rng.gen_range(iv.lo..=iv.hi)).collect()).collect();
        for (a, b) in pairs {
            for p in &points {
                assert_eq!(a.select(p).unwrap(), b.select(p).unwrap(), "{} at {p:?}", a.name);
                let (va, vb) = (a.eval(p), b.eval(p));
                match (va, vb) {
                    (Ok(x), Ok(y)) => assert!(x == y || (x.is_nan() && y.is_nan()), "{} at {p:?}: {x} vs {y}", a.name),
                    (Err(_), Err(_)) => {}
                    other => panic!("{} at {p:?}: {other:?}", a.name),
                }
            }
        }
    }
}

#[test]
fn first_scalarized_objective_of_section_three_is_linear() {
    let prob = corpus::q1_sec3().unwrap();
    let s = scalarize(&prob, &[q(0, 1), q(0, 1)]).unwrap();
    assert_eq!(s[0].ratio, q(5, 1));
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..200 {
        let p = [rng.gen_range(-1.0..2.0), rng.gen_range(-1.0..1.0)];
        let direct = prob.numerators[0].eval(&p).unwrap() - 5.0 * prob.denominators[0].eval(&p).unwrap();
        assert!((direct - (p[0] - 2.0 * p[1])).abs() <= 1e-12);
        assert!((s[0].function.eval(&p).unwrap() - (p[0] - 2.0 * p[1])).abs() <= 1e-12);
    }
}

#[test]
fn scalarized_objectives_vanish_exactly_at_their_point() {
    for (prob, point) in [
        (corpus::q1_sec3().unwrap(), vec![q(0, 1), q(0, 1)]),
        (corpus::q1_sec4().unwrap(), vec![q(0, 1), q(0, 1)]),
        (corpus::mq_sec5().unwrap(), vec![q(-1, 1), q(0, 1)]),
    ] {
        for s in scalarize(&prob, &point).unwrap() {
            assert_eq!(s.function.eval_exact(&point), Some(Rational::zero()), "{}", prob.name);
        }
    }
}

fn corpus_data() -> Vec<(StationaryData<Rational>, usize, usize)> {
    let mut out = Vec::new();
    for (prob, point, scope) in [
        (corpus::q1_sec3().unwrap(), vec![q(0, 1), q(0, 1)], Scope::Active),
        (corpus::q1_sec4().unwrap(), vec![q(0, 1), q(0, 1)], Scope::Active),
        (corpus::mq_sec5().unwrap(), vec![q(-1, 1), q(0, 1)], Scope::Declared),
    ] {
        out.push((assemble(&prob, &point, scope).unwrap(), prob.upper.len(), prob.lower.len()));
    }
    out
}

fn perturb(data: &StationaryData<Rational>, rng: &mut ChaCha8Rng) -> StationaryData<Rational> {
    let mut d = data.clone();
    let mut shift = |c: &mut Vec<Vec<Rational>>| {
        for p in c.iter_mut() {
            for v in p.iter_mut() {
                *v += q(rng.gen_range(-4..=4), 4);
            }
        }
    };
    for t in d.objectives.iter_mut() {
        shift(&mut t.carrier);
    }
    for (_, t) in d.upper.iter_mut().chain(d.lower.iter_mut()) {
        shift(&mut t.carrier);
    }
    d
}

#[test]
fn certificate_search_is_scale_invariant_and_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let base = corpus_data();
    let mut feasible = 0;
    for i in 0..20 {
        let (data, p, q_) = &base[i % base.len()];
        let data = perturb(data, &mut rng);
        let factor = q(rng.gen_range(1..=9), rng.gen_range(1..=9));
        let plain = find_certificate(&data, *p, *q_).unwrap();
        let scaled = find_certificate(&data.scale_carriers(&factor), *p, *q_).unwrap();
        assert_eq!(plain.is_some(), scaled.is_some(), "instance {i}");
        for (d, cert) in [(&data, plain), (&data.scale_carriers(&factor), scaled)] {
            if let Some(cert) = cert {
                let r = verify_certificate(d, &cert).unwrap();
                assert!(r.passed(), "{:?}", r.issues);
                assert!(r.residual.iter().all(Zero::is_zero));
                feasible += 1;
            }
        }
    }
    assert!(feasible > 0);
}

#[test]
fn full_continuity_cone_drops_the_normal_cone_term() {
    for (prob, point, scope) in [
        (corpus::q1_sec3().unwrap(), vec![q(0, 1), q(0, 1)], Scope::Active),
        (corpus::q1_sec4().unwrap(), vec![q(0, 1), q(0, 1)], Scope::Active),
        (corpus::mq_sec5().unwrap(), vec![q(-1, 1), q(0, 1)], Scope::Declared),
    ] {
        let mut full = prob.clone();
        full.cone = Some(ConeSpec::Full);
        let data = assemble(&full, &point, scope).unwrap();
        assert!(data.normal_cone.iter().all(|g| g.iter().all(Zero::is_zero)));
        let with = find_certificate(&data, prob.upper.len(), prob.lower.len()).unwrap();
        let without = find_certificate(&data.without_cone(), prob.upper.len(), prob.lower.len()).unwrap();
        assert_eq!(with.is_some(), without.is_some(), "{}", prob.name);
        // the corpus certificates need the normal-cone element
        let declared = assemble(&prob, &point, scope).unwrap();
        assert!(find_certificate(&declared, prob.upper.len(), prob.lower.len()).unwrap().is_some());
    }
}

#[test]
fn lower_level_solutions_have_zero_value_gap() {
    let prob = corpus::q1_sec4().unwrap();
    let reform = Reformulation::new(&prob);
    let cfg = OracleConfig::default();
    let xs = reform.x_grid().points();
    let mut checked = 0;
    for x in xs.iter().step_by(1).take(100) {
        let ll = reform.lower_level_solutions(x, &cfg).unwrap();
        for y in &ll.solutions {
            let psi = reform.capital_psi(x, y).unwrap();
            assert!(psi.abs() <= cfg.value_tol, "x = {x:?}, y = {y:?}, Psi = {psi}");
            checked += 1;
        }
    }
    assert!(checked >= 40);
    // a lower-level feasible y outside the solution set has a positive gap
    let psi = reform.capital_psi(&[0.5], &[0.5]).unwrap();
    assert!(psi > 0.0);
}

#[test]
fn repeated_evaluation_is_deterministic() {
    let prob = corpus::q1_sec3().unwrap();
    let f2 = &prob.numerators[1];
    for p in [[0.0, 0.0], [0.3, -0.2], [-0.7, 0.4]] {
        let first = f2.value(&p).unwrap();
        for _ in 0..10 {
            assert_eq!(f2.value(&p).unwrap().to_bits(), first.to_bits());
        }
    }
}
