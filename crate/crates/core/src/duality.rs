//! Mond-Weir type dual: dual feasibility, weak-duality scans against the
//! primal feasible grid, and dual points built from primal certificates.

use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::certify::{
    assemble, find_certificate, verify_certificate, AcqReport, Certificate, ConvexityReport, Sampled, Scope,
    StationaryData, VerifyReport,
};
use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::expr::{fmt_vector, BilevelProblem, ConeSpec};
use crate::scalar::rational_to_f64;
use crate::single_level::{exact_value, strictly_dominates, FeasiblePoint, OracleConfig, PointVerdict, Reformulation};

/// A candidate point of the dual: an anchor `(v, w)` with multipliers and a
/// normal-cone element.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPoint {
    pub certificate: Certificate<BigRational>,
}

impl DualPoint {
    pub fn new(certificate: Certificate<BigRational>) -> Self {
        Self { certificate }
    }

    pub fn anchor(&self) -> &[BigRational] {
        &self.certificate.point
    }
}

/// Exact objective vector `F_k / G_k` at `point`. Only a zero denominator is
/// rejected: the dual objective is evaluated wherever it is defined.
pub fn dual_objective(prob: &BilevelProblem, point: &[BigRational]) -> Result<Vec<BigRational>> {
    prob.numerators
        .iter()
        .zip(&prob.denominators)
        .map(|(f, g)| {
            let gv = exact_value(g, point)?;
            if gv.is_zero() {
                return Err(Error::Precondition(format!("{} vanishes at {}", g.name, fmt_vector(point))));
            }
            Ok(exact_value(f, point)? / gv)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualReport {
    pub data: StationaryData<BigRational>,
    pub verify: VerifyReport<BigRational>,
    /// `Phi(v, w)`.
    pub objective: Vec<BigRational>,
}

impl DualReport {
    pub fn feasible(&self) -> bool {
        self.verify.passed()
    }
}

/// Checks the dual constraints at the anchor in exact arithmetic: the
/// inclusion over all declared carriers, `Upsilon >= 0`, `xi != 0`, and the
/// sign conditions `tau_j H_j >= 0`, `rho_s phi_s >= 0`, `eta Psi >= 0`.
pub fn dual_feasible(prob: &BilevelProblem, dp: &DualPoint) -> Result<DualReport> {
    let data = assemble(prob, dp.anchor(), Scope::Declared)?;
    let verify = verify_certificate(&data, &dp.certificate)?;
    let objective = dual_objective(prob, dp.anchor())?;
    Ok(DualReport { data, verify, objective })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualityViolation {
    pub primal: FeasiblePoint,
    pub dual_index: usize,
    pub dual_objective: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeakDualityReport {
    pub feasible_points: usize,
    pub sampled: usize,
    pub pairs: usize,
    /// Pairs with `(x, y) - (v, w)` in `D`, the only ones weak duality covers.
    pub d_admissible_pairs: usize,
    pub violations: Vec<DualityViolation>,
}

/// Draws up to `samples` feasible grid points (all of them if there are fewer)
/// and reports each pair whose primal objective beats the dual objective by
/// more than the dominance tolerance in every component.
///
/// Dual feasibility is not re-checked here.
pub fn weak_duality_scan(
    prob: &BilevelProblem,
    samples: usize,
    duals: &[DualPoint],
    cfg: &OracleConfig,
    seed: u64,
) -> Result<WeakDualityReport> {
    let mut feasible = Reformulation::new(prob).feasible_grid(cfg)?;
    let feasible_points = feasible.len();
    if feasible.len() > samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        feasible.shuffle(&mut rng);
        feasible.truncate(samples);
        feasible.sort_by(|a, b| a.point.partial_cmp(&b.point).expect("finite grid points"));
    }
    let d: Cone<f64> = Cone::from_spec(&prob.cone.clone().unwrap_or(ConeSpec::Full), prob.dim());
    let mut dual_values = Vec::with_capacity(duals.len());
    let mut anchors = Vec::with_capacity(duals.len());
    for dp in duals {
        dual_values.push(dual_objective(prob, dp.anchor())?.iter().map(rational_to_f64).collect::<Vec<f64>>());
        anchors.push(dp.anchor().iter().map(rational_to_f64).collect::<Vec<f64>>());
    }
    let per_point: Vec<(usize, Vec<DualityViolation>)> = feasible
        .par_iter()
        .map(|p| {
            let mut admissible = 0;
            let mut found = Vec::new();
            for (i, (dv, a)) in dual_values.iter().zip(&anchors).enumerate() {
                let diff: Vec<f64> = p.point.iter().zip(a).map(|(x, y)| x - y).collect();
                if d.contains(&diff).unwrap_or(false) {
                    admissible += 1;
                }
                if strictly_dominates(&p.values, dv, cfg.dominance_tol) {
                    found.push(DualityViolation { primal: p.clone(), dual_index: i, dual_objective: dv.clone() });
                }
            }
            (admissible, found)
        })
        .collect();
    let d_admissible_pairs = per_point.iter().map(|(a, _)| a).sum();
    Ok(WeakDualityReport {
        feasible_points,
        sampled: feasible.len(),
        pairs: feasible.len() * duals.len(),
        d_admissible_pairs,
        violations: per_point.into_iter().flat_map(|(_, v)| v).collect(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrongDuality {
    pub dual: DualPoint,
    pub feasibility: DualReport,
    /// Convexity hypotheses at the point were all supported.
    pub weak_pareto_of_dual: bool,
}

/// Builds a dual point from a stationarity certificate at a weak-Pareto
/// primal point where the constraint qualification holds.
pub fn strong_duality_construct(
    prob: &BilevelProblem,
    point: &[BigRational],
    acq: &AcqReport,
    convexity: Option<&[ConvexityReport]>,
    oracle: Option<&PointVerdict>,
) -> Result<StrongDuality> {
    if acq.verdict != Sampled::Supported {
        return Err(Error::HypothesisMissing(format!(
            "constraint qualification is not supported at {}",
            fmt_vector(point)
        )));
    }
    if let Some(v) = oracle {
        if !v.is_weak_pareto() {
            return Err(Error::HypothesisMissing(format!(
                "{} is not weak Pareto on the feasible grid",
                fmt_vector(point)
            )));
        }
    }
    let data = assemble(prob, point, Scope::Active)?;
    let cert = find_certificate(&data, prob.upper.len(), prob.lower.len())?.ok_or_else(|| {
        Error::Anomaly(format!(
            "no stationarity certificate at {} although the constraint qualification holds",
            fmt_vector(point)
        ))
    })?;
    let dual = DualPoint::new(cert);
    let feasibility = dual_feasible(prob, &dual)?;
    if !feasibility.feasible() {
        return Err(Error::Anomaly(format!(
            "constructed dual point fails dual feasibility: {}",
            feasibility.verify.issues.join("; ")
        )));
    }
    let weak_pareto_of_dual = convexity.is_some_and(|rs| !rs.is_empty() && rs.iter().all(|r| r.verdict() == Sampled::Supported));
    Ok(StrongDuality { dual, feasibility, weak_pareto_of_dual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certfile::parse_cert_file;
    use crate::certify::{check_acq, AcqConfig};
    use crate::corpus;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn bundled_dual() -> DualPoint {
        let prob = corpus::mq_sec5().unwrap();
        let blocks = parse_cert_file(corpus::MQ_DUAL_CERT).unwrap();
        DualPoint::new(blocks[0].resolve(&prob).unwrap())
    }

    #[test]
    fn bundled_dual_point_is_feasible() {
        let prob = corpus::mq_sec5().unwrap();
        let r = dual_feasible(&prob, &bundled_dual()).unwrap();
        assert!(r.feasible(), "{:?}", r.verify.issues);
        assert!(r.verify.residual.iter().all(Zero::is_zero));
        assert_eq!(r.objective, vec![q(1, 1), q(-1, 1)]);
        // tau_1 H_1(-1, 0) = 1/4
        assert_eq!(r.verify.complementarity[0].1, q(1, 4));
    }

    #[test]
    fn dropping_z_or_flipping_eta_is_infeasible() {
        let prob = corpus::mq_sec5().unwrap();
        let mut dp = bundled_dual();
        dp.certificate.z = vec![q(0, 1), q(0, 1)];
        let r = dual_feasible(&prob, &dp).unwrap();
        assert_eq!(r.verify.residual, vec![q(13, 4), q(11, 4)]);
        assert!(!r.feasible());
        let mut dp = bundled_dual();
        dp.certificate.eta = q(-1, 6);
        assert!(!dual_feasible(&prob, &dp).unwrap().feasible());
    }

    #[test]
    fn scan_against_bundled_dual_is_empty() {
        let prob = corpus::q1_sec4().unwrap();
        let r = weak_duality_scan(&prob, 200, &[bundled_dual()], &OracleConfig::default(), 7).unwrap();
        assert_eq!(r.sampled, r.feasible_points.min(200));
        assert!(r.violations.is_empty());
    }

    #[test]
    fn dominated_anchor_produces_violations() {
        let prob = corpus::q1_sec3().unwrap();
        let mut dp = bundled_dual();
        dp.certificate.point = vec![q(1, 1), q(0, 1)];
        let r = weak_duality_scan(&prob, 1000, &[dp], &OracleConfig::default(), 0).unwrap();
        assert!(!r.violations.is_empty());
        assert!(r.violations.iter().any(|v| v.primal.point == vec![0.0, 0.0]));
    }

    #[test]
    fn strong_duality_from_section_four_origin() {
        let prob = corpus::q1_sec4().unwrap();
        let origin = vec![q(0, 1), q(0, 1)];
        let acq = check_acq(&prob, &origin, &AcqConfig::default()).unwrap();
        let s = strong_duality_construct(&prob, &origin, &acq, None, None).unwrap();
        assert!(s.feasibility.feasible());
        assert!(s.feasibility.verify.residual.iter().all(Zero::is_zero));
        assert!(!s.weak_pareto_of_dual);
        // the dual objective at the anchor is the primal objective there
        let primal = crate::single_level::objective_values(&prob, &[0.0, 0.0]).unwrap();
        let dual: Vec<f64> = s.feasibility.objective.iter().map(rational_to_f64).collect();
        assert_eq!(primal, dual);
    }

    #[test]
    fn violated_acq_is_refused() {
        let prob = corpus::q1_sec4().unwrap();
        let origin = vec![q(0, 1), q(0, 1)];
        let mut acq = check_acq(&prob, &origin, &AcqConfig::default()).unwrap();
        acq.verdict = Sampled::Violated;
        let err = strong_duality_construct(&prob, &origin, &acq, None, None).unwrap_err();
        assert!(matches!(err, Error::HypothesisMissing(_)));
    }
}
