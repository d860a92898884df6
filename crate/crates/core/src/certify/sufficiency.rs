//! Weak-Pareto claim from a verified certificate plus generalized convexity,
//! cross-checked against the grid oracle.

use crate::expr::Target;
use crate::scalar::Scalar;
use crate::single_level::PointVerdict;

use super::{ConvexityKind, ConvexityReport, Sampled, StationaryData, VerifyReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SufficiencyClaim {
    Certified,
    NotCertified,
}

impl SufficiencyClaim {
    pub fn label(self) -> &'static str {
        match self {
            SufficiencyClaim::Certified => "WEAK-PARETO-CERTIFIED",
            SufficiencyClaim::NotCertified => "NOT-CERTIFIED",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleCheck {
    Skipped,
    Agrees(PointVerdict),
    Disagrees(PointVerdict),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SufficiencyReport {
    pub claim: SufficiencyClaim,
    /// Hypotheses that are missing or failed.
    pub failures: Vec<String>,
    pub oracle: OracleCheck,
    /// Set when the hypotheses hold but the oracle finds a dominating point.
    pub anomaly: bool,
}

/// Combines the certificate check, the convexity reports and the optional
/// oracle verdict into a claim.
pub fn sufficiency_verdict<S: Scalar>(
    data: &StationaryData<S>,
    verify: &VerifyReport<S>,
    convexity: &[ConvexityReport],
    oracle: Option<PointVerdict>,
) -> SufficiencyReport {
    let mut failures = Vec::new();
    if !verify.passed() {
        failures.push("certificate does not verify".to_string());
    }
    let mut required: Vec<(Target, ConvexityKind)> =
        data.objectives.iter().map(|t| (t.target, ConvexityKind::Pseudo)).collect();
    required.extend(data.upper.iter().map(|(_, t)| (t.target, ConvexityKind::Quasi)));
    required.extend(data.lower.iter().map(|(_, t)| (t.target, ConvexityKind::Quasi)));
    required.extend(data.psi.iter().map(|t| (t.target, ConvexityKind::Quasi)));
    for (target, kind) in required {
        match convexity.iter().find(|r| r.target == Some(target) && r.kind == kind) {
            None => failures.push(format!("{target} {}: no report", kind.label())),
            Some(r) if r.verdict() == Sampled::Violated => {
                failures.push(format!("{target} {}: VIOLATED ({} counterexamples)", kind.label(), r.violations.len()))
            }
            Some(_) => {}
        }
    }
    let hypotheses_hold = failures.is_empty();
    let oracle = match oracle {
        None => OracleCheck::Skipped,
        Some(v) if v.is_weak_pareto() => OracleCheck::Agrees(v),
        Some(v) if hypotheses_hold => OracleCheck::Disagrees(v),
        // A failed hypothesis makes no claim, so a dominated point is not a disagreement.
        Some(v) => OracleCheck::Agrees(v),
    };
    let anomaly = matches!(oracle, OracleCheck::Disagrees(_));
    if anomaly {
        failures.push("grid oracle found a dominating feasible point".to_string());
    }
    SufficiencyReport {
        claim: if hypotheses_hold && !anomaly { SufficiencyClaim::Certified } else { SufficiencyClaim::NotCertified },
        failures,
        oracle,
        anomaly,
    }
}
