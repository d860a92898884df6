//! Sampled generalized convexity relative to a finite carrier.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::expr::{BilevelProblem, ConeSpec, Interval, ScalarFunction, Target};
use crate::scalar::{rational_to_f64, Scalar};
use crate::single_level::{scalarize, Reformulation};

use super::{assemble, Sampled, Scope};

/// Slack on the conclusions of the convex and quasiconvex tests and on the
/// premise of the pseudoconvex test.
pub const CONVEXITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvexityKind {
    /// `h(p) - h(ref) >= <x*, p - ref>`.
    Convex,
    /// `h(p) <= h(ref)` implies `<x*, p - ref> <= 0`.
    Quasi,
    /// `h(p) < h(ref)` implies `<x*, p - ref> < 0`.
    Pseudo,
}

impl ConvexityKind {
    pub fn label(self) -> &'static str {
        match self {
            ConvexityKind::Convex => "convex",
            ConvexityKind::Quasi => "quasiconvex",
            ConvexityKind::Pseudo => "pseudoconvex",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityConfig {
    pub samples: usize,
    pub seed: u64,
}

impl Default for ConvexityConfig {
    fn default() -> Self {
        Self { samples: 500, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityViolation {
    pub point: Vec<f64>,
    pub element: Vec<f64>,
    /// `h(p) - h(ref)`.
    pub difference: f64,
    /// `<x*, p - ref>`.
    pub inner: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityReport {
    pub target: Option<Target>,
    pub name: String,
    pub kind: ConvexityKind,
    pub checked: usize,
    pub violations: Vec<ConvexityViolation>,
}

impl ConvexityReport {
    pub fn verdict(&self) -> Sampled {
        if self.violations.is_empty() {
            Sampled::Supported
        } else {
            Sampled::Violated
        }
    }
}

/// Tests the defining implication of `kind` on `cfg.samples` points `p` of
/// the box with `p - reference` in `d`.
#[allow(clippy::too_many_arguments)]
pub fn check_generalized_convexity<H: ScalarFunction + ?Sized>(
    h: &H,
    name: &str,
    carrier: &[Vec<f64>],
    reference: &[f64],
    kind: ConvexityKind,
    domain: &[Interval],
    d: &Cone<f64>,
    cfg: &ConvexityConfig,
) -> Result<ConvexityReport> {
    if carrier.is_empty() {
        return Err(Error::Precondition(format!("carrier of {name} is empty")));
    }
    let h0 = h.value(reference)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checked = 0;
    let mut attempts = 0;
    let mut violations = Vec::new();
    let max_attempts = cfg.samples.max(1) * 1000;
    while checked < cfg.samples {
        attempts += 1;
        if attempts > max_attempts {
            return Err(Error::InsufficientSamples { found: checked, wanted: cfg.samples });
        }
        let p: Vec<f64> = domain.iter().map(|iv| rng.gen_range(iv.lo..=iv.hi)).collect();
        let dir: Vec<f64> = p.iter().zip(reference).map(|(a, b)| a - b).collect();
        if dir.iter().all(|x| *x == 0.0) && kind == ConvexityKind::Pseudo {
            continue;
        }
        if !d.contains(&dir)? {
            continue;
        }
        checked += 1;
        let diff = h.value(&p)? - h0;
        for x in carrier {
            let inner: f64 = x.iter().zip(&dir).map(|(a, b)| a * b).sum();
            let ok = match kind {
                ConvexityKind::Convex => diff >= inner - CONVEXITY_TOL,
                ConvexityKind::Quasi => diff > 0.0 || inner <= CONVEXITY_TOL,
                ConvexityKind::Pseudo => diff >= -CONVEXITY_TOL || inner < 0.0,
            };
            if !ok {
                violations.push(ConvexityViolation { point: p.clone(), element: x.clone(), difference: diff, inner });
            }
        }
    }
    Ok(ConvexityReport { target: None, name: name.to_string(), kind, checked, violations })
}

/// The sufficiency hypotheses at `point`: pseudoconvexity of
/// every scalarized objective and quasiconvexity of every active constraint
/// and of `Psi`, each relative to its declared carrier.
pub fn convexity_suite(prob: &BilevelProblem, point: &[BigRational], cfg: &ConvexityConfig) -> Result<Vec<ConvexityReport>> {
    let data = assemble(prob, point, Scope::Active)?.convert::<f64>();
    let reference: Vec<f64> = point.iter().map(rational_to_f64).collect();
    let domain = prob.domain();
    let d: Cone<f64> = Cone::from_spec(&prob.cone.clone().unwrap_or(ConeSpec::Full), prob.dim());
    let scalarized = scalarize(prob, point)?;
    let reform = Reformulation::new(prob);
    let mut out = Vec::new();
    let mut run = |h: &dyn ScalarFunction, target: Target, carrier: &[Vec<f64>], kind: ConvexityKind, seed: u64| {
        let mut r = check_generalized_convexity(
            h,
            &target.to_string(),
            carrier,
            &reference,
            kind,
            &domain,
            &d,
            &ConvexityConfig { seed, ..cfg.clone() },
        )?;
        r.target = Some(target);
        out.push(r);
        Ok::<(), Error>(())
    };
    let mut seed = cfg.seed;
    for (term, s) in data.objectives.iter().zip(&scalarized) {
        run(&s.function, term.target, &term.carrier, ConvexityKind::Pseudo, seed)?;
        seed = seed.wrapping_add(1);
    }
    for (j, term) in &data.upper {
        run(&prob.upper[*j], term.target, &term.carrier, ConvexityKind::Quasi, seed)?;
        seed = seed.wrapping_add(1);
    }
    for (s, term) in &data.lower {
        run(&prob.lower[*s], term.target, &term.carrier, ConvexityKind::Quasi, seed)?;
        seed = seed.wrapping_add(1);
    }
    if let Some(term) = &data.psi {
        run(&reform.psi_function(), term.target, &term.carrier, ConvexityKind::Quasi, seed)?;
    }
    Ok(out)
}

/// Converts a rational carrier for the float checks.
pub fn carrier_f64(carrier: &[Vec<BigRational>]) -> Vec<Vec<f64>> {
    carrier.iter().map(|p| p.iter().map(Scalar::to_f64).collect()).collect()
}
