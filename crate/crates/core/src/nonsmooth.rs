//! Dini derivatives, continuity directions and convexificator validation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cone::Cone;
use crate::error::{EvalError, Error, Result};
use crate::expr::{ConvexificatorKind, ScalarFunction, Target};

/// Geometric step schedule with a trailing window.
#[derive(Debug, Clone, PartialEq)]
pub struct DiniSchedule {
    pub steps: Vec<f64>,
    pub tail: usize,
}

impl Default for DiniSchedule {
    fn default() -> Self {
        Self {
            steps: (0..=24).map(|k| 0.1 * 0.5f64.powi(k)).collect(),
            tail: 8,
        }
    }
}

impl DiniSchedule {
    pub fn tail_steps(&self) -> &[f64] {
        let n = self.steps.len();
        &self.steps[n.saturating_sub(self.tail)..]
    }

    /// The same schedule with every step multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            steps: self.steps.iter().map(|t| t * factor).collect(),
            tail: self.tail,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiniEstimate {
    /// Approximates `h^-(x; d)`.
    pub lower: f64,
    /// Approximates `h^+(x; d)`.
    pub upper: f64,
    pub converged: bool,
    pub oscillation: f64,
}

fn shifted(x: &[f64], t: f64, d: &[f64]) -> Vec<f64> {
    x.iter().zip(d).map(|(a, b)| a + t * b).collect()
}

/// Lower and upper Dini estimates from the tail window of difference quotients.
pub fn dini<H: ScalarFunction + ?Sized>(
    h: &H,
    x: &[f64],
    d: &[f64],
    schedule: &DiniSchedule,
) -> Result<DiniEstimate, EvalError> {
    let h0 = h.value(x)?;
    let mut lower = f64::INFINITY;
    let mut upper = f64::NEG_INFINITY;
    for &t in schedule.tail_steps() {
        let q = (h.value(&shifted(x, t, d))? - h0) / t;
        lower = lower.min(q);
        upper = upper.max(q);
    }
    let oscillation = upper - lower;
    Ok(DiniEstimate {
        lower,
        upper,
        converged: oscillation <= 1e-3 * (1.0 + upper.abs()),
        oscillation,
    })
}

/// Whether `h(x + t d) -> h(x)` along the tail of the schedule.
pub fn is_continuity_direction<H: ScalarFunction + ?Sized>(
    h: &H,
    x: &[f64],
    d: &[f64],
    schedule: &DiniSchedule,
) -> Result<bool, EvalError> {
    let h0 = h.value(x)?;
    let mut jump: f64 = 0.0;
    for &t in schedule.tail_steps() {
        jump = jump.max((h.value(&shifted(x, t, d))? - h0).abs());
    }
    Ok(jump <= 1e-4 * (1.0 + h0.abs()))
}

/// Per-direction continuity verdicts; the accepted directions sample `D(x)`.
pub fn continuity_directions_sample<H: ScalarFunction + ?Sized>(
    h: &H,
    x: &[f64],
    dirs: &[Vec<f64>],
    schedule: &DiniSchedule,
) -> Result<Vec<bool>, EvalError> {
    dirs.par_iter().map(|d| is_continuity_direction(h, x, d, schedule)).collect()
}

/// A declared finite carrier together with its kind.
#[derive(Debug, Clone, PartialEq)]
pub struct Convexificator {
    pub target: Target,
    pub kind: ConvexificatorKind,
    pub carrier: Vec<Vec<f64>>,
}

impl Convexificator {
    pub fn new(target: Target, kind: ConvexificatorKind, carrier: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = carrier.first() else {
            return Err(Error::Precondition(format!("carrier of {target} is empty")));
        };
        if let Some(p) = carrier.iter().find(|p| p.len() != first.len()) {
            return Err(Error::DimensionMismatch { expected: first.len(), found: p.len() });
        }
        Ok(Self { target, kind, carrier })
    }

    pub fn dim(&self) -> usize {
        self.carrier[0].len()
    }

    /// `max <x*, d>` over the carrier.
    pub fn support(&self, d: &[f64]) -> f64 {
        self.carrier
            .iter()
            .map(|p| p.iter().zip(d).map(|(a, b)| a * b).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirectionCheck {
    pub direction: Vec<f64>,
    /// `h^-` for upper carriers, `h^+` for semi-regular ones.
    pub dini: f64,
    pub support: f64,
    /// `dini - support`; positive beyond the tolerance means a violation.
    pub margin: f64,
    pub converged: bool,
}

impl DirectionCheck {
    pub fn passes(&self) -> bool {
        self.margin <= VALIDATION_TOL
    }
}

/// Slack allowed between a Dini estimate and the carrier support.
pub const VALIDATION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub target: Target,
    pub kind: ConvexificatorKind,
    pub checks: Vec<DirectionCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(DirectionCheck::passes)
    }

    pub fn violations(&self) -> impl Iterator<Item = &DirectionCheck> {
        self.checks.iter().filter(|c| !c.passes())
    }

    /// Largest `dini - support` over all directions.
    pub fn worst_margin(&self) -> f64 {
        self.checks.iter().map(|c| c.margin).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Checks the directional bounding inequality of `c` for `h` at `x` on every
/// test direction.
pub fn validate_convexificator<H: ScalarFunction + ?Sized>(
    h: &H,
    c: &Convexificator,
    x: &[f64],
    dirs: &[Vec<f64>],
    schedule: &DiniSchedule,
) -> Result<ValidationReport> {
    if c.dim() != x.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), found: c.dim() });
    }
    let checks = dirs
        .par_iter()
        .map(|d| {
            let est = dini(h, x, d, schedule)?;
            let dini = match c.kind {
                ConvexificatorKind::Upper => est.lower,
                ConvexificatorKind::SemiRegular => est.upper,
            };
            let support = c.support(d);
            Ok(DirectionCheck {
                direction: d.clone(),
                dini,
                support,
                margin: dini - support,
                converged: est.converged,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ValidationReport { target: c.target, kind: c.kind, checks })
}

/// Unit test directions inside `cone`: 64 equally spaced angles in the plane,
/// seeded random unit vectors otherwise, plus the normalized cone generators.
pub fn default_directions(cone: &Cone<f64>, count: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    let dim = cone.dim();
    let candidates: Vec<Vec<f64>> = if dim == 2 {
        (0..count)
            .map(|i| {
                let a = std::f64::consts::TAU * i as f64 / count as f64;
                vec![a.cos(), a.sin()]
            })
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let n = norm(&v);
            if n > 1e-3 && n <= 1.0 {
                out.push(v.iter().map(|x| x / n).collect());
            }
        }
        out
    };
    let mut dirs = Vec::new();
    for d in candidates {
        if cone.contains(&d)? {
            dirs.push(d);
        }
    }
    if let Some(gens) = cone.generators() {
        for g in gens {
            let n = norm(g);
            if n > 0.0 {
                let u: Vec<f64> = g.iter().map(|x| x / n).collect();
                if !dirs.iter().any(|d| d.iter().zip(&u).all(|(a, b)| (a - b).abs() <= 1e-12)) {
                    dirs.push(u);
                }
            }
        }
    }
    Ok(dirs)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
