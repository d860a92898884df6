//! Sampled Abadie-type constraint qualification: the polar of the active
//! constraint carriers together with `N_D(0)` must lie in the tangent cone of
//! `E` intersected with `D`.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cone::{tangent_cone_sample, Cone, TangentConfig};
use crate::error::{Error, Result};
use crate::expr::{BilevelProblem, ConeSpec, Target};
use crate::scalar::{rational_to_f64, Scalar};
use crate::single_level::Reformulation;

use super::{active_sets, normal_cone_generators, Sampled};

#[derive(Debug, Clone, PartialEq)]
pub struct AcqConfig {
    /// Random polar members checked in addition to the polar generators.
    pub samples: usize,
    pub seed: u64,
    pub tangent: TangentConfig,
    pub feas_tol: f64,
}

impl Default for AcqConfig {
    fn default() -> Self {
        Self { samples: 100, seed: 0, tangent: TangentConfig::default(), feas_tol: 1e-9 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirectionVerdict {
    pub direction: Vec<f64>,
    pub in_tangent_cone: bool,
    pub in_d: bool,
}

impl DirectionVerdict {
    pub fn accepted(&self) -> bool {
        self.in_tangent_cone && self.in_d
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AcqReport {
    /// Points of the constraint carriers entering the union (without `N_D(0)`).
    pub carrier_points: Vec<Vec<BigRational>>,
    /// `N_D(0)` generators added to the union.
    pub normal_cone: Vec<Vec<BigRational>>,
    /// The polar cone of the union.
    pub polar: Cone<BigRational>,
    /// Whether the polar generators were enumerated exactly.
    pub exact_polar: bool,
    pub checked: Vec<DirectionVerdict>,
    pub verdict: Sampled,
    pub witness: Option<Vec<f64>>,
}

fn unit(v: &[f64]) -> Option<Vec<f64>> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    (n > 1e-12).then(|| v.iter().map(|x| x / n).collect())
}

/// Runs the sampled constraint-qualification check at `point`.
pub fn check_acq(prob: &BilevelProblem, point: &[BigRational], cfg: &AcqConfig) -> Result<AcqReport> {
    let dim = prob.dim();
    if point.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: point.len() });
    }
    let pf: Vec<f64> = point.iter().map(rational_to_f64).collect();
    let active = active_sets(prob, &pf, cfg.feas_tol)?;
    let mut targets: Vec<Target> = active.j0.iter().map(|&j| Target::H(j)).collect();
    targets.extend(active.s0.iter().map(|&s| Target::Phi(s)));
    targets.push(Target::Psi);
    let mut carrier_points = Vec::new();
    for t in targets {
        let decl = prob.convexificator(t, point).ok_or_else(|| {
            Error::MissingDeclaration(format!("convexificator for {t} at {}", crate::expr::fmt_vector(point)))
        })?;
        carrier_points.extend(decl.carrier.iter().cloned());
    }
    let normal_cone = normal_cone_generators(prob)?;
    let mut union = carrier_points.clone();
    union.extend(normal_cone.iter().cloned());
    let polar = Cone::generated(dim, union).polar()?;

    let d_cone: Cone<f64> = Cone::from_spec(&prob.cone.clone().unwrap_or(ConeSpec::Full), dim);
    let reform = Reformulation::new(prob);
    let member = |p: &[f64]| -> Result<bool> { Ok(reform.is_in_e(p, cfg.feas_tol)?) };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    let exact_polar = polar.generators().is_some();
    if let Some(gens) = polar.generators() {
        let gens: Vec<Vec<f64>> = gens.iter().map(|g| g.iter().map(rational_to_f64).collect()).collect();
        dirs.extend(gens.iter().filter_map(|g| unit(g)));
        if !gens.is_empty() {
            for _ in 0..cfg.samples {
                let mut v = vec![0.0; dim];
                for g in &gens {
                    let c: f64 = rng.gen_range(0.0..1.0);
                    for (vi, gi) in v.iter_mut().zip(g) {
                        *vi += c * gi;
                    }
                }
                if let Some(u) = unit(&v) {
                    dirs.push(u);
                }
            }
        }
    } else {
        // Above the enumeration limit: rejection-sample unit vectors against the inequalities.
        let fpolar: Cone<f64> = polar.convert();
        let mut attempts = 0;
        while dirs.len() < cfg.samples && attempts < cfg.samples * 1000 {
            attempts += 1;
            let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            if let Some(u) = unit(&v) {
                if fpolar.contains(&u)? {
                    dirs.push(u);
                }
            }
        }
    }

    let in_t = tangent_cone_sample(&member, &pf, &dirs, &TangentConfig { seed: cfg.seed, ..cfg.tangent.clone() })?;
    let mut checked = Vec::with_capacity(dirs.len());
    for (d, t) in dirs.into_iter().zip(in_t) {
        let in_d = d_cone.contains(&d)?;
        checked.push(DirectionVerdict { direction: d, in_tangent_cone: t, in_d });
    }
    let witness = checked.iter().find(|c| !c.accepted()).map(|c| c.direction.clone());
    Ok(AcqReport {
        carrier_points,
        normal_cone,
        polar,
        exact_polar,
        verdict: if witness.is_some() { Sampled::Violated } else { Sampled::Supported },
        checked,
        witness,
    })
}

impl AcqReport {
    /// Polar generators as floats, empty when none were enumerated.
    pub fn polar_generators(&self) -> Vec<Vec<f64>> {
        self.polar
            .generators()
            .map(|g| g.iter().map(|v| v.iter().map(Scalar::to_f64).collect()).collect())
            .unwrap_or_default()
    }
}
