//! Sampled tangent cones and local star-shapedness.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Step schedule and perturbation model for tangent-cone sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentConfig {
    /// Strictly decreasing steps `t_k`.
    pub steps: Vec<f64>,
    /// Number of trailing steps that must all succeed.
    pub tail: usize,
    /// Perturbation radius is `radius_factor * t`.
    pub radius_factor: f64,
    /// Random offsets tried per step in addition to the structured ones.
    pub random_offsets: usize,
    pub seed: u64,
}

impl Default for TangentConfig {
    fn default() -> Self {
        Self {
            steps: (0..=20).map(|k| 0.1 * 0.5f64.powi(k)).collect(),
            tail: 6,
            radius_factor: 10.0,
            random_offsets: 16,
            seed: 0,
        }
    }
}

impl TangentConfig {
    pub fn tail_steps(&self) -> &[f64] {
        let n = self.steps.len();
        &self.steps[n.saturating_sub(self.tail)..]
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn offset(d: &[f64], delta: &[f64]) -> Vec<f64> {
    d.iter().zip(delta).map(|(a, b)| a + b).collect()
}

/// Candidate directions `d'` with `|d' - d| <= r`, `d` itself first.
fn perturbations(d: &[f64], r: f64, random: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = d.len();
    let mut out = vec![d.to_vec()];
    let snapped: Vec<f64> = d.iter().map(|&x| if x.abs() <= r { 0.0 } else { x }).collect();
    let gap: Vec<f64> = snapped.iter().zip(d).map(|(a, b)| a - b).collect();
    if norm(&gap) > 0.0 && norm(&gap) <= r {
        out.push(snapped);
    }
    for s in [1.0, 0.5, 0.25, 0.1] {
        for i in 0..n {
            for sign in [1.0, -1.0] {
                let mut delta = vec![0.0; n];
                delta[i] = sign * s * r;
                out.push(offset(d, &delta));
            }
        }
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for s in [1.0, 0.5] {
        for i in 0..n {
            for j in i + 1..n {
                for (si, sj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                    let mut delta = vec![0.0; n];
                    delta[i] = si * s * r * h;
                    delta[j] = sj * s * r * h;
                    out.push(offset(d, &delta));
                }
            }
        }
    }
    for _ in 0..random {
        let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let len = norm(&raw);
        if len == 0.0 {
            continue;
        }
        let scale = r * rng.gen_range(0.0..=1.0) / len;
        let delta: Vec<f64> = raw.iter().map(|x| x * scale).collect();
        out.push(offset(d, &delta));
    }
    out
}

fn along(base: &[f64], t: f64, d: &[f64]) -> Vec<f64> {
    base.iter().zip(d).map(|(b, v)| b + t * v).collect()
}

/// Contingent-cone test per direction: IN when at every tail step some
/// perturbed direction within `radius_factor * t` lands in the set.
pub fn tangent_cone_sample<F>(member: &F, base: &[f64], dirs: &[Vec<f64>], cfg: &TangentConfig) -> Result<Vec<bool>>
where
    F: Fn(&[f64]) -> Result<bool> + Sync,
{
    check_base(member, base)?;
    dirs.par_iter()
        .enumerate()
        .map(|(i, d)| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(i as u64));
            for &t in cfg.tail_steps() {
                let r = cfg.radius_factor * t;
                let mut hit = false;
                for cand in perturbations(d, r, cfg.random_offsets, &mut rng) {
                    if member(&along(base, t, &cand))? {
                        hit = true;
                        break;
                    }
                }
                if !hit {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .collect()
}

/// Weak feasible direction test: the fixed direction must land in the set at
/// every tail step.
pub fn weak_feasible_sample<F>(member: &F, base: &[f64], dirs: &[Vec<f64>], cfg: &TangentConfig) -> Result<Vec<bool>>
where
    F: Fn(&[f64]) -> Result<bool> + Sync,
{
    check_base(member, base)?;
    dirs.par_iter()
        .map(|d| {
            for &t in cfg.tail_steps() {
                if !member(&along(base, t, d))? {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .collect()
}

fn check_base<F>(member: &F, base: &[f64]) -> Result<()>
where
    F: Fn(&[f64]) -> Result<bool> + Sync,
{
    if member(base)? {
        Ok(())
    } else {
        Err(Error::Precondition(format!("base point {base:?} is not accepted by the membership oracle")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StarShaped {
    Supported { checked: usize },
    Violated { point: Vec<f64>, lambda: f64 },
}

/// Checks `base + lambda (x - base)` for `lambda` in `{0.1, ..., 0.9} * 0.5`
/// on `samples` accepted candidates, drawn in a seeded random order.
pub fn star_shaped_sample<F>(
    member: &F,
    base: &[f64],
    candidates: &[Vec<f64>],
    samples: usize,
    seed: u64,
) -> Result<StarShaped>
where
    F: Fn(&[f64]) -> Result<bool> + Sync,
{
    check_base(member, base)?;
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut checked = 0;
    for i in order {
        if checked == samples {
            break;
        }
        let x = &candidates[i];
        if x.as_slice() == base || !member(x)? {
            continue;
        }
        for k in 1..=9 {
            let lambda = 0.05 * k as f64;
            let p: Vec<f64> = base.iter().zip(x).map(|(b, xi)| b + lambda * (xi - b)).collect();
            if !member(&p)? {
                return Ok(StarShaped::Violated { point: x.clone(), lambda });
            }
        }
        checked += 1;
    }
    if checked < samples {
        return Err(Error::InsufficientSamples { found: checked, wanted: samples });
    }
    Ok(StarShaped::Supported { checked })
}
