//! Single-level reformulation: signed distance, `psi`/`Psi` over the `theta`
//! box, the feasible set `E`, the lower-level solution map and the
//! brute-force weak-Pareto oracle.

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, EvalError, Result};
use crate::expr::{BilevelProblem, Interval, PiecewiseFn, ScalarFunction};
use crate::scalar::{parse_rational, rational_to_f64};

/// Grid steps above this are reported as coarse.
pub const COARSE_STEP: f64 = 0.1;

/// `lo + (hi - lo) i / N` for `i = 0..=N`, `N = round((hi - lo) / step)`, at least 1.
pub fn axis_values(iv: &Interval) -> Vec<f64> {
    let n = (((iv.hi - iv.lo) / iv.step).round() as usize).max(1);
    (0..=n).map(|i| iv.lo + (iv.hi - iv.lo) * i as f64 / n as f64).collect()
}

/// Lexicographic product grid over a list of intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    axes: Vec<Vec<f64>>,
    step: f64,
}

impl Grid {
    pub fn new(intervals: &[Interval]) -> Self {
        Self {
            axes: intervals.iter().map(axis_values).collect(),
            step: intervals.iter().map(|iv| iv.step).fold(0.0, f64::max),
        }
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(Vec::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Largest step over the axes.
    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn axis(&self, i: usize) -> &[f64] {
        &self.axes[i]
    }

    /// Point number `k` in lexicographic order (last coordinate fastest).
    pub fn point(&self, mut k: usize) -> Vec<f64> {
        let mut p = vec![0.0; self.axes.len()];
        for (i, axis) in self.axes.iter().enumerate().rev() {
            p[i] = axis[k % axis.len()];
            k /= axis.len();
        }
        p
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|k| self.point(k)).collect()
    }
}

/// Signed distance to the nonpositive orthant.
pub fn signed_distance_orthant(u: &[f64]) -> f64 {
    if u.iter().all(|&v| v <= 0.0) {
        u.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    } else {
        u.iter().map(|&v| v.max(0.0).powi(2)).sum::<f64>().sqrt()
    }
}

/// Tolerances of the grid oracles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Slack on directly evaluable constraints.
    pub feas_tol: f64,
    /// Slack on lower-level optimality.
    pub value_tol: f64,
    /// Margin a ratio must beat to count as strictly smaller.
    pub dominance_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { feas_tol: 1e-9, value_tol: 1e-6, dominance_tol: 1e-7 }
    }
}

fn concat(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().chain(y).copied().collect()
}

/// Grids of one problem plus the evaluation routines built on them.
#[derive(Debug, Clone)]
pub struct Reformulation<'a> {
    prob: &'a BilevelProblem,
    theta: Vec<Vec<f64>>,
    theta_step: f64,
    y_grid: Grid,
    x_grid: Grid,
}

impl<'a> Reformulation<'a> {
    pub fn new(prob: &'a BilevelProblem) -> Self {
        let theta = Grid::new(&prob.theta);
        Self {
            prob,
            theta_step: theta.step(),
            theta: theta.points(),
            y_grid: Grid::new(&prob.y_box),
            x_grid: Grid::new(&prob.x_box),
        }
    }

    pub fn problem(&self) -> &'a BilevelProblem {
        self.prob
    }

    pub fn theta_step(&self) -> f64 {
        self.theta_step
    }

    pub fn x_grid(&self) -> &Grid {
        &self.x_grid
    }

    pub fn y_grid(&self) -> &Grid {
        &self.y_grid
    }

    /// `min{f(x,y) - f(x,z), -Delta(phi(x,z))}`.
    pub fn psi(&self, x: &[f64], y: &[f64], z: &[f64]) -> Result<f64, EvalError> {
        let f = &self.prob.lower_objective;
        let xz = concat(x, z);
        let gap = f.eval(&concat(x, y))? - f.eval(&xz)?;
        if self.prob.lower.is_empty() {
            return Ok(gap);
        }
        let phi = self.prob.lower.iter().map(|p| p.eval(&xz)).collect::<Result<Vec<_>, _>>()?;
        Ok(gap.min(-signed_distance_orthant(&phi)))
    }

    /// Grid maximum of `psi` over `theta`.
    pub fn capital_psi(&self, x: &[f64], y: &[f64]) -> Result<f64, EvalError> {
        let f = &self.prob.lower_objective;
        let fxy = f.eval(&concat(x, y))?;
        let mut best = f64::NEG_INFINITY;
        for z in &self.theta {
            let xz = concat(x, z);
            let mut v = fxy - f.eval(&xz)?;
            if !self.prob.lower.is_empty() {
                let phi = self.prob.lower.iter().map(|p| p.eval(&xz)).collect::<Result<Vec<_>, _>>()?;
                v = v.min(-signed_distance_orthant(&phi));
            }
            best = best.max(v);
        }
        Ok(best)
    }

    /// `Psi` at a concatenated point `(x, y)`.
    pub fn capital_psi_at(&self, point: &[f64]) -> Result<f64, EvalError> {
        let (x, y) = point.split_at(self.prob.n1);
        self.capital_psi(x, y)
    }

    /// `Psi` as a function of the concatenated point.
    pub fn psi_function(&self) -> CapitalPsi<'_, 'a> {
        CapitalPsi(self)
    }

    /// Membership in `E`: upper constraints, lower constraints and `Psi <= 0`.
    pub fn is_in_e(&self, point: &[f64], feas_tol: f64) -> Result<bool, EvalError> {
        for h in self.prob.upper.iter().chain(&self.prob.lower) {
            if h.eval(point)? > feas_tol {
                return Ok(false);
            }
        }
        Ok(self.capital_psi_at(point)? <= feas_tol)
    }

    /// Lower-level optimal grid points for a fixed `x`.
    pub fn lower_level_solutions(&self, x: &[f64], cfg: &OracleConfig) -> Result<LowerLevel, EvalError> {
        let mut feasible = Vec::new();
        for k in 0..self.y_grid.len() {
            let y = self.y_grid.point(k);
            let p = concat(x, &y);
            let mut ok = true;
            for phi in &self.prob.lower {
                if phi.eval(&p)? > cfg.feas_tol {
                    ok = false;
                    break;
                }
            }
            if ok {
                feasible.push((self.prob.lower_objective.eval(&p)?, y));
            }
        }
        let minimum = feasible.iter().map(|(v, _)| *v).fold(f64::INFINITY, f64::min);
        let solutions = feasible
            .into_iter()
            .filter(|(v, _)| *v <= minimum + cfg.value_tol)
            .map(|(_, y)| y)
            .collect::<Vec<_>>();
        Ok(LowerLevel {
            x: x.to_vec(),
            minimum: (!solutions.is_empty()).then_some(minimum),
            solutions,
            step: self.y_grid.step(),
        })
    }

    /// Feasible grid points of the original problem: `y` lower-level optimal
    /// and every upper constraint satisfied.
    pub fn feasible_grid(&self, cfg: &OracleConfig) -> Result<Vec<FeasiblePoint>> {
        let per_x = (0..self.x_grid.len())
            .into_par_iter()
            .map(|k| {
                let x = self.x_grid.point(k);
                let lower = self.lower_level_solutions(&x, cfg)?;
                let mut out = Vec::new();
                for y in lower.solutions {
                    let p = concat(&x, &y);
                    let mut ok = true;
                    for h in &self.prob.upper {
                        if h.eval(&p)? > cfg.feas_tol {
                            ok = false;
                            break;
                        }
                    }
                    if ok {
                        let values = objective_values(self.prob, &p)?;
                        out.push(FeasiblePoint { point: p, values });
                    }
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        let all: Vec<FeasiblePoint> = per_x.into_iter().flatten().collect();
        if all.is_empty() {
            return Err(Error::EmptyFeasibleSet(format!("no feasible grid point for `{}`", self.prob.name)));
        }
        Ok(all)
    }
}

/// `Psi` viewed as a scalar function of `(x, y)`.
#[derive(Debug, Clone, Copy)]
pub struct CapitalPsi<'r, 'a>(&'r Reformulation<'a>);

impl ScalarFunction for CapitalPsi<'_, '_> {
    fn value(&self, point: &[f64]) -> Result<f64, EvalError> {
        self.0.capital_psi_at(point)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowerLevel {
    pub x: Vec<f64>,
    pub solutions: Vec<Vec<f64>>,
    /// Grid minimum of the lower objective; `None` when the lower level is infeasible.
    pub minimum: Option<f64>,
    pub step: f64,
}

impl LowerLevel {
    pub fn is_infeasible(&self) -> bool {
        self.solutions.is_empty()
    }
}

/// Ratios `F_k / G_k` at a point. A nonpositive denominator is a precondition failure.
pub fn objective_values(prob: &BilevelProblem, point: &[f64]) -> Result<Vec<f64>> {
    prob.numerators
        .iter()
        .zip(&prob.denominators)
        .map(|(f, g)| {
            let gv = g.eval(point)?;
            if gv <= 0.0 {
                return Err(Error::Precondition(format!("{} = {gv} is not positive at {point:?}", g.name)));
            }
            Ok(f.eval(point)? / gv)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasiblePoint {
    pub point: Vec<f64>,
    pub values: Vec<f64>,
}

/// Whether `a` beats `b` by more than `tol` in every objective.
pub fn strictly_dominates(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| *x < *y - tol)
}

/// Smallest improvement of `a` over `b` across the objectives.
fn margin(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| y - x).fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParetoVerdict {
    WeakPareto,
    NotWeakPareto { witness: FeasiblePoint },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointVerdict {
    pub point: Vec<f64>,
    pub values: Vec<f64>,
    pub verdict: ParetoVerdict,
    /// Whether the point itself is a feasible grid point.
    pub on_feasible_grid: bool,
    pub feasible_points: usize,
    pub grid_step: f64,
}

impl PointVerdict {
    pub fn is_weak_pareto(&self) -> bool {
        self.verdict == ParetoVerdict::WeakPareto
    }

    pub fn coarse(&self) -> bool {
        self.grid_step > COARSE_STEP
    }
}

/// Weak-Pareto verdict for one point against the feasible grid. The witness,
/// if any, is the feasible point with the largest uniform improvement.
pub fn weak_pareto_check(prob: &BilevelProblem, point: &[f64], cfg: &OracleConfig) -> Result<PointVerdict> {
    let reform = Reformulation::new(prob);
    let feasible = reform.feasible_grid(cfg)?;
    let values = objective_values(prob, point)?;
    let on_feasible_grid = feasible
        .iter()
        .any(|p| p.point.iter().zip(point).all(|(a, b)| (a - b).abs() <= 1e-12));
    let witness = feasible
        .iter()
        .filter(|p| strictly_dominates(&p.values, &values, cfg.dominance_tol))
        .max_by(|a, b| margin(&a.values, &values).total_cmp(&margin(&b.values, &values)))
        .cloned();
    Ok(PointVerdict {
        point: point.to_vec(),
        values,
        verdict: match witness {
            Some(witness) => ParetoVerdict::NotWeakPareto { witness },
            None => ParetoVerdict::WeakPareto,
        },
        on_feasible_grid,
        feasible_points: feasible.len(),
        grid_step: reform.x_grid.step().max(reform.y_grid.step()),
    })
}

/// Feasible grid points not strictly dominated by any other feasible grid point.
pub fn weak_pareto_set(prob: &BilevelProblem, cfg: &OracleConfig) -> Result<Vec<FeasiblePoint>> {
    let feasible = Reformulation::new(prob).feasible_grid(cfg)?;
    let keep: Vec<bool> = feasible
        .par_iter()
        .map(|p| !feasible.iter().any(|q| strictly_dominates(&q.values, &p.values, cfg.dominance_tol)))
        .collect();
    Ok(feasible.into_iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| p).collect())
}

/// `F_k - Phi_k G_k` with `Phi_k = F_k / G_k` taken at a fixed point.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarizedObjective {
    pub index: usize,
    pub ratio: BigRational,
    pub function: PiecewiseFn,
}

/// Exact value of a stored function at a rational point; falls back to the
/// shortest decimal of the float value when some operation is irrational.
pub fn exact_value(f: &PiecewiseFn, point: &[BigRational]) -> Result<BigRational> {
    if let Some(v) = f.eval_exact(point) {
        return Ok(v);
    }
    let p: Vec<f64> = point.iter().map(rational_to_f64).collect();
    let v = f.eval(&p)?;
    parse_rational(&format!("{v}")).ok_or(Error::Eval(EvalError::NonFinite))
}

/// Scalarized objectives at `point`. Requires nonzero denominators there.
pub fn scalarize(prob: &BilevelProblem, point: &[BigRational]) -> Result<Vec<ScalarizedObjective>> {
    prob.numerators
        .iter()
        .zip(&prob.denominators)
        .enumerate()
        .map(|(k, (f, g))| {
            let gv = exact_value(g, point)?;
            if gv.is_zero() {
                return Err(Error::Precondition(format!("{} vanishes at the scalarization point", g.name)));
            }
            let ratio = exact_value(f, point)? / gv;
            let function = f.affine_combination(format!("varphi{}", k + 1), -rational_to_f64(&ratio), g);
            Ok(ScalarizedObjective { index: k, ratio, function })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_includes_both_ends() {
        let v = axis_values(&Interval::new(-1.0, 1.0, 0.05));
        assert_eq!(v.len(), 41);
        assert_eq!(v[0], -1.0);
        assert_eq!(v[20], 0.0);
        assert_eq!(v[40], 1.0);
    }

    #[test]
    fn grid_order_is_lexicographic() {
        let g = Grid::new(&[Interval::new(0.0, 1.0, 1.0), Interval::new(0.0, 2.0, 1.0)]);
        assert_eq!(g.len(), 6);
        assert_eq!(g.point(0), vec![0.0, 0.0]);
        assert_eq!(g.point(1), vec![0.0, 1.0]);
        assert_eq!(g.point(3), vec![1.0, 0.0]);
    }

    #[test]
    fn signed_distance_cases() {
        assert_eq!(signed_distance_orthant(&[-1.0, -2.0]), -1.0);
        assert_eq!(signed_distance_orthant(&[0.0, -3.0]), 0.0);
        assert!((signed_distance_orthant(&[1.0, 2.0]) - 5f64.sqrt()).abs() < 1e-15);
        assert_eq!(signed_distance_orthant(&[-1.0, 1.0]), 1.0);
    }

    #[test]
    fn dominance_is_strict() {
        assert!(strictly_dominates(&[0.0, 0.0], &[1.0, 1.0], 1e-7));
        assert!(!strictly_dominates(&[0.0, 1.0], &[1.0, 1.0], 1e-7));
    }
}
