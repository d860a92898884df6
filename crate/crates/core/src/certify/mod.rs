//! Stationarity certificates: active sets, the zero-membership core,
//! certificate search and verification, constraint-qualification and
//! generalized-convexity checks.

pub mod acq;
pub mod convexity;
pub mod sufficiency;

use num_rational::BigRational;

use crate::cone::{normal_cone_of_d, Cone};
use crate::error::{Error, Result};
use crate::expr::{fmt_vector, BilevelProblem, ConeSpec, Target};
use crate::lp::solve_nonnegative;
use crate::scalar::{parse_rational, rational_to_f64, Scalar};
use crate::single_level::{exact_value, scalarize, Reformulation};

pub use acq::{check_acq, AcqConfig, AcqReport};
pub use convexity::{
    check_generalized_convexity, convexity_suite, ConvexityConfig, ConvexityKind, ConvexityReport, ConvexityViolation,
};
pub use sufficiency::{sufficiency_verdict, OracleCheck, SufficiencyClaim, SufficiencyReport};

/// Outcome of a sampling-based hypothesis check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampled {
    Supported,
    Violated,
}

impl Sampled {
    pub fn label(self) -> &'static str {
        match self {
            Sampled::Supported => "SUPPORTED",
            Sampled::Violated => "VIOLATED",
        }
    }
}

/// Partition of the constraint indices (0-based) by activity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActiveSets {
    pub j0: Vec<usize>,
    pub j_inactive: Vec<usize>,
    pub s0: Vec<usize>,
    pub s_inactive: Vec<usize>,
}

/// Activity of the upper (`H`) and lower (`phi`) constraints at `point`.
pub fn active_sets(prob: &BilevelProblem, point: &[f64], tol: f64) -> Result<ActiveSets> {
    let split = |fs: &[crate::expr::PiecewiseFn]| -> Result<(Vec<usize>, Vec<usize>)> {
        let mut active = Vec::new();
        let mut inactive = Vec::new();
        for (i, f) in fs.iter().enumerate() {
            if f.eval(point)?.abs() <= tol {
                active.push(i);
            } else {
                inactive.push(i);
            }
        }
        Ok((active, inactive))
    };
    let (j0, j_inactive) = split(&prob.upper)?;
    let (s0, s_inactive) = split(&prob.lower)?;
    Ok(ActiveSets { j0, j_inactive, s0, s_inactive })
}

/// Which constraint carriers enter the inclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    /// Active constraints only, each carrier required; inactive multipliers
    /// must vanish (primal stationarity).
    Active,
    /// Every declared constraint carrier; multipliers must satisfy the sign
    /// conditions `tau_j H_j >= 0` (dual feasibility).
    Declared,
}

/// A carrier entering the inclusion.
#[derive(Debug, Clone, PartialEq)]
pub struct Term<S> {
    pub target: Target,
    pub carrier: Vec<Vec<S>>,
}

impl<S: Scalar> Term<S> {
    fn convert<T: Scalar>(&self) -> Term<T> {
        Term {
            target: self.target,
            carrier: self.carrier.iter().map(|p| p.iter().map(|x| T::from_rational(&x.to_rational())).collect()).collect(),
        }
    }
}

/// The ingredient sets of the stationarity inclusion at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryData<S> {
    pub point: Vec<BigRational>,
    pub dim: usize,
    pub scope: Scope,
    /// Carriers of the scalarized objectives, one per objective.
    pub objectives: Vec<Term<S>>,
    /// `(j, carrier)` for the upper constraints that take part.
    pub upper: Vec<(usize, Term<S>)>,
    /// `(s, carrier)` for the lower constraints that take part.
    pub lower: Vec<(usize, Term<S>)>,
    pub psi: Option<Term<S>>,
    /// Generators of `N_D(0)`.
    pub normal_cone: Vec<Vec<S>>,
    /// `F_k / G_k` at the point.
    pub ratios: Vec<S>,
    pub upper_values: Vec<S>,
    pub lower_values: Vec<S>,
    pub psi_value: S,
}

fn conv_vec<S: Scalar, T: Scalar>(v: &[S]) -> Vec<T> {
    v.iter().map(|x| T::from_rational(&x.to_rational())).collect()
}

impl<S: Scalar> StationaryData<S> {
    pub fn convert<T: Scalar>(&self) -> StationaryData<T> {
        StationaryData {
            point: self.point.clone(),
            dim: self.dim,
            scope: self.scope,
            objectives: self.objectives.iter().map(Term::convert).collect(),
            upper: self.upper.iter().map(|(j, t)| (*j, t.convert())).collect(),
            lower: self.lower.iter().map(|(s, t)| (*s, t.convert())).collect(),
            psi: self.psi.as_ref().map(Term::convert),
            normal_cone: self.normal_cone.iter().map(|g| conv_vec(g)).collect(),
            ratios: conv_vec(&self.ratios),
            upper_values: conv_vec(&self.upper_values),
            lower_values: conv_vec(&self.lower_values),
            psi_value: T::from_rational(&self.psi_value.to_rational()),
        }
    }

    /// Every carrier multiplied by `factor`; the cone is left alone.
    pub fn scale_carriers(&self, factor: &S) -> Self {
        let scale = |t: &Term<S>| Term {
            target: t.target,
            carrier: t.carrier.iter().map(|p| p.iter().map(|x| x.clone() * factor.clone()).collect()).collect(),
        };
        Self {
            objectives: self.objectives.iter().map(scale).collect(),
            upper: self.upper.iter().map(|(j, t)| (*j, scale(t))).collect(),
            lower: self.lower.iter().map(|(s, t)| (*s, scale(t))).collect(),
            psi: self.psi.as_ref().map(scale),
            ..self.clone()
        }
    }

    /// The same data with `N_D(0) = {0}`.
    pub fn without_cone(&self) -> Self {
        Self { normal_cone: Vec::new(), ..self.clone() }
    }

    fn terms(&self) -> impl Iterator<Item = &Term<S>> {
        self.objectives
            .iter()
            .chain(self.upper.iter().map(|(_, t)| t))
            .chain(self.lower.iter().map(|(_, t)| t))
            .chain(self.psi.iter())
    }

    fn term(&self, target: Target) -> Option<&Term<S>> {
        self.terms().find(|t| t.target == target)
    }
}

fn describe(point: &[BigRational]) -> String {
    fmt_vector(point)
}

fn decl_carrier(prob: &BilevelProblem, target: Target, point: &[BigRational]) -> Option<Vec<Vec<BigRational>>> {
    prob.convexificator(target, point).map(|d| d.carrier.clone())
}

/// Carrier of `F_k - Phi_k G_k`: a declared `varphi` carrier, or the
/// Minkowski sum `dF_k + Phi_k d(-G_k)` of the declared pieces.
fn objective_carrier(
    prob: &BilevelProblem,
    k: usize,
    ratio: &BigRational,
    point: &[BigRational],
) -> Result<Vec<Vec<BigRational>>> {
    if let Some(c) = decl_carrier(prob, Target::Varphi(k), point) {
        return Ok(c);
    }
    let (Some(f), Some(g)) = (
        decl_carrier(prob, Target::F(k), point),
        decl_carrier(prob, Target::NegG(k), point),
    ) else {
        return Err(Error::MissingDeclaration(format!(
            "convexificator for varphi{0} (or for both F{0} and negG{0}) at {1}",
            k + 1,
            describe(point)
        )));
    };
    let mut out: Vec<Vec<BigRational>> = Vec::new();
    for a in &f {
        for b in &g {
            let v: Vec<BigRational> = a.iter().zip(b).map(|(x, y)| x + ratio * y).collect();
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    Ok(out)
}

/// Generators of `N_D(0)` for the declared cone; an undeclared cone is the
/// whole space.
pub fn normal_cone_generators(prob: &BilevelProblem) -> Result<Vec<Vec<BigRational>>> {
    let spec = prob.cone.clone().unwrap_or(ConeSpec::Full);
    let d: Cone<BigRational> = Cone::from_spec(&spec, prob.dim());
    let n = normal_cone_of_d(&d)?.with_generators()?;
    Ok(n.generators().unwrap_or_default().to_vec())
}

/// `Psi` at a rational point, rationalized from its grid value.
pub fn psi_value(prob: &BilevelProblem, point: &[BigRational]) -> Result<BigRational> {
    let p: Vec<f64> = point.iter().map(rational_to_f64).collect();
    let v = Reformulation::new(prob).capital_psi_at(&p)? + 0.0;
    parse_rational(&format!("{v}")).ok_or_else(|| Error::Anomaly(format!("Psi is not finite at {}", describe(point))))
}

/// Collects the carriers, constraint values and `N_D(0)` generators at `point`.
pub fn assemble(prob: &BilevelProblem, point: &[BigRational], scope: Scope) -> Result<StationaryData<BigRational>> {
    if point.len() != prob.dim() {
        return Err(Error::DimensionMismatch { expected: prob.dim(), found: point.len() });
    }
    let scalarized = scalarize(prob, point)?;
    let ratios: Vec<BigRational> = scalarized.iter().map(|s| s.ratio.clone()).collect();
    let objectives = ratios
        .iter()
        .enumerate()
        .map(|(k, r)| Ok(Term { target: Target::Varphi(k), carrier: objective_carrier(prob, k, r, point)? }))
        .collect::<Result<Vec<_>>>()?;

    let upper_values = prob.upper.iter().map(|h| exact_value(h, point)).collect::<Result<Vec<_>>>()?;
    let lower_values = prob.lower.iter().map(|h| exact_value(h, point)).collect::<Result<Vec<_>>>()?;
    let psi_value = psi_value(prob, point)?;

    let pick = |values: &[BigRational], make: fn(usize) -> Target| -> Result<Vec<(usize, Term<BigRational>)>> {
        let mut out = Vec::new();
        for (i, v) in values.iter().enumerate() {
            let target = make(i);
            let carrier = decl_carrier(prob, target, point);
            match (scope, carrier) {
                (Scope::Active, Some(c)) if num_traits::Zero::is_zero(v) => out.push((i, Term { target, carrier: c })),
                (Scope::Active, None) if num_traits::Zero::is_zero(v) => {
                    return Err(Error::MissingDeclaration(format!(
                        "convexificator for active constraint {target} at {}",
                        describe(point)
                    )))
                }
                (Scope::Declared, Some(c)) => out.push((i, Term { target, carrier: c })),
                _ => {}
            }
        }
        Ok(out)
    };
    let upper = pick(&upper_values, Target::H)?;
    let lower = pick(&lower_values, Target::Phi)?;
    let psi = match decl_carrier(prob, Target::Psi, point) {
        Some(c) => Some(Term { target: Target::Psi, carrier: c }),
        None if scope == Scope::Active => {
            return Err(Error::MissingDeclaration(format!("convexificator for Psi at {}", describe(point))))
        }
        None => None,
    };

    let data = StationaryData {
        point: point.to_vec(),
        dim: prob.dim(),
        scope,
        objectives,
        upper,
        lower,
        psi,
        normal_cone: normal_cone_generators(prob)?,
        ratios,
        upper_values,
        lower_values,
        psi_value,
    };
    for t in data.terms() {
        if let Some(p) = t.carrier.iter().find(|p| p.len() != data.dim) {
            return Err(Error::DimensionMismatch { expected: data.dim, found: p.len() });
        }
    }
    Ok(data)
}

/// Convex weights per part and cone coefficients with
/// `sum_i conv-combination_i + sum_g c_g g = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroWitness<S> {
    pub weights: Vec<Vec<S>>,
    pub cone: Vec<S>,
    pub residual: S,
}

/// Decides `0 in sum_i conv(parts_i) + pos(cone_gens)`.
pub fn membership_zero<S: Scalar>(parts: &[Vec<Vec<S>>], cone_gens: &[Vec<S>]) -> Result<Option<ZeroWitness<S>>> {
    let Some(dim) = parts.iter().flatten().map(Vec::len).next() else {
        return Err(Error::Precondition("membership test needs at least one nonempty part".into()));
    };
    if parts.iter().any(Vec::is_empty) {
        return Err(Error::Precondition("every part must be nonempty".into()));
    }
    let mut columns: Vec<Vec<S>> = Vec::new();
    for (i, part) in parts.iter().enumerate() {
        for p in part {
            let mut col = p.clone();
            col.extend((0..parts.len()).map(|r| if r == i { S::one() } else { S::zero() }));
            columns.push(col);
        }
    }
    for g in cone_gens {
        let mut col = g.clone();
        col.extend((0..parts.len()).map(|_| S::zero()));
        columns.push(col);
    }
    let mut rhs = vec![S::zero(); dim];
    rhs.extend((0..parts.len()).map(|_| S::one()));
    let Some(sol) = solve_columns(&columns, &rhs)? else {
        return Ok(None);
    };
    let mut it = sol.values.into_iter();
    let weights = parts.iter().map(|p| it.by_ref().take(p.len()).collect()).collect();
    let cone = it.collect();
    Ok(Some(ZeroWitness { weights, cone, residual: sol.residual }))
}

/// Solves `[columns] x = rhs, x >= 0`, retrying in exact arithmetic when a
/// float solve fails numerically.
fn solve_columns<S: Scalar>(columns: &[Vec<S>], rhs: &[S]) -> Result<Option<crate::lp::NonnegSolution<S>>> {
    let rows: Vec<Vec<S>> = (0..rhs.len()).map(|r| columns.iter().map(|c| c[r].clone()).collect()).collect();
    match solve_nonnegative(columns.len(), &rows, rhs) {
        Ok(s) => Ok(s),
        Err(_) if !S::EXACT => {
            let qrows: Vec<Vec<BigRational>> = rows.iter().map(|r| conv_vec(r)).collect();
            let qrhs: Vec<BigRational> = conv_vec(rhs);
            let sol = solve_nonnegative(columns.len(), &qrows, &qrhs)?;
            Ok(sol.map(|s| crate::lp::NonnegSolution { values: conv_vec(&s.values), residual: S::zero() }))
        }
        Err(e) => Err(e.into()),
    }
}

/// Multipliers, carrier weights and normal-cone element of the inclusion.
///
/// Multiplier vectors are indexed by the problem's constraint numbering, so
/// `tau` has one entry per upper constraint whether or not it takes part.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate<S> {
    pub point: Vec<BigRational>,
    pub xi: Vec<S>,
    pub tau: Vec<S>,
    pub rho: Vec<S>,
    pub eta: S,
    /// Convex weights per carrier; may be omitted for single-point carriers.
    pub weights: Vec<(Target, Vec<S>)>,
    pub z: Vec<S>,
}

impl<S: Scalar> Certificate<S> {
    pub fn convert<T: Scalar>(&self) -> Certificate<T> {
        Certificate {
            point: self.point.clone(),
            xi: conv_vec(&self.xi),
            tau: conv_vec(&self.tau),
            rho: conv_vec(&self.rho),
            eta: T::from_rational(&self.eta.to_rational()),
            weights: self.weights.iter().map(|(t, w)| (*t, conv_vec(w))).collect(),
            z: conv_vec(&self.z),
        }
    }

    /// All multipliers in the order `xi, tau, rho, eta`.
    pub fn multipliers(&self) -> Vec<S> {
        let mut v = self.xi.clone();
        v.extend(self.tau.iter().cloned());
        v.extend(self.rho.iter().cloned());
        v.push(self.eta.clone());
        v
    }

    fn weights_for(&self, target: Target) -> Option<&[S]> {
        self.weights.iter().find(|(t, _)| *t == target).map(|(_, w)| w.as_slice())
    }
}

/// Searches multipliers with `sum xi = 1` making the inclusion hold.
/// `Ok(None)` means the linear system is infeasible.
pub fn find_certificate<S: Scalar>(
    data: &StationaryData<S>,
    upper_count: usize,
    lower_count: usize,
) -> Result<Option<Certificate<S>>> {
    let dim = data.dim;
    let mut columns: Vec<Vec<S>> = Vec::new();
    let terms: Vec<&Term<S>> = data.terms().collect();
    for (i, t) in terms.iter().enumerate() {
        for p in &t.carrier {
            let mut col = p.clone();
            col.push(if i < data.objectives.len() { S::one() } else { S::zero() });
            columns.push(col);
        }
    }
    for g in &data.normal_cone {
        let mut col = g.clone();
        col.push(S::zero());
        columns.push(col);
    }
    let mut rhs = vec![S::zero(); dim];
    rhs.push(S::one());
    let Some(sol) = solve_columns(&columns, &rhs)? else {
        return Ok(None);
    };

    let mut values = sol.values.into_iter();
    let mut xi = vec![S::zero(); data.objectives.len()];
    let mut tau = vec![S::zero(); upper_count];
    let mut rho = vec![S::zero(); lower_count];
    let mut eta = S::zero();
    let mut weights = Vec::new();
    for t in &terms {
        let ys: Vec<S> = values.by_ref().take(t.carrier.len()).collect();
        let total = ys.iter().cloned().fold(S::zero(), |a, b| a + b);
        let w: Vec<S> = if total.is_zero() {
            (0..ys.len()).map(|m| if m == 0 { S::one() } else { S::zero() }).collect()
        } else {
            ys.iter().map(|y| y.clone() / total.clone()).collect()
        };
        match t.target {
            Target::Varphi(k) => xi[k] = total,
            Target::H(j) => tau[j] = total,
            Target::Phi(s) => rho[s] = total,
            Target::Psi => eta = total,
            _ => unreachable!("stationary data holds only varphi, H, phi and Psi terms"),
        }
        weights.push((t.target, w));
    }
    let cone: Vec<S> = values.collect();
    let mut z = vec![S::zero(); dim];
    for (c, g) in cone.iter().zip(&data.normal_cone) {
        for (zi, gi) in z.iter_mut().zip(g) {
            *zi = zi.clone() + c.clone() * gi.clone();
        }
    }
    Ok(Some(Certificate { point: data.point.clone(), xi, tau, rho, eta, weights, z }))
}

/// Result of re-checking a certificate against stationary data.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport<S> {
    /// `sum of scaled selected elements + z`.
    pub residual: Vec<S>,
    /// `(target, multiplier * constraint value)`.
    pub complementarity: Vec<(Target, S)>,
    /// Sign, normalization, cone and carrier problems.
    pub issues: Vec<String>,
    pub tolerance: S,
}

impl<S: Scalar> VerifyReport<S> {
    pub fn residual_norm(&self) -> S {
        crate::scalar::max_abs(&self.residual)
    }

    pub fn passed(&self) -> bool {
        self.issues.is_empty() && self.residual_norm() <= self.tolerance
    }
}

/// Recomputes the inclusion for `cert` and reports every failed condition.
pub fn verify_certificate<S: Scalar>(data: &StationaryData<S>, cert: &Certificate<S>) -> Result<VerifyReport<S>> {
    let dim = data.dim;
    if cert.z.len() != dim {
        return Err(Error::CertificateMismatch(format!("z has {} entries, expected {dim}", cert.z.len())));
    }
    if cert.xi.len() != data.objectives.len()
        || cert.tau.len() != data.upper_values.len()
        || cert.rho.len() != data.lower_values.len()
    {
        return Err(Error::CertificateMismatch(format!(
            "multiplier counts ({}, {}, {}) do not match the problem ({}, {}, {})",
            cert.xi.len(),
            cert.tau.len(),
            cert.rho.len(),
            data.objectives.len(),
            data.upper_values.len(),
            data.lower_values.len()
        )));
    }
    let tol = S::tolerance();
    let mut issues = Vec::new();

    let named = |prefix: &str, v: &[S]| -> Vec<(String, S)> {
        v.iter().enumerate().map(|(i, x)| (format!("{prefix}{}", i + 1), x.clone())).collect()
    };
    let mut all = named("xi", &cert.xi);
    all.extend(named("tau", &cert.tau));
    all.extend(named("rho", &cert.rho));
    all.push(("eta".into(), cert.eta.clone()));
    for (name, v) in &all {
        if *v < -tol.clone() {
            issues.push(format!("{name} = {v} is negative"));
        }
    }
    let xi_sum = cert.xi.iter().cloned().fold(S::zero(), |a, b| a + b);
    if xi_sum <= tol {
        issues.push("xi must be nonzero (sum of xi is not positive)".into());
    }

    let mut residual = cert.z.clone();
    let mut add_term = |target: Target, mult: &S, issues: &mut Vec<String>| {
        let Some(term) = data.term(target) else {
            if !mult.near_zero() {
                issues.push(format!("multiplier of {target} is {mult} but no carrier is available at this point"));
            }
            return;
        };
        let w: Vec<S> = match cert.weights_for(target) {
            Some(w) => w.to_vec(),
            None if term.carrier.len() == 1 => vec![S::one()],
            None => {
                issues.push(format!("weights for {target} are required (carrier has {} points)", term.carrier.len()));
                return;
            }
        };
        if w.len() != term.carrier.len() {
            issues.push(format!("{target}: {} weights for {} carrier points", w.len(), term.carrier.len()));
            return;
        }
        let wsum = w.iter().cloned().fold(S::zero(), |a, b| a + b);
        if w.iter().any(|x| *x < -tol.clone()) || (wsum - S::one()).abs() > tol {
            issues.push(format!("{target}: weights are not a convex combination"));
        }
        for (wm, p) in w.iter().zip(&term.carrier) {
            for (r, pi) in residual.iter_mut().zip(p) {
                *r = r.clone() + mult.clone() * wm.clone() * pi.clone();
            }
        }
    };
    for (k, x) in cert.xi.iter().enumerate() {
        add_term(Target::Varphi(k), x, &mut issues);
    }
    for (j, x) in cert.tau.iter().enumerate() {
        add_term(Target::H(j), x, &mut issues);
    }
    for (s, x) in cert.rho.iter().enumerate() {
        add_term(Target::Phi(s), x, &mut issues);
    }
    add_term(Target::Psi, &cert.eta, &mut issues);

    let ncone = Cone::generated(dim, data.normal_cone.clone());
    if !ncone.contains_tol(&cert.z, &tol)? {
        issues.push(format!("z = {} is not in N_D(0)", fmt_s(&cert.z)));
    }

    let mut complementarity = Vec::new();
    for (j, (t, h)) in cert.tau.iter().zip(&data.upper_values).enumerate() {
        complementarity.push((Target::H(j), t.clone() * h.clone()));
    }
    for (s, (r, p)) in cert.rho.iter().zip(&data.lower_values).enumerate() {
        complementarity.push((Target::Phi(s), r.clone() * p.clone()));
    }
    complementarity.push((Target::Psi, cert.eta.clone() * data.psi_value.clone()));
    for (target, v) in &complementarity {
        match data.scope {
            Scope::Active if v.abs() > tol => {
                issues.push(format!("complementarity fails for {target}: multiplier times value = {v}"))
            }
            Scope::Declared if *v < -tol.clone() => {
                issues.push(format!("sign condition fails for {target}: multiplier times value = {v} < 0"))
            }
            _ => {}
        }
    }

    Ok(VerifyReport { residual, complementarity, issues, tolerance: tol })
}

fn fmt_s<S: Scalar>(v: &[S]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn qv(v: &[(i64, i64)]) -> Vec<BigRational> {
        v.iter().map(|&(n, d)| q(n, d)).collect()
    }

    #[test]
    fn zero_membership_cases() {
        let w = membership_zero(&[vec![vec![1.0, 1.0]]], &[vec![-1.0, -1.0]]).unwrap().unwrap();
        assert_eq!(w.cone, vec![1.0]);
        assert!(membership_zero(&[vec![vec![1.0, 0.0]]], &[vec![0.0, -1.0]]).unwrap().is_none());
        let w = membership_zero::<BigRational>(&[vec![qv(&[(1, 1), (0, 1)]), qv(&[(-1, 1), (0, 1)])]], &[])
            .unwrap()
            .unwrap();
        assert_eq!(w.weights[0], vec![q(1, 2), q(1, 2)]);
    }

    fn toy(carrier: Vec<Vec<BigRational>>, cone: Vec<Vec<BigRational>>) -> StationaryData<BigRational> {
        StationaryData {
            point: qv(&[(0, 1), (0, 1)]),
            dim: 2,
            scope: Scope::Active,
            objectives: vec![Term { target: Target::Varphi(0), carrier }],
            upper: vec![],
            lower: vec![],
            psi: None,
            normal_cone: cone,
            ratios: vec![q(1, 1)],
            upper_values: vec![],
            lower_values: vec![],
            psi_value: q(0, 1),
        }
    }

    #[test]
    fn single_carrier_without_cone_is_infeasible() {
        let d = toy(vec![qv(&[(1, 1), (0, 1)])], vec![]);
        assert!(find_certificate(&d, 0, 0).unwrap().is_none());
    }

    #[test]
    fn found_certificate_verifies_exactly() {
        let d = toy(vec![qv(&[(1, 1), (2, 1)]), qv(&[(3, 1), (-1, 1)])], vec![qv(&[(-1, 1), (0, 1)])]);
        let c = find_certificate(&d, 0, 0).unwrap().unwrap();
        let r = verify_certificate(&d, &c).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.residual.iter().all(num_traits::Zero::is_zero));
    }

    #[test]
    fn zero_xi_is_rejected() {
        let d = toy(vec![qv(&[(0, 1), (0, 1)])], vec![]);
        let c = Certificate {
            point: d.point.clone(),
            xi: vec![q(0, 1)],
            tau: vec![],
            rho: vec![],
            eta: q(0, 1),
            weights: vec![],
            z: qv(&[(0, 1), (0, 1)]),
        };
        let r = verify_certificate(&d, &c).unwrap();
        assert!(!r.passed());
        assert!(r.issues[0].contains("xi must be nonzero"));
    }
}
