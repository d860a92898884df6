//! Convex polyhedral cones with generator and inequality representations.

pub mod dd;
pub mod tangent;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::expr::{ConeSpec, Sign};
use crate::lp::solve_nonnegative;
use crate::scalar::{dot, max_abs, Scalar};

pub use tangent::{
    star_shaped_sample, tangent_cone_sample, weak_feasible_sample, StarShaped, TangentConfig,
};

/// How a cone was constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeTag {
    OrthantProduct,
    FinitelyGenerated,
    Inequalities,
    PolarOf,
}

/// Convex polyhedral cone.
///
/// `generators` is a V-representation (nonnegative combinations);
/// `inequalities` is an H-representation `{u : <a, u> <= 0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cone<S> {
    dim: usize,
    generators: Option<Vec<Vec<S>>>,
    inequalities: Option<Vec<Vec<S>>>,
    tag: ConeTag,
}

fn unit<S: Scalar>(dim: usize, i: usize, positive: bool) -> Vec<S> {
    (0..dim)
        .map(|j| {
            if j != i {
                S::zero()
            } else if positive {
                S::one()
            } else {
                -S::one()
            }
        })
        .collect()
}

impl<S: Scalar> Cone<S> {
    /// Product of per-coordinate sign restrictions.
    pub fn orthant(signs: &[Sign]) -> Self {
        let dim = signs.len();
        let mut generators = Vec::new();
        let mut inequalities = Vec::new();
        for (i, s) in signs.iter().enumerate() {
            match s {
                Sign::Nonneg => {
                    generators.push(unit(dim, i, true));
                    inequalities.push(unit(dim, i, false));
                }
                Sign::Nonpos => {
                    generators.push(unit(dim, i, false));
                    inequalities.push(unit(dim, i, true));
                }
                Sign::Free => {
                    generators.push(unit(dim, i, true));
                    generators.push(unit(dim, i, false));
                }
            }
        }
        Self { dim, generators: Some(generators), inequalities: Some(inequalities), tag: ConeTag::OrthantProduct }
    }

    pub fn full(dim: usize) -> Self {
        Self::orthant(&vec![Sign::Free; dim])
    }

    /// The cone `{0}`.
    pub fn zero(dim: usize) -> Self {
        let inequalities = (0..dim).flat_map(|i| [unit(dim, i, true), unit(dim, i, false)]).collect();
        Self { dim, generators: Some(Vec::new()), inequalities: Some(inequalities), tag: ConeTag::FinitelyGenerated }
    }

    pub fn generated(dim: usize, generators: Vec<Vec<S>>) -> Self {
        Self { dim, generators: Some(generators), inequalities: None, tag: ConeTag::FinitelyGenerated }
    }

    pub fn from_inequalities(dim: usize, rows: Vec<Vec<S>>) -> Self {
        Self { dim, generators: None, inequalities: Some(rows), tag: ConeTag::Inequalities }
    }

    pub fn from_spec(spec: &ConeSpec, dim: usize) -> Self {
        match spec {
            ConeSpec::Full => Self::full(dim),
            ConeSpec::Orthant(signs) => Self::orthant(signs),
            ConeSpec::Generated(gens) => Self::generated(
                dim,
                gens.iter().map(|g| g.iter().map(S::from_rational).collect()).collect(),
            ),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tag(&self) -> ConeTag {
        self.tag
    }

    pub fn generators(&self) -> Option<&[Vec<S>]> {
        self.generators.as_deref()
    }

    pub fn inequalities(&self) -> Option<&[Vec<S>]> {
        self.inequalities.as_deref()
    }

    /// Membership with the scalar type's default tolerance.
    pub fn contains(&self, u: &[S]) -> Result<bool> {
        self.contains_tol(u, &S::tolerance())
    }

    /// Membership within `tol`: inequality checks when an H-representation is
    /// available, otherwise an LP over the generators.
    pub fn contains_tol(&self, u: &[S], tol: &S) -> Result<bool> {
        if u.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: u.len() });
        }
        let scale_u = max_abs(u);
        if let Some(rows) = &self.inequalities {
            return Ok(rows.iter().all(|a| {
                let bound = tol.clone() * (S::one() + max_abs(a) * scale_u.clone());
                dot(a, u) <= bound
            }));
        }
        let Some(gens) = &self.generators else {
            return Err(Error::NoRepresentation);
        };
        let bound = tol.clone() * (S::one() + scale_u);
        if gens.is_empty() {
            return Ok(u.iter().all(|x| x.abs() <= bound));
        }
        let rows: Vec<Vec<S>> = (0..self.dim).map(|i| gens.iter().map(|g| g[i].clone()).collect()).collect();
        match solve_nonnegative(gens.len(), &rows, u)? {
            Some(sol) => Ok(sol.residual <= bound || S::EXACT),
            None => Ok(false),
        }
    }

    /// Copy with a generator list, computed by double description if needed.
    pub fn with_generators(&self) -> Result<Cone<S>> {
        if self.generators.is_some() {
            return Ok(self.clone());
        }
        let rows = self.inequalities.as_ref().ok_or(Error::NoRepresentation)?;
        let gens = dd::generators_of(self.dim, rows)?;
        Ok(Cone { generators: Some(gens), ..self.clone() })
    }

    /// Copy with an inequality list, computed by double description if needed.
    pub fn with_inequalities(&self) -> Result<Cone<S>> {
        if self.inequalities.is_some() {
            return Ok(self.clone());
        }
        let gens = self.generators.as_ref().ok_or(Error::NoRepresentation)?;
        let rows = dd::generators_of(self.dim, gens)?;
        Ok(Cone { inequalities: Some(rows), ..self.clone() })
    }

    /// Polar cone `{v : <v, u> <= 0 for all u in self}`.
    ///
    /// The inequality rows of the result are the generators of `self`. A
    /// generator list is attached when `self` has inequalities or the
    /// dimension allows double description; otherwise the result is
    /// inequality-only.
    pub fn polar(&self) -> Result<Cone<S>> {
        let me = self.with_generators()?;
        let rows = me.generators.clone().unwrap_or_default();
        let gens = match &self.inequalities {
            Some(ineq) => Some(ineq.clone()),
            None if self.dim <= dd::MAX_DIM => Some(dd::generators_of(self.dim, &rows)?),
            None => None,
        };
        Ok(Cone { dim: self.dim, generators: gens, inequalities: Some(rows), tag: ConeTag::PolarOf })
    }

    /// Minkowski sum, generated by the union of generators.
    pub fn sum(&self, other: &Cone<S>) -> Result<Cone<S>> {
        let a = self.with_generators()?;
        let b = other.with_generators()?;
        let mut gens = a.generators.unwrap_or_default();
        gens.extend(b.generators.unwrap_or_default());
        Ok(Cone::generated(self.dim, gens))
    }

    /// Intersection, described by the union of inequalities.
    pub fn intersection(&self, other: &Cone<S>) -> Result<Cone<S>> {
        let a = self.with_inequalities()?;
        let b = other.with_inequalities()?;
        let mut rows = a.inequalities.unwrap_or_default();
        rows.extend(b.inequalities.unwrap_or_default());
        Ok(Cone::from_inequalities(self.dim, rows))
    }

    /// The same cone over another scalar type.
    pub fn convert<T: Scalar>(&self) -> Cone<T> {
        let conv = |vs: &Vec<Vec<S>>| -> Vec<Vec<T>> {
            vs.iter().map(|v| v.iter().map(|x| T::from_rational(&x.to_rational())).collect()).collect()
        };
        Cone {
            dim: self.dim,
            generators: self.generators.as_ref().map(conv),
            inequalities: self.inequalities.as_ref().map(conv),
            tag: self.tag,
        }
    }

    /// Whether the cone is `{0}`, judged from whichever representation is available.
    pub fn is_trivial(&self) -> Result<bool> {
        let me = self.with_generators()?;
        Ok(me.generators.unwrap_or_default().iter().all(|g| g.iter().all(Scalar::near_zero)))
    }
}

/// Polar of a finite point set.
pub fn polar_of_set<S: Scalar>(dim: usize, points: &[Vec<S>]) -> Result<Cone<S>> {
    Cone::generated(dim, points.to_vec()).polar()
}

/// Convex cone generated by a finite point set.
pub fn pos_hull<S: Scalar>(dim: usize, points: &[Vec<S>]) -> Cone<S> {
    Cone::generated(dim, points.to_vec())
}

/// `N_D(0)`: the polar of the tangent cone of `D` at the origin, which for a
/// closed convex cone is `D` itself.
pub fn normal_cone_of_d<S: Scalar>(d: &Cone<S>) -> Result<Cone<S>> {
    d.polar()
}

/// `N_D(0)` for a cone known only through a membership oracle: the polar of
/// the sampled tangent directions at the origin.
pub fn normal_cone_sampled<F>(member: &F, dim: usize, dirs: &[Vec<f64>], cfg: &TangentConfig) -> Result<Cone<f64>>
where
    F: Fn(&[f64]) -> Result<bool> + Sync,
{
    let origin = vec![0.0; dim];
    let verdicts = tangent_cone_sample(member, &origin, dirs, cfg)?;
    let accepted: Vec<Vec<f64>> = dirs.iter().zip(verdicts).filter(|(_, ok)| *ok).map(|(d, _)| d.clone()).collect();
    if accepted.is_empty() {
        return Ok(Cone::full(dim));
    }
    Cone::generated(dim, accepted).polar()
}

/// Exact cone over rationals.
pub type ExactCone = Cone<BigRational>;
