use std::fmt;

use num_rational::BigRational;

use crate::error::EvalError;

use super::ast::{BinaryOp, Expr};

/// A real-valued function of the concatenated point `(x, y)`.
pub trait ScalarFunction: Send + Sync {
    fn value(&self, point: &[f64]) -> Result<f64, EvalError>;
}

impl<T: ScalarFunction + ?Sized> ScalarFunction for &T {
    fn value(&self, point: &[f64]) -> Result<f64, EvalError> {
        (**self).value(point)
    }
}

/// Adapter turning a closure into a [`ScalarFunction`].
pub struct FnScalar<F>(pub F);

impl<F> ScalarFunction for FnScalar<F>
where
    F: Fn(&[f64]) -> Result<f64, EvalError> + Send + Sync,
{
    fn value(&self, point: &[f64]) -> Result<f64, EvalError> {
        (self.0)(point)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Ge,
    Gt,
    Le,
    Lt,
}

impl CmpOp {
    pub fn holds<T: PartialOrd>(self, a: T, b: T) -> bool {
        match self {
            CmpOp::Ge => a >= b,
            CmpOp::Gt => a > b,
            CmpOp::Le => a <= b,
            CmpOp::Lt => a < b,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
            CmpOp::Le => "<=",
            CmpOp::Lt => "<",
        }
    }
}

/// Affine comparison `lhs op rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub lhs: Expr,
    pub op: CmpOp,
    pub rhs: Expr,
}

/// Conjunction of affine comparisons; the empty conjunction is `true`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Region {
    pub conditions: Vec<Condition>,
}

impl Region {
    pub fn always() -> Self {
        Self::default()
    }

    pub fn contains(&self, point: &[f64]) -> Result<bool, EvalError> {
        for c in &self.conditions {
            if !c.op.holds(c.lhs.eval(point)?, c.rhs.eval(point)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Exact membership of a rational point; `None` if a guard has no exact value.
    pub fn contains_exact(&self, point: &[BigRational]) -> Option<bool> {
        for c in &self.conditions {
            if !c.op.holds(c.lhs.eval_exact(point)?, c.rhs.eval_exact(point)?) {
                return Some(false);
            }
        }
        Some(true)
    }

    pub fn and(&self, other: &Region) -> Region {
        let mut conditions = self.conditions.clone();
        conditions.extend(other.conditions.iter().cloned());
        Region { conditions }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub region: Region,
    pub expr: Expr,
}

/// Ordered region-guarded branches; the first matching region wins.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseFn {
    pub name: String,
    pub branches: Vec<Branch>,
}

impl PiecewiseFn {
    pub fn single(name: impl Into<String>, expr: Expr) -> Self {
        Self {
            name: name.into(),
            branches: vec![Branch { region: Region::always(), expr }],
        }
    }

    /// Index of the first branch whose region contains `point`.
    pub fn select(&self, point: &[f64]) -> Result<usize, EvalError> {
        for (i, b) in self.branches.iter().enumerate() {
            if b.region.contains(point)? {
                return Ok(i);
            }
        }
        Err(EvalError::NoRegionMatches {
            function: self.name.clone(),
            point: point.to_vec(),
        })
    }

    pub fn eval(&self, point: &[f64]) -> Result<f64, EvalError> {
        let i = self.select(point)?;
        self.branches[i].expr.eval(point)
    }

    /// Exact value at a rational point, when every operation on the selected
    /// branch has a rational result.
    pub fn eval_exact(&self, point: &[BigRational]) -> Option<BigRational> {
        for b in &self.branches {
            if b.region.contains_exact(point)? {
                return b.expr.eval_exact(point);
            }
        }
        None
    }

    pub fn negated(&self, name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            branches: self
                .branches
                .iter()
                .map(|b| Branch { region: b.region.clone(), expr: Expr::neg(b.expr.clone()) })
                .collect(),
        }
    }

    /// `self + coeff * other` on the lexicographic product of the two region lists.
    ///
    /// Pair `(i, j)` is listed before `(i', j')` when `i < i'` or `i == i'` and
    /// `j < j'`, so the first matching pair is exactly the pair of first
    /// matches and branch selection agrees with evaluating the two functions
    /// separately.
    pub fn affine_combination(&self, name: impl Into<String>, coeff: f64, other: &PiecewiseFn) -> Self {
        let mut branches = Vec::with_capacity(self.branches.len() * other.branches.len());
        for a in &self.branches {
            for b in &other.branches {
                let scaled = Expr::binary(BinaryOp::Mul, Expr::constant(coeff), b.expr.clone());
                branches.push(Branch {
                    region: a.region.and(&b.region),
                    expr: Expr::binary(BinaryOp::Add, a.expr.clone(), scaled),
                });
            }
        }
        Self { name: name.into(), branches }
    }
}

impl ScalarFunction for PiecewiseFn {
    fn value(&self, point: &[f64]) -> Result<f64, EvalError> {
        self.eval(point)
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.op.symbol(), self.rhs)
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.conditions.is_empty() {
            return write!(f, "true");
        }
        for (i, c) in self.conditions.iter().enumerate() {
            if i > 0 {
                write!(f, " && ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Display for PiecewiseFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "piecewise{{ ")?;
        for (i, b) in self.branches.iter().enumerate() {
            if i > 0 {
                write!(f, " ; ")?;
            }
            write!(f, "{} : {}", b.region, b.expr)?;
        }
        write!(f, " }}")
    }
}
