use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::EvalError;
use crate::scalar::parse_rational;

/// Which variable block a reference points into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Block {
    X,
    Y,
}

/// Reference to one coordinate of `(x, y)`.
///
/// `index` is 0-based within its block; `slot` is the position in the
/// concatenated point vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Var {
    pub block: Block,
    pub index: usize,
    pub slot: usize,
    /// Whether the block has a single coordinate (printed without subscript).
    pub scalar_block: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Abs,
    Sqrt,
    Cbrt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

fn fold_exact(
    args: &[Expr],
    point: Option<&[BigRational]>,
    pick: fn(BigRational, BigRational) -> BigRational,
) -> Option<BigRational> {
    let mut it = args.iter();
    let mut acc = it.next()?.fold(point)?;
    for a in it {
        acc = pick(acc, a.fold(point)?);
    }
    Some(acc)
}

/// Real `n`-th root of `q` when it is rational; odd roots keep the sign.
fn exact_root(q: &BigRational, n: u64) -> Option<BigRational> {
    if n == 1 {
        return Some(q.clone());
    }
    if q.is_negative() {
        return if n % 2 == 1 { exact_root(&-q, n).map(|r| -r) } else { None };
    }
    let n32 = u32::try_from(n).ok()?;
    let num = q.numer().nth_root(n32);
    let den = q.denom().nth_root(n32);
    (num.pow(n32) == *q.numer() && den.pow(n32) == *q.denom()).then(|| BigRational::new(num, den))
}

/// Reduced rational exponent `numer / denom` with `denom > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exponent {
    pub numer: i64,
    pub denom: u64,
}

impl Exponent {
    pub fn from_rational(q: &BigRational) -> Option<Self> {
        let numer = q.numer().to_i64()?;
        let denom = q.denom().to_u64()?;
        (denom > 0).then_some(Self { numer, denom })
    }

    pub fn integer(n: i64) -> Self {
        Self { numer: n, denom: 1 }
    }

    /// `base^(numer/denom)` composed from a real root and an integer power.
    ///
    /// Odd roots are sign-aware; an even root of a negative base is a domain
    /// error.
    pub fn apply(&self, base: f64) -> Result<f64, EvalError> {
        let root = match self.denom {
            1 => base,
            2 => {
                if base < 0.0 {
                    return Err(EvalError::Domain { op: "even root", value: base });
                }
                base.sqrt()
            }
            3 => base.cbrt(),
            d if d % 2 == 1 => base.signum() * base.abs().powf(1.0 / d as f64),
            d => {
                if base < 0.0 {
                    return Err(EvalError::Domain { op: "even root", value: base });
                }
                base.powf(1.0 / d as f64)
            }
        };
        if self.numer < 0 && root == 0.0 {
            return Err(EvalError::Domain { op: "negative power", value: base });
        }
        let value = match i32::try_from(self.numer) {
            Ok(n) => root.powi(n),
            Err(_) => root.powf(self.numer as f64),
        };
        Ok(value)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom == 1 {
            if self.numer < 0 {
                write!(f, "({})", self.numer)
            } else {
                write!(f, "{}", self.numer)
            }
        } else {
            write!(f, "({}/{})", self.numer, self.denom)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(Var),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Exponent),
    Min(Vec<Expr>),
    Max(Vec<Expr>),
}

impl Expr {
    pub fn constant(c: f64) -> Self {
        Expr::Const(c)
    }

    pub fn binary(op: BinaryOp, lhs: Expr, rhs: Expr) -> Self {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn neg(e: Expr) -> Self {
        Expr::Unary(UnaryOp::Neg, Box::new(e))
    }

    pub fn eval(&self, point: &[f64]) -> Result<f64, EvalError> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Var(v) => point[v.slot],
            Expr::Unary(op, e) => {
                let a = e.eval(point)?;
                match op {
                    UnaryOp::Neg => -a,
                    UnaryOp::Abs => a.abs(),
                    UnaryOp::Sqrt => {
                        if a < 0.0 {
                            return Err(EvalError::Domain { op: "sqrt", value: a });
                        }
                        a.sqrt()
                    }
                    UnaryOp::Cbrt => a.cbrt(),
                }
            }
            Expr::Binary(op, l, r) => {
                let a = l.eval(point)?;
                let b = r.eval(point)?;
                match op {
                    BinaryOp::Add => a + b,
                    BinaryOp::Sub => a - b,
                    BinaryOp::Mul => a * b,
                    BinaryOp::Div => {
                        if b == 0.0 {
                            return Err(EvalError::Domain { op: "division", value: a });
                        }
                        a / b
                    }
                }
            }
            Expr::Pow(base, exp) => exp.apply(base.eval(point)?)?,
            Expr::Min(args) => fold_args(args, point, f64::min)?,
            Expr::Max(args) => fold_args(args, point, f64::max)?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite)
        }
    }

    /// Exact value when the expression is built from constants only.
    pub fn const_fold(&self) -> Option<BigRational> {
        self.fold(None)
    }

    /// Exact value at a rational point. `None` when some operation has no
    /// rational result (an irrational root, for instance) or is undefined.
    pub fn eval_exact(&self, point: &[BigRational]) -> Option<BigRational> {
        self.fold(Some(point))
    }

    fn fold(&self, point: Option<&[BigRational]>) -> Option<BigRational> {
        match self {
            Expr::Const(c) => parse_rational(&format!("{c}")),
            Expr::Var(v) => point.and_then(|p| p.get(v.slot).cloned()),
            Expr::Unary(op, e) => {
                let a = e.fold(point)?;
                match op {
                    UnaryOp::Neg => Some(-a),
                    UnaryOp::Abs => Some(a.abs()),
                    UnaryOp::Sqrt => exact_root(&a, 2),
                    UnaryOp::Cbrt => exact_root(&a, 3),
                }
            }
            Expr::Binary(op, l, r) => {
                let a = l.fold(point)?;
                let b = r.fold(point)?;
                match op {
                    BinaryOp::Add => Some(a + b),
                    BinaryOp::Sub => Some(a - b),
                    BinaryOp::Mul => Some(a * b),
                    BinaryOp::Div => (!b.is_zero()).then(|| a / b),
                }
            }
            Expr::Pow(base, exp) => {
                let b = exact_root(&base.fold(point)?, exp.denom)?;
                if exp.numer < 0 && b.is_zero() {
                    return None;
                }
                let mut acc = BigRational::one();
                for _ in 0..exp.numer.unsigned_abs() {
                    acc *= &b;
                }
                Some(if exp.numer < 0 { acc.recip() } else { acc })
            }
            Expr::Min(args) => fold_exact(args, point, |a, b| if b < a { b } else { a }),
            Expr::Max(args) => fold_exact(args, point, |a, b| if b > a { b } else { a }),
        }
    }

    /// Whether the expression is affine in the variables.
    pub fn is_affine(&self) -> bool {
        matches!(self.degree(), Some(d) if d <= 1)
    }

    // Polynomial degree bound for the affine check; `None` when non-polynomial.
    fn degree(&self) -> Option<u32> {
        match self {
            Expr::Const(_) => Some(0),
            Expr::Var(_) => Some(1),
            Expr::Unary(UnaryOp::Neg, e) => e.degree(),
            Expr::Unary(..) => {
                if self.const_fold().is_some() {
                    Some(0)
                } else {
                    None
                }
            }
            Expr::Binary(op, l, r) => {
                let a = l.degree()?;
                let b = r.degree()?;
                match op {
                    BinaryOp::Add | BinaryOp::Sub => Some(a.max(b)),
                    BinaryOp::Mul => Some(a + b),
                    BinaryOp::Div => (b == 0).then_some(a),
                }
            }
            Expr::Pow(base, exp) => {
                let d = base.degree()?;
                if d == 0 {
                    Some(0)
                } else if exp.denom == 1 && exp.numer >= 0 {
                    Some(d * exp.numer as u32)
                } else {
                    None
                }
            }
            Expr::Min(args) | Expr::Max(args) => {
                if args.iter().all(|a| a.degree() == Some(0)) {
                    Some(0)
                } else {
                    None
                }
            }
        }
    }
}

fn fold_args(args: &[Expr], point: &[f64], f: fn(f64, f64) -> f64) -> Result<f64, EvalError> {
    let mut it = args.iter();
    let first = it.next().map(|e| e.eval(point)).transpose()?.unwrap_or(f64::NAN);
    it.try_fold(first, |acc, e| Ok(f(acc, e.eval(point)?)))
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.block {
            Block::X => "x",
            Block::Y => "y",
        };
        if self.scalar_block {
            write!(f, "{name}")
        } else {
            write!(f, "{name}[{}]", self.index + 1)
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) => {
                write!(f, "({c})")
            }
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Unary(UnaryOp::Neg, e) => write!(f, "(-{e})"),
            Expr::Unary(UnaryOp::Abs, e) => write!(f, "abs({e})"),
            Expr::Unary(UnaryOp::Sqrt, e) => write!(f, "sqrt({e})"),
            Expr::Unary(UnaryOp::Cbrt, e) => write!(f, "cbrt({e})"),
            Expr::Binary(op, l, r) => {
                let sym = match op {
                    BinaryOp::Add => "+",
                    BinaryOp::Sub => "-",
                    BinaryOp::Mul => "*",
                    BinaryOp::Div => "/",
                };
                write!(f, "({l} {sym} {r})")
            }
            Expr::Pow(b, e) => write!(f, "({b})^{e}"),
            Expr::Min(args) | Expr::Max(args) => {
                let name = if matches!(self, Expr::Min(_)) { "min" } else { "max" };
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}
