//! Expressions, piecewise functions and bilevel problem files.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod piecewise;
pub mod problem;

pub use ast::{BinaryOp, Block, Exponent, Expr, UnaryOp, Var};
pub use parser::{parse_expression, parse_function, VarLayout};
pub use piecewise::{Branch, CmpOp, Condition, FnScalar, PiecewiseFn, Region, ScalarFunction};
pub use problem::{
    fmt_vector, parse_problem, Assertions, BilevelProblem, ConeSpec, ConvexificatorDecl, ConvexificatorKind, Interval, Sign,
    Target,
};
