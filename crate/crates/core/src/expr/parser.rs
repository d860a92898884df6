//! Recursive-descent parser for expressions, guards and piecewise bodies.

use num_rational::BigRational;

use crate::error::{ParseError, ParseErrorKind};

use super::ast::{BinaryOp, Block, Expr, Exponent, UnaryOp, Var};
use super::lexer::{Tok, Token};
use super::piecewise::{Branch, CmpOp, Condition, PiecewiseFn, Region};

/// Block sizes used to resolve `x`, `y`, `x[i]` and `y[i]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarLayout {
    pub n1: usize,
    pub n2: usize,
}

impl VarLayout {
    pub fn dim(&self) -> usize {
        self.n1 + self.n2
    }
}

pub struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    end_col: usize,
    layout: Option<VarLayout>,
}

impl<'a> Cursor<'a> {
    pub fn new(toks: &'a [Token], line: usize, line_len: usize, layout: Option<VarLayout>) -> Self {
        Self { toks, pos: 0, line, end_col: line_len + 1, layout }
    }

    pub fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    pub fn peek_at(&self, offset: usize) -> Option<&'a Token> {
        self.toks.get(self.pos + offset)
    }

    pub fn next(&mut self) -> Option<&'a Token> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn col(&self) -> usize {
        self.peek().map_or(self.end_col, |t| t.col)
    }

    pub fn error(&self, kind: ParseErrorKind, msg: impl Into<String>) -> ParseError {
        ParseError::new(kind, self.line, self.col(), msg)
    }

    pub fn error_at(&self, col: usize, kind: ParseErrorKind, msg: impl Into<String>) -> ParseError {
        ParseError::new(kind, self.line, col, msg)
    }

    fn found(&self) -> String {
        self.peek().map_or_else(|| "end of line".to_string(), |t| t.describe())
    }

    pub fn eat_sym(&mut self, s: &str) -> bool {
        if self.peek().is_some_and(|t| t.is_sym(s)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.error(ParseErrorKind::Syntax, format!("expected `{s}`, found {}", self.found())))
        }
    }

    pub fn expect_ident(&mut self) -> Result<(&'a str, usize), ParseError> {
        match self.peek() {
            Some(Token { tok: Tok::Ident(name), col }) => {
                self.pos += 1;
                Ok((name.as_str(), *col))
            }
            _ => Err(self.error(ParseErrorKind::Syntax, format!("expected identifier, found {}", self.found()))),
        }
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.peek().is_some_and(|t| t.is_ident(kw)) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(ParseErrorKind::Syntax, format!("expected `{kw}`, found {}", self.found())))
        }
    }

    pub fn expect_end(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error(ParseErrorKind::Syntax, format!("unexpected {}", self.found())))
        }
    }

    pub fn expect_string(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Token { tok: Tok::Str(s), .. }) => {
                self.pos += 1;
                Ok(s.clone())
            }
            _ => Err(self.error(ParseErrorKind::Syntax, format!("expected string, found {}", self.found()))),
        }
    }

    pub fn expect_usize(&mut self) -> Result<usize, ParseError> {
        match self.peek() {
            Some(Token { tok: Tok::Num(n), .. }) => match n.parse::<usize>() {
                Ok(v) => {
                    self.pos += 1;
                    Ok(v)
                }
                Err(_) => Err(self.error(ParseErrorKind::Syntax, format!("expected integer, found `{n}`"))),
            },
            _ => Err(self.error(ParseErrorKind::Syntax, format!("expected integer, found {}", self.found()))),
        }
    }

    /// A constant expression such as `-7/4` or `2.5e-1`, folded exactly.
    pub fn parse_constant(&mut self) -> Result<BigRational, ParseError> {
        let col = self.col();
        let saved = self.layout.take();
        let e = self.parse_expr();
        self.layout = saved;
        let e = e?;
        e.const_fold()
            .ok_or_else(|| self.error_at(col, ParseErrorKind::Syntax, "expected a constant"))
    }

    /// `(c1, c2, ...)` of exact constants.
    pub fn parse_vector(&mut self) -> Result<Vec<BigRational>, ParseError> {
        self.expect_sym("(")?;
        let v = self.parse_constant_list(")")?;
        self.expect_sym(")")?;
        Ok(v)
    }

    /// `[c1, c2, ...]` of exact constants.
    pub fn parse_bracket_list(&mut self) -> Result<Vec<BigRational>, ParseError> {
        self.expect_sym("[")?;
        let v = self.parse_constant_list("]")?;
        self.expect_sym("]")?;
        Ok(v)
    }

    fn parse_constant_list(&mut self, close: &str) -> Result<Vec<BigRational>, ParseError> {
        let mut out = Vec::new();
        if self.peek().is_some_and(|t| t.is_sym(close)) {
            return Ok(out);
        }
        loop {
            out.push(self.parse_constant()?);
            if !self.eat_sym(",") {
                return Ok(out);
            }
        }
    }

    /// Function body: `piecewise{ guard : expr ; ... }` or a plain expression.
    pub fn parse_function(&mut self, name: &str) -> Result<PiecewiseFn, ParseError> {
        if !self.peek().is_some_and(|t| t.is_ident("piecewise")) {
            let expr = self.parse_expr()?;
            return Ok(PiecewiseFn::single(name, expr));
        }
        self.pos += 1;
        self.expect_sym("{")?;
        let mut branches = Vec::new();
        loop {
            if self.eat_sym("}") {
                break;
            }
            let region = self.parse_guard()?;
            self.expect_sym(":")?;
            let expr = self.parse_expr()?;
            branches.push(Branch { region, expr });
            if self.eat_sym(";") {
                continue;
            }
            self.expect_sym("}")?;
            break;
        }
        if branches.is_empty() {
            return Err(self.error(ParseErrorKind::EmptyRegionCover, format!("`{name}` has no branches")));
        }
        Ok(PiecewiseFn { name: name.to_string(), branches })
    }

    pub fn parse_guard(&mut self) -> Result<Region, ParseError> {
        if self.peek().is_some_and(|t| t.is_ident("true")) {
            self.pos += 1;
            return Ok(Region::always());
        }
        let mut conditions = Vec::new();
        loop {
            let col = self.col();
            let lhs = self.parse_expr()?;
            let op = match self.peek() {
                Some(t) if t.is_sym(">=") => CmpOp::Ge,
                Some(t) if t.is_sym(">") => CmpOp::Gt,
                Some(t) if t.is_sym("<=") => CmpOp::Le,
                Some(t) if t.is_sym("<") => CmpOp::Lt,
                _ => {
                    return Err(self.error(
                        ParseErrorKind::Syntax,
                        format!("expected comparison, found {}", self.found()),
                    ))
                }
            };
            self.pos += 1;
            let rhs = self.parse_expr()?;
            if !lhs.is_affine() || !rhs.is_affine() {
                return Err(self.error_at(col, ParseErrorKind::Syntax, "region guards must be affine"));
            }
            conditions.push(Condition { lhs, op, rhs });
            if !self.eat_sym("&&") {
                break;
            }
        }
        Ok(Region { conditions })
    }

    pub fn parse_expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_term()?;
        loop {
            let op = if self.eat_sym("+") {
                BinaryOp::Add
            } else if self.eat_sym("-") {
                BinaryOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.parse_term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn parse_term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_unary()?;
        loop {
            let op = if self.eat_sym("*") {
                BinaryOp::Mul
            } else if self.eat_sym("/") {
                BinaryOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.parse_unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn parse_unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat_sym("-") {
            return Ok(Expr::neg(self.parse_unary()?));
        }
        if self.eat_sym("+") {
            return self.parse_unary();
        }
        self.parse_power()
    }

    fn parse_power(&mut self) -> Result<Expr, ParseError> {
        let base = self.parse_atom()?;
        if !self.eat_sym("^") {
            return Ok(base);
        }
        let col = self.col();
        let saved = self.layout.take();
        let exp = self.parse_unary();
        self.layout = saved;
        let exp = exp.map_err(|e| {
            if e.kind == ParseErrorKind::UnknownIdentifier {
                self.error_at(col, ParseErrorKind::Syntax, "exponent must be a constant rational")
            } else {
                e
            }
        })?;
        let exponent = exp
            .const_fold()
            .and_then(|q| Exponent::from_rational(&q))
            .ok_or_else(|| self.error_at(col, ParseErrorKind::Syntax, "exponent must be a constant rational"))?;
        Ok(Expr::Pow(Box::new(base), exponent))
    }

    fn parse_atom(&mut self) -> Result<Expr, ParseError> {
        let Some(tok) = self.peek() else {
            return Err(self.error(ParseErrorKind::Syntax, "expected expression, found end of line"));
        };
        match &tok.tok {
            Tok::Num(text) => {
                self.pos += 1;
                let v: f64 = text
                    .parse()
                    .map_err(|_| self.error_at(tok.col, ParseErrorKind::Syntax, format!("malformed number `{text}`")))?;
                Ok(Expr::Const(v))
            }
            Tok::Sym("(") => {
                self.pos += 1;
                let e = self.parse_expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.pos += 1;
                self.parse_identifier(name, tok.col)
            }
            _ => Err(self.error(ParseErrorKind::Syntax, format!("expected expression, found {}", tok.describe()))),
        }
    }

    fn parse_identifier(&mut self, name: &str, col: usize) -> Result<Expr, ParseError> {
        match name {
            "abs" | "sqrt" | "cbrt" => {
                let op = match name {
                    "abs" => UnaryOp::Abs,
                    "sqrt" => UnaryOp::Sqrt,
                    _ => UnaryOp::Cbrt,
                };
                self.expect_sym("(")?;
                let e = self.parse_expr()?;
                self.expect_sym(")")?;
                Ok(Expr::Unary(op, Box::new(e)))
            }
            "min" | "max" => {
                self.expect_sym("(")?;
                let mut args = vec![self.parse_expr()?];
                while self.eat_sym(",") {
                    args.push(self.parse_expr()?);
                }
                self.expect_sym(")")?;
                Ok(if name == "min" { Expr::Min(args) } else { Expr::Max(args) })
            }
            "x" | "y" => self.parse_variable(name, col),
            _ => Err(self.error_at(col, ParseErrorKind::UnknownIdentifier, format!("unknown identifier `{name}`"))),
        }
    }

    fn parse_variable(&mut self, name: &str, col: usize) -> Result<Expr, ParseError> {
        let Some(layout) = self.layout else {
            return Err(self.error_at(
                col,
                ParseErrorKind::UnknownIdentifier,
                format!("variable `{name}` is not allowed here"),
            ));
        };
        let (block, size, offset) = if name == "x" {
            (Block::X, layout.n1, 0)
        } else {
            (Block::Y, layout.n2, layout.n1)
        };
        let index = if self.eat_sym("[") {
            let i = self.expect_usize()?;
            self.expect_sym("]")?;
            if i == 0 || i > size {
                return Err(self.error_at(
                    col,
                    ParseErrorKind::DimensionMismatch,
                    format!("`{name}[{i}]` is out of range: `{name}` has {size} coordinate(s)"),
                ));
            }
            i - 1
        } else if size == 1 {
            0
        } else {
            return Err(self.error_at(
                col,
                ParseErrorKind::DimensionMismatch,
                format!("`{name}` has {size} coordinates; write `{name}[i]`"),
            ));
        };
        Ok(Expr::Var(Var { block, index, slot: offset + index, scalar_block: size == 1 }))
    }
}

/// Parses a single expression line against the given layout.
pub fn parse_expression(text: &str, layout: VarLayout) -> Result<Expr, ParseError> {
    let toks = super::lexer::lex(text, 1)?;
    let mut c = Cursor::new(&toks, 1, text.chars().count(), Some(layout));
    let e = c.parse_expr()?;
    c.expect_end()?;
    Ok(e)
}

/// Parses a function body (`piecewise{...}` or expression) against the given layout.
pub fn parse_function(name: &str, text: &str, layout: VarLayout) -> Result<PiecewiseFn, ParseError> {
    let toks = super::lexer::lex(text, 1)?;
    let mut c = Cursor::new(&toks, 1, text.chars().count(), Some(layout));
    let f = c.parse_function(name)?;
    c.expect_end()?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    const L: VarLayout = VarLayout { n1: 1, n2: 1 };

    #[test]
    fn precedence_and_associativity() {
        let e = parse_expression("1 - 2 - 3 * 2 ^ 2", L).unwrap();
        assert_eq!(e.eval(&[0.0, 0.0]).unwrap(), -13.0);
        let e = parse_expression("-x^2", L).unwrap();
        assert_eq!(e.eval(&[3.0, 0.0]).unwrap(), -9.0);
        let e = parse_expression("2^3^2", L).unwrap();
        assert_eq!(e.eval(&[0.0, 0.0]).unwrap(), 512.0);
    }

    #[test]
    fn rational_exponents_fold_exactly() {
        let e = parse_expression("x^(2/3)", L).unwrap();
        assert_eq!(e, Expr::Pow(Box::new(parse_expression("x", L).unwrap()), Exponent { numer: 2, denom: 3 }));
        assert!(parse_expression("x^y", L).is_err());
    }

    #[test]
    fn functions_and_subscripts() {
        let wide = VarLayout { n1: 2, n2: 1 };
        let e = parse_expression("max(abs(x[1]), sqrt(x[2]), cbrt(y)) + min(1, 2)", wide).unwrap();
        assert_eq!(e.eval(&[-3.0, 4.0, 8.0]).unwrap(), 4.0);
        let err = parse_expression("x[3]", wide).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::DimensionMismatch);
        let err = parse_expression("x + 1", wide).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::DimensionMismatch);
    }

    #[test]
    fn unknown_identifier_is_located() {
        let err = parse_expression("x + w", L).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownIdentifier);
        assert_eq!(err.column, 5);
    }

    #[test]
    fn constant_piecewise() {
        let f = parse_function("F1", "piecewise{ true : 0 }", L).unwrap();
        assert_eq!(f.eval(&[1.0, -2.0]).unwrap(), 0.0);
    }

    #[test]
    fn malformed_guard_points_at_offending_token() {
        let err = parse_function("F1", "piecewise{ x >> 0 : 1 }", L).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Syntax);
        assert_eq!(err.column, 15);
    }

    #[test]
    fn nonaffine_guard_rejected() {
        let err = parse_function("F1", "piecewise{ x*y >= 0 : 1 }", L).unwrap_err();
        assert!(err.message.contains("affine"));
    }
}
