//! Bilevel problem instances and the line-oriented problem-file format.

use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{ParseError, ParseErrorKind};
use crate::scalar::rational_to_f64;

use super::lexer::{lex, strip_comment, Tok};
use super::parser::{Cursor, VarLayout};
use super::piecewise::PiecewiseFn;

/// Closed interval sampled with a fixed step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64, step: f64) -> Self {
        Self { lo, hi, step }
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.lo && v <= self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Nonneg,
    Nonpos,
    Free,
}

/// Declared continuity-direction cone.
#[derive(Debug, Clone, PartialEq)]
pub enum ConeSpec {
    Orthant(Vec<Sign>),
    Generated(Vec<Vec<BigRational>>),
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConvexificatorKind {
    /// Bounds the lower Dini derivative.
    Upper,
    /// Bounds the upper Dini derivative.
    SemiRegular,
}

impl ConvexificatorKind {
    pub fn keyword(self) -> &'static str {
        match self {
            ConvexificatorKind::Upper => "upper",
            ConvexificatorKind::SemiRegular => "semiregular",
        }
    }
}

/// Function a convexificator is declared for; indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    F(usize),
    NegG(usize),
    H(usize),
    Phi(usize),
    Psi,
    Varphi(usize),
}

impl Target {
    pub fn parse(name: &str) -> Option<Self> {
        if name == "Psi" {
            return Some(Target::Psi);
        }
        let prefixes: [(&str, fn(usize) -> Target); 5] = [
            ("varphi", Target::Varphi),
            ("negG", Target::NegG),
            ("phi", Target::Phi),
            ("F", Target::F),
            ("H", Target::H),
        ];
        for (prefix, make) in prefixes {
            if let Some(rest) = name.strip_prefix(prefix) {
                return match rest.parse::<usize>() {
                    Ok(i) if i >= 1 => Some(make(i - 1)),
                    _ => None,
                };
            }
        }
        None
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::F(k) => write!(f, "F{}", k + 1),
            Target::NegG(k) => write!(f, "negG{}", k + 1),
            Target::H(j) => write!(f, "H{}", j + 1),
            Target::Phi(s) => write!(f, "phi{}", s + 1),
            Target::Psi => write!(f, "Psi"),
            Target::Varphi(k) => write!(f, "varphi{}", k + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexificatorDecl {
    pub target: Target,
    pub kind: ConvexificatorKind,
    /// Point the carrier belongs to; `None` means the reference point.
    pub anchor: Option<Vec<BigRational>>,
    pub carrier: Vec<Vec<BigRational>>,
    pub line: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Assertions {
    pub pos_xi_closed: Option<bool>,
    pub star_shaped: Option<bool>,
}

/// Full problem instance. Immutable after parsing apart from grid-step overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct BilevelProblem {
    pub name: String,
    pub n1: usize,
    pub n2: usize,
    pub x_box: Vec<Interval>,
    pub y_box: Vec<Interval>,
    pub theta: Vec<Interval>,
    pub theta_declared: bool,
    pub numerators: Vec<PiecewiseFn>,
    pub denominators: Vec<PiecewiseFn>,
    pub upper: Vec<PiecewiseFn>,
    pub lower_objective: PiecewiseFn,
    pub lower: Vec<PiecewiseFn>,
    pub reference: Option<Vec<BigRational>>,
    pub cone: Option<ConeSpec>,
    pub convexificators: Vec<ConvexificatorDecl>,
    pub assertions: Assertions,
}

impl BilevelProblem {
    pub fn dim(&self) -> usize {
        self.n1 + self.n2
    }

    pub fn objectives(&self) -> usize {
        self.numerators.len()
    }

    pub fn layout(&self) -> VarLayout {
        VarLayout { n1: self.n1, n2: self.n2 }
    }

    /// Domain box of `(x, y)`.
    pub fn domain(&self) -> Vec<Interval> {
        self.x_box.iter().chain(&self.y_box).copied().collect()
    }

    pub fn reference_f64(&self) -> Option<Vec<f64>> {
        self.reference.as_ref().map(|r| r.iter().map(rational_to_f64).collect())
    }

    /// Replaces the grid step of every `x` and `y` coordinate.
    pub fn set_step(&mut self, step: f64) {
        for iv in self.x_box.iter_mut().chain(self.y_box.iter_mut()) {
            iv.step = step;
        }
    }

    /// Largest grid step over the `x` and `y` boxes.
    pub fn max_step(&self) -> f64 {
        self.domain().iter().map(|iv| iv.step).fold(0.0, f64::max)
    }

    /// Declaration for `target` anchored at `point`; an unanchored declaration
    /// belongs to the reference point.
    pub fn convexificator(&self, target: Target, point: &[BigRational]) -> Option<&ConvexificatorDecl> {
        self.convexificators.iter().find(|d| {
            d.target == target
                && match &d.anchor {
                    Some(a) => a.as_slice() == point,
                    None => self.reference.as_deref() == Some(point),
                }
        })
    }

    /// Declarations attached to `point`.
    pub fn convexificators_at(&self, point: &[BigRational]) -> Vec<&ConvexificatorDecl> {
        self.convexificators
            .iter()
            .filter(|d| match &d.anchor {
                Some(a) => a.as_slice() == point,
                None => self.reference.as_deref() == Some(point),
            })
            .collect()
    }

    /// Function behind a target. `Psi` and `varphi` are not stored
    /// functions and yield `None`.
    pub fn stored_function(&self, target: Target) -> Option<PiecewiseFn> {
        match target {
            Target::F(k) => self.numerators.get(k).cloned(),
            Target::NegG(k) => self.denominators.get(k).map(|g| g.negated(format!("negG{}", k + 1))),
            Target::H(j) => self.upper.get(j).cloned(),
            Target::Phi(s) => self.lower.get(s).cloned(),
            Target::Psi | Target::Varphi(_) => None,
        }
    }
}

struct Builder {
    name: Option<String>,
    layout: Option<VarLayout>,
    objectives: usize,
    dims_line: usize,
    x_box: Vec<Option<Interval>>,
    y_box: Vec<Option<Interval>>,
    theta: Vec<Option<Interval>>,
    numerators: Vec<(usize, usize, PiecewiseFn)>,
    denominators: Vec<(usize, usize, PiecewiseFn)>,
    upper: Vec<(usize, usize, PiecewiseFn)>,
    lower: Vec<(usize, usize, PiecewiseFn)>,
    lower_objective: Option<(usize, PiecewiseFn)>,
    reference: Option<(usize, Vec<BigRational>)>,
    cone: Option<ConeSpec>,
    convexificators: Vec<ConvexificatorDecl>,
    assertions: Assertions,
}

/// Parses a problem file.
pub fn parse_problem(text: &str) -> Result<BilevelProblem, ParseError> {
    let mut b = Builder {
        name: None,
        layout: None,
        objectives: 0,
        dims_line: 0,
        x_box: Vec::new(),
        y_box: Vec::new(),
        theta: Vec::new(),
        numerators: Vec::new(),
        denominators: Vec::new(),
        upper: Vec::new(),
        lower: Vec::new(),
        lower_objective: None,
        reference: None,
        cone: None,
        convexificators: Vec::new(),
        assertions: Assertions::default(),
    };
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = strip_comment(raw);
        let toks = lex(line, line_no)?;
        if toks.is_empty() {
            continue;
        }
        let mut c = Cursor::new(&toks, line_no, line.chars().count(), b.layout);
        parse_declaration(&mut b, &mut c, line_no)?;
        c.expect_end()?;
    }
    finish(b, last_line + 1)
}

fn parse_declaration(b: &mut Builder, c: &mut Cursor<'_>, line: usize) -> Result<(), ParseError> {
    let (head, col) = c.expect_ident()?;
    match head {
        "problem" => {
            b.name = Some(c.expect_string()?);
        }
        "dims" => {
            if b.layout.is_some() {
                return Err(c.error_at(col, ParseErrorKind::Syntax, "duplicate `dims` declaration"));
            }
            let mut n1 = None;
            let mut n2 = None;
            let mut objectives = None;
            while !c.at_end() {
                let (key, kcol) = c.expect_ident()?;
                c.expect_sym("=")?;
                let v = c.expect_usize()?;
                match key {
                    "x" => n1 = Some(v),
                    "y" => n2 = Some(v),
                    "objectives" => objectives = Some(v),
                    _ => {
                        return Err(c.error_at(kcol, ParseErrorKind::UnknownIdentifier, format!("unknown dimension `{key}`")))
                    }
                }
            }
            let (Some(n1), Some(n2), Some(objectives)) = (n1, n2, objectives) else {
                return Err(c.error_at(col, ParseErrorKind::Missing, "`dims` needs x=, y= and objectives="));
            };
            if n1 == 0 || n2 == 0 || objectives == 0 {
                return Err(c.error_at(col, ParseErrorKind::DimensionMismatch, "dimensions must be positive"));
            }
            b.layout = Some(VarLayout { n1, n2 });
            b.objectives = objectives;
            b.dims_line = line;
            b.x_box = vec![None; n1];
            b.y_box = vec![None; n2];
            b.theta = vec![None; n2];
        }
        "box" | "theta" => {
            let layout = require_layout(b, c, col)?;
            let (var, vcol) = c.expect_ident()?;
            let (size, expected) = match (head, var) {
                ("box", "x") => (layout.n1, "x"),
                ("box", "y") => (layout.n2, "y"),
                ("theta", "z") => (layout.n2, "z"),
                _ => {
                    return Err(c.error_at(vcol, ParseErrorKind::UnknownIdentifier, format!("unknown box variable `{var}`")))
                }
            };
            let index = parse_box_index(c, expected, size, vcol)?;
            c.expect_keyword("in")?;
            c.expect_sym("[")?;
            let lo = rational_to_f64(&c.parse_constant()?);
            c.expect_sym(",")?;
            let hi = rational_to_f64(&c.parse_constant()?);
            c.expect_sym("]")?;
            c.expect_keyword("step")?;
            let step = rational_to_f64(&c.parse_constant()?);
            if !(lo < hi) || !(step > 0.0) || step > hi - lo {
                return Err(c.error_at(vcol, ParseErrorKind::Syntax, "box needs lo < hi and 0 < step <= hi - lo"));
            }
            let slot = match var {
                "x" => &mut b.x_box[index],
                "y" => &mut b.y_box[index],
                _ => &mut b.theta[index],
            };
            *slot = Some(Interval::new(lo, hi, step));
        }
        "f" => {
            require_layout(b, c, col)?;
            c.expect_sym("=")?;
            b.lower_objective = Some((line, c.parse_function("f")?));
        }
        "refpoint" => {
            c.expect_sym("=")?;
            b.reference = Some((line, c.parse_vector()?));
        }
        "D" => {
            c.expect_sym("=")?;
            b.cone = Some(parse_cone(c)?);
        }
        "convexificator" => {
            let (name, tcol) = c.expect_ident()?;
            let target = Target::parse(name).ok_or_else(|| {
                c.error_at(tcol, ParseErrorKind::UnknownIdentifier, format!("unknown convexificator target `{name}`"))
            })?;
            let (kind_name, kcol) = c.expect_ident()?;
            let kind = match kind_name {
                "upper" => ConvexificatorKind::Upper,
                "semiregular" => ConvexificatorKind::SemiRegular,
                _ => {
                    return Err(c.error_at(kcol, ParseErrorKind::Syntax, format!("expected `upper` or `semiregular`, found `{kind_name}`")))
                }
            };
            let anchor = if c.peek().is_some_and(|t| t.is_ident("at")) {
                c.next();
                Some(c.parse_vector()?)
            } else {
                None
            };
            c.expect_sym("=")?;
            c.expect_sym("{")?;
            let mut carrier = Vec::new();
            if !c.eat_sym("}") {
                loop {
                    carrier.push(c.parse_vector()?);
                    if c.eat_sym(",") {
                        continue;
                    }
                    c.expect_sym("}")?;
                    break;
                }
            }
            if carrier.is_empty() {
                return Err(c.error_at(tcol, ParseErrorKind::Syntax, "convexificator carrier must be nonempty"));
            }
            b.convexificators.push(ConvexificatorDecl { target, kind, anchor, carrier, line });
        }
        "assert" => {
            let (flag, fcol) = c.expect_ident()?;
            c.expect_sym("=")?;
            let (value, vcol) = c.expect_ident()?;
            let value = match value {
                "true" => true,
                "false" => false,
                _ => return Err(c.error_at(vcol, ParseErrorKind::Syntax, "expected `true` or `false`")),
            };
            match flag {
                "pos_xi_closed" => b.assertions.pos_xi_closed = Some(value),
                "star_shaped" => b.assertions.star_shaped = Some(value),
                _ => return Err(c.error_at(fcol, ParseErrorKind::UnknownIdentifier, format!("unknown assertion `{flag}`"))),
            }
        }
        _ => {
            let (family, index) = split_indexed(head).ok_or_else(|| {
                c.error_at(col, ParseErrorKind::UnknownIdentifier, format!("unknown declaration `{head}`"))
            })?;
            require_layout(b, c, col)?;
            c.expect_sym("=")?;
            let f = c.parse_function(head)?;
            let list = match family {
                "F" => &mut b.numerators,
                "G" => &mut b.denominators,
                "H" => &mut b.upper,
                _ => &mut b.lower,
            };
            if list.iter().any(|(i, _, _)| *i == index) {
                return Err(c.error_at(col, ParseErrorKind::Syntax, format!("duplicate declaration of `{head}`")));
            }
            list.push((index, line, f));
        }
    }
    Ok(())
}

fn split_indexed(head: &str) -> Option<(&'static str, usize)> {
    for family in ["phi", "F", "G", "H"] {
        if let Some(rest) = head.strip_prefix(family) {
            if let Ok(i) = rest.parse::<usize>() {
                if i >= 1 {
                    return Some((family, i));
                }
            }
        }
    }
    None
}

fn require_layout(b: &Builder, c: &Cursor<'_>, col: usize) -> Result<VarLayout, ParseError> {
    b.layout
        .ok_or_else(|| c.error_at(col, ParseErrorKind::Missing, "`dims` must be declared before this line"))
}

fn parse_box_index(c: &mut Cursor<'_>, var: &str, size: usize, col: usize) -> Result<usize, ParseError> {
    if c.eat_sym("[") {
        let i = c.expect_usize()?;
        c.expect_sym("]")?;
        if i == 0 || i > size {
            return Err(c.error_at(col, ParseErrorKind::DimensionMismatch, format!("`{var}[{i}]` is out of range")));
        }
        Ok(i - 1)
    } else if size == 1 {
        Ok(0)
    } else {
        Err(c.error_at(col, ParseErrorKind::DimensionMismatch, format!("`{var}` has {size} coordinates; write `{var}[i]`")))
    }
}

fn parse_cone(c: &mut Cursor<'_>) -> Result<ConeSpec, ParseError> {
    let (kind, col) = c.expect_ident()?;
    match kind {
        "full" => Ok(ConeSpec::Full),
        "orthant" => {
            c.expect_sym("(")?;
            let mut signs = Vec::new();
            loop {
                let t = c.next();
                let sign = match t.map(|t| &t.tok) {
                    Some(Tok::Sym("+")) => Sign::Nonneg,
                    Some(Tok::Sym("-")) => Sign::Nonpos,
                    Some(Tok::Sym("*")) => Sign::Free,
                    _ => return Err(c.error_at(t.map_or(c.col(), |t| t.col), ParseErrorKind::Syntax, "expected `+`, `-` or `*`")),
                };
                signs.push(sign);
                if !c.eat_sym(",") {
                    break;
                }
            }
            c.expect_sym(")")?;
            Ok(ConeSpec::Orthant(signs))
        }
        "cone" => {
            c.expect_sym("{")?;
            let mut gens = Vec::new();
            if !c.eat_sym("}") {
                loop {
                    gens.push(c.parse_vector()?);
                    if c.eat_sym(",") {
                        continue;
                    }
                    c.expect_sym("}")?;
                    break;
                }
            }
            Ok(ConeSpec::Generated(gens))
        }
        _ => Err(c.error_at(col, ParseErrorKind::Syntax, format!("expected `orthant`, `cone` or `full`, found `{kind}`"))),
    }
}

fn collect_indexed(
    mut list: Vec<(usize, usize, PiecewiseFn)>,
    family: &str,
    expected: Option<usize>,
    eof: usize,
) -> Result<Vec<(usize, PiecewiseFn)>, ParseError> {
    list.sort_by_key(|(i, _, _)| *i);
    let count = expected.unwrap_or(list.len());
    for (pos, (i, line, _)) in list.iter().enumerate() {
        if *i != pos + 1 || *i > count {
            return Err(ParseError::new(
                ParseErrorKind::DimensionMismatch,
                *line,
                1,
                format!("`{family}{i}` does not fit a contiguous numbering 1..{count}"),
            ));
        }
    }
    if list.len() < count {
        return Err(ParseError::new(
            ParseErrorKind::Missing,
            eof,
            1,
            format!("missing declaration `{family}{}`", list.len() + 1),
        ));
    }
    Ok(list.into_iter().map(|(_, line, f)| (line, f)).collect())
}

fn finish(b: Builder, eof: usize) -> Result<BilevelProblem, ParseError> {
    let missing = |what: &str| ParseError::new(ParseErrorKind::Missing, eof, 1, format!("missing declaration: {what}"));
    let layout = b.layout.ok_or_else(|| missing("dims"))?;
    let name = b.name.unwrap_or_else(|| "unnamed".to_string());
    let x_box = unwrap_boxes(b.x_box, "box x", eof)?;
    let y_box = unwrap_boxes(b.y_box, "box y", eof)?;
    let theta_declared = b.theta.iter().any(Option::is_some);
    let theta = if theta_declared {
        unwrap_boxes(b.theta, "theta z", eof)?
    } else {
        y_box.iter().map(|iv| Interval::new(iv.lo - 1.0, iv.hi + 1.0, iv.step)).collect()
    };
    let numerators = collect_indexed(b.numerators, "F", Some(b.objectives), eof)?;
    let denominators = collect_indexed(b.denominators, "G", Some(b.objectives), eof)?;
    let upper = collect_indexed(b.upper, "H", None, eof)?;
    let lower = collect_indexed(b.lower, "phi", None, eof)?;
    let (f_line, lower_objective) = b.lower_objective.ok_or_else(|| missing("f"))?;

    let domain: Vec<Interval> = x_box.iter().chain(&y_box).copied().collect();
    let dim = layout.dim();
    for (line, f) in numerators.iter().chain(&denominators).chain(&upper).chain(&lower).chain(std::iter::once(&(f_line, lower_objective.clone()))) {
        check_cover(f, &domain, *line)?;
    }

    let reference = match b.reference {
        Some((line, r)) => {
            if r.len() != dim {
                return Err(ParseError::new(
                    ParseErrorKind::DimensionMismatch,
                    line,
                    1,
                    format!("refpoint has {} coordinates, expected {dim}", r.len()),
                ));
            }
            let p: Vec<f64> = r.iter().map(rational_to_f64).collect();
            for (k, ((_, fk), (_, gk))) in numerators.iter().zip(&denominators).enumerate() {
                let fv = fk.eval(&p).map_err(|e| ParseError::new(ParseErrorKind::InvalidReferencePoint, line, 1, e.to_string()))?;
                let gv = gk.eval(&p).map_err(|e| ParseError::new(ParseErrorKind::InvalidReferencePoint, line, 1, e.to_string()))?;
                if !(gv > 0.0) || fv < 0.0 {
                    return Err(ParseError::new(
                        ParseErrorKind::InvalidReferencePoint,
                        line,
                        1,
                        format!("reference point needs F{0} >= 0 and G{0} > 0 (got F = {fv}, G = {gv})", k + 1),
                    ));
                }
            }
            Some(r)
        }
        None => None,
    };

    if let Some(cone) = &b.cone {
        let bad = match cone {
            ConeSpec::Orthant(s) => s.len() != dim,
            ConeSpec::Generated(g) => g.iter().any(|v| v.len() != dim),
            ConeSpec::Full => false,
        };
        if bad {
            return Err(ParseError::new(ParseErrorKind::DimensionMismatch, eof, 1, format!("cone D must live in dimension {dim}")));
        }
    }
    for d in &b.convexificators {
        let anchor_bad = d.anchor.as_ref().is_some_and(|a| a.len() != dim);
        if anchor_bad || d.carrier.iter().any(|v| v.len() != dim) {
            return Err(ParseError::new(
                ParseErrorKind::DimensionMismatch,
                d.line,
                1,
                format!("convexificator {} must use points of dimension {dim}", d.target),
            ));
        }
        let index_ok = match d.target {
            Target::F(k) | Target::NegG(k) | Target::Varphi(k) => k < numerators.len(),
            Target::H(j) => j < upper.len(),
            Target::Phi(s) => s < lower.len(),
            Target::Psi => true,
        };
        if !index_ok {
            return Err(ParseError::new(
                ParseErrorKind::UnknownIdentifier,
                d.line,
                1,
                format!("convexificator target {} is not declared", d.target),
            ));
        }
    }

    Ok(BilevelProblem {
        name,
        n1: layout.n1,
        n2: layout.n2,
        x_box,
        y_box,
        theta,
        theta_declared,
        numerators: numerators.into_iter().map(|(_, f)| f).collect(),
        denominators: denominators.into_iter().map(|(_, f)| f).collect(),
        upper: upper.into_iter().map(|(_, f)| f).collect(),
        lower_objective,
        lower: lower.into_iter().map(|(_, f)| f).collect(),
        reference,
        cone: b.cone,
        convexificators: b.convexificators,
        assertions: b.assertions,
    })
}

fn unwrap_boxes(v: Vec<Option<Interval>>, what: &str, eof: usize) -> Result<Vec<Interval>, ParseError> {
    v.into_iter()
        .enumerate()
        .map(|(i, b)| {
            b.ok_or_else(|| ParseError::new(ParseErrorKind::Missing, eof, 1, format!("missing declaration: {what}[{}]", i + 1)))
        })
        .collect()
}

/// Checks that some region matches at every point of the domain grid
/// (subsampled to at most ~20000 points).
fn check_cover(f: &PiecewiseFn, domain: &[Interval], line: usize) -> Result<(), ParseError> {
    let axes: Vec<Vec<f64>> = domain
        .iter()
        .map(|iv| {
            let n = ((iv.hi - iv.lo) / iv.step).round().max(1.0) as usize;
            (0..=n).map(|i| iv.lo + (iv.hi - iv.lo) * i as f64 / n as f64).collect()
        })
        .collect();
    let total: usize = axes.iter().map(Vec::len).product();
    let stride = (total / 20_000).max(1);
    let mut point = vec![0.0; domain.len()];
    let mut idx = 0;
    while idx < total {
        let mut rem = idx;
        for (d, axis) in axes.iter().enumerate().rev() {
            point[d] = axis[rem % axis.len()];
            rem /= axis.len();
        }
        if let Err(crate::error::EvalError::NoRegionMatches { .. }) = f.select(&point) {
            return Err(ParseError::new(
                ParseErrorKind::EmptyRegionCover,
                line,
                1,
                format!("no region of `{}` covers the domain point {:?}", f.name, point),
            ));
        }
        idx += stride;
    }
    Ok(())
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_negative() {
        format!("-{}", -q)
    } else if q.is_zero() {
        "0".to_string()
    } else {
        q.to_string()
    }
}

pub fn fmt_vector(v: &[BigRational]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_rational).collect();
    format!("({})", parts.join(", "))
}

fn fmt_box(f: &mut fmt::Formatter<'_>, head: &str, var: &str, boxes: &[Interval]) -> fmt::Result {
    for (i, iv) in boxes.iter().enumerate() {
        let name = if boxes.len() == 1 { var.to_string() } else { format!("{var}[{}]", i + 1) };
        writeln!(f, "{head} {name} in [{}, {}] step {}", iv.lo, iv.hi, iv.step)?;
    }
    Ok(())
}

/// Prints the problem in the file format accepted by [`parse_problem`].
impl fmt::Display for BilevelProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "problem \"{}\"", self.name)?;
        writeln!(f, "dims x={} y={} objectives={}", self.n1, self.n2, self.objectives())?;
        fmt_box(f, "box", "x", &self.x_box)?;
        fmt_box(f, "box", "y", &self.y_box)?;
        if self.theta_declared {
            fmt_box(f, "theta", "z", &self.theta)?;
        }
        for (k, (num, den)) in self.numerators.iter().zip(&self.denominators).enumerate() {
            writeln!(f, "F{} = {num}", k + 1)?;
            writeln!(f, "G{} = {den}", k + 1)?;
        }
        for (j, h) in self.upper.iter().enumerate() {
            writeln!(f, "H{} = {h}", j + 1)?;
        }
        writeln!(f, "f = {}", self.lower_objective)?;
        for (s, p) in self.lower.iter().enumerate() {
            writeln!(f, "phi{} = {p}", s + 1)?;
        }
        if let Some(r) = &self.reference {
            writeln!(f, "refpoint = {}", fmt_vector(r))?;
        }
        match &self.cone {
            Some(ConeSpec::Full) => writeln!(f, "D = full")?,
            Some(ConeSpec::Orthant(signs)) => {
                let s: Vec<&str> = signs
                    .iter()
                    .map(|s| match s {
                        Sign::Nonneg => "+",
                        Sign::Nonpos => "-",
                        Sign::Free => "*",
                    })
                    .collect();
                writeln!(f, "D = orthant({})", s.join(", "))?;
            }
            Some(ConeSpec::Generated(g)) => {
                let s: Vec<String> = g.iter().map(|v| fmt_vector(v)).collect();
                writeln!(f, "D = cone{{ {} }}", s.join(", "))?;
            }
            None => {}
        }
        for d in &self.convexificators {
            let at = d.anchor.as_ref().map(|a| format!(" at {}", fmt_vector(a))).unwrap_or_default();
            let pts: Vec<String> = d.carrier.iter().map(|v| fmt_vector(v)).collect();
            writeln!(f, "convexificator {} {}{at} = {{ {} }}", d.target, d.kind.keyword(), pts.join(", "))?;
        }
        if let Some(v) = self.assertions.pos_xi_closed {
            writeln!(f, "assert pos_xi_closed = {v}")?;
        }
        if let Some(v) = self.assertions.star_shaped {
            writeln!(f, "assert star_shaped = {v}")?;
        }
        Ok(())
    }
}
