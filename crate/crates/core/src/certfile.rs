//! Text exchange format for certificates and dual points.
//!
//! ```text
//! certificate
//!   point = (0, 0)
//!   xi = [1/2, 3/2]
//!   tau = [1/4]
//!   rho = [3/4, 1/4]
//!   eta = 2/3
//!   z = (-7/4, -1)
//! end
//! dualpoint
//!   anchor = (-1, 0)
//!   upsilon = [1/2, 3/2, 1/4, 1/2, 1, 1/6]
//!   z = (-13/4, -11/4)
//! end
//! ```
//!
//! `upsilon` (alias `delta`) lists all multipliers in the order
//! `xi, tau, rho, eta` and replaces the four separate keys. `weights <target>
//! = [..]` gives convex weights for a carrier with several points. A block
//! without a point uses the problem's reference point.

use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::Zero;

use crate::certify::Certificate;
use crate::error::{Error, ParseError, ParseErrorKind, Result};
use crate::expr::lexer::{lex, strip_comment};
use crate::expr::parser::Cursor;
use crate::expr::{fmt_vector, BilevelProblem, Target};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    Certificate,
    DualPoint,
}

impl BlockKind {
    pub fn keyword(self) -> &'static str {
        match self {
            BlockKind::Certificate => "certificate",
            BlockKind::DualPoint => "dualpoint",
        }
    }
}

/// One parsed block, before it is matched against a problem.
#[derive(Debug, Clone, PartialEq)]
pub struct CertBlock {
    pub kind: BlockKind,
    pub line: usize,
    pub point: Option<Vec<BigRational>>,
    pub xi: Option<Vec<BigRational>>,
    pub tau: Option<Vec<BigRational>>,
    pub rho: Option<Vec<BigRational>>,
    pub eta: Option<BigRational>,
    pub upsilon: Option<Vec<BigRational>>,
    pub weights: Vec<(Target, Vec<BigRational>)>,
    pub z: Option<Vec<BigRational>>,
}

impl CertBlock {
    fn new(kind: BlockKind, line: usize) -> Self {
        Self {
            kind,
            line,
            point: None,
            xi: None,
            tau: None,
            rho: None,
            eta: None,
            upsilon: None,
            weights: Vec::new(),
            z: None,
        }
    }

    /// Splits the multipliers according to the problem's dimensions.
    pub fn resolve(&self, prob: &BilevelProblem) -> Result<Certificate<BigRational>> {
        let (n, p, q) = (prob.objectives(), prob.upper.len(), prob.lower.len());
        let mismatch = |what: String| Error::CertificateMismatch(format!("block at line {}: {what}", self.line));
        let point = match (&self.point, &prob.reference) {
            (Some(pt), _) => pt.clone(),
            (None, Some(r)) => r.clone(),
            (None, None) => return Err(mismatch("no point given and the problem has no reference point".into())),
        };
        if point.len() != prob.dim() {
            return Err(mismatch(format!("point has {} coordinates, expected {}", point.len(), prob.dim())));
        }
        let (xi, tau, rho, eta) = if let Some(u) = &self.upsilon {
            if self.xi.is_some() || self.tau.is_some() || self.rho.is_some() || self.eta.is_some() {
                return Err(mismatch("upsilon cannot be combined with xi, tau, rho or eta".into()));
            }
            if u.len() != n + p + q + 1 {
                return Err(mismatch(format!("upsilon has {} entries, expected {}", u.len(), n + p + q + 1)));
            }
            (u[..n].to_vec(), u[n..n + p].to_vec(), u[n + p..n + p + q].to_vec(), u[n + p + q].clone())
        } else {
            let list = |v: &Option<Vec<BigRational>>, len: usize, name: &str| -> Result<Vec<BigRational>> {
                match v {
                    Some(v) if v.len() == len => Ok(v.clone()),
                    Some(v) => Err(mismatch(format!("{name} has {} entries, expected {len}", v.len()))),
                    None if len == 0 => Ok(Vec::new()),
                    None => Err(mismatch(format!("{name} is missing"))),
                }
            };
            (
                list(&self.xi, n, "xi")?,
                list(&self.tau, p, "tau")?,
                list(&self.rho, q, "rho")?,
                self.eta.clone().ok_or_else(|| mismatch("eta is missing".into()))?,
            )
        };
        let z = self.z.clone().ok_or_else(|| mismatch("z is missing".into()))?;
        if z.len() != prob.dim() {
            return Err(mismatch(format!("z has {} entries, expected {}", z.len(), prob.dim())));
        }
        Ok(Certificate { point, xi, tau, rho, eta, weights: self.weights.clone(), z })
    }
}

/// Parses every block of a certificate file.
pub fn parse_cert_file(text: &str) -> Result<Vec<CertBlock>, ParseError> {
    let mut blocks = Vec::new();
    let mut current: Option<CertBlock> = None;
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last = line_no;
        let line = strip_comment(raw);
        let toks = lex(line, line_no)?;
        if toks.is_empty() {
            continue;
        }
        let mut c = Cursor::new(&toks, line_no, line.chars().count(), None);
        let (head, col) = c.expect_ident()?;
        match (head, current.as_mut()) {
            ("certificate" | "dualpoint", None) => {
                let kind = if head == "certificate" { BlockKind::Certificate } else { BlockKind::DualPoint };
                current = Some(CertBlock::new(kind, line_no));
            }
            ("certificate" | "dualpoint", Some(_)) => {
                return Err(c.error_at(col, ParseErrorKind::Syntax, "previous block is not closed with `end`"));
            }
            ("end", Some(_)) => blocks.push(current.take().expect("open block")),
            (_, None) => {
                return Err(c.error_at(col, ParseErrorKind::Syntax, format!("expected `certificate` or `dualpoint`, found `{head}`")));
            }
            ("weights", Some(b)) => {
                let (name, tcol) = c.expect_ident()?;
                let target = Target::parse(name)
                    .ok_or_else(|| c.error_at(tcol, ParseErrorKind::UnknownIdentifier, format!("unknown target `{name}`")))?;
                c.expect_sym("=")?;
                b.weights.push((target, c.parse_bracket_list()?));
            }
            (key, Some(b)) => {
                c.expect_sym("=")?;
                let duplicate = |c: &Cursor<'_>| c.error_at(col, ParseErrorKind::Syntax, format!("duplicate key `{key}`"));
                match key {
                    "point" | "anchor" => set_once(&mut b.point, c.parse_vector()?).map_err(|_| duplicate(&c))?,
                    "z" => set_once(&mut b.z, c.parse_vector()?).map_err(|_| duplicate(&c))?,
                    "xi" => set_once(&mut b.xi, c.parse_bracket_list()?).map_err(|_| duplicate(&c))?,
                    "tau" => set_once(&mut b.tau, c.parse_bracket_list()?).map_err(|_| duplicate(&c))?,
                    "rho" => set_once(&mut b.rho, c.parse_bracket_list()?).map_err(|_| duplicate(&c))?,
                    "upsilon" | "delta" => set_once(&mut b.upsilon, c.parse_bracket_list()?).map_err(|_| duplicate(&c))?,
                    "eta" => set_once(&mut b.eta, c.parse_constant()?).map_err(|_| duplicate(&c))?,
                    _ => {
                        return Err(c.error_at(col, ParseErrorKind::UnknownIdentifier, format!("unknown key `{key}`")));
                    }
                }
            }
        }
        c.expect_end()?;
    }
    if let Some(b) = current {
        return Err(ParseError::new(
            ParseErrorKind::Missing,
            last + 1,
            1,
            format!("block opened at line {} is not closed with `end`", b.line),
        ));
    }
    Ok(blocks)
}

fn set_once<T>(slot: &mut Option<T>, v: T) -> Result<(), ()> {
    if slot.is_some() {
        return Err(());
    }
    *slot = Some(v);
    Ok(())
}

fn fmt_list(v: &[BigRational]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

/// Prints a certificate as a block that [`parse_cert_file`] reads back.
pub fn format_certificate(cert: &Certificate<BigRational>, kind: BlockKind) -> String {
    let mut s = String::new();
    let point_key = if kind == BlockKind::DualPoint { "anchor" } else { "point" };
    let _ = writeln!(s, "{}", kind.keyword());
    let _ = writeln!(s, "  {point_key} = {}", fmt_vector(&cert.point));
    let _ = writeln!(s, "  xi = {}", fmt_list(&cert.xi));
    let _ = writeln!(s, "  tau = {}", fmt_list(&cert.tau));
    let _ = writeln!(s, "  rho = {}", fmt_list(&cert.rho));
    let _ = writeln!(s, "  eta = {}", cert.eta);
    let _ = writeln!(s, "  z = {}", fmt_vector(&cert.z));
    for (t, w) in &cert.weights {
        let trivial = w.len() == 1 && w[0] == BigRational::from_integer(1.into());
        if !trivial && !w.iter().all(Zero::is_zero) {
            let _ = writeln!(s, "  weights {t} = {}", fmt_list(w));
        }
    }
    s.push_str("end\n");
    s
}
