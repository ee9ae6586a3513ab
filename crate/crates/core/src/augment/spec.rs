//! The augmentation pipeline language.
//!
//! ```text
//! expr  := "x" | ident "(" expr ")"
//! ident := GN | F | PR | CR | C | QR_X | QR_Y | QR_Z | QR_XYZ | real | abs
//! ```
//!
//! Whitespace is ignored between tokens. Subscript braces are accepted and
//! flattened, so `QR_{Z}` is the same operator as `QR_Z`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::qcore::AxisMode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    GaussianNoise,
    Flip,
    PerfectRotation,
    ClassicalRotation,
    Crop,
    Quantum(AxisMode),
    Real,
    Abs,
}

impl Op {
    pub fn name(self) -> &'static str {
        match self {
            Op::GaussianNoise => "GN",
            Op::Flip => "F",
            Op::PerfectRotation => "PR",
            Op::ClassicalRotation => "CR",
            Op::Crop => "C",
            Op::Quantum(AxisMode::X) => "QR_X",
            Op::Quantum(AxisMode::Y) => "QR_Y",
            Op::Quantum(AxisMode::Z) => "QR_Z",
            Op::Quantum(AxisMode::Xyz) => "QR_XYZ",
            Op::Real => "real",
            Op::Abs => "abs",
        }
    }

    fn from_ident(ident: &str) -> Option<Op> {
        let flat: String = ident.chars().filter(|c| *c != '{' && *c != '}').collect();
        Some(match flat.as_str() {
            "GN" => Op::GaussianNoise,
            "F" => Op::Flip,
            "PR" => Op::PerfectRotation,
            "CR" => Op::ClassicalRotation,
            "C" => Op::Crop,
            "QR_X" => Op::Quantum(AxisMode::X),
            "QR_Y" => Op::Quantum(AxisMode::Y),
            "QR_Z" => Op::Quantum(AxisMode::Z),
            "QR_XYZ" => Op::Quantum(AxisMode::Xyz),
            "real" => Op::Real,
            "abs" => Op::Abs,
            _ => return None,
        })
    }

    pub fn is_classical(self) -> bool {
        matches!(
            self,
            Op::GaussianNoise | Op::Flip | Op::PerfectRotation | Op::ClassicalRotation | Op::Crop
        )
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Expression tree. Every node has exactly one argument, so the tree is a
/// chain ending in the input `x`. Equality ignores source offsets.
#[derive(Debug, Clone)]
pub enum Expr {
    Input,
    Apply { op: Op, offset: usize, arg: Box<Expr> },
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Expr::Input, Expr::Input) => true,
            (Expr::Apply { op: a, arg: x, .. }, Expr::Apply { op: b, arg: y, .. }) => a == b && x == y,
            _ => false,
        }
    }
}

impl Eq for Expr {}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Input => f.write_str("x"),
            Expr::Apply { op, arg, .. } => write!(f, "{op}({arg})"),
        }
    }
}

/// A parsed and validated augmentation pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentSpec {
    root: Expr,
}

impl AugmentSpec {
    /// The identity pipeline `x`.
    pub fn baseline() -> Self {
        Self { root: Expr::Input }
    }

    pub fn root(&self) -> &Expr {
        &self.root
    }

    pub fn is_baseline(&self) -> bool {
        self.root == Expr::Input
    }

    /// Operators innermost first, i.e. in execution order.
    pub fn ops(&self) -> Vec<Op> {
        let mut ops = Vec::new();
        let mut node = &self.root;
        while let Expr::Apply { op, arg, .. } = node {
            ops.push(*op);
            node = arg;
        }
        ops.reverse();
        ops
    }

    pub fn contains_quantum(&self) -> bool {
        self.ops().iter().any(|op| matches!(op, Op::Quantum(_)))
    }
}

impl fmt::Display for AugmentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

impl FromStr for AugmentSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_spec(s)
    }
}

pub fn parse_spec(text: &str) -> Result<AugmentSpec> {
    parse_with(text, false)
}

/// Like [`parse_spec`] but accepts `abs` over a chain of `QR_Z` rotations.
/// That form is the identity on nonnegative images and is only useful as
/// the first stage of a composed mechanism such as DP noising.
pub fn parse_spec_permissive(text: &str) -> Result<AugmentSpec> {
    parse_with(text, true)
}

fn parse_with(text: &str, allow_abs_z: bool) -> Result<AugmentSpec> {
    let mut p = Parser { src: text, pos: 0 };
    let root = p.expr()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.error("unexpected trailing input"));
    }
    validate(&root, allow_abs_z)?;
    Ok(AugmentSpec { root })
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn ident(&mut self) -> &str {
        let start = self.pos;
        let len = self.src[start..]
            .find(|c: char| !(c.is_ascii_alphanumeric() || matches!(c, '_' | '{' | '}')))
            .unwrap_or(self.src.len() - start);
        self.pos += len;
        &self.src[start..start + len]
    }

    fn expect(&mut self, ch: char) -> Result<()> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(ch) {
            self.pos += ch.len_utf8();
            Ok(())
        } else {
            let found = self.src[self.pos..]
                .chars()
                .next()
                .map_or("end of input".to_string(), |c| format!("'{c}'"));
            Err(self.error(format!("expected '{ch}', found {found}")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        self.skip_ws();
        let start = self.pos;
        let ident = self.ident().to_string();
        if ident.is_empty() {
            return Err(self.error("expected an operator or 'x'"));
        }
        if ident == "x" {
            return Ok(Expr::Input);
        }
        let Some(op) = Op::from_ident(&ident) else {
            return Err(Error::Syntax {
                offset: start,
                message: format!("unknown operator '{ident}'"),
            });
        };
        self.expect('(')?;
        let arg = self.expr()?;
        self.expect(')')?;
        Ok(Expr::Apply {
            op,
            offset: start,
            arg: Box::new(arg),
        })
    }
}

#[derive(Clone, Copy)]
enum Kind {
    Pixels,
    /// Unprojected amplitudes; `z_only` if every rotation so far was `QR_Z`.
    Amplitudes { z_only: bool },
}

fn validate(expr: &Expr, allow_abs_z: bool) -> Result<Kind> {
    let Expr::Apply { op, arg, offset } = expr else {
        return Ok(Kind::Pixels);
    };
    let inner = validate(arg, allow_abs_z)?;
    let at = |msg: String| Error::Semantic(format!("{msg} (at byte {offset})"));
    match (op, inner) {
        (op, Kind::Pixels) if op.is_classical() => Ok(Kind::Pixels),
        (op, Kind::Amplitudes { .. }) if op.is_classical() => Err(at(format!(
            "{op} cannot act on an unprojected quantum state; wrap it in real() or abs()"
        ))),
        (Op::Quantum(mode), Kind::Pixels) => Ok(Kind::Amplitudes {
            z_only: *mode == AxisMode::Z,
        }),
        (Op::Quantum(mode), Kind::Amplitudes { z_only }) => Ok(Kind::Amplitudes {
            z_only: z_only && *mode == AxisMode::Z,
        }),
        (Op::Real | Op::Abs, Kind::Pixels) => Err(at(format!(
            "{op}() of classical data is the identity; it needs a QR_* operand"
        ))),
        (Op::Abs, Kind::Amplitudes { z_only: true }) if !allow_abs_z => Err(at(
            "abs(QR_Z(...)) is the identity on real images".to_string(),
        )),
        (Op::Real | Op::Abs, Kind::Amplitudes { .. }) => Ok(Kind::Pixels),
        _ => unreachable!("all operator kinds covered"),
    }
}
