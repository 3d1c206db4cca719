//! The covariant expression language.
//!
//! ```text
//! relation := expr "=" ["-"] rational
//! expr     := ["-"] term { ("+" | "-") term }
//! term     := [ rational "*" ] factor { "*" factor }
//! factor   := atom | "[" expr { "@" expr } "]_" int | atom "^" int "_" int
//! rational := power { "*" power } [ "/" ( power | "(" power { "*" power } ")" ) ]
//! power    := int [ "^" ["-"] int ]
//! ```
//!
//! A bracket with one operand is the identity and must carry that operand's
//! dimension; with two operands it projects their tensor product.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::catalog::atom_dim;
use crate::error::ParseError;
use crate::rational::Rational;
use crate::sl2::tensor_index;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CovExpr {
    Atom(String),
    Const(Rational),
    Scale(Rational, Box<CovExpr>),
    Sum(Vec<CovExpr>),
    /// Ring product of factors; the result sits in the top component.
    Mul(Vec<CovExpr>),
    Proj(Box<CovExpr>, Box<CovExpr>, usize),
    /// Top component of the `k`-th power of an atom.
    TopPow(String, u32, usize),
}

impl CovExpr {
    /// sl2 dimension of the module the expression's value generates.
    pub fn dim(&self) -> usize {
        match self {
            CovExpr::Atom(a) => atom_dim(a).unwrap_or(0),
            CovExpr::Const(_) => 1,
            CovExpr::Scale(_, e) => e.dim(),
            CovExpr::Sum(ts) => ts.first().map_or(1, CovExpr::dim),
            CovExpr::Mul(fs) => fs.iter().map(|f| f.dim() - 1).sum::<usize>() + 1,
            CovExpr::Proj(_, _, d) | CovExpr::TopPow(_, _, d) => *d,
        }
    }

    /// Top-level summands paired with their coefficients.
    pub fn summands(&self) -> Vec<(Rational, CovExpr)> {
        match self {
            CovExpr::Sum(ts) => ts.iter().flat_map(CovExpr::summands).collect(),
            CovExpr::Scale(c, e) => e.summands().into_iter().map(|(k, t)| (c * k, t)).collect(),
            CovExpr::Const(c) => vec![(c.clone(), CovExpr::Const(Rational::one()))],
            other => vec![(Rational::one(), other.clone())],
        }
    }

    /// Rebuilds a sum from coefficient-term pairs, dropping zero coefficients.
    pub fn from_summands(parts: &[(Rational, CovExpr)]) -> CovExpr {
        let terms: Vec<CovExpr> = parts
            .iter()
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, t)| match t {
                CovExpr::Const(k) if k.is_one() => CovExpr::Const(c.clone()),
                _ if c.is_one() => t.clone(),
                _ => CovExpr::Scale(c.clone(), Box::new(t.clone())),
            })
            .collect();
        match terms.len() {
            0 => CovExpr::Const(Rational::zero()),
            1 => terms.into_iter().next().unwrap(),
            _ => CovExpr::Sum(terms),
        }
    }

    /// Atom names in order of appearance.
    pub fn atoms(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<String>) {
        match self {
            CovExpr::Atom(a) | CovExpr::TopPow(a, _, _) => out.push(a.clone()),
            CovExpr::Const(_) => {}
            CovExpr::Scale(_, e) => e.collect_atoms(out),
            CovExpr::Sum(ts) | CovExpr::Mul(ts) => ts.iter().for_each(|t| t.collect_atoms(out)),
            CovExpr::Proj(a, b, _) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }
}

// ---------------------------------------------------------------- printing

fn factor_int(mut n: BigInt) -> Vec<(BigInt, u32)> {
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut e = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

fn fmt_factored(n: &BigInt) -> Vec<String> {
    factor_int(n.clone())
        .into_iter()
        .map(|(p, e)| {
            if e == 1 {
                p.to_string()
            } else {
                format!("{p}^{e}")
            }
        })
        .collect()
}

/// Factored form of a positive rational, e.g. `2^4*3^3*5/7`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let num = fmt_factored(&r.numer().abs());
    let den = fmt_factored(r.denom());
    let top = if num.is_empty() {
        "1".to_string()
    } else {
        num.join("*")
    };
    match den.len() {
        0 => top,
        1 => format!("{top}/{}", den[0]),
        _ => format!("{top}/({})", den.join("*")),
    }
}

fn fmt_signed_rational(r: &Rational) -> String {
    if r.is_negative() {
        format!("-{}", format_rational(&-r.clone()))
    } else {
        format_rational(r)
    }
}

impl fmt::Display for CovExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CovExpr::Atom(a) => write!(f, "{a}"),
            CovExpr::Const(c) => write!(f, "{}", fmt_signed_rational(c)),
            CovExpr::TopPow(a, k, d) => write!(f, "{a}^{k}_{d}"),
            CovExpr::Proj(a, b, d) => write!(f, "[{a} @ {b}]_{d}"),
            CovExpr::Mul(fs) => {
                let parts: Vec<String> = fs.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", parts.join(" * "))
            }
            CovExpr::Scale(c, e) => write_term(f, c, e, true),
            CovExpr::Sum(ts) => {
                for (i, t) in ts.iter().enumerate() {
                    let (c, body) = match t {
                        CovExpr::Scale(c, e) => (c.clone(), Some(e.as_ref())),
                        CovExpr::Const(c) => (c.clone(), None),
                        other => (Rational::one(), Some(other)),
                    };
                    if i > 0 {
                        write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
                    } else if c.is_negative() {
                        write!(f, "-")?;
                    }
                    let c = c.abs();
                    match body {
                        None => write!(f, "{}", format_rational(&c))?,
                        Some(e) => write_term(f, &c, e, false)?,
                    }
                }
                Ok(())
            }
        }
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, c: &Rational, e: &CovExpr, signed: bool) -> fmt::Result {
    let c = if signed && c.is_negative() {
        write!(f, "-")?;
        c.abs()
    } else {
        c.clone()
    };
    let body = match e {
        CovExpr::Sum(_) => format!("[{e}]_{}", e.dim()),
        _ => e.to_string(),
    };
    if c.is_one() {
        write!(f, "{body}")
    } else {
        write!(f, "{} * {body}", format_rational(&c))
    }
}

// ---------------------------------------------------------------- parsing

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((start, Tok::Int(s.parse().unwrap())));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "[]_@+-*/^=()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(ParseError::Syntax {
                pos: i,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.offset(),
            message: message.into(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => self.err("expected integer"),
        }
    }

    fn small(&mut self) -> Result<usize, ParseError> {
        let n = self.int()?;
        match n.to_usize() {
            Some(v) => Ok(v),
            None => self.err("integer out of range"),
        }
    }

    fn power(&mut self) -> Result<Rational, ParseError> {
        let base = Rational::from_integer(self.int()?);
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let e = self.small()? as i32;
        if neg && base.is_zero() {
            return self.err("zero to a negative power");
        }
        Ok(base.pow(if neg { -e } else { e }))
    }

    /// Product of powers; stops before a `*` that is not followed by an int.
    fn power_product(&mut self) -> Result<Rational, ParseError> {
        let mut acc = self.power()?;
        while self.peek() == Some(&Tok::Sym('*'))
            && matches!(self.toks.get(self.pos + 1), Some((_, Tok::Int(_))))
        {
            self.pos += 1;
            acc *= self.power()?;
        }
        Ok(acc)
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let num = self.power_product()?;
        if !self.eat('/') {
            return Ok(num);
        }
        let den = if self.eat('(') {
            let d = self.power_product()?;
            self.expect(')')?;
            d
        } else {
            self.power()?
        };
        if den.is_zero() {
            return self.err("division by zero");
        }
        Ok(num / den)
    }

    fn expr(&mut self) -> Result<CovExpr, ParseError> {
        let mut parts = Vec::new();
        let mut sign = if self.eat('-') {
            -Rational::one()
        } else {
            Rational::one()
        };
        loop {
            let (c, t) = self.term()?;
            parts.push((sign * c, t));
            if self.eat('+') {
                sign = Rational::one();
            } else if self.eat('-') {
                sign = -Rational::one();
            } else {
                break;
            }
        }
        let dims: Vec<usize> = parts.iter().map(|(_, t)| t.dim()).collect();
        if dims.iter().any(|&d| d != dims[0]) {
            return Err(ParseError::IllegalDimension(format!(
                "summands of differing dimensions {dims:?}"
            )));
        }
        Ok(CovExpr::from_summands(&parts))
    }

    fn term(&mut self) -> Result<(Rational, CovExpr), ParseError> {
        let mut coef = Rational::one();
        let mut factors = Vec::new();
        if matches!(self.peek(), Some(Tok::Int(_))) {
            coef = self.rational()?;
            if !self.eat('*') {
                return Ok((coef, CovExpr::Const(Rational::one())));
            }
        }
        factors.push(self.factor()?);
        while self.eat('*') {
            if matches!(self.peek(), Some(Tok::Int(_))) {
                coef *= self.rational()?;
                continue;
            }
            factors.push(self.factor()?);
        }
        let body = if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            CovExpr::Mul(factors)
        };
        Ok((coef, body))
    }

    fn factor(&mut self) -> Result<CovExpr, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let n = atom_dim(&name).ok_or_else(|| ParseError::UnknownAtom(name.clone()))?;
                if !self.eat('^') {
                    return Ok(CovExpr::Atom(name));
                }
                let k = self.small()? as u32;
                self.expect('_')?;
                let d = self.small()?;
                if k == 0 || d != k as usize * (n - 1) + 1 {
                    return Err(ParseError::IllegalDimension(format!(
                        "{name}^{k} has top dimension {}, not {d}",
                        k as usize * (n - 1) + 1
                    )));
                }
                Ok(CovExpr::TopPow(name, k, d))
            }
            Some(Tok::Sym('[')) => {
                self.pos += 1;
                let mut ops = vec![self.expr()?];
                while self.eat('@') {
                    ops.push(self.expr()?);
                }
                self.expect(']')?;
                self.expect('_')?;
                let d = self.small()?;
                match ops.len() {
                    1 => {
                        let e = ops.pop().unwrap();
                        if e.dim() != d {
                            return Err(ParseError::IllegalDimension(format!(
                                "bracket of dimension {} projected to {d}",
                                e.dim()
                            )));
                        }
                        Ok(e)
                    }
                    2 => {
                        let b = ops.pop().unwrap();
                        let a = ops.pop().unwrap();
                        if tensor_index(a.dim(), b.dim(), d).is_none() {
                            return Err(ParseError::IllegalDimension(format!(
                                "no component of dimension {d} in {} x {}",
                                a.dim(),
                                b.dim()
                            )));
                        }
                        Ok(CovExpr::Proj(Box::new(a), Box::new(b), d))
                    }
                    _ => self.err("a bracket takes at most two operands"),
                }
            }
            _ => self.err("expected atom or bracket"),
        }
    }

    fn done(&self) -> Result<(), ParseError> {
        if self.pos < self.toks.len() {
            self.err("trailing input")
        } else {
            Ok(())
        }
    }
}

fn parser(src: &str) -> Result<Parser, ParseError> {
    Ok(Parser {
        toks: lex(src)?,
        pos: 0,
        end: src.len(),
    })
}

pub fn parse_expr(src: &str) -> Result<CovExpr, ParseError> {
    let mut p = parser(src)?;
    let e = p.expr()?;
    p.done()?;
    Ok(e)
}

/// Parses `expr = rhs` into the expression and its right-hand side.
pub fn parse_relation(src: &str) -> Result<(CovExpr, Rational), ParseError> {
    let mut p = parser(src)?;
    let e = p.expr()?;
    p.expect('=')?;
    let neg = p.eat('-');
    let r = p.rational()?;
    p.done()?;
    if !r.is_zero() && e.dim() != 1 {
        return Err(ParseError::IllegalDimension(format!(
            "non-zero constant equated to a {}-dimensional expression",
            e.dim()
        )));
    }
    Ok((e, if neg { -r } else { r }))
}

pub fn print_relation(e: &CovExpr, rhs: &Rational) -> String {
    format!("{e} = {}", fmt_signed_rational(rhs))
}

// ---------------------------------------------------------------- records

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RecordKind {
    Quadratic,
    Kummer,
}

/// A relation together with its annotations.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityRecord {
    pub id: String,
    pub kind: RecordKind,
    pub grade: (i64, i64),
    pub dim: usize,
    pub expr: CovExpr,
    pub rhs: Rational,
}

/// Grades at which quadratic relations are filed.
pub const GRADES: [(i64, i64); 14] = [
    (0, 0),
    (2, 2),
    (3, 2),
    (4, 2),
    (5, 2),
    (6, 2),
    (3, 4),
    (4, 4),
    (5, 4),
    (6, 4),
    (7, 4),
    (8, 4),
    (9, 4),
    (10, 4),
];

impl IdentityRecord {
    /// The record line in canonical form.
    pub fn to_line(&self) -> String {
        let kind = match self.kind {
            RecordKind::Quadratic => "",
            RecordKind::Kummer => " kind=kummer",
        };
        format!(
            "{}  # id={}{kind} grade=({},{}) dim={}",
            print_relation(&self.expr, &self.rhs),
            self.id,
            self.grade.0,
            self.grade.1,
            self.dim
        )
    }
}

fn annotation_err(line: usize, message: String) -> ParseError {
    ParseError::Syntax { pos: line, message }
}

/// Parses one record line `relation  # id=.. [kind=kummer] grade=(s,t) dim=d`.
/// Errors report byte offsets within the relation, or the line number for
/// annotation problems.
pub fn parse_record(line: &str, lineno: usize) -> Result<IdentityRecord, ParseError> {
    let (rel, ann) = line
        .split_once('#')
        .ok_or_else(|| annotation_err(lineno, "missing `#` annotation".into()))?;
    let (expr, rhs) = parse_relation(rel)?;
    let mut id = None;
    let mut grade = None;
    let mut dim = None;
    let mut kind = RecordKind::Quadratic;
    for field in ann.split_whitespace() {
        let (k, v) = field
            .split_once('=')
            .ok_or_else(|| annotation_err(lineno, format!("bad annotation `{field}`")))?;
        match k {
            "id" => id = Some(v.to_string()),
            "kind" if v == "kummer" => kind = RecordKind::Kummer,
            "grade" => {
                let inner = v.trim_start_matches('(').trim_end_matches(')');
                let (s, t) = inner
                    .split_once(',')
                    .ok_or_else(|| annotation_err(lineno, format!("bad grade `{v}`")))?;
                let parse = |x: &str| {
                    x.trim()
                        .parse::<i64>()
                        .map_err(|_| annotation_err(lineno, format!("bad grade `{v}`")))
                };
                grade = Some((parse(s)?, parse(t)?));
            }
            "dim" => {
                dim = Some(
                    v.parse::<usize>()
                        .map_err(|_| annotation_err(lineno, format!("bad dim `{v}`")))?,
                )
            }
            _ => {
                return Err(annotation_err(
                    lineno,
                    format!("unknown annotation `{field}`"),
                ))
            }
        }
    }
    let id = id.ok_or_else(|| annotation_err(lineno, "missing id".into()))?;
    let grade = grade.ok_or_else(|| annotation_err(lineno, "missing grade".into()))?;
    let dim = dim.ok_or_else(|| annotation_err(lineno, "missing dim".into()))?;
    if kind == RecordKind::Quadratic && !GRADES.contains(&grade) {
        return Err(annotation_err(
            lineno,
            format!("grade {grade:?} is not a relation grade"),
        ));
    }
    if dim != expr.dim() {
        return Err(ParseError::IllegalDimension(format!(
            "record {id} annotated dim={dim} but the expression has dimension {}",
            expr.dim()
        )));
    }
    Ok(IdentityRecord {
        id,
        kind,
        grade,
        dim,
        expr,
        rhs,
    })
}

/// Parses a catalog file; blank lines and lines starting with `#` are skipped.
pub fn parse_catalog(text: &str) -> Result<Vec<IdentityRecord>, (usize, ParseError)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| parse_record(l, i + 1).map_err(|e| (i + 1, e)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    #[test]
    fn parses_hole() {
        let (e, r) = parse_relation("[P5 @ P4]_2 = 0").unwrap();
        assert_eq!(
            e,
            CovExpr::Proj(
                Box::new(CovExpr::Atom("P5".into())),
                Box::new(CovExpr::Atom("P4".into())),
                2
            )
        );
        assert!(r.is_zero());
    }

    #[test]
    fn parses_factored_constant() {
        let (_, r) = parse_relation("[P5 @ P5]_1 = 2^-4 * 3^-2").unwrap();
        assert_eq!(r, ratio(1, 144));
        let (_, r) = parse_relation("[P5 @ P5]_1 = 2^4*3^3*5/7").unwrap();
        assert_eq!(r, ratio(2160, 7));
        let (_, r) = parse_relation("[P5 @ P5]_1 = 2^9*3/(5*13)").unwrap();
        assert_eq!(r, ratio(1536, 65));
    }

    #[test]
    fn parses_nested_projection() {
        let e = parse_expr("[G @ [P5 @ P4]_8]_2").unwrap();
        match e {
            CovExpr::Proj(a, b, 2) => {
                assert_eq!(*a, CovExpr::Atom("G".into()));
                assert!(matches!(*b, CovExpr::Proj(_, _, 8)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parses_scaled_sums_and_products() {
        let e = parse_expr("[P5 @ P5]_5 + 2^-2*3^-1 * P5").unwrap();
        let s = e.summands();
        assert_eq!(s.len(), 2);
        assert_eq!(s[1].0, ratio(1, 12));
        let e = parse_expr("G2_1 * [P3 @ P3]_1 * [P3 @ P3]_1").unwrap();
        assert!(matches!(e, CovExpr::Mul(ref v) if v.len() == 3));
        assert_eq!(e.dim(), 1);
        assert_eq!(
            parse_expr("P3^3_7").unwrap(),
            CovExpr::TopPow("P3".into(), 3, 7)
        );
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_expr("[P5 @ Q7]_3"),
            Err(ParseError::UnknownAtom(_))
        ));
        assert!(matches!(
            parse_expr("[P5 @ P4]_3"),
            Err(ParseError::IllegalDimension(_))
        ));
        assert!(matches!(
            parse_expr("P3^3_5"),
            Err(ParseError::IllegalDimension(_))
        ));
        assert!(matches!(
            parse_expr("[P5 @ P4"),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_expr("P5 + P4"),
            Err(ParseError::IllegalDimension(_))
        ));
        assert!(matches!(
            parse_relation("P5 = 3"),
            Err(ParseError::IllegalDimension(_))
        ));
        match parse_expr("[P5 @ P4]_2 $") {
            Err(ParseError::Syntax { pos, .. }) => assert_eq!(pos, 12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_operand_bracket_is_identity() {
        assert_eq!(parse_expr("[G]_7").unwrap(), CovExpr::Atom("G".into()));
        assert!(parse_expr("[G]_5").is_err());
    }

    #[test]
    fn print_round_trips() {
        for src in [
            "[P5 @ P5]_1 = 1/(2^4*3^2)",
            "[P5 @ P5]_5 + 1/(2^2*3) * P5 = 0",
            "P2 - 2^5*3^3*5 * [G @ [P5 @ P4]_8]_2 - 2^4*3^3*5/7 * [G @ [P5 @ P4]_6]_2 = 0",
            "-[P3 @ P3]_1 = 1/2^2",
            "G2_1 * [P3 @ P3]_1 * P1 + 3 * [G2_5 @ P3^2_5]_1 = 0",
        ] {
            let (e, r) = parse_relation(src).unwrap();
            let printed = print_relation(&e, &r);
            assert_eq!(printed, src);
        }
    }

    #[test]
    fn factored_format() {
        assert_eq!(format_rational(&rat(2160)), "2^4*3^3*5");
        assert_eq!(format_rational(&ratio(1, 144)), "1/(2^4*3^2)");
        assert_eq!(format_rational(&ratio(3, 7)), "3/7");
        assert_eq!(format_rational(&rat(1)), "1");
        assert_eq!(format_rational(&rat(211)), "211");
    }

    #[test]
    fn record_line() {
        let line = "[P5 @ P4]_2 = 0  # id=r02 grade=(0,0) dim=2";
        let rec = parse_record(line, 1).unwrap();
        assert_eq!(rec.grade, (0, 0));
        assert_eq!(rec.to_line(), line);
        assert!(parse_record("[P5 @ P4]_2 = 0  # id=x grade=(1,1) dim=2", 1).is_err());
        assert!(parse_record("[P5 @ P4]_2 = 0  # id=x grade=(0,0) dim=3", 1).is_err());
    }
}
