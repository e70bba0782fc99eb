//! State-construction expressions.
//!
//! ```text
//! expr   := ('+'|'-')? term (('+'|'-') term)*
//! term   := scalar? factor+
//! factor := 'vac' | 'a' '[' int ']' | 'b' '[' int ']' | '(' expr ')'
//! scalar := number | number 'i' | 'i'
//! ```
//!
//! Juxtaposed factors compose right to left, so `a[1] b[3] vac` is
//! `a†_1 b†_3 Ψ0`. The rightmost factor of a state term is `vac` or a
//! parenthesized state; every other factor is an operator: `a[k]`, `b[n]`, or
//! a parenthesized sum of operator terms such as `(a[1] + i a[-1])`.
//! Whitespace is insignificant.

use std::fmt;

use chainviz_core::{ChainParams, Complex64, FockState, ModeBasis};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("column {}: {msg}", .pos + 1)]
pub struct ExprError {
    /// byte offset into the source
    pub pos: usize,
    pub msg: String,
}

impl ExprError {
    fn new(pos: usize, msg: impl Into<String>) -> Self {
        Self {
            pos,
            msg: msg.into(),
        }
    }

    /// The source line with a caret under the error position.
    pub fn render(&self, src: &str) -> String {
        format!("{src}\n{}^ {}", " ".repeat(self.pos.min(src.len())), self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scalar {
    Real(f64),
    Imag(f64),
}

impl Scalar {
    pub fn value(self) -> Complex64 {
        match self {
            Scalar::Real(x) => Complex64::new(x, 0.0),
            Scalar::Imag(y) => Complex64::new(0.0, y),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Factor {
    Vac,
    /// `a†_k`
    Mode(i64),
    /// `b†_n`, 1-based site
    Site(i64),
    Group(StateExpr),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub scalar: Option<Scalar>,
    pub factors: Vec<Factor>,
}

/// Parsed expression: a signed sum of terms.
#[derive(Debug, Clone, PartialEq)]
pub struct StateExpr {
    pub terms: Vec<(Sign, Term)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    State,
    Operator,
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Scalar::Real(x) => write!(f, "{x}"),
            Scalar::Imag(1.0) => f.write_str("i"),
            Scalar::Imag(y) => write!(f, "{y}i"),
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Vac => f.write_str("vac"),
            Factor::Mode(k) => write!(f, "a[{k}]"),
            Factor::Site(n) => write!(f, "b[{n}]"),
            Factor::Group(e) => write!(f, "({e})"),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if let Some(s) = self.scalar {
            write!(f, "{s}")?;
            first = false;
        }
        for factor in &self.factors {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{factor}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Display for StateExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (sign, term)) in self.terms.iter().enumerate() {
            match (i, sign) {
                (0, Sign::Plus) => {}
                (0, Sign::Minus) => f.write_str("-")?,
                (_, Sign::Plus) => f.write_str(" + ")?,
                (_, Sign::Minus) => f.write_str(" - ")?,
            }
            write!(f, "{term}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64, bool),
    Ident(String),
    LBracket,
    RBracket,
    LParen,
    RParen,
    Plus,
    Minus,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'[' => out.push((i, Tok::LBracket)),
            b']' => out.push((i, Tok::RBracket)),
            b'(' => out.push((i, Tok::LParen)),
            b')' => out.push((i, Tok::RParen)),
            b'+' => out.push((i, Tok::Plus)),
            b'-' => out.push((i, Tok::Minus)),
            b'0'..=b'9' | b'.' => {
                let mut integral = true;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    integral &= bytes[i] != b'.';
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        integral = false;
                        i = j;
                    }
                }
                let text = &src[start..i];
                let value = text
                    .parse::<f64>()
                    .map_err(|_| ExprError::new(start, format!("malformed number '{text}'")))?;
                out.push((start, Tok::Num(value, integral)));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(ExprError::new(i, format!("unexpected character '{ch}'")));
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    at: usize,
    end: usize,
    params: &'a ChainParams,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t);
        self.at += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ExprError> {
        if self.peek() == Some(&want) {
            self.at += 1;
            Ok(())
        } else {
            Err(ExprError::new(self.pos(), format!("expected {what}")))
        }
    }

    fn starts_factor(&self) -> bool {
        match self.peek() {
            Some(Tok::LParen) => true,
            Some(Tok::Ident(s)) => matches!(s.as_str(), "vac" | "a" | "b"),
            _ => false,
        }
    }

    fn expr(&mut self) -> Result<(StateExpr, Kind), ExprError> {
        let start = self.pos();
        let mut terms = Vec::new();
        let mut kind = None;
        let mut sign = match self.peek() {
            Some(Tok::Plus) => {
                self.at += 1;
                Sign::Plus
            }
            Some(Tok::Minus) => {
                self.at += 1;
                Sign::Minus
            }
            _ => Sign::Plus,
        };
        loop {
            let term_pos = self.pos();
            let (term, k) = self.term()?;
            match kind {
                None => kind = Some(k),
                Some(prev) if prev != k => {
                    return Err(ExprError::new(
                        term_pos,
                        "cannot add a state and an operator",
                    ))
                }
                _ => {}
            }
            terms.push((sign, term));
            sign = match self.peek() {
                Some(Tok::Plus) => Sign::Plus,
                Some(Tok::Minus) => Sign::Minus,
                _ => break,
            };
            self.at += 1;
        }
        let kind = kind.ok_or_else(|| ExprError::new(start, "empty expression"))?;
        Ok((StateExpr { terms }, kind))
    }

    fn term(&mut self) -> Result<(Term, Kind), ExprError> {
        let scalar = match self.peek() {
            Some(Tok::Num(x, _)) => {
                let x = *x;
                self.at += 1;
                if matches!(self.peek(), Some(Tok::Ident(s)) if s == "i") {
                    self.at += 1;
                    Some(Scalar::Imag(x))
                } else {
                    Some(Scalar::Real(x))
                }
            }
            Some(Tok::Ident(s)) if s == "i" => {
                self.at += 1;
                Some(Scalar::Imag(1.0))
            }
            _ => None,
        };
        let mut factors = Vec::new();
        let mut kinds = Vec::new();
        while self.starts_factor() {
            let pos = self.pos();
            let (f, k) = self.factor()?;
            factors.push(f);
            kinds.push((pos, k));
        }
        let Some(&(_, last)) = kinds.last() else {
            let msg = match self.peek() {
                None => "unexpected end of expression, expected 'vac', 'a[..]', 'b[..]' or '('"
                    .to_string(),
                Some(Tok::Ident(s)) => format!("unknown name '{s}'"),
                Some(_) => "expected 'vac', 'a[..]', 'b[..]' or '('".to_string(),
            };
            return Err(ExprError::new(self.pos(), msg));
        };
        if let Some(&(pos, _)) = kinds[..kinds.len() - 1]
            .iter()
            .find(|(_, k)| *k == Kind::State)
        {
            return Err(ExprError::new(
                pos,
                "a state can only appear as the rightmost factor",
            ));
        }
        Ok((Term { scalar, factors }, last))
    }

    fn index(&mut self) -> Result<(usize, i64), ExprError> {
        self.expect(Tok::LBracket, "'['")?;
        let pos = self.pos();
        let negative = if self.peek() == Some(&Tok::Minus) {
            self.at += 1;
            true
        } else {
            false
        };
        let value = match self.bump() {
            Some(Tok::Num(x, true)) if *x <= 1e15 => *x as i64,
            _ => return Err(ExprError::new(pos, "expected an integer index")),
        };
        self.expect(Tok::RBracket, "']'")?;
        Ok((pos, if negative { -value } else { value }))
    }

    fn factor(&mut self) -> Result<(Factor, Kind), ExprError> {
        let pos = self.pos();
        match self.bump().cloned() {
            Some(Tok::Ident(s)) if s == "vac" => Ok((Factor::Vac, Kind::State)),
            Some(Tok::Ident(s)) if s == "a" => {
                let (ipos, k) = self.index()?;
                let h = self.params.max_mode();
                if k.abs() > h {
                    return Err(ExprError::new(
                        ipos,
                        format!(
                            "mode index {k} out of range -{h}..={h} for N = {}",
                            self.params.n_sites()
                        ),
                    ));
                }
                Ok((Factor::Mode(k), Kind::Operator))
            }
            Some(Tok::Ident(s)) if s == "b" => {
                let (ipos, n) = self.index()?;
                let max = self.params.n_sites() as i64;
                if !(1..=max).contains(&n) {
                    return Err(ExprError::new(
                        ipos,
                        format!("site {n} out of range 1..={max}"),
                    ));
                }
                Ok((Factor::Site(n), Kind::Operator))
            }
            Some(Tok::LParen) => {
                let (e, k) = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok((Factor::Group(e), k))
            }
            _ => Err(ExprError::new(pos, "expected a factor")),
        }
    }
}

/// Parses and type-checks `src` for a chain with `params.n_sites()` sites.
pub fn parse_state_expr(src: &str, params: &ChainParams) -> Result<StateExpr, ExprError> {
    if src.trim().is_empty() {
        return Err(ExprError::new(0, "empty expression"));
    }
    let toks = lex(src)?;
    let mut p = Parser {
        toks: &toks,
        at: 0,
        end: src.len(),
        params,
    };
    let (expr, kind) = p.expr()?;
    if p.at < toks.len() {
        let msg = match p.peek() {
            Some(Tok::RParen) => "unmatched ')'",
            _ => "unexpected input after expression",
        };
        return Err(ExprError::new(p.pos(), msg));
    }
    if kind != Kind::State {
        return Err(ExprError::new(
            src.len(),
            "operator chain must end in 'vac'",
        ));
    }
    Ok(expr)
}

fn coefficient(sign: Sign, scalar: Option<Scalar>) -> Complex64 {
    let c = scalar.map_or(Complex64::new(1.0, 0.0), Scalar::value);
    match sign {
        Sign::Plus => c,
        Sign::Minus => -c,
    }
}

fn combine(parts: Vec<(Complex64, FockState)>) -> chainviz_core::Result<FockState> {
    let refs: Vec<(Complex64, &FockState)> = parts.iter().map(|(c, s)| (*c, s)).collect();
    FockState::linear_combine(&refs)
}

fn apply_factor(
    factor: &Factor,
    state: &FockState,
    basis: &ModeBasis,
) -> chainviz_core::Result<FockState> {
    match factor {
        Factor::Mode(k) => state.apply_create(basis.params().mode(*k)?),
        Factor::Site(n) => state.apply_create_local(basis, *n),
        Factor::Group(op) => {
            let parts = op
                .terms
                .iter()
                .map(|(sign, term)| {
                    let mut s = state.clone();
                    for f in term.factors.iter().rev() {
                        s = apply_factor(f, &s, basis)?;
                    }
                    Ok((coefficient(*sign, term.scalar), s))
                })
                .collect::<chainviz_core::Result<Vec<_>>>()?;
            combine(parts)
        }
        Factor::Vac => unreachable!("type-checked: vac is never applied as an operator"),
    }
}

impl StateExpr {
    /// Builds the [`FockState`] this expression denotes.
    pub fn evaluate(&self, basis: &ModeBasis) -> chainviz_core::Result<FockState> {
        let parts = self
            .terms
            .iter()
            .map(|(sign, term)| {
                let (last, ops) = term.factors.split_last().expect("terms are non-empty");
                let mut s = match last {
                    Factor::Vac => FockState::vacuum(basis.params()),
                    Factor::Group(inner) => inner.evaluate(basis)?,
                    _ => unreachable!("type-checked: state terms end in a state"),
                };
                for f in ops.iter().rev() {
                    s = apply_factor(f, &s, basis)?;
                }
                Ok((coefficient(*sign, term.scalar), s))
            })
            .collect::<chainviz_core::Result<Vec<_>>>()?;
        combine(parts)
    }
}
