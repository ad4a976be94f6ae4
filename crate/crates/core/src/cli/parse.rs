//! Bra-ket expressions.
//!
//! ```text
//! expr    := [sign] term (('+' | '-') term)*
//! term    := [scalar ['*']] factor (('*' | 'x') factor)*
//! factor  := ket | '(' expr ')'
//! ket     := '|' occ_list ';' occ_list '>'
//! occ_list:= int (',' int)*
//! scalar  := (rational ['/sqrt' int] | decimal) ['i']
//! ```
//!
//! `*` and `x` between factors are tensor products (party-wise), so
//! `|0;1> x |1;0>` is `|0,1;1,0>`. A trailing `i` makes a scalar imaginary.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{BasisLabel, ModeLayout, PureState};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scalar {
    pub value: f64,
    pub imaginary: bool,
}

impl Scalar {
    pub fn to_complex(&self) -> Complex64 {
        if self.imaginary {
            Complex64::new(0.0, self.value)
        } else {
            Complex64::new(self.value, 0.0)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Factor {
    Ket(BasisLabel),
    Group(Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub negated: bool,
    pub scalar: Option<Scalar>,
    pub factors: Vec<(Pos, Factor)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub terms: Vec<(Pos, Term)>,
}

/// Source text together with its parse tree.
#[derive(Clone, Debug, PartialEq)]
pub struct StateExpression {
    pub source: String,
    pub expr: Expr,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ket(BasisLabel),
    Num(Scalar),
    Plus,
    Minus,
    Star,
    Cross,
    Open,
    Close,
    End,
}

fn syntax(pos: Pos, message: impl Into<String>) -> Error {
    Error::Syntax {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            chars: text.chars().peekable(),
            pos: Pos { line: 1, column: 1 },
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.bump();
        }
        s
    }

    fn int(&mut self, what: &str) -> Result<u32> {
        let at = self.pos;
        let d = self.digits();
        if d.is_empty() {
            return Err(syntax(at, format!("expected {what}")));
        }
        d.parse().map_err(|_| syntax(at, format!("{what} out of range")))
    }

    fn occ_list(&mut self) -> Result<Vec<u32>> {
        let mut occ = Vec::new();
        loop {
            self.skip_ws();
            occ.push(self.int("occupation number")?);
            self.skip_ws();
            if self.peek() == Some(',') {
                self.bump();
            } else {
                return Ok(occ);
            }
        }
    }

    fn ket(&mut self) -> Result<BasisLabel> {
        self.bump();
        let alice = self.occ_list()?;
        let at = self.pos;
        if self.bump() != Some(';') {
            return Err(syntax(at, "expected ';' between Alice and Bob occupations"));
        }
        let bob = self.occ_list()?;
        let at = self.pos;
        if self.bump() != Some('>') {
            return Err(syntax(at, "expected '>' closing the ket"));
        }
        Ok(BasisLabel::new(alice, bob))
    }

    fn number(&mut self) -> Result<Scalar> {
        let start = self.pos;
        let mut text = self.digits();
        let mut value;
        if self.peek() == Some('.') || matches!(self.peek(), Some('e' | 'E')) {
            if self.peek() == Some('.') {
                self.bump();
                text.push('.');
                text.push_str(&self.digits());
            }
            if matches!(self.peek(), Some('e' | 'E')) {
                self.bump();
                text.push('e');
                if let Some(c) = self.peek().filter(|c| *c == '+' || *c == '-') {
                    self.bump();
                    text.push(c);
                }
                let exp = self.digits();
                if exp.is_empty() {
                    return Err(syntax(self.pos, "expected exponent digits"));
                }
                text.push_str(&exp);
            }
            value = text
                .parse::<f64>()
                .map_err(|_| syntax(start, format!("bad number '{text}'")))?;
        } else {
            value = text.parse::<f64>().map_err(|_| syntax(start, "expected a number"))?;
            if self.peek() == Some('/') {
                let slash = self.pos;
                self.bump();
                if self.peek() != Some('s') {
                    let den = self.int("denominator")?;
                    if den == 0 {
                        return Err(syntax(slash, "division by zero"));
                    }
                    value /= f64::from(den);
                } else {
                    self.sqrt(slash, &mut value)?;
                }
            }
        }
        if self.peek() == Some('/') {
            let slash = self.pos;
            self.bump();
            self.sqrt(slash, &mut value)?;
        }
        let imaginary = self.peek() == Some('i');
        if imaginary {
            self.bump();
        }
        Ok(Scalar { value, imaginary })
    }

    fn sqrt(&mut self, slash: Pos, value: &mut f64) -> Result<()> {
        for want in "sqrt".chars() {
            if self.bump() != Some(want) {
                return Err(syntax(slash, "expected '/sqrt'"));
            }
        }
        self.skip_ws();
        let at = self.pos;
        let n = self.int("integer under the square root")?;
        if n == 0 {
            return Err(syntax(at, "division by zero"));
        }
        *value /= f64::from(n).sqrt();
        Ok(())
    }

    fn next(&mut self) -> Result<(Pos, Tok)> {
        self.skip_ws();
        let at = self.pos;
        let tok = match self.peek() {
            None => Tok::End,
            Some('|') => Tok::Ket(self.ket()?),
            Some(c) if c.is_ascii_digit() || c == '.' => Tok::Num(self.number()?),
            Some(c) => {
                self.bump();
                match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    'x' => Tok::Cross,
                    '(' => Tok::Open,
                    ')' => Tok::Close,
                    _ => return Err(syntax(at, format!("unexpected character '{c}'"))),
                }
            }
        };
        Ok((at, tok))
    }
}

struct Parser {
    toks: Vec<(Pos, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = Vec::new();
        let mut negated = false;
        match self.peek() {
            Tok::Plus => {
                self.bump();
            }
            Tok::Minus => {
                self.bump();
                negated = true;
            }
            _ => {}
        }
        loop {
            let at = self.pos();
            terms.push((at, self.term(negated)?));
            negated = match self.peek() {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => return Ok(Expr { terms }),
            };
            self.bump();
        }
    }

    fn term(&mut self, negated: bool) -> Result<Term> {
        let scalar = if let Tok::Num(s) = self.peek().clone() {
            self.bump();
            if *self.peek() == Tok::Star {
                self.bump();
            }
            Some(s)
        } else {
            None
        };
        let mut factors = vec![self.factor()?];
        while matches!(self.peek(), Tok::Star | Tok::Cross) {
            self.bump();
            factors.push(self.factor()?);
        }
        Ok(Term {
            negated,
            scalar,
            factors,
        })
    }

    fn factor(&mut self) -> Result<(Pos, Factor)> {
        let at = self.pos();
        match self.bump() {
            Tok::Ket(label) => Ok((at, Factor::Ket(label))),
            Tok::Open => {
                let inner = self.expr()?;
                let close = self.pos();
                if self.bump() != Tok::Close {
                    return Err(syntax(close, "expected ')'"));
                }
                Ok((at, Factor::Group(Box::new(inner))))
            }
            Tok::End => Err(syntax(at, "unexpected end of input, expected a ket")),
            _ => Err(syntax(at, "expected a ket or '('")),
        }
    }
}

/// Parses without evaluating.
pub fn parse_expression(text: &str) -> Result<StateExpression> {
    let mut lexer = Lexer::new(text);
    let mut toks = Vec::new();
    loop {
        let (at, tok) = lexer.next()?;
        let end = tok == Tok::End;
        toks.push((at, tok));
        if end {
            break;
        }
    }
    let mut parser = Parser { toks, at: 0 };
    let expr = parser.expr()?;
    if *parser.peek() != Tok::End {
        return Err(syntax(parser.pos(), "expected '+', '-' or end of input"));
    }
    Ok(StateExpression {
        source: text.to_string(),
        expr,
    })
}

type Amps = BTreeMap<BasisLabel, Complex64>;

struct Value {
    modes: (usize, usize),
    amps: Amps,
}

fn eval_expr(expr: &Expr) -> Result<Value> {
    let mut out: Option<Value> = None;
    for (at, term) in &expr.terms {
        let v = eval_term(term)?;
        match &mut out {
            None => out = Some(v),
            Some(acc) => {
                if acc.modes != v.modes {
                    return Err(syntax(
                        *at,
                        format!(
                            "mode-count mismatch: {}+{} modes against {}+{}",
                            v.modes.0, v.modes.1, acc.modes.0, acc.modes.1
                        ),
                    ));
                }
                for (l, a) in v.amps {
                    *acc.amps.entry(l).or_default() += a;
                }
            }
        }
    }
    Ok(out.expect("grammar guarantees a term"))
}

fn eval_term(term: &Term) -> Result<Value> {
    let mut coeff = term
        .scalar
        .as_ref()
        .map_or(Complex64::new(1.0, 0.0), Scalar::to_complex);
    if term.negated {
        coeff = -coeff;
    }
    let mut acc = Value {
        modes: (0, 0),
        amps: BTreeMap::from([(BasisLabel::new(Vec::new(), Vec::new()), coeff)]),
    };
    for (_, factor) in &term.factors {
        let v = match factor {
            Factor::Ket(label) => Value {
                modes: (label.alice().len(), label.bob().len()),
                amps: BTreeMap::from([(label.clone(), Complex64::new(1.0, 0.0))]),
            },
            Factor::Group(e) => eval_expr(e)?,
        };
        let mut amps = Amps::new();
        for (l1, a1) in &acc.amps {
            for (l2, a2) in &v.amps {
                *amps.entry(l1.concat(l2)).or_default() += a1 * a2;
            }
        }
        acc = Value {
            modes: (acc.modes.0 + v.modes.0, acc.modes.1 + v.modes.1),
            amps,
        };
    }
    Ok(acc)
}

impl StateExpression {
    /// The unnormalized state the expression denotes.
    pub fn evaluate(&self) -> Result<PureState> {
        let v = eval_expr(&self.expr)?;
        let layout = ModeLayout::new(v.modes.0, v.modes.1)?;
        PureState::make_ket(layout, v.amps.into_iter().map(|(l, a)| (a, l)))
    }
}

/// Parses and normalizes, returning the norm of the state as written.
pub fn parse_state(text: &str) -> Result<(PureState, f64)> {
    let raw = parse_expression(text)?.evaluate()?;
    let norm = raw.norm_sqr().sqrt();
    Ok((raw.normalized()?, norm))
}

/// Renders a state in the expression grammar. Amplitudes are printed with
/// the shortest decimal that reads back to the same `f64`, and complex
/// amplitudes as a real and an imaginary term on the same ket.
pub fn render(psi: &PureState) -> String {
    let mut out = String::new();
    for (label, amp) in psi.iter() {
        for (part, suffix) in [(amp.re, ""), (amp.im, "i")] {
            if part == 0.0 {
                continue;
            }
            let sign = if part < 0.0 { '-' } else { '+' };
            if out.is_empty() {
                if sign == '-' {
                    out.push('-');
                }
            } else {
                let _ = write!(out, " {sign} ");
            }
            let _ = write!(out, "{:?}{suffix} {label}", part.abs());
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states;

    #[test]
    fn standard_states_parse() {
        let (v, n) = parse_state("1/sqrt2 |0;1> + 1/sqrt2 |1;0>").unwrap();
        assert!((n - 1.0).abs() < 1e-15);
        assert!(v.max_abs_diff(&states::veper()) < 1e-15);
        let (e, n) = parse_state("|0,1;1,0> + |1,0;0,1>").unwrap();
        assert!((n - 2f64.sqrt()).abs() < 1e-15);
        assert!(e.max_abs_diff(&states::eepr()) < 1e-15);
        assert_eq!(parse_state("|0;0> - |0;0>").unwrap_err(), Error::EmptyState);
    }

    #[test]
    fn tensor_and_groups() {
        let (a, _) = parse_state("(|0;1> + |1;0>) x (|0;0> + |0;1> + |1;0> + |1;1>)").unwrap();
        let b = states::veper().tensor(&states::refbit_plus());
        assert!(a.max_abs_diff(&b) < 1e-15);
        let (c, _) = parse_state("|0;1> * |1;0>").unwrap();
        assert_eq!(c, PureState::basis(vec![0, 1], vec![1, 0]).unwrap());
    }

    #[test]
    fn scalars() {
        let (s, n) = parse_state("3/4/sqrt2 |0;0> + 0.5e0i |1;1>").unwrap();
        let want = (9.0 / 32.0 + 0.25f64).sqrt();
        assert!((n - want).abs() < 1e-15);
        assert!(s.amplitude(&BasisLabel::new(vec![1], vec![1])).im > 0.0);
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_state("|0;1> +\n  |1;0").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, column: 7, .. }), "{err:?}");
        let err = parse_state("|0;1> + |1,0;0>").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 1, column: 9, ref message } if message.contains("mode-count")));
        assert!(matches!(
            parse_state("2 |0;0> $").unwrap_err(),
            Error::Syntax { column: 9, .. }
        ));
        assert!(matches!(parse_state("1/0 |0;0>").unwrap_err(), Error::Syntax { .. }));
        assert!(matches!(parse_state("").unwrap_err(), Error::Syntax { .. }));
    }

    #[test]
    fn render_round_trips() {
        for psi in [states::veper(), states::psi_3d(), states::psi_2d_double_prime()] {
            let (back, n) = parse_state(&render(&psi)).unwrap();
            assert!((n - 1.0).abs() < 1e-12);
            assert!(back.max_abs_diff(&psi) < 1e-12);
        }
    }
}
