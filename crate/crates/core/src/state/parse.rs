//! Recursive-descent parser for Dirac-notation state expressions such as
//! `1/2|00> + sqrt(3)/2|11>`.
//!
//! ```text
//! state  = [ "+" | "-" ] term { ("+" | "-") term } ;
//! term   = [ coeff [ "*" ] ] ket ;
//! ket    = "|" digit { digit } ">" ;
//! coeff  = factor { ("*" | "/") factor } ;
//! factor = integer | "sqrt(" integer ")" | "i" | "(" coeff { ("+"|"-") coeff } ")" ;
//! ```
//!
//! Whitespace between tokens is ignored. Coefficients are evaluated in
//! double precision as they are read.

use num_complex::Complex64;

use super::PureState;
use crate::error::{Error, Result};

/// A state produced by [`parse_state`], together with any warnings raised
/// while building it.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedState {
    pub state: PureState,
    pub warnings: Vec<String>,
}

/// Warning code attached when the written amplitudes were not normalized.
pub const WARN_RENORMALIZED: &str = "input-renormalized";

const NORM_WARN_TOLERANCE: f64 = 1e-9;

/// Parses a state expression. With `dim` absent, the local dimension is one
/// more than the largest digit appearing in any ket (at least 2).
pub fn parse_state(expr: &str, dim: Option<usize>) -> Result<ParsedState> {
    let terms = Parser::new(expr).state()?;

    let sites = terms[0].digits.len();
    if let Some(t) = terms.iter().find(|t| t.digits.len() != sites) {
        return Err(Error::InconsistentKetLength {
            pos: t.pos,
            expected: sites,
            found: t.digits.len(),
        });
    }

    let max_digit = terms
        .iter()
        .flat_map(|t| t.digits.iter().copied())
        .max()
        .unwrap_or(0);
    let d = match dim {
        Some(d) => {
            if d < 2 {
                return Err(Error::InvalidDimension(d));
            }
            if max_digit >= d {
                return Err(Error::DigitOutOfRange {
                    digit: max_digit,
                    dim: d,
                });
            }
            d
        }
        None => (max_digit + 1).max(2),
    };

    let dims = vec![d; sites];
    let size = super::checked_size(&dims)?;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); size];
    for t in &terms {
        let idx = t.digits.iter().fold(0usize, |acc, &k| acc * d + k);
        amplitudes[idx] += t.coeff;
    }

    let (state, norm) = PureState::normalize(dims, amplitudes)?;
    let mut warnings = Vec::new();
    if (norm - 1.0).abs() > NORM_WARN_TOLERANCE {
        warnings.push(WARN_RENORMALIZED.to_string());
    }
    Ok(ParsedState { state, warnings })
}

/// Writes a state back as an expression accepted by [`parse_state`].
///
/// Amplitudes are emitted as decimal fractions carrying the shortest
/// round-trip representation of each component. Terms with modulus at or
/// below the component threshold are dropped.
pub fn render_state(state: &PureState) -> String {
    let mut out = String::new();
    for comp in state.components() {
        let c = comp.coefficient;
        let negate = c.re < 0.0 || (c.re == 0.0 && c.im < 0.0);
        let c = if negate { -c } else { c };
        if out.is_empty() {
            if negate {
                out.push('-');
            }
        } else {
            out.push_str(if negate { " - " } else { " + " });
        }
        out.push_str(&render_coefficient(c));
        out.push('|');
        for k in &comp.digits {
            out.push(char::from_digit(*k as u32, 10).expect("digit below 10"));
        }
        out.push('>');
    }
    out
}

// `c` has re > 0, or re == 0 and im > 0.
fn render_coefficient(c: Complex64) -> String {
    if c.im == 0.0 {
        render_real(c.re)
    } else if c.re == 0.0 {
        format!("{}*i", render_real(c.im))
    } else {
        let sign = if c.im < 0.0 { '-' } else { '+' };
        format!(
            "({} {} {}*i)",
            render_real(c.re),
            sign,
            render_real(c.im.abs())
        )
    }
}

// Non-negative x as `integer` or `integer/10^k`.
fn render_real(x: f64) -> String {
    let s = format!("{}", x.abs());
    match s.split_once('.') {
        None => s,
        Some((int, frac)) => {
            let digits = format!("{int}{frac}");
            let numer = digits.trim_start_matches('0');
            let numer = if numer.is_empty() { "0" } else { numer };
            format!("{numer}/1{}", "0".repeat(frac.len()))
        }
    }
}

struct Term {
    pos: usize,
    coeff: Complex64,
    digits: Vec<usize>,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    // Next non-whitespace byte after the one at the cursor.
    fn peek_second(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src[(self.pos + 1).min(self.src.len())..]
            .iter()
            .copied()
            .find(|b| !b.is_ascii_whitespace())
    }

    fn expect(&mut self, byte: u8) -> Result<()> {
        match self.peek() {
            Some(b) if b == byte => {
                self.pos += 1;
                Ok(())
            }
            Some(b) => Err(Error::syntax(
                self.pos,
                format!("expected '{}', found '{}'", byte as char, b as char),
            )),
            None => Err(Error::syntax(
                self.pos,
                format!("expected '{}', found end of input", byte as char),
            )),
        }
    }

    fn state(&mut self) -> Result<Vec<Term>> {
        if self.peek().is_none() {
            return Err(Error::syntax(self.pos, "empty expression"));
        }
        let mut terms = Vec::new();
        let mut sign = 1.0;
        match self.peek() {
            Some(b'+') => self.pos += 1,
            Some(b'-') => {
                self.pos += 1;
                sign = -1.0;
            }
            _ => {}
        }
        loop {
            let mut term = self.term()?;
            term.coeff *= sign;
            terms.push(term);
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1.0;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1.0;
                }
                Some(b) => {
                    return Err(Error::syntax(
                        self.pos,
                        format!("expected '+', '-' or end of input, found '{}'", b as char),
                    ))
                }
            }
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<Term> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let coeff = if self.peek() == Some(b'|') {
            Complex64::new(1.0, 0.0)
        } else {
            let c = self.coeff()?;
            if self.peek() == Some(b'*') {
                self.pos += 1;
            }
            c
        };
        let digits = self.ket()?;
        Ok(Term {
            pos: start,
            coeff,
            digits,
        })
    }

    fn ket(&mut self) -> Result<Vec<usize>> {
        self.expect(b'|')?;
        let mut digits = Vec::new();
        loop {
            self.skip_ws();
            match self.src.get(self.pos) {
                Some(b) if b.is_ascii_digit() => {
                    digits.push((b - b'0') as usize);
                    self.pos += 1;
                }
                Some(b'>') if !digits.is_empty() => {
                    self.pos += 1;
                    return Ok(digits);
                }
                Some(b'>') => return Err(Error::syntax(self.pos, "empty ket")),
                Some(&b) => {
                    return Err(Error::syntax(
                        self.pos,
                        format!("unexpected '{}' inside ket", b as char),
                    ))
                }
                None => return Err(Error::syntax(self.pos, "unterminated ket")),
            }
        }
    }

    fn coeff(&mut self) -> Result<Complex64> {
        let mut value = self.factor()?;
        loop {
            match self.peek() {
                // `*` directly before a ket belongs to the term, not the product
                Some(b'*') if self.peek_second() != Some(b'|') => {
                    self.pos += 1;
                    value *= self.factor()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let divisor = self.factor()?;
                    if divisor.norm() == 0.0 {
                        return Err(Error::syntax(at, "division by zero"));
                    }
                    value /= divisor;
                }
                _ => return Ok(value),
            }
        }
    }

    fn factor(&mut self) -> Result<Complex64> {
        match self.peek() {
            Some(b) if b.is_ascii_digit() => Ok(Complex64::new(self.integer()?, 0.0)),
            Some(b'i') => {
                self.pos += 1;
                Ok(Complex64::new(0.0, 1.0))
            }
            Some(b's') => {
                if !self.src[self.pos..].starts_with(b"sqrt") {
                    return Err(Error::syntax(self.pos, "unknown identifier"));
                }
                self.pos += 4;
                self.expect(b'(')?;
                let n = self.integer()?;
                self.expect(b')')?;
                Ok(Complex64::new(n.sqrt(), 0.0))
            }
            Some(b'(') => {
                self.pos += 1;
                let mut sum = self.coeff()?;
                loop {
                    match self.peek() {
                        Some(b'+') => {
                            self.pos += 1;
                            sum += self.coeff()?;
                        }
                        Some(b'-') => {
                            self.pos += 1;
                            sum -= self.coeff()?;
                        }
                        _ => break,
                    }
                }
                self.expect(b')')?;
                Ok(sum)
            }
            Some(b) => Err(Error::syntax(
                self.pos,
                format!("expected a coefficient or ket, found '{}'", b as char),
            )),
            None => Err(Error::syntax(self.pos, "unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::syntax(start, "expected an integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse::<f64>()
            .map_err(|_| Error::syntax(start, "integer literal out of range"))
    }
}
