//! Canonical text form for Laurent polynomials.
//!
//! Terms are sorted by (z-degree, remaining degrees in signature order),
//! descending, e.g. `a^2*z^-2 - 2*z^-2 + a^-2*z^-2`.  Rendering and parsing
//! round-trip bit-exactly on canonical polynomials.  Variables on a
//! half-step lattice print fractional exponents as `q^(1/2)`, `q^(-3/2)`.

use super::{Coeff, LaurentError, LaurentPoly, RingSig};
use std::sync::Arc;

pub(super) fn render<C: Coeff>(p: &LaurentPoly<C>) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let sig = p.sig().clone();
    let zi = sig.var_index("z");
    let mut terms: Vec<(&[i32], &C)> = p.terms().collect();
    terms.sort_by(|(m1, _), (m2, _)| sort_key(m1, zi).cmp(&sort_key(m2, zi)).reverse());

    let mut out = String::new();
    for (i, (m, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&term_text(&sig, m, &c.abs()));
    }
    out
}

fn sort_key(m: &[i32], zi: Option<usize>) -> Vec<i32> {
    let mut key = Vec::with_capacity(m.len());
    if let Some(z) = zi {
        key.push(m[z]);
    }
    for (i, e) in m.iter().enumerate() {
        if Some(i) != zi {
            key.push(*e);
        }
    }
    key
}

fn term_text<C: Coeff>(sig: &RingSig, m: &[i32], c_abs: &C) -> String {
    let mut factors = Vec::new();
    for (i, &e) in m.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let spec = sig.spec(i);
        factors.push(var_text(&spec.name, e, spec.half_steps));
    }
    if factors.is_empty() {
        return format!("{c_abs}");
    }
    let vars = factors.join("*");
    if c_abs.is_one() {
        vars
    } else {
        format!("{c_abs}*{vars}")
    }
}

fn var_text(name: &str, e: i32, half_steps: bool) -> String {
    if half_steps {
        if e % 2 == 0 {
            return var_text(name, e / 2, false);
        }
        return format!("{name}^({e}/2)");
    }
    match e {
        1 => name.to_string(),
        _ => format!("{name}^{e}"),
    }
}

/// Parse the canonical text form into a polynomial over `sig`.
pub fn parse<C: Coeff>(sig: &Arc<RingSig>, input: &str) -> Result<LaurentPoly<C>, LaurentError> {
    Parser {
        sig,
        input: input.as_bytes(),
        pos: 0,
    }
    .parse_poly()
}

struct Parser<'a> {
    sig: &'a Arc<RingSig>,
    input: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: impl Into<String>) -> LaurentError {
        let consumed = &self.input[..self.pos.min(self.input.len())];
        let line = consumed.iter().filter(|&&b| b == b'\n').count() + 1;
        let col = consumed.iter().rev().take_while(|&&b| b != b'\n').count() + 1;
        LaurentError::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse_poly<C: Coeff>(&mut self) -> Result<LaurentPoly<C>, LaurentError> {
        let mut acc = LaurentPoly::zero(self.sig.clone());
        self.skip_ws();
        if self.pos == self.input.len() {
            return Err(self.error("empty input"));
        }
        let mut negate = self.eat(b'-');
        loop {
            self.skip_ws();
            let term = self.parse_term::<C>(negate)?;
            acc = acc.add(&term);
            self.skip_ws();
            match self.peek() {
                None => return Ok(acc),
                Some(b'+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negate = true;
                }
                Some(c) => return Err(self.error(format!("unexpected character `{}`", c as char))),
            }
        }
    }

    fn parse_term<C: Coeff>(&mut self, negate: bool) -> Result<LaurentPoly<C>, LaurentError> {
        let mut coeff: Option<C> = None;
        let mut exps = vec![0i32; self.sig.len()];
        let mut any_factor = false;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b) if b.is_ascii_digit() => {
                    if coeff.is_some() || any_factor {
                        return Err(self.error("coefficient must come first in a term"));
                    }
                    coeff = Some(self.parse_coeff::<C>()?);
                }
                Some(b) if b.is_ascii_alphabetic() || b == b'_' => {
                    let start = self.pos;
                    let name = self.parse_ident();
                    let i = match self.sig.var_index(&name) {
                        Some(i) => i,
                        None => {
                            self.pos = start;
                            return Err(self.error(format!("unknown variable `{name}`")));
                        }
                    };
                    let half = self.sig.spec(i).half_steps;
                    let e = if self.eat(b'^') {
                        self.parse_exponent(half)?
                    } else if half {
                        2
                    } else {
                        1
                    };
                    exps[i] += e;
                    any_factor = true;
                }
                _ => return Err(self.error("expected coefficient or variable")),
            }
            self.skip_ws();
            if !self.eat(b'*') {
                break;
            }
        }
        let mut c = coeff.unwrap_or_else(C::one);
        if negate {
            c = -c;
        }
        Ok(LaurentPoly::monomial(self.sig.clone(), &exps, c))
    }

    fn parse_ident(&mut self) -> String {
        let start = self.pos;
        while let Some(b) = self.peek() {
            if b.is_ascii_alphanumeric() || b == b'_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        // A trailing digit run belongs to the name (a2, q1) — names are
        // whatever the signature says; match greedily then backtrack if the
        // full ident is unknown but a prefix is a variable.
        let full = std::str::from_utf8(&self.input[start..self.pos])
            .unwrap()
            .to_string();
        if self.sig.var_index(&full).is_some() {
            return full;
        }
        // Try progressively shorter prefixes (longest first).
        for end in (start + 1..self.pos).rev() {
            let cand = std::str::from_utf8(&self.input[start..end]).unwrap();
            if self.sig.var_index(cand).is_some() {
                self.pos = end;
                return cand.to_string();
            }
        }
        full
    }

    fn parse_int(&mut self) -> Result<i64, LaurentError> {
        let neg = self.eat(b'-');
        let start = self.pos;
        while self.peek().map(|b| b.is_ascii_digit()).unwrap_or(false) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected integer"));
        }
        let s = std::str::from_utf8(&self.input[start..self.pos]).unwrap();
        let v: i64 = s.parse().map_err(|_| self.error("integer out of range"))?;
        Ok(if neg { -v } else { v })
    }

    /// Exponent after `^`: either an integer, or `(k/2)` on a half-step
    /// variable.  Returns the exponent in storage units.
    fn parse_exponent(&mut self, half: bool) -> Result<i32, LaurentError> {
        if self.eat(b'(') {
            let k = self.parse_int()?;
            if !(self.eat(b'/') && self.eat(b'2') && self.eat(b')')) {
                return Err(self.error("expected `k/2)` in fractional exponent"));
            }
            if !half {
                return Err(self.error("fractional exponent on an integer-lattice variable"));
            }
            return i32::try_from(k).map_err(|_| self.error("exponent out of range"));
        }
        let v = self.parse_int()?;
        let v = if half {
            v.checked_mul(2)
                .ok_or_else(|| self.error("exponent out of range"))?
        } else {
            v
        };
        i32::try_from(v).map_err(|_| self.error("exponent out of range"))
    }

    fn parse_coeff<C: Coeff>(&mut self) -> Result<C, LaurentError> {
        let start = self.pos;
        while self.peek().map(|b| b.is_ascii_digit()).unwrap_or(false) {
            self.pos += 1;
        }
        // Rational coefficients: digits '/' digits (when C supports them).
        if self.peek() == Some(b'/') {
            let save = self.pos;
            self.pos += 1;
            let dstart = self.pos;
            while self.peek().map(|b| b.is_ascii_digit()).unwrap_or(false) {
                self.pos += 1;
            }
            if self.pos == dstart {
                self.pos = save;
            } else {
                let s = std::str::from_utf8(&self.input[start..self.pos]).unwrap();
                return s
                    .parse::<C>()
                    .map_err(|_| self.error("bad rational coefficient"));
            }
        }
        let s = std::str::from_utf8(&self.input[start..self.pos]).unwrap();
        s.parse::<C>().map_err(|_| self.error("bad coefficient"))
    }
}
