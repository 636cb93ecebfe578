//! Sparse complex polynomials in `z0, …, z{n-1}` and their text format.
//!
//! ```text
//! expression  ::= ['-'] term (('+'|'-') term)*
//! term        ::= coefficient ('*'? monomial)* | monomial ('*'? monomial)*
//! monomial    ::= 'z' index ('^' exponent)?
//! coefficient ::= decimal | '(' decimal ('+'|'-') decimal 'i' ')'
//! ```
//! Whitespace is ignored; indices are 0-based.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::Complex;

use crate::error::PolyError;

pub type C64 = Complex<f64>;

#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    n_vars: usize,
    terms: BTreeMap<Vec<u32>, C64>,
}

impl Polynomial {
    pub fn zero(n_vars: usize) -> Self {
        Self {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(value: C64, n_vars: usize) -> Self {
        let mut p = Self::zero(n_vars);
        p.add_term(vec![0; n_vars], value);
        p
    }

    /// The coordinate function `z{index}`.
    pub fn variable(index: usize, n_vars: usize) -> Self {
        assert!(index < n_vars);
        let mut exps = vec![0; n_vars];
        exps[index] = 1;
        let mut p = Self::zero(n_vars);
        p.add_term(exps, C64::new(1.0, 0.0));
        p
    }

    pub fn from_terms(n_vars: usize, terms: impl IntoIterator<Item = (Vec<u32>, C64)>) -> Self {
        let mut p = Self::zero(n_vars);
        for (exps, c) in terms {
            assert_eq!(exps.len(), n_vars, "exponent vector length");
            p.add_term(exps, c);
        }
        p
    }

    fn add_term(&mut self, exps: Vec<u32>, c: C64) {
        let sum = self.terms.get(&exps).copied().unwrap_or_default() + c;
        if sum == C64::new(0.0, 0.0) {
            self.terms.remove(&exps);
        } else {
            self.terms.insert(exps, sum);
        }
    }

    pub fn parse(text: &str, n_vars: usize) -> Result<Self, PolyError> {
        Parser::new(text, n_vars).expression()
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], C64)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), *v))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Largest variable index actually used, plus one.
    pub fn vars_used(&self) -> usize {
        self.terms
            .keys()
            .filter_map(|e| e.iter().rposition(|&x| x > 0))
            .map(|i| i + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, z: &[C64]) -> C64 {
        assert_eq!(z.len(), self.n_vars);
        self.terms
            .iter()
            .map(|(exps, c)| c * monomial(z, exps))
            .sum()
    }

    /// Sum of the moduli of the individual terms at `z`; the magnitude
    /// against which cancellation in [`Polynomial::eval`] is judged.
    pub fn magnitude(&self, z: &[C64]) -> f64 {
        self.terms
            .iter()
            .map(|(exps, c)| (c * monomial(z, exps)).norm())
            .sum()
    }

    /// Holomorphic partial derivatives `∂p/∂z_k`.
    pub fn gradient(&self, z: &[C64]) -> Vec<C64> {
        assert_eq!(z.len(), self.n_vars);
        let mut grad = vec![C64::new(0.0, 0.0); self.n_vars];
        for (exps, c) in &self.terms {
            for (k, g) in grad.iter_mut().enumerate() {
                if exps[k] == 0 {
                    continue;
                }
                let mut lowered = exps.clone();
                lowered[k] -= 1;
                *g += c * f64::from(exps[k]) * monomial(z, &lowered);
            }
        }
        grad
    }
}

fn monomial(z: &[C64], exps: &[u32]) -> C64 {
    z.iter()
        .zip(exps)
        .filter(|(_, &e)| e > 0)
        .map(|(zk, &e)| zk.powu(e))
        .product()
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (index, (exps, &c)) in self.terms.iter().enumerate() {
            let negative = c.re < 0.0 || (c.re == 0.0 && c.im < 0.0);
            let mag = if negative { -c } else { c };
            // −0.0 would print as "-0"
            let mag = C64::new(mag.re + 0.0, mag.im + 0.0);
            match (index, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let constant = exps.iter().all(|&e| e == 0);
            let mut first = true;
            if mag.im != 0.0 {
                if mag.im < 0.0 {
                    write!(f, "({}-{}i)", mag.re, -mag.im)?;
                } else {
                    write!(f, "({}+{}i)", mag.re, mag.im)?;
                }
                first = false;
            } else if mag.re != 1.0 || constant {
                write!(f, "{}", mag.re)?;
                first = false;
            }
            for (k, &e) in exps.iter().enumerate().filter(|(_, &e)| e > 0) {
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                if e == 1 {
                    write!(f, "z{k}")?;
                } else {
                    write!(f, "z{k}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
    n_vars: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, n_vars: usize) -> Self {
        Self {
            text: text.as_bytes(),
            pos: 0,
            n_vars,
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Syntax {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn expression(mut self) -> Result<Polynomial, PolyError> {
        let mut poly = Polynomial::zero(self.n_vars);
        let mut sign = 1.0;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = -1.0;
        }
        loop {
            let (exps, c) = self.term()?;
            poly.add_term(exps, c * sign);
            match self.peek() {
                None => return Ok(poly),
                Some(b'+') => sign = 1.0,
                Some(b'-') => sign = -1.0,
                Some(other) => return self.error(format!("expected '+', '-' or end of input, found '{}'", other as char)),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<(Vec<u32>, C64), PolyError> {
        let mut exps = vec![0u32; self.n_vars];
        let mut coefficient = C64::new(1.0, 0.0);
        match self.peek() {
            Some(b'z') => self.monomial(&mut exps)?,
            Some(b'(') | Some(b'0'..=b'9') | Some(b'.') => coefficient = self.coefficient()?,
            Some(other) => return self.error(format!("expected a coefficient or monomial, found '{}'", other as char)),
            None => return self.error("expected a term, found end of input"),
        }
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    if self.peek() != Some(b'z') {
                        return self.error("expected a monomial after '*'");
                    }
                    self.monomial(&mut exps)?;
                }
                Some(b'z') => self.monomial(&mut exps)?,
                _ => return Ok((exps, coefficient)),
            }
        }
    }

    fn monomial(&mut self, exps: &mut [u32]) -> Result<(), PolyError> {
        let start = self.pos;
        self.pos += 1; // 'z'
        let index = self.digits("variable index")?;
        let index = usize::try_from(index).unwrap_or(usize::MAX);
        if index >= self.n_vars {
            return Err(PolyError::UnknownVariable {
                index,
                position: start,
                n_vars: self.n_vars,
            });
        }
        let mut power = 1u32;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            power = u32::try_from(self.digits("exponent")?).or_else(|_| self.error("exponent too large"))?;
        }
        exps[index] = exps[index]
            .checked_add(power)
            .map_or_else(|| self.error("exponent too large"), Ok)?;
        Ok(())
    }

    fn digits(&mut self, what: &str) -> Result<u64, PolyError> {
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error(format!("expected {what}"));
        }
        let s = std::str::from_utf8(&self.text[start..self.pos]).expect("ascii digits");
        s.parse::<u64>().or_else(|_| {
            self.pos = start;
            self.error(format!("{what} out of range"))
        })
    }

    fn coefficient(&mut self) -> Result<C64, PolyError> {
        if self.peek() != Some(b'(') {
            return Ok(C64::new(self.decimal()?, 0.0));
        }
        self.pos += 1;
        self.skip_ws();
        let re = self.decimal()?;
        let sign = match self.peek() {
            Some(b'+') => 1.0,
            Some(b'-') => -1.0,
            _ => return self.error("expected '+' or '-' inside complex coefficient"),
        };
        self.pos += 1;
        self.skip_ws();
        let im = self.decimal()?;
        if self.peek() != Some(b'i') {
            return self.error("expected 'i' after imaginary part");
        }
        self.pos += 1;
        if self.peek() != Some(b')') {
            return self.error("expected ')'");
        }
        self.pos += 1;
        Ok(C64::new(re, sign * im))
    }

    fn decimal(&mut self) -> Result<f64, PolyError> {
        let start = self.pos;
        let bytes = self.text;
        let mut p = self.pos;
        let digits = |p: &mut usize| {
            let s = *p;
            while *p < bytes.len() && bytes[*p].is_ascii_digit() {
                *p += 1;
            }
            *p > s
        };
        let int = digits(&mut p);
        let mut frac = false;
        if p < bytes.len() && bytes[p] == b'.' {
            p += 1;
            frac = digits(&mut p);
        }
        if !int && !frac {
            return self.error("expected a decimal number");
        }
        if p < bytes.len() && (bytes[p] == b'e' || bytes[p] == b'E') {
            let mut q = p + 1;
            if q < bytes.len() && (bytes[q] == b'+' || bytes[q] == b'-') {
                q += 1;
            }
            if digits(&mut q) {
                p = q;
            }
        }
        self.pos = p;
        let s = std::str::from_utf8(&bytes[start..p]).expect("ascii number");
        s.parse::<f64>().or_else(|_| {
            self.pos = start;
            self.error(format!("invalid number '{s}'"))
        })
    }
}
