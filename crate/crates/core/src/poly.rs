//! Sparse multivariate polynomials over `F_p`, their text form, and the
//! ambient polynomial ring that owns the variable names.

use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::{Coeff, PrimeField};
use crate::monomial::Monomial;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: Coeff,
    pub mono: Monomial,
}

/// Terms sorted strictly descending, no zero coefficients. The zero polynomial
/// has no terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: Vec<Term>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn constant(c: Coeff, nvars: usize) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            Poly { terms: vec![Term { coeff: c, mono: Monomial::one(nvars) }] }
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(1, nvars)
    }

    pub fn term(c: Coeff, mono: Monomial) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            Poly { terms: vec![Term { coeff: c, mono }] }
        }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(mut terms: Vec<Term>, f: &PrimeField) -> Self {
        terms.sort_by(|a, b| b.mono.cmp(&a.mono));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.mono == t.mono => last.coeff = f.add(last.coeff, t.coeff),
                _ => out.push(t),
            }
            if out.last().is_some_and(|l| l.coeff == 0) {
                out.pop();
            }
        }
        Poly { terms: out }
    }

    /// Caller guarantees the canonical invariants.
    pub(crate) fn from_sorted_terms(terms: Vec<Term>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].mono > w[1].mono));
        debug_assert!(terms.iter().all(|t| t.coeff != 0));
        Poly { terms }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    #[inline]
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn lead_mono(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.mono)
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> Coeff {
        match self.terms.last() {
            Some(t) if t.mono.is_one() => t.coeff,
            _ => 0,
        }
    }

    /// `Some(c)` when the polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<Coeff> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.mono.is_one() => Some(t.coeff),
            _ => None,
        }
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.mono.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].mono.degree() == w[1].mono.degree())
    }

    pub fn neg(&self, f: &PrimeField) -> Poly {
        Poly { terms: self.terms.iter().map(|t| Term { coeff: f.neg(t.coeff), mono: t.mono.clone() }).collect() }
    }

    pub fn scale(&self, c: Coeff, f: &PrimeField) -> Poly {
        if c == 0 {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|t| Term { coeff: f.mul(t.coeff, c), mono: t.mono.clone() }).collect() }
    }

    pub fn mul_term(&self, c: Coeff, m: &Monomial, f: &PrimeField) -> Poly {
        if c == 0 {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|t| Term { coeff: f.mul(t.coeff, c), mono: t.mono.mul(m) }).collect() }
    }

    /// `self + c * m * other`, merging sorted term lists.
    pub fn add_scaled(&self, c: Coeff, m: &Monomial, other: &Poly, f: &PrimeField) -> Poly {
        if c == 0 || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = other.terms.iter().map(|t| Term { coeff: f.mul(t.coeff, c), mono: t.mono.mul(m) }).peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => out.push(b.next().unwrap()),
                (Some(x), Some(y)) => match x.mono.cmp(&y.mono) {
                    Ordering::Greater => out.push(a.next().unwrap().clone()),
                    Ordering::Less => out.push(b.next().unwrap()),
                    Ordering::Equal => {
                        let s = f.add(x.coeff, y.coeff);
                        let mono = y.mono.clone();
                        a.next();
                        b.next();
                        if s != 0 {
                            out.push(Term { coeff: s, mono });
                        }
                    }
                },
            }
        }
        Poly { terms: out }
    }

    pub fn add(&self, other: &Poly, f: &PrimeField) -> Poly {
        match other.terms.first() {
            None => self.clone(),
            Some(t) => self.add_scaled(1, &Monomial::one(t.mono.nvars()), other, f),
        }
    }

    pub fn sub(&self, other: &Poly, f: &PrimeField) -> Poly {
        match other.terms.first() {
            None => self.clone(),
            Some(t) => self.add_scaled(f.neg(1), &Monomial::one(t.mono.nvars()), other, f),
        }
    }

    pub fn mul(&self, other: &Poly, f: &PrimeField) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let (small, big) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut acc = Poly::zero();
        for t in &small.terms {
            acc = acc.add_scaled(t.coeff, &t.mono, big, f);
        }
        acc
    }

    pub fn monic(&self, f: &PrimeField) -> Poly {
        match self.terms.first() {
            None => Poly::zero(),
            Some(t) => self.scale(f.inv(t.coeff), f),
        }
    }
}

/// The ambient ring `F_p[x_0, ..., x_{n-1}]` together with its variable names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    field: PrimeField,
    names: Vec<String>,
}

impl PolyRing {
    pub fn new(field: PrimeField, names: Vec<String>) -> Result<Self> {
        for (i, n) in names.iter().enumerate() {
            let valid = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(Error::Parse(format!("invalid variable name `{n}`")));
            }
            if names[..i].contains(n) {
                return Err(Error::Parse(format!("duplicate variable `{n}`")));
            }
        }
        Ok(PolyRing { field, names })
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn var(&self, i: usize) -> Poly {
        Poly::term(1, Monomial::var(self.nvars(), i))
    }

    pub fn var_named(&self, name: &str) -> Option<Poly> {
        self.names.iter().position(|n| n == name).map(|i| self.var(i))
    }

    pub fn constant(&self, c: i64) -> Poly {
        Poly::constant(self.field.from_i64(c), self.nvars())
    }

    pub fn format(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, t) in p.terms().iter().enumerate() {
            let c = self.field.to_signed(t.coeff);
            let mag = c.unsigned_abs();
            if k == 0 {
                if c < 0 {
                    s.push('-');
                }
            } else if c < 0 {
                s.push_str(" - ");
            } else {
                s.push_str(" + ");
            }
            let mono = self.format_monomial(&t.mono);
            match (mono.is_empty(), mag) {
                (true, _) => write!(s, "{mag}").unwrap(),
                (false, 1) => s.push_str(&mono),
                (false, _) => write!(s, "{mag}*{mono}").unwrap(),
            }
        }
        s
    }

    fn format_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.names[i].clone()),
                _ => parts.push(format!("{}^{}", self.names[i], e)),
            }
        }
        parts.join("*")
    }

    /// Parses `coeff*mono` terms joined by `+`/`-`, e.g. `x^2*y - 3*x + 1`.
    pub fn parse(&self, text: &str) -> Result<Poly> {
        PolyParser { ring: self, src: text.as_bytes(), pos: 0 }.parse()
    }
}

struct PolyParser<'a> {
    ring: &'a PolyRing,
    src: &'a [u8],
    pos: usize,
}

impl PolyParser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in `{}`", self.pos, String::from_utf8_lossy(self.src)))
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

    fn parse(mut self) -> Result<Poly> {
        let f = *self.ring.field();
        let n = self.ring.nvars();
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let mut negative = false;
            match self.peek() {
                None if first => return Err(self.err("empty polynomial")),
                None => break,
                Some(b'+') if !first => self.pos += 1,
                Some(b'-') => {
                    self.pos += 1;
                    negative = true;
                }
                Some(_) if first => {}
                Some(_) => return Err(self.err("expected `+` or `-`")),
            }
            // allow a leading sign on the first term and `+ -3` style
            if self.peek() == Some(b'-') {
                self.pos += 1;
                negative = !negative;
            }
            let (c, mono) = self.parse_term(n)?;
            let c = if negative { f.neg(f.from_i64(c)) } else { f.from_i64(c) };
            terms.push(Term { coeff: c, mono });
            first = false;
        }
        Ok(Poly::from_terms(terms, &f))
    }

    fn parse_term(&mut self, n: usize) -> Result<(i64, Monomial)> {
        let f = *self.ring.field();
        let mut coeff: i64 = 1;
        let mut exps = vec![0u16; n];
        let mut factors = 0;
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let v = self.parse_int()?;
                    coeff = (coeff as i128 * v as i128).rem_euclid(f.characteristic() as i128) as i64;
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    let start = self.pos;
                    while self.pos < self.src.len()
                        && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                    {
                        self.pos += 1;
                    }
                    let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    let idx = self
                        .ring
                        .names()
                        .iter()
                        .position(|v| v == name)
                        .ok_or_else(|| self.err(&format!("unknown variable `{name}`")))?;
                    let mut e = 1u16;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.skip_ws();
                        let v = self.parse_int()?;
                        e = u16::try_from(v).map_err(|_| self.err("exponent too large"))?;
                    }
                    exps[idx] = exps[idx].checked_add(e).ok_or_else(|| self.err("exponent too large"))?;
                }
                _ => return Err(self.err("expected a coefficient or variable")),
            }
            factors += 1;
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        debug_assert!(factors > 0);
        Ok((coeff, Monomial::from_exponents(&exps)))
    }

    fn parse_int(&mut self) -> Result<i64> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse::<i64>()
            .map_err(|_| self.err("integer out of range"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> PolyRing {
        PolyRing::new(PrimeField::default(), vec!["x".into(), "y".into()]).unwrap()
    }

    #[test]
    fn parse_and_print() {
        let r = ring();
        let p = r.parse("x^2*y - 3*x + 1").unwrap();
        assert_eq!(r.format(&p), "x^2*y - 3*x + 1");
        let q = r.parse("-y + x*x").unwrap();
        assert_eq!(r.format(&q), "x^2 - y");
        assert_eq!(r.format(&r.parse("0").unwrap()), "0");
        assert_eq!(r.format(&r.parse("2*x - 2*x").unwrap()), "0");
        assert!(r.parse("z").is_err());
        assert!(r.parse("").is_err());
        assert!(r.parse("x +").is_err());
    }

    #[test]
    fn arithmetic() {
        let r = ring();
        let f = *r.field();
        let a = r.parse("x + y").unwrap();
        let b = r.parse("x - y").unwrap();
        assert_eq!(a.mul(&b, &f), r.parse("x^2 - y^2").unwrap());
        assert_eq!(a.add(&b, &f), r.parse("2*x").unwrap());
        assert_eq!(a.sub(&a, &f), Poly::zero());
        assert_eq!(r.parse("3*x*y + 2").unwrap().constant_term(), 2);
    }
}
