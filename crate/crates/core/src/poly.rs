//! Sparse multivariate polynomials over the rationals.
//!
//! A [`Poly`] lives in `k[x_0, ..., x_n]` and keeps its terms sorted by the
//! canonical monomial order: total degree first, ties broken
//! lexicographically with `x_0 > x_1 > ... > x_n`. Terms are stored leading
//! term first and never carry a zero coefficient, so structural equality is
//! polynomial equality.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn frac(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Exponent vector `(a_0, ..., a_n)` of `x_0^a_0 ... x_n^a_n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(SmallVec<[u16; 8]>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(SmallVec::from_elem(0, n + 1))
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut m = Self::one(n);
        m.0[i] = 1;
        m
    }

    pub fn from_exponents(exponents: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(exponents))
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn exponent(&self, i: usize) -> u16 {
        self.0[i]
    }

    /// Ambient `n` (number of variables minus one).
    pub fn ambient(&self) -> usize {
        self.0.len() - 1
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| u32::from(e)).sum()
    }

    /// Eigenvalue of the toral derivation: `n * deg - 2 * sum(i * a_i)`.
    pub fn weight(&self) -> i64 {
        let n = self.ambient() as i64;
        n * i64::from(self.degree()) - 2 * self.index_sum()
    }

    /// `sum(i * a_i)`, i.e. half of `n * deg - weight`.
    pub fn index_sum(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &e)| i as i64 * i64::from(e))
            .sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Replace one factor `x_from` by `x_to`. Caller guarantees `a_from > 0`.
    pub(crate) fn shift(&self, from: usize, to: usize) -> Monomial {
        let mut m = self.clone();
        m.0[from] -= 1;
        m.0[to] += 1;
        m
    }

    pub(crate) fn times_var(&self, i: usize) -> Monomial {
        let mut m = self.clone();
        m.0[i] += 1;
        m
    }

    fn write_to(&self, out: &mut String) {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                out.push('*');
            }
            first = false;
            out.push_str(&format!("x{i}"));
            if e > 1 {
                out.push_str(&format!("^{e}"));
            }
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `w(m) = n * deg(m) - 2 * (a_1 + 2 a_2 + ... + n a_n)`.
pub fn weight_of_monomial(m: &Monomial, n: usize) -> Result<i64> {
    if m.ambient() != n {
        return Err(Error::AmbientMismatch {
            left: m.ambient(),
            right: n,
        });
    }
    Ok(m.weight())
}

/// Polynomial in `k[x_0, ..., x_n]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    n: usize,
    // strictly decreasing in the canonical order, no zero coefficients
    terms: Vec<(Monomial, Rational)>,
}

impl Poly {
    pub fn zero(n: usize) -> Self {
        Poly {
            n,
            terms: Vec::new(),
        }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        Self::monomial(n, Monomial::one(n), c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Rational::one())
    }

    pub fn var(n: usize, i: usize) -> Self {
        Self::monomial(n, Monomial::var(n, i), Rational::one())
    }

    pub fn monomial(n: usize, m: Monomial, c: Rational) -> Self {
        assert_eq!(m.ambient(), n, "monomial ambient mismatch");
        let terms = if c.is_zero() { vec![] } else { vec![(m, c)] };
        Poly { n, terms }
    }

    /// Build from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms<I>(n: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.ambient(), n, "monomial ambient mismatch");
            accumulate(&mut acc, m, c);
        }
        Self::from_map(n, acc)
    }

    pub(crate) fn from_map(n: usize, acc: HashMap<Monomial, Rational>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly { n, terms }
    }

    /// Terms already sorted strictly decreasing with nonzero coefficients.
    pub(crate) fn from_sorted_unchecked(n: usize, terms: Vec<(Monomial, Rational)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        Poly { n, terms }
    }

    /// Ambient `n`: the polynomial ring has `n + 1` variables.
    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_term(&self) -> Option<&(Monomial, Rational)> {
        self.terms.first()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms
            .binary_search_by(|(t, _)| m.cmp(t))
            .map(|idx| self.terms[idx].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    fn check_ambient(&self, other: &Poly) -> Result<()> {
        if self.n != other.n {
            Err(Error::AmbientMismatch {
                left: self.n,
                right: other.n,
            })
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_ambient(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_ambient(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_ambient(other)?;
        Ok(self.mul_impl(other))
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = other.terms.iter().peekable();
        loop {
            let ord = match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (None, None) => break,
            };
            match ord {
                Ordering::Greater => out.push(a.next().unwrap().clone()),
                Ordering::Less => {
                    let (m, c) = b.next().unwrap();
                    out.push((m.clone(), if negate { -c } else { c.clone() }));
                }
                Ordering::Equal => {
                    let (m, c1) = a.next().unwrap();
                    let (_, c2) = b.next().unwrap();
                    let c = if negate { c1 - c2 } else { c1 + c2 };
                    if !c.is_zero() {
                        out.push((m.clone(), c));
                    }
                }
            }
        }
        Poly {
            n: self.n,
            terms: out,
        }
    }

    fn mul_impl(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.n);
        }
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        if small.terms.len() == 1 {
            let (m, c) = &small.terms[0];
            // multiplying by a monomial preserves the order
            let terms = large
                .terms
                .iter()
                .map(|(m2, c2)| (m.mul(m2), c * c2))
                .collect();
            return Poly::from_sorted_unchecked(self.n, terms);
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(small.terms.len() * large.terms.len() / 2);
        for (m1, c1) in &small.terms {
            for (m2, c2) in &large.terms {
                accumulate(&mut acc, m1.mul(m2), c1 * c2);
            }
        }
        Poly::from_map(self.n, acc)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.n);
        }
        Poly {
            n: self.n,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one(self.n);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Multiply by the single variable `x_i` (order preserving).
    pub fn times_var(&self, i: usize) -> Poly {
        Poly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.times_var(i), c.clone()))
                .collect(),
        }
    }

    /// Exact partial derivative with respect to `x_i`.
    pub fn partial(&self, i: usize) -> Result<Poly> {
        if i > self.n {
            return Err(Error::VariableOutOfRange {
                index: i,
                n: self.n,
            });
        }
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponent(i);
            (e > 0).then(|| {
                let mut dm = m.clone();
                dm.0[i] -= 1;
                (dm, c * rat(i64::from(e)))
            })
        });
        Ok(Poly::from_terms(self.n, terms))
    }

    pub fn degree(&self) -> Result<u32> {
        self.terms
            .iter()
            .map(|(m, _)| m.degree())
            .max()
            .ok_or(Error::ZeroPolynomial("degree"))
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((lead, _)) => {
                let d = lead.degree();
                self.terms.iter().all(|(m, _)| m.degree() == d)
            }
        }
    }

    /// Homogeneous with all monomials of a single weight. The zero
    /// polynomial is reported as isobaric but has no weight.
    pub fn is_isobaric(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((lead, _)) => {
                let (d, w) = (lead.degree(), lead.weight());
                self.terms
                    .iter()
                    .all(|(m, _)| m.degree() == d && m.weight() == w)
            }
        }
    }

    pub fn weight(&self) -> Result<i64> {
        let (lead, _) = self.terms.first().ok_or(Error::ZeroPolynomial("weight"))?;
        if !self.is_isobaric() {
            return Err(Error::NotIsobaric);
        }
        Ok(lead.weight())
    }

    /// The unique rational multiple with coprime integer coefficients and a
    /// positive leading coefficient.
    pub fn normalize_primitive(&self) -> Result<Poly> {
        let (_, lead) = self
            .terms
            .first()
            .ok_or(Error::ZeroPolynomial("normalize_primitive"))?;
        let mut denom_lcm = BigInt::one();
        for (_, c) in &self.terms {
            denom_lcm = denom_lcm.lcm(c.denom());
        }
        let mut numer_gcd = BigInt::zero();
        for (_, c) in &self.terms {
            let scaled = c.numer() * (&denom_lcm / c.denom());
            numer_gcd = numer_gcd.gcd(&scaled);
        }
        let mut factor = Rational::new(denom_lcm, numer_gcd);
        if lead.is_negative() {
            factor = -factor;
        }
        Ok(self.scale(&factor))
    }

    /// Content-free form used for keys; zero maps to itself.
    pub fn primitive_or_zero(&self) -> Poly {
        self.normalize_primitive()
            .unwrap_or_else(|_| Poly::zero(self.n))
    }

    /// True iff `self = c * other` for some nonzero rational `c`.
    pub fn is_scalar_multiple_of(&self, other: &Poly) -> bool {
        if self.n != other.n || self.terms.len() != other.terms.len() {
            return false;
        }
        if self.is_zero() {
            return true;
        }
        let ratio = &self.terms[0].1 / &other.terms[0].1;
        self.terms
            .iter()
            .zip(&other.terms)
            .all(|((m1, c1), (m2, c2))| m1 == m2 && *c1 == c2 * &ratio)
    }

    /// Group terms by `(degree, weight)`, ascending.
    pub fn graded_components(&self) -> Vec<(u32, i64, Poly)> {
        let mut groups: std::collections::BTreeMap<(u32, i64), Vec<(Monomial, Rational)>> =
            Default::default();
        for (m, c) in &self.terms {
            groups
                .entry((m.degree(), m.weight()))
                .or_default()
                .push((m.clone(), c.clone()));
        }
        groups
            .into_iter()
            .map(|((d, w), terms)| (d, w, Poly::from_sorted_unchecked(self.n, terms)))
            .collect()
    }

    pub fn parse(text: &str, n: usize) -> Result<Poly> {
        parse_poly(text, n)
    }
}

pub(crate) fn accumulate(acc: &mut HashMap<Monomial, Rational>, m: Monomial, c: Rational) {
    use std::collections::hash_map::Entry;
    match acc.entry(m) {
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
        }
        Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        self.checked_add(rhs).expect("ambient mismatch in add")
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        self.checked_sub(rhs).expect("ambient mismatch in sub")
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        self.checked_mul(rhs).expect("ambient mismatch in mul")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

fn write_rational(out: &mut String, c: &Rational) {
    if c.is_integer() {
        out.push_str(&c.numer().to_string());
    } else {
        out.push_str(&format!("{}/{}", c.numer(), c.denom()));
    }
}

/// Canonical text form, leading term first.
pub fn format_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (m, c)) in p.terms.iter().enumerate() {
        let negative = c.is_negative();
        match (idx, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let magnitude = c.abs();
        if m.is_one() {
            write_rational(&mut out, &magnitude);
        } else {
            if !magnitude.is_one() {
                write_rational(&mut out, &magnitude);
                out.push('*');
            }
            m.write_to(&mut out);
        }
    }
    out
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(self))
    }
}

/// Parse the polynomial text grammar:
/// terms joined by `+`/`-`, each a `*`-separated product of integers,
/// fractions `a/b` and powers `x<idx>^<exp>`.
pub fn parse_poly(text: &str, n: usize) -> Result<Poly> {
    Parser {
        bytes: text.as_bytes(),
        pos: 0,
        n,
    }
    .parse()
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    n: usize,
}

impl Parser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn digits(&mut self) -> Result<&str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits"))
    }

    fn integer(&mut self) -> Result<BigInt> {
        let text = self.digits()?;
        Ok(text.parse().expect("validated digits"))
    }

    fn small(&mut self) -> Result<usize> {
        let pos = self.pos;
        let text = self.digits()?;
        text.parse().map_err(|_| Error::Parse {
            position: pos,
            message: format!("number `{text}` too large"),
        })
    }

    fn parse(mut self) -> Result<Poly> {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                None if first => return self.err("empty input"),
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    Rational::one()
                }
                Some(b'-') => {
                    self.pos += 1;
                    -Rational::one()
                }
                Some(_) if first => Rational::one(),
                Some(c) => return self.err(format!("expected `+` or `-`, found `{}`", c as char)),
            };
            first = false;
            let (m, c) = self.term()?;
            accumulate(&mut acc, m, sign * c);
        }
        Ok(Poly::from_map(self.n, acc))
    }

    fn term(&mut self) -> Result<(Monomial, Rational)> {
        let mut m = Monomial::one(self.n);
        let mut c = Rational::one();
        loop {
            match self.peek() {
                Some(b'x') => {
                    self.pos += 1;
                    let idx = self.small()?;
                    if idx > self.n {
                        return Err(Error::VariableOutOfRange {
                            index: idx,
                            n: self.n,
                        });
                    }
                    let mut exp = 1usize;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        exp = self.small()?;
                    }
                    let total = usize::from(m.0[idx]) + exp;
                    match u16::try_from(total) {
                        Ok(v) => m.0[idx] = v,
                        Err(_) => return self.err("exponent too large"),
                    }
                }
                Some(b) if b.is_ascii_digit() => {
                    let numer = self.integer()?;
                    let mut value = Rational::from_integer(numer);
                    if self.peek() == Some(b'/') {
                        self.pos += 1;
                        let denom = self.integer()?;
                        if denom.is_zero() {
                            return self.err("zero denominator");
                        }
                        value /= Rational::from_integer(denom);
                    }
                    c *= value;
                }
                Some(b) => return self.err(format!("unexpected `{}`", b as char)),
                None => return self.err("unexpected end of input"),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok((m, c));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str, n: usize) -> Poly {
        parse_poly(text, n).unwrap()
    }

    #[test]
    fn parse_and_format_examples() {
        let q = p("x1^2 - 2*x0*x2", 2);
        assert_eq!(q.term_count(), 2);
        assert_eq!(format_poly(&q), "-2*x0*x2 + x1^2");
        assert!(p("0", 3).is_zero());
        assert_eq!(format_poly(&p("0", 3)), "0");
        assert_eq!(format_poly(&p("x0^3", 1)), "x0^3");
        assert_eq!(format_poly(&p("2*x0*x2 - x1^2", 2)), "2*x0*x2 - x1^2");
        assert_eq!(
            format_poly(&p("x1^3 + 3*x0^2*x3 -3*x0*x1*x2", 3)),
            "3*x0^2*x3 - 3*x0*x1*x2 + x1^3"
        );
        assert_eq!(format_poly(&p("1/2*x0 - 3/6", 1)), "1/2*x0 - 1/2");
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            parse_poly("x3", 2),
            Err(Error::VariableOutOfRange { index: 3, n: 2 })
        );
        assert!(matches!(parse_poly("x0 +", 2), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("", 2), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_poly("x0 x1", 2),
            Err(Error::Parse { position: 3, .. })
        ));
        assert!(matches!(parse_poly("1/0", 2), Err(Error::Parse { .. })));
    }

    #[test]
    fn arithmetic_examples() {
        let x0 = Poly::var(2, 0);
        assert!((&x0 + &(-&x0)).is_zero());
        let q = p("x1^2 - 2*x0*x2", 2);
        assert_eq!(&q * &Poly::one(2), q);
        let a = p("x0 + x1", 2);
        let b = p("x0 - x1", 2);
        assert_eq!(&a * &b, p("x0^2 - x1^2", 2));
        assert!(matches!(
            x0.checked_add(&Poly::var(3, 0)),
            Err(Error::AmbientMismatch { .. })
        ));
        assert_eq!(p("x0 + 1", 1).pow(3), p("x0^3 + 3*x0^2 + 3*x0 + 1", 1));
    }

    #[test]
    fn partial_examples() {
        assert_eq!(p("x1^2", 2).partial(1).unwrap(), p("2*x1", 2));
        assert_eq!(p("x1^2 - 2*x0*x2", 2).partial(0).unwrap(), p("-2*x2", 2));
        assert!(p("x0^3", 2).partial(2).unwrap().is_zero());
        assert!(matches!(
            p("x0", 2).partial(3),
            Err(Error::VariableOutOfRange { index: 3, n: 2 })
        ));
    }

    #[test]
    fn weights_and_grading() {
        let m = Monomial::from_exponents(&[0, 2, 0]);
        assert_eq!(weight_of_monomial(&m, 2).unwrap(), 0);
        let m = Monomial::from_exponents(&[1, 0, 1, 0]);
        assert_eq!(weight_of_monomial(&m, 3).unwrap(), 2);
        for n in 0..7 {
            assert_eq!(Monomial::var(n, 0).weight(), n as i64);
            assert_eq!(Poly::var(n, 0).pow(3).weight().unwrap(), 3 * n as i64);
        }
        let q = p("x1^2 - 2*x0*x2", 3);
        assert!(q.is_isobaric());
        assert_eq!(q.weight().unwrap(), 2);
        let r = p("x0 + x1", 2);
        assert!(!r.is_isobaric());
        assert!(r.is_homogeneous());
        assert_eq!(r.weight(), Err(Error::NotIsobaric));
        assert_eq!(Poly::zero(2).degree(), Err(Error::ZeroPolynomial("degree")));
        assert_eq!(q.degree().unwrap(), 2);
    }

    #[test]
    fn normalization_examples() {
        let q = p("1/2*x1^2 - x0*x2", 2).normalize_primitive().unwrap();
        assert_eq!(format_poly(&q), "2*x0*x2 - x1^2");
        assert_eq!(p("7*x0", 2).normalize_primitive().unwrap(), p("x0", 2));
        assert_eq!(
            p("-3*x0*x1", 2).normalize_primitive().unwrap(),
            p("x0*x1", 2)
        );
        assert_eq!(
            p("4/3*x0 - 2/5*x1", 2).normalize_primitive().unwrap(),
            p("10*x0 - 3*x1", 2)
        );
        assert!(Poly::zero(1).normalize_primitive().is_err());
    }

    #[test]
    fn canonical_order() {
        // degree first, then x0 > x1 > ...
        let a = Monomial::from_exponents(&[1, 0, 1]);
        let b = Monomial::from_exponents(&[0, 2, 0]);
        let c = Monomial::from_exponents(&[0, 0, 3]);
        assert!(a > b);
        assert!(c > a);
        let q = p("x1^2 + x2^3 + x0*x2", 2);
        let order: Vec<_> = q.terms().iter().map(|(m, _)| m.clone()).collect();
        assert_eq!(order, vec![c, a, b]);
        assert_eq!(q.coefficient(&Monomial::from_exponents(&[0, 2, 0])), rat(1));
        assert_eq!(q.coefficient(&Monomial::from_exponents(&[2, 0, 0])), rat(0));
    }
}
