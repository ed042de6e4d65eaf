//! Linear derivations of `k[x_0, ..., x_n]` given by their action on the
//! variables, and the `sl_2` triple `(d, d̂, e)` built on the Weitzenböck
//! derivation.

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{accumulate, rat, Monomial, Poly, Rational};

/// `D(x_i) = sum_j lambda[i][j] * x_j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearDerivation {
    n: usize,
    lambda: Vec<Vec<Rational>>,
    // nonzero entries of each row, for application
    sparse: Vec<Vec<(usize, Rational)>>,
}

impl LinearDerivation {
    pub fn from_matrix(lambda: Vec<Vec<Rational>>) -> Result<Self> {
        let size = lambda.len();
        if size == 0 {
            return Err(Error::InvalidMatrix("empty matrix".into()));
        }
        if let Some(row) = lambda.iter().find(|row| row.len() != size) {
            return Err(Error::InvalidMatrix(format!(
                "row of length {} in a {size}x{size} matrix",
                row.len()
            )));
        }
        let sparse = lambda
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(j, c)| (j, c.clone()))
                    .collect()
            })
            .collect();
        Ok(LinearDerivation {
            n: size - 1,
            lambda,
            sparse,
        })
    }

    fn from_fn(n: usize, entry: impl Fn(usize, usize) -> i64) -> Self {
        let lambda = (0..=n)
            .map(|i| (0..=n).map(|j| rat(entry(i, j))).collect())
            .collect();
        Self::from_matrix(lambda).expect("square by construction")
    }

    /// Parse whitespace-separated rational entries, one row per line.
    pub fn parse_matrix(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (line_no, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|entry| {
                    entry.parse::<Rational>().map_err(|_| {
                        Error::InvalidMatrix(format!("line {}: bad entry `{entry}`", line_no + 1))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::from_matrix(rows)
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.lambda
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.lambda[i][j]
    }

    /// `D(x_i)` as a polynomial.
    pub fn image_of_var(&self, i: usize) -> Poly {
        Poly::from_terms(
            self.n,
            self.sparse[i]
                .iter()
                .map(|(j, c)| (Monomial::var(self.n, *j), c.clone())),
        )
    }

    /// Leibniz extension: `D(p) = sum_i D(x_i) * dp/dx_i`.
    pub fn apply(&self, p: &Poly) -> Result<Poly> {
        if p.ambient() != self.n {
            return Err(Error::AmbientMismatch {
                left: self.n,
                right: p.ambient(),
            });
        }
        Ok(self.apply_unchecked(p))
    }

    pub(crate) fn apply_unchecked(&self, p: &Poly) -> Poly {
        let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(p.term_count() * 2);
        for (m, c) in p.terms() {
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let ce = c * rat(i64::from(e));
                for (j, l) in &self.sparse[i] {
                    accumulate(&mut acc, m.shift(i, *j), &ce * l);
                }
            }
        }
        Poly::from_map(self.n, acc)
    }

    /// The derivation acting as `A∘B - B∘A` on the variables.
    pub fn commutator(&self, other: &LinearDerivation) -> Result<LinearDerivation> {
        if self.n != other.n {
            return Err(Error::AmbientMismatch {
                left: self.n,
                right: other.n,
            });
        }
        // rows act on variables: (A∘B)(x_i) = sum_j B_ij A(x_j), i.e. (B·A)_i
        let ab = mat_mul(&other.lambda, &self.lambda);
        let ba = mat_mul(&self.lambda, &other.lambda);
        let lambda = ab
            .into_iter()
            .zip(ba)
            .map(|(r1, r2)| r1.into_iter().zip(r2).map(|(a, b)| a - b).collect())
            .collect();
        Self::from_matrix(lambda)
    }

    pub fn scale(&self, c: &Rational) -> LinearDerivation {
        let lambda = self
            .lambda
            .iter()
            .map(|row| row.iter().map(|x| x * c).collect())
            .collect();
        Self::from_matrix(lambda).expect("square")
    }
}

fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let size = a.len();
    (0..size)
        .map(|i| {
            (0..size)
                .map(|j| (0..size).fold(Rational::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

impl fmt::Display for LinearDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.lambda {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// `d(x_i) = x_{i-1}`, `d(x_0) = 0`.
pub fn weitzenboeck(n: usize) -> LinearDerivation {
    LinearDerivation::from_fn(n, |i, j| i64::from(i >= 1 && j == i - 1))
}

/// `d̂(x_i) = (i+1)(n-i) x_{i+1}`.
pub fn raising(n: usize) -> LinearDerivation {
    LinearDerivation::from_fn(n, |i, j| {
        if j == i + 1 {
            ((i + 1) * (n - i)) as i64
        } else {
            0
        }
    })
}

/// `e(x_i) = (n - 2i) x_i`.
pub fn toral(n: usize) -> LinearDerivation {
    LinearDerivation::from_fn(n, |i, j| if i == j { n as i64 - 2 * i as i64 } else { 0 })
}

/// One application of the raising operator without building a matrix.
pub fn raise(p: &Poly) -> Poly {
    let n = p.ambient();
    let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(p.term_count() * 2);
    for (m, c) in p.terms() {
        for (i, &e) in m.exponents().iter().enumerate().take(n) {
            if e == 0 {
                continue;
            }
            let factor = i64::from(e) * ((i + 1) * (n - i)) as i64;
            accumulate(&mut acc, m.shift(i, i + 1), c * rat(factor));
        }
    }
    Poly::from_map(n, acc)
}

/// One application of the Weitzenböck derivation.
pub fn lower(p: &Poly) -> Poly {
    let n = p.ambient();
    let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(p.term_count() * 2);
    for (m, c) in p.terms() {
        for (i, &e) in m.exponents().iter().enumerate().skip(1) {
            if e == 0 {
                continue;
            }
            accumulate(&mut acc, m.shift(i, i - 1), c * rat(i64::from(e)));
        }
    }
    Poly::from_map(n, acc)
}

pub fn is_constant_of_d(p: &Poly) -> bool {
    lower(p).is_zero()
}

/// Largest `s` with `d̂^s(p) != 0`.
///
/// `d̂` raises weights by 2 and weights of degree-`D` monomials are at most
/// `n·D`, so `d̂^{n·D+1}` kills everything; exceeding that bound is an
/// internal error.
pub fn order(p: &Poly) -> Result<u32> {
    let deg = p.degree().map_err(|_| Error::ZeroPolynomial("order"))?;
    let guard = p.ambient() as u32 * deg + 1;
    let mut current = p.clone();
    for s in 0..=guard {
        let next = raise(&current);
        if next.is_zero() {
            return Ok(s);
        }
        current = next;
    }
    Err(Error::Internal(format!(
        "raising operator did not terminate within {guard} steps"
    )))
}

/// Split `p` into its homogeneous isobaric parts, ascending by `(degree, weight)`.
pub fn isobaric_components(p: &Poly) -> Vec<(i64, Poly)> {
    p.graded_components()
        .into_iter()
        .map(|(_, w, part)| (w, part))
        .collect()
}

/// `d̂^k(p)` for `k = 0..=max`, stopping early at zero.
pub(crate) fn raising_powers(p: &Poly, max: usize) -> Vec<Poly> {
    let mut out = Vec::with_capacity(max + 1);
    out.push(p.clone());
    for _ in 0..max {
        let next = raise(out.last().expect("nonempty"));
        if next.is_zero() {
            break;
        }
        out.push(next);
    }
    out
}
