//! Brute-force kernel slices by exact nullspace, and dimension cross-checks
//! against a generating set.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly, Rational};
use crate::subalgebra::{signature_solutions, GeneratorInfo, ProductCache, Signature};

/// Monomials of one (degree, weight) slice, in descending monomial order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSlice {
    pub n: usize,
    pub deg: u32,
    pub weight: i64,
    pub monomials: Vec<Monomial>,
}

impl GradedSlice {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    fn index(&self) -> HashMap<&Monomial, usize> {
        self.monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect()
    }
}

pub fn slice_basis(n: usize, deg: u32, weight: i64) -> GradedSlice {
    let mut monomials = Vec::new();
    let twice = i64::from(deg) * n as i64 - weight;
    if twice >= 0 && twice % 2 == 0 {
        let mut exps = vec![0u16; n + 1];
        compositions(n, 0, deg, twice / 2, &mut exps, &mut monomials);
    }
    monomials.sort_unstable_by(|a, b| b.cmp(a));
    GradedSlice {
        n,
        deg,
        weight,
        monomials,
    }
}

fn compositions(
    n: usize,
    idx: usize,
    deg_left: u32,
    index_left: i64,
    exps: &mut Vec<u16>,
    out: &mut Vec<Monomial>,
) {
    if idx == n {
        if index_left == n as i64 * i64::from(deg_left) {
            exps[n] = deg_left as u16;
            out.push(Monomial::from_exponents(exps));
            exps[n] = 0;
        }
        return;
    }
    for a in 0..=deg_left {
        let used = idx as i64 * i64::from(a);
        if used > index_left {
            break;
        }
        exps[idx] = a as u16;
        compositions(n, idx + 1, deg_left - a, index_left - used, exps, out);
    }
    exps[idx] = 0;
}

/// Fraction-free Gauss-Jordan elimination in place. Rows are kept primitive.
/// Returns the pivot column of each of the first `rank` rows.
fn reduce(rows: &mut [Vec<BigInt>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        let pv = &pivot_row[c];
        for (k, row) in rows.iter_mut().enumerate() {
            if k == rank || row[c].is_zero() {
                continue;
            }
            let a = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = &*x * pv - &a * y;
            }
            make_primitive(row);
        }
        pivots.push(c);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    pivots
}

fn make_primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Exact rank of an integer matrix.
pub fn integer_rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    reduce(&mut rows, cols).len()
}

/// `d(m)` as (coefficient, monomial) pairs, computed from the exponent vector.
fn lower_monomial(m: &Monomial) -> Vec<(u16, Monomial)> {
    let e = m.exponents();
    (1..e.len())
        .filter(|&i| e[i] > 0)
        .map(|i| {
            let mut v = e.to_vec();
            v[i] -= 1;
            v[i - 1] += 1;
            (e[i], Monomial::from_exponents(&v))
        })
        .collect()
}

/// Basis of the constants of `d` in the (deg, weight) slice, primitive and
/// in a deterministic order.
pub fn kernel_slice(n: usize, deg: u32, weight: i64) -> Vec<Poly> {
    let source = slice_basis(n, deg, weight);
    if source.is_empty() {
        return Vec::new();
    }
    let target = slice_basis(n, deg, weight + 2);
    let cols = source.len();
    let at = target.index();
    let mut rows = vec![vec![BigInt::zero(); cols]; target.len()];
    for (j, m) in source.monomials.iter().enumerate() {
        for (c, image) in lower_monomial(m) {
            rows[at[&image]][j] += BigInt::from(c);
        }
    }
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let pivots = reduce(&mut rows, cols);
    let mut basis = Vec::new();
    for f in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut terms = vec![(source.monomials[f].clone(), Rational::one())];
        for (r, &pc) in pivots.iter().enumerate() {
            if !rows[r][f].is_zero() {
                let v = Rational::new(-rows[r][f].clone(), rows[r][pc].clone());
                terms.push((source.monomials[pc].clone(), v));
            }
        }
        let p = Poly::from_terms(n, terms);
        basis.push(
            p.normalize_primitive()
                .expect("free column gives a nonzero vector"),
        );
    }
    basis
}

fn coefficient_row(p: &Poly, index: &HashMap<&Monomial, usize>, len: usize) -> Vec<BigInt> {
    let denom = p
        .terms()
        .iter()
        .fold(BigInt::one(), |l, (_, c)| l.lcm(c.denom()));
    let mut row = vec![BigInt::zero(); len];
    for (m, c) in p.terms() {
        if let Some(&j) = index.get(m) {
            row[j] = c.numer() * (&denom / c.denom());
        }
    }
    row
}

fn grading_signature(g: &GeneratorInfo, n: usize) -> Result<Signature> {
    let deg = g.poly.degree()?;
    let w = g.poly.weight()?;
    if w < 0 {
        return Err(Error::NotInKernel);
    }
    let twice = i64::from(deg) * n as i64 - w;
    Ok(Signature::new(deg, w as u32, (twice / 2) as u32))
}

/// Dimension of the span of generator products lying in the (deg, weight)
/// slice. Generators must be homogeneous and isobaric.
pub fn subalgebra_slice_dim(
    gens: &[GeneratorInfo],
    n: usize,
    deg: u32,
    weight: i64,
) -> Result<usize> {
    subalgebra_slice_dim_cached(gens, n, deg, weight, &ProductCache::new())
}

fn subalgebra_slice_dim_cached(
    gens: &[GeneratorInfo],
    n: usize,
    deg: u32,
    weight: i64,
    cache: &ProductCache,
) -> Result<usize> {
    for g in gens {
        if g.poly.ambient() != n {
            return Err(Error::AmbientMismatch {
                left: g.poly.ambient(),
                right: n,
            });
        }
    }
    let twice = i64::from(deg) * n as i64 - weight;
    if weight < 0 || twice < 0 || twice % 2 != 0 {
        return Ok(0);
    }
    if deg == 0 {
        return Ok(1);
    }
    let sigs = gens
        .iter()
        .map(|g| grading_signature(g, n))
        .collect::<Result<Vec<_>>>()?;
    let target = Signature::new(deg, weight as u32, (twice / 2) as u32);
    let solutions = signature_solutions(target, &sigs);
    if solutions.is_empty() {
        return Ok(0);
    }
    let slice = slice_basis(n, deg, weight);
    let index = slice.index();
    let rows: Vec<Vec<BigInt>> = solutions
        .iter()
        .map(|e| coefficient_row(&cache.product(gens, e), &index, slice.len()))
        .collect();
    Ok(integer_rank(rows))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceCheck {
    pub deg: u32,
    pub weight: i64,
    pub oracle_dim: usize,
    pub subalgebra_dim: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheckReport {
    pub n: usize,
    pub deg_max: u32,
    pub slices: Vec<SliceCheck>,
}

impl CrossCheckReport {
    pub fn discrepancies(&self) -> Vec<&SliceCheck> {
        self.slices.iter().filter(|s| !s.ok).collect()
    }

    pub fn passed(&self) -> bool {
        self.slices.iter().all(|s| s.ok)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

impl std::fmt::Display for CrossCheckReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "n = {}  deg_max = {}", self.n, self.deg_max)?;
        writeln!(
            f,
            "{:>4} {:>7} {:>7} {:>11}",
            "deg", "weight", "kernel", "subalgebra"
        )?;
        for s in &self.slices {
            writeln!(
                f,
                "{:>4} {:>7} {:>7} {:>11}{}",
                s.deg,
                s.weight,
                s.oracle_dim,
                s.subalgebra_dim,
                if s.ok { "" } else { "  MISMATCH" }
            )?;
        }
        write!(
            f,
            "discrepancies: {}",
            self.slices.iter().filter(|s| !s.ok).count()
        )
    }
}

/// Compare kernel and subalgebra dimensions on every slice with
/// `1 <= deg <= deg_max` and weight in `0..=n*deg` of matching parity.
pub fn cross_check(gens: &[GeneratorInfo], n: usize, deg_max: u32) -> Result<CrossCheckReport> {
    let pairs: Vec<(u32, i64)> = (1..=deg_max)
        .flat_map(|deg| {
            let top = i64::from(deg) * n as i64;
            (0..=top)
                .filter(move |w| (top - w) % 2 == 0)
                .map(move |w| (deg, w))
        })
        .collect();
    let cache = ProductCache::new();
    let slices = pairs
        .par_iter()
        .map(|&(deg, weight)| {
            let oracle_dim = kernel_slice(n, deg, weight).len();
            let subalgebra_dim = subalgebra_slice_dim_cached(gens, n, deg, weight, &cache)?;
            Ok(SliceCheck {
                deg,
                weight,
                oracle_dim,
                subalgebra_dim,
                ok: oracle_dim == subalgebra_dim,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CrossCheckReport { n, deg_max, slices })
}

/// Exact test that `p` lies in the linear span of `basis`.
pub fn in_span(p: &Poly, basis: &[Poly]) -> bool {
    let mut monos: Vec<&Monomial> = basis
        .iter()
        .chain(std::iter::once(p))
        .flat_map(|q| q.terms().iter().map(|(m, _)| m))
        .collect();
    monos.sort_unstable();
    monos.dedup();
    let index: HashMap<&Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let rows: Vec<Vec<BigInt>> = basis
        .iter()
        .map(|q| coefficient_row(q, &index, monos.len()))
        .collect();
    let r = integer_rank(rows.clone());
    let mut with_p = rows;
    with_p.push(coefficient_row(p, &index, monos.len()));
    integer_rank(with_p) == r
}
