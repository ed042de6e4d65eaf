//! Completeness certificates for graded kernel slices.
//!
//! `d` maps the `(deg, w)` slice onto the `(deg, w + 2)` slice for `w >= -1`,
//! so the kernel slice has dimension `N(deg, w) - N(deg, w + 2)` where `N`
//! counts monomials. Generator products have integer coefficients; their
//! values at integer points reduced mod `p` form a matrix whose rank is at
//! most the rank of the products over `Q`. Reaching the kernel dimension mod
//! `p` therefore proves that the products span the whole slice.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::Poly;
use crate::subalgebra::{signature_solutions, GeneratorInfo, Signature};

const P: u64 = (1 << 61) - 1;

fn mul(a: u64, b: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(P)) as u64
}

fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

fn inv(a: u64) -> u64 {
    pow(a, P - 2)
}

fn reduce(x: &BigInt) -> u64 {
    let m = BigInt::from(P);
    let r = ((x % &m) + &m) % &m;
    r.to_u64().expect("residue fits")
}

/// Number of monomials of degree `deg` in `x_0..x_n` with `sum(i * a_i) = c`,
/// i.e. partitions of `c` into at most `deg` parts of size at most `n`.
pub fn monomial_count(n: usize, deg: u32, c: i64) -> u128 {
    if c < 0 || c > n as i64 * i64::from(deg) {
        return 0;
    }
    let (deg, c) = (deg as usize, c as usize);
    // table[k][s]: multisets of size k from {0..=i} with index sum s
    let mut table = vec![vec![0u128; c + 1]; deg + 1];
    table[0][0] = 1;
    for i in 0..=n {
        for k in 1..=deg {
            for s in i..=c {
                let add = table[k - 1][s - i];
                table[k][s] += add;
            }
        }
    }
    table[deg][c]
}

/// Dimension of the constants of `d` of degree `deg` and weight `weight`.
pub fn kernel_dim(n: usize, deg: u32, weight: i64) -> u128 {
    let twice = n as i64 * i64::from(deg) - weight;
    if weight < 0 || twice < 0 || twice % 2 != 0 {
        return 0;
    }
    let c = twice / 2;
    monomial_count(n, deg, c) - monomial_count(n, deg, c - 1)
}

/// Caches generator values at a fixed pseudo-random point set and remembers
/// which slices are known to be spanned.
pub struct SliceCertifier {
    n: usize,
    rng: ChaCha8Rng,
    points: Vec<Vec<u64>>,
    values: HashMap<String, Vec<u64>>,
    complete: HashSet<(u32, u32)>,
}

impl SliceCertifier {
    pub fn new(n: usize) -> Self {
        SliceCertifier {
            n,
            rng: ChaCha8Rng::seed_from_u64(0x5eed_0fd1),
            points: Vec::new(),
            values: HashMap::new(),
            complete: HashSet::new(),
        }
    }

    fn ensure_points(&mut self, count: usize) {
        while self.points.len() < count {
            let pt = (0..=self.n).map(|_| self.rng.gen_range(1..P)).collect();
            self.points.push(pt);
        }
    }

    fn values_of(&mut self, g: &GeneratorInfo, count: usize) -> &[u64] {
        let have = self.values.get(&g.name).map_or(0, Vec::len);
        if have < count {
            let coeffs: Vec<u64> = g
                .poly
                .terms()
                .iter()
                .map(|(_, c)| mul(reduce(c.numer()), inv(reduce(c.denom()))))
                .collect();
            let extra: Vec<u64> = (have..count)
                .map(|i| evaluate(&g.poly, &coeffs, &self.points[i]))
                .collect();
            self.values.entry(g.name.clone()).or_default().extend(extra);
        }
        &self.values[&g.name][..count]
    }

    /// True if products of `gens` span every constant of degree `deg` and
    /// weight `weight`. `false` means "not proven", not "not spanned".
    ///
    /// Positive answers are remembered, so `gens` must only grow between
    /// calls on the same certifier. Use [`SliceCertifier::check`] otherwise.
    pub fn spans(&mut self, gens: &[GeneratorInfo], deg: u32, weight: u32) -> bool {
        if self.complete.contains(&(deg, weight)) {
            return true;
        }
        let ok = self.check(gens, deg, weight);
        if ok {
            self.complete.insert((deg, weight));
        }
        ok
    }

    /// [`SliceCertifier::spans`] without memoizing the answer.
    pub fn check(&mut self, gens: &[GeneratorInfo], deg: u32, weight: u32) -> bool {
        let dim = kernel_dim(self.n, deg, i64::from(weight));
        if dim == 0 {
            return true;
        }
        let twice = self.n as i64 * i64::from(deg) - i64::from(weight);
        let target = Signature::new(deg, weight, (twice / 2) as u32);
        let sigs: Vec<Signature> = gens.iter().map(|g| g.sig).collect();
        let solutions = signature_solutions(target, &sigs);
        if (solutions.len() as u128) < dim {
            return false;
        }
        let dim = dim as usize;
        let count = dim + 2;
        self.ensure_points(count);
        let used: Vec<usize> = (0..gens.len())
            .filter(|&i| solutions.iter().any(|s| s[i] > 0))
            .collect();
        let mut vals: HashMap<usize, Vec<u64>> = HashMap::new();
        for &i in &used {
            vals.insert(i, self.values_of(&gens[i], count).to_vec());
        }
        let mut echelon: Vec<(usize, Vec<u64>)> = Vec::new();
        for s in &solutions {
            let mut row = vec![1u64; count];
            for (&i, &e) in used.iter().map(|i| (i, &s[*i])) {
                if e == 0 {
                    continue;
                }
                for (r, &v) in row.iter_mut().zip(&vals[&i]) {
                    *r = mul(*r, pow(v, u64::from(e)));
                }
            }
            for (pc, prow) in &echelon {
                let f = row[*pc];
                if f != 0 {
                    for (r, &q) in row.iter_mut().zip(prow) {
                        *r = sub(*r, mul(f, q));
                    }
                }
            }
            if let Some(pc) = row.iter().position(|&x| x != 0) {
                let scale = inv(row[pc]);
                for r in row.iter_mut() {
                    *r = mul(*r, scale);
                }
                echelon.push((pc, row));
                if echelon.len() == dim {
                    return true;
                }
            }
        }
        false
    }
}

fn evaluate(p: &Poly, coeffs: &[u64], point: &[u64]) -> u64 {
    let mut total = 0;
    for ((m, _), &c) in p.terms().iter().zip(coeffs) {
        let mut v = c;
        for (&e, &x) in m.exponents().iter().zip(point) {
            if e > 0 {
                v = mul(v, pow(x, u64::from(e)));
            }
        }
        total = add(total, v);
    }
    total
}
