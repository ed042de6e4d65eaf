//! Signatures, signature-guided membership and the candidate filter that
//! drives the closure iteration.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::Add;
use std::sync::{Arc, Mutex};

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::casimir::tau_isobaric;
use crate::derivation::{lower, order};
use crate::error::{Error, Result};
use crate::poly::{format_poly, Monomial, Poly, Rational};

/// `[deg, ord, (n*deg - weight)/2]`, additive under multiplication.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[u32; 3]", into = "[u32; 3]")]
pub struct Signature {
    pub deg: u32,
    pub ord: u32,
    pub coweight: u32,
}

impl Signature {
    pub fn new(deg: u32, ord: u32, coweight: u32) -> Self {
        Signature { deg, ord, coweight }
    }

    pub fn scaled(self, k: u32) -> Signature {
        Signature::new(self.deg * k, self.ord * k, self.coweight * k)
    }
}

impl From<[u32; 3]> for Signature {
    fn from(v: [u32; 3]) -> Self {
        Signature::new(v[0], v[1], v[2])
    }
}

impl From<Signature> for [u32; 3] {
    fn from(s: Signature) -> Self {
        [s.deg, s.ord, s.coweight]
    }
}

impl Add for Signature {
    type Output = Signature;
    fn add(self, rhs: Signature) -> Signature {
        Signature::new(
            self.deg + rhs.deg,
            self.ord + rhs.ord,
            self.coweight + rhs.coweight,
        )
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.deg, self.ord, self.coweight)
    }
}

/// Signature of a nonzero homogeneous isobaric polynomial. The order is
/// found by iterating `d̂`; for constants of `d` it must agree with the
/// weight, and a disagreement is reported as an internal error.
pub fn signature(z: &Poly) -> Result<Signature> {
    if z.is_zero() {
        return Err(Error::ZeroPolynomial("signature"));
    }
    if !z.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let weight = z.weight()?;
    let deg = z.degree()?;
    let ord = order(z)?;
    let twice = z.ambient() as i64 * i64::from(deg) - weight;
    if twice < 0 || twice % 2 != 0 {
        return Err(Error::Internal(format!("non-integral coweight {twice}/2")));
    }
    if i64::from(ord) != weight && lower(z).is_zero() {
        return Err(Error::Internal(format!(
            "constant with order {ord} but weight {weight}"
        )));
    }
    Ok(Signature::new(deg, ord, (twice / 2) as u32))
}

/// All non-negative integer vectors `a` with `sum a_i * gens[i] = target`,
/// in lexicographic order. Generators of degree zero are held at exponent 0.
pub fn signature_solutions(target: Signature, gens: &[Signature]) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; gens.len()];
    solve_rec(target, gens, 0, &mut current, &mut out);
    out
}

fn solve_rec(
    remaining: Signature,
    gens: &[Signature],
    idx: usize,
    current: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    if idx == gens.len() {
        if remaining == Signature::default() {
            out.push(current.clone());
        }
        return;
    }
    let g = gens[idx];
    let max = if g.deg == 0 {
        0
    } else {
        let mut m = remaining.deg / g.deg;
        if g.ord > 0 {
            m = m.min(remaining.ord / g.ord);
        }
        if g.coweight > 0 {
            m = m.min(remaining.coweight / g.coweight);
        }
        m
    };
    for a in 0..=max {
        current[idx] = a;
        let used = g.scaled(a);
        let rest = Signature::new(
            remaining.deg - used.deg,
            remaining.ord - used.ord,
            remaining.coweight - used.coweight,
        );
        solve_rec(rest, gens, idx + 1, current, out);
    }
    current[idx] = 0;
}

impl Default for Signature {
    fn default() -> Self {
        Signature::new(0, 0, 0)
    }
}

/// A generator of a subalgebra of constants, stored in primitive form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorInfo {
    pub name: String,
    pub poly: Poly,
    pub sig: Signature,
    pub provenance: String,
    pub round: u32,
}

impl GeneratorInfo {
    /// Normalizes `poly` and computes its signature.
    pub fn new(
        name: impl Into<String>,
        poly: &Poly,
        provenance: impl Into<String>,
        round: u32,
    ) -> Result<Self> {
        let poly = poly.normalize_primitive()?;
        let sig = signature(&poly)?;
        Ok(GeneratorInfo {
            name: name.into(),
            poly,
            sig,
            provenance: provenance.into(),
            round,
        })
    }
}

/// Generators split into those established before the latest round and the
/// acceptable polynomials the latest round produced.
#[derive(Clone, Debug, Default)]
pub struct SubalgebraBasis {
    pub established: Vec<GeneratorInfo>,
    pub fresh: Vec<GeneratorInfo>,
}

impl SubalgebraBasis {
    /// `B_0 = k[x_0]` with `x_0` fresh.
    pub fn initial(n: usize) -> Self {
        let t = GeneratorInfo::new("t", &Poly::var(n, 0), "x0", 0).expect("x0 is a generator");
        SubalgebraBasis {
            established: Vec::new(),
            fresh: vec![t],
        }
    }

    pub fn all(&self) -> Vec<GeneratorInfo> {
        self.established
            .iter()
            .chain(&self.fresh)
            .cloned()
            .collect()
    }

    pub fn len(&self) -> usize {
        self.established.len() + self.fresh.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn ambient(&self) -> Option<usize> {
        self.established
            .iter()
            .chain(&self.fresh)
            .next()
            .map(|g| g.poly.ambient())
    }
}

/// Products of generators memoized by `(name, exponent)` lists.
#[derive(Default)]
pub struct ProductCache {
    map: Mutex<HashMap<Vec<(String, u32)>, Arc<Poly>>>,
}

impl ProductCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.lock().expect("cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `prod gens[i]^exps[i]`, reusing cached sub-products.
    pub fn product(&self, gens: &[GeneratorInfo], exps: &[u32]) -> Arc<Poly> {
        let key: Vec<(String, u32)> = gens
            .iter()
            .zip(exps)
            .filter(|(_, &e)| e > 0)
            .map(|(g, &e)| (g.name.clone(), e))
            .collect();
        self.product_by_key(gens, key)
    }

    fn product_by_key(&self, gens: &[GeneratorInfo], key: Vec<(String, u32)>) -> Arc<Poly> {
        if let Some(hit) = self.map.lock().expect("cache poisoned").get(&key) {
            return hit.clone();
        }
        let n = gens[0].poly.ambient();
        let value = match key.len() {
            0 => Arc::new(Poly::one(n)),
            _ => {
                let (name, e) = key.last().expect("nonempty").clone();
                let g = gens
                    .iter()
                    .find(|g| g.name == name)
                    .expect("factor belongs to the generator list");
                let mut prefix = key.clone();
                if e == 1 {
                    prefix.pop();
                } else {
                    prefix.last_mut().expect("nonempty").1 -= 1;
                }
                let rest = self.product_by_key(gens, prefix);
                Arc::new(&*rest * &g.poly)
            }
        };
        self.map
            .lock()
            .expect("cache poisoned")
            .insert(key, value.clone());
        value
    }
}

/// `z = sum_j coefficients[j] * prod_i gens[i]^exponents[j][i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub exponents: Vec<Vec<u32>>,
    pub coefficients: Vec<Rational>,
}

impl Representation {
    /// Terms with nonzero coefficient.
    pub fn support(&self) -> Vec<(&[u32], &Rational)> {
        self.exponents
            .iter()
            .zip(&self.coefficients)
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e.as_slice(), c))
            .collect()
    }

    pub fn describe(&self, gens: &[GeneratorInfo]) -> String {
        let terms: Vec<String> = self
            .support()
            .into_iter()
            .map(|(e, c)| format!("({c})*{}", monomial_name(gens, e)))
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

pub(crate) fn monomial_name(gens: &[GeneratorInfo], exps: &[u32]) -> String {
    let parts: Vec<String> = gens
        .iter()
        .zip(exps)
        .filter(|(_, &e)| e > 0)
        .map(|(g, &e)| {
            if e == 1 {
                g.name.clone()
            } else {
                format!("{}^{e}", g.name)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Is `z` in `k[gens]`? Returns the coefficients over the
/// signature-matching generator products when it is.
pub fn is_member_of(z: &Poly, gens: &[GeneratorInfo]) -> Result<Option<Representation>> {
    is_member_cached(z, gens, &ProductCache::new())
}

/// Membership in the subalgebra generated by every generator of `basis`.
pub fn is_member(z: &Poly, basis: &SubalgebraBasis) -> Result<Option<Representation>> {
    is_member_of(z, &basis.all())
}

pub fn is_member_cached(
    z: &Poly,
    gens: &[GeneratorInfo],
    cache: &ProductCache,
) -> Result<Option<Representation>> {
    if !lower(z).is_zero() {
        return Err(Error::NotInKernel);
    }
    let target = signature(z)?;
    if let Some(g) = gens.iter().find(|g| g.poly.ambient() != z.ambient()) {
        return Err(Error::AmbientMismatch {
            left: z.ambient(),
            right: g.poly.ambient(),
        });
    }
    let sigs: Vec<Signature> = gens.iter().map(|g| g.sig).collect();
    let solutions = signature_solutions(target, &sigs);
    if solutions.is_empty() {
        return Ok(None);
    }
    let products: Vec<Arc<Poly>> = solutions
        .iter()
        .map(|exps| cache.product(gens, exps))
        .collect();
    Ok(
        solve_in_span(z, &products).map(|coefficients| Representation {
            exponents: solutions,
            coefficients,
        }),
    )
}

/// Exact solve of `z = sum beta_j * vectors[j]` by leading-term elimination.
fn solve_in_span(z: &Poly, vectors: &[Arc<Poly>]) -> Option<Vec<Rational>> {
    let k = vectors.len();
    // echelon rows: distinct leading monomials, each with its combination
    let mut rows: Vec<(Poly, Vec<Rational>)> = Vec::new();
    let mut pivots: HashMap<Monomial, usize> = HashMap::new();
    let reduce = |mut v: Poly,
                  mut combo: Vec<Rational>,
                  rows: &[(Poly, Vec<Rational>)],
                  pivots: &HashMap<Monomial, usize>| {
        while let Some((lead, lc)) = v.leading_term() {
            let Some(&r) = pivots.get(lead) else { break };
            let (row, row_combo) = &rows[r];
            let q = lc / &row.leading_term().expect("nonzero row").1;
            v = &v - &row.scale(&q);
            for (c, rc) in combo.iter_mut().zip(row_combo) {
                if !rc.is_zero() {
                    *c -= &q * rc;
                }
            }
        }
        (v, combo)
    };
    for (j, vec) in vectors.iter().enumerate() {
        let mut combo = vec![Rational::zero(); k];
        combo[j] = Rational::from_integer(1.into());
        let (v, combo) = reduce((**vec).clone(), combo, &rows, &pivots);
        if let Some((lead, _)) = v.leading_term() {
            pivots.insert(lead.clone(), rows.len());
            rows.push((v, combo));
        }
    }
    let (rest, combo) = reduce(z.clone(), vec![Rational::zero(); k], &rows, &pivots);
    // rest = z + sum_j combo_j * vectors[j]
    rest.is_zero()
        .then(|| combo.into_iter().map(|c| -c).collect())
}

/// A `tau_level(product)` that might be acceptable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub level: usize,
    /// `(index into SubalgebraBasis::all(), exponent)`, ascending by index.
    pub factors: Vec<(usize, u32)>,
    pub multiplicity: u32,
    pub degree: u32,
    pub order: u32,
    pub provenance: String,
}

impl Candidate {
    pub fn product(&self, gens: &[GeneratorInfo], cache: &ProductCache) -> Arc<Poly> {
        let mut exps = vec![0u32; gens.len()];
        for &(i, e) in &self.factors {
            exps[i] = e;
        }
        cache.product(gens, &exps)
    }

    /// Degree of `tau_level(product)`.
    pub fn image_degree(&self) -> u32 {
        self.degree + 1
    }
}

/// Enumerate `tau_k(f^a g^b)` with at least one fresh factor, then drop
/// every pair covered by one of the reducibility rules:
///
/// 1. total multiplicity greater than `k`;
/// 2. no fresh factor;
/// 3. a factor of order zero;
/// 4. a split `u * v` of the product with `ord(v) >= k`.
///
/// What survives satisfies `ord(product) - min factor order < k <=
/// min(n, ord(product))` and `multiplicity <= k`.
pub fn candidate_products(basis: &SubalgebraBasis, n: usize) -> Vec<Candidate> {
    let gens = basis.all();
    let fresh_from = basis.established.len();
    // only positive-order generators can appear (rule 3)
    let usable: Vec<usize> = (0..gens.len()).filter(|&i| gens[i].sig.ord > 0).collect();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    enumerate_multisets(
        &usable,
        0,
        &gens,
        n,
        &mut chosen,
        &mut |factors: &[usize]| {
            if factors.iter().any(|&i| i >= fresh_from) {
                out.extend(expand_candidates(&gens, factors, n));
            }
        },
    );
    sort_candidates(&mut out);
    out
}

pub(crate) fn sort_candidates(out: &mut [Candidate]) {
    out.sort_by(|a, b| {
        (a.level, a.multiplicity, &a.provenance).cmp(&(b.level, b.multiplicity, &b.provenance))
    });
}

/// The levels `k` that survive the reducibility rules for one multiset of
/// positive-order factors (non-decreasing indices into `gens`).
pub(crate) fn expand_candidates(
    gens: &[GeneratorInfo],
    factors: &[usize],
    n: usize,
) -> Vec<Candidate> {
    let total_ord: u32 = factors.iter().map(|&i| gens[i].sig.ord).sum();
    let min_ord = factors.iter().map(|&i| gens[i].sig.ord).min().unwrap_or(0);
    let multiplicity = factors.len() as u32;
    let lo = (total_ord - min_ord + 1).max(multiplicity) as usize;
    let hi = (total_ord as usize).min(n);
    if lo > hi {
        return Vec::new();
    }
    let mut grouped: Vec<(usize, u32)> = Vec::new();
    for &i in factors {
        match grouped.last_mut() {
            Some((j, e)) if *j == i => *e += 1,
            _ => grouped.push((i, 1)),
        }
    }
    let degree: u32 = factors.iter().map(|&i| gens[i].sig.deg).sum();
    let product_name = {
        let mut exps = vec![0u32; gens.len()];
        for &(i, e) in &grouped {
            exps[i] = e;
        }
        monomial_name(gens, &exps)
    };
    (lo..=hi)
        .map(|k| Candidate {
            level: k,
            factors: grouped.clone(),
            multiplicity,
            degree,
            order: total_ord,
            provenance: format!("tau_{k}({product_name})"),
        })
        .collect()
}

/// Multisets of positive-order generators with product degree exactly
/// `degree`, under the same pruning as `candidate_products`.
pub(crate) fn multisets_of_degree(
    gens: &[GeneratorInfo],
    n: usize,
    degree: u32,
    visit: &mut dyn FnMut(&[usize]),
) {
    let usable: Vec<usize> = (0..gens.len()).filter(|&i| gens[i].sig.ord > 0).collect();
    let mut chosen = Vec::new();
    degree_rec(&usable, 0, gens, n, degree, 0, &mut chosen, visit);
}

#[allow(clippy::too_many_arguments)]
fn degree_rec(
    usable: &[usize],
    start: usize,
    gens: &[GeneratorInfo],
    n: usize,
    target: u32,
    deg: u32,
    chosen: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    for pos in start..usable.len() {
        let idx = usable[pos];
        let d = deg + gens[idx].sig.deg;
        if d > target {
            continue;
        }
        chosen.push(idx);
        let total: u32 = chosen.iter().map(|&i| gens[i].sig.ord).sum();
        let min = chosen.iter().map(|&i| gens[i].sig.ord).min().unwrap_or(0);
        if ((total - min) as usize) < n && chosen.len() <= n {
            if d == target {
                visit(chosen);
            } else {
                degree_rec(usable, pos, gens, n, target, d, chosen, visit);
            }
        }
        chosen.pop();
    }
}

/// Largest product degree over all admissible multisets.
pub(crate) fn max_multiset_degree(gens: &[GeneratorInfo], n: usize) -> u32 {
    let usable: Vec<usize> = (0..gens.len()).filter(|&i| gens[i].sig.ord > 0).collect();
    let mut best = 0;
    let mut chosen = Vec::new();
    enumerate_multisets(&usable, 0, gens, n, &mut chosen, &mut |f: &[usize]| {
        if !expand_candidates(gens, f, n).is_empty() {
            best = best.max(f.iter().map(|&i| gens[i].sig.deg).sum());
        }
    });
    best
}

/// Non-decreasing index sequences over `usable`, pruned once
/// `ord - min ord >= n` (that quantity never decreases as factors are added).
fn enumerate_multisets(
    usable: &[usize],
    start: usize,
    gens: &[GeneratorInfo],
    n: usize,
    chosen: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    for pos in start..usable.len() {
        let idx = usable[pos];
        chosen.push(idx);
        let total: u32 = chosen.iter().map(|&i| gens[i].sig.ord).sum();
        let min = chosen.iter().map(|&i| gens[i].sig.ord).min().unwrap_or(0);
        if ((total - min) as usize) < n && chosen.len() <= n {
            visit(chosen);
            enumerate_multisets(usable, pos, gens, n, chosen, visit);
        }
        chosen.pop();
    }
}

/// Settings for one closure round.
#[derive(Clone, Debug)]
pub struct RoundOptions {
    pub round: u32,
    /// Number used for the first new generator name (`g<number>`).
    pub first_index: usize,
    /// Skip candidates whose image degree exceeds this bound.
    pub degree_cap: Option<u32>,
}

/// Result of one closure round.
#[derive(Clone, Debug, Default)]
pub struct RoundOutcome {
    pub accepted: Vec<GeneratorInfo>,
    pub candidates: usize,
    pub nonzero: usize,
    pub skipped_by_cap: usize,
}

/// The acceptable polynomials for `basis`: nonzero `tau` images of the
/// candidates that are not in the subalgebra generated by `basis` together
/// with the acceptable polynomials found before them (by degree, then
/// candidate order).
pub fn acceptable_set(basis: &SubalgebraBasis, n: usize) -> Result<Vec<GeneratorInfo>> {
    let options = RoundOptions {
        round: 1,
        first_index: basis.len(),
        degree_cap: None,
    };
    Ok(run_round(basis, n, &options, &ProductCache::new())?.accepted)
}

pub fn run_round(
    basis: &SubalgebraBasis,
    n: usize,
    options: &RoundOptions,
    cache: &ProductCache,
) -> Result<RoundOutcome> {
    let gens = basis.all();
    let all_candidates = candidate_products(basis, n);
    let total = all_candidates.len();
    let (candidates, skipped): (Vec<Candidate>, Vec<Candidate>) =
        all_candidates.into_iter().partition(|c| {
            options
                .degree_cap
                .map_or(true, |cap| c.image_degree() <= cap)
        });
    log::info!(
        "round {}: {} candidates ({} beyond degree cap)",
        options.round,
        total,
        skipped.len()
    );

    let images: Vec<Option<Poly>> = candidates
        .par_iter()
        .map(|cand| {
            let product = cand.product(&gens, cache);
            let image = tau_isobaric(cand.level, &product, cand.order);
            if image.is_zero() {
                return Ok(None);
            }
            if !lower(&image).is_zero() {
                return Err(Error::Internal(format!(
                    "{} is not a constant",
                    cand.provenance
                )));
            }
            Ok(Some(image.normalize_primitive()?))
        })
        .collect::<Result<_>>()?;

    // deduplicate up to scalar, keeping the first in candidate order
    let mut seen = HashSet::new();
    let mut distinct: Vec<(&Candidate, Poly)> = Vec::new();
    for (cand, image) in candidates.iter().zip(images) {
        if let Some(image) = image {
            if seen.insert(format_poly(&image)) {
                distinct.push((cand, image));
            }
        }
    }
    let nonzero = distinct.len();
    // lower degrees first, so later images can use earlier acceptances
    distinct.sort_by_key(|(cand, _)| cand.image_degree());

    let outside: Vec<bool> = distinct
        .par_iter()
        .map(|(_, image)| Ok(is_member_cached(image, &gens, cache)?.is_none()))
        .collect::<Result<_>>()?;

    let mut accepted: Vec<GeneratorInfo> = Vec::new();
    let mut current = gens.clone();
    for ((cand, image), outside) in distinct.into_iter().zip(outside) {
        if !outside {
            continue;
        }
        if !accepted.is_empty() && is_member_cached(&image, &current, cache)?.is_some() {
            continue;
        }
        let name = format!("g{}", options.first_index + accepted.len());
        let info = GeneratorInfo::new(name, &image, cand.provenance.clone(), options.round)?;
        log::info!(
            "round {}: accepted {} = {} {} ({} terms)",
            options.round,
            info.name,
            info.provenance,
            info.sig,
            info.poly.term_count()
        );
        current.push(info.clone());
        accepted.push(info);
    }
    Ok(RoundOutcome {
        accepted,
        candidates: total,
        nonzero,
        skipped_by_cap: skipped.len(),
    })
}
