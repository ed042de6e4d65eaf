//! The closure iteration `B_0 = k[x_0]`, `B_m = closure(B_{m-1})`, its
//! termination test, greedy minimization and result verification.

use std::collections::HashSet;
use std::time::Instant;

use rayon::prelude::*;

use serde::Serialize;

use crate::casimir::tau_isobaric;
use crate::certify::SliceCertifier;
use crate::derivation::{lower, order};
use crate::error::{Error, Result};
use crate::poly::{format_poly, Poly};
use crate::subalgebra::{
    expand_candidates, is_member_cached, max_multiset_degree, multisets_of_degree, signature,
    sort_candidates, Candidate, GeneratorInfo, ProductCache, Signature, SubalgebraBasis,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub n: usize,
    pub max_rounds: u32,
    /// Candidates whose `tau` image would exceed this degree are skipped.
    pub degree_cap: Option<u32>,
    pub minimize: bool,
}

impl SolverConfig {
    pub fn new(n: usize) -> Self {
        SolverConfig {
            n,
            max_rounds: 10,
            degree_cap: None,
            minimize: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_rounds == 0 {
            return Err(Error::Internal("max_rounds must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelResult {
    pub n: usize,
    pub generators: Vec<GeneratorInfo>,
    pub rounds_used: u32,
    /// The last round produced no acceptable polynomial and no candidate was
    /// skipped by a cap.
    pub closed: bool,
}

impl KernelResult {
    pub fn signatures(&self) -> Vec<Signature> {
        self.generators.iter().map(|g| g.sig).collect()
    }

    pub fn generator(&self, name: &str) -> Option<&GeneratorInfo> {
        self.generators.iter().find(|g| g.name == name)
    }
}

/// Run the closure iteration until no candidate image lies outside the
/// generated subalgebra.
///
/// `tau` raises degree by one, so candidates are processed degree by
/// degree: every image of degree `D` is tested against all generators of
/// degree below `D` and those of degree `D` accepted before it. A
/// generator's round is one more than the largest round among its factors,
/// which matches the round in which `B_m` first contains it.
pub fn compute_kernel(config: &SolverConfig) -> Result<KernelResult> {
    config.validate()?;
    let n = config.n;
    let cache = ProductCache::new();
    let mut cert = SliceCertifier::new(n);
    let mut gens = SubalgebraBasis::initial(n).all();
    let mut truncated = false;
    let mut deg = 2;
    while deg <= max_multiset_degree(&gens, n) + 1 {
        if config.degree_cap.is_some_and(|cap| deg > cap) {
            log::warn!("degree cap reached with candidates of degree {deg} pending");
            truncated = true;
            break;
        }
        let started = Instant::now();
        let step = degree_step(&gens, n, deg, config.max_rounds, &cache, &mut cert)?;
        truncated |= step.skipped > 0;
        log::info!(
            "degree {deg}: {} candidates, {} computed images, {} accepted in {:.2?}",
            step.candidates,
            step.nonzero,
            step.accepted.len(),
            started.elapsed()
        );
        gens.extend(step.accepted);
        deg += 1;
    }
    let max_round = gens.iter().map(|g| g.round).max().unwrap_or(0);
    let closed = !truncated;
    if !closed {
        log::warn!("closure not reached; the result may be incomplete");
    }
    let result = KernelResult {
        n,
        generators: gens,
        rounds_used: if closed { max_round + 1 } else { max_round },
        closed,
    };
    if config.minimize {
        minimize_with_cache(&result, &cache)
    } else {
        Ok(result)
    }
}

struct DegreeStep {
    accepted: Vec<GeneratorInfo>,
    candidates: usize,
    nonzero: usize,
    skipped: usize,
}

fn image_weight(c: &Candidate, n: usize) -> u32 {
    (n as u32 + c.order) - 2 * c.level as u32
}

fn degree_step(
    gens: &[GeneratorInfo],
    n: usize,
    deg: u32,
    max_rounds: u32,
    cache: &ProductCache,
    cert: &mut SliceCertifier,
) -> Result<DegreeStep> {
    let mut candidates = Vec::new();
    multisets_of_degree(gens, n, deg - 1, &mut |factors: &[usize]| {
        candidates.extend(expand_candidates(gens, factors, n));
    });
    let round_of = |c: &Candidate| {
        1 + c
            .factors
            .iter()
            .map(|&(i, _)| gens[i].round)
            .max()
            .unwrap_or(0)
    };
    let total = candidates.len();
    candidates.retain(|c| round_of(c) <= max_rounds);
    let skipped = total - candidates.len();
    sort_candidates(&mut candidates);
    // images in a slice already spanned by the generators are members
    candidates.retain(|c| !cert.spans(gens, deg, image_weight(c, n)));

    let images: Vec<Option<Poly>> = candidates
        .par_iter()
        .map(|cand| {
            let product = cand.product(gens, cache);
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

    let mut accepted: Vec<GeneratorInfo> = Vec::new();
    let mut current = gens.to_vec();
    for (cand, image) in distinct {
        if cert.spans(&current, deg, image_weight(cand, n)) {
            continue;
        }
        if is_member_cached(&image, &current, cache)?.is_some() {
            continue;
        }
        let name = format!("g{}", current.len());
        let info = GeneratorInfo::new(name, &image, cand.provenance.clone(), round_of(cand))?;
        log::info!(
            "accepted {} = {} {} ({} terms, round {})",
            info.name,
            info.provenance,
            info.sig,
            info.poly.term_count(),
            info.round
        );
        current.push(info.clone());
        accepted.push(info);
    }
    Ok(DegreeStep {
        accepted,
        candidates: total,
        nonzero,
        skipped,
    })
}

/// Drop generators lying in the subalgebra generated by the others, highest
/// degree first (ties by canonical string). Survivors keep discovery order.
pub fn minimize(result: &KernelResult) -> Result<KernelResult> {
    minimize_with_cache(result, &ProductCache::new())
}

fn minimize_with_cache(result: &KernelResult, cache: &ProductCache) -> Result<KernelResult> {
    let mut order_of_tests: Vec<usize> = (0..result.generators.len()).collect();
    let keys: Vec<String> = result
        .generators
        .iter()
        .map(|g| format_poly(&g.poly))
        .collect();
    order_of_tests.sort_by(|&a, &b| {
        let (ga, gb) = (&result.generators[a], &result.generators[b]);
        gb.sig
            .deg
            .cmp(&ga.sig.deg)
            .then_with(|| keys[a].cmp(&keys[b]))
    });
    let mut kept = vec![true; result.generators.len()];
    let mut cert = SliceCertifier::new(result.n);
    for idx in order_of_tests {
        let others: Vec<GeneratorInfo> = result
            .generators
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != idx && kept[j])
            .map(|(_, g)| g.clone())
            .collect();
        if others.is_empty() {
            continue;
        }
        let g = &result.generators[idx];
        let redundant = cert.check(&others, g.sig.deg, g.sig.ord)
            || is_member_cached(&g.poly, &others, cache)?.is_some();
        if redundant {
            log::info!("minimize: dropping {} {}", g.name, g.sig);
            kept[idx] = false;
        }
    }
    Ok(KernelResult {
        n: result.n,
        generators: result
            .generators
            .iter()
            .zip(kept)
            .filter(|(_, keep)| *keep)
            .map(|(g, _)| g.clone())
            .collect(),
        rounds_used: result.rounds_used,
        closed: result.closed,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorCheck {
    pub name: String,
    pub signature: Signature,
    pub term_count: usize,
    pub annihilated: bool,
    pub signature_consistent: bool,
    pub order_equals_weight: bool,
}

impl GeneratorCheck {
    pub fn passed(&self) -> bool {
        self.annihilated && self.signature_consistent && self.order_equals_weight
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub generators: Vec<GeneratorCheck>,
    pub passed: bool,
}

fn check_generator(g: &GeneratorInfo) -> GeneratorCheck {
    let annihilated = lower(&g.poly).is_zero();
    let signature_consistent = signature(&g.poly) == Ok(g.sig);
    let order_equals_weight = match (order(&g.poly), g.poly.weight()) {
        (Ok(o), Ok(w)) => i64::from(o) == w,
        _ => false,
    };
    GeneratorCheck {
        name: g.name.clone(),
        signature: g.sig,
        term_count: g.poly.term_count(),
        annihilated,
        signature_consistent,
        order_equals_weight,
    }
}

/// Per-generator checks: annihilated by `d`, stored signature matches the
/// polynomial, and order equals weight.
pub fn verify_result(result: &KernelResult) -> VerifyReport {
    let generators: Vec<GeneratorCheck> = result.generators.iter().map(check_generator).collect();
    let passed = generators.iter().all(GeneratorCheck::passed);
    VerifyReport {
        n: result.n,
        generators,
        passed,
    }
}

impl std::fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "n = {}", self.n)?;
        for g in &self.generators {
            writeln!(
                f,
                "{:<8} {:<14} terms={:<6} d-annihilated={} signature={} ord=weight={}  {}",
                g.name,
                g.signature.to_string(),
                g.term_count,
                g.annihilated,
                g.signature_consistent,
                g.order_equals_weight,
                if g.passed() { "ok" } else { "FAIL" }
            )?;
        }
        write!(f, "overall: {}", if self.passed { "PASS" } else { "FAIL" })
    }
}

/// Plain-text table: name, signature, term count, provenance.
pub fn format_table(result: &KernelResult) -> String {
    let mut out = format!(
        "n = {}  generators = {}  rounds = {}  closed = {}\n",
        result.n,
        result.generators.len(),
        result.rounds_used,
        result.closed
    );
    out.push_str(&format!(
        "{:<8} {:<14} {:>7}  {}\n",
        "name", "signature", "terms", "provenance"
    ));
    for g in &result.generators {
        out.push_str(&format!(
            "{:<8} {:<14} {:>7}  {}\n",
            g.name,
            g.sig.to_string(),
            g.poly.term_count(),
            g.provenance
        ));
    }
    out
}

/// Convenience for tests and callers holding raw polynomials.
pub fn generator_from_poly(name: &str, poly: &Poly) -> Result<GeneratorInfo> {
    GeneratorInfo::new(name, poly, name, 0)
}
