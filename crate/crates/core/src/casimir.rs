//! Dual modules, Casimir elements and the `tau_i` maps.
//!
//! Every homogeneous constant `z` of a linear derivation is a Casimir element
//! `(1/deg z) * sum_i x_i * dz/dx_i`. For the Weitzenböck derivation the
//! string `v_k = alpha_k * d̂^k(z)` with `alpha_k = (w-k)! / (k! w!)` is a
//! copy of `X_m = <x_0..x_m>`, and pairing `X_i` with the dual of the string
//! gives
//!
//! ```text
//! tau_i(z) = sum_{k=0}^{i} (-1)^k x_{i-k} v_k(z)
//! ```
//!
//! which is again a constant. This sign convention is fixed throughout the
//! crate; `tau_decompose` relies on it.

use num_traits::{One, Zero};

use crate::derivation::{lower, order, raising_powers, weitzenboeck, LinearDerivation};
use crate::error::{Error, Result};
use crate::poly::{rat, Monomial, Poly, Rational};

/// A finite-dimensional module realized inside `k[X]`:
/// `D(basis_i) = sum_j matrix[i][j] * basis_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizedModule {
    basis: Vec<Poly>,
    matrix: Vec<Vec<Rational>>,
}

impl RealizedModule {
    /// Checks that `matrix` describes the action of `derivation` on `basis`.
    pub fn new(
        basis: Vec<Poly>,
        matrix: Vec<Vec<Rational>>,
        derivation: &LinearDerivation,
    ) -> Result<Self> {
        let dim = basis.len();
        if matrix.len() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: matrix.len(),
            });
        }
        if let Some(row) = matrix.iter().find(|row| row.len() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: row.len(),
            });
        }
        let n = derivation.ambient();
        for (i, b) in basis.iter().enumerate() {
            let image = derivation.apply(b)?;
            let expected = combine(n, &matrix[i], &basis);
            if image != expected {
                return Err(Error::ActionMismatch(i));
            }
        }
        Ok(RealizedModule { basis, matrix })
    }

    /// `X_n` itself under a linear derivation: basis `x_0..x_n`, matrix `lambda`.
    pub fn variables(derivation: &LinearDerivation) -> Self {
        let n = derivation.ambient();
        RealizedModule {
            basis: (0..=n).map(|i| Poly::var(n, i)).collect(),
            matrix: derivation.matrix().to_vec(),
        }
    }

    /// `X_m = <x_0, ..., x_m>` under the Weitzenböck derivation of `k[x_0..x_n]`.
    pub fn weitzenboeck_variables(m: usize, n: usize) -> Result<Self> {
        if m > n {
            return Err(Error::LevelOutOfRange { level: m, bound: n });
        }
        Ok(RealizedModule {
            basis: (0..=m).map(|i| Poly::var(n, i)).collect(),
            matrix: jordan_lowering(m + 1),
        })
    }

    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn combine(n: usize, coeffs: &[Rational], basis: &[Poly]) -> Poly {
    coeffs
        .iter()
        .zip(basis)
        .filter(|(c, _)| !c.is_zero())
        .fold(Poly::zero(n), |acc, (c, b)| &acc + &b.scale(c))
}

/// Matrix of `e_i -> e_{i-1}` in row convention.
fn jordan_lowering(size: usize) -> Vec<Vec<Rational>> {
    (0..size)
        .map(|i| {
            (0..size)
                .map(|j| rat(i64::from(i >= 1 && j == i - 1)))
                .collect()
        })
        .collect()
}

/// True iff `W.matrix = -(V.matrix)^T`.
pub fn check_dual(v: &RealizedModule, w: &RealizedModule) -> Result<bool> {
    if v.dim() != w.dim() {
        return Err(Error::DimensionMismatch {
            left: v.dim(),
            right: w.dim(),
        });
    }
    let dim = v.dim();
    Ok((0..dim).all(|i| (0..dim).all(|j| w.matrix[i][j] == -&v.matrix[j][i])))
}

/// `Delta(V, W) = sum_i v_i * w_i` for a dual pair.
pub fn casimir_element(v: &RealizedModule, w: &RealizedModule) -> Result<Poly> {
    if !check_dual(v, w)? {
        return Err(Error::NotDual);
    }
    let n = v
        .basis
        .first()
        .map(Poly::ambient)
        .ok_or(Error::DimensionMismatch { left: 0, right: 0 })?;
    Ok(v.basis
        .iter()
        .zip(&w.basis)
        .fold(Poly::zero(n), |acc, (a, b)| &acc + &(a * b)))
}

/// Quadratic Casimir element of `(X_m, X_m^*)`: `sum_{i=0}^m (-1)^i x_i x_{m-i}`.
pub fn standard_casimir(m: usize, n: usize) -> Result<Poly> {
    if m > n {
        return Err(Error::LevelOutOfRange { level: m, bound: n });
    }
    let terms = (0..=m).map(|i| {
        let mon = Monomial::var(n, i).mul(&Monomial::var(n, m - i));
        (mon, rat(if i % 2 == 0 { 1 } else { -1 }))
    });
    Ok(Poly::from_terms(n, terms))
}

/// `alpha_k = (w-k)! / (k! w!)` for `k = 0..=max` (requires `max <= w`).
pub fn string_coefficients(weight: u32, max: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(max + 1);
    let mut alpha = Rational::one();
    out.push(alpha.clone());
    for k in 1..=max {
        let k = k as i64;
        alpha /= rat(k * (i64::from(weight) - k + 1));
        out.push(alpha.clone());
    }
    out
}

/// The `d`-module `V_m(z) = <v_0, ..., v_m>` with `d(v_i) = v_{i-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringModule {
    source: Poly,
    omega: u32,
    vectors: Vec<Poly>,
}

impl StringModule {
    pub fn source(&self) -> &Poly {
        &self.source
    }

    pub fn omega(&self) -> u32 {
        self.omega
    }

    pub fn vectors(&self) -> &[Poly] {
        &self.vectors
    }

    pub fn level(&self) -> usize {
        self.vectors.len() - 1
    }

    /// The string as a realized `d`-module (Jordan matrix).
    pub fn realized(&self) -> RealizedModule {
        RealizedModule {
            basis: self.vectors.clone(),
            matrix: jordan_lowering(self.vectors.len()),
        }
    }

    /// Dual of the string: `w_j = (-1)^{m-j} v_{m-j}`, paired against `X_m`.
    pub fn dual(&self) -> RealizedModule {
        let m = self.level();
        let basis = (0..=m)
            .map(|j| {
                let v = &self.vectors[m - j];
                if (m - j) % 2 == 0 {
                    v.clone()
                } else {
                    -v
                }
            })
            .collect();
        let size = m + 1;
        let matrix = (0..size)
            .map(|i| {
                (0..size)
                    .map(|j| rat(if j == i + 1 { -1 } else { 0 }))
                    .collect()
            })
            .collect();
        RealizedModule { basis, matrix }
    }
}

fn check_isobaric_constant(z: &Poly) -> Result<u32> {
    if z.is_zero() {
        return Err(Error::ZeroPolynomial("string module"));
    }
    let w = z.weight()?;
    if !lower(z).is_zero() {
        return Err(Error::NotInKernel);
    }
    u32::try_from(w).map_err(|_| Error::Internal(format!("constant of negative weight {w}")))
}

pub fn string_module(z: &Poly, m: usize) -> Result<StringModule> {
    let omega = check_isobaric_constant(z)?;
    let bound = (order(z)? as usize).min(z.ambient());
    if m > bound {
        return Err(Error::LevelOutOfRange { level: m, bound });
    }
    let powers = raising_powers(z, m);
    let alphas = string_coefficients(omega, m);
    let vectors = (0..=m)
        .map(|k| {
            powers
                .get(k)
                .map(|p| p.scale(&alphas[k]))
                .unwrap_or_else(|| Poly::zero(z.ambient()))
        })
        .collect();
    Ok(StringModule {
        source: z.clone(),
        omega,
        vectors,
    })
}

/// `tau_i` on a homogeneous isobaric constant of weight `omega`, with
/// `i <= min(omega, n)` already checked by the caller.
pub(crate) fn tau_isobaric(i: usize, z: &Poly, omega: u32) -> Poly {
    let n = z.ambient();
    debug_assert!(i <= n && i <= omega as usize);
    let powers = raising_powers(z, i);
    let alphas = string_coefficients(omega, i);
    let mut out = Poly::zero(n);
    for (k, power) in powers.iter().enumerate() {
        let mut coeff = alphas[k].clone();
        if k % 2 == 1 {
            coeff = -coeff;
        }
        out = &out + &power.times_var(i - k).scale(&coeff);
    }
    out
}

/// `tau_i(z)`, extended linearly over the isobaric parts of `z`. Each part
/// must be a constant of `d` whose order is at least `i`, and `i <= n`.
pub fn tau(i: usize, z: &Poly) -> Result<Poly> {
    let n = z.ambient();
    if i > n {
        return Err(Error::LevelOutOfRange { level: i, bound: n });
    }
    let mut out = Poly::zero(n);
    for (_, w, part) in z.graded_components() {
        if !lower(&part).is_zero() {
            return Err(Error::NotInKernel);
        }
        let omega = u32::try_from(w).map_err(|_| Error::NotInKernel)?;
        if i > omega as usize {
            return Err(Error::LevelOutOfRange {
                level: i,
                bound: omega as usize,
            });
        }
        out = &out + &tau_isobaric(i, &part, omega);
    }
    Ok(out)
}

/// `c(0..=n)` with `deg(z) * z = sum_i tau_{n-i}(c(i))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauDecomposition {
    source: Poly,
    c: Vec<Poly>,
}

impl TauDecomposition {
    pub fn source(&self) -> &Poly {
        &self.source
    }

    pub fn c(&self) -> &[Poly] {
        &self.c
    }

    /// `sum_i tau_{n-i}(c(i))`.
    pub fn reconstruct(&self) -> Result<Poly> {
        let n = self.source.ambient();
        let mut out = Poly::zero(n);
        for (i, ci) in self.c.iter().enumerate() {
            if !ci.is_zero() {
                out = &out + &tau(n - i, ci)?;
            }
        }
        Ok(out)
    }
}

/// Write a homogeneous isobaric constant as a sum of `tau` images:
///
/// ```text
/// c(0) = dz/dx_n
/// c(i) = dz/dx_{n-i} + sum_{k=1}^{i} (-1)^{k+1} c_k(i-k)
/// c_k(j) = alpha_k(c(j)) * d̂^k(c(j))
/// ```
///
/// The reconstruction identity is verified before returning.
pub fn tau_decompose(z: &Poly) -> Result<TauDecomposition> {
    let n = z.ambient();
    check_isobaric_constant(z)?;
    let deg = z.degree()?;
    // strings[j][k] = c_k(j); empty when c(j) = 0
    let mut strings: Vec<Vec<Poly>> = Vec::with_capacity(n + 1);
    let mut c: Vec<Poly> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut ci = z.partial(n - i)?;
        for k in 1..=i {
            let source = &strings[i - k];
            if source.is_empty() {
                continue;
            }
            let ck = source.get(k).ok_or_else(|| {
                Error::Internal(format!(
                    "c({}) has order below {k}, required by c({i})",
                    i - k
                ))
            })?;
            ci = if k % 2 == 1 { &ci + ck } else { &ci - ck };
        }
        if ci.is_zero() {
            strings.push(Vec::new());
        } else {
            if !lower(&ci).is_zero() {
                return Err(Error::Internal(format!("c({i}) is not a constant")));
            }
            let w = ci.weight()?;
            let omega = u32::try_from(w)
                .map_err(|_| Error::Internal(format!("c({i}) has negative weight {w}")))?;
            let needed = (n - i).min(omega as usize);
            let powers = raising_powers(&ci, needed);
            let alphas = string_coefficients(omega, needed);
            strings.push(
                powers
                    .iter()
                    .zip(&alphas)
                    .map(|(p, a)| p.scale(a))
                    .collect(),
            );
        }
        c.push(ci);
    }
    let decomposition = TauDecomposition {
        source: z.clone(),
        c,
    };
    let rebuilt = decomposition.reconstruct().map_err(|e| {
        Error::Internal(format!(
            "tau decomposition produced an inadmissible term: {e}"
        ))
    })?;
    if rebuilt != z.scale(&rat(i64::from(deg))) {
        return Err(Error::Internal(
            "tau decomposition does not reconstruct deg(z) * z".into(),
        ));
    }
    Ok(decomposition)
}

/// `Z_D = <dz/dx_0, ..., dz/dx_n>` with matrix `-lambda^T`, dual to `X_n`.
pub fn gradient_module(z: &Poly, derivation: &LinearDerivation) -> Result<RealizedModule> {
    if z.is_zero() {
        return Err(Error::ZeroPolynomial("gradient_module"));
    }
    if !derivation.apply(z)?.is_zero() {
        return Err(Error::NotInKernel);
    }
    let n = derivation.ambient();
    let basis = (0..=n).map(|i| z.partial(i)).collect::<Result<Vec<_>>>()?;
    let lambda = derivation.matrix();
    let matrix = (0..=n)
        .map(|i| (0..=n).map(|j| -&lambda[j][i]).collect())
        .collect();
    RealizedModule::new(basis, matrix, derivation)
}

/// `Delta(X_n, Z_D) = sum_i x_i dz/dx_i`, checked against `deg(z) * z`.
pub fn euler_casimir(z: &Poly, derivation: &LinearDerivation) -> Result<Poly> {
    if !z.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let deg = z.degree()?;
    let grad = gradient_module(z, derivation)?;
    let vars = RealizedModule::variables(derivation);
    let delta = casimir_element(&vars, &grad)?;
    if delta != z.scale(&rat(i64::from(deg))) {
        return Err(Error::Internal("Euler identity failed".into()));
    }
    Ok(delta)
}

/// `tau_i` computed as the Casimir element of `X_i` and the dual string.
pub fn tau_via_casimir(i: usize, z: &Poly) -> Result<Poly> {
    let n = z.ambient();
    let string = string_module(z, i)?;
    let vars = RealizedModule::weitzenboeck_variables(i, n)?;
    let dual = string.dual();
    // both sides are genuine d-modules; verify before pairing
    let d = weitzenboeck(n);
    RealizedModule::new(vars.basis.clone(), vars.matrix.clone(), &d)?;
    RealizedModule::new(dual.basis.clone(), dual.matrix.clone(), &d)?;
    casimir_element(&vars, &dual)
}
