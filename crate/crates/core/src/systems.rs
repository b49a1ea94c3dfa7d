//! Dense homogeneous polynomial systems and the Weyl geometry of their
//! coefficient space.
//!
//! A system of `n` equations in the `n + 1` variables `x_0, ..., x_n` is
//! stored as one flat coefficient vector. Within an equation of degree `d`
//! the monomials are ordered by their exponent tuples `(a_0, ..., a_n)` in
//! lexicographically descending order, so `x_0^d` always comes first and
//! `x_n^d` last.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent tuple `(a_0, ..., a_n)` of a monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialIndex(pub Vec<u32>);

impl MonomialIndex {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

/// All monomials of one degree in a fixed number of variables, in canonical
/// order, with a reverse lookup.
#[derive(Debug)]
pub(crate) struct MonomialTable {
    nvars: usize,
    exponents: Vec<u32>,
    lookup: HashMap<Vec<u32>, usize>,
}

impl MonomialTable {
    pub(crate) fn new(nvars: usize, degree: u32) -> Self {
        let mut exponents = Vec::new();
        let mut current = vec![0u32; nvars];
        push_monomials(&mut current, 0, degree, &mut exponents);
        let len = exponents.len() / nvars;
        let lookup = (0..len)
            .map(|k| (exponents[k * nvars..(k + 1) * nvars].to_vec(), k))
            .collect();
        Self {
            nvars,
            exponents,
            lookup,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.exponents.len() / self.nvars
    }

    pub(crate) fn get(&self, k: usize) -> &[u32] {
        &self.exponents[k * self.nvars..(k + 1) * self.nvars]
    }

    pub(crate) fn index_of(&self, exps: &[u32]) -> Option<usize> {
        self.lookup.get(exps).copied()
    }
}

fn push_monomials(current: &mut [u32], var: usize, remaining: u32, out: &mut Vec<u32>) {
    if var + 1 == current.len() {
        current[var] = remaining;
        out.extend_from_slice(current);
        return;
    }
    for a in (0..=remaining).rev() {
        current[var] = a;
        push_monomials(current, var + 1, remaining - a, out);
    }
    current[var] = 0;
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Squared Weyl norm of the monomial `x^alpha` of degree `d`, that is
/// `a_0! ... a_n! / d!`.
pub fn weyl_norm_sq_monomial(alpha: &MonomialIndex, d: u32) -> Result<f64> {
    let sum = alpha.degree();
    if sum != d {
        return Err(Error::ExponentSum {
            expected: d,
            actual: sum,
        });
    }
    // 1 / multinomial(d; a_0, ..., a_n), built from binomials to stay exact.
    let mut multinomial = 1u128;
    let mut acc = 0u64;
    for &a in &alpha.0 {
        acc += a as u64;
        multinomial *= binomial(acc, a as u64) as u128;
    }
    Ok(1.0 / multinomial as f64)
}

#[derive(Debug)]
struct ProfileInner {
    n: usize,
    degrees: Vec<u32>,
    dim: usize,
    max_degree: u32,
    offsets: Vec<usize>,
    tables: Vec<MonomialTable>,
    weights: Vec<f64>,
    sqrt_weights: Vec<f64>,
}

/// Number of equations and their degrees, together with the derived
/// coefficient count `N` and maximal degree `D`.
///
/// Cloning is cheap; the monomial tables are shared.
#[derive(Clone)]
pub struct DegreeProfile(Arc<ProfileInner>);

impl DegreeProfile {
    pub fn new(degrees: &[u32]) -> Result<Self> {
        let n = degrees.len();
        if n == 0 {
            return Err(Error::InvalidProfile("at least one equation required".into()));
        }
        if degrees.contains(&0) {
            return Err(Error::InvalidProfile("degrees must be positive".into()));
        }
        let max_degree = *degrees.iter().max().unwrap();
        let tables: Vec<_> = (0..=max_degree)
            .map(|d| MonomialTable::new(n + 1, d))
            .collect();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut weights = Vec::new();
        offsets.push(0);
        for &d in degrees {
            let table = &tables[d as usize];
            for k in 0..table.len() {
                let alpha = MonomialIndex(table.get(k).to_vec());
                weights.push(weyl_norm_sq_monomial(&alpha, d)?);
            }
            offsets.push(weights.len());
        }
        let dim = weights.len();
        debug_assert_eq!(
            dim as u64,
            degrees
                .iter()
                .map(|&d| binomial(n as u64 + d as u64, n as u64))
                .sum::<u64>()
        );
        let sqrt_weights = weights.iter().map(|w| w.sqrt()).collect();
        Ok(Self(Arc::new(ProfileInner {
            n,
            degrees: degrees.to_vec(),
            dim,
            max_degree,
            offsets,
            tables,
            weights,
            sqrt_weights,
        })))
    }

    /// Number of equations; there are `n + 1` variables.
    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn degrees(&self) -> &[u32] {
        &self.0.degrees
    }

    /// Complex dimension `N` of the coefficient space.
    pub fn dim(&self) -> usize {
        self.0.dim
    }

    /// Maximal degree `D`.
    pub fn max_degree(&self) -> u32 {
        self.0.max_degree
    }

    /// `D^{3/2}`, which appears in every step-size and certification bound.
    pub fn d32(&self) -> f64 {
        (self.0.max_degree as f64).powf(1.5)
    }

    pub fn nvars(&self) -> usize {
        self.0.n + 1
    }

    pub(crate) fn range(&self, i: usize) -> std::ops::Range<usize> {
        self.0.offsets[i]..self.0.offsets[i + 1]
    }

    pub(crate) fn table(&self, degree: u32) -> &MonomialTable {
        &self.0.tables[degree as usize]
    }

    /// Exponent tuple of the coefficient at flat position `k`.
    pub fn exponents(&self, k: usize) -> &[u32] {
        let i = self.equation_of(k);
        let d = self.0.degrees[i];
        self.table(d).get(k - self.0.offsets[i])
    }

    /// Position of monomial `alpha` within equation `i`, if it has the right degree.
    pub fn monomial_position(&self, i: usize, alpha: &[u32]) -> Option<usize> {
        let d = self.0.degrees[i];
        if alpha.len() != self.nvars() {
            return None;
        }
        self.table(d)
            .index_of(alpha)
            .map(|k| self.0.offsets[i] + k)
    }

    fn equation_of(&self, k: usize) -> usize {
        self.0.offsets.partition_point(|&o| o <= k) - 1
    }

    pub(crate) fn weights(&self) -> &[f64] {
        &self.0.weights
    }

    pub(crate) fn sqrt_weights(&self) -> &[f64] {
        &self.0.sqrt_weights
    }
}

impl PartialEq for DegreeProfile {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.degrees == other.0.degrees
    }
}

impl fmt::Debug for DegreeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DegreeProfile")
            .field("n", &self.n())
            .field("degrees", &self.degrees())
            .field("N", &self.dim())
            .field("D", &self.max_degree())
            .finish()
    }
}

/// A point of the real space `R^{2N}` obtained from a system through the
/// orthonormal Weyl basis: real part then imaginary part per monomial.
#[derive(Debug, Clone, PartialEq)]
pub struct RealCoords(pub Vec<f64>);

impl RealCoords {
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// An element of the space of systems with a given degree profile.
#[derive(Clone, PartialEq)]
pub struct PolySystem {
    profile: DegreeProfile,
    coeffs: Vec<Complex64>,
}

impl fmt::Debug for PolySystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PolySystem")
            .field("degrees", &self.profile.degrees())
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl PolySystem {
    pub fn new(profile: DegreeProfile, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != profile.dim() {
            return Err(Error::LengthMismatch {
                expected: profile.dim(),
                actual: coeffs.len(),
            });
        }
        Ok(Self { profile, coeffs })
    }

    pub fn zeros(profile: DegreeProfile) -> Self {
        let coeffs = vec![Complex64::new(0.0, 0.0); profile.dim()];
        Self { profile, coeffs }
    }

    /// Builds a system from `(equation, exponents, coefficient)` terms.
    /// Later terms on the same monomial are added.
    pub fn from_terms(profile: DegreeProfile, terms: &[(usize, &[u32], Complex64)]) -> Result<Self> {
        let mut f = Self::zeros(profile);
        for &(i, exps, c) in terms {
            let k = f.profile.monomial_position(i, exps).ok_or_else(|| {
                Error::ExponentSum {
                    expected: f.profile.degrees()[i],
                    actual: exps.iter().sum(),
                }
            })?;
            f.coeffs[k] += c;
        }
        Ok(f)
    }

    pub fn profile(&self) -> &DegreeProfile {
        &self.profile
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn equation(&self, i: usize) -> &[Complex64] {
        &self.coeffs[self.profile.range(i)]
    }

    /// Coefficient of `x^alpha` in equation `i` (zero if `alpha` has the wrong degree).
    pub fn coeff(&self, i: usize, alpha: &[u32]) -> Complex64 {
        self.profile
            .monomial_position(i, alpha)
            .map_or(Complex64::new(0.0, 0.0), |k| self.coeffs[k])
    }

    fn check_profile(&self, other: &Self) -> Result<()> {
        if self.profile == other.profile {
            Ok(())
        } else {
            Err(Error::ProfileMismatch)
        }
    }

    /// Hermitian Weyl inner product, linear in `self`.
    pub fn weyl_inner(&self, other: &Self) -> Result<Complex64> {
        self.check_profile(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .zip(self.profile.weights())
            .map(|((a, b), w)| a * b.conj() * *w)
            .sum())
    }

    pub fn weyl_norm(&self) -> f64 {
        self.coeffs
            .iter()
            .zip(self.profile.weights())
            .map(|(c, w)| c.norm_sqr() * w)
            .sum::<f64>()
            .sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.weyl_norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroSystem);
        }
        Ok(self.scale(Complex64::new(1.0 / norm, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            profile: self.profile.clone(),
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        self.check_profile(other)?;
        Ok(Self {
            profile: self.profile.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(x, y)| x * a + y * b)
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(1.0, other, 1.0)
    }

    fn power_table(&self, z: &[Complex64]) -> Vec<Complex64> {
        let stride = self.profile.max_degree() as usize + 1;
        let mut powers = vec![Complex64::new(1.0, 0.0); z.len() * stride];
        for (j, zj) in z.iter().enumerate() {
            for k in 1..stride {
                powers[j * stride + k] = powers[j * stride + k - 1] * zj;
            }
        }
        powers
    }

    /// Values `f_i(z)` for `i = 0..n`.
    pub fn evaluate(&self, z: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(z.len(), self.profile.nvars(), "point has wrong dimension");
        let stride = self.profile.max_degree() as usize + 1;
        let powers = self.power_table(z);
        (0..self.profile.n())
            .map(|i| {
                let range = self.profile.range(i);
                let start = range.start;
                range
                    .map(|k| {
                        let exps = self.profile.exponents_in(i, k - start);
                        exps.iter()
                            .enumerate()
                            .fold(self.coeffs[k], |acc, (j, &a)| acc * powers[j * stride + a as usize])
                    })
                    .sum()
            })
            .collect()
    }

    /// Matrix of partial derivatives `d f_i / d x_j`, of size `n x (n + 1)`.
    pub fn jacobian(&self, z: &[Complex64]) -> DMatrix<Complex64> {
        self.evaluate_with_jacobian(z).1
    }

    /// Values and Jacobian in one pass over the coefficients.
    pub fn evaluate_with_jacobian(&self, z: &[Complex64]) -> (Vec<Complex64>, DMatrix<Complex64>) {
        let nv = self.profile.nvars();
        assert_eq!(z.len(), nv, "point has wrong dimension");
        let n = self.profile.n();
        let stride = self.profile.max_degree() as usize + 1;
        let powers = self.power_table(z);
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let mut values = vec![zero; n];
        let mut jac = DMatrix::from_element(n, nv, zero);
        let mut factors = vec![zero; nv];
        let mut prefix = vec![zero; nv + 1];
        let mut suffix = vec![zero; nv + 1];
        for i in 0..n {
            let range = self.profile.range(i);
            let start = range.start;
            for k in range {
                let c = self.coeffs[k];
                if c == zero {
                    continue;
                }
                let exps = self.profile.exponents_in(i, k - start);
                for j in 0..nv {
                    factors[j] = powers[j * stride + exps[j] as usize];
                }
                prefix[0] = one;
                for j in 0..nv {
                    prefix[j + 1] = prefix[j] * factors[j];
                }
                suffix[nv] = one;
                for j in (0..nv).rev() {
                    suffix[j] = suffix[j + 1] * factors[j];
                }
                values[i] += c * prefix[nv];
                for j in 0..nv {
                    let a = exps[j];
                    if a == 0 {
                        continue;
                    }
                    let dj = powers[j * stride + a as usize - 1] * a as f64;
                    jac[(i, j)] += c * prefix[j] * dj * suffix[j + 1];
                }
            }
        }
        (values, jac)
    }

    /// The system `x -> f(U x)`, expanded exactly in the monomial basis.
    pub fn compose_linear(&self, u: &DMatrix<Complex64>) -> Self {
        let nv = self.profile.nvars();
        assert_eq!(u.shape(), (nv, nv), "substitution matrix has wrong shape");
        let dmax = self.profile.max_degree();
        // powers[j][m] = (sum_k u[j,k] x_k)^m as a dense degree-m form
        let linear: Vec<Vec<Complex64>> = (0..nv)
            .map(|j| {
                let mut form = vec![Complex64::new(0.0, 0.0); nv];
                for k in 0..nv {
                    // degree-1 monomials in canonical order are e_0, e_1, ..., e_n
                    form[k] = u[(j, k)];
                }
                form
            })
            .collect();
        let powers: Vec<Vec<Vec<Complex64>>> = linear
            .iter()
            .map(|form| {
                let mut pw = vec![vec![Complex64::new(1.0, 0.0)]];
                for m in 1..=dmax {
                    let next = forms::mul(&self.profile, &pw[m as usize - 1], m - 1, form, 1);
                    pw.push(next);
                }
                pw
            })
            .collect();
        let mut out = Self::zeros(self.profile.clone());
        for i in 0..self.profile.n() {
            let d = self.profile.degrees()[i];
            let range = self.profile.range(i);
            let start = range.start;
            let mut acc = vec![Complex64::new(0.0, 0.0); self.profile.table(d).len()];
            for k in range.clone() {
                let c = self.coeffs[k];
                if c == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let exps = self.profile.exponents_in(i, k - start);
                let mut term = vec![c];
                let mut deg = 0;
                for (j, &a) in exps.iter().enumerate() {
                    if a == 0 {
                        continue;
                    }
                    term = forms::mul(&self.profile, &term, deg, &powers[j][a as usize], a);
                    deg += a;
                }
                for (dst, src) in acc.iter_mut().zip(&term) {
                    *dst += src;
                }
            }
            out.coeffs[range].copy_from_slice(&acc);
        }
        out
    }

    /// Coordinates in the orthonormal Weyl basis, identified with `R^{2N}`.
    pub fn to_real_coords(&self) -> RealCoords {
        let mut v = Vec::with_capacity(2 * self.coeffs.len());
        for (c, s) in self.coeffs.iter().zip(self.profile.sqrt_weights()) {
            v.push(c.re * s);
            v.push(c.im * s);
        }
        RealCoords(v)
    }

    pub fn from_real_coords(v: &RealCoords, profile: &DegreeProfile) -> Result<Self> {
        if v.len() != 2 * profile.dim() {
            return Err(Error::LengthMismatch {
                expected: 2 * profile.dim(),
                actual: v.len(),
            });
        }
        let coeffs = v
            .0
            .chunks_exact(2)
            .zip(profile.sqrt_weights())
            .map(|(pair, s)| Complex64::new(pair[0] / s, pair[1] / s))
            .collect();
        Ok(Self {
            profile: profile.clone(),
            coeffs,
        })
    }

    pub fn to_file(&self) -> SystemFile {
        let equations = (0..self.profile.n())
            .map(|i| {
                let range = self.profile.range(i);
                let start = range.start;
                range
                    .filter(|&k| self.coeffs[k] != Complex64::new(0.0, 0.0))
                    .map(|k| Term {
                        exponents: self.profile.exponents_in(i, k - start).to_vec(),
                        re: self.coeffs[k].re,
                        im: self.coeffs[k].im,
                    })
                    .collect()
            })
            .collect();
        SystemFile {
            n: self.profile.n(),
            degrees: self.profile.degrees().to_vec(),
            equations,
        }
    }

    pub fn from_file(file: &SystemFile) -> Result<Self> {
        if file.degrees.len() != file.n {
            return Err(Error::Parse(format!(
                "{} degrees given for n = {}",
                file.degrees.len(),
                file.n
            )));
        }
        if file.equations.len() != file.n {
            return Err(Error::Parse(format!(
                "{} equations given for n = {}",
                file.equations.len(),
                file.n
            )));
        }
        let profile = DegreeProfile::new(&file.degrees).map_err(|e| Error::Parse(e.to_string()))?;
        let mut f = Self::zeros(profile);
        for (i, eq) in file.equations.iter().enumerate() {
            let mut seen = std::collections::HashSet::new();
            for term in eq {
                if term.exponents.len() != file.n + 1 {
                    return Err(Error::Parse(format!(
                        "equation {i}: exponent tuple of length {} in {} variables",
                        term.exponents.len(),
                        file.n + 1
                    )));
                }
                if !seen.insert(term.exponents.clone()) {
                    return Err(Error::Parse(format!(
                        "equation {i}: duplicate monomial {:?}",
                        term.exponents
                    )));
                }
                if !term.re.is_finite() || !term.im.is_finite() {
                    return Err(Error::Parse(format!("equation {i}: non-finite coefficient")));
                }
                let k = f.profile.monomial_position(i, &term.exponents).ok_or_else(|| {
                    Error::Parse(format!(
                        "equation {i}: monomial {:?} does not have degree {}",
                        term.exponents,
                        file.degrees[i]
                    ))
                })?;
                f.coeffs[k] = Complex64::new(term.re, term.im);
            }
        }
        Ok(f)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SystemFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("system file serializes")
    }
}

impl DegreeProfile {
    fn exponents_in(&self, i: usize, local: usize) -> &[u32] {
        self.table(self.0.degrees[i]).get(local)
    }
}

/// One monomial term in the on-disk system format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub exponents: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

/// On-disk JSON layout of a system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub n: usize,
    pub degrees: Vec<u32>,
    pub equations: Vec<Vec<Term>>,
}

/// Dense homogeneous forms of arbitrary degree (up to `D`) in the profile's variables.
pub(crate) mod forms {
    use num_complex::Complex64;

    use super::DegreeProfile;

    /// Product of a degree-`p` form and a degree-`q` form.
    pub(crate) fn mul(
        profile: &DegreeProfile,
        a: &[Complex64],
        p: u32,
        b: &[Complex64],
        q: u32,
    ) -> Vec<Complex64> {
        let ta = profile.table(p);
        let tb = profile.table(q);
        let tc = profile.table(p + q);
        let mut out = vec![Complex64::new(0.0, 0.0); tc.len()];
        let mut key = vec![0u32; profile.nvars()];
        for (i, x) in a.iter().enumerate() {
            if *x == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ea = ta.get(i);
            for (j, y) in b.iter().enumerate() {
                if *y == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let eb = tb.get(j);
                for v in 0..key.len() {
                    key[v] = ea[v] + eb[v];
                }
                out[tc.index_of(&key).expect("product monomial exists")] += x * y;
            }
        }
        out
    }

    /// `form^m` for a linear form given by its coefficients on `x_0..x_n`.
    pub(crate) fn linear_power(profile: &DegreeProfile, form: &[Complex64], m: u32) -> Vec<Complex64> {
        let mut acc = vec![Complex64::new(1.0, 0.0)];
        for k in 0..m {
            acc = mul(profile, &acc, k, form, 1);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn monomial_weights() {
        let w = |a: &[u32], d| weyl_norm_sq_monomial(&MonomialIndex(a.to_vec()), d).unwrap();
        assert_eq!(w(&[2, 0], 2), 1.0);
        assert_eq!(w(&[1, 1], 2), 0.5);
        assert_eq!(w(&[1, 1, 1], 3), 1.0 / 6.0);
        assert!(matches!(
            weyl_norm_sq_monomial(&MonomialIndex(vec![1, 0]), 2),
            Err(Error::ExponentSum { .. })
        ));
    }

    #[test]
    fn profile_counts() {
        let p = DegreeProfile::new(&[2, 3]).unwrap();
        assert_eq!(p.dim(), 6 + 10);
        assert_eq!(p.max_degree(), 3);
        assert_eq!(p.exponents(0), &[2, 0, 0]);
        assert_eq!(p.exponents(5), &[0, 0, 2]);
        assert_eq!(p.exponents(6), &[3, 0, 0]);
        assert!(DegreeProfile::new(&[]).is_err());
        assert!(DegreeProfile::new(&[2, 0]).is_err());
    }

    #[test]
    fn canonical_order_is_lex_descending() {
        let p = DegreeProfile::new(&[2, 2]).unwrap();
        let exps: Vec<_> = (0..6).map(|k| p.exponents(k).to_vec()).collect();
        assert_eq!(
            exps,
            vec![
                vec![2, 0, 0],
                vec![1, 1, 0],
                vec![1, 0, 1],
                vec![0, 2, 0],
                vec![0, 1, 1],
                vec![0, 0, 2]
            ]
        );
        for k in 0..p.dim() {
            let i = if k < 6 { 0 } else { 1 };
            assert_eq!(p.monomial_position(i, p.exponents(k)), Some(k));
        }
    }

    #[test]
    fn inner_products() {
        let p = DegreeProfile::new(&[2]).unwrap();
        let x0sq = PolySystem::from_terms(p.clone(), &[(0, &[2, 0], c(1.0, 0.0))]).unwrap();
        let x0x1 = PolySystem::from_terms(p.clone(), &[(0, &[1, 1], c(1.0, 0.0))]).unwrap();
        assert_eq!(x0sq.weyl_inner(&x0sq).unwrap(), c(1.0, 0.0));
        assert_eq!(x0sq.weyl_inner(&x0x1).unwrap(), c(0.0, 0.0));
        assert_eq!(x0x1.weyl_inner(&x0x1).unwrap(), c(0.5, 0.0));
        let other = PolySystem::zeros(DegreeProfile::new(&[3]).unwrap());
        assert_eq!(x0sq.weyl_inner(&other), Err(Error::ProfileMismatch));
    }

    #[test]
    fn evaluation_examples() {
        let p = DegreeProfile::new(&[2]).unwrap();
        let f = PolySystem::from_terms(
            p.clone(),
            &[(0, &[2, 0], c(1.0, 0.0)), (0, &[0, 2], c(-1.0, 0.0))],
        )
        .unwrap();
        let z = [c(1.0, 0.0), c(2.0, 0.0)];
        assert_eq!(f.evaluate(&z), vec![c(-3.0, 0.0)]);
        let jac = f.jacobian(&z);
        assert_eq!(jac[(0, 0)], c(2.0, 0.0));
        assert_eq!(jac[(0, 1)], c(-4.0, 0.0));

        let s2 = 2f64.sqrt();
        let g = PolySystem::from_terms(p, &[(0, &[1, 1], c(s2, 0.0))]).unwrap();
        let z = [c(0.0, 0.0), c(1.0, 0.0)];
        assert_eq!(g.evaluate(&z), vec![c(0.0, 0.0)]);
        let jac = g.jacobian(&z);
        assert_eq!(jac[(0, 0)], c(s2, 0.0));
        assert_eq!(jac[(0, 1)], c(0.0, 0.0));
        assert_eq!(g.evaluate(&[c(0.0, 0.0); 2]), vec![c(0.0, 0.0)]);
    }

    #[test]
    fn compose_swap_and_identity() {
        let p = DegreeProfile::new(&[2]).unwrap();
        let f = PolySystem::from_terms(p.clone(), &[(0, &[2, 0], c(1.0, 0.0))]).unwrap();
        let swap = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let g = f.compose_linear(&swap);
        assert_eq!(g.coeff(0, &[0, 2]), c(1.0, 0.0));
        assert_eq!(g.coeff(0, &[2, 0]), c(0.0, 0.0));
        let id = DMatrix::identity(2, 2);
        assert_eq!(f.compose_linear(&id), f);
    }

    #[test]
    fn real_coords_of_pure_power() {
        let p = DegreeProfile::new(&[2]).unwrap();
        let f = PolySystem::from_terms(p.clone(), &[(0, &[2, 0], c(1.0, 0.0))]).unwrap();
        assert_eq!(f.to_real_coords().0, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let bad = RealCoords(vec![0.0; 5]);
        assert!(matches!(
            PolySystem::from_real_coords(&bad, &p),
            Err(Error::LengthMismatch { expected: 6, actual: 5 })
        ));
    }

    #[test]
    fn json_rejects_bad_files() {
        let dup = r#"{"n":1,"degrees":[2],"equations":[[{"exponents":[2,0],"re":1,"im":0},{"exponents":[2,0],"re":1,"im":0}]]}"#;
        assert!(matches!(PolySystem::from_json(dup), Err(Error::Parse(_))));
        let wrong_len = r#"{"n":1,"degrees":[2],"equations":[[{"exponents":[2,0,0],"re":1,"im":0}]]}"#;
        assert!(matches!(PolySystem::from_json(wrong_len), Err(Error::Parse(_))));
        let wrong_deg = r#"{"n":1,"degrees":[2],"equations":[[{"exponents":[1,0],"re":1,"im":0}]]}"#;
        assert!(matches!(PolySystem::from_json(wrong_deg), Err(Error::Parse(_))));
        assert!(matches!(PolySystem::from_json("{"), Err(Error::Parse(_))));
        let ok = r#"{"n":1,"degrees":[2],"equations":[[{"exponents":[1,1],"re":1.5,"im":-2}]]}"#;
        let f = PolySystem::from_json(ok).unwrap();
        assert_eq!(f.coeff(0, &[1, 1]), c(1.5, -2.0));
        assert_eq!(f.coeff(0, &[2, 0]), c(0.0, 0.0));
        assert_eq!(PolySystem::from_json(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn linear_power_matches_binomial_expansion() {
        let p = DegreeProfile::new(&[3]).unwrap();
        let form = [c(1.0, 0.0), c(1.0, 0.0)];
        let cube = forms::linear_power(&p, &form, 3);
        assert_eq!(cube, vec![c(1.0, 0.0), c(3.0, 0.0), c(3.0, 0.0), c(1.0, 0.0)]);
    }
}
