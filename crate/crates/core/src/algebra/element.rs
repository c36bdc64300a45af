use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::theta::ThetaMatrix;
use crate::error::{Error, Result};

/// Exponent vector k ∈ ℤᵏ of a normal-ordered monomial U^k = U₁^{k₁}⋯U_k^{k_k}.
pub type MultiIndex = Vec<i32>;

/// e^{2πi x}, reducing x mod 1 first so the modulus stays 1 to rounding.
#[inline]
pub fn unit_phase(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * x.rem_euclid(1.0))
}

/// U^k · U^l = phase · U^{k+l} in normal order.
pub fn monomial_product(
    k: &[i32],
    l: &[i32],
    theta: &ThetaMatrix,
) -> Result<(Complex64, MultiIndex)> {
    for idx in [k, l] {
        if idx.len() != theta.dim() {
            return Err(Error::DimensionMismatch {
                expected: theta.dim(),
                got: idx.len(),
            });
        }
    }
    let phase = unit_phase(theta.product_exponent(k, l));
    Ok((phase, k.iter().zip(l).map(|(a, b)| a + b).collect()))
}

/// Phase c with (U^k)* = c · U^{-k}.
#[inline]
pub(crate) fn star_phase(k: &[i32], theta: &ThetaMatrix) -> Complex64 {
    unit_phase(theta.product_exponent(k, k))
}

/// |k|_∞
pub fn sup_norm(k: &[i32]) -> u32 {
    k.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
}

/// A finite Laurent polynomial in the generators of A(𝕋ᵏ_θ).
///
/// Terms are kept in normal order with no stored zero coefficients.
#[derive(Clone)]
pub struct AlgebraElement {
    theta: Arc<ThetaMatrix>,
    terms: BTreeMap<MultiIndex, Complex64>,
}

/// One term of the JSON encoding `[{index, re, im}, ...]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElementTerm {
    pub index: MultiIndex,
    pub re: f64,
    pub im: f64,
}

impl AlgebraElement {
    pub fn zero(theta: &Arc<ThetaMatrix>) -> Self {
        AlgebraElement {
            theta: Arc::clone(theta),
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(theta: &Arc<ThetaMatrix>, c: Complex64) -> Self {
        let mut e = Self::zero(theta);
        e.insert(vec![0; theta.dim()], c);
        e
    }

    pub fn one(theta: &Arc<ThetaMatrix>) -> Self {
        Self::scalar(theta, Complex64::new(1.0, 0.0))
    }

    pub fn monomial(theta: &Arc<ThetaMatrix>, index: MultiIndex, coeff: Complex64) -> Result<Self> {
        if index.len() != theta.dim() {
            return Err(Error::DimensionMismatch {
                expected: theta.dim(),
                got: index.len(),
            });
        }
        let mut e = Self::zero(theta);
        e.insert(index, coeff);
        Ok(e)
    }

    /// The unitary generator U_j (0-based).
    pub fn generator(theta: &Arc<ThetaMatrix>, j: usize) -> Result<Self> {
        if j >= theta.dim() {
            return Err(Error::IndexOutOfRange {
                index: j,
                bound: theta.dim(),
            });
        }
        let mut idx = vec![0; theta.dim()];
        idx[j] = 1;
        Self::monomial(theta, idx, Complex64::new(1.0, 0.0))
    }

    pub fn from_terms(
        theta: &Arc<ThetaMatrix>,
        terms: impl IntoIterator<Item = (MultiIndex, Complex64)>,
    ) -> Result<Self> {
        let mut e = Self::zero(theta);
        for (k, c) in terms {
            if k.len() != theta.dim() {
                return Err(Error::DimensionMismatch {
                    expected: theta.dim(),
                    got: k.len(),
                });
            }
            e.insert(k, c);
        }
        Ok(e)
    }

    pub fn from_json_terms(theta: &Arc<ThetaMatrix>, terms: &[ElementTerm]) -> Result<Self> {
        Self::from_terms(
            theta,
            terms
                .iter()
                .map(|t| (t.index.clone(), Complex64::new(t.re, t.im))),
        )
    }

    pub fn to_json_terms(&self) -> Vec<ElementTerm> {
        self.terms
            .iter()
            .map(|(k, c)| ElementTerm {
                index: k.clone(),
                re: c.re,
                im: c.im,
            })
            .collect()
    }

    fn insert(&mut self, k: MultiIndex, c: Complex64) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(k) {
            Entry::Vacant(v) => {
                if c != Complex64::new(0.0, 0.0) {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == Complex64::new(0.0, 0.0) {
                    o.remove();
                }
            }
        }
    }

    pub fn theta(&self) -> &Arc<ThetaMatrix> {
        &self.theta
    }

    pub fn dim(&self) -> usize {
        self.theta.dim()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: &[i32]) -> Complex64 {
        self.terms.get(k).copied().unwrap_or_default()
    }

    /// max |k|_∞ over the stored terms; 0 for the zero element.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|k| sup_norm(k)).max().unwrap_or(0)
    }

    pub fn same_theta(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.theta, &other.theta) || *self.theta == *other.theta
    }

    fn check_theta(&self, other: &Self) -> Result<()> {
        if self.same_theta(other) {
            Ok(())
        } else {
            Err(Error::ThetaMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_theta(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert(k.clone(), *c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero(&self.theta);
        if c != Complex64::new(0.0, 0.0) {
            for (k, v) in &self.terms {
                out.insert(k.clone(), v * c);
            }
        }
        out
    }

    /// Bilinear extension of the monomial product.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_theta(other)?;
        let mut out = Self::zero(&self.theta);
        for (k, a) in &self.terms {
            for (l, b) in &other.terms {
                let (phase, idx) = monomial_product(k, l, &self.theta)?;
                out.insert(idx, a * b * phase);
            }
        }
        Ok(out)
    }

    /// The ∗-involution: (c U^k)* = c̄ (U^k)*.
    pub fn star(&self) -> Self {
        let mut out = Self::zero(&self.theta);
        for (k, c) in &self.terms {
            let neg: MultiIndex = k.iter().map(|x| -x).collect();
            out.insert(neg, c.conj() * star_phase(k, &self.theta));
        }
        out
    }

    /// δ_j: multiplies the coefficient of U^k by k_j (0-based j).
    pub fn derivation(&self, j: usize) -> Result<Self> {
        if j >= self.dim() {
            return Err(Error::IndexOutOfRange {
                index: j,
                bound: self.dim(),
            });
        }
        let mut out = Self::zero(&self.theta);
        for (k, c) in &self.terms {
            if k[j] != 0 {
                out.insert(k.clone(), c * k[j] as f64);
            }
        }
        Ok(out)
    }

    /// The canonical trace τ: coefficient of the unit.
    pub fn trace(&self) -> Complex64 {
        self.terms
            .iter()
            .find(|(k, _)| k.iter().all(|x| *x == 0))
            .map(|(_, c)| *c)
            .unwrap_or_default()
    }

    /// Splits the element by the ℤⁿ-degree read off the first `n` indices.
    pub fn graded_decompose(&self, n: usize) -> Result<Vec<GradedComponent>> {
        if n == 0 || n > self.dim() {
            return Err(Error::InvalidArgument(format!(
                "fibre rank {n} must lie in 1..={}",
                self.dim()
            )));
        }
        let mut parts: BTreeMap<Vec<i32>, AlgebraElement> = BTreeMap::new();
        for (k, c) in &self.terms {
            parts
                .entry(k[..n].to_vec())
                .or_insert_with(|| Self::zero(&self.theta))
                .insert(k.clone(), *c);
        }
        Ok(parts
            .into_iter()
            .map(|(degree, element)| GradedComponent { degree, element })
            .collect())
    }

    /// True if every term has vanishing first `n` indices (the element lies in B).
    pub fn is_invariant(&self, n: usize) -> bool {
        self.terms.keys().all(|k| k[..n].iter().all(|x| *x == 0))
    }

    /// Largest coefficient modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut m: f64 = 0.0;
        for (k, c) in &self.terms {
            m = m.max((c - other.coeff(k)).norm());
        }
        for (k, c) in &other.terms {
            if !self.terms.contains_key(k) {
                m = m.max(c.norm());
            }
        }
        m
    }

    /// Σ|c_k|², which equals τ(a*a).
    pub fn coeff_norm_sqr(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum()
    }

    /// Drops coefficients of modulus ≤ `tol`.
    pub fn pruned(&self, tol: f64) -> Self {
        AlgebraElement {
            theta: Arc::clone(&self.theta),
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.norm() > tol)
                .map(|(k, c)| (k.clone(), *c))
                .collect(),
        }
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.4}{:+.4}i)U^{:?}", c.re, c.im, k)?;
        }
        Ok(())
    }
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_theta(other) && self.terms == other.terms
    }
}

/// A homogeneous piece a ∈ A^{(q)}: every term's first n indices equal `degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedComponent {
    pub degree: Vec<i32>,
    pub element: AlgebraElement,
}

impl GradedComponent {
    /// Wraps `element` after checking it is homogeneous of the given degree.
    pub fn new(degree: Vec<i32>, element: AlgebraElement) -> Result<Self> {
        let n = degree.len();
        if n > element.dim() {
            return Err(Error::DimensionMismatch {
                expected: element.dim(),
                got: n,
            });
        }
        if element.terms().any(|(k, _)| k[..n] != degree[..]) {
            return Err(Error::InvalidArgument(format!(
                "element is not homogeneous of degree {degree:?}"
            )));
        }
        Ok(GradedComponent { degree, element })
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;

    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_add(rhs).expect("theta mismatch in addition")
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;

    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_add(&-rhs).expect("theta mismatch in subtraction")
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;

    fn neg(self) -> AlgebraElement {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;

    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.multiply(rhs)
            .expect("theta mismatch in multiplication")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn theta3(t01: f64, t02: f64, t12: f64) -> Arc<ThetaMatrix> {
        Arc::new(ThetaMatrix::from_upper(3, &[t01, t02, t12]).unwrap())
    }

    #[test]
    fn generator_exchange_reproduces_defining_relation() {
        let th = theta3(0.17, -0.4, 0.05);
        let (p12, i12) = monomial_product(&[1, 0, 0], &[0, 1, 0], &th).unwrap();
        let (p21, i21) = monomial_product(&[0, 1, 0], &[1, 0, 0], &th).unwrap();
        assert_eq!(p12, c(1.0, 0.0));
        assert_eq!(i12, i21);
        // U₂U₁ = e^{2πiθ₂₁} U₁U₂
        assert!((p21 - unit_phase(th.get(1, 0))).norm() < 1e-15);
        // U₁U₂ = e^{2πiθ₁₂} U₂U₁
        assert!((p12 / p21 - unit_phase(th.get(0, 1))).norm() < 1e-15);
    }

    #[test]
    fn product_with_identity_and_commutative_limit() {
        let th = theta3(0.3, 0.1, 0.7);
        let (p, idx) = monomial_product(&[2, -1, 3], &[0, 0, 0], &th).unwrap();
        assert_eq!((p, idx), (c(1.0, 0.0), vec![2, -1, 3]));
        let zero = ThetaMatrix::zero(3);
        let (p, idx) = monomial_product(&[2, -1, 3], &[-5, 4, 1], &zero).unwrap();
        assert_eq!((p, idx), (c(1.0, 0.0), vec![-3, 3, 4]));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let th = theta3(0.0, 0.0, 0.0);
        assert!(monomial_product(&[1, 0], &[0, 0, 1], &th).is_err());
        assert!(AlgebraElement::generator(&th, 3).is_err());
        let one = AlgebraElement::one(&th);
        assert!(one.derivation(3).is_err());
        let other = Arc::new(ThetaMatrix::from_upper(3, &[0.1, 0.0, 0.0]).unwrap());
        assert!(matches!(
            one.multiply(&AlgebraElement::one(&other)),
            Err(Error::ThetaMismatch)
        ));
    }

    #[test]
    fn unitarity_of_generator() {
        let th = theta3(0.31, 0.12, -0.2);
        let u = AlgebraElement::generator(&th, 0).unwrap();
        assert_eq!(&u * &u.star(), AlgebraElement::one(&th));
        assert_eq!(&u.star() * &u, AlgebraElement::one(&th));
        assert_eq!(u.star().terms().next().unwrap().0, &vec![-1, 0, 0]);
    }

    #[test]
    fn sum_times_third_generator_by_hand() {
        // θ₁₃ = θ₂₃ = ¼: U₁U₃ = i U₃U₁, and U₁U₃ is already normal ordered.
        let th = theta3(0.0, 0.25, 0.25);
        let u1 = AlgebraElement::generator(&th, 0).unwrap();
        let u2 = AlgebraElement::generator(&th, 1).unwrap();
        let u3 = AlgebraElement::generator(&th, 2).unwrap();
        let lhs = &(&u1 + &u2) * &u3;
        // U₃U₁ in normal order: monomial_product(e₃, e₁) = e^{2πiθ₃₁} U₁U₃ = −i U₁U₃
        let u3u1 = &u3 * &u1;
        let u3u2 = &u3 * &u2;
        assert!((u3u1.coeff(&[1, 0, 1]) - c(0.0, -1.0)).norm() < 1e-15);
        let rhs = (&u3u1 + &u3u2).scale(c(0.0, 1.0));
        assert!(lhs.max_abs_diff(&rhs) < 1e-15);
        assert_eq!(lhs.coeff(&[1, 0, 1]), c(1.0, 0.0));
    }

    #[test]
    fn star_on_scalars_is_conjugation() {
        let th = theta3(0.2, 0.2, 0.2);
        let a = AlgebraElement::scalar(&th, c(1.5, -2.0));
        assert_eq!(a.star(), AlgebraElement::scalar(&th, c(1.5, 2.0)));
    }

    #[test]
    fn derivation_examples() {
        let th = theta3(0.2, 0.0, 0.1);
        let u1 = AlgebraElement::generator(&th, 0).unwrap();
        let u2 = AlgebraElement::generator(&th, 1).unwrap();
        let p = &u1 * &u2;
        assert_eq!(p.derivation(0).unwrap(), p);
        assert!(AlgebraElement::one(&th).derivation(1).unwrap().is_zero());
    }

    #[test]
    fn trace_examples() {
        let th = theta3(0.2, 0.3, 0.1);
        assert_eq!(AlgebraElement::one(&th).trace(), c(1.0, 0.0));
        let m = AlgebraElement::monomial(&th, vec![0, 2, -1], c(3.0, 1.0)).unwrap();
        assert_eq!(m.trace(), c(0.0, 0.0));
    }

    #[test]
    fn grading_examples() {
        let th = theta3(0.2, 0.3, 0.1);
        let u1 = AlgebraElement::generator(&th, 0).unwrap();
        let u3 = AlgebraElement::generator(&th, 2).unwrap();
        let parts = u3.graded_decompose(2).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].degree, vec![0, 0]);
        let parts = (&u1 * &u3).graded_decompose(2).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].degree, vec![1, 0]);
        let parts = (&u1 + &u3).graded_decompose(2).unwrap();
        assert_eq!(parts.len(), 2);
        assert!(u1.graded_decompose(0).is_err());
        assert!(GradedComponent::new(vec![1, 0], &u1 + &u3).is_err());
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let th = theta3(0.2, 0.3, 0.1);
        let u1 = AlgebraElement::generator(&th, 0).unwrap();
        let d = &u1 - &u1;
        assert!(d.is_zero());
        assert_eq!(d.degree(), 0);
    }

    #[test]
    fn json_terms_roundtrip() {
        let th = theta3(0.2, 0.3, 0.1);
        let a = AlgebraElement::from_terms(
            &th,
            [(vec![1, 0, -2], c(0.5, -1.0)), (vec![0, 0, 0], c(2.0, 0.0))],
        )
        .unwrap();
        let json = serde_json::to_string(&a.to_json_terms()).unwrap();
        let terms: Vec<ElementTerm> = serde_json::from_str(&json).unwrap();
        assert_eq!(AlgebraElement::from_json_terms(&th, &terms).unwrap(), a);
    }
}
