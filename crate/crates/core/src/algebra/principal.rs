//! Symbolic check that A(𝕋ᵏ_θ) with its ℤⁿ-grading is a principal
//! comodule algebra over the group algebra of ℤⁿ, using the explicit map
//! ℓ(z^q) = (U^{(q,0)})* ⊗ U^{(q,0)}.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use super::element::{monomial_product, star_phase, MultiIndex};
use super::theta::ThetaMatrix;
use crate::error::{Error, Result};
use crate::report::VerificationReport;

/// A tensor factor: an algebra monomial U^k or a group-like z^q.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Factor {
    A(MultiIndex),
    H(Vec<i32>),
}

/// Finite linear combination of pure tensors of monomials.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SymbolicTensor {
    terms: BTreeMap<Vec<Factor>, Complex64>,
}

impl SymbolicTensor {
    pub fn pure(factors: Vec<Factor>, coeff: Complex64) -> Self {
        let mut t = SymbolicTensor::default();
        t.add_term(factors, coeff);
        t
    }

    fn add_term(&mut self, factors: Vec<Factor>, coeff: Complex64) {
        let slot = self.terms.entry(factors).or_default();
        *slot += coeff;
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Factor>, &Complex64)> {
        self.terms.iter()
    }

    /// Replaces the factor at `pos` in every term by the expansion `f(factor)`.
    fn map_at<F>(&self, pos: usize, f: F) -> Result<SymbolicTensor>
    where
        F: Fn(&Factor) -> Result<Vec<(Complex64, Vec<Factor>)>>,
    {
        let mut out = SymbolicTensor::default();
        for (factors, c) in &self.terms {
            if pos >= factors.len() {
                return Err(Error::IndexOutOfRange {
                    index: pos,
                    bound: factors.len(),
                });
            }
            for (phase, replacement) in f(&factors[pos])? {
                let mut nf = Vec::with_capacity(factors.len() + replacement.len());
                nf.extend_from_slice(&factors[..pos]);
                nf.extend(replacement);
                nf.extend_from_slice(&factors[pos + 1..]);
                out.add_term(nf, c * phase);
            }
        }
        Ok(out)
    }

    /// Largest coefficient modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &SymbolicTensor) -> f64 {
        let mut m: f64 = 0.0;
        for (k, c) in &self.terms {
            m = m.max((c - other.terms.get(k).copied().unwrap_or_default()).norm());
        }
        for (k, c) in &other.terms {
            if !self.terms.contains_key(k) {
                m = m.max(c.norm());
            }
        }
        m
    }
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn lift(q: &[i32], k: usize) -> MultiIndex {
    let mut idx = q.to_vec();
    idx.resize(k, 0);
    idx
}

/// ℓ(z^q) = (U^{(q,0)})* ⊗ U^{(q,0)}, with the star written out in normal order.
pub fn ell(theta: &ThetaMatrix, q: &[i32]) -> Result<SymbolicTensor> {
    if q.len() > theta.dim() {
        return Err(Error::DimensionMismatch {
            expected: theta.dim(),
            got: q.len(),
        });
    }
    let u = lift(q, theta.dim());
    let neg: MultiIndex = u.iter().map(|x| -x).collect();
    Ok(SymbolicTensor::pure(
        vec![Factor::A(neg), Factor::A(u.clone())],
        star_phase(&u, theta),
    ))
}

fn expect_a(f: &Factor) -> Result<&MultiIndex> {
    match f {
        Factor::A(k) => Ok(k),
        Factor::H(_) => Err(Error::InvalidArgument("expected an algebra factor".into())),
    }
}

fn expect_h(f: &Factor) -> Result<&Vec<i32>> {
    match f {
        Factor::H(q) => Ok(q),
        Factor::A(_) => Err(Error::InvalidArgument(
            "expected a group-like factor".into(),
        )),
    }
}

/// Right coaction U^k ↦ U^k ⊗ z^{(k₁…kₙ)}.
fn coaction(f: &Factor, n: usize) -> Result<Vec<(Complex64, Vec<Factor>)>> {
    let k = expect_a(f)?;
    Ok(vec![(one(), vec![f.clone(), Factor::H(k[..n].to_vec())])])
}

fn coproduct(f: &Factor) -> Result<Vec<(Complex64, Vec<Factor>)>> {
    expect_h(f)?;
    Ok(vec![(one(), vec![f.clone(), f.clone()])])
}

fn antipode(f: &Factor) -> Result<Vec<(Complex64, Vec<Factor>)>> {
    let q = expect_h(f)?;
    Ok(vec![(
        one(),
        vec![Factor::H(q.iter().map(|x| -x).collect())],
    )])
}

fn apply_ell(f: &Factor, theta: &ThetaMatrix) -> Result<Vec<(Complex64, Vec<Factor>)>> {
    let q = expect_h(f)?;
    Ok(ell(theta, q)?
        .terms
        .into_iter()
        .map(|(fs, c)| (c, fs))
        .collect())
}

/// Multiplies the algebra factors at `pos` and `pos+1`.
fn multiply_at(t: &SymbolicTensor, pos: usize, theta: &ThetaMatrix) -> Result<SymbolicTensor> {
    let mut out = SymbolicTensor::default();
    for (factors, c) in &t.terms {
        let k = expect_a(&factors[pos])?;
        let l = expect_a(&factors[pos + 1])?;
        let (phase, idx) = monomial_product(k, l, theta)?;
        let mut nf = factors[..pos].to_vec();
        nf.push(Factor::A(idx));
        nf.extend_from_slice(&factors[pos + 2..]);
        out.add_term(nf, c * phase);
    }
    Ok(out)
}

/// Flips the factors at `pos` and `pos+1`.
fn switch_at(t: &SymbolicTensor, pos: usize) -> SymbolicTensor {
    let mut out = SymbolicTensor::default();
    for (factors, c) in &t.terms {
        let mut nf = factors.clone();
        nf.swap(pos, pos + 1);
        out.add_term(nf, *c);
    }
    out
}

/// Verifies the four axioms of a principal comodule algebra for ℓ on each
/// degree q ∈ ℤⁿ, over A(𝕋ᵏ_θ) graded by its first n generators.
///
/// Per degree: (i) ℓ(1) = 1⊗1 (only for q = 0), (ii) m∘ℓ = ε,
/// (iii) (ℓ⊗id)∘Δ = (id⊗Δ_R)∘ℓ, (iv) (S⊗ℓ)∘Δ = (σ⊗id)∘(Δ_R⊗id)∘ℓ.
pub fn check_principality(
    theta: &Arc<ThetaMatrix>,
    n: usize,
    degrees: &[Vec<i32>],
    tolerance: f64,
) -> Result<VerificationReport> {
    let k = theta.dim();
    if n == 0 || n > k {
        return Err(Error::InvalidArgument(format!(
            "fibre rank {n} must lie in 1..={k}"
        )));
    }
    let mut report = VerificationReport::new(tolerance);
    for q in degrees {
        if q.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: q.len(),
            });
        }
        let l = ell(theta, q)?;
        let zero = vec![0; k];

        if q.iter().all(|x| *x == 0) {
            let unit = SymbolicTensor::pure(
                vec![Factor::A(zero.clone()), Factor::A(zero.clone())],
                one(),
            );
            report.record(
                format!("principality (i) q={q:?}"),
                "l(1) = 1 (x) 1",
                l.max_abs_diff(&unit),
                0,
            );
        }

        let lhs = multiply_at(&l, 0, theta)?;
        let rhs = SymbolicTensor::pure(vec![Factor::A(zero.clone())], one());
        report.record(
            format!("principality (ii) q={q:?}"),
            "m o l = eps",
            lhs.max_abs_diff(&rhs),
            0,
        );

        let delta = SymbolicTensor::pure(vec![Factor::H(q.clone())], one()).map_at(0, coproduct)?;
        let lhs = delta.map_at(0, |f| apply_ell(f, theta))?;
        let rhs = l.map_at(1, |f| coaction(f, n))?;
        report.record(
            format!("principality (iii) q={q:?}"),
            "(l (x) id) o Delta = (id (x) Delta_R) o l",
            lhs.max_abs_diff(&rhs),
            0,
        );

        let lhs = delta
            .map_at(0, antipode)?
            .map_at(1, |f| apply_ell(f, theta))?;
        let rhs = switch_at(&l.map_at(0, |f| coaction(f, n))?, 0);
        report.record(
            format!("principality (iv) q={q:?}"),
            "(S (x) l) o Delta = (sigma (x) id) o (Delta_R (x) id) o l",
            lhs.max_abs_diff(&rhs),
            0,
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta() -> Arc<ThetaMatrix> {
        Arc::new(ThetaMatrix::from_upper(3, &[0.3127, -0.81, 0.0443]).unwrap())
    }

    #[test]
    fn unit_degree_satisfies_all_axioms() {
        let r = check_principality(&theta(), 2, &[vec![0, 0]], 1e-14).unwrap();
        assert_eq!(r.len(), 4);
        assert!(r.all_pass(), "{r:?}");
    }

    #[test]
    fn axioms_on_first_generator_degree() {
        let r = check_principality(&theta(), 2, &[vec![1, 0], vec![-2, 3]], 1e-14).unwrap();
        assert_eq!(r.len(), 6);
        assert!(r.all_pass(), "{r:?}");
    }

    #[test]
    fn ell_of_mixed_degree_carries_star_phase() {
        let th = theta();
        let l = ell(&th, &[1, 1]).unwrap();
        let (factors, c) = l.terms().next().unwrap();
        assert_eq!(
            factors,
            &vec![Factor::A(vec![-1, -1, 0]), Factor::A(vec![1, 1, 0])]
        );
        assert!((c - unit_phase_of(th.get(1, 0))).norm() < 1e-15);
    }

    fn unit_phase_of(x: f64) -> Complex64 {
        crate::algebra::unit_phase(x)
    }

    #[test]
    fn wrong_ell_is_caught() {
        // dropping the star phase breaks m∘ℓ = ε whenever the phase is nontrivial
        let th = theta();
        let bad = SymbolicTensor::pure(
            vec![Factor::A(vec![-1, -1, 0]), Factor::A(vec![1, 1, 0])],
            one(),
        );
        let m = multiply_at(&bad, 0, &th).unwrap();
        let unit = SymbolicTensor::pure(vec![Factor::A(vec![0, 0, 0])], one());
        assert!(m.max_abs_diff(&unit) > 0.1);
    }

    #[test]
    fn degree_length_is_checked() {
        assert!(check_principality(&theta(), 2, &[vec![1]], 1e-14).is_err());
        assert!(check_principality(&theta(), 0, &[], 1e-14).is_err());
    }
}
