//! Seeded random elements and deformation matrices for property checks.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraElement, MultiIndex, ThetaMatrix};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Antisymmetric θ with strict-upper entries uniform in (−1, 1).
pub fn random_theta(k: usize, rng: &mut SampleRng) -> ThetaMatrix {
    let upper: Vec<f64> = (0..k * k.saturating_sub(1) / 2)
        .map(|_| rng.gen_range(-1.0..1.0))
        .collect();
    ThetaMatrix::from_upper(k, &upper).expect("length matches")
}

fn coeff(rng: &mut SampleRng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Element with up to `terms` monomials, each index in [−degree, degree]ᵏ.
/// Indices listed in `fixed` are pinned to the given values.
fn sample(
    theta: &Arc<ThetaMatrix>,
    degree: u32,
    terms: usize,
    fixed: &[i32],
    rng: &mut SampleRng,
) -> AlgebraElement {
    let d = degree as i32;
    let k = theta.dim();
    let mut out = Vec::with_capacity(terms);
    for _ in 0..terms {
        let idx: MultiIndex = (0..k)
            .map(|i| {
                fixed
                    .get(i)
                    .copied()
                    .unwrap_or_else(|| rng.gen_range(-d..=d))
            })
            .collect();
        out.push((idx, coeff(rng)));
    }
    AlgebraElement::from_terms(theta, out).expect("dimensions match")
}

pub fn random_element(
    theta: &Arc<ThetaMatrix>,
    degree: u32,
    terms: usize,
    rng: &mut SampleRng,
) -> AlgebraElement {
    sample(theta, degree, terms, &[], rng)
}

/// Element of the degree-q graded component (first n indices equal q).
pub fn random_homogeneous(
    theta: &Arc<ThetaMatrix>,
    q: &[i32],
    degree: u32,
    terms: usize,
    rng: &mut SampleRng,
) -> AlgebraElement {
    sample(theta, degree, terms, q, rng)
}

/// Element of the invariant subalgebra B for fibre rank n.
pub fn random_base_element(
    theta: &Arc<ThetaMatrix>,
    n: usize,
    degree: u32,
    terms: usize,
    rng: &mut SampleRng,
) -> AlgebraElement {
    sample(theta, degree, terms, &vec![0; n], rng)
}

/// Sample elements shared by the verification suites.
#[derive(Clone, Debug)]
pub struct Samples {
    /// Pairs (a, b) of general elements.
    pub pairs: Vec<(AlgebraElement, AlgebraElement)>,
    /// Pairs of elements of B.
    pub base_pairs: Vec<(AlgebraElement, AlgebraElement)>,
}

impl Samples {
    pub fn generate(
        theta: &Arc<ThetaMatrix>,
        n: usize,
        count: usize,
        degree: u32,
        seed: u64,
    ) -> Self {
        let mut r = rng(seed);
        let pairs = (0..count)
            .map(|_| {
                (
                    random_element(theta, degree, 3, &mut r),
                    random_element(theta, degree, 3, &mut r),
                )
            })
            .collect();
        let base_pairs = (0..count)
            .map(|_| {
                (
                    random_base_element(theta, n, degree, 3, &mut r),
                    random_base_element(theta, n, degree, 3, &mut r),
                )
            })
            .collect();
        Samples { pairs, base_pairs }
    }

    pub fn max_degree(&self) -> u32 {
        self.pairs
            .iter()
            .chain(&self.base_pairs)
            .map(|(a, b)| a.degree().max(b.degree()))
            .max()
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_sampling_is_reproducible() {
        let th = Arc::new(random_theta(3, &mut rng(7)));
        let a = Samples::generate(&th, 2, 2, 2, 11);
        let b = Samples::generate(&th, 2, 2, 2, 11);
        assert_eq!(a.pairs[0].0, b.pairs[0].0);
        assert!(a
            .base_pairs
            .iter()
            .all(|(x, y)| x.is_invariant(2) && y.is_invariant(2)));
        assert!(a.max_degree() <= 2);
    }

    #[test]
    fn homogeneous_samples_have_requested_degree() {
        let th = Arc::new(ThetaMatrix::zero(3));
        let a = random_homogeneous(&th, &[2, -1], 1, 4, &mut rng(3));
        let parts = a.graded_decompose(2).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].degree, vec![2, -1]);
    }
}
