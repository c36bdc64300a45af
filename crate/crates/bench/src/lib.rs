//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use ncbundle_core::projection::ProjectabilityData;
use ncbundle_core::sampling::{random_element, random_theta, rng};
use ncbundle_core::{build_flat_triple, AlgebraElement, ThetaMatrix};

pub fn theta_t3() -> Arc<ThetaMatrix> {
    Arc::new(ThetaMatrix::from_upper(3, &[0.3, 0.0, 0.0]).expect("valid upper triangle"))
}

/// Two random elements of A(𝕋ᵏ_θ) with `terms` terms of degree ≤ `degree`.
pub fn element_pair(
    k: usize,
    degree: u32,
    terms: usize,
    seed: u64,
) -> (AlgebraElement, AlgebraElement) {
    let th = Arc::new(random_theta(k, &mut rng(seed)));
    let mut r = rng(seed ^ 1);
    (
        random_element(&th, degree, terms, &mut r),
        random_element(&th, degree, terms, &mut r),
    )
}

/// Flat 𝕋³ over 𝕋¹ data with Γ = σ³.
pub fn t3_projectable(cutoff: u32) -> ProjectabilityData {
    let t = build_flat_triple(&theta_t3(), 2, 1, cutoff).expect("flat triple");
    ProjectabilityData::flat(&t, -1.0, 1e-12).expect("projectable")
}
