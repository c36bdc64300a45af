//! Laurent-polynomial model of the noncommutative torus A(𝕋ᵏ_θ).

mod element;
mod principal;
mod theta;

pub(crate) use element::star_phase;
pub use element::{
    monomial_product, sup_norm, unit_phase, AlgebraElement, ElementTerm, GradedComponent,
    MultiIndex,
};
pub use principal::{check_principality, ell, Factor, SymbolicTensor};
pub use theta::ThetaMatrix;
