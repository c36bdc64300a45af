pub mod algebra;
pub mod clifford;
pub mod connection;
pub mod error;
pub mod gns;
pub mod projection;
pub mod report;
pub mod sampling;
pub mod triple;

pub use algebra::{AlgebraElement, GradedComponent, MultiIndex, ThetaMatrix};
pub use clifford::{build_gammas, kr_signs, vertical_grading, GammaSet, KRSigns};
pub use connection::{
    twisted_dirac, twisted_dirac_with, ConnectionFamily, ConnectionSpec, TwistData,
};
pub use error::{Error, Result};
pub use gns::{LinearOperator, TruncatedSpace};
pub use projection::{base_triple_recipe, kr_case, verify_base_kr, BaseRecipe, ProjectabilityData};
pub use report::{CheckResult, VerificationReport};
pub use triple::{
    build_flat_triple, build_flat_triple_with, verify_equivariant_real_triple, TripleData,
};
