//! Truncated GNS Hilbert space, sparse (anti)linear operators and spectra.

mod export;
mod operator;
mod represent;
mod space;
mod spectrum;

pub use export::{spectrum_csv, OperatorJson, MULTIPLICITY_RESOLUTION};
pub use operator::LinearOperator;
pub use represent::{derivation_operator, represent, tomita_j};
pub use space::TruncatedSpace;
pub use spectrum::{merge_multiplicities, spectral_distance, spectrum, SELFADJOINT_TOLERANCE};
