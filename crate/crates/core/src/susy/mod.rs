//! Supersymmetric quantum mechanics for a position-dependent mass: partner
//! potentials, the generating pair `W+-`, and the two lowest eigenfunctions
//! in closed form.

mod generating;
mod pair;
mod wavefunction;

pub use generating::{generating_pair_from_wplus, superpotentials_from_generating, GeneratingPair};
pub use pair::{effective_potential_bdd, partner_v2, riccati_v1, SusyPair};
pub use wavefunction::{
    boundary_decay, boundary_ladder, first_excited, ground_state, hamiltonian_residual, EndDecay,
    LogValue, WavefunctionForm,
};

use crate::symbolic::SymbolicError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SusyError {
    #[error("f dW+/dx is not W+ W- plus a constant for any W-")]
    IncompatibleGenerator,
    #[error("energy gap {0} is not positive")]
    NonPositiveGap(f64),
    #[error("probe point {0} lies outside the domain")]
    ProbeOutOfDomain(f64),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}
