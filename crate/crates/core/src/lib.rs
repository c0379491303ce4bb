//! Thermal entanglement between the spin-1/2 and spin-s sites of small
//! ferrimagnetic Heisenberg rings.
//!
//! The crate builds the alternating `(1/2, s)` Heisenberg Hamiltonian,
//! diagonalizes it exactly (blocked by total `S_z`), and evaluates the
//! negativity of a nearest-neighbour pair at any temperature. Negativity is
//! available from the partial-transpose spectrum, from the partial time
//! reversal in projector form, and from the single-correlator formula that
//! holds for SU(2)-invariant pair states; the two-site model also has exact
//! closed forms, including the threshold temperature above which the pair
//! is separable.
//!
//! Energies and temperatures are in units of `J` with `k_B = 1`.

pub mod closed_form;
pub mod entanglement;
pub mod error;
pub mod lattice;
pub mod spin;
pub mod sweep;
pub mod thermal;
pub mod validate;

pub use error::{Error, Result};
pub use lattice::{Boundary, ChainSpec};
pub use spin::{DimCap, HermitianOperator, TwiceSpin};
