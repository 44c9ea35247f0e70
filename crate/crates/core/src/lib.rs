//! Numerics for composite quantum instruments.
//!
//! The crate covers order effects of projection pairs on Halmos blocks,
//! Doeblin minorization constants of channels and their product bound,
//! finite-sample mixing certificates from binomial counts, monitored
//! Lindblad limits of look-return loops, and a diamond-norm harness for
//! order-commutator superoperators. All linear algebra is dense and sized
//! for small systems (a few qubits or qutrits).

pub mod certify;
pub mod channel;
pub mod doeblin;
pub mod error;
pub mod lindblad;
pub mod linalg;
pub mod order;
pub mod random;

pub use channel::{Channel, Instrument, Superoperator};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, HermitianMatrix, C64};
