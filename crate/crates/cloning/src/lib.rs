//! Qudit quantum cloning machines: state and operator algebra, channel
//! representations, figure-of-merit operators, feasibility of economical
//! (ancilla-free) realizations, and the four-party amplitude ansatz.

pub mod ansatz;
pub mod cli;
pub mod economical;
pub mod error;
pub mod figures_of_merit;
pub mod maps;
pub mod optim;
pub mod qudit;
pub mod report;

pub use error::{Error, Result};
