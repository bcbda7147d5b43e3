pub mod analytic;
pub mod error;
pub mod gates;
pub mod oracle;
pub mod qubit;
pub mod tolerances;
pub mod uncertainty;
pub mod verify;

pub use error::{Error, Result};
