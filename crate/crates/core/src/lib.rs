//! Exact computations around common and uncommon linear systems over
//! finite fields: field arithmetic, systems and critical sets, exact
//! densities, Fourier transforms, and certification of uncommonness.

pub mod budget;
pub mod catalog;
pub mod certify;
pub mod density;
pub mod error;
pub mod fourier;
pub mod gf;
pub mod io;
pub mod linsys;
pub mod oracle;
pub mod rational;

pub use budget::Budget;
pub use error::{Error, Result};
