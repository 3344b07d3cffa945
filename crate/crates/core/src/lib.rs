//! Cyclic free magma terms, their subgroupoids, counting sequences,
//! asymptotic densities and the Motzkin path families that count them.

pub mod decimal;
pub mod density;
pub mod cli;
pub mod error;
pub mod motzkin;
pub mod sequences;
pub mod subgroupoid;
pub mod term;
pub mod verify;

pub use error::{Error, Result};
pub use subgroupoid::GenFamily;
pub use term::Term;
