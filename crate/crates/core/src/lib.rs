//! Zero-sum computations over cyclic groups and the metacyclic groups
//! `C_n ⋊_s C_2`.

pub mod additive;
pub mod cli;
pub mod error;
pub mod group;
pub mod invariants;
pub mod oracle;
pub mod sequence;
pub mod product;
pub mod repro;
pub mod text;
pub mod theorem;

pub use error::{Error, Result};
pub use group::{Element, GroupSpec};
pub use sequence::Sequence;
