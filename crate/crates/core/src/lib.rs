//! Exact enumeration of reflection factorizations in finite complex
//! reflection groups, with the closed forms and structural identities that
//! govern them.

pub mod closed_forms;
pub mod cutjoin;
pub mod cyclo;
pub mod error;
pub mod gram;
pub mod lattice;
pub mod linalg;
pub mod parabolic;
pub mod perm_group;
pub mod real_group;
pub mod realization;
pub mod rgs;
pub mod verify;
pub mod wreath;

pub use error::{Error, Result};
