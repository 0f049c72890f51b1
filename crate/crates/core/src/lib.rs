//! Exact-arithmetic checks of unramified local identities for GL(n) and
//! the double-coset geometry of PGL(n+1) over small finite fields.

pub mod cosets;
pub mod degenerate;
pub mod error;
pub mod satake;
pub mod spectral;
pub mod symfunc;

pub use error::{Error, Result};
