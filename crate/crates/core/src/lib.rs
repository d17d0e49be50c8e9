//! Algebraic soft-decision decoding of Reed-Solomon codes.

pub mod analysis;
pub mod asd;
pub mod cli;
pub mod channel;
pub mod codes;
pub mod error;
pub mod gf;
pub mod poly;
pub mod simulate;
mod kernel;

pub use error::{Error, Result};
pub use gf::{Elem, Field};
