pub mod cli;
pub mod counterexamples;
pub mod error;
pub mod experiments;
pub mod function;
pub mod group;
pub mod hardy;
pub mod io;
pub mod kernels;
pub mod sums;
pub mod transform;
pub mod verify;

pub use error::{Result, VilenkinError};
