// Field elements hold an interned descriptor; clippy mistakes it for interior mutability.
#![allow(clippy::mutable_key_type)]

pub mod codes;
pub mod curve;
pub mod ecp;
pub mod error;
pub mod field;
pub mod kernels;
pub mod linalg;
pub mod pipeline;
pub mod projectors;
pub mod rrspace;
pub mod seed;
pub mod subsets;

pub use error::{Error, Result};
