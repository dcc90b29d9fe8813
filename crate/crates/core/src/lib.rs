pub mod analytic;
pub mod cli;
pub mod config;
pub mod error;
pub mod fds;
pub mod fields;
pub mod formulations;
pub mod geometry;
pub mod linalg;
pub mod media;
pub mod operators;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};
