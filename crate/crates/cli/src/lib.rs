//! Argument model for the `cayley-factor` binary.

pub mod args;
