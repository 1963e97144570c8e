//! Exact formal GNS computations: JSON formats, the expression language and
//! the `gns-deform` command line.

pub mod cli;
pub mod expr;
pub mod float;
pub mod json;
pub mod suites;
