//! Mini-Husky front end built from length-preserving sequence combinators,
//! with a transformer-cost ledger, a conventional reference compiler for
//! differential testing, and a synthetic corpus generator.
//!
//! The combinator pipeline computes, per token position: the AST node
//! allocated there, its rank/scope/role, symbol definitions and
//! resolutions, and type signatures/inferences/expectations/errors. The
//! reference compiler computes the same facts with ordinary recursive
//! algorithms so the two can be compared token by token.

pub mod ast;
pub mod config;
pub mod datagen;
pub mod diff;
pub mod oracle;
pub mod pipeline;
pub mod resolve;
pub mod seq;
pub mod token;
pub mod ty;
