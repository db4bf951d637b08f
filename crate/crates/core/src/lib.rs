//! Analyses of small languages built on one logic-programming core: terms,
//! unification and lazy answer streams.
//!
//! - [`bytecode`], [`interp`], [`sign`], [`analysis`]: a stack bytecode run
//!   concretely and over signs, by path enumeration or by fixpoint.
//! - [`types`]: committed-choice type inference for set/integer formulas.
//! - [`prop`]: propositional satisfaction and falsification.
//! - [`process`]: interleaving processes, traces and reachability.
//! - [`goals`]: goals that suspend until their arguments are bound.

pub mod analysis;
pub mod bytecode;
pub mod cli;
pub mod corpus;
pub mod goals;
pub mod interp;
pub mod process;
pub mod prop;
pub mod sign;
pub mod stream;
pub mod syntax;
pub mod term;
pub mod types;
