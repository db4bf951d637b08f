//! Oracles and checks shared by the property suites and the acceptance run.
#![allow(dead_code)]

pub mod fixpoint;
pub mod process;
pub mod prop;
pub mod sign;
pub mod suspension;
pub mod unify;
