#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod automata;
pub mod groups;
pub mod demonstrations;
pub mod constructions;
pub mod wordproblem;
