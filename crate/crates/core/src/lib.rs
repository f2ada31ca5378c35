//! Subshift algebras: exact Boolean set algebra over cylinder and follower
//! sets, the associated partial actions and skew group rings, their
//! groupoid models, and conjugacy checks.

pub mod algebra;
pub mod alphabet;
pub mod automaton;
pub mod bridges;
pub mod cli;
pub mod config;
pub mod conjugacy;
pub mod display;
pub mod error;
pub mod fincof;
pub mod fixtures;
pub mod otw;
pub mod parse;
pub mod partial_action;
pub mod relations;
pub mod report;
pub mod ring;
pub mod rules;
pub mod sets;
pub mod shift;
pub mod stone;
pub mod word;

pub use error::{Error, Result};
