//! A λΠ-calculus modulo theory checker with a Kuroda-style double-negation
//! translation from classical to intuitionistic higher-order logic.

pub mod cli;
pub mod elaborate;
pub mod frontend;
pub mod holtheory;
pub mod kernel;
pub mod kuroda;
pub mod reduction;
pub mod typing;
