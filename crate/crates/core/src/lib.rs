pub mod alexander;
pub mod cli;
pub mod fibering;
pub mod foxcalc;
pub mod laurent;
pub mod presentation;
pub mod quotients;
