//! Command-line companion to `sumsetlab-core`: argument handling, text and
//! JSON formats, and the exit-code contract used by CI (0 ok,
//! 1 counterexample, 2 usage/internal error).

pub mod app;
pub mod format;

pub use app::run;
