//! Exact computations with finite correspondences, transfers on differential
//! forms, algebraic de Rham cohomology of curves, and the homological
//! machinery (localization, Karoubi envelopes, décalage, Godement
//! resolutions) needed to realize small complexes of motives.

pub mod algebra;
pub mod derham;
pub mod error;
pub mod forms;
pub mod godement;
pub mod homological;
pub mod json;
pub mod realization;
pub mod varieties;

pub use error::{Error, Result};
