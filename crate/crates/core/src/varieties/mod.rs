//! Curves of dimension at most one, finite correspondences and zero-cycles.

pub mod correspondence;
pub mod cycle;
pub mod scheme;

pub use correspondence::{
    compose, compose_prime, external_tensor, graph, product_vars, FiniteCorrespondence, Morphism,
    PrimeCorrespondence, ProductCorrespondence,
};
pub use cycle::{cycle_from_sym, sym_point, ZeroCycle};
pub use scheme::{parse_in, AffineCurveScheme, SchemeKind};
