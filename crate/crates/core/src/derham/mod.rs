//! Algebraic de Rham cohomology of curves, their compactifications and
//! products, with Hodge and weight filtrations.

pub mod cech;
pub mod cohomology;
pub mod hyperelliptic;
pub mod model;
pub mod rational;
pub mod record;

pub use cech::p1_model;
pub use cohomology::{
    affine_cohomology, affine_model, cech_hypercohomology, class_levels, cohomology,
    homotopy_invariance, homotopy_reduce, kunneth, mayer_vietoris, restriction, stable_model,
    Kunneth, MayerVietoris, P1Open, Slot, Space, DEFAULT_WINDOW, MAX_WINDOW,
};
pub use hyperelliptic::{hyperelliptic_closure_model, hyperelliptic_data, hyperelliptic_model};
pub use model::{
    canonical_representatives, class_in, describe_vector, form_map, product_model,
    tensor_chain_map, tensor_complex, tensor_layout, Coordinates, Elem, Model,
};
pub use rational::{etale_model, point_model, rational_model};
pub use record::{degree_record, CohomologyRecord, DegreeRecord};
