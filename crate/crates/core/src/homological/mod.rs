//! Complexes, filtrations, spectral sequences, localization of finite
//! categories and Karoubi envelopes.

pub mod additive;
pub mod category;
pub mod complex;
pub mod filtered;

pub use additive::{
    karoubi_envelope, matrix_category, matrix_to_mor, mor_to_matrix, split_in_matrix_category,
    Biproduct, FiniteAdditiveCategory, KaroubiEnvelope, KaroubiObject, Mor, Splitting,
};
pub use category::{
    check_right_multiplicative, FiniteCategory, Localization, MultiplicativeReport, Roof,
};
pub use complex::{homotopy_classes, tot_layout, total_complex, ChainMap, Complex, DoubleComplex};
pub use filtered::{
    compare_decalage_pages, decalage, spectral_sequence, BifilteredComplex, Direction,
    FilteredComplex, Filtration, SpectralSequence,
};
