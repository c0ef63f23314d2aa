//! Kähler differentials, traces along finite extensions, transfers of
//! correspondences, residues and logarithmic forms on `P¹`.

pub mod closure;
pub mod form;
pub mod residue;
pub mod trace;
pub mod transfer;

pub use closure::{extend_correspondence, log_transfer, ClosureComponent, ClosureCycle};
pub use form::{presentation_of, substitute, DifferentialForm, KaehlerPresentation};
pub use residue::{
    dlog_at, finite_poles, local_expansion, log_defect, order_at, point_from_ideal, pole_order,
    residue, Laurent, LogDivisor, LogForm, P1Point, POLE_BOUND,
};
pub use trace::{check_trace_integrality, trace_forms, FiniteAlgebraExtension, LElem};
pub use transfer::{transfer, transfer_prime};
