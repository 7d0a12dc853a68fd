//! Intersection covering solvers.

pub mod cover;
pub mod kmst;

pub use cover::{fli, fli_call_cap, fli_with_calls, intersection_ksc_via_fli, sci_two_layer};
pub use kmst::{intersection_kmst, intersection_kmst_both, SummedKmst};
