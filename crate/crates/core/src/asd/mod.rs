//! Soft- and hard-decision decoders: multiplicity assignment, interpolation,
//! root finding, list selection, and the syndrome baseline.

pub mod bm;
pub mod decode;
pub mod interpolate;
pub mod multiplicity;
pub mod roots;

pub use bm::{bm_decode, bm_radius, nearest_codeword};
pub use decode::{asd_decode, asd_decode_twisted, gs_decode, gs_radius, list_decode, Candidate, DecodeResult, Diagnostics, Selection};
pub use interpolate::{interpolate, interpolate_dense, interpolate_matrix, InterpolationPoint, Interpolation, MultiPoint};
pub use multiplicity::{list_size_bound, pmas, pv_threshold_ok, threshold_ok, MultiplicityMatrix, PvForm, Threshold};
pub use roots::y_roots;
