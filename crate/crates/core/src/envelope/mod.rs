//! Fourier-side enveloping sieve: the coefficients `w(a/q)`, the majorant `β`
//! and its validation against the sifted set.

pub mod complement;
pub mod majorant;
pub mod validate;

pub use complement::ComplementSystem;
pub use majorant::{parse_csv, FourierMajorant, MajorantBlock, MajorantParams, MajorantRow, Normalization, RRange, Variant};
pub use validate::{
    coefficient_bounds, majorant_validate, select_variant, validate_table, variant_harness, CoefficientBounds,
    ValidationMode, ValidationReport,
};
