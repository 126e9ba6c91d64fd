//! Arithmetic applications: prime values of linear forms, the sums-of-two-squares
//! sets and the weighted restriction on them.

pub mod certificate;
pub mod poly;
pub mod sflat;
pub mod two_squares;

pub use certificate::{ApplicationSet, Certificate};
pub use poly::{
    gamma_q, generic_lambda_violations, poly_system, poly_system_at, singular_series, x_of_f, x_of_f_certificate,
    LinearFactorization, PolySystem, SingularSeries,
};
pub use sflat::{c_constant, sflat_profile, two_squares_measure, SflatMeasure, SflatProfile};
pub use two_squares::{b4_certificate, b4_system, in_b, in_b_direct, two_squares_sets};
