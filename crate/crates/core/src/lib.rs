//! Certification of logarithmically completely monotonic (LCM) rational
//! transfer functions, external-positivity tests, and synthesis of
//! two-degree-of-freedom controllers with monotonic step responses.

// `!(a < b)` comparisons deliberately reject NaN inputs.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exec;
pub mod fmt;
pub mod lcm;
pub mod majorization;
pub mod plant_file;
pub mod poly;
pub mod positivity;
pub mod random;
pub mod response;
pub mod scan;
pub mod synthesis;
pub mod tf;

pub use error::{Error, Result};
pub use poly::Polynomial;
pub use tf::RationalTF;

pub use num::complex::Complex64;
