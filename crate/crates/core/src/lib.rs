//! Exact symbolic analysis of rigid polynomial model domains
//! `{ 2 Re z3 + P(z1, z2, cz1, cz2) < 0 }` in C^3.
//!
//! All arithmetic is over the Gaussian rationals; symmetry checks are exact
//! polynomial identities, never numerical samples.

pub mod coeff;
pub mod poly;
pub mod grading;
pub mod linalg;
pub mod decomposition;
pub mod flows;
pub mod symmetry;
