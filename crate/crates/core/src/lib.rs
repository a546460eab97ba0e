//! Helicity-basis representation machinery for the Lorentz group.
//!
//! Layers, bottom up: exact spin labels and series kernels ([`spin`],
//! [`matrix`], [`special`]), SU(2) functions ([`su2`]), Lie-algebra
//! generators ([`generators`]), SL(2,C) matrix elements ([`hyperspherical`]),
//! tensor products ([`tensor`]), Clifford and Schur-cover matrices
//! ([`clifford`]), Gel'fand–Yaglom systems ([`gy`]), the separated radial
//! system ([`radial`]) and the batch verification suites ([`verify`]).

pub mod clifford;
pub mod error;
pub mod generators;
pub mod gy;
pub mod hyperspherical;
pub mod matrix;
pub mod radial;
pub mod special;
pub mod spin;
pub mod su2;
pub mod tensor;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::CMatrix;
pub use num_complex::Complex64;
pub use spin::{enumerate_basis, BasisIndex, GroupPoint, HalfInt};

/// Shorthand for building a complex scalar.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
