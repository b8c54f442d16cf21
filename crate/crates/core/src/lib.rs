// SPDX-License-Identifier: Apache-2.0

//! Exact integral lattices and weight-two Hodge data for abelian and
//! Kummer surfaces.
//!
//! Everything here is computed with arbitrary-precision integers and
//! rationals. The crate is `no_std` and only needs `alloc`; file formats,
//! reports and the command-line tool live in `twistlat-verify`.
//!
//! Layout:
//! - [`matrix`], [`normal_form`]: dense exact matrices, Hermite and Smith forms.
//! - [`lattice`], [`discriminant`]: lattices, sublattices, discriminant forms.
//! - [`hodge`]: formal periods over a symbol basis, wedge-square lattices.
//! - [`brauer`]: B-fields, Brauer classes, the Mukai lattice and `exp(B)`.
//! - [`isometry`]: certified isometries, genus refutation, bounded search.
//! - [`kummer`]: the Kummer correspondence on transcendental lattices.
//! - [`picard_two`]: fixtures for the Picard-number-two family `(E x F)/C_n`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod brauer;
pub mod discriminant;
mod error;
pub mod hodge;
pub mod isometry;
pub mod kummer;
pub mod lattice;
pub mod matrix;
pub mod normal_form;
pub mod picard_two;

pub use error::{Error, Result};

/// Arbitrary-precision integer used throughout.
pub type Int = num_bigint::BigInt;
/// Arbitrary-precision rational used throughout.
pub type Rat = num_rational::BigRational;

pub use brauer::{BField, BrauerClass, MukaiVector};
pub use discriminant::{DiscriminantForm, GenusInvariants};
pub use hodge::{H1Frame, HodgeLattice, PeriodVector, SymbolBasis};
pub use isometry::{GenusVerdict, IsometryMap};
pub use kummer::{AbelianSurfaceModel, KummerModel, TVerdict};
pub use lattice::{Lattice, StandardKind, Sublattice};
pub use matrix::{IntMatrix, Matrix, RatMatrix};
