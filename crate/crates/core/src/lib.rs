//! Parity-adapted U(D)-spin coherent states of `N` symmetric quDits.
//!
//! The crate builds multicomponent Schrödinger cat states (the normalized
//! projections of a U(D) coherent state onto the `2^(D-1)` sectors of the
//! parity group `Z_2^(D-1)`), and computes the exact Schmidt spectrum of
//! their `(N-M, M)` particle bipartition in closed form, together with the
//! usual entropies and every asymptotic limit of the spectrum.
//!
//! A second, independent route lives in [`oracle`]: it writes the state out
//! in the Fock basis, splits it explicitly into `N-M` and `M` particles,
//! forms the reduced density matrix and diagonalizes it with a Jacobi
//! eigensolver. The two routes share only the basic combinatorics.
//!
//! The crate is `no_std` (with `alloc`) when the default `std` feature is
//! disabled. All transcendental functions go through `libm`, so results are
//! bit-reproducible across platforms.
//!
//! # Conventions
//!
//! * A parity label `[b_1, ..., b_{D-1}]` is stored as an integer bitmask
//!   with `b_1` in the least significant bit. Spectra are dense vectors
//!   indexed by that integer.
//! * Fock compositions `(n_0, ..., n_{D-1})` are enumerated in
//!   lexicographically decreasing order, starting at `(N, 0, ..., 0)`.
//! * Coherent-state labels live in the chart `z_0 = 1`.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

mod error;
mod math;

pub mod cats;
pub mod combinatorics;
pub mod limits;
pub mod oracle;
pub mod rng;
pub mod schmidt;
pub mod states;

pub use error::{Error, Result};

pub use cats::{CatParams, HoCatParams, NormAlgorithm};
pub use combinatorics::{Composition, ParityLabel};
pub use limits::{LossChannel, SphericalDirection};
pub use schmidt::SchmidtSpectrum;
pub use states::{BlochVector, CsLabel};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;
