//! Closed-form Schmidt spectrum of the `(N-M, M)` particle bipartition of a
//! parity cat, its ranks, entropies and the fidelity.
//!
//! The `M`-particle reduced density matrix of `|z>_c` is diagonal in the
//! cats `|z>_{c'}^{(M)}`, with eigenvalues
//!
//! ```text
//! lambda_{c,c'} = N_{c xor c'}^{(N-M)}(z)^2 N_{c'}^{(M)}(z)^2 / N_c^{(N)}(z)^2
//! ```
//!
//! so a spectrum is a dense vector of `2^(D-1)` entries indexed by `c'`.

use alloc::vec::Vec;

use crate::cats::{cat_norms_sq, NormAlgorithm, DEGENERATE_NORM_SQ};
use crate::combinatorics::{binomial, ParityLabel};
use crate::math;
use crate::states::{CsLabel, ZERO_MAGNITUDE};
use crate::{Error, Result};

/// Default relative threshold of [`numerical_rank`].
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// A trace further than this from one means the norms were not resolved.
const TRACE_GUARD: f64 = 1e-8;

/// Schmidt eigenvalues of one cat, indexed by the `M`-particle parity `c'`.
///
/// `particles` and `kept` are `None` for spectra obtained in a limit where
/// the corresponding count goes to infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtSpectrum {
    lambdas: Vec<f64>,
    dim: usize,
    parity: ParityLabel,
    particles: Option<u32>,
    kept: Option<u32>,
}

impl SchmidtSpectrum {
    pub fn new(
        lambdas: Vec<f64>,
        dim: usize,
        parity: ParityLabel,
        particles: Option<u32>,
        kept: Option<u32>,
    ) -> Result<Self> {
        if dim < 2 || parity.width() as usize != dim - 1 {
            return Err(Error::WidthMismatch {
                expected: dim.saturating_sub(1) as u32,
                found: parity.width(),
            });
        }
        let len = ParityLabel::group_size(parity.width());
        if lambdas.len() != len {
            return Err(Error::LengthMismatch {
                expected: len,
                found: lambdas.len(),
            });
        }
        Ok(Self {
            lambdas,
            dim,
            parity,
            particles,
            kept,
        })
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    /// `lambda_{c,c'}`.
    pub fn get(&self, c_prime: ParityLabel) -> f64 {
        self.lambdas[c_prime.index()]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The parity `c` of the cat being split.
    pub fn parity(&self) -> ParityLabel {
        self.parity
    }

    pub fn particles(&self) -> Option<u32> {
        self.particles
    }

    pub fn kept(&self) -> Option<u32> {
        self.kept
    }

    pub fn trace(&self) -> f64 {
        self.lambdas.iter().sum()
    }

    /// Eigenvalues in descending order, zero-padded (or truncated) to `len`.
    pub fn sorted_padded(&self, len: usize) -> Vec<f64> {
        let mut v = self.lambdas.clone();
        v.sort_by(|a, b| b.total_cmp(a));
        v.resize(len, 0.0);
        v
    }

    /// `binom(M+D-1, M)` for a finite `M`, `2^(D-1)` when `M` is a limit.
    pub fn default_entropy_dim(&self) -> usize {
        match self.kept {
            Some(m) => symmetric_dim(self.dim, m)
                .map_or(usize::MAX, |d| usize::try_from(d).unwrap_or(usize::MAX)),
            None => self.lambdas.len(),
        }
    }
}

fn check_partition(particles: u32, kept: u32) -> Result<()> {
    if kept == 0 || kept >= particles {
        return Err(Error::PartitionOutOfRange { particles, kept });
    }
    Ok(())
}

fn check_width(z: &CsLabel, c: ParityLabel) -> Result<()> {
    let width = (z.dim() - 1) as u32;
    if c.width() != width {
        return Err(Error::WidthMismatch {
            expected: width,
            found: c.width(),
        });
    }
    Ok(())
}

/// Combines per-sector squared norms into `lambda_{c,c'}` for every `c'`.
pub(crate) fn combine_norms(rest: &[f64], kept: &[f64], whole: f64, c: ParityLabel) -> Vec<f64> {
    (0..kept.len())
        .map(|cp| rest[cp ^ c.index()] * kept[cp] / whole)
        .collect()
}

/// Schmidt eigenvalues `lambda_{c,c'}^{N,M}(z)`.
///
/// Any `1 <= M <= N-1` is accepted; the spectrum for `M` and for `N-M` agree
/// after the relabeling `c' -> c xor c'`. Fails with
/// [`Error::DegenerateNorm`] when `N_c^{(N)}(z)^2 < 1e-300`, in which case
/// the spectrum exists only as a limit (see [`crate::limits`]).
pub fn schmidt_eigenvalues(
    z: &CsLabel,
    c: ParityLabel,
    particles: u32,
    kept: u32,
) -> Result<SchmidtSpectrum> {
    check_width(z, c)?;
    check_partition(particles, kept)?;
    let whole = cat_norms_sq(z, particles, NormAlgorithm::Auto)[c.index()];
    if whole < DEGENERATE_NORM_SQ {
        return Err(Error::DegenerateNorm { norm_sq: whole });
    }
    let rest = cat_norms_sq(z, particles - kept, NormAlgorithm::Auto);
    let kept_norms = if kept == particles - kept {
        rest.clone()
    } else {
        cat_norms_sq(z, kept, NormAlgorithm::Auto)
    };
    let lambdas = combine_norms(&rest, &kept_norms, whole, c);
    let sum: f64 = lambdas.iter().sum();
    if (sum - 1.0).abs() > TRACE_GUARD {
        return Err(Error::TraceDefect { sum });
    }
    SchmidtSpectrum::new(lambdas, z.dim(), c, Some(particles), Some(kept))
}

/// Schmidt coefficients `l_{c,c'} = sqrt(lambda_{c,c'})`, indexed by `c'`.
pub fn schmidt_coefficients(
    z: &CsLabel,
    c: ParityLabel,
    particles: u32,
    kept: u32,
) -> Result<Vec<f64>> {
    Ok(schmidt_eigenvalues(z, c, particles, kept)?
        .lambdas
        .iter()
        .map(|l| math::sqrt(*l))
        .collect())
}

/// Fidelity `lambda_{c,0}` between the cat and the `M`-particle cat of the
/// same label after tracing out `N-M` particles.
pub fn fidelity(z: &CsLabel, c: ParityLabel, particles: u32, kept: u32) -> Result<f64> {
    Ok(schmidt_eigenvalues(z, c, particles, kept)?.lambdas[0])
}

/// `2^(||z||_0 + ||c_0||_0)`: nonzero components of `z` plus the odd
/// entries of `c` sitting on zero components.
pub fn schmidt_rank(z: &CsLabel, c: ParityLabel) -> Result<u64> {
    check_width(z, c)?;
    let zeros = z.zero_mask(ZERO_MAGNITUDE);
    let exponent = z.support_size(ZERO_MAGNITUDE) + (c.bits() & zeros).count_ones();
    Ok(1u64 << exponent)
}

/// `min{2^(||z||_0 + ||c_0||_0), binom(M+D-1, M)}`.
///
/// This is an upper bound on the rank of the `M`-particle reduced density
/// matrix; [`sector_rank`] gives the exact count, which is smaller for
/// `D >= 4` when the binomial does not bind by itself.
pub fn rank_formula(z: &CsLabel, c: ParityLabel, kept: u32) -> Result<u64> {
    let cats = schmidt_rank(z, c)?;
    Ok(symmetric_dim(z.dim(), kept).map_or(cats, |d| d.min(cats)))
}

/// Exact number of nonzero Schmidt eigenvalues.
///
/// Sector `c'` contributes iff `M` particles can carry parity `c'` and
/// `N-M` particles can carry `c xor c'` using only the occupied levels: on
/// the zero components of `z`, `c'` may be odd only where `c` is (the
/// single particle of a degenerate cat goes to either side).
pub fn sector_rank(z: &CsLabel, c: ParityLabel, particles: u32, kept: u32) -> Result<u64> {
    check_width(z, c)?;
    check_partition(particles, kept)?;
    let zeros = z.zero_mask(ZERO_MAGNITUDE);
    let forbidden = zeros & !c.bits();
    Ok(ParityLabel::all(c.width())
        .filter(|cp| {
            cp.bits() & forbidden == 0
                && cp.weight() <= kept
                && cp.xor(c).weight() <= particles - kept
        })
        .count() as u64)
}

/// Number of eigenvalues above `tol * max(lambda)`.
pub fn numerical_rank(s: &SchmidtSpectrum, tol: f64) -> usize {
    rank_of(&s.lambdas, tol)
}

/// [`numerical_rank`] of a bare eigenvalue list.
pub fn rank_of(lambdas: &[f64], tol: f64) -> usize {
    let max = lambdas.iter().cloned().fold(0.0, f64::max);
    lambdas.iter().filter(|l| **l > tol * max).count()
}

fn check_entropy_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::EntropyDimension(d));
    }
    Ok(())
}

/// `d/(d-1) (1 - sum lambda^2)`.
pub fn linear_entropy(s: &SchmidtSpectrum, d: usize) -> Result<f64> {
    linear_entropy_of(&s.lambdas, d)
}

/// [`linear_entropy`] of a bare eigenvalue list.
pub fn linear_entropy_of(lambdas: &[f64], d: usize) -> Result<f64> {
    check_entropy_dim(d)?;
    let purity: f64 = lambdas.iter().map(|l| l * l).sum();
    let d = d as f64;
    Ok((d / (d - 1.0) * (1.0 - purity)).max(0.0))
}

/// `-sum lambda log_d lambda`, with `0 log 0 = 0`.
pub fn von_neumann_entropy(s: &SchmidtSpectrum, d: usize) -> Result<f64> {
    von_neumann_entropy_of(&s.lambdas, d)
}

/// [`von_neumann_entropy`] of a bare eigenvalue list.
pub fn von_neumann_entropy_of(lambdas: &[f64], d: usize) -> Result<f64> {
    check_entropy_dim(d)?;
    let h: f64 = lambdas
        .iter()
        .filter(|l| **l > 0.0)
        .map(|l| -l * math::ln(*l))
        .sum();
    Ok((h / math::ln(d as f64)).max(0.0))
}

/// `binom(M+D-1, M)`: dimension of the `M`-particle symmetric space.
pub fn symmetric_dim(dim: usize, kept: u32) -> Option<u64> {
    binomial(kept as u64 + dim as u64 - 1, kept as u64)
}

/// `D^M`: dimension of the full `M`-quDit tensor product.
pub fn tensor_dim(dim: usize, kept: u32) -> Option<u64> {
    (dim as u64).checked_pow(kept)
}

/// `2^(D-1)`: number of parity sectors, hence of distinct cats.
pub fn max_cat_count(dim: usize) -> u64 {
    1u64 << (dim - 1)
}
