//! U(D)-spin coherent states `|z>` of `N` symmetric quDits in the chart
//! `z_0 = 1`.
//!
//! Fock amplitudes are returned in polar log form ([`LogComplex`]) because
//! the normalization `(1 + z^dag z)^(N/2)` leaves the double range for a few
//! hundred particles.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use crate::combinatorics::{log_multinomial, Composition, ParityLabel};
use crate::math;
use crate::{Error, Result, C64};

/// Components with `|z_i|` at or below this count as zero when sizing
/// supports (`||z||_0`).
pub const ZERO_MAGNITUDE: f64 = 1e-12;

/// Coherent-state label `z = (z_1, ..., z_{D-1})` stored as magnitudes and
/// phases.
#[derive(Debug, Clone, PartialEq)]
pub struct CsLabel {
    magnitudes: Vec<f64>,
    phases: Vec<f64>,
}

fn wrap_phase(phi: f64) -> f64 {
    let r = phi % TAU;
    if r < 0.0 {
        r + TAU
    } else {
        r
    }
}

impl CsLabel {
    /// Phases are reduced into `[0, 2pi)`.
    pub fn new(magnitudes: Vec<f64>, phases: Vec<f64>) -> Result<Self> {
        if magnitudes.len() != phases.len() {
            return Err(Error::LengthMismatch {
                expected: magnitudes.len(),
                found: phases.len(),
            });
        }
        if magnitudes.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(Error::InvalidArgument(
                "magnitudes must be finite and non-negative",
            ));
        }
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidArgument("phases must be finite"));
        }
        let phases = phases.into_iter().map(wrap_phase).collect();
        Ok(Self { magnitudes, phases })
    }

    /// Label with all phases zero.
    pub fn real(magnitudes: Vec<f64>) -> Result<Self> {
        let phases = alloc::vec![0.0; magnitudes.len()];
        Self::new(magnitudes, phases)
    }

    /// The highest-weight label `z = 0` for `dim` levels.
    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1);
        Self {
            magnitudes: alloc::vec![0.0; dim - 1],
            phases: alloc::vec![0.0; dim - 1],
        }
    }

    pub fn from_complex(z: &[C64]) -> Result<Self> {
        let magnitudes = z.iter().map(|w| math::hypot(w.re, w.im)).collect();
        let phases = z.iter().map(|w| math::atan2(w.im, w.re)).collect();
        Self::new(magnitudes, phases)
    }

    /// Number of levels `D`.
    pub fn dim(&self) -> usize {
        self.magnitudes.len() + 1
    }

    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// `z_{i+1}` as a complex number.
    pub fn component(&self, i: usize) -> C64 {
        C64::from_polar(self.magnitudes[i], self.phases[i])
    }

    /// `z^dag z`.
    pub fn norm_sq(&self) -> f64 {
        self.magnitudes.iter().map(|m| m * m).sum()
    }

    /// `||z||_0` with the given zero threshold.
    pub fn support_size(&self, zero_tol: f64) -> u32 {
        self.magnitudes.iter().filter(|m| **m > zero_tol).count() as u32
    }

    /// Bitmask of components with `|z_i| <= zero_tol`, same layout as
    /// [`ParityLabel`].
    pub fn zero_mask(&self, zero_tol: f64) -> u32 {
        self.magnitudes
            .iter()
            .enumerate()
            .filter(|(_, m)| **m <= zero_tol)
            .fold(0, |acc, (i, _)| acc | (1 << i))
    }
}

/// A complex number `exp(ln_abs + i arg)`; `ln_abs = -inf` encodes zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogComplex {
    pub ln_abs: f64,
    pub arg: f64,
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex {
        ln_abs: f64::NEG_INFINITY,
        arg: 0.0,
    };

    pub fn is_zero(&self) -> bool {
        self.ln_abs == f64::NEG_INFINITY
    }

    pub fn abs(&self) -> f64 {
        math::exp(self.ln_abs)
    }

    pub fn to_complex(&self) -> C64 {
        if self.is_zero() {
            C64::new(0.0, 0.0)
        } else {
            C64::from_polar(math::exp(self.ln_abs), self.arg)
        }
    }
}

/// Normalized single-quDit state `w` with `sum |w_i|^2 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochVector {
    amplitudes: Vec<C64>,
}

impl BlochVector {
    /// Rejects vectors whose squared norm is off by more than `1e-12`.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidArgument("bloch vector needs D >= 1"));
        }
        let n: f64 = amplitudes.iter().map(|w| w.norm_sqr()).sum();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument("bloch vector is not normalized"));
        }
        Ok(Self { amplitudes })
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }
}

fn check_composition(dim: usize, n: &Composition, particles: u32) -> Result<()> {
    if n.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: n.dim(),
        });
    }
    if n.total() != particles {
        return Err(Error::ParticleMismatch {
            expected: particles,
            found: n.total(),
        });
    }
    Ok(())
}

/// Fock amplitude `<n|z> = sqrt(N!/n!) prod z_i^{n_i} / (1 + z^dag z)^(N/2)`.
pub fn cs_fock_coefficient(z: &CsLabel, n: &Composition, particles: u32) -> Result<LogComplex> {
    check_composition(z.dim(), n, particles)?;
    let counts = &n.counts()[1..];
    let mut ln_abs = 0.5 * log_multinomial(n) - 0.5 * particles as f64 * math::ln_1p(z.norm_sq());
    let mut arg = 0.0;
    for ((&k, &m), &phi) in counts.iter().zip(&z.magnitudes).zip(&z.phases) {
        if k == 0 {
            continue;
        }
        if m == 0.0 {
            return Ok(LogComplex::ZERO);
        }
        ln_abs += k as f64 * math::ln(m);
        arg += k as f64 * phi;
    }
    Ok(LogComplex {
        ln_abs,
        arg: wrap_phase(arg),
    })
}

/// `<z|z'> = (1 + z^dag z')^N / ((1 + z^dag z)^(N/2) (1 + z'^dag z')^(N/2))`,
/// evaluated in log space.
pub fn cs_overlap(z: &CsLabel, other: &CsLabel, particles: u32) -> Result<C64> {
    if z.dim() != other.dim() {
        return Err(Error::DimensionMismatch {
            expected: z.dim(),
            found: other.dim(),
        });
    }
    let mut w = C64::new(1.0, 0.0);
    for i in 0..z.dim() - 1 {
        w += z.component(i).conj() * other.component(i);
    }
    if particles == 0 {
        return Ok(C64::new(1.0, 0.0));
    }
    if w.re == 0.0 && w.im == 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    let n = particles as f64;
    let ln_abs = n * math::ln(math::hypot(w.re, w.im))
        - 0.5 * n * (math::ln_1p(z.norm_sq()) + math::ln_1p(other.norm_sq()));
    let arg = n * math::atan2(w.im, w.re);
    Ok(C64::from_polar(math::exp(ln_abs), arg))
}

/// `z^b`: flips the sign of `z_i` wherever `b_i = 1`.
pub fn parity_flip(z: &CsLabel, b: ParityLabel) -> Result<CsLabel> {
    let width = (z.dim() - 1) as u32;
    if b.width() != width {
        return Err(Error::WidthMismatch {
            expected: width,
            found: b.width(),
        });
    }
    let phases = z
        .phases
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            if b.bit(i as u32) {
                wrap_phase(p + PI)
            } else {
                p
            }
        })
        .collect();
    Ok(CsLabel {
        magnitudes: z.magnitudes.clone(),
        phases,
    })
}

/// `w_0 = 1/sqrt(1 + z^dag z)`, `w_i = z_i w_0`.
pub fn bloch_from_cs(z: &CsLabel) -> BlochVector {
    let w0 = 1.0 / math::sqrt(1.0 + z.norm_sq());
    let mut amplitudes = Vec::with_capacity(z.dim());
    amplitudes.push(C64::new(w0, 0.0));
    amplitudes.extend((0..z.dim() - 1).map(|i| z.component(i) * w0));
    BlochVector { amplitudes }
}

/// Inverse of [`bloch_from_cs`] up to the global phase of `w`: `z_i = w_i / w_0`.
pub fn cs_from_bloch(w: &BlochVector) -> Result<CsLabel> {
    let w0 = w.amplitudes[0];
    if w0.re == 0.0 && w0.im == 0.0 {
        return Err(Error::Chart);
    }
    let z: Vec<C64> = w.amplitudes[1..].iter().map(|wi| wi / w0).collect();
    CsLabel::from_complex(&z)
}
