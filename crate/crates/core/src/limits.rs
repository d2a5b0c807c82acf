//! Closed-form limits of the Schmidt spectrum: thermodynamic (`N -> inf`),
//! double thermodynamic (`N, M -> inf`), rescaled double thermodynamic
//! (`z = alpha/sqrt(N)`, `M = (1-eta) N`), `z -> 0`, `|z_i| -> 1`, and
//! `||z|| -> inf` along a direction of the first hyper-octant.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use crate::cats::{
    cat_norm_sq, cat_norms_sq, sign_weighted_squares, signed_sector_sums, CatParams, NormAlgorithm,
    DEGENERATE_NORM_SQ,
};
use crate::combinatorics::ParityLabel;
use crate::math;
use crate::schmidt::{schmidt_eigenvalues, SchmidtSpectrum};
use crate::states::{CsLabel, ZERO_MAGNITUDE};
use crate::{Error, Result};

/// Modulus used when a limit at `z_i = 0` is evaluated numerically.
pub const ORIGIN_PROXY: f64 = 1e-6;

/// Directional character sums below this make the limit indeterminate.
pub const INDETERMINATE_TOL: f64 = 1e-13;

/// Angles `theta_1, ..., theta_{D-2}` in `[0, pi/2]` of a unit vector with
/// non-negative components.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalDirection {
    dim: usize,
    theta: Vec<f64>,
}

impl SphericalDirection {
    pub fn new(dim: usize, theta: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidArgument("a direction needs D >= 2"));
        }
        if theta.len() != dim - 2 {
            return Err(Error::LengthMismatch {
                expected: dim - 2,
                found: theta.len(),
            });
        }
        if theta.iter().any(|t| !(0.0..=FRAC_PI_2).contains(t)) {
            return Err(Error::InvalidArgument("angles must lie in [0, pi/2]"));
        }
        Ok(Self { dim, theta })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }
}

/// `y_1 = cos t_1, y_2 = sin t_1 cos t_2, ..., y_{D-1} = sin t_1 ... sin t_{D-2}`.
pub fn direction_components(dir: &SphericalDirection) -> Vec<f64> {
    let mut y = Vec::with_capacity(dir.dim - 1);
    let mut tail = 1.0;
    for t in &dir.theta {
        y.push(tail * math::cos(*t));
        tail *= math::sin(*t);
    }
    y.push(tail);
    y
}

/// Transmissivity `eta` of the rescaled limit together with the rescaled
/// labels `alpha_i = sqrt(N) |z_i|`.
#[derive(Debug, Clone, PartialEq)]
pub struct LossChannel {
    eta: f64,
    alpha: Vec<f64>,
}

impl LossChannel {
    pub fn new(eta: f64, alpha: Vec<f64>) -> Result<Self> {
        if !(0.5..1.0).contains(&eta) {
            return Err(Error::InvalidArgument("eta must lie in [1/2, 1)"));
        }
        if alpha.iter().any(|a| !a.is_finite() || *a < 0.0) {
            return Err(Error::InvalidArgument(
                "alpha must be finite and non-negative",
            ));
        }
        Ok(Self { eta, alpha })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn dim(&self) -> usize {
        self.alpha.len() + 1
    }
}

fn check_width(expected: usize, c: ParityLabel) -> Result<()> {
    if c.width() as usize != expected {
        return Err(Error::WidthMismatch {
            expected: expected as u32,
            found: c.width(),
        });
    }
    Ok(())
}

fn check_partition(particles: u32, kept: u32) -> Result<()> {
    if kept == 0 || kept >= particles {
        return Err(Error::PartitionOutOfRange { particles, kept });
    }
    Ok(())
}

/// `lim_{N->inf} lambda_{c,c'}^{N,M}(z) = N_{c'}^{(M)}(z)^2`, whatever `c`.
pub fn lambda_thermodynamic(z: &CsLabel, kept: u32, c_prime: ParityLabel) -> Result<f64> {
    Ok(cat_norm_sq(
        &CatParams::new(z.clone(), c_prime, kept)?,
        NormAlgorithm::Auto,
    ))
}

pub fn thermodynamic_spectrum(z: &CsLabel, c: ParityLabel, kept: u32) -> Result<SchmidtSpectrum> {
    check_width(z.dim() - 1, c)?;
    if kept == 0 {
        return Err(Error::PartitionOutOfRange { particles: 0, kept });
    }
    let lambdas = cat_norms_sq(z, kept, NormAlgorithm::Auto);
    SchmidtSpectrum::new(lambdas, z.dim(), c, None, Some(kept))
}

/// `lim_{N,M->inf} lambda_{c,c'} = 2^(-||z||_0) delta_{c_0, c'_0}`: the
/// maximally mixed state on the sectors that agree with `c` on the zero
/// components of `z`.
pub fn lambda_double_tl(z: &CsLabel, c: ParityLabel, c_prime: ParityLabel) -> Result<f64> {
    check_width(z.dim() - 1, c)?;
    check_width(z.dim() - 1, c_prime)?;
    let zeros = z.zero_mask(ZERO_MAGNITUDE);
    if (c.bits() ^ c_prime.bits()) & zeros != 0 {
        return Ok(0.0);
    }
    Ok(libm::exp2(-(z.support_size(ZERO_MAGNITUDE) as f64)))
}

pub fn double_tl_spectrum(z: &CsLabel, c: ParityLabel) -> Result<SchmidtSpectrum> {
    let lambdas = ParityLabel::all(c.width())
        .map(|cp| lambda_double_tl(z, c, cp))
        .collect::<Result<Vec<_>>>()?;
    SchmidtSpectrum::new(lambdas, z.dim(), c, None, None)
}

/// `exp_c(a) / exp_c(b)` for `0 <= a <= b`, with `exp_0 = cosh` and
/// `exp_1 = sinh`, free of overflow. For the odd case `b` must be positive.
fn exp_c_ratio(odd: bool, a: f64, b: f64) -> f64 {
    if odd {
        math::exp(a - b) * math::exp_m1(-2.0 * a) / math::exp_m1(-2.0 * b)
    } else {
        math::exp(a - b) * (1.0 + math::exp(-2.0 * a)) / (1.0 + math::exp(-2.0 * b))
    }
}

/// Single-mode factor of the rescaled double thermodynamic limit,
/// `1/2 + (-1)^{c'} exp_c((2 eta - 1) alpha^2) / (2 exp_c(alpha^2))`.
///
/// This equals `exp_{c xor c'}(eta x) exp_{c'}((1-eta) x) / exp_c(x)` with
/// `x = alpha^2`, the Schmidt weights of a one-mode cat sent through a beam
/// splitter of transmissivity `eta`. At `c = 1, alpha = 0` the value is the
/// continuous extension `1/2 + (-1)^{c'} (2 eta - 1)/2`.
pub fn lambda_ho(alpha: f64, odd: bool, odd_prime: bool, eta: f64) -> f64 {
    let x = alpha * alpha;
    let skew = 2.0 * eta - 1.0;
    let ratio = if odd && x == 0.0 {
        skew
    } else {
        exp_c_ratio(odd, skew * x, x)
    };
    let sign = if odd_prime { -1.0 } else { 1.0 };
    0.5 + 0.5 * sign * ratio
}

/// Product of [`lambda_ho`] factors over the modes.
pub fn lambda_rescaled_tl(ch: &LossChannel, c: ParityLabel, c_prime: ParityLabel) -> Result<f64> {
    check_width(ch.alpha.len(), c)?;
    check_width(ch.alpha.len(), c_prime)?;
    Ok(ch
        .alpha
        .iter()
        .enumerate()
        .map(|(i, a)| lambda_ho(*a, c.bit(i as u32), c_prime.bit(i as u32), ch.eta))
        .product())
}

pub fn rescaled_tl_spectrum(ch: &LossChannel, c: ParityLabel) -> Result<SchmidtSpectrum> {
    let lambdas = ParityLabel::all(c.width())
        .map(|cp| lambda_rescaled_tl(ch, c, cp))
        .collect::<Result<Vec<_>>>()?;
    SchmidtSpectrum::new(lambdas, ch.dim(), c, None, None)
}

/// `n (n-1) ... (n-k+1)`.
fn falling(n: u32, k: u32) -> f64 {
    (0..k).map(|i| (n - i) as f64).product()
}

/// `lim_{z->0} lambda_{c,c'}^{N,M}(z)` for `D = 2, 3`.
///
/// The cat tends to the Fock state with one particle in each odd level of
/// `c`; splitting it sends each of those `k = ||c||_0` particles to the
/// `M` side with hypergeometric weights, so `c'` must be a subset of `c`
/// and, with `j = ||c'||_0`,
///
/// ```text
/// lambda = M!/(M-j)! (N-M)!/(N-M-k+j)! / (N!/(N-k)!)
/// ```
///
/// Larger `D` is reported as [`Error::UnsupportedDimension`]; use
/// [`origin_proxy_spectrum`] there.
pub fn lambda_origin(
    dim: usize,
    particles: u32,
    kept: u32,
    c: ParityLabel,
    c_prime: ParityLabel,
) -> Result<f64> {
    if !(2..=3).contains(&dim) {
        return Err(Error::UnsupportedDimension { dim });
    }
    check_width(dim - 1, c)?;
    check_width(dim - 1, c_prime)?;
    check_partition(particles, kept)?;
    let k = c.weight();
    if particles < k {
        return Err(Error::TooFewParticles { particles, odd: k });
    }
    if c_prime.bits() & !c.bits() != 0 {
        return Ok(0.0);
    }
    let j = c_prime.weight();
    let rest = particles - kept;
    if j > kept || k - j > rest {
        return Ok(0.0);
    }
    Ok(falling(kept, j) * falling(rest, k - j) / falling(particles, k))
}

pub fn origin_spectrum(
    dim: usize,
    particles: u32,
    kept: u32,
    c: ParityLabel,
) -> Result<SchmidtSpectrum> {
    let lambdas = ParityLabel::all(c.width())
        .map(|cp| lambda_origin(dim, particles, kept, c, cp))
        .collect::<Result<Vec<_>>>()?;
    SchmidtSpectrum::new(lambdas, dim, c, Some(particles), Some(kept))
}

/// Numerical stand-in for the `z -> 0` limit at any `D`: the finite spectrum
/// at `|z_i| =` [`ORIGIN_PROXY`].
pub fn origin_proxy_spectrum(
    dim: usize,
    particles: u32,
    kept: u32,
    c: ParityLabel,
) -> Result<SchmidtSpectrum> {
    log::warn!(
        "no closed form for the z -> 0 limit at D = {dim}; evaluating at |z_i| = {ORIGIN_PROXY:e}"
    );
    let z = CsLabel::real(alloc::vec![ORIGIN_PROXY; dim - 1])?;
    schmidt_eigenvalues(&z, c, particles, kept)
}

/// `(-1)^k`.
fn neg_one_pow(k: u32) -> i32 {
    1 - 2 * (k & 1) as i32
}

fn pow3(n: u32) -> i128 {
    3i128.pow(n)
}

/// `lim_{|z_i|->1} lambda_{c,c'}^{N,M}(z)` for `D = 2, 3`.
///
/// For `D = 3` this is the ratio of sector sums of `3^n` and the three
/// sign patterns, evaluated in exact integer arithmetic up to `N = 39`
/// and in normalized floating point beyond.
pub fn lambda_unit(
    dim: usize,
    particles: u32,
    kept: u32,
    c: ParityLabel,
    c_prime: ParityLabel,
) -> Result<f64> {
    if !(2..=3).contains(&dim) {
        return Err(Error::UnsupportedDimension { dim });
    }
    check_width(dim - 1, c)?;
    check_width(dim - 1, c_prime)?;
    check_partition(particles, kept)?;
    if dim == 2 {
        return Ok(0.5);
    }
    let rest = particles - kept;
    let cm = c.xor(c_prime).bits();
    let cp = c_prime.bits();
    let cc = c.bits();
    // 3^n + (-1)^{a_1} + (-1)^{a_2} + (-1)^{a_1 + a_2 + n}
    let signs = |a: u32, n: u32| -> i32 {
        neg_one_pow(a & 1) + neg_one_pow(a >> 1) + neg_one_pow(a.count_ones() + n)
    };
    let (sr, sk, sw) = (signs(cm, rest), signs(cp, kept), signs(cc, particles));
    if particles <= 39 {
        let num = (pow3(rest) + sr as i128) * (pow3(kept) + sk as i128);
        let den = 4 * (pow3(particles) + sw as i128);
        return Ok(num as f64 / den as f64);
    }
    let inv3 = |n: u32| libm::pow(3.0, -(n as f64));
    Ok(
        (1.0 + sr as f64 * inv3(rest)) * (1.0 + sk as f64 * inv3(kept))
            / (4.0 * (1.0 + sw as f64 * inv3(particles))),
    )
}

pub fn unit_spectrum(
    dim: usize,
    particles: u32,
    kept: u32,
    c: ParityLabel,
) -> Result<SchmidtSpectrum> {
    let lambdas = ParityLabel::all(c.width())
        .map(|cp| lambda_unit(dim, particles, kept, c, cp))
        .collect::<Result<Vec<_>>>()?;
    SchmidtSpectrum::new(lambdas, dim, c, Some(particles), Some(kept))
}

/// `lim_{r->inf} lambda_{c,c'}^{N,M}(r y(theta))` for every `c'`.
///
/// With `Y_b = sum_i (-1)^{b_i} y_i^2` and `S_c^n = 2^(1-D) sum_b chi_c(b)
/// Y_b^n` the limit is `S_{c xor c'}^{N-M} S_{c'}^M / S_c^N`. When
/// `|S_c^N| <` [`INDETERMINATE_TOL`] the ratio is `0/0` and
/// [`Error::IndeterminateLimit`] is returned.
pub fn infinity_directional_spectrum(
    dir: &SphericalDirection,
    c: ParityLabel,
    particles: u32,
    kept: u32,
) -> Result<SchmidtSpectrum> {
    check_width(dir.dim - 1, c)?;
    check_partition(particles, kept)?;
    let y = sign_weighted_squares(&direction_components(dir));
    let whole = signed_sector_sums(&y, particles)[c.index()];
    if whole.abs() < INDETERMINATE_TOL {
        return Err(Error::IndeterminateLimit { denominator: whole });
    }
    let rest = signed_sector_sums(&y, particles - kept);
    let kept_sums = signed_sector_sums(&y, kept);
    let lambdas = crate::schmidt::combine_norms(&rest, &kept_sums, whole, c);
    SchmidtSpectrum::new(lambdas, dir.dim, c, Some(particles), Some(kept))
}

pub fn lambda_infinity_directional(
    dir: &SphericalDirection,
    c: ParityLabel,
    c_prime: ParityLabel,
    particles: u32,
    kept: u32,
) -> Result<f64> {
    check_width(dir.dim - 1, c_prime)?;
    Ok(infinity_directional_spectrum(dir, c, particles, kept)?.get(c_prime))
}

/// `lim_{|z|->inf} lambda_{c,c'}^{N,M}(z)` for `D = 2`:
/// `(1/2) [1 + (N-M)/N (-1)^{c'+M} + M/N (-1)^{c-c'+N-M}]`.
///
/// Unlike the directional formula this is finite for every parity, since
/// it keeps the `O(1/|z|^2)` terms that decide the `0/0` cases.
pub fn lambda_infinity_d2(particles: u32, kept: u32, odd: bool, odd_prime: bool) -> Result<f64> {
    check_partition(particles, kept)?;
    let n = particles as f64;
    let m = kept as f64;
    let (c, cp) = (odd as u32, odd_prime as u32);
    let first = neg_one_pow(cp + kept) as f64;
    let second = neg_one_pow(c + cp + particles - kept) as f64;
    Ok(0.5 * (1.0 + (n - m) / n * first + m / n * second))
}

/// Spectrum at `z`, falling back on a limit when the cat norm vanishes.
///
/// A cat with `c_i = 1` on a zero component exists only as a limit. At
/// `z = 0` with `D <= 3` the closed form [`lambda_origin`] is used; otherwise
/// the offending components are moved to [`ORIGIN_PROXY`].
pub fn regularized_spectrum(
    z: &CsLabel,
    c: ParityLabel,
    particles: u32,
    kept: u32,
) -> Result<SchmidtSpectrum> {
    match schmidt_eigenvalues(z, c, particles, kept) {
        Err(Error::DegenerateNorm { norm_sq }) => {
            let degenerate = z.zero_mask(ZERO_MAGNITUDE) & c.bits();
            if degenerate == 0 {
                return Err(Error::DegenerateNorm { norm_sq });
            }
            if z.support_size(ZERO_MAGNITUDE) == 0 && z.dim() <= 3 {
                return origin_spectrum(z.dim(), particles, kept, c);
            }
            let mags = z
                .magnitudes()
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    if degenerate >> i & 1 == 1 {
                        ORIGIN_PROXY
                    } else {
                        *m
                    }
                })
                .collect();
            let proxy = CsLabel::new(mags, z.phases().to_vec())?;
            if cat_norms_sq(&proxy, particles, NormAlgorithm::Auto)[c.index()] < DEGENERATE_NORM_SQ
            {
                return Err(Error::DegenerateNorm { norm_sq });
            }
            schmidt_eigenvalues(&proxy, c, particles, kept)
        }
        other => other,
    }
}
