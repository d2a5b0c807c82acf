//! Parity-adapted coherent states ("cats"): the normalized projection of a
//! coherent state onto one parity sector of `Z_2^(D-1)`.
//!
//! The squared norm of the projection is available through two independent
//! algorithms:
//!
//! * [`NormAlgorithm::Signed`] sums the group characters against the
//!   overlaps `<z|z^b> = t_b^N`. It costs `O((D-1) 2^(D-1))` regardless of
//!   `N` but cancels when the result is small; the sum is carried in
//!   double-double arithmetic, which leaves about 16 significant digits
//!   down to results near `1e-16`.
//! * [`NormAlgorithm::FockSum`] adds up `|<n|z>|^2` over the Fock states of
//!   the sector. Every term is positive, so the relative accuracy is kept
//!   down to the underflow threshold, at a cost linear in the basis size.

use alloc::vec;
use alloc::vec::Vec;

use crate::combinatorics::{
    basis_size, for_each_composition, ln_factorial_table, parity_bits, sign_of, Composition,
    ParityLabel,
};
use crate::limits::{direction_components, SphericalDirection};
use crate::math::{self, DoubleDouble};
use crate::states::{cs_fock_coefficient, CsLabel, ZERO_MAGNITUDE};
use crate::{Error, Result, C64};

/// Largest basis for which [`NormAlgorithm::Auto`] enumerates Fock states.
pub const FOCK_SUM_MAX_BASIS: usize = 2_000_000;

/// Squared norms below this are treated as a vanishing projection.
pub const DEGENERATE_NORM_SQ: f64 = 1e-300;

/// Negative round-off below this magnitude is clamped to zero.
const CANCELLATION_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormAlgorithm {
    Signed,
    FockSum,
    #[default]
    Auto,
}

/// Label of a cat state `|z>_c` of `N` particles.
#[derive(Debug, Clone, PartialEq)]
pub struct CatParams {
    z: CsLabel,
    parity: ParityLabel,
    particles: u32,
}

impl CatParams {
    pub fn new(z: CsLabel, parity: ParityLabel, particles: u32) -> Result<Self> {
        let width = (z.dim() - 1) as u32;
        if parity.width() != width {
            return Err(Error::WidthMismatch {
                expected: width,
                found: parity.width(),
            });
        }
        if particles == 0 {
            return Err(Error::InvalidArgument("a cat state needs N >= 1"));
        }
        Ok(Self {
            z,
            parity,
            particles,
        })
    }

    pub fn z(&self) -> &CsLabel {
        &self.z
    }

    pub fn parity(&self) -> ParityLabel {
        self.parity
    }

    pub fn particles(&self) -> u32 {
        self.particles
    }

    pub fn dim(&self) -> usize {
        self.z.dim()
    }
}

/// One-mode harmonic-oscillator cat `|alpha>_c`, even or odd.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoCatParams {
    pub alpha: f64,
    pub odd: bool,
}

/// `t_b = <z|z^b>^(1/N) = (1 + sum (-1)^{b_i} |z_i|^2) / (1 + sum |z_i|^2)`.
pub(crate) fn flip_overlap_bases(z: &CsLabel) -> Vec<DoubleDouble> {
    let w: Vec<DoubleDouble> = z
        .magnitudes()
        .iter()
        .map(|m| DoubleDouble::product(*m, *m))
        .collect();
    let denom = w.iter().fold(DoubleDouble::ONE, |acc, wi| acc.add(*wi));
    signed_combinations(&w, DoubleDouble::ONE)
        .into_iter()
        .map(|num| num.div(denom))
        .collect()
}

/// `offset + sum_i (-1)^{b_i} w_i` for every `b`.
fn signed_combinations(w: &[DoubleDouble], offset: DoubleDouble) -> Vec<DoubleDouble> {
    ParityLabel::all(w.len() as u32)
        .map(|b| {
            w.iter().enumerate().fold(offset, |acc, (i, wi)| {
                if b.bit(i as u32) {
                    acc.sub(*wi)
                } else {
                    acc.add(*wi)
                }
            })
        })
        .collect()
}

/// `2^(-width) sum_b chi_c(b) base_b^N` for every `c`, through a
/// double-double Walsh–Hadamard transform.
pub(crate) fn signed_sector_sums(bases: &[DoubleDouble], particles: u32) -> Vec<f64> {
    let mut v: Vec<DoubleDouble> = bases.iter().map(|t| t.powi(particles)).collect();
    let n = v.len();
    let mut h = 1;
    while h < n {
        for start in (0..n).step_by(2 * h) {
            for i in start..start + h {
                let (x, y) = (v[i], v[i + h]);
                v[i] = x.add(y);
                v[i + h] = x.sub(y);
            }
        }
        h *= 2;
    }
    let scale = 1.0 / n as f64;
    v.into_iter().map(|x| x.scale(scale).value()).collect()
}

/// Single entry of [`signed_sector_sums`].
fn signed_sector_sum(bases: &[DoubleDouble], particles: u32, c: u32) -> f64 {
    let acc = bases
        .iter()
        .enumerate()
        .fold(DoubleDouble::ZERO, |acc, (b, t)| {
            let p = t.powi(particles);
            if sign_of(c & b as u32) > 0 {
                acc.add(p)
            } else {
                acc.sub(p)
            }
        });
    acc.scale(1.0 / bases.len() as f64).value()
}

fn clamp_norm(v: f64) -> f64 {
    if v < 0.0 && v > -CANCELLATION_FLOOR {
        0.0
    } else {
        v.min(1.0)
    }
}

/// Sectors that no Fock state of `N` particles reaches: more odd levels
/// than particles, or an odd level where `z_i` is exactly zero.
fn unreachable(z: &CsLabel, particles: u32, c: u32) -> bool {
    c.count_ones() > particles || c & z.zero_mask(0.0) != 0
}

fn norms_signed(z: &CsLabel, particles: u32) -> Vec<f64> {
    signed_sector_sums(&flip_overlap_bases(z), particles)
        .into_iter()
        .enumerate()
        .map(|(c, v)| {
            if unreachable(z, particles, c as u32) {
                0.0
            } else {
                clamp_norm(v)
            }
        })
        .collect()
}

fn norms_fock_sum(z: &CsLabel, particles: u32) -> Vec<f64> {
    let width = (z.dim() - 1) as u32;
    let mut out = vec![0.0; ParityLabel::group_size(width)];
    let ln_fact = ln_factorial_table(particles);
    let ln_w: Vec<f64> = z
        .magnitudes()
        .iter()
        .map(|m| {
            if *m == 0.0 {
                f64::NEG_INFINITY
            } else {
                2.0 * math::ln(*m)
            }
        })
        .collect();
    let base = ln_fact[particles as usize] - particles as f64 * math::ln_1p(z.norm_sq());
    for_each_composition(z.dim(), particles, |n| {
        let mut ln_p = base - ln_fact[n[0] as usize];
        for (k, lw) in n[1..].iter().zip(&ln_w) {
            if *k > 0 {
                ln_p += *k as f64 * lw - ln_fact[*k as usize];
            }
        }
        if ln_p > f64::NEG_INFINITY {
            out[parity_bits(n) as usize] += math::exp(ln_p);
        }
    });
    out.iter_mut().for_each(|v| *v = v.min(1.0));
    out
}

fn resolve(algorithm: NormAlgorithm, dim: usize, particles: u32) -> NormAlgorithm {
    match algorithm {
        NormAlgorithm::Auto => match basis_size(dim, particles) {
            Some(size) if size <= FOCK_SUM_MAX_BASIS => NormAlgorithm::FockSum,
            _ => NormAlgorithm::Signed,
        },
        other => other,
    }
}

/// `N_c(z)^2` for every parity `c`, as a dense vector indexed by `c`.
pub fn cat_norms_sq(z: &CsLabel, particles: u32, algorithm: NormAlgorithm) -> Vec<f64> {
    match resolve(algorithm, z.dim(), particles) {
        NormAlgorithm::FockSum => norms_fock_sum(z, particles),
        _ => norms_signed(z, particles),
    }
}

/// Squared norm `N_c(z)^2` of the parity projection `Pi_c |z>`.
pub fn cat_norm_sq(p: &CatParams, algorithm: NormAlgorithm) -> f64 {
    match resolve(algorithm, p.dim(), p.particles) {
        NormAlgorithm::FockSum => norms_fock_sum(&p.z, p.particles)[p.parity.index()],
        _ => {
            let c = p.parity.bits();
            if unreachable(&p.z, p.particles, c) {
                return 0.0;
            }
            clamp_norm(signed_sector_sum(&flip_overlap_bases(&p.z), p.particles, c))
        }
    }
}

/// Fock amplitude of the normalized cat; zero outside its parity sector.
pub fn cat_fock_coefficient(p: &CatParams, n: &Composition) -> Result<C64> {
    let coef = cs_fock_coefficient(&p.z, n, p.particles)?;
    let norm_sq = cat_norm_sq(p, NormAlgorithm::Auto);
    if norm_sq < DEGENERATE_NORM_SQ {
        return Err(Error::DegenerateNorm { norm_sq });
    }
    if n.parity() != p.parity || coef.is_zero() {
        return Ok(C64::new(0.0, 0.0));
    }
    Ok(C64::from_polar(
        math::exp(coef.ln_abs - 0.5 * math::ln(norm_sq)),
        coef.arg,
    ))
}

fn check_width(c: ParityLabel, dim: usize) -> Result<()> {
    if dim == 0 || c.width() as usize != dim - 1 {
        return Err(Error::WidthMismatch {
            expected: dim.saturating_sub(1) as u32,
            found: c.width(),
        });
    }
    Ok(())
}

/// Fock state `|N - ||c||_0, c_1, ..., c_{D-1}>` reached by `|z>_c` as `z -> 0`.
pub fn fock_cat_at_origin(c: ParityLabel, particles: u32, dim: usize) -> Result<Composition> {
    check_width(c, dim)?;
    let odd = c.weight();
    if particles < odd {
        return Err(Error::TooFewParticles { particles, odd });
    }
    let mut counts = Vec::with_capacity(dim);
    counts.push(particles - odd);
    counts.extend((0..c.width()).map(|i| c.bit(i) as u32));
    Ok(Composition::new(counts))
}

/// Fock state reached by `|r e_axis>_c` as `r -> infinity`: level 0 keeps
/// `N_c = (N - ||c||_0) mod 2` particles, the rest pile onto `axis`.
pub fn fock_cat_at_axis_infinity(
    c: ParityLabel,
    particles: u32,
    axis: usize,
) -> Result<Composition> {
    let dim = c.width() as usize + 1;
    if axis == 0 || axis >= dim {
        return Err(Error::AxisOutOfRange { axis, max: dim - 1 });
    }
    let odd = c.weight();
    if particles < odd {
        return Err(Error::TooFewParticles { particles, odd });
    }
    let ground = (particles - odd) % 2;
    let mut counts = Vec::with_capacity(dim);
    counts.push(ground);
    counts.extend((0..c.width()).map(|i| c.bit(i) as u32));
    counts[axis] += particles - odd - ground;
    Ok(Composition::new(counts))
}

/// `e^{-|alpha|^2} cosh |alpha|^2` (even) or `e^{-|alpha|^2} sinh |alpha|^2` (odd).
pub fn ho_cat_norm_sq(p: HoCatParams) -> f64 {
    let x = p.alpha * p.alpha;
    if p.odd {
        -0.5 * math::exp_m1(-2.0 * x)
    } else {
        0.5 * (1.0 + math::exp(-2.0 * x))
    }
}

/// Closed-form limits of `N_c(z)^2`.
#[derive(Debug, Clone, Copy)]
pub enum NormLimit<'a> {
    /// `z -> 0`.
    Origin { parity: ParityLabel },
    /// `N -> infinity` at fixed `z`.
    Thermodynamic { z: &'a CsLabel, parity: ParityLabel },
    /// `N -> infinity` with `sqrt(N) z = alpha` fixed.
    Rescaled {
        alpha: &'a [f64],
        parity: ParityLabel,
    },
    /// `||z|| -> infinity` along a first-octant direction.
    DirectionalInfinity {
        direction: &'a SphericalDirection,
        parity: ParityLabel,
        particles: u32,
    },
}

pub fn cat_norm_limit(kind: NormLimit<'_>) -> Result<f64> {
    match kind {
        NormLimit::Origin { parity } => Ok(if parity.is_zero() { 1.0 } else { 0.0 }),
        NormLimit::Thermodynamic { z, parity } => {
            check_width(parity, z.dim())?;
            if parity.bits() & z.zero_mask(ZERO_MAGNITUDE) != 0 {
                return Ok(0.0);
            }
            let k = z.support_size(ZERO_MAGNITUDE) as i32;
            Ok(libm::exp2(-(k as f64)))
        }
        NormLimit::Rescaled { alpha, parity } => {
            if alpha.len() != parity.width() as usize {
                return Err(Error::WidthMismatch {
                    expected: alpha.len() as u32,
                    found: parity.width(),
                });
            }
            Ok(alpha
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    ho_cat_norm_sq(HoCatParams {
                        alpha: *a,
                        odd: parity.bit(i as u32),
                    })
                })
                .product())
        }
        NormLimit::DirectionalInfinity {
            direction,
            parity,
            particles,
        } => {
            check_width(parity, direction.dim())?;
            let y = direction_components(direction);
            let sums = signed_sector_sums(&sign_weighted_squares(&y), particles);
            Ok(clamp_norm(sums[parity.index()]))
        }
    }
}

/// `Y_b = sum_i (-1)^{b_i} y_i^2` for every `b`.
pub(crate) fn sign_weighted_squares(y: &[f64]) -> Vec<DoubleDouble> {
    let sq: Vec<DoubleDouble> = y.iter().map(|v| DoubleDouble::product(*v, *v)).collect();
    signed_combinations(&sq, DoubleDouble::ZERO)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::parity_flip;
    use alloc::vec;
    use proptest::prelude::*;

    fn params(mags: &[f64], bits: &str, n: u32) -> CatParams {
        CatParams::new(
            CsLabel::real(mags.to_vec()).unwrap(),
            ParityLabel::from_bitstring(bits).unwrap(),
            n,
        )
        .unwrap()
    }

    #[test]
    fn origin_norms() {
        for alg in [NormAlgorithm::Signed, NormAlgorithm::FockSum] {
            assert_eq!(cat_norm_sq(&params(&[0.0, 0.0], "00", 5), alg), 1.0);
            assert_eq!(cat_norm_sq(&params(&[0.0, 0.0], "01", 5), alg), 0.0);
            assert_eq!(cat_norm_sq(&params(&[0.0, 0.0], "11", 5), alg), 0.0);
        }
    }

    #[test]
    fn unit_modulus_two_level() {
        for n in 1..=15 {
            for bits in ["0", "1"] {
                for alg in [NormAlgorithm::Signed, NormAlgorithm::FockSum] {
                    let v = cat_norm_sq(&params(&[1.0], bits, n), alg);
                    assert!((v - 0.5).abs() < 1e-14, "N={n} c={bits}: {v}");
                }
            }
        }
    }

    #[test]
    fn half_modulus_two_particles() {
        // ((5/4)^2 + (3/4)^2) / (2 (5/4)^2) = 17/25
        for alg in [NormAlgorithm::Signed, NormAlgorithm::FockSum] {
            let v = cat_norm_sq(&params(&[0.5], "0", 2), alg);
            assert!((v - 17.0 / 25.0).abs() < 1e-15);
        }
    }

    #[test]
    fn wrong_sector_coefficients_vanish() {
        let p = params(&[0.8, 1.3], "10", 5);
        for_each_composition(3, 5, |c| {
            let n = Composition::new(c.to_vec());
            let v = cat_fock_coefficient(&p, &n).unwrap();
            if n.parity() != p.parity() {
                assert_eq!(v, C64::new(0.0, 0.0));
            } else {
                assert!(v.norm() > 0.0);
            }
        });
    }

    #[test]
    fn even_two_particle_cat() {
        let p = params(&[1.0], "0", 2);
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let want = [h, 0.0, h];
        for (n, w) in enumerate(2, 2).iter().zip(want) {
            let v = cat_fock_coefficient(&p, n).unwrap();
            assert!((v - C64::new(w, 0.0)).norm() < 1e-15);
        }
    }

    fn enumerate(dim: usize, n: u32) -> Vec<Composition> {
        crate::combinatorics::enumerate_compositions(dim, n).unwrap()
    }

    #[test]
    fn coefficients_approach_fock_cat_near_origin() {
        let p = params(&[1e-7, 1e-7], "11", 6);
        let target = fock_cat_at_origin(p.parity(), 6, 3).unwrap();
        let v = cat_fock_coefficient(&p, &target).unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_cat_is_reported() {
        let p = params(&[0.0, 0.0], "01", 4);
        let n = Composition::new(vec![3, 0, 1]);
        assert!(matches!(
            cat_fock_coefficient(&p, &n),
            Err(Error::DegenerateNorm { .. })
        ));
    }

    #[test]
    fn fock_cats_at_origin() {
        let c = ParityLabel::zero(3);
        assert_eq!(fock_cat_at_origin(c, 7, 4).unwrap().counts(), &[7, 0, 0, 0]);
        let c = ParityLabel::from_bitstring("11").unwrap();
        assert_eq!(fock_cat_at_origin(c, 6, 3).unwrap().counts(), &[4, 1, 1]);
        let c = ParityLabel::from_bitstring("101").unwrap();
        assert_eq!(fock_cat_at_origin(c, 5, 4).unwrap().counts(), &[3, 1, 0, 1]);
        assert!(matches!(
            fock_cat_at_origin(c, 1, 4),
            Err(Error::TooFewParticles { .. })
        ));
        assert!(fock_cat_at_origin(c, 5, 3).is_err());
    }

    #[test]
    fn fock_cats_at_axis_infinity() {
        let c = ParityLabel::zero(1);
        assert_eq!(
            fock_cat_at_axis_infinity(c, 8, 1).unwrap().counts(),
            &[0, 8]
        );
        let c = ParityLabel::zero(2);
        assert_eq!(
            fock_cat_at_axis_infinity(c, 6, 1).unwrap().counts(),
            &[0, 6, 0]
        );
        let c = ParityLabel::from_bitstring("11").unwrap();
        assert_eq!(
            fock_cat_at_axis_infinity(c, 6, 2).unwrap().counts(),
            &[0, 1, 5]
        );
        assert!(matches!(
            fock_cat_at_axis_infinity(c, 6, 3),
            Err(Error::AxisOutOfRange { .. })
        ));
        assert!(fock_cat_at_axis_infinity(c, 6, 0).is_err());
        // odd N, even cat: one particle stays behind in level 0
        let c = ParityLabel::zero(1);
        assert_eq!(
            fock_cat_at_axis_infinity(c, 7, 1).unwrap().counts(),
            &[1, 6]
        );
    }

    #[test]
    fn axis_infinity_matches_large_z_coefficients() {
        let c = ParityLabel::from_bitstring("10").unwrap();
        let target = fock_cat_at_axis_infinity(c, 7, 1).unwrap();
        let p = CatParams::new(CsLabel::real(vec![1e5, 0.0]).unwrap(), c, 7).unwrap();
        let v = cat_fock_coefficient(&p, &target).unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn ho_norms() {
        assert_eq!(
            ho_cat_norm_sq(HoCatParams {
                alpha: 0.0,
                odd: false
            }),
            1.0
        );
        assert_eq!(
            ho_cat_norm_sq(HoCatParams {
                alpha: 0.0,
                odd: true
            }),
            0.0
        );
        for odd in [false, true] {
            let v = ho_cat_norm_sq(HoCatParams { alpha: 40.0, odd });
            assert!((v - 0.5).abs() < 1e-15);
        }
        let a: f64 = 0.9;
        let x = a * a;
        let want = libm::exp(-x) * libm::sinh(x);
        assert!(
            (ho_cat_norm_sq(HoCatParams {
                alpha: a,
                odd: true
            }) - want)
                .abs()
                < 1e-15
        );
    }

    #[test]
    fn norm_limits() {
        let z = CsLabel::real(vec![0.5, 0.0]).unwrap();
        let c00 = ParityLabel::from_bitstring("00").unwrap();
        let c01 = ParityLabel::from_bitstring("01").unwrap();
        let th = |parity| cat_norm_limit(NormLimit::Thermodynamic { z: &z, parity }).unwrap();
        assert_eq!(th(c00), 0.5);
        assert_eq!(th(c01), 0.0);
        assert_eq!(
            cat_norm_limit(NormLimit::Origin { parity: c00 }).unwrap(),
            1.0
        );
        assert_eq!(
            cat_norm_limit(NormLimit::Origin { parity: c01 }).unwrap(),
            0.0
        );

        let alpha = [0.7, 1.9];
        let c = ParityLabel::from_bitstring("10").unwrap();
        let v = cat_norm_limit(NormLimit::Rescaled {
            alpha: &alpha,
            parity: c,
        })
        .unwrap();
        let want = ho_cat_norm_sq(HoCatParams {
            alpha: 0.7,
            odd: true,
        }) * ho_cat_norm_sq(HoCatParams {
            alpha: 1.9,
            odd: false,
        });
        assert_eq!(v, want);
    }

    #[test]
    fn rescaled_limit_is_approached() {
        let alpha = [0.8, 1.1];
        let n = 4000u32;
        let s = libm::sqrt(n as f64);
        let z = CsLabel::real(alpha.iter().map(|a| a / s).collect()).unwrap();
        for c in ParityLabel::all(2) {
            let finite = cat_norm_sq(
                &CatParams::new(z.clone(), c, n).unwrap(),
                NormAlgorithm::Signed,
            );
            let limit = cat_norm_limit(NormLimit::Rescaled {
                alpha: &alpha,
                parity: c,
            })
            .unwrap();
            assert!((finite - limit).abs() < 1e-3, "{c}: {finite} vs {limit}");
        }
    }

    #[test]
    fn directional_limit_d2() {
        // lim N_c^2 = delta_{(N - c) mod 2, 0}
        let dir = SphericalDirection::new(2, vec![]).unwrap();
        for n in 1..8u32 {
            for c in ParityLabel::all(1) {
                let v = cat_norm_limit(NormLimit::DirectionalInfinity {
                    direction: &dir,
                    parity: c,
                    particles: n,
                })
                .unwrap();
                let want = if (n + c.bits()) % 2 == 0 { 1.0 } else { 0.0 };
                assert_eq!(v, want);
            }
        }
    }

    #[test]
    fn directional_limit_matches_large_radius() {
        let dir = SphericalDirection::new(4, vec![0.4, 1.1]).unwrap();
        let y = direction_components(&dir);
        let r = 1e4;
        let z = CsLabel::real(y.iter().map(|v| v * r).collect()).unwrap();
        for c in ParityLabel::all(3) {
            let finite = cat_norm_sq(
                &CatParams::new(z.clone(), c, 6).unwrap(),
                NormAlgorithm::FockSum,
            );
            let limit = cat_norm_limit(NormLimit::DirectionalInfinity {
                direction: &dir,
                parity: c,
                particles: 6,
            })
            .unwrap();
            assert!((finite - limit).abs() < 1e-6, "{c}");
        }
    }

    #[test]
    fn auto_threshold() {
        assert_eq!(resolve(NormAlgorithm::Auto, 3, 10), NormAlgorithm::FockSum);
        assert_eq!(resolve(NormAlgorithm::Auto, 3, 2000), NormAlgorithm::Signed);
        assert_eq!(resolve(NormAlgorithm::Signed, 3, 10), NormAlgorithm::Signed);
    }

    fn label(dim: usize) -> impl Strategy<Value = CsLabel> {
        (
            proptest::collection::vec(0.0f64..3.0, dim - 1),
            proptest::collection::vec(0.0f64..core::f64::consts::TAU, dim - 1),
        )
            .prop_map(|(m, p)| CsLabel::new(m, p).unwrap())
    }

    proptest! {
        #[test]
        fn algorithms_agree((z, n) in (2usize..=4).prop_flat_map(|d| (label(d), 1u32..=10))) {
            let signed = cat_norms_sq(&z, n, NormAlgorithm::Signed);
            let fock = cat_norms_sq(&z, n, NormAlgorithm::FockSum);
            for (s, f) in signed.iter().zip(&fock) {
                prop_assert!((s - f).abs() <= 1e-10 * f, "{} vs {}", s, f);
            }
            let total: f64 = fock.iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
            let total: f64 = signed.iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
        }

        #[test]
        fn norm_ignores_phases((z, n, b) in (2usize..=4).prop_flat_map(|d| (label(d), 1u32..=10, 0u32..(1 << (d - 1))))) {
            let width = (z.dim() - 1) as u32;
            let rotated = CsLabel::new(z.magnitudes().to_vec(), vec![0.3; width as usize]).unwrap();
            let flipped = parity_flip(&z, ParityLabel::new(b, width).unwrap()).unwrap();
            for alg in [NormAlgorithm::Signed, NormAlgorithm::FockSum] {
                let a = cat_norms_sq(&z, n, alg);
                let r = cat_norms_sq(&rotated, n, alg);
                let f = cat_norms_sq(&flipped, n, alg);
                for i in 0..a.len() {
                    prop_assert!((a[i] - r[i]).abs() < 1e-14);
                    prop_assert!((a[i] - f[i]).abs() < 1e-14);
                }
            }
        }

        #[test]
        fn thermodynamic_convergence(z in (2usize..=3).prop_flat_map(|d| proptest::collection::vec(0.3f64..3.0, d - 1))) {
            let z = CsLabel::real(z).unwrap();
            let width = (z.dim() - 1) as u32;
            let finite = cat_norms_sq(&z, 2000, NormAlgorithm::Auto);
            for c in ParityLabel::all(width) {
                let limit = cat_norm_limit(NormLimit::Thermodynamic { z: &z, parity: c }).unwrap();
                prop_assert!((finite[c.index()] - limit).abs() < 1e-9);
            }
        }
    }
}
