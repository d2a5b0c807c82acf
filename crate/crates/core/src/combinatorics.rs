//! Fock-basis combinatorics and the parity group `Z_2^(D-1)`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::math;
use crate::{Error, Result};

/// Occupation numbers `(n_0, ..., n_{D-1})` of a symmetric Fock state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    counts: Vec<u32>,
    total: u32,
}

impl Composition {
    /// Panics if `counts` is empty or its sum overflows `u32`.
    pub fn new(counts: Vec<u32>) -> Self {
        assert!(!counts.is_empty(), "a composition needs at least one level");
        let total = counts
            .iter()
            .try_fold(0u32, |acc, &n| acc.checked_add(n))
            .expect("composition total overflows u32");
        Self { counts, total }
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn total(&self) -> u32 {
        self.total
    }

    /// Number of levels `D`.
    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    /// Parity `(n_1 mod 2, ..., n_{D-1} mod 2)` of the excited levels.
    pub fn parity(&self) -> ParityLabel {
        ParityLabel {
            bits: parity_bits(&self.counts),
            width: (self.counts.len() - 1) as u32,
        }
    }

    /// Position of this composition in [`enumerate_compositions`] order.
    pub fn index(&self) -> usize {
        composition_index(&self.counts)
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, n) in self.counts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}")?;
        }
        f.write_str(")")
    }
}

pub(crate) fn parity_bits(counts: &[u32]) -> u32 {
    counts[1..]
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &n)| acc | ((n & 1) << i))
}

/// Exact binomial coefficient, `None` on `u64` overflow.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul((n - i) as u128)? / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Dimension `binom(N + D - 1, D - 1)` of the symmetric representation.
pub fn basis_size(dim: usize, total: u32) -> Option<usize> {
    if dim == 0 {
        return None;
    }
    let b = binomial(total as u64 + dim as u64 - 1, dim as u64 - 1)?;
    usize::try_from(b).ok()
}

/// Number of compositions of `s` into `k` parts, saturating.
fn count_compositions(k: usize, s: u64) -> usize {
    if k == 0 {
        return usize::from(s == 0);
    }
    binomial(s + k as u64 - 1, k as u64 - 1)
        .and_then(|b| usize::try_from(b).ok())
        .unwrap_or(usize::MAX)
}

pub(crate) fn composition_index(counts: &[u32]) -> usize {
    let dim = counts.len();
    let mut remaining: u64 = counts.iter().map(|&n| n as u64).sum();
    let mut index = 0usize;
    for (i, &n) in counts.iter().enumerate().take(dim.saturating_sub(1)) {
        let n = n as u64;
        if n < remaining {
            // compositions that put more than n particles in level i
            let k = dim - i - 1;
            index += count_compositions(k + 1, remaining - n - 1);
        }
        remaining -= n;
    }
    index
}

/// Steps `counts` to the next composition in lexicographically decreasing
/// order; returns `false` after the last one, `(0, ..., 0, N)`.
pub(crate) fn next_composition(counts: &mut [u32]) -> bool {
    let last = counts.len() - 1;
    let Some(i) = (0..last).rev().find(|&i| counts[i] > 0) else {
        return false;
    };
    counts[i] -= 1;
    let tail: u32 = counts[i + 1..].iter().sum();
    counts[i + 1] = tail + 1;
    for c in &mut counts[i + 2..] {
        *c = 0;
    }
    true
}

/// Calls `f` on every composition of `total` into `dim` parts, in
/// [`enumerate_compositions`] order, without allocating per item.
pub fn for_each_composition<F: FnMut(&[u32])>(dim: usize, total: u32, mut f: F) {
    assert!(dim >= 1, "D must be at least 1");
    let mut counts = vec![0u32; dim];
    counts[0] = total;
    loop {
        f(&counts);
        if !next_composition(&mut counts) {
            break;
        }
    }
}

/// All `binom(N + D - 1, D - 1)` compositions of `total` into `dim` levels,
/// lexicographically decreasing (`(N,0,..,0)` first, `(0,..,0,N)` last).
pub fn enumerate_compositions(dim: usize, total: u32) -> Result<Vec<Composition>> {
    if dim == 0 {
        return Err(Error::InvalidArgument("D must be at least 1"));
    }
    let size = basis_size(dim, total).ok_or(Error::Overflow {
        what: "number of compositions",
    })?;
    let mut out = Vec::new();
    out.try_reserve_exact(size).map_err(|_| Error::Overflow {
        what: "number of compositions",
    })?;
    for_each_composition(dim, total, |c| {
        out.push(Composition {
            counts: c.to_vec(),
            total,
        })
    });
    Ok(out)
}

/// `ln n!`.
pub fn ln_factorial(n: u32) -> f64 {
    math::ln_gamma(n as f64 + 1.0)
}

/// Table of `ln k!` for `k = 0..=n`.
pub(crate) fn ln_factorial_table(n: u32) -> Vec<f64> {
    (0..=n).map(ln_factorial).collect()
}

/// `ln(total! / prod n_i!)`.
pub fn log_multinomial(n: &Composition) -> f64 {
    n.counts
        .iter()
        .fold(ln_factorial(n.total), |acc, &k| acc - ln_factorial(k))
}

/// Element of `Z_2^width` (or of its dual), `b_1` in the least significant
/// bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParityLabel {
    bits: u32,
    width: u32,
}

/// Widest parity group supported; spectra have `2^width` entries.
pub const MAX_PARITY_WIDTH: u32 = 24;

impl ParityLabel {
    pub fn new(bits: u32, width: u32) -> Result<Self> {
        if width > MAX_PARITY_WIDTH {
            return Err(Error::InvalidArgument("parity width exceeds 24"));
        }
        if bits >> width != 0 {
            return Err(Error::InvalidArgument("parity bits exceed width"));
        }
        Ok(Self { bits, width })
    }

    pub fn zero(width: u32) -> Self {
        assert!(width <= MAX_PARITY_WIDTH);
        Self { bits: 0, width }
    }

    /// All ones, `[1, ..., 1]`.
    pub fn ones(width: u32) -> Self {
        assert!(width <= MAX_PARITY_WIDTH);
        Self {
            bits: (1u32 << width) - 1,
            width,
        }
    }

    /// Parses `"b_1 b_2 ... b_{D-1}"` written without separators, e.g.
    /// `"10"` is `b_1 = 1, b_2 = 0`. The empty string is the `D = 1` label.
    pub fn from_bitstring(s: &str) -> Result<Self> {
        let width = s.chars().count() as u32;
        let mut bits = 0u32;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1 << i,
                _ => return Err(Error::InvalidArgument("parity must be a string of 0/1")),
            }
        }
        Self::new(bits, width)
    }

    pub fn to_bitstring(&self) -> String {
        (0..self.width)
            .map(|i| if self.bit(i) { '1' } else { '0' })
            .collect()
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// Index into dense spectra.
    pub fn index(&self) -> usize {
        self.bits as usize
    }

    /// Component `b_{i+1}`.
    pub fn bit(&self, i: u32) -> bool {
        (self.bits >> i) & 1 == 1
    }

    /// Hamming weight `||b||_0`.
    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    /// Group operation; every element is its own inverse, so this is also
    /// `self - other`.
    pub fn xor(&self, other: ParityLabel) -> ParityLabel {
        debug_assert_eq!(self.width, other.width);
        ParityLabel {
            bits: self.bits ^ other.bits,
            width: self.width,
        }
    }

    /// Iterates over the whole group in index order.
    pub fn all(width: u32) -> impl Iterator<Item = ParityLabel> {
        assert!(width <= MAX_PARITY_WIDTH);
        (0..1u32 << width).map(move |bits| ParityLabel { bits, width })
    }

    /// Group size `2^width`.
    pub fn group_size(width: u32) -> usize {
        1usize << width
    }
}

impl fmt::Display for ParityLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.width {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        f.write_str("]")
    }
}

/// Group character `chi_c(b) = (-1)^(c . b)`.
pub fn character(c: ParityLabel, b: ParityLabel) -> Result<i32> {
    if c.width != b.width {
        return Err(Error::WidthMismatch {
            expected: c.width,
            found: b.width,
        });
    }
    Ok(sign_of(c.bits & b.bits))
}

#[inline]
pub(crate) fn sign_of(bits: u32) -> i32 {
    if bits.count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Unnormalized in-place fast Walsh–Hadamard butterfly. Applying it twice
/// multiplies by `len`.
pub fn fwht_in_place(v: &mut [f64]) {
    let n = v.len();
    assert!(n.is_power_of_two(), "FWHT length must be a power of two");
    let mut h = 1;
    while h < n {
        for block in v.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// Fourier transform on `Z_2^width`:
/// `out[c] = 2^(-width) * sum_b (-1)^(c.b) v[b]`.
///
/// For `width = D - 1` this is the projection onto parity sectors. The
/// unnormalized butterfly [`fwht_in_place`] inverts it.
pub fn walsh_hadamard(v: &[f64], width: u32) -> Result<Vec<f64>> {
    if width > MAX_PARITY_WIDTH {
        return Err(Error::InvalidArgument("parity width exceeds 24"));
    }
    let len = 1usize << width;
    if v.len() != len {
        return Err(Error::LengthMismatch {
            expected: len,
            found: v.len(),
        });
    }
    let mut out = v.to_vec();
    fwht_in_place(&mut out);
    let scale = 1.0 / len as f64;
    out.iter_mut().for_each(|x| *x *= scale);
    Ok(out)
}
