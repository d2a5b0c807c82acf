//! Brute-force check of the closed-form spectrum.
//!
//! The cat is written out in the `N`-particle Fock basis, split into
//! `(N-M)`- and `M`-particle Fock states with the second-quantized splitting
//! identity
//!
//! ```text
//! |n> = sum_{m <= n, |m| = M} sqrt(prod_i C(n_i, m_i) / C(N, M)) |n - m> |m>
//! ```
//!
//! and the resulting reduced density matrix is diagonalized by cyclic Jacobi
//! rotations. Nothing here uses the cat norms or the Schmidt formula; the
//! amplitudes come straight from the coherent-state Fock coefficients and
//! are normalized by their own sum.

use alloc::vec;
use alloc::vec::Vec;

use crate::cats::{fock_cat_at_origin, CatParams};
use crate::combinatorics::{basis_size, composition_index, for_each_composition, ln_factorial};
use crate::limits::regularized_spectrum;
use crate::math;
use crate::states::{cs_fock_coefficient, CsLabel, ZERO_MAGNITUDE};
use crate::{Composition, Error, Result, C64};

/// Largest Fock basis the oracle will write out.
pub const MAX_BASIS: usize = 2_000_000;

/// Largest reduced density matrix the eigensolver accepts.
pub const MAX_MATRIX_DIM: usize = 5000;

/// Jacobi sweeps before giving up.
pub const MAX_SWEEPS: usize = 100;

/// Closed form and oracle must agree to this for a check to pass.
pub const PASS_TOLERANCE: f64 = 1e-9;

const CONVERGENCE_TOL: f64 = 1e-13;

/// A symmetric `N`-particle state in the Fock basis, in
/// [`crate::combinatorics::enumerate_compositions`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSymState {
    dim: usize,
    particles: u32,
    amplitudes: Vec<C64>,
}

impl DenseSymState {
    pub fn new(dim: usize, particles: u32, amplitudes: Vec<C64>) -> Result<Self> {
        let size = checked_basis(dim, particles)?;
        if amplitudes.len() != size {
            return Err(Error::LengthMismatch {
                expected: size,
                found: amplitudes.len(),
            });
        }
        Ok(Self {
            dim,
            particles,
            amplitudes,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn particles(&self) -> u32 {
        self.particles
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        math::sqrt(self.amplitudes.iter().map(|a| a.norm_sqr()).sum())
    }
}

fn checked_basis(dim: usize, particles: u32) -> Result<usize> {
    if dim == 0 {
        return Err(Error::InvalidArgument("D must be at least 1"));
    }
    match basis_size(dim, particles) {
        Some(size) if size <= MAX_BASIS => Ok(size),
        size => Err(Error::BasisTooLarge {
            size: size.unwrap_or(usize::MAX),
            cap: MAX_BASIS,
        }),
    }
}

fn fill_coherent(
    z: &CsLabel,
    particles: u32,
    mut keep: impl FnMut(&[u32]) -> bool,
) -> Result<Vec<C64>> {
    let mut out = Vec::with_capacity(checked_basis(z.dim(), particles)?);
    let mut failure = None;
    for_each_composition(z.dim(), particles, |n| {
        if !keep(n) {
            out.push(C64::new(0.0, 0.0));
            return;
        }
        match cs_fock_coefficient(z, &Composition::new(n.to_vec()), particles) {
            Ok(c) => out.push(c.to_complex()),
            Err(e) => {
                failure.get_or_insert(e);
                out.push(C64::new(0.0, 0.0));
            }
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// The coherent state `|z>` of `N` particles.
pub fn build_coherent_state(z: &CsLabel, particles: u32) -> Result<DenseSymState> {
    let amplitudes = fill_coherent(z, particles, |_| true)?;
    DenseSymState::new(z.dim(), particles, amplitudes)
}

/// The normalized cat `|z>_c`, obtained by zeroing the coherent-state
/// amplitudes outside the parity sector and renormalizing.
///
/// At `z = 0` with odd `c` the projection vanishes and the cat is its
/// Fock-state limit, returned as a unit vector.
pub fn build_cat_state(p: &CatParams) -> Result<DenseSymState> {
    let (z, c, particles) = (p.z(), p.parity(), p.particles());
    let mut amplitudes = fill_coherent(z, particles, |n| {
        n[1..]
            .iter()
            .enumerate()
            .all(|(i, k)| (k & 1 == 1) == c.bit(i as u32))
    })?;
    let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    if norm_sq < crate::cats::DEGENERATE_NORM_SQ {
        if z.support_size(ZERO_MAGNITUDE) != 0 {
            return Err(Error::DegenerateNorm { norm_sq });
        }
        let target = fock_cat_at_origin(c, particles, z.dim())?;
        amplitudes.iter_mut().for_each(|a| *a = C64::new(0.0, 0.0));
        amplitudes[target.index()] = C64::new(1.0, 0.0);
    } else {
        let scale = 1.0 / math::sqrt(norm_sq);
        amplitudes.iter_mut().for_each(|a| *a *= scale);
    }
    DenseSymState::new(z.dim(), particles, amplitudes)
}

/// Coefficient matrix of a state in the product basis: rows are
/// `(N-M)`-particle compositions, columns `M`-particle ones, both in
/// enumeration order.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl BipartiteMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.cols + col]
    }

    pub fn frobenius_norm(&self) -> f64 {
        math::sqrt(self.data.iter().map(|a| a.norm_sqr()).sum())
    }
}

/// Splits `s` into `N-M` and `M` particles.
pub fn bipartite_expand(s: &DenseSymState, kept: u32) -> Result<BipartiteMatrix> {
    let n = s.particles;
    if kept == 0 || kept >= n {
        return Err(Error::PartitionOutOfRange { particles: n, kept });
    }
    let rows = checked_basis(s.dim, n - kept)?;
    let cols = checked_basis(s.dim, kept)?;
    let ln_fact: Vec<f64> = (0..=n).map(ln_factorial).collect();
    let ln_choose =
        |a: u32, b: u32| ln_fact[a as usize] - ln_fact[b as usize] - ln_fact[(a - b) as usize];
    let ln_total = ln_choose(n, kept);

    let mut col_basis = Vec::with_capacity(cols);
    for_each_composition(s.dim, kept, |m| col_basis.push(m.to_vec()));
    let mut data = vec![C64::new(0.0, 0.0); rows * cols];
    let mut whole = vec![0u32; s.dim];
    let mut row = 0;
    for_each_composition(s.dim, n - kept, |r| {
        for (col, m) in col_basis.iter().enumerate() {
            for i in 0..s.dim {
                whole[i] = r[i] + m[i];
            }
            let amp = s.amplitudes[composition_index(&whole)];
            if amp.re == 0.0 && amp.im == 0.0 {
                continue;
            }
            let ln_c: f64 = whole.iter().zip(m).map(|(a, b)| ln_choose(*a, *b)).sum();
            data[row * cols + col] = amp * math::exp(0.5 * (ln_c - ln_total));
        }
        row += 1;
    });
    Ok(BipartiteMatrix { rows, cols, data })
}

/// Hermitian matrix over the `M`-particle Fock basis, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl DensityMatrix {
    pub fn new(dim: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::LengthMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    /// `max |rho_jk - conj(rho_kj)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..self.dim {
            for k in 0..=j {
                worst = worst.max((self.get(j, k) - self.get(k, j).conj()).norm());
            }
        }
        worst
    }
}

/// `rho_{jk} = sum_i A_{ij} conj(A_{ik})`: the partial trace over the
/// `N-M` particles. This is the complex conjugate of `A^dag A`, with the
/// same spectrum.
pub fn reduced_density_matrix(a: &BipartiteMatrix) -> DensityMatrix {
    let d = a.cols;
    let mut data = vec![C64::new(0.0, 0.0); d * d];
    for i in 0..a.rows {
        let row = &a.data[i * d..(i + 1) * d];
        for (j, aj) in row.iter().enumerate() {
            if aj.re == 0.0 && aj.im == 0.0 {
                continue;
            }
            for (k, ak) in row.iter().enumerate() {
                data[j * d + k] += aj * ak.conj();
            }
        }
    }
    DensityMatrix { dim: d, data }
}

/// Eigen-decomposition of a dense real symmetric matrix (row-major) by
/// cyclic Jacobi rotations. Returns the eigenvalues (unsorted) and the
/// eigenvectors as columns of a row-major matrix.
fn jacobi_symmetric(mut a: Vec<f64>, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = math::sqrt(a.iter().map(|x| x * x).sum::<f64>());
    let off_norm = |a: &[f64]| {
        let mut s = 0.0;
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    s += a[p * n + q] * a[p * n + q];
                }
            }
        }
        math::sqrt(s)
    };
    let mut sweeps = 0;
    loop {
        let off = off_norm(&a);
        if off <= CONVERGENCE_TOL * scale {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + math::sqrt(theta * theta + 1.0));
                let c = 1.0 / math::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    Ok(((0..n).map(|i| a[i * n + i]).collect(), v))
}

/// `[[Re rho, -Im rho], [Im rho, Re rho]]`, whose spectrum is that of
/// `rho` with every eigenvalue doubled.
fn real_embedding(rho: &DensityMatrix) -> Vec<f64> {
    let d = rho.dim;
    let n = 2 * d;
    let mut out = vec![0.0; n * n];
    for j in 0..d {
        for k in 0..d {
            let x = rho.get(j, k);
            out[j * n + k] = x.re;
            out[(j + d) * n + k + d] = x.re;
            out[j * n + k + d] = -x.im;
            out[(j + d) * n + k] = x.im;
        }
    }
    out
}

/// Eigenvalues of a Hermitian matrix, descending.
pub fn hermitian_eigenvalues(rho: &DensityMatrix) -> Result<Vec<f64>> {
    if rho.dim > MAX_MATRIX_DIM {
        return Err(Error::BasisTooLarge {
            size: rho.dim,
            cap: MAX_MATRIX_DIM,
        });
    }
    let (mut values, _) = jacobi_symmetric(real_embedding(rho), 2 * rho.dim)?;
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values.into_iter().step_by(2).collect())
}

/// Outcome of one oracle comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    /// Closed-form eigenvalues, descending, zero-padded.
    pub closed_form: Vec<f64>,
    /// Eigenvalues of the brute-force reduced density matrix, descending.
    pub oracle: Vec<f64>,
    pub max_deviation: f64,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.max_deviation <= PASS_TOLERANCE
    }
}

/// Compares the closed-form spectrum of `p` split at `M` with the oracle.
pub fn verify_spectrum(p: &CatParams, kept: u32) -> Result<OracleReport> {
    let closed = regularized_spectrum(p.z(), p.parity(), p.particles(), kept)?;
    let state = build_cat_state(p)?;
    let rho = reduced_density_matrix(&bipartite_expand(&state, kept)?);
    let mut oracle = hermitian_eigenvalues(&rho)?;
    let len = oracle.len().max(closed.lambdas().len());
    oracle.resize(len, 0.0);
    let closed_form = closed.sorted_padded(len);
    let max_deviation = closed_form
        .iter()
        .zip(&oracle)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(OracleReport {
        closed_form,
        oracle,
        max_deviation,
    })
}
