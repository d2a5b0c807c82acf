//! `oracle-check`: closed-form spectra against brute-force diagonalization.

use std::f64::consts::TAU;

use dcat_core::oracle::{verify_spectrum, MAX_MATRIX_DIM, PASS_TOLERANCE};
use dcat_core::rng::CounterRng;
use dcat_core::schmidt::symmetric_dim;
use dcat_core::{CatParams, CsLabel, ParityLabel};
use rayon::prelude::*;

use crate::cli::OracleArgs;
use crate::error::CliError;
use crate::records::{Cell, Table};
use crate::sweep::Setup;

/// Amount added to the largest closed-form eigenvalue by `--corrupt`.
const CORRUPTION: f64 = 1e-6;

/// One oracle comparison.
#[derive(Debug, Clone)]
pub struct Case {
    pub cat: CatParams,
    pub kept: u32,
}

/// Random case `index` of the default suite: `D` in {2, 3, 4}, `2 <= N <= 8`,
/// `1 <= M < N`, any parity the particles can carry, `|z_i|` uniform in
/// `[0, 3]` (exactly zero, on even components, one time in four) and
/// uniform phases.
pub fn random_case(seed: u64, index: u64) -> Result<Case, CliError> {
    let mut rng = CounterRng::new(seed, index);
    let dim = 2 + (rng.uniform() * 3.0) as usize;
    let particles = 2 + (rng.uniform() * 7.0) as u32;
    let kept = 1 + (rng.uniform() * (particles - 1) as f64) as u32;
    let width = (dim - 1) as u32;
    let parity = loop {
        let bits = (rng.next_u64() as u32) & ((1 << width) - 1);
        let p = ParityLabel::new(bits, width)?;
        if p.weight() <= particles {
            break p;
        }
    };
    let mags = (0..width)
        .map(|i| {
            let zero = rng.uniform() < 0.25 && !parity.bit(i);
            let m = 3.0 * rng.uniform();
            if zero {
                0.0
            } else {
                m
            }
        })
        .collect();
    let phases = (0..width).map(|_| TAU * rng.uniform()).collect();
    Ok(Case {
        cat: CatParams::new(CsLabel::new(mags, phases)?, parity, particles)?,
        kept,
    })
}

fn cases(a: &OracleArgs) -> Result<Vec<Case>, CliError> {
    match &a.z {
        Some(z) => {
            let setup = Setup::from_args(&a.common)?;
            if z.len() != setup.dim - 1 {
                return Err(CliError::usage(format!(
                    "--z needs {} components",
                    setup.dim - 1
                )));
            }
            let cat = CatParams::new(CsLabel::real(z.clone())?, setup.parity, setup.particles)?;
            Ok(vec![Case {
                cat,
                kept: setup.kept,
            }])
        }
        None => {
            let seed = a.common.seed.unwrap_or(0);
            (0..a.cases as u64).map(|i| random_case(seed, i)).collect()
        }
    }
}

fn join(v: &[f64]) -> String {
    v.iter()
        .map(|x| format!("{x:?}"))
        .collect::<Vec<_>>()
        .join(";")
}

/// Runs every case and returns the report with the number of failures.
pub fn run_oracle_check(a: &OracleArgs) -> Result<(Table, usize), CliError> {
    let cases = cases(a)?;
    for c in &cases {
        let rows = symmetric_dim(c.cat.dim(), c.kept).unwrap_or(u64::MAX);
        if rows > MAX_MATRIX_DIM as u64 {
            return Err(CliError::Cap(format!(
                "reduced density matrix of {rows} rows exceeds {MAX_MATRIX_DIM}"
            )));
        }
    }
    let header = [
        "case",
        "dim",
        "particles",
        "traced",
        "c",
        "z",
        "phases",
        "max_deviation",
        "passed",
    ]
    .map(String::from)
    .to_vec();
    let results: Vec<Result<f64, CliError>> = cases
        .par_iter()
        .map(|c| {
            let mut r = verify_spectrum(&c.cat, c.kept)?;
            if a.corrupt {
                r.closed_form[0] += CORRUPTION;
            }
            Ok(r.closed_form
                .iter()
                .zip(&r.oracle)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max))
        })
        .collect();
    let mut table = Table::new(header);
    let mut failures = 0;
    for (i, (c, dev)) in cases.iter().zip(results).enumerate() {
        let dev = dev?;
        let passed = dev <= PASS_TOLERANCE;
        failures += usize::from(!passed);
        table.rows.push(vec![
            Cell::Int(i as u64),
            Cell::Int(c.cat.dim() as u64),
            Cell::Int(c.cat.particles() as u64),
            Cell::Int(c.kept as u64),
            Cell::Text(c.cat.parity().to_bitstring()),
            Cell::Text(join(c.cat.z().magnitudes())),
            Cell::Text(join(c.cat.z().phases())),
            Cell::Float(dev),
            Cell::Bool(passed),
        ]);
    }
    Ok((table, failures))
}
