//! Grid, angular, information-diagram and limit sweeps.
//!
//! Every sweep point is evaluated independently into an index-addressed
//! buffer and emitted in index order, so the output does not depend on the
//! number of workers.

use std::f64::consts::FRAC_PI_2;

use dcat_core::limits::{
    direction_components, double_tl_spectrum, infinity_directional_spectrum, regularized_spectrum,
    rescaled_tl_spectrum, thermodynamic_spectrum,
};
use dcat_core::rng::{chi2_spectrum, CounterRng};
use dcat_core::schmidt::{linear_entropy_of, rank_of, von_neumann_entropy_of, DEFAULT_RANK_TOL};
use dcat_core::{CsLabel, LossChannel, ParityLabel, SchmidtSpectrum, SphericalDirection};
use rayon::prelude::*;

use crate::cli::{AngularArgs, Colormap, CommonArgs, GridArgs, InfodiagArgs, LimitArgs, LimitKind};
use crate::error::CliError;
use crate::records::{Cell, Table};

/// Largest number of points a grid or angular sweep may have.
pub const MAX_GRID_POINTS: u128 = 10_000_000;

/// Default `||z||` of angular maps.
pub const DEFAULT_RADIUS: f64 = 10.0;

const DEFAULT_RANGE: (f64, f64) = (0.0, 2.0);

/// Validated settings shared by all sweeps.
#[derive(Debug, Clone)]
pub struct Setup {
    pub dim: usize,
    pub particles: u32,
    pub kept: u32,
    pub parity: ParityLabel,
    pub colormap: Option<Colormap>,
    pub reference: Option<Vec<f64>>,
}

impl Setup {
    pub fn from_args(a: &CommonArgs) -> Result<Self, CliError> {
        if a.dim < 2 {
            return Err(CliError::usage("--dim must be at least 2"));
        }
        let width = (a.dim - 1) as u32;
        let parity = match &a.parity {
            Some(s) => {
                let p = ParityLabel::from_bitstring(s)
                    .map_err(|_| CliError::usage(format!("--parity {s:?} is not a bitstring")))?;
                if p.width() != width {
                    return Err(CliError::usage(format!(
                        "--parity needs {width} bits for --dim {}",
                        a.dim
                    )));
                }
                p
            }
            None => ParityLabel::zero(width),
        };
        if let Some(r) = &a.r#ref {
            if r.len() != a.dim - 1 || r.iter().any(|x| !x.is_finite()) {
                return Err(CliError::usage(format!(
                    "--ref needs {} finite components",
                    a.dim - 1
                )));
            }
        }
        Ok(Self {
            dim: a.dim,
            particles: a.particles,
            kept: a.traced,
            parity,
            colormap: a.colormap,
            reference: a.r#ref.clone(),
        })
    }

    fn sectors(&self) -> usize {
        ParityLabel::group_size(self.parity.width())
    }

    /// Header `coord_1..coord_k, c, lambda_*, linear, vonneumann, rank, colormap`.
    pub fn header(&self, coords: usize, sectors: usize) -> Vec<String> {
        let mut h: Vec<String> = (1..=coords).map(|i| format!("coord_{i}")).collect();
        h.push("c".into());
        h.extend((0..sectors).map(|i| format!("lambda_{i}")));
        h.extend(["linear", "vonneumann", "rank", "colormap"].map(String::from));
        h
    }

    /// Colormap scalar for the sample `point` (`z` or `alpha`).
    fn colormap_value(&self, point: &[f64], vonneumann: f64) -> Option<f64> {
        match self.colormap? {
            Colormap::Entropy => Some(vonneumann),
            Colormap::Dist => {
                let zero = vec![0.0; point.len()];
                let r = self.reference.as_deref().unwrap_or(&zero);
                Some(
                    point
                        .iter()
                        .zip(r)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                        .sqrt(),
                )
            }
            Colormap::Angle => {
                let ones = vec![1.0; point.len()];
                let r = self.reference.as_deref().unwrap_or(&ones);
                angle_between(point, r)
            }
        }
    }
}

/// Angle in `[0, pi]`; undefined when either vector vanishes.
pub fn angle_between(a: &[f64], b: &[f64]) -> Option<f64> {
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return None;
    }
    let cos = a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / (na * nb);
    Some(cos.clamp(-1.0, 1.0).acos())
}

/// Entropies of `lambdas` normalized by `log d`, plus the numerical rank.
fn entropy_cells(lambdas: &[f64], d: usize) -> Result<Vec<Cell>, CliError> {
    let mut cells: Vec<Cell> = lambdas.iter().map(|l| Cell::Float(*l)).collect();
    cells.push(linear_entropy_of(lambdas, d)?.into());
    cells.push(von_neumann_entropy_of(lambdas, d)?.into());
    cells.push(Cell::Int(rank_of(lambdas, DEFAULT_RANK_TOL) as u64));
    Ok(cells)
}

/// One record: coordinates, parity, spectrum, entropies, rank, colormap.
fn spectrum_row(
    setup: &Setup,
    coords: &[f64],
    point: &[f64],
    s: &SchmidtSpectrum,
) -> Result<Vec<Cell>, CliError> {
    let mut row: Vec<Cell> = coords.iter().map(|x| Cell::Float(*x)).collect();
    row.push(Cell::Text(s.parity().to_bitstring()));
    let d = s.default_entropy_dim();
    let cells = entropy_cells(s.lambdas(), d)?;
    let vn = von_neumann_entropy_of(s.lambdas(), d)?;
    row.extend(cells);
    row.push(setup.colormap_value(point, vn).into());
    Ok(row)
}

/// Parses `lo:hi` or a comma-separated list of `axes` of them.
pub fn parse_ranges(
    text: Option<&str>,
    axes: usize,
    default: (f64, f64),
) -> Result<Vec<(f64, f64)>, CliError> {
    let Some(text) = text else {
        return Ok(vec![default; axes]);
    };
    let parts = text
        .split(',')
        .map(|p| {
            let (lo, hi) = p
                .split_once(':')
                .ok_or_else(|| CliError::usage(format!("--range {p:?} is not lo:hi")))?;
            let lo: f64 = lo
                .trim()
                .parse()
                .map_err(|_| CliError::usage(format!("bad bound {lo:?}")))?;
            let hi: f64 = hi
                .trim()
                .parse()
                .map_err(|_| CliError::usage(format!("bad bound {hi:?}")))?;
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return Err(CliError::usage(format!(
                    "--range {p:?} must be finite with lo <= hi"
                )));
            }
            Ok((lo, hi))
        })
        .collect::<Result<Vec<_>, _>>()?;
    match parts.len() {
        1 => Ok(vec![parts[0]; axes]),
        n if n == axes => Ok(parts),
        n => Err(CliError::usage(format!(
            "--range has {n} entries, expected 1 or {axes}"
        ))),
    }
}

/// `k`-th of `points` equally spaced values from `lo` to `hi`, ends exact.
pub fn linspace(lo: f64, hi: f64, points: usize, k: usize) -> f64 {
    if k + 1 == points {
        hi
    } else {
        lo + (hi - lo) * (k as f64 / (points - 1) as f64)
    }
}

/// Cartesian grid in row-major order (the last axis varies fastest).
#[derive(Debug, Clone)]
pub struct Grid {
    ranges: Vec<(f64, f64)>,
    points: usize,
    len: usize,
}

impl Grid {
    pub fn new(ranges: Vec<(f64, f64)>, points: usize) -> Result<Self, CliError> {
        if points < 2 {
            return Err(CliError::usage("--points must be at least 2"));
        }
        let len = (points as u128)
            .checked_pow(ranges.len() as u32)
            .unwrap_or(u128::MAX);
        if len > MAX_GRID_POINTS {
            return Err(CliError::Cap(format!(
                "{points}^{} grid points exceed the limit of {MAX_GRID_POINTS}",
                ranges.len()
            )));
        }
        Ok(Self {
            ranges,
            points,
            len: len as usize,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn point(&self, mut index: usize) -> Vec<f64> {
        let mut p = vec![0.0; self.ranges.len()];
        for (axis, (lo, hi)) in self.ranges.iter().enumerate().rev() {
            p[axis] = linspace(*lo, *hi, self.points, index % self.points);
            index /= self.points;
        }
        p
    }
}

/// Evaluates `f` on `0..len` in parallel and returns the rows in index
/// order; the first failing index (in index order) decides the error.
pub fn evaluate<F>(len: usize, f: F) -> Result<Vec<Vec<Cell>>, CliError>
where
    F: Fn(usize) -> Result<Vec<Cell>, CliError> + Sync,
{
    let rows: Vec<Result<Vec<Cell>, CliError>> = (0..len).into_par_iter().map(&f).collect();
    rows.into_iter().collect()
}

fn real_label(mags: Vec<f64>) -> Result<CsLabel, CliError> {
    Ok(CsLabel::real(mags)?)
}

pub fn run_grid(a: &GridArgs) -> Result<Table, CliError> {
    let setup = Setup::from_args(&a.common)?;
    let axes = setup.dim - 1;
    let grid = Grid::new(
        parse_ranges(a.common.range.as_deref(), axes, DEFAULT_RANGE)?,
        a.common.points,
    )?;
    let mut table = Table::new(setup.header(axes, setup.sectors()));
    table.rows = evaluate(grid.len(), |i| {
        let z = grid.point(i);
        let s = regularized_spectrum(
            &real_label(z.clone())?,
            setup.parity,
            setup.particles,
            setup.kept,
        )?;
        spectrum_row(&setup, &z, &z, &s)
    })?;
    Ok(table)
}

pub fn run_angular(a: &AngularArgs) -> Result<Table, CliError> {
    let setup = Setup::from_args(&a.common)?;
    if setup.dim < 3 {
        return Err(CliError::usage("angular maps need --dim 3 or more"));
    }
    let radius = a.common.radius.unwrap_or(DEFAULT_RADIUS);
    if !(radius.is_finite() && radius > 0.0) {
        return Err(CliError::usage("--radius must be positive and finite"));
    }
    let axes = setup.dim - 2;
    let ranges = parse_ranges(a.common.range.as_deref(), axes, (0.0, FRAC_PI_2))?;
    if ranges.iter().any(|(lo, hi)| *lo < 0.0 || *hi > FRAC_PI_2) {
        return Err(CliError::usage("angles must lie in [0, pi/2]"));
    }
    let grid = Grid::new(ranges, a.common.points)?;
    let sectors = setup.sectors();
    let mut header = setup.header(axes, sectors);
    if a.exact {
        header.extend((0..sectors).map(|i| format!("exact_lambda_{i}")));
        header.extend(["exact_linear", "exact_vonneumann"].map(String::from));
    }
    let mut table = Table::new(header);
    table.rows = evaluate(grid.len(), |i| {
        let theta = grid.point(i);
        let dir = SphericalDirection::new(setup.dim, theta.clone())?;
        let z: Vec<f64> = direction_components(&dir)
            .iter()
            .map(|y| radius * y)
            .collect();
        let s = regularized_spectrum(
            &real_label(z.clone())?,
            setup.parity,
            setup.particles,
            setup.kept,
        )?;
        let mut row = spectrum_row(&setup, &theta, &z, &s)?;
        if a.exact {
            match infinity_directional_spectrum(&dir, setup.parity, setup.particles, setup.kept) {
                Ok(e) => {
                    let d = e.default_entropy_dim();
                    row.extend(e.lambdas().iter().map(|l| Cell::Float(*l)));
                    row.push(linear_entropy_of(e.lambdas(), d)?.into());
                    row.push(von_neumann_entropy_of(e.lambdas(), d)?.into());
                }
                Err(dcat_core::Error::IndeterminateLimit { .. }) => {
                    row.extend(std::iter::repeat_n(Cell::Null, sectors + 2));
                }
                Err(e) => return Err(e.into()),
            }
        }
        Ok(row)
    })?;
    Ok(table)
}

pub fn run_infodiag(a: &InfodiagArgs) -> Result<Table, CliError> {
    let setup = Setup::from_args(&a.common)?;
    let seed = a
        .common
        .seed
        .ok_or_else(|| CliError::usage("infodiag needs --seed"))?;
    if let Some(d) = a.chi2 {
        return run_chi2(&setup, seed, a.samples, d);
    }
    let axes = setup.dim - 1;
    let sampler = match a.common.radius {
        Some(r) if r.is_finite() && r >= 0.0 => Sampler::Sphere(r),
        Some(_) => return Err(CliError::usage("--radius must be finite and non-negative")),
        None => {
            let ranges = parse_ranges(a.common.range.as_deref(), axes, DEFAULT_RANGE)?;
            if ranges.iter().any(|(lo, _)| *lo < 0.0) {
                return Err(CliError::usage("magnitude ranges must be non-negative"));
            }
            Sampler::Box(ranges)
        }
    };
    let mut table = Table::new(setup.header(axes, setup.sectors()));
    table.rows = evaluate(a.samples, |i| {
        let mut rng = CounterRng::new(seed, i as u64);
        let z = sampler.draw(&mut rng, axes);
        let s = regularized_spectrum(
            &real_label(z.clone())?,
            setup.parity,
            setup.particles,
            setup.kept,
        )?;
        spectrum_row(&setup, &z, &z, &s)
    })?;
    Ok(table)
}

enum Sampler {
    Box(Vec<(f64, f64)>),
    Sphere(f64),
}

impl Sampler {
    fn draw(&self, rng: &mut CounterRng, axes: usize) -> Vec<f64> {
        match self {
            Sampler::Box(ranges) => ranges
                .iter()
                .map(|(lo, hi)| rng.uniform_in(*lo, *hi))
                .collect(),
            Sampler::Sphere(r) => {
                // |normal| directions are uniform on the positive orthant
                let g: Vec<f64> = (0..axes).map(|_| rng.normal().abs()).collect();
                let n = g.iter().map(|x| x * x).sum::<f64>().sqrt();
                if n == 0.0 {
                    let y = r / (axes as f64).sqrt();
                    return vec![y; axes];
                }
                g.iter().map(|x| r * x / n).collect()
            }
        }
    }
}

/// Random spectra of dimension `d`: the rank is drawn uniformly from
/// `1..=d`, then the eigenvalues with [`chi2_spectrum`].
fn run_chi2(setup: &Setup, seed: u64, samples: usize, d: usize) -> Result<Table, CliError> {
    if d < 2 {
        return Err(CliError::usage("--chi2 needs a dimension of at least 2"));
    }
    let mut table = Table::new(setup.header(0, d));
    table.rows = evaluate(samples, |i| {
        let mut rng = CounterRng::new(seed, i as u64);
        let rank = 1 + ((rng.uniform() * d as f64) as usize).min(d - 1);
        let lambdas = chi2_spectrum(&mut rng, d, rank)?;
        let mut row = vec![Cell::Text(String::new())];
        row.extend(entropy_cells(&lambdas, d)?);
        let colormap = match setup.colormap {
            Some(Colormap::Entropy) => Some(von_neumann_entropy_of(&lambdas, d)?),
            _ => None,
        };
        row.push(colormap.into());
        Ok(row)
    })?;
    Ok(table)
}

pub fn run_limit(a: &LimitArgs) -> Result<Table, CliError> {
    let setup = Setup::from_args(&a.common)?;
    let axes = setup.dim - 1;
    let grid = Grid::new(
        parse_ranges(a.common.range.as_deref(), axes, DEFAULT_RANGE)?,
        a.common.points,
    )?;
    let eta = match (a.kind, a.common.eta) {
        (LimitKind::Rstl, None) => return Err(CliError::usage("--kind rstl needs --eta")),
        (LimitKind::Rstl, Some(e)) if !(0.5..1.0).contains(&e) => {
            return Err(CliError::usage("--eta must lie in [1/2, 1)"))
        }
        (LimitKind::Rstl, Some(e)) => e,
        (_, Some(_)) => {
            log::warn!("--eta only affects --kind rstl; ignoring it");
            0.5
        }
        (_, None) => 0.5,
    };
    let mut table = Table::new(setup.header(axes, setup.sectors()));
    table.rows = evaluate(grid.len(), |i| {
        let x = grid.point(i);
        let s = match a.kind {
            LimitKind::Tl => {
                thermodynamic_spectrum(&real_label(x.clone())?, setup.parity, setup.kept)?
            }
            LimitKind::Dtl => double_tl_spectrum(&real_label(x.clone())?, setup.parity)?,
            LimitKind::Rstl => {
                rescaled_tl_spectrum(&LossChannel::new(eta, x.clone())?, setup.parity)?
            }
        };
        spectrum_row(&setup, &x, &x, &s)
    })?;
    Ok(table)
}
