//! Monte-Carlo quadrature sampling and regression-based conditional
//! variance estimation.
//!
//! Sampling is deterministic: the generator is ChaCha8 keyed by a 64-bit
//! seed, and rows are produced in fixed-size shards whose generators are
//! derived from `(seed, shard index)` via the stream counter. A parallel
//! map over shards would therefore reproduce the sequential output
//! bit-for-bit.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::gaussian::{quad_index, GaussianState, Quadrature, EQ_TOL, PHYS_TOL};

/// Rows per sampling shard; fixed so that shard boundaries (and hence the
/// output) never depend on worker count.
pub const SHARD_ROWS: usize = 1 << 16;

/// Deterministic generator for one shard of a seeded run.
pub fn shard_rng(seed: u64, shard: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    rng
}

/// A matrix of i.i.d. quadrature draws; one row per sample, one column per
/// `(mode, quadrature)` label in the interleaved state layout.
#[derive(Debug, Clone)]
pub struct SampleMatrix {
    n_samples: usize,
    labels: Vec<String>,
    data: DMatrix<f64>,
    seed: u64,
}

impl SampleMatrix {
    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn data(&self) -> &DMatrix<f64> {
        &self.data
    }

    /// Column index of a `(mode, quadrature)` label.
    pub fn column(&self, mode: usize, quad: Quadrature) -> usize {
        quad_index(mode, quad)
    }

    /// Sample mean of one column.
    pub fn column_mean(&self, col: usize) -> f64 {
        self.data.column(col).mean()
    }

    /// Unbiased sample variance of one column.
    pub fn column_variance(&self, col: usize) -> f64 {
        let column = self.data.column(col);
        let mean = column.mean();
        column.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (self.n_samples as f64 - 1.0)
    }

    /// Unbiased sample covariance of two columns.
    pub fn column_covariance(&self, col_a: usize, col_b: usize) -> f64 {
        let a = self.data.column(col_a);
        let b = self.data.column(col_b);
        let (ma, mb) = (a.mean(), b.mean());
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| (x - ma) * (y - mb))
            .sum::<f64>()
            / (self.n_samples as f64 - 1.0)
    }

    /// Write the matrix as CSV with a header row of column labels.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{}", self.labels.join(","))?;
        for row in 0..self.n_samples {
            let fields: Vec<String> = (0..self.data.ncols())
                .map(|c| format!("{}", self.data[(row, c)]))
                .collect();
            writeln!(w, "{}", fields.join(","))?;
        }
        Ok(())
    }
}

/// Factor the covariance as `L L^T` for sampling. Falls back to a
/// symmetric-eigenvalue square root when the matrix is only positive
/// *semi*-definite (e.g. after conditioning).
fn sampling_factor(state: &GaussianState) -> Result<DMatrix<f64>> {
    let cov = state.cov().clone();
    if let Some(chol) = cov.clone().cholesky() {
        return Ok(chol.unpack());
    }
    let eig = cov.symmetric_eigen();
    let mut vals = eig.eigenvalues;
    for v in vals.iter_mut() {
        if *v < -PHYS_TOL {
            return Err(Error::NotPositiveSemiDefinite(*v));
        }
        *v = v.max(0.0).sqrt();
    }
    Ok(&eig.eigenvectors * DMatrix::from_diagonal(&vals))
}

/// Draw `n_samples` i.i.d. quadrature vectors from the state's Gaussian.
///
/// Identical seeds give bit-identical matrices.
pub fn sample_quadratures(
    state: &GaussianState,
    n_samples: usize,
    seed: u64,
) -> Result<SampleMatrix> {
    if n_samples < 2 {
        return Err(Error::NotEnoughSamples {
            needed: 2,
            got: n_samples,
        });
    }
    let dim = 2 * state.mode_count();
    let factor = sampling_factor(state)?;
    let mean = state.mean();
    let mut data = DMatrix::zeros(n_samples, dim);
    let mut z = DVector::zeros(dim);
    let mut row = 0;
    let mut shard = 0u64;
    while row < n_samples {
        let mut rng = shard_rng(seed, shard);
        let end = (row + SHARD_ROWS).min(n_samples);
        for r in row..end {
            for zi in z.iter_mut() {
                *zi = rng.sample(StandardNormal);
            }
            let x = mean + &factor * &z;
            for c in 0..dim {
                data[(r, c)] = x[c];
            }
        }
        row = end;
        shard += 1;
    }
    let labels = (0..state.mode_count())
        .flat_map(|m| [format!("x{m}_plus"), format!("x{m}_minus")])
        .collect();
    Ok(SampleMatrix {
        n_samples,
        labels,
        data,
        seed,
    })
}

/// Residual variance of the least-squares regression of the target column
/// on the conditioner columns (with intercept). Converges to the Schur
/// complement conditional variance as the sample count grows.
pub fn estimate_conditional_variance(
    samples: &SampleMatrix,
    target: usize,
    conditioners: &[usize],
) -> Result<f64> {
    let n = samples.n_samples;
    let k = conditioners.len();
    if n <= k + 1 {
        return Err(Error::NotEnoughSamples {
            needed: k + 2,
            got: n,
        });
    }
    let s_yy = samples.column_variance(target);
    if k == 0 {
        return Ok(s_yy);
    }
    let mut s_xx = DMatrix::zeros(k, k);
    let mut s_xy = DVector::zeros(k);
    for (i, &ci) in conditioners.iter().enumerate() {
        s_xy[i] = samples.column_covariance(ci, target);
        for (j, &cj) in conditioners.iter().enumerate() {
            s_xx[(i, j)] = samples.column_covariance(ci, cj);
        }
    }
    let lu = s_xx.lu();
    if lu.determinant().abs() <= EQ_TOL {
        return Err(Error::DegenerateConditioner);
    }
    let coef = lu.solve(&s_xy).ok_or(Error::DegenerateConditioner)?;
    let explained = s_xy.dot(&coef);
    // Degrees-of-freedom correction for the fitted intercept + k slopes.
    Ok((s_yy - explained) * (n as f64 - 1.0) / (n as f64 - 1.0 - k as f64))
}
