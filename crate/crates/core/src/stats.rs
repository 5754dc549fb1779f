//! Small statistical helpers shared by the Monte-Carlo checks.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::{Error, Result};

/// Outcome of a chi-square test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

impl ChiSquare {
    pub fn passes(&self, significance: f64) -> bool {
        self.p_value >= significance
    }
}

fn upper_tail(statistic: f64, dof: usize) -> Result<f64> {
    if dof == 0 {
        return Ok(1.0);
    }
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::Numerical(e.to_string()))?;
    Ok(dist.sf(statistic))
}

/// Pearson goodness-of-fit of `observed` counts against cell probabilities.
///
/// Cells with zero expected probability must have zero observations; they do
/// not contribute degrees of freedom.
pub fn chi_square_gof(observed: &[u64], probabilities: &[f64]) -> Result<ChiSquare> {
    if observed.len() != probabilities.len() {
        return Err(Error::LengthMismatch { expected: probabilities.len(), got: observed.len() });
    }
    let total: u64 = observed.iter().sum();
    if total == 0 {
        return Err(Error::InsufficientSamples { needed: 1, got: 0 });
    }
    let mut statistic = 0.0;
    let mut cells = 0usize;
    for (&o, &p) in observed.iter().zip(probabilities) {
        if p <= 0.0 {
            if o > 0 {
                statistic = f64::INFINITY;
            }
            continue;
        }
        let e = p * total as f64;
        statistic += (o as f64 - e).powi(2) / e;
        cells += 1;
    }
    let dof = cells.saturating_sub(1);
    Ok(ChiSquare { statistic, dof, p_value: upper_tail(statistic, dof)? })
}

/// Pearson independence test on an `r × c` contingency table (rows of equal length).
///
/// Empty rows and columns are dropped before counting degrees of freedom.
pub fn chi_square_independence(table: &[Vec<u64>]) -> Result<ChiSquare> {
    let cols = table.first().map_or(0, Vec::len);
    if table.iter().any(|row| row.len() != cols) {
        return Err(Error::invalid("ragged contingency table"));
    }
    let row_sums: Vec<u64> = table.iter().map(|r| r.iter().sum()).collect();
    let col_sums: Vec<u64> = (0..cols).map(|j| table.iter().map(|r| r[j]).sum()).collect();
    let total: u64 = row_sums.iter().sum();
    if total == 0 {
        return Err(Error::InsufficientSamples { needed: 1, got: 0 });
    }
    let mut statistic = 0.0;
    for (i, row) in table.iter().enumerate() {
        for (j, &o) in row.iter().enumerate() {
            if row_sums[i] == 0 || col_sums[j] == 0 {
                continue;
            }
            let e = row_sums[i] as f64 * col_sums[j] as f64 / total as f64;
            statistic += (o as f64 - e).powi(2) / e;
        }
    }
    let r = row_sums.iter().filter(|&&s| s > 0).count();
    let c = col_sums.iter().filter(|&&s| s > 0).count();
    let dof = r.saturating_sub(1) * c.saturating_sub(1);
    Ok(ChiSquare { statistic, dof, p_value: upper_tail(statistic, dof)? })
}

/// Standard error of a Bernoulli(p) frequency over `trials` draws.
pub fn bernoulli_sigma(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// Whether `observed` lies within `k` standard errors of `p`.
pub fn within_sigma(observed: f64, p: f64, trials: u64, k: f64) -> bool {
    (observed - p).abs() <= k * bernoulli_sigma(p, trials)
}

/// Binary Shannon-type entropy of a probability vector, in bits, with `0·log 0 = 0`.
pub fn shannon_entropy(probabilities: &[f64]) -> f64 {
    probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}
