//! Distributional checks on the reduction.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::extractor::{bits_per_dit, toeplitz_extract, ExtractorSeed};
use super::frot::{truncate_index_set, FrotTranscript};
use super::ih::IhTranscript;
use super::subset_code::{binomial, SubsetCode};
use crate::bits::BitString;
use crate::mub::MubFamily;
use crate::rng::trial_stream;
use crate::stats::{bernoulli_sigma, chi_square_gof, chi_square_independence, ChiSquare};
use crate::wse::{run_honest, WseParams};
use crate::{Error, Result};

pub const MIN_C_SAMPLES: usize = 10_000;

/// Largest `t` for which the per-pair table is built.
pub const MAX_PAIR_TABLE_T: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CIndependenceReport {
    pub samples: usize,
    pub t: usize,
    pub c0_frequency: f64,
    pub c0_z: f64,
    /// `c` against 4 parity features of Alice's view (16 cells).
    pub parity_test: ChiSquare,
    /// `c` against the unordered pair `{w0, w1}`, for `t ≤ 6`.
    pub pair_test: Option<ChiSquare>,
    pub pair_cells: usize,
    /// Pair cells whose `Pr(c=0)` is more than 3σ from 1/2.
    pub pair_cells_beyond_3sigma: usize,
    pub significance: f64,
    pub pass: bool,
    pub note: &'static str,
}

const CONTROL_NOTE: &str = "Bob fixes c by choosing w; the other output w_{1-c} is not under his control";

fn parity(x: u32) -> u8 {
    (x & 1) as u8
}

/// Sign of a permutation as a bit (1 for odd).
fn permutation_parity(perm: &[usize]) -> u8 {
    let mut seen = vec![false; perm.len()];
    let mut cycles = 0;
    for s in 0..perm.len() {
        if !seen[s] {
            cycles += 1;
            let mut p = s;
            while !seen[p] {
                seen[p] = true;
                p = perm[p];
            }
        }
    }
    ((perm.len() - cycles) & 1) as u8
}

fn ih_features(ih: &IhTranscript) -> u8 {
    let responses = ih.rounds.iter().filter(|r| r.response).count() as u32;
    parity(responses) | parity(ih.w0.count_ones()) << 1
}

struct CSample {
    c: u8,
    features: u8,
    pair: (u64, u64),
}

fn c_report(samples: &[CSample], t: usize, significance: f64) -> Result<CIndependenceReport> {
    if samples.len() < MIN_C_SAMPLES {
        return Err(Error::InsufficientSamples { needed: MIN_C_SAMPLES, got: samples.len() });
    }
    let n = samples.len();
    let c0 = samples.iter().filter(|s| s.c == 0).count();
    let c0_frequency = c0 as f64 / n as f64;
    let c0_z = (c0_frequency - 0.5) / bernoulli_sigma(0.5, n as u64);

    let mut parity_table = vec![vec![0u64; 16]; 2];
    for s in samples {
        parity_table[s.c as usize][s.features as usize] += 1;
    }
    let parity_test = chi_square_independence(&parity_table)?;

    let (pair_test, pair_cells, pair_cells_beyond_3sigma) = if t <= MAX_PAIR_TABLE_T {
        let mut cells: BTreeMap<(u64, u64), [u64; 2]> = BTreeMap::new();
        for s in samples {
            cells.entry(s.pair).or_default()[s.c as usize] += 1;
        }
        let table: Vec<Vec<u64>> = (0..2).map(|c| cells.values().map(|v| v[c]).collect()).collect();
        let beyond = cells
            .values()
            .filter(|v| {
                let total = v[0] + v[1];
                (v[0] as f64 / total as f64 - 0.5).abs() > 3.0 * bernoulli_sigma(0.5, total)
            })
            .count();
        (Some(chi_square_independence(&table)?), cells.len(), beyond)
    } else {
        (None, 0, 0)
    };

    let pass = parity_test.passes(significance) && pair_test.is_none_or(|p| p.passes(significance)) && c0_z.abs() <= 3.0;
    Ok(CIndependenceReport {
        samples: n,
        t,
        c0_frequency,
        c0_z,
        parity_test,
        pair_test,
        pair_cells,
        pair_cells_beyond_3sigma,
        significance,
        pass,
        note: CONTROL_NOTE,
    })
}

/// Test that `c` is uniform and independent of Alice's view of the reduction.
///
/// Alice's view is summarized by the parities of the interactive-hashing
/// responses, of `w0`, of the two seeds and of `π`, plus the pair `{w0, w1}`.
pub fn check_c_independence(transcripts: &[FrotTranscript], significance: f64) -> Result<CIndependenceReport> {
    let t = transcripts.first().map_or(0, |tr| tr.t);
    if transcripts.iter().any(|tr| tr.t != t) {
        return Err(Error::invalid("transcripts of different code length"));
    }
    let samples: Vec<CSample> = transcripts
        .iter()
        .map(|tr| CSample {
            c: tr.c,
            features: ih_features(&tr.ih)
                | parity(tr.r0.diagonals.count_ones() + tr.r1.diagonals.count_ones()) << 2
                | permutation_parity(&tr.permutation) << 3,
            pair: (tr.ih.w0.to_u64().unwrap_or(0), tr.ih.w1.to_u64().unwrap_or(0)),
        })
        .collect();
    c_report(&samples, t, significance)
}

/// Same test on bare interactive-hashing runs `(transcript, c)`.
pub fn check_ih_c_independence(runs: &[(IhTranscript, u8)], significance: f64) -> Result<CIndependenceReport> {
    let t = runs.first().map_or(0, |(ih, _)| ih.t);
    let samples: Vec<CSample> = runs
        .iter()
        .map(|(ih, c)| CSample {
            c: *c,
            features: ih_features(ih) | ih.rounds.first().map_or(0, |r| parity(r.query.count_ones())) << 2,
            pair: (ih.w0.to_u64().unwrap_or(0), ih.w1.to_u64().unwrap_or(0)),
        })
        .collect();
    c_report(&samples, t, significance)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationReport {
    pub n: usize,
    pub target: usize,
    pub trials: usize,
    /// Runs with `|I| ≥ target`.
    pub conditioned_runs: usize,
    pub cells: usize,
    pub test: ChiSquare,
    pub significance: f64,
    pub pass: bool,
}

/// Conditional on `|I| ≥ target`, `I_tr` should be uniform over all
/// `target`-subsets of `0..n`.
pub fn check_truncation_uniformity(
    params: &WseParams,
    family: &MubFamily,
    target: usize,
    trials: usize,
    seed: u64,
    significance: f64,
) -> Result<TruncationReport> {
    let n = params.n;
    if target == 0 || target > n || n > 40 {
        return Err(Error::invalid(format!("target {target} with n = {n} is outside the supported range")));
    }
    let code = SubsetCode::new(n, target)?;
    let cells: usize = binomial(n, target).try_into().map_err(|_| Error::invalid("too many cells"))?;
    let ranks: Vec<Option<usize>> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_stream(seed, k as u64);
            let wse = run_honest(params, family, &mut rng)?;
            if wse.index_set.len() < target {
                return Ok(None);
            }
            let i_tr = truncate_index_set(&wse.index_set, n, target, &mut rng)?;
            let rank: usize = code.rank(&i_tr)?.try_into().expect("rank below cell count");
            Ok(Some(rank))
        })
        .collect::<Result<_>>()?;
    let mut counts = vec![0u64; cells];
    for r in ranks.iter().flatten() {
        counts[*r] += 1;
    }
    let conditioned_runs = counts.iter().sum::<u64>() as usize;
    let test = chi_square_gof(&counts, &vec![1.0 / cells as f64; cells])?;
    Ok(TruncationReport { n, target, trials, conditioned_runs, cells, test, significance, pass: test.passes(significance) })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SiblingDistanceReport {
    pub samples: usize,
    pub ell: usize,
    /// Total-variation distance of the empirical law of `s_{1−c}` from uniform.
    pub tv_from_uniform: f64,
    /// The same distance for the reference law: a random Toeplitz hash of
    /// uniformly random dits. Random seeds are sometimes rank-deficient, so
    /// this is not zero.
    pub reference_tv_from_uniform: f64,
    pub tv_from_reference: f64,
    /// Expected TV distance of a sample of this size drawn from the reference.
    pub tv_noise_floor: f64,
    /// Goodness of fit against the reference law.
    pub test: ChiSquare,
    pub significance: f64,
    pub pass: bool,
}

/// Upper limit on `d^K · 2^{N+ℓ−1}` for the exact reference enumeration.
const MAX_REFERENCE_WORK: u64 = 1 << 24;

/// Exact law of `Ext(x, r)` for uniform `x ∈ {0..d−1}^k` and a uniform seed.
pub fn hashed_uniform_distribution(d: usize, k: usize, ell: usize) -> Result<Vec<f64>> {
    let input_bits = k * bits_per_dit(d);
    let seed_bits = input_bits + ell - 1;
    let inputs = (d as u64).checked_pow(k as u32).unwrap_or(u64::MAX);
    if ell == 0 || ell > input_bits || seed_bits >= 63 || inputs.saturating_mul(1 << seed_bits) > MAX_REFERENCE_WORK {
        return Err(Error::invalid("reference enumeration too large"));
    }
    let mut counts = vec![0u64; 1 << ell];
    let mut dits = vec![0usize; k];
    for s in 0..(1u64 << seed_bits) {
        let seed = ExtractorSeed::new(BitString::from_u64(s, seed_bits), ell)?;
        for mut v in 0..inputs {
            for x in dits.iter_mut() {
                *x = (v % d as u64) as usize;
                v /= d as u64;
            }
            let out = toeplitz_extract(&dits, d, &seed)?;
            counts[out.to_u64().expect("ℓ < 64") as usize] += 1;
        }
    }
    let total = (inputs << seed_bits) as f64;
    Ok(counts.into_iter().map(|c| c as f64 / total).collect())
}

/// Small-instance estimate of how far Alice's other output `s_{1−c}` is from
/// uniform, compared with the exact law for ideally random inputs.
/// Requires `t ≤ 4` and `ℓ ≤ 4`.
pub fn sibling_output_distance(transcripts: &[FrotTranscript], significance: f64) -> Result<SiblingDistanceReport> {
    let first = transcripts.first().ok_or(Error::EmptyRecord)?;
    let p = &first.params;
    let ell = p.ell;
    if ell > 4 || first.t > 4 {
        return Err(Error::invalid("distance estimation is limited to t ≤ 4 and ℓ ≤ 4"));
    }
    if transcripts.iter().any(|tr| tr.params != *p) {
        return Err(Error::invalid("transcripts with different parameters"));
    }
    let reference = hashed_uniform_distribution(p.d, p.truncated_size(), ell)?;
    let cells = 1usize << ell;
    let mut counts = vec![0u64; cells];
    for tr in transcripts {
        counts[tr.sibling_output().to_u64().expect("ℓ ≤ 4") as usize] += 1;
    }
    let samples = transcripts.len();
    let freq: Vec<f64> = counts.iter().map(|&c| c as f64 / samples as f64).collect();
    let uniform = 1.0 / cells as f64;
    let tv = |a: &[f64], b: &dyn Fn(usize) -> f64| 0.5 * a.iter().enumerate().map(|(i, x)| (x - b(i)).abs()).sum::<f64>();
    // E|p̂ − p| ≈ σ·√(2/π) per cell
    let tv_noise_floor = 0.5
        * reference.iter().map(|&q| bernoulli_sigma(q, samples as u64)).sum::<f64>()
        * (2.0 / std::f64::consts::PI).sqrt();
    let test = chi_square_gof(&counts, &reference)?;
    Ok(SiblingDistanceReport {
        samples,
        ell,
        tv_from_uniform: tv(&freq, &|_| uniform),
        reference_tv_from_uniform: tv(&reference, &|_| uniform),
        tv_from_reference: tv(&freq, &|i| reference[i]),
        tv_noise_floor,
        test,
        significance,
        pass: test.passes(significance),
    })
}
