//! Non-uniform weak string erasure.
//!
//! Alice encodes `n` uniformly random dits, each in a uniformly random basis of
//! the complete MUB family, and sends the qudits. Bob measures each in a random
//! basis. After the waiting period Alice announces her bases and Bob keeps the
//! positions where the bases agree, so every index lands in `I` independently
//! with probability `1/(d+1)`.
//!
//! The waiting period is a phase marker rather than wall-clock time: the
//! type-state below only lets Alice announce bases after a [`DeltaT`] has
//! elapsed, and an adversary must commit its storage before that point.

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::mub::{Dimension, MubFamily};
use crate::qsim::{
    depolarize_survival, guess_from_posterior, posterior_guess, random_mub_guess_probability,
    sample_index, sample_measurement, DepolarizingChannel, Outcome,
};
use crate::rng::trial_stream;
use crate::stats::{bernoulli_sigma, chi_square_gof, ChiSquare};
use crate::{Error, Result};

/// Minimum number of transcripts accepted by [`check_index_distribution`].
pub const MIN_INDEX_SAMPLES: usize = 1_000;
/// Largest `n` for which the full `2ⁿ`-cell subset histogram is tested.
pub const MAX_EXHAUSTIVE_N: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WseParams {
    pub n: usize,
    pub dim: Dimension,
}

impl WseParams {
    pub fn new(n: usize, dim: Dimension) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("WSE needs n ≥ 1 qudits"));
        }
        Ok(WseParams { n, dim })
    }

    pub fn d(&self) -> usize {
        self.dim.get()
    }

    /// Probability that a given index ends up in `I`.
    pub fn index_probability(&self) -> f64 {
        1.0 / (self.d() + 1) as f64
    }
}

/// A qudit in flight. It can be measured once; there is no way to copy it.
#[derive(Debug)]
pub struct Qudit {
    state: QuditState,
}

#[derive(Debug)]
enum QuditState {
    Pure(Vec<Complex64>),
    MaximallyMixed,
}

impl Qudit {
    pub fn measure<R: Rng + ?Sized>(self, family: &MubFamily, basis: usize, rng: &mut R) -> Result<Outcome> {
        match self.state {
            QuditState::Pure(state) => sample_measurement(&state, family, basis, rng),
            QuditState::MaximallyMixed => {
                let d = family.d();
                Ok(Outcome { value: sample_index(&vec![1.0 / d as f64; d], rng), basis_used: basis })
            }
        }
    }

    /// Pass the qudit through a depolarizing channel; returns whether it survived.
    pub fn depolarize<R: Rng + ?Sized>(&mut self, channel: &DepolarizingChannel, rng: &mut R) -> bool {
        let survived = depolarize_survival(channel, rng);
        if !survived {
            self.state = QuditState::MaximallyMixed;
        }
        survived
    }
}

/// Token for the waiting period `Δt`.
#[derive(Debug)]
pub struct DeltaT(());

impl DeltaT {
    pub fn elapse() -> Self {
        DeltaT(())
    }
}

/// Alice's announcement of her basis string.
#[derive(Debug, Clone)]
pub struct BasisReveal {
    pub theta: Vec<usize>,
}

/// Alice after sending her qudits, waiting for `Δt`.
#[derive(Debug)]
pub struct AliceSent {
    x: Vec<usize>,
    theta: Vec<usize>,
}

/// Alice after `Δt`, ready to announce.
#[derive(Debug)]
pub struct AliceWaited {
    x: Vec<usize>,
    theta: Vec<usize>,
}

/// Alice's first move: encode `x` with bases `theta`.
pub fn alice_encode(family: &MubFamily, x: Vec<usize>, theta: Vec<usize>) -> Result<(AliceSent, Vec<Qudit>)> {
    if x.len() != theta.len() {
        return Err(Error::LengthMismatch { expected: x.len(), got: theta.len() });
    }
    let d = family.d();
    if let Some(&v) = x.iter().find(|&&v| v >= d) {
        return Err(Error::invalid(format!("dit {v} out of range for d = {d}")));
    }
    if let Some(&b) = theta.iter().find(|&&b| b > d) {
        return Err(Error::invalid(format!("basis {b} out of range for d = {d}")));
    }
    let qudits = x
        .iter()
        .zip(&theta)
        .map(|(&xi, &ti)| Qudit { state: QuditState::Pure(family.basis(ti).vector(xi).to_vec()) })
        .collect();
    Ok((AliceSent { x, theta }, qudits))
}

/// Alice picks `x` and `θ` uniformly and encodes.
pub fn alice_start<R: Rng + ?Sized>(params: &WseParams, family: &MubFamily, rng: &mut R) -> Result<(AliceSent, Vec<Qudit>)> {
    let d = params.d();
    let x = (0..params.n).map(|_| rng.random_range(0..d)).collect();
    let theta = (0..params.n).map(|_| rng.random_range(0..=d)).collect();
    alice_encode(family, x, theta)
}

impl AliceSent {
    pub fn wait(self, _dt: DeltaT) -> AliceWaited {
        AliceWaited { x: self.x, theta: self.theta }
    }
}

impl AliceWaited {
    /// Announce `θ` and output `x`.
    pub fn reveal(self) -> (BasisReveal, Vec<usize>, Vec<usize>) {
        (BasisReveal { theta: self.theta.clone() }, self.x, self.theta)
    }
}

/// Honest Bob after measuring every qudit on arrival.
#[derive(Debug)]
pub struct BobMeasured {
    theta_tilde: Vec<usize>,
    outcomes: Vec<usize>,
}

/// Bob's WSE output: the index set and the dits he learned there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BobOutput {
    pub index_set: Vec<usize>,
    pub x_i: Vec<usize>,
}

/// Honest Bob measures each qudit in `theta_tilde`.
pub fn bob_measure<R: Rng + ?Sized>(
    family: &MubFamily,
    qudits: Vec<Qudit>,
    theta_tilde: Vec<usize>,
    rng: &mut R,
) -> Result<BobMeasured> {
    if qudits.len() != theta_tilde.len() {
        return Err(Error::LengthMismatch { expected: qudits.len(), got: theta_tilde.len() });
    }
    let outcomes = qudits
        .into_iter()
        .zip(&theta_tilde)
        .map(|(q, &b)| q.measure(family, b, rng).map(|o| o.value))
        .collect::<Result<Vec<_>>>()?;
    Ok(BobMeasured { theta_tilde, outcomes })
}

impl BobMeasured {
    /// `I = { i : θᵢ = θ̃ᵢ }`; positions outside `I` are discarded.
    pub fn receive_bases(&self, reveal: &BasisReveal) -> Result<BobOutput> {
        if reveal.theta.len() != self.theta_tilde.len() {
            return Err(Error::LengthMismatch { expected: self.theta_tilde.len(), got: reveal.theta.len() });
        }
        let index_set: Vec<usize> =
            (0..self.theta_tilde.len()).filter(|&i| reveal.theta[i] == self.theta_tilde[i]).collect();
        let x_i = index_set.iter().map(|&i| self.outcomes[i]).collect();
        Ok(BobOutput { index_set, x_i })
    }
}

/// Complete record of an honest run. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WseTranscript {
    pub n: usize,
    pub d: usize,
    pub x: Vec<usize>,
    pub theta: Vec<usize>,
    pub theta_tilde: Vec<usize>,
    pub outcomes: Vec<usize>,
    pub index_set: Vec<usize>,
    #[serde(rename = "x_I")]
    pub x_i: Vec<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl WseTranscript {
    /// Positions of `I` where Bob's dit differs from Alice's. Zero for honest runs.
    pub fn mismatches(&self) -> usize {
        self.index_set.iter().zip(&self.x_i).filter(|(&i, &v)| self.x[i] != v).count()
    }

    /// Indicator vector of `I`.
    pub fn membership(&self) -> Vec<bool> {
        let mut m = vec![false; self.n];
        for &i in &self.index_set {
            m[i] = true;
        }
        m
    }

    /// Overwrite Bob's output with an arbitrary index set (used to exercise the
    /// small-`I` fallback of the OT reduction). Bob's dits are taken from his outcomes.
    pub fn with_index_set(mut self, index_set: Vec<usize>) -> Self {
        self.x_i = index_set.iter().map(|&i| self.outcomes[i]).collect();
        self.index_set = index_set;
        self
    }
}

/// Run the protocol with the given basis strings; `x` is still drawn at random.
pub fn run_honest_with_bases<R: Rng + ?Sized>(
    family: &MubFamily,
    x: Vec<usize>,
    theta: Vec<usize>,
    theta_tilde: Vec<usize>,
    rng: &mut R,
) -> Result<WseTranscript> {
    let n = x.len();
    let (alice, qudits) = alice_encode(family, x, theta)?;
    let bob = bob_measure(family, qudits, theta_tilde, rng)?;
    let (reveal, x, theta) = alice.wait(DeltaT::elapse()).reveal();
    let out = bob.receive_bases(&reveal)?;
    Ok(WseTranscript {
        n,
        d: family.d(),
        x,
        theta,
        theta_tilde: bob.theta_tilde,
        outcomes: bob.outcomes,
        index_set: out.index_set,
        x_i: out.x_i,
        seed: None,
    })
}

pub fn run_honest<R: Rng + ?Sized>(params: &WseParams, family: &MubFamily, rng: &mut R) -> Result<WseTranscript> {
    if family.dim() != params.dim {
        return Err(Error::DimensionMismatch { expected: params.d(), got: family.d() });
    }
    let d = params.d();
    let x: Vec<usize> = (0..params.n).map(|_| rng.random_range(0..d)).collect();
    let theta: Vec<usize> = (0..params.n).map(|_| rng.random_range(0..=d)).collect();
    let theta_tilde: Vec<usize> = (0..params.n).map(|_| rng.random_range(0..=d)).collect();
    run_honest_with_bases(family, x, theta, theta_tilde, rng)
}

/// `trials` independent honest runs; trial `t` uses stream `t` of `seed`.
pub fn run_honest_trials(params: &WseParams, family: &MubFamily, seed: u64, trials: usize) -> Result<Vec<WseTranscript>> {
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_stream(seed, t as u64);
            let mut tr = run_honest(params, family, &mut rng)?;
            tr.seed = Some(seed);
            Ok(tr)
        })
        .collect()
}

/// How a storing adversary picks which qudits to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Selection {
    /// The first `⌊νn⌋` positions.
    FirstK,
    /// A uniformly random subset of size `⌊νn⌋`.
    #[default]
    RandomSubset,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AdversaryStrategy {
    /// Measure every qudit on arrival in a uniformly random basis.
    MeasureRandomMub,
    /// Keep a `ν` fraction in storage (passing through `channel`), measure the
    /// rest on arrival.
    StoreSubset { storage_rate: f64, channel: DepolarizingChannel, selection: Selection },
}

impl AdversaryStrategy {
    pub fn validate(&self, d: usize) -> Result<()> {
        if let AdversaryStrategy::StoreSubset { storage_rate, channel, .. } = self {
            if !(0.0..=1.0).contains(storage_rate) {
                return Err(Error::invalid(format!("storage rate must lie in [0, 1], got {storage_rate}")));
            }
            if channel.d() != d {
                return Err(Error::DimensionMismatch { expected: d, got: channel.d() });
            }
        }
        Ok(())
    }

    /// Number of stored qudits out of `n`.
    pub fn stored_count(&self, n: usize) -> usize {
        match self {
            AdversaryStrategy::MeasureRandomMub => 0,
            AdversaryStrategy::StoreSubset { storage_rate, .. } => {
                (((storage_rate * n as f64) + 1e-9).floor() as usize).min(n)
            }
        }
    }

    /// Closed-form per-qudit min-entropy rate of this strategy,
    /// `−ν log₂(r + (1−r)/d) − (1−ν) log₂(2/(d+1))`.
    pub fn analytic_rate(&self, d: usize) -> f64 {
        let unstored = -random_mub_guess_probability(d).log2();
        match self {
            AdversaryStrategy::MeasureRandomMub => unstored,
            AdversaryStrategy::StoreSubset { storage_rate, channel, .. } => {
                -storage_rate * channel.stored_guess_probability().log2() + (1.0 - storage_rate) * unstored
            }
        }
    }
}

/// Per-position record of an adversarial run, possibly pooled over several trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GuessRecord {
    pub n: usize,
    pub d: usize,
    pub trials: usize,
    /// Positions whose measurement basis equalled Alice's (stored qudits count,
    /// as they are measured after the reveal), summed over trials.
    #[serde(default)]
    pub matched: usize,
    /// Whether the adversary's guess of `xᵢ` was right, `n` entries per trial.
    pub correct: Vec<bool>,
    /// Ex-ante success probability of that guess.
    pub probability: Vec<f64>,
}

impl GuessRecord {
    pub fn merge(&mut self, other: GuessRecord) -> Result<()> {
        if other.n != self.n || other.d != self.d {
            return Err(Error::invalid("cannot merge records of different shape"));
        }
        self.trials += other.trials;
        self.matched += other.matched;
        self.correct.extend(other.correct);
        self.probability.extend(other.probability);
        Ok(())
    }

    pub fn success_frequency(&self) -> f64 {
        self.correct.iter().filter(|&&c| c).count() as f64 / self.correct.len() as f64
    }

    /// Whether every position was guessed correctly, i.e. the whole string.
    pub fn all_correct(&self) -> bool {
        self.correct.iter().all(|&c| c)
    }
}

/// Bob follows `strategy` instead of the honest protocol.
pub fn run_adversarial_bob<R: Rng + ?Sized>(
    params: &WseParams,
    family: &MubFamily,
    strategy: &AdversaryStrategy,
    rng: &mut R,
) -> Result<GuessRecord> {
    if family.dim() != params.dim {
        return Err(Error::DimensionMismatch { expected: params.d(), got: family.d() });
    }
    let d = params.d();
    strategy.validate(d)?;
    let n = params.n;
    let (alice, qudits) = alice_start(params, family, rng)?;

    // Before Δt: decide what to store, measure everything else.
    let k = strategy.stored_count(n);
    let mut stored = vec![false; n];
    match strategy {
        AdversaryStrategy::MeasureRandomMub => {}
        AdversaryStrategy::StoreSubset { selection: Selection::FirstK, .. } => stored[..k].fill(true),
        AdversaryStrategy::StoreSubset { selection: Selection::RandomSubset, .. } => {
            for i in sample(rng, n, k) {
                stored[i] = true;
            }
        }
    }
    let mut memory: Vec<(usize, Qudit)> = Vec::with_capacity(k);
    let mut immediate: Vec<(usize, Outcome)> = Vec::with_capacity(n - k);
    let mut bases = vec![0; n];
    for (i, q) in qudits.into_iter().enumerate() {
        if stored[i] {
            memory.push((i, q));
        } else {
            let basis = rng.random_range(0..=d);
            bases[i] = basis;
            immediate.push((i, q.measure(family, basis, rng)?));
        }
    }

    // Storage noise acts during Δt.
    if let AdversaryStrategy::StoreSubset { channel, .. } = strategy {
        for (_, q) in memory.iter_mut() {
            q.depolarize(channel, rng);
        }
    }
    let (reveal, x, _) = alice.wait(DeltaT::elapse()).reveal();

    let mut correct = vec![false; n];
    let mut probability = vec![0.0; n];
    let mut matched = k;
    for (i, outcome) in immediate {
        matched += (bases[i] == reveal.theta[i]) as usize;
        let guess = guess_from_posterior(&posterior_guess(outcome, reveal.theta[i], d), rng);
        correct[i] = guess == x[i];
        probability[i] = random_mub_guess_probability(d);
    }
    if let AdversaryStrategy::StoreSubset { channel, .. } = strategy {
        for (i, q) in memory {
            let outcome = q.measure(family, reveal.theta[i], rng)?;
            correct[i] = outcome.value == x[i];
            probability[i] = channel.stored_guess_probability();
        }
    }
    Ok(GuessRecord { n, d, trials: 1, matched, correct, probability })
}

/// Pooled adversarial record over `trials` runs, trial `t` on stream `t` of `seed`.
pub fn run_adversarial_trials(
    params: &WseParams,
    family: &MubFamily,
    strategy: &AdversaryStrategy,
    seed: u64,
    trials: usize,
) -> Result<GuessRecord> {
    if trials == 0 {
        return Err(Error::invalid("need at least one trial"));
    }
    let records = (0..trials)
        .into_par_iter()
        .map(|t| run_adversarial_bob(params, family, strategy, &mut trial_stream(seed, t as u64)))
        .collect::<Result<Vec<_>>>()?;
    let mut it = records.into_iter();
    let mut acc = it.next().expect("trials > 0");
    for r in it {
        acc.merge(r)?;
    }
    Ok(acc)
}

/// Honest Bob viewed as an eavesdropper on the whole string: he keeps his
/// outcome where the bases matched and guesses uniformly elsewhere. Every
/// position has ex-ante success probability `2/(d+1)`.
pub fn honest_guess_record<R: Rng + ?Sized>(transcript: &WseTranscript, rng: &mut R) -> GuessRecord {
    let d = transcript.d;
    let correct = (0..transcript.n)
        .map(|i| {
            let guess = if transcript.theta[i] == transcript.theta_tilde[i] { transcript.outcomes[i] } else { rng.random_range(0..d) };
            guess == transcript.x[i]
        })
        .collect();
    GuessRecord {
        n: transcript.n,
        d,
        trials: 1,
        matched: transcript.index_set.len(),
        correct,
        probability: vec![random_mub_guess_probability(d); transcript.n],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RateMode {
    /// Use the recorded ex-ante probabilities.
    Analytic,
    /// Use observed success frequencies, pooled over positions that share the
    /// same ex-ante probability (those are i.i.d.).
    Sampled,
}

/// Min-entropy rate estimate with its (delta-method) standard error; the
/// analytic mode has zero error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateEstimate {
    pub rate: f64,
    pub sigma: f64,
}

/// `−(1/n) Σᵢ log₂ p̂ᵢ`. Positions are independent, so the rate of guessing the
/// whole string factorizes and no exponentially rare event is estimated.
pub fn empirical_min_entropy_rate(record: &GuessRecord, mode: RateMode) -> Result<f64> {
    Ok(min_entropy_rate_estimate(record, mode)?.rate)
}

pub fn min_entropy_rate_estimate(record: &GuessRecord, mode: RateMode) -> Result<RateEstimate> {
    let total = record.probability.len();
    if total == 0 {
        return Err(Error::EmptyRecord);
    }
    match mode {
        RateMode::Analytic => {
            let rate = -record.probability.iter().map(|p| p.log2()).sum::<f64>() / total as f64;
            Ok(RateEstimate { rate, sigma: 0.0 })
        }
        RateMode::Sampled => {
            // class key: the exact bit pattern of the ex-ante probability
            let mut classes: Vec<(u64, u64, u64)> = Vec::new();
            for (p, &c) in record.probability.iter().zip(&record.correct) {
                let key = p.to_bits();
                match classes.iter_mut().find(|(k, _, _)| *k == key) {
                    Some(entry) => {
                        entry.1 += 1;
                        entry.2 += c as u64;
                    }
                    None => classes.push((key, 1, c as u64)),
                }
            }
            let mut rate = 0.0;
            let mut var = 0.0;
            for (_, count, hits) in classes {
                let weight = count as f64 / total as f64;
                let p_hat = hits as f64 / count as f64;
                if hits == 0 {
                    return Ok(RateEstimate { rate: f64::INFINITY, sigma: f64::INFINITY });
                }
                rate += -weight * p_hat.log2();
                let ln2 = std::f64::consts::LN_2;
                var += weight * weight * (1.0 - p_hat) / (p_hat * count as f64 * ln2 * ln2);
            }
            Ok(RateEstimate { rate, sigma: var.sqrt() })
        }
    }
}

/// Statistical comparison of observed index sets against `Ψ(p)`, `p = 1/(d+1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexDistributionReport {
    pub n: usize,
    pub d: usize,
    pub samples: usize,
    pub p: f64,
    /// Empirical `Pr(i ∈ I)` per index.
    pub marginals: Vec<f64>,
    pub marginal_sigma: f64,
    /// Largest `|z|` of a marginal frequency.
    pub max_marginal_z: f64,
    /// Number of indices whose marginal deviates by more than 3σ.
    pub marginals_beyond_3sigma: usize,
    /// Largest `|z|` of a joint frequency `Pr(i, j ∈ I)` against `p²`.
    pub max_pairwise_z: f64,
    pub pairs_beyond_3sigma: usize,
    pub pairs_tested: usize,
    /// Full subset histogram, for `n ≤ 12`.
    pub exhaustive: Option<ChiSquare>,
    pub significance: f64,
    pub pass: bool,
}

/// Two-sided Bonferroni `z` threshold for `tests` comparisons at family-wise level `alpha`.
fn bonferroni_z(alpha: f64, tests: usize) -> f64 {
    let normal = Normal::standard();
    normal.inverse_cdf(1.0 - alpha / (2.0 * tests.max(1) as f64))
}

/// Check that honest index sets follow `Ψ(1/(d+1))`.
///
/// Marginals and pairwise joints are tested at any `n`; the exhaustive
/// `2ⁿ`-cell chi-square only for `n ≤ 12`. The overall verdict uses family-wise
/// level `significance` (Bonferroni for the z-tests).
pub fn check_index_distribution(transcripts: &[WseTranscript], significance: f64) -> Result<IndexDistributionReport> {
    if transcripts.len() < MIN_INDEX_SAMPLES {
        return Err(Error::InsufficientSamples { needed: MIN_INDEX_SAMPLES, got: transcripts.len() });
    }
    let (n, d) = (transcripts[0].n, transcripts[0].d);
    if n == 0 {
        return Err(Error::invalid("index distribution of n = 0 is degenerate"));
    }
    if transcripts.iter().any(|t| t.n != n || t.d != d) {
        return Err(Error::invalid("transcripts of different shape"));
    }
    let p = 1.0 / (d + 1) as f64;
    let samples = transcripts.len();
    let total = samples as f64;

    let mut counts = vec![0u64; n];
    let mut joint = vec![0u64; n * n];
    let mut histogram = (n <= MAX_EXHAUSTIVE_N).then(|| vec![0u64; 1 << n]);
    for t in transcripts {
        for &i in &t.index_set {
            counts[i] += 1;
        }
        for (a, &i) in t.index_set.iter().enumerate() {
            for &j in &t.index_set[a + 1..] {
                joint[i * n + j] += 1;
            }
        }
        if let Some(h) = histogram.as_mut() {
            let cell = t.index_set.iter().fold(0usize, |acc, &i| acc | (1 << i));
            h[cell] += 1;
        }
    }

    let marginal_sigma = bernoulli_sigma(p, samples as u64);
    let marginals: Vec<f64> = counts.iter().map(|&c| c as f64 / total).collect();
    let marginal_z: Vec<f64> = marginals.iter().map(|f| (f - p) / marginal_sigma).collect();
    let max_marginal_z = marginal_z.iter().fold(0.0f64, |m, z| m.max(z.abs()));
    let marginals_beyond_3sigma = marginal_z.iter().filter(|z| z.abs() > 3.0).count();

    let p2 = p * p;
    let pair_sigma = bernoulli_sigma(p2, samples as u64);
    let mut max_pairwise_z: f64 = 0.0;
    let mut pairs_beyond_3sigma = 0;
    let pairs_tested = n * (n - 1) / 2;
    for i in 0..n {
        for j in i + 1..n {
            let z = (joint[i * n + j] as f64 / total - p2) / pair_sigma;
            max_pairwise_z = max_pairwise_z.max(z.abs());
            pairs_beyond_3sigma += (z.abs() > 3.0) as usize;
        }
    }

    let exhaustive = match histogram {
        Some(h) => {
            let probs: Vec<f64> = (0..h.len())
                .map(|cell| {
                    let k = (cell as u64).count_ones() as i32;
                    p.powi(k) * (1.0 - p).powi(n as i32 - k)
                })
                .collect();
            Some(chi_square_gof(&h, &probs)?)
        }
        None => None,
    };

    // split the family-wise budget over the three families of tests
    let alpha = significance / 3.0;
    let pass = max_marginal_z <= bonferroni_z(alpha, n)
        && (pairs_tested == 0 || max_pairwise_z <= bonferroni_z(alpha, pairs_tested))
        && exhaustive.is_none_or(|c| c.passes(alpha));

    Ok(IndexDistributionReport {
        n,
        d,
        samples,
        p,
        marginals,
        marginal_sigma,
        max_marginal_z,
        marginals_beyond_3sigma,
        max_pairwise_z,
        pairs_beyond_3sigma,
        pairs_tested,
        exhaustive,
        significance,
        pass,
    })
}

/// Empirical lower tail of `|I|` against Hoeffding's bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HoeffdingReport {
    pub n: usize,
    pub d: usize,
    pub eta: usize,
    pub trials: usize,
    /// Fraction of runs with `|I| < n/η`.
    pub empirical_tail: f64,
    /// `exp(−2n [1/(d+1) − 1/η]²)`.
    pub bound: f64,
    pub sigma: f64,
    pub pass: bool,
}

/// `Pr(|I| ≤ n/η) ≤ exp(−2n [1/(d+1) − 1/η]²)`.
pub fn hoeffding_bound(n: usize, d: usize, eta: usize) -> f64 {
    let gap = 1.0 / (d + 1) as f64 - 1.0 / eta as f64;
    (-2.0 * n as f64 * gap * gap).exp()
}

pub fn check_hoeffding_tail(params: &WseParams, family: &MubFamily, eta: usize, trials: usize, seed: u64) -> Result<HoeffdingReport> {
    let (n, d) = (params.n, params.d());
    if eta <= d + 1 {
        return Err(Error::invalid(format!("η = {eta} must exceed d + 1 = {} for a nontrivial bound", d + 1)));
    }
    if n % eta != 0 {
        return Err(Error::invalid(format!("n = {n} must be divisible by η = {eta}")));
    }
    if trials == 0 {
        return Err(Error::InsufficientSamples { needed: 1, got: 0 });
    }
    let target = n / eta;
    let short = (0..trials)
        .into_par_iter()
        .map(|t| run_honest(params, family, &mut trial_stream(seed, t as u64)).map(|tr| (tr.index_set.len() < target) as u64))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum::<u64>();
    let empirical_tail = short as f64 / trials as f64;
    let bound = hoeffding_bound(n, d, eta);
    let sigma = bernoulli_sigma(bound, trials as u64);
    Ok(HoeffdingReport { n, d, eta, trials, empirical_tail, bound, sigma, pass: empirical_tail <= bound + 3.0 * sigma })
}
