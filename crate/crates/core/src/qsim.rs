//! Per-qudit simulation.
//!
//! Protocol states are tensor products of single-qudit states, so nothing here
//! ever holds an `n`-qudit state vector.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::mub::{check_normalized, measurement_distribution, MubFamily};
use crate::{Error, Result};

/// `N(ρ) = r·ρ + (1 − r)·𝟙/d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DepolarizingChannel {
    d: usize,
    r: f64,
}

impl DepolarizingChannel {
    pub fn new(d: usize, r: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::invalid(format!("channel dimension must be ≥ 2, got {d}")));
        }
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::invalid(format!("retention r must lie in [0, 1], got {r}")));
        }
        Ok(DepolarizingChannel { d, r })
    }

    pub fn identity(d: usize) -> Result<Self> {
        Self::new(d, 1.0)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn retention(&self) -> f64 {
        self.r
    }

    /// Probability of decoding a stored dit after measuring in the correct basis: `r + (1 − r)/d`.
    pub fn stored_guess_probability(&self) -> f64 {
        self.r + (1.0 - self.r) / self.d as f64
    }
}

/// A measurement result together with the basis it was taken in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub value: usize,
    pub basis_used: usize,
}

/// Draw an index from a probability vector.
pub fn sample_index<R: Rng + ?Sized>(probabilities: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, &p) in probabilities.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    // roundoff: fall back to the last cell with positive mass
    probabilities.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

/// Measure `state` in basis `basis_index` of `family`, sampling by the Born rule.
pub fn sample_measurement<R: Rng + ?Sized>(
    state: &[Complex64],
    family: &MubFamily,
    basis_index: usize,
    rng: &mut R,
) -> Result<Outcome> {
    if basis_index >= family.bases().len() {
        return Err(Error::invalid(format!("basis index {basis_index} out of range")));
    }
    let p = measurement_distribution(state, family.basis(basis_index))?;
    Ok(Outcome { value: sample_index(&p, rng), basis_used: basis_index })
}

/// One use of the depolarizing channel: `true` if the state survives, `false`
/// if it is replaced by the maximally mixed state.
pub fn depolarize_survival<R: Rng + ?Sized>(channel: &DepolarizingChannel, rng: &mut R) -> bool {
    rng.random::<f64>() < channel.r
}

/// Posterior over the encoded dit given an outcome, once the true basis is known.
///
/// A matching basis pins the dit; any other basis of the family is unbiased,
/// so the posterior is uniform.
pub fn posterior_guess(outcome: Outcome, true_basis: usize, d: usize) -> Vec<f64> {
    if outcome.basis_used == true_basis {
        let mut p = vec![0.0; d];
        p[outcome.value] = 1.0;
        p
    } else {
        vec![1.0 / d as f64; d]
    }
}

/// Maximum-likelihood guess, breaking ties uniformly at random.
pub fn guess_from_posterior<R: Rng + ?Sized>(posterior: &[f64], rng: &mut R) -> usize {
    let best = posterior.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let ties: Vec<usize> = (0..posterior.len()).filter(|&i| posterior[i] >= best - 1e-15).collect();
    ties[rng.random_range(0..ties.len())]
}

/// Success probability of measuring in a uniformly random MUB and guessing after
/// the basis is revealed: `1/(d+1)·1 + d/(d+1)·1/d = 2/(d+1)`.
pub fn random_mub_guess_probability(d: usize) -> f64 {
    2.0 / (d + 1) as f64
}

/// Haar-random pure state (normalized complex Gaussian vector).
pub fn haar_random_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..d)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if norm > 1e-12 {
            let state: Vec<Complex64> = v.into_iter().map(|z| z / norm).collect();
            debug_assert!(check_normalized(&state).is_ok());
            return state;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mub::{build_mubs, Dimension};
    use crate::rng::seeded;
    use crate::stats::within_sigma;

    fn family(d: usize) -> MubFamily {
        build_mubs(Dimension::new(d).unwrap())
    }

    /// Bayes posterior with a uniform prior over the dit encoded in `true_basis`.
    fn bayes_oracle(f: &MubFamily, outcome: Outcome, true_basis: usize) -> Vec<f64> {
        let d = f.d();
        let likelihood: Vec<f64> = (0..d)
            .map(|x| {
                measurement_distribution(f.basis(true_basis).vector(x), f.basis(outcome.basis_used)).unwrap()
                    [outcome.value]
            })
            .collect();
        let z: f64 = likelihood.iter().sum();
        likelihood.into_iter().map(|l| l / z).collect()
    }

    #[test]
    fn posterior_matches_bayes_oracle() {
        for d in [2, 3, 5] {
            let f = family(d);
            for used in 0..=d {
                for truth in 0..=d {
                    for value in 0..d {
                        let o = Outcome { value, basis_used: used };
                        let got = posterior_guess(o, truth, d);
                        let want = bayes_oracle(&f, o, truth);
                        for (g, w) in got.iter().zip(&want) {
                            assert!((g - w).abs() < 1e-12, "d={d} used={used} truth={truth}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn posterior_examples() {
        assert_eq!(posterior_guess(Outcome { value: 1, basis_used: 0 }, 0, 2), vec![0.0, 1.0]);
        assert_eq!(posterior_guess(Outcome { value: 1, basis_used: 0 }, 1, 2), vec![0.5, 0.5]);
        assert_eq!(posterior_guess(Outcome { value: 3, basis_used: 2 }, 4, 5), vec![0.2; 5]);
    }

    #[test]
    fn computational_zero_always_yields_zero() {
        let f = family(2);
        let mut rng = seeded(1);
        let zero = [Complex64::ONE, Complex64::ZERO];
        for _ in 0..1000 {
            assert_eq!(sample_measurement(&zero, &f, 0, &mut rng).unwrap().value, 0);
        }
    }

    #[test]
    fn unbiased_basis_is_a_fair_coin() {
        let f = family(2);
        let mut rng = seeded(2);
        let zero = [Complex64::ONE, Complex64::ZERO];
        let trials = 100_000u64;
        let zeros = (0..trials).filter(|_| sample_measurement(&zero, &f, 1, &mut rng).unwrap().value == 0).count();
        assert!(within_sigma(zeros as f64 / trials as f64, 0.5, trials, 3.0));
    }

    #[test]
    fn matched_basis_recovers_the_dit() {
        let f = family(3);
        let mut rng = seeded(3);
        for basis in 0..4 {
            for x in 0..3 {
                let o = sample_measurement(f.basis(basis).vector(x), &f, basis, &mut rng).unwrap();
                assert_eq!(o, Outcome { value: x, basis_used: basis });
            }
        }
    }

    #[test]
    fn survival_rates() {
        let mut rng = seeded(4);
        let always = DepolarizingChannel::new(2, 1.0).unwrap();
        let never = DepolarizingChannel::new(2, 0.0).unwrap();
        assert!((0..1000).all(|_| depolarize_survival(&always, &mut rng)));
        assert!((0..1000).all(|_| !depolarize_survival(&never, &mut rng)));
        let ch = DepolarizingChannel::new(3, 0.7).unwrap();
        let trials = 100_000u64;
        let kept = (0..trials).filter(|_| depolarize_survival(&ch, &mut rng)).count();
        assert!(within_sigma(kept as f64 / trials as f64, 0.7, trials, 3.0));
        assert!(DepolarizingChannel::new(3, 1.2).is_err());
    }

    #[test]
    fn random_mub_strategy_success_rate() {
        for d in [2, 3, 5] {
            let f = family(d);
            let mut rng = seeded(10 + d as u64);
            let trials = 100_000u64;
            let mut hits = 0u64;
            for _ in 0..trials {
                let x = rng.random_range(0..d);
                let theta = rng.random_range(0..=d);
                let guess_basis = rng.random_range(0..=d);
                let o = sample_measurement(f.basis(theta).vector(x), &f, guess_basis, &mut rng).unwrap();
                let g = guess_from_posterior(&posterior_guess(o, theta, d), &mut rng);
                hits += (g == x) as u64;
            }
            let p = random_mub_guess_probability(d);
            assert!(within_sigma(hits as f64 / trials as f64, p, trials, 3.0), "d={d}");
            assert!((-p.log2() - crate::mub::uncertainty_bound(d)).abs() < 1e-12);
        }
    }

    #[test]
    fn haar_states_are_normalized() {
        let mut rng = seeded(5);
        for d in [2, 3, 5] {
            let s = haar_random_state(d, &mut rng);
            assert!(check_normalized(&s).is_ok());
        }
    }
}
