//! Linear-query interactive hashing.
//!
//! Alice sends `t − 1` uniformly random queries, each linearly independent of
//! the previous ones; Bob answers every query with its inner product with his
//! input `w` over GF(2). The resulting linear system has exactly two solutions.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IhRound {
    pub query: BitString,
    pub response: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IhTranscript {
    pub t: usize,
    pub rounds: Vec<IhRound>,
    /// The two solutions, `w0 < w1`.
    pub w0: BitString,
    pub w1: BitString,
}

impl IhTranscript {
    /// Index `c` with `w_c = w`, if `w` is one of the two outputs.
    pub fn index_of(&self, w: &BitString) -> Option<u8> {
        if *w == self.w0 {
            Some(0)
        } else if *w == self.w1 {
            Some(1)
        } else {
            None
        }
    }

    pub fn output(&self, c: u8) -> &BitString {
        if c == 0 {
            &self.w0
        } else {
            &self.w1
        }
    }
}

/// Row-echelon basis of a GF(2) subspace, keyed by leading-bit position.
#[derive(Debug, Clone, Default)]
pub struct Span {
    rows: BTreeMap<usize, BitString>,
}

impl Span {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &BitString) -> BitString {
        let mut v = v.clone();
        for (&pivot, row) in &self.rows {
            if v.get(pivot) {
                v.xor_assign(row);
            }
        }
        v
    }

    pub fn contains(&self, v: &BitString) -> bool {
        self.reduce(v).is_zero()
    }

    /// Add `v`; returns `false` if it was already in the span.
    pub fn insert(&mut self, v: &BitString) -> bool {
        let r = self.reduce(v);
        let lead = r.iter().position(|b| b);
        match lead {
            None => false,
            Some(pivot) => {
                // keep rows fully reduced so that `reduce` works in pivot order
                for row in self.rows.values_mut() {
                    if row.get(pivot) {
                        row.xor_assign(&r);
                    }
                }
                self.rows.insert(pivot, r);
                true
            }
        }
    }
}

/// Bob's side: answers queries against his private input.
#[derive(Debug, Clone)]
pub struct IhBob {
    w: BitString,
}

impl IhBob {
    pub fn new(w: BitString) -> Self {
        IhBob { w }
    }

    pub fn respond(&self, query: &BitString) -> bool {
        query.dot(&self.w)
    }
}

/// Alice's side: draws fresh independent queries.
#[derive(Debug, Clone)]
pub struct IhAlice {
    t: usize,
    span: Span,
    rounds: Vec<IhRound>,
}

impl IhAlice {
    pub fn new(t: usize) -> Self {
        IhAlice { t, span: Span::new(), rounds: Vec::new() }
    }

    pub fn rounds_remaining(&self) -> usize {
        self.t.saturating_sub(1) - self.rounds.len()
    }

    pub fn next_query<R: Rng + ?Sized>(&mut self, rng: &mut R) -> BitString {
        loop {
            let q = BitString::random(self.t, rng);
            if !self.span.contains(&q) {
                self.span.insert(&q);
                return q;
            }
        }
    }

    pub fn record(&mut self, query: BitString, response: bool) {
        self.rounds.push(IhRound { query, response });
    }

    pub fn finish(self) -> Result<IhTranscript> {
        let (w0, w1) = solve(self.t, &self.rounds)?;
        Ok(IhTranscript { t: self.t, rounds: self.rounds, w0, w1 })
    }
}

/// Run both parties on Bob's input `w`. Returns the transcript and Bob's `c`.
pub fn interactive_hashing<R: Rng + ?Sized>(w: &BitString, rng: &mut R) -> Result<(IhTranscript, u8)> {
    let t = w.len();
    if t == 0 {
        return Err(Error::invalid("interactive hashing needs t ≥ 1"));
    }
    let bob = IhBob::new(w.clone());
    let mut alice = IhAlice::new(t);
    while alice.rounds_remaining() > 0 {
        let q = alice.next_query(rng);
        let a = bob.respond(&q);
        alice.record(q, a);
    }
    let transcript = alice.finish()?;
    let c = transcript
        .index_of(w)
        .ok_or_else(|| Error::Numerical("input not among the interactive-hashing outputs".into()))?;
    Ok((transcript, c))
}

/// The two solutions of a rank-`(t−1)` system `⟨q_i, v⟩ = a_i`, sorted.
pub fn solve(t: usize, rounds: &[IhRound]) -> Result<(BitString, BitString)> {
    if t == 0 || rounds.len() + 1 != t {
        return Err(Error::invalid(format!("expected {} rounds for t = {t}, got {}", t.saturating_sub(1), rounds.len())));
    }
    // augmented rows: query bits followed by the response
    let mut rows: Vec<(BitString, bool)> = rounds.iter().map(|r| (r.query.clone(), r.response)).collect();
    if rows.iter().any(|(q, _)| q.len() != t) {
        return Err(Error::invalid("query length differs from t"));
    }
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..t {
        let Some(p) = (next..rows.len()).find(|&i| rows[i].0.get(col)) else { continue };
        rows.swap(next, p);
        let (pq, pa) = rows[next].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != next && row.0.get(col) {
                row.0.xor_assign(&pq);
                row.1 ^= pa;
            }
        }
        pivots.push(col);
        next += 1;
    }
    if pivots.len() != t - 1 {
        return Err(Error::invalid("queries are linearly dependent"));
    }
    let free = (0..t).find(|c| !pivots.contains(c)).expect("one free column");
    let mut sols = [0u8, 1].map(|b| {
        let mut v = BitString::zeros(t);
        v.set(free, b == 1);
        for (row, &col) in rows.iter().zip(&pivots) {
            v.set(col, row.1 ^ (row.0.get(free) && b == 1));
        }
        v
    });
    sols.sort();
    let [w0, w1] = sols;
    Ok((w0, w1))
}

/// Sibling distribution for input `w` over every ordered sequence of
/// independent queries (each equally likely under the honest query law).
/// Returns `sibling → number of query sequences`. Exhaustive; use small `t`.
pub fn sibling_distribution_exhaustive(w: &BitString) -> Result<BTreeMap<BitString, u64>> {
    let t = w.len();
    if t == 0 || t > 6 {
        return Err(Error::invalid("exhaustive enumeration supports 1 ≤ t ≤ 6"));
    }
    fn rec(t: usize, w: &BitString, span: &Span, rounds: &mut Vec<IhRound>, out: &mut BTreeMap<BitString, u64>) -> Result<()> {
        if rounds.len() + 1 == t {
            let (w0, w1) = solve(t, rounds)?;
            let sibling = if w0 == *w { w1 } else { w0 };
            *out.entry(sibling).or_default() += 1;
            return Ok(());
        }
        for v in 1..(1u64 << t) {
            let q = BitString::from_u64(v, t);
            if span.contains(&q) {
                continue;
            }
            let mut next = span.clone();
            next.insert(&q);
            let response = q.dot(w);
            rounds.push(IhRound { query: q, response });
            rec(t, w, &next, rounds, out)?;
            rounds.pop();
        }
        Ok(())
    }
    let mut out = BTreeMap::new();
    rec(t, w, &Span::new(), &mut Vec::new(), &mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn all_strings(t: usize) -> impl Iterator<Item = BitString> {
        (0..(1u64 << t)).map(move |v| BitString::from_u64(v, t))
    }

    /// Brute-force solution set of the round constraints.
    fn brute_solutions(t: usize, rounds: &[IhRound]) -> Vec<BitString> {
        all_strings(t).filter(|v| rounds.iter().all(|r| r.query.dot(v) == r.response)).collect()
    }

    #[test]
    fn t1_has_no_rounds() {
        let mut rng = seeded(1);
        for v in 0..2 {
            let w = BitString::from_u64(v, 1);
            let (tr, c) = interactive_hashing(&w, &mut rng).unwrap();
            assert!(tr.rounds.is_empty());
            assert_eq!(tr.w0.to_string(), "0");
            assert_eq!(tr.w1.to_string(), "1");
            assert_eq!(c as u64, v);
        }
    }

    #[test]
    fn t2_matches_enumeration() {
        let w: BitString = "10".parse().unwrap();
        for seed in 0..20 {
            let (tr, c) = interactive_hashing(&w, &mut seeded(seed)).unwrap();
            assert_eq!(tr.rounds.len(), 1);
            assert!(!tr.rounds[0].query.is_zero());
            assert_eq!(brute_solutions(2, &tr.rounds), vec![tr.w0.clone(), tr.w1.clone()]);
            assert_eq!(tr.output(c), &w);
        }
    }

    #[test]
    fn exhaustive_small_t() {
        for t in 1..=8 {
            let mut rng = seeded(t as u64);
            for w in all_strings(t) {
                for _ in 0..100 {
                    let (tr, c) = interactive_hashing(&w, &mut rng).unwrap();
                    assert_eq!(tr.rounds.len(), t - 1);
                    assert!(tr.w0 < tr.w1);
                    assert_eq!(tr.output(c), &w);
                    let mut span = Span::new();
                    assert!(tr.rounds.iter().all(|r| span.insert(&r.query)));
                    if t <= 5 {
                        assert_eq!(brute_solutions(t, &tr.rounds), vec![tr.w0.clone(), tr.w1.clone()]);
                    }
                }
            }
        }
    }

    #[test]
    fn larger_t_sampled() {
        let mut rng = seeded(99);
        for t in [12, 16, 20, 64, 130] {
            for _ in 0..20 {
                let w = BitString::random(t, &mut rng);
                let (tr, c) = interactive_hashing(&w, &mut rng).unwrap();
                assert_eq!(tr.output(c), &w);
                assert_ne!(tr.w0, tr.w1);
            }
        }
    }

    #[test]
    fn dependent_queries_rejected() {
        let q: BitString = "110".parse().unwrap();
        let rounds = vec![IhRound { query: q.clone(), response: false }, IhRound { query: q, response: false }];
        assert!(solve(3, &rounds).is_err());
    }

    #[test]
    fn zero_input_sibling_is_uniform() {
        // Bob fixing w = 0 still cannot steer the other output: every nonzero
        // string is reachable, equally often.
        for t in 2..=4 {
            let w = BitString::zeros(t);
            let dist = sibling_distribution_exhaustive(&w).unwrap();
            assert_eq!(dist.len(), (1 << t) - 1);
            assert!(!dist.contains_key(&w));
            let counts: Vec<u64> = dist.values().copied().collect();
            assert!(counts.iter().all(|&c| c == counts[0]));
        }
    }
}
