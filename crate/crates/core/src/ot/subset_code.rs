//! Injective encoding of `t`-bit strings as `k`-subsets of `0..m`.
//!
//! `t = ⌊log₂ C(m, k)⌋`, so `2^t ≤ C(m, k) < 2^{t+1}` and at least half of all
//! `k`-subsets are reachable. A string is read as a big-endian integer and
//! unranked in colexicographic order through the combinatorial number system.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::bits::BitString;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetCode {
    m: usize,
    k: usize,
    t: usize,
    /// `pascal[c][i] = C(c, i)` for `c ≤ m`, `i ≤ k`.
    pascal: Vec<Vec<BigUint>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetCodeInfo {
    pub m: usize,
    pub k: usize,
    pub t: usize,
    pub binomial: String,
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Code for subsets of size `m/η` of `0..m`.
pub fn make_subset_code(m: usize, eta: usize) -> Result<SubsetCode> {
    if eta == 0 || m == 0 || m % eta != 0 {
        return Err(Error::invalid(format!("m = {m} must be a positive multiple of η = {eta}")));
    }
    SubsetCode::new(m, m / eta)
}

impl SubsetCode {
    pub fn new(m: usize, k: usize) -> Result<Self> {
        if k == 0 || k > m {
            return Err(Error::invalid(format!("subset size {k} must lie in 1..={m}")));
        }
        let mut pascal = vec![vec![BigUint::zero(); k + 1]; m + 1];
        for c in 0..=m {
            pascal[c][0] = BigUint::one();
            for i in 1..=k.min(c) {
                pascal[c][i] = &pascal[c - 1][i - 1] + &pascal[c - 1][i];
            }
        }
        let total = &pascal[m][k];
        let t = (total.bits() - 1) as usize;
        Ok(SubsetCode { m, k, t, pascal })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Code length in bits.
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn binomial(&self) -> &BigUint {
        &self.pascal[self.m][self.k]
    }

    pub fn info(&self) -> SubsetCodeInfo {
        SubsetCodeInfo { m: self.m, k: self.k, t: self.t, binomial: self.binomial().to_string() }
    }

    /// Colexicographic unranking of `rank` (which must be `< C(m, k)`).
    pub fn unrank(&self, rank: &BigUint) -> Result<Vec<usize>> {
        if rank >= self.binomial() {
            return Err(Error::invalid("rank out of range"));
        }
        let mut rest = rank.clone();
        let mut out = vec![0; self.k];
        let mut upper = self.m;
        for i in (1..=self.k).rev() {
            // largest c < upper with C(c, i) ≤ rest
            let mut c = upper - 1;
            while self.pascal[c][i] > rest {
                c -= 1;
            }
            rest -= &self.pascal[c][i];
            out[i - 1] = c;
            upper = c;
        }
        Ok(out)
    }

    /// Colexicographic rank of a sorted `k`-subset.
    pub fn rank(&self, subset: &[usize]) -> Result<BigUint> {
        if subset.len() != self.k {
            return Err(Error::LengthMismatch { expected: self.k, got: subset.len() });
        }
        if subset.windows(2).any(|w| w[0] >= w[1]) || subset.last().is_some_and(|&x| x >= self.m) {
            return Err(Error::invalid("subset must be strictly increasing within 0..m"));
        }
        Ok(subset.iter().enumerate().map(|(i, &c)| &self.pascal[c][i + 1]).sum())
    }

    /// `Enc(w)`: sorted subset for a `t`-bit string.
    pub fn enc(&self, w: &BitString) -> Result<Vec<usize>> {
        if w.len() != self.t {
            return Err(Error::LengthMismatch { expected: self.t, got: w.len() });
        }
        self.unrank(&w.to_biguint())
    }

    /// Inverse of [`enc`](Self::enc); fails for subsets outside the code's image.
    pub fn dec(&self, subset: &[usize]) -> Result<BitString> {
        let rank = self.rank(subset)?;
        BitString::from_biguint(&rank, self.t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// All k-subsets of 0..m in colex order: sort by the reversed element list.
    fn colex_subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
        fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for x in start..m {
                cur.push(x);
                rec(x + 1, m, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(0, m, k, &mut Vec::new(), &mut out);
        out.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
        out
    }

    #[test]
    fn four_choose_two() {
        let code = make_subset_code(4, 2).unwrap();
        assert_eq!(code.t(), 2);
        assert_eq!(code.binomial(), &BigUint::from(6u32));
        let got: Vec<_> = (0..4).map(|v| code.enc(&BitString::from_u64(v, 2)).unwrap()).collect();
        // {1,2},{1,3},{2,3},{1,4} in 1-based labels
        assert_eq!(got, vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 3]]);
    }

    #[test]
    fn unranking_matches_enumeration_oracle() {
        for (m, k) in [(6, 2), (7, 3), (9, 4), (12, 2)] {
            let code = SubsetCode::new(m, k).unwrap();
            for (rank, subset) in colex_subsets(m, k).into_iter().enumerate() {
                assert_eq!(code.unrank(&BigUint::from(rank)).unwrap(), subset);
            }
        }
    }

    #[test]
    fn singletons() {
        let code = make_subset_code(6, 6).unwrap();
        assert_eq!(code.t(), 2);
        for v in 0..4 {
            assert_eq!(code.enc(&BitString::from_u64(v, 2)).unwrap(), vec![v as usize]);
        }
        let code = make_subset_code(12, 12).unwrap();
        assert_eq!(code.t(), 3);
    }

    #[test]
    fn divisibility() {
        assert!(make_subset_code(5, 2).is_err());
        assert!(make_subset_code(0, 2).is_err());
    }

    #[test]
    fn dec_rejects_unreachable_subsets() {
        let code = make_subset_code(4, 2).unwrap();
        // ranks 4 and 5 are beyond 2^t = 4
        assert!(code.dec(&[1, 3]).is_err());
        assert!(code.dec(&[2, 3]).is_err());
        assert_eq!(code.dec(&[0, 3]).unwrap().to_u64(), Some(3));
    }

    #[test]
    fn length_bounds_hold() {
        for eta in [6, 8] {
            for m in (eta..=120).step_by(eta) {
                let code = make_subset_code(m, eta).unwrap();
                let lo = BigUint::one() << code.t();
                assert!(&lo <= code.binomial() && code.binomial() <= &(lo << 1u32));
            }
        }
    }
}
