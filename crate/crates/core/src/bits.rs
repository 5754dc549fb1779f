//! Fixed-length bit strings over GF(2).
//!
//! Bit 0 is the first (most significant) bit, so the derived ordering is
//! lexicographic and the integer value reads big-endian.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    words: Vec<u64>,
    len: usize,
}

#[inline]
fn mask(i: usize) -> u64 {
    1u64 << (63 - (i % 64))
}

impl BitString {
    pub fn zeros(len: usize) -> Self {
        BitString { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut s = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            s.set(i, b);
        }
        s
    }

    /// The `len` low-order bits of `value`, most significant first.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= 64, "from_u64 supports at most 64 bits");
        let mut s = Self::zeros(len);
        for i in 0..len {
            s.set(i, (value >> (len - 1 - i)) & 1 == 1);
        }
        s
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut s = Self::zeros(len);
        for w in s.words.iter_mut() {
            *w = rng.random();
        }
        s.clear_tail();
        s
    }

    fn clear_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= !0u64 << (64 - rem);
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] & mask(i) != 0
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        debug_assert!(i < self.len);
        if bit {
            self.words[i / 64] |= mask(i);
        } else {
            self.words[i / 64] &= !mask(i);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn xor(&self, other: &BitString) -> BitString {
        assert_eq!(self.len, other.len, "xor of unequal lengths");
        BitString {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a ^ b).collect(),
            len: self.len,
        }
    }

    pub fn xor_assign(&mut self, other: &BitString) {
        assert_eq!(self.len, other.len, "xor of unequal lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitString) -> bool {
        assert_eq!(self.len, other.len, "dot of unequal lengths");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_biguint(&self) -> BigUint {
        let mut v = BigUint::zero();
        for b in self.iter() {
            v <<= 1u32;
            if b {
                v += 1u32;
            }
        }
        v
    }

    /// Big-endian `len`-bit representation of `value`; fails if it does not fit.
    pub fn from_biguint(value: &BigUint, len: usize) -> Result<Self> {
        if value.bits() as usize > len {
            return Err(Error::invalid(format!("value needs {} bits, only {len} available", value.bits())));
        }
        let mut s = Self::zeros(len);
        for i in 0..len {
            s.set(i, value.bit((len - 1 - i) as u64));
        }
        Ok(s)
    }

    /// Integer value when `len <= 64`.
    pub fn to_u64(&self) -> Option<u64> {
        (self.len <= 64).then(|| self.iter().fold(0u64, |acc, b| (acc << 1) | b as u64))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::invalid(format!("bad bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_bits(&bits))
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ordering_is_lexicographic() {
        let a: BitString = "0111".parse().unwrap();
        let b: BitString = "1000".parse().unwrap();
        assert!(a < b);
        assert_eq!(a.to_u64(), Some(7));
        assert_eq!(BitString::from_u64(8, 4), b);
    }

    #[test]
    fn dot_and_xor() {
        let a: BitString = "1101".parse().unwrap();
        let b: BitString = "1011".parse().unwrap();
        assert!(!a.dot(&b));
        assert_eq!(a.xor(&b).to_string(), "0110");
    }

    proptest! {
        #[test]
        fn biguint_and_text_round_trip(bits in proptest::collection::vec(any::<bool>(), 0..150)) {
            let s = BitString::from_bits(&bits);
            prop_assert_eq!(BitString::from_biguint(&s.to_biguint(), bits.len()).unwrap(), s.clone());
            prop_assert_eq!(s.to_string().parse::<BitString>().unwrap(), s);
        }
    }
}
