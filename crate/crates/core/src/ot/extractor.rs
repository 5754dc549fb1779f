//! Toeplitz-matrix hashing over GF(2).
//!
//! A seed of `N + ℓ − 1` bits defines the `ℓ × N` matrix
//! `T[i][j] = s[i − j + N − 1]`. Dit strings are packed into bits first, each
//! dit taking `⌈log₂ d⌉` big-endian bits.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractorSeed {
    pub diagonals: BitString,
    pub ell: usize,
}

impl ExtractorSeed {
    pub fn new(diagonals: BitString, ell: usize) -> Result<Self> {
        if ell == 0 || diagonals.len() < ell {
            return Err(Error::invalid(format!("seed of {} bits cannot produce ℓ = {ell}", diagonals.len())));
        }
        Ok(ExtractorSeed { diagonals, ell })
    }

    pub fn random<R: Rng + ?Sized>(input_bits: usize, ell: usize, rng: &mut R) -> Result<Self> {
        if ell == 0 || ell > input_bits {
            return Err(Error::invalid(format!("ℓ = {ell} must lie in 1..={input_bits}")));
        }
        Self::new(BitString::random(input_bits + ell - 1, rng), ell)
    }

    pub fn input_bits(&self) -> usize {
        self.diagonals.len() + 1 - self.ell
    }

    /// Row `i` of the matrix.
    pub fn row(&self, i: usize) -> BitString {
        let n = self.input_bits();
        let mut row = BitString::zeros(n);
        for j in 0..n {
            row.set(j, self.diagonals.get(i + n - 1 - j));
        }
        row
    }
}

/// `⌈log₂ d⌉`.
pub fn bits_per_dit(d: usize) -> usize {
    assert!(d >= 2);
    (usize::BITS - (d - 1).leading_zeros()) as usize
}

pub fn pack_dits(dits: &[usize], d: usize) -> Result<BitString> {
    if d < 2 {
        return Err(Error::UnsupportedDimension(d));
    }
    let w = bits_per_dit(d);
    let mut out = BitString::zeros(dits.len() * w);
    for (k, &x) in dits.iter().enumerate() {
        if x >= d {
            return Err(Error::invalid(format!("dit {x} out of range for d = {d}")));
        }
        for b in 0..w {
            out.set(k * w + b, (x >> (w - 1 - b)) & 1 == 1);
        }
    }
    Ok(out)
}

/// Matrix-vector product `T·input`.
pub fn toeplitz_hash(input: &BitString, seed: &ExtractorSeed) -> Result<BitString> {
    if input.len() != seed.input_bits() {
        return Err(Error::LengthMismatch { expected: seed.input_bits(), got: input.len() });
    }
    let mut out = BitString::zeros(seed.ell);
    for i in 0..seed.ell {
        out.set(i, seed.row(i).dot(input));
    }
    Ok(out)
}

/// `Ext(x, r)` for a dit string `x`.
pub fn toeplitz_extract(dits: &[usize], d: usize, seed: &ExtractorSeed) -> Result<BitString> {
    toeplitz_hash(&pack_dits(dits, d)?, seed)
}
