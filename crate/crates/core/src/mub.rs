//! Complete families of mutually unbiased bases (MUBs).
//!
//! For `d = 2` the family is the eigenbases of Z, X and Y. For an odd prime `d`
//! it is the computational basis followed by the `d` bases whose vectors have
//! components `ω^{a·j² + b·j} / √d` with `ω = e^{2πi/d}`, where `a` labels the
//! basis and `b` the vector.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::stats::shannon_entropy;
use crate::{Error, Result};

pub const ORTHONORMALITY_TOL: f64 = 1e-12;
pub const UNBIASEDNESS_TOL: f64 = 1e-10;
/// Accepted deviation of `‖ψ‖²` from 1 for input states.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// A qudit dimension supported by the explicit construction: 2 or an odd prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Dimension(usize);

impl Dimension {
    pub fn new(d: usize) -> Result<Self> {
        if d == 2 || (d > 2 && is_prime(d)) {
            Ok(Dimension(d))
        } else {
            Err(Error::UnsupportedDimension(d))
        }
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Number of bases in a complete family, `d + 1`.
    pub fn num_bases(self) -> usize {
        self.0 + 1
    }
}

fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

/// An orthonormal basis; row `x` is the basis vector `|x⟩` in computational components.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    vectors: Vec<Vec<Complex64>>,
}

impl Basis {
    /// Wrap raw rows without checking orthonormality (see [`verify_mubs`]).
    pub fn from_rows(vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        let d = vectors.len();
        if let Some(bad) = vectors.iter().find(|v| v.len() != d) {
            return Err(Error::LengthMismatch { expected: d, got: bad.len() });
        }
        Ok(Basis { vectors })
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vector(&self, x: usize) -> &[Complex64] {
        &self.vectors[x]
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn vectors_mut(&mut self) -> &mut [Vec<Complex64>] {
        &mut self.vectors
    }
}

/// `⟨u|v⟩`, antilinear in the first argument.
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum()
}

/// The `d + 1` bases of a complete MUB family; index 0 is the computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct MubFamily {
    dim: Dimension,
    bases: Vec<Basis>,
}

impl MubFamily {
    /// Assemble a family from arbitrary bases; validity is checked by [`verify_mubs`].
    pub fn from_bases(dim: Dimension, bases: Vec<Basis>) -> Result<Self> {
        if bases.len() != dim.num_bases() {
            return Err(Error::LengthMismatch { expected: dim.num_bases(), got: bases.len() });
        }
        if let Some(b) = bases.iter().find(|b| b.dim() != dim.get()) {
            return Err(Error::DimensionMismatch { expected: dim.get(), got: b.dim() });
        }
        Ok(MubFamily { dim, bases })
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn d(&self) -> usize {
        self.dim.get()
    }

    pub fn bases(&self) -> &[Basis] {
        &self.bases
    }

    pub fn basis(&self, index: usize) -> &Basis {
        &self.bases[index]
    }

    pub fn bases_mut(&mut self) -> &mut [Basis] {
        &mut self.bases
    }

    /// Debug dump: an array of bases, each an array of vectors of `[re, im]` pairs.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.bases
                .iter()
                .map(|b| {
                    b.vectors
                        .iter()
                        .map(|v| v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
                        .collect::<Vec<_>>()
                })
                .map(|b| serde_json::to_value(b).expect("finite amplitudes serialize"))
                .collect(),
        )
    }
}

/// Build the complete MUB family for `dim`.
pub fn build_mubs(dim: Dimension) -> MubFamily {
    let d = dim.get();
    let computational = Basis {
        vectors: (0..d)
            .map(|x| (0..d).map(|j| if j == x { Complex64::ONE } else { Complex64::ZERO }).collect())
            .collect(),
    };
    let mut bases = vec![computational];
    if d == 2 {
        let h = FRAC_1_SQRT_2;
        let i = Complex64::I;
        bases.push(Basis {
            vectors: vec![
                vec![Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
                vec![Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
            ],
        });
        bases.push(Basis {
            vectors: vec![vec![Complex64::new(h, 0.0), i * h], vec![Complex64::new(h, 0.0), -i * h]],
        });
    } else {
        let scale = 1.0 / (d as f64).sqrt();
        for a in 0..d {
            let vectors = (0..d)
                .map(|b| {
                    (0..d)
                        .map(|j| {
                            // reduce the exponent mod d before taking the phase
                            let k = (a * j * j + b * j) % d;
                            Complex64::from_polar(scale, 2.0 * PI * k as f64 / d as f64)
                        })
                        .collect()
                })
                .collect();
            bases.push(Basis { vectors });
        }
    }
    MubFamily { dim, bases }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MubVerification {
    pub d: usize,
    /// Largest `|⟨x|y⟩ − δ_xy|` within any basis.
    pub max_orthonormality_deviation: f64,
    /// Largest `||⟨x|y⟩|² − 1/d|` across distinct bases.
    pub max_unbiasedness_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn verify_mubs(family: &MubFamily, tol: f64) -> MubVerification {
    let d = family.d();
    let mut ortho: f64 = 0.0;
    for basis in &family.bases {
        for (x, u) in basis.vectors.iter().enumerate() {
            for (y, v) in basis.vectors.iter().enumerate() {
                let target = if x == y { Complex64::ONE } else { Complex64::ZERO };
                ortho = ortho.max((inner(u, v) - target).norm());
            }
        }
    }
    let mut unbiased: f64 = 0.0;
    let target = 1.0 / d as f64;
    for (i, bi) in family.bases.iter().enumerate() {
        for bj in &family.bases[i + 1..] {
            for u in &bi.vectors {
                for v in &bj.vectors {
                    unbiased = unbiased.max((inner(u, v).norm_sqr() - target).abs());
                }
            }
        }
    }
    MubVerification {
        d,
        max_orthonormality_deviation: ortho,
        max_unbiasedness_deviation: unbiased,
        tolerance: tol,
        pass: ortho <= tol && unbiased <= tol,
    }
}

pub(crate) fn check_normalized(state: &[Complex64]) -> Result<()> {
    let n = norm_sqr(state);
    if (n - 1.0).abs() > NORMALIZATION_TOL || !n.is_finite() {
        return Err(Error::NotNormalized(n));
    }
    Ok(())
}

/// Born-rule distribution `p(x) = |⟨x|ψ⟩|²` of measuring `state` in `basis`.
pub fn measurement_distribution(state: &[Complex64], basis: &Basis) -> Result<Vec<f64>> {
    if state.len() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), got: state.len() });
    }
    check_normalized(state)?;
    Ok(basis.vectors.iter().map(|v| inner(v, state).norm_sqr()).collect())
}

/// Mean Shannon entropy (bits) of the outcome distributions over all `d + 1` bases.
pub fn avg_mub_entropy(state: &[Complex64], family: &MubFamily) -> Result<f64> {
    let mut total = 0.0;
    for basis in &family.bases {
        total += shannon_entropy(&measurement_distribution(state, basis)?);
    }
    Ok(total / family.bases.len() as f64)
}

/// Lower bound `log₂(d+1) − 1` on [`avg_mub_entropy`].
pub fn uncertainty_bound(d: usize) -> f64 {
    ((d + 1) as f64).log2() - 1.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn qubit_family_is_pauli_eigenbases() {
        let f = build_mubs(Dimension::new(2).unwrap());
        assert_eq!(f.bases().len(), 3);
        let h = FRAC_1_SQRT_2;
        assert_eq!(f.basis(0).vector(1), &[c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(f.basis(1).vector(1), &[c(h, 0.0), c(-h, 0.0)]);
        assert_eq!(f.basis(2).vector(0), &[c(h, 0.0), c(0.0, h)]);
        let v = verify_mubs(&f, 1e-10);
        assert!(v.pass);
        assert!(v.max_unbiasedness_deviation < 1e-15);
        assert!(v.max_orthonormality_deviation < 1e-15);
    }

    #[test]
    fn qutrit_cross_overlaps_are_one_third() {
        let f = build_mubs(Dimension::new(3).unwrap());
        assert_eq!(f.bases().len(), 4);
        for i in 0..4 {
            for j in 0..4 {
                if i == j {
                    continue;
                }
                for u in f.basis(i).vectors() {
                    for v in f.basis(j).vectors() {
                        assert!((inner(u, v).norm_sqr() - 1.0 / 3.0).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn unsupported_dimensions() {
        for d in [0, 1, 4, 6, 9, 15] {
            assert_eq!(Dimension::new(d), Err(Error::UnsupportedDimension(d)));
        }
        assert!(Dimension::new(7).is_ok());
    }

    #[test]
    fn scaled_vector_fails_verification() {
        let mut f = build_mubs(Dimension::new(3).unwrap());
        for z in f.bases_mut()[2].vectors_mut()[1].iter_mut() {
            *z *= 1.01;
        }
        assert!(!verify_mubs(&f, 1e-10).pass);
    }

    #[test]
    fn seven_passes_and_tiny_tolerance_fails() {
        let f = build_mubs(Dimension::new(7).unwrap());
        assert!(verify_mubs(&f, 1e-10).pass);
        assert!(!verify_mubs(&f, 1e-20).pass);
    }

    #[test]
    fn distributions() {
        let f = build_mubs(Dimension::new(2).unwrap());
        let zero = [c(1.0, 0.0), c(0.0, 0.0)];
        assert_eq!(measurement_distribution(&zero, f.basis(0)).unwrap(), vec![1.0, 0.0]);
        let p = measurement_distribution(&zero, f.basis(1)).unwrap();
        assert_relative_eq!(p[0], 0.5, epsilon = 1e-15);
        assert_relative_eq!(p[1], 0.5, epsilon = 1e-15);

        let f3 = build_mubs(Dimension::new(3).unwrap());
        let p = measurement_distribution(f3.basis(1).vector(0), f3.basis(2)).unwrap();
        for q in p {
            assert_relative_eq!(q, 1.0 / 3.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn rejects_unnormalized_state() {
        let f = build_mubs(Dimension::new(2).unwrap());
        let bad = [c(1.0, 0.0), c(1.0, 0.0)];
        assert!(matches!(measurement_distribution(&bad, f.basis(0)), Err(Error::NotNormalized(_))));
        assert!(avg_mub_entropy(&bad, &f).is_err());
    }

    #[test]
    fn average_entropy_of_computational_states() {
        let f2 = build_mubs(Dimension::new(2).unwrap());
        let h2 = avg_mub_entropy(&[c(1.0, 0.0), c(0.0, 0.0)], &f2).unwrap();
        assert_relative_eq!(h2, 2.0 / 3.0, epsilon = 1e-12);
        assert!(h2 >= uncertainty_bound(2));
        assert_relative_eq!(uncertainty_bound(2), 0.584962500721156, epsilon = 1e-12);

        let f3 = build_mubs(Dimension::new(3).unwrap());
        let zero = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let h3 = avg_mub_entropy(&zero, &f3).unwrap();
        assert_relative_eq!(h3, 3.0 * 3f64.log2() / 4.0, epsilon = 1e-12);
        assert_relative_eq!(h3, 1.188721875540867, epsilon = 1e-12);
        assert!(h3 >= uncertainty_bound(3));
    }

    #[test]
    fn json_dump_shape() {
        let f = build_mubs(Dimension::new(2).unwrap());
        let j = f.to_json();
        assert_eq!(j.as_array().unwrap().len(), 3);
        assert_eq!(j[1][1][1][0].as_f64().unwrap(), -FRAC_1_SQRT_2);
    }
}
