//! End-to-end fully randomized OT on top of a weak-string-erasure transcript.

use std::collections::HashMap;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::extractor::{bits_per_dit, toeplitz_extract, ExtractorSeed};
use super::ih::{interactive_hashing, solve, IhTranscript};
use super::subset_code::{make_subset_code, SubsetCode};
use crate::bits::BitString;
use crate::mub::MubFamily;
use crate::rng::trial_stream;
use crate::secparams::OtParams;
use crate::stats::bernoulli_sigma;
use crate::wse::{hoeffding_bound, run_honest, WseParams, WseTranscript};
use crate::{Error, Result};

/// Everything both parties saw or produced. Indices are 0-based; cell
/// `(j, α)` of the block matrix is the flat position `j·β + α`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrotTranscript {
    pub params: OtParams,
    pub t: usize,
    /// `m × β` block matrix, `z[j][α] = x[j·β + α]`.
    pub z: Vec<Vec<usize>>,
    /// Bob's WSE output.
    pub index_set: Vec<usize>,
    #[serde(rename = "x_I")]
    pub x_i: Vec<usize>,
    /// Truncated index set, sorted.
    pub i_tr: Vec<usize>,
    /// `|I| ≥ n/η` held at truncation.
    pub sufficient: bool,
    /// Bob's input to interactive hashing.
    pub w: BitString,
    pub enc_w: Vec<usize>,
    /// `permutation[p]` is the flat cell that position `p` is moved to.
    pub permutation: Vec<usize>,
    pub ih: IhTranscript,
    pub r0: ExtractorSeed,
    pub r1: ExtractorSeed,
    pub s0: BitString,
    pub s1: BitString,
    pub c: u8,
    pub y: BitString,
    /// Fallback run: Bob did not know all dits, so `y = s_c` is not promised.
    pub correctness_exempt: bool,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub trial: Option<u64>,
}

impl FrotTranscript {
    pub fn s(&self, b: u8) -> &BitString {
        if b == 0 {
            &self.s0
        } else {
            &self.s1
        }
    }

    pub fn correct(&self) -> bool {
        self.y == *self.s(self.c)
    }

    pub fn sibling_output(&self) -> &BitString {
        self.s(1 - self.c)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Pick `I_tr` of size `target`: uniformly inside `I` if it is large enough,
/// otherwise uniformly among all subsets of `0..n`. Output is sorted.
pub fn truncate_index_set<R: Rng + ?Sized>(index_set: &[usize], n: usize, target: usize, rng: &mut R) -> Result<Vec<usize>> {
    if target > n {
        return Err(Error::invalid(format!("target {target} exceeds n = {n}")));
    }
    if index_set.iter().any(|&i| i >= n) {
        return Err(Error::invalid("index set element out of range"));
    }
    let mut out: Vec<usize> = if index_set.len() >= target {
        index::sample(rng, index_set.len(), target).into_iter().map(|k| index_set[k]).collect()
    } else {
        index::sample(rng, n, target).into_vec()
    };
    out.sort_unstable();
    Ok(out)
}

/// Uniform permutation subject to: `p ∈ I_tr ⇔ row(π(p)) ∈ rows`.
pub fn build_permutation<R: Rng + ?Sized>(i_tr: &[usize], rows: &[usize], m: usize, beta: usize, rng: &mut R) -> Result<Vec<usize>> {
    let n = m * beta;
    if i_tr.len() != rows.len() * beta {
        return Err(Error::LengthMismatch { expected: rows.len() * beta, got: i_tr.len() });
    }
    if i_tr.iter().any(|&p| p >= n) || rows.iter().any(|&r| r >= m) {
        return Err(Error::invalid("position or row out of range"));
    }
    let mut in_rows = vec![false; m];
    for &r in rows {
        in_rows[r] = true;
    }
    let (mut inside, mut outside): (Vec<usize>, Vec<usize>) = (0..n).partition(|&cell| in_rows[cell / beta]);
    inside.shuffle(rng);
    outside.shuffle(rng);
    let mut in_tr = vec![false; n];
    for &p in i_tr {
        in_tr[p] = true;
    }
    let mut perm = vec![0; n];
    let (mut a, mut b) = (inside.into_iter(), outside.into_iter());
    for (p, slot) in perm.iter_mut().enumerate() {
        *slot = if in_tr[p] { a.next() } else { b.next() }.expect("cell counts match");
    }
    Ok(perm)
}

/// Check that `perm` is a bijection satisfying the placement condition.
pub fn verify_permutation(perm: &[usize], i_tr: &[usize], rows: &[usize], beta: usize) -> bool {
    let n = perm.len();
    if beta == 0 || n % beta != 0 {
        return false;
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return false;
        }
    }
    let mut in_rows = vec![false; n / beta];
    for &r in rows {
        if r >= in_rows.len() {
            return false;
        }
        in_rows[r] = true;
    }
    let mut in_tr = vec![false; n];
    for &p in i_tr {
        if p >= n {
            return false;
        }
        in_tr[p] = true;
    }
    (0..n).all(|p| in_tr[p] == in_rows[perm[p] / beta])
}

fn inverse(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (p, &q) in perm.iter().enumerate() {
        inv[q] = p;
    }
    inv
}

/// `π(z)` restricted to `rows`, read row-major, as source positions.
fn block_sources<'a>(inv: &'a [usize], rows: &'a [usize], beta: usize) -> impl Iterator<Item = usize> + 'a {
    rows.iter().flat_map(move |&r| (0..beta).map(move |a| inv[r * beta + a]))
}

fn check_params(wse: &WseTranscript, params: &OtParams) -> Result<()> {
    if wse.n != params.n {
        return Err(Error::LengthMismatch { expected: params.n, got: wse.n });
    }
    if wse.d != params.d {
        return Err(Error::DimensionMismatch { expected: params.d, got: wse.d });
    }
    if params.m * params.beta != params.n || params.m % params.eta != 0 {
        return Err(Error::invalid("inconsistent block parameters"));
    }
    let input_bits = params.truncated_size() * bits_per_dit(params.d);
    if params.ell > input_bits {
        return Err(Error::invalid(format!("ℓ = {} exceeds extractor input of {input_bits} bits", params.ell)));
    }
    Ok(())
}

struct Outputs {
    s0: BitString,
    s1: BitString,
    y: BitString,
}

fn compute_outputs(
    code: &SubsetCode,
    params: &OtParams,
    x: &[usize],
    known: &HashMap<usize, usize>,
    perm: &[usize],
    ih: &IhTranscript,
    c: u8,
    r: [&ExtractorSeed; 2],
) -> Result<Outputs> {
    let inv = inverse(perm);
    let d = params.d;
    let alice = |b: u8| -> Result<BitString> {
        let rows = code.enc(ih.output(b))?;
        let dits: Vec<usize> = block_sources(&inv, &rows, params.beta).map(|p| x[p]).collect();
        toeplitz_extract(&dits, d, r[b as usize])
    };
    let s0 = alice(0)?;
    let s1 = alice(1)?;
    let rows = code.enc(ih.output(c))?;
    let dits: Vec<usize> = block_sources(&inv, &rows, params.beta).map(|p| known.get(&p).copied().unwrap_or(0)).collect();
    let y = toeplitz_extract(&dits, d, r[c as usize])?;
    Ok(Outputs { s0, s1, y })
}

/// Run the reduction on `wse` with a uniformly random Bob input.
pub fn run_frot<R: Rng + ?Sized>(wse: &WseTranscript, params: &OtParams, rng: &mut R) -> Result<FrotTranscript> {
    run_frot_with_input(wse, params, None, rng)
}

/// As [`run_frot`], but Bob may fix his interactive-hashing input.
pub fn run_frot_with_input<R: Rng + ?Sized>(
    wse: &WseTranscript,
    params: &OtParams,
    w: Option<BitString>,
    rng: &mut R,
) -> Result<FrotTranscript> {
    check_params(wse, params)?;
    let (n, beta, m) = (params.n, params.beta, params.m);
    let target = params.truncated_size();
    let code = make_subset_code(m, params.eta)?;

    // Bob: truncate and hide I_tr in the rows of Enc(w)
    let i_tr = truncate_index_set(&wse.index_set, n, target, rng)?;
    if i_tr.len() != target {
        return Err(Error::LengthMismatch { expected: target, got: i_tr.len() });
    }
    let sufficient = wse.index_set.len() >= target;
    let w = match w {
        Some(w) if w.len() != code.t() => return Err(Error::LengthMismatch { expected: code.t(), got: w.len() }),
        Some(w) => w,
        None => BitString::random(code.t(), rng),
    };
    let enc_w = code.enc(&w)?;
    let permutation = build_permutation(&i_tr, &enc_w, m, beta, rng)?;

    let (ih, c) = interactive_hashing(&w, rng)?;

    // Alice: seeds and outputs
    let input_bits = target * bits_per_dit(params.d);
    let r0 = ExtractorSeed::random(input_bits, params.ell, rng)?;
    let r1 = ExtractorSeed::random(input_bits, params.ell, rng)?;
    let known: HashMap<usize, usize> = wse.index_set.iter().copied().zip(wse.x_i.iter().copied()).collect();
    let out = compute_outputs(&code, params, &wse.x, &known, &permutation, &ih, c, [&r0, &r1])?;

    Ok(FrotTranscript {
        params: *params,
        t: code.t(),
        z: wse.x.chunks(beta).map(<[usize]>::to_vec).collect(),
        index_set: wse.index_set.clone(),
        x_i: wse.x_i.clone(),
        i_tr,
        sufficient,
        w,
        enc_w,
        permutation,
        ih,
        r0,
        r1,
        s0: out.s0,
        s1: out.s1,
        c,
        y: out.y,
        correctness_exempt: !sufficient,
        seed: wse.seed,
        trial: None,
    })
}

/// Recompute every derived field of a transcript and compare bit-exactly.
pub fn replay_frot(tr: &FrotTranscript) -> Result<()> {
    let p = &tr.params;
    let mismatch = |what: &str| Err(Error::ReplayMismatch(what.to_string()));
    if tr.z.len() != p.m || tr.z.iter().any(|row| row.len() != p.beta) {
        return mismatch("block matrix shape");
    }
    let x: Vec<usize> = tr.z.concat();
    let code = make_subset_code(p.m, p.eta)?;
    if code.t() != tr.t {
        return mismatch("code length t");
    }
    let enc_w = code.enc(&tr.w)?;
    if enc_w != tr.enc_w {
        return mismatch("Enc(w)");
    }
    if !verify_permutation(&tr.permutation, &tr.i_tr, &enc_w, p.beta) {
        return mismatch("permutation condition");
    }
    if tr.sufficient != (tr.index_set.len() >= p.truncated_size()) || tr.correctness_exempt == tr.sufficient {
        return mismatch("sufficiency flag");
    }
    if tr.sufficient && tr.i_tr.iter().any(|i| tr.index_set.binary_search(i).is_err()) {
        return mismatch("I_tr not contained in I");
    }
    let (w0, w1) = solve(tr.t, &tr.ih.rounds)?;
    if w0 != tr.ih.w0 || w1 != tr.ih.w1 {
        return mismatch("interactive-hashing outputs");
    }
    if tr.ih.index_of(&tr.w) != Some(tr.c) {
        return mismatch("choice bit c");
    }
    let known: HashMap<usize, usize> = tr.index_set.iter().copied().zip(tr.x_i.iter().copied()).collect();
    let out = compute_outputs(&code, p, &x, &known, &tr.permutation, &tr.ih, tr.c, [&tr.r0, &tr.r1])?;
    if out.s0 != tr.s0 || out.s1 != tr.s1 {
        return mismatch("Alice's outputs");
    }
    if out.y != tr.y {
        return mismatch("Bob's output");
    }
    Ok(())
}

/// Honest WSE followed by the reduction, `trials` times; trial `k` uses
/// stream `k` of `seed`.
pub fn run_frot_trials(params: &OtParams, family: &MubFamily, seed: u64, trials: usize) -> Result<Vec<FrotTranscript>> {
    if family.d() != params.d {
        return Err(Error::DimensionMismatch { expected: params.d, got: family.d() });
    }
    let wse_params = WseParams::new(params.n, family.dim())?;
    (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_stream(seed, k as u64);
            let mut wse = run_honest(&wse_params, family, &mut rng)?;
            wse.seed = Some(seed);
            let mut tr = run_frot(&wse, params, &mut rng)?;
            tr.trial = Some(k as u64);
            Ok(tr)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrotSummary {
    pub trials: usize,
    pub ell: usize,
    pub t: usize,
    pub sufficient_runs: usize,
    pub correct_among_sufficient: usize,
    /// `y = s_c` frequency among runs with `|I| ≥ n/η`.
    pub correctness_rate: f64,
    pub c0_frequency: f64,
    pub c0_sigma: f64,
    /// Fraction of runs with `|I| < n/η`.
    pub insufficient_rate: f64,
    pub hoeffding_bound: f64,
    /// `insufficient_rate ≤ bound + 3σ`.
    pub hoeffding_ok: bool,
    /// Proven error bound; only present for strict parameters.
    pub error_bound: Option<f64>,
}

impl FrotSummary {
    pub fn pass(&self) -> bool {
        self.correct_among_sufficient == self.sufficient_runs && self.hoeffding_ok
    }
}

pub fn summarize(params: &OtParams, transcripts: &[FrotTranscript]) -> Result<FrotSummary> {
    if transcripts.is_empty() {
        return Err(Error::EmptyRecord);
    }
    let trials = transcripts.len();
    let sufficient: Vec<_> = transcripts.iter().filter(|t| t.sufficient).collect();
    let correct = sufficient.iter().filter(|t| t.correct()).count();
    let c0 = transcripts.iter().filter(|t| t.c == 0).count();
    let insufficient_rate = (trials - sufficient.len()) as f64 / trials as f64;
    let bound = hoeffding_bound(params.n, params.d, params.eta);
    Ok(FrotSummary {
        trials,
        ell: params.ell,
        t: transcripts[0].t,
        sufficient_runs: sufficient.len(),
        correct_among_sufficient: correct,
        correctness_rate: if sufficient.is_empty() { f64::NAN } else { correct as f64 / sufficient.len() as f64 },
        c0_frequency: c0 as f64 / trials as f64,
        c0_sigma: bernoulli_sigma(0.5, trials as u64),
        insufficient_rate,
        hoeffding_bound: bound,
        hoeffding_ok: insufficient_rate <= bound + 3.0 * bernoulli_sigma(bound, trials as u64),
        error_bound: params.error_binding.then_some(params.error),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mub::{build_mubs, Dimension};
    use crate::rng::seeded;
    use crate::secparams::{ot_parameters, OtMode, OtRequest};

    fn demo(d: usize, n: usize, beta: usize) -> OtParams {
        ot_parameters(&OtRequest { n, beta, omega: (d + 1) as f64, lambda: 1.0, d, mode: OtMode::Demo, wse_epsilon: 0.0, ell_override: None })
            .unwrap()
    }

    #[test]
    fn truncation_cases() {
        let mut rng = seeded(5);
        assert_eq!(truncate_index_set(&[1, 4, 7], 10, 3, &mut rng).unwrap(), vec![1, 4, 7]);
        for _ in 0..50 {
            let out = truncate_index_set(&[0, 2, 3, 5, 8], 10, 3, &mut rng).unwrap();
            assert_eq!(out.len(), 3);
            assert!(out.iter().all(|i| [0, 2, 3, 5, 8].contains(i)));
            assert_eq!(truncate_index_set(&[], 10, 4, &mut rng).unwrap().len(), 4);
        }
        assert!(truncate_index_set(&[], 3, 4, &mut rng).is_err());
    }

    #[test]
    fn permutation_condition() {
        let mut rng = seeded(8);
        let i_tr = vec![1, 5, 6, 10];
        let perm = build_permutation(&i_tr, &[0, 2], 3, 2, &mut rng);
        assert!(perm.is_err());
        let rows = [0, 2];
        let perm = build_permutation(&i_tr, &rows, 6, 2, &mut rng).unwrap();
        assert!(verify_permutation(&perm, &i_tr, &rows, 2));
        assert!(!verify_permutation(&perm, &[0, 5, 6, 10], &rows, 2));
    }

    #[test]
    fn honest_demo_runs_are_correct() {
        let params = demo(2, 24, 4);
        assert_eq!((params.m, params.eta, params.ell), (6, 6, 2));
        let family = build_mubs(Dimension::new(2).unwrap());
        let runs = run_frot_trials(&params, &family, 2024, 2000).unwrap();
        for tr in &runs {
            assert!(verify_permutation(&tr.permutation, &tr.i_tr, &tr.enc_w, 4));
            if tr.sufficient {
                assert!(tr.correct());
            }
        }
        let s = summarize(&params, &runs).unwrap();
        assert!(s.pass());
    }

    #[test]
    fn odd_dimension_runs_are_correct() {
        let params = demo(3, 8 * 24, 24);
        let family = build_mubs(Dimension::new(3).unwrap());
        for tr in run_frot_trials(&params, &family, 5, 200).unwrap() {
            assert!(!tr.sufficient || tr.correct());
            replay_frot(&tr).unwrap();
        }
    }

    #[test]
    fn forced_small_index_set() {
        let params = demo(2, 24, 4);
        let family = build_mubs(Dimension::new(2).unwrap());
        let wse_params = WseParams::new(24, family.dim()).unwrap();
        let mut rng = seeded(77);
        let wse = run_honest(&wse_params, &family, &mut rng).unwrap().with_index_set(vec![3]);
        let tr = run_frot(&wse, &params, &mut rng).unwrap();
        assert!(!tr.sufficient && tr.correctness_exempt);
        assert_eq!(tr.i_tr.len(), 4);
        replay_frot(&tr).unwrap();
    }

    #[test]
    fn replay_detects_tampering() {
        let params = demo(2, 24, 4);
        let family = build_mubs(Dimension::new(2).unwrap());
        let tr = run_frot_trials(&params, &family, 1, 1).unwrap().remove(0);
        let back = FrotTranscript::from_json(&tr.to_json().unwrap()).unwrap();
        assert_eq!(back, tr);
        replay_frot(&back).unwrap();

        let mut bad_y = tr.clone();
        bad_y.y = bad_y.y.xor(&BitString::from_u64(1, bad_y.y.len()));
        let mut bad_c = tr.clone();
        bad_c.c ^= 1;
        let mut bad_perm = tr;
        let inside = bad_perm.i_tr[0];
        let outside = (0..24).find(|p| !bad_perm.i_tr.contains(p)).unwrap();
        bad_perm.permutation.swap(inside, outside);
        for bad in [bad_y, bad_c, bad_perm] {
            assert!(matches!(replay_frot(&bad), Err(Error::ReplayMismatch(_))));
        }
    }

    #[test]
    fn parameter_mismatch() {
        let params = demo(2, 24, 4);
        let family = build_mubs(Dimension::new(2).unwrap());
        let wse_params = WseParams::new(30, family.dim()).unwrap();
        let wse = run_honest(&wse_params, &family, &mut seeded(1)).unwrap();
        assert!(run_frot(&wse, &params, &mut seeded(2)).is_err());
        let family3 = build_mubs(Dimension::new(3).unwrap());
        assert!(run_frot_trials(&params, &family3, 1, 1).is_err());
    }

    #[test]
    fn fixed_zero_input() {
        let params = demo(2, 24, 4);
        let family = build_mubs(Dimension::new(2).unwrap());
        let wse_params = WseParams::new(24, family.dim()).unwrap();
        let mut rng = seeded(9);
        let code = make_subset_code(params.m, params.eta).unwrap();
        for _ in 0..50 {
            let wse = run_honest(&wse_params, &family, &mut rng).unwrap();
            let tr = run_frot_with_input(&wse, &params, Some(BitString::zeros(code.t())), &mut rng).unwrap();
            assert_eq!(tr.c, 0);
            assert!(tr.ih.w0.is_zero());
        }
    }
}
