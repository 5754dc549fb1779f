//! Closed-form security quantities.
//!
//! All information quantities are in bits; the error `ε = 2·exp(−f·n)` uses the
//! natural exponential.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Storage noise acting on each stored qudit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ChannelModel {
    Identity { d: usize },
    Depolarizing { d: usize, r: f64 },
}

impl ChannelModel {
    pub fn identity(d: usize) -> Result<Self> {
        Self::check_d(d)?;
        Ok(ChannelModel::Identity { d })
    }

    pub fn depolarizing(d: usize, r: f64) -> Result<Self> {
        Self::check_d(d)?;
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::invalid(format!("retention r must lie in [0, 1], got {r}")));
        }
        Ok(ChannelModel::Depolarizing { d, r })
    }

    fn check_d(d: usize) -> Result<()> {
        if d < 2 {
            return Err(Error::invalid(format!("channel dimension must be ≥ 2, got {d}")));
        }
        Ok(())
    }

    pub fn d(&self) -> usize {
        match *self {
            ChannelModel::Identity { d } | ChannelModel::Depolarizing { d, .. } => d,
        }
    }

    /// Output spectrum for a pure input: `(q, q′)` with `q = r + (1−r)/d` once and
    /// `q′ = (1−r)/d` with multiplicity `d − 1`.
    fn spectrum(&self) -> (f64, f64) {
        match *self {
            ChannelModel::Identity { .. } => (1.0, 0.0),
            ChannelModel::Depolarizing { d, r } => {
                let q_off = (1.0 - r) / d as f64;
                (r + q_off, q_off)
            }
        }
    }
}

fn xlog2x(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

/// Classical capacity `log₂ d + q log₂ q + (d−1) q′ log₂ q′`.
pub fn capacity(channel: &ChannelModel) -> f64 {
    let d = channel.d();
    let (q, q_off) = channel.spectrum();
    let c = (d as f64).log2() + xlog2x(q) + (d - 1) as f64 * xlog2x(q_off);
    c.max(0.0)
}

/// `u·log₂ Σ pᵢ^{1/u}` for the channel spectrum, i.e. `(α−1)/α · (log₂ d − C_α)·…`
/// reorganized so that `u = 1/α → 0` is finite. Equals `log₂ q` at `u = 0`.
fn scaled_renyi_term(q: f64, q_off: f64, d: usize, u: f64) -> f64 {
    // Σ pᵢ^{1/u} = q^{1/u} (1 + (d−1)(q′/q)^{1/u}); q ≥ q′ and q > 0.
    if u <= 0.0 {
        return q.log2();
    }
    let ratio = if q_off > 0.0 { (q_off / q).powf(1.0 / u) } else { 0.0 };
    q.log2() + u * (1.0 + (d - 1) as f64 * ratio).log2()
}

/// α-Rényi capacity `C_α = log₂ d − (1/(1−α)) log₂(q^α + (d−1) q′^α)` for `α > 1`.
pub fn renyi_capacity(channel: &ChannelModel, alpha: f64) -> f64 {
    let d = channel.d();
    let (q, q_off) = channel.spectrum();
    let sum = q.powf(alpha) + (d - 1) as f64 * if q_off > 0.0 { q_off.powf(alpha) } else { 0.0 };
    (d as f64).log2() - sum.log2() / (1.0 - alpha)
}

/// Objective `((α−1)/α)(R − C_α)` written in `u = 1/α ∈ [0, 1]`.
///
/// It is concave in `u` (linear part minus a perspective of log-sum-exp),
/// vanishes at `u = 1`, and its value at `u = 0` is the `α → ∞` limit.
fn gamma_objective(channel: &ChannelModel, rate: f64, u: f64) -> f64 {
    let d = channel.d();
    let (q, q_off) = channel.spectrum();
    (1.0 - u) * (rate - (d as f64).log2()) - scaled_renyi_term(q, q_off, d, u)
}

const GOLDEN_TOL: f64 = 1e-10;

fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..500 {
        if hi - lo <= tol {
            let x = 0.5 * (lo + hi);
            let fx = f(x);
            if !fx.is_finite() {
                return Err(Error::Numerical(format!("objective not finite at u = {x}")));
            }
            return Ok((x, fx));
        }
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = f(a);
        }
    }
    Err(Error::Numerical("golden-section search did not converge".into()))
}

/// Strong-converse exponent `γ(R) = sup_{α>1} ((α−1)/α)(R − C_α)`, clamped at 0.
///
/// Maximized by golden-section search over `u = 1/α ∈ [0, 1]`, which includes
/// the `α → ∞` endpoint (where the identity channel attains its supremum).
pub fn strong_converse_gamma(channel: &ChannelModel, rate: f64) -> Result<f64> {
    if !(rate >= 0.0) || !rate.is_finite() {
        return Err(Error::invalid(format!("rate must be a finite non-negative number, got {rate}")));
    }
    let f = |u: f64| gamma_objective(channel, rate, u);
    let (_, interior) = golden_section_max(f, 0.0, 1.0, GOLDEN_TOL)?;
    let best = interior.max(f(0.0));
    Ok(best.max(0.0))
}

/// Error exponent `f(δ, d) = (δ/4)² / (32 (log₂((d+1)d) + log₂(4/δ))²)`.
pub fn wse_f(delta: f64, d: usize) -> Result<f64> {
    check_delta(delta)?;
    let inner = (((d + 1) * d) as f64).log2() + (4.0 / delta).log2();
    Ok((delta / 4.0).powi(2) / (32.0 * inner * inner))
}

/// `ε(δ, d) = 2·exp(−f(δ, d)·n)`.
pub fn wse_epsilon(d: usize, delta: f64, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("n must be ≥ 1"));
    }
    Ok(2.0 * (-wse_f(delta, d)? * n as f64).exp())
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::invalid(format!("δ must lie in (0, 1/2), got {delta}")));
    }
    Ok(())
}

/// Uncertainty rate `log₂(d+1) − 1`.
pub fn uncertainty_rate(d: usize) -> f64 {
    ((d + 1) as f64).log2() - 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WseLambda {
    pub lambda: f64,
    /// `λ > 0`.
    pub feasible: bool,
    /// `ν = 0`: no storage, `λ` is the bare `log₂(d+1) − 1 − δ`.
    pub no_storage_limit: bool,
}

/// `λ(δ, d) = ν·γ((log₂(d+1) − 1 − δ)/ν)`.
pub fn wse_lambda(d: usize, delta: f64, nu: f64, channel: &ChannelModel) -> Result<WseLambda> {
    check_delta(delta)?;
    if !(0.0..=1.0).contains(&nu) {
        return Err(Error::invalid(format!("storage rate ν must lie in [0, 1], got {nu}")));
    }
    if channel.d() != d {
        return Err(Error::DimensionMismatch { expected: d, got: channel.d() });
    }
    let budget = uncertainty_rate(d) - delta;
    if nu == 0.0 {
        let lambda = budget.max(0.0);
        return Ok(WseLambda { lambda, feasible: lambda > 0.0, no_storage_limit: true });
    }
    let lambda = nu * strong_converse_gamma(channel, budget.max(0.0) / nu)?;
    Ok(WseLambda { lambda, feasible: lambda > 0.0, no_storage_limit: false })
}

/// One point of the `(r, ν)` security-region plot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionPoint {
    pub r: f64,
    pub capacity: f64,
    /// `min(1, (log₂(d+1) − 1)/C_N)`.
    pub nu_star_new: f64,
    /// `min(1, (1/2)/C_N)`.
    pub nu_star_old: f64,
    /// `C_N = 0`: every rate is secure, reported as 1.
    pub zero_capacity: bool,
}

/// Largest secure storage rates for depolarizing storage at each retention `r`.
pub fn security_region(d: usize, r_grid: &[f64]) -> Result<Vec<RegionPoint>> {
    let rate = uncertainty_rate(d);
    r_grid
        .iter()
        .map(|&r| {
            if !(r > 0.0 && r <= 1.0) {
                return Err(Error::invalid(format!("r must lie in (0, 1], got {r}")));
            }
            let c = capacity(&ChannelModel::depolarizing(d, r)?);
            if c <= 0.0 {
                return Ok(RegionPoint { r, capacity: 0.0, nu_star_new: 1.0, nu_star_old: 1.0, zero_capacity: true });
            }
            Ok(RegionPoint {
                r,
                capacity: c,
                nu_star_new: (rate / c).min(1.0),
                nu_star_old: (0.5 / c).min(1.0),
                zero_capacity: false,
            })
        })
        .collect()
}

/// `points` evenly spaced retentions from `r_min` to 1 inclusive.
pub fn retention_grid(r_min: f64, points: usize) -> Result<Vec<f64>> {
    if !(r_min > 0.0 && r_min <= 1.0) || points == 0 {
        return Err(Error::invalid("grid needs r_min ∈ (0, 1] and at least one point"));
    }
    if points == 1 {
        return Ok(vec![1.0]);
    }
    Ok((0..points).map(|i| if i + 1 == points { 1.0 } else { r_min + (1.0 - r_min) * i as f64 / (points - 1) as f64 }).collect())
}

/// Bounded-storage threshold on `ν` for the identity channel: `(log₂(d+1) − 1 − δ)/log₂ d`.
pub fn bounded_storage_threshold(d: usize, delta: f64) -> f64 {
    (uncertainty_rate(d) - delta) / (d as f64).log2()
}

/// Every derived quantity for one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SecurityReport {
    pub d: usize,
    pub delta: f64,
    pub nu: f64,
    pub channel: ChannelModel,
    pub lambda: f64,
    pub f: f64,
    /// `(n, ε(n))` pairs.
    pub epsilon: Vec<(u64, f64)>,
    pub capacity: f64,
    /// Rate sent through storage, `(log₂(d+1) − 1 − δ)/ν`.
    pub rate: f64,
    pub gamma_at_rate: f64,
    pub feasible: bool,
    pub no_storage_limit: bool,
}

pub fn security_report(d: usize, delta: f64, nu: f64, channel: ChannelModel, n_values: &[u64]) -> Result<SecurityReport> {
    let lam = wse_lambda(d, delta, nu, &channel)?;
    let f = wse_f(delta, d)?;
    let epsilon = n_values.iter().map(|&n| wse_epsilon(d, delta, n).map(|e| (n, e))).collect::<Result<Vec<_>>>()?;
    let budget = (uncertainty_rate(d) - delta).max(0.0);
    let (rate, gamma_at_rate) = if nu > 0.0 {
        let rate = budget / nu;
        (rate, strong_converse_gamma(&channel, rate)?)
    } else {
        (f64::INFINITY, 0.0)
    };
    Ok(SecurityReport {
        d,
        delta,
        nu,
        channel,
        lambda: lam.lambda,
        f,
        epsilon,
        capacity: capacity(&channel),
        rate,
        gamma_at_rate,
        feasible: lam.feasible,
        no_storage_limit: lam.no_storage_limit,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OtMode {
    /// Enforce the constants under which the error bound is proven.
    Strict,
    /// Only require a well-formed block structure and `ℓ ≥ 1`; the error bound
    /// is reported but not binding.
    #[default]
    Demo,
}

/// Inputs to [`ot_parameters`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OtRequest {
    pub n: usize,
    pub beta: usize,
    pub omega: f64,
    pub lambda: f64,
    pub d: usize,
    pub mode: OtMode,
    /// WSE error `ε` folded into the OT error; 0 for honest simulation.
    #[serde(default)]
    pub wse_epsilon: f64,
    /// Output length for demo runs; defaults to `⌊n/(2η)⌋`.
    #[serde(default)]
    pub ell_override: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OtParams {
    pub n: usize,
    pub beta: usize,
    pub omega: f64,
    pub lambda: f64,
    pub d: usize,
    pub mode: OtMode,
    /// Number of blocks, `n/β`.
    pub m: usize,
    /// `2(d+1)`.
    pub eta: usize,
    /// Output length actually used by the protocol.
    pub ell: usize,
    /// `⌊(((ω−1)/ω)·λ/(4(d+1)) − λ²/(512ω²β))·n − 1/2⌋`.
    pub ell_formula: i64,
    /// `43·2^{−λ²n/(512ω²β)} + 2ε`.
    pub error: f64,
    pub error_binding: bool,
}

impl OtParams {
    /// Truncated index-set size `n/η`.
    pub fn truncated_size(&self) -> usize {
        self.n / self.eta
    }
}

pub fn eta_for(d: usize) -> usize {
    2 * (d + 1)
}

pub fn ot_parameters(req: &OtRequest) -> Result<OtParams> {
    let OtRequest { n, beta, omega, lambda, d, mode, wse_epsilon, ell_override } = *req;
    if d < 2 {
        return Err(Error::invalid(format!("d must be ≥ 2, got {d}")));
    }
    if beta == 0 || n == 0 || n % beta != 0 {
        return Err(Error::invalid(format!("n = {n} must be a positive multiple of β = {beta}")));
    }
    let eta = eta_for(d);
    let m = n / beta;
    if m % eta != 0 {
        return Err(Error::invalid(format!("m = n/β = {m} must be a positive multiple of η = {eta}")));
    }
    if !(lambda > 0.0) || !(omega > 0.0) {
        return Err(Error::invalid("λ and ω must be positive"));
    }
    let penalty = lambda * lambda / (512.0 * omega * omega * beta as f64);
    let ell_formula = (((omega - 1.0) / omega * lambda / (4.0 * (d + 1) as f64) - penalty) * n as f64 - 0.5).floor() as i64;
    let error = 43.0 * (-penalty * n as f64).exp2() + 2.0 * wse_epsilon;
    let ell = match mode {
        OtMode::Strict => {
            if omega < (d + 1) as f64 {
                return Err(Error::invalid(format!("strict mode needs ω ≥ d + 1 = {}, got {omega}", d + 1)));
            }
            let beta_min = 67f64.max(256.0 * omega * omega / (lambda * lambda));
            if (beta as f64) < beta_min {
                return Err(Error::invalid(format!("strict mode needs β ≥ max{{67, 256ω²/λ²}} = {beta_min}, got {beta}")));
            }
            if let Some(o) = ell_override {
                return Err(Error::invalid(format!("strict mode derives ℓ itself; override {o} not allowed")));
            }
            if ell_formula < 1 {
                return Err(Error::invalid(format!("ℓ = {ell_formula} < 1")));
            }
            ell_formula as usize
        }
        OtMode::Demo => {
            let ell = ell_override.unwrap_or(n / (2 * eta));
            if ell < 1 {
                return Err(Error::invalid(format!("ℓ = {ell} < 1")));
            }
            ell
        }
    };
    Ok(OtParams {
        n,
        beta,
        omega,
        lambda,
        d,
        mode,
        m,
        eta,
        ell,
        ell_formula,
        error,
        error_binding: mode == OtMode::Strict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn capacities() {
        assert_relative_eq!(capacity(&ChannelModel::identity(5).unwrap()), 5f64.log2(), epsilon = 1e-15);
        assert_relative_eq!(capacity(&ChannelModel::identity(5).unwrap()), 2.321928, epsilon = 1e-6);
        for d in [2, 3, 4, 5] {
            assert_relative_eq!(capacity(&ChannelModel::depolarizing(d, 1.0).unwrap()), (d as f64).log2(), epsilon = 1e-15);
            assert!(capacity(&ChannelModel::depolarizing(d, 0.0).unwrap()).abs() < 1e-15);
        }
        let mut last = -1.0;
        for i in 0..=100 {
            let c = capacity(&ChannelModel::depolarizing(4, i as f64 / 100.0).unwrap());
            assert!(c >= last);
            last = c;
        }
    }

    #[test]
    fn gamma_identity_matches_closed_form() {
        for d in [2, 3, 5] {
            let ch = ChannelModel::identity(d).unwrap();
            for i in 0..100 {
                let r = 4.0 * i as f64 / 99.0;
                let want = (r - (d as f64).log2()).max(0.0);
                assert!((strong_converse_gamma(&ch, r).unwrap() - want).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn gamma_vanishes_up_to_capacity() {
        for (d, r) in [(2, 0.9), (3, 0.5), (5, 0.2)] {
            let ch = ChannelModel::depolarizing(d, r).unwrap();
            let c = capacity(&ch);
            assert!(strong_converse_gamma(&ch, c).unwrap() < 1e-9);
            assert_eq!(strong_converse_gamma(&ch, 0.5 * c).unwrap(), 0.0);
            assert!(strong_converse_gamma(&ch, c + 0.1).unwrap() > 0.0);
        }
    }

    #[test]
    fn gamma_rejects_negative_rate() {
        assert!(strong_converse_gamma(&ChannelModel::identity(2).unwrap(), -1.0).is_err());
    }

    #[test]
    fn f_reference_value() {
        // (1/16)² / (32 (log₂ 6 + 4)²)
        let want = (1.0f64 / 16.0).powi(2) / (32.0 * (6f64.log2() + 4.0).powi(2));
        assert_relative_eq!(wse_f(0.25, 2).unwrap(), want, epsilon = 1e-18);
        assert!((wse_f(0.25, 2).unwrap() - 2.81516e-6).abs() < 1e-10);
        assert!(wse_f(0.0, 2).is_err());
        assert!(wse_f(0.5, 2).is_err());
    }

    #[test]
    fn epsilon_decreases() {
        let mut last = 2.0;
        for n in [1u64, 10, 1_000, 1_000_000, 100_000_000] {
            let e = wse_epsilon(3, 0.1, n).unwrap();
            assert!(e > 0.0 && e <= 2.0 && e < last);
            last = e;
        }
    }

    #[test]
    fn lambda_identity_examples() {
        let l = wse_lambda(5, 0.05, 0.3, &ChannelModel::identity(5).unwrap()).unwrap();
        let want = 6f64.log2() - 1.0 - 0.05 - 0.3 * 5f64.log2();
        assert_relative_eq!(l.lambda, want, epsilon = 1e-9);
        assert!((want - 0.83838).abs() < 1e-5);
        assert!(l.feasible);

        let l = wse_lambda(2, 1e-6, 1.0, &ChannelModel::identity(2).unwrap()).unwrap();
        assert_eq!(l.lambda, 0.0);
        assert!(!l.feasible);

        let l = wse_lambda(3, 0.1, 0.0, &ChannelModel::identity(3).unwrap()).unwrap();
        assert!(l.no_storage_limit);
        assert_relative_eq!(l.lambda, 1.0 - 0.1);
    }

    #[test]
    fn region_endpoints() {
        let p4 = security_region(4, &[1.0]).unwrap()[0];
        assert!((p4.nu_star_new - 0.660964).abs() < 1e-6);
        assert_relative_eq!(p4.nu_star_new, (5f64.log2() - 1.0) / 2.0, epsilon = 1e-15);
        let p5 = security_region(5, &[1.0]).unwrap()[0];
        assert!((p5.nu_star_new - 0.6826062).abs() < 1e-6);
        for d in [2, 4, 5, 7] {
            for p in security_region(d, &retention_grid(0.01, 200).unwrap()).unwrap() {
                assert!(p.nu_star_new >= p.nu_star_old);
            }
        }
        assert!(security_region(4, &[0.0]).is_err());
    }

    #[test]
    fn strict_example() {
        let n = 2304 * 6;
        let p = ot_parameters(&OtRequest {
            n,
            beta: 2304,
            omega: 3.0,
            lambda: 1.0,
            d: 2,
            mode: OtMode::Strict,
            wse_epsilon: 0.0,
            ell_override: None,
        })
        .unwrap();
        let want = (((2.0 / 3.0) * (1.0 / 12.0) - 1.0 / (512.0 * 9.0 * 2304.0)) * n as f64 - 0.5).floor();
        assert_eq!(p.ell as f64, want);
        assert_eq!(p.ell, 767);
        assert_eq!(p.eta, 6);
        assert_eq!(p.m, 6);
        assert!(p.error_binding);
    }

    #[test]
    fn strict_gate() {
        let base = OtRequest {
            n: 2304 * 6,
            beta: 2304,
            omega: 3.0,
            lambda: 1.0,
            d: 2,
            mode: OtMode::Strict,
            wse_epsilon: 0.0,
            ell_override: None,
        };
        assert!(ot_parameters(&OtRequest { beta: 2303, n: 2303 * 6, ..base }).is_err());
        assert!(ot_parameters(&OtRequest { omega: 2.999, ..base }).is_err());
        assert!(ot_parameters(&OtRequest { lambda: 1e-4, ..base }).is_err());
        assert!(ot_parameters(&OtRequest { n: 2304 * 5, ..base }).is_err());
    }

    #[test]
    fn demo_mode() {
        let p = ot_parameters(&OtRequest {
            n: 24,
            beta: 4,
            omega: 3.0,
            lambda: 1.0,
            d: 2,
            mode: OtMode::Demo,
            wse_epsilon: 0.0,
            ell_override: None,
        })
        .unwrap();
        assert_eq!(p.ell, 2);
        assert!(!p.error_binding);
        assert_eq!(p.truncated_size(), 4);
    }
}
