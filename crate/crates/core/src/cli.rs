//! The `bsm` command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input, 2 a statistical or verification
//! check failed. Output goes to `--out`, else to `$BSM_OUTPUT_DIR/<command>.<ext>`,
//! else to stdout.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::mub::{build_mubs, verify_mubs, Dimension, UNBIASEDNESS_TOL};
use crate::ot::checks::{check_c_independence, sibling_output_distance};
use crate::ot::{run_frot_trials, summarize};
use crate::output::{write_atomic, Cell, Table};
use crate::qsim::DepolarizingChannel;
use crate::rng::trial_stream;
use crate::secparams::{
    ot_parameters, retention_grid, security_region, security_report, ChannelModel, OtMode, OtParams, OtRequest,
};
use crate::wse::{
    check_hoeffding_tail, check_index_distribution, honest_guess_record, min_entropy_rate_estimate, run_adversarial_bob,
    run_honest_trials, AdversaryStrategy, RateMode, Selection, WseParams,
};
use crate::{Error, Result};

pub const OUTPUT_DIR_ENV: &str = "BSM_OUTPUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "bsm", version, about = "Weak string erasure, oblivious transfer and storage-model security parameters")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file (default: $BSM_OUTPUT_DIR/<command>.<ext>, else stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mutually unbiased bases.
    Mub {
        #[command(subcommand)]
        cmd: MubCmd,
    },
    /// Weak string erasure runs and statistics.
    Wse {
        #[command(subcommand)]
        cmd: WseCmd,
    },
    /// Security-region curves over the depolarizing retention r.
    Region(RegionArgs),
    /// λ, ε and OT parameter calculator.
    Params(ParamsArgs),
    /// Oblivious transfer from weak string erasure.
    Ot {
        #[command(subcommand)]
        cmd: OtCmd,
    },
    /// Lower tail of |I| against Hoeffding's bound.
    Hoeffding(HoeffdingArgs),
}

#[derive(Debug, Subcommand)]
pub enum MubCmd {
    Verify(MubVerifyArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct MubVerifyArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = UNBIASEDNESS_TOL)]
    pub tol: f64,
}

#[derive(Debug, Subcommand)]
pub enum WseCmd {
    /// Honest runs.
    Run(WseRunArgs),
    /// Adversarial Bob.
    Attack(WseAttackArgs),
    /// Index-set distribution check.
    Stats(WseStatsArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct WseRunArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write all transcripts as a JSON array.
    #[arg(long)]
    pub transcripts: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyArg {
    MeasureRandomMub,
    StoreSubset,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelectionArg {
    FirstK,
    Random,
}

#[derive(Debug, Args, Serialize)]
pub struct WseAttackArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = StrategyArg::StoreSubset)]
    pub strategy: StrategyArg,
    /// Storage rate ν.
    #[arg(long, default_value_t = 0.0)]
    pub nu: f64,
    /// Depolarizing retention r of the storage channel.
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    #[arg(long, value_enum, default_value_t = SelectionArg::Random)]
    pub selection: SelectionArg,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct WseStatsArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.001)]
    pub significance: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct RegionArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 100)]
    pub grid: usize,
    #[arg(long, default_value_t = 0.05)]
    pub r_min: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct ParamsArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub nu: f64,
    /// Depolarizing retention; omit for the identity (noiseless) channel.
    #[arg(long)]
    pub r: Option<f64>,
    /// Block counts `n` at which to evaluate ε.
    #[arg(long, value_delimiter = ',', default_values_t = [1_000_000u64, 100_000_000, 10_000_000_000])]
    pub eps_n: Vec<u64>,
    #[command(flatten)]
    pub ot: OtArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Strict,
    Demo,
}

/// OT block structure. `n = m·β`.
#[derive(Debug, Args, Serialize)]
pub struct OtArgs {
    /// Number of blocks `m` (multiple of η = 2(d+1)).
    #[arg(long)]
    pub m: Option<usize>,
    /// Block length β.
    #[arg(long)]
    pub beta: Option<usize>,
    #[arg(long)]
    pub omega: Option<f64>,
    /// Min-entropy rate λ entering ℓ.
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Demo)]
    pub mode: ModeArg,
    /// Output length for demo mode.
    #[arg(long)]
    pub ell: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum OtCmd {
    /// End-to-end runs with a correctness summary.
    Run(OtRunArgs),
    /// Choice-bit independence and sibling-output distance.
    Check(OtRunArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct OtRunArgs {
    #[arg(long)]
    pub d: usize,
    #[command(flatten)]
    pub ot: OtArgs,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.001)]
    pub significance: f64,
    /// Also write all transcripts as a JSON array.
    #[arg(long)]
    pub transcripts: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct HoeffdingArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub n: usize,
    /// Diagnostic override of η (default 2(d+1)).
    #[arg(long)]
    pub eta: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Recorded in the first line of every CSV and in every JSON document.
#[derive(Debug, Serialize)]
pub struct RunConfig<'a, A: Serialize> {
    pub command: &'a str,
    pub format: Format,
    pub args: &'a A,
}

/// Result of one command before serialization.
struct Report {
    name: &'static str,
    table: Table,
    config: serde_json::Value,
    seed: Option<u64>,
    pass: bool,
    extra: Vec<(PathBuf, String)>,
}

impl Report {
    fn new<A: Serialize>(name: &'static str, format: Format, args: &A, seed: Option<u64>, table: Table) -> Result<Self> {
        let config = serde_json::to_value(RunConfig { command: name, format, args })?;
        Ok(Report { name, table, config, seed, pass: true, extra: Vec::new() })
    }

    fn render(&self, format: Format) -> Result<String> {
        let seed = self.seed.map_or("none".to_string(), |s| s.to_string());
        match format {
            Format::Csv => Ok(self.table.to_csv(&format!("bsm {} config={} seed={seed}", self.name, self.config))),
            Format::Json => self.table.to_json(&self.config),
        }
    }
}

fn dimension(d: usize) -> Result<Dimension> {
    Dimension::new(d)
}

fn ot_request(d: usize, ot: &OtArgs) -> Result<OtRequest> {
    let (Some(m), Some(beta)) = (ot.m, ot.beta) else {
        return Err(Error::invalid("--m and --beta are required"));
    };
    Ok(OtRequest {
        n: m.checked_mul(beta).ok_or_else(|| Error::invalid("m·β overflows"))?,
        beta,
        omega: ot.omega.unwrap_or((d + 1) as f64),
        lambda: ot.lambda,
        d,
        mode: match ot.mode {
            ModeArg::Strict => OtMode::Strict,
            ModeArg::Demo => OtMode::Demo,
        },
        wse_epsilon: 0.0,
        ell_override: ot.ell,
    })
}

fn ot_rows(p: &OtParams) -> Vec<(&'static str, Cell)> {
    vec![
        ("n", p.n.into()),
        ("beta", p.beta.into()),
        ("omega", p.omega.into()),
        ("lambda", p.lambda.into()),
        ("m", p.m.into()),
        ("eta", p.eta.into()),
        ("ell", p.ell.into()),
        ("ell_formula", p.ell_formula.into()),
        ("ot_error", p.error.into()),
        ("error_binding", p.error_binding.into()),
    ]
}

fn mub_verify(format: Format, a: &MubVerifyArgs) -> Result<Report> {
    let family = build_mubs(dimension(a.d)?);
    let v = verify_mubs(&family, a.tol);
    let mut t = Table::new(&["d", "max_orthonormality_deviation", "max_unbiasedness_deviation", "tolerance", "pass"]);
    t.push(vec![v.d.into(), v.max_orthonormality_deviation.into(), v.max_unbiasedness_deviation.into(), v.tolerance.into(), v.pass.into()]);
    let mut r = Report::new("mub-verify", format, a, None, t)?;
    r.pass = v.pass;
    Ok(r)
}

fn wse_run(format: Format, a: &WseRunArgs) -> Result<Report> {
    let dim = dimension(a.d)?;
    let params = WseParams::new(a.n, dim)?;
    if a.trials == 0 {
        return Err(Error::invalid("--trials must be ≥ 1"));
    }
    let family = build_mubs(dim);
    let transcripts = run_honest_trials(&params, &family, a.seed, a.trials)?;
    let mut t = Table::new(&["trial", "|I|", "empirical_rate", "analytic_rate"]);
    for (k, tr) in transcripts.iter().enumerate() {
        // separate stream family for Bob's guesses so transcripts stay unchanged
        let mut rng = trial_stream(a.seed ^ 0x9e37_79b9_7f4a_7c15, k as u64);
        let rec = honest_guess_record(tr, &mut rng);
        let empirical = min_entropy_rate_estimate(&rec, RateMode::Sampled)?.rate;
        let analytic = min_entropy_rate_estimate(&rec, RateMode::Analytic)?.rate;
        t.push(vec![k.into(), tr.index_set.len().into(), empirical.into(), analytic.into()]);
    }
    let mut r = Report::new("wse-run", format, a, Some(a.seed), t)?;
    if let Some(path) = &a.transcripts {
        r.extra.push((path.clone(), serde_json::to_string(&transcripts)? + "\n"));
    }
    Ok(r)
}

fn wse_attack(format: Format, a: &WseAttackArgs) -> Result<Report> {
    let dim = dimension(a.d)?;
    let params = WseParams::new(a.n, dim)?;
    if a.trials == 0 {
        return Err(Error::invalid("--trials must be ≥ 1"));
    }
    let strategy = match a.strategy {
        StrategyArg::MeasureRandomMub => AdversaryStrategy::MeasureRandomMub,
        StrategyArg::StoreSubset => AdversaryStrategy::StoreSubset {
            storage_rate: a.nu,
            channel: DepolarizingChannel::new(a.d, a.r)?,
            selection: match a.selection {
                SelectionArg::FirstK => Selection::FirstK,
                SelectionArg::Random => Selection::RandomSubset,
            },
        },
    };
    strategy.validate(a.d)?;
    let family = build_mubs(dim);
    let analytic = strategy.analytic_rate(a.d);
    let mut t = Table::new(&["trial", "|I|", "empirical_rate", "analytic_rate"]);
    for k in 0..a.trials {
        let rec = run_adversarial_bob(&params, &family, &strategy, &mut trial_stream(a.seed, k as u64))?;
        let empirical = min_entropy_rate_estimate(&rec, RateMode::Sampled)?.rate;
        t.push(vec![k.into(), rec.matched.into(), empirical.into(), analytic.into()]);
    }
    Report::new("wse-attack", format, a, Some(a.seed), t)
}

fn wse_stats(format: Format, a: &WseStatsArgs) -> Result<Report> {
    let dim = dimension(a.d)?;
    let params = WseParams::new(a.n, dim)?;
    let transcripts = run_honest_trials(&params, &build_mubs(dim), a.seed, a.trials)?;
    let mismatches: usize = transcripts.iter().map(|t| t.mismatches()).sum();
    let rep = check_index_distribution(&transcripts, a.significance)?;
    let mut rows: Vec<(&str, Cell)> = vec![
        ("samples", rep.samples.into()),
        ("p", rep.p.into()),
        ("x_I_mismatches", mismatches.into()),
        ("max_marginal_z", rep.max_marginal_z.into()),
        ("marginals_beyond_3sigma", rep.marginals_beyond_3sigma.into()),
        ("max_pairwise_z", rep.max_pairwise_z.into()),
        ("pairs_beyond_3sigma", rep.pairs_beyond_3sigma.into()),
    ];
    if let Some(c) = rep.exhaustive {
        rows.push(("exhaustive_chi_square", c.statistic.into()));
        rows.push(("exhaustive_dof", c.dof.into()));
        rows.push(("exhaustive_p_value", c.p_value.into()));
    }
    let pass = rep.pass && mismatches == 0;
    rows.push(("pass", pass.into()));
    let mut r = Report::new("wse-stats", format, a, Some(a.seed), Table::key_values(rows))?;
    r.pass = pass;
    Ok(r)
}

fn region(format: Format, a: &RegionArgs) -> Result<Report> {
    let grid = retention_grid(a.r_min, a.grid)?;
    let mut t = Table::new(&["r", "capacity", "nu_star_new", "nu_star_old"]);
    for p in security_region(a.d, &grid)? {
        t.push(vec![p.r.into(), p.capacity.into(), p.nu_star_new.into(), p.nu_star_old.into()]);
    }
    Report::new("region", format, a, None, t)
}

fn params(format: Format, a: &ParamsArgs) -> Result<Report> {
    let channel = match a.r {
        None => ChannelModel::identity(a.d)?,
        Some(r) => ChannelModel::depolarizing(a.d, r)?,
    };
    let rep = security_report(a.d, a.delta, a.nu, channel, &a.eps_n)?;
    let mut rows: Vec<(&str, Cell)> = vec![
        ("d", a.d.into()),
        ("delta", rep.delta.into()),
        ("nu", rep.nu.into()),
        ("capacity", rep.capacity.into()),
        ("rate", rep.rate.into()),
        ("gamma_at_rate", rep.gamma_at_rate.into()),
        ("lambda", rep.lambda.into()),
        ("feasible", rep.feasible.into()),
        ("no_storage_limit", rep.no_storage_limit.into()),
        ("f", rep.f.into()),
    ];
    let eps_labels: Vec<String> = rep.epsilon.iter().map(|(n, _)| format!("epsilon_n={n}")).collect();
    for (label, (_, e)) in eps_labels.iter().zip(&rep.epsilon) {
        rows.push((label.as_str(), (*e).into()));
    }
    let ot;
    if a.ot.m.is_some() || a.ot.beta.is_some() {
        ot = ot_parameters(&ot_request(a.d, &a.ot)?)?;
        rows.extend(ot_rows(&ot));
    }
    Report::new("params", format, a, None, Table::key_values(rows))
}

fn frot_runs(a: &OtRunArgs) -> Result<(OtParams, Vec<crate::ot::FrotTranscript>)> {
    let dim = dimension(a.d)?;
    let params = ot_parameters(&ot_request(a.d, &a.ot)?)?;
    if a.trials == 0 {
        return Err(Error::invalid("--trials must be ≥ 1"));
    }
    let runs = run_frot_trials(&params, &build_mubs(dim), a.seed, a.trials)?;
    Ok((params, runs))
}

fn ot_run(format: Format, a: &OtRunArgs) -> Result<Report> {
    let (params, runs) = frot_runs(a)?;
    let s = summarize(&params, &runs)?;
    let mut rows = ot_rows(&params);
    rows.truncate(8);
    rows.extend([
        ("t", s.t.into()),
        ("trials", s.trials.into()),
        ("sufficient_runs", s.sufficient_runs.into()),
        ("correct_among_sufficient", s.correct_among_sufficient.into()),
        ("correctness_rate", s.correctness_rate.into()),
        ("c0_frequency", s.c0_frequency.into()),
        ("c0_sigma", s.c0_sigma.into()),
        ("insufficient_rate", s.insufficient_rate.into()),
        ("hoeffding_bound", s.hoeffding_bound.into()),
        ("ot_error", s.error_bound.map_or(Cell::Text("non-binding".into()), Cell::Float)),
        ("pass", s.pass().into()),
    ]);
    let mut r = Report::new("ot-run", format, a, Some(a.seed), Table::key_values(rows))?;
    r.pass = s.pass();
    if let Some(path) = &a.transcripts {
        r.extra.push((path.clone(), serde_json::to_string(&runs)? + "\n"));
    }
    Ok(r)
}

fn ot_check(format: Format, a: &OtRunArgs) -> Result<Report> {
    let (_, runs) = frot_runs(a)?;
    let c = check_c_independence(&runs, a.significance)?;
    let mut rows: Vec<(&str, Cell)> = vec![
        ("samples", c.samples.into()),
        ("t", c.t.into()),
        ("c0_frequency", c.c0_frequency.into()),
        ("c0_z", c.c0_z.into()),
        ("parity_chi_square", c.parity_test.statistic.into()),
        ("parity_p_value", c.parity_test.p_value.into()),
    ];
    if let Some(p) = c.pair_test {
        rows.push(("pair_chi_square", p.statistic.into()));
        rows.push(("pair_p_value", p.p_value.into()));
        rows.push(("pair_cells", c.pair_cells.into()));
        rows.push(("pair_cells_beyond_3sigma", c.pair_cells_beyond_3sigma.into()));
    }
    let mut pass = c.pass;
    if runs[0].t <= 4 && runs[0].params.ell <= 4 {
        let s = sibling_output_distance(&runs, a.significance)?;
        rows.push(("sibling_tv_from_uniform", s.tv_from_uniform.into()));
        rows.push(("sibling_reference_tv_from_uniform", s.reference_tv_from_uniform.into()));
        rows.push(("sibling_tv_from_reference", s.tv_from_reference.into()));
        rows.push(("sibling_tv_noise_floor", s.tv_noise_floor.into()));
        rows.push(("sibling_p_value", s.test.p_value.into()));
        pass &= s.pass;
    }
    rows.push(("note", c.note.into()));
    rows.push(("pass", pass.into()));
    let mut r = Report::new("ot-check", format, a, Some(a.seed), Table::key_values(rows))?;
    r.pass = pass;
    Ok(r)
}

fn hoeffding(format: Format, a: &HoeffdingArgs) -> Result<Report> {
    let dim = dimension(a.d)?;
    let params = WseParams::new(a.n, dim)?;
    let eta = a.eta.unwrap_or(2 * (a.d + 1));
    let rep = check_hoeffding_tail(&params, &build_mubs(dim), eta, a.trials, a.seed)?;
    let rows: Vec<(&str, Cell)> = vec![
        ("n", rep.n.into()),
        ("eta", rep.eta.into()),
        ("trials", rep.trials.into()),
        ("empirical_tail", rep.empirical_tail.into()),
        ("bound", rep.bound.into()),
        ("sigma", rep.sigma.into()),
        ("pass", rep.pass.into()),
    ];
    let mut r = Report::new("hoeffding", format, a, Some(a.seed), Table::key_values(rows))?;
    r.pass = rep.pass;
    Ok(r)
}

fn dispatch(cli: &Cli) -> Result<Report> {
    let f = cli.format;
    match &cli.command {
        Command::Mub { cmd: MubCmd::Verify(a) } => mub_verify(f, a),
        Command::Wse { cmd: WseCmd::Run(a) } => wse_run(f, a),
        Command::Wse { cmd: WseCmd::Attack(a) } => wse_attack(f, a),
        Command::Wse { cmd: WseCmd::Stats(a) } => wse_stats(f, a),
        Command::Region(a) => region(f, a),
        Command::Params(a) => params(f, a),
        Command::Ot { cmd: OtCmd::Run(a) } => ot_run(f, a),
        Command::Ot { cmd: OtCmd::Check(a) } => ot_check(f, a),
        Command::Hoeffding(a) => hoeffding(f, a),
    }
}

/// Run a parsed command and write its output. Returns the exit code.
pub fn execute(cli: &Cli) -> Result<i32> {
    let report = dispatch(cli)?;
    let text = report.render(cli.format)?;
    let target = cli.out.clone().or_else(|| {
        std::env::var_os(OUTPUT_DIR_ENV).map(|dir| PathBuf::from(dir).join(format!("{}.{}", report.name, cli.format.extension())))
    });
    match target {
        Some(path) => write_atomic(&path, &text)?,
        None => print!("{text}"),
    }
    for (path, body) in &report.extra {
        write_atomic(path, body)?;
    }
    Ok(if report.pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}

/// Parse `args` and run. Parse and validation errors exit with 1.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn parse_errors_are_validation_failures() {
        assert_eq!(run(["bsm", "mub", "verify"]), EXIT_INVALID);
        assert_eq!(run(["bsm", "nope"]), EXIT_INVALID);
    }

    #[test]
    fn strict_rejection() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("o.csv");
        let out = out.to_str().unwrap();
        let args = ["bsm", "params", "--d", "2", "--m", "6", "--beta", "100", "--omega", "3", "--lambda", "0.5", "--mode", "strict", "--out", out];
        assert_eq!(run(args), EXIT_INVALID);
        let args = ["bsm", "params", "--d", "2", "--m", "6", "--beta", "2304", "--omega", "3", "--lambda", "1", "--mode", "strict", "--out", out];
        assert_eq!(run(args), EXIT_OK);
        let text = std::fs::read_to_string(out).unwrap();
        assert!(text.contains("ell,767\n"), "{text}");
    }
}
