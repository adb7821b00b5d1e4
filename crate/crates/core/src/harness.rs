//! Monte Carlo experiment driver: trial generation, estimation, sweeps and CSV output.
//!
//! Every trial derives its randomness from `(master_seed, trial index)`, so
//! changing the number of trials never perturbs earlier ones and different
//! strategies run on identical scenarios and schedules.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use crate::analytic::{self, ThreeUserProfile};
use crate::channel::ChannelSet;
use crate::engine::{run_async, run_sync, Algorithm, AsyncFallback, AsyncParams, RunOptions, UserState};
use crate::error::{Error, Result};
use crate::permutation::{find_generator, next_prime_pad, seeded_permutation, ModuloParams};
use crate::rng::{derive_seed, stream, StreamTag};
use crate::scenario::{
    gen_cognitive_radio, gen_offsets, gen_three_user, gen_two_user, CognitiveRadioSpec, TwoUserSpec,
};
use crate::schedule::SelectorSchedule;
use crate::strategy::StrategyKind;

pub const CSV_HEADER: &str =
    "algorithm,strategy,setting,N,K,axis,axis_value,J,trials,ettr,ettr_stderr,mttr,timeouts,analytic_ettr,mttr_bound";

/// Share of timed-out trials above which an estimate is flagged.
pub const UNRELIABLE_TIMEOUT_SHARE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgorithmKind {
    /// Uniform random channel per slot from seeded streams.
    Random,
    /// Consistent schedule with a fresh pseudo-random permutation per slot.
    PiRandom,
    /// Consistent schedule `g^t · c mod P`.
    Modulo,
    /// Consistent schedule from two random permutations and a rotation.
    Lsh2,
}

impl AlgorithmKind {
    pub fn name(self) -> &'static str {
        match self {
            AlgorithmKind::Random => "random",
            AlgorithmKind::PiRandom => "pi-random",
            AlgorithmKind::Modulo => "modulo",
            AlgorithmKind::Lsh2 => "lsh2",
        }
    }

    /// Whether the schedule is a power sequence of a single N-cycle.
    pub fn is_one_cycle(self) -> bool {
        matches!(self, AlgorithmKind::Modulo | AlgorithmKind::Lsh2)
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(AlgorithmKind::Random),
            "pi-random" => Ok(AlgorithmKind::PiRandom),
            "modulo" => Ok(AlgorithmKind::Modulo),
            "lsh2" => Ok(AlgorithmKind::Lsh2),
            other => Err(Error::Usage(format!("unknown algorithm `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Setting {
    Sync,
    Async,
}

impl Setting {
    pub fn name(self) -> &'static str {
        match self {
            Setting::Sync => "sync",
            Setting::Async => "async",
        }
    }
}

impl FromStr for Setting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sync" => Ok(Setting::Sync),
            "async" => Ok(Setting::Async),
            other => Err(Error::Usage(format!("unknown setting `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScenarioSpec {
    TwoUser(TwoUserSpec),
    ThreeUser(ThreeUserProfile),
    /// Three users of equal size; pairs share `n_core + n_exclusive`, all share `n_core`.
    Symmetric {
        n: u64,
        n_user: u64,
        n_core: u64,
        n_exclusive: u64,
    },
    CognitiveRadio(CognitiveRadioSpec),
}

impl ScenarioSpec {
    pub fn channels(&self) -> u64 {
        match self {
            ScenarioSpec::TwoUser(s) => s.n,
            ScenarioSpec::ThreeUser(p) => p.n,
            ScenarioSpec::Symmetric { n, .. } => *n,
            ScenarioSpec::CognitiveRadio(s) => s.n,
        }
    }

    pub fn users(&self) -> usize {
        match self {
            ScenarioSpec::TwoUser(_) => 2,
            ScenarioSpec::ThreeUser(_) | ScenarioSpec::Symmetric { .. } => 3,
            ScenarioSpec::CognitiveRadio(s) => s.users,
        }
    }

    /// The overlap profile when the scenario fixes it.
    pub fn three_user_profile(&self) -> Result<Option<ThreeUserProfile>> {
        Ok(match *self {
            ScenarioSpec::ThreeUser(p) => Some(p),
            ScenarioSpec::Symmetric { n, n_user, n_core, n_exclusive } => {
                Some(ThreeUserProfile::symmetric(n_user, n_core, n_exclusive, n)?)
            }
            _ => None,
        })
    }

    /// Jaccard index when the scenario fixes it.
    pub fn jaccard(&self) -> Result<Option<f64>> {
        Ok(match self {
            ScenarioSpec::TwoUser(s) => Some(analytic::to_f64(&analytic::jaccard_two(s.n1, s.n2, s.n12)?)),
            ScenarioSpec::CognitiveRadio(_) => None,
            _ => self.three_user_profile()?.map(|p| analytic::to_f64(&p.jaccard())),
        })
    }

    /// Size of the global common set when the scenario fixes it.
    pub fn common(&self) -> Result<Option<u64>> {
        Ok(match self {
            ScenarioSpec::TwoUser(s) => Some(s.n12),
            ScenarioSpec::CognitiveRadio(_) => None,
            _ => self.three_user_profile()?.map(|p| p.n123),
        })
    }

    pub fn generate(&self, rng: &mut rand_chacha::ChaCha8Rng) -> Result<Vec<ChannelSet>> {
        Ok(match self {
            ScenarioSpec::TwoUser(s) => {
                let (a, b) = gen_two_user(s, rng)?;
                vec![a, b]
            }
            ScenarioSpec::CognitiveRadio(s) => gen_cognitive_radio(s, rng)?.sets,
            _ => {
                let p = self.three_user_profile()?.expect("three-user spec");
                gen_three_user(&p, rng)?.to_vec()
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub algorithm: AlgorithmKind,
    pub strategy: StrategyKind,
    pub setting: Setting,
    pub scenario: ScenarioSpec,
    pub trials: u64,
    pub max_slots: u64,
    pub t0: u64,
    pub p0: f64,
    pub async_fallback: AsyncFallback,
    pub master_seed: u64,
    /// Modulo prime; defaults to the smallest prime above N.
    pub prime: Option<u64>,
    /// Modulo generator; defaults to the largest primitive root of the prime.
    pub generator: Option<u64>,
    /// Trials per batch for the batch-maximum MTTR estimate.
    pub batch: u64,
}

impl ExperimentConfig {
    pub fn new(algorithm: AlgorithmKind, strategy: StrategyKind, setting: Setting, scenario: ScenarioSpec) -> Self {
        ExperimentConfig {
            algorithm,
            strategy,
            setting,
            scenario,
            trials: 10_000,
            max_slots: crate::engine::DEFAULT_MAX_SLOTS,
            t0: 20,
            p0: 0.75,
            async_fallback: AsyncFallback::UniformChannel,
            master_seed: 1,
            prime: None,
            generator: None,
            batch: 100,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Usage("trials must be at least 1".into()));
        }
        if self.batch == 0 {
            return Err(Error::Usage("batch must be at least 1".into()));
        }
        if self.strategy == StrategyKind::SpreadOut3 && self.scenario.users() != 3 {
            return Err(Error::Usage("spreadout3 needs a three-user scenario".into()));
        }
        if self.setting == Setting::Async && (self.t0 == 0 || !(0.0..=1.0).contains(&self.p0)) {
            return Err(Error::Usage("async runs need t0 >= 1 and p0 in [0, 1]".into()));
        }
        if self.setting == Setting::Async && self.strategy == StrategyKind::SpreadOut3 {
            return Err(Error::Usage("spreadout3 is only available in the sync setting".into()));
        }
        if self.algorithm == AlgorithmKind::Modulo {
            self.modulo_params()?;
        }
        Ok(())
    }

    pub fn modulo_params(&self) -> Result<ModuloParams> {
        let n = self.scenario.channels();
        let prime = self.prime.unwrap_or_else(|| next_prime_pad(n).0);
        let generator = match self.generator {
            Some(g) => g,
            None => find_generator(prime)?,
        };
        let params = ModuloParams::new(prime, generator)?;
        if params.channel_count() < n {
            return Err(Error::Usage(format!("prime {prime} is too small for {n} channels")));
        }
        Ok(params)
    }

    /// Labels the schedule cycles through (N, or P - 1 with padding).
    pub fn period(&self) -> Result<u64> {
        Ok(match self.algorithm {
            AlgorithmKind::Modulo => self.modulo_params()?.channel_count(),
            _ => self.scenario.channels(),
        })
    }

    fn algorithm_for_trial(&self, trial_seed: u64) -> Result<Algorithm> {
        let n = self.scenario.channels() as usize;
        Ok(match self.algorithm {
            AlgorithmKind::Random => Algorithm::RandomBaseline,
            AlgorithmKind::PiRandom => {
                Algorithm::Consistent(SelectorSchedule::random_perm(n, derive_seed(trial_seed, StreamTag::Derived, 0))?)
            }
            AlgorithmKind::Modulo => Algorithm::Consistent(SelectorSchedule::Modulo(self.modulo_params()?)),
            AlgorithmKind::Lsh2 => Algorithm::Consistent(SelectorSchedule::lsh2(
                seeded_permutation(n, trial_seed, 1),
                seeded_permutation(n, trial_seed, 2),
            )?),
        })
    }
}

/// Outcome of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    pub ttr: Option<u64>,
    pub anomalies: u32,
}

pub fn trial_seed(master_seed: u64, trial: u64) -> u64 {
    derive_seed(master_seed, StreamTag::Trial, trial)
}

/// The users of one trial: scenario sets, per-user seeds and (async) clock offsets.
pub fn trial_users(cfg: &ExperimentConfig, trial: u64) -> Result<Vec<UserState>> {
    let seed = trial_seed(cfg.master_seed, trial);
    let sets = cfg.scenario.generate(&mut stream(seed, StreamTag::Scenario, 0))?;
    let offsets = match cfg.setting {
        Setting::Sync => vec![0; sets.len()],
        Setting::Async => gen_offsets(sets.len(), cfg.period()?, &mut stream(seed, StreamTag::Derived, 1)),
    };
    Ok(sets
        .into_iter()
        .zip(offsets)
        .enumerate()
        .map(|(u, (c, offset))| {
            UserState::new(u, c, derive_seed(seed, StreamTag::Derived, 100 + u as u64)).with_offset(offset)
        })
        .collect())
}

pub fn run_trial(cfg: &ExperimentConfig, trial: u64) -> Result<TrialOutcome> {
    let seed = trial_seed(cfg.master_seed, trial);
    let users = trial_users(cfg, trial)?;
    let algorithm = cfg.algorithm_for_trial(seed)?;
    let opts = RunOptions { max_slots: cfg.max_slots, ..RunOptions::default() };
    let result = match cfg.setting {
        Setting::Sync => run_sync(users, &algorithm, cfg.strategy, &opts)?,
        Setting::Async => {
            let params = AsyncParams { t0: cfg.t0, p0: cfg.p0, fallback: cfg.async_fallback };
            run_async(users, &algorithm, cfg.strategy, &params, &opts)?
        }
    };
    Ok(TrialOutcome { ttr: result.ttr, anomalies: result.anomalies })
}

/// All trials, in trial order.
pub fn run_trials(cfg: &ExperimentConfig) -> Result<Vec<TrialOutcome>> {
    cfg.validate()?;
    (0..cfg.trials).into_par_iter().map(|i| run_trial(cfg, i)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub trials: u64,
    /// Mean TTR over trials that finished.
    pub ettr: f64,
    pub ettr_stderr: f64,
    /// Average over batches of the largest TTR in each batch.
    pub mttr: f64,
    /// Largest TTR seen in any trial.
    pub max_ttr: u64,
    pub timeouts: u64,
    pub anomalies: u64,
}

impl Estimate {
    pub fn unreliable(&self) -> bool {
        self.timeouts as f64 > UNRELIABLE_TIMEOUT_SHARE * self.trials as f64
    }
}

/// Summary statistics; timeouts are excluded from the mean and counted separately.
pub fn summarize(outcomes: &[TrialOutcome], batch: u64) -> Estimate {
    let done: Vec<f64> = outcomes.iter().filter_map(|o| o.ttr).map(|t| t as f64).collect();
    let n = done.len() as f64;
    let mean = done.iter().sum::<f64>() / n;
    let var = if done.len() > 1 { done.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    let maxima: Vec<f64> = outcomes
        .chunks(batch.max(1) as usize)
        .filter_map(|c| c.iter().filter_map(|o| o.ttr).max())
        .map(|m| m as f64)
        .collect();
    Estimate {
        trials: outcomes.len() as u64,
        ettr: mean,
        ettr_stderr: (var / n).sqrt(),
        mttr: maxima.iter().sum::<f64>() / maxima.len() as f64,
        max_ttr: outcomes.iter().filter_map(|o| o.ttr).max().unwrap_or(0),
        timeouts: outcomes.iter().filter(|o| o.ttr.is_none()).count() as u64,
        anomalies: outcomes.iter().map(|o| o.anomalies as u64).sum(),
    }
}

pub fn estimate(cfg: &ExperimentConfig) -> Result<Estimate> {
    Ok(summarize(&run_trials(cfg)?, cfg.batch))
}

/// ETTR and its standard error.
pub fn estimate_ettr(cfg: &ExperimentConfig) -> Result<Estimate> {
    estimate(cfg)
}

/// Batch-maximum MTTR (the same trials also yield the ETTR).
pub fn estimate_mttr(cfg: &ExperimentConfig) -> Result<Estimate> {
    estimate(cfg)
}

/// Closed-form ETTR, where one applies: consistent random-permutation schedules
/// with synchronized clocks.
pub fn analytic_ettr(cfg: &ExperimentConfig) -> Result<Option<f64>> {
    if cfg.algorithm != AlgorithmKind::PiRandom || cfg.setting != Setting::Sync {
        return Ok(None);
    }
    let profile = cfg.scenario.three_user_profile()?;
    Ok(match (cfg.strategy, profile) {
        (StrategyKind::Generic, _) => cfg.scenario.jaccard()?.map(|j| 1.0 / j),
        (StrategyKind::StickTogether, Some(p)) => Some(analytic::stick_ettr3(&p).to_f64()),
        (StrategyKind::SpreadOut3, Some(p)) => Some(analytic::spreadout_ettr3(&p)?.to_f64()),
        _ => None,
    })
}

/// Worst-case TTR of a one-cycle schedule with synchronized clocks, for
/// strategies that never do worse than unchanged sequences.
pub fn mttr_bound_for(cfg: &ExperimentConfig) -> Result<Option<u64>> {
    if !cfg.algorithm.is_one_cycle() || cfg.setting != Setting::Sync || cfg.strategy == StrategyKind::SpreadOut3 {
        return Ok(None);
    }
    match cfg.scenario.common()? {
        Some(common) => Ok(Some(analytic::mttr_bound(cfg.period()?, common)?)),
        None => Ok(None),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    N12,
    NCore,
    NExclusive,
    CoreSize,
    J,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::N12 => "n12",
            Axis::NCore => "n_core",
            Axis::NExclusive => "n_exclusive",
            Axis::CoreSize => "core_size",
            Axis::J => "J",
        }
    }

    /// The scenario with this axis set to `value`.
    pub fn apply(self, spec: &ScenarioSpec, value: f64) -> Result<ScenarioSpec> {
        let count = || -> Result<u64> {
            if value < 0.0 || value.fract() != 0.0 {
                return Err(Error::Usage(format!("axis {} takes whole numbers, got {value}", self.name())));
            }
            Ok(value as u64)
        };
        let mismatch = || Error::Usage(format!("axis {} does not apply to this scenario", self.name()));
        Ok(match (self, *spec) {
            (Axis::N12, ScenarioSpec::TwoUser(s)) => {
                ScenarioSpec::TwoUser(TwoUserSpec::new(s.n, s.n1, s.n2, count()?)?)
            }
            (Axis::J, ScenarioSpec::TwoUser(s)) => {
                if !(value > 0.0 && value <= 1.0) {
                    return Err(Error::Usage(format!("J must lie in (0, 1], got {value}")));
                }
                ScenarioSpec::TwoUser(TwoUserSpec::new(s.n, s.n1, s.n2, n12_for_jaccard(s.n1, s.n2, value))?)
            }
            (Axis::NCore, ScenarioSpec::Symmetric { n, n_user, n_exclusive, .. }) => {
                ScenarioSpec::Symmetric { n, n_user, n_core: count()?, n_exclusive }
            }
            (Axis::NExclusive, ScenarioSpec::Symmetric { n, n_user, n_core, .. }) => {
                ScenarioSpec::Symmetric { n, n_user, n_core, n_exclusive: count()? }
            }
            (Axis::CoreSize, ScenarioSpec::CognitiveRadio(s)) => {
                ScenarioSpec::CognitiveRadio(CognitiveRadioSpec { core_size: count()?, ..s })
            }
            _ => return Err(mismatch()),
        })
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "n12" => Ok(Axis::N12),
            "n_core" => Ok(Axis::NCore),
            "n_exclusive" => Ok(Axis::NExclusive),
            "core_size" => Ok(Axis::CoreSize),
            "J" | "j" => Ok(Axis::J),
            other => Err(Error::Usage(format!("unknown sweep axis `{other}`"))),
        }
    }
}

/// Overlap whose index `n12 / (n1 + n2 - n12)` is closest to `j`.
pub fn n12_for_jaccard(n1: u64, n2: u64, j: f64) -> u64 {
    let n12 = (j * (n1 + n2) as f64 / (1.0 + j)).round() as u64;
    n12.clamp(1, n1.min(n2))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub algorithm: AlgorithmKind,
    pub strategy: StrategyKind,
    pub setting: Setting,
    pub n: u64,
    pub k: usize,
    pub axis: Option<Axis>,
    pub axis_value: Option<f64>,
    pub j: Option<f64>,
    pub estimate: Estimate,
    pub analytic_ettr: Option<f64>,
    pub mttr_bound: Option<u64>,
}

/// One estimate row for a fixed configuration.
pub fn experiment_row(cfg: &ExperimentConfig, axis: Option<(Axis, f64)>) -> Result<SweepRow> {
    let estimate = estimate(cfg)?;
    Ok(SweepRow {
        algorithm: cfg.algorithm,
        strategy: cfg.strategy,
        setting: cfg.setting,
        n: cfg.scenario.channels(),
        k: cfg.scenario.users(),
        axis: axis.map(|a| a.0),
        axis_value: axis.map(|a| a.1),
        j: cfg.scenario.jaccard()?,
        estimate,
        analytic_ettr: analytic_ettr(cfg)?,
        mttr_bound: mttr_bound_for(cfg)?,
    })
}

pub fn sweep(cfg: &ExperimentConfig, axis: Axis, values: &[f64]) -> Result<Vec<SweepRow>> {
    values
        .iter()
        .map(|&v| {
            let point = ExperimentConfig { scenario: axis.apply(&cfg.scenario, v)?, ..cfg.clone() };
            experiment_row(&point, Some((axis, v)))
        })
        .collect()
}

/// Relative tolerance for comparing a simulated ETTR with its closed form.
pub fn check_tolerance(strategy: StrategyKind) -> f64 {
    match strategy {
        StrategyKind::Generic => 0.03,
        _ => 0.02,
    }
}

/// Descriptions of rows whose simulation disagrees with an available closed form.
pub fn check_rows(rows: &[SweepRow]) -> Vec<String> {
    let mut failures = Vec::new();
    for row in rows {
        let label = match (row.axis, row.axis_value) {
            (Some(a), Some(v)) => {
                format!("{} {} {} {}={}", row.algorithm, row.strategy, row.setting.name(), a.name(), fmt_sig(v))
            }
            _ => format!("{} {} {}", row.algorithm, row.strategy, row.setting.name()),
        };
        if let Some(expected) = row.analytic_ettr {
            let tol = check_tolerance(row.strategy);
            let rel = (row.estimate.ettr - expected).abs() / expected;
            if rel.is_nan() || rel > tol {
                failures.push(format!(
                    "{label}: ettr {} vs analytic {} (off by {:.2}%, tolerance {:.0}%)",
                    fmt_sig(row.estimate.ettr),
                    fmt_sig(expected),
                    100.0 * rel,
                    100.0 * tol
                ));
            }
        }
        if let Some(bound) = row.mttr_bound {
            if row.estimate.max_ttr > bound {
                failures.push(format!("{label}: max ttr {} exceeds bound {bound}", row.estimate.max_ttr));
            }
        }
        if row.estimate.unreliable() {
            failures.push(format!("{label}: {} of {} trials timed out", row.estimate.timeouts, row.estimate.trials));
        }
    }
    failures
}

/// Six significant digits, trailing zeros dropped, exponent form for very large or small values.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.5e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let m = mantissa.trim_end_matches('0').trim_end_matches('.');
        return format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    let fixed = format!("{:.*}", (5 - exp).max(0) as usize, x);
    if fixed.contains('.') {
        fixed.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        fixed
    }
}

fn opt<T>(v: Option<T>, f: impl Fn(T) -> String) -> String {
    v.map(f).unwrap_or_default()
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

pub fn csv_string(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let fields = [
            r.algorithm.name().to_string(),
            r.strategy.name().to_string(),
            r.setting.name().to_string(),
            r.n.to_string(),
            r.k.to_string(),
            opt(r.axis, |a| a.name().to_string()),
            opt(r.axis_value, fmt_sig),
            opt(r.j, fmt_sig),
            r.estimate.trials.to_string(),
            opt(finite(r.estimate.ettr), fmt_sig),
            opt(finite(r.estimate.ettr_stderr), fmt_sig),
            opt(finite(r.estimate.mttr), fmt_sig),
            r.estimate.timeouts.to_string(),
            opt(r.analytic_ettr.and_then(finite), fmt_sig),
            opt(r.mttr_bound, |b| b.to_string()),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn emit_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    fs::write(path, csv_string(rows)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Flat `key = value` text; `#` starts a comment. Later keys override earlier ones.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Usage(format!("config line {}: expected key=value, got `{raw}`", i + 1)))?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_config_text(&text)
}

/// Keys understood by [`config_from_map`].
pub const CONFIG_KEYS: &[&str] = &[
    "algorithm",
    "strategy",
    "setting",
    "trials",
    "max-slots",
    "seed",
    "t0",
    "p0",
    "prime",
    "generator",
    "async-fallback",
    "batch",
    "scenario",
    "channels",
    "n1",
    "n2",
    "n3",
    "n12",
    "n13",
    "n23",
    "n123",
    "n-user",
    "core",
    "exclusive",
    "users",
    "pus",
    "area",
    "range",
    "core-size",
    "axis",
    "values",
    "out",
    "check",
];

fn get<T: FromStr>(map: &BTreeMap<String, String>, key: &str, default: T) -> Result<T> {
    match map.get(key) {
        None => Ok(default),
        Some(v) => v.parse().map_err(|_| Error::Usage(format!("invalid value `{v}` for {key}"))),
    }
}

fn get_opt<T: FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
    map.get(key).map(|v| v.parse().map_err(|_| Error::Usage(format!("invalid value `{v}` for {key}")))).transpose()
}

/// Scenario from `scenario` (two-user, three-user, symmetric, cr) and its size keys.
pub fn scenario_from_map(map: &BTreeMap<String, String>) -> Result<ScenarioSpec> {
    let kind = map.get("scenario").map(String::as_str).unwrap_or("two-user");
    let n = get(map, "channels", 256u64)?;
    let usage = |e: Error| match e {
        Error::InvalidInput(m) | Error::InvalidProfile(m) => Error::Usage(m),
        other => other,
    };
    Ok(match kind {
        "two-user" => ScenarioSpec::TwoUser(
            TwoUserSpec::new(n, get(map, "n1", 60)?, get(map, "n2", 60)?, get(map, "n12", 30)?).map_err(usage)?,
        ),
        "three-user" => ScenarioSpec::ThreeUser(
            ThreeUserProfile::new(
                get(map, "n1", 60)?,
                get(map, "n2", 60)?,
                get(map, "n3", 60)?,
                get(map, "n12", 2)?,
                get(map, "n13", 2)?,
                get(map, "n23", 2)?,
                get(map, "n123", 1)?,
                n,
            )
            .map_err(usage)?,
        ),
        "symmetric" => {
            let spec = ScenarioSpec::Symmetric {
                n,
                n_user: get(map, "n-user", 60)?,
                n_core: get(map, "core", 1)?,
                n_exclusive: get(map, "exclusive", 1)?,
            };
            spec.three_user_profile().map_err(usage)?;
            spec
        }
        "cr" => {
            let d = CognitiveRadioSpec::default();
            ScenarioSpec::CognitiveRadio(CognitiveRadioSpec {
                n,
                users: get(map, "users", d.users)?,
                primary_users: get(map, "pus", d.primary_users)?,
                area_side: get(map, "area", d.area_side)?,
                interference_range: get(map, "range", d.interference_range)?,
                core_size: get(map, "core-size", d.core_size)?,
            })
        }
        other => return Err(Error::Usage(format!("unknown scenario `{other}`"))),
    })
}

pub fn config_from_map(map: &BTreeMap<String, String>) -> Result<ExperimentConfig> {
    if let Some(key) = map.keys().find(|k| !CONFIG_KEYS.contains(&k.as_str())) {
        return Err(Error::Usage(format!("unknown config key `{key}`")));
    }
    let scenario = scenario_from_map(map)?;
    let mut cfg = ExperimentConfig::new(
        get(map, "algorithm", AlgorithmKind::Modulo)?,
        get(map, "strategy", StrategyKind::Generic)?,
        get(map, "setting", Setting::Sync)?,
        scenario,
    );
    cfg.trials = get(map, "trials", cfg.trials)?;
    cfg.max_slots = get(map, "max-slots", cfg.max_slots)?;
    cfg.master_seed = get(map, "seed", cfg.master_seed)?;
    cfg.t0 = get(map, "t0", cfg.t0)?;
    cfg.p0 = get(map, "p0", cfg.p0)?;
    cfg.prime = get_opt(map, "prime")?;
    cfg.generator = get_opt(map, "generator")?;
    cfg.batch = get(map, "batch", cfg.batch)?;
    cfg.async_fallback = match map.get("async-fallback").map(String::as_str) {
        None | Some("uniform") => AsyncFallback::UniformChannel,
        Some("current") => AsyncFallback::CurrentSlot,
        Some(other) => return Err(Error::Usage(format!("unknown async fallback `{other}`"))),
    };
    cfg.validate().map_err(|e| match e {
        Error::InvalidInput(m) => Error::Usage(m),
        other => other,
    })?;
    Ok(cfg)
}

/// Comma-separated numbers, or `start:step:end` inclusive.
pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    let bad = || Error::Usage(format!("cannot parse sweep values `{text}`"));
    if let [start, step, end] = text.split(':').collect::<Vec<_>>()[..] {
        let (start, step, end): (f64, f64, f64) =
            (start.parse().map_err(|_| bad())?, step.parse().map_err(|_| bad())?, end.parse().map_err(|_| bad())?);
        if step <= 0.0 {
            return Err(bad());
        }
        let count = ((end - start) / step + 1e-9).floor() as i64;
        return Ok((0..=count).map(|i| start + i as f64 * step).map(|v| (v * 1e9).round() / 1e9).collect());
    }
    text.split(',').map(|v| v.trim().parse().map_err(|_| bad())).collect()
}
