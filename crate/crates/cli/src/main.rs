use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rendezvous::analytic::{self, Expectation};
use rendezvous::harness::{self, Axis, ExperimentConfig, ScenarioSpec, SweepRow};
use rendezvous::rng::{stream, StreamTag};
use rendezvous::scenario::gen_cognitive_radio;
use rendezvous::{ChannelSet, Error};

const EXIT_USAGE: u8 = 1;
const EXIT_CHECK: u8 = 2;
const EXIT_IO: u8 = 3;

/// Channel-hopping rendezvous experiments.
#[derive(Parser)]
#[command(name = "rendezvous", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the expected time to rendezvous.
    Ettr(Opts),
    /// Estimate the batch-maximum time to rendezvous.
    Mttr(Opts),
    /// Sweep one scenario parameter and write CSV rows.
    Sweep(Opts),
    /// Print closed-form quantities for the scenario.
    Analytic(Opts),
    /// Generate one scenario instance and print the available sets.
    Scenario(Opts),
    /// Compare simulation with closed forms; exits with 2 on disagreement.
    Check(Opts),
}

#[derive(Args, Default)]
struct Opts {
    /// Flat key=value file; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also compare against closed forms (sweep, ettr, mttr).
    #[arg(long)]
    check: bool,
    /// random, pi-random, modulo or lsh2.
    #[arg(long)]
    algorithm: Option<String>,
    /// generic, stick, spreadout3 or hybrid.
    #[arg(long)]
    strategy: Option<String>,
    /// sync or async.
    #[arg(long)]
    setting: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    max_slots: Option<String>,
    /// Master seed.
    #[arg(long)]
    seed: Option<String>,
    /// Async multiset size.
    #[arg(long)]
    t0: Option<String>,
    /// Async probability of drawing from the multiset.
    #[arg(long)]
    p0: Option<String>,
    #[arg(long)]
    prime: Option<String>,
    #[arg(long)]
    generator: Option<String>,
    /// uniform or current.
    #[arg(long)]
    async_fallback: Option<String>,
    /// Trials per batch for the MTTR estimate.
    #[arg(long)]
    batch: Option<String>,
    /// two-user, three-user, symmetric or cr.
    #[arg(long)]
    scenario: Option<String>,
    #[arg(long)]
    channels: Option<String>,
    #[arg(long)]
    n1: Option<String>,
    #[arg(long)]
    n2: Option<String>,
    #[arg(long)]
    n3: Option<String>,
    #[arg(long)]
    n12: Option<String>,
    #[arg(long)]
    n13: Option<String>,
    #[arg(long)]
    n23: Option<String>,
    #[arg(long)]
    n123: Option<String>,
    /// Channels per user in the symmetric scenario.
    #[arg(long)]
    n_user: Option<String>,
    /// Channels shared by all three users in the symmetric scenario.
    #[arg(long)]
    core: Option<String>,
    /// Channels shared by exactly two users in the symmetric scenario.
    #[arg(long)]
    exclusive: Option<String>,
    #[arg(long)]
    users: Option<String>,
    /// Primary users in the cognitive radio scenario.
    #[arg(long)]
    pus: Option<String>,
    #[arg(long)]
    area: Option<String>,
    #[arg(long)]
    range: Option<String>,
    #[arg(long)]
    core_size: Option<String>,
    /// n12, J, n_core, n_exclusive or core_size.
    #[arg(long)]
    axis: Option<String>,
    /// Comma list or start:step:end.
    #[arg(long)]
    values: Option<String>,
}

impl Opts {
    fn settings(&self) -> Result<BTreeMap<String, String>, Error> {
        let mut map = match &self.config {
            Some(path) => harness::read_config_file(path)?,
            None => BTreeMap::new(),
        };
        map.remove("out");
        map.remove("check");
        let flags = [
            ("algorithm", &self.algorithm),
            ("strategy", &self.strategy),
            ("setting", &self.setting),
            ("trials", &self.trials),
            ("max-slots", &self.max_slots),
            ("seed", &self.seed),
            ("t0", &self.t0),
            ("p0", &self.p0),
            ("prime", &self.prime),
            ("generator", &self.generator),
            ("async-fallback", &self.async_fallback),
            ("batch", &self.batch),
            ("scenario", &self.scenario),
            ("channels", &self.channels),
            ("n1", &self.n1),
            ("n2", &self.n2),
            ("n3", &self.n3),
            ("n12", &self.n12),
            ("n13", &self.n13),
            ("n23", &self.n23),
            ("n123", &self.n123),
            ("n-user", &self.n_user),
            ("core", &self.core),
            ("exclusive", &self.exclusive),
            ("users", &self.users),
            ("pus", &self.pus),
            ("area", &self.area),
            ("range", &self.range),
            ("core-size", &self.core_size),
            ("axis", &self.axis),
            ("values", &self.values),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                map.insert(key.to_string(), v.clone());
            }
        }
        Ok(map)
    }
}

fn sweep_axis(map: &BTreeMap<String, String>) -> Result<Option<(Axis, Vec<f64>)>, Error> {
    match (map.get("axis"), map.get("values")) {
        (Some(axis), Some(values)) => Ok(Some((axis.parse()?, harness::parse_values(values)?))),
        (None, None) => Ok(None),
        _ => Err(Error::Usage("--axis and --values go together".into())),
    }
}

fn rows_for(map: &BTreeMap<String, String>, need_axis: bool) -> Result<Vec<SweepRow>, Error> {
    let cfg = harness::config_from_map(map)?;
    match sweep_axis(map)? {
        Some((axis, values)) => harness::sweep(&cfg, axis, &values),
        None if need_axis => Err(Error::Usage("sweep needs --axis and --values".into())),
        None => Ok(vec![harness::experiment_row(&cfg, None)?]),
    }
}

fn write_rows(rows: &[SweepRow], out: &Option<PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => harness::emit_csv(rows, path),
        None => {
            print!("{}", harness::csv_string(rows));
            Ok(())
        }
    }
}

fn report_check(rows: &[SweepRow]) -> u8 {
    let failures = harness::check_rows(rows);
    for f in &failures {
        eprintln!("check failed: {f}");
    }
    if failures.is_empty() {
        eprintln!("check passed ({} rows)", rows.len());
        0
    } else {
        EXIT_CHECK
    }
}

fn show(e: &Expectation) -> String {
    match e {
        Expectation::Finite(r) => format!("{} ({})", r, harness::fmt_sig(analytic::to_f64(r))),
        Expectation::Infinite => "inf".into(),
    }
}

fn print_analytic(cfg: &ExperimentConfig) -> Result<(), Error> {
    let spec = &cfg.scenario;
    println!("channels: {}", spec.channels());
    println!("users: {}", spec.users());
    let jaccard = match spec {
        ScenarioSpec::TwoUser(s) => Some(analytic::jaccard_two(s.n1, s.n2, s.n12)?),
        ScenarioSpec::CognitiveRadio(_) => None,
        _ => spec.three_user_profile()?.map(|p| p.jaccard()),
    };
    let Some(j) = jaccard else {
        println!("cognitive radio sets are random; no closed form for this scenario");
        return Ok(());
    };
    println!("jaccard: {} ({})", j, harness::fmt_sig(analytic::to_f64(&j)));
    println!("ettr_consistent: {}", show(&analytic::ettr_consistent(&j)));
    if let Some(common) = spec.common()? {
        if common > 0 {
            println!("mttr_bound_modulo: {}", analytic::mttr_bound(cfg.modulo_params()?.channel_count(), common)?);
            println!("mttr_bound_lsh2: {}", analytic::mttr_bound(spec.channels(), common)?);
        }
    }
    if let Some(p) = spec.three_user_profile()? {
        let e = analytic::three_user_event_probs(&p);
        for (name, v) in [("p12", &e.p12), ("p13", &e.p13), ("p23", &e.p23), ("p123", &e.p123), ("p0", &e.p0)] {
            println!("{name}: {} ({})", v, harness::fmt_sig(analytic::to_f64(v)));
        }
        println!("stick_ettr: {}", show(&analytic::stick_ettr3(&p)));
        match analytic::spreadout_ettr3(&p) {
            Ok(e) => println!("spreadout_ettr: {}", show(&e)),
            Err(err) => println!("spreadout_ettr: unavailable ({err})"),
        }
    }
    Ok(())
}

fn list(c: &ChannelSet) -> String {
    c.iter().map(|ch| ch.get().to_string()).collect::<Vec<_>>().join(",")
}

fn print_scenario(cfg: &ExperimentConfig) -> Result<(), Error> {
    let mut rng = stream(harness::trial_seed(cfg.master_seed, 0), StreamTag::Scenario, 0);
    if let ScenarioSpec::CognitiveRadio(spec) = &cfg.scenario {
        let s = gen_cognitive_radio(spec, &mut rng)?;
        println!("core: {}", list(&s.core));
        println!("active_primary_users: {}", s.active_primary_users);
        println!("core_exact: {}", s.core_exact);
        for (u, c) in s.sets.iter().enumerate() {
            println!("user {u} ({}): {}", c.len(), list(c));
        }
        return Ok(());
    }
    for (u, c) in cfg.scenario.generate(&mut rng)?.iter().enumerate() {
        println!("user {u} ({}): {}", c.len(), list(c));
    }
    Ok(())
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Ettr(o) | Command::Mttr(o) => {
            let rows = rows_for(&o.settings()?, false)?;
            write_rows(&rows, &o.out)?;
            Ok(if o.check { report_check(&rows) } else { 0 })
        }
        Command::Sweep(o) => {
            let rows = rows_for(&o.settings()?, true)?;
            write_rows(&rows, &o.out)?;
            Ok(if o.check { report_check(&rows) } else { 0 })
        }
        Command::Check(o) => {
            let rows = rows_for(&o.settings()?, false)?;
            if o.out.is_some() {
                write_rows(&rows, &o.out)?;
            }
            Ok(report_check(&rows))
        }
        Command::Analytic(o) => {
            print_analytic(&harness::config_from_map(&o.settings()?)?)?;
            Ok(0)
        }
        Command::Scenario(o) => {
            print_scenario(&harness::config_from_map(&o.settings()?)?)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Io(_) => EXIT_IO,
                _ => EXIT_USAGE,
            })
        }
    }
}
