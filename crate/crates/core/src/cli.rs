//! Subcommand implementations for the `bicmb` binary.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use bicmb::config::RunConfig;
use bicmb::convcode::{
    bits_to_string, build_trellis, enumerate_error_events, free_distance, length_for_completeness, CodeSpec,
    EventBounds, EventEnumeration, Trellis,
};
use bicmb::interleaver::{
    alpha_vector, build_map, search_interleaver, structural_argument, verify, CriteriaReport, InterleaverMap,
    InterleaverSpec, SearchOutcome,
};
use bicmb::simulator::{estimate_diversity, sweep_snr, BerCurve, DiversityEstimate};
use bicmb::VERSION;

#[derive(Debug, Parser)]
#[command(
    name = "bicmb",
    version,
    about = "Interleaver criteria checks and BICMB link simulation"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the error events of a convolutional code as CSV.
    Enumerate(EnumerateArgs),
    /// Check an interleaver against the design criteria.
    Verify(VerifyArgs),
    /// Search for an interleaver that meets every criterion.
    Search(SearchArgs),
    /// Run a BER sweep and fit the diversity order.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
struct BoundArgs {
    /// Code as `K=<k> g=<octal>,<octal>,...`.
    #[arg(long)]
    code: CodeSpec,
    /// Largest error-event weight d_H (default d_free + 4).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    max_dh: Option<u32>,
    /// Largest event length in trellis steps (default: long enough to be complete at max-dh).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_len: Option<u64>,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    #[command(flatten)]
    bounds: BoundArgs,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Sc,
    Ofdm,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    bounds: BoundArgs,
    /// Interleaver description file.
    #[arg(long)]
    interleaver: PathBuf,
    /// Expected carrier mode; must agree with the file.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Print the JSON report instead of the table.
    #[arg(long)]
    json: bool,
    /// Also write the JSON report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[command(flatten)]
    bounds: BoundArgs,
    /// Template interleaver file; its stream assignment is kept.
    #[arg(long)]
    interleaver: PathBuf,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Number of candidate maps to try.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the winning map here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the JSON search report.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Master seed; required.
    #[arg(long)]
    seed: u64,
    /// Worker threads. Results do not depend on it.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
    /// Second interleaver file simulated on the same channels.
    #[arg(long)]
    compare: Option<PathBuf>,
    /// Output prefix: writes `<out>.csv`, `<out>.json` and `<out>.compare.csv`.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Process exit status of a successful run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass = 0,
    Violations = 2,
}

pub fn run(cli: Cli) -> Result<Status> {
    match cli.command {
        Command::Enumerate(args) => enumerate(args),
        Command::Verify(args) => verify_cmd(args),
        Command::Search(args) => search(args),
        Command::Simulate(args) => simulate(args),
    }
}

fn preamble(config: &serde_json::Value) -> String {
    format!("# bicmb {VERSION}\n# config: {config}\n")
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_interleaver(path: &Path, mode: Option<Mode>) -> Result<InterleaverSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let spec: InterleaverSpec = text.parse().with_context(|| format!("parsing {}", path.display()))?;
    if let Some(mode) = mode {
        if (mode == Mode::Ofdm) != spec.mode.is_ofdm() {
            bail!(
                "--mode {mode:?} does not match `mode={}` in {}",
                spec.mode.name(),
                path.display()
            );
        }
    }
    Ok(spec)
}

struct Enumerated {
    trellis: Trellis,
    d_free: u32,
    events: EventEnumeration,
}

fn enumerate_events(args: &BoundArgs) -> Result<Enumerated> {
    let trellis = build_trellis(&args.code);
    let d_free = free_distance(&trellis)?;
    let max_weight = args.max_dh.unwrap_or(d_free + 4);
    let max_length = match args.max_len {
        Some(len) => usize::try_from(len).context("--max-len too large")?,
        None => length_for_completeness(&trellis, max_weight),
    };
    let events = enumerate_error_events(&trellis, max_weight, max_length)?;
    Ok(Enumerated {
        trellis,
        d_free,
        events,
    })
}

fn bounds_json(code: &CodeSpec, bounds: EventBounds) -> serde_json::Value {
    json!({ "code": code, "max_dh": bounds.max_weight, "max_len": bounds.max_length })
}

fn enumerate(args: EnumerateArgs) -> Result<Status> {
    let found = enumerate_events(&args.bounds)?;
    let events = &found.events;
    let mut config = bounds_json(&args.bounds.code, events.bounds);
    config["command"] = json!("enumerate");
    let csv = preamble(&config) + &events.to_csv();
    write_or_print(args.out.as_deref(), &csv)?;

    let summary = format!(
        "d_free={} events={} complete_to_weight={} max_dH={} max_L={} states={}",
        found.d_free,
        events.events.len(),
        events.complete_to_weight,
        events.bounds.max_weight,
        events.bounds.max_length,
        found.trellis.num_states()
    );
    if args.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(Status::Pass)
}

#[derive(Serialize)]
struct WitnessEvent {
    criterion: u8,
    event_id: usize,
    phase: usize,
    d_h: u32,
    length: usize,
    input_bits: String,
    coded_bits: String,
    alpha: String,
}

/// The first violation of each failing criterion, with its event spelled out.
fn witnesses(report: &CriteriaReport, map: &InterleaverMap, events: &EventEnumeration) -> Vec<WitnessEvent> {
    report
        .criteria
        .iter()
        .filter_map(|c| report.first_violation(c.criterion))
        .map(|v| {
            let event = &events.events[v.event_id];
            WitnessEvent {
                criterion: v.criterion,
                event_id: v.event_id,
                phase: v.phase,
                d_h: event.weight,
                length: event.length,
                input_bits: bits_to_string(&event.input_bits),
                coded_bits: bits_to_string(&event.coded_bits),
                alpha: alpha_vector(map, event, v.phase).to_string(),
            }
        })
        .collect()
}

fn verify_cmd(args: VerifyArgs) -> Result<Status> {
    let spec = read_interleaver(&args.interleaver, args.mode)?;
    let map = build_map(&spec)?;
    let found = enumerate_events(&args.bounds)?;
    let code = &args.bounds.code;
    let mut report = verify(&map, &found.events);
    report.notes.extend(structural_argument(code, &map));
    let witnesses = witnesses(&report, &map, &found.events);

    let mut config = bounds_json(code, found.events.bounds);
    config["command"] = json!("verify");
    config["interleaver"] = json!(spec);
    let doc = json!({
        "tool": "bicmb",
        "version": VERSION,
        "config": config,
        "d_free": found.d_free,
        "events": found.events.events.len(),
        "report": report,
        "witnesses": witnesses,
    });
    let text = serde_json::to_string_pretty(&doc)? + "\n";
    if let Some(out) = &args.out {
        fs::write(out, &text).with_context(|| format!("writing {}", out.display()))?;
    }
    if args.json {
        print!("{text}");
    } else {
        let mut table = format!("code: {code}  d_free: {}\ninterleaver: {spec}\n", found.d_free);
        table += &report.to_table(&found.events, 20);
        for w in &witnesses {
            let _ = writeln!(
                table,
                "witness for criterion {}: event {} phase {} d_H={} L={} input={} coded={} alpha={}",
                w.criterion, w.event_id, w.phase, w.d_h, w.length, w.input_bits, w.coded_bits, w.alpha
            );
        }
        print!("{table}");
    }
    Ok(if report.pass { Status::Pass } else { Status::Violations })
}

fn search(args: SearchArgs) -> Result<Status> {
    let template = read_interleaver(&args.interleaver, args.mode)?;
    let found = enumerate_events(&args.bounds)?;
    let code = &args.bounds.code;
    let budget = usize::try_from(args.budget).context("--budget too large")?;
    let outcome = search_interleaver(code, &template, &found.events, budget, args.seed)?;

    let mut config = bounds_json(code, found.events.bounds);
    config["command"] = json!("search");
    config["template"] = json!(template);
    config["budget"] = json!(args.budget);
    config["seed"] = json!(args.seed);
    if args.json {
        let doc = json!({ "tool": "bicmb", "version": VERSION, "config": config, "result": outcome });
        println!("{}", serde_json::to_string_pretty(&doc)?);
    }
    match outcome {
        SearchOutcome::Found(success) => {
            let text = preamble(&config) + &success.interleaver + "\n";
            if args.json {
                if let Some(out) = &args.out {
                    fs::write(out, &text).with_context(|| format!("writing {}", out.display()))?;
                }
            } else {
                write_or_print(args.out.as_deref(), &text)?;
            }
            eprintln!("found a passing map after {} candidate(s)", success.candidates_tried);
            Ok(Status::Pass)
        }
        SearchOutcome::Exhausted(failure) => {
            if !args.json {
                print!(
                    "no passing map in {} candidate(s); best has {} violation(s)\nbest: {}\n",
                    failure.candidates_tried, failure.best_violations, failure.best_interleaver
                );
                print!("{}", failure.best_report.to_table(&found.events, 10));
            }
            Ok(Status::Violations)
        }
    }
}

#[derive(Serialize)]
struct CurveReport {
    interleaver: String,
    curve: BerCurve,
    diversity: Option<DiversityEstimate>,
    diversity_error: Option<String>,
}

fn simulate(args: SimulateArgs) -> Result<Status> {
    let text = fs::read_to_string(&args.config).with_context(|| format!("reading {}", args.config.display()))?;
    let mut config = RunConfig::from_json(&text).with_context(|| format!("parsing {}", args.config.display()))?;
    match config.seed {
        Some(seed) if seed != args.seed => bail!("config seed {seed} conflicts with --seed {}", args.seed),
        _ => config.seed = Some(args.seed),
    }
    if let Some(path) = &args.compare {
        let spec = read_interleaver(path, None)?;
        match &config.sim.compare_interleaver {
            Some(existing) if *existing != spec => {
                bail!("--compare conflicts with sim.compare_interleaver in the config")
            }
            _ => config.sim.compare_interleaver = Some(spec),
        }
    }
    let workers = match args.workers {
        Some(w) => usize::try_from(w).context("--workers too large")?,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };

    let window = config.fit_window();
    let run = |spec: &InterleaverSpec| -> Result<CurveReport> {
        let sim = config.sim_config(spec, args.seed)?;
        let curve = sweep_snr::<f64>(&sim, workers)?;
        let (diversity, diversity_error) = match estimate_diversity(&curve, window, config.sim.fit_error_floor) {
            Ok(d) => (Some(d), None),
            Err(e) => (None, Some(e.to_string())),
        };
        Ok(CurveReport {
            interleaver: spec.to_string(),
            curve,
            diversity,
            diversity_error,
        })
    };
    let primary = run(&config.interleaver)?;
    let compare = config.sim.compare_interleaver.as_ref().map(run).transpose()?;
    let order_gap = match (&primary.diversity, compare.as_ref().and_then(|c| c.diversity.as_ref())) {
        (Some(a), Some(b)) => Some(a.order - b.order),
        _ => None,
    };

    let config_json = serde_json::to_value(&config)?;
    let doc = json!({
        "tool": "bicmb",
        "version": VERSION,
        "config": config_json,
        "snr_definition": "SNR_dB = 10 log10(S / N0) with unit-energy symbols per stream",
        "primary": primary,
        "compare": compare,
        "order_gap": order_gap,
    });
    let report = serde_json::to_string_pretty(&doc)? + "\n";
    let head = preamble(&config_json);
    let primary_csv = format!("{head}# curve: primary\n{}", primary.curve.to_csv());
    let compare_csv = compare
        .as_ref()
        .map(|c| format!("{head}# curve: compare\n{}", c.curve.to_csv()));

    match &args.out {
        Some(prefix) => {
            let with_ext = |ext: &str| {
                let mut name = prefix.as_os_str().to_owned();
                name.push(ext);
                PathBuf::from(name)
            };
            write_or_print(Some(&with_ext(".csv")), &primary_csv)?;
            if let Some(csv) = &compare_csv {
                write_or_print(Some(&with_ext(".compare.csv")), csv)?;
            }
            write_or_print(Some(&with_ext(".json")), &report)?;
        }
        None => {
            print!("{primary_csv}");
            if let Some(csv) = &compare_csv {
                print!("\n{csv}");
            }
            let div = json!({ "primary": primary.diversity, "compare": compare.as_ref().map(|c| &c.diversity), "order_gap": order_gap });
            println!("# diversity: {div}");
        }
    }

    let describe = |label: &str, c: &CurveReport| match (&c.diversity, &c.diversity_error) {
        (Some(d), _) => eprintln!(
            "{label}: diversity order {:.3} over {:?} dB ({} points, rms residual {:.3})",
            d.order,
            d.window_db,
            d.fitted_snr_db.len(),
            d.residual
        ),
        (None, Some(e)) => eprintln!("{label}: no diversity fit: {e}"),
        (None, None) => {}
    };
    describe("primary", &primary);
    if let Some(c) = &compare {
        describe("compare", c);
    }
    if let Some(gap) = order_gap {
        eprintln!("order gap: {gap:.3}");
    }
    Ok(Status::Pass)
}
