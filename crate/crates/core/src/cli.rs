//! The `eyeball-jedi` command line.
//!
//! Exit codes: 0 on success, 2 for configuration, input and fetch errors
//! (clap usage errors also exit with 2), 3 when no traceroute matches the
//! measurement plan of a selected country.

use std::ffi::OsString;
use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use log::warn;
use thiserror::Error;

use crate::config::{ConfigError, CountryFilter, Overrides, RunConfig};
use crate::coverage::{coverage_world_report, write_world_csv, CoverageReport};
use crate::ingest::http::{AtlasClient, ClientConfig, FetchError};
use crate::ingest::{self, write_probe_inventory, write_traceroute_results};
use crate::matrix::{summarize, write_matrix_json, write_metrics_csv};
use crate::model::{CountryCode, EyeballMatrix};
use crate::pipeline::{files, Dataset, PipelineError};
use crate::render::render_svg;
use crate::selection::selection_rows;

#[derive(Debug, Parser)]
#[command(
    name = "eyeball-jedi",
    version,
    about = "Eyeball network coverage and interconnection analysis"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: CommonOpts,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dominant eyeball networks and their probe coverage.
    Coverage,
    /// Probe selection and the traceroute tasks to launch.
    Plan,
    /// Classify traceroutes and compute the AS-to-AS matrix and metrics.
    Analyze,
    /// Draw previously computed matrices as SVG.
    Render,
    /// Download the probe inventory and measurement results.
    Fetch,
}

#[derive(Debug, Args)]
pub struct CommonOpts {
    /// Two-letter country code.
    #[arg(long, global = true, value_name = "CC", conflicts_with = "all")]
    pub country: Option<String>,
    /// Every country present in the population estimates.
    #[arg(long, global = true)]
    pub all: bool,
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Cumulative user share at which network selection stops.
    #[arg(long, global = true, value_name = "FRACTION")]
    pub cap: Option<f64>,
    /// Smallest per-network user share considered.
    #[arg(long, global = true, value_name = "FRACTION")]
    pub floor: Option<f64>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{}: {message}", path.display())]
    Input { path: PathBuf, message: String },
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Fetch(#[from] FetchError),
    #[error("fetch needs `http.base_url` in the config file")]
    NoBaseUrl,
    #[error("{count} measurement(s) could not be fetched")]
    PartialFetch { count: usize },
    #[error("cannot write {}: {source}", path.display())]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("no traceroute matches the measurement plan for {}", join(.0))]
    NoMatches(Vec<CountryCode>),
}

fn join(ccs: &[CountryCode]) -> String {
    ccs.iter()
        .map(|c| c.as_str())
        .collect::<Vec<_>>()
        .join(", ")
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NoMatches(_) => 3,
            _ => 2,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code; diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let config = load_config(&cli.opts)?;
    match cli.command {
        Command::Coverage => cmd_coverage(&config),
        Command::Plan => cmd_plan(&config),
        Command::Analyze => cmd_analyze(&config),
        Command::Render => cmd_render(&config),
        Command::Fetch => cmd_fetch(&config),
    }
}

fn load_config(opts: &CommonOpts) -> Result<RunConfig, CliError> {
    let country = match (&opts.country, opts.all) {
        (Some(cc), _) => Some(cc.parse::<CountryFilter>()?),
        (None, true) => Some(CountryFilter::All),
        (None, false) => None,
    };
    let overrides = Overrides {
        country,
        output_dir: opts.out.clone(),
        cumulative_cap: opts.cap,
        per_as_floor: opts.floor,
    };
    Ok(RunConfig::load(opts.config.as_deref(), overrides)?)
}

fn read_input<T, E: Display>(
    path: &Path,
    parse: impl FnOnce(&str) -> Result<T, E>,
) -> Result<T, CliError> {
    let input_err = |message: String| CliError::Input {
        path: path.to_path_buf(),
        message,
    };
    let text = fs::read_to_string(path).map_err(|e| input_err(e.to_string()))?;
    parse(&text).map_err(|e| input_err(e.to_string()))
}

/// Which inputs a command needs.
#[derive(Clone, Copy)]
enum Needs {
    Coverage,
    Everything,
}

fn load_dataset(config: &RunConfig, needs: Needs) -> Result<Dataset, CliError> {
    let p = &config.inputs;
    let mut data = Dataset {
        population: read_input(&p.population, ingest::parse_population_estimates)?,
        country_users: read_input(&p.country_users, ingest::parse_country_users)?,
        capitals: read_input(&p.capitals, ingest::parse_capitals)?,
        probes: read_input(&p.probes, ingest::parse_probe_inventory)?,
        ..Dataset::default()
    };
    if let Needs::Everything = needs {
        data.traceroutes = read_input(&p.traceroutes, ingest::parse_traceroute_results)?;
        data.prefixes = read_input(&p.prefix2as, ingest::parse_prefix_table)?;
        data.geo = read_input(&p.geo, ingest::parse_geo_table)?;
    }
    Ok(data)
}

/// With `--all`, countries lacking a user count or capital are skipped with
/// a warning; a single requested country must be complete.
fn selected_countries(config: &RunConfig, data: &Dataset) -> Result<Vec<CountryCode>, CliError> {
    match config.country {
        CountryFilter::One(cc) => {
            if !data.population.iter().any(|r| r.country == cc) {
                return Err(PipelineError::UnknownCountry(cc).into());
            }
            Ok(vec![cc])
        }
        CountryFilter::All => Ok(data
            .countries()
            .into_iter()
            .filter(|cc| {
                let complete =
                    data.country_users.contains_key(cc) && data.capitals.contains_key(cc);
                if !complete {
                    warn!("skipping {cc}: no user count or capital");
                }
                complete
            })
            .collect()),
    }
}

fn write_output(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::create_dir_all(dir)
        .and_then(|()| fs::write(&path, contents))
        .map_err(|source| CliError::Output { path, source })
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn pct(x: f64) -> String {
    format!("{:.1}%", x * 100.0)
}

fn cmd_coverage(config: &RunConfig) -> Result<(), CliError> {
    let data = load_dataset(config, Needs::Coverage)?;
    let countries = selected_countries(config, &data)?;
    let mut reports: Vec<CoverageReport> = Vec::new();
    for cc in countries {
        let report = data.coverage(cc, config.thresholds)?;
        write_output(
            &config.output_dir,
            &format!("coverage_{cc}.json"),
            &to_json(&report),
        )?;
        println!(
            "{cc}: {} eyeball networks, {} covered by probes, {} of users in covered networks",
            report.eyeball_set.len(),
            report.covered_networks.len(),
            pct(report.covered_user_fraction)
        );
        reports.push(report);
    }
    let world = coverage_world_report(&reports);
    write_output(
        &config.output_dir,
        "coverage_world.csv",
        &write_world_csv(&world),
    )
}

fn cmd_plan(config: &RunConfig) -> Result<(), CliError> {
    let data = load_dataset(config, Needs::Coverage)?;
    for cc in selected_countries(config, &data)? {
        let (set, selection, plan) = data.plan(cc, config.thresholds)?;
        write_output(
            &config.output_dir,
            &format!("plan_{cc}.json"),
            &to_json(&plan),
        )?;
        write_output(
            &config.output_dir,
            &format!("probes_{cc}.json"),
            &to_json(&selection_rows(&set, &selection)),
        )?;
        println!("{cc}: {} traceroute tasks", plan.tasks.len());
    }
    Ok(())
}

fn cmd_analyze(config: &RunConfig) -> Result<(), CliError> {
    let data = load_dataset(config, Needs::Everything)?;
    let mut unmatched = Vec::new();
    for cc in selected_countries(config, &data)? {
        let analysis = data.analyze(cc, config.thresholds)?;
        if analysis.matched == 0 {
            unmatched.push(cc);
            continue;
        }
        let dir = &config.output_dir;
        write_output(
            dir,
            &format!("matrix_{cc}.json"),
            &write_matrix_json(&analysis.matrix),
        )?;
        let meta = serde_json::json!({ "generated_at": analysis.matrix.generated_at() });
        write_output(dir, &format!("matrix_{cc}.meta.json"), &to_json(&meta))?;
        write_output(
            dir,
            &format!("metrics_{cc}.csv"),
            &write_metrics_csv(&analysis.metrics),
        )?;
        let mut report = summarize(&analysis.matrix, &analysis.metrics).join("\n");
        report.push('\n');
        write_output(dir, &format!("report_{cc}.txt"), &report)?;
        print!("{report}");
    }
    if unmatched.is_empty() {
        Ok(())
    } else {
        Err(CliError::NoMatches(unmatched))
    }
}

/// `matrix_<CC>.json` files in `dir`, in name order.
fn matrix_files(dir: &Path) -> Result<Vec<(CountryCode, PathBuf)>, CliError> {
    let entries = fs::read_dir(dir).map_err(|e| CliError::Input {
        path: dir.to_path_buf(),
        message: e.to_string(),
    })?;
    let mut found: Vec<(CountryCode, PathBuf)> = entries
        .filter_map(Result::ok)
        .filter_map(|e| {
            let name = e.file_name().into_string().ok()?;
            let cc = name.strip_prefix("matrix_")?.strip_suffix(".json")?;
            Some((CountryCode::new(cc).ok()?, e.path()))
        })
        .collect();
    found.sort();
    Ok(found)
}

fn cmd_render(config: &RunConfig) -> Result<(), CliError> {
    let dir = &config.output_dir;
    let targets = match config.country {
        CountryFilter::One(cc) => vec![(cc, dir.join(format!("matrix_{cc}.json")))],
        CountryFilter::All => matrix_files(dir)?,
    };
    for (cc, path) in targets {
        let matrix: EyeballMatrix = read_input(&path, |t| serde_json::from_str(t))?;
        write_output(dir, &format!("matrix_{cc}.svg"), &render_svg(&matrix))?;
        println!("{cc}: rendered {} cells", matrix.cells().len());
    }
    Ok(())
}

fn cmd_fetch(config: &RunConfig) -> Result<(), CliError> {
    let base_url = config.http.base_url.clone().ok_or(CliError::NoBaseUrl)?;
    let client = AtlasClient::new(&ClientConfig {
        rate_limit: config.http.rate_limit,
        api_key: config.api_key(),
        ..ClientConfig::new(base_url)
    })?;
    let country = match config.country {
        CountryFilter::One(cc) => Some(cc),
        CountryFilter::All => None,
    };
    let probes = client.fetch_probe_inventory(country)?;
    write_output(
        &config.output_dir,
        files::PROBES,
        &write_probe_inventory(&probes),
    )?;
    println!("fetched {} probes", probes.len());

    if config.http.measurement_ids.is_empty() {
        return Ok(());
    }
    let fetched =
        client.fetch_measurement_results_annotated(&config.http.measurement_ids, &probes)?;
    write_output(
        &config.output_dir,
        files::TRACEROUTES,
        &write_traceroute_results(&fetched.traceroutes),
    )?;
    println!("fetched {} traceroutes", fetched.traceroutes.len());
    for (id, e) in &fetched.failures {
        eprintln!("measurement {id}: {e}");
    }
    if fetched.failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::PartialFetch {
            count: fetched.failures.len(),
        })
    }
}
