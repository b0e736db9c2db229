//! `relfuzz`: fuzzy MTTF analysis of fault-tolerant two-phase interleaved
//! converters, from mission-profile thermal stress to defuzzified lifetime,
//! with Monte Carlo cross-checks.

mod config;
mod pipeline;
mod report;
mod svg;

use clap::{Parser, Subcommand, ValueEnum};
use relfuzz::fuzzy::{FuzzyMethod, Tfn, Unit};
use relfuzz::mission::{cluster_telemetry, edges_covering, load_profile, load_telemetry, OutOfRange};
use relfuzz::redundancy::FormulaVariant;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Profile(String),
    Numeric(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Profile(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Profile(m) | CliError::Numeric(m) => m,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "relfuzz",
    version,
    about = "Fuzzy MTTF analysis of fault-tolerant two-phase interleaved converters"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodFlag {
    AlphaCut,
    Vertex,
}

impl From<MethodFlag> for FuzzyMethod {
    fn from(m: MethodFlag) -> FuzzyMethod {
        match m {
            MethodFlag::AlphaCut => FuzzyMethod::AlphaCut,
            MethodFlag::Vertex => FuzzyMethod::Vertex,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantFlag {
    AsPrinted,
    Consistent,
}

impl From<VariantFlag> for FormulaVariant {
    fn from(v: VariantFlag) -> FormulaVariant {
        match v {
            VariantFlag::AsPrinted => FormulaVariant::AsPrinted,
            VariantFlag::Consistent => FormulaVariant::Consistent,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline and write a JSON report
    Analyze {
        /// Mission profile CSV (t_ambient_c,power_w,probability)
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Run configuration JSON
        #[arg(long)]
        config: PathBuf,
        /// Report output path
        #[arg(long)]
        out: PathBuf,
        /// Directory for membership polyline CSVs (x_years,mu)
        #[arg(long)]
        plot: Option<PathBuf>,
        /// Standalone SVG rendering of the membership curves
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Inject per-mode rate totals "a2,b2,c2,a1,b1,c1" (failures per
        /// year), skipping the mission, stress, and redundancy stages
        #[arg(long, value_name = "SIX_FLOATS")]
        rates_override: Option<String>,
        /// Override the redundancy formula variant from the config
        #[arg(long, value_enum)]
        variant: Option<VariantFlag>,
        /// Override the fuzzy evaluation method from the config
        #[arg(long, value_enum)]
        method: Option<MethodFlag>,
        /// Override the Monte Carlo trial count from the config
        #[arg(long)]
        trials: Option<u64>,
        /// Override the Monte Carlo seed from the config
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Cluster raw telemetry into a mission profile CSV
    Cluster {
        /// Telemetry CSV (timestamp,t_ambient_c,power_w)
        #[arg(long)]
        telemetry: PathBuf,
        /// Profile output path
        #[arg(long)]
        out: PathBuf,
        /// Ambient-temperature bin width in degrees C
        #[arg(long, default_value_t = 5.0)]
        t_bin_width_c: f64,
        /// Power bin width in watts
        #[arg(long, default_value_t = 100.0)]
        p_bin_width_w: f64,
        /// Explicit ambient bin edges "e0,e1,..." overriding the width
        #[arg(long, value_name = "FLOAT_LIST")]
        t_edges: Option<String>,
        /// Explicit power bin edges "e0,e1,..." overriding the width
        #[arg(long, value_name = "FLOAT_LIST")]
        p_edges: Option<String>,
        /// Clamp out-of-range samples into the edge bins instead of failing
        #[arg(long)]
        clamp: bool,
    },
    /// Monte Carlo MTTF of the chain at the membership peaks
    Simulate {
        /// Run configuration JSON
        #[arg(long)]
        config: PathBuf,
        /// Mission profile CSV (needed unless --rates-override is given)
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Inject per-mode rate totals "a2,b2,c2,a1,b1,c1" (failures per year)
        #[arg(long, value_name = "SIX_FLOATS")]
        rates_override: Option<String>,
        /// Override the trial count from the config
        #[arg(long)]
        trials: Option<u64>,
        /// Override the seed from the config
        #[arg(long)]
        seed: Option<u64>,
        /// Also write the JSON document to this path
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the centroid of a triangular fuzzy number
    Defuzzify {
        a: f64,
        b: f64,
        c: f64,
    },
    /// Print the tool version
    Version,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(err) = run(cli) {
        eprintln!("error: {}", err.message());
        std::process::exit(err.exit_code());
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Analyze {
            profile,
            config,
            out,
            plot,
            svg,
            rates_override,
            variant,
            method,
            trials,
            seed,
        } => cmd_analyze(AnalyzeArgs {
            profile,
            config,
            out,
            plot,
            svg,
            rates_override,
            variant,
            method,
            trials,
            seed,
        }),
        Command::Cluster {
            telemetry,
            out,
            t_bin_width_c,
            p_bin_width_w,
            t_edges,
            p_edges,
            clamp,
        } => cmd_cluster(&telemetry, &out, t_bin_width_c, p_bin_width_w, t_edges, p_edges, clamp),
        Command::Simulate { config, profile, rates_override, trials, seed, out } => {
            cmd_simulate(&config, profile.as_deref(), rates_override.as_deref(), trials, seed, out.as_deref())
        }
        Command::Defuzzify { a, b, c } => cmd_defuzzify(a, b, c),
        Command::Version => {
            println!("relfuzz {}", env!("CARGO_PKG_VERSION"));
            Ok(())
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    match std::env::var("RELFUZZ_THREADS") {
        Err(_) => Ok(()),
        Ok(raw) => {
            let n: usize = raw.trim().parse().map_err(|_| {
                CliError::Config(format!(
                    "RELFUZZ_THREADS must be a positive integer, got {raw:?}"
                ))
            })?;
            if n == 0 {
                return Err(CliError::Config(
                    "RELFUZZ_THREADS must be a positive integer, got 0".into(),
                ));
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| CliError::Config(format!("RELFUZZ_THREADS: {e}")))
        }
    }
}

struct AnalyzeArgs {
    profile: Option<PathBuf>,
    config: PathBuf,
    out: PathBuf,
    plot: Option<PathBuf>,
    svg: Option<PathBuf>,
    rates_override: Option<String>,
    variant: Option<VariantFlag>,
    method: Option<MethodFlag>,
    trials: Option<u64>,
    seed: Option<u64>,
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    let bundle = config::load_config(&args.config)?;
    let rates_override = args
        .rates_override
        .as_deref()
        .map(parse_rates_override)
        .transpose()?;
    let profile_data = args
        .profile
        .as_deref()
        .map(load_profile_with_hash)
        .transpose()?;
    if profile_data.is_none() && rates_override.is_none() {
        return Err(CliError::Config(
            "either --profile or --rates-override must be given".into(),
        ));
    }

    let inputs = pipeline::AnalyzeInputs {
        config: &bundle.config,
        config_sha256: &bundle.sha256,
        profile: profile_data.as_ref().map(|(p, _)| p),
        profile_sha256: profile_data.as_ref().map(|(_, sha)| sha.as_str()),
        rates_override,
        method_override: args.method.map(FuzzyMethod::from),
        variant_override: args.variant.map(FormulaVariant::from),
        trials_override: args.trials,
        seed_override: args.seed,
    };
    let (rep, series) = pipeline::analyze(&inputs)?;

    let bytes = report::to_json_bytes(&rep);
    std::fs::write(&args.out, &bytes)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", args.out.display())))?;

    if let Some(dir) = &args.plot {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Config(format!("cannot create {}: {e}", dir.display())))?;
        for s in &series {
            let mut text = String::from("x_years,mu\n");
            for &(x, mu) in &s.points {
                text.push_str(&format!(
                    "{:?},{:?}\n",
                    report::round_sig6(x),
                    report::round_sig6(mu)
                ));
            }
            let path = dir.join(format!("mttf_{}.csv", s.name));
            std::fs::write(&path, text)
                .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
        }
    }
    if let Some(path) = &args.svg {
        std::fs::write(path, svg::render(&series))
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
    }

    for c in &rep.configurations {
        println!(
            "{} ({}): defuzzified MTTF {:?} years [{}], simulation within CI: {}",
            c.kind,
            c.formula_variant,
            match rep.provenance.method.as_str() {
                "vertex" => c.mttf_vertex.defuzzified_years.get(),
                _ => c.mttf_alpha_cut.defuzzified_years.get(),
            },
            rep.provenance.method,
            c.monte_carlo.within_ci95
        );
    }
    println!("report written to {}", args.out.display());
    Ok(())
}

fn cmd_cluster(
    telemetry: &Path,
    out: &Path,
    t_bin_width_c: f64,
    p_bin_width_w: f64,
    t_edges: Option<String>,
    p_edges: Option<String>,
    clamp: bool,
) -> Result<(), CliError> {
    let samples = load_telemetry(telemetry)
        .map_err(|e| CliError::Profile(format!("telemetry {}: {e}", telemetry.display())))?;
    if samples.is_empty() {
        return Err(CliError::Profile(format!(
            "telemetry {}: no samples",
            telemetry.display()
        )));
    }

    let t_edges = match t_edges {
        Some(raw) => parse_edges(&raw, "--t-edges")?,
        None => derived_edges(samples.iter().map(|s| s.0), t_bin_width_c, "--t-bin-width-c")?,
    };
    let p_edges = match p_edges {
        Some(raw) => parse_edges(&raw, "--p-edges")?,
        None => derived_edges(samples.iter().map(|s| s.1), p_bin_width_w, "--p-bin-width-w")?,
    };

    let policy = if clamp { OutOfRange::Clamp } else { OutOfRange::Reject };
    let profile = cluster_telemetry(&samples, &t_edges, &p_edges, policy)
        .map_err(|e| CliError::Profile(format!("clustering: {e}")))?;

    let mut text = String::from("t_ambient_c,power_w,probability\n");
    for s in profile.states() {
        text.push_str(&format!(
            "{:?},{:?},{:?}\n",
            s.t_ambient_c, s.power_w, s.probability
        ));
    }
    std::fs::write(out, text)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", out.display())))?;
    println!(
        "{} mission states from {} samples written to {}",
        profile.len(),
        samples.len(),
        out.display()
    );
    Ok(())
}

fn cmd_simulate(
    config_path: &Path,
    profile: Option<&Path>,
    rates_override: Option<&str>,
    trials: Option<u64>,
    seed: Option<u64>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let bundle = config::load_config(config_path)?;
    let rates_override = rates_override.map(parse_rates_override).transpose()?;
    let profile_data = profile.map(load_profile_with_hash).transpose()?;
    let trials = trials.unwrap_or(bundle.config.simulation.trials);
    let seed = seed.unwrap_or(bundle.config.simulation.seed);

    let outcome = pipeline::simulate_peak_chain(
        &bundle.config,
        profile_data.as_ref().map(|(p, _)| p),
        rates_override,
        trials,
        seed,
    )?;

    let doc = report::SimulateReport {
        schema: report::REPORT_SCHEMA,
        rng: "chacha8".to_string(),
        seed,
        trials,
        lambda2_per_year: outcome.lambda2_peak.into(),
        lambda1_per_year: outcome.lambda1_peak.into(),
        coverage: outcome.coverage_peak.into(),
        analytic_mttf_years: outcome.analytic.into(),
        simulated_mean_years: outcome.sim.mean_mttf_years.into(),
        std_error_years: outcome.sim.std_error_years.into(),
        ci95_years: [outcome.sim.ci95.0.into(), outcome.sim.ci95.1.into()],
        within_ci95: outcome.sim.ci95_contains(outcome.analytic),
    };
    let bytes = report::to_json_bytes(&doc);
    std::io::stdout()
        .write_all(&bytes)
        .map_err(|e| CliError::Config(format!("cannot write to stdout: {e}")))?;
    if let Some(path) = out {
        std::fs::write(path, &bytes)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn cmd_defuzzify(a: f64, b: f64, c: f64) -> Result<(), CliError> {
    let t = Tfn::new(a, b, c, Unit::YEARS)
        .map_err(|e| CliError::Config(format!("defuzzify: {e}")))?;
    println!("{:?}", report::round_sig6(t.defuzzify_centroid()));
    Ok(())
}

fn load_profile_with_hash(path: &Path) -> Result<(relfuzz::mission::MissionProfile, String), CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Profile(format!("cannot read profile {}: {e}", path.display())))?;
    let profile = load_profile(path)
        .map_err(|e| CliError::Profile(format!("profile {}: {e}", path.display())))?;
    Ok((profile, config::sha256_hex(&bytes)))
}

fn parse_rates_override(raw: &str) -> Result<(Tfn, Tfn), CliError> {
    let values: Vec<f64> = raw
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Config(format!("--rates-override: {e}")))?;
    if values.len() != 6 {
        return Err(CliError::Config(format!(
            "--rates-override needs six comma-separated values a2,b2,c2,a1,b1,c1, got {}",
            values.len()
        )));
    }
    let lambda2 = Tfn::new(values[0], values[1], values[2], Unit::PER_YEAR)
        .map_err(|e| CliError::Config(format!("--rates-override mode-2 triple: {e}")))?;
    let lambda1 = Tfn::new(values[3], values[4], values[5], Unit::PER_YEAR)
        .map_err(|e| CliError::Config(format!("--rates-override mode-1 triple: {e}")))?;
    Ok((lambda2, lambda1))
}

fn parse_edges(raw: &str, flag: &str) -> Result<Vec<f64>, CliError> {
    let edges: Vec<f64> = raw
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Config(format!("{flag}: {e}")))?;
    if edges.len() < 2
        || edges.iter().any(|e| !e.is_finite())
        || edges.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(CliError::Config(format!(
            "{flag} needs at least two finite, strictly increasing values"
        )));
    }
    Ok(edges)
}

fn derived_edges(
    values: impl Iterator<Item = f64>,
    width: f64,
    flag: &str,
) -> Result<Vec<f64>, CliError> {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    edges_covering(lo, hi, width).map_err(|e| CliError::Config(format!("{flag}: {e}")))
}
