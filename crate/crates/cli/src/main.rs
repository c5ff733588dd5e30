use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use oppnet_cli::commands::{self, RunContext};
use oppnet_cli::config::{resolve, ExperimentConfig};
use oppnet_cli::report::Reporter;
use serde::Deserialize;
use std::path::PathBuf;

/// Analytical predictors, Monte Carlo contact simulation, and offloading
/// optimizers for content-centric opportunistic networks.
#[derive(Parser)]
#[command(name = "oppnet", version, about)]
struct Cli {
    /// TOML experiment configuration (defaults apply when omitted).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (flag > OPPNET_OUT > config output-dir > ./oppnet-out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Override any config key by dotted path, e.g. --set rate.cv=0.5
    /// or --set ttl=[0.05,0.1]. Values use TOML syntax; flags win over
    /// the config file.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    sets: Vec<String>,

    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    nodes: Option<u32>,
    #[arg(long, global = true)]
    contents: Option<u32>,
    #[arg(long, global = true)]
    replications: Option<u32>,
    #[arg(long, global = true)]
    scenarios: Option<u32>,
    /// Comma-separated deadline list, e.g. --ttl 0.05,0.1
    #[arg(long, global = true, value_delimiter = ',')]
    ttl: Option<Vec<f64>>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the analytic predictors and bounds for the configuration.
    Analyze,
    /// Run the Monte Carlo simulator (synthetic contacts, or --trace replay).
    Simulate {
        /// Replay deliveries over a recorded contact trace (CSV: t,i,j).
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run simulation and analytics side by side and report relative errors.
    Validate {
        /// Comma-separated network sizes, e.g. --sweep-nodes 500,1000,2000
        #[arg(long, value_delimiter = ',')]
        sweep_nodes: Option<Vec<u32>>,
    },
    /// Solve for an allocation table (offload.policy selects the solver).
    Optimize,
    /// Compare offloading policies by simulation (offload.policies).
    OffloadSim,
    /// Fit an empirical rate model from a contact trace.
    Ingest {
        /// Contact trace file (CSV: t,i,j; header optional).
        trace: PathBuf,
    },
}

fn main() {
    if let Err(err) = run() {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn run() -> Result<()> {
    let cli = Cli::parse();

    let text = match &cli.config {
        Some(path) => std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?,
        None => String::new(),
    };
    let mut doc: toml::Table = toml::from_str(&text).context("config syntax")?;
    for set in &cli.sets {
        apply_set(&mut doc, set)?;
    }
    apply_flag(&mut doc, "seed", cli.seed.map(|v| toml::Value::Integer(v as i64)));
    apply_flag(&mut doc, "nodes", cli.nodes.map(|v| toml::Value::Integer(v.into())));
    apply_flag(&mut doc, "contents", cli.contents.map(|v| toml::Value::Integer(v.into())));
    apply_flag(
        &mut doc,
        "replications",
        cli.replications.map(|v| toml::Value::Integer(v.into())),
    );
    apply_flag(
        &mut doc,
        "scenarios",
        cli.scenarios.map(|v| toml::Value::Integer(v.into())),
    );
    apply_flag(
        &mut doc,
        "ttl",
        cli.ttl.as_ref().map(|ts| {
            toml::Value::Array(ts.iter().map(|&t| toml::Value::Float(t)).collect())
        }),
    );

    let config = ExperimentConfig::deserialize(doc).map_err(|e| anyhow::anyhow!("{e}"))?;
    let resolved = resolve(config)?;

    let out_dir = cli
        .out
        .or_else(|| std::env::var_os("OPPNET_OUT").map(PathBuf::from))
        .or_else(|| resolved.config.output_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("oppnet-out"));
    let ctx = RunContext::new(resolved, Reporter::new(&out_dir)?);

    match &cli.command {
        Command::Analyze => commands::analyze(&ctx)?,
        Command::Simulate { trace } => {
            let trace_text = trace
                .as_ref()
                .map(|p| {
                    std::fs::read_to_string(p)
                        .with_context(|| format!("reading trace {}", p.display()))
                })
                .transpose()?;
            commands::simulate(&ctx, trace_text.as_deref())?
        }
        Command::Validate { sweep_nodes } => commands::validate(&ctx, sweep_nodes.clone())?,
        Command::Optimize => commands::optimize(&ctx)?,
        Command::OffloadSim => commands::offload_sim(&ctx)?,
        Command::Ingest { trace } => {
            let text = std::fs::read_to_string(trace)
                .with_context(|| format!("reading trace {}", trace.display()))?;
            commands::ingest(&ctx, &text)?
        }
    };
    println!("results written to {}", ctx.reporter.dir().display());
    Ok(())
}

fn apply_flag(doc: &mut toml::Table, key: &str, value: Option<toml::Value>) {
    if let Some(v) = value {
        doc.insert(key.to_string(), v);
    }
}

/// Apply `--set a.b.c=value`; the value is parsed as TOML (so numbers,
/// booleans, arrays, and quoted strings all work), falling back to a bare
/// string.
fn apply_set(doc: &mut toml::Table, spec: &str) -> Result<()> {
    let Some((path, raw)) = spec.split_once('=') else {
        bail!("--set expects KEY=VALUE, got \"{spec}\"");
    };
    let value = match toml::from_str::<toml::Table>(&format!("v = {raw}")) {
        Ok(mut t) => t.remove("v").unwrap(),
        Err(_) => toml::Value::String(raw.to_string()),
    };
    let segments: Vec<&str> = path.split('.').collect();
    let mut table = doc;
    for seg in &segments[..segments.len() - 1] {
        table = table
            .entry(seg.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .with_context(|| format!("--set: \"{seg}\" in \"{path}\" is not a table"))?;
    }
    table.insert(segments[segments.len() - 1].to_string(), value);
    Ok(())
}
