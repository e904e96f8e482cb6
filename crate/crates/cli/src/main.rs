use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use setlab::transversals::Ps0Variant;
use setlab::FamilySpec;
use setlab_cli::{Command, Format, Model, RunConfig, RunError};

/// Finite set-system topologies, transversals and block-symmetry checks.
#[derive(Parser, Debug)]
#[command(name = "setlab", version)]
struct Cli {
    /// JSON run configuration; the flags below then override its output settings.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    command: Option<Command>,
    /// Ground set size.
    #[arg(long)]
    m: Option<usize>,
    /// Finite-set bound: points default to sets of size at most t.
    #[arg(long)]
    t: Option<usize>,
    /// Small-set bound: Z defaults to sets of size at most s.
    #[arg(long)]
    s: Option<usize>,
    /// Seed for randomized sweeps.
    #[arg(long)]
    seed: Option<u64>,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Point family as JSON, e.g. '{"ground_size":3,"kind":"card_at_most","s":1}'.
    #[arg(long, value_parser = parse_family)]
    a: Option<FamilySpec>,
    /// Neighbourhood family as JSON.
    #[arg(long, value_parser = parse_family)]
    z: Option<FamilySpec>,
    /// Families as JSON, e.g. '[[[0,1],[1,2]]]'.
    #[arg(long)]
    families: Option<String>,
    /// Exceptions allowed when choosing a hitting family.
    #[arg(long)]
    k_cap: Option<usize>,
    /// Largest hitting set considered.
    #[arg(long)]
    size_cap: Option<usize>,
    /// Partition principle variant: I, II, C or D.
    #[arg(long, value_parser = parse_variant)]
    variant: Option<Ps0Variant>,
    /// Block count for partition principles.
    #[arg(long)]
    partition_cap: Option<usize>,
    /// Search budget for partition enumeration.
    #[arg(long)]
    budget: Option<u64>,
    /// Ground-set partition for the trace recursion, as JSON.
    #[arg(long)]
    blocks: Option<String>,
    #[arg(long, value_enum)]
    model: Option<Model>,
    /// Number of families in a symmetry model.
    #[arg(long)]
    n: Option<usize>,
    /// Largest block size in the staircase model.
    #[arg(long)]
    j: Option<usize>,
    /// Largest member size admitted in a symmetry model.
    #[arg(long)]
    s_cap: Option<usize>,
    /// Block size in the block-partition model.
    #[arg(long)]
    block_size: Option<usize>,
    /// Support atoms, comma separated.
    #[arg(long, value_delimiter = ',')]
    support: Option<Vec<usize>>,
    /// Scan all supports up to this size.
    #[arg(long)]
    max_support: Option<usize>,
    /// Support atoms allowed per block during a scan.
    #[arg(long)]
    per_block_cap: Option<usize>,
    /// Point for the homogeneity map, comma separated.
    #[arg(long, value_delimiter = ',')]
    x0: Option<Vec<usize>>,
    /// Flip pattern for the involution, comma separated.
    #[arg(long, value_delimiter = ',')]
    g0: Option<Vec<usize>>,
    /// Subspace restriction set, comma separated.
    #[arg(long, value_delimiter = ',')]
    y: Option<Vec<usize>>,
    /// Instances in a battery sweep.
    #[arg(long)]
    count: Option<usize>,
    /// Print the effective configuration as JSON and exit.
    #[arg(long)]
    emit_config: bool,
}

fn parse_json<T: serde::de::DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_str(s).map_err(|e| e.to_string())
}

fn flag_json<T: serde::de::DeserializeOwned>(flag: &str, s: &str) -> Result<T, RunError> {
    parse_json(s).map_err(|e| RunError::Usage(format!("{flag}: {e}")))
}

fn parse_family(s: &str) -> Result<FamilySpec, String> {
    parse_json(s)
}

fn parse_variant(s: &str) -> Result<Ps0Variant, String> {
    parse_json(&format!("\"{s}\""))
}

fn config_of(cli: Cli) -> Result<RunConfig, RunError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| RunError::Usage(format!("{}: {e}", path.display())))?;
            RunConfig::from_json(&text).map_err(|e| RunError::Usage(format!("{}: {e}", path.display())))?
        }
        None => {
            let command = cli.command.ok_or_else(|| RunError::Usage("give --config or --command".into()))?;
            let mut c = RunConfig::new(command);
            c.seed = cli.seed.unwrap_or(0);
            c.m = cli.m;
            c.t = cli.t;
            c.s = cli.s;
            c.a = cli.a;
            c.z = cli.z;
            c.families = cli.families.as_deref().map(|f| flag_json("--families", f)).transpose()?;
            c.k_cap = cli.k_cap;
            c.size_cap = cli.size_cap;
            c.variant = cli.variant;
            c.partition_cap = cli.partition_cap;
            c.budget = cli.budget;
            c.blocks = cli.blocks.as_deref().map(|b| flag_json("--blocks", b)).transpose()?;
            c.model = cli.model;
            c.n = cli.n;
            c.j = cli.j;
            c.s_cap = cli.s_cap;
            c.block_size = cli.block_size;
            c.support = cli.support;
            c.max_support = cli.max_support;
            c.per_block_cap = cli.per_block_cap;
            c.x0 = cli.x0;
            c.g0 = cli.g0;
            c.y = cli.y;
            c.count = cli.count;
            c
        }
    };
    if let Some(out) = cli.out {
        cfg.output.path = Some(out);
    }
    if let Some(format) = cli.format {
        cfg.output.format = format;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let emit = cli.emit_config;
    let started = Instant::now();
    let result = config_of(cli).and_then(|cfg| {
        if emit {
            setlab_cli::write_stdout(&format!("{}\n", cfg.to_json()))?;
            Ok(0)
        } else {
            setlab_cli::run_and_write(&cfg)
        }
    });
    match result {
        Ok(code) => {
            eprintln!("finished in {:.3} s", started.elapsed().as_secs_f64());
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
