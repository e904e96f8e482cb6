//! Run configuration: one JSON document, or the same fields given as flags.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use setlab::transversals::Ps0Variant;
use setlab::FamilySpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Space,
    Cantor,
    Hitting,
    Thm39,
    Ps0,
    Trace,
    Symmetry,
    BatterySweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Space => "space",
            Command::Cantor => "cantor",
            Command::Hitting => "hitting",
            Command::Thm39 => "thm39",
            Command::Ps0 => "ps0",
            Command::Trace => "trace",
            Command::Symmetry => "symmetry",
            Command::BatterySweep => "battery-sweep",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Human,
    #[default]
    Structured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    /// Two-atom blocks, one pair per family.
    Pairs,
    /// Blocks of sizes 1..=J per family index.
    Staircase,
    /// Equal blocks whose singletons are partitioned.
    BlockPartition,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

type Sets = Vec<Vec<usize>>;

/// Everything a run depends on. Absent optional fields stay absent when
/// written back, so a parsed config serializes to an equivalent document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: Output,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<FamilySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<FamilySpec>,
    /// Families of sets over `0..m`, one list of members each.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub families: Option<Vec<Sets>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<Ps0Variant>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    /// Blocks of the ground-set partition for the trace recursion.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Sets>,
    /// Seed partitions of the first family for the trace recursion.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed_partitions: Option<Vec<Vec<Sets>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<Model>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_support: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_block_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g0: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<usize>>,
    /// Instances in a sweep.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            seed: 0,
            output: Output::default(),
            m: None,
            t: None,
            s: None,
            a: None,
            z: None,
            families: None,
            k_cap: None,
            size_cap: None,
            variant: None,
            partition_cap: None,
            budget: None,
            blocks: None,
            seed_partitions: None,
            model: None,
            n: None,
            j: None,
            s_cap: None,
            block_size: None,
            support: None,
            max_support: None,
            per_block_cap: None,
            x0: None,
            g0: None,
            y: None,
            count: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}
