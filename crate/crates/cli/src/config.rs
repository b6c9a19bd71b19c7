//! Command-line configuration. The parsed structure doubles as the config
//! echo embedded in every report; output paths are left out of the echo so
//! that the same experiment writes the same bytes wherever it goes.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Clone, Debug, Parser, Serialize)]
#[command(name = "limgrp", version, about = "Deterministic limit-group experiments with JSON reports")]
pub struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    #[serde(skip)]
    pub out: Option<PathBuf>,

    /// Seed for sampled sweeps (ChaCha20 stream seeded from this value).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Ping-pong certificates for Baumslag-type products.
    Baumslag {
        #[command(subcommand)]
        cmd: BaumslagCmd,
    },
    /// Surface group twist families.
    Surface {
        #[command(subcommand)]
        cmd: SurfaceCmd,
    },
    /// Generalized doubles and their twisted folds.
    Double {
        #[command(subcommand)]
        cmd: DoubleCmd,
    },
    /// Residual freeness searches.
    Residual {
        #[command(subcommand)]
        cmd: ResidualCmd,
    },
    /// Matrix targets over Z/p^k and Z.
    Padic {
        #[command(subcommand)]
        cmd: PadicCmd,
    },
}

#[derive(Clone, Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaumslagCmd {
    /// Build and verify a certificate, then sample exponents past its bound.
    Certify(CertifyArgs),
    /// Exhaustive exponent windows for increasing lower bounds.
    Sweep(SweepArgs),
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct CertifyArgs {
    /// Instance JSON: `{"rank", "coefficients", "z"}` for the basic form or
    /// `{"rank", "z": [..], "u": [..], "pattern": [..], "relaxed"}`.
    #[arg(long)]
    pub instance: PathBuf,
    /// Check only the adjacencies of the pattern.
    #[arg(long)]
    pub relaxed: bool,
    /// Sampled exponent tuples with every magnitude at least N.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    /// Sampled magnitudes lie in `[N, N + spread]`.
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub spread: u64,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub relaxed: bool,
    /// Magnitudes `N..=N + window` are tried for each `N`.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    pub window: u64,
    /// Largest lower bound `N` tried.
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..))]
    pub cap: u64,
    /// Largest number of exponent tuples per window.
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub tuple_cap: u64,
}

#[derive(Clone, Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurfaceCmd {
    /// Certified and empirical onsets over a ball of the surface group.
    Onset(OnsetArgs),
    /// Exact identities between the twists, the folds and the
    /// representations attached to powers of `(y, y')`.
    TwistAudit(TwistAuditArgs),
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct OnsetArgs {
    /// Genus is `2r + 1`.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub r: u32,
    #[arg(long, default_value_t = 2)]
    pub radius: usize,
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..))]
    pub window: u64,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct TwistAuditArgs {
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub r: u32,
    #[arg(long, default_value_t = 8)]
    pub n_max: u64,
    /// Random words per power, checked against iterated twists.
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
    pub word_length: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Amalgam,
    Hnn,
}

/// A double given by a JSON file, or the double of a free group along a
/// word.
#[derive(Clone, Debug, Args, Serialize)]
pub struct DoubleSource {
    /// Double spec JSON (`kind`, `vertex_ranks`, `edge`, `mirror`,
    /// `target_rank`, `fold`).
    #[arg(long, conflicts_with_all = ["edge", "rank", "kind"])]
    pub double: Option<PathBuf>,
    /// Edge word of the double of `F_rank` along it.
    #[arg(long)]
    pub edge: Option<String>,
    #[arg(long)]
    pub rank: Option<u32>,
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
}

#[derive(Clone, Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DoubleCmd {
    /// Onsets of the twisted folds over reduced forms, or over words of
    /// `F_(n+1)` for the rank extension `x_(n+1) -> a^m b a^-m`.
    Scan(ScanArgs),
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct ScanArgs {
    #[command(flatten)]
    pub source: DoubleSource,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    pub syllables: u64,
    /// Total form length, or word length in extension mode.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    pub length: u64,
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..))]
    pub window: u64,
    /// Rank extension mode: the conjugating element `a`.
    #[arg(long, requires = "extend_b", conflicts_with = "double")]
    pub extend_a: Option<String>,
    /// Rank extension mode: the conjugated element `b`.
    #[arg(long, requires = "extend_a")]
    pub extend_b: Option<String>,
}

#[derive(Clone, Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResidualCmd {
    /// Exhaustive search for a map `F2 x F2 -> F2` separating
    /// `(w,1), (w',1), ([w,w'],1), (1,w)`.
    F2xf2(F2xF2Args),
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct F2xF2Args {
    #[arg(long, default_value = "x1")]
    pub w: String,
    #[arg(long, default_value = "x2")]
    pub w_prime: String,
    /// Longest generator image.
    #[arg(long, default_value_t = 2)]
    pub cap: usize,
}

#[derive(Clone, Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PadicCmd {
    /// The twisted family `h_k` of a double into `SL2(Z/p^k)` for every `k`
    /// in the cyclic closure of the edge image.
    Hk(HkArgs),
    /// Whether matrices generate `SL2(Z/p^k)`.
    Surject(SurjectArgs),
    /// Exhaustive search for a short relation between two integer matrices.
    Freepair(FreePairArgs),
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct HkArgs {
    #[arg(long, default_value_t = 5)]
    pub p: u32,
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    #[command(flatten)]
    pub source: DoubleSource,
    /// Images of the fold target generators, as a JSON list of row-major
    /// matrices; defaults to a searched generating pair.
    #[arg(long)]
    pub gens: Option<PathBuf>,
    /// Elements with this many syllables (at least 2) form the test ball.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(2..))]
    pub syllables: u64,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    pub length: u64,
    /// Same as the global `--out`.
    #[arg(long, value_name = "PATH")]
    #[serde(skip)]
    pub report: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct SurjectArgs {
    #[arg(long, default_value_t = 5)]
    pub p: u32,
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    /// JSON list of row-major matrices; defaults to a searched pair.
    #[arg(long)]
    pub gens: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct FreePairArgs {
    /// Row-major integer entries, comma separated.
    #[arg(long, default_value = "1,2,0,1")]
    pub a: String,
    #[arg(long, default_value = "1,0,2,1")]
    pub b: String,
    #[arg(long, default_value_t = 8)]
    pub max_len: usize,
}

impl Cli {
    /// The subcommand path, e.g. `surface onset`.
    pub fn command_name(&self) -> &'static str {
        match &self.command {
            Command::Baumslag { cmd: BaumslagCmd::Certify(_) } => "baumslag certify",
            Command::Baumslag { cmd: BaumslagCmd::Sweep(_) } => "baumslag sweep",
            Command::Surface { cmd: SurfaceCmd::Onset(_) } => "surface onset",
            Command::Surface { cmd: SurfaceCmd::TwistAudit(_) } => "surface twist-audit",
            Command::Double { cmd: DoubleCmd::Scan(_) } => "double scan",
            Command::Residual { cmd: ResidualCmd::F2xf2(_) } => "residual f2xf2",
            Command::Padic { cmd: PadicCmd::Hk(_) } => "padic hk",
            Command::Padic { cmd: PadicCmd::Surject(_) } => "padic surject",
            Command::Padic { cmd: PadicCmd::Freepair(_) } => "padic freepair",
        }
    }

    /// Where the report goes: `--report` for `padic hk`, else `--out`.
    pub fn output(&self) -> Option<&PathBuf> {
        match &self.command {
            Command::Padic { cmd: PadicCmd::Hk(HkArgs { report: Some(p), .. }) } => Some(p),
            _ => self.out.as_ref(),
        }
    }
}
