//! Command-line driver: fixtures, chambers, generators, relations and curve
//! counts, with golden-value reports and a chamber cache.

pub mod cache;
pub mod commands;
pub mod config;
pub mod report;

use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};

pub use config::{Format, GlobalArgs, RunConfig};
pub use report::GoldenReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FixtureName {
    S15,
    S16,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PipelineTarget {
    S15,
    #[value(name = "s16-walls")]
    S16Walls,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PentadAction {
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "weylwalk", version, about = "Borcherds-method computations for lattices in II_{1,25}")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a full computation and compare it with the golden values.
    Pipeline { target: PipelineTarget },
    /// The walls of the chamber induced by the Weyl vector `w₀`.
    Walls {
        fixture: FixtureName,
        #[arg(long)]
        json: bool,
    },
    /// Codimension-2 faces of the quartic chamber.
    Faces {
        fixture: FixtureName,
        #[arg(long)]
        json: bool,
    },
    /// The verified generators of the quartic automorphism group.
    Generators {
        #[arg(long)]
        json: bool,
    },
    /// The relations of the quartic automorphism group.
    Relations {
        /// Plain generators-and-relators text for a group-theory system.
        #[arg(long)]
        gap: bool,
    },
    /// Writes an automorphism, given as an isometry JSON file, as a word in the generators.
    Wordify {
        #[arg(long)]
        matrix: std::path::PathBuf,
    },
    /// Checks the pentad involution words.
    Pentads { action: PentadAction },
    /// Counts smooth rational curves by degree.
    Curves {
        #[arg(default_value = "s16")]
        fixture: FixtureName,
    },
    /// Emits fixture data.
    Fixture {
        fixture: FixtureName,
        #[arg(long, value_enum, default_value = "json")]
        emit: Emit,
    },
}

/// Command output and whether every check passed.
pub struct Output {
    pub text: String,
    pub ok: bool,
}

pub fn run(cli: &Cli) -> Result<Output> {
    let cfg = RunConfig::from_args(&cli.global)?;
    // a second initialization (for example in tests) keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build_global();
    let s = commands::Session::new(cfg);
    match &cli.command {
        Command::Pipeline { target } => {
            let r = match target {
                PipelineTarget::S16Walls => s.pipeline_s16_walls()?,
                PipelineTarget::S15 => s.pipeline_s15()?,
            };
            Ok(Output {
                text: r.render(s.cfg.format),
                ok: r.pass,
            })
        }
        Command::Walls { fixture, json } => s.walls(*fixture, *json).map(ok),
        Command::Faces { fixture, json } => s.faces(*fixture, *json).map(ok),
        Command::Generators { json } => s.generators(*json).map(ok),
        Command::Relations { gap } => s.relations(*gap).map(ok),
        Command::Wordify { matrix } => s.wordify(matrix).map(ok),
        Command::Pentads { action: PentadAction::Verify } => {
            let r = s.pentads()?;
            Ok(Output {
                text: r.render(s.cfg.format),
                ok: r.pass,
            })
        }
        Command::Curves { fixture } => {
            let (text, pass) = s.curves(*fixture)?;
            Ok(Output { text, ok: pass })
        }
        Command::Fixture { fixture, emit: Emit::Json } => s.fixture_json(*fixture).map(ok),
    }
}

fn ok(text: String) -> Output {
    Output { text, ok: true }
}
