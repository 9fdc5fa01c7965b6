//! Command-line front end: argument parsing, run configuration and reports.

pub mod commands;
pub mod config;
pub mod report;

use std::path::PathBuf;
use std::time::Instant;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{BundleSpec, CharacterChoice, InlineSurface, RunConfig, SurfaceSource};
use crate::report::{Report, SCHEMA};

#[derive(Debug, Parser)]
#[command(
    name = "isogenous",
    version,
    about = "Exceptional sequences on isogenous product surfaces"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    /// Preset surface: z2^3, z2^4, z3^2 or z5^2.
    #[arg(long, conflicts_with = "surface")]
    pub preset: Option<String>,
    /// Inline surface document (TOML).
    #[arg(long)]
    pub surface: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CollectionArgs {
    /// Line bundle `C|D|CHI`; repeat for each member, in order.
    #[arg(long = "bundle", allow_hyphen_values = true)]
    pub bundles: Vec<BundleSpec>,
    /// Characters for the default quadruple: trivial, all, or four `;`-separated weight vectors.
    #[arg(long, allow_hyphen_values = true)]
    pub characters: Option<CharacterChoice>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Curves, branch data, class groups and invariants of a surface.
    Describe(SurfaceArgs),
    /// Certify a collection as an exceptional sequence.
    Verify {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[command(flatten)]
        collection: CollectionArgs,
    },
    /// Enumerate exceptional sequences in a box of coefficients.
    Search {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Coefficient bound r for the box [-r, r]^4.
        #[arg(long)]
        window: Option<i64>,
        /// Characters to try: trivial, all, or `;`-separated weight vectors.
        #[arg(long, allow_hyphen_values = true)]
        characters: Option<CharacterChoice>,
        /// Sequence length; defaults to the rank of K_0.
        #[arg(long)]
        length: Option<usize>,
    },
    /// Pseudoheight and height of an exceptional collection.
    Height {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[command(flatten)]
        collection: CollectionArgs,
    },
    /// Numerical obstruction to exceptional quadruples of pullback type.
    Nogo {
        #[arg(long)]
        preset: String,
        /// Half-width of the brute-force scan.
        #[arg(long)]
        scan_bound: Option<i64>,
    },
    /// Phantom criterion for a product of two quasiphantoms.
    PhantomPair {
        /// Order of the torsion in K_0 of the first complement.
        a: u64,
        /// Order of the torsion in K_0 of the second complement.
        b: u64,
    },
}

fn surface_source(args: &SurfaceArgs) -> Result<SurfaceSource> {
    Ok(match (&args.preset, &args.surface) {
        (_, Some(path)) => SurfaceSource::Inline(InlineSurface::load(path)?),
        (Some(p), None) => SurfaceSource::Preset(p.clone()),
        (None, None) => SurfaceSource::Preset("z3^2".into()),
    })
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Describe(_) => "describe",
            Command::Verify { .. } => "verify",
            Command::Search { .. } => "search",
            Command::Height { .. } => "height",
            Command::Nogo { .. } => "nogo",
            Command::PhantomPair { .. } => "phantom-pair",
        }
    }

    /// Resolve flags and files into a self-contained configuration.
    pub fn config(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::new(self.name());
        match self {
            Command::Describe(s) => cfg.surface = Some(surface_source(s)?),
            Command::Verify {
                surface,
                collection,
            }
            | Command::Height {
                surface,
                collection,
            } => {
                cfg.surface = Some(surface_source(surface)?);
                cfg.bundles = collection.bundles.clone();
                cfg.characters = collection.characters.clone();
            }
            Command::Search {
                surface,
                window,
                characters,
                length,
            } => {
                cfg.surface = Some(surface_source(surface)?);
                cfg.window = *window;
                cfg.characters = characters.clone();
                cfg.length = *length;
            }
            Command::Nogo { preset, scan_bound } => {
                cfg.surface = Some(SurfaceSource::Preset(preset.clone()));
                cfg.scan_bound = *scan_bound;
            }
            Command::PhantomPair { a, b } => cfg.torsion = Some((*a, *b)),
        }
        Ok(cfg)
    }
}

/// Run a configuration; errors mean the configuration was invalid.
pub fn run(config: RunConfig) -> Result<(Report, String)> {
    let start = Instant::now();
    let out = commands::run(&config)?;
    let report = Report {
        schema: SCHEMA.into(),
        command: config.command.clone(),
        config_hash: config.hash(),
        config,
        summary: out.summary,
        payload: out.payload,
        timing_ms: start.elapsed().as_millis() as u64,
    };
    Ok((report, out.text))
}
