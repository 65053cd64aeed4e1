//! Command-line interface for labelling urban point-cloud tiles.

mod io;
mod scene;

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Parser, Subcommand};

use cloudlabel_core::pipeline::run_tile;
use cloudlabel_core::report::{evaluate, stats};
use cloudlabel_core::synth::generate;
use cloudlabel_core::{LabelCode, PipelineConfig};

use crate::io::{read_cloud_csv, read_raster_asc, read_topo_geojson, write_cloud_csv};
use crate::scene::{load_scene_spec, write_scene_files};

#[derive(Parser)]
#[command(
    name = "cloudlabel",
    version,
    about = "Label urban street-level point clouds by fusing elevation and map data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the labelling pipeline over one tile
    Label {
        /// Input cloud CSV
        #[arg(long)]
        cloud: PathBuf,
        /// Ground-surface raster (.asc)
        #[arg(long)]
        ground: PathBuf,
        /// Building-top raster (.asc), nodata where no building
        #[arg(long)]
        roof: PathBuf,
        /// Topographical map (.geojson)
        #[arg(long)]
        topo: PathBuf,
        /// Run configuration (TOML); defaults are used when omitted
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output cloud CSV
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare predicted labels against truth labels
    Eval {
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        /// Truth classes excluded from evaluation, comma-separated
        #[arg(long, default_value = "unlabelled,noise")]
        ignore: String,
    },
    /// Per-class counts and percentages of a labelled cloud
    Stats {
        #[arg(long)]
        cloud: PathBuf,
    },
    /// Generate a synthetic scene with exact truth labels
    Synth {
        /// Scene spec (TOML)
        #[arg(long)]
        spec: PathBuf,
        /// Directory for the generated files
        #[arg(long = "out-dir")]
        out_dir: PathBuf,
    },
    /// Print the effective configuration as TOML
    PrintConfig {
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn load_config(path: Option<&Path>) -> anyhow::Result<PipelineConfig> {
    let config: PipelineConfig = match path {
        Some(p) => {
            let text =
                fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            toml::from_str(&text).with_context(|| format!("{}: invalid config", p.display()))?
        }
        None => PipelineConfig::default(),
    };
    config.validate()?;
    Ok(config)
}

fn parse_ignore(ignore: &str) -> anyhow::Result<Vec<LabelCode>> {
    ignore
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|name| {
            LabelCode::from_name(name)
                .ok_or_else(|| anyhow::anyhow!("unknown class `{name}` in --ignore"))
        })
        .collect()
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Label {
            cloud,
            ground,
            roof,
            topo,
            config,
            out,
        } => {
            let mut tile = read_cloud_csv(&cloud)?;
            let ground = read_raster_asc(&ground)?;
            let roof = read_raster_asc(&roof)?;
            let topo = read_topo_geojson(&topo)?;
            let config = load_config(config.as_deref())?;
            let report = run_tile(&mut tile, &ground, &roof, &topo, &config)?;
            write_cloud_csv(&tile, &out)?;
            print!("{report}");
            print!("{}", report.kv_lines());
        }
        Command::Eval {
            pred,
            truth,
            ignore,
        } => {
            let pred = read_cloud_csv(&pred)?;
            let truth = read_cloud_csv(&truth)?;
            let ignore = parse_ignore(&ignore)?;
            let report = evaluate(&pred, &truth, &ignore)?;
            print!("{report}");
            print!("{}", report.kv_lines());
        }
        Command::Stats { cloud } => {
            let cloud = read_cloud_csv(&cloud)?;
            let report = stats(&cloud);
            print!("{report}");
            print!("{}", report.kv_lines());
        }
        Command::Synth { spec, out_dir } => {
            let spec = load_scene_spec(&spec)?;
            let scene = generate(&spec)?;
            for path in write_scene_files(&scene, &out_dir)? {
                println!("wrote {}", path.display());
            }
        }
        Command::PrintConfig { config } => {
            let config = load_config(config.as_deref())?;
            print!(
                "{}",
                toml::to_string_pretty(&config).context("serializing config")?
            );
        }
    }
    Ok(())
}

fn main() {
    // Die quietly when a downstream pipe (head, grep -m) closes early.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
