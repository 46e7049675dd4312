use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use occlabel::bench::{run_bench, BenchConfig, AIRPORTS, ROUTES};
use occlabel::greedy::{avoid_bitmap, prepare, write_event_log};
use occlabel::io::{render_svg, write_placements};
use occlabel::{label_scene, parse_scene, Engine, LabelOptions, Scene};

#[derive(Parser)]
#[command(name = "occlabel", version, about = "Occupancy-bitmap label placement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Bitmap,
    Particle,
    ParticleImproved,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Bitmap => Engine::Bitmap,
            EngineArg::Particle => Engine::Particle,
            EngineArg::ParticleImproved => Engine::ParticleImproved,
        }
    }
}

fn word_bits(s: &str) -> Result<u32, String> {
    match s.parse::<u32>() {
        Ok(b) if occlabel::bitmap::SUPPORTED_WORD_BITS.contains(&b) => Ok(b),
        _ => Err("expected one of 4, 8, 16, 32, 64".into()),
    }
}

#[derive(Subcommand)]
enum Command {
    /// Place labels for a scene and write placements JSON.
    Label {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long, value_enum, default_value = "bitmap")]
        engine: EngineArg,
        #[arg(long)]
        out: PathBuf,
        /// Also write an SVG preview.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Write the final occupancy bitmap as PGM (bitmap engine only).
        #[arg(long)]
        dump_bitmap: Option<PathBuf>,
        /// Write the candidate event log as JSON lines.
        #[arg(long)]
        events: Option<PathBuf>,
        #[arg(long, default_value = "64", value_parser = word_bits)]
        word_bits: u32,
    },
    /// Run the synthetic map benchmark and write a CSV report.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [1000, 2000, 4000, 8000])]
        widths: Vec<i64>,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        reps: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, value_delimiter = ',')]
        engines: Vec<EngineArg>,
        #[arg(long, default_value_t = AIRPORTS)]
        points: usize,
        #[arg(long, default_value_t = ROUTES)]
        routes: usize,
        /// Run the engines of one width concurrently (timings may interfere).
        #[arg(long)]
        parallel: bool,
    },
    /// Write the post-rasterization occupancy bitmap of a scene as PGM.
    Dump {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "64", value_parser = word_bits)]
        word_bits: u32,
    },
}

fn read_scene(path: &Path) -> anyhow::Result<Scene> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_scene(&text).with_context(|| format!("parsing {}", path.display()))
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Label {
            scene,
            engine,
            out,
            svg,
            dump_bitmap,
            events,
            word_bits,
        } => {
            let engine = Engine::from(engine);
            if dump_bitmap.is_some() && engine != Engine::Bitmap {
                bail!("--dump-bitmap requires --engine bitmap");
            }
            let scene = read_scene(&scene)?;
            let output = label_scene(
                &scene,
                engine,
                LabelOptions {
                    word_bits,
                    record_events: events.is_some(),
                },
            )?;
            let mut w = create(&out)?;
            write_placements(engine.name(), &output.placements, &mut w)?;
            w.flush()?;
            if let Some(path) = svg {
                std::fs::write(&path, render_svg(&scene, &output.placements))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            if let (Some(path), Some(bitmap)) = (dump_bitmap, &output.bitmap) {
                let mut w = create(&path)?;
                bitmap.write_pgm(&mut w)?;
                w.flush()?;
            }
            if let Some(path) = events {
                let mut w = create(&path)?;
                write_event_log(&output.events, &mut w)?;
                w.flush()?;
            }
        }
        Command::Bench {
            widths,
            reps,
            seed,
            out,
            engines,
            points,
            routes,
            parallel,
        } => {
            let engines = if engines.is_empty() {
                Engine::ALL.to_vec()
            } else {
                engines.into_iter().map(Engine::from).collect()
            };
            let report = run_bench(&BenchConfig {
                engines,
                widths,
                reps: reps as usize,
                seed,
                points,
                routes,
                parallel,
            })?;
            for e in &report.errors {
                eprintln!("{} at width {}: {}", e.engine, e.width, e.message);
            }
            let mut w = create(&out)?;
            report.write_csv(&mut w)?;
            w.flush()?;
            if !report.errors.is_empty() {
                bail!("{} benchmark cell(s) failed", report.errors.len());
            }
        }
        Command::Dump {
            scene,
            out,
            word_bits,
        } => {
            let scene = read_scene(&scene)?;
            let prep = prepare(&scene, &scene.config)?;
            let bitmap = avoid_bitmap(&prep, word_bits)?;
            let mut w = create(&out)?;
            bitmap.write_pgm(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
