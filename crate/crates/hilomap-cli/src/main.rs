//! Command-line point-overlay heatmap renderer.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use hilomap::io::{
    load_base_locations, load_points, write_points_csv, write_raster, LoadedPoints, PointFormat,
    RasterFormat,
};
use hilomap::oracle::render_idw;
use hilomap::projection::viewport_from_data;
use hilomap::render::{
    default_cell_size, render_direct, render_hilomap, render_indirect, Mode, RenderConfig,
    RenderStats, RenderedMap,
};
use hilomap::synth::{generate_synthetic, SyntheticSpec};
use hilomap::{Composite, GradientLut, PointSet, StampParams, Viewport};

#[derive(Parser)]
#[command(
    name = "hilomap",
    version,
    about = "Render weighted geographic points as heatmap rasters",
    long_about = "Render weighted geographic points as heatmap rasters.\n\
        Modes: direct (draw every point), indirect (aggregate onto a coarse\n\
        grid first), hilomap (highlight both low and high weight extremes on\n\
        a diverging gradient), idw (slow interpolation reference)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Render a point file to a PNG or PAM raster.
    Render(RenderArgs),
    /// Generate a synthetic weighted dataset over base locations.
    GenSynthetic(GenSyntheticArgs),
    /// Render the same input as a conventional heatmap and a hilomap.
    Compare(CompareArgs),
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("viewport_source")
    .required(true)
    .args(["bbox", "bbox_from_data"]))]
struct SharedRenderArgs {
    /// Input point file.
    #[arg(long)]
    input: PathBuf,

    /// Input format (csv or geojson); inferred from the extension if omitted.
    #[arg(long)]
    format: Option<String>,

    /// Stamp radius in pixels.
    #[arg(long, default_value_t = 10)]
    radius: u32,

    /// Stamp blur in pixels.
    #[arg(long, default_value_t = 10)]
    blur: u32,

    /// Heat grid cell edge in pixels; defaults to half the radius.
    #[arg(long)]
    cell_size: Option<u32>,

    /// Raster width in pixels.
    #[arg(long, default_value_t = 512)]
    width: u32,

    /// Raster height in pixels.
    #[arg(long, default_value_t = 512)]
    height: u32,

    /// Bounding box in projected meters: minx,miny,maxx,maxy.
    #[arg(long, conflicts_with = "bbox_from_data", allow_hyphen_values = true)]
    bbox: Option<String>,

    /// Derive the bounding box from the data, padded by the stamp footprint.
    #[arg(long)]
    bbox_from_data: bool,

    /// Neutral weight for hilomap.
    #[arg(long, default_value_t = 0.5)]
    neutral: f64,

    /// Opacity floor for direct/indirect drawings.
    #[arg(long, default_value_t = 0.0)]
    min_opacity: f64,

    /// Alpha accumulation rule: source-over or saturating-add.
    #[arg(long, default_value = "source-over")]
    composite: String,

    /// Emit render statistics as JSON on stdout.
    #[arg(long)]
    stats: bool,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    shared: SharedRenderArgs,

    /// Rendering mode: direct, indirect, hilomap, or idw.
    #[arg(long, default_value = "direct")]
    mode: String,

    /// Gradient: a preset name (heat, diverging) or pos:#RRGGBB stops.
    #[arg(long)]
    gradient: Option<String>,

    /// Inverse-distance power for idw mode.
    #[arg(long, default_value_t = 1.0)]
    power: f64,

    /// Output raster path (.png or .pam).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GenSyntheticArgs {
    /// Base locations: CSV whose first two columns are lon,lat.
    #[arg(long)]
    base: PathBuf,

    /// Seed for the weight stream.
    #[arg(long)]
    seed: u64,

    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    shared: SharedRenderArgs,

    /// Gradient for the conventional heatmap output.
    #[arg(long, default_value = "heat")]
    gradient_heat: String,

    /// Gradient for the hilomap output.
    #[arg(long, default_value = "diverging")]
    gradient_hilo: String,

    /// Output path for the conventional heatmap (.png or .pam).
    #[arg(long)]
    out_heat: PathBuf,

    /// Output path for the hilomap (.png or .pam).
    #[arg(long)]
    out_hilo: PathBuf,
}

#[derive(Serialize)]
struct StatsLine {
    mode: String,
    k: usize,
    cells: Option<usize>,
    blits: usize,
    ms: f64,
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Render(args) => run_render(args),
        Command::GenSynthetic(args) => run_gen_synthetic(args),
        Command::Compare(args) => run_compare(args),
    };
    if let Err(err) = result {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn load_input(args: &SharedRenderArgs) -> anyhow::Result<PointSet> {
    let format = match &args.format {
        Some(s) => s.parse::<PointFormat>()?,
        None => PointFormat::from_path(&args.input),
    };
    let LoadedPoints {
        points,
        clamped,
        skipped,
    } = load_points(&args.input, format)?;
    if clamped > 0 {
        eprintln!("warning: clamped {clamped} weight(s) into [0, 1]");
    }
    if skipped > 0 {
        eprintln!("warning: skipped {skipped} non-Point feature(s)");
    }
    Ok(points)
}

fn parse_bbox(spec: &str) -> anyhow::Result<(f64, f64, f64, f64)> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 4 {
        bail!("--bbox wants minx,miny,maxx,maxy, got '{spec}'");
    }
    let mut vals = [0.0f64; 4];
    for (v, p) in vals.iter_mut().zip(&parts) {
        *v = p
            .trim()
            .parse()
            .with_context(|| format!("bad bbox component '{p}'"))?;
    }
    Ok((vals[0], vals[1], vals[2], vals[3]))
}

fn resolve_viewport(
    args: &SharedRenderArgs,
    points: &PointSet,
    stamp: &StampParams,
) -> anyhow::Result<Viewport> {
    match (&args.bbox, args.bbox_from_data) {
        (Some(spec), _) => Ok(Viewport::new(parse_bbox(spec)?, args.width, args.height)?),
        (None, true) => Ok(viewport_from_data(points, args.width, args.height, stamp)?),
        // clap's viewport_source group guarantees one of the two
        (None, false) => unreachable!("bbox group is required"),
    }
}

fn build_config(
    args: &SharedRenderArgs,
    mode: Mode,
    stamp: StampParams,
    gradient: GradientLut,
) -> anyhow::Result<RenderConfig> {
    let cfg = RenderConfig {
        mode,
        stamp,
        gradient,
        cell_size: args.cell_size.unwrap_or_else(|| default_cell_size(&stamp)),
        min_opacity: args.min_opacity,
        neutral: args.neutral,
        composite: args.composite.parse::<Composite>()?,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn render_one(
    points: &PointSet,
    viewport: &Viewport,
    cfg: &RenderConfig,
    power: f64,
) -> anyhow::Result<(RenderedMap, f64)> {
    let start = Instant::now();
    let rendered = match cfg.mode {
        Mode::Direct => render_direct(points, viewport, cfg)?,
        Mode::Indirect => render_indirect(points, viewport, cfg)?,
        Mode::Hilomap => render_hilomap(points, viewport, cfg)?,
        Mode::Idw => render_idw(points, viewport, cfg, power)?,
    };
    Ok((rendered, start.elapsed().as_secs_f64() * 1e3))
}

fn emit_stats(mode: Mode, k: usize, stats: &RenderStats, ms: f64) -> anyhow::Result<()> {
    let line = StatsLine {
        mode: mode.to_string(),
        k,
        cells: stats.cells,
        blits: stats.blits,
        ms,
    };
    println!("{}", serde_json::to_string(&line)?);
    Ok(())
}

fn write_output(rendered: &RenderedMap, path: &Path) -> anyhow::Result<()> {
    let format = RasterFormat::from_path(path)?;
    write_raster(&rendered.raster, path, format)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn run_render(args: RenderArgs) -> anyhow::Result<()> {
    let mode = args.mode.parse::<Mode>()?;
    let stamp = StampParams::new(args.shared.radius, args.shared.blur)?;
    let gradient = match &args.gradient {
        Some(spec) => GradientLut::from_spec(spec)?,
        None => match mode {
            Mode::Hilomap => GradientLut::diverging(),
            _ => GradientLut::heat(),
        },
    };
    let points = load_input(&args.shared)?;
    let viewport = resolve_viewport(&args.shared, &points, &stamp)?;
    let cfg = build_config(&args.shared, mode, stamp, gradient)?;

    let (rendered, ms) = render_one(&points, &viewport, &cfg, args.power)?;
    write_output(&rendered, &args.out)?;
    if args.shared.stats {
        emit_stats(mode, points.len(), &rendered.stats, ms)?;
    }
    Ok(())
}

fn run_gen_synthetic(args: GenSyntheticArgs) -> anyhow::Result<()> {
    let locations = load_base_locations(&args.base)?;
    let set = generate_synthetic(&locations, &SyntheticSpec::new(args.seed))?;
    write_points_csv(&set, &args.out)
        .with_context(|| format!("writing {}", args.out.display()))?;
    eprintln!("wrote {} weighted points to {}", set.len(), args.out.display());
    Ok(())
}

fn run_compare(args: CompareArgs) -> anyhow::Result<()> {
    let stamp = StampParams::new(args.shared.radius, args.shared.blur)?;
    let points = load_input(&args.shared)?;
    let viewport = resolve_viewport(&args.shared, &points, &stamp)?;

    let heat_cfg = build_config(
        &args.shared,
        Mode::Direct,
        stamp,
        GradientLut::from_spec(&args.gradient_heat)?,
    )?;
    let (heat, heat_ms) = render_one(&points, &viewport, &heat_cfg, 1.0)?;
    write_output(&heat, &args.out_heat)?;

    let hilo_cfg = build_config(
        &args.shared,
        Mode::Hilomap,
        stamp,
        GradientLut::from_spec(&args.gradient_hilo)?,
    )?;
    let (hilo, hilo_ms) = render_one(&points, &viewport, &hilo_cfg, 1.0)?;
    write_output(&hilo, &args.out_hilo)?;

    if args.shared.stats {
        emit_stats(Mode::Direct, points.len(), &heat.stats, heat_ms)?;
        emit_stats(Mode::Hilomap, points.len(), &hilo.stats, hilo_ms)?;
    }
    Ok(())
}
