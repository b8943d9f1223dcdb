//! Command-line front end. Every command reads files, computes, then
//! writes all outputs plus a manifest; nothing streams, so a failed run
//! leaves no plausible-looking partial results next to a manifest.

use std::fs;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use clap::{ArgAction, Args, Parser, Subcommand};
use serde_json::json;
use tda_core::ews::IndicatorConfig;
use tda_core::landscape::Norm;
use tda_core::synth::{GammaConfig, HenonConfig, WhiteNoiseConfig, RNG_ALGORITHM};

use tda::analysis::{
    column_trend, indicator_series, norm_series, pre_event_trends, AnalyzeOptions,
};
use tda::error::{Error, Result};
use tda::experiments::{
    gamma_experiment, henon_experiment, white_noise_experiment, HENON_EARLY_BAND, HENON_LATE_BAND,
    HENON_QUARTET,
};
use tda::io::{
    fmt_float, read_dated_column, read_multi_csv, read_price_csvs, write_indicator_csv, write_json,
    write_multi_csv, write_norm_series_csv, write_table_csv,
};
use tda::manifest::RunManifest;
use tda::series::log_returns;
use tda::svg::line_chart;

#[derive(Parser)]
#[command(
    name = "tda",
    version,
    about = "Topological early-warning analysis of multivariate time series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Align price series on common dates and emit log returns
    Returns(ReturnsArgs),
    /// Sliding-window landscape norms of a multivariate series
    Analyze(AnalyzeArgs),
    /// Generate a synthetic experiment, its norm series and summary
    Synth(SynthArgs),
    /// Rolling early-warning indicators of one column, with optional
    /// pre-event trend tests
    Ews(EwsArgs),
    /// Trend test of one column
    Trend(TrendArgs),
}

#[derive(Args)]
struct ReturnsArgs {
    /// Price CSVs: `date,close` per series or one wide `date,name,...` file
    #[arg(long = "input", required = true, num_args = 1.., action = ArgAction::Append)]
    input: Vec<PathBuf>,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Wide CSV `date,name,...` of aligned series, e.g. log returns
    #[arg(long)]
    input: PathBuf,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
    /// Sliding window length in rows
    #[arg(long, default_value_t = 50)]
    window: usize,
    /// Landscape norms to compute
    #[arg(long = "norm", value_delimiter = ',', value_parser = parse_norm, default_value = "l1,l2")]
    norm: Vec<Norm>,
    /// Standardise each window's columns before building its cloud
    #[arg(long)]
    zscore: bool,
    /// Also write an SVG line chart of the norm series
    #[arg(long)]
    plot: bool,
}

#[derive(Args)]
struct SynthArgs {
    #[command(subcommand)]
    experiment: SynthExperiment,
}

#[derive(Subcommand)]
enum SynthExperiment {
    /// Four noisy quadratic-map series over a slow parameter ramp
    Henon {
        /// Output directory
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sliding window length for the norm series
        #[arg(long, default_value_t = 50)]
        window: usize,
    },
    /// Gaussian clouds with stepwise increasing deviation
    Whitenoise {
        /// Output directory
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Independent realizations per deviation level
        #[arg(long, default_value_t = 100)]
        realizations: usize,
    },
    /// Gaussian clouds with Gamma-mixture precisions falling off a plateau
    Gamma {
        /// Output directory
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Seeded repetitions of the full schedule
        #[arg(long, default_value_t = 1)]
        reps: usize,
    },
}

#[derive(Args)]
struct EwsArgs {
    /// Dated CSV; indicators run on one of its columns
    #[arg(long)]
    input: PathBuf,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
    /// Column to analyse; defaults to the first value column
    #[arg(long)]
    column: Option<String>,
    /// Rolling indicator window length
    #[arg(long = "indicator-window", default_value_t = 500)]
    indicator_window: usize,
    /// Fraction of the spectrum counted as low frequency
    #[arg(long = "low-freq-frac", default_value_t = 0.1)]
    low_freq_frac: f64,
    /// Hann-taper each detrended window before its periodogram
    #[arg(long)]
    hann: bool,
    /// Event date; runs a trend test over the span before it (repeatable)
    #[arg(long = "event", value_parser = parse_date)]
    event: Vec<NaiveDate>,
    /// Indicator points per pre-event trend test
    #[arg(long, default_value_t = 250)]
    span: usize,
}

#[derive(Args)]
struct TrendArgs {
    /// Dated CSV; the test runs on one of its columns
    #[arg(long)]
    input: PathBuf,
    /// Output directory; prints to stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// Column to test; defaults to the first value column
    #[arg(long)]
    column: Option<String>,
    /// Only test rows strictly before this date
    #[arg(long, value_parser = parse_date)]
    event: Option<NaiveDate>,
    /// Only test the last SPAN selected rows
    #[arg(long)]
    span: Option<usize>,
}

fn parse_norm(s: &str) -> std::result::Result<Norm, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_date(s: &str) -> std::result::Result<NaiveDate, String> {
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .map_err(|_| format!("invalid date '{s}', expected YYYY-MM-DD"))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

pub fn run() -> Result<()> {
    match Cli::parse().command {
        Command::Returns(args) => returns(args),
        Command::Analyze(args) => analyze(args),
        Command::Synth(args) => match args.experiment {
            SynthExperiment::Henon { out, seed, window } => synth_henon(&out, seed, window),
            SynthExperiment::Whitenoise {
                out,
                seed,
                realizations,
            } => synth_whitenoise(&out, seed, realizations),
            SynthExperiment::Gamma { out, seed, reps } => synth_gamma(&out, seed, reps),
        },
        Command::Ews(args) => ews(args),
        Command::Trend(args) => trend(args),
    }
}

fn returns(args: ReturnsArgs) -> Result<()> {
    let prices = read_price_csvs(&args.input)?;
    let returns = log_returns(&prices)?;
    ensure_dir(&args.out)?;
    write_multi_csv(&args.out.join("returns.csv"), &returns)?;

    let mut manifest = RunManifest::new("returns", json!({ "series": returns.labels() }));
    for path in &args.input {
        manifest.add_input(path)?;
    }
    manifest.add_output("returns.csv");
    manifest.write(&args.out)?;
    Ok(())
}

fn analyze(args: AnalyzeArgs) -> Result<()> {
    let series = read_multi_csv(&args.input)?;
    let opts = AnalyzeOptions {
        window: args.window,
        norms: args.norm.clone(),
        zscore: args.zscore,
    };
    let norms = norm_series(&series, &opts)?;
    ensure_dir(&args.out)?;
    write_norm_series_csv(&args.out.join("norms.csv"), &norms)?;

    let mut manifest = RunManifest::new(
        "analyze",
        json!({
            "window": args.window,
            "norms": norms.labels,
            "zscore": args.zscore,
        }),
    );
    manifest.add_input(&args.input)?;
    manifest.add_output("norms.csv");

    if args.plot {
        let chart_series: Vec<(String, Vec<(f64, f64)>)> = norms
            .labels
            .iter()
            .enumerate()
            .map(|(c, label)| {
                let points = norms
                    .values
                    .iter()
                    .enumerate()
                    .map(|(i, row)| (i as f64, row[c]))
                    .collect();
                (label.clone(), points)
            })
            .collect();
        let title = format!("sliding window landscape norms (w={})", args.window);
        let path = args.out.join("norms.svg");
        fs::write(&path, line_chart(&title, &chart_series)).map_err(|e| Error::io(&path, e))?;
        manifest.add_output("norms.svg");
    }
    manifest.write(&args.out)?;
    Ok(())
}

/// `step,series_1..series_d` rows of point cloud coordinates, `step`
/// identifying the cloud a point belongs to.
fn cloud_dataset_rows<'a>(
    clouds: impl Iterator<Item = &'a tda_core::geometry::PointCloud> + 'a,
) -> impl Iterator<Item = Vec<String>> + 'a {
    clouds.enumerate().flat_map(|(step, cloud)| {
        cloud.points().map(move |p| {
            let mut row = vec![step.to_string()];
            row.extend(p.iter().map(|v| fmt_float(*v)));
            row
        })
    })
}

fn series_header(prefix: &'static str, dim: usize) -> Vec<String> {
    let mut header = vec![prefix.to_string()];
    header.extend((1..=dim).map(|d| format!("series_{d}")));
    header
}

fn synth_henon(out: &Path, seed: u64, window: usize) -> Result<()> {
    let cfg = HenonConfig {
        seed,
        ..HenonConfig::default()
    };
    let run = henon_experiment(&cfg, window)?;
    ensure_dir(out)?;

    let header = series_header("step", run.bs.len());
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    write_table_csv(
        &out.join("dataset.csv"),
        &header_refs,
        (0..run.series.n_rows()).map(|i| {
            let mut row = vec![i.to_string()];
            row.extend(run.series.row(i).iter().map(|v| fmt_float(*v)));
            row
        }),
    )?;

    write_table_csv(
        &out.join("norms.csv"),
        &["step", "a", "l1", "l2"],
        run.norms.iter().enumerate().map(|(i, ns)| {
            vec![
                i.to_string(),
                fmt_float(run.window_a[i]),
                fmt_float(ns[0]),
                fmt_float(ns[1]),
            ]
        }),
    )?;

    let config = json!({
        "b_values": HENON_QUARTET,
        "sigma": cfg.sigma,
        "dt": cfg.dt,
        "a_start": cfg.a_start,
        "a_end": cfg.a_end,
        "independent_noise": cfg.independent_noise,
        "window": window,
    });
    let summary = json!({
        "experiment": "henon",
        "config": config,
        "seed": seed,
        "rng": RNG_ALGORITHM,
        "series_length": run.series.n_rows(),
        "windows": run.norms.len(),
        "restarts": run.restarts.iter().map(Vec::len).collect::<Vec<_>>(),
        "early_band_max_a": HENON_EARLY_BAND.1,
        "late_band_min_a": HENON_LATE_BAND.0,
        "early_mean_l1": run.early_mean_l1,
        "late_mean_l1": run.late_mean_l1,
        "l1_ratio": run.ratio,
        "step_indexing": "0-based; norms.csv step is the window start row",
    });
    write_json(&out.join("summary.json"), &summary)?;

    let mut manifest = RunManifest::new("synth henon", config).with_seed(seed);
    for name in ["dataset.csv", "norms.csv", "summary.json"] {
        manifest.add_output(name);
    }
    manifest.write(out)?;
    Ok(())
}

fn synth_whitenoise(out: &Path, seed: u64, realizations: usize) -> Result<()> {
    let cfg = WhiteNoiseConfig {
        seed,
        realizations,
        ..WhiteNoiseConfig::default()
    };
    let run = white_noise_experiment(&cfg)?;
    ensure_dir(out)?;

    let header = series_header("step", cfg.dim);
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    write_table_csv(
        &out.join("dataset.csv"),
        &header_refs,
        cloud_dataset_rows(run.clouds.iter().map(|c| &c.cloud)),
    )?;

    write_table_csv(
        &out.join("norms.csv"),
        &["step", "realization", "sigma", "l1", "l2"],
        run.clouds
            .iter()
            .zip(&run.norms)
            .enumerate()
            .map(|(step, (cloud, ns))| {
                vec![
                    step.to_string(),
                    cloud.realization.to_string(),
                    fmt_float(cloud.sigma),
                    fmt_float(ns[0]),
                    fmt_float(ns[1]),
                ]
            }),
    )?;

    let config = json!({
        "sigma_levels": cfg.sigma_levels,
        "points": cfg.points,
        "dim": cfg.dim,
        "jitter": cfg.jitter,
        "realizations": realizations,
    });
    let summary = json!({
        "experiment": "whitenoise",
        "config": config,
        "seed": seed,
        "rng": RNG_ALGORITHM,
        "mean_l1": run.mean_l1,
        "mean_l2": run.mean_l2,
        "l1_vs_sigma_squared": run.l1_fit,
        "l2_vs_sigma_1_5": run.l2_fit,
        "step_indexing": "0-based cloud ordinal, realization-major",
    });
    write_json(&out.join("summary.json"), &summary)?;

    let mut manifest = RunManifest::new("synth whitenoise", config).with_seed(seed);
    for name in ["dataset.csv", "norms.csv", "summary.json"] {
        manifest.add_output(name);
    }
    manifest.write(out)?;
    Ok(())
}

fn synth_gamma(out: &Path, seed: u64, reps: usize) -> Result<()> {
    let cfg = GammaConfig {
        seed,
        ..GammaConfig::default()
    };
    let run = gamma_experiment(&cfg, reps)?;
    ensure_dir(out)?;

    let header = series_header("step", cfg.dim);
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    write_table_csv(
        &out.join("dataset.csv"),
        &header_refs,
        cloud_dataset_rows(run.clouds.iter().map(|c| &c.cloud)),
    )?;

    let n_steps = cfg.alpha_schedule.len();
    write_table_csv(
        &out.join("norms.csv"),
        &["step", "rep", "alpha", "l1", "l2"],
        run.clouds
            .iter()
            .zip(&run.norms)
            .enumerate()
            .map(|(i, (cloud, ns))| {
                vec![
                    i.to_string(),
                    (i / n_steps).to_string(),
                    fmt_float(cloud.alpha),
                    fmt_float(ns[0]),
                    fmt_float(ns[1]),
                ]
            }),
    )?;

    let config = json!({
        "alpha_schedule": cfg.alpha_schedule,
        "beta": cfg.beta,
        "dim": cfg.dim,
        "points_per_cloud": cfg.points_per_cloud,
        "precision_set_size": cfg.precision_set_size,
        "repetitions": reps,
    });
    let summary = json!({
        "experiment": "gamma",
        "config": config,
        "seed": seed,
        "rng": RNG_ALGORITHM,
        "early_steps": run.early_steps,
        "per_step_mean_l1": run.per_step_mean_l1,
        "per_rep_l1_ratio": run.per_rep_ratio,
        "mean_l1_ratio": run.mean_ratio,
        "step_indexing": "0-based global cloud ordinal, repetition-major",
    });
    write_json(&out.join("summary.json"), &summary)?;

    let mut manifest = RunManifest::new("synth gamma", config).with_seed(seed);
    for name in ["dataset.csv", "norms.csv", "summary.json"] {
        manifest.add_output(name);
    }
    manifest.write(out)?;
    Ok(())
}

fn ews(args: EwsArgs) -> Result<()> {
    let (dates, values, label) = read_dated_column(&args.input, args.column.as_deref())?;
    let cfg = IndicatorConfig {
        window: args.indicator_window,
        low_freq_fraction: args.low_freq_frac,
        hann: args.hann,
    };
    let indicators = indicator_series(&dates, &values, &cfg)?;
    // Validate every event before writing anything.
    let trends: Vec<(NaiveDate, Vec<tda::analysis::TrendJson>)> = args
        .event
        .iter()
        .map(|e| {
            Ok((
                *e,
                pre_event_trends(&indicators, Some(*e), Some(args.span))?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    ensure_dir(&args.out)?;
    write_indicator_csv(&args.out.join("indicators.csv"), &indicators)?;
    let mut manifest = RunManifest::new(
        "ews",
        json!({
            "column": label,
            "indicator_window": args.indicator_window,
            "low_freq_fraction": args.low_freq_frac,
            "hann": args.hann,
            "span": args.span,
            "events": args.event.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        }),
    );
    manifest.add_input(&args.input)?;
    manifest.add_output("indicators.csv");
    for (event, reports) in &trends {
        let name = format!("trend_{event}.json");
        write_json(&args.out.join(&name), reports)?;
        manifest.add_output(name);
    }
    manifest.write(&args.out)?;
    Ok(())
}

fn trend(args: TrendArgs) -> Result<()> {
    let (dates, values, label) = read_dated_column(&args.input, args.column.as_deref())?;
    let report = column_trend(&dates, &values, &label, args.event, args.span)?;
    match &args.out {
        None => {
            println!(
                "{}",
                serde_json::to_string_pretty(&report).map_err(|e| Error::invalid(e.to_string()))?
            );
        }
        Some(dir) => {
            ensure_dir(dir)?;
            write_json(&dir.join("trend.json"), &report)?;
            let mut manifest = RunManifest::new(
                "trend",
                json!({
                    "column": label,
                    "event": args.event.map(|e| e.to_string()),
                    "span": args.span,
                }),
            );
            manifest.add_input(&args.input)?;
            manifest.add_output("trend.json");
            manifest.write(dir)?;
        }
    }
    Ok(())
}
