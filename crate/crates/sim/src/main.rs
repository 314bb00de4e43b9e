use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use prs4d::config::ExperimentConfig;
use prs4d::export::write_constellation;
use prs4d::harness::{check_records, reach_km, sort_records, write_csv, ResultRecord, REACH_TARGET_GMI};
use prs4d::plot::{render_svg, XAxis, YAxis};
use prs4d::report::format_sig;
use prs4d_core::constellation::Format;
use prs4d_core::demapper::{awgn_gmi_reference, AwgnMethod, DemapperKind};
use prs4d_core::optimize::{optimize_prs_params, PrsGrid, DESIGN_SNR_DB};

/// Dual-polarization WDM link simulator for 4D modulation formats.
#[derive(Parser)]
#[command(name = "prs4d", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Flat TOML experiment configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// `key=value` override, applied after the file. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Directory receiving every output file.
    #[arg(long = "output_path", global = true, default_value = ".")]
    output_path: PathBuf,
    /// Also write an SVG plot next to the CSV.
    #[arg(long, global = true)]
    plot: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run every configured launch power once.
    Simulate,
    /// GMI versus per-channel launch power.
    SweepPower,
    /// GMI versus number of spans, with reach at 4.55 bit/4D-sym.
    SweepDistance {
        #[arg(long, value_delimiter = ',', required = true)]
        spans: Vec<usize>,
    },
    /// Net rate at optimum launch power versus channel count.
    SweepChannels {
        #[arg(long, value_delimiter = ',', required = true)]
        channels: Vec<usize>,
    },
    /// AWGN reference GMI of all formats.
    GmiAwgn {
        /// Es/N0 values in dB.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,2,4,6,8,10,12,14,16,18,20")]
        snr: Vec<f64>,
        #[arg(long, value_enum, default_value_t = Method::Quadrature)]
        method: Method,
        /// Gauss-Hermite nodes per dimension, or Monte-Carlo symbols.
        #[arg(long)]
        size: Option<usize>,
    },
    /// Grid search of the 4D-64PRS ring ratio and phase.
    OptimizeConstellation {
        #[arg(long, allow_hyphen_values = true, default_value_t = DESIGN_SNR_DB)]
        snr: f64,
        #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [0.3, 0.8])]
        rho: Vec<f64>,
        #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [0.25, 0.55])]
        theta: Vec<f64>,
        #[arg(long, default_value_t = 11)]
        rho_steps: usize,
        #[arg(long, default_value_t = 13)]
        theta_steps: usize,
        #[arg(long, default_value_t = 8)]
        nodes: usize,
    },
    /// Write the configured format's points and labels.
    ExportConstellation,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Quadrature,
    MonteCarlo,
}

fn create(dir: &Path, name: &str) -> anyhow::Result<BufWriter<File>> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn emit(common: &Common, cfg: &ExperimentConfig, stem: &str, mut records: Vec<ResultRecord>, x: XAxis, y: YAxis) -> anyhow::Result<()> {
    sort_records(&mut records);
    check_records(&records, cfg.baud_gbd)?;
    let mut out = create(&common.output_path, &format!("{stem}.csv"))?;
    write_csv(&mut out, &records, cfg.record_runtime)?;
    out.flush()?;
    if common.plot {
        let svg = render_svg(&records, x, y)?;
        let mut out = create(&common.output_path, &format!("{stem}.svg"))?;
        out.write_all(svg.as_bytes())?;
        out.flush()?;
    }
    Ok(())
}

fn configure_workers() -> anyhow::Result<()> {
    if let Ok(raw) = std::env::var("PRS4D_WORKERS") {
        let n: usize = raw.trim().parse().with_context(|| format!("PRS4D_WORKERS={raw} is not a count"))?;
        if n == 0 {
            bail!("PRS4D_WORKERS must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    configure_workers()?;
    let common = &cli.common;
    if let Some(path) = &common.config {
        if !path.is_file() {
            bail!("config file {} does not exist", path.display());
        }
    }
    let cfg = ExperimentConfig::load(common.config.as_deref(), &common.overrides)?;
    match cli.command {
        Command::Simulate => {
            let records = prs4d::sweep_power(&cfg, &cfg.launch_dbm)?;
            emit(common, &cfg, "simulate", records, XAxis::LaunchPower, YAxis::Gmi)
        }
        Command::SweepPower => {
            let records = prs4d::sweep_power(&cfg, &cfg.launch_dbm)?;
            emit(common, &cfg, "sweep_power", records, XAxis::LaunchPower, YAxis::Gmi)
        }
        Command::SweepDistance { spans } => {
            let records = prs4d::sweep_distance(&cfg, &spans)?;
            for kind in [DemapperKind::Iid, DemapperKind::Cg] {
                if let Ok(d) = reach_km(&records, cfg.format.as_str(), kind, REACH_TARGET_GMI) {
                    println!("reach {} {} {} km", cfg.format, kind.as_str(), format_sig(d, 10));
                }
            }
            emit(common, &cfg, "sweep_distance", records, XAxis::Distance, YAxis::Gmi)
        }
        Command::SweepChannels { channels } => {
            let records = prs4d::sweep_channels(&cfg, &channels)?;
            emit(common, &cfg, "sweep_channels", records, XAxis::Channels, YAxis::NetRate)
        }
        Command::GmiAwgn { snr, method, size } => {
            let mut out = create(&common.output_path, "gmi_awgn.csv")?;
            writeln!(out, "snr_db,format,gmi_bit4d")?;
            let method = match method {
                Method::Quadrature => AwgnMethod::Quadrature { nodes: size.unwrap_or(10) },
                Method::MonteCarlo => AwgnMethod::MonteCarlo {
                    symbols: size.unwrap_or(1 << 16),
                    seed: cfg.seed,
                },
            };
            for format in Format::ALL {
                let c = format.build(cfg.prs_params(), cfg.ring_ratio)?;
                for &s in &snr {
                    let g = awgn_gmi_reference(&c, s, method)?;
                    writeln!(out, "{},{},{}", format_sig(s, 10), format, format_sig(g, 10))?;
                }
            }
            out.flush()?;
            Ok(())
        }
        Command::OptimizeConstellation {
            snr,
            rho,
            theta,
            rho_steps,
            theta_steps,
            nodes,
        } => {
            let grid = PrsGrid {
                rho: (rho[0], rho[1]),
                theta: (theta[0], theta[1]),
                rho_steps,
                theta_steps,
            };
            let best = optimize_prs_params(snr, &grid, AwgnMethod::Quadrature { nodes })?;
            let mut out = create(&common.output_path, "optimize_constellation.csv")?;
            writeln!(out, "snr_db,prs_rho,prs_theta,gmi_bit4d")?;
            writeln!(
                out,
                "{},{},{},{}",
                format_sig(snr, 10),
                format_sig(best.params.rho, 10),
                format_sig(best.params.theta, 10),
                format_sig(best.gmi, 10)
            )?;
            out.flush()?;
            println!(
                "prs_rho={} prs_theta={} gmi={}",
                format_sig(best.params.rho, 10),
                format_sig(best.params.theta, 10),
                format_sig(best.gmi, 10)
            );
            Ok(())
        }
        Command::ExportConstellation => {
            let c = cfg.format.build(cfg.prs_params(), cfg.ring_ratio)?;
            let mut out = create(&common.output_path, &format!("constellation_{}.csv", cfg.format))?;
            write_constellation(&mut out, &c)?;
            out.flush()?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", format!("{e:#}").replace('\n', " "));
            ExitCode::FAILURE
        }
    }
}
