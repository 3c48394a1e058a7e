//! Batch command-line front end for the hydro-cba valuation engine.

use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use hydro_cba::aggregate::{GridAxis, ParameterGrid, SecurityCost};
use hydro_cba::config::{RunConfig, CONFIG_ENV_VAR};
use hydro_cba::cpi::BackcastMethod;
use hydro_cba::error::Error;
use hydro_cba::money::MoneyAmount;
use hydro_cba::pipeline::{self, evaluate, run_pipeline, survey_summaries};

#[derive(Parser)]
#[command(
    name = "hydro-cba",
    version,
    about = "Deterministic cost-benefit valuation engine for hydropower projects"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Run configuration file (defaults to $HYDRO_CBA_CONFIG).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory for output artifacts (overrides the configured one).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn load(&self) -> Result<RunConfig, Error> {
        let path = match &self.config {
            Some(path) => path.clone(),
            None => std::env::var_os(CONFIG_ENV_VAR)
                .map(PathBuf::from)
                .ok_or_else(|| Error::InvalidConfig {
                    reason: format!("no --config given and {CONFIG_ENV_VAR} is not set"),
                })?,
        };
        RunConfig::load(&path)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Re-express an amount at another year's price level via the CPI table.
    Deflate {
        #[command(flatten)]
        common: Common,
        /// Amount in currency units.
        #[arg(long)]
        amount: f64,
        /// Price-base year the amount is currently expressed in.
        #[arg(long)]
        from_year: i32,
        /// Target price-base year.
        #[arg(long)]
        to_year: i32,
        /// Currency code (BDT, USD, Rs).
        #[arg(long, default_value = "BDT")]
        currency: String,
    },
    /// Value the electricity stream under both spreading modes.
    ValueElectricity {
        #[command(flatten)]
        common: Common,
    },
    /// Value the fisheries stream.
    ValueFisheries {
        #[command(flatten)]
        common: Common,
    },
    /// Value tourism: consumer surplus plus the CPI-scaled cumulative sum.
    ValueTourism {
        #[command(flatten)]
        common: Common,
    },
    /// Compute the cost-side components.
    ValueCosts {
        #[command(flatten)]
        common: Common,
    },
    /// Run the full pipeline and write the report artifacts.
    Aggregate {
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the pipeline over a parameter grid.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Grid axis as key=v1,v2,... (repeatable).
        #[arg(long = "param", required = true)]
        params: Vec<String>,
    },
    /// Print summary statistics of the survey columns.
    Summarize {
        #[command(flatten)]
        common: Common,
    },
}

fn component_line(component: &hydro_cba::ValuationComponent) -> String {
    format!(
        "{:<14} {:>16.3} M {} @{}  (imputed {:.1}%)",
        component.kind.to_string(),
        component.npv.in_millions(),
        component.npv.currency,
        component.npv.base_year,
        100.0 * component.imputed_fraction
    )
}

fn ensure_dir(dir: &Path) -> Result<(), Error> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.display().to_string(),
        source: e,
    })
}

fn write_text(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, Error> {
    ensure_dir(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    Ok(path)
}

fn write_json<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf, Error> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse {
        path: name.to_string(),
        reason: e.to_string(),
    })?;
    write_text(dir, name, &(text + "\n"))
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Deflate {
            common,
            amount,
            from_year,
            to_year,
            currency,
        } => {
            let config = common.load()?;
            let cpi = hydro_cba::io::read_cpi_csv(&config.paths.cpi, config.series.cpi_base_year)?;
            let earliest = from_year.min(to_year);
            let cpi = cpi.backcast(
                earliest,
                BackcastMethod::GeometricTrend {
                    window: config.series.backcast_window,
                },
            )?;
            let money = MoneyAmount::new(amount, currency.parse()?, from_year)?;
            let deflated = cpi.deflate(&money, to_year)?;
            let ratio = cpi.ratio(to_year, from_year)?;
            println!("{money} -> {deflated} (index ratio {ratio})");
        }
        Command::ValueElectricity { common } => {
            let config = common.load()?;
            let output = evaluate(&config)?;
            println!("{}", component_line(&output.report.electricity));
            let modes = &output.electricity_modes;
            println!("  annual net     {:>16.3} M", modes.annual_net_mbdt);
            println!(
                "  discount mode  {:>16.3} M (rate {})",
                modes.discount_total_mbdt, modes.discount_rate
            );
            println!("  cpi-scale mode {:>16.3} M", modes.cpi_scale_total_mbdt);
            if let Some(reference) = modes.reference_mbdt {
                println!(
                    "  published      {:>16.3} M (deviation: discount {:+.2}%, cpi-scale {:+.2}%)",
                    reference,
                    modes.discount_deviation_pct.unwrap_or(f64::NAN),
                    modes.cpi_scale_deviation_pct.unwrap_or(f64::NAN)
                );
            }
            if let Some(dir) = &common.out {
                let path = write_json(dir, "electricity.json", &output.electricity_modes)?;
                println!("wrote {}", path.display());
            }
        }
        Command::ValueFisheries { common } => {
            let config = common.load()?;
            let output = evaluate(&config)?;
            println!("{}", component_line(&output.report.fisheries));
            for comparison in output
                .reference_comparisons
                .iter()
                .filter(|c| c.name.starts_with("fisheries"))
            {
                println!(
                    "  published      {:>16.3} M ({:+.2}%)",
                    comparison.reference_mbdt, comparison.deviation_pct
                );
            }
            if let Some(dir) = &common.out {
                let path = write_json(dir, "fisheries.json", &output.report.fisheries)?;
                println!("wrote {}", path.display());
            }
        }
        Command::ValueTourism { common } => {
            let config = common.load()?;
            let output = evaluate(&config)?;
            println!("{}", component_line(&output.report.tourism));
            println!(
                "  annual surplus {:>16.3} M (choke fee {} BDT, {} visits at zero fee)",
                output.tourism_surplus.annual.in_millions(),
                output.tourism_surplus.choke_fee,
                output.tourism_surplus.visits_at_zero_fee
            );
            if let Some(dir) = &common.out {
                let path =
                    write_text(dir, pipeline::DEMAND_CURVE_CSV, &pipeline::demand_curve_csv(&output))?;
                println!("wrote {}", path.display());
            }
        }
        Command::ValueCosts { common } => {
            let config = common.load()?;
            let output = evaluate(&config)?;
            println!("{}", component_line(&output.report.displacement));
            println!("{}", component_line(&output.report.lives_lost));
            if let Some(construction) = &output.report.construction {
                println!("{}", component_line(construction));
            }
            if let Some(environmental) = &output.report.environmental {
                println!("{}", component_line(environmental));
            }
            match &output.report.security {
                SecurityCost::Unavailable => println!("security        unavailable (no data)"),
                SecurityCost::Known(component) => println!("{}", component_line(component)),
            }
            if let Some(dir) = &common.out {
                let path = write_json(dir, "costs.json", &output.report)?;
                println!("wrote {}", path.display());
            }
        }
        Command::Aggregate { common } => {
            let config = common.load()?;
            let (output, files) = run_pipeline(&config, common.out.as_deref())?;
            let report = &output.report;
            for component in report.components() {
                println!("{}", component_line(component));
            }
            if matches!(report.security, SecurityCost::Unavailable) {
                println!("security        unavailable (no data)");
            }
            println!(
                "gross benefit  {:>16.3} M @{}",
                report.gross_benefit.in_millions(),
                report.gross_benefit.base_year
            );
            println!(
                "gross cost     {:>16.3} M @{}",
                report.gross_cost.in_millions(),
                report.gross_cost.base_year
            );
            println!(
                "net benefit    {:>16.3} M @{}",
                report.net_benefit.in_millions(),
                report.net_benefit.base_year
            );
            for warning in &output.warnings {
                println!("warning: {warning}");
            }
            for file in files {
                println!("wrote {}", file.display());
            }
        }
        Command::Sweep { common, params } => {
            let config = common.load()?;
            let mut axes = Vec::new();
            for param in &params {
                let (key, values) = param.split_once('=').ok_or_else(|| Error::InvalidConfig {
                    reason: format!("--param '{param}' must look like key=v1,v2"),
                })?;
                axes.push(GridAxis {
                    key: key.to_string(),
                    values: values.split(',').map(|v| v.trim().to_string()).collect(),
                });
            }
            let grid = ParameterGrid { axes };
            let rows = pipeline::run_sweep(&config, &grid)?;
            let mut csv = String::from("grid_index,settings,net_benefit_mbdt\n");
            for row in &rows {
                let settings = row
                    .settings
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect::<Vec<_>>()
                    .join(" ");
                println!(
                    "[{:>3}] {settings}  ->  net {:.3} M",
                    row.index, row.net_benefit_mbdt
                );
                csv.push_str(&format!(
                    "{},{settings},{}\n",
                    row.index, row.net_benefit_mbdt
                ));
            }
            if let Some(dir) = &common.out {
                let path = write_text(dir, "sweep.csv", &csv)?;
                println!("wrote {}", path.display());
            }
        }
        Command::Summarize { common } => {
            let config = common.load()?;
            let summaries = survey_summaries(&config)?;
            println!(
                "{:<16} {:>6} {:>14} {:>14} {:>12} {:>12}",
                "variable", "n", "mean", "sd", "min", "max"
            );
            let mut csv = String::from("variable,n,mean,sd,min,max\n");
            for s in &summaries {
                println!(
                    "{:<16} {:>6} {:>14.2} {:>14.2} {:>12.2} {:>12.2}",
                    s.variable, s.n, s.mean, s.sd, s.min, s.max
                );
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    s.variable, s.n, s.mean, s.sd, s.min, s.max
                ));
            }
            if let Some(dir) = &common.out {
                let path = write_text(dir, "summary.csv", &csv)?;
                println!("wrote {}", path.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe (e.g. `hydro-cba ... | head`) instead of
    // panicking on the failed print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match std::panic::catch_unwind(move || run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(error)) => {
            eprintln!("error: {error}");
            ExitCode::from(1)
        }
        Err(_) => {
            eprintln!("error: internal failure");
            ExitCode::from(2)
        }
    }
}
