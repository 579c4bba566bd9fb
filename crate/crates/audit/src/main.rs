use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use stein_audit::experiments::{
    arwmh_tradeoff, compare_metrics, density_grid, discrepancy, gaussian_vs_t, parse_schedule, parse_seeds,
    rates, sgld_select,
};
use stein_audit::exit_code;
use stein_audit::output::ensure_dir;
use stein_core::stein::SteinFactors;
use stein_core::{Result, TargetSpec};

#[derive(Parser)]
#[command(name = "stein-audit", version, about = "Graph Stein discrepancies for sample quality")]
struct Cli {
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Directory for CSV and JSON outputs.
    #[arg(long, default_value = "results")]
    out_dir: PathBuf,
    /// Seed count `k` (seeds 0..k), a range `a..b`, or a list `1,5,9`.
    #[arg(long)]
    seeds: Option<String>,
    /// Comma-separated, strictly increasing prefix sizes.
    #[arg(long)]
    n_schedule: Option<String>,
    /// Stein factors `c1,c2,c3` or a preset name.
    #[arg(long)]
    factors: Option<String>,
    /// Spanner stretch.
    #[arg(long, default_value_t = 2.0)]
    t: f64,
    /// Restore full-size workloads.
    #[arg(long)]
    paper_scale: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Discrepancy of one sample CSV against one target JSON.
    Discrepancy {
        #[arg(long)]
        sample: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        t: f64,
        #[arg(long)]
        factors: Option<String>,
        /// Use the exact one-dimensional complete graph program.
        #[arg(long)]
        univariate: bool,
        /// Also write the optimal certificates.
        #[arg(long)]
        certificates: bool,
        /// Where to write `discrepancy.json`; nothing is written when absent.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// I.i.d. Gaussian against scaled Student's t prefixes for a normal target.
    GaussianVsT(Common),
    /// Non-uniform graph Stein discrepancy next to the Wasserstein distance.
    CompareMetrics {
        /// `gaussian` or `uniform01`.
        #[arg(long, default_value = "gaussian")]
        target: String,
        #[command(flatten)]
        common: Common,
    },
    /// SGLD step-size selection by Stein discrepancy and by ESS.
    SgldSelect {
        /// Comma-separated step sizes.
        #[arg(long)]
        step_grid: Option<String>,
        /// Sequences per step size.
        #[arg(long)]
        n_sequences: Option<usize>,
        /// Length of each sequence.
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Exact against approximate Metropolis–Hastings at matched budgets.
    ArwmhTradeoff {
        /// Comma-separated test levels; 0 is the exact chain.
        #[arg(long)]
        tolerances: Option<String>,
        /// Likelihood evaluations per chain.
        #[arg(long)]
        budget: Option<u64>,
        /// Random-walk proposal standard deviation.
        #[arg(long)]
        proposal_scale: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Convergence rates for i.i.d., Sobol, and herding sequences on Unif(0, 1).
    Rates(Common),
    /// Log density of a two-dimensional target on a grid.
    DensityGrid {
        /// Target JSON; the mixture posterior when absent.
        #[arg(long)]
        target: Option<PathBuf>,
        #[arg(long, default_value = "results")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 200)]
        resolution: usize,
    },
}

fn factors_or(text: &Option<String>, default: SteinFactors) -> Result<SteinFactors> {
    text.as_deref().map_or(Ok(default), SteinFactors::parse)
}

impl Common {
    fn seeds_or(&self, default: Vec<u64>) -> Result<Vec<u64>> {
        self.seeds.as_deref().map_or(Ok(default), parse_seeds)
    }

    fn schedule_or(&self, default: Vec<usize>) -> Result<Vec<usize>> {
        self.n_schedule.as_deref().map_or(Ok(default), parse_schedule)
    }

    fn out_dir(&self) -> Result<PathBuf> {
        ensure_dir(&self.out_dir)
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Discrepancy {
            sample,
            target,
            t,
            factors,
            univariate,
            certificates,
            out_dir,
        } => {
            let config = discrepancy::Config {
                sample,
                target,
                t,
                factors: factors_or(&factors, SteinFactors::UNIT)?,
                univariate,
                certificates,
                out_dir,
            };
            let outcome = discrepancy::run(&config)?;
            print!("{}", discrepancy::render(&outcome.summary));
            if let Some(path) = outcome.result_path {
                println!("wrote {}", path.display());
            }
        }
        Command::GaussianVsT(common) => {
            let defaults = gaussian_vs_t::Config::default();
            let config = gaussian_vs_t::Config {
                seeds: common.seeds_or(defaults.seeds)?,
                n_schedule: common.schedule_or(defaults.n_schedule)?,
                factors: factors_or(&common.factors, defaults.factors)?,
                function_seed: None,
            };
            let report = gaussian_vs_t::run(&config)?;
            report.write(&common.out_dir()?)?;
            for s in &report.summary.slopes {
                println!("{} slope {:.3}", s.dist, s.median_curve_slope);
            }
        }
        Command::CompareMetrics { target, common } => {
            let which = compare_metrics::Which::parse(&target)?;
            let defaults = compare_metrics::Config::new(which);
            let config = compare_metrics::Config {
                seeds: common.seeds_or(defaults.seeds)?,
                n_schedule: common.schedule_or(defaults.n_schedule)?,
                factors: common.factors.as_deref().map(SteinFactors::parse).transpose()?,
                ..defaults
            };
            let report = compare_metrics::run(&config)?;
            report.write(&common.out_dir()?)?;
            for s in &report.summary.per_seed {
                println!(
                    "seed {} ratio [{:.3}, {:.3}] spearman {:?}",
                    s.seed, s.min_ratio, s.max_ratio, s.spearman
                );
            }
        }
        Command::SgldSelect {
            step_grid,
            n_sequences,
            n,
            common,
        } => {
            let mut config = if common.paper_scale {
                sgld_select::Config::paper_scale()
            } else {
                sgld_select::Config::desk()
            };
            if let Some(grid) = step_grid {
                config.step_grid = sgld_select::Config::parse_grid(&grid)?;
            }
            config.n_sequences = n_sequences.unwrap_or(config.n_sequences);
            config.n = n.unwrap_or(config.n);
            if let Some(seeds) = &common.seeds {
                config.base_seed = parse_seeds(seeds)?[0];
            }
            config.t = common.t;
            config.factors = factors_or(&common.factors, config.factors)?;
            let report = sgld_select::run(&config)?;
            report.write(&common.out_dir()?)?;
            println!(
                "stein selects {:?}, ess selects {:?}",
                report.selection.epsilon_stein, report.selection.epsilon_ess
            );
        }
        Command::ArwmhTradeoff {
            tolerances,
            budget,
            proposal_scale,
            common,
        } => {
            let mut config = if common.paper_scale {
                arwmh_tradeoff::Config::paper_scale()
            } else {
                arwmh_tradeoff::Config::desk()
            };
            if let Some(text) = tolerances {
                config.tolerances = stein_audit::experiments::parse_floats(&text)?;
            }
            config.budget = budget.unwrap_or(config.budget);
            config.proposal_scale = proposal_scale.unwrap_or(config.proposal_scale);
            config.seeds = common.seeds_or(config.seeds)?;
            config.n_schedule = common.schedule_or(config.n_schedule)?;
            config.t = common.t;
            config.factors = factors_or(&common.factors, config.factors)?;
            let report = arwmh_tradeoff::run(&config)?;
            report.write(&common.out_dir()?)?;
            println!("{}", serde_json::to_string_pretty(&report.summary)?);
        }
        Command::Rates(common) => {
            let defaults = rates::Config::default();
            let config = rates::Config {
                seeds: common.seeds_or(defaults.seeds)?,
                n_schedule: common.schedule_or(defaults.n_schedule)?,
                factors: factors_or(&common.factors, defaults.factors)?,
                ..defaults
            };
            let report = rates::run(&config)?;
            report.write(&common.out_dir()?)?;
            for f in &report.summary.fits {
                println!("{} slope {:.3}", f.sampler, f.slope);
            }
        }
        Command::DensityGrid {
            target,
            out_dir,
            resolution,
        } => {
            let spec = match target {
                Some(path) => TargetSpec::from_path(&path)?,
                None => TargetSpec::GmmPosterior(Default::default()),
            };
            let target = spec.build()?;
            let config = density_grid::Config {
                resolution,
                ..Default::default()
            };
            let table = density_grid::run(target.as_ref(), &config)?;
            density_grid::write(&table, &ensure_dir(&out_dir)?, target.name())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
