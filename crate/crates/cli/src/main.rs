use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use skewbench_cli::config::defaults_help;
use skewbench_cli::plot::PlotOptions;
use skewbench_cli::{
    cmd_eval, cmd_experiment, cmd_generate, cmd_plot, cmd_resample, load_config, thread_limit, CliError, CliResult,
};

#[derive(Parser, Debug)]
#[command(
    name = "skewbench",
    version,
    about = "Synthetic imbalanced data, resampling and classifier evaluation",
    after_help = defaults_help()
)]
struct Cli {
    /// Master seed; overrides `seed` in the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Configuration file of `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (or directory for `experiment`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Override one config key, e.g. `--set gen.n_samples=800`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a dataset CSV plus a `<stem>.centers.csv` sidecar.
    Generate,
    /// Apply one resampling method to a CSV.
    Resample {
        #[arg(long)]
        input: PathBuf,
        /// base, ro, co, smote, ncr or sparsity.
        #[arg(long)]
        method: String,
        /// Centers sidecar; without it sub-clusters come from MeanShift.
        #[arg(long)]
        centers: Option<PathBuf>,
    },
    /// Cross-validate the configured methods and classifiers on a CSV.
    Eval {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        centers: Option<PathBuf>,
    },
    /// Run the configured experiment grid.
    Experiment {
        /// Suppress progress lines.
        #[arg(long)]
        quiet: bool,
    },
    /// Render a 2-D dataset as an SVG scatter plot.
    Plot {
        #[arg(long)]
        input: PathBuf,
        /// Mark MeanShift centers of the minority class.
        #[arg(long)]
        show_centers: bool,
        /// Ring borderline and rare examples.
        #[arg(long)]
        show_kinds: bool,
    },
}

fn run(cli: Cli) -> CliResult<String> {
    let cfg = load_config(cli.config.as_deref(), &cli.overrides, cli.seed)?;
    let out = cli.out.as_deref();
    match cli.command {
        Command::Generate => cmd_generate(&cfg, out),
        Command::Resample { input, method, centers } => cmd_resample(&cfg, &input, &method, centers.as_deref(), out),
        Command::Eval { input, centers } => cmd_eval(&cfg, &input, centers.as_deref(), out),
        Command::Experiment { quiet } => cmd_experiment(&cfg, out, quiet),
        Command::Plot { input, show_centers, show_kinds } => {
            let quantile = cfg.value::<f64>("clusters.quantile")?;
            cmd_plot(&input, out, &PlotOptions { show_centers, show_kinds, quantile })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = thread_limit().and_then(|threads| {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = threads {
            builder = builder.num_threads(n);
        }
        builder.build().map_err(|e| CliError::Runtime(e.to_string()))
    });
    let result = pool.and_then(|pool| pool.install(|| run(cli)));
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
