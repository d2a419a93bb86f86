use clap::{Parser, Subcommand};
use penalty_splitting::cli::{self, Overrides};
use std::path::PathBuf;

/// Backward penalty splitting solvers for monotone inclusions
/// 0 ∈ Ax + Dx + N_C(x), with C the zero set of a penalty operator B.
#[derive(Parser)]
#[command(name = "penalty-splitting", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a solver from a JSON config; writes trace.csv and report.json
    Run {
        #[arg(long, conflicts_with = "benchmark")]
        config: Option<PathBuf>,
        /// Run a named desk benchmark with a default (1/n, n) schedule
        /// instead of a config file (see list-benchmarks)
        #[arg(long)]
        benchmark: Option<String>,
        /// Solver to use: fbb, fbfb, or pd (overrides the config)
        #[arg(long)]
        algorithm: Option<String>,
        /// Override the config's iteration budget
        #[arg(long)]
        budget: Option<usize>,
        /// Output directory (default: config's out_dir, else ./out)
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Override the config's seed for the operator spot checks
        #[arg(long)]
        seed: Option<u64>,
        /// Proceed even when the hypothesis classifiers say rejected/violated
        #[arg(long)]
        override_hypotheses: bool,
    },
    /// Classify the convergence hypotheses for a config and print verdicts
    Check {
        #[arg(long)]
        config: PathBuf,
    },
    /// Compare the unfolded primal-dual scheme against the two-forward-step
    /// solver on the assembled product problem (exit 0 iff they agree to 1e-10)
    ComparePd {
        #[arg(long)]
        config: PathBuf,
        /// Number of comparison steps (default: config budget)
        #[arg(long)]
        budget: Option<usize>,
        /// Perturb the assembly by this amount (fault-injection test mode)
        #[arg(long, default_value_t = 0.0, hide = true)]
        inject_fault: f64,
    },
    /// List the named desk benchmarks
    ListBenchmarks,
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Run {
            config,
            benchmark,
            algorithm,
            budget,
            out_dir,
            seed,
            override_hypotheses,
        } => {
            let algorithm = match algorithm.as_deref() {
                None => None,
                Some("fbb") => Some(penalty_splitting::config::Algorithm::Fbb),
                Some("fbfb") => Some(penalty_splitting::config::Algorithm::Fbfb),
                Some("pd") => Some(penalty_splitting::config::Algorithm::Pd),
                Some(other) => {
                    eprintln!("error: unknown algorithm '{other}' (use fbb, fbfb, or pd)");
                    std::process::exit(1);
                }
            };
            cli::cmd_run(
                config.as_deref(),
                benchmark.as_deref(),
                &Overrides {
                    budget,
                    out_dir,
                    seed,
                    override_hypotheses,
                    algorithm,
                },
            )
        }
        Cmd::Check { config } => cli::cmd_check(&config),
        Cmd::ComparePd {
            config,
            budget,
            inject_fault,
        } => cli::cmd_compare_pd(&config, budget, inject_fault),
        Cmd::ListBenchmarks => cli::cmd_list_benchmarks(),
    };
    std::process::exit(code);
}
