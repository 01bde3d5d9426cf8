use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use entforge::experiments::{run_experiment, ExperimentKind, ExperimentSpec, SpecOverrides, PRESET_NAMES};
use entforge::qstate::Bipartition;
use entforge::train::GradientMode;

#[derive(Parser)]
#[command(name = "entforge", version, about = "Train nonlinear QNNs for multipartite entanglement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train one circuit over one or more seeds.
    Train(Flags),
    /// Train randomly wired networks and histogram the final loss.
    Montecarlo(Flags),
    /// Memristor t_osc sweep at t_int = 1.
    Sweep(Flags),
    /// Evaluate MW and negativities at fixed parameters.
    Measure(Flags),
    /// Run a JSON experiment spec.
    Run {
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List preset names.
    Presets,
}

#[derive(Args)]
struct Flags {
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    qubits: Option<usize>,
    /// Topology name, text form like "0-1,1-2", or a file.
    #[arg(long)]
    topology: Option<String>,
    #[arg(long, value_parser = ["linear", "sin", "bm"])]
    activation: Option<String>,
    #[arg(long)]
    t_osc: Option<f64>,
    #[arg(long)]
    t_int: Option<f64>,
    #[arg(long)]
    dephase_p: Option<f64>,
    #[arg(long)]
    damping_gamma: Option<f64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=2))]
    depth: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=2))]
    params_per_block: Option<u64>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    lr: Option<f64>,
    #[arg(long)]
    seeds: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// adjoint, parameter_shift or finite_difference.
    #[arg(long)]
    gradient: Option<GradientMode>,
    /// Side B, e.g. "[0,1,2]". Repeatable.
    #[arg(long = "bipartition")]
    bipartitions: Vec<Bipartition>,
    /// Comma-separated t_osc values for `sweep`.
    #[arg(long, value_delimiter = ',')]
    ratios: Option<Vec<f64>>,
    /// Comma-separated raw parameters for `measure`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    params: Option<Vec<f64>>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Flags {
    fn spec(self, kind: ExperimentKind) -> entforge::Result<ExperimentSpec> {
        let preset = self.preset.clone();
        let o = SpecOverrides {
            qubits: self.qubits,
            topology: self.topology,
            activation: self.activation,
            t_osc: self.t_osc,
            t_int: self.t_int,
            dephase_p: self.dephase_p,
            damping_gamma: self.damping_gamma,
            depth: self.depth.map(|d| d as usize),
            params_per_block: self.params_per_block.map(|d| d as usize),
            epochs: self.epochs,
            lr: self.lr,
            seeds: self.seeds,
            samples: self.samples,
            seed: self.seed,
            gradient: self.gradient,
            bipartitions: self.bipartitions,
            ratios: self.ratios,
            params: self.params,
            out: self.out,
        };
        o.build(kind, preset.as_deref())
    }
}

fn run(cli: Cli) -> entforge::Result<()> {
    let spec = match cli.command {
        Command::Presets => {
            let mut stdout = std::io::stdout().lock();
            for name in PRESET_NAMES {
                if writeln!(stdout, "{name}").is_err() {
                    break;
                }
            }
            return Ok(());
        }
        Command::Run { spec, out } => {
            let mut s = ExperimentSpec::from_file(&spec)?;
            if out.is_some() {
                s.output = out;
            }
            s
        }
        Command::Train(f) => f.spec(ExperimentKind::Train)?,
        Command::Montecarlo(f) => f.spec(ExperimentKind::Montecarlo)?,
        Command::Sweep(f) => f.spec(ExperimentKind::Sweep)?,
        Command::Measure(f) => f.spec(ExperimentKind::Measure)?,
    };
    let out = run_experiment(&spec)?;
    match &spec.output {
        Some(dir) => {
            let mut names: Vec<&str> = vec!["summary.json"];
            names.extend(out.files.keys().map(String::as_str));
            eprintln!("wrote {} to {}", names.join(", "), dir.display());
        }
        None => println!("{}", out.summary_json()?),
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
