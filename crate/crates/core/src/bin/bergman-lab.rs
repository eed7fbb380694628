use std::fs;
use std::path::Path;
use std::process::ExitCode;

use bergman_lab::experiment::{self, error_code, exit, Command, ExperimentConfig, Outcome};
use bergman_lab::geometry::GraphSpec;
use bergman_lab::LabError;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bergman-lab", version, about = "Level-set quadrature for singular holomorphic functions")]
struct Cli {
    /// Worker threads (default: logical cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Re-run the config embedded in a report and compare byte for byte.
    #[arg(long, value_name = "REPORT")]
    replay: Option<String>,
    #[command(subcommand)]
    cmd: Option<Cmd>,
}

#[derive(Args)]
struct Out {
    #[arg(long)]
    seed: u64,
    /// JSON report path (stdout when absent).
    #[arg(long)]
    out: Option<String>,
    /// CSV table path.
    #[arg(long)]
    csv: Option<String>,
}

fn reals(s: &str) -> Result<Vec<f64>, LabError> {
    experiment::parse_reals(s, ',')
}

#[derive(Subcommand)]
enum Cmd {
    /// Shell profile and threshold estimate for one kernel.
    Threshold {
        #[arg(long)]
        domain: String,
        #[arg(long)]
        kernel: String,
        /// Boundary point as re,im pairs.
        #[arg(long, allow_hyphen_values = true)]
        zeta: Option<String>,
        #[arg(long = "p-grid")]
        p_grid: Option<String>,
        /// First and last shell index, `k0,k1`.
        #[arg(long)]
        shells: Option<String>,
        #[arg(long = "per-shell", default_value_t = 100_000)]
        per_shell: u64,
        #[arg(long, default_value_t = 0.15)]
        tolerance: f64,
        #[command(flatten)]
        out: Out,
    },
    /// Levi coercivity check with the computed (β, ε).
    Coercivity {
        #[arg(long)]
        domain: String,
        /// Multiplies β before the check.
        #[arg(long = "beta-scale", default_value_t = 1.0)]
        beta_scale: f64,
        #[arg(long, default_value_t = 100_000)]
        pairs: u64,
        #[arg(long = "boundary-samples", default_value_t = 64)]
        boundary_samples: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Witness series over a boundary net with diagnostics.
    Witness {
        #[arg(long)]
        domain: String,
        #[arg(long = "J", default_value_t = 8)]
        j: usize,
        #[arg(long, default_value_t = f64::INFINITY)]
        q: f64,
        #[arg(long, default_value_t = 1e4)]
        m: f64,
        #[arg(long, default_value_t = 200_000)]
        budget: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Truncated Fréchet distance d(f, g).
    Metric {
        #[arg(long)]
        domain: String,
        #[arg(long)]
        q: f64,
        #[arg(long = "J", default_value_t = 20)]
        j: usize,
        #[arg(long)]
        f: String,
        #[arg(long, default_value = "zero")]
        g: String,
        #[arg(long, default_value_t = 400_000)]
        budget: u64,
        #[command(flatten)]
        out: Out,
    },
    /// J(r) against log(1/(1-r²)) on the unit ball.
    Loglaw {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value = "0.9,0.95,0.98,0.99,0.995,0.999")]
        radii: String,
        #[arg(long, default_value_t = 400_000)]
        budget: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Connected components of B(w, δ) ∩ Ω.
    Components {
        #[arg(long)]
        domain: String,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        #[arg(long)]
        delta: f64,
        /// Grid spacing (n = 1).
        #[arg(long, conflicts_with = "samples")]
        h: Option<f64>,
        /// Sample count for the ε-graph.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Run every config of a JSON manifest.
    Batch { manifest: String },
}

fn config(cmd: Cmd) -> Result<Vec<ExperimentConfig>, LabError> {
    let one = |command, o: Out| vec![ExperimentConfig { command, seed: o.seed, output: o.out, csv: o.csv }];
    Ok(match cmd {
        Cmd::Threshold { domain, kernel, zeta, p_grid, shells, per_shell, tolerance, out } => {
            let shells = match shells.map(|s| reals(&s)).transpose()?.as_deref() {
                None => None,
                Some([a, b]) => Some((*a as i32, *b as i32)),
                Some(_) => return Err(LabError::Input("--shells takes k0,k1".into())),
            };
            let zeta = zeta.map(|s| reals(&s)).transpose()?;
            let p_grid = p_grid.map(|s| reals(&s)).transpose()?;
            one(Command::Threshold { domain, kernel, zeta, p_grid, shells, per_shell, tolerance }, out)
        }
        Cmd::Coercivity { domain, beta_scale, pairs, boundary_samples, out } => {
            one(Command::Coercivity { domain, beta_scale, pairs, boundary_samples }, out)
        }
        Cmd::Witness { domain, j, q, m, budget, out } => one(Command::Witness { domain, j, q, m, budget }, out),
        Cmd::Metric { domain, q, j, f, g, budget, out } => one(Command::Metric { domain, q, j, f, g, budget }, out),
        Cmd::Loglaw { n, p, radii, budget, out } => {
            one(Command::Loglaw { n, p: p.unwrap_or(n as f64 + 1.0), radii: reals(&radii)?, budget }, out)
        }
        Cmd::Components { domain, w, delta, h, samples, seed, out } => {
            let graph = match (h, samples) {
                (Some(h), _) => Some(GraphSpec::Grid { h }),
                (None, Some(count)) => Some(GraphSpec::Samples { count, eps_factor: 4.0 }),
                _ => None,
            };
            let w = reals(&w)?;
            vec![ExperimentConfig { command: Command::Components { domain, w, delta, graph }, seed, output: out, csv: None }]
        }
        Cmd::Batch { manifest } => experiment::parse_manifest(&fs::read_to_string(&manifest)?)?,
    })
}

fn write(outcome: &Outcome) -> Result<(), LabError> {
    let cfg = &outcome.report.config;
    match &cfg.output {
        Some(p) => fs::write(p, outcome.json())?,
        None => print!("{}", outcome.json()),
    }
    if let (Some(p), Some(t)) = (&cfg.csv, &outcome.csv) {
        fs::write(Path::new(p), t)?;
    }
    Ok(())
}

fn run_all(configs: Vec<ExperimentConfig>) -> i32 {
    let mut code = exit::PASS;
    for cfg in configs {
        let c = match experiment::run(cfg).and_then(|o| write(&o).map(|_| o.exit_code)) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error [{}]: {e}", e.code());
                error_code(&e)
            }
        };
        code = code.max(c);
    }
    code
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::INPUT as u8 } else { 0 });
        }
    };
    if cli.replay.is_some() && cli.cmd.is_some() {
        eprintln!("error: --replay cannot be combined with a subcommand");
        return ExitCode::from(exit::INPUT as u8);
    }
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(exit::INPUT as u8);
        }
    }
    let code = if let Some(path) = cli.replay {
        match fs::read_to_string(&path).map_err(LabError::from).and_then(|t| experiment::replay(&t)) {
            Ok((out, same)) => {
                print!("{}", out.json());
                eprintln!("replay: {}", if same { "identical" } else { "differs" });
                if same { out.exit_code } else { exit::TOLERANCE }
            }
            Err(e) => {
                eprintln!("error [{}]: {e}", e.code());
                error_code(&e)
            }
        }
    } else {
        match cli.cmd {
            None => {
                eprintln!("error: a subcommand or --replay is required");
                exit::INPUT
            }
            Some(cmd) => match config(cmd) {
                Ok(c) => run_all(c),
                Err(e) => {
                    eprintln!("error [{}]: {e}", e.code());
                    error_code(&e)
                }
            },
        }
    };
    ExitCode::from(code as u8)
}
