use clap::{Parser, Subcommand};

use cohbound::audit::AuditConfig;
use cohbound::cli::{self, fixtures, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE};

#[derive(Parser)]
#[command(
    name = "cohbound",
    about = "Measurement-induced average coherence and its classical-correlation bound"
)]
struct Cli {
    /// Write a built-in state (ex1|ex2|ex3|bell:c1,c2,c3) to --out and exit.
    #[arg(long, global = true)]
    emit_state: Option<String>,
    /// Output path for --emit-state (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<String>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Reproduce the worked examples and report gaps.
    Examples,
    /// Emit the Bell-diagonal sweep CSV (fixed θ=2π/3, φ=π/2, c2=0.33, c3=0.22).
    Figure2 {
        #[arg(long)]
        out: String,
        #[arg(long, default_value_t = cli::SWEEP_C1_MIN)]
        c1_min: f64,
        #[arg(long, default_value_t = cli::SWEEP_C1_MAX)]
        c1_max: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
    /// Full bound report for a state file at fixed angles or the maximum.
    Compute {
        #[arg(long)]
        state: String,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        phi: Option<f64>,
        #[arg(long, default_value_t = false)]
        maximize: bool,
    },
    /// Random-state theorem and null-condition audit.
    Audit {
        #[arg(long, default_value_t = 500)]
        n_states: usize,
        #[arg(long, default_value_t = 20)]
        n_measurements: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Local dimensions as dA,dB.
        #[arg(long, default_value = "2,2")]
        dims: String,
    },
}

fn run(cli: Cli) -> i32 {
    if let Some(name) = &cli.emit_state {
        let state = match fixtures::by_name(name) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
        };
        return match &cli.out {
            Some(path) => match cohbound::cli::write_state(path, &state) {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_USAGE
                }
            },
            None => {
                let file = cohbound::cli::StateFile::from_state(&state);
                println!("{}", serde_json::to_string_pretty(&file).expect("serializable"));
                EXIT_OK
            }
        };
    }

    let Some(command) = cli.command else {
        eprintln!("error: a subcommand or --emit-state is required (see --help)");
        return EXIT_USAGE;
    };

    match command {
        Command::Examples => match cli::cmd_examples() {
            Ok((text, code)) => {
                println!("{text}");
                code
            }
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_NUMERIC
            }
        },
        Command::Figure2 {
            out,
            c1_min,
            c1_max,
            steps,
        } => match cli::figure2_rows(c1_min, c1_max, steps) {
            Ok(rows) => {
                let csv = cli::figure2_csv(&rows);
                if let Err(e) = std::fs::write(&out, csv) {
                    eprintln!("error: cannot write {out}: {e}");
                    return EXIT_USAGE;
                }
                println!("wrote {} rows to {out}", rows.len());
                EXIT_OK
            }
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_USAGE
            }
        },
        Command::Compute {
            state,
            theta,
            phi,
            maximize,
        } => {
            let s = match cli::read_state(&state) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_USAGE;
                }
            };
            let angles = match (theta, phi, maximize) {
                (Some(t), Some(p), false) => Some((t, p)),
                (None, None, true) => None,
                _ => {
                    eprintln!("error: pass either --theta and --phi, or --maximize");
                    return EXIT_USAGE;
                }
            };
            match cli::cmd_compute(&s, angles, maximize) {
                Ok(text) => {
                    println!("{text}");
                    EXIT_OK
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_NUMERIC
                }
            }
        }
        Command::Audit {
            n_states,
            n_measurements,
            seed,
            dims,
        } => {
            let parsed: Vec<usize> = dims
                .split(',')
                .filter_map(|t| t.trim().parse().ok())
                .collect();
            if parsed.len() != 2 {
                eprintln!("error: --dims expects dA,dB");
                return EXIT_USAGE;
            }
            let config = AuditConfig {
                n_states,
                n_measurements,
                dim_a: parsed[0],
                dim_b: parsed[1],
                seed,
                ..Default::default()
            };
            match cli::cmd_audit(&config) {
                Ok((text, code)) => {
                    println!("{text}");
                    code
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_NUMERIC
                }
            }
        }
    }
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(cli));
}
