//! Command-line front end. The `qppl` binary is a thin wrapper around
//! [`run_cli`], which writes to caller-supplied streams so it can be tested
//! in-process.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::classical::{run_classical, trace_classical};
use crate::corpus;
use crate::density::run_density;
use crate::engine::{execute, RunOptions};
use crate::error::Error;
use crate::format::format_state;
use crate::sample::{render_outcome, sample};
use crate::syntax::{parse, Program};
use crate::validate::{has_errors, validate, Mode};

#[derive(Parser, Debug)]
#[command(name = "qppl", version, about = "Run and check qubit-free quantum programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Execute a program and print its final state.
    Run(RunArgs),
    /// Parse and validate without running.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Quantum)]
        mode: ModeArg,
    },
    /// List the bundled example programs.
    Examples,
}

#[derive(clap::Args, Debug)]
struct RunArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Quantum)]
    mode: ModeArg,
    /// Print the state after each top-level statement.
    #[arg(long)]
    trace: bool,
    /// Write the final two-layer state as JSON.
    #[arg(long, value_name = "OUT")]
    dump_state: Option<PathBuf>,
    /// Cross-check against the density-matrix semantics.
    #[arg(long)]
    oracle: bool,
    /// Draw N samples from the output distribution.
    #[arg(long, value_name = "N")]
    shots: Option<usize>,
    #[arg(long, value_name = "S", default_value_t = 0, requires = "shots")]
    seed: u64,
    /// Print the exact output distribution.
    #[arg(long)]
    dist: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ModeArg {
    Quantum,
    Classical,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Quantum => Mode::Quantum,
            ModeArg::Classical => Mode::Classical,
        }
    }
}

/// Exit status: usage, parse and validation failures.
pub const EXIT_INVALID: i32 = 1;
/// Exit status: capacity and other runtime failures.
pub const EXIT_RUNTIME: i32 = 2;

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }

    fn from_error(file: &str, e: Error) -> Self {
        match e {
            Error::Parse(p) => Failure::invalid(format!("{file}:{p}")),
            Error::Invalid(diags) => Failure::invalid(
                diags
                    .iter()
                    .filter(|d| d.is_error())
                    .map(|d| d.render(file))
                    .collect::<Vec<_>>()
                    .join("\n"),
            ),
            Error::Io(e) => Failure::invalid(format!("{file}: {e}")),
            e => Failure {
                code: EXIT_RUNTIME,
                message: format!("{file}: {e}"),
            },
        }
    }
}

type Out<'a> = &'a mut dyn Write;

/// Source text of `path`, falling back to the bundled example of the same
/// name when no such file exists.
fn load(path: &Path) -> Result<String, Failure> {
    match std::fs::read_to_string(path) {
        Ok(s) => Ok(s),
        Err(e) => match corpus::find(&path.to_string_lossy()) {
            Some(ex) if e.kind() == std::io::ErrorKind::NotFound => Ok(ex.source.to_string()),
            _ => Err(Failure::invalid(format!("{}: {e}", path.display()))),
        },
    }
}

/// Parse and validate; warnings go to `err`.
fn front_end(path: &Path, mode: Mode, err: Out) -> Result<Program, Failure> {
    let file = path.display().to_string();
    let src = load(path)?;
    let program = parse(&src).map_err(|e| Failure::from_error(&file, e.into()))?;
    let diags = validate(&program, mode);
    for d in diags.iter().filter(|d| !d.is_error()) {
        let _ = writeln!(err, "{}", d.render(&file));
    }
    if has_errors(&diags) {
        return Err(Failure::from_error(&file, Error::Invalid(diags)));
    }
    Ok(program)
}

fn io(e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_RUNTIME,
        message: e.to_string(),
    }
}

fn cmd_run(args: &RunArgs, out: Out, err: Out) -> Result<(), Failure> {
    let mode = Mode::from(args.mode);
    let file = args.file.display().to_string();
    let program = front_end(&args.file, mode, err)?;
    let fail = |e: Error| Failure::from_error(&file, e);

    if mode == Mode::Classical {
        if args.dump_state.is_some() || args.oracle {
            return Err(Failure::invalid(
                "--dump-state and --oracle apply to quantum mode only",
            ));
        }
        let dist = if args.trace {
            let steps = trace_classical(&program).map_err(fail)?;
            for s in &steps {
                write!(out, "{s}").map_err(io)?;
            }
            match steps.last() {
                Some(s) => s.dist.clone(),
                None => run_classical(&program).map_err(fail)?,
            }
        } else {
            run_classical(&program).map_err(fail)?
        };
        return report(args, &dist, !args.trace, out);
    }

    let exec = execute(
        &program,
        RunOptions {
            check_invariants: true,
            trace: args.trace,
        },
    )
    .map_err(fail)?;
    for s in &exec.trace {
        write!(out, "{s}").map_err(io)?;
    }
    let state = exec.state;
    if let Some(path) = &args.dump_state {
        let json = state.to_json().map_err(fail)?;
        std::fs::write(path, json + "\n")
            .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    }
    if args.oracle {
        let direct = run_density(&program).map_err(fail)?;
        let deviation = state.to_density().max_abs_diff(&direct);
        writeln!(out, "oracle deviation: {deviation:.3e}").map_err(io)?;
    }
    let show_default = !args.trace && !args.oracle && args.dump_state.is_none();
    if show_default && !args.dist && args.shots.is_none() {
        write!(out, "{}", format_state(&state, "")).map_err(io)?;
        return Ok(());
    }
    report(args, &state.output_distribution(), false, out)
}

/// `--dist` and `--shots` output, or the bare distribution when nothing
/// else was asked for.
fn report(args: &RunArgs, dist: &crate::state::Distribution, default: bool, out: Out) -> Result<(), Failure> {
    if args.dist || (default && args.shots.is_none()) {
        write!(out, "{dist}").map_err(io)?;
    }
    if let Some(n) = args.shots {
        let mut buf = String::new();
        for k in sample(dist, args.seed, n) {
            buf.push_str(&render_outcome(dist.env(), k));
            buf.push('\n');
        }
        out.write_all(buf.as_bytes()).map_err(io)?;
    }
    Ok(())
}

fn cmd_examples(out: Out) -> Result<(), Failure> {
    for e in corpus::EXAMPLES {
        let mode = match e.mode {
            Mode::Quantum => "quantum",
            Mode::Classical => "classical",
        };
        writeln!(out, "{:<22} {:<9} {}", e.name, mode, e.summary).map_err(io)?;
    }
    Ok(())
}

/// Parse `args` (including the program name) and run the selected command.
/// Returns the process exit status.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
                return EXIT_INVALID;
            }
            let _ = write!(out, "{text}");
            return 0;
        }
    };
    let result = match &cli.command {
        Command::Run(args) => cmd_run(args, out, err),
        Command::Check { file, mode } => {
            front_end(file, Mode::from(*mode), err).map(|_| ())
        }
        Command::Examples => cmd_examples(out),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "{}", f.message);
            f.code
        }
    }
}
