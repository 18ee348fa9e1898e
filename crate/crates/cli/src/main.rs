use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use bundlecheck::report::{run, Command, Format, RunOptions};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bundlecheck", version, about = "Exact verification certificates for the rank-2 bundle construction")]
struct Cli {
    #[command(subcommand)]
    cmd: Top,
}

#[derive(Subcommand)]
enum Top {
    /// Run a group of checks and emit a certificate.
    Verify {
        #[command(subcommand)]
        what: What,
        /// Perturbation p of bidegree (3,3), one term per line.
        #[arg(long, global = true)]
        p_file: Option<PathBuf>,
        #[arg(long, global = true, value_enum, default_value_t = OutFormat::Text)]
        format: OutFormat,
        /// Write the certificate here instead of stdout.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Clone)]
enum What {
    /// Every check, with stability at N = 2.
    All,
    /// Line-bundle vanishings and the deformation count of E.
    Cohomology,
    /// Splitting type of the normal bundle of C.
    Lemma1,
    /// Second-order obstruction of every first-order direction.
    Lemma2,
    /// Chern classes, indivisibility and degrees.
    Chern,
    /// Slope stability for the polarization N w1 + w2.
    Stability {
        /// Polarization N, a rational number greater than 1.
        #[arg(long = "N", default_value = "2")]
        n: String,
    },
    /// Base locus of the linear system and smoothness at the fibre.
    Geometry,
}

#[derive(ValueEnum, Clone, Copy)]
enum OutFormat {
    Json,
    Text,
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("bundlecheck: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let Top::Verify { what, p_file, format, out } = cli.cmd;

    let mut opts = RunOptions::default();
    if let Some(path) = &p_file {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return usage(format!("{}: {e}", path.display())),
        };
        opts = match opts.with_perturbation_text(&text) {
            Ok(o) => o,
            Err(e) => return usage(e),
        };
    }
    let command = match what {
        What::All => Command::All,
        What::Cohomology => Command::Cohomology,
        What::Lemma1 => Command::Lemma1,
        What::Lemma2 => Command::Lemma2,
        What::Chern => Command::Chern,
        What::Geometry => Command::Geometry,
        What::Stability { n } => {
            opts = match opts.with_n_text(&n) {
                Ok(o) => o,
                Err(e) => return usage(e),
            };
            Command::Stability
        }
    };

    let cert = match run(command, &opts) {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    let format = match format {
        OutFormat::Json => Format::Json,
        OutFormat::Text => Format::Text,
    };
    let bytes = cert.emit(format);
    match out {
        Some(path) => {
            if let Err(e) = fs::write(&path, bytes) {
                return usage(format!("{}: {e}", path.display()));
            }
        }
        None => print!("{bytes}"),
    }
    ExitCode::from(cert.exit_code() as u8)
}
