use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mmbebhe::hwsim::{format_csv, format_table};
use mmbebhe::imgio::{hist_csv, read_pgm, write_map_file, write_pgm};
use mmbebhe::oracle::{compare_methods, format_decimal, verify};
use mmbebhe::{
    apply_map, calculate_smbe, find_threshold, generate_hist, mmbebhe, simulate, CycleModel,
    GrayImage,
};

/// Brightness-preserving contrast enhancement for 8-bit PGM images.
#[derive(Debug, Parser)]
#[command(name = "mmbebhe", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enhance an image and write the result as binary PGM.
    Enhance {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Also write the gray-level map.
        #[arg(long, value_name = "MAP")]
        emit_map: Option<PathBuf>,
        /// Also write the input histogram as CSV.
        #[arg(long, value_name = "CSV")]
        emit_hist: Option<PathBuf>,
    },
    /// Print the selected split level and its SMBE.
    Threshold { input: PathBuf },
    /// Compare output mean and AMBE of HE, MMBEBHE and the identity.
    Compare { input: PathBuf },
    /// Run the stage-level pipeline simulator and print its timing table.
    Simulate {
        input: PathBuf,
        #[arg(long, default_value_t = 300.0)]
        clock_mhz: f64,
        /// Also write the timing report as CSV.
        #[arg(long, value_name = "CSV")]
        csv: Option<PathBuf>,
    },
    /// Check the integer maps against the exact rational reference.
    Verify { input: PathBuf },
}

type CliResult = Result<ExitCode, String>;

fn load(path: &Path) -> Result<GrayImage, String> {
    let bytes = fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    read_pgm(&bytes).map_err(|e| format!("{}: {e}", path.display()))
}

fn store(path: &Path, bytes: impl AsRef<[u8]>) -> Result<(), String> {
    fs::write(path, bytes).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Enhance {
            input,
            output,
            emit_map,
            emit_hist,
        } => {
            let image = load(&input)?;
            let map = mmbebhe(&image).map_err(|e| e.to_string())?;
            store(&output, write_pgm(&apply_map(&image, &map)))?;
            if let Some(path) = emit_map {
                store(&path, write_map_file(&map))?;
            }
            if let Some(path) = emit_hist {
                let hist = generate_hist(&image).map_err(|e| e.to_string())?;
                store(&path, hist_csv(&hist))?;
            }
        }
        Command::Threshold { input } => {
            let hist = generate_hist(&load(&input)?).map_err(|e| e.to_string())?;
            let t = find_threshold(&calculate_smbe(&hist));
            println!("threshold={} smbe={}", t.value, t.smbe);
        }
        Command::Compare { input } => {
            let rows = compare_methods(&load(&input)?).map_err(|e| e.to_string())?;
            println!("{:<10} {:>14} {:>14}", "method", "output_mean", "ambe");
            for r in rows {
                println!(
                    "{:<10} {:>14} {:>14}",
                    r.method,
                    format_decimal(&r.output_mean, 6),
                    format_decimal(&r.ambe, 6)
                );
            }
        }
        Command::Simulate {
            input,
            clock_mhz,
            csv,
        } => {
            let model = CycleModel::default()
                .with_clock(clock_mhz)
                .ok_or_else(|| format!("clock must be positive, got {clock_mhz}"))?;
            let sim = simulate(&load(&input)?, &model).map_err(|e| e.to_string())?;
            print!("{}", format_table(&sim.reports, &model));
            if let Some(path) = csv {
                store(&path, format_csv(&sim.reports))?;
            }
        }
        Command::Verify { input } => {
            let image = load(&input)?;
            match verify(&image).map_err(|e| e.to_string())? {
                Ok(()) => println!("ok: integer maps match the exact reference at all 256 levels"),
                Err(m) => {
                    println!("mismatch at gray level {}: {m}", m.level());
                    return Ok(ExitCode::FAILURE);
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
