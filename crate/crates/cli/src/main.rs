//! `udec`: analyze codes for constrained sources from the command line.
//!
//! Exit status: 0 on success (or a decodable verdict), 2 when an analysis
//! comes back negative, 1 on bad input or any other error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand};
use serde::Serialize;
use udec_core::capacity::{self, DEFAULT_TOLERANCE};
use udec_core::code::{format_digits, parse_digits};
use udec_core::format::{load_channel, CodeDoc, SourceDoc};
use udec_core::simulate::simulate_code_lengths;
use udec_core::{analyze, decode, example, expected_length, Code, Error, Source, SymbolCode};

#[derive(Parser)]
#[command(
    name = "udec",
    version,
    about = "Unique decodability and Kraft-type conditions for constrained sources"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Kraft sum, spectral test and exact decodability verdict as JSON.
    Analyze {
        #[arg(long)]
        source: String,
        #[arg(long)]
        code: String,
    },
    /// Encode a symbol sequence, e.g. `ACD` or `A C D`.
    Encode {
        #[arg(long)]
        source: String,
        #[arg(long)]
        code: String,
        #[arg(long, allow_hyphen_values = true)]
        text: String,
    },
    /// Decode a digit string back to symbols.
    Decode {
        #[arg(long)]
        source: String,
        #[arg(long)]
        code: String,
        #[arg(long)]
        digits: String,
    },
    /// Table of entropy and expected lengths for the bundled example, as CSV.
    ReproducePaper {
        #[arg(long, default_value_t = 16)]
        n: usize,
        /// Output path; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo estimate of the expected code length of `n` symbols.
    Simulate {
        #[arg(long)]
        source: String,
        #[arg(long)]
        code: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Capacity of a noiseless channel, as JSON.
    Capacity {
        #[arg(long)]
        channel: String,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
}

/// Result of a command that completed: print and exit 0, or exit 2.
enum Outcome {
    Positive,
    Negative,
}

const BUILTIN_PREFIX: &str = "builtin:";

/// File contents, or one of the bundled files named `builtin:<name>`.
fn read_input(arg: &str) -> anyhow::Result<String> {
    if let Some(name) = arg.strip_prefix(BUILTIN_PREFIX) {
        let text = match name {
            "source" => example::SOURCE_JSON,
            "full_support_source" => example::FULL_SUPPORT_SOURCE_JSON,
            "alternative_code" => example::ALTERNATIVE_CODE_JSON,
            "classic_code" => example::CLASSIC_CODE_JSON,
            "channel" => example::CHANNEL_JSON,
            _ => bail!(
                "unknown bundled file {name:?}; available: source, full_support_source, \
                 alternative_code, classic_code, channel"
            ),
        };
        return Ok(text.to_owned());
    }
    fs::read_to_string(arg).with_context(|| format!("cannot read {arg}"))
}

fn load_source(arg: &str) -> anyhow::Result<Source> {
    let doc = SourceDoc::from_json(&read_input(arg)?).with_context(|| arg.to_owned())?;
    let report = doc.validate();
    if !report.is_ok() {
        let lines: Vec<String> = report.issues.iter().map(|i| format!("  {i}")).collect();
        bail!("{arg}: invalid source\n{}", lines.join("\n"));
    }
    Ok(doc.build()?)
}

fn load_code(arg: &str, source: &Source) -> anyhow::Result<Code> {
    let doc = CodeDoc::from_json(&read_input(arg)?).with_context(|| arg.to_owned())?;
    doc.build(source.alphabet()).with_context(|| arg.to_owned())
}

fn print_json<T: Serialize>(value: &T) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

/// Round to 12 significant digits and print the shortest form of the result.
fn sig12(x: f64) -> String {
    let rounded: f64 = format!("{x:.11e}").parse().expect("float round trip");
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    format!("{rounded}")
}

fn reproduce_table(n_max: usize) -> anyhow::Result<String> {
    if n_max == 0 {
        bail!("--n must be at least 1");
    }
    let source = example::source();
    let classic = example::classic_code();
    let alternative = example::alternative_code();
    let mut csv = String::from("n,entropy,classic,alternative,gap\n");
    for n in 1..=n_max {
        let h = source.joint_entropy(n);
        let c = expected_length(&classic, &source, n)?;
        let a = expected_length(&alternative, &source, n)?;
        csv.push_str(&format!(
            "{n},{},{},{},{}\n",
            sig12(h),
            sig12(c),
            sig12(a),
            sig12(h - a)
        ));
    }
    Ok(csv)
}

fn run(command: Command) -> anyhow::Result<Outcome> {
    match command {
        Command::Analyze { source, code } => {
            let s = load_source(&source)?;
            let c = load_code(&code, &s)?;
            let report = analyze(&s, &c)?;
            print_json(&report)?;
            Ok(if report.is_negative() {
                Outcome::Negative
            } else {
                Outcome::Positive
            })
        }
        Command::Encode { source, code, text } => {
            let s = load_source(&source)?;
            let s = s.as_moore()?;
            let c = load_code(&code, &Source::Moore(s.clone()))?;
            let seq = s.parse_text(&text)?;
            if !s.is_producible(&seq)? {
                bail!("{text:?} cannot be produced by the source");
            }
            println!("{}", format_digits(&c.encode(&seq)?));
            Ok(Outcome::Positive)
        }
        Command::Decode {
            source,
            code,
            digits,
        } => {
            let s = load_source(&source)?;
            let s = s.as_moore()?;
            let c = load_code(&code, &Source::Moore(s.clone()))?;
            let d = parse_digits(digits.trim(), c.radix())?;
            match decode(s, &c, &d) {
                Ok(seq) => {
                    println!("{}", s.format_sequence(&seq));
                    Ok(Outcome::Positive)
                }
                Err(Error::AmbiguousParse { first, second }) => {
                    println!("ambiguous");
                    println!("{}", s.format_sequence(&first));
                    println!("{}", s.format_sequence(&second));
                    Ok(Outcome::Negative)
                }
                Err(Error::NoParse) => Err(anyhow!(
                    "{digits:?} is not the encoding of any producible sequence"
                )),
                Err(e) => Err(e.into()),
            }
        }
        Command::ReproducePaper { n, out } => {
            let csv = reproduce_table(n)?;
            match out {
                Some(path) => write_file(&path, &csv)?,
                None => std::io::stdout().write_all(csv.as_bytes())?,
            }
            Ok(Outcome::Positive)
        }
        Command::Simulate {
            source,
            code,
            n,
            trials,
            seed,
        } => {
            let s = load_source(&source)?;
            let s = s.as_moore()?;
            let c = load_code(&code, &Source::Moore(s.clone()))?;
            print_json(&simulate_code_lengths(s, &c, n, trials, seed)?)?;
            Ok(Outcome::Positive)
        }
        Command::Capacity { channel, tol } => {
            let spec = load_channel(&read_input(&channel)?).with_context(|| channel.clone())?;
            print_json(&capacity::capacity(&spec, tol)?)?;
            Ok(Outcome::Positive)
        }
    }
}

fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not errors.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(Outcome::Positive) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig12(2.0), "2");
        assert_eq!(sig12(0.49999999999999994), "0.5");
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12(-0.0), "0");
    }

    #[test]
    fn table_rows() {
        let csv = reproduce_table(10).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "n,entropy,classic,alternative,gap");
        assert_eq!(lines[1], "1,2,2,1.5,0.5");
        assert_eq!(lines[2], "2,3.5,3.5,3,0.5");
        assert_eq!(lines[10], "10,15.5,15.5,15,0.5");
        assert!(reproduce_table(0).is_err());
    }
}
