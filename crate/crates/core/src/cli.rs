//! Command-line front end. Exit codes: 0 success, 1 error diagnostics,
//! 2 usage or I/O failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::diagnostics::{Diagnostic, Severity};
use crate::registry::Registry;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DIAGNOSTICS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable that turns off colored diagnostics.
pub const NO_COLOR_ENV: &str = "BLUEFISH_NO_COLOR";

#[derive(Debug, Parser)]
#[command(name = "bluefish", version, about = "Compile diagram documents to SVG")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lay out a document and write SVG.
    Render {
        input: PathBuf,
        /// Output path (default: the input with an .svg extension).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the canonical scene dump next to the output.
        #[arg(long)]
        dump: bool,
    },
    /// Lay out a document and report diagnostics only.
    Check { input: PathBuf },
    /// Time parse, layout and paint on generated documents.
    Bench {
        /// nested-stacks or insertion-sort-like
        generator: String,
        /// Comma-separated sizes (node counts, or element counts for
        /// insertion-sort-like).
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        reps: usize,
    },
}

/// Dump path written beside an SVG output.
pub fn dump_path(out: &Path) -> PathBuf {
    out.with_extension("scene.json")
}

fn format_diagnostic(d: &Diagnostic, color: bool) -> String {
    if !color {
        return d.to_string();
    }
    let paint = match d.severity {
        Severity::Error => "\x1b[1;31m",
        Severity::Warning => "\x1b[1;33m",
    };
    let mut s = format!(
        "{paint}{}[{}]\x1b[0m: \x1b[1m{}\x1b[0m",
        d.severity.as_str(),
        d.code,
        d.message
    );
    for p in &d.paths {
        s.push_str(&format!("\n  \x1b[34mat\x1b[0m {p}"));
    }
    s
}

fn report(err: &mut dyn Write, diags: &[Diagnostic], color: bool) {
    for d in diags {
        let _ = writeln!(err, "{}", format_diagnostic(d, color));
    }
}

/// Run the CLI with explicit streams; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write, color: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let registry = Registry::standard();
    match cli.command {
        Command::Render {
            input,
            out: target,
            dump,
        } => {
            let Some(bytes) = read_input(&input, err) else {
                return EXIT_USAGE;
            };
            let compiled = match crate::engine::compile(&bytes, &registry) {
                Ok(c) => c,
                Err(diags) => {
                    report(err, &diags, color);
                    return EXIT_DIAGNOSTICS;
                }
            };
            report(err, &compiled.warnings, color);
            let target = target.unwrap_or_else(|| input.with_extension("svg"));
            let svg = crate::renderer::paint(&compiled.scene, &registry);
            if let Err(e) = std::fs::write(&target, svg) {
                let _ = writeln!(err, "error: cannot write {}: {e}", target.display());
                return EXIT_USAGE;
            }
            if dump {
                let path = dump_path(&target);
                if let Err(e) = std::fs::write(&path, crate::renderer::dump_scene(&compiled.scene)) {
                    let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                    return EXIT_USAGE;
                }
            }
            EXIT_OK
        }
        Command::Check { input } => {
            let Some(bytes) = read_input(&input, err) else {
                return EXIT_USAGE;
            };
            match crate::engine::compile(&bytes, &registry) {
                Ok(c) => {
                    report(err, &c.warnings, color);
                    let _ = writeln!(out, "ok");
                    EXIT_OK
                }
                Err(diags) => {
                    report(err, &diags, color);
                    EXIT_DIAGNOSTICS
                }
            }
        }
        Command::Bench { generator, sizes, reps } => {
            if !crate::bench::GENERATORS.contains(&generator.as_str()) {
                let _ = writeln!(
                    err,
                    "error: unknown generator `{generator}` (expected one of {})",
                    crate::bench::GENERATORS.join(", ")
                );
                return EXIT_USAGE;
            }
            if sizes.is_empty() || sizes.contains(&0) || reps == 0 {
                let _ = writeln!(err, "error: sizes and reps must be positive");
                return EXIT_USAGE;
            }
            match crate::bench::run_bench(&generator, &sizes, reps, &registry) {
                Ok(rows) => {
                    let _ = writeln!(out, "{:>10} {:>10} {:>12}", "size", "nodes", "median_ms");
                    for r in rows {
                        let _ = writeln!(
                            out,
                            "{:>10} {:>10} {:>12.3}",
                            r.size,
                            r.nodes,
                            r.median.as_secs_f64() * 1e3
                        );
                    }
                    EXIT_OK
                }
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    EXIT_DIAGNOSTICS
                }
            }
        }
    }
}

fn read_input(path: &Path, err: &mut dyn Write) -> Option<Vec<u8>> {
    match std::fs::read(path) {
        Ok(b) => Some(b),
        Err(e) => {
            let _ = writeln!(err, "error: cannot read {}: {e}", path.display());
            None
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    use std::io::IsTerminal;
    let color = std::env::var_os(NO_COLOR_ENV).is_none() && std::io::stderr().is_terminal();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock(), color)
}
