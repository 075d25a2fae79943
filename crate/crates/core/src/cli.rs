//! The `xray` command line.

use std::io::{IsTerminal, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::analysis::{analyze, AnalysisOptions, SourceFile};
use crate::extract::ContextMode;
use crate::fca::cxt::to_cxt;
use crate::report::{emit_dot, emit_json, emit_text, sections, DotOptions, Section, TextOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ANALYSIS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "xray", version, about = "X-Ray views of Java classes through formal concept analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analyse one class found in the given source files.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, clap::Args)]
struct AnalyzeArgs {
    /// Java source files.
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Class to analyse (default: the single most-derived non-driver class).
    #[arg(long = "class", value_name = "NAME")]
    class: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Sections to show; repeatable.
    #[arg(long = "view", value_enum)]
    views: Vec<ViewArg>,
    /// Relation used as the incidence of the reported lattice.
    #[arg(long, value_enum, default_value_t = ModeArg::Uses)]
    mode: ModeArg,
    /// Keep unused attributes and idle methods in dependency universes.
    #[arg(long)]
    include_dead: bool,
    /// Treat superclasses missing from the input as empty classes.
    #[arg(long)]
    allow_external_super: bool,
    /// Also write the formal context in Burmeister format.
    #[arg(long, value_name = "PATH")]
    export_cxt: Option<PathBuf>,
    /// Label DOT nodes only with the objects and properties they introduce.
    #[arg(long)]
    reduced_labels: bool,
    /// Attribute coverage a method needs to count as core.
    #[arg(long, value_name = "FRACTION", default_value_t = 1.0, value_parser = parse_fraction)]
    core_threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ViewArg {
    State,
    Clusters,
    Skeleton,
    Deps,
    Concepts,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Uses,
    Calls,
    Combined,
}

fn parse_fraction(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err("must lie between 0 and 1".into())
    }
}

fn color_enabled() -> bool {
    match std::env::var("XRAY_COLOR").as_deref() {
        Ok("1") => true,
        Ok("0") => false,
        _ => std::io::stdout().is_terminal(),
    }
}

/// Runs the tool and returns its exit code; the report goes to `out`,
/// diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let Command::Analyze(args) = cli.command;

    let mut sources = Vec::with_capacity(args.files.len());
    for path in &args.files {
        match std::fs::read_to_string(path) {
            Ok(text) => sources.push(SourceFile::new(path.display().to_string(), text)),
            Err(e) => {
                let _ = writeln!(err, "error: cannot read {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
    }

    let options = AnalysisOptions {
        focus: args.class.clone(),
        mode: match args.mode {
            ModeArg::Uses => ContextMode::Uses,
            ModeArg::Calls => ContextMode::Calls,
            ModeArg::Combined => ContextMode::Combined,
        },
        include_dead: args.include_dead,
        allow_external_super: args.allow_external_super,
        core_threshold: args.core_threshold,
    };
    let report = match analyze(&sources, &options) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return if e.is_usage_error() { EXIT_USAGE } else { EXIT_ANALYSIS };
        }
    };

    if let Some(path) = &args.export_cxt {
        if let Err(e) = std::fs::write(path, to_cxt(&report.context)) {
            let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
            return EXIT_USAGE;
        }
    }

    let selected: Vec<Section> = if args.views.contains(&ViewArg::All) {
        Vec::new()
    } else {
        args.views
            .iter()
            .map(|v| match v {
                ViewArg::State => Section::State,
                ViewArg::Clusters => Section::Clusters,
                ViewArg::Skeleton => Section::Skeleton,
                ViewArg::Deps => Section::Deps,
                ViewArg::Concepts | ViewArg::All => Section::Concepts,
            })
            .collect()
    };
    let rendered = match args.format {
        Format::Json => emit_json(&report),
        Format::Dot => emit_dot(&report.lattice, &report.class, DotOptions { reduced_labels: args.reduced_labels }),
        Format::Text => emit_text(&report, &TextOptions { color: color_enabled(), sections: sections(&selected) }),
    };
    if let Err(e) = out.write_all(rendered.as_bytes()) {
        let _ = writeln!(err, "error: cannot write output: {e}");
        return EXIT_ANALYSIS;
    }
    EXIT_OK
}
