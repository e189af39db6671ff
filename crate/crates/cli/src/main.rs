use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sugraph_cli::commands::{
    cmd_accuracy, cmd_diffusion, cmd_ingest, cmd_pairs, cmd_recommend, cmd_release_pairs,
    cmd_stats, CliError, DiffusionArgs, IngestInput, OutputFormat,
};
use sugraph_cli::time::parse_timestamp;
use sugraph_core::{MetricKind, Timestamp};

/// Model a software repository as a universe graph of releases and
/// query its popularity, diffusion, and co-dependency metrics.
#[derive(Parser)]
#[command(name = "sugraph", version, about)]
struct Cli {
    /// Universe snapshot to read (for ingest: the manifest input).
    #[arg(long, global = true, value_name = "PATH")]
    universe: Option<PathBuf>,

    /// Write output here instead of stdout.
    #[arg(short, long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    /// Output format for plot commands.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,

    /// Treat malformed input as fatal instead of a warning.
    #[arg(long, global = true)]
    strict: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Svg,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> OutputFormat {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Svg => OutputFormat::Svg,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Popularity,
    Variety,
}

impl From<KindArg> for MetricKind {
    fn from(k: KindArg) -> MetricKind {
        match k {
            KindArg::Popularity => MetricKind::Popularity,
            KindArg::Variety => MetricKind::Variety,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a canonical universe snapshot from a manifest file or a
    /// tree of POM files.
    Ingest {
        /// Directory walked recursively for pom.xml / *.pom files.
        #[arg(long, value_name = "DIR", conflicts_with = "universe")]
        pom_dir: Option<PathBuf>,
        /// CSV of `path,ISO-timestamp` overriding file modification times.
        #[arg(long, value_name = "CSV", requires = "pom_dir")]
        time_index: Option<PathBuf>,
    },
    /// Popularity/variety step series for selected releases.
    Diffusion {
        /// Release selector `name@release`; repeatable.
        #[arg(long = "release", value_name = "NAME@REL")]
        releases: Vec<String>,
        /// Project label; expands to all of its releases. Repeatable.
        #[arg(long = "project", value_name = "NAME")]
        projects: Vec<String>,
        /// Metric drawn in SVG output (CSV always carries both).
        #[arg(long, value_enum, default_value_t = KindArg::Popularity)]
        kind: KindArg,
        /// Drop samples before this ISO-8601 time.
        #[arg(long, value_name = "TIME")]
        from: Option<String>,
        /// Drop samples after this ISO-8601 time.
        #[arg(long, value_name = "TIME")]
        to: Option<String>,
    },
    /// Pairwise co-dependency intensity over a project set.
    Pairs {
        /// Project label; at least two. Repeatable.
        #[arg(long = "project", value_name = "NAME")]
        projects: Vec<String>,
    },
    /// Release-by-release pairing grid for two projects.
    ReleasePairs {
        /// Project label; exactly two.
        #[arg(long = "project", value_name = "NAME")]
        projects: Vec<String>,
    },
    /// Top-k co-dependency candidates for one project.
    Recommend {
        #[arg(long, value_name = "NAME")]
        anchor: String,
        #[arg(short, default_value_t = 10)]
        k: usize,
    },
    /// Top-k accuracy of recommendations against system profiles.
    Accuracy {
        /// JSONL file: {"system": ..., "libraries": [...]} per line.
        #[arg(long, value_name = "PATH")]
        profiles: PathBuf,
        #[arg(short, default_value_t = 10)]
        k: usize,
    },
    /// Node, project, edge, and reuse counts of a snapshot.
    Stats,
}

fn required_universe(cli: &Cli) -> Result<&PathBuf, CliError> {
    cli.universe
        .as_ref()
        .ok_or_else(|| CliError::Syntax("--universe PATH is required".to_string()))
}

fn csv_only(cli: &Cli, command: &str) -> Result<(), CliError> {
    if cli.format == FormatArg::Svg {
        return Err(CliError::Syntax(format!("{command} emits CSV only")));
    }
    Ok(())
}

fn parse_window(value: &Option<String>) -> Result<Option<Timestamp>, CliError> {
    Ok(match value {
        Some(text) => Some(parse_timestamp(text)?),
        None => None,
    })
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Ingest {
            pom_dir,
            time_index,
        } => {
            let input = match (pom_dir, &cli.universe) {
                (Some(dir), None) => IngestInput::PomDir {
                    dir,
                    time_index: time_index.as_deref(),
                },
                (None, Some(path)) => IngestInput::Universe(path),
                _ => {
                    return Err(CliError::Syntax(
                        "ingest needs exactly one of --universe or --pom-dir".to_string(),
                    ))
                }
            };
            cmd_ingest(input, cli.output.as_deref(), cli.strict)
        }
        Command::Diffusion {
            releases,
            projects,
            kind,
            from,
            to,
        } => cmd_diffusion(&DiffusionArgs {
            universe: required_universe(cli)?,
            releases,
            projects,
            kind: (*kind).into(),
            from: parse_window(from)?,
            to: parse_window(to)?,
            format: cli.format.into(),
            output: cli.output.as_deref(),
        }),
        Command::Pairs { projects } => cmd_pairs(
            required_universe(cli)?,
            projects,
            cli.format.into(),
            cli.output.as_deref(),
        ),
        Command::ReleasePairs { projects } => cmd_release_pairs(
            required_universe(cli)?,
            projects,
            cli.format.into(),
            cli.output.as_deref(),
        ),
        Command::Recommend { anchor, k } => {
            csv_only(cli, "recommend")?;
            cmd_recommend(required_universe(cli)?, anchor, *k, cli.output.as_deref())
        }
        Command::Accuracy { profiles, k } => {
            csv_only(cli, "accuracy")?;
            cmd_accuracy(required_universe(cli)?, profiles, *k, cli.output.as_deref())
        }
        Command::Stats => {
            csv_only(cli, "stats")?;
            cmd_stats(required_universe(cli)?, cli.output.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
