//! The `agcolor` command line.
//!
//! Exit codes: 0 success, 1 a requested check failed, 2 usage or input
//! error, 3 search budget exhausted before an exact answer.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bounds;
use crate::colorings::{self, Coloring, Method};
use crate::field::{Field, FieldDescriptor};
use crate::manifest::RunManifest;
use crate::oracle::{self, Budget, Index, IntersectionGraph};
use crate::space::AffineSpace;
use crate::verify::{self, Check};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Environment variable holding the default oracle budget in seconds.
pub const BUDGET_ENV: &str = "AGCOLOR_BUDGET";
const DEFAULT_BUDGET_SECS: f64 = 60.0;

#[derive(Parser, Debug)]
#[command(
    name = "agcolor",
    version,
    about = "Line colorings of finite affine spaces AG(n,q)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a coloring and write it as JSON.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, value_parser = parse_method)]
        method: Method,
        /// Output file; a manifest is written next to it. Prints to stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a coloring file and report.
    Verify {
        #[arg(long)]
        coloring: PathBuf,
        /// Comma-separated subset of proper,complete.
        #[arg(long, value_delimiter = ',', default_value = "complete")]
        check: Vec<Check>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bounds for one space.
    Bounds {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Bounds for a grid of spaces.
    Table {
        /// Comma-separated prime powers.
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<u64>,
        /// Inclusive range `a..b` or a comma-separated list.
        #[arg(long, value_parser = parse_range)]
        n: DimRange,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact index of AG(n,q) or of a JSON list of point-id lists.
    Oracle {
        #[arg(long, requires = "q", conflicts_with = "lines")]
        n: Option<usize>,
        #[arg(long, requires = "n")]
        q: Option<u64>,
        #[arg(long)]
        lines: Option<PathBuf>,
        #[arg(long, value_parser = parse_index)]
        index: Index,
        /// Time budget in seconds.
        #[arg(long, env = BUDGET_ENV)]
        budget: Option<f64>,
        /// Node budget; reproducible across machines.
        #[arg(long)]
        max_nodes: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Debug)]
struct DimRange(Vec<u32>);

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse()
}

fn parse_index(s: &str) -> Result<Index, String> {
    s.parse()
}

fn parse_range(s: &str) -> Result<DimRange, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<u32>()
            .map_err(|_| format!("bad dimension {t:?}"))
    };
    if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
        if a > b {
            return Err(format!("empty range {s:?}"));
        }
        return Ok(DimRange((a..=b).collect()));
    }
    s.split(',')
        .map(num)
        .collect::<Result<_, _>>()
        .map(DimRange)
}

struct Failure {
    code: i32,
    message: String,
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: e.to_string(),
    }
}

type Outcome = Result<i32, Failure>;

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let arguments: Vec<String> = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let result = match cli.command {
        Command::Construct { n, q, method, out } => {
            construct(n, q, method, out.as_deref(), &arguments, stdout)
        }
        Command::Verify {
            coloring,
            check,
            out,
        } => verify(&coloring, &check, out.as_deref(), &arguments, stdout),
        Command::Bounds { n, q, format } => bounds_cmd(n, q, format, stdout),
        Command::Table { q, n, format, out } => {
            table(&n.0, &q, format, out.as_deref(), &arguments, stdout)
        }
        Command::Oracle {
            n,
            q,
            lines,
            index,
            budget,
            max_nodes,
            out,
        } => {
            let budget = Budget {
                max_nodes,
                max_time: match (budget, max_nodes) {
                    (Some(s), _) => Some(std::time::Duration::from_secs_f64(s.max(0.0))),
                    (None, Some(_)) => None,
                    (None, None) => Some(std::time::Duration::from_secs_f64(DEFAULT_BUDGET_SECS)),
                },
            };
            oracle_cmd(
                n.zip(q),
                lines.as_deref(),
                index,
                budget,
                out.as_deref(),
                &arguments,
                stdout,
            )
        }
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn field_of(q: u64) -> Result<Field, Failure> {
    Field::of_order(q).map_err(usage)
}

/// Writes `text` to `out` with a manifest beside it, or to stdout.
fn emit(
    text: &str,
    out: Option<&Path>,
    command: &str,
    arguments: &[String],
    field: Option<FieldDescriptor>,
    stdout: &mut dyn Write,
) -> Result<(), Failure> {
    let io = |e: std::io::Error| usage(format!("cannot write output: {e}"));
    match out {
        None => stdout.write_all(text.as_bytes()).map_err(io),
        Some(path) => {
            std::fs::write(path, text).map_err(io)?;
            let mut manifest = RunManifest::new(command, arguments.to_vec(), field);
            manifest.record(path, text.as_bytes());
            std::fs::write(RunManifest::path_for(path), manifest.to_json_string()).map_err(io)
        }
    }
}

fn construct(
    n: usize,
    q: u64,
    method: Method,
    out: Option<&Path>,
    arguments: &[String],
    stdout: &mut dyn Write,
) -> Outcome {
    let field = field_of(q)?;
    let (space, coloring) = colorings::construct(method, n, &field).map_err(usage)?;
    let text = coloring.to_json_string(&space);
    emit(
        &text,
        out,
        "construct",
        arguments,
        Some(field.descriptor()),
        stdout,
    )?;
    if let Some(path) = out {
        let _ = writeln!(
            stdout,
            "{} on AG({n},{q}): {} classes -> {}",
            method,
            coloring.class_count(),
            path.display()
        );
    }
    Ok(EXIT_OK)
}

fn load_coloring(path: &Path) -> Result<(Coloring, AffineSpace), Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Coloring::from_json_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn verify(
    path: &Path,
    checks: &[Check],
    out: Option<&Path>,
    arguments: &[String],
    stdout: &mut dyn Write,
) -> Outcome {
    let (coloring, space) = load_coloring(path)?;
    let report = verify::verify_coloring(&space, &coloring, checks);
    emit(
        &report.to_json_string(),
        out,
        "verify",
        arguments,
        Some(coloring.space.field.clone()),
        stdout,
    )?;
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

fn bounds_cmd(n: u32, q: u64, format: Format, stdout: &mut dyn Write) -> Outcome {
    let row = bounds::bounds_row(n, q).map_err(usage)?;
    let text = match format {
        Format::Csv => bounds::to_csv(&[row]),
        Format::Json => serde_json::to_string_pretty(&row).expect("serializable") + "\n",
    };
    stdout.write_all(text.as_bytes()).map_err(usage)?;
    Ok(EXIT_OK)
}

fn table(
    ns: &[u32],
    qs: &[u64],
    format: Format,
    out: Option<&Path>,
    arguments: &[String],
    stdout: &mut dyn Write,
) -> Outcome {
    let rows = bounds::bounds_table(ns, qs).map_err(usage)?;
    let text = match format {
        Format::Csv => bounds::to_csv(&rows),
        Format::Json => serde_json::to_string_pretty(&rows).expect("serializable") + "\n",
    };
    emit(&text, out, "table", arguments, None, stdout)?;
    Ok(if rows.iter().all(|r| r.is_consistent()) {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

fn oracle_cmd(
    space: Option<(usize, u64)>,
    lines: Option<&Path>,
    index: Index,
    budget: Budget,
    out: Option<&Path>,
    arguments: &[String],
    stdout: &mut dyn Write,
) -> Outcome {
    let (point_sets, labels, field): (Vec<Vec<u32>>, Option<Vec<String>>, _) = match (space, lines)
    {
        (Some((n, q)), None) => {
            let field = field_of(q)?;
            let space = AffineSpace::new(n, &field).map_err(usage)?;
            let labels = (0..space.num_lines()).map(|l| space.line_id(l)).collect();
            (
                space.line_point_sets(),
                Some(labels),
                Some(field.descriptor()),
            )
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let sets = serde_json::from_str(&text)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            (sets, None, None)
        }
        _ => return Err(usage("give either --n and --q, or --lines")),
    };
    let graph = IntersectionGraph::from_point_sets(&point_sets).map_err(usage)?;
    let result = oracle::exact_index(&graph, index, budget);
    let witness: Vec<Vec<Value>> = result
        .witness
        .iter()
        .map(|class| {
            class
                .iter()
                .map(|&l| labels.as_ref().map_or_else(|| json!(l), |ls| json!(ls[l])))
                .collect()
        })
        .collect();
    let report = json!({
        "index": result.index,
        "lines": graph.len(),
        "value": result.value(),
        "lower": result.lower,
        "upper": result.upper,
        "exact": result.exact,
        "nodes": result.nodes,
        "witness": witness,
    });
    let text = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
    emit(&text, out, "oracle", arguments, field, stdout)?;
    Ok(if result.exact { EXIT_OK } else { EXIT_BUDGET })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..5").unwrap().0, vec![2, 3, 4, 5]);
        assert_eq!(parse_range("2..=3").unwrap().0, vec![2, 3]);
        assert_eq!(parse_range("2,4").unwrap().0, vec![2, 4]);
        assert!(parse_range("5..2").is_err());
    }

    #[test]
    fn usage_error_code() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(
            run(["agcolor", "bounds", "--n", "3"], &mut o, &mut e),
            EXIT_USAGE
        );
    }
}
