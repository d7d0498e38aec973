//! `arglab`: solve frameworks, query labelling databases, derive semantics
//! and export SQL.
//!
//! Exit codes: 0 success, 1 parse error, 2 invalid arguments, 3 query static
//! error, 4 evaluation error, 5 query not range-restricted.

use std::collections::BTreeSet;
use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use arglab::catalog;
use arglab::eval::{evaluate_guarded_with, evaluate_with, EvalOptions};
use arglab::format::{parse_af, AfFormat};
use arglab::io::{load_manifest, table_to_csv, table_to_json, table_to_text};
use arglab::query::{check_wellformed, parse_query, QueryExpr};
use arglab::semantics::{explanation_semantics, semantics};
use arglab::sqlgen::{export_schema_sql, translate_query};
use arglab::{
    ArgLabellingTable, Argument, ArgumentationFramework, Database, Error, Label, QueryError,
    SemanticsKind, Sense,
};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "arglab", version, about = "Argumentation labellings as a relational database")]
struct Cli {
    /// Output format for result tables.
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    format: OutFormat,

    /// Label sense: strong uses in/out/und, weak uses in/lc.
    #[arg(long, global = true, value_enum, default_value_t = LabelSense::Strong)]
    labels: LabelSense,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum LabelSense {
    Strong,
    Weak,
}

impl From<LabelSense> for Sense {
    fn from(s: LabelSense) -> Sense {
        match s {
            LabelSense::Strong => Sense::Strong,
            LabelSense::Weak => Sense::Weak,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SemanticsArg {
    Admissible,
    Complete,
    Preferred,
    Grounded,
    Stable,
}

impl From<SemanticsArg> for SemanticsKind {
    fn from(s: SemanticsArg) -> SemanticsKind {
        match s {
            SemanticsArg::Admissible => SemanticsKind::Admissible,
            SemanticsArg::Complete => SemanticsKind::Complete,
            SemanticsArg::Preferred => SemanticsKind::Preferred,
            SemanticsArg::Grounded => SemanticsKind::Grounded,
            SemanticsArg::Stable => SemanticsKind::Stable,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AfFormatArg {
    Tgf,
    Apx,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    /// Guarded when the query is range-restricted, naive otherwise.
    Auto,
    Naive,
    Guarded,
}

#[derive(Clone, Copy, ValueEnum)]
enum DeriveKind {
    Stable,
    Preferred,
    Grounded,
    Partial,
    Dependent,
    Explanation,
    MultiAgent,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a semantics of a framework file as a table.
    Solve {
        /// Framework in TGF (.tgf) or APX (.apx).
        af: PathBuf,
        #[arg(long, value_enum)]
        semantics: SemanticsArg,
        /// Overrides detection by file extension.
        #[arg(long, value_enum)]
        af_format: Option<AfFormatArg>,
        /// Table name recorded in JSON output (defaults to the semantics).
        #[arg(long)]
        name: Option<String>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Evaluate a query against a database manifest.
    Query {
        manifest: PathBuf,
        #[command(flatten)]
        query: QuerySource,
        #[arg(long, value_enum, default_value_t = Engine::Auto)]
        engine: Engine,
        /// Membership only for labellings over a table's full header.
        #[arg(long)]
        strict_membership: bool,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Build and evaluate a query for a derived semantics.
    Derive(DeriveArgs),
    /// Write the database (and optionally a query) as SQL.
    ExportSql {
        manifest: PathBuf,
        #[command(flatten)]
        query: OptionalQuery,
        /// Where the translated query goes (default: after the dump).
        #[arg(long)]
        query_out: Option<PathBuf>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Read queries line by line and print their results.
    Repl { manifest: PathBuf },
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["query", "query_file"])))]
struct QuerySource {
    /// Query text.
    #[arg(long)]
    query: Option<String>,
    /// File holding one query.
    #[arg(long)]
    query_file: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("optional_source").args(["query", "query_file"])))]
struct OptionalQuery {
    #[arg(long)]
    query: Option<String>,
    #[arg(long)]
    query_file: Option<PathBuf>,
}

#[derive(Args)]
struct DeriveArgs {
    #[arg(value_enum)]
    kind: DeriveKind,
    /// Database manifest (all kinds except explanation).
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Source table (stable, preferred, grounded, partial, dependent).
    #[arg(long)]
    table: Option<String>,
    /// Comma-separated arguments to keep (partial).
    #[arg(long, value_delimiter = ',')]
    cols: Vec<String>,
    /// Required labels as arg=label, comma-separated (dependent).
    #[arg(long, value_delimiter = ',')]
    constrain: Vec<String>,
    /// Table of labelling fragments to agree with (dependent).
    #[arg(long)]
    fragments: Option<String>,
    /// Comma-separated agent tables whose headers partition the global one
    /// (multi-agent).
    #[arg(long, value_delimiter = ',')]
    parts: Vec<String>,
    /// Table the joined labellings must belong to (multi-agent).
    #[arg(long)]
    membership: Option<String>,
    /// Framework file (explanation).
    #[arg(long)]
    af: Option<PathBuf>,
    /// Argument to explain (explanation).
    #[arg(long)]
    target: Option<String>,
    /// Also print the generated query to standard error.
    #[arg(long)]
    emit_query: bool,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

fn query_code(e: &QueryError) -> u8 {
    match e {
        QueryError::Unguarded(_) => 5,
        QueryError::UniverseTooLarge(_) => 4,
        _ => 3,
    }
}

impl From<QueryError> for Failure {
    fn from(e: QueryError) -> Self {
        Failure {
            code: query_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Syntax { .. }
            | Error::Json(_)
            | Error::Csv(_)
            | Error::InvalidArgumentId(_)
            | Error::UnknownLabel(_) => 1,
            Error::Query(q) => query_code(q),
            Error::TooLarge(_) => 4,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn write_output(out: Option<&Path>, text: &str) -> CliResult {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::usage(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            // a closed pipe is not worth reporting
            let _ = stdout.write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn render(format: OutFormat, name: &str, labels: &[Label], table: &ArgLabellingTable) -> CliResult<String> {
    Ok(match format {
        OutFormat::Json => table_to_json(name, labels, table),
        OutFormat::Csv => table_to_csv(table)?,
        OutFormat::Text => table_to_text(table),
    })
}

fn load_af(path: &Path, format: Option<AfFormatArg>) -> CliResult<ArgumentationFramework> {
    let format = match format {
        Some(AfFormatArg::Tgf) => AfFormat::Tgf,
        Some(AfFormatArg::Apx) => AfFormat::Apx,
        None => AfFormat::from_extension(path).ok_or_else(|| {
            Failure::usage(format!(
                "{}: cannot tell the format from the extension; use --af-format",
                path.display()
            ))
        })?,
    };
    Ok(parse_af(&read_file(path)?, format)?)
}

fn load_db(path: &Path) -> CliResult<Database> {
    Ok(load_manifest(path)?)
}

fn run_query(q: &QueryExpr, db: &Database, engine: Engine, opts: EvalOptions) -> CliResult<ArgLabellingTable> {
    let guarded = match engine {
        Engine::Naive => false,
        Engine::Guarded => true,
        Engine::Auto => check_wellformed(q, db.schema())?.range_restricted(),
    };
    Ok(if guarded {
        evaluate_guarded_with(q, db, opts)?
    } else {
        evaluate_with(q, db, opts)?
    })
}

fn report_rows(t: &ArgLabellingTable) {
    let n = t.len();
    eprintln!("{n} row{}", if n == 1 { "" } else { "s" });
}

fn cmd_solve(
    cli: &Cli,
    af: &Path,
    kind: SemanticsArg,
    af_format: Option<AfFormatArg>,
    name: Option<&str>,
    out: Option<&Path>,
) -> CliResult {
    let framework = load_af(af, af_format)?;
    let kind = SemanticsKind::from(kind);
    let sense = match kind {
        SemanticsKind::Admissible => Sense::Weak,
        _ => cli.labels.into(),
    };
    let table = semantics(&framework, kind, sense);
    report_rows(&table);
    let text = render(cli.format, name.unwrap_or(kind.name()), sense.labels(), &table)?;
    write_output(out, &text)
}

fn query_text(query: Option<&str>, file: Option<&Path>) -> CliResult<Option<String>> {
    match (query, file) {
        (Some(q), _) => Ok(Some(q.to_string())),
        (None, Some(p)) => Ok(Some(read_file(p)?)),
        (None, None) => Ok(None),
    }
}

fn cmd_query(
    cli: &Cli,
    manifest: &Path,
    source: &QuerySource,
    engine: Engine,
    strict: bool,
    out: Option<&Path>,
) -> CliResult {
    let db = load_db(manifest)?;
    let text = query_text(source.query.as_deref(), source.query_file.as_deref())?.expect("clap requires a query");
    let q = parse_query(&text, db.schema())?;
    let opts = EvalOptions {
        strict_membership: strict,
    };
    let table = run_query(&q, &db, engine, opts)?;
    report_rows(&table);
    write_output(out, &render(cli.format, "result", db.schema().labels(), &table)?)
}

fn need<'a, T>(v: &'a Option<T>, flag: &str, kind: &str) -> CliResult<&'a T> {
    v.as_ref()
        .ok_or_else(|| Failure::usage(format!("`derive {kind}` needs --{flag}")))
}

fn parse_args(ids: &[String]) -> CliResult<BTreeSet<Argument>> {
    ids.iter()
        .map(|s| Argument::new(s.trim()).map_err(Failure::from))
        .collect()
}

fn parse_constraint(s: &str) -> CliResult<(Argument, Label)> {
    let (a, l) = s
        .split_once('=')
        .ok_or_else(|| Failure::usage(format!("constraint `{s}` is not of the form arg=label")))?;
    let arg = Argument::new(a.trim())?;
    let label = l
        .trim()
        .parse::<Label>()
        .map_err(|e| Failure::usage(e.to_string()))?;
    Ok((arg, label))
}

fn kind_name(kind: DeriveKind) -> &'static str {
    match kind {
        DeriveKind::Stable => "stable",
        DeriveKind::Preferred => "preferred",
        DeriveKind::Grounded => "grounded",
        DeriveKind::Partial => "partial",
        DeriveKind::Dependent => "dependent",
        DeriveKind::Explanation => "explanation",
        DeriveKind::MultiAgent => "multi-agent",
    }
}

fn cmd_derive(cli: &Cli, d: &DeriveArgs) -> CliResult {
    let name = kind_name(d.kind);
    let (db, q) = if let DeriveKind::Explanation = d.kind {
        // admissible labellings of the target's attacker closure, then the
        // rows that accept the target
        let af = load_af(need(&d.af, "af", name)?, None)?;
        let target = Argument::new(need(&d.target, "target", name)?)?;
        let relevant = af.relevance_set(&target)?;
        let base = semantics(&af.restrict(&relevant)?, SemanticsKind::Admissible, Sense::Weak);
        let db = Database::new(Sense::Weak.labels().to_vec(), [("relevant".to_string(), base)])?;
        let q = catalog::build_dependent_query(db.schema(), "relevant", &[(target.clone(), Label::In)])?;
        debug_assert_eq!(
            arglab::eval::evaluate_guarded(&q, &db).ok(),
            explanation_semantics(&af, &target).ok()
        );
        (db, q)
    } else {
        let db = load_db(need(&d.manifest, "manifest", name)?)?;
        let s = db.schema();
        let table = || need(&d.table, "table", name);
        let q = match d.kind {
            DeriveKind::Stable => catalog::build_stable_query(s, table()?)?,
            DeriveKind::Preferred => catalog::build_preferred_query(s, table()?)?,
            DeriveKind::Grounded => catalog::build_grounded_query(s, table()?)?,
            DeriveKind::Partial => {
                if d.cols.is_empty() {
                    return Err(Failure::usage("`derive partial` needs --cols"));
                }
                catalog::build_partial_query(s, table()?, &parse_args(&d.cols)?)?
            }
            DeriveKind::Dependent => match &d.fragments {
                Some(f) if d.constrain.is_empty() => catalog::build_dependent_table_query(s, table()?, f)?,
                Some(_) => {
                    return Err(Failure::usage("use either --constrain or --fragments, not both"))
                }
                None => {
                    let cs = d
                        .constrain
                        .iter()
                        .map(|c| parse_constraint(c))
                        .collect::<CliResult<Vec<_>>>()?;
                    catalog::build_dependent_query(s, table()?, &cs)?
                }
            },
            DeriveKind::MultiAgent => {
                if d.parts.is_empty() {
                    return Err(Failure::usage("`derive multi-agent` needs --parts"));
                }
                let parts: Vec<&str> = d.parts.iter().map(String::as_str).collect();
                catalog::build_join_query(s, &parts, need(&d.membership, "membership", name)?)?
            }
            DeriveKind::Explanation => unreachable!("handled above"),
        };
        (db, q)
    };
    if d.emit_query {
        eprintln!("{q}");
    }
    let table = arglab::eval::evaluate_guarded(&q, &db)?;
    report_rows(&table);
    write_output(d.out.as_deref(), &render(cli.format, name, db.schema().labels(), &table)?)
}

fn cmd_export_sql(
    manifest: &Path,
    query: &OptionalQuery,
    query_out: Option<&Path>,
    out: Option<&Path>,
) -> CliResult {
    let db = load_db(manifest)?;
    let mut dump = export_schema_sql(&db);
    if let Some(text) = query_text(query.query.as_deref(), query.query_file.as_deref())? {
        let q = parse_query(&text, db.schema())?;
        let sql = translate_query(&q, db.schema())?;
        match query_out {
            Some(p) => write_output(Some(p), &sql)?,
            None => {
                dump.push('\n');
                dump.push_str(&sql);
            }
        }
    } else if query_out.is_some() {
        return Err(Failure::usage("--query-out needs --query or --query-file"));
    }
    write_output(out, &dump)
}

fn cmd_repl(manifest: &Path) -> CliResult {
    let db = load_db(manifest)?;
    let stdin = io::stdin();
    let mut stdout = io::stdout();
    for line in stdin.lock().lines() {
        let line = line.map_err(|e| Failure::usage(format!("stdin: {e}")))?;
        let line = line.trim();
        match line {
            "" => continue,
            "\\quit" | "\\q" => break,
            "\\tables" => {
                for name in db.schema().table_names() {
                    let _ = writeln!(stdout, "{name}");
                }
            }
            _ => {
                let result = parse_query(line, db.schema())
                    .map_err(Failure::from)
                    .and_then(|q| run_query(&q, &db, Engine::Auto, EvalOptions::default()));
                match result {
                    Ok(t) => {
                        let _ = write!(stdout, "{}", table_to_text(&t));
                    }
                    Err(f) => eprintln!("error: {}", f.message),
                }
            }
        }
        let _ = stdout.flush();
    }
    Ok(())
}

fn run(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Solve {
            af,
            semantics,
            af_format,
            name,
            out,
        } => cmd_solve(cli, af, *semantics, *af_format, name.as_deref(), out.as_deref()),
        Command::Query {
            manifest,
            query,
            engine,
            strict_membership,
            out,
        } => cmd_query(cli, manifest, query, *engine, *strict_membership, out.as_deref()),
        Command::Derive(d) => cmd_derive(cli, d),
        Command::ExportSql {
            manifest,
            query,
            query_out,
            out,
        } => cmd_export_sql(manifest, query, query_out.as_deref(), out.as_deref()),
        Command::Repl { manifest } => cmd_repl(manifest),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
