use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use equijac::deriver::{derive_all, derive_at, Deriver};
use equijac::dsl::{parse_catalog, parse_expr, CovExpr, IdentityRecord, RecordKind};
use equijac::engine::{
    shipped_records, verify_catalog, verify_kummer, verify_records, VerifyOptions,
};
use equijac::eval::Evaluator;
use equijac::formal::{effective_terms, rank_check, RelationRows};
use equijac::rational::{parse_rational, Rational};
use equijac::{pole_orders, verify_table, AtomRegistry, VerificationReport, REPORT_SCHEMA};

/// Default seed for rank sampling.
const DEFAULT_SEED: u64 = 1;

#[derive(Parser)]
#[command(
    name = "equijac",
    version,
    about = "Exact identities of a genus-2 Jacobian"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the quadratic relations of a catalog.
    Verify {
        #[arg(long)]
        catalog: Option<PathBuf>,
        /// Only records filed at this grade, as `div,diag`.
        #[arg(long, value_parser = parse_grade)]
        grade: Option<(i64, i64)>,
        /// Check every orbit component, not only the highest weight.
        #[arg(long)]
        orbit: bool,
        /// Count audit-repaired records as passing.
        #[arg(long)]
        allow_repairs: bool,
    },
    /// Verify one record and show its audit.
    Audit {
        #[arg(long)]
        id: String,
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Derive relations by pole-graded linear algebra. Without options the
    /// whole ladder is derived and counted.
    Derive {
        #[arg(long, requires = "grade")]
        dim: Option<usize>,
        #[arg(long, value_parser = parse_grade, requires = "dim")]
        grade: Option<(i64, i64)>,
    },
    /// Pole orders of the symmetric product table.
    Table,
    /// Pole orders of one expression.
    Poles { expr: String },
    /// Rank of the relations as quadratic forms at sampled curves.
    Rank {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// File holding the seven curve coefficients g0..g6.
        #[arg(long)]
        curve: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        trials: usize,
    },
    /// Verify the Kummer quartic and its precursor relations.
    Kummer {
        #[arg(long)]
        allow_repairs: bool,
    },
}

enum Failure {
    Parse(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
}

fn internal(e: impl std::fmt::Display) -> Failure {
    Failure::Internal(e.to_string())
}

fn parse_grade(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `div,diag`, got {s:?}"))?;
    let p = |x: &str| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}"));
    Ok((p(a)?, p(b)?))
}

/// Seven rationals separated by commas or whitespace, optionally bracketed.
fn parse_curve(text: &str) -> Result<[Rational; 7], String> {
    let body = text.trim().trim_start_matches('[').trim_end_matches(']');
    let values = body
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| parse_rational(s).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    let n = values.len();
    values
        .try_into()
        .map_err(|_| format!("expected 7 curve coefficients, found {n}"))
}

fn load_catalog(path: Option<&Path>) -> Result<Vec<IdentityRecord>, Failure> {
    let Some(path) = path else {
        return Ok(shipped_records());
    };
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    parse_catalog(&text)
        .map_err(|(line, e)| Failure::Parse(format!("{}:{line}: {e}", path.display())))
}

fn registry() -> Result<AtomRegistry, Failure> {
    AtomRegistry::build().map_err(internal)
}

/// Writes the report; a closed pipe downstream is not an error.
fn emit(format: Format, text: &str, value: Value) {
    let out = match format {
        Format::Text => text.to_string(),
        Format::Json => serde_json::to_string_pretty(&value).expect("json") + "\n",
    };
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
}

fn emit_report(format: Format, report: &VerificationReport) {
    let value = serde_json::to_value(report.to_json()).expect("report serializes");
    emit(format, &report.to_string(), value);
}

fn verify(
    format: Format,
    catalog: Option<&Path>,
    grade: Option<(i64, i64)>,
    opts: VerifyOptions,
    allow_repairs: bool,
) -> Result<bool, Failure> {
    let mut records = load_catalog(catalog)?;
    if let Some(g) = grade {
        records.retain(|r| r.grade == g);
    }
    let reg = registry()?;
    let report = verify_catalog(&reg, &records, opts);
    emit_report(format, &report);
    Ok(report.all_pass(allow_repairs))
}

fn audit(format: Format, id: &str, catalog: Option<&Path>) -> Result<bool, Failure> {
    let records = load_catalog(catalog)?;
    let rec = records
        .iter()
        .find(|r| r.id == id)
        .ok_or_else(|| Failure::Parse(format!("no record with id {id}")))?;
    let reg = registry()?;
    let report = verify_records(&reg, std::slice::from_ref(rec), VerifyOptions::default());
    let outcome = &report.records[0];
    let mut text = format!("{outcome}\n");
    if let Some(n) = outcome.nullspace_dim {
        text += &format!("nullspace_dim={n}\n");
    }
    for d in report.discrepancies.iter().filter(|d| d.subject == id) {
        text += &format!("discrepancy {}: {}\n", d.subject, d.message);
    }
    let mut value = serde_json::to_value(report.to_json()).expect("report serializes");
    value["nullspace_dim"] = json!(outcome.nullspace_dim);
    emit(format, &text, value);
    Ok(outcome.status.holds())
}

fn relation_text(r: &[(Rational, CovExpr)]) -> String {
    format!("{} = 0", CovExpr::from_summands(r))
}

fn derive(format: Format, dim: Option<usize>, grade: Option<(i64, i64)>) -> Result<bool, Failure> {
    let reg = registry()?;
    if let (Some(n), Some(g)) = (dim, grade) {
        let d = Deriver::new(&reg).map_err(internal)?;
        let rels = derive_at(&d, n, g).map_err(|e| Failure::Parse(e.to_string()))?;
        let lines: Vec<String> = rels.iter().map(|r| relation_text(r)).collect();
        let mut text = format!(
            "dim={n} grade=({},{}) relations={}\n",
            g.0,
            g.1,
            lines.len()
        );
        for l in &lines {
            text += &format!("  {l}\n");
        }
        emit(
            format,
            &text,
            json!({"schema": REPORT_SCHEMA, "dim": n, "grade": g, "relations": lines}),
        );
        return Ok(true);
    }
    let report = derive_all(&reg).map_err(internal)?;
    let mut text = String::new();
    let mut grades = Vec::new();
    for g in &report.grades {
        text += &format!(
            "grade=({},{}) new={}\n",
            g.grade.0, g.grade.1, g.scalar_count
        );
        let rels: Vec<Value> = g
            .relations
            .iter()
            .map(|(n, r)| {
                text += &format!("  dim={n} {}\n", relation_text(r));
                json!({"dim": n, "relation": relation_text(r)})
            })
            .collect();
        grades.push(json!({"grade": g.grade, "count": g.scalar_count, "relations": rels}));
    }
    let profile = report.profile();
    text += &format!(
        "total={} profile={} max_g_degree={}\n",
        report.total(),
        join(&profile),
        report.max_g_degree
    );
    emit(
        format,
        &text,
        json!({
            "schema": REPORT_SCHEMA,
            "grades": grades,
            "total": report.total(),
            "profile": profile,
            "max_g_degree": report.max_g_degree,
        }),
    );
    Ok(true)
}

fn join(xs: &[usize]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn table(format: Format) -> Result<bool, Failure> {
    let reg = registry()?;
    let t = verify_table(&reg).map_err(internal)?;
    let mut text = String::new();
    let mut classes = Vec::new();
    for (name, p, printed) in &t.classes {
        text += &format!(
            "class {name} computed={p} printed=({},{})\n",
            printed.0, printed.1
        );
        classes.push(json!({"name": name, "computed": [p.div, p.diag], "printed": printed}));
    }
    let mut cells = Vec::new();
    for cell in &t.cells {
        let parts: Vec<String> = cell
            .components
            .iter()
            .map(|c| match c.computed {
                Some(p) => format!("{}:{p}", c.dim),
                None => format!("{}:0", c.dim),
            })
            .collect();
        text += &format!("{} {}\n", cell.label(), parts.join(" "));
        let comps: Vec<Value> = cell
            .components
            .iter()
            .map(|c| {
                json!({
                    "dim": c.dim,
                    "computed": c.computed.map(|p| [p.div, p.diag]),
                    "printed": c.printed,
                    "top_is_product": c.top_is_product,
                })
            })
            .collect();
        cells.push(json!({"row": cell.row, "col": cell.col, "components": comps}));
    }
    for d in &t.discrepancies {
        text += &format!("discrepancy {}: {}\n", d.subject, d.message);
    }
    emit(
        format,
        &text,
        json!({
            "schema": REPORT_SCHEMA,
            "classes": classes,
            "cells": cells,
            "discrepancies": t.discrepancies,
        }),
    );
    // Cells and coordinate classes must match; the invariant class is
    // reported, not asserted.
    Ok(t.discrepancies.iter().all(|d| d.subject == "I"))
}

fn poles(format: Format, src: &str) -> Result<bool, Failure> {
    let expr = parse_expr(src).map_err(|e| Failure::Parse(e.to_string()))?;
    let reg = registry()?;
    let value = Evaluator::new(&reg).eval(&expr).map_err(internal)?;
    if value.is_zero() {
        emit(format, "zero\n", json!({"expr": src, "zero": true}));
        return Ok(true);
    }
    let p = pole_orders(&value).map_err(internal)?;
    emit(
        format,
        &format!("div={} diag={}\n", p.div, p.diag),
        json!({"expr": src, "zero": false, "div": p.div, "diag": p.diag}),
    );
    Ok(true)
}

fn rank(format: Format, seed: u64, curve: Option<&Path>, trials: usize) -> Result<bool, Failure> {
    let curve = match curve {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
            Some(parse_curve(&text).map_err(Failure::Parse)?)
        }
        None => None,
    };
    let reg = registry()?;
    let records: Vec<IdentityRecord> = shipped_records()
        .into_iter()
        .filter(|r| r.kind == RecordKind::Quadratic)
        .collect();
    let report = verify_catalog(&reg, &records, VerifyOptions::default());
    let mut rels = Vec::new();
    for (rec, o) in records.iter().zip(&report.records) {
        let terms = effective_terms(rec, &o.status)
            .ok_or_else(|| Failure::Internal(format!("{} does not hold", rec.id)))?;
        rels.push((rec.clone(), terms));
    }
    let rows = RelationRows::build(&reg, &rels).map_err(internal)?;
    let r = rank_check(&rows, seed, trials, curve.as_ref(), &[(6, 4)]).map_err(internal)?;
    let mut text = String::new();
    for t in &r.trials {
        let blocks: Vec<String> = t
            .block_ranks
            .iter()
            .map(|(g, n)| format!("block({},{})={n}", g.0, g.1))
            .collect();
        text += &format!(
            "seed={} samples={} rank={} {}\n",
            t.seed,
            t.samples.len(),
            t.rank,
            blocks.join(" ")
        );
    }
    let min_rank = r.trials.iter().map(|t| t.rank).min().unwrap_or(0);
    text += &format!("rank={min_rank} profile={}\n", join(&r.profile));
    let trials_json: Vec<Value> = r
        .trials
        .iter()
        .map(|t| {
            json!({
                "seed": t.seed,
                "rank": t.rank,
                "samples": t.samples.iter()
                    .map(|g| g.iter().map(|c| c.to_string()).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
                "block_ranks": t.block_ranks,
            })
        })
        .collect();
    emit(
        format,
        &text,
        json!({
            "schema": REPORT_SCHEMA,
            "expected": r.expected,
            "rank": min_rank,
            "profile": r.profile,
            "trials": trials_json,
        }),
    );
    Ok(r.passes())
}

fn kummer(format: Format, allow_repairs: bool) -> Result<bool, Failure> {
    let reg = registry()?;
    let report = verify_kummer(&reg, &shipped_records());
    emit_report(format, &report);
    Ok(report.all_pass(allow_repairs))
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let f = cli.format;
    match cli.command {
        Command::Verify {
            catalog,
            grade,
            orbit,
            allow_repairs,
        } => verify(
            f,
            catalog.as_deref(),
            grade,
            VerifyOptions { orbit },
            allow_repairs,
        ),
        Command::Audit { id, catalog } => audit(f, &id, catalog.as_deref()),
        Command::Derive { dim, grade } => derive(f, dim, grade),
        Command::Table => table(f),
        Command::Poles { expr } => poles(f, &expr),
        Command::Rank {
            seed,
            curve,
            trials,
        } => rank(f, seed, curve.as_deref(), trials),
        Command::Kummer { allow_repairs } => kummer(f, allow_repairs),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            match &e {
                Failure::Parse(m) => eprintln!("error: {m}"),
                Failure::Internal(m) => eprintln!("internal error: {m}"),
            }
            ExitCode::from(e.code())
        }
    }
}
