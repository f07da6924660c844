//! The `tvq` command line.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::catalog::{self, CatalogEntry};
use crate::cyclotomic::CycloField;
use crate::quantum::QuantumKernel;
use crate::reference::{self, ColumnCheck};
use crate::statesum::{self, InvariantReport, QSpec, Quantity, StateSumError};
use crate::triangulation::{GluingSpec, Triangulation, TriangulationError};

#[derive(Debug, Parser)]
#[command(name = "tvq", version, about = "Exact Turaev-Viro invariants and their summands")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute invariants for one manifold.
    Compute(ComputeArgs),
    /// Reproduce the reference tables for every builtin manifold.
    Tables(RangeArgs),
    /// Check exact identities (and reference values where known).
    Verify(VerifyArgs),
    /// List builtin manifolds.
    Catalog(FormatArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct FormatArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct RangeArgs {
    /// Single value of r.
    #[arg(long = "r", conflicts_with = "r_range")]
    pub r: Option<u32>,
    /// Inclusive range `A:B`.
    #[arg(long = "r-range", value_parser = parse_range)]
    pub r_range: Option<(u32, u32)>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Decimal digits in table and csv output.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..=15))]
    pub digits: u32,
    /// Worker threads; defaults to TVQ_WORKERS or the available parallelism.
    #[arg(long, env = "TVQ_WORKERS", value_parser = clap::value_parser!(u32).range(1..))]
    pub workers: Option<u32>,
}

#[derive(Debug, Clone, Args)]
#[group(id = "source", multiple = false)]
pub struct SourceArgs {
    /// Triangulation file.
    #[arg(long, group = "source")]
    pub input: Option<PathBuf>,
    /// Builtin manifold name, e.g. `L(3,1)` or `L31`.
    #[arg(long, group = "source")]
    pub manifold: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub range: RangeArgs,
    /// Also run the identity checks at q and -q.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Defaults to every builtin manifold.
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub range: RangeArgs,
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected A:B, got {s:?}"))?;
    let a: u32 = a.trim().parse().map_err(|_| format!("invalid bound {a:?}"))?;
    let b: u32 = b.trim().parse().map_err(|_| format!("invalid bound {b:?}"))?;
    Ok((a, b))
}

/// Failure classes, each with its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad input: exit 1.
    Validation(String),
    /// Internal consistency failure: exit 2.
    Internal(String),
    /// An identity or reference check failed: exit 3.
    CheckFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Internal(_) => 2,
            CliError::CheckFailed(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Internal(m) | CliError::CheckFailed(m) => m,
        }
    }
}

impl From<TriangulationError> for CliError {
    fn from(e: TriangulationError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<StateSumError> for CliError {
    fn from(e: StateSumError) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl RangeArgs {
    fn rs(&self) -> Result<Vec<u32>, CliError> {
        let (a, b) = match (self.r, self.r_range) {
            (Some(r), _) => (r, r),
            (None, Some(range)) => range,
            (None, None) => (3, 7),
        };
        if a < 3 || a > b {
            return Err(CliError::Validation(format!(
                "r range {a}:{b} is invalid; need 3 <= A <= B"
            )));
        }
        if b > 40 {
            return Err(CliError::Validation(format!("r = {b} is too large (at most 40)")));
        }
        Ok((a..=b).collect())
    }

    fn workers(&self) -> usize {
        self.workers.map_or_else(statesum::default_workers, |w| w as usize)
    }
}

struct Target {
    name: String,
    tri: Triangulation,
}

fn load(source: &SourceArgs) -> Result<Option<Target>, CliError> {
    if let Some(path) = &source.input {
        let text =
            std::fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        let spec = GluingSpec::parse(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        let tri = Triangulation::build(&spec).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        return Ok(Some(Target {
            name: path.display().to_string(),
            tri,
        }));
    }
    if let Some(name) = &source.manifold {
        let entry = catalog::lookup(name)?;
        return Ok(Some(entry_target(&entry)?));
    }
    Ok(None)
}

fn entry_target(entry: &CatalogEntry) -> Result<Target, CliError> {
    let tri = entry
        .triangulation()
        .map_err(|e| CliError::Internal(format!("builtin {}: {e}", entry.name)))?;
    Ok(Target {
        name: entry.name.to_string(),
        tri,
    })
}

/// Rounds half away from zero to `digits` places; never prints `-0`.
pub fn format_decimal(x: f64, digits: u32) -> String {
    let scale = 10f64.powi(digits as i32);
    let mut y = (x * scale).round() / scale;
    if y == 0.0 {
        y = 0.0;
    }
    format!("{y:.prec$}", prec = digits as usize)
}

fn quantity_json(q: &Quantity) -> Value {
    let poly = match &q.poly {
        Ok(p) => Value::Array(
            p.coeffs
                .iter()
                .map(|c| json!([c.numer().to_string(), c.denom().to_string()]))
                .collect(),
        ),
        Err(_) => Value::Null,
    };
    json!({ "poly": poly, "value_re": q.value.re, "value_im": q.value.im })
}

/// One JSON object per `(manifold, r)`. Polynomial coefficients are
/// `[numerator, denominator]` string pairs, constant term first.
pub fn report_json(manifold: &str, rep: &InvariantReport, extra_checks: &[(String, bool)]) -> Value {
    let mut inv = Map::new();
    for (name, q) in rep.quantities() {
        inv.insert(name.to_string(), quantity_json(q));
    }
    let mut checks = Map::new();
    for (name, ok) in rep.checks.iter().chain(extra_checks) {
        checks.insert(name.clone(), Value::Bool(*ok));
    }
    json!({
        "manifold": manifold,
        "r": rep.r,
        "invariants": inv,
        "checks": checks,
        "colorings": {
            "adm0": rep.sums.adm0,
            "adm1": rep.sums.adm1,
            "admE": rep.sums.adm_e,
        },
    })
}

const CSV_HEADER: &str = "manifold,r,TV_0,TV_0_value,TV_1,TV_1_value,TV_2,TV_2_value,TV*,adm0,adm1,admE";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn report_csv(manifold: &str, rep: &InvariantReport, digits: u32) -> String {
    let mut fields = vec![csv_field(manifold), rep.r.to_string()];
    for q in [&rep.tv0, &rep.tv1, &rep.tv2] {
        fields.push(csv_field(&q.describe()));
        fields.push(format_decimal(q.value.re, digits));
    }
    fields.push(format_decimal(rep.tvstar.value.re, digits));
    fields.extend([rep.sums.adm0, rep.sums.adm1, rep.sums.adm_e].map(|n| n.to_string()));
    fields.join(",")
}

/// Aligned text table in the published layout.
struct TextTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl TextTable {
    fn new(header: &[&str]) -> Self {
        TextTable {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn render(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = String::new();
        for row in std::iter::once(&self.header).chain(&self.rows) {
            let line: Vec<String> = row.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}

fn summand_row(rep: &InvariantReport, digits: u32) -> Vec<String> {
    let mut row = vec![rep.r.to_string()];
    for q in [&rep.tv0, &rep.tv1, &rep.tv2] {
        row.push(q.describe());
        row.push(format!("={}", format_decimal(q.value.re, digits)));
    }
    row.push(format_decimal(rep.tvstar.value.re, digits));
    row
}

const SUMMAND_HEADER: [&str; 8] = ["r", "TV_0", "", "TV_1", "", "TV_2", "", "TV*"];

fn compute_reports(target: &Target, rs: &[u32], workers: usize) -> Result<Vec<InvariantReport>, CliError> {
    rs.iter()
        .map(|&r| Ok(statesum::compute(&target.tri, &QSpec::standard(r)?, workers)?))
        .collect()
}

fn cmd_compute(args: &ComputeArgs, out: &mut String) -> Result<(), CliError> {
    let target =
        load(&args.source)?.ok_or_else(|| CliError::Validation("one of --input or --manifold is required".into()))?;
    let rs = args.range.rs()?;
    let workers = args.range.workers();
    let mut failures = Vec::new();
    let mut table = TextTable::new(&SUMMAND_HEADER);
    if args.range.format == Format::Csv {
        out.push_str(CSV_HEADER);
        out.push('\n');
    }
    for &r in &rs {
        let (rep, extra) = if args.verify {
            let id = statesum::verify_identities(&target.tri, r, workers)?;
            let extra: Vec<(String, bool)> = id.checks.iter().map(|c| (c.name.clone(), c.holds)).collect();
            for c in id.checks.iter().filter(|c| !c.holds) {
                failures.push(format!("r={r}: {} ({} vs {})", c.name, c.lhs, c.rhs));
            }
            (id.standard, extra)
        } else {
            let rep = compute_reports(&target, &[r], workers)?.remove(0);
            (rep, Vec::new())
        };
        for (name, ok) in &rep.checks {
            if !ok {
                failures.push(format!("r={r}: {name}"));
            }
        }
        match args.range.format {
            Format::Table => table.rows.push(summand_row(&rep, args.range.digits)),
            Format::Json => {
                out.push_str(&report_json(&target.name, &rep, &extra).to_string());
                out.push('\n');
            }
            Format::Csv => {
                out.push_str(&report_csv(&target.name, &rep, args.range.digits));
                out.push('\n');
            }
        }
    }
    if args.range.format == Format::Table {
        let _ = writeln!(
            out,
            "{} ({}, {}, H1 = {})",
            target.name,
            plural(target.tri.num_tetrahedra(), "tetrahedron", "tetrahedra"),
            plural(target.tri.num_vertices(), "vertex", "vertices"),
            target.tri.homology_h1()
        );
        out.push_str(&table.render());
        if args.verify {
            let _ = writeln!(
                out,
                "identities: {}",
                if failures.is_empty() { "all hold" } else { "FAILED" }
            );
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::CheckFailed(failures.join("\n")))
    }
}

fn cmd_tables(args: &RangeArgs, out: &mut String) -> Result<(), CliError> {
    let rs = args.rs()?;
    let workers = args.workers();
    let mut failures = Vec::new();
    if args.format == Format::Csv {
        out.push_str(CSV_HEADER);
        out.push('\n');
    }
    for reference in reference::REFERENCES {
        let Ok(entry) = catalog::lookup(reference.manifold) else {
            match args.format {
                Format::Table => {
                    let _ = writeln!(
                        out,
                        "{}: fixture required (not in the builtin catalog)\n",
                        reference.manifold
                    );
                }
                Format::Json => {
                    out.push_str(&json!({ "manifold": reference.manifold, "missing": "fixture required" }).to_string());
                    out.push('\n');
                }
                Format::Csv => {}
            }
            continue;
        };
        let target = entry_target(&entry)?;
        let reports = compute_reports(&target, &rs, workers)?;
        let mut table = TextTable::new(&[&SUMMAND_HEADER[..], &["reference"]].concat());
        for rep in &reports {
            let checks = reference
                .row(rep.r)
                .map(|row| reference::compare(entry.name, rep, row))
                .unwrap_or_default();
            let status = reference_status(&checks);
            for c in checks.iter().filter(|c| !c.passes()) {
                failures.push(format!(
                    "{} r={} {}: got {}, expected {:?}",
                    c.manifold, c.r, c.column, c.computed, c.expected_poly
                ));
            }
            match args.format {
                Format::Table => {
                    let mut row = summand_row(rep, args.digits);
                    row.push(status);
                    table.rows.push(row);
                }
                Format::Json => {
                    let extra: Vec<(String, bool)> = checks
                        .iter()
                        .map(|c| (format!("reference {}", c.column), c.passes()))
                        .collect();
                    out.push_str(&report_json(entry.name, rep, &extra).to_string());
                    out.push('\n');
                }
                Format::Csv => {
                    out.push_str(&report_csv(entry.name, rep, args.digits));
                    out.push('\n');
                }
            }
        }
        if args.format == Format::Table {
            let _ = writeln!(out, "{}", entry.name);
            out.push_str(&table.render());
            out.push('\n');
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::CheckFailed(failures.join("\n")))
    }
}

fn reference_status(checks: &[ColumnCheck]) -> String {
    if checks.is_empty() {
        return "-".into();
    }
    if checks.iter().any(|c| !c.passes()) {
        return "MISMATCH".into();
    }
    let flagged: Vec<&str> = checks
        .iter()
        .filter(|c| !c.reference_consistent)
        .map(|c| c.column)
        .collect();
    if flagged.is_empty() {
        "ok".into()
    } else {
        format!(
            "ok; printed {} polynomial inconsistent, decimal matched",
            flagged.join(", ")
        )
    }
}

fn cmd_verify(args: &VerifyArgs, out: &mut String) -> Result<(), CliError> {
    let rs = args.range.rs()?;
    let workers = args.range.workers();
    let targets: Vec<Target> = match load(&args.source)? {
        Some(t) => vec![t],
        None => catalog::catalog().iter().map(entry_target).collect::<Result<_, _>>()?,
    };
    let mut failures = Vec::new();
    let mut records = Vec::new();
    for &r in &rs {
        let field = CycloField::new(r).map_err(|e| CliError::Internal(e.to_string()))?;
        for (label, kernel) in [
            ("q", QuantumKernel::standard(&field)),
            ("-q", QuantumKernel::mirror(&field)),
        ] {
            let kernel = kernel.map_err(|e| CliError::Internal(e.to_string()))?;
            let scope = format!("weights at u={label}");
            for id in kernel.weight_identities() {
                if !id.holds {
                    failures.push(format!("{scope} r={r}: {}", id.name));
                }
                records.push((scope.clone(), r, id.name, id.holds, String::new()));
            }
        }
    }
    for target in &targets {
        for &r in &rs {
            let id = statesum::verify_identities(&target.tri, r, workers)?;
            for c in &id.checks {
                if !c.holds {
                    failures.push(format!("{} r={r}: {}: {} vs {}", target.name, c.name, c.lhs, c.rhs));
                }
                records.push((target.name.clone(), r, c.name.clone(), c.holds, String::new()));
            }
            for (name, ok) in id.standard.checks.iter().chain(&id.mirror.checks) {
                if !ok {
                    failures.push(format!("{} r={r}: {name}", target.name));
                }
            }
            if let Some(row) = reference::reference_for(&target.name).and_then(|t| t.row(r)) {
                for c in reference::compare(&target.name, &id.standard, row) {
                    if !c.passes() {
                        failures.push(format!(
                            "{} r={r}: {} got {} (={:.4}), expected {:?} = {}",
                            c.manifold, c.column, c.computed, c.computed_value.re, c.expected_poly, c.expected_value
                        ));
                    }
                    let note = if c.reference_consistent {
                        String::new()
                    } else {
                        format!(
                            "printed polynomial {} is inconsistent with printed value {}; computed {} = {}",
                            c.expected_poly.as_deref().unwrap_or("?"),
                            c.expected_value,
                            c.computed,
                            format_decimal(c.computed_value.re, 3)
                        )
                    };
                    records.push((
                        target.name.clone(),
                        r,
                        format!("reference {}", c.column),
                        c.passes(),
                        note,
                    ));
                }
            }
            if args.range.format == Format::Table {
                let _ = writeln!(
                    out,
                    "{} r={r}: adm0={} adm1={} admE={}",
                    target.name, id.standard.sums.adm0, id.standard.sums.adm1, id.standard.sums.adm_e
                );
            }
        }
    }
    match args.range.format {
        Format::Table => {
            for (m, r, name, ok, note) in &records {
                if !note.is_empty() {
                    let _ = writeln!(out, "FLAG {m} r={r} {name}: {note}");
                } else if !ok {
                    let _ = writeln!(out, "FAIL {m} r={r} {name}");
                }
            }
            let passed = records.iter().filter(|x| x.3).count();
            let _ = writeln!(out, "{passed}/{} checks passed", records.len());
        }
        Format::Json => {
            for (m, r, name, ok, note) in &records {
                out.push_str(&json!({ "manifold": m, "r": r, "check": name, "holds": ok, "note": note }).to_string());
                out.push('\n');
            }
        }
        Format::Csv => {
            out.push_str("manifold,r,check,holds,note\n");
            for (m, r, name, ok, note) in &records {
                let _ = writeln!(out, "{},{r},{},{ok},{}", csv_field(m), csv_field(name), csv_field(note));
            }
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::CheckFailed(failures.join("\n")))
    }
}

fn cmd_catalog(args: &FormatArgs, out: &mut String) -> Result<(), CliError> {
    let mut table = TextTable::new(&["name", "tetrahedra", "vertices", "H1", "description"]);
    if args.format == Format::Csv {
        out.push_str("name,tetrahedra,vertices,H1,description\n");
    }
    for entry in catalog::catalog() {
        let target = entry_target(&entry)?;
        let h1 = target.tri.homology_h1();
        if h1 != entry.expected_h1() {
            return Err(CliError::Internal(format!(
                "{}: H1 = {h1}, expected {}",
                entry.name,
                entry.expected_h1()
            )));
        }
        let cells = [
            entry.name.to_string(),
            target.tri.num_tetrahedra().to_string(),
            target.tri.num_vertices().to_string(),
            h1.to_string(),
            entry.description.to_string(),
        ];
        match args.format {
            Format::Table => table.rows.push(cells.to_vec()),
            Format::Json => {
                out.push_str(
                    &json!({
                        "name": cells[0],
                        "tetrahedra": target.tri.num_tetrahedra(),
                        "vertices": target.tri.num_vertices(),
                        "h1": cells[3],
                        "description": cells[4],
                    })
                    .to_string(),
                );
                out.push('\n');
            }
            Format::Csv => {
                let line: Vec<String> = cells.iter().map(|c| csv_field(c)).collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
        }
    }
    if args.format == Format::Table {
        out.push_str(&table.render());
    }
    Ok(())
}

/// Runs a parsed command, returning its standard output text.
pub fn execute(cli: &Cli) -> (String, Result<(), CliError>) {
    let mut out = String::new();
    let res = match &cli.command {
        Command::Compute(a) => cmd_compute(a, &mut out),
        Command::Tables(a) => cmd_tables(a, &mut out),
        Command::Verify(a) => cmd_verify(a, &mut out),
        Command::Catalog(a) => cmd_catalog(a, &mut out),
    };
    (out, res)
}

/// Entry point for the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (out, res) = execute(&cli);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.as_bytes());
    let _ = stdout.flush();
    match res {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

fn plural(n: usize, one: &str, many: &str) -> String {
    format!("{n} {}", if n == 1 { one } else { many })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_rounding() {
        assert_eq!(format_decimal(0.0005, 3), "0.001");
        assert_eq!(format_decimal(-0.0004, 3), "0.000");
        assert_eq!(format_decimal(-1.23449, 3), "-1.234");
        assert_eq!(format_decimal(2.5, 0), "3");
        assert_eq!(format_decimal(-2.5, 0), "-3");
    }

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("3:7"), Ok((3, 7)));
        assert!(parse_range("3-7").is_err());
    }
}
