//! Run configuration, the per-degree JSON cache, table emitters, and the
//! comparison against the published census values.
//!
//! Each degree is cached as `degree-NNN.json`. Wall-clock timing goes to a
//! sidecar `degree-NNN.timing.json` so that the main file depends only on
//! the inputs.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::actions::{export_actions, ActionsExport};
use crate::catalog::groups_of_order;
use crate::counts::{analyze_degree, ClassDetail, CountOptions, DegreeReportRow, TypeSummary, COLUMN_NAMES};
use crate::error::{Error, Result};
use crate::holomorph::HolomorphContext;
use crate::perm::{PermGroup, Permutation};
use crate::transitive::SearchBudget;

pub const SCHEMA_VERSION: u32 = 1;
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    #[default]
    Md,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "md" | "markdown" => Ok(Format::Md),
            other => Err(Error::Invalid(format!("unknown format {other:?} (json, csv or md)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub degrees: Vec<usize>,
    pub budget: SearchBudget,
    pub format: Format,
    pub cache_dir: PathBuf,
    pub skip_bc: bool,
    pub skip_ac: bool,
    pub list_classes: bool,
    pub emit_actions: bool,
}

impl RunConfig {
    pub fn new(degrees: Vec<usize>, cache_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            degrees,
            budget: SearchBudget::default(),
            format: Format::default(),
            cache_dir: cache_dir.into(),
            skip_bc: false,
            skip_ac: false,
            list_classes: false,
            emit_actions: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.degrees.is_empty() {
            return Err(Error::Invalid("no degrees requested".into()));
        }
        if let Some(d) = self.degrees.iter().find(|&&d| d < 2) {
            return Err(Error::Invalid(format!("degree {d} is below 2")));
        }
        let b = &self.budget;
        if b.hol_order == 0 || b.nodes == 0 || b.seconds == 0 {
            return Err(Error::Invalid("budgets must be positive".into()));
        }
        Ok(())
    }

    pub fn count_options(&self) -> CountOptions {
        CountOptions {
            budget: self.budget,
            skip_ac: self.skip_ac,
            skip_bc: self.skip_bc,
        }
    }
}

/// Parses `"2-12"`, `"15"` or `"2-5,8,10-11"` into a sorted, deduplicated list.
pub fn parse_degrees(text: &str) -> Result<Vec<usize>> {
    let bad = || Error::Invalid(format!("bad degree list {text:?}"));
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let a: usize = a.trim().parse().map_err(|_| bad())?;
                let b: usize = b.trim().parse().map_err(|_| bad())?;
                if a > b {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Everything persisted for one degree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeResult {
    pub schema_version: u32,
    pub engine_version: String,
    pub degree: usize,
    pub options: CountOptions,
    pub row: DegreeReportRow,
    pub types: Vec<TypeSummary>,
    pub classes: Vec<ClassDetail>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Timing {
    pub degree: usize,
    pub seconds: f64,
}

pub fn compute_degree(degree: usize, opts: &CountOptions) -> Result<DegreeResult> {
    let a = analyze_degree(degree, opts)?;
    Ok(DegreeResult {
        schema_version: SCHEMA_VERSION,
        engine_version: ENGINE_VERSION.to_string(),
        degree,
        options: *opts,
        row: a.row,
        types: a.types,
        classes: a.details,
        notes: a.notes,
    })
}

pub fn result_path(dir: &Path, degree: usize) -> PathBuf {
    dir.join(format!("degree-{degree:03}.json"))
}

pub fn timing_path(dir: &Path, degree: usize) -> PathBuf {
    dir.join(format!("degree-{degree:03}.timing.json"))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    // write-then-rename keeps a concurrent reader from seeing half a file
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Reads a cached result for any options. Files from another schema or
/// engine version are treated as absent.
pub fn load_result(dir: &Path, degree: usize) -> Result<Option<DegreeResult>> {
    let path = result_path(dir, degree);
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let fresh = value.get("schema_version").and_then(|v| v.as_u64()) == Some(SCHEMA_VERSION as u64)
        && value.get("engine_version").and_then(|v| v.as_str()) == Some(ENGINE_VERSION);
    if !fresh {
        return Ok(None);
    }
    Ok(Some(serde_json::from_value(value)?))
}

/// Returns the cached result when it was computed with the same options,
/// otherwise computes and stores it. The flag is true on a cache hit.
pub fn compute_or_load(dir: &Path, degree: usize, opts: &CountOptions) -> Result<(DegreeResult, bool)> {
    if let Some(r) = load_result(dir, degree)? {
        if r.options == *opts {
            return Ok((r, true));
        }
    }
    fs::create_dir_all(dir)?;
    let start = Instant::now();
    let r = compute_degree(degree, opts)?;
    let seconds = start.elapsed().as_secs_f64();
    write_json(&result_path(dir, degree), &r)?;
    write_json(&timing_path(dir, degree), &Timing { degree, seconds })?;
    Ok((r, false))
}

fn cell(v: Option<u64>) -> String {
    v.map_or_else(|| "?".to_string(), |x| x.to_string())
}

const HEADERS: [&str; 9] = [
    "Degree",
    "Types",
    "#HGS",
    "#Sbracoids",
    "#Gal",
    "#Sbraces",
    "AC #HGS",
    "AC #Sbracoids",
    "BC HGS",
];

pub fn to_csv(rows: &[DegreeReportRow]) -> String {
    let mut out = String::from("degree");
    for c in COLUMN_NAMES {
        out.push(',');
        out.push_str(c);
    }
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{r}");
    }
    out
}

pub fn to_markdown(rows: &[DegreeReportRow]) -> String {
    let mut out = format!("| {} |\n", HEADERS.join(" | "));
    out.push('|');
    for _ in HEADERS {
        out.push_str("---|");
    }
    out.push('\n');
    for r in rows {
        let cells: Vec<String> = std::iter::once(r.degree.to_string())
            .chain(r.cells().into_iter().map(cell))
            .collect();
        let _ = writeln!(out, "| {} |", cells.join(" | "));
    }
    out
}

pub fn to_json(results: &[DegreeResult]) -> Result<String> {
    let mut s = serde_json::to_string_pretty(results)?;
    s.push('\n');
    Ok(s)
}

/// Markdown listing of every class with its members.
pub fn class_listing(r: &DegreeResult) -> String {
    let mut out = format!("### Degree {}\n\n", r.degree);
    if r.classes.is_empty() {
        out.push_str("(no classes computed)\n");
    }
    for c in &r.classes {
        let _ = writeln!(
            out,
            "- {} : |G| = {}, |G'| = {}, |Aut(G,G')| = {}, {} HGS",
            c.label, c.order, c.stabilizer_order, c.aut_stab_order, c.hgs
        );
        for m in &c.members {
            let flags = format!(
                "{}{}",
                if m.almost_classical == Some(true) { " AC" } else { "" },
                if m.correspondence.is_some_and(|x| x.is_bijective()) { " BC" } else { "" }
            );
            let _ = writeln!(
                out,
                "  - {} #{}: class size {}, {} HGS{flags}, gens {}",
                m.type_name,
                m.record_index,
                m.class_size,
                m.hgs,
                m.generators.join(", ")
            );
        }
    }
    for n in &r.notes {
        let _ = writeln!(out, "- note: {n}");
    }
    out
}

/// A published cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Expected {
    Value(u64),
    Unknown,
    Disputed(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectedRow {
    pub degree: usize,
    pub cells: [Expected; 8],
}

#[derive(Clone, Debug)]
pub struct ExpectedTable {
    pub rows: Vec<ExpectedRow>,
}

impl ExpectedTable {
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: &str| Error::Parse {
                line: i + 1,
                msg: msg.to_string(),
            };
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 9 {
                return Err(bad("expected 9 comma-separated fields"));
            }
            let degree = fields[0].parse().map_err(|_| bad("bad degree"))?;
            let mut cells = [Expected::Unknown; 8];
            for (c, f) in cells.iter_mut().zip(&fields[1..]) {
                *c = if *f == "?" {
                    Expected::Unknown
                } else if let Some(v) = f.strip_suffix('!') {
                    Expected::Disputed(v.parse().map_err(|_| bad("bad number"))?)
                } else {
                    Expected::Value(f.parse().map_err(|_| bad("bad number"))?)
                };
            }
            rows.push(ExpectedRow { degree, cells });
        }
        Ok(ExpectedTable { rows })
    }

    pub fn builtin() -> &'static ExpectedTable {
        static TABLE: OnceLock<ExpectedTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            ExpectedTable::parse(include_str!("../data/expected.txt")).expect("embedded table parses")
        })
    }

    pub fn row(&self, degree: usize) -> Option<&ExpectedRow> {
        self.rows.iter().find(|r| r.degree == degree)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum CellStatus {
    Match { value: u64 },
    Mismatch { expected: u64, computed: u64 },
    /// Either side is missing.
    Unknown { expected: Option<u64>, computed: Option<u64> },
    Disputed { printed: u64, computed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellDiff {
    pub degree: usize,
    pub column: String,
    #[serde(flatten)]
    pub status: CellStatus,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffReport {
    pub cells: Vec<CellDiff>,
}

impl DiffReport {
    pub fn count(&self, pred: impl Fn(&CellStatus) -> bool) -> usize {
        self.cells.iter().filter(|c| pred(&c.status)).count()
    }

    pub fn mismatches(&self) -> Vec<&CellDiff> {
        self.cells
            .iter()
            .filter(|c| matches!(c.status, CellStatus::Mismatch { .. }))
            .collect()
    }

    pub fn is_clean(&self) -> bool {
        self.mismatches().is_empty()
    }

    pub fn render(&self) -> String {
        let matched = self.count(|s| matches!(s, CellStatus::Match { .. }));
        let unknown = self.count(|s| matches!(s, CellStatus::Unknown { .. }));
        let mut out = String::new();
        for c in &self.cells {
            match &c.status {
                CellStatus::Mismatch { expected, computed } => {
                    let _ = writeln!(out, "MISMATCH degree {} {}: published {expected}, computed {computed}", c.degree, c.column);
                }
                CellStatus::Disputed { printed, computed } => {
                    let _ = writeln!(out, "disputed degree {} {}: printed {printed}, computed {computed}", c.degree, c.column);
                }
                CellStatus::Unknown { expected, computed } => {
                    let _ = writeln!(
                        out,
                        "unknown  degree {} {}: published {}, computed {}",
                        c.degree,
                        c.column,
                        cell(*expected),
                        cell(*computed)
                    );
                }
                CellStatus::Match { .. } => {}
            }
        }
        let _ = writeln!(
            out,
            "{matched} matching, {} mismatching, {unknown} unknown, {} disputed",
            self.mismatches().len(),
            self.count(|s| matches!(s, CellStatus::Disputed { .. }))
        );
        out
    }
}

pub fn diff_row(row: &DegreeReportRow, expected: &ExpectedRow) -> Vec<CellDiff> {
    row.cells()
        .into_iter()
        .zip(expected.cells)
        .zip(COLUMN_NAMES)
        .map(|((got, want), column)| {
            let status = match (want, got) {
                (Expected::Value(e), Some(c)) if e == c => CellStatus::Match { value: c },
                (Expected::Value(e), Some(c)) => CellStatus::Mismatch { expected: e, computed: c },
                (Expected::Disputed(e), Some(c)) => CellStatus::Disputed { printed: e, computed: c },
                (Expected::Value(e) | Expected::Disputed(e), None) => CellStatus::Unknown {
                    expected: Some(e),
                    computed: None,
                },
                (Expected::Unknown, c) => CellStatus::Unknown {
                    expected: None,
                    computed: c,
                },
            };
            CellDiff {
                degree: row.degree,
                column: column.to_string(),
                status,
            }
        })
        .collect()
}

/// Compares cached results against the published table.
pub fn diff(dir: &Path, degrees: &[usize], table: &ExpectedTable) -> Result<DiffReport> {
    let mut report = DiffReport::default();
    let mut missing = Vec::new();
    for &d in degrees {
        let Some(r) = load_result(dir, d)? else {
            missing.push(d);
            continue;
        };
        let Some(expected) = table.row(d) else {
            return Err(Error::Lookup(format!("no published row for degree {d}")));
        };
        report.cells.extend(diff_row(&r.row, expected));
    }
    if !missing.is_empty() {
        let list: Vec<String> = missing.iter().map(usize::to_string).collect();
        return Err(Error::Lookup(format!(
            "no cached results for degree(s) {} in {}; run `holcensus enumerate --degrees {}` first",
            list.join(", "),
            dir.display(),
            list.join(",")
        )));
    }
    Ok(report)
}

/// Rebuilds the context of the named type and the representative of one
/// cached record.
pub fn reconstruct(degree: usize, type_name: &str, generators: &[String]) -> Result<(HolomorphContext, PermGroup)> {
    let group = groups_of_order(degree)?
        .into_iter()
        .find(|g| g.name() == type_name)
        .ok_or_else(|| Error::Lookup(format!("no group named {type_name} of order {degree}")))?;
    let ctx = HolomorphContext::build(&group)?;
    let gens = generators
        .iter()
        .map(|g| Permutation::from_cycles(degree, g))
        .collect::<Result<Vec<_>>>()?;
    let rep = PermGroup::generate(degree, gens)?;
    Ok((ctx, rep))
}

/// Action data for every member of the class `label`.
pub fn class_actions(result: &DegreeResult, label: &str) -> Result<Vec<ActionsExport>> {
    let class = result
        .classes
        .iter()
        .find(|c| c.label == label)
        .ok_or_else(|| {
            let known: Vec<&str> = result.classes.iter().map(|c| c.label.as_str()).collect();
            Error::Lookup(format!(
                "no class {label:?} at degree {}; known labels: {}",
                result.degree,
                known.join(", ")
            ))
        })?;
    class
        .members
        .iter()
        .map(|m| {
            let (ctx, rep) = reconstruct(result.degree, &m.type_name, &m.generators)?;
            export_actions(&ctx, &rep)
        })
        .collect()
}

/// Writes `bracoid-*.json` for every member of the selected classes (all
/// of them when `label` is `None`), plus `brace-*.json` for regular ones.
/// Returns the paths written, in order.
pub fn write_actions(result: &DegreeResult, label: Option<&str>, out_dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)?;
    let labels: Vec<&str> = match label {
        Some(l) => vec![l],
        None => result.classes.iter().map(|c| c.label.as_str()).collect(),
    };
    let mut written = Vec::new();
    for l in labels {
        let exports = class_actions(result, l)?;
        let class = result.classes.iter().find(|c| c.label == l).expect("found above");
        for (m, e) in class.members.iter().zip(exports) {
            let stem = format!("{}-{}-{}", l, m.type_name, m.record_index);
            let path = out_dir.join(format!("bracoid-{stem}.json"));
            write_json(&path, &e.bracoid)?;
            written.push(path);
            if let Some(b) = &e.brace {
                let path = out_dir.join(format!("brace-{stem}.json"));
                write_json(&path, b)?;
                written.push(path);
            }
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_lists() {
        assert_eq!(parse_degrees("2-5,8,4").unwrap(), vec![2, 3, 4, 5, 8]);
        assert_eq!(parse_degrees("15").unwrap(), vec![15]);
        assert!(parse_degrees("5-2").is_err());
        assert!(parse_degrees("x").is_err());
        assert!(parse_degrees("").is_err());
    }

    #[test]
    fn embedded_table() {
        let t = ExpectedTable::builtin();
        assert_eq!(t.rows.len(), 98);
        assert_eq!(t.rows.first().unwrap().degree, 2);
        assert_eq!(t.rows.last().unwrap().degree, 99);
        assert_eq!(t.row(41).unwrap().cells[3], Expected::Disputed(8));
        assert_eq!(t.row(77).unwrap().cells[4], Expected::Disputed(29));
        assert_eq!(t.row(32).unwrap().cells[0], Expected::Value(51));
        assert_eq!(t.row(32).unwrap().cells[1], Expected::Unknown);
        assert_eq!(t.row(72).unwrap().cells[5], Expected::Unknown);
        assert_eq!(t.row(72).unwrap().cells[6], Expected::Value(13060));
        let disputed = t
            .rows
            .iter()
            .flat_map(|r| r.cells)
            .filter(|c| matches!(c, Expected::Disputed(_)))
            .count();
        assert_eq!(disputed, 3);
    }

    #[test]
    fn bad_table_lines() {
        assert!(ExpectedTable::parse("2,1,1").is_err());
        assert!(ExpectedTable::parse("2,1,1,1,1,1,1,1,x").is_err());
    }

    #[test]
    fn diff_statuses() {
        let row = DegreeReportRow::from_cells(41, [Some(1), Some(8), Some(8), Some(1), Some(1), Some(8), None, Some(9)]);
        let cells = diff_row(&row, ExpectedTable::builtin().row(41).unwrap());
        assert_eq!(cells[0].status, CellStatus::Match { value: 1 });
        assert_eq!(cells[3].status, CellStatus::Disputed { printed: 8, computed: 1 });
        assert_eq!(
            cells[6].status,
            CellStatus::Unknown {
                expected: Some(8),
                computed: None
            }
        );
        assert_eq!(cells[7].status, CellStatus::Mismatch { expected: 8, computed: 9 });
    }

    #[test]
    fn emitters() {
        let row = DegreeReportRow::from_cells(15, [Some(1), Some(8), Some(8), Some(1), Some(1), Some(8), Some(8), Some(8)]);
        let csv = to_csv(&[row.clone()]);
        assert_eq!(csv.lines().nth(1), Some("15,1,8,8,1,1,8,8,8"));
        let md = to_markdown(&[row, DegreeReportRow::unknown(32)]);
        assert!(md.contains("| 15 | 1 | 8 | 8 | 1 | 1 | 8 | 8 | 8 |"));
        assert!(md.contains("| 32 | ? |"));
    }

    #[test]
    fn config_validation() {
        let mut c = RunConfig::new(vec![2, 3], "/tmp/x");
        c.validate().unwrap();
        c.degrees = vec![1];
        assert!(c.validate().is_err());
        c.degrees = vec![2];
        c.budget.nodes = 0;
        assert!(c.validate().is_err());
    }
}
