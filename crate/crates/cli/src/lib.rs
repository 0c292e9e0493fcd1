//! Documents emitted by the `symprod` binary and their renderings.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use symprod_core::charclasses;
use symprod_core::classifier::{self, ClassifyError, InvariantReport};
use symprod_core::macdonald::{self, BuildError, BuildOptions, RelationFamily};
use symprod_core::verifier::{self, CheckResult, CheckStatus, SuiteOptions, SuiteSummary};

/// Bumped whenever a field is added, removed, renamed or reordered.
pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChernStrings {
    pub c1: String,
    pub c2: String,
    /// `closed_form` for `g > 1`, `total_class` otherwise.
    pub c2_source: String,
    pub total: String,
    pub w2: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckSection {
    pub summary: SuiteSummary,
    pub results: Vec<CheckResult>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub report: InvariantReport,
    pub chern: ChernStrings,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub checks: Option<CheckSection>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyDocument {
    pub schema_version: String,
    pub max_n: u32,
    pub max_g: u32,
    pub min_g: u32,
    pub mutated_family: Option<RelationFamily>,
    pub summary: SuiteSummary,
    pub results: Vec<CheckResult>,
}

#[derive(Debug)]
pub enum CliError {
    Build(BuildError),
    Classify(ClassifyError),
}

impl std::error::Error for CliError {}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Build(e) => write!(f, "{e}"),
            CliError::Classify(e) => write!(f, "{e}"),
        }
    }
}

impl From<BuildError> for CliError {
    fn from(e: BuildError) -> Self {
        CliError::Build(e)
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::Build(b) => CliError::Build(b),
            other => CliError::Classify(other),
        }
    }
}

impl CliError {
    pub fn is_guard(&self) -> bool {
        matches!(self, CliError::Build(BuildError::TooLarge { .. }))
    }
}

pub fn report_document(n: u32, g: u32, override_guard: bool, with_checks: bool) -> Result<ReportDocument, CliError> {
    let opts = BuildOptions { override_guard, ..Default::default() };
    let ring = macdonald::build_with(n, g, &opts)?;
    let report = classifier::classify_with_ring(&ring)?;
    let classes = charclasses::char_classes(&ring);
    let chern = ChernStrings {
        c1: classes.c1.to_string(),
        c2: classes.c2.to_string(),
        c2_source: if classes.c2_closed_form { "closed_form" } else { "total_class" }.to_string(),
        total: classes.total_chern.to_string(),
        w2: classes.w2.to_string(),
    };
    let checks = if with_checks {
        let results = verifier::run_point(n, g, &SuiteOptions { override_guard, ..Default::default() })?;
        Some(CheckSection { summary: SuiteSummary::of(&results), results })
    } else {
        None
    };
    Ok(ReportDocument { schema_version: SCHEMA_VERSION.to_string(), report, chern, checks })
}

pub fn grid_points(max_n: u32, min_g: u32, max_g: u32) -> Vec<(u32, u32)> {
    (1..=max_n).flat_map(|n| (min_g..=max_g).map(move |g| (n, g))).collect()
}

pub fn grid_documents(max_n: u32, min_g: u32, max_g: u32, override_guard: bool) -> Result<Vec<ReportDocument>, CliError> {
    let points = grid_points(max_n, min_g, max_g);
    for (n, g) in &points {
        macdonald::check_guard(*n, *g, override_guard)?;
    }
    points.par_iter().map(|(n, g)| report_document(*n, *g, override_guard, false)).collect()
}

pub fn verify_document(
    max_n: u32,
    min_g: u32,
    max_g: u32,
    override_guard: bool,
    mutate: Option<RelationFamily>,
    only: Vec<u8>,
) -> Result<VerifyDocument, CliError> {
    let opts = SuiteOptions { override_guard, drop_family: mutate, only, min_g };
    let results = verifier::run_suite(max_n, max_g, &opts)?;
    Ok(VerifyDocument {
        schema_version: SCHEMA_VERSION.to_string(),
        max_n,
        max_g,
        min_g,
        mutated_family: mutate,
        summary: SuiteSummary::of(&results),
        results,
    })
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "none".to_string(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Leaves of a JSON tree as `(dotted path, value)` pairs, in document order.
/// Arrays of numbers and booleans stay whole; other arrays are indexed.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(map) => {
                for (k, x) in map {
                    walk(&join(k), x, out);
                }
            }
            Value::Array(xs) if xs.iter().all(|x| x.is_number() || x.is_boolean()) => {
                let items: Vec<String> = xs.iter().map(scalar).collect();
                out.push((prefix.to_string(), format!("[{}]", items.join(", "))));
            }
            Value::Array(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    walk(&join(&i.to_string()), x, out);
                }
            }
            leaf => out.push((prefix.to_string(), scalar(leaf))),
        }
    }
    let mut out = Vec::new();
    walk("", v, &mut out);
    out
}

pub fn render_text_tree(v: &Value) -> String {
    let mut s = String::new();
    for (k, v) in flatten(v) {
        let _ = writeln!(s, "{k} = {v}");
    }
    s
}

pub fn report_text(doc: &ReportDocument) -> String {
    let v = serde_json::to_value(doc).expect("serializable");
    render_text_tree(&v)
}

pub fn verify_text(doc: &VerifyDocument) -> String {
    let mut s = String::new();
    for r in &doc.results {
        let tag = match r.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "SKIP",
        };
        let _ = writeln!(s, "{tag} {:>2} {:<18} n={} g={}  {}", r.check_id, r.name, r.n, r.g, r.witness);
    }
    let m = &doc.summary;
    let _ = writeln!(s, "total {} passed {} failed {} skipped {}", m.total, m.passed, m.failed, m.skipped);
    if let Some(f) = doc.mutated_family {
        let _ = writeln!(s, "mutated ideal: {} family removed", f.name());
    }
    s
}

pub const CSV_HEADER: &str = "n,g,real_dimension,betti,euler,cat,cup_length,tc,rationally_essential,\
manifold_spin,cover_spin,spin_cover_sheets,dim_MC,dim_mc,psc,kahler_psc,nonpositive_hsc_kahler,\
symplectically_aspherical,c1,c2";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn enum_name<T: Serialize>(x: &T) -> String {
    scalar(&serde_json::to_value(x).expect("serializable"))
}

pub fn csv_row(doc: &ReportDocument) -> String {
    let r = &doc.report;
    let opt = |x: Option<String>| x.unwrap_or_else(|| "none".to_string());
    let dim_mc = match r.dim_small_mc.value {
        classifier::Bound::Exact(v) => v.to_string(),
        classifier::Bound::AtMost(v) => format!("<={v}"),
    };
    let betti: Vec<String> = r.betti.value.iter().map(|b| b.to_string()).collect();
    let fields = [
        r.n.to_string(),
        r.g.to_string(),
        r.real_dimension.to_string(),
        betti.join(" "),
        r.euler.value.to_string(),
        r.cat.value.to_string(),
        r.cup_length.value.to_string(),
        opt(r.tc.value.map(|v| v.to_string())),
        r.rationally_essential.value.to_string(),
        r.spin.value.manifold_spin.to_string(),
        r.spin.value.cover_spin.to_string(),
        opt(r.spin_cover_sheets.value.map(|v| v.to_string())),
        opt(r.dim_big_mc.value.map(|v| v.to_string())),
        dim_mc,
        enum_name(&r.psc.value),
        enum_name(&r.kahler_psc.value),
        enum_name(&r.nonpositive_hsc_kahler.value),
        enum_name(&r.symplectically_aspherical.value),
        doc.chern.c1.clone(),
        doc.chern.c2.clone(),
    ];
    fields.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",")
}
