//! Output documents and their plain-table rendering.

use std::fmt::Write;

use modclass::classify::{ClassificationReport, VerificationReport};
use modclass::finite_field::FieldDoc;
use modclass::modrep::ModuleDoc;
use modclass::perm_group::GroupDoc;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// Top-level structured output: one document per run.
#[derive(Serialize)]
pub struct Envelope<'a, T> {
    pub schema_version: u32,
    pub command: &'a str,
    pub result: &'a T,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimpleEntry {
    pub index: usize,
    pub dim: usize,
    pub end_degree: usize,
    pub absolutely_simple: bool,
    pub module: ModuleDoc,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimplesDoc {
    pub group: GroupDoc,
    pub field: FieldDoc,
    pub modules: Vec<SimpleEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiberRow {
    pub degree: u32,
    pub dim: usize,
    pub multiplicity: usize,
    pub galois_orbit: usize,
    pub absolutely_simple: bool,
    pub absolutely_indecomposable: bool,
    pub module: ModuleDoc,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiberDoc {
    pub group: GroupDoc,
    pub p: u32,
    pub index: usize,
    pub dim: usize,
    pub end_degree: usize,
    pub degree_bound: u32,
    pub entries: Vec<FiberRow>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SummandRow {
    pub dim: usize,
    pub multiplicity: usize,
    pub end_dim: usize,
    pub local_top_dim: usize,
    pub module: ModuleDoc,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecompositionDoc {
    pub field: FieldDoc,
    pub dim: usize,
    pub summands: Vec<SummandRow>,
    /// Rows of the basis change, entries as coefficient vectors.
    pub basis_change: Vec<Vec<Vec<u32>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GreenDoc {
    pub vertex_order: usize,
    /// Generators of the vertex as 1-based image vectors.
    pub vertex_generators: Vec<Vec<u32>>,
    pub source: Option<ModuleDoc>,
    pub normalizer: Option<GroupDoc>,
    pub correspondent: Option<ModuleDoc>,
}

fn field_name(f: &FieldDoc) -> String {
    if f.n == 1 {
        format!("GF({})", f.p)
    } else {
        format!("GF({}^{})", f.p, f.n)
    }
}

fn group_line(g: &GroupDoc) -> String {
    let gens: Vec<String> = g.generators.iter().map(|v| format!("{v:?}")).collect();
    format!("degree {} generated by {}", g.degree, gens.join(", "))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn simples_table(d: &SimplesDoc) -> String {
    let mut s = String::new();
    writeln!(s, "group: {}", group_line(&d.group)).unwrap();
    writeln!(s, "field: {}", field_name(&d.field)).unwrap();
    writeln!(
        s,
        "{:>5} {:>5} {:>10} {:>18}",
        "index", "dim", "End degree", "absolutely simple"
    )
    .unwrap();
    for m in &d.modules {
        writeln!(
            s,
            "{:>5} {:>5} {:>10} {:>18}",
            m.index,
            m.dim,
            m.end_degree,
            yes_no(m.absolutely_simple)
        )
        .unwrap();
    }
    s
}

pub fn count_table(r: &ClassificationReport) -> String {
    let mut s = String::new();
    writeln!(s, "group: {}", group_line(&r.group)).unwrap();
    writeln!(s, "characteristic: {}", r.p).unwrap();
    writeln!(
        s,
        "{:>5} {:>10} {:>10} {:>16}",
        "dim", "End degree", "fiber size", "splitting degree"
    )
    .unwrap();
    for row in &r.rows {
        writeln!(
            s,
            "{:>5} {:>10} {:>10} {:>16}",
            row.dim, row.end_degree, row.fiber_size, row.splitting_degree
        )
        .unwrap();
    }
    writeln!(s, "total: {}", r.total).unwrap();
    writeln!(s, "oracle (p-regular classes): {}", r.oracle).unwrap();
    writeln!(s, "agree: {}", yes_no(r.agree)).unwrap();
    s
}

pub fn fiber_table(d: &FiberDoc) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "simple module {} (dim {}, End degree {}) over GF({}), degrees 1..={}",
        d.index, d.dim, d.end_degree, d.p, d.degree_bound
    )
    .unwrap();
    writeln!(
        s,
        "{:>6} {:>5} {:>12} {:>6} {:>10} {:>16}",
        "degree", "dim", "multiplicity", "orbit", "abs simple", "abs indecomposable"
    )
    .unwrap();
    for e in &d.entries {
        writeln!(
            s,
            "{:>6} {:>5} {:>12} {:>6} {:>10} {:>16}",
            e.degree,
            e.dim,
            e.multiplicity,
            e.galois_orbit,
            yes_no(e.absolutely_simple),
            yes_no(e.absolutely_indecomposable)
        )
        .unwrap();
    }
    s
}

pub fn verify_table(r: &VerificationReport) -> String {
    let mut s = String::new();
    writeln!(s, "group: {}", group_line(&r.group)).unwrap();
    writeln!(
        s,
        "characteristic: {}, degree bound: {}, seed: {}",
        r.p, r.degree_bound, r.seed
    )
    .unwrap();
    writeln!(s, "subjects:").unwrap();
    writeln!(s, "{:>5} {:>7} {:>12}", "dim", "simple", "vertex order").unwrap();
    for subj in &r.subjects {
        let vertex = subj.vertex_order.map_or("-".to_string(), |o| o.to_string());
        writeln!(s, "{:>5} {:>7} {:>12}", subj.dim, yes_no(subj.simple), vertex).unwrap();
    }
    writeln!(s, "{:<36} {:>8} {:>9} {:>6}", "clause", "checks", "failures", "result").unwrap();
    for c in &r.clauses {
        let status = if c.passed() { "pass" } else { "FAIL" };
        writeln!(
            s,
            "{:<36} {:>8} {:>9} {:>6}",
            c.name,
            c.checks,
            c.failures.len(),
            status
        )
        .unwrap();
        for f in c.failures.iter().take(5) {
            writeln!(s, "    {f}").unwrap();
        }
    }
    writeln!(s, "all clauses pass: {}", yes_no(r.all_passed())).unwrap();
    s
}

fn matrix_lines(s: &mut String, m: &[Vec<Vec<u32>>], encode: impl Fn(&[u32]) -> u64) {
    for row in m {
        let cells: Vec<String> = row.iter().map(|e| encode(e).to_string()).collect();
        writeln!(s, "    {}", cells.join(" ")).unwrap();
    }
}

/// Entries are printed as integers `sum c_i p^i`.
pub fn module_table(m: &ModuleDoc) -> String {
    let p = m.field.p as u64;
    let encode = |c: &[u32]| c.iter().rev().fold(0u64, |acc, &d| acc * p + d as u64);
    let mut s = String::new();
    writeln!(s, "module of dimension {} over {}", m.dim, field_name(&m.field)).unwrap();
    writeln!(s, "group: {}", group_line(&m.group)).unwrap();
    for (i, g) in m.matrices.iter().enumerate() {
        writeln!(s, "  generator {}:", i + 1).unwrap();
        matrix_lines(&mut s, g, encode);
    }
    s
}

pub fn decomposition_table(d: &DecompositionDoc) -> String {
    let mut s = String::new();
    writeln!(s, "module of dimension {} over {}", d.dim, field_name(&d.field)).unwrap();
    writeln!(
        s,
        "{:>4} {:>5} {:>12} {:>8} {:>8}",
        "type", "dim", "multiplicity", "End dim", "top dim"
    )
    .unwrap();
    for (i, r) in d.summands.iter().enumerate() {
        writeln!(
            s,
            "{:>4} {:>5} {:>12} {:>8} {:>8}",
            i, r.dim, r.multiplicity, r.end_dim, r.local_top_dim
        )
        .unwrap();
    }
    s
}

pub fn green_table(d: &GreenDoc) -> String {
    let mut s = String::new();
    writeln!(s, "vertex order: {}", d.vertex_order).unwrap();
    let gens: Vec<String> = d.vertex_generators.iter().map(|v| format!("{v:?}")).collect();
    writeln!(
        s,
        "vertex generators: {}",
        if gens.is_empty() {
            "(none)".into()
        } else {
            gens.join(", ")
        }
    )
    .unwrap();
    if let Some(src) = &d.source {
        writeln!(s, "source dimension: {}", src.dim).unwrap();
    }
    if let Some(h) = &d.normalizer {
        writeln!(s, "normalizer: {}", group_line(h)).unwrap();
    }
    if let Some(c) = &d.correspondent {
        writeln!(s, "correspondent dimension: {}", c.dim).unwrap();
    }
    s
}
