//! Field-extension fibers of indecomposable modules over a prime field and
//! the count of absolutely simple modules derived from them.
//!
//! An absolutely indecomposable module over the algebraic closure is
//! represented by a pair (K, V): a finite field K and a KG-module V that
//! stays indecomposable over every extension of K.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::finite_field::{automorphisms, divisors, make_field, FieldError, FiniteField};
use crate::green::{green_correspondent, source, vertex, GreenError};
use crate::meataxe::{
    decompose, end_structure, indecomposable_isomorphism, is_component, is_indecomposable, is_simple, simple_modules,
    MeatAxeError,
};
use crate::modrep::{
    end_space, extend_scalars, frobenius_twist, induce, regular_module, restrict_scalars, restrict_subgroup, transport,
    ModError, Rep,
};
use crate::perm_group::{normalizer, p_regular_class_count, GroupDoc, GroupError, PermGroup, Subgroup};

pub const DEFAULT_DEGREE_BOUND: u32 = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error(transparent)]
    MeatAxe(#[from] MeatAxeError),
    #[error(transparent)]
    Green(#[from] GreenError),
    #[error(transparent)]
    Module(#[from] ModError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("{0}")]
    Precondition(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("splitting degree exceeds the bound {0}")]
    SplittingDegreeExceeded(u32),
}

impl ClassifyError {
    /// Failures that contradict the theory rather than reflect bad input.
    pub fn is_consistency_failure(&self) -> bool {
        matches!(
            self,
            ClassifyError::Consistency(_) | ClassifyError::Green(GreenError::Consistency(_))
        )
    }
}

type Result<T> = std::result::Result<T, ClassifyError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub absolutely_simple: bool,
    pub absolutely_indecomposable: bool,
}

#[derive(Clone, Debug)]
pub struct ClassifiedModule {
    pub field: Arc<FiniteField>,
    pub module: Rep,
    pub flags: Flags,
}

impl ClassifiedModule {
    /// Rejects decomposable modules and computes the flags.
    pub fn new(module: Rep) -> Result<Self> {
        let end = end_structure(&module)?;
        if !end.is_local() {
            return Err(ClassifyError::Precondition("the module is decomposable".into()));
        }
        let absolutely_indecomposable = end.top_dim() == 1;
        let absolutely_simple = end.dim() == 1 && is_simple(&module, 0)?.simple;
        Ok(ClassifiedModule {
            field: module.field().clone(),
            module,
            flags: Flags {
                absolutely_simple,
                absolutely_indecomposable,
            },
        })
    }
}

fn require_prime_field(w: &Rep) -> Result<()> {
    if w.field().degree() != 1 {
        return Err(ClassifyError::Precondition(
            "the module must be defined over a prime field".into(),
        ));
    }
    Ok(())
}

fn require_indecomposable(w: &Rep) -> Result<()> {
    if !is_indecomposable(w)? {
        return Err(ClassifyError::Precondition(
            "the module is decomposable; decompose it first".into(),
        ));
    }
    Ok(())
}

/// `(U | V (x)_K L, V | Res_K^L U)`, both computed independently; both
/// false unless K is a subfield of L.
pub fn up_relation_both(v: &Rep, u: &Rep) -> Result<(bool, bool)> {
    let (k, l) = (v.field(), u.field());
    if k.characteristic() != l.characteristic() || l.degree() % k.degree() != 0 {
        return Ok((false, false));
    }
    if **v.group() != **u.group() {
        return Err(ModError::GroupMismatch.into());
    }
    let forward = is_component(u, &extend_scalars(v, l)?)?;
    let backward = is_component(v, &restrict_scalars(u, k)?)?;
    Ok((forward, backward))
}

/// `(K, V) -> (L, U)`: K is a subfield of L and U is a component of V over L.
pub fn up_relation(v: &Rep, u: &Rep) -> Result<bool> {
    require_indecomposable(v)?;
    require_indecomposable(u)?;
    let (forward, backward) = up_relation_both(v, u)?;
    if forward != backward {
        return Err(ClassifyError::Consistency(format!(
            "extension gives {forward} but restriction gives {backward}"
        )));
    }
    Ok(forward)
}

/// Component types of `W (x) GF(p^n)` with multiplicities, in canonical order.
pub fn extension_components(w: &Rep, n: u32) -> Result<Vec<(Rep, usize)>> {
    let l = make_field(w.field().characteristic(), n)?;
    let x = extend_scalars(w, &l)?;
    Ok(decompose(&x, 0)?.summands)
}

/// Index of the Galois orbit of each indecomposable, numbered by first appearance.
pub fn galois_orbit_indices(types: &[Rep]) -> Result<Vec<usize>> {
    let Some(first) = types.first() else {
        return Ok(Vec::new());
    };
    let auts = automorphisms(first.field());
    let mut leaders: Vec<usize> = Vec::new();
    let mut out = Vec::with_capacity(types.len());
    for (i, t) in types.iter().enumerate() {
        let mut found = None;
        'search: for (o, &r) in leaders.iter().enumerate() {
            for s in &auts {
                if indecomposable_isomorphism(&frobenius_twist(&types[r], s)?, t)?.is_some() {
                    found = Some(o);
                    break 'search;
                }
            }
        }
        out.push(found.unwrap_or_else(|| {
            leaders.push(i);
            leaders.len() - 1
        }));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct FiberEntry {
    /// `K = GF(p^degree)`.
    pub degree: u32,
    pub entry: ClassifiedModule,
    pub galois_orbit_index: usize,
    pub multiplicity: usize,
}

/// Components of `W (x) GF(p^n)` for `n = 1..=bound`. At each degree they
/// must form a single Galois orbit.
pub fn fiber(w: &Rep, degree_bound: u32) -> Result<Vec<FiberEntry>> {
    require_prime_field(w)?;
    require_indecomposable(w)?;
    let layers: Vec<Vec<FiberEntry>> = (1..=degree_bound)
        .into_par_iter()
        .map(|n| fiber_layer(w, n))
        .collect::<Result<_>>()?;
    Ok(layers.into_iter().flatten().collect())
}

fn fiber_layer(w: &Rep, n: u32) -> Result<Vec<FiberEntry>> {
    let types = extension_components(w, n)?;
    let reps: Vec<Rep> = types.iter().map(|(r, _)| r.clone()).collect();
    let orbits = galois_orbit_indices(&reps)?;
    if orbits.iter().any(|&o| o != 0) {
        return Err(ClassifyError::Consistency(format!(
            "components over GF(p^{n}) form {} Galois orbits",
            orbits.iter().max().unwrap() + 1
        )));
    }
    types
        .into_iter()
        .zip(orbits)
        .map(|((module, multiplicity), galois_orbit_index)| {
            Ok(FiberEntry {
                degree: n,
                entry: ClassifiedModule::new(module)?,
                galois_orbit_index,
                multiplicity,
            })
        })
        .collect()
}

/// The smallest field `K` inside `GF(p^n)` over which the chosen component
/// of `W (x) GF(p^n)` is already defined, with a module realizing it.
pub fn descend_component(w: &Rep, n: u32, component_index: usize) -> Result<ClassifiedModule> {
    require_prime_field(w)?;
    let types = extension_components(w, n)?;
    let Some((x, _)) = types.get(component_index) else {
        return Err(ClassifyError::Precondition(format!(
            "component index {component_index} out of range ({} components)",
            types.len()
        )));
    };
    for m in divisors(n) {
        if m == n {
            return ClassifiedModule::new(x.clone());
        }
        for (v, _) in extension_components(w, m)? {
            if v.dim() != x.dim() {
                continue;
            }
            let lifted = extend_scalars(&v, x.field())?;
            if indecomposable_isomorphism(x, &lifted)?.is_some() {
                return ClassifiedModule::new(v);
            }
        }
    }
    unreachable!("the last divisor of n is n")
}

/// The indecomposable over the prime field below an absolutely indecomposable pair.
pub fn gamma_of(y: &ClassifiedModule) -> Result<Rep> {
    if !y.flags.absolutely_indecomposable {
        return Err(ClassifyError::Precondition(
            "the module is not absolutely indecomposable".into(),
        ));
    }
    restriction_type(&y.module)
}

/// The single component type of `Res_F^K(V)`.
fn restriction_type(v: &Rep) -> Result<Rep> {
    let prime = make_field(v.field().characteristic(), 1)?;
    let r = restrict_scalars(v, &prime)?;
    let d = decompose(&r, 0)?;
    if d.summands.len() != 1 {
        return Err(ClassifyError::Consistency(format!(
            "restriction to the prime field has {} component types",
            d.summands.len()
        )));
    }
    let (w, s) = &d.summands[0];
    if s * w.dim() != v.field().degree() as usize * v.dim() {
        return Err(ClassifyError::Consistency("restriction dimension mismatch".into()));
    }
    Ok(w.clone())
}

/// The simple module over the prime field below an absolutely simple pair.
pub fn sigma_of(x: &ClassifiedModule) -> Result<Rep> {
    if !x.flags.absolutely_simple {
        return Err(ClassifyError::Precondition(
            "the module is not absolutely simple".into(),
        ));
    }
    let w = restriction_type(&x.module)?;
    if !is_simple(&w, 0)?.simple {
        return Err(ClassifyError::Consistency(
            "an absolutely simple module lies over a non-simple one".into(),
        ));
    }
    Ok(w)
}

/// The absolutely simple modules over `W`: the components of `W` over
/// `GF(p^m)` with `m = dim End(W)`, expected to be `m` Galois conjugates.
pub fn sigma_fiber(w: &Rep) -> Result<Vec<ClassifiedModule>> {
    require_prime_field(w)?;
    if !is_simple(w, 0)?.simple {
        return Err(ClassifyError::Precondition("the module is not simple".into()));
    }
    let m = end_space(w).dim();
    let types = extension_components(w, m as u32)?;
    let count: usize = types.iter().map(|(_, k)| k).sum();
    if count != m || types.iter().any(|&(_, k)| k != 1) {
        return Err(ClassifyError::Consistency(format!(
            "expected {m} distinct components over GF(p^{m}), found {count} in {} types",
            types.len()
        )));
    }
    let reps: Vec<Rep> = types.into_iter().map(|(r, _)| r).collect();
    if galois_orbit_indices(&reps)?.iter().any(|&o| o != 0) {
        return Err(ClassifyError::Consistency(
            "components form several Galois orbits".into(),
        ));
    }
    let entries: Vec<ClassifiedModule> = reps.into_iter().map(ClassifiedModule::new).collect::<Result<_>>()?;
    if entries.iter().any(|e| !e.flags.absolutely_simple) {
        return Err(ClassifyError::Consistency(
            "a component over the splitting field is not absolutely simple".into(),
        ));
    }
    Ok(entries)
}

/// Representatives of the absolutely indecomposables over `W`, found at the
/// first multiple of `dim End(W)/rad` where every component is absolutely
/// indecomposable.
pub fn gamma_fiber(w: &Rep, degree_bound: u32) -> Result<Vec<ClassifiedModule>> {
    require_prime_field(w)?;
    let end = end_structure(w)?;
    if !end.is_local() {
        return Err(ClassifyError::Precondition("the module is decomposable".into()));
    }
    let m = end.top_dim() as u32;
    let mut n = m;
    while n <= degree_bound {
        let entries: Vec<ClassifiedModule> = extension_components(w, n)?
            .into_iter()
            .map(|(r, _)| ClassifiedModule::new(r))
            .collect::<Result<_>>()?;
        if entries.iter().all(|e| e.flags.absolutely_indecomposable) {
            return Ok(entries);
        }
        n += m;
    }
    Err(ClassifyError::SplittingDegreeExceeded(degree_bound))
}

// ---------------------------------------------------------------------------
// Counting

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub dim: usize,
    pub end_degree: usize,
    pub fiber_size: usize,
    pub splitting_degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub group: GroupDoc,
    pub p: u32,
    pub rows: Vec<ReportRow>,
    pub total: usize,
    pub oracle: usize,
    pub agree: bool,
}

/// Absolutely simple modules counted through the fibers over the simple
/// modules of the prime field, next to the p-regular class count.
pub fn count_absolutely_simple(group: &Arc<PermGroup>, p: u32, seed: u64) -> Result<ClassificationReport> {
    let f = make_field(p, 1)?;
    let simples = simple_modules(group, &f, seed)?;
    let rows: Vec<ReportRow> = simples
        .modules
        .par_iter()
        .zip(&simples.end_degrees)
        .map(|(w, &m)| {
            let fiber = sigma_fiber(w)?;
            Ok(ReportRow {
                dim: w.dim(),
                end_degree: m,
                fiber_size: fiber.len(),
                splitting_degree: m as u32,
            })
        })
        .collect::<Result<_>>()?;
    let total = rows.iter().map(|r| r.fiber_size).sum();
    let oracle = p_regular_class_count(group, p);
    Ok(ClassificationReport {
        group: group.to_doc(),
        p,
        rows,
        total,
        oracle,
        agree: total == oracle,
    })
}

// ---------------------------------------------------------------------------
// Verification

pub const CLAUSES: [&str; 10] = [
    "materialization",
    "up-relation-equivalence",
    "restriction-homogeneity",
    "single-galois-orbit",
    "transitivity",
    "simplicity-equivalence",
    "vertex-source-correspondent",
    "correspondent-fibers",
    "partition",
    "counting-formula",
];

const MATERIALIZE: usize = 0;
const UP: usize = 1;
const RESTRICT: usize = 2;
const ORBIT: usize = 3;
const TRANSITIVE: usize = 4;
const SIMPLE: usize = 5;
const VERTEX: usize = 6;
const CORRESPONDENT: usize = 7;
const PARTITION: usize = 8;
const COUNT: usize = 9;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseResult {
    pub name: String,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl ClauseResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub group: GroupDoc,
    pub p: u32,
    pub degree_bound: u32,
    pub seed: u64,
    pub subjects: Vec<SubjectSummary>,
    pub clauses: Vec<ClauseResult>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.clauses.iter().all(ClauseResult::passed)
    }

    pub fn clause(&self, name: &str) -> Option<&ClauseResult> {
        self.clauses.iter().find(|c| c.name == name)
    }
}

/// A module over the prime field whose fibers were examined.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubjectSummary {
    pub dim: usize,
    pub simple: bool,
    pub vertex_order: Option<usize>,
}

#[derive(Clone, Default)]
struct Tally {
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn fail(&mut self, what: String) {
        self.checks += 1;
        self.failures.push(what);
    }
}

type Tallies = Vec<Tally>;

fn tallies() -> Tallies {
    vec![Tally::default(); CLAUSES.len()]
}

fn merge(into: &mut Tallies, from: Tallies) {
    for (a, b) in into.iter_mut().zip(from) {
        a.checks += b.checks;
        a.failures.extend(b.failures);
    }
}

struct Subject {
    module: Rep,
    simple: bool,
}

/// Green-theoretic data of a subject, computed once.
struct GreenData {
    q: Subgroup,
    h: Subgroup,
    source: Rep,
    correspondent: Rep,
}

struct Layer {
    subject: usize,
    n: u32,
    types: Vec<Rep>,
}

/// Runs every clause on the simple modules over GF(p), the components of
/// the regular module and all their extensions up to `GF(p^degree_bound)`.
pub fn verify_classification(
    group: &Arc<PermGroup>,
    p: u32,
    degree_bound: u32,
    seed: u64,
) -> Result<VerificationReport> {
    if degree_bound == 0 {
        return Err(ClassifyError::Precondition(
            "the degree bound must be at least 1".into(),
        ));
    }
    let f = make_field(p, 1)?;
    let simples = simple_modules(group, &f, seed)?;
    let mut subjects: Vec<Subject> = simples
        .modules
        .iter()
        .map(|w| Subject {
            module: w.clone(),
            simple: true,
        })
        .collect();
    for (pim, _) in decompose(&regular_module(group, &f), seed)?.summands {
        let mut known = false;
        for s in &subjects {
            if indecomposable_isomorphism(&pim, &s.module)?.is_some() {
                known = true;
                break;
            }
        }
        if !known {
            subjects.push(Subject {
                module: pim,
                simple: false,
            });
        }
    }

    let mut all = tallies();

    let green: Vec<Option<GreenData>> = subjects
        .par_iter()
        .map(|s| green_data(&s.module))
        .collect::<Vec<_>>()
        .into_iter()
        .enumerate()
        .map(|(i, r)| match r {
            Ok(g) => Some(g),
            Err(e) => {
                all[VERTEX].fail(format!("subject {i}: {e}"));
                None
            }
        })
        .collect();

    // every (subject, degree) layer, decomposed in parallel
    let jobs: Vec<(usize, u32)> = (0..subjects.len())
        .flat_map(|i| (1..=degree_bound).map(move |n| (i, n)))
        .collect();
    let decomposed: Vec<Result<Vec<(Rep, usize)>>> = jobs
        .par_iter()
        .map(|&(i, n)| extension_components(&subjects[i].module, n))
        .collect();
    let mut layers = Vec::new();
    for (&(i, n), r) in jobs.iter().zip(decomposed) {
        match r {
            Ok(types) => {
                all[MATERIALIZE].checks += 1;
                layers.push(Layer {
                    subject: i,
                    n,
                    types: types.into_iter().map(|(t, _)| t).collect(),
                });
            }
            Err(e) => all[MATERIALIZE].fail(format!("subject {i} over GF({p}^{n}): {e}")),
        }
    }

    let per_layer: Vec<Tallies> = layers
        .par_iter()
        .map(|layer| check_layer(layer, &subjects, &layers, green[layer.subject].as_ref()))
        .collect();
    for t in per_layer {
        merge(&mut all, t);
    }

    merge(&mut all, check_partition(&subjects, &layers, degree_bound));

    let total: std::result::Result<usize, ClassifyError> = subjects
        .iter()
        .filter(|s| s.simple)
        .map(|s| sigma_fiber(&s.module).map(|v| v.len()))
        .sum();
    let oracle = p_regular_class_count(group, p);
    match total {
        Ok(total) => all[COUNT].check(total == oracle, || format!("total {total}, oracle {oracle}")),
        Err(e) => all[COUNT].fail(e.to_string()),
    }

    Ok(VerificationReport {
        group: group.to_doc(),
        p,
        degree_bound,
        seed,
        subjects: subjects
            .iter()
            .zip(&green)
            .map(|(s, g)| SubjectSummary {
                dim: s.module.dim(),
                simple: s.simple,
                vertex_order: g.as_ref().map(|g| g.q.order()),
            })
            .collect(),
        clauses: CLAUSES
            .iter()
            .zip(all)
            .map(|(name, t)| ClauseResult {
                name: name.to_string(),
                checks: t.checks,
                failures: t.failures,
            })
            .collect(),
    })
}

fn green_data(w: &Rep) -> Result<GreenData> {
    let q = vertex(w)?;
    let h = normalizer(w.group(), &q);
    let src = source(w, &q)?;
    let correspondent = green_correspondent(w, &q, &h)?;
    Ok(GreenData {
        q,
        h,
        source: src,
        correspondent,
    })
}

fn check_layer(layer: &Layer, subjects: &[Subject], layers: &[Layer], green: Option<&GreenData>) -> Tallies {
    let mut t = tallies();
    let w = &subjects[layer.subject].module;
    let tag = |k: usize| format!("subject {} over GF(p^{}) component {k}", layer.subject, layer.n);

    // a single Galois orbit
    match galois_orbit_indices(&layer.types) {
        Ok(orbits) => t[ORBIT].check(orbits.iter().all(|&o| o == 0), || {
            format!(
                "subject {} over GF(p^{}): {} orbits",
                layer.subject,
                layer.n,
                orbits.iter().max().unwrap() + 1
            )
        }),
        Err(e) => t[ORBIT].fail(format!("{}: {e}", tag(0))),
    }

    let w_simple = subjects[layer.subject].simple;
    for (k, v) in layer.types.iter().enumerate() {
        // extension and restriction agree for (F, W) against every subject
        for (j, other) in subjects.iter().enumerate() {
            match up_relation_both(&other.module, v) {
                Ok((fwd, back)) => {
                    t[UP].check(fwd == back, || format!("{} vs subject {j}: {fwd} / {back}", tag(k)));
                    t[TRANSITIVE].check(fwd == (j == layer.subject), || {
                        format!("{} related to subject {j}: {fwd}", tag(k))
                    });
                }
                Err(e) => t[UP].fail(format!("{} vs subject {j}: {e}", tag(k))),
            }
        }

        // intermediate fields: agreement, and a relation only inside one fiber
        let mut has_parent = layer.n == 1;
        for lower in layers.iter().filter(|l| l.n < layer.n && layer.n.is_multiple_of(l.n)) {
            for (kk, u) in lower.types.iter().enumerate() {
                match up_relation_both(u, v) {
                    Ok((fwd, back)) => {
                        t[UP].check(fwd == back, || {
                            format!(
                                "{} vs subject {} over GF(p^{}) component {kk}: {fwd} / {back}",
                                tag(k),
                                lower.subject,
                                lower.n
                            )
                        });
                        if fwd && lower.subject == layer.subject {
                            has_parent = true;
                        }
                        t[TRANSITIVE].check(!fwd || lower.subject == layer.subject, || {
                            format!("{} lies over a component of subject {}", tag(k), lower.subject)
                        });
                    }
                    Err(e) => t[UP].fail(format!("{}: {e}", tag(k))),
                }
            }
        }
        if layer.n > 1
            && layers
                .iter()
                .any(|l| l.subject == layer.subject && l.n < layer.n && layer.n.is_multiple_of(l.n))
        {
            t[TRANSITIVE].check(has_parent, || {
                format!("{} lies over no component of a subfield", tag(k))
            });
        }

        // homogeneous restriction to the prime field
        match restriction_check(w, v, layer.n) {
            Ok(None) => t[RESTRICT].check(true, String::new),
            Ok(Some(msg)) => t[RESTRICT].fail(format!("{}: {msg}", tag(k))),
            Err(e) => t[RESTRICT].fail(format!("{}: {e}", tag(k))),
        }

        match is_simple(v, 0) {
            Ok(s) => t[SIMPLE].check(s.simple == w_simple, || {
                format!("{}: simple {} over a subject with simple {w_simple}", tag(k), s.simple)
            }),
            Err(e) => t[SIMPLE].fail(format!("{}: {e}", tag(k))),
        }
    }

    if let Some(g) = green {
        check_green(layer, w, g, &mut t);
    }
    t
}

/// `Res_F^K(V)` is a multiple of `W` with the right dimension count.
fn restriction_check(w: &Rep, v: &Rep, n: u32) -> Result<Option<String>> {
    let r = restrict_scalars(v, w.field())?;
    let d = decompose(&r, 0)?;
    if d.summands.len() != 1 {
        return Ok(Some(format!("{} component types in the restriction", d.summands.len())));
    }
    let (u, s) = &d.summands[0];
    if indecomposable_isomorphism(w, u)?.is_none() {
        return Ok(Some("restriction is not a multiple of the subject".into()));
    }
    if s * w.dim() != n as usize * v.dim() {
        return Ok(Some(format!("{s} * {} != {n} * {}", w.dim(), v.dim())));
    }
    Ok(None)
}

fn check_green(layer: &Layer, w: &Rep, g: &GreenData, t: &mut Tallies) {
    let k_field = layer.types.first().map(|v| v.field().clone());
    let Some(k_field) = k_field else { return };
    let tag = |k: usize| format!("subject {} over GF(p^{}) component {k}", layer.subject, layer.n);
    let q_normal = g.h.order() == w.group().order();

    let lifted_source = extend_scalars(&g.source, &k_field);
    let lifted_corr = extend_scalars(&g.correspondent, &k_field);
    let (Ok(lifted_source), Ok(lifted_corr)) = (lifted_source, lifted_corr) else {
        t[VERTEX].fail(format!("subject {}: cannot extend Green data", layer.subject));
        return;
    };

    let mut correspondents: Vec<Rep> = Vec::new();
    for (k, v) in layer.types.iter().enumerate() {
        let outcome = (|| -> Result<Option<Rep>> {
            let qv = vertex(v)?;
            t[VERTEX].check(qv.is_conjugate_in_parent(&g.q), || {
                format!("{}: vertex not conjugate to the subject's", tag(k))
            });
            if !qv.is_conjugate_in_parent(&g.q) {
                return Ok(None);
            }
            // some source of V divides the extended source of W
            let res = restrict_subgroup(v, &g.q)?;
            let mut found = false;
            for (u, _) in decompose(&res, 0)?.summands {
                if is_component(&u, &lifted_source)? && is_component(v, &induce(&u, &g.q)?)? {
                    found = true;
                    break;
                }
            }
            t[VERTEX].check(found, || format!("{}: no source dividing the extended source", tag(k)));
            let gv = green_correspondent(v, &g.q, &g.h)?;
            t[VERTEX].check(is_component(&gv, &lifted_corr)?, || {
                format!("{}: correspondent does not divide the extended correspondent", tag(k))
            });
            Ok(Some(gv))
        })();
        match outcome {
            Ok(Some(gv)) => correspondents.push(gv),
            Ok(None) => {}
            Err(e) => t[VERTEX].fail(format!("{}: {e}", tag(k))),
        }
    }

    if q_normal {
        return;
    }
    // the correspondent of W keeps the vertex-source pair, and the
    // correspondence is injective on the fiber
    if layer.n == 1 {
        let outcome = (|| -> Result<()> {
            let c = &g.correspondent;
            t[CORRESPONDENT].check(is_indecomposable(c)?, || {
                format!("subject {}: correspondent decomposable", layer.subject)
            });
            let q_in_h = g.q.within(&g.h)?;
            t[CORRESPONDENT].check(vertex(c)?.is_conjugate_in_parent(&q_in_h), || {
                format!("subject {}: correspondent has another vertex", layer.subject)
            });
            let q_in_h_res = restrict_subgroup(c, &q_in_h)?;
            let src_h = transport(&g.source, q_in_h.as_group())?;
            let ok = is_component(&src_h, &q_in_h_res)? && is_component(c, &induce(&src_h, &q_in_h)?)?;
            t[CORRESPONDENT].check(ok, || {
                format!("subject {}: correspondent has another source", layer.subject)
            });
            Ok(())
        })();
        if let Err(e) = outcome {
            t[CORRESPONDENT].fail(format!("subject {}: {e}", layer.subject));
        }
    }
    for a in 0..correspondents.len() {
        for b in a + 1..correspondents.len() {
            match indecomposable_isomorphism(&correspondents[a], &correspondents[b]) {
                Ok(iso) => t[CORRESPONDENT].check(iso.is_none(), || {
                    format!("{}: correspondents of components {a} and {b} coincide", tag(a))
                }),
                Err(e) => t[CORRESPONDENT].fail(format!("{}: {e}", tag(a))),
            }
        }
        match up_relation_both(&g.correspondent, &correspondents[a]) {
            Ok((fwd, back)) => t[CORRESPONDENT].check(fwd && back, || {
                format!(
                    "{}: correspondent outside the fiber of the subject's correspondent",
                    tag(a)
                )
            }),
            Err(e) => t[CORRESPONDENT].fail(format!("{}: {e}", tag(a))),
        }
    }
}

/// Fibers of different subjects are disjoint, and every absolutely
/// indecomposable component encountered lies over exactly its own subject.
fn check_partition(subjects: &[Subject], layers: &[Layer], degree_bound: u32) -> Tallies {
    let mut t = tallies();
    let fibers: Vec<Result<Vec<ClassifiedModule>>> = subjects
        .par_iter()
        .map(|s| {
            if s.simple {
                sigma_fiber(&s.module)
            } else {
                gamma_fiber(&s.module, degree_bound)
            }
        })
        .collect();
    let fibers: Vec<Vec<ClassifiedModule>> = fibers
        .into_iter()
        .enumerate()
        .map(|(i, r)| match r {
            Ok(v) => v,
            Err(e) => {
                t[PARTITION].fail(format!("subject {i}: fiber: {e}"));
                Vec::new()
            }
        })
        .collect();
    for i in 0..fibers.len() {
        for j in i + 1..fibers.len() {
            for a in &fibers[i] {
                for b in &fibers[j] {
                    match same_over_closure(&a.module, &b.module) {
                        Ok(same) => t[PARTITION].check(!same, || format!("fibers of subjects {i} and {j} meet")),
                        Err(e) => t[PARTITION].fail(format!("subjects {i}, {j}: {e}")),
                    }
                }
            }
        }
    }

    let results: Vec<Tallies> = layers
        .par_iter()
        .map(|layer| {
            let mut t = tallies();
            for (k, v) in layer.types.iter().enumerate() {
                let tag = format!("subject {} over GF(p^{}) component {k}", layer.subject, layer.n);
                let outcome = (|| -> Result<()> {
                    let c = ClassifiedModule::new(v.clone())?;
                    if !c.flags.absolutely_indecomposable {
                        return Ok(());
                    }
                    let below = gamma_of(&c)?;
                    let mut hits = Vec::new();
                    for (j, s) in subjects.iter().enumerate() {
                        if indecomposable_isomorphism(&s.module, &below)?.is_some() {
                            hits.push(j);
                        }
                    }
                    t[PARTITION].check(hits == [layer.subject], || {
                        format!("{tag}: lies over subjects {hits:?}")
                    });
                    if c.flags.absolutely_simple {
                        let w = sigma_of(&c)?;
                        t[PARTITION].check(
                            indecomposable_isomorphism(&subjects[layer.subject].module, &w)?.is_some(),
                            || format!("{tag}: simple image is another module"),
                        );
                    }
                    Ok(())
                })();
                if let Err(e) = outcome {
                    t[PARTITION].fail(format!("{tag}: {e}"));
                }
            }
            t
        })
        .collect();
    for r in results {
        merge(&mut t, r);
    }
    t
}

/// Whether two absolutely indecomposable pairs agree after extending both
/// to a common field.
pub fn same_over_closure(a: &Rep, b: &Rep) -> Result<bool> {
    let (fa, fb) = (a.field(), b.field());
    if fa.characteristic() != fb.characteristic() || a.dim() != b.dim() {
        return Ok(false);
    }
    let (da, db) = (fa.degree(), fb.degree());
    let common = da / gcd(da, db) * db;
    let l = make_field(fa.characteristic(), common)?;
    let (xa, xb) = (extend_scalars(a, &l)?, extend_scalars(b, &l)?);
    Ok(indecomposable_isomorphism(&xa, &xb)?.is_some())
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::meataxe::is_isomorphic;
    use crate::modrep::trivial_module;
    use crate::perm_group::catalog_group;

    fn cyclic(name: &str, m: &[u32], d: usize) -> Rep {
        let g = catalog_group(name).unwrap();
        let f = make_field(2, 1).unwrap();
        Rep::new(g, f, vec![Matrix::from_vec(d, d, m.to_vec())]).unwrap()
    }

    fn c3_two_dim() -> Rep {
        cyclic("C3", &[0, 1, 1, 1], 2)
    }

    fn c7_cubic() -> Rep {
        cyclic("C7", &[0, 1, 0, 0, 0, 1, 1, 1, 0], 3)
    }

    fn omega_module() -> Rep {
        let f4 = make_field(2, 2).unwrap();
        let c3 = catalog_group("C3").unwrap();
        Rep::new(
            c3,
            f4.clone(),
            vec![Matrix::from_vec(1, 1, vec![f4.primitive_element()])],
        )
        .unwrap()
    }

    #[test]
    fn up_relation_examples() {
        let w = c3_two_dim();
        assert!(up_relation(&w, &w).unwrap());
        let v = omega_module();
        assert!(up_relation(&w, &v).unwrap());
        let t = trivial_module(w.group(), w.field());
        assert!(!up_relation(&v, &t).unwrap());
        assert!(!up_relation(&v, &w).unwrap());
        assert!(!up_relation(&t, &v).unwrap());
    }

    #[test]
    fn fiber_examples() {
        let t = trivial_module(&catalog_group("S3").unwrap(), &make_field(2, 1).unwrap());
        let entries = fiber(&t, 3).unwrap();
        assert_eq!(entries.len(), 3);
        assert!(entries.iter().all(|e| e.multiplicity == 1 && e.entry.module.dim() == 1));

        let entries = fiber(&c3_two_dim(), 2).unwrap();
        let at2: Vec<_> = entries.iter().filter(|e| e.degree == 2).collect();
        assert_eq!(entries.iter().filter(|e| e.degree == 1).count(), 1);
        assert_eq!(at2.len(), 2);
        assert!(at2.iter().all(|e| e.multiplicity == 1 && e.galois_orbit_index == 0));

        let entries = fiber(&c7_cubic(), 3).unwrap();
        let at3: Vec<_> = entries.iter().filter(|e| e.degree == 3).collect();
        assert_eq!(at3.len(), 3);
        assert!(at3
            .iter()
            .all(|e| e.entry.module.dim() == 1 && e.entry.flags.absolutely_simple));
    }

    #[test]
    fn descent_examples() {
        let t = trivial_module(&catalog_group("A4").unwrap(), &make_field(3, 1).unwrap());
        assert_eq!(descend_component(&t, 4, 0).unwrap().field.degree(), 1);
        for i in 0..2 {
            let d = descend_component(&c3_two_dim(), 2, i).unwrap();
            assert_eq!(d.field.degree(), 2);
        }
        let d = descend_component(&c7_cubic(), 6, 0).unwrap();
        assert_eq!(d.field.degree(), 3);
        assert!(up_relation(&c7_cubic(), &d.module).unwrap());
        assert!(matches!(
            descend_component(&c3_two_dim(), 2, 5),
            Err(ClassifyError::Precondition(_))
        ));
    }

    #[test]
    fn gamma_and_sigma_examples() {
        let w = c3_two_dim();
        let y = ClassifiedModule::new(omega_module()).unwrap();
        assert!(y.flags.absolutely_simple);
        assert!(is_isomorphic(&gamma_of(&y).unwrap(), &w).unwrap());
        assert!(is_isomorphic(&sigma_of(&y).unwrap(), &w).unwrap());

        let f8 = make_field(2, 3).unwrap();
        let c7 = catalog_group("C7").unwrap();
        let z = ClassifiedModule::new(
            Rep::new(
                c7,
                f8.clone(),
                vec![Matrix::from_vec(1, 1, vec![f8.primitive_element()])],
            )
            .unwrap(),
        )
        .unwrap();
        assert_eq!(gamma_of(&z).unwrap().dim(), 3);

        let s3 = catalog_group("S3").unwrap();
        let f2 = make_field(2, 1).unwrap();
        let two = simple_modules(&s3, &f2, 0).unwrap().modules[1].clone();
        let x = ClassifiedModule::new(two.clone()).unwrap();
        assert!(is_isomorphic(&sigma_of(&x).unwrap(), &two).unwrap());

        let not_abs = ClassifiedModule::new(w).unwrap();
        assert!(matches!(sigma_of(&not_abs), Err(ClassifyError::Precondition(_))));
    }

    #[test]
    fn fiber_size_examples() {
        let t = trivial_module(&catalog_group("C3").unwrap(), &make_field(2, 1).unwrap());
        assert_eq!(sigma_fiber(&t).unwrap().len(), 1);
        assert_eq!(gamma_fiber(&t, 6).unwrap().len(), 1);
        assert_eq!(sigma_fiber(&c3_two_dim()).unwrap().len(), 2);
        assert_eq!(gamma_fiber(&c3_two_dim(), 6).unwrap().len(), 2);
        let fib = sigma_fiber(&c7_cubic()).unwrap();
        assert_eq!(fib.len(), 3);
        assert!(fib.iter().all(|e| e.field.degree() == 3));
        let c2 = catalog_group("C2").unwrap();
        let reg = regular_module(&c2, &make_field(2, 1).unwrap());
        let g = gamma_fiber(&reg, 6).unwrap();
        assert_eq!(g.len(), 1);
        assert!(is_isomorphic(&g[0].module, &reg).unwrap());
    }

    #[test]
    fn count_examples() {
        for (name, p, rows) in [
            ("C7", 2, vec![(1, 1, 1), (3, 3, 3), (3, 3, 3)]),
            ("S3", 3, vec![(1, 1, 1), (1, 1, 1)]),
            ("A4", 2, vec![(1, 1, 1), (2, 2, 2)]),
        ] {
            let g = catalog_group(name).unwrap();
            let r = count_absolutely_simple(&g, p, 0).unwrap();
            let got: Vec<_> = r.rows.iter().map(|r| (r.dim, r.end_degree, r.fiber_size)).collect();
            assert_eq!(got, rows, "{name} at {p}");
            assert!(r.agree);
            assert_eq!(r.total, r.oracle);
        }
    }

    #[test]
    fn verify_small_case() {
        let c3 = catalog_group("C3").unwrap();
        let report = verify_classification(&c3, 2, 2, 0).unwrap();
        for c in &report.clauses {
            assert!(c.passed(), "{}: {:?}", c.name, c.failures);
        }
    }
}
