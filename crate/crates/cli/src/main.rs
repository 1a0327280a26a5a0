//! `modclass`: batch front end for the modular classification library.
//!
//! Exit status: 0 on success (and agreement for `count`, all clauses passing
//! for `verify`), 2 when a consistency check fails, 1 on usage or IO errors.

mod cache;
mod docs;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use modclass::classify::{
    count_absolutely_simple, fiber, verify_classification, ClassificationReport, ClassifyError, VerificationReport,
    DEFAULT_DEGREE_BOUND,
};
use modclass::finite_field::{make_field, set_max_field_size, FiniteField, DEFAULT_MAX_FIELD_SIZE};
use modclass::green::{green_correspondent, source, vertex, GreenError};
use modclass::meataxe::{decompose, end_structure, simple_modules, MeatAxeError};
use modclass::modrep::{extend_scalars, restrict_scalars, ModError, ModuleDoc, Rep};
use modclass::perm_group::{catalog, normalizer, set_max_group_order, GroupDoc, PermGroup, DEFAULT_MAX_GROUP_ORDER};
use serde::de::DeserializeOwned;
use serde::Serialize;

use cache::Cache;
use docs::*;

#[derive(Parser)]
#[command(
    name = "modclass",
    version,
    about = "Simple and indecomposable modules of finite groups over finite fields"
)]
struct Cli {
    /// Seed for every randomized routine; answers do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Directory of the result cache; no caching when omitted.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_GROUP_ORDER)]
    max_group_order: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_FIELD_SIZE)]
    max_field_size: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Structured,
}

#[derive(clap::Args)]
struct GroupArgs {
    /// Catalog name (C2, C3, C5, C7, S3, A4, D8, Q8, S4) or a group file.
    #[arg(short = 'g', long)]
    group: String,
    #[arg(short = 'p', long)]
    prime: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Simple modules over the prime field.
    Simples(GroupArgs),
    /// Count absolutely simple modules and compare with the p-regular class count.
    Count(GroupArgs),
    /// Components of a simple module over GF(p^n) for n up to the bound.
    Fiber {
        #[command(flatten)]
        group: GroupArgs,
        /// Index of the simple module, as listed by `simples`.
        #[arg(short = 'w', long)]
        index: usize,
        #[arg(short = 'b', long, default_value_t = DEFAULT_DEGREE_BOUND)]
        bound: u32,
    },
    /// Run every consistency clause of the classification.
    Verify {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(short = 'b', long, default_value_t = DEFAULT_DEGREE_BOUND)]
        bound: u32,
    },
    /// Krull-Schmidt decomposition of a module file.
    Decompose { module: PathBuf },
    /// Vertex of an indecomposable module file.
    Vertex { module: PathBuf },
    /// Vertex and source of an indecomposable module file.
    Source { module: PathBuf },
    /// Vertex, source and Green correspondent in the normalizer of the vertex.
    Green { module: PathBuf },
    /// Extend scalars to GF(p^n).
    Extend {
        module: PathBuf,
        #[arg(short = 'n', long)]
        degree: u32,
    },
    /// Restrict scalars to the subfield GF(p^n).
    Restrict {
        module: PathBuf,
        #[arg(short = 'n', long)]
        degree: u32,
    },
}

/// Failure modes mapped onto exit statuses.
enum Failure {
    Usage(anyhow::Error),
    Consistency(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        if e.is_consistency_failure() {
            Failure::Consistency(e.to_string())
        } else {
            Failure::Usage(e.into())
        }
    }
}

impl From<GreenError> for Failure {
    fn from(e: GreenError) -> Self {
        ClassifyError::from(e).into()
    }
}

impl From<MeatAxeError> for Failure {
    fn from(e: MeatAxeError) -> Self {
        Failure::Usage(e.into())
    }
}

impl From<ModError> for Failure {
    fn from(e: ModError) -> Self {
        Failure::Usage(e.into())
    }
}

type Outcome<T> = Result<T, Failure>;

struct Ctx {
    seed: u64,
    format: Format,
    cache: Option<Cache>,
}

impl Ctx {
    /// Runs `compute` through the cache when one is configured.
    fn cached<T: Serialize + DeserializeOwned>(
        &self,
        op: &str,
        inputs: serde_json::Value,
        compute: impl FnOnce() -> Outcome<T>,
    ) -> Outcome<T> {
        match &self.cache {
            None => compute(),
            Some(cache) => cache.get_or_compute(&Cache::key(op, &inputs), compute)?,
        }
    }

    fn emit<T: Serialize>(&self, command: &str, doc: &T, table: impl Fn(&T) -> String) -> anyhow::Result<()> {
        match self.format {
            Format::Table => print!("{}", table(doc)),
            Format::Structured => {
                let env = Envelope {
                    schema_version: SCHEMA_VERSION,
                    command,
                    result: doc,
                };
                println!("{}", serde_json::to_string_pretty(&env)?);
            }
        }
        Ok(())
    }
}

fn load_group_doc(arg: &str) -> anyhow::Result<GroupDoc> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {arg}"))?;
        return serde_json::from_str(&text).with_context(|| format!("malformed group file {arg}"));
    }
    catalog(arg).with_context(|| format!("{arg:?} is neither a group file nor a catalog name"))
}

fn load_group(args: &GroupArgs) -> anyhow::Result<(GroupDoc, Arc<PermGroup>, Arc<FiniteField>)> {
    let doc = load_group_doc(&args.group)?;
    let group = doc.build()?;
    let field = make_field(args.prime, 1)?;
    Ok((doc, group, field))
}

fn load_module(path: &Path) -> anyhow::Result<(ModuleDoc, Rep)> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let doc: ModuleDoc =
        serde_json::from_str(&text).with_context(|| format!("malformed module document {}", path.display()))?;
    let rep = doc
        .build()
        .with_context(|| format!("invalid module in {}", path.display()))?;
    Ok((doc, rep))
}

fn simples_doc(group: &Arc<PermGroup>, field: &Arc<FiniteField>, seed: u64) -> Outcome<SimplesDoc> {
    let set = simple_modules(group, field, seed)?;
    let modules = set
        .modules
        .iter()
        .zip(&set.end_degrees)
        .enumerate()
        .map(|(index, (w, &end_degree))| SimpleEntry {
            index,
            dim: w.dim(),
            end_degree,
            absolutely_simple: end_degree == 1,
            module: w.to_doc(),
        })
        .collect();
    Ok(SimplesDoc {
        group: group.to_doc(),
        field: field.to_doc(),
        modules,
    })
}

fn fiber_doc(
    group: &Arc<PermGroup>,
    field: &Arc<FiniteField>,
    index: usize,
    bound: u32,
    seed: u64,
) -> Outcome<FiberDoc> {
    let set = simple_modules(group, field, seed)?;
    let Some(w) = set.modules.get(index) else {
        return Err(Failure::Usage(anyhow::anyhow!(
            "index {index} out of range: there are {} simple modules",
            set.modules.len()
        )));
    };
    let entries = fiber(w, bound)?
        .into_iter()
        .map(|e| FiberRow {
            degree: e.degree,
            dim: e.entry.module.dim(),
            multiplicity: e.multiplicity,
            galois_orbit: e.galois_orbit_index,
            absolutely_simple: e.entry.flags.absolutely_simple,
            absolutely_indecomposable: e.entry.flags.absolutely_indecomposable,
            module: e.entry.module.to_doc(),
        })
        .collect();
    Ok(FiberDoc {
        group: group.to_doc(),
        p: field.characteristic(),
        index,
        dim: w.dim(),
        end_degree: set.end_degrees[index],
        degree_bound: bound,
        entries,
    })
}

fn decomposition_doc(v: &Rep, seed: u64) -> Outcome<DecompositionDoc> {
    let f = v.field();
    let d = decompose(v, seed)?;
    let mut summands = Vec::new();
    for (u, multiplicity) in &d.summands {
        let end = end_structure(u)?;
        summands.push(SummandRow {
            dim: u.dim(),
            multiplicity: *multiplicity,
            end_dim: end.dim(),
            local_top_dim: end.top_dim(),
            module: u.to_doc(),
        });
    }
    let basis_change = (0..d.basis_change.rows())
        .map(|r| d.basis_change.row(r).iter().map(|&e| f.coeffs(e)).collect())
        .collect();
    Ok(DecompositionDoc {
        field: f.to_doc(),
        dim: v.dim(),
        summands,
        basis_change,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum GreenDepth {
    Vertex,
    Source,
    Correspondent,
}

fn green_doc(v: &Rep, depth: GreenDepth) -> Outcome<GreenDoc> {
    let g = v.group();
    let q = vertex(v)?;
    let vertex_generators = q.generators().iter().map(|&x| g.element(x).to_one_based()).collect();
    let mut doc = GreenDoc {
        vertex_order: q.order(),
        vertex_generators,
        source: None,
        normalizer: None,
        correspondent: None,
    };
    if depth >= GreenDepth::Source {
        doc.source = Some(source(v, &q)?.to_doc());
    }
    if depth >= GreenDepth::Correspondent {
        let h = normalizer(g, &q);
        doc.normalizer = Some(h.as_group().to_doc());
        doc.correspondent = Some(green_correspondent(v, &q, &h)?.to_doc());
    }
    Ok(doc)
}

fn run(cli: Cli) -> Outcome<ExitCode> {
    set_max_group_order(cli.max_group_order);
    set_max_field_size(cli.max_field_size);
    let ctx = Ctx {
        seed: cli.seed,
        format: cli.format,
        cache: cli.cache_dir.as_deref().map(Cache::open).transpose()?,
    };
    let seed = ctx.seed;
    let group_inputs = |doc: &GroupDoc, p: u32| serde_json::json!({"group": doc, "p": p, "seed": seed});

    match cli.command {
        Command::Simples(args) => {
            let (gdoc, group, field) = load_group(&args)?;
            let doc = ctx.cached("simples", group_inputs(&gdoc, args.prime), || {
                simples_doc(&group, &field, seed)
            })?;
            ctx.emit("simples", &doc, simples_table)?;
        }
        Command::Count(args) => {
            let (gdoc, group, _) = load_group(&args)?;
            let report: ClassificationReport = ctx.cached("count", group_inputs(&gdoc, args.prime), || {
                Ok(count_absolutely_simple(&group, args.prime, seed)?)
            })?;
            ctx.emit("count", &report, count_table)?;
            if !report.agree {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Fiber {
            group: args,
            index,
            bound,
        } => {
            if bound == 0 {
                return Err(anyhow::anyhow!("the degree bound must be at least 1").into());
            }
            let (gdoc, group, field) = load_group(&args)?;
            let mut inputs = group_inputs(&gdoc, args.prime);
            inputs["index"] = index.into();
            inputs["bound"] = bound.into();
            let doc = ctx.cached("fiber", inputs, || fiber_doc(&group, &field, index, bound, seed))?;
            ctx.emit("fiber", &doc, fiber_table)?;
        }
        Command::Verify { group: args, bound } => {
            if bound == 0 {
                return Err(anyhow::anyhow!("the degree bound must be at least 1").into());
            }
            let (gdoc, group, _) = load_group(&args)?;
            let mut inputs = group_inputs(&gdoc, args.prime);
            inputs["bound"] = bound.into();
            let report: VerificationReport = ctx.cached("verify", inputs, || {
                Ok(verify_classification(&group, args.prime, bound, seed)?)
            })?;
            ctx.emit("verify", &report, verify_table)?;
            if !report.all_passed() {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Decompose { module } => {
            let (mdoc, v) = load_module(&module)?;
            let inputs = serde_json::json!({"module": mdoc, "seed": seed});
            let doc = ctx.cached("decompose", inputs, || decomposition_doc(&v, seed))?;
            ctx.emit("decompose", &doc, decomposition_table)?;
        }
        Command::Vertex { module } => green_command(&ctx, "vertex", &module, GreenDepth::Vertex)?,
        Command::Source { module } => green_command(&ctx, "source", &module, GreenDepth::Source)?,
        Command::Green { module } => green_command(&ctx, "green", &module, GreenDepth::Correspondent)?,
        Command::Extend { module, degree } => {
            let (_, v) = load_module(&module)?;
            let l = make_field(v.field().characteristic(), degree).map_err(anyhow::Error::from)?;
            let doc = extend_scalars(&v, &l)?.to_doc();
            ctx.emit("extend", &doc, module_table)?;
        }
        Command::Restrict { module, degree } => {
            let (_, v) = load_module(&module)?;
            let k = make_field(v.field().characteristic(), degree).map_err(anyhow::Error::from)?;
            let doc = restrict_scalars(&v, &k)?.to_doc();
            ctx.emit("restrict", &doc, module_table)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn green_command(ctx: &Ctx, name: &str, module: &Path, depth: GreenDepth) -> Outcome<()> {
    let (mdoc, v) = load_module(module)?;
    let inputs = serde_json::json!({"module": mdoc});
    let doc = ctx.cached(name, inputs, || green_doc(&v, depth))?;
    ctx.emit(name, &doc, green_table)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Consistency(msg)) => {
            eprintln!("consistency failure: {msg}");
            ExitCode::from(2)
        }
    }
}
