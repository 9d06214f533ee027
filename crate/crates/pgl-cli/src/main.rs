//! Command-line driver: parse spec files, run constructions and analyses,
//! emit deterministic line-based reports.
//!
//! Exit codes: 0 success, 2 spec error, 3 budget-inconclusive,
//! 4 invariant violation discovered.

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use pgl_core::finite::{self, SearchBounds};
use pgl_core::invariants::{
    classify_categoricity, divisible_approx, enumerate_character, isomorphic_by_ulm, order_of,
    Verdict,
};
use pgl_core::limitwise::{decompose_complement, delta2_isomorphism, Delta2Options};
use pgl_core::presentation::{
    CompFate, GrowthSchedule, OpaqueGroup, StagedPresentation,
};
use pgl_core::scott::verify_scott_family;
use pgl_core::specfile::{parse_spec, ParsedSpec};
use std::fmt::Write as _;
use std::path::PathBuf;

const EXIT_OK: i32 = 0;
const EXIT_SPEC: i32 = 2;
const EXIT_INCONCLUSIVE: i32 = 3;
const EXIT_VIOLATION: i32 = 4;

#[derive(Parser)]
#[command(name = "pgl", about = "staged presentations of abelian p-groups", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Structure spec file.
    #[arg(long)]
    spec: PathBuf,
    /// Construction stages to run.
    #[arg(long, default_value_t = 2000)]
    stages: u64,
    /// Analysis budget (witness/probe window).
    #[arg(long, default_value_t = 2000)]
    budget: u64,
    /// Brute-force order bound; PGL_MAX_ORDER overrides the default.
    #[arg(long)]
    bound: Option<u64>,
    /// Construction schedule seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build a presentation from an isomorphism-type spec and report its
    /// growth.
    Build(Common),
    /// Build the equivalence structure of the spec and transform it into a
    /// group presentation.
    Transform(Common),
    /// Extract invariants from the presentation: orders, divisibility,
    /// confirmed character entries.
    Invariants(Common),
    /// Classify the categoricity of the spec's isomorphism type.
    Classify(Common),
    /// Construct a limit-computable isomorphism between two presentations
    /// of the same type.
    Iso {
        #[command(flatten)]
        common: Common,
        /// Second spec; defaults to the first with a shifted schedule seed.
        #[arg(long)]
        spec2: Option<PathBuf>,
    },
    /// Verify the Scott-family property on a policy-compliant truncation.
    ScottVerify(Common),
    /// Grow the divisible-part complement chain and report it.
    Decompose(Common),
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            EXIT_SPEC
        }
    };
    std::process::exit(code);
}

fn search_bounds(common: &Common) -> SearchBounds {
    let env = std::env::var("PGL_MAX_ORDER")
        .ok()
        .and_then(|v| v.parse::<u64>().ok());
    let max_order = common
        .bound
        .or(env)
        .unwrap_or(finite::DEFAULT_MAX_ORDER);
    SearchBounds { max_order }
}

fn load(common: &Common) -> anyhow::Result<ParsedSpec> {
    let text = std::fs::read_to_string(&common.spec)
        .with_context(|| format!("reading {}", common.spec.display()))?;
    parse_spec(&text).map_err(|e| anyhow::anyhow!("{}: {e}", common.spec.display()))
}

fn emit(common: &Common, report: &str) -> anyhow::Result<()> {
    match &common.out {
        Some(path) => std::fs::write(path, report)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{report}"),
    }
    Ok(())
}

fn header(spec: &ParsedSpec) -> String {
    let mut out = String::new();
    for line in spec.print().lines() {
        let _ = writeln!(out, "spec {line}");
    }
    out
}

fn build_presentation(spec: &ParsedSpec, common: &Common) -> anyhow::Result<StagedPresentation> {
    let equiv = pgl_core::presentation::EquivalenceStructure::build_scheduled(
        spec.character.clone(),
        spec.divisible_rank,
        spec.inf_mode,
        common.seed,
    )
    .map_err(|e| anyhow::anyhow!("{e}"))?;
    let mut pres = StagedPresentation::transform(spec.p, equiv);
    pres.advance_by(common.stages);
    Ok(pres)
}

fn component_census(pres: &StagedPresentation, out: &mut String) {
    let d = pres.decoder();
    let _ = writeln!(out, "components {}", d.component_count());
    for c in 0..d.component_count() {
        let fate = match d.component_fate(c) {
            CompFate::Divisible => "divisible".to_string(),
            CompFate::Settles(n) => format!("settles {n}"),
        };
        let _ = writeln!(out, "component {c} depth {} {}", d.component_depth(c), fate);
    }
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Build(common) => {
            let spec = load(&common)?;
            let t = spec.iso_type();
            let mut pres =
                StagedPresentation::build_from_iso_type(&t, GrowthSchedule { seed: common.seed });
            pres.advance_by(common.stages);
            let mut out = header(&spec);
            let _ = writeln!(out, "stage {}", pres.stage());
            let _ = writeln!(out, "universe_size {}", pres.universe_size());
            component_census(&pres, &mut out);
            emit(&common, &out)?;
            Ok(EXIT_OK)
        }
        Command::Transform(common) => {
            let spec = load(&common)?;
            let pres = build_presentation(&spec, &common)?;
            let mut out = header(&spec);
            let d = pres.decoder();
            let equiv = d.equivalence().expect("transform carries its structure");
            let (sizes, infinite) = equiv.census();
            let _ = writeln!(out, "stage {}", pres.stage());
            let _ = writeln!(out, "universe_size {}", pres.universe_size());
            for (size, count) in sizes {
                let _ = writeln!(out, "classes size {size} count {count}");
            }
            let _ = writeln!(out, "classes infinite {infinite}");
            component_census(&pres, &mut out);
            emit(&common, &out)?;
            Ok(EXIT_OK)
        }
        Command::Invariants(common) => {
            let spec = load(&common)?;
            let pres = build_presentation(&spec, &common)?;
            let mut out = header(&spec);
            let _ = writeln!(out, "stage {}", pres.stage());
            let _ = writeln!(out, "universe_size {}", pres.universe_size());
            let witness = (common.budget / (spec.p * spec.p)).max(2);
            let obs = enumerate_character(&pres, witness, common.budget);
            let _ = writeln!(out, "witness_budget {witness}");
            let _ = writeln!(out, "probe_budget {}", common.budget);
            for (n, k) in &obs.confirmed {
                let _ = writeln!(out, "character {n} {k}");
            }
            let prefix = pres.universe_size().min(16);
            for id in 0..prefix {
                let o = order_of(&pres, id);
                let div = match divisible_approx(&pres, id, common.budget).value {
                    Verdict::Yes => "yes",
                    Verdict::No => "no",
                    Verdict::Unknown => "unknown",
                };
                let _ = writeln!(out, "element {id} order_exponent {o} divisible {div}");
            }
            emit(&common, &out)?;
            Ok(EXIT_OK)
        }
        Command::Classify(common) => {
            let spec = load(&common)?;
            let t = spec.iso_type();
            let class = classify_categoricity(&t).map_err(|e| anyhow::anyhow!("{e}"))?;
            let mut out = header(&spec);
            let _ = writeln!(out, "level {}", class.level);
            let _ = writeln!(out, "fine_level {}", class.fine_level());
            let _ = writeln!(out, "problem1_open {}", class.problem1_open);
            let _ = writeln!(
                out,
                "not_plain_delta2_given_computable_copy {}",
                class.not_plain_delta2_given_computable_copy
            );
            emit(&common, &out)?;
            Ok(EXIT_OK)
        }
        Command::Iso { common, spec2 } => {
            let spec_a = load(&common)?;
            let spec_b = match &spec2 {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    parse_spec(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?
                }
                None => spec_a.clone(),
            };
            let mut out = header(&spec_a);
            for line in spec_b.print().lines() {
                let _ = writeln!(out, "spec2 {line}");
            }
            if !isomorphic_by_ulm(&spec_a.iso_type(), &spec_b.iso_type()) {
                let _ = writeln!(out, "invariant_mismatch ulm");
                emit(&common, &out)?;
                return Ok(EXIT_VIOLATION);
            }
            let mut a = StagedPresentation::build_from_iso_type(
                &spec_a.iso_type(),
                GrowthSchedule { seed: common.seed },
            );
            let mut b = StagedPresentation::build_from_iso_type(
                &spec_b.iso_type(),
                GrowthSchedule {
                    seed: common.seed + 1,
                },
            );
            a.advance_by(common.stages);
            b.advance_by(common.stages);
            let opts = Delta2Options {
                target_prefix: 50,
                budget: common.budget,
            };
            match delta2_isomorphism(&a, &b, opts) {
                Ok(map) => {
                    let stable = map.stabilized_prefix(10);
                    let _ = writeln!(out, "stabilized_prefix {stable}");
                    let census: u32 = (0..stable).map(|id| map.mind_changes_of(id)).sum();
                    let _ = writeln!(out, "mind_changes_total {census}");
                    for id in 0..stable.min(50) {
                        let _ = writeln!(
                            out,
                            "h {id} -> {}",
                            map.image_of(id).expect("stable prefix decided")
                        );
                    }
                    emit(&common, &out)?;
                    Ok(EXIT_OK)
                }
                Err(err) => {
                    let _ = writeln!(out, "inconclusive {err}");
                    emit(&common, &out)?;
                    Ok(EXIT_INCONCLUSIVE)
                }
            }
        }
        Command::ScottVerify(common) => {
            let spec = load(&common)?;
            let t = spec.iso_type();
            let bounds = search_bounds(&common);
            let maxexp = t.cyclic.max_size().unwrap_or(0);
            let period = t.reduced_period().unwrap_or(0);
            let depth = (3 + maxexp).max(maxexp + period + 1);
            // widest truncation within the order bound
            let mut width = 1u32;
            while t.truncate(depth, width + 1).order() <= bounds.max_order as u128 {
                width += 1;
                if width > 8 {
                    break;
                }
            }
            let truncation = t.truncate(depth, width);
            let mut out = header(&spec);
            let _ = writeln!(out, "truncation {truncation}");
            let mut ok = true;
            for len in 1..=2usize {
                let report = verify_scott_family(&t, &truncation, len, bounds)
                    .map_err(|e| anyhow::anyhow!("{e}"))?;
                let _ = writeln!(
                    out,
                    "len {len} tuples {} classes {} pairs {} violations {}",
                    report.tuples_checked,
                    report.classes,
                    report.pairs_checked,
                    report.violations.len()
                );
                ok &= report.clean();
            }
            emit(&common, &out)?;
            Ok(if ok { EXIT_OK } else { EXIT_VIOLATION })
        }
        Command::Decompose(common) => {
            let spec = load(&common)?;
            let pres = build_presentation(&spec, &common)?;
            let mut out = header(&spec);
            let chain = match decompose_complement(&pres, common.budget) {
                Ok(chain) => chain,
                Err(e) => {
                    let _ = writeln!(out, "error {e}");
                    emit(&common, &out)?;
                    return Ok(EXIT_SPEC);
                }
            };
            let _ = writeln!(out, "steps {}", chain.steps());
            let _ = writeln!(out, "complement_size {}", chain.current_set().len());
            for id in 0..pres.universe_size().min(16) {
                if let Some(m) = chain.is_member(id) {
                    let _ = writeln!(out, "member {id} {m}");
                }
            }
            // purity of the materialized complement inside a snapshot
            let d = pres.decoder();
            let view = d.view_at_action(d.action_count());
            if view.universe() <= search_bounds(&common).max_order as u128 {
                let elements: Vec<_> = chain
                    .current_set()
                    .iter()
                    .map(|&id| view.element_of(&pres, id))
                    .collect();
                let sub = finite::Subgroup::from_elements(elements, &view.spec)
                    .map_err(|e| anyhow::anyhow!("{e}"))?;
                let pure = finite::is_pure(&sub, &view.spec).map_err(|e| anyhow::anyhow!("{e}"))?;
                let _ = writeln!(out, "complement_pure {pure}");
                if !pure {
                    emit(&common, &out)?;
                    return Ok(EXIT_VIOLATION);
                }
            }
            emit(&common, &out)?;
            Ok(EXIT_OK)
        }
    }
}
