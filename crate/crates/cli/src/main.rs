//! Command-line front end for the hopfsmooth engine.
//!
//! Exit status: 0 on success, 1 when a mathematical check fails (an
//! inconsistent report, a non-cocycle, a failed suite, ...), 2 on input
//! errors. All output is byte-deterministic for a fixed input.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use hopfsmooth::cleft::{
    chained_power_cleft_extension, crossed_product_from_cocycle, extract_cocycle,
    group_cleft_extension, restriction_matrix_t, validate_symmetric_cocycle,
};
use hopfsmooth::cohomology::{
    induced_class_map, mu_data, restriction_data, second_cohomology, smoothness_report, Flavor,
    PlusAlgebra,
};
use hopfsmooth::corpus::{default_corpus, load_corpus_str, run_suite, SuiteReport};
use hopfsmooth::decompose::decompose_local_hopf;
use hopfsmooth::exactla::{Field, FieldSpec, Fp, Matrix, Rationals};
use hopfsmooth::hopf::{hopf_subalgebra_from_subgroup, GroupData, HopfTable};
use hopfsmooth::io::{
    build_preset_hopf, cocycle_from_json, cocycle_to_json, decomposition_to_json,
    extension_from_json, extension_to_json, field_of_json, hopf_from_json,
    hopf_from_presentation_json, hopf_to_json, parse_preset, to_canonical_string, PresetKind,
};
use hopfsmooth::{Error, Result};
use serde_json::{json, Map, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "hopfsmooth",
    version,
    about = "Exact smoothness analysis for finite-dimensional commutative Hopf algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Preset: group:<field>:<o1,..> | trunc:<field>:<e1,..> |
    /// etale:<field>:<o1,..> | sample1:<p>:<n>:<M>
    #[arg(long)]
    preset: Option<String>,
    /// JSON file holding a Hopf table or a presentation object
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, default_value = "json", value_parser = ["table", "json"])]
    format: String,
    /// Write the report to a file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Full smoothness report (verdicts, cohomology dimensions, consistency)
    Check {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Second Hochschild cohomology dimensions (cochain-complex route)
    Cohom {
        #[command(flatten)]
        input: InputArgs,
        /// Degree-2 cochain space to use
        #[arg(long, default_value = "symmetric")]
        flavor: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Kernel of the induced multiplication (homology route)
    Mu {
        #[command(flatten)]
        input: InputArgs,
        /// Degree-2 chain space to use
        #[arg(long, default_value = "symmetric")]
        flavor: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Restriction of second cohomology to a subgroup algebra
    Restrict {
        #[command(flatten)]
        input: InputArgs,
        /// Subgroup generator rows, e.g. "2,0;0,1" (entries in ambient
        /// generator exponents)
        #[arg(long)]
        subgroup: String,
        #[arg(long, default_value = "symmetric")]
        flavor: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Build the crossed-product extension classified by a cocycle file
    CleftBuild {
        #[command(flatten)]
        input: InputArgs,
        /// JSON file with the symmetric cocycle matrix {"s": [[...]]}
        #[arg(long)]
        cocycle: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Extract the classifying cocycle from a cleft extension
    CleftExtract {
        /// Extension JSON file (self-contained, embeds its Hopf table)
        #[arg(long)]
        file: Option<PathBuf>,
        /// Family preset (group:... or sample1:...) to instantiate instead
        /// of a file
        #[arg(long)]
        preset: Option<String>,
        /// Family parameters for --preset: relation constants a_i (group)
        /// or chain constants c_i (sample1), comma-separated scalars
        #[arg(long)]
        params: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Test a symmetric 2-cochain file for the cocycle identity
    CocycleTest {
        #[command(flatten)]
        input: InputArgs,
        /// JSON file with the symmetric cochain matrix {"s": [[...]]}
        #[arg(long)]
        cocycle: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Decompose a local algebra into truncated polynomial generators
    Decompose {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run every check over the regression corpus
    Suite {
        /// Corpus JSON file (default: built-in corpus, or $HOPFSMOOTH_CORPUS)
        #[arg(long)]
        file: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Write an algebra as canonical JSON
    Export {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let line = e
                .to_string()
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments")
                .to_string();
            eprintln!("{line}");
            return ExitCode::from(2);
        }
    };
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}

/// Run one verb body per concrete field implementation.
macro_rules! with_field {
    ($spec:expr, |$f:ident| $body:expr) => {
        match $spec {
            FieldSpec::Rationals => {
                let $f = Rationals;
                $body
            }
            FieldSpec::Prime(p) => {
                let $f = Fp::new(p)?;
                $body
            }
        }
    };
}

enum SourceDoc {
    Preset(PresetKind),
    Json(Value),
}

fn read_json(path: &PathBuf) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io { path: path.display().to_string(), source: e })?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Json(format!("{}: {e}", path.display())))
}

fn load_source(input: &InputArgs) -> Result<(FieldSpec, SourceDoc)> {
    match (&input.preset, &input.file) {
        (Some(p), None) => {
            let preset = parse_preset(p)?;
            Ok((preset.field, SourceDoc::Preset(preset.kind)))
        }
        (None, Some(path)) => {
            let v = read_json(path)?;
            let spec = field_of_json(&v)?;
            Ok((spec, SourceDoc::Json(v)))
        }
        _ => Err(Error::InvalidInput(
            "exactly one of --preset and --file is required".into(),
        )),
    }
}

fn build_hopf<K: Field>(f: &K, doc: &SourceDoc) -> Result<HopfTable<K>> {
    match doc {
        SourceDoc::Preset(kind) => build_preset_hopf(f, kind),
        SourceDoc::Json(v) => {
            if v.get("kind").is_some() {
                hopf_from_presentation_json(f, v)
            } else {
                hopf_from_json(f, v)
            }
        }
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => serde_json::to_string(other).expect("JSON serialization cannot fail"),
    }
}

fn render(v: &Value, format: &str) -> String {
    if format == "json" {
        return to_canonical_string(v);
    }
    match v {
        Value::Object(map) => {
            let width = map.keys().map(|k| k.len()).max().unwrap_or(0);
            let mut out = String::new();
            for (k, val) in map {
                out.push_str(&format!("{k:<width$}  {}\n", compact(val)));
            }
            out
        }
        other => format!("{}\n", compact(other)),
    }
}

fn emit(text: &str, out: &OutputArgs) -> Result<()> {
    match &out.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Io { path: path.display().to_string(), source: e }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_subgroup_rows(s: &str) -> Result<Vec<Vec<u64>>> {
    s.split(';')
        .map(|row| {
            row.split(',')
                .map(|t| {
                    t.trim().parse::<u64>().map_err(|_| {
                        Error::InvalidInput(format!(
                            "subgroup rows must be comma-separated integers; got {t:?}"
                        ))
                    })
                })
                .collect()
        })
        .collect()
}

fn parse_params<K: Field>(f: &K, s: &str, want: usize, what: &str) -> Result<Vec<K::Elem>> {
    let vals: Vec<K::Elem> =
        s.split(',').map(|t| f.parse(t.trim())).collect::<Result<_>>()?;
    if vals.len() != want {
        return Err(Error::InvalidInput(format!(
            "{what} takes {want} parameters, got {}",
            vals.len()
        )));
    }
    Ok(vals)
}

fn dispatch(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Check { input, out } => {
            let (spec, doc) = load_source(&input)?;
            with_field!(spec, |f| {
                let h = build_hopf(&f, &doc)?;
                let report = smoothness_report(&h)?;
                let mut v = serde_json::to_value(&report)
                    .expect("report serialization cannot fail");
                let obj = v.as_object_mut().unwrap();
                obj.insert("field".into(), json!(spec.token()));
                obj.insert("dim".into(), json!(h.dim()));
                emit(&render(&v, &out.format), &out)?;
                Ok(if report.consistent { 0 } else { 1 })
            })
        }
        Command::Cohom { input, flavor, out } => {
            let flavor = Flavor::parse_token(&flavor)?;
            let (spec, doc) = load_source(&input)?;
            with_field!(spec, |f| {
                let h = build_hopf(&f, &doc)?;
                let coh = second_cohomology(&h, flavor)?;
                let v = json!({
                    "flavor": flavor.token(),
                    "plus_dim": coh.plus_dim,
                    "cochain_dim": coh.pair_dim,
                    "cocycle_dim": coh.cocycles.dim(),
                    "coboundary_dim": coh.rank_d1,
                    "h2_dim": coh.h2_dim,
                });
                emit(&render(&v, &out.format), &out)?;
                Ok(0)
            })
        }
        Command::Mu { input, flavor, out } => {
            let flavor = Flavor::parse_token(&flavor)?;
            let (spec, doc) = load_source(&input)?;
            with_field!(spec, |f| {
                let h = build_hopf(&f, &doc)?;
                let mu = mu_data(&h, flavor)?;
                let v = json!({
                    "flavor": flavor.token(),
                    "plus_dim": mu.plus_dim,
                    "chain_dim": mu.pair_dim,
                    "ker_delta1_dim": mu.ker_delta1.dim(),
                    "im_delta2_dim": mu.im_delta2.dim(),
                    "ker_mu_dim": mu.ker_mu_dim,
                });
                emit(&render(&v, &out.format), &out)?;
                Ok(0)
            })
        }
        Command::Restrict { input, subgroup, flavor, out } => {
            let flavor = Flavor::parse_token(&flavor)?;
            let rows = parse_subgroup_rows(&subgroup)?;
            let (spec, doc) = load_source(&input)?;
            let orders = group_orders_of(&doc)?;
            with_field!(spec, |f| {
                let v = restrict_report(&f, &orders, &rows, flavor)?;
                let agree = v["ranks_agree"].as_bool().unwrap_or(true);
                emit(&render(&v, &out.format), &out)?;
                Ok(if agree { 0 } else { 1 })
            })
        }
        Command::CleftBuild { input, cocycle, out } => {
            let (spec, doc) = load_source(&input)?;
            let cv = read_json(&cocycle)?;
            with_field!(spec, |f| {
                let h = build_hopf(&f, &doc)?;
                let plus_dim = h.dim() - 1;
                let (_, s) = cocycle_from_json(&f, &cv, plus_dim)?;
                let ext = crossed_product_from_cocycle(&h, &s)?;
                emit(&render(&extension_to_json(&ext), &out.format), &out)?;
                Ok(0)
            })
        }
        Command::CleftExtract { file, preset, params, out } => {
            let v = cleft_extract_report(file, preset, params)?;
            emit(&render(&v, &out.format), &out)?;
            Ok(0)
        }
        Command::CocycleTest { input, cocycle, out } => {
            let (spec, doc) = load_source(&input)?;
            let cv = read_json(&cocycle)?;
            with_field!(spec, |f| {
                let h = build_hopf(&f, &doc)?;
                let plus_dim = h.dim() - 1;
                let (_, s) = cocycle_from_json(&f, &cv, plus_dim)?;
                let plus = PlusAlgebra::new(&h)?;
                let verdict = match validate_symmetric_cocycle(&plus, &s) {
                    Ok(()) => json!({"cocycle": true}),
                    Err(Error::BadCocycle(msg)) => json!({"cocycle": false, "detail": msg}),
                    Err(e) => return Err(e),
                };
                let ok = verdict["cocycle"].as_bool().unwrap();
                emit(&render(&verdict, &out.format), &out)?;
                Ok(if ok { 0 } else { 1 })
            })
        }
        Command::Decompose { input, out } => {
            let (spec, doc) = load_source(&input)?;
            with_field!(spec, |f| {
                let h = build_hopf(&f, &doc)?;
                let dec = decompose_local_hopf(&h)?;
                emit(&render(&decomposition_to_json(&f, &dec, true), &out.format), &out)?;
                Ok(0)
            })
        }
        Command::Suite { file, out } => {
            let entries = match file {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Error::Io { path: path.display().to_string(), source: e })?;
                    load_corpus_str(&text)?
                }
                None => default_corpus()?,
            };
            let report = run_suite(&entries);
            let text = if out.format == "json" {
                to_canonical_string(
                    &serde_json::to_value(&report).expect("report serialization cannot fail"),
                )
            } else {
                suite_table(&report)
            };
            emit(&text, &out)?;
            Ok(if report.passed { 0 } else { 1 })
        }
        Command::Export { input, out } => {
            let (spec, doc) = load_source(&input)?;
            with_field!(spec, |f| {
                let h = build_hopf(&f, &doc)?;
                emit(&render(&hopf_to_json(&h), &out.format), &out)?;
                Ok(0)
            })
        }
    }
}

fn group_orders_of(doc: &SourceDoc) -> Result<Vec<u64>> {
    match doc {
        SourceDoc::Preset(PresetKind::Group(orders)) => Ok(orders.clone()),
        SourceDoc::Json(v) if v["kind"] == json!("group_algebra") => {
            let arr = v["orders"]
                .as_array()
                .ok_or_else(|| Error::Json("group_algebra needs an orders array".into()))?;
            arr.iter()
                .map(|x| {
                    x.as_u64().ok_or_else(|| Error::Json("orders must be integers".into()))
                })
                .collect()
        }
        _ => Err(Error::InvalidInput(
            "restrict needs a group algebra (group:... preset or group_algebra presentation)"
                .into(),
        )),
    }
}

fn restrict_report<K: Field>(
    f: &K,
    orders: &[u64],
    rows: &[Vec<u64>],
    flavor: Flavor,
) -> Result<Value> {
    let group = GroupData::new(orders.to_vec())?;
    let emb = hopf_subalgebra_from_subgroup(f, &group, rows)?;
    let (ambient, _) = hopfsmooth::hopf::group_hopf(f, orders)?;
    let res = restriction_data(&ambient, &emb.sub, &emb.inclusion, flavor)?;
    let coh_g = second_cohomology(&ambient, flavor)?;
    let coh_f = second_cohomology(&emb.sub, flavor)?;
    let class_map = induced_class_map(&res, &coh_g, &coh_f)?;
    let rank = class_map.rank();
    let mut obj = Map::new();
    obj.insert("flavor".into(), json!(flavor.token()));
    obj.insert("h2_source_dim".into(), json!(coh_g.h2_dim));
    obj.insert("h2_target_dim".into(), json!(coh_f.h2_dim));
    obj.insert("restriction_rank".into(), json!(rank));
    obj.insert("surjective".into(), json!(rank == coh_f.h2_dim));
    if flavor == Flavor::Symmetric {
        let t = restriction_matrix_t(&emb.normalized);
        let p = f.characteristic();
        let t_rank = if p == 0 {
            // order matrices only arise over prime fields
            return Err(Error::UnsupportedField { op: "restrict", field: "Q".into() });
        } else {
            let fp = Fp::new(p)?;
            let rows: Vec<Vec<_>> = t
                .iter()
                .map(|r| r.iter().map(|&x| fp.from_i64((x % p) as i64)).collect())
                .collect();
            if rows.is_empty() {
                0
            } else {
                Matrix::from_rows(fp, rows)?.rank()
            }
        };
        obj.insert("t_matrix".into(), json!(t));
        obj.insert("t_rank".into(), json!(t_rank));
        obj.insert("ranks_agree".into(), json!(t_rank == rank));
    }
    Ok(Value::Object(obj))
}

fn cleft_extract_report(
    file: Option<PathBuf>,
    preset: Option<String>,
    params: Option<String>,
) -> Result<Value> {
    match (file, preset) {
        (Some(path), None) => {
            if params.is_some() {
                return Err(Error::InvalidInput(
                    "--params only applies to --preset families".into(),
                ));
            }
            let v = read_json(&path)?;
            let spec = field_of_json(&v)?;
            with_field!(spec, |f| {
                let ext = extension_from_json(&f, &v)?;
                let s = extract_cocycle(&ext)?;
                Ok(cocycle_to_json(&f, &s, Some(hopf_to_json(&ext.hopf))))
            })
        }
        (None, Some(ps)) => {
            let preset = parse_preset(&ps)?;
            let params = params.ok_or_else(|| {
                Error::InvalidInput("--preset families need --params".into())
            })?;
            with_field!(preset.field, |f| {
                let ext = match &preset.kind {
                    PresetKind::Group(orders) => {
                        let a = parse_params(&f, &params, orders.len(), "a group family")?;
                        group_cleft_extension(&f, orders, &a)?
                    }
                    PresetKind::Sample1 { n, m } => {
                        let c = parse_params(&f, &params, n.saturating_sub(1), "a chain family")?;
                        chained_power_cleft_extension(&f, *n, *m, &c)?
                    }
                    _ => {
                        return Err(Error::InvalidInput(
                            "cleft families exist for group:... and sample1:... presets".into(),
                        ))
                    }
                };
                let s = extract_cocycle(&ext)?;
                Ok(cocycle_to_json(&f, &s, Some(hopf_to_json(&ext.hopf))))
            })
        }
        _ => Err(Error::InvalidInput(
            "exactly one of --preset and --file is required".into(),
        )),
    }
}

fn suite_table(report: &SuiteReport) -> String {
    let mut out = String::new();
    let width = report.entries.iter().map(|e| e.id.len()).max().unwrap_or(0);
    let mut failures = 0usize;
    for e in &report.entries {
        if e.passed {
            out.push_str(&format!("{:<width$}  pass ({} checks)\n", e.id, e.checks.len()));
        } else {
            failures += 1;
            let first = e
                .checks
                .iter()
                .find(|c| !c.passed)
                .map(|c| format!("{}: {}", c.name, c.detail))
                .unwrap_or_default();
            out.push_str(&format!("{:<width$}  FAIL  {first}\n", e.id));
        }
    }
    out.push_str(&format!(
        "{} entries, {}\n",
        report.entries.len(),
        if failures == 0 { "all passed".to_string() } else { format!("{failures} failed") }
    ));
    out
}
