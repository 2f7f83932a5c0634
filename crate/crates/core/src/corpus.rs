//! The curated instance collection and the release-gate suite.
//!
//! Entries live in `data/corpus.json` (override with the
//! `HOPFSMOOTH_CORPUS` environment variable). Every pinned expectation is
//! tagged with its provenance; untagged expectations fail to load. The
//! suite recomputes everything from scratch per entry: structural axioms,
//! the smoothness report with its internal cross-checks, the
//! verdict-equivalence oracle, and (for local entries over a prime field)
//! the truncated-polynomial decomposition.

use crate::cohomology::smoothness_report;
use crate::decompose::{decompose_local_hopf, is_local};
use crate::error::{Error, Result};
use crate::exactla::{Field, FieldSpec, Fp, Rationals};
use crate::hopf::HopfTable;
use crate::io::{
    build_preset_hopf, field_of_json, hopf_from_json, hopf_from_presentation_json, parse_preset,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const DEFAULT_CORPUS: &str = include_str!("../data/corpus.json");

#[derive(Deserialize, Serialize, Clone, Copy, PartialEq, Eq, Debug)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Paper,
    Derived,
    Trivial,
}

/// An expected value together with where it comes from.
#[derive(Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
pub struct Tagged<T> {
    pub value: T,
    pub provenance: Provenance,
}

#[derive(Deserialize, Clone, Debug, Default)]
#[serde(deny_unknown_fields)]
pub struct ExpectedValues {
    pub h2s_dim: Option<Tagged<usize>>,
    pub h2_full_dim: Option<Tagged<usize>>,
    pub ker_mu_dim: Option<Tagged<usize>>,
    pub condition_d: Option<Tagged<bool>>,
    pub condition_e: Option<Tagged<bool>>,
    pub condition_f: Option<Tagged<bool>>,
    pub consistent: Option<Tagged<bool>>,
    pub local: Option<Tagged<bool>>,
    pub exponents: Option<Tagged<Vec<u32>>>,
}

#[derive(Clone, Debug)]
pub enum EntrySource {
    /// A preset string in the CLI grammar, e.g. "group:F2:4,2".
    Preset(String),
    /// An inline Hopf table in the JSON schema.
    InlineHopf(Value),
    /// An inline monomial-presentation object.
    Presentation(Value),
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub id: String,
    pub source: EntrySource,
    pub expected: ExpectedValues,
}

impl CorpusEntry {
    pub fn field(&self) -> Result<FieldSpec> {
        match &self.source {
            EntrySource::Preset(s) => Ok(parse_preset(s)?.field),
            EntrySource::InlineHopf(v) | EntrySource::Presentation(v) => field_of_json(v),
        }
    }
}

/// Build the entry's Hopf table over a concrete field (all structural
/// axioms are checked by the constructors involved).
pub fn build_entry_hopf<K: Field>(f: &K, source: &EntrySource) -> Result<HopfTable<K>> {
    match source {
        EntrySource::Preset(s) => build_preset_hopf(f, &parse_preset(s)?.kind),
        EntrySource::InlineHopf(v) => hopf_from_json(f, v),
        EntrySource::Presentation(v) => hopf_from_presentation_json(f, v),
    }
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    id: String,
    #[serde(default)]
    preset: Option<String>,
    #[serde(default)]
    hopf: Option<Value>,
    #[serde(default)]
    presentation: Option<Value>,
    #[serde(default)]
    expected: Option<ExpectedValues>,
}

pub fn load_corpus_str(text: &str) -> Result<Vec<CorpusEntry>> {
    let raw: Vec<RawEntry> =
        serde_json::from_str(text).map_err(|e| Error::Json(format!("corpus: {e}")))?;
    let mut out = Vec::with_capacity(raw.len());
    let mut seen = std::collections::BTreeSet::new();
    for r in raw {
        if !seen.insert(r.id.clone()) {
            return Err(Error::Corpus { id: r.id, msg: "duplicate id".into() });
        }
        let sources = [r.preset.is_some(), r.hopf.is_some(), r.presentation.is_some()];
        if sources.iter().filter(|b| **b).count() != 1 {
            return Err(Error::Corpus {
                id: r.id,
                msg: "exactly one of preset, hopf, presentation is required".into(),
            });
        }
        let source = if let Some(p) = r.preset {
            EntrySource::Preset(p)
        } else if let Some(h) = r.hopf {
            EntrySource::InlineHopf(h)
        } else {
            EntrySource::Presentation(r.presentation.unwrap())
        };
        let entry = CorpusEntry { id: r.id, source, expected: r.expected.unwrap_or_default() };
        entry.field().map_err(|e| Error::Corpus {
            id: entry.id.clone(),
            msg: format!("unusable field: {e}"),
        })?;
        out.push(entry);
    }
    Ok(out)
}

/// The default corpus, or the file named by `HOPFSMOOTH_CORPUS` when set.
pub fn default_corpus() -> Result<Vec<CorpusEntry>> {
    match std::env::var_os("HOPFSMOOTH_CORPUS") {
        Some(path) => {
            let path = std::path::PathBuf::from(path);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Io { path: path.display().to_string(), source: e })?;
            load_corpus_str(&text)
        }
        None => load_corpus_str(DEFAULT_CORPUS),
    }
}

#[derive(Serialize, Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Empty when passed; otherwise a one-line mismatch description.
    pub detail: String,
}

#[derive(Serialize, Clone, Debug)]
pub struct EntryReport {
    pub id: String,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

#[derive(Serialize, Clone, Debug)]
pub struct SuiteReport {
    pub entries: Vec<EntryReport>,
    pub passed: bool,
}

fn check(name: &str, passed: bool, detail: String) -> CheckResult {
    CheckResult { name: name.to_string(), passed, detail: if passed { String::new() } else { detail } }
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(
    name: &str,
    expected: &Option<Tagged<T>>,
    actual: &T,
    checks: &mut Vec<CheckResult>,
) {
    if let Some(t) = expected {
        checks.push(check(
            name,
            &t.value == actual,
            format!("expected {:?}, computed {:?}", t.value, actual),
        ));
    }
}

fn evaluate_typed<K: Field>(f: &K, entry: &CorpusEntry) -> Vec<CheckResult> {
    let mut checks = Vec::new();
    let hopf = match build_entry_hopf(f, &entry.source) {
        Ok(h) => {
            checks.push(check("axioms", true, String::new()));
            h
        }
        Err(e) => {
            checks.push(check("axioms", false, e.to_string()));
            return checks;
        }
    };
    let report = match smoothness_report(&hopf) {
        Ok(r) => r,
        Err(e) => {
            checks.push(check("report", false, e.to_string()));
            return checks;
        }
    };
    checks.push(check(
        "duality",
        report.h2s_dim == report.ker_mu_dim,
        format!("h2s_dim {} vs ker_mu_dim {}", report.h2s_dim, report.ker_mu_dim),
    ));
    let vanishing = report.h2s_dim == 0;
    let equivalent = if f.characteristic() == 0 {
        report.condition_f.is_none()
            && report.condition_d == vanishing
            && report.condition_e == vanishing
    } else {
        report.condition_f == Some(vanishing)
            && report.condition_d == vanishing
            && report.condition_e == vanishing
    };
    checks.push(check(
        "equivalence",
        equivalent,
        format!(
            "d={} e={} f={:?} h2s_dim={}",
            report.condition_d, report.condition_e, report.condition_f, report.h2s_dim
        ),
    ));
    if f.characteristic() == 0 {
        checks.push(check(
            "char0_smooth",
            report.condition_d && report.condition_e && vanishing,
            format!("a characteristic-zero entry is not smooth: {report:?}"),
        ));
    }
    checks.push(check("consistent", report.consistent, format!("{report:?}")));

    let e = &entry.expected;
    expect_eq("expected h2s_dim", &e.h2s_dim, &report.h2s_dim, &mut checks);
    expect_eq("expected h2_full_dim", &e.h2_full_dim, &report.h2_full_dim, &mut checks);
    expect_eq("expected ker_mu_dim", &e.ker_mu_dim, &report.ker_mu_dim, &mut checks);
    expect_eq("expected condition_d", &e.condition_d, &report.condition_d, &mut checks);
    expect_eq("expected condition_e", &e.condition_e, &report.condition_e, &mut checks);
    if let Some(t) = &e.condition_f {
        checks.push(check(
            "expected condition_f",
            report.condition_f == Some(t.value),
            format!("expected {:?}, computed {:?}", Some(t.value), report.condition_f),
        ));
    }
    expect_eq("expected consistent", &e.consistent, &report.consistent, &mut checks);

    let aug = match crate::algebra::AugmentedAlgebra::new_checked(
        hopf.alg.clone(),
        hopf.counit.clone(),
    ) {
        Ok(a) => a,
        Err(err) => {
            checks.push(check("augmentation", false, err.to_string()));
            return checks;
        }
    };
    let local = is_local(&aug);
    expect_eq("expected local", &e.local, &local, &mut checks);
    if local && f.characteristic() != 0 {
        match decompose_local_hopf(&hopf) {
            Ok(dec) => {
                checks.push(check("decompose", true, String::new()));
                expect_eq("expected exponents", &e.exponents, &dec.exponents, &mut checks);
            }
            Err(err) => checks.push(check("decompose", false, err.to_string())),
        }
    } else if let Some(t) = &e.exponents {
        checks.push(check(
            "expected exponents",
            false,
            format!("expected exponents {:?} on a non-local or characteristic-0 entry", t.value),
        ));
    }
    checks
}

fn evaluate_entry(entry: &CorpusEntry) -> EntryReport {
    let checks = match entry.field() {
        Ok(FieldSpec::Rationals) => evaluate_typed(&Rationals, entry),
        Ok(FieldSpec::Prime(p)) => match Fp::new(p) {
            Ok(f) => evaluate_typed(&f, entry),
            Err(e) => vec![check("field", false, e.to_string())],
        },
        Err(e) => vec![check("field", false, e.to_string())],
    };
    let passed = checks.iter().all(|c| c.passed);
    EntryReport { id: entry.id.clone(), checks, passed }
}

/// Run every check over every entry; entries are evaluated in parallel and
/// reported in id order.
pub fn run_suite(entries: &[CorpusEntry]) -> SuiteReport {
    let mut reports: Vec<EntryReport> = entries.par_iter().map(evaluate_entry).collect();
    reports.sort_by(|a, b| a.id.cmp(&b.id));
    let passed = reports.iter().all(|r| r.passed);
    SuiteReport { entries: reports, passed }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_corpus_loads_with_wide_coverage() {
        let entries = default_corpus().unwrap();
        assert!(entries.len() >= 20, "only {} entries", entries.len());
        let mut fields: Vec<String> =
            entries.iter().map(|e| e.field().unwrap().token()).collect();
        fields.sort();
        fields.dedup();
        assert_eq!(fields, ["F2", "F3", "F5", "Q"]);
        let text = |e: &CorpusEntry| match &e.source {
            EntrySource::Preset(s) => s.clone(),
            EntrySource::InlineHopf(_) => "inline".into(),
            EntrySource::Presentation(v) => v["kind"].as_str().unwrap_or("").into(),
        };
        for fam in ["group:", "trunc:", "etale:", "sample1:", "inline", "truncated_primitive"] {
            assert!(
                entries.iter().any(|e| text(e).starts_with(fam)),
                "no entry exercises {fam}"
            );
        }
    }

    #[test]
    fn untagged_expectations_are_rejected() {
        let text = r#"[{"id": "x", "preset": "group:F2:2",
                        "expected": {"h2s_dim": 1}}]"#;
        assert!(load_corpus_str(text).is_err());
    }

    #[test]
    fn unknown_expectation_keys_are_rejected() {
        let text = r#"[{"id": "x", "preset": "group:F2:2",
                        "expected": {"h2s_dimension": {"value": 1, "provenance": "paper"}}}]"#;
        assert!(load_corpus_str(text).is_err());
    }

    #[test]
    fn entries_need_exactly_one_source() {
        let both = r#"[{"id": "x", "preset": "group:F2:2", "presentation": {"field": "F2"}}]"#;
        assert!(matches!(load_corpus_str(both), Err(Error::Corpus { .. })));
        let neither = r#"[{"id": "x"}]"#;
        assert!(matches!(load_corpus_str(neither), Err(Error::Corpus { .. })));
        let dup = r#"[{"id": "x", "preset": "group:F2:2"}, {"id": "x", "preset": "group:F2:2"}]"#;
        assert!(matches!(load_corpus_str(dup), Err(Error::Corpus { .. })));
    }

    #[test]
    fn full_default_suite_passes() {
        let entries = default_corpus().unwrap();
        let report = run_suite(&entries);
        for e in &report.entries {
            for c in &e.checks {
                assert!(c.passed, "{}/{}: {}", e.id, c.name, c.detail);
            }
        }
        assert!(report.passed);
    }

    #[test]
    fn characteristic_zero_subset_is_entirely_smooth() {
        let entries: Vec<CorpusEntry> = default_corpus()
            .unwrap()
            .into_iter()
            .filter(|e| e.field().unwrap() == FieldSpec::Rationals)
            .collect();
        assert!(entries.len() >= 3);
        let report = run_suite(&entries);
        assert!(report.passed);
    }

    #[test]
    fn corrupted_antipode_fails_axioms_and_skips_the_rest() {
        // identity antipode on F2[Z/4] violates the antipode law
        let f = crate::exactla::Fp::new(2).unwrap();
        let (h, _) = crate::hopf::group_hopf(&f, &[4]).unwrap();
        let mut v = crate::io::hopf_to_json(&h);
        v["antipode"] =
            crate::io::hopf_to_json(&h)["mult"][0].clone(); // left-mult by 1 = identity
        let text = serde_json::to_string(&serde_json::json!([
            {"id": "bad_antipode", "hopf": v}
        ]))
        .unwrap();
        let entries = load_corpus_str(&text).unwrap();
        let report = run_suite(&entries);
        assert!(!report.passed);
        assert_eq!(report.entries[0].checks.len(), 1);
        assert_eq!(report.entries[0].checks[0].name, "axioms");
        assert!(!report.entries[0].checks[0].passed);
    }
}
