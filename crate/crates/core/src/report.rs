//! Per-case run reports and the append-only JSON-lines catalog.

use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::bns::{classify_path, convex_hull, trace_path};
use crate::expr::{Binding, Expr};
use crate::family::{validate_gamma, GammaReport, KnotTemplate};
use crate::stallings::{lemma5_check, ConjugacyResult};
use crate::uniqueness::{check_unique, Counterexample};
use crate::word::CyclicWord;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Power bound used when the caller does not choose one.
pub const DEFAULT_V_MAX: u32 = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Template(String),
    Word(String),
}

/// Which of the three claims the binding is inside the hypotheses of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Hypotheses {
    /// `p, q >= 2` and `n >= 2`.
    pub bns: bool,
    /// `p, q >= 2`.
    pub uniqueness: bool,
    /// `p, q >= 2`.
    pub lemma5: bool,
}

impl Hypotheses {
    pub fn for_template(b: &Binding) -> Hypotheses {
        let pq = b.p >= 2 && b.q >= 2;
        Hypotheses {
            bns: pq && b.n >= 2,
            uniqueness: pq,
            lemma5: pq,
        }
    }

    pub fn none() -> Hypotheses {
        Hypotheses {
            bns: false,
            uniqueness: false,
            lemma5: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaSummary {
    pub gamma: CyclicWord,
    pub report: GammaReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BnsSummary {
    pub empty: bool,
    pub simple_vertices: usize,
    pub special_edges: usize,
    pub hull_vertices: usize,
    pub word_length: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniquenessSummary {
    pub factorization_count: usize,
    pub passed: bool,
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma5Summary {
    pub structural_pass: bool,
    pub v_max: u32,
    pub conjugacy_failures: Vec<ConjugacyResult>,
    pub passed: bool,
}

/// Everything computed for one word. A section is `None` when its module
/// rejected the input; the reason is listed in `errors`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub source: Source,
    pub binding: Binding,
    pub word: CyclicWord,
    pub word_length: usize,
    pub in_hypotheses: Hypotheses,
    pub gamma: Option<GammaSummary>,
    pub bns: Option<BnsSummary>,
    pub uniqueness: Option<UniquenessSummary>,
    pub lemma5: Option<Lemma5Summary>,
    pub errors: Vec<String>,
    pub version: String,
    pub timestamp: String,
}

impl RunReport {
    pub fn bns_empty(&self) -> bool {
        self.bns.as_ref().is_some_and(|b| b.empty)
    }

    pub fn unique_passed(&self) -> bool {
        self.uniqueness.as_ref().is_some_and(|u| u.passed)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

pub fn bns_summary(k: &CyclicWord) -> Result<BnsSummary, String> {
    let path = trace_path(k).map_err(|e| e.to_string())?;
    let hull = convex_hull(&path).map_err(|e| e.to_string())?;
    let v = classify_path(&path, &hull);
    Ok(BnsSummary {
        empty: v.empty,
        simple_vertices: v.simple_vertices.len(),
        special_edges: v.special_edges.len(),
        hull_vertices: hull.vertices.len(),
        word_length: k.len(),
    })
}

pub fn uniqueness_summary(k: &CyclicWord) -> Result<UniquenessSummary, String> {
    let r = check_unique(k).map_err(|e| e.to_string())?;
    Ok(UniquenessSummary {
        factorization_count: r.factorization_count(),
        passed: r.passed,
        counterexample: r.counterexample,
    })
}

pub fn lemma5_summary(b: &Binding, gamma: &CyclicWord, v_max: u32) -> Result<Lemma5Summary, String> {
    let r = lemma5_check(b.p, b.q, gamma, v_max).map_err(|e| e.to_string())?;
    Ok(Lemma5Summary {
        structural_pass: r.structural_pass,
        v_max,
        conjugacy_failures: r.failures().copied().collect(),
        passed: r.passed(),
    })
}

fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

fn fill(report: &mut RunReport, gamma: Option<&CyclicWord>, v_max: u32) {
    let k = report.word.clone();
    match bns_summary(&k) {
        Ok(s) => report.bns = Some(s),
        Err(e) => report.errors.push(format!("bns: {e}")),
    }
    match uniqueness_summary(&k) {
        Ok(s) => report.uniqueness = Some(s),
        Err(e) => report.errors.push(format!("uniqueness: {e}")),
    }
    if let Some(g) = gamma {
        match lemma5_summary(&report.binding, g, v_max) {
            Ok(s) => report.lemma5 = Some(s),
            Err(e) => report.errors.push(format!("lemma5: {e}")),
        }
    }
}

/// Runs every check on `K_{p,q,n}` for one template.
pub fn run_template(t: &KnotTemplate, binding: Binding, v_max: u32) -> Result<RunReport, String> {
    let k = t.generate(&binding).map_err(|e| e.to_string())?;
    let mut report = RunReport {
        source: Source::Template(t.name.clone()),
        binding,
        word_length: k.len(),
        word: k,
        in_hypotheses: Hypotheses::for_template(&binding),
        gamma: Some(GammaSummary {
            gamma: t.gamma.clone(),
            report: validate_gamma(t.gamma.as_word()),
        }),
        bns: None,
        uniqueness: None,
        lemma5: None,
        errors: Vec::new(),
        version: VERSION.to_string(),
        timestamp: timestamp(),
    };
    fill(&mut report, Some(&t.gamma), v_max);
    Ok(report)
}

/// Runs the BNS and uniqueness checks on a raw expression, cyclically
/// reduced. There is no curve, so the `lemma5` section stays empty.
pub fn run_word(text: &str, binding: Binding) -> Result<RunReport, String> {
    let expr = Expr::parse(text).map_err(|e| e.to_string())?;
    let (k, _) = expr.evaluate(&binding).cyclically_reduce();
    let mut report = RunReport {
        source: Source::Word(text.to_string()),
        binding,
        word_length: k.len(),
        word: k,
        in_hypotheses: Hypotheses::none(),
        gamma: None,
        bns: None,
        uniqueness: None,
        lemma5: None,
        errors: Vec::new(),
        version: VERSION.to_string(),
        timestamp: timestamp(),
    };
    fill(&mut report, None, DEFAULT_V_MAX);
    Ok(report)
}

/// Cartesian product in catalog order: template, then p, q, n ascending.
pub fn sweep_cases<'a>(
    templates: &[&'a KnotTemplate],
    ps: &[u32],
    qs: &[u32],
    ns: &[u32],
) -> Vec<(&'a KnotTemplate, Binding)> {
    let sorted = |xs: &[u32]| {
        let mut v = xs.to_vec();
        v.sort_unstable();
        v.dedup();
        v
    };
    let (ps, qs, ns) = (sorted(ps), sorted(qs), sorted(ns));
    let mut ts = templates.to_vec();
    ts.sort_by(|a, b| a.name.cmp(&b.name));
    ts.dedup_by(|a, b| a.name == b.name);
    let mut out = Vec::new();
    for t in ts {
        for &p in &ps {
            for &q in &qs {
                for &n in &ns {
                    out.push((t, Binding::new(p, q, n)));
                }
            }
        }
    }
    out
}

/// Append-only JSON-lines log of reports. The file is opened on
/// construction so an unwritable path fails before any work is done.
pub struct Catalog {
    path: PathBuf,
    file: File,
}

impl Catalog {
    pub fn open(path: impl AsRef<Path>) -> io::Result<Catalog> {
        let path = path.as_ref().to_path_buf();
        let file = OpenOptions::new().create(true).append(true).open(&path)?;
        Ok(Catalog { path, file })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn append(&mut self, report: &RunReport) -> io::Result<()> {
        let mut line = report.to_json_line();
        line.push('\n');
        self.file.write_all(line.as_bytes())?;
        self.file.flush()
    }
}

/// Reads a catalog back as untyped JSON, one value per line.
pub fn read_catalog(path: impl AsRef<Path>) -> io::Result<Vec<serde_json::Value>> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?);
    }
    Ok(out)
}
