use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use knotgroups::bns::{classify_path, convex_hull, trace_path, BnsError};
use knotgroups::expr::{format_word, Binding, Expr};
use knotgroups::family::{insertion_blocks, validate_gamma, KnotTemplate, Registry};
use knotgroups::report::{run_template, sweep_cases, Catalog, RunReport, DEFAULT_V_MAX};
use knotgroups::stallings::{boundary_subgroups, lemma5_check, StallingsError, SubgroupGraph};
use knotgroups::svg::render_svg;
use knotgroups::uniqueness::{check_unique, AnnulusVerdict, UniquenessError};
use knotgroups::word::{CyclicWord, Word};

// exit codes; 0, 2, 3, 4, 10 and 11 are part of the command contract
const EXIT_FAIL: u8 = 1;
const EXIT_BAD_RELATOR: u8 = 2;
const EXIT_BAD_UNIQUENESS_INPUT: u8 = 3;
const EXIT_LEMMA5_DOMAIN: u8 = 4;
const EXIT_NONEMPTY: u8 = 10;
const EXIT_NOT_UNIQUE: u8 = 11;
const EXIT_USAGE: u8 = 64;
const EXIT_BAD_INPUT: u8 = 65;

#[derive(Parser)]
#[command(name = "knotgroups", version, about = "Free-group word checks for the knot family K_{p,q,n}")]
struct Cli {
    /// Extra templates (TOML) added to the built-in registry.
    #[arg(long, global = true)]
    registry: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct Target {
    /// Built-in or registry template name.
    #[arg(long)]
    template: Option<String>,
    /// Word in expression syntax, e.g. "a^{p+1}(baBA)^n".
    #[arg(long)]
    word: Option<String>,
}

#[derive(Args, Clone, Copy)]
struct Params {
    #[arg(long, default_value_t = 2)]
    p: u32,
    #[arg(long, default_value_t = 2)]
    q: u32,
    #[arg(long, default_value_t = 2)]
    n: u32,
}

impl Params {
    fn binding(self) -> Binding {
        Binding::new(self.p, self.q, self.n)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Expand and reduce an expression.
    Word {
        expr: String,
        #[command(flatten)]
        params: Params,
    },
    /// Decide emptiness of the BNS invariant by Brown's criterion.
    Bns {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Enumerate λμ̄νλ̄μν̄ factorizations and test the annulus words.
    Unique {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Check that no power of γ is conjugate into the boundary subgroups.
    Lemma5 {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value_t = DEFAULT_V_MAX)]
        v_max: u32,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run every check over a parameter grid and append to a catalog.
    Sweep {
        /// Comma-separated template names; defaults to every registered one.
        #[arg(long, value_delimiter = ',')]
        templates: Option<Vec<String>>,
        /// Values as "2,3" or an inclusive range "2..4".
        #[arg(long, default_value = "2..3")]
        p: String,
        #[arg(long, default_value = "2..3")]
        q: String,
        #[arg(long, default_value = "2..3")]
        n: String,
        #[arg(long, default_value_t = DEFAULT_V_MAX)]
        v_max: u32,
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Validate a curve γ, or a template's γ and its blocks.
    GammaCheck {
        #[command(flatten)]
        target: Target,
    },
    /// Fold a subgroup and answer membership and conjugacy queries.
    Stallings {
        /// Subgroup generator (repeatable). Defaults to the two boundary
        /// subgroups at the given p, q.
        #[arg(long = "gen")]
        generators: Vec<String>,
        #[arg(long)]
        member: Vec<String>,
        #[arg(long)]
        conjugate: Vec<String>,
        #[command(flatten)]
        params: Params,
    },
    /// List registered templates.
    Templates,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure {
            code,
            message: message.into(),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let registry = load_registry(cli.registry.as_deref())?;
    match cli.command {
        Command::Word { expr, params } => cmd_word(&expr, params.binding()),
        Command::Bns {
            target,
            params,
            svg,
            json,
        } => cmd_bns(&registry, &target, params.binding(), svg.as_deref(), json.as_deref()),
        Command::Unique { target, params, json } => cmd_unique(&registry, &target, params.binding(), json.as_deref()),
        Command::Lemma5 {
            target,
            params,
            v_max,
            json,
        } => cmd_lemma5(&registry, &target, params.binding(), v_max, json.as_deref()),
        Command::Sweep {
            templates,
            p,
            q,
            n,
            v_max,
            catalog,
        } => cmd_sweep(&registry, templates, [&p, &q, &n], v_max, catalog.as_deref()),
        Command::GammaCheck { target } => cmd_gamma_check(&registry, &target),
        Command::Stallings {
            generators,
            member,
            conjugate,
            params,
        } => cmd_stallings(&generators, &member, &conjugate, params.binding()),
        Command::Templates => {
            for t in registry.iter() {
                println!("{:<8} {}", t.name, t.k_expr);
            }
            Ok(0)
        }
    }
}

fn load_registry(path: Option<&Path>) -> Result<Registry, Failure> {
    let mut registry = Registry::builtin();
    if let Some(path) = path {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::new(EXIT_BAD_INPUT, format!("reading {}: {e}", path.display())))?;
        let extra = Registry::from_toml(&text).map_err(|e| Failure::new(EXIT_BAD_INPUT, e.to_string()))?;
        for t in extra.iter() {
            registry
                .insert(t.clone())
                .map_err(|e| Failure::new(EXIT_BAD_INPUT, e.to_string()))?;
        }
    }
    Ok(registry)
}

fn parse_expr(text: &str) -> Result<Expr, Failure> {
    Expr::parse(text).map_err(|e| {
        Failure::new(
            EXIT_BAD_INPUT,
            format!("{e}\n  {text}\n  {:>width$}", "^", width = e.position()),
        )
    })
}

fn template<'a>(registry: &'a Registry, name: &str) -> Result<&'a KnotTemplate, Failure> {
    registry.require(name).map_err(|e| {
        Failure::new(
            EXIT_USAGE,
            format!("{e}; known templates: {}", registry.names().join(", ")),
        )
    })
}

/// The reduced word a target names, before any cyclic reduction.
fn resolve(registry: &Registry, target: &Target, binding: Binding) -> Result<Word, Failure> {
    match (&target.template, &target.word) {
        (Some(name), _) => {
            let t = template(registry, name)?;
            let k = t
                .generate(&binding)
                .map_err(|e| Failure::new(EXIT_BAD_INPUT, e.to_string()))?;
            Ok(k.as_word().clone())
        }
        (None, Some(text)) => Ok(parse_expr(text)?.evaluate(&binding)),
        (None, None) => unreachable!("clap enforces one target"),
    }
}

fn describe(target: &Target, binding: Binding) -> String {
    match (&target.template, &target.word) {
        (Some(name), _) => format!("{name} at {binding}"),
        (None, Some(text)) => format!("\"{text}\" at {binding}"),
        (None, None) => unreachable!(),
    }
}

fn write_json(path: Option<&Path>, value: serde_json::Value) -> Result<(), Failure> {
    if let Some(path) = path {
        let text = serde_json::to_string_pretty(&value).expect("json value");
        fs::write(path, text + "\n").map_err(|e| Failure::new(EXIT_FAIL, format!("writing {}: {e}", path.display())))?;
    }
    Ok(())
}

fn target_json(target: &Target, binding: Binding) -> serde_json::Value {
    serde_json::json!({
        "template": target.template,
        "word": target.word,
        "binding": binding,
    })
}

fn cmd_word(text: &str, binding: Binding) -> Outcome {
    let w = parse_expr(text)?.evaluate(&binding);
    let (x, y) = w.exponent_sums();
    println!("word: {w}");
    println!("compact: {}", format_word(&w));
    println!("length: {}", w.len());
    println!("exponent sums: ({x}, {y})");
    Ok(0)
}

fn cmd_bns(registry: &Registry, target: &Target, binding: Binding, svg: Option<&Path>, json: Option<&Path>) -> Outcome {
    let (k, _) = resolve(registry, target, binding)?.cyclically_reduce();
    let bad = |e: BnsError| Failure::new(EXIT_BAD_RELATOR, format!("{e}; the relator must be null-homologous and nontrivial"));
    let path = trace_path(&k).map_err(bad)?;
    let hull = convex_hull(&path).map_err(bad)?;
    let verdict = classify_path(&path, &hull);

    println!("relator: {}  (length {})", describe(target, binding), k.len());
    println!("{}", if verdict.empty { "EMPTY" } else { "NONEMPTY" });
    println!("hull vertices: {}", hull.vertices.len());
    println!("simple vertices: {}", verdict.simple_vertices.len());
    println!(
        "special edges: {} ({} with line proviso)",
        verdict.special_edges.len(),
        verdict.special_edges.iter().filter(|e| e.line_proviso).count()
    );
    for m in &verdict.multiplicities {
        println!("  ({}, {}) visited {}", m.vertex.x, m.vertex.y, m.visits);
    }

    if let Some(p) = svg {
        fs::write(p, render_svg(&path, &hull, &verdict))
            .map_err(|e| Failure::new(EXIT_FAIL, format!("writing {}: {e}", p.display())))?;
    }
    write_json(
        json,
        serde_json::json!({
            "input": target_json(target, binding),
            "word": k,
            "hull": hull,
            "verdict": verdict,
        }),
    )?;
    Ok(if verdict.empty { 0 } else { EXIT_NONEMPTY })
}

fn annulus_line(a: &AnnulusVerdict) -> String {
    let tag = if a.degenerate {
        "degenerate".to_string()
    } else if a.is_proper_power {
        format!("PROPER POWER ({})^{}", a.root, a.exponent)
    } else {
        "primitive".to_string()
    };
    format!("{:?} = {}: {tag}", a.kind, if a.word.is_empty() { "1".into() } else { a.word.to_string() })
}

fn cmd_unique(registry: &Registry, target: &Target, binding: Binding, json: Option<&Path>) -> Outcome {
    let w = resolve(registry, target, binding)?;
    if !w.is_cyclically_reduced() {
        return Err(Failure::new(
            EXIT_BAD_UNIQUENESS_INPUT,
            format!("{w} is not cyclically reduced"),
        ));
    }
    let (k, _) = w.cyclically_reduce();
    let report = check_unique(&k).map_err(|e: UniquenessError| Failure::new(EXIT_BAD_UNIQUENESS_INPUT, e.to_string()))?;

    println!("word: {}  (length {})", describe(target, binding), report.word_length);
    println!("factorization classes: {}", report.factorization_count());
    for (i, f) in report.factorizations.iter().enumerate() {
        let fz = &f.factorization;
        println!(
            "  [{i}] rotation {}  λ = {}  μ = {}  ν = {}",
            fz.rotation,
            format_word(&fz.lambda),
            format_word(&fz.mu),
            format_word(&fz.nu)
        );
        for a in &f.annuli {
            println!("      {}", annulus_line(a));
        }
    }
    if let Some(c) = &report.counterexample {
        println!("counterexample at rotation {}: {}", c.factorization.rotation, annulus_line(&c.annulus));
    }
    println!("{}", if report.passed { "PASS" } else { "FAIL" });
    write_json(
        json,
        serde_json::json!({ "input": target_json(target, binding), "word": k, "report": report }),
    )?;
    Ok(if report.passed { 0 } else { EXIT_NOT_UNIQUE })
}

fn gamma_of(registry: &Registry, target: &Target) -> Result<CyclicWord, Failure> {
    match (&target.template, &target.word) {
        (Some(name), _) => Ok(template(registry, name)?.gamma.clone()),
        (None, Some(text)) => {
            let w = parse_expr(text)?.evaluate(&Binding::new(0, 0, 0));
            CyclicWord::new(w).map_err(|e| Failure::new(EXIT_BAD_INPUT, format!("γ: {e}")))
        }
        (None, None) => unreachable!(),
    }
}

fn cmd_lemma5(registry: &Registry, target: &Target, binding: Binding, v_max: u32, json: Option<&Path>) -> Outcome {
    let gamma = gamma_of(registry, target)?;
    let report = lemma5_check(binding.p, binding.q, &gamma, v_max).map_err(|e| match e {
        StallingsError::Domain { .. } => Failure::new(EXIT_LEMMA5_DOMAIN, e.to_string()),
        _ => Failure::new(EXIT_USAGE, e.to_string()),
    })?;
    println!("γ = {gamma}, p = {}, q = {}", binding.p, binding.q);
    println!(
        "structural: {} (γ {} a cyclic letter square)",
        if report.structural_pass { "pass" } else { "FAIL" },
        if report.structural_pass { "has no" } else { "has" }
    );
    let names = ["⟨a^{p+1}, b^{q+1}A⟩", "⟨a^{p+1}B, b^{q+1}⟩"];
    for r in &report.conjugacy_results {
        println!(
            "  γ^{} into {}: {}",
            r.power,
            names[r.subgroup],
            if r.conjugate { "CONJUGATE" } else { "not conjugate" }
        );
    }
    println!("{}", if report.passed() { "PASS" } else { "FAIL" });
    write_json(
        json,
        serde_json::json!({
            "input": target_json(target, binding),
            "v_max": v_max,
            "report": report,
            "passed": report.passed(),
        }),
    )?;
    Ok(if report.passed() { 0 } else { EXIT_FAIL })
}

fn parse_values(flag: &str, text: &str) -> Result<Vec<u32>, Failure> {
    let bad = || Failure::new(EXIT_USAGE, format!("--{flag}: expected \"2,3\" or \"2..4\", got \"{text}\""));
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim) {
        if let Some((lo, hi)) = part.split_once("..") {
            let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
            let hi: u32 = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
            if lo > hi {
                return Err(bad());
            }
            out.extend(lo..=hi);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    Ok(out)
}

fn cmd_sweep(
    registry: &Registry,
    templates: Option<Vec<String>>,
    ranges: [&str; 3],
    v_max: u32,
    catalog: Option<&Path>,
) -> Outcome {
    let names: Vec<String> = match templates {
        Some(list) => list.into_iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
        None => registry.names().into_iter().map(String::from).collect(),
    };
    if names.is_empty() {
        return Err(Failure::new(EXIT_USAGE, "--templates: no template names given"));
    }
    let chosen = names
        .iter()
        .map(|n| template(registry, n))
        .collect::<Result<Vec<_>, _>>()?;
    let ps = parse_values("p", ranges[0])?;
    let qs = parse_values("q", ranges[1])?;
    let ns = parse_values("n", ranges[2])?;
    if v_max == 0 {
        return Err(Failure::new(EXIT_USAGE, "--v-max must be at least 1"));
    }
    let mut writer = match catalog {
        Some(p) => Some(Catalog::open(p).map_err(|e| Failure::new(EXIT_FAIL, format!("catalog {}: {e}", p.display())))?),
        None => None,
    };

    let cases = sweep_cases(&chosen, &ps, &qs, &ns);
    let reports: Vec<RunReport> = cases
        .par_iter()
        .map(|(t, b)| run_template(t, *b, v_max))
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::new(EXIT_FAIL, e))?;

    if let Some(w) = writer.as_mut() {
        for r in &reports {
            w.append(r)
                .map_err(|e| Failure::new(EXIT_FAIL, format!("catalog {}: {e}", w.path().display())))?;
        }
    }

    println!(
        "{:<8} {:>3} {:>3} {:>3} {:>5}  {:<9} {:<5} {:<6} {:<6}",
        "template", "p", "q", "n", "len", "bns", "uniq", "lemma5", "hyp"
    );
    let mut violations = 0;
    for r in &reports {
        let name = match &r.source {
            knotgroups::report::Source::Template(n) => n.as_str(),
            knotgroups::report::Source::Word(w) => w.as_str(),
        };
        let bns = match &r.bns {
            Some(b) if b.empty => "EMPTY",
            Some(_) => "NONEMPTY",
            None => "error",
        };
        let uniq = match &r.uniqueness {
            Some(u) if u.passed => "PASS",
            Some(_) => "FAIL",
            None => "error",
        };
        let l5 = match &r.lemma5 {
            Some(l) if l.passed => "PASS",
            Some(_) => "FAIL",
            None => "-",
        };
        let h = &r.in_hypotheses;
        let hyp = match (h.bns, h.uniqueness) {
            (true, _) => "all",
            (false, true) => "no-bns",
            _ => "none",
        };
        let bad = (h.bns && !r.bns_empty())
            || (h.uniqueness && !r.unique_passed())
            || (h.lemma5 && !r.lemma5.as_ref().is_some_and(|l| l.passed));
        violations += bad as usize;
        println!(
            "{:<8} {:>3} {:>3} {:>3} {:>5}  {:<9} {:<5} {:<6} {:<6}{}",
            name,
            r.binding.p,
            r.binding.q,
            r.binding.n,
            r.word_length,
            bns,
            uniq,
            l5,
            hyp,
            if bad { "  <- violates claim" } else { "" }
        );
    }
    let count = |f: &dyn Fn(&RunReport) -> bool| reports.iter().filter(|r| f(r)).count();
    println!(
        "{} cases: {} EMPTY, {} PASS; {} inside all hypotheses; {} violations",
        reports.len(),
        count(&|r| r.bns_empty()),
        count(&|r| r.unique_passed()),
        count(&|r| r.in_hypotheses.bns),
        violations
    );
    if let Some(w) = &writer {
        println!("appended {} entries to {}", reports.len(), w.path().display());
    }
    Ok(if violations == 0 { 0 } else { EXIT_FAIL })
}

fn cmd_gamma_check(registry: &Registry, target: &Target) -> Outcome {
    let gamma = gamma_of(registry, target)?;
    let r = validate_gamma(gamma.as_word());
    let yes = |b: bool| if b { "yes" } else { "NO" };
    println!("γ = {gamma}");
    println!("  cyclically reduced: {}", yes(r.cyclically_reduced));
    println!("  essential:          {}", yes(r.essential));
    println!("  null-homologous:    {}", yes(r.null_homologous));
    println!("  no letter square:   {}", yes(r.no_repeated_letter));
    let mut ok = r.overall;
    if let Some(name) = &target.template {
        let t = template(registry, name)?;
        match insertion_blocks(&t.k_expr, &t.gamma) {
            Ok(blocks) => {
                println!("  {} insertion blocks, each a rotation of γ or γ̄", blocks.len());
            }
            Err(e) => {
                println!("  insertion blocks: {e}");
                ok = false;
            }
        }
    }
    println!("{}", if ok { "PASS" } else { "FAIL" });
    Ok(if ok { 0 } else { EXIT_FAIL })
}

fn cmd_stallings(generators: &[String], member: &[String], conjugate: &[String], binding: Binding) -> Outcome {
    let subgroups: Vec<(String, Vec<Word>)> = if generators.is_empty() {
        let [s0, s1] = boundary_subgroups(binding.p, binding.q);
        vec![("H0".into(), s0), ("H1".into(), s1)]
    } else {
        let gens = generators
            .iter()
            .map(|g| Ok(parse_expr(g)?.evaluate(&binding)))
            .collect::<Result<Vec<_>, Failure>>()?;
        vec![("H".into(), gens)]
    };
    let queries = |list: &[String]| -> Result<Vec<(String, Word)>, Failure> {
        list.iter()
            .map(|t| Ok((t.clone(), parse_expr(t)?.evaluate(&binding))))
            .collect()
    };
    let member = queries(member)?;
    let conjugate = queries(conjugate)?;
    for (name, gens) in &subgroups {
        let g = SubgroupGraph::build(gens).map_err(|e| Failure::new(EXIT_BAD_INPUT, e.to_string()))?;
        let shown: Vec<String> = gens.iter().map(|w| w.to_string()).collect();
        println!("{name} = ⟨{}⟩", shown.join(", "));
        println!(
            "  vertices {}, edges {}, rank {}, core vertices {}",
            g.vertex_count(),
            g.edges().len(),
            g.rank(),
            g.core_vertices().len()
        );
        for (text, w) in &member {
            println!("  {text} ∈ {name}: {}", g.is_member(w));
        }
        for (text, w) in &conjugate {
            println!("  {text} conjugate into {name}: {}", g.is_conjugate_into(w));
        }
    }
    Ok(0)
}
