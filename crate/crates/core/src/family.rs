//! Knot-word templates and the words `K_{p,q,n}` they generate.
//!
//! A template is a parametric word for `K_n` in which every parenthesised
//! block is a cyclic conjugate of a fixed curve `γ` or of `γ̄`. The curve is
//! not stored separately: it is recovered as the canonical rotation of the
//! first block, and every other block is checked against it.
//!
//! Templates live in a [`Registry`], a TOML document of the form
//!
//! ```toml
//! [[template]]
//! name = "fig3"
//! word = "A^{p+1} (baBA)^n b^{q+1} (bABa)^n a^{p+1}(BAba)^n B^{q+1} (BabA)^n"
//!
//! [[template.decomposition]]
//! lambda = "A^{p+1}"
//! mu = "B"
//! nu = "(aBAb)^n b^q (bABa)^n"
//! ```
//!
//! The four built-in templates are embedded in the crate.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{Binding, Expr, ParseError};
use crate::uniqueness::{find_factorizations, Factorization};
use crate::word::{first_cancellation, CyclicWord, Letter, Word};

const BUILTIN_TOML: &str = include_str!("templates.toml");

/// Binding used to validate stored decompositions when a template is built.
const CHECK_BINDING: Binding = Binding { p: 2, q: 2, n: 2 };

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("template {template}: cannot parse {field}: {source}")]
    Parse {
        template: String,
        field: &'static str,
        source: ParseError,
    },
    #[error("malformed template {template}: {reason}")]
    MalformedTemplate { template: String, reason: String },
    #[error("invalid template registry: {0}")]
    Registry(String),
    #[error("unknown template {0:?}")]
    UnknownTemplate(String),
    #[error("knot words are generated for p, q, n >= 1; got {0}")]
    ZeroParameter(Binding),
    #[error("generated word has exponent sums {0:?}, expected (0, 0)")]
    NotNullHomologous((i64, i64)),
}

/// The algebraic admissibility conditions on a curve `γ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaReport {
    /// Nontrivial after free reduction.
    pub essential: bool,
    /// Both exponent sums vanish.
    pub null_homologous: bool,
    /// No `xx` for a single letter `x`, including across the wrap-around.
    pub no_repeated_letter: bool,
    pub cyclically_reduced: bool,
    pub overall: bool,
}

pub fn validate_gamma(g: &Word) -> GammaReport {
    let l = g.letters();
    let essential = !g.is_empty();
    let null_homologous = g.exponent_sums() == (0, 0);
    let no_repeated_letter =
        l.windows(2).all(|p| p[0] != p[1]) && (l.len() < 2 || l[0] != l[l.len() - 1]);
    let cyclically_reduced = essential && g.is_cyclically_reduced();
    GammaReport {
        essential,
        null_homologous,
        no_repeated_letter,
        cyclically_reduced,
        overall: essential && null_homologous && no_repeated_letter && cyclically_reduced,
    }
}

/// The pieces `λ, μ, ν` of one spelling `K_n = λμ̄νλ̄μν̄`, as expressions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionTemplate {
    pub lambda: Expr,
    pub mu: Expr,
    pub nu: Expr,
}

impl DecompositionTemplate {
    /// `λ μ̄ ν λ̄ μ ν̄` expanded with no reduction at all.
    pub fn recompose_raw(&self, binding: &Binding) -> Vec<Letter> {
        let inv = |v: Vec<Letter>| -> Vec<Letter> { v.into_iter().rev().map(Letter::inverse).collect() };
        let (l, m, n) = (
            self.lambda.expand(binding),
            self.mu.expand(binding),
            self.nu.expand(binding),
        );
        [l.clone(), inv(m.clone()), n.clone(), inv(l), m, inv(n)].concat()
    }

    /// Locates this decomposition in `k` as a [`Factorization`], if the
    /// recomposition is a rotation of `k` with no cancellation anywhere.
    pub fn instantiate(&self, binding: &Binding, k: &CyclicWord) -> Option<Factorization> {
        let raw = self.recompose_raw(binding);
        if raw.len() != k.len() || raw.is_empty() || first_cancellation(&raw).is_some() {
            return None;
        }
        let rotation = (0..k.len()).find(|&r| k.rotation(r) == raw)?;
        let piece = |e: &Expr| Word::from_reduced(e.expand(binding)).ok();
        Some(Factorization {
            rotation,
            lambda: piece(&self.lambda)?,
            mu: piece(&self.mu)?,
            nu: piece(&self.nu)?,
        })
    }
}

/// A named parametric knot word together with its curve `γ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnotTemplate {
    pub name: String,
    /// The word as written in the registry.
    pub source: String,
    pub k_expr: Expr,
    pub gamma: CyclicWord,
    pub decompositions: Vec<DecompositionTemplate>,
}

impl KnotTemplate {
    /// Parses and validates a template: `γ` must be admissible, every
    /// block must be a rotation of `γ` or `γ̄`, and stored decompositions
    /// must recompose to the generated word.
    pub fn new(
        name: &str,
        word: &str,
        decompositions: &[(&str, &str, &str)],
    ) -> Result<KnotTemplate, FamilyError> {
        let parse = |field: &'static str, text: &str| {
            Expr::parse(text).map_err(|source| FamilyError::Parse {
                template: name.to_string(),
                field,
                source,
            })
        };
        let malformed = |reason: String| FamilyError::MalformedTemplate {
            template: name.to_string(),
            reason,
        };
        let k_expr = parse("word", word)?;
        let first = k_expr
            .groups()
            .next()
            .ok_or_else(|| malformed("no parenthesised insertion block".into()))?;
        let first = block_word(first).map_err(malformed)?;
        let gamma = CyclicWord::new(first.canonical()).expect("rotation of a cyclic word");
        let report = validate_gamma(gamma.as_word());
        if !report.overall {
            return Err(malformed(format!("curve {gamma} fails the admissibility checks: {report:?}")));
        }
        insertion_blocks(&k_expr, &gamma).map_err(malformed)?;
        let decompositions = decompositions
            .iter()
            .map(|(l, m, n)| {
                Ok(DecompositionTemplate {
                    lambda: parse("lambda", l)?,
                    mu: parse("mu", m)?,
                    nu: parse("nu", n)?,
                })
            })
            .collect::<Result<Vec<_>, FamilyError>>()?;
        let template = KnotTemplate {
            name: name.to_string(),
            source: word.to_string(),
            k_expr,
            gamma,
            decompositions,
        };
        let k = template.generate(&CHECK_BINDING)?;
        for (i, d) in template.decompositions.iter().enumerate() {
            if d.instantiate(&CHECK_BINDING, &k).is_none() {
                return Err(malformed(format!(
                    "decomposition {} does not recompose to the knot word at {CHECK_BINDING}",
                    i + 1
                )));
            }
        }
        Ok(template)
    }

    /// Expansion with no free reduction.
    pub fn expand_raw(&self, binding: &Binding) -> Vec<Letter> {
        self.k_expr.expand(binding)
    }

    /// The knot word `K_{p,q,n}`, cyclically reduced, with exponent sums
    /// checked to be zero.
    pub fn generate(&self, binding: &Binding) -> Result<CyclicWord, FamilyError> {
        if binding.p == 0 || binding.q == 0 || binding.n == 0 {
            return Err(FamilyError::ZeroParameter(*binding));
        }
        let (k, _) = self.k_expr.evaluate(binding).cyclically_reduce();
        match k.exponent_sums() {
            (0, 0) => Ok(k),
            sums => Err(FamilyError::NotNullHomologous(sums)),
        }
    }

    /// The distinct insertion blocks, in order of first appearance.
    pub fn insertion_words(&self) -> Vec<CyclicWord> {
        insertion_blocks(&self.k_expr, &self.gamma).expect("validated at construction")
    }

    /// Decompositions of `K_{p,q,n}`: the stored ones located in the word,
    /// or, when none are stored, those found by factorization search.
    pub fn decompositions_at(&self, binding: &Binding) -> Result<Vec<Factorization>, FamilyError> {
        let k = self.generate(binding)?;
        if self.decompositions.is_empty() {
            return Ok(find_factorizations(&k).factorizations);
        }
        self.decompositions
            .iter()
            .enumerate()
            .map(|(i, d)| {
                d.instantiate(binding, &k).ok_or_else(|| FamilyError::MalformedTemplate {
                    template: self.name.clone(),
                    reason: format!("decomposition {} does not recompose at {binding}", i + 1),
                })
            })
            .collect()
    }
}

/// Shorthand for [`KnotTemplate::generate`].
pub fn generate_knot_word(t: &KnotTemplate, binding: &Binding) -> Result<CyclicWord, FamilyError> {
    t.generate(binding)
}

fn block_word(e: &Expr) -> Result<CyclicWord, String> {
    let raw = e.expand(&Binding::new(1, 1, 1));
    let w = Word::from_reduced(raw).map_err(|_| format!("insertion block ({e}) is not reduced"))?;
    CyclicWord::new(w).map_err(|_| format!("insertion block ({e}) is not cyclically reduced"))
}

/// Checks every parenthesised block of `k_expr` against `gamma` and returns
/// the distinct blocks.
pub fn insertion_blocks(k_expr: &Expr, gamma: &CyclicWord) -> Result<Vec<CyclicWord>, String> {
    let gamma_bar = gamma.inverse();
    let mut out: Vec<CyclicWord> = Vec::new();
    for e in k_expr.groups() {
        let block = block_word(e)?;
        if !block.cyclic_equal(gamma) && !block.cyclic_equal(&gamma_bar) {
            return Err(format!("insertion block {block} is not a rotation of {gamma} or {gamma_bar}"));
        }
        if !out.iter().any(|b| b.as_word() == block.as_word()) {
            out.push(block);
        }
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct RegistryDoc {
    #[serde(default)]
    template: Vec<TemplateDoc>,
}

#[derive(Serialize, Deserialize)]
struct TemplateDoc {
    name: String,
    word: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    decomposition: Vec<DecompositionDoc>,
}

#[derive(Serialize, Deserialize)]
struct DecompositionDoc {
    lambda: String,
    mu: String,
    nu: String,
}

/// Name-keyed collection of templates.
#[derive(Clone, Debug, Default)]
pub struct Registry {
    templates: Vec<KnotTemplate>,
}

impl Registry {
    pub fn builtin() -> Registry {
        Registry::from_toml(BUILTIN_TOML).expect("built-in templates are valid")
    }

    pub fn from_toml(text: &str) -> Result<Registry, FamilyError> {
        let doc: RegistryDoc = toml::from_str(text).map_err(|e| FamilyError::Registry(e.to_string()))?;
        let mut registry = Registry::default();
        for t in doc.template {
            let decs: Vec<(&str, &str, &str)> = t
                .decomposition
                .iter()
                .map(|d| (d.lambda.as_str(), d.mu.as_str(), d.nu.as_str()))
                .collect();
            registry.insert(KnotTemplate::new(&t.name, &t.word, &decs)?)?;
        }
        Ok(registry)
    }

    pub fn to_toml(&self) -> String {
        let doc = RegistryDoc {
            template: self
                .templates
                .iter()
                .map(|t| TemplateDoc {
                    name: t.name.clone(),
                    word: t.source.clone(),
                    decomposition: t
                        .decompositions
                        .iter()
                        .map(|d| DecompositionDoc {
                            lambda: d.lambda.to_string(),
                            mu: d.mu.to_string(),
                            nu: d.nu.to_string(),
                        })
                        .collect(),
                })
                .collect(),
        };
        toml::to_string(&doc).expect("registry serializes")
    }

    pub fn insert(&mut self, t: KnotTemplate) -> Result<(), FamilyError> {
        if self.get(&t.name).is_some() {
            return Err(FamilyError::Registry(format!("duplicate template name {:?}", t.name)));
        }
        self.templates.push(t);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&KnotTemplate> {
        self.templates.iter().find(|t| t.name == name)
    }

    pub fn require(&self, name: &str) -> Result<&KnotTemplate, FamilyError> {
        self.get(name).ok_or_else(|| FamilyError::UnknownTemplate(name.to_string()))
    }

    pub fn names(&self) -> Vec<&str> {
        self.templates.iter().map(|t| t.name.as_str()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &KnotTemplate> {
        self.templates.iter()
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }
}

/// The four built-in templates: `fig3`, `fig6a`, `fig6b`, `fig6c`.
pub fn builtin_templates() -> Vec<KnotTemplate> {
    Registry::builtin().templates
}
