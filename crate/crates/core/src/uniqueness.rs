//! Factorizations `K = λ·μ̄·ν·λ̄·μ·ν̄` of a cyclic word and the
//! proper-power test on the three annulus words `λμ̄`, `νλ̄`, `μν̄`.
//!
//! The search is purely algebraic: every rotation and every split of the
//! first half into `(λ, μ̄, ν)` is tried, and a split is kept only when the
//! second half spells `(λ̄, μ, ν̄)` letter for letter. No free reduction is
//! involved in the match.
//!
//! Reading the same decomposition from a different block gives
//! `(λ, μ, ν) ↦ (μ̄, ν̄, λ̄)` with the start shifted by `|λ|`. Results are
//! reported once per orbit of that move, represented by the orbit member
//! with the least `(rotation, |λ|, |μ|)`.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::word::{first_cancellation, CyclicWord, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UniquenessError {
    #[error("uniqueness check needs a nonempty word")]
    Empty,
    #[error("word has odd length {0}; a word of the form λμ̄νλ̄μν̄ has even length")]
    OddLength(usize),
}

/// One spelling of a cyclic word as `λμ̄νλ̄μν̄`, read from `rotation`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Factorization {
    pub rotation: usize,
    pub lambda: Word,
    pub mu: Word,
    pub nu: Word,
}

impl Factorization {
    /// `λ μ̄ ν λ̄ μ ν̄` juxtaposed, with no reduction.
    pub fn recompose(&self) -> Vec<Letter> {
        let blocks = [
            self.lambda.clone(),
            self.mu.inverse(),
            self.nu.clone(),
            self.lambda.inverse(),
            self.mu.clone(),
            self.nu.inverse(),
        ];
        blocks.iter().flat_map(|b| b.letters().iter().copied()).collect()
    }

    pub fn half_len(&self) -> usize {
        self.lambda.len() + self.mu.len() + self.nu.len()
    }

    /// Letter-for-letter check against `k` read from `self.rotation`.
    pub fn is_valid_for(&self, k: &CyclicWord) -> bool {
        self.half_len() > 0 && 2 * self.half_len() == k.len() && self.recompose() == k.rotation(self.rotation)
    }

    /// The same decomposition read starting at the `μ̄` block.
    pub fn shift(&self, word_len: usize) -> Factorization {
        Factorization {
            rotation: (self.rotation + self.lambda.len()) % word_len.max(1),
            lambda: self.mu.inverse(),
            mu: self.nu.inverse(),
            nu: self.lambda.inverse(),
        }
    }

    /// All readings of this decomposition, starting with `self`.
    pub fn orbit(&self, word_len: usize) -> Vec<Factorization> {
        let mut out = vec![self.clone()];
        loop {
            let next = out.last().unwrap().shift(word_len);
            if next == *self {
                return out;
            }
            out.push(next);
        }
    }

    fn key(&self) -> (usize, usize, usize) {
        (self.rotation, self.lambda.len(), self.mu.len())
    }

    /// The orbit member with the least `(rotation, |λ|, |μ|)`.
    pub fn representative(&self, word_len: usize) -> Factorization {
        self.orbit(word_len).into_iter().min_by_key(|f| f.key()).unwrap()
    }
}

/// Result of [`find_factorizations`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorizationSet {
    pub factorizations: Vec<Factorization>,
    /// Set when the input had odd length, so no factorization can exist.
    pub odd_length: bool,
}

/// Every `(rotation, |λ|, |μ|)` that spells `k`, in that order.
pub fn all_factorizations(k: &CyclicWord) -> Vec<Factorization> {
    let n = k.len();
    if n == 0 || n % 2 == 1 {
        return Vec::new();
    }
    let h = n / 2;
    let mut out = Vec::new();
    for rotation in 0..n {
        let w = k.rotation(rotation);
        // `second[i]` pairs with `first[j]` when second[i] == first[j]^-1
        let mirrors = |second: usize, first_end: usize, len: usize| {
            (0..len).all(|i| w[second + i] == w[first_end - 1 - i].inverse())
        };
        for l in 0..=h {
            if !mirrors(h, l, l) {
                continue;
            }
            for m in 0..=h - l {
                if !mirrors(h + l, l + m, m) {
                    continue;
                }
                let nu_len = h - l - m;
                if !mirrors(h + l + m, h, nu_len) {
                    continue;
                }
                let slice = |a: usize, b: usize| Word::from_reduced(w[a..b].to_vec()).expect("subword of a reduced word");
                out.push(Factorization {
                    rotation,
                    lambda: slice(0, l),
                    mu: slice(h + l, h + l + m),
                    nu: slice(l + m, h),
                });
            }
        }
    }
    out
}

/// Factorizations of `k`, one per block-shift orbit, ordered by
/// `(rotation, |λ|, |μ|)`.
pub fn find_factorizations(k: &CyclicWord) -> FactorizationSet {
    let odd_length = k.len() % 2 == 1;
    let n = k.len();
    let mut seen = BTreeSet::new();
    let mut factorizations = Vec::new();
    for f in all_factorizations(k) {
        let rep = f.representative(n);
        if seen.insert(rep.key()) {
            factorizations.push(rep);
        }
    }
    factorizations.sort_by_key(|f| f.key());
    FactorizationSet {
        factorizations,
        odd_length,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum AnnulusKind {
    #[serde(rename = "lambda mu-bar")]
    LambdaMuBar,
    #[serde(rename = "nu lambda-bar")]
    NuLambdaBar,
    #[serde(rename = "mu nu-bar")]
    MuNuBar,
}

/// Primitivity verdict for one annulus word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnnulusVerdict {
    pub kind: AnnulusKind,
    /// Cyclically reduced core of the concatenation.
    pub word: Word,
    pub root: Word,
    pub exponent: usize,
    pub is_proper_power: bool,
    /// The concatenation reduced to the empty word.
    pub degenerate: bool,
    /// The juxtaposed pieces were not already cyclically reduced.
    pub cancellation: bool,
}

fn annulus(kind: AnnulusKind, left: &Word, right: &Word) -> AnnulusVerdict {
    let raw: Vec<Letter> = left.letters().iter().chain(right.letters()).copied().collect();
    let wraps = raw.len() > 1 && raw[0].is_inverse_of(raw[raw.len() - 1]);
    let cancellation = first_cancellation(&raw).is_some() || wraps;
    let (core, _) = Word::reduce(raw).cyclically_reduce();
    match core.primitive_root() {
        Ok((root, exponent)) => AnnulusVerdict {
            kind,
            word: core.as_word().clone(),
            root,
            exponent,
            is_proper_power: exponent >= 2,
            degenerate: false,
            cancellation,
        },
        Err(_) => AnnulusVerdict {
            kind,
            word: Word::empty(),
            root: Word::empty(),
            exponent: 1,
            is_proper_power: false,
            degenerate: true,
            cancellation,
        },
    }
}

/// The verdicts for `λμ̄`, `νλ̄` and `μν̄`, in that order.
pub fn annulus_words(f: &Factorization) -> [AnnulusVerdict; 3] {
    [
        annulus(AnnulusKind::LambdaMuBar, &f.lambda, &f.mu.inverse()),
        annulus(AnnulusKind::NuLambdaBar, &f.nu, &f.lambda.inverse()),
        annulus(AnnulusKind::MuNuBar, &f.mu, &f.nu.inverse()),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorizationVerdict {
    pub factorization: Factorization,
    pub annuli: [AnnulusVerdict; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub factorization: Factorization,
    pub annulus: AnnulusVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniquenessReport {
    pub word_length: usize,
    pub factorizations: Vec<FactorizationVerdict>,
    pub passed: bool,
    /// First proper-power annulus word found, if any.
    pub counterexample: Option<Counterexample>,
}

impl UniquenessReport {
    pub fn factorization_count(&self) -> usize {
        self.factorizations.len()
    }
}

/// Runs the factorization search and tests every annulus word for being a
/// proper power. `passed` holds when none is.
pub fn check_unique(k: &CyclicWord) -> Result<UniquenessReport, UniquenessError> {
    if k.is_empty() {
        return Err(UniquenessError::Empty);
    }
    let set = find_factorizations(k);
    if set.odd_length {
        return Err(UniquenessError::OddLength(k.len()));
    }
    let factorizations: Vec<FactorizationVerdict> = set
        .factorizations
        .into_iter()
        .map(|factorization| {
            let annuli = annulus_words(&factorization);
            FactorizationVerdict { factorization, annuli }
        })
        .collect();
    let counterexample = factorizations.iter().find_map(|fv| {
        fv.annuli.iter().find(|a| a.is_proper_power).map(|a| Counterexample {
            factorization: fv.factorization.clone(),
            annulus: a.clone(),
        })
    });
    Ok(UniquenessReport {
        word_length: k.len(),
        passed: counterexample.is_none(),
        factorizations,
        counterexample,
    })
}
