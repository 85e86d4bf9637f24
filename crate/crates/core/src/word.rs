//! Reduced and cyclically reduced words in the free group `F(a, b)`.
//!
//! Words are written over the alphabet `a`, `b`, `A`, `B`, where the capital
//! letters are the inverses of `a` and `b`. Every [`Word`] is freely reduced
//! at construction, and every [`CyclicWord`] is additionally cyclically
//! reduced and compares equal to all of its rotations.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("invalid letter {ch:?} at position {position} (expected one of a, b, A, B)")]
    InvalidLetter { ch: char, position: usize },
    #[error("word is not reduced: letters {position} and {} cancel", position + 1)]
    NotReduced { position: usize },
    #[error("word {0} is not cyclically reduced")]
    NotCyclicallyReduced(String),
    #[error("operation requires a nonempty word")]
    Empty,
}

/// A generator of `F(a, b)` or its inverse.
///
/// The derived order `a < b < A < B` is the order used for canonical
/// rotations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    /// `a`
    A,
    /// `b`
    B,
    /// `A`, the inverse of `a`
    AInv,
    /// `B`, the inverse of `b`
    BInv,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::A, Letter::B, Letter::AInv, Letter::BInv];

    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::B => Letter::BInv,
            Letter::AInv => Letter::A,
            Letter::BInv => Letter::B,
        }
    }

    pub fn is_inverse_of(self, other: Letter) -> bool {
        self.inverse() == other
    }

    /// True for `a` and `b`.
    pub fn is_positive(self) -> bool {
        matches!(self, Letter::A | Letter::B)
    }

    /// The generator index: 0 for `a`/`A`, 1 for `b`/`B`.
    pub fn generator(self) -> usize {
        match self {
            Letter::A | Letter::AInv => 0,
            Letter::B | Letter::BInv => 1,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
            Letter::AInv => 'A',
            Letter::BInv => 'B',
        }
    }

    pub fn from_char(ch: char) -> Option<Letter> {
        match ch {
            'a' => Some(Letter::A),
            'b' => Some(Letter::B),
            'A' => Some(Letter::AInv),
            'B' => Some(Letter::BInv),
            _ => None,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// Parses a string of letters without reducing it.
pub fn parse_letters(s: &str) -> Result<Vec<Letter>, WordError> {
    s.chars()
        .enumerate()
        .map(|(position, ch)| Letter::from_char(ch).ok_or(WordError::InvalidLetter { ch, position }))
        .collect()
}

/// A freely reduced word.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    /// Free reduction of an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for x in letters {
            if out.last().is_some_and(|&y| y.is_inverse_of(x)) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        Word(out)
    }

    /// Wraps a letter sequence that must already be reduced.
    pub fn from_reduced(letters: Vec<Letter>) -> Result<Word, WordError> {
        if let Some(position) = first_cancellation(&letters) {
            return Err(WordError::NotReduced { position });
        }
        Ok(Word(letters))
    }

    /// Parses and freely reduces, so `"abBAba"` becomes `ba`.
    pub fn parse_reducing(s: &str) -> Result<Word, WordError> {
        Ok(Word::reduce(parse_letters(s)?))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Reverses the word and inverts every letter.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|x| x.inverse()).collect())
    }

    /// Product in the free group.
    pub fn concat(&self, other: &Word) -> Word {
        // Only the seam can cancel.
        let overlap = self
            .0
            .iter()
            .rev()
            .zip(other.0.iter())
            .take_while(|(x, y)| x.is_inverse_of(**y))
            .count();
        let mut out = Vec::with_capacity(self.len() + other.len() - 2 * overlap);
        out.extend_from_slice(&self.0[..self.len() - overlap]);
        out.extend_from_slice(&other.0[overlap..]);
        Word(out)
    }

    pub fn pow(&self, k: usize) -> Word {
        (0..k).fold(Word::empty(), |acc, _| acc.concat(self))
    }

    /// `(count(a) - count(A), count(b) - count(B))`.
    pub fn exponent_sums(&self) -> (i64, i64) {
        exponent_sums(&self.0)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(x), Some(y)) if self.len() > 1 => !x.is_inverse_of(*y),
            _ => true,
        }
    }

    /// Splits `self` as `conjugator · core · conjugator⁻¹` with `core`
    /// cyclically reduced.
    pub fn cyclically_reduce(&self) -> (CyclicWord, Word) {
        let n = self.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.0[k].is_inverse_of(self.0[n - 1 - k]) {
            k += 1;
        }
        let core = Word(self.0[k..n - k].to_vec());
        let conjugator = Word(self.0[..k].to_vec());
        (CyclicWord::from_cyclically_reduced(core), conjugator)
    }
}

/// Signed letter counts of an arbitrary, possibly unreduced, sequence.
pub fn exponent_sums(letters: &[Letter]) -> (i64, i64) {
    letters.iter().fold((0, 0), |(sa, sb), x| match x {
        Letter::A => (sa + 1, sb),
        Letter::AInv => (sa - 1, sb),
        Letter::B => (sa, sb + 1),
        Letter::BInv => (sa, sb - 1),
    })
}

/// Index `i` of the first adjacent pair `(i, i + 1)` that cancels.
pub fn first_cancellation(letters: &[Letter]) -> Option<usize> {
    letters.windows(2).position(|w| w[0].is_inverse_of(w[1]))
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.0 {
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// Strict parse: rejects letter sequences that are not already reduced.
impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Word, WordError> {
        Word::from_reduced(parse_letters(s)?)
    }
}

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.to_string()
    }
}

impl TryFrom<String> for Word {
    type Error = WordError;

    fn try_from(s: String) -> Result<Word, WordError> {
        s.parse()
    }
}

/// A cyclically reduced word, equal to each of its rotations.
///
/// The letters are kept in the order they were supplied (so offsets into a
/// knot word keep their meaning), while equality and hashing go through the
/// lexicographically least rotation.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct CyclicWord {
    word: Word,
    canonical: Vec<Letter>,
}

impl CyclicWord {
    pub fn new(word: Word) -> Result<CyclicWord, WordError> {
        if !word.is_cyclically_reduced() {
            return Err(WordError::NotCyclicallyReduced(word.to_string()));
        }
        Ok(CyclicWord::from_cyclically_reduced(word))
    }

    fn from_cyclically_reduced(word: Word) -> CyclicWord {
        let canonical = least_rotation(word.letters());
        CyclicWord { word, canonical }
    }

    pub fn as_word(&self) -> &Word {
        &self.word
    }

    pub fn letters(&self) -> &[Letter] {
        self.word.letters()
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// The lexicographically least rotation.
    pub fn canonical(&self) -> Word {
        Word(self.canonical.clone())
    }

    /// The letters read starting at offset `k`.
    pub fn rotation(&self, k: usize) -> Vec<Letter> {
        let l = self.letters();
        if l.is_empty() {
            return Vec::new();
        }
        let k = k % l.len();
        l[k..].iter().chain(&l[..k]).copied().collect()
    }

    /// Same cyclic word, stored starting at offset `k`.
    pub fn rotate(&self, k: usize) -> CyclicWord {
        CyclicWord {
            word: Word(self.rotation(k)),
            canonical: self.canonical.clone(),
        }
    }

    pub fn inverse(&self) -> CyclicWord {
        CyclicWord::from_cyclically_reduced(self.word.inverse())
    }

    pub fn exponent_sums(&self) -> (i64, i64) {
        self.word.exponent_sums()
    }

    /// True iff `other` is a rotation of `self`.
    pub fn cyclic_equal(&self, other: &CyclicWord) -> bool {
        self.canonical == other.canonical
    }

    /// Returns `(root, exponent)` with `self = root^exponent` and the
    /// exponent maximal. The root is the least rotational period of the
    /// stored letters.
    pub fn primitive_root(&self) -> Result<(Word, usize), WordError> {
        let l = self.letters();
        let n = l.len();
        if n == 0 {
            return Err(WordError::Empty);
        }
        let period = (1..=n)
            .filter(|d| n.is_multiple_of(*d))
            .find(|&d| (0..n).all(|i| l[i] == l[(i + d) % n]))
            .unwrap_or(n);
        Ok((Word(l[..period].to_vec()), n / period))
    }

    pub fn is_proper_power(&self) -> Result<bool, WordError> {
        Ok(self.primitive_root()?.1 >= 2)
    }

    /// True iff some rotation contains `xx` for a single letter `x`.
    pub fn has_letter_square(&self) -> bool {
        let l = self.letters();
        let n = l.len();
        n >= 2 && (0..n).any(|i| l[i] == l[(i + 1) % n])
    }
}

fn least_rotation(letters: &[Letter]) -> Vec<Letter> {
    let n = letters.len();
    let best = (0..n)
        .min_by(|&i, &j| {
            let a = letters[i..].iter().chain(&letters[..i]);
            let b = letters[j..].iter().chain(&letters[..j]);
            a.cmp(b)
        })
        .unwrap_or(0);
    letters[best..].iter().chain(&letters[..best]).copied().collect()
}

impl PartialEq for CyclicWord {
    fn eq(&self, other: &CyclicWord) -> bool {
        self.cyclic_equal(other)
    }
}

impl Eq for CyclicWord {}

impl std::hash::Hash for CyclicWord {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.canonical.hash(state);
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.word.fmt(f)
    }
}

impl FromStr for CyclicWord {
    type Err = WordError;

    fn from_str(s: &str) -> Result<CyclicWord, WordError> {
        CyclicWord::new(s.parse()?)
    }
}

impl From<CyclicWord> for String {
    fn from(w: CyclicWord) -> String {
        w.to_string()
    }
}

impl TryFrom<String> for CyclicWord {
    type Error = WordError;

    fn try_from(s: String) -> Result<CyclicWord, WordError> {
        s.parse()
    }
}
