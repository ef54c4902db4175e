//! Reduced and cyclic words in a free group of finite rank.
//!
//! Letters are ordered `a < A < b < B < ...` (generator index first, positive
//! before inverse) and words are compared shortlex. Both orders are used for
//! every deterministic enumeration in the crate.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};

/// A free generator, identified by its 0-based index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Generator(pub u32);

impl Generator {
    /// Default name: `a`..`z` for indices below 26, `x<k>` beyond.
    pub fn name(self) -> String {
        if self.0 < 26 {
            char::from(b'a' + self.0 as u8).to_string()
        } else {
            format!("x{}", self.0)
        }
    }

    pub fn parse(name: &str) -> Result<Generator> {
        let bytes = name.as_bytes();
        match bytes {
            [c] if c.is_ascii_lowercase() => Ok(Generator(u32::from(c - b'a'))),
            [b'x', rest @ ..] if !rest.is_empty() && rest.iter().all(u8::is_ascii_digit) => name[1..]
                .parse()
                .map(Generator)
                .map_err(|_| Error::InvalidInput(format!("bad generator name {name:?}"))),
            _ => invalid(format!("bad generator name {name:?}")),
        }
    }
}

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: Generator,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: u32, inverse: bool) -> Letter {
        Letter { gen: Generator(gen), inverse }
    }

    pub fn pos(gen: u32) -> Letter {
        Letter::new(gen, false)
    }

    pub fn neg(gen: u32) -> Letter {
        Letter::new(gen, true)
    }

    pub fn inv(self) -> Letter {
        Letter { gen: self.gen, inverse: !self.inverse }
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    /// All `2 * rank` letters in the canonical order.
    pub fn alphabet(rank: usize) -> impl Iterator<Item = Letter> {
        (0..rank as u32).flat_map(|g| [Letter::pos(g), Letter::neg(g)])
    }

    fn token(self) -> String {
        if self.inverse {
            format!("{}^-1", self.gen.name())
        } else {
            self.gen.name()
        }
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

/// Appends `letter` to an already reduced buffer, cancelling if needed.
fn push_reduced(buf: &mut Vec<Letter>, letter: Letter) {
    if buf.last() == Some(&letter.inv()) {
        buf.pop();
    } else {
        buf.push(letter);
    }
}

impl Word {
    pub fn identity() -> Word {
        Word::default()
    }

    /// Freely reduces an arbitrary letter sequence. No rank check.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        let mut buf = Vec::new();
        for l in letters {
            push_reduced(&mut buf, l);
        }
        Word { letters: buf }
    }

    pub fn generator(gen: u32) -> Word {
        Word { letters: vec![Letter::pos(gen)] }
    }

    /// Builds a word from signed 1-based integers (`1` = a, `-1` = A, `2` = b, ...).
    pub fn from_signed(ints: &[i32]) -> Word {
        Word::from_letters(ints.iter().map(|&i| {
            assert!(i != 0, "zero is not a letter");
            Letter::new(i.unsigned_abs() - 1, i < 0)
        }))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inv()).collect() }
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut buf = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut buf, l);
        }
        Word { letters: buf }
    }

    /// Product of a slice of words.
    pub fn product<'a, I: IntoIterator<Item = &'a Word>>(words: I) -> Word {
        let mut buf = Vec::new();
        for w in words {
            for &l in &w.letters {
                push_reduced(&mut buf, l);
            }
        }
        Word { letters: buf }
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `u w u⁻¹`, written ᵘw.
    pub fn conjugate_by(&self, u: &Word) -> Word {
        Word::product([u, self, &u.inverse()])
    }

    /// The commutator `[x, y] = x y x⁻¹ y⁻¹`.
    pub fn commutator(x: &Word, y: &Word) -> Word {
        Word::product([x, y, &x.inverse(), &y.inverse()])
    }

    /// Largest generator index used, if any.
    pub fn max_generator(&self) -> Option<u32> {
        self.letters.iter().map(|l| l.gen.0).max()
    }

    pub fn uses_only(&self, allowed: impl Fn(u32) -> bool) -> bool {
        self.letters.iter().all(|l| allowed(l.gen.0))
    }

    /// Signed letter counts per generator.
    pub fn exponent_sums(&self, rank: usize) -> Vec<i64> {
        let mut v = vec![0; rank];
        for l in &self.letters {
            v[l.gen.0 as usize] += l.sign();
        }
        v
    }

    pub fn check_rank(&self, rank: usize) -> Result<()> {
        match self.max_generator() {
            Some(g) if g as usize >= rank => {
                invalid(format!("generator {} out of range for rank {rank}", Generator(g).name()))
            }
            _ => Ok(()),
        }
    }

    /// Prefix of length `n` (already reduced).
    pub fn prefix(&self, n: usize) -> Word {
        Word { letters: self.letters[..n].to_vec() }
    }

    pub fn suffix_from(&self, n: usize) -> Word {
        Word { letters: self.letters[n..].to_vec() }
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(f), Some(l)) => self.letters.len() == 1 || *f != l.inv(),
            _ => true,
        }
    }

    /// Compact text (`abAB`) when every generator has a single-letter name,
    /// token text otherwise.
    pub fn compact(&self) -> Option<String> {
        if self.letters.iter().any(|l| l.gen.0 >= 26) {
            return None;
        }
        Some(
            self.letters
                .iter()
                .map(|l| {
                    let c = char::from(b'a' + l.gen.0 as u8);
                    if l.inverse {
                        c.to_ascii_uppercase()
                    } else {
                        c
                    }
                })
                .collect(),
        )
    }

    /// Whitespace-separated token text, `1` for the identity.
    pub fn tokens(&self) -> String {
        if self.is_identity() {
            return "1".to_string();
        }
        self.letters.iter().map(|l| l.token()).collect::<Vec<_>>().join(" ")
    }

    /// Parses either text form and checks generators against `rank`.
    pub fn parse_in(text: &str, rank: usize) -> Result<Word> {
        let w: Word = text.parse()?;
        w.check_rank(rank)?;
        Ok(w)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortlex order.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.compact() {
            Some(s) if !s.is_empty() => f.write_str(&s),
            _ => f.write_str(&self.tokens()),
        }
    }
}

fn parse_token(tok: &str, out: &mut Vec<Letter>) -> Result<()> {
    let (name, exp) = match tok.split_once('^') {
        Some((n, e)) => {
            let e: i64 = e
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad exponent in {tok:?}")))?;
            (n, e)
        }
        None => (tok, 1),
    };
    let letter = if name.len() == 1 && name.as_bytes()[0].is_ascii_uppercase() {
        Generator::parse(&name.to_ascii_lowercase())
            .map(|g| Letter { gen: g, inverse: true })
            .ok()
    } else {
        Generator::parse(name).map(|g| Letter { gen: g, inverse: false }).ok()
    };
    match letter {
        Some(l) => {
            let l = if exp < 0 { l.inv() } else { l };
            for _ in 0..exp.unsigned_abs() {
                out.push(l);
            }
            Ok(())
        }
        None if exp == 1 && !name.is_empty() && name.bytes().all(|b| b.is_ascii_alphabetic()) => {
            parse_compact(name, out)
        }
        None => invalid(format!("bad token {tok:?}")),
    }
}

fn parse_compact(text: &str, out: &mut Vec<Letter>) -> Result<()> {
    for c in text.chars() {
        if c.is_ascii_lowercase() {
            out.push(Letter::pos(c as u32 - 'a' as u32));
        } else if c.is_ascii_uppercase() {
            out.push(Letter::neg(c as u32 - 'A' as u32));
        } else {
            return invalid(format!("bad character {c:?} in word {text:?}"));
        }
    }
    Ok(())
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "1" {
            return Ok(Word::identity());
        }
        let mut raw = Vec::new();
        let token_form =
            text.contains(char::is_whitespace) || text.contains('^') || text.contains(|c: char| c.is_ascii_digit());
        if token_form {
            for tok in text.split_whitespace() {
                if tok != "1" {
                    parse_token(tok, &mut raw)?;
                }
            }
        } else {
            parse_compact(text, &mut raw)?;
        }
        Ok(Word::from_letters(raw))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.tokens())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Word, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses a comma-separated list of words.
pub fn parse_word_list(text: &str, rank: usize) -> Result<Vec<Word>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| Word::parse_in(t, rank))
        .collect()
}

/// Freely reduces `raw`, rejecting generators outside `rank`.
pub fn reduce(rank: usize, raw: &[Letter]) -> Result<Word> {
    if let Some(l) = raw.iter().find(|l| l.gen.0 as usize >= rank) {
        return invalid(format!("generator {} out of range for rank {rank}", l.gen.name()));
    }
    Ok(Word::from_letters(raw.iter().copied()))
}

/// A cyclically reduced word up to rotation, stored as its least rotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclicWord {
    word: Word,
}

fn rotate_left(letters: &[Letter], k: usize) -> Vec<Letter> {
    let mut v = letters[k..].to_vec();
    v.extend_from_slice(&letters[..k]);
    v
}

fn least_rotation(letters: &[Letter]) -> usize {
    (0..letters.len().max(1))
        .min_by(|&i, &j| rotate_left(letters, i).cmp(&rotate_left(letters, j)).then(i.cmp(&j)))
        .unwrap_or(0)
}

impl CyclicWord {
    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.word.fmt(f)
    }
}

/// Splits `w = u · core · u⁻¹` with `core` cyclically reduced (not rotated).
pub fn cyclic_core(w: &Word) -> (Word, Word) {
    let l = w.letters();
    let (mut i, mut j) = (0, l.len());
    while j - i >= 2 && l[i] == l[j - 1].inv() {
        i += 1;
        j -= 1;
    }
    (Word { letters: l[i..j].to_vec() }, Word { letters: l[..i].to_vec() })
}

/// Returns `(c, u)` with `w = u c u⁻¹`, `c` the canonical rotation of the
/// cyclic reduction of `w`.
pub fn cyclically_reduce(w: &Word) -> (CyclicWord, Word) {
    let (core, u) = cyclic_core(w);
    let k = least_rotation(core.letters());
    // core = p · rot · p⁻¹ where p is the first k letters of core
    let p = core.prefix(k);
    let rotated = Word { letters: rotate_left(core.letters(), k) };
    (CyclicWord { word: rotated }, u.mul(&p))
}

/// `w = root^exponent` with `exponent` maximal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootData {
    pub root: Word,
    pub exponent: u32,
}

fn smallest_period(letters: &[Letter]) -> usize {
    let n = letters.len();
    (1..=n)
        .find(|&p| n % p == 0 && (p..n).all(|i| letters[i] == letters[i - p]))
        .unwrap_or(n)
}

/// The unique root of `w`; the identity is its own root with exponent 1.
pub fn root(w: &Word) -> RootData {
    if w.is_identity() {
        return RootData { root: Word::identity(), exponent: 1 };
    }
    let (core, u) = cyclic_core(w);
    let p = smallest_period(core.letters());
    RootData {
        root: core.prefix(p).conjugate_by(&u),
        exponent: (core.len() / p) as u32,
    }
}

/// Some `u` with `u w1 u⁻¹ = w2`, if the two words are conjugate.
pub fn are_conjugate(w1: &Word, w2: &Word) -> Option<Word> {
    let (c1, u1) = cyclic_core(w1);
    let (c2, u2) = cyclic_core(w2);
    if c1.len() != c2.len() {
        return None;
    }
    if c1.is_identity() {
        return Some(u2.mul(&u1.inverse()));
    }
    let k = (0..c1.len()).find(|&k| rotate_left(c1.letters(), k) == c2.letters())?;
    Some(Word::product([&u2, &c1.prefix(k).inverse(), &u1.inverse()]))
}

/// Generator of the (infinite cyclic) centralizer of a non-trivial `w`.
pub fn centralizer_generator(w: &Word) -> Result<Word> {
    if w.is_identity() {
        return Err(Error::DegenerateInput("the identity has a non-cyclic centralizer".into()));
    }
    Ok(root(w).root)
}

/// All reduced words of length at most `radius`, in shortlex order.
pub fn enumerate_ball(rank: usize, radius: usize) -> Vec<Word> {
    let mut out = vec![Word::identity()];
    let mut layer = vec![Word::identity()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &layer {
            for l in Letter::alphabet(rank) {
                if w.letters.last() != Some(&l.inv()) {
                    let mut letters = w.letters.clone();
                    letters.push(l);
                    next.push(Word { letters });
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Number of reduced words of length at most `radius`.
pub fn ball_size(rank: usize, radius: usize) -> usize {
    let mut total = 1;
    let mut layer = 2 * rank;
    for _ in 0..radius {
        total += layer;
        layer *= (2 * rank).saturating_sub(1);
    }
    total
}
