//! Free-group words over opaque generator ids.
//!
//! Words are stored as sequences of single letters (a generator with
//! exponent +1 or -1) and are kept freely reduced by every constructor.

use std::fmt;
use std::ops::Mul;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Opaque generator id. The wirtinger module assigns these to arcs; in
/// longitude input they are component indices.
pub type Gen = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: Gen,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: Gen, inv: bool) -> Self {
        Self { gen, inv }
    }

    pub fn inverse(self) -> Self {
        Self { gen: self.gen, inv: !self.inv }
    }

    /// +1 or -1.
    pub fn exponent(self) -> i64 {
        if self.inv {
            -1
        } else {
            1
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inv != other.inv
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FreeGroupError {
    #[error("commutator depth must be at least 1, got {0}")]
    InvalidDepth(usize),
    #[error("cannot sample from an empty generator list")]
    NoGenerators,
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupWord {
    letters: Vec<Letter>,
}

impl GroupWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn generator(gen: Gen) -> Self {
        Self { letters: vec![Letter::new(gen, false)] }
    }

    /// `gen^exp` for any integer exponent.
    pub fn power_of(gen: Gen, exp: i64) -> Self {
        let letter = Letter::new(gen, exp < 0);
        Self { letters: vec![letter; exp.unsigned_abs() as usize] }
    }

    /// Builds a word from arbitrary letters, reducing as it goes.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut w = Self::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    /// Appends a letter on the right, cancelling if needed.
    pub fn push(&mut self, letter: Letter) {
        match self.letters.last() {
            Some(&last) if last.cancels(letter) => {
                self.letters.pop();
            }
            _ => self.letters.push(letter),
        }
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

    pub fn multiply(&self, other: &GroupWord) -> GroupWord {
        let mut out = self.clone();
        for &l in &other.letters {
            out.push(l);
        }
        out
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    /// `g · self · g⁻¹`.
    pub fn conjugate(&self, g: &GroupWord) -> GroupWord {
        g.multiply(self).multiply(&g.inverse())
    }

    /// `[self, other] = self · other · self⁻¹ · other⁻¹`.
    pub fn commutator(&self, other: &GroupWord) -> GroupWord {
        self.multiply(other).multiply(&self.inverse()).multiply(&other.inverse())
    }

    pub fn pow(&self, exp: i64) -> GroupWord {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        (0..exp.unsigned_abs()).fold(GroupWord::identity(), |acc, _| acc.multiply(&base))
    }

    /// Sum of the exponents of `gen`; the image of the word in the
    /// abelianization, read at one generator.
    pub fn exponent_sum(&self, gen: Gen) -> i64 {
        self.letters.iter().filter(|l| l.gen == gen).map(|l| l.exponent()).sum()
    }

    /// Rewrites every generator through `f`, reducing the result.
    pub fn map_generators(&self, mut f: impl FnMut(Gen) -> Gen) -> GroupWord {
        GroupWord::from_letters(self.letters.iter().map(|l| Letter::new(f(l.gen), l.inv)))
    }

    /// Replaces each generator by a word.
    pub fn substitute(&self, mut f: impl FnMut(Gen) -> GroupWord) -> GroupWord {
        let mut out = GroupWord::identity();
        for l in &self.letters {
            let image = f(l.gen);
            let image = if l.inv { image.inverse() } else { image };
            out = out.multiply(&image);
        }
        out
    }

    /// Renders as space-separated letters, `x^-1` for inverses, `1` for the
    /// identity.
    pub fn render(&self, mut name: impl FnMut(Gen) -> String) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        self.letters
            .iter()
            .map(|l| if l.inv { format!("{}^-1", name(l.gen)) } else { name(l.gen) })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Linear-scan check that no adjacent pair cancels.
pub fn is_freely_reduced(letters: &[Letter]) -> bool {
    letters.windows(2).all(|w| !w[0].cancels(w[1]))
}

impl Mul for &GroupWord {
    type Output = GroupWord;

    fn mul(self, rhs: &GroupWord) -> GroupWord {
        self.multiply(rhs)
    }
}

impl Mul for GroupWord {
    type Output = GroupWord;

    fn mul(self, rhs: GroupWord) -> GroupWord {
        self.multiply(&rhs)
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(|g| format!("g{g}")))
    }
}

/// Lowercase letter naming component `i` (`a`, `b`, ...).
pub fn component_letter(i: usize) -> char {
    assert!(i < 26, "component index {i} has no letter name");
    (b'a' + i as u8) as char
}

pub fn component_index(c: char) -> Option<usize> {
    c.is_ascii_lowercase().then(|| (c as u8 - b'a') as usize)
}

/// Parses a word in the rendering grammar.
///
/// Tokens are `<letter><arc-index>?` optionally followed by `^<integer>`;
/// whitespace between tokens is optional and a lone `1` is the identity.
/// `resolve` maps `(component letter, arc index)` to a generator id.
pub fn parse_word(
    text: &str,
    mut resolve: impl FnMut(char, Option<usize>) -> Option<Gen>,
) -> Result<GroupWord, FreeGroupError> {
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut word = GroupWord::identity();
    let mut saw_token = false;
    let syntax = |offset: usize, message: &str| FreeGroupError::Syntax { offset, message: message.to_string() };
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() || c == '*' || c == '.' {
            i += 1;
            continue;
        }
        if c == '1' && !saw_token {
            let rest = text[i + 1..].trim();
            if rest.is_empty() {
                return Ok(GroupWord::identity());
            }
        }
        if !c.is_ascii_lowercase() {
            return Err(syntax(i, &format!("unexpected character `{c}`")));
        }
        let start = i;
        i += 1;
        let digits_start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let name_end = i;
        let arc = if i > digits_start {
            Some(text[digits_start..i].parse::<usize>().map_err(|_| syntax(digits_start, "arc index too large"))?)
        } else {
            None
        };
        let mut exp: i64 = 1;
        if i < bytes.len() && bytes[i] == b'^' {
            i += 1;
            let exp_start = i;
            if i < bytes.len() && (bytes[i] == b'-' || bytes[i] == b'+') {
                i += 1;
            }
            let num_start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i == num_start {
                return Err(syntax(exp_start, "expected an integer exponent after `^`"));
            }
            exp = text[exp_start..i].parse::<i64>().map_err(|_| syntax(exp_start, "exponent out of range"))?;
        }
        let gen = resolve(c, arc).ok_or_else(|| FreeGroupError::UnknownGenerator(text[start..name_end].to_string()))?;
        word = word.multiply(&GroupWord::power_of(gen, exp));
        saw_token = true;
    }
    Ok(word)
}

/// Pseudo-random element of the `depth`-th lower central series term of the
/// free group on `generators`, built as an iterated commutator
/// `[random word, element of depth-1]`. Deterministic in `seed`.
pub fn sample_lcs_element(generators: &[Gen], depth: usize, seed: u64) -> Result<GroupWord, FreeGroupError> {
    if depth < 1 {
        return Err(FreeGroupError::InvalidDepth(depth));
    }
    if generators.is_empty() {
        return Err(FreeGroupError::NoGenerators);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Retry a few times so generic seeds give a nontrivial element.
    let mut last = GroupWord::identity();
    for _ in 0..16 {
        last = sample_rec(generators, depth, &mut rng);
        if !last.is_identity() {
            break;
        }
    }
    Ok(last)
}

fn random_word(generators: &[Gen], rng: &mut ChaCha8Rng, max_len: usize) -> GroupWord {
    let len = rng.gen_range(1..=max_len);
    GroupWord::from_letters((0..len).map(|_| {
        let g = generators[rng.gen_range(0..generators.len())];
        Letter::new(g, rng.gen_bool(0.5))
    }))
}

fn sample_rec(generators: &[Gen], depth: usize, rng: &mut ChaCha8Rng) -> GroupWord {
    if depth == 1 {
        return random_word(generators, rng, 5);
    }
    let outer = random_word(generators, rng, 3);
    let inner = sample_rec(generators, depth - 1, rng);
    let c = outer.commutator(&inner);
    if rng.gen_bool(0.5) {
        // products of elements of the subgroup stay in it
        let more = random_word(generators, rng, 2).commutator(&sample_rec(generators, depth - 1, rng));
        c.multiply(&more)
    } else {
        c
    }
}
