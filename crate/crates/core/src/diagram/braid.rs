//! Virtual braid words and their closures.
//!
//! Strands run downward, numbered 1..n from the left. A classical letter
//! `s<i>` is the crossing where the strand entering at position `i` passes
//! over the strand at position `i+1`, with sign +1; `S<i>` is its crossing
//! change (the strand at `i` passes under, sign -1). `v<i>` is a virtual
//! crossing: it swaps the two positions and records nothing.

use std::fmt;

use super::{Diagram, ParseError, Passage, Sign};
use crate::diagram::CrossingId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BraidLetter {
    ClassicalPos(usize),
    ClassicalNeg(usize),
    Virtual(usize),
}

impl BraidLetter {
    /// 1-based generator index.
    pub fn index(self) -> usize {
        match self {
            BraidLetter::ClassicalPos(i) | BraidLetter::ClassicalNeg(i) | BraidLetter::Virtual(i) => i,
        }
    }

    pub fn is_classical(self) -> bool {
        !matches!(self, BraidLetter::Virtual(_))
    }

    /// Crossing change of a classical letter; virtual letters are fixed.
    pub fn switched(self) -> BraidLetter {
        match self {
            BraidLetter::ClassicalPos(i) => BraidLetter::ClassicalNeg(i),
            BraidLetter::ClassicalNeg(i) => BraidLetter::ClassicalPos(i),
            v => v,
        }
    }
}

impl fmt::Display for BraidLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BraidLetter::ClassicalPos(i) => write!(f, "s{i}"),
            BraidLetter::ClassicalNeg(i) => write!(f, "S{i}"),
            BraidLetter::Virtual(i) => write!(f, "v{i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<BraidLetter>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<BraidLetter>) -> Result<Self, ParseError> {
        if strands == 0 {
            return Err(ParseError::NoStrands);
        }
        for (position, l) in letters.iter().enumerate() {
            let index = l.index();
            if index == 0 || index >= strands {
                return Err(ParseError::IndexOutOfRange { position, index, strands });
            }
        }
        Ok(Self { strands, letters })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[BraidLetter] {
        &self.letters
    }

    /// Same word with letter `index` replaced.
    pub fn with_letter(&self, index: usize, letter: BraidLetter) -> BraidWord {
        let mut letters = self.letters.clone();
        letters[index] = letter;
        BraidWord::new(self.strands, letters).expect("replacement keeps the index")
    }

    /// `perm[s]` is the bottom position of the strand that starts at top
    /// position `s` (0-based). Every letter acts as an adjacent transposition.
    pub fn closure_permutation(&self) -> Vec<usize> {
        let mut at: Vec<usize> = (0..self.strands).collect();
        for l in &self.letters {
            let p = l.index() - 1;
            at.swap(p, p + 1);
        }
        let mut perm = vec![0; self.strands];
        for (pos, &strand) in at.iter().enumerate() {
            perm[strand] = pos;
        }
        perm
    }

    /// Crossing id created for the classical letter at `index`, if any.
    /// Classical letters are numbered 1, 2, ... in word order.
    pub fn crossing_of_letter(&self, index: usize) -> Option<CrossingId> {
        if !self.letters.get(index)?.is_classical() {
            return None;
        }
        let n = self.letters[..index].iter().filter(|l| l.is_classical()).count();
        Some(CrossingId(n as u32 + 1))
    }

    /// Strand cycles of the closure, each starting at its smallest strand,
    /// sorted by that strand.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let perm = self.closure_permutation();
        let mut seen = vec![false; self.strands];
        let mut cycles = Vec::new();
        for s in 0..self.strands {
            if seen[s] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut cur = s;
            while !seen[cur] {
                seen[cur] = true;
                cycle.push(cur);
                // the bottom of `cur` is joined to the top of the same position
                cur = perm[cur];
            }
            cycles.push(cycle);
        }
        cycles
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Parses whitespace-separated `s<k>`, `S<k>`, `v<k>` tokens.
pub fn parse_braid(text: &str, strands: usize) -> Result<BraidWord, ParseError> {
    if strands == 0 {
        return Err(ParseError::NoStrands);
    }
    let mut letters = Vec::new();
    let mut offset = 0;
    for raw in text.split_inclusive(char::is_whitespace) {
        let tok = raw.trim_end();
        let tok_offset = offset;
        offset += raw.len();
        if tok.is_empty() {
            continue;
        }
        let syntax = |message: String| ParseError::Syntax { offset: tok_offset, message };
        if !tok.is_char_boundary(1) {
            return Err(syntax(format!("unknown braid token `{tok}`")));
        }
        let (kind, digits) = tok.split_at(1);
        let index: usize =
            digits.parse().map_err(|_| syntax(format!("expected a generator index after `{kind}`, found `{tok}`")))?;
        let letter = match kind {
            "s" => BraidLetter::ClassicalPos(index),
            "S" => BraidLetter::ClassicalNeg(index),
            "v" => BraidLetter::Virtual(index),
            _ => return Err(syntax(format!("unknown braid token `{tok}`"))),
        };
        if index == 0 || index >= strands {
            return Err(ParseError::IndexOutOfRange { position: letters.len(), index, strands });
        }
        letters.push(letter);
    }
    BraidWord::new(strands, letters)
}

/// Closes a braid into a Gauss-code diagram.
///
/// Components are the cycles of the closure permutation, ordered by their
/// smallest strand, and each component's passages are listed starting at
/// the top of that strand.
pub fn close_braid(b: &BraidWord) -> Diagram {
    let n = b.strands();
    // passages met by each strand, top to bottom
    let mut along: Vec<Vec<Passage>> = vec![Vec::new(); n];
    let mut at: Vec<usize> = (0..n).collect();
    let mut next_id = 1u32;
    for l in b.letters() {
        let p = l.index() - 1;
        let (left, right) = (at[p], at[p + 1]);
        match l {
            BraidLetter::ClassicalPos(_) => {
                along[left].push(Passage::over(next_id, Sign::Pos));
                along[right].push(Passage::under(next_id, Sign::Pos));
                next_id += 1;
            }
            BraidLetter::ClassicalNeg(_) => {
                along[left].push(Passage::under(next_id, Sign::Neg));
                along[right].push(Passage::over(next_id, Sign::Neg));
                next_id += 1;
            }
            BraidLetter::Virtual(_) => {}
        }
        at.swap(p, p + 1);
    }
    let components =
        b.components().into_iter().map(|cycle| cycle.into_iter().flat_map(|s| along[s].clone()).collect()).collect();
    Diagram::from_parts_unchecked(components)
}
