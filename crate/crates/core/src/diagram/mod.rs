//! Oriented virtual link diagrams as signed Gauss codes.
//!
//! Only classical crossings are stored. Each component is a cyclic sequence
//! of passages, listed starting just after the component's base point; a
//! crossing appears exactly twice in the whole diagram, once as an
//! over-passage and once as an under-passage, with the same sign at both.
//! Virtual crossings leave no trace in this representation.

mod braid;

pub use braid::{close_braid, parse_braid, BraidLetter, BraidWord};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::freegroup::component_letter;

/// Largest number of components we can name with a single letter.
pub const MAX_COMPONENTS: usize = 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CrossingId(pub u32);

impl fmt::Display for CrossingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Pos => '+',
            Sign::Neg => '-',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Over,
    Under,
}

impl Role {
    pub fn opposite(self) -> Role {
        match self {
            Role::Over => Role::Under,
            Role::Under => Role::Over,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Passage {
    pub role: Role,
    pub crossing: CrossingId,
    pub sign: Sign,
}

impl Passage {
    pub fn over(id: u32, sign: Sign) -> Self {
        Self { role: Role::Over, crossing: CrossingId(id), sign }
    }

    pub fn under(id: u32, sign: Sign) -> Self {
        Self { role: Role::Under, crossing: CrossingId(id), sign }
    }
}

impl fmt::Display for Passage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = match self.role {
            Role::Over => 'O',
            Role::Under => 'U',
        };
        write!(f, "{r}{}{}", self.crossing, self.sign.symbol())
    }
}

/// Location of a passage: component index and position in its sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position {
    pub component: usize,
    pub index: usize,
}

/// Both ends of one classical crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrossingRef {
    pub id: CrossingId,
    pub sign: Sign,
    pub over: Position,
    pub under: Position,
}

impl CrossingRef {
    pub fn over_component(&self) -> usize {
        self.over.component
    }

    pub fn under_component(&self) -> usize {
        self.under.component
    }

    pub fn is_self_crossing(&self) -> bool {
        self.over.component == self.under.component
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("diagram has no components")]
    Empty,
    #[error("{0} components exceed the supported maximum of 26")]
    TooManyComponents(usize),
    #[error("crossing {0} is not paired as exactly one over- and one under-passage")]
    Unpaired(CrossingId),
    #[error("crossing {0} carries different signs at its two passages")]
    SignMismatch(CrossingId),
    #[error("component {index} out of range for a {count}-component diagram")]
    ComponentOutOfRange { index: usize, count: usize },
    #[error("linking number needs two distinct components, got {0} twice")]
    SameComponent(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("token {position} uses generator index {index}, outside 1..{strands}")]
    IndexOutOfRange { position: usize, index: usize, strands: usize },
    #[error("strand count must be positive")]
    NoStrands,
    #[error(transparent)]
    Invalid(#[from] DiagramError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagram {
    components: Vec<Vec<Passage>>,
}

impl Diagram {
    /// Validates the pairing of over/under passages and signs.
    pub fn new(components: Vec<Vec<Passage>>) -> Result<Self, DiagramError> {
        if components.is_empty() {
            return Err(DiagramError::Empty);
        }
        if components.len() > MAX_COMPONENTS {
            return Err(DiagramError::TooManyComponents(components.len()));
        }
        let mut seen: BTreeMap<CrossingId, (u32, u32, Sign)> = BTreeMap::new();
        for p in components.iter().flatten() {
            let entry = seen.entry(p.crossing).or_insert((0, 0, p.sign));
            match p.role {
                Role::Over => entry.0 += 1,
                Role::Under => entry.1 += 1,
            }
            if entry.2 != p.sign {
                return Err(DiagramError::SignMismatch(p.crossing));
            }
        }
        if let Some((&id, _)) = seen.iter().find(|(_, &(o, u, _))| o != 1 || u != 1) {
            return Err(DiagramError::Unpaired(id));
        }
        Ok(Self { components })
    }

    /// `k` split unknotted components with no crossings.
    pub fn unlink(k: usize) -> Self {
        Self::new(vec![Vec::new(); k.max(1)]).expect("crossing-free diagram is valid")
    }

    pub fn components(&self) -> &[Vec<Passage>] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &[Passage] {
        &self.components[i]
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn crossing_count(&self) -> usize {
        self.components.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn passage(&self, pos: Position) -> Passage {
        self.components[pos.component][pos.index]
    }

    /// All crossings keyed by id.
    pub fn crossings(&self) -> BTreeMap<CrossingId, CrossingRef> {
        let mut over = BTreeMap::new();
        let mut under = BTreeMap::new();
        for (c, comp) in self.components.iter().enumerate() {
            for (index, p) in comp.iter().enumerate() {
                let pos = Position { component: c, index };
                match p.role {
                    Role::Over => over.insert(p.crossing, (pos, p.sign)),
                    Role::Under => under.insert(p.crossing, (pos, p.sign)),
                };
            }
        }
        over.into_iter()
            .map(|(id, (o, sign))| {
                let (u, _) = under[&id];
                (id, CrossingRef { id, sign, over: o, under: u })
            })
            .collect()
    }

    pub fn crossing(&self, id: CrossingId) -> Option<CrossingRef> {
        self.crossings().get(&id).copied()
    }

    pub fn max_crossing_id(&self) -> u32 {
        self.components.iter().flatten().map(|p| p.crossing.0).max().unwrap_or(0)
    }

    fn check_component(&self, i: usize) -> Result<(), DiagramError> {
        if i >= self.components.len() {
            Err(DiagramError::ComponentOutOfRange { index: i, count: self.components.len() })
        } else {
            Ok(())
        }
    }

    /// `link(b, a)`: sum of signs over crossings where component `a` passes
    /// under component `b`. Not symmetric for virtual diagrams.
    pub fn linking_number(&self, b: usize, a: usize) -> Result<i64, DiagramError> {
        self.check_component(b)?;
        self.check_component(a)?;
        if a == b {
            return Err(DiagramError::SameComponent(a));
        }
        Ok(self
            .crossings()
            .values()
            .filter(|c| c.over.component == b && c.under.component == a)
            .map(|c| c.sign.value())
            .sum())
    }

    /// Signed count of crossings where component `i` passes under itself.
    pub fn self_writhe(&self, i: usize) -> i64 {
        self.crossings()
            .values()
            .filter(|c| c.over.component == i && c.under.component == i)
            .map(|c| c.sign.value())
            .sum()
    }

    /// Crossing change: swaps the over/under roles at `id` and flips its sign.
    pub fn switch_crossing(&self, id: CrossingId) -> Option<Diagram> {
        let mut components = self.components.clone();
        let mut found = false;
        for p in components.iter_mut().flatten().filter(|p| p.crossing == id) {
            p.role = p.role.opposite();
            p.sign = p.sign.flip();
            found = true;
        }
        found.then_some(Diagram { components })
    }

    /// Erases signs and over/under markings.
    pub fn flatten(&self) -> FlatDiagram {
        FlatDiagram { components: self.components.iter().map(|c| c.iter().map(|p| p.crossing).collect()).collect() }
    }

    /// Gauss-code text; components separated by ` | `.
    pub fn render_gauss(&self) -> String {
        self.to_string()
    }

    pub(crate) fn from_parts_unchecked(components: Vec<Vec<Passage>>) -> Self {
        debug_assert!(Diagram::new(components.clone()).is_ok());
        Self { components }
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.components.iter().map(|c| c.iter().map(Passage::to_string).collect::<Vec<_>>().join(" ")).collect();
        f.write_str(&parts.join(" | "))
    }
}

impl FromStr for Diagram {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_gauss(s)
    }
}

/// Splits `text` into `|`-separated components and yields each token with
/// its byte offset. Tokens are separated by whitespace or commas.
fn tokenize_components(text: &str) -> Vec<Vec<(usize, &str)>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in text.split('|') {
        let mut tokens = Vec::new();
        let mut start = None;
        for (i, ch) in part.char_indices() {
            if ch.is_whitespace() || ch == ',' {
                if let Some(s) = start.take() {
                    tokens.push((offset + s, &part[s..i]));
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if let Some(s) = start {
            tokens.push((offset + s, &part[s..]));
        }
        out.push(tokens);
        offset += part.len() + 1;
    }
    out
}

fn parse_id(tok: &str, offset: usize) -> Result<u32, ParseError> {
    tok.parse::<u32>()
        .map_err(|_| ParseError::Syntax { offset, message: format!("expected a crossing number, found `{tok}`") })
}

/// Parses a signed Gauss code such as `O1+ U2+ | U1+ O2+`.
///
/// An empty component (nothing between bars) is a crossing-free unknot.
pub fn parse_gauss(text: &str) -> Result<Diagram, ParseError> {
    let mut components = Vec::new();
    for tokens in tokenize_components(text) {
        let mut comp = Vec::with_capacity(tokens.len());
        for (offset, tok) in tokens {
            let syntax = |message: String| ParseError::Syntax { offset, message };
            let role = match tok.as_bytes()[0] {
                b'O' => Role::Over,
                b'U' => Role::Under,
                _ => return Err(syntax(format!("passage `{tok}` must start with O or U"))),
            };
            let sign = match tok.as_bytes()[tok.len() - 1] {
                b'+' => Sign::Pos,
                b'-' => Sign::Neg,
                _ => return Err(syntax(format!("passage `{tok}` must end with + or -"))),
            };
            if tok.len() < 3 {
                return Err(syntax(format!("passage `{tok}` has no crossing number")));
            }
            let id = parse_id(&tok[1..tok.len() - 1], offset + 1)?;
            comp.push(Passage { role, crossing: CrossingId(id), sign });
        }
        components.push(comp);
    }
    Ok(Diagram::new(components)?)
}

/// A diagram with all classical crossings flattened. Export only.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlatDiagram {
    components: Vec<Vec<CrossingId>>,
}

impl FlatDiagram {
    pub fn components(&self) -> &[Vec<CrossingId>] {
        &self.components
    }

    /// Already flat.
    pub fn flatten(&self) -> FlatDiagram {
        self.clone()
    }
}

impl fmt::Display for FlatDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.components.iter().map(|c| c.iter().map(|id| format!("F{id}")).collect::<Vec<_>>().join(" ")).collect();
        f.write_str(&parts.join(" | "))
    }
}

impl FromStr for FlatDiagram {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut components = Vec::new();
        let mut count: BTreeMap<CrossingId, usize> = BTreeMap::new();
        for tokens in tokenize_components(text) {
            let mut comp = Vec::new();
            for (offset, tok) in tokens {
                let Some(num) = tok.strip_prefix('F') else {
                    return Err(ParseError::Syntax {
                        offset,
                        message: format!("flat passage `{tok}` must start with F"),
                    });
                };
                let id = CrossingId(parse_id(num, offset + 1)?);
                *count.entry(id).or_default() += 1;
                comp.push(id);
            }
            components.push(comp);
        }
        if let Some((&id, _)) = count.iter().find(|(_, &n)| n != 2) {
            return Err(DiagramError::Unpaired(id).into());
        }
        if components.len() > MAX_COMPONENTS {
            return Err(DiagramError::TooManyComponents(components.len()).into());
        }
        Ok(FlatDiagram { components })
    }
}

/// Display name of component `i` in reports.
pub fn component_name(i: usize) -> char {
    component_letter(i)
}
