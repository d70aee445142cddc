//! Skein relations for μ at a marked classical crossing.
//!
//! Fix a crossing where component `i` passes under component `k` with sign
//! `e`. Cut `i`'s longitude at that under-passage as `V · r^e · W`, where `r`
//! is segment `m` of `k`. That segment's series is the base meridian of `k`
//! conjugated by `k`'s partial longitude `u⁻¹ = l_{k,m}`, so
//!
//! ```text
//! ψ(l) = ψ(l₀) (1 + x_k)^e ψ(l_∞),   l₀ = V l_{k,m},   l_∞ = l_{k,m}⁻¹ W.
//! ```
//!
//! Switching the crossing drops the middle factor; away from monomials
//! containing `x_i` every other series is unchanged. On monomials without
//! `x_i` that contain `x_k` exactly once, `ψ(l₊) − ψ(l₋)` therefore equals
//! `ψ(l₀) x_k ψ(l_∞)` whichever of the two diagrams has the positive
//! crossing.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::diagram::{close_braid, BraidWord, CrossingId, Diagram, Sign};
use crate::freegroup::{component_letter, GroupWord};
use crate::magnus::{rho_fixpoint, MagnusError, TruncatedSeries};
use crate::milnor::{longitude_series, sequence_name, sequences, MilnorError};
use crate::wirtinger::{arc_name, presentation, ArcGen};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SkeinError {
    #[error("mark {mark} is outside a braid of {len} letters")]
    MarkOutOfRange { mark: usize, len: usize },
    #[error("marked letter {0} is virtual")]
    MarkNotClassical(usize),
    #[error("no crossing {0}")]
    NoCrossing(CrossingId),
    #[error(transparent)]
    Milnor(#[from] MilnorError),
}

impl From<MagnusError> for SkeinError {
    fn from(e: MagnusError) -> Self {
        SkeinError::Milnor(e.into())
    }
}

/// A braid with one classical letter marked (0-based letter index).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedBraid {
    braid: BraidWord,
    mark: usize,
}

impl MarkedBraid {
    pub fn new(braid: BraidWord, mark: usize) -> Result<Self, SkeinError> {
        let len = braid.letters().len();
        let letter = braid.letters().get(mark).ok_or(SkeinError::MarkOutOfRange { mark, len })?;
        if !letter.is_classical() {
            return Err(SkeinError::MarkNotClassical(mark));
        }
        Ok(Self { braid, mark })
    }

    pub fn braid(&self) -> &BraidWord {
        &self.braid
    }

    pub fn mark(&self) -> usize {
        self.mark
    }

    pub fn crossing(&self) -> CrossingId {
        self.braid.crossing_of_letter(self.mark).expect("mark is classical")
    }

    pub fn diagram(&self) -> Diagram {
        close_braid(&self.braid)
    }
}

/// Which of the two diagrams carries the target's under-passage: case one
/// when that crossing is positive (it is `L₊`), case two when negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SkeinCase {
    One,
    Two,
}

/// The four longitudes of a skein relation for `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeinVariants {
    pub target: usize,
    /// Component passing over the target at the mark.
    pub partner: usize,
    pub case: SkeinCase,
    pub plus: GroupWord,
    pub minus: GroupWord,
    pub zero: GroupWord,
    pub infinity: GroupWord,
    pub psi_plus: TruncatedSeries,
    pub psi_minus: TruncatedSeries,
    pub psi_zero: TruncatedSeries,
    pub psi_infinity: TruncatedSeries,
}

impl fmt::Display for SkeinVariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = component_letter(self.target);
        writeln!(
            f,
            "target {t} under {} (case {})",
            component_letter(self.partner),
            match self.case {
                SkeinCase::One => 1,
                SkeinCase::Two => 2,
            }
        )?;
        for (name, w, s) in [
            ("l+", &self.plus, &self.psi_plus),
            ("l-", &self.minus, &self.psi_minus),
            ("l0", &self.zero, &self.psi_zero),
            ("linf", &self.infinity, &self.psi_infinity),
        ] {
            writeln!(f, "  {name} = {}    psi = {s}", w.render(arc_name))?;
        }
        Ok(())
    }
}

/// Skein variants for the component passing under at `crossing` in `d`.
pub fn variants_at(d: &Diagram, crossing: CrossingId, n: usize) -> Result<SkeinVariants, SkeinError> {
    let c = d.crossing(crossing).ok_or(SkeinError::NoCrossing(crossing))?;
    let (target, partner) = (c.under.component, c.over.component);
    let switched = d.switch_crossing(crossing).expect("crossing exists");

    let p = presentation(d);
    let map = rho_fixpoint(&p, n)?;
    let letters_of =
        |comp: usize| -> Vec<_> { p.crossing_relations().iter().filter(|r| r.component == comp).copied().collect() };
    let mine = letters_of(target);
    let j = mine.iter().position(|r| r.crossing == crossing).expect("under-passage is listed");
    let word = |rels: &[crate::wirtinger::CrossingRelation]| {
        // longitude order: later under-passages on the left
        rels.iter()
            .rev()
            .fold(GroupWord::identity(), |acc, r| acc.multiply(&GroupWord::power_of(r.over.gen(), r.sign.value())))
    };
    let v = word(&mine[j + 1..]);
    let w = word(&mine[..j]);
    let over: ArcGen = mine[j].over;
    let partial = word(&letters_of(partner)[..over.arc]);
    let zero = v.multiply(&partial);
    let infinity = partial.inverse().multiply(&w);
    let psi_zero = map.psi(&zero)?;
    let psi_infinity = map.psi(&infinity)?;

    let here = map.psi(p.segment_longitude(target))?;
    let there = longitude_series(&switched, n)?.swap_remove(target);
    let here_word = p.longitudes[target].clone();
    let there_word = presentation(&switched).longitudes.swap_remove(target);
    let case = if c.sign == Sign::Pos { SkeinCase::One } else { SkeinCase::Two };
    let (plus, minus, psi_plus, psi_minus) = match case {
        SkeinCase::One => (here_word, there_word, here, there),
        SkeinCase::Two => (there_word, here_word, there, here),
    };
    Ok(SkeinVariants {
        target,
        partner,
        case,
        plus,
        minus,
        zero: p.fold_word(&zero),
        infinity: p.fold_word(&infinity),
        psi_plus,
        psi_minus,
        psi_zero,
        psi_infinity,
    })
}

/// Variants for both strands through the mark: the one passing under in
/// the braid as given, then the one passing under after the switch.
pub fn variants(mb: &MarkedBraid, n: usize) -> Result<[SkeinVariants; 2], SkeinError> {
    let d = mb.diagram();
    let x = mb.crossing();
    let switched = d.switch_crossing(x).expect("mark is a crossing");
    Ok([variants_at(&d, x, n)?, variants_at(&switched, x, n)?])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SkeinFamily {
    /// `J = (k)`: difference is 1.
    Base,
    /// `J = J' k`: difference is `μ(J', l₀)`.
    Terminal,
    /// `J = k J''`: difference is `μ(J'', l_∞)`.
    Leading,
    /// `J = J' k J''`: difference is `μ(J', l₀) μ(J'', l_∞)`.
    Interior,
    /// `J` avoids both `k` and the target: difference is 0.
    Untouched,
    /// Self-crossing mark: `μ(i, l₊) − μ(i, l₋)` is even.
    SelfParity,
}

impl SkeinFamily {
    pub fn name(self) -> &'static str {
        match self {
            SkeinFamily::Base => "base",
            SkeinFamily::Terminal => "terminal",
            SkeinFamily::Leading => "leading",
            SkeinFamily::Interior => "interior",
            SkeinFamily::Untouched => "untouched",
            SkeinFamily::SelfParity => "self-parity",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeinCheck {
    pub target: usize,
    pub partner: usize,
    pub family: SkeinFamily,
    pub sequence: Vec<usize>,
    pub lhs: BigInt,
    pub rhs: BigInt,
    pub pass: bool,
}

impl fmt::Display for SkeinCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass { "PASS" } else { "FAIL" };
        let modulus = if self.family == SkeinFamily::SelfParity { " (mod 2)" } else { "" };
        write!(
            f,
            "{status} lhs={} rhs={}{modulus} family={} J={} target={}",
            self.lhs,
            self.rhs,
            self.family.name(),
            sequence_name(&self.sequence),
            component_letter(self.target)
        )
    }
}

/// Evaluates every relation family of one variant set on all sequences
/// shorter than `n`.
pub fn check_variants(v: &SkeinVariants, n: usize) -> Vec<SkeinCheck> {
    let (i, k) = (v.target, v.partner);
    let diff = |seq: &[usize]| v.psi_plus.coefficient(seq) - v.psi_minus.coefficient(seq);
    let mut out = Vec::new();
    if i == k {
        let lhs = diff(&[i]);
        out.push(SkeinCheck {
            target: i,
            partner: k,
            family: SkeinFamily::SelfParity,
            sequence: vec![i],
            pass: lhs.is_even(),
            lhs,
            rhs: BigInt::zero(),
        });
        return out;
    }
    for seq in sequences(v.psi_plus.vars(), n) {
        if seq.contains(&i) {
            continue;
        }
        let ks: Vec<usize> = (0..seq.len()).filter(|&p| seq[p] == k).collect();
        let (family, rhs) = match ks.as_slice() {
            [] => (SkeinFamily::Untouched, BigInt::zero()),
            &[p] => {
                let (before, after) = (&seq[..p], &seq[p + 1..]);
                let family = match (before.is_empty(), after.is_empty()) {
                    (true, true) => SkeinFamily::Base,
                    (false, true) => SkeinFamily::Terminal,
                    (true, false) => SkeinFamily::Leading,
                    (false, false) => SkeinFamily::Interior,
                };
                let c0 = if before.is_empty() { BigInt::one() } else { v.psi_zero.coefficient(before) };
                let ci = if after.is_empty() { BigInt::one() } else { v.psi_infinity.coefficient(after) };
                (family, c0 * ci)
            }
            _ => continue,
        };
        let lhs = diff(&seq);
        out.push(SkeinCheck { target: i, partner: k, family, sequence: seq, pass: lhs == rhs, lhs, rhs });
    }
    out
}

/// All relation instances at the mark, for both strands through it.
pub fn check_skein(mb: &MarkedBraid, n: usize) -> Result<Vec<SkeinCheck>, SkeinError> {
    Ok(variants(mb, n)?.iter().flat_map(|v| check_variants(v, n)).collect())
}

/// As [`check_skein`] for a crossing of an arbitrary diagram.
pub fn check_skein_at(d: &Diagram, crossing: CrossingId, n: usize) -> Result<Vec<SkeinCheck>, SkeinError> {
    let switched = d.switch_crossing(crossing).ok_or(SkeinError::NoCrossing(crossing))?;
    let mut out = check_variants(&variants_at(d, crossing, n)?, n);
    out.extend(check_variants(&variants_at(&switched, crossing, n)?, n));
    Ok(out)
}
