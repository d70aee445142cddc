//! μ and μ̄ tables.
//!
//! `μ(J, w_i)` is the coefficient of `x_J` in the Magnus expansion of the
//! longitude of component `i`. `Δ(J, w_i)` is the gcd of μ over shorter
//! index sequences derived from `J`, and `μ̄` is μ reduced modulo Δ, set to
//! zero whenever `i` occurs in `J`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::diagram::{Diagram, DiagramError};
use crate::freegroup::{component_index, component_letter, parse_word, FreeGroupError, Gen, GroupWord};
use crate::magnus::{rho_fixpoint, ArcSeriesMap, MagnusError, TruncatedSeries};
use crate::wirtinger::presentation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MilnorError {
    #[error(transparent)]
    Magnus(#[from] MagnusError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("line {line}: {source}")]
    Word { line: usize, source: FreeGroupError },
    #[error("line {line}: {message}")]
    Longitudes { line: usize, message: String },
}

/// Which lower-order sequences enter Δ.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum DeltaConvention {
    /// Ordered proper subsequences of `J`, same target.
    #[default]
    Subsequences,
    /// Proper subsequences of every cyclic rotation of `(J, i)`, the last
    /// entry of each read as the target.
    CyclicSubsequences,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuEntry {
    pub target: usize,
    pub sequence: Vec<usize>,
    pub mu: BigInt,
    pub delta: BigInt,
    pub mubar: BigInt,
    pub repeated_index: bool,
    pub contains_target: bool,
    /// Raw μ of length ≥ 2 depends on where the longitude starts.
    pub base_dependent: bool,
}

impl MuEntry {
    pub fn flags(&self) -> Vec<&'static str> {
        let mut f = Vec::new();
        if self.repeated_index {
            f.push("repeated");
        }
        if self.contains_target {
            f.push("target");
        }
        if self.base_dependent {
            f.push("base-dependent");
        }
        f
    }

    /// `b,c;a` style label.
    pub fn label(&self) -> String {
        format!("{};{}", sequence_name(&self.sequence), component_letter(self.target))
    }
}

pub fn sequence_name(seq: &[usize]) -> String {
    seq.iter().map(|&i| component_letter(i).to_string()).collect::<Vec<_>>().join(",")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuTable {
    cap: usize,
    convention: DeltaConvention,
    longitudes: Vec<TruncatedSeries>,
    entries: Vec<MuEntry>,
}

impl MuTable {
    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn components(&self) -> usize {
        self.longitudes.len()
    }

    pub fn convention(&self) -> DeltaConvention {
        self.convention
    }

    /// Ordered by target, then by sequence length, then lexicographically.
    pub fn entries(&self) -> &[MuEntry] {
        &self.entries
    }

    pub fn longitude_series(&self, i: usize) -> &TruncatedSeries {
        &self.longitudes[i]
    }

    pub fn get(&self, sequence: &[usize], target: usize) -> Option<&MuEntry> {
        let k = self.components();
        if target >= k || sequence.is_empty() || sequence.len() >= self.cap || sequence.iter().any(|&j| j >= k) {
            return None;
        }
        let per_target = self.entries.len() / k.max(1);
        // position of `sequence` in graded lexicographic order
        let mut idx = 0;
        let mut block = 1;
        for _ in 1..sequence.len() {
            block *= k;
            idx += block;
        }
        let mut within = 0;
        for &j in sequence {
            within = within * k + j;
        }
        self.entries.get(target * per_target + idx + within)
    }

    pub fn mu(&self, sequence: &[usize], target: usize) -> BigInt {
        self.get(sequence, target).map(|e| e.mu.clone()).unwrap_or_default()
    }

    pub fn mubar(&self, sequence: &[usize], target: usize) -> BigInt {
        self.get(sequence, target).map(|e| e.mubar.clone()).unwrap_or_default()
    }

    /// True when every μ̄ entry for `target` vanishes, i.e. the longitude
    /// series is 1 modulo the ideal that μ̄ quotients by.
    pub fn reduces_to_one(&self, target: usize) -> bool {
        self.entries.iter().filter(|e| e.target == target).all(|e| e.mubar.is_zero())
    }

    /// Human-readable table with columns J, i, μ, Δ, μ̄, flags.
    pub fn render_text(&self) -> String {
        let mut rows = vec![["J".to_string(), "i".into(), "mu".into(), "delta".into(), "mubar".into(), "flags".into()]];
        for e in &self.entries {
            rows.push([
                sequence_name(&e.sequence),
                component_letter(e.target).to_string(),
                e.mu.to_string(),
                e.delta.to_string(),
                e.mubar.to_string(),
                e.flags().join(","),
            ]);
        }
        let mut width = [0usize; 6];
        for r in &rows {
            for (w, c) in width.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        for r in &rows {
            let cells: Vec<String> = r.iter().zip(width).map(|(c, w)| format!("{c:<w$}")).collect();
            out.push_str(cells.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for MuTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_text())
    }
}

/// All sequences over `0..k` of length `1..cap`, in graded lexicographic order.
pub fn sequences(k: usize, cap: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 1..cap {
        let mut next = Vec::with_capacity(layer.len() * k);
        for s in &layer {
            for j in 0..k {
                let mut t = s.clone();
                t.push(j);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Ordered subsequences of `s` other than `s` itself and the empty one.
fn proper_subsequences(s: &[usize]) -> BTreeSet<Vec<usize>> {
    let n = s.len();
    let mut out = BTreeSet::new();
    for mask in 1..(1u64 << n) - 1 {
        out.insert((0..n).filter(|b| mask >> b & 1 == 1).map(|b| s[b]).collect());
    }
    out
}

fn gcd_all(values: impl IntoIterator<Item = BigInt>) -> BigInt {
    values.into_iter().fold(BigInt::zero(), |g, v| g.gcd(&v))
}

/// The (sequence, target) pairs whose μ values make up Δ(J, w_i).
pub fn delta_sources(sequence: &[usize], target: usize, convention: DeltaConvention) -> Vec<(Vec<usize>, usize)> {
    match convention {
        DeltaConvention::Subsequences => proper_subsequences(sequence).into_iter().map(|s| (s, target)).collect(),
        DeltaConvention::CyclicSubsequences => {
            let mut full = sequence.to_vec();
            full.push(target);
            let mut set = BTreeSet::new();
            for r in 0..full.len() {
                let mut rot = full.clone();
                rot.rotate_left(r);
                for s in proper_subsequences(&rot) {
                    if s.len() >= 2 {
                        let (last, rest) = s.split_last().expect("length at least 2");
                        set.insert((rest.to_vec(), *last));
                    }
                }
            }
            set.into_iter().collect()
        }
    }
}

/// Builds the table from longitude series, one per component.
pub fn table_from_series(
    longitudes: Vec<TruncatedSeries>,
    cap: usize,
    convention: DeltaConvention,
) -> Result<MuTable, MilnorError> {
    if cap < 2 {
        return Err(MagnusError::InvalidCap(cap).into());
    }
    let k = longitudes.len();
    let seqs = sequences(k, cap);
    let mut entries = Vec::with_capacity(k * seqs.len());
    for target in 0..k {
        for seq in &seqs {
            let mu = longitudes[target].coefficient(seq);
            let delta =
                gcd_all(delta_sources(seq, target, convention).into_iter().map(|(s, t)| longitudes[t].coefficient(&s)));
            let contains_target = seq.contains(&target);
            let mubar = if contains_target {
                BigInt::zero()
            } else if delta.is_zero() {
                mu.clone()
            } else {
                mu.mod_floor(&delta)
            };
            let distinct: BTreeSet<_> = seq.iter().collect();
            entries.push(MuEntry {
                target,
                sequence: seq.clone(),
                mu,
                delta: delta.abs(),
                mubar,
                repeated_index: distinct.len() < seq.len(),
                contains_target,
                base_dependent: seq.len() >= 2,
            });
        }
    }
    Ok(MuTable { cap, convention, longitudes, entries })
}

/// Longitude series of every component of `d` at cap `n`.
pub fn longitude_series(d: &Diagram, n: usize) -> Result<Vec<TruncatedSeries>, MilnorError> {
    let p = presentation(d);
    let map = rho_fixpoint(&p, n)?;
    (0..d.component_count()).map(|i| map.psi(p.segment_longitude(i)).map_err(MilnorError::from)).collect()
}

pub fn mu_table(d: &Diagram, n: usize) -> Result<MuTable, MilnorError> {
    mu_table_with(d, n, DeltaConvention::default())
}

pub fn mu_table_with(d: &Diagram, n: usize, convention: DeltaConvention) -> Result<MuTable, MilnorError> {
    if n < 2 {
        return Err(MagnusError::InvalidCap(n).into());
    }
    table_from_series(longitude_series(d, n)?, n, convention)
}

/// Table for longitudes already written in base meridians: generator `i`
/// is the meridian of component `i`.
pub fn mu_from_longitudes(longitudes: &[GroupWord], n: usize) -> Result<MuTable, MilnorError> {
    mu_from_longitudes_with(longitudes, n, DeltaConvention::default())
}

pub fn mu_from_longitudes_with(
    longitudes: &[GroupWord],
    n: usize,
    convention: DeltaConvention,
) -> Result<MuTable, MilnorError> {
    if n < 2 {
        return Err(MagnusError::InvalidCap(n).into());
    }
    let map = ArcSeriesMap::base_meridians(n, longitudes.len());
    let series = longitudes.iter().map(|w| map.psi(w)).collect::<Result<Vec<_>, _>>()?;
    table_from_series(series, n, convention)
}

/// Parses lines `w_<letter> = <word>`. Blank lines and `#` comments are
/// skipped. Every component from `a` up to the last one named must have
/// exactly one line, and words may only use those components' letters
/// (optionally with arc index 0).
pub fn parse_longitudes(text: &str) -> Result<Vec<GroupWord>, MilnorError> {
    let mut lines = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |message: String| MilnorError::Longitudes { line: no + 1, message };
        let (lhs, rhs) = line.split_once('=').ok_or_else(|| bad("expected `w_<letter> = <word>`".into()))?;
        let name = lhs.trim().strip_prefix("w_").ok_or_else(|| bad(format!("bad longitude name `{}`", lhs.trim())))?;
        let mut chars = name.chars();
        let comp = match (chars.next().and_then(component_index), chars.next()) {
            (Some(c), None) => c,
            _ => return Err(bad(format!("bad longitude name `w_{name}`"))),
        };
        lines.push((no + 1, comp, rhs.to_string()));
    }
    let k = lines.iter().map(|l| l.1 + 1).max().unwrap_or(0);
    if k == 0 {
        return Err(MilnorError::Longitudes { line: 0, message: "no longitudes given".into() });
    }
    let mut words: Vec<Option<GroupWord>> = vec![None; k];
    for (line, comp, rhs) in lines {
        if words[comp].is_some() {
            return Err(MilnorError::Longitudes { line, message: format!("w_{} given twice", component_letter(comp)) });
        }
        let w = parse_word(&rhs, |c, arc| {
            let i = component_index(c)?;
            (i < k && arc.unwrap_or(0) == 0).then_some(i as Gen)
        })
        .map_err(|source| MilnorError::Word { line, source })?;
        words[comp] = Some(w);
    }
    words
        .into_iter()
        .enumerate()
        .map(|(i, w)| {
            w.ok_or_else(|| MilnorError::Longitudes { line: 0, message: format!("missing w_{}", component_letter(i)) })
        })
        .collect()
}

/// Components whose longitude has nonzero exponent sum in their own meridian.
pub fn classicality_obstruction(t: &MuTable) -> Vec<(usize, BigInt)> {
    (0..t.components())
        .filter_map(|i| {
            let v = t.mu(&[i], i);
            (!v.is_zero()).then_some((i, v))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkingCheck {
    /// Over component `b` in `link(b, a)`.
    pub over: usize,
    /// Under component `a`; μ is read from `w_a`.
    pub under: usize,
    pub mu: BigInt,
    pub link: i64,
    pub pass: bool,
}

/// Compares `μ(b, w_a)` with `link(b, a)` for every ordered pair.
pub fn linking_consistency(d: &Diagram, t: &MuTable) -> Result<Vec<LinkingCheck>, MilnorError> {
    let k = d.component_count();
    let mut out = Vec::new();
    for a in 0..k {
        for b in 0..k {
            if a == b {
                continue;
            }
            let link = d.linking_number(b, a)?;
            let mu = t.mu(&[b], a);
            out.push(LinkingCheck { over: b, under: a, pass: mu == BigInt::from(link), mu, link });
        }
    }
    Ok(out)
}
