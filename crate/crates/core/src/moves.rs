//! Diagram rewriting: Reidemeister moves, the forbidden move, self-crossing
//! changes, and a seeded fuzzer that strings them together.
//!
//! Positions are linear: two passages are adjacent only when their indices
//! differ by one, so no move straddles a component's base point. Insertion
//! points are gaps `0..=len`, gap `p` being just before passage `p`.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::diagram::{CrossingId, Diagram, Passage, Role, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KinkOrder {
    /// Over-passage first.
    OverFirst,
    UnderFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strands {
    Parallel,
    Antiparallel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gap {
    pub component: usize,
    pub position: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    R1Add {
        at: Gap,
        id: u32,
        sign: Sign,
        order: KinkOrder,
    },
    R1Remove {
        component: usize,
        position: usize,
    },
    /// Inserts over-passages `x, y` (signs `sign, -sign`) at `over` and the
    /// matching under-passages at `under`.
    R2Add {
        over: Gap,
        under: Gap,
        ids: (u32, u32),
        sign: Sign,
        strands: Strands,
    },
    R2Remove {
        component: usize,
        position: usize,
    },
    /// `x`: top over middle, `y`: top over bottom, `z`: middle over bottom.
    R3 {
        x: CrossingId,
        y: CrossingId,
        z: CrossingId,
    },
    Forbidden {
        component: usize,
        position: usize,
    },
    SelfCrossingChange {
        crossing: CrossingId,
    },
    /// Any virtual or mixed move; nothing changes at the Gauss level.
    Virtual,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    R1Add,
    R1Remove,
    R2Add,
    R2Remove,
    R3,
    Forbidden,
    SelfCrossingChange,
    Virtual,
}

impl MoveKind {
    pub fn tag(self) -> &'static str {
        match self {
            MoveKind::R1Add => "R1+",
            MoveKind::R1Remove => "R1-",
            MoveKind::R2Add => "R2+",
            MoveKind::R2Remove => "R2-",
            MoveKind::R3 => "R3",
            MoveKind::Forbidden => "FORBIDDEN",
            MoveKind::SelfCrossingChange => "SCC",
            MoveKind::Virtual => "V",
        }
    }

    fn from_tag(tag: &str) -> Option<MoveKind> {
        use MoveKind::*;
        [R1Add, R1Remove, R2Add, R2Remove, R3, Forbidden, SelfCrossingChange, Virtual]
            .into_iter()
            .find(|k| k.tag() == tag)
    }
}

impl Move {
    pub fn kind(&self) -> MoveKind {
        match self {
            Move::R1Add { .. } => MoveKind::R1Add,
            Move::R1Remove { .. } => MoveKind::R1Remove,
            Move::R2Add { .. } => MoveKind::R2Add,
            Move::R2Remove { .. } => MoveKind::R2Remove,
            Move::R3 { .. } => MoveKind::R3,
            Move::Forbidden { .. } => MoveKind::Forbidden,
            Move::SelfCrossingChange { .. } => MoveKind::SelfCrossingChange,
            Move::Virtual => MoveKind::Virtual,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("{kind} does not apply: {detail}")]
    Precondition { kind: &'static str, detail: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

fn violated(kind: MoveKind, detail: impl Into<String>) -> MoveError {
    MoveError::Precondition { kind: kind.tag(), detail: detail.into() }
}

/// Equivalence classes the fuzzer can explore.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MoveClass {
    Isotopy,
    Welded,
    Homotopy,
    WeldedHomotopy,
}

impl MoveClass {
    pub fn kinds(self) -> Vec<MoveKind> {
        use MoveKind::*;
        let mut k = vec![R1Add, R1Remove, R2Add, R2Remove, R3];
        if matches!(self, MoveClass::Welded | MoveClass::WeldedHomotopy) {
            k.push(Forbidden);
        }
        if matches!(self, MoveClass::Homotopy | MoveClass::WeldedHomotopy) {
            k.push(SelfCrossingChange);
        }
        k
    }
}

impl FromStr for MoveClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "isotopy" => Ok(MoveClass::Isotopy),
            "welded" => Ok(MoveClass::Welded),
            "homotopy" => Ok(MoveClass::Homotopy),
            "welded-homotopy" => Ok(MoveClass::WeldedHomotopy),
            _ => Err(format!("unknown move class `{s}`")),
        }
    }
}

fn check_gap(d: &Diagram, kind: MoveKind, g: Gap) -> Result<(), MoveError> {
    let Some(comp) = d.components().get(g.component) else {
        return Err(violated(kind, format!("no component {}", g.component)));
    };
    if g.position > comp.len() {
        return Err(violated(
            kind,
            format!("gap {} beyond component {} of length {}", g.position, g.component, comp.len()),
        ));
    }
    Ok(())
}

fn check_pair(d: &Diagram, kind: MoveKind, component: usize, position: usize) -> Result<(Passage, Passage), MoveError> {
    let comp = d.components().get(component).ok_or_else(|| violated(kind, format!("no component {component}")))?;
    if position + 1 >= comp.len() {
        return Err(violated(kind, format!("no adjacent pair at {component}:{position}")));
    }
    Ok((comp[position], comp[position + 1]))
}

fn check_fresh(d: &Diagram, kind: MoveKind, ids: &[u32]) -> Result<(), MoveError> {
    let crossings = d.crossings();
    for (n, &id) in ids.iter().enumerate() {
        if crossings.contains_key(&CrossingId(id)) || ids[..n].contains(&id) {
            return Err(violated(kind, format!("crossing id {id} is not fresh")));
        }
    }
    Ok(())
}

/// Positions of the under-passages of an R2 bigon whose over-passages sit
/// at `component:position`, `position + 1`.
fn r2_bigon(d: &Diagram, component: usize, position: usize) -> Option<(usize, usize, usize)> {
    let (p, q) = check_pair(d, MoveKind::R2Remove, component, position).ok()?;
    if p.role != Role::Over || q.role != Role::Over || p.sign == q.sign {
        return None;
    }
    let cr = d.crossings();
    let (ux, uy) = (cr[&p.crossing].under, cr[&q.crossing].under);
    if ux.component != uy.component || ux.index.abs_diff(uy.index) != 1 {
        return None;
    }
    Some((ux.component, ux.index.min(uy.index), ux.index.max(uy.index)))
}

/// Locates the three adjacent passage pairs of an R3 triangle, as
/// `(component, first index)` for the top, middle and bottom strands.
///
/// With `t`, `m`, `b` = +1 when the top, middle, bottom strand meets its
/// two crossings in the order (x, y), (x, z), (y, z), a triangle can be
/// pushed across its third strand exactly when
/// `sign(y) sign(z) = t m` and `sign(x) sign(z) = t b`.
fn r3_site(d: &Diagram, x: CrossingId, y: CrossingId, z: CrossingId) -> Result<[(usize, usize); 3], String> {
    if x == y || y == z || x == z {
        return Err("crossings must be distinct".into());
    }
    let cr = d.crossings();
    let get = |id: CrossingId| cr.get(&id).copied().ok_or_else(|| format!("no crossing {id}"));
    let (cx, cy, cz) = (get(x)?, get(y)?, get(z)?);
    let adjacent = |a: crate::diagram::Position, b: crate::diagram::Position, what: &str| {
        if a.component == b.component && a.index.abs_diff(b.index) == 1 {
            Ok((a.component, a.index.min(b.index), if a.index < b.index { 1 } else { -1 }))
        } else {
            Err(format!("{what} passages are not adjacent"))
        }
    };
    let (tc, tp, t) = adjacent(cx.over, cy.over, "top")?;
    let (mc, mp, m) = adjacent(cx.under, cz.over, "middle")?;
    let (bc, bp, b) = adjacent(cy.under, cz.under, "bottom")?;
    let (sx, sy, sz) = (cx.sign.value(), cy.sign.value(), cz.sign.value());
    if sy * sz != t * m || sx * sz != t * b {
        return Err("signs and orientations do not form a movable triangle".into());
    }
    Ok([(tc, tp), (mc, mp), (bc, bp)])
}

/// Applies `m`, checking its structural precondition.
pub fn apply(d: &Diagram, m: &Move) -> Result<Diagram, MoveError> {
    let kind = m.kind();
    let mut comps: Vec<Vec<Passage>> = d.components().to_vec();
    match *m {
        Move::R1Add { at, id, sign, order } => {
            check_gap(d, kind, at)?;
            check_fresh(d, kind, &[id])?;
            let (o, u) = (Passage::over(id, sign), Passage::under(id, sign));
            let pair = match order {
                KinkOrder::OverFirst => [o, u],
                KinkOrder::UnderFirst => [u, o],
            };
            comps[at.component].splice(at.position..at.position, pair);
        }
        Move::R1Remove { component, position } => {
            let (p, q) = check_pair(d, kind, component, position)?;
            if p.crossing != q.crossing {
                return Err(violated(
                    kind,
                    format!("passages at {component}:{position} belong to different crossings"),
                ));
            }
            comps[component].drain(position..position + 2);
        }
        Move::R2Add { over, under, ids: (x, y), sign, strands } => {
            check_gap(d, kind, over)?;
            check_gap(d, kind, under)?;
            check_fresh(d, kind, &[x, y])?;
            if over == under {
                return Err(violated(kind, "over and under strands use the same gap"));
            }
            let ov = [Passage::over(x, sign), Passage::over(y, sign.flip())];
            let un = match strands {
                Strands::Parallel => [Passage::under(x, sign), Passage::under(y, sign.flip())],
                Strands::Antiparallel => [Passage::under(y, sign.flip()), Passage::under(x, sign)],
            };
            // insert at the later gap first so the earlier one stays valid
            let mut inserts = [(over, ov), (under, un)];
            inserts.sort_by_key(|(g, _)| std::cmp::Reverse((g.component, g.position)));
            for (g, pair) in inserts {
                comps[g.component].splice(g.position..g.position, pair);
            }
        }
        Move::R2Remove { component, position } => {
            let (uc, lo, hi) = r2_bigon(d, component, position)
                .ok_or_else(|| violated(kind, format!("no bigon with over-passages at {component}:{position}")))?;
            let mut removals = [(component, position + 1), (component, position), (uc, hi), (uc, lo)];
            removals.sort_by(|a, b| b.cmp(a));
            for (c, i) in removals {
                comps[c].remove(i);
            }
        }
        Move::R3 { x, y, z } => {
            let site = r3_site(d, x, y, z).map_err(|e| violated(kind, e))?;
            for (c, p) in site {
                comps[c].swap(p, p + 1);
            }
        }
        Move::Forbidden { component, position } => {
            let (p, q) = check_pair(d, kind, component, position)?;
            if p.role != Role::Over || q.role != Role::Over {
                return Err(violated(kind, format!("passages at {component}:{position} are not both over")));
            }
            comps[component].swap(position, position + 1);
        }
        Move::SelfCrossingChange { crossing } => {
            let c = d.crossing(crossing).ok_or_else(|| violated(kind, format!("no crossing {crossing}")))?;
            if !c.is_self_crossing() {
                return Err(violated(kind, format!("crossing {crossing} joins two components")));
            }
            return Ok(d.switch_crossing(crossing).expect("crossing exists"));
        }
        Move::Virtual => return Ok(d.clone()),
    }
    Ok(Diagram::new(comps).expect("moves preserve Gauss pairing"))
}

/// Every applicable move of `kind` that needs no fresh data. Insertion
/// moves have unbounded choices and are sampled by [`fuzz`] instead.
pub fn sites(d: &Diagram, kind: MoveKind) -> Vec<Move> {
    let mut out = Vec::new();
    let pairs = || {
        d.components()
            .iter()
            .enumerate()
            .flat_map(|(c, comp)| (0..comp.len().saturating_sub(1)).map(move |p| (c, p, comp[p], comp[p + 1])))
    };
    match kind {
        MoveKind::R1Remove => {
            for (component, position, p, q) in pairs() {
                if p.crossing == q.crossing {
                    out.push(Move::R1Remove { component, position });
                }
            }
        }
        MoveKind::R2Remove => {
            for (component, position, _, _) in pairs() {
                if r2_bigon(d, component, position).is_some() {
                    out.push(Move::R2Remove { component, position });
                }
            }
        }
        MoveKind::Forbidden => {
            for (component, position, p, q) in pairs() {
                if p.role == Role::Over && q.role == Role::Over {
                    out.push(Move::Forbidden { component, position });
                }
            }
        }
        MoveKind::R3 => {
            let cr = d.crossings();
            for (_, _, p, q) in pairs() {
                if p.role != Role::Over || q.role != Role::Over {
                    continue;
                }
                for (x, y) in [(p.crossing, q.crossing), (q.crossing, p.crossing)] {
                    let ux = cr[&x].under;
                    let comp = d.component(ux.component);
                    for nb in [ux.index.wrapping_sub(1), ux.index + 1] {
                        let Some(o) = comp.get(nb) else { continue };
                        if o.role != Role::Over {
                            continue;
                        }
                        let z = o.crossing;
                        if r3_site(d, x, y, z).is_ok() {
                            out.push(Move::R3 { x, y, z });
                        }
                    }
                }
            }
        }
        MoveKind::SelfCrossingChange => {
            for c in d.crossings().values() {
                if c.is_self_crossing() {
                    out.push(Move::SelfCrossingChange { crossing: c.id });
                }
            }
        }
        MoveKind::Virtual => out.push(Move::Virtual),
        MoveKind::R1Add | MoveKind::R2Add => {}
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LogEntry {
    Applied(Move),
    Skipped(MoveKind),
}

fn random_gap(d: &Diagram, rng: &mut ChaCha8Rng) -> Gap {
    // uniform over all gaps of all components
    let total: usize = d.components().iter().map(|c| c.len() + 1).sum();
    let mut r = rng.gen_range(0..total);
    for (component, c) in d.components().iter().enumerate() {
        if r <= c.len() {
            return Gap { component, position: r };
        }
        r -= c.len() + 1;
    }
    unreachable!("gap index within total")
}

fn random_sign(rng: &mut ChaCha8Rng) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Pos
    } else {
        Sign::Neg
    }
}

/// Applies `steps` random moves from `class`, deterministically in `seed`.
/// A sampled kind with no applicable site is logged as skipped.
pub fn fuzz(d: &Diagram, class: MoveClass, steps: usize, seed: u64) -> (Diagram, Vec<LogEntry>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kinds = class.kinds();
    let mut cur = d.clone();
    let mut next_id = cur.max_crossing_id() + 1;
    let mut log = Vec::with_capacity(steps);
    for _ in 0..steps {
        let kind = *kinds.choose(&mut rng).expect("classes are nonempty");
        let m = match kind {
            MoveKind::R1Add => {
                let at = random_gap(&cur, &mut rng);
                let sign = random_sign(&mut rng);
                let order = if rng.gen_bool(0.5) { KinkOrder::OverFirst } else { KinkOrder::UnderFirst };
                next_id += 1;
                Some(Move::R1Add { at, id: next_id - 1, sign, order })
            }
            MoveKind::R2Add => {
                let over = random_gap(&cur, &mut rng);
                let under = random_gap(&cur, &mut rng);
                let sign = random_sign(&mut rng);
                let strands = if rng.gen_bool(0.5) { Strands::Parallel } else { Strands::Antiparallel };
                if over == under {
                    None
                } else {
                    next_id += 2;
                    Some(Move::R2Add { over, under, ids: (next_id - 2, next_id - 1), sign, strands })
                }
            }
            _ => sites(&cur, kind).choose(&mut rng).copied(),
        };
        match m {
            Some(m) => {
                cur = apply(&cur, &m).expect("sampled moves satisfy their preconditions");
                log.push(LogEntry::Applied(m));
            }
            None => log.push(LogEntry::Skipped(kind)),
        }
    }
    (cur, log)
}

/// Re-applies a log; skipped entries are ignored.
pub fn replay(d: &Diagram, log: &[LogEntry]) -> Result<Diagram, MoveError> {
    let mut cur = d.clone();
    for e in log {
        if let LogEntry::Applied(m) = e {
            cur = apply(&cur, m)?;
        }
    }
    Ok(cur)
}

fn gap_str(g: Gap) -> String {
    format!("{}:{}", g.component, g.position)
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = self.kind().tag();
        match *self {
            Move::R1Add { at, id, sign, order } => {
                let o = match order {
                    KinkOrder::OverFirst => "OU",
                    KinkOrder::UnderFirst => "UO",
                };
                write!(f, "{tag} c={} p={} id={id} sign={} order={o}", at.component, at.position, sign.symbol())
            }
            Move::R1Remove { component, position }
            | Move::R2Remove { component, position }
            | Move::Forbidden { component, position } => write!(f, "{tag} c={component} p={position}"),
            Move::R2Add { over, under, ids, sign, strands } => {
                let s = match strands {
                    Strands::Parallel => "parallel",
                    Strands::Antiparallel => "antiparallel",
                };
                write!(
                    f,
                    "{tag} over={} under={} ids={},{} sign={} strands={s}",
                    gap_str(over),
                    gap_str(under),
                    ids.0,
                    ids.1,
                    sign.symbol()
                )
            }
            Move::R3 { x, y, z } => write!(f, "{tag} x={x} y={y} z={z}"),
            Move::SelfCrossingChange { crossing } => write!(f, "{tag} id={crossing}"),
            Move::Virtual => f.write_str(tag),
        }
    }
}

impl fmt::Display for LogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogEntry::Applied(m) => m.fmt(f),
            LogEntry::Skipped(k) => write!(f, "SKIP {}", k.tag()),
        }
    }
}

pub fn render_log(log: &[LogEntry]) -> String {
    log.iter().map(|e| format!("{e}\n")).collect()
}

fn parse_entry(line: &str) -> Result<LogEntry, String> {
    let mut tokens = line.split_whitespace();
    let tag = tokens.next().ok_or("empty line")?;
    if tag == "SKIP" {
        let k = tokens.next().ok_or("SKIP needs a move kind")?;
        return MoveKind::from_tag(k).map(LogEntry::Skipped).ok_or_else(|| format!("unknown move kind `{k}`"));
    }
    let kind = MoveKind::from_tag(tag).ok_or_else(|| format!("unknown move kind `{tag}`"))?;
    let mut fields = std::collections::BTreeMap::new();
    for t in tokens {
        let (k, v) = t.split_once('=').ok_or_else(|| format!("expected key=value, found `{t}`"))?;
        fields.insert(k, v);
    }
    let field = |k: &str| fields.get(k).copied().ok_or_else(|| format!("{tag} needs `{k}=`"));
    let num = |k: &str| -> Result<usize, String> {
        let v = field(k)?;
        v.parse().map_err(|_| format!("`{k}={v}` is not a number"))
    };
    let id = |k: &str| -> Result<u32, String> { Ok(num(k)? as u32) };
    let sign = || match field("sign")? {
        "+" => Ok(Sign::Pos),
        "-" => Ok(Sign::Neg),
        s => Err(format!("bad sign `{s}`")),
    };
    let gap = |k: &str| -> Result<Gap, String> {
        let v = field(k)?;
        let (c, p) = v.split_once(':').ok_or_else(|| format!("`{k}={v}` should be component:gap"))?;
        let parse = |s: &str| s.parse::<usize>().map_err(|_| format!("`{k}={v}` is not component:gap"));
        Ok(Gap { component: parse(c)?, position: parse(p)? })
    };
    let m = match kind {
        MoveKind::R1Add => Move::R1Add {
            at: Gap { component: num("c")?, position: num("p")? },
            id: id("id")?,
            sign: sign()?,
            order: match field("order")? {
                "OU" => KinkOrder::OverFirst,
                "UO" => KinkOrder::UnderFirst,
                o => return Err(format!("bad order `{o}`")),
            },
        },
        MoveKind::R1Remove => Move::R1Remove { component: num("c")?, position: num("p")? },
        MoveKind::R2Remove => Move::R2Remove { component: num("c")?, position: num("p")? },
        MoveKind::Forbidden => Move::Forbidden { component: num("c")?, position: num("p")? },
        MoveKind::R2Add => {
            let ids = field("ids")?;
            let (x, y) = ids.split_once(',').ok_or_else(|| format!("`ids={ids}` should be x,y"))?;
            let parse = |s: &str| s.parse::<u32>().map_err(|_| format!("`ids={ids}` is not x,y"));
            Move::R2Add {
                over: gap("over")?,
                under: gap("under")?,
                ids: (parse(x)?, parse(y)?),
                sign: sign()?,
                strands: match field("strands")? {
                    "parallel" => Strands::Parallel,
                    "antiparallel" => Strands::Antiparallel,
                    s => return Err(format!("bad strands `{s}`")),
                },
            }
        }
        MoveKind::R3 => Move::R3 { x: CrossingId(id("x")?), y: CrossingId(id("y")?), z: CrossingId(id("z")?) },
        MoveKind::SelfCrossingChange => Move::SelfCrossingChange { crossing: CrossingId(id("id")?) },
        MoveKind::Virtual => Move::Virtual,
    };
    Ok(LogEntry::Applied(m))
}

/// Parses a log written by [`render_log`]. Blank lines and `#` comments are
/// ignored.
pub fn parse_log(text: &str) -> Result<Vec<LogEntry>, MoveError> {
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        out.push(parse_entry(line).map_err(|message| MoveError::Parse { line: no + 1, message })?);
    }
    Ok(out)
}
