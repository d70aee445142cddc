//! Wirtinger presentations and longitudes.
//!
//! Each component is cut at its base point, the gap before its first listed
//! passage. Walking from there, the under-passages split the component into
//! segments `0..=t`, where `t` is the number of under-passages. Segment `t`
//! runs from the last under-passage back to the base point, so as an arc
//! of the closed diagram it is segment 0 again. The presentation reports
//! arcs with that identification made. The segment form is kept
//! alongside because the series fixpoint needs it: there, every crossing
//! relation holds exactly and the identification `a_t = a_0` becomes the
//! statement that the longitude commutes with the meridian.

use std::fmt;

use crate::diagram::{CrossingId, Diagram, DiagramError, Role, Sign};
use crate::freegroup::{component_letter, Gen, GroupWord, Letter};

const ARC_BITS: u32 = 16;

/// Arc `arc` of component `component`. Also used for unfolded segments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcGen {
    pub component: usize,
    pub arc: usize,
}

impl ArcGen {
    pub fn new(component: usize, arc: usize) -> Self {
        Self { component, arc }
    }

    pub fn gen(self) -> Gen {
        assert!(self.arc < 1 << ARC_BITS, "arc index {} too large", self.arc);
        ((self.component as Gen) << ARC_BITS) | self.arc as Gen
    }

    pub fn from_gen(g: Gen) -> Self {
        Self { component: (g >> ARC_BITS) as usize, arc: (g & ((1 << ARC_BITS) - 1)) as usize }
    }

    pub fn base(component: usize) -> Self {
        Self { component, arc: 0 }
    }
}

impl fmt::Display for ArcGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", component_letter(self.component), self.arc)
    }
}

/// Renders a generator id as `<component-letter><arc>`.
pub fn arc_name(g: Gen) -> String {
    ArcGen::from_gen(g).to_string()
}

/// One crossing relation in segment form:
/// `segment(under, arc) = over^sign · segment(under, arc-1) · over^-sign`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrossingRelation {
    pub crossing: CrossingId,
    /// Under-passing component.
    pub component: usize,
    /// Outgoing segment index, `1..=t`.
    pub arc: usize,
    /// Over-passing segment (unfolded).
    pub over: ArcGen,
    pub sign: Sign,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<ArcGen>,
    pub relations: Vec<GroupWord>,
    pub longitudes: Vec<GroupWord>,
    pub base_arcs: Vec<ArcGen>,
    /// Same-component meridian commutators; empty unless built by
    /// [`link_group_presentation`].
    pub meridian_commutators: Vec<GroupWord>,
    under_counts: Vec<usize>,
    crossing_relations: Vec<CrossingRelation>,
    segment_longitudes: Vec<GroupWord>,
}

impl Presentation {
    pub fn component_count(&self) -> usize {
        self.under_counts.len()
    }

    /// Number of under-passages of component `i`.
    pub fn under_count(&self, i: usize) -> usize {
        self.under_counts[i]
    }

    /// Segment relations in traversal order.
    pub fn crossing_relations(&self) -> &[CrossingRelation] {
        &self.crossing_relations
    }

    /// Longitude of component `i` over unfolded segments.
    pub fn segment_longitude(&self, i: usize) -> &GroupWord {
        &self.segment_longitudes[i]
    }

    /// All unfolded segments, component by component.
    pub fn segments(&self) -> impl Iterator<Item = ArcGen> + '_ {
        self.under_counts.iter().enumerate().flat_map(|(c, &t)| (0..=t).map(move |j| ArcGen::new(c, j)))
    }

    /// Maps a segment to its arc: the terminal segment is the base arc.
    pub fn fold(&self, seg: ArcGen) -> ArcGen {
        let t = self.under_counts[seg.component];
        if seg.arc == t {
            ArcGen::base(seg.component)
        } else {
            seg
        }
    }

    pub fn fold_word(&self, w: &GroupWord) -> GroupWord {
        w.map_generators(|g| self.fold(ArcGen::from_gen(g)).gen())
    }

    pub fn relator_count(&self) -> usize {
        self.relations.len() + self.meridian_commutators.len()
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(ArcGen::to_string).collect();
        writeln!(f, "generators: {}", gens.join(" "))?;
        writeln!(f, "relators:")?;
        for r in self.relations.iter().chain(&self.meridian_commutators) {
            writeln!(f, "  {}", r.render(arc_name))?;
        }
        writeln!(f, "longitudes:")?;
        for (i, l) in self.longitudes.iter().enumerate() {
            writeln!(f, "  w_{} = {}", component_letter(i), l.render(arc_name))?;
        }
        Ok(())
    }
}

fn letter(seg: ArcGen, sign: Sign) -> Letter {
    Letter::new(seg.gen(), sign == Sign::Neg)
}

/// Wirtinger presentation of `d`, one relation per classical crossing.
pub fn presentation(d: &Diagram) -> Presentation {
    let k = d.component_count();
    // segment index in effect at each passage
    let mut seg_at: Vec<Vec<usize>> = Vec::with_capacity(k);
    let mut under_counts = Vec::with_capacity(k);
    for comp in d.components() {
        let mut t = 0;
        let mut at = Vec::with_capacity(comp.len());
        for p in comp {
            at.push(t);
            if p.role == Role::Under {
                t += 1;
            }
        }
        seg_at.push(at);
        under_counts.push(t);
    }
    let crossings = d.crossings();

    let mut crossing_relations = Vec::new();
    let mut segment_longitudes = Vec::with_capacity(k);
    for (c, comp) in d.components().iter().enumerate() {
        let mut longitude = GroupWord::identity();
        for (index, p) in comp.iter().enumerate() {
            if p.role != Role::Under {
                continue;
            }
            let over = crossings[&p.crossing].over;
            let over_seg = ArcGen::new(over.component, seg_at[over.component][over.index]);
            crossing_relations.push(CrossingRelation {
                crossing: p.crossing,
                component: c,
                arc: seg_at[c][index] + 1,
                over: over_seg,
                sign: p.sign,
            });
            // later under-passages multiply on the left
            longitude = GroupWord::from_letters([letter(over_seg, p.sign)]).multiply(&longitude);
        }
        segment_longitudes.push(longitude);
    }

    let mut p = Presentation {
        generators: Vec::new(),
        relations: Vec::new(),
        longitudes: Vec::new(),
        base_arcs: (0..k).map(ArcGen::base).collect(),
        meridian_commutators: Vec::new(),
        under_counts,
        crossing_relations,
        segment_longitudes,
    };
    p.generators = (0..k).flat_map(|c| (0..p.under_counts[c].max(1)).map(move |j| ArcGen::new(c, j))).collect();
    p.relations = p
        .crossing_relations
        .iter()
        .map(|r| {
            let over = GroupWord::from_letters([letter(p.fold(r.over), r.sign)]);
            let before = GroupWord::generator(p.fold(ArcGen::new(r.component, r.arc - 1)).gen());
            let after = GroupWord::generator(p.fold(ArcGen::new(r.component, r.arc)).gen());
            before.conjugate(&over).multiply(&after.inverse())
        })
        .collect();
    p.longitudes = p.segment_longitudes.iter().map(|l| p.fold_word(l)).collect();
    p
}

/// Longitude of component `i` in arc generators.
pub fn longitude(d: &Diagram, i: usize) -> Result<GroupWord, DiagramError> {
    if i >= d.component_count() {
        return Err(DiagramError::ComponentOutOfRange { index: i, count: d.component_count() });
    }
    Ok(presentation(d).longitudes.swap_remove(i))
}

/// The Wirtinger presentation plus a commutator `[a_ij, a_ik]` for every
/// pair of arcs of the same component.
pub fn link_group_presentation(d: &Diagram) -> Presentation {
    let mut p = presentation(d);
    let mut extra = Vec::new();
    for c in 0..p.component_count() {
        let arcs: Vec<ArcGen> = p.generators.iter().copied().filter(|a| a.component == c).collect();
        for (x, a) in arcs.iter().enumerate() {
            for b in &arcs[x + 1..] {
                extra.push(GroupWord::generator(a.gen()).commutator(&GroupWord::generator(b.gen())));
            }
        }
    }
    p.meridian_commutators = extra;
    p
}
