//! Truncated non-commutative power series and the Magnus expansion.
//!
//! A series over variables `x_0..x_{k-1}` is a map from monomials (index
//! sequences, repeats allowed) to exact integers. Monomials of length at
//! least the cap are dropped.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::freegroup::{component_letter, Gen, GroupWord};
use crate::wirtinger::{ArcGen, Presentation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MagnusError {
    #[error("truncation cap must be at least 2, got {0}")]
    InvalidCap(usize),
    #[error("series have different caps ({0} and {1})")]
    CapMismatch(usize, usize),
    #[error("series have different variable counts ({0} and {1})")]
    VariableMismatch(usize, usize),
    #[error("series constant term is {0}, expected 1")]
    ConstantTermNotOne(BigInt),
    #[error("generator {0} has no series assigned")]
    UnmappedGenerator(Gen),
    #[error("series fixpoint still changing after {0} sweeps")]
    NonConvergence(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    cap: usize,
    vars: usize,
    terms: BTreeMap<Vec<usize>, BigInt>,
}

impl TruncatedSeries {
    pub fn zero(cap: usize, vars: usize) -> Self {
        Self { cap, vars, terms: BTreeMap::new() }
    }

    pub fn one(cap: usize, vars: usize) -> Self {
        Self::monomial(cap, vars, Vec::new(), BigInt::one())
    }

    /// `coef * x_{m_1} ... x_{m_s}`, or zero if the monomial is too long.
    pub fn monomial(cap: usize, vars: usize, mono: Vec<usize>, coef: BigInt) -> Self {
        assert!(mono.iter().all(|&v| v < vars), "variable index out of range");
        let mut s = Self::zero(cap, vars);
        if mono.len() < cap && !coef.is_zero() {
            s.terms.insert(mono, coef);
        }
        s
    }

    /// `1 + x_i`, the image of a meridian.
    pub fn one_plus_var(cap: usize, vars: usize, i: usize) -> Self {
        let mut s = Self::one(cap, vars);
        s.add_term(vec![i], BigInt::one());
        s
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn coefficient(&self, mono: &[usize]) -> BigInt {
        self.terms.get(mono).cloned().unwrap_or_default()
    }

    pub fn constant(&self) -> BigInt {
        self.coefficient(&[])
    }

    /// Nonzero terms in graded lexicographic order.
    pub fn terms(&self) -> Vec<(&[usize], &BigInt)> {
        let mut t: Vec<_> = self.terms.iter().map(|(m, c)| (m.as_slice(), c)).collect();
        t.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(b.0)));
        t
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, mono: Vec<usize>, coef: BigInt) {
        if mono.len() >= self.cap || coef.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coef;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<(), MagnusError> {
        if self.cap != other.cap {
            return Err(MagnusError::CapMismatch(self.cap, other.cap));
        }
        if self.vars != other.vars {
            return Err(MagnusError::VariableMismatch(self.vars, other.vars));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, MagnusError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MagnusError> {
        self.add(&other.scale(&-BigInt::one()))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut out = Self::zero(self.cap, self.vars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * k);
        }
        out
    }

    /// Truncated product; monomials concatenate in order.
    pub fn mul(&self, other: &Self) -> Result<Self, MagnusError> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.cap, self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if ma.len() + mb.len() >= self.cap {
                    continue;
                }
                let mut m = Vec::with_capacity(ma.len() + mb.len());
                m.extend_from_slice(ma);
                m.extend_from_slice(mb);
                out.add_term(m, ca * cb);
            }
        }
        Ok(out)
    }

    /// The inverse `1 - u + u^2 - ...` of `1 + u`.
    pub fn inverse_of_one_plus(&self) -> Result<Self, MagnusError> {
        let c = self.constant();
        if !c.is_one() {
            return Err(MagnusError::ConstantTermNotOne(c));
        }
        let one = Self::one(self.cap, self.vars);
        let neg_u = one.sub(self)?;
        // Horner: 1 + (-u)(1 + (-u)(1 + ...))
        let mut acc = one.clone();
        for _ in 1..self.cap {
            acc = one.add(&neg_u.mul(&acc)?)?;
        }
        Ok(acc)
    }

    /// Length of the shortest non-constant monomial, or `None` when every
    /// non-constant term has been truncated away.
    pub fn min_nonconstant_degree(&self) -> Option<usize> {
        self.terms.keys().map(Vec::len).filter(|&l| l > 0).min()
    }

    pub fn render(&self, mut name: impl FnMut(usize) -> String) -> String {
        let terms = self.terms();
        if terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let body: Vec<String> = m.iter().map(|&v| name(v)).collect();
            if m.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&body.join("."));
            } else {
                out.push_str(&format!("{abs}*{}", body.join(".")));
            }
        }
        out
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(|v| format!("x_{}", component_letter(v))))
    }
}

pub fn series_mul(u: &TruncatedSeries, v: &TruncatedSeries) -> Result<TruncatedSeries, MagnusError> {
    u.mul(v)
}

pub fn series_inverse_of_one_plus(w: &TruncatedSeries) -> Result<TruncatedSeries, MagnusError> {
    w.inverse_of_one_plus()
}

pub fn min_nonconstant_degree(s: &TruncatedSeries) -> Option<usize> {
    s.min_nonconstant_degree()
}

/// Series assigned to generators, with their inverses cached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcSeriesMap {
    cap: usize,
    vars: usize,
    series: BTreeMap<Gen, (TruncatedSeries, TruncatedSeries)>,
    sweeps: usize,
}

impl ArcSeriesMap {
    pub fn new(cap: usize, vars: usize) -> Self {
        Self { cap, vars, series: BTreeMap::new(), sweeps: 0 }
    }

    /// Generator `i` mapped to `1 + x_i` for `i < k`; used for words that are
    /// already written in base meridians.
    pub fn base_meridians(cap: usize, k: usize) -> Self {
        let mut m = Self::new(cap, k);
        for i in 0..k {
            m.insert(i as Gen, TruncatedSeries::one_plus_var(cap, k, i)).expect("meridian series has constant term 1");
        }
        m
    }

    pub fn insert(&mut self, g: Gen, s: TruncatedSeries) -> Result<(), MagnusError> {
        let inv = s.inverse_of_one_plus()?;
        self.series.insert(g, (s, inv));
        Ok(())
    }

    pub fn get(&self, g: Gen) -> Option<&TruncatedSeries> {
        self.series.get(&g).map(|(s, _)| s)
    }

    fn get_power(&self, g: Gen, inv: bool) -> Result<&TruncatedSeries, MagnusError> {
        let (s, si) = self.series.get(&g).ok_or(MagnusError::UnmappedGenerator(g))?;
        Ok(if inv { si } else { s })
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    /// Sweeps that changed at least one series.
    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    pub fn iter(&self) -> impl Iterator<Item = (Gen, &TruncatedSeries)> {
        self.series.iter().map(|(&g, (s, _))| (g, s))
    }

    pub fn psi(&self, w: &GroupWord) -> Result<TruncatedSeries, MagnusError> {
        let mut acc = TruncatedSeries::one(self.cap, self.vars);
        for l in w.letters() {
            acc = acc.mul(self.get_power(l.gen, l.inv)?)?;
        }
        Ok(acc)
    }
}

/// Magnus expansion of `w` under the generator assignment `map`.
pub fn psi_word(w: &GroupWord, map: &ArcSeriesMap) -> Result<TruncatedSeries, MagnusError> {
    map.psi(w)
}

/// Solves the segment relations of `p` for series, with each base segment
/// fixed at `1 + x_i`.
///
/// Every segment starts at `1 + x_i`; sweeps apply
/// `S(out) = S(over)^e S(in) S(over)^-e` in traversal order until nothing
/// changes. Each sweep fixes at least one more degree, so a presentation
/// coming from a diagram settles within `n - 1` sweeps.
pub fn rho_fixpoint(p: &Presentation, n: usize) -> Result<ArcSeriesMap, MagnusError> {
    if n < 2 {
        return Err(MagnusError::InvalidCap(n));
    }
    let k = p.component_count();
    let mut map = ArcSeriesMap::new(n, k);
    for seg in p.segments() {
        map.insert(seg.gen(), TruncatedSeries::one_plus_var(n, k, seg.component))?;
    }
    for sweep in 1..=n {
        let mut changed = false;
        for r in p.crossing_relations() {
            let inv = r.sign == crate::diagram::Sign::Neg;
            let over = map.get_power(r.over.gen(), inv)?;
            let over_inv = map.get_power(r.over.gen(), !inv)?;
            let before = map.get_power(ArcGen::new(r.component, r.arc - 1).gen(), false)?;
            let next = over.mul(before)?.mul(over_inv)?;
            let out = ArcGen::new(r.component, r.arc).gen();
            if map.get(out) != Some(&next) {
                map.insert(out, next)?;
                changed = true;
            }
        }
        if !changed {
            return Ok(map);
        }
        map.sweeps = sweep;
        if sweep == n {
            break;
        }
    }
    Err(MagnusError::NonConvergence(n))
}
