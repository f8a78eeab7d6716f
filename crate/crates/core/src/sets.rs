//! Finite relative (two-colored) sets and their morphisms.
//!
//! A relative set carries a color on each element and an ambient color on
//! the whole set, subject to the constraint that a `d`-colored set only has
//! `d`-colored elements. Every operad operation in the crate is indexed by
//! these sets, and the dependent sum / product combinators below are the
//! bookkeeping behind composition and the distributivity action.

use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on set sizes for brute-force enumeration.
pub const DEFAULT_SIZE_BOUND: usize = 6;

/// The two colors: `d` ("domain") and `c` ("codomain"), ordered `d < c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    #[serde(rename = "d")]
    D,
    #[serde(rename = "c")]
    C,
}

impl Color {
    pub const ALL: [Color; 2] = [Color::D, Color::C];

    pub fn as_char(self) -> char {
        match self {
            Color::D => 'd',
            Color::C => 'c',
        }
    }

    /// Whether an element of this color may live in a set of ambient `ambient`.
    pub fn fits_in(self, ambient: Color) -> bool {
        ambient == Color::C || self == Color::D
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

const RESERVED: &[char] = &['.', ',', '<', '>', '(', ')'];

/// Opaque element label.
///
/// Pairs are written `a.b` and sections `<b1,b2>`; a component containing a
/// reserved character is wrapped in parentheses so that encodings never
/// collide.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(String);

impl Label {
    pub fn new(s: impl Into<String>) -> Self {
        Label(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn wrapped(&self) -> String {
        if self.0.contains(RESERVED) || self.0.is_empty() {
            format!("({})", self.0)
        } else {
            self.0.clone()
        }
    }

    pub fn pair(a: &Label, b: &Label) -> Label {
        Label(format!("{}.{}", a.wrapped(), b.wrapped()))
    }

    pub fn section<'a>(parts: impl IntoIterator<Item = &'a Label>) -> Label {
        let inner: Vec<String> = parts.into_iter().map(Label::wrapped).collect();
        Label(format!("<{}>", inner.join(",")))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label(s.to_string())
    }
}

impl From<String> for Label {
    fn from(s: String) -> Self {
        Label(s)
    }
}

impl From<usize> for Label {
    fn from(n: usize) -> Self {
        Label(n.to_string())
    }
}

/// A finite relative set. Element order is kept for deterministic
/// iteration but is not part of equality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RelSetRepr", into = "RelSetRepr")]
pub struct RelSet {
    ambient: Color,
    elems: IndexMap<Label, Color>,
}

#[derive(Serialize, Deserialize)]
struct ElemRepr {
    label: Label,
    color: Color,
}

#[derive(Serialize, Deserialize)]
struct RelSetRepr {
    ambient: Color,
    elements: Vec<ElemRepr>,
}

impl TryFrom<RelSetRepr> for RelSet {
    type Error = Error;
    fn try_from(r: RelSetRepr) -> Result<Self> {
        RelSet::new(r.ambient, r.elements.into_iter().map(|e| (e.label, e.color)))
    }
}

impl From<RelSet> for RelSetRepr {
    fn from(s: RelSet) -> Self {
        RelSetRepr {
            ambient: s.ambient,
            elements: s.elems.into_iter().map(|(label, color)| ElemRepr { label, color }).collect(),
        }
    }
}

impl RelSet {
    pub fn new(ambient: Color, elems: impl IntoIterator<Item = (Label, Color)>) -> Result<Self> {
        let mut map = IndexMap::new();
        for (label, color) in elems {
            if !color.fits_in(ambient) {
                return Err(Error::InvalidSet(format!("element {label} has color c inside a d-colored set")));
            }
            if map.insert(label.clone(), color).is_some() {
                return Err(Error::InvalidSet(format!("duplicate label {label}")));
            }
        }
        Ok(RelSet { ambient, elems: map })
    }

    /// Shorthand used by fixtures: `RelSet::of(Color::C, &[("1", Color::D)])`.
    pub fn of(ambient: Color, elems: &[(&str, Color)]) -> Result<Self> {
        RelSet::new(ambient, elems.iter().map(|(l, c)| (Label::from(*l), *c)))
    }

    pub fn empty(ambient: Color) -> Self {
        RelSet { ambient, elems: IndexMap::new() }
    }

    /// `{1_⋆}_⋆`.
    pub fn singleton(color: Color) -> Self {
        RelSet::single(Label::from("1"), color)
    }

    pub fn single(label: Label, color: Color) -> Self {
        let mut elems = IndexMap::new();
        elems.insert(label, color);
        RelSet { ambient: color, elems }
    }

    /// The canonical set `⟨p|q⟩_⋆ = {1_d..p_d, (p+1)_c..(p+q)_c}_⋆`.
    pub fn canonical(d_count: usize, c_count: usize, ambient: Color) -> Result<Self> {
        let elems = (0..d_count + c_count).map(|i| {
            let color = if i < d_count { Color::D } else { Color::C };
            (Label::from(i + 1), color)
        });
        RelSet::new(ambient, elems)
    }

    pub fn ambient(&self) -> Color {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Label, Color)> + '_ {
        self.elems.iter().map(|(l, c)| (l, *c))
    }

    pub fn labels(&self) -> impl Iterator<Item = &Label> + '_ {
        self.elems.keys()
    }

    pub fn label(&self, index: usize) -> &Label {
        self.elems.get_index(index).map(|(l, _)| l).expect("index in range")
    }

    pub fn color_at(&self, index: usize) -> Color {
        self.elems[index]
    }

    pub fn color_of(&self, label: &Label) -> Option<Color> {
        self.elems.get(label).copied()
    }

    pub fn index_of(&self, label: &Label) -> Option<usize> {
        self.elems.get_index_of(label)
    }

    pub fn contains(&self, label: &Label) -> bool {
        self.elems.contains_key(label)
    }

    /// Number of `d`- and `c`-colored elements.
    pub fn color_counts(&self) -> (usize, usize) {
        let d = self.elems.values().filter(|c| **c == Color::D).count();
        (d, self.len() - d)
    }

    /// Isomorphic in `𝕊_{d,c}` (a color-preserving bijection exists).
    pub fn is_isomorphic(&self, other: &RelSet) -> bool {
        self.ambient == other.ambient && self.color_counts() == other.color_counts()
    }

    /// Same set with a different ambient color.
    pub fn with_ambient(&self, ambient: Color) -> Result<Self> {
        RelSet::new(ambient, self.elems.iter().map(|(l, c)| (l.clone(), *c)))
    }

    /// Same labels and colors in the order of `order`, which must be a
    /// permutation of the labels.
    pub fn reordered(&self, order: &[Label]) -> Result<Self> {
        if order.len() != self.len() {
            return Err(Error::InvalidSet("reorder length mismatch".into()));
        }
        let elems: Result<Vec<_>> = order
            .iter()
            .map(|l| {
                self.color_of(l).map(|c| (l.clone(), c)).ok_or_else(|| Error::InvalidSet(format!("unknown label {l}")))
            })
            .collect();
        RelSet::new(self.ambient, elems?)
    }
}

impl fmt::Display for RelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (l, c)) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}_{c}")?;
        }
        write!(f, "}}_{}", self.ambient)
    }
}

/// Which morphism category a [`RelMap`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Flavor {
    /// `𝕊et_{d,c}`: c-elements go to c-elements; no map from a c-set to a d-set.
    #[serde(rename = "general")]
    General,
    /// `𝕊^inj_{d,c}`: injective, color preserving, equal ambients.
    #[serde(rename = "inj")]
    Inj,
    /// `𝕊_{d,c}`: color-preserving bijections.
    #[serde(rename = "bij")]
    Bij,
    /// `𝕊_{⟨d<c⟩}`: bijections in `𝕊et_{d,c}` that may change element colors.
    #[serde(rename = "bij-any")]
    BijAny,
}

/// A morphism of relative sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RelMapRepr", into = "RelMapRepr")]
pub struct RelMap {
    source: RelSet,
    target: RelSet,
    map: IndexMap<Label, Label>,
    flavor: Flavor,
}

#[derive(Serialize, Deserialize)]
struct RelMapRepr {
    source: RelSet,
    target: RelSet,
    map: IndexMap<Label, Label>,
    flavor: Flavor,
}

impl TryFrom<RelMapRepr> for RelMap {
    type Error = Error;
    fn try_from(r: RelMapRepr) -> Result<Self> {
        RelMap::new(r.source, r.target, r.map, r.flavor)
    }
}

impl From<RelMap> for RelMapRepr {
    fn from(m: RelMap) -> Self {
        RelMapRepr { source: m.source, target: m.target, map: m.map, flavor: m.flavor }
    }
}

fn validate(source: &RelSet, target: &RelSet, map: &IndexMap<Label, Label>, flavor: Flavor) -> Result<()> {
    if map.len() != source.len() || source.labels().any(|l| !map.contains_key(l)) {
        return Err(Error::InvalidMap("assignment is not total on the source".into()));
    }
    for (s, t) in map {
        if !target.contains(t) {
            return Err(Error::InvalidMap(format!("{s} maps outside the target ({t})")));
        }
    }
    let injective = {
        let mut seen = std::collections::HashSet::new();
        map.values().all(|t| seen.insert(t))
    };
    let general_ok = !(source.ambient() == Color::C && target.ambient() == Color::D)
        && map.iter().all(|(s, t)| source.color_of(s) != Some(Color::C) || target.color_of(t) == Some(Color::C));
    let preserves = map.iter().all(|(s, t)| source.color_of(s) == target.color_of(t));
    let ok = match flavor {
        Flavor::General => general_ok,
        Flavor::Inj => injective && preserves && source.ambient() == target.ambient(),
        Flavor::Bij => injective && preserves && source.ambient() == target.ambient() && source.len() == target.len(),
        Flavor::BijAny => general_ok && injective && source.len() == target.len(),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidMap(format!("assignment is not a {flavor:?} morphism {source} -> {target}")))
    }
}

impl RelMap {
    pub fn new(source: RelSet, target: RelSet, map: IndexMap<Label, Label>, flavor: Flavor) -> Result<Self> {
        validate(&source, &target, &map, flavor)?;
        Ok(RelMap { source, target, map, flavor })
    }

    /// Build a map and tag it with the strongest flavor it satisfies.
    pub fn infer(source: RelSet, target: RelSet, map: IndexMap<Label, Label>) -> Result<Self> {
        for flavor in [Flavor::Bij, Flavor::Inj, Flavor::BijAny, Flavor::General] {
            if validate(&source, &target, &map, flavor).is_ok() {
                return Ok(RelMap { source, target, map, flavor });
            }
        }
        validate(&source, &target, &map, Flavor::General)?;
        unreachable!()
    }

    pub fn from_pairs(source: RelSet, target: RelSet, pairs: &[(&str, &str)], flavor: Flavor) -> Result<Self> {
        let map = pairs.iter().map(|(a, b)| (Label::from(*a), Label::from(*b))).collect();
        RelMap::new(source, target, map, flavor)
    }

    pub fn identity(set: &RelSet) -> Self {
        let map = set.labels().map(|l| (l.clone(), l.clone())).collect();
        RelMap { source: set.clone(), target: set.clone(), map, flavor: Flavor::Bij }
    }

    pub fn source(&self) -> &RelSet {
        &self.source
    }

    pub fn target(&self) -> &RelSet {
        &self.target
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn assignment(&self) -> &IndexMap<Label, Label> {
        &self.map
    }

    pub fn apply(&self, label: &Label) -> Option<&Label> {
        self.map.get(label)
    }

    pub fn is_bijective(&self) -> bool {
        matches!(self.flavor, Flavor::Bij | Flavor::BijAny)
            || (self.source.len() == self.target.len() && {
                let mut seen = std::collections::HashSet::new();
                self.map.values().all(|t| seen.insert(t))
            })
    }

    pub fn in_image(&self, label: &Label) -> bool {
        self.map.values().any(|t| t == label)
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &RelMap) -> Result<RelMap> {
        if first.target != self.source {
            return Err(Error::InvalidMap("composition of non-composable maps".into()));
        }
        let map = first.map.iter().map(|(s, m)| (s.clone(), self.map[m].clone())).collect();
        RelMap::infer(first.source.clone(), self.target.clone(), map)
    }

    pub fn inverse(&self) -> Result<RelMap> {
        if !self.is_bijective() {
            return Err(Error::NotInvertible(format!("{self:?}")));
        }
        let map = self.map.iter().map(|(s, t)| (t.clone(), s.clone())).collect();
        RelMap::infer(self.target.clone(), self.source.clone(), map)
    }

    pub fn preimage(&self, target_label: &Label) -> Option<&Label> {
        self.map.iter().find(|(_, t)| *t == target_label).map(|(s, _)| s)
    }

    /// Maps agree as functions (flavor tags ignored).
    pub fn same_function(&self, other: &RelMap) -> bool {
        self.source == other.source && self.target == other.target && self.map == other.map
    }
}

fn check_family(a: &RelSet, fam: &[RelSet]) -> Result<()> {
    if fam.len() != a.len() {
        return Err(Error::AmbientMismatch(format!(
            "family has {} members for an index set of size {}",
            fam.len(),
            a.len()
        )));
    }
    for (i, (label, color)) in a.iter().enumerate() {
        if fam[i].ambient() != color {
            return Err(Error::AmbientMismatch(format!(
                "member over {label} has ambient {} but {label} is colored {color}",
                fam[i].ambient()
            )));
        }
    }
    Ok(())
}

/// Dependent sum `Σ_A B^a`; `fam[i]` is the member over the i-th element of `a`.
pub fn dep_sum(a: &RelSet, fam: &[RelSet]) -> Result<RelSet> {
    check_family(a, fam)?;
    let elems = a.labels().zip(fam).flat_map(|(la, b)| b.iter().map(move |(lb, cb)| (Label::pair(la, lb), cb)));
    RelSet::new(a.ambient(), elems)
}

/// All sections `⟨b^a⟩` of `Π_A B^a` as index tuples, first coordinate slowest.
pub fn section_indices(fam: &[RelSet]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(fam.len())];
    for b in fam {
        let mut next = Vec::with_capacity(out.len() * b.len());
        for prefix in &out {
            for j in 0..b.len() {
                let mut s = prefix.clone();
                s.push(j);
                next.push(s);
            }
        }
        out = next;
    }
    out
}

/// Color of a section under the product rule: `d` iff every coordinate is `d`.
pub fn section_color(fam: &[RelSet], idx: &[usize]) -> Color {
    if fam.iter().zip(idx).all(|(b, &j)| b.color_at(j) == Color::D) {
        Color::D
    } else {
        Color::C
    }
}

pub fn section_label(fam: &[RelSet], idx: &[usize]) -> Label {
    Label::section(fam.iter().zip(idx).map(|(b, &j)| b.label(j)))
}

/// Dependent product `Π_A B^a` with the product coloring.
pub fn dep_prod(a: &RelSet, fam: &[RelSet]) -> Result<RelSet> {
    check_family(a, fam)?;
    let elems = section_indices(fam).into_iter().map(|idx| (section_label(fam, &idx), section_color(fam, &idx)));
    RelSet::new(a.ambient(), elems)
}

/// Sections of `Π_A B^a` as label tuples, in the order used by [`dep_prod`].
pub fn sections(a: &RelSet, fam: &[RelSet]) -> Result<Vec<Vec<Label>>> {
    check_family(a, fam)?;
    Ok(section_indices(fam)
        .into_iter()
        .map(|idx| fam.iter().zip(&idx).map(|(b, &j)| b.label(j).clone()).collect())
        .collect())
}

fn section_positions(a: &RelSet, fam: &[RelSet], section: &[Label]) -> Result<Vec<usize>> {
    check_family(a, fam)?;
    if section.len() != a.len() {
        return Err(Error::NotASection(format!("section has {} coordinates, expected {}", section.len(), a.len())));
    }
    section
        .iter()
        .zip(fam)
        .map(|(l, b)| b.index_of(l).ok_or_else(|| Error::NotASection(format!("{l} is not in {b}"))))
        .collect()
}

/// The fiber set `A_{⟨b^a⟩}` with its projection to `A`.
pub fn fiber_set(a: &RelSet, fam: &[RelSet], section: &[Label]) -> Result<(RelSet, RelMap)> {
    let idx = section_positions(a, fam, section)?;
    let ambient = section_color(fam, &idx);
    let elems: Vec<(Label, Color)> =
        a.labels().zip(fam).zip(&idx).map(|((la, b), &j)| (Label::pair(la, b.label(j)), b.color_at(j))).collect();
    let fiber = RelSet::new(ambient, elems.clone())?;
    let map = elems.iter().map(|(l, _)| l.clone()).zip(a.labels().cloned()).collect();
    let proj = RelMap::new(fiber.clone(), a.clone(), map, Flavor::BijAny)?;
    Ok((fiber, proj))
}

/// The fiber family `⟨C^{a,b^a}⟩` over `A_{⟨b^a⟩}` selected by a section index.
fn fiber_family(nested: &[Vec<RelSet>], idx: &[usize]) -> Vec<RelSet> {
    nested.iter().zip(idx).map(|(row, &j)| row[j].clone()).collect()
}

/// Distributivity bijection
/// `ν: Π_A Σ_{B^a} C^{a,b} → Σ_{Π_A B^a} Π_{A_{⟨b^a⟩}} C^{a,b^a}`.
///
/// `nested[i][j]` is `C^{a_i, b_j}` for the j-th element of `B^{a_i}`.
pub fn nu(a: &RelSet, b: &[RelSet], nested: &[Vec<RelSet>]) -> Result<RelMap> {
    check_family(a, b)?;
    if nested.len() != b.len() {
        return Err(Error::AmbientMismatch("nested family not indexed by A".into()));
    }
    let sums: Vec<RelSet> = b.iter().zip(nested).map(|(bi, ci)| dep_sum(bi, ci)).collect::<Result<_>>()?;
    let source = dep_prod(a, &sums)?;

    let prod_b = dep_prod(a, b)?;
    let mut target_fam = Vec::with_capacity(prod_b.len());
    for idx in section_indices(b) {
        let lbls: Vec<Label> = b.iter().zip(&idx).map(|(bi, &j)| bi.label(j).clone()).collect();
        let (fiber, _) = fiber_set(a, b, &lbls)?;
        target_fam.push(dep_prod(&fiber, &fiber_family(nested, &idx))?);
    }
    let target = dep_sum(&prod_b, &target_fam)?;

    // A coordinate of a source section is a pair (b_j, c_k); recover j, k from
    // the enumeration order of Σ_{B^a} C^{a,b}.
    let offsets: Vec<Vec<(usize, usize)>> = nested
        .iter()
        .map(|row| row.iter().enumerate().flat_map(|(j, c)| (0..c.len()).map(move |k| (j, k))).collect())
        .collect();
    let mut map = IndexMap::new();
    for idx in section_indices(&sums) {
        let pairs: Vec<(usize, usize)> = idx.iter().enumerate().map(|(i, &s)| offsets[i][s]).collect();
        let b_idx: Vec<usize> = pairs.iter().map(|p| p.0).collect();
        let c_idx: Vec<usize> = pairs.iter().map(|p| p.1).collect();
        let lb = section_label(b, &b_idx);
        let lc = section_label(&fiber_family(nested, &b_idx), &c_idx);
        map.insert(section_label(&sums, &idx), Label::pair(&lb, &lc));
    }
    RelMap::new(source, target, map, Flavor::Bij)
}

fn reindexed_family<'a>(sigma: &RelMap, fam: &'a [RelSet]) -> Result<Vec<&'a RelSet>> {
    if !sigma.is_bijective() {
        return Err(Error::NotInvertible("induced map needs a bijection".into()));
    }
    check_family_any(sigma.source(), fam)?;
    let inv = sigma.inverse()?;
    Ok(sigma
        .target()
        .labels()
        .map(|t| &fam[sigma.source().index_of(inv.apply(t).expect("total")).expect("label")])
        .collect())
}

fn check_family_any(a: &RelSet, fam: &[RelSet]) -> Result<()> {
    if fam.len() != a.len() {
        return Err(Error::AmbientMismatch("family size differs from its index set".into()));
    }
    Ok(())
}

/// The family `⟨B^{σ^{-1}a'}⟩` over the target of a bijection `σ`.
pub fn transport_family(sigma: &RelMap, fam: &[RelSet]) -> Result<Vec<RelSet>> {
    Ok(reindexed_family(sigma, fam)?.into_iter().cloned().collect())
}

/// `σ(B^a): Σ_A B^a → Σ_{A'} B^{σ^{-1}a'}`, `(a,b) ↦ (σa,b)`.
pub fn induced_sum_map(sigma: &RelMap, fam: &[RelSet]) -> Result<RelMap> {
    let moved = transport_family(sigma, fam)?;
    let source = dep_sum(sigma.source(), fam)?;
    let target = dep_sum(sigma.target(), &moved)?;
    let mut map = IndexMap::new();
    for (la, b) in sigma.source().labels().zip(fam) {
        let ta = sigma.apply(la).expect("total");
        for lb in b.labels() {
            map.insert(Label::pair(la, lb), Label::pair(ta, lb));
        }
    }
    RelMap::infer(source, target, map)
}

/// `σ⟨B^a⟩: Π_A B^a → Π_{A'} B^{σ^{-1}a'}`, `⟨b^a⟩ ↦ ⟨b^{σ^{-1}a'}⟩`.
pub fn induced_prod_map(sigma: &RelMap, fam: &[RelSet]) -> Result<RelMap> {
    let moved = transport_family(sigma, fam)?;
    let source = dep_prod(sigma.source(), fam)?;
    let target = dep_prod(sigma.target(), &moved)?;
    let inv = sigma.inverse()?;
    let perm: Vec<usize> = sigma
        .target()
        .labels()
        .map(|t| sigma.source().index_of(inv.apply(t).expect("total")).expect("label"))
        .collect();
    let mut map = IndexMap::new();
    for idx in section_indices(fam) {
        let moved_idx: Vec<usize> = perm.iter().map(|&p| idx[p]).collect();
        map.insert(section_label(fam, &idx), section_label(&moved, &moved_idx));
    }
    RelMap::infer(source, target, map)
}

/// `Σ_A τ^a: Σ_A B^a → Σ_A B'^a`, `(a,b) ↦ (a, τ^a b)`.
pub fn sum_of_maps(a: &RelSet, taus: &[RelMap]) -> Result<RelMap> {
    let src: Vec<RelSet> = taus.iter().map(|t| t.source().clone()).collect();
    let tgt: Vec<RelSet> = taus.iter().map(|t| t.target().clone()).collect();
    let source = dep_sum(a, &src)?;
    let target = dep_sum(a, &tgt)?;
    let mut map = IndexMap::new();
    for (la, tau) in a.labels().zip(taus) {
        for (s, t) in tau.assignment() {
            map.insert(Label::pair(la, s), Label::pair(la, t));
        }
    }
    RelMap::infer(source, target, map)
}

/// `Π_A τ^a: Π_A B^a → Π_A B'^a`, `⟨b^a⟩ ↦ ⟨τ^a b^a⟩`.
pub fn prod_of_maps(a: &RelSet, taus: &[RelMap]) -> Result<RelMap> {
    let src: Vec<RelSet> = taus.iter().map(|t| t.source().clone()).collect();
    let tgt: Vec<RelSet> = taus.iter().map(|t| t.target().clone()).collect();
    let source = dep_prod(a, &src)?;
    let target = dep_prod(a, &tgt)?;
    let mut map = IndexMap::new();
    for idx in section_indices(&src) {
        let image: Vec<usize> = taus
            .iter()
            .zip(&idx)
            .map(|(tau, &j)| {
                let t = tau.apply(tau.source().label(j)).expect("total");
                tau.target().index_of(t).expect("in target")
            })
            .collect();
        map.insert(section_label(&src, &idx), section_label(&tgt, &image));
    }
    RelMap::infer(source, target, map)
}

/// Every morphism `A → A'` of the given flavor, by brute force.
pub fn enumerate_hom(a: &RelSet, b: &RelSet, flavor: Flavor) -> Result<Vec<RelMap>> {
    enumerate_hom_bounded(a, b, flavor, DEFAULT_SIZE_BOUND)
}

pub fn enumerate_hom_bounded(a: &RelSet, b: &RelSet, flavor: Flavor, bound: usize) -> Result<Vec<RelMap>> {
    let size = a.len().max(b.len());
    if size > bound {
        return Err(Error::SizeBound { bound, size });
    }
    let n = a.len();
    let m = b.len();
    let mut out = Vec::new();
    if n > 0 && m == 0 {
        return Ok(out);
    }
    let mut choice = vec![0usize; n];
    loop {
        let map: IndexMap<Label, Label> =
            a.labels().zip(&choice).map(|(l, &j)| (l.clone(), b.label(j).clone())).collect();
        if validate(a, b, &map, flavor).is_ok() {
            out.push(RelMap { source: a.clone(), target: b.clone(), map, flavor });
        }
        // odometer
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < m {
                break;
            }
            choice[k] = 0;
        }
    }
}

/// Every relative set of size at most `max` up to isomorphism, in canonical form.
pub fn canonical_sets(max: usize) -> Vec<RelSet> {
    let mut out = Vec::new();
    for n in 0..=max {
        for d in 0..=n {
            out.push(RelSet::canonical(d, n - d, Color::C).expect("valid"));
        }
        out.push(RelSet::canonical(n, 0, Color::D).expect("valid"));
    }
    out
}

/// Canonical sets of ambient `ambient` and size at most `max`.
pub fn canonical_sets_with(ambient: Color, max: usize) -> Vec<RelSet> {
    canonical_sets(max).into_iter().filter(|s| s.ambient() == ambient).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use Color::{C, D};

    fn set(amb: Color, e: &[(&str, Color)]) -> RelSet {
        RelSet::of(amb, e).unwrap()
    }

    #[test]
    fn d_ambient_rejects_c_elements() {
        assert!(RelSet::of(D, &[("1", C)]).is_err());
        assert!(RelSet::of(C, &[("1", D), ("1", C)]).is_err());
    }

    #[test]
    fn dep_sum_examples() {
        let a = set(C, &[("1", D), ("2", C)]);
        let fam = vec![set(D, &[("a", D)]), set(C, &[("b", D), ("c", C)])];
        let s = dep_sum(&a, &fam).unwrap();
        let want = set(C, &[("1.a", D), ("2.b", D), ("2.c", C)]);
        assert_eq!(s, want);

        assert_eq!(dep_sum(&RelSet::empty(D), &[]).unwrap(), RelSet::empty(D));

        let a = set(D, &[("1", D)]);
        let s = dep_sum(&a, &[set(D, &[("x", D), ("y", D)])]).unwrap();
        assert_eq!(s, set(D, &[("1.x", D), ("1.y", D)]));
    }

    #[test]
    fn dep_sum_rejects_ambient_mismatch() {
        let a = set(C, &[("1", D)]);
        let err = dep_sum(&a, &[set(C, &[("x", C)])]).unwrap_err();
        assert!(matches!(err, Error::AmbientMismatch(_)));
    }

    #[test]
    fn dep_prod_examples() {
        let a = set(C, &[("1", D), ("2", C)]);
        let fam = vec![set(D, &[("a", D)]), set(C, &[("b", D), ("c", C)])];
        let p = dep_prod(&a, &fam).unwrap();
        assert_eq!(p, set(C, &[("<a,b>", D), ("<a,c>", C)]));

        let p = dep_prod(&RelSet::empty(C), &[]).unwrap();
        assert_eq!(p, set(C, &[("<>", D)]));

        let p = dep_prod(&set(C, &[("1", C)]), &[set(C, &[("p", C)])]).unwrap();
        assert_eq!(p, set(C, &[("<p>", C)]));
    }

    #[test]
    fn fiber_set_examples() {
        let a = set(C, &[("1", C), ("2", C)]);
        let fam = vec![set(C, &[("p", D), ("q", C)]), set(C, &[("r", C)])];
        let (f, pi) = fiber_set(&a, &fam, &["p".into(), "r".into()]).unwrap();
        assert_eq!(f, set(C, &[("1.p", D), ("2.r", C)]));
        assert_eq!(pi.apply(&"1.p".into()), Some(&Label::from("1")));
        assert!(pi.is_bijective());

        let fam = vec![set(C, &[("p", D)]), set(C, &[("s", D)])];
        let (f, _) = fiber_set(&a, &fam, &["p".into(), "s".into()]).unwrap();
        assert_eq!(f.ambient(), D);

        let err = fiber_set(&a, &fam, &["p".into(), "zz".into()]).unwrap_err();
        assert!(matches!(err, Error::NotASection(_)));
    }

    #[test]
    fn nu_on_two_by_two() {
        let a = set(C, &[("1", C), ("2", C)]);
        let b = vec![set(C, &[("x", C), ("y", D)]), set(C, &[("u", C), ("v", C)])];
        let nested =
            vec![vec![set(C, &[("p", C)]), set(D, &[("q", D)])], vec![set(C, &[("r", C)]), set(C, &[("s", D)])]];
        let nu = nu(&a, &b, &nested).unwrap();
        assert_eq!(nu.source().len(), 4);
        assert!(nu.is_bijective());
        let img = nu.apply(&Label::section([&Label::from("x.p"), &Label::from("v.s")])).unwrap();
        let expect = Label::pair(
            &Label::section([&Label::from("x"), &Label::from("v")]),
            &Label::section([&Label::from("p"), &Label::from("s")]),
        );
        assert_eq!(img, &expect);
    }

    #[test]
    fn nu_on_empty_index() {
        let nu = nu(&RelSet::empty(C), &[], &[]).unwrap();
        assert_eq!(nu.source().len(), 1);
        assert_eq!(nu.target().len(), 1);
    }

    #[test]
    fn induced_sum_map_swaps_blocks() {
        let a = set(C, &[("1", C), ("2", C)]);
        let sigma = RelMap::from_pairs(a.clone(), a.clone(), &[("1", "2"), ("2", "1")], Flavor::Bij).unwrap();
        let b = set(C, &[("x", C), ("y", D)]);
        let m = induced_sum_map(&sigma, &[b.clone(), b]).unwrap();
        assert_eq!(m.apply(&"1.x".into()), Some(&Label::from("2.x")));
        assert_eq!(m.apply(&"2.y".into()), Some(&Label::from("1.y")));
    }

    #[test]
    fn identities_induce_identities() {
        let a = set(C, &[("1", D), ("2", C)]);
        let fam = vec![set(D, &[("a", D)]), set(C, &[("b", D), ("c", C)])];
        let id = RelMap::identity(&a);
        let s = induced_sum_map(&id, &fam).unwrap();
        assert!(s.same_function(&RelMap::identity(s.source())));
        let p = induced_prod_map(&id, &fam).unwrap();
        assert!(p.same_function(&RelMap::identity(p.source())));
        let taus: Vec<RelMap> = fam.iter().map(RelMap::identity).collect();
        let s = sum_of_maps(&a, &taus).unwrap();
        assert!(s.same_function(&RelMap::identity(s.source())));
    }

    #[test]
    fn non_bijective_sigma_is_rejected() {
        let a = set(C, &[("1", C), ("2", C)]);
        let b = set(C, &[("1", C)]);
        let sigma = RelMap::from_pairs(a.clone(), b, &[("1", "1"), ("2", "1")], Flavor::General).unwrap();
        let fam = vec![RelSet::singleton(C), RelSet::singleton(C)];
        assert!(matches!(induced_sum_map(&sigma, &fam), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn hom_enumeration_examples() {
        let one = set(C, &[("1", C)]);
        let homs = enumerate_hom(&one, &one, Flavor::Bij).unwrap();
        assert_eq!(homs.len(), 1);
        assert!(homs[0].same_function(&RelMap::identity(&one)));

        let two = set(D, &[("1", D), ("2", D)]);
        assert_eq!(enumerate_hom(&two, &two, Flavor::Bij).unwrap().len(), 2);

        let cset = set(C, &[("1", D)]);
        let dset = set(D, &[("1", D)]);
        assert!(enumerate_hom(&cset, &dset, Flavor::General).unwrap().is_empty());

        let big = RelSet::canonical(7, 0, D).unwrap();
        assert!(matches!(enumerate_hom(&big, &big, Flavor::Bij), Err(Error::SizeBound { .. })));
    }

    #[test]
    fn labels_with_reserved_characters_do_not_collide() {
        let x = Label::pair(&Label::from("1.2"), &Label::from("3"));
        let y = Label::pair(&Label::from("1"), &Label::from("2.3"));
        assert_ne!(x, y);
    }

    #[test]
    fn json_shape() {
        let a = set(C, &[("1", D)]);
        let js = serde_json::to_string(&a).unwrap();
        assert_eq!(js, r#"{"ambient":"c","elements":[{"label":"1","color":"d"}]}"#);
        let m = RelMap::identity(&a);
        let js = serde_json::to_value(&m).unwrap();
        assert_eq!(js["flavor"], "bij");
        assert_eq!(js["map"]["1"], "1");
        let back: RelMap = serde_json::from_value(js).unwrap();
        assert_eq!(back, m);
    }
}
