//! Filtered rooted relative trees in edge-level normal form.
//!
//! A tree of height `m` stores edge levels `E^0..E^m` and target maps
//! `t_i: E^i -> E^{i-1}` for `i >= 1`; edges of `E^0` sit on the root.
//! The vertex at the top of an edge is identified with the edge itself, so
//! inner vertices are the edges of `E^0..E^{m-1}` and the leaves are `E^m`.

use std::collections::BTreeMap;

use indexmap::IndexMap;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::SimplexMap;
use crate::sets::{dep_prod, dep_sum, section_indices, Color, Flavor, Label, RelMap, RelSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TreeRepr", into = "TreeRepr")]
pub struct Tree {
    root_color: Color,
    levels: Vec<RelSet>,
    /// `targets[i][k]` is the index in level `i` of the target of edge `k` of level `i+1`.
    targets: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct EdgeRepr {
    label: Label,
    color: Color,
}

#[derive(Serialize, Deserialize)]
struct TreeRepr {
    root_color: Color,
    levels: Vec<Vec<EdgeRepr>>,
    targets: Vec<IndexMap<Label, Label>>,
}

impl TryFrom<TreeRepr> for Tree {
    type Error = Error;
    fn try_from(r: TreeRepr) -> Result<Self> {
        let levels: Vec<Vec<(Label, Color)>> =
            r.levels.into_iter().map(|l| l.into_iter().map(|e| (e.label, e.color)).collect()).collect();
        if r.targets.len() + 1 != levels.len() {
            return Err(Error::InvalidTree("need one target map per level above 0".into()));
        }
        let mut targets = Vec::with_capacity(r.targets.len());
        for (i, t) in r.targets.iter().enumerate() {
            let row: Result<Vec<usize>> = levels[i + 1]
                .iter()
                .map(|(l, _)| {
                    let tgt = t
                        .get(l)
                        .ok_or_else(|| Error::InvalidTree(format!("edge {l} at level {} has no target", i + 1)))?;
                    levels[i]
                        .iter()
                        .position(|(x, _)| x == tgt)
                        .ok_or_else(|| Error::NoSuchEdge(format!("{tgt} at level {i}")))
                })
                .collect();
            targets.push(row?);
        }
        Tree::new(r.root_color, levels, targets)
    }
}

impl From<Tree> for TreeRepr {
    fn from(t: Tree) -> Self {
        let targets = (1..t.levels.len())
            .map(|i| {
                t.levels[i]
                    .labels()
                    .zip(&t.targets[i - 1])
                    .map(|(l, &p)| (l.clone(), t.levels[i - 1].label(p).clone()))
                    .collect()
            })
            .collect();
        TreeRepr {
            root_color: t.root_color,
            levels: t
                .levels
                .iter()
                .map(|l| l.iter().map(|(label, color)| EdgeRepr { label: label.clone(), color }).collect())
                .collect(),
            targets,
        }
    }
}

impl Tree {
    pub fn new(root_color: Color, levels: Vec<Vec<(Label, Color)>>, targets: Vec<Vec<usize>>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidTree("a tree needs at least the level E^0".into()));
        }
        let levels: Vec<RelSet> = levels
            .into_iter()
            .map(|l| RelSet::new(root_color, l).map_err(|e| Error::InvalidTree(e.to_string())))
            .collect::<Result<_>>()?;
        let t = Tree { root_color, levels, targets };
        t.validate()?;
        Ok(t)
    }

    fn from_parts(root_color: Color, levels: Vec<RelSet>, targets: Vec<Vec<usize>>) -> Result<Self> {
        let t = Tree { root_color, levels, targets };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        if self.targets.len() + 1 != self.levels.len() {
            return Err(Error::InvalidTree("target map count does not match height".into()));
        }
        for lvl in &self.levels {
            if lvl.ambient() != self.root_color {
                return Err(Error::InvalidTree("level ambient differs from the root color".into()));
            }
        }
        for (i, row) in self.targets.iter().enumerate() {
            let (lower, upper) = (&self.levels[i], &self.levels[i + 1]);
            if row.len() != upper.len() {
                return Err(Error::InvalidTree(format!("target map at level {} is not total", i + 1)));
            }
            for (k, &p) in row.iter().enumerate() {
                if p >= lower.len() {
                    return Err(Error::InvalidTree(format!("target out of range at level {}", i + 1)));
                }
                if lower.color_at(p) == Color::D && upper.color_at(k) == Color::C {
                    return Err(Error::InvalidTree(format!(
                        "c-edge {} sits on d-edge {}",
                        upper.label(k),
                        lower.label(p)
                    )));
                }
            }
        }
        Ok(())
    }

    /// The height-0 tree whose single edge level is `a`.
    pub fn corolla(a: &RelSet) -> Self {
        Tree { root_color: a.ambient(), levels: vec![a.clone()], targets: vec![] }
    }

    pub fn height(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn root_color(&self) -> Color {
        self.root_color
    }

    pub fn level(&self, i: usize) -> &RelSet {
        &self.levels[i]
    }

    pub fn levels(&self) -> &[RelSet] {
        &self.levels
    }

    pub fn leaves(&self) -> &RelSet {
        self.levels.last().expect("nonempty")
    }

    /// Index in level `i-1` of the target of edge `k` at level `i >= 1`.
    pub fn parent(&self, i: usize, k: usize) -> usize {
        self.targets[i - 1][k]
    }

    pub fn target_row(&self, i: usize) -> &[usize] {
        &self.targets[i - 1]
    }

    /// Ancestor at level `j <= i` of edge `k` at level `i`.
    pub fn ancestor(&self, i: usize, k: usize, j: usize) -> usize {
        let mut k = k;
        for l in (j + 1..=i).rev() {
            k = self.targets[l - 1][k];
        }
        k
    }

    /// Indices at level `i+1` of the children of edge `k` at level `i`.
    pub fn children(&self, i: usize, k: usize) -> Vec<usize> {
        self.targets[i].iter().enumerate().filter(|(_, &p)| p == k).map(|(c, _)| c).collect()
    }

    /// `in v` for the root vertex: `E^0` with ambient the root color.
    pub fn root_inputs(&self) -> &RelSet {
        &self.levels[0]
    }

    /// `in v` for the vertex on edge `k` of level `i < m`.
    pub fn inputs(&self, i: usize, k: usize) -> Result<RelSet> {
        if i >= self.height() || k >= self.levels[i].len() {
            return Err(Error::NoSuchEdge(format!("no inner vertex at level {i}, index {k}")));
        }
        let upper = &self.levels[i + 1];
        RelSet::new(
            self.levels[i].color_at(k),
            self.children(i, k).into_iter().map(|c| (upper.label(c).clone(), upper.color_at(c))),
        )
    }

    /// `in v` addressed by label.
    pub fn inputs_of(&self, i: usize, label: &Label) -> Result<RelSet> {
        let k =
            self.levels.get(i).and_then(|l| l.index_of(label)).ok_or_else(|| Error::NoSuchEdge(label.to_string()))?;
        self.inputs(i, k)
    }

    /// `T·∂_i`: delete edge level `i`.
    pub fn face(&self, i: usize) -> Result<Tree> {
        let m = self.height();
        if m == 0 || i > m {
            return Err(Error::IndexOutOfRange { index: i, max: m });
        }
        let mut levels = self.levels.clone();
        levels.remove(i);
        let mut targets = self.targets.clone();
        if i == m {
            targets.pop();
        } else if i == 0 {
            targets.remove(0);
        } else {
            let upper = targets.remove(i);
            let through = &self.targets[i - 1];
            targets[i - 1] = upper.iter().map(|&p| through[p]).collect();
        }
        Tree::from_parts(self.root_color, levels, targets)
    }

    /// `T·δ_i`: duplicate edge level `i` with the copy on unary vertices.
    pub fn degeneracy(&self, i: usize) -> Result<Tree> {
        let m = self.height();
        if i > m {
            return Err(Error::IndexOutOfRange { index: i, max: m });
        }
        let mut levels = self.levels.clone();
        levels.insert(i + 1, self.levels[i].clone());
        let mut targets = self.targets.clone();
        targets.insert(i, (0..self.levels[i].len()).collect());
        Tree::from_parts(self.root_color, levels, targets)
    }

    /// Contravariant action of a monotone map `φ: ⟨n⟩ → ⟨m⟩`, computed as a
    /// composite of faces and degeneracies.
    pub fn act(&self, phi: &SimplexMap) -> Result<Tree> {
        if phi.cod() != self.height() {
            return Err(Error::DomainMismatch(format!(
                "map into ⟨{}⟩ applied to a tree of height {}",
                phi.cod(),
                self.height()
            )));
        }
        act_generic(self, phi, &|t, i| t.face(i), &|t, i| t.degeneracy(i))
    }

    /// `T∘⟨S^e⟩`: graft a tree of common height onto every leaf.
    pub fn graft(&self, subs: &[Tree]) -> Result<Tree> {
        let leaves = self.leaves();
        if subs.len() != leaves.len() {
            return Err(Error::ShapeMismatch("one grafted tree per leaf required".into()));
        }
        for (k, s) in subs.iter().enumerate() {
            if s.root_color != leaves.color_at(k) {
                return Err(Error::ColorMismatch(format!(
                    "tree grafted on {} has root color {}",
                    leaves.label(k),
                    s.root_color
                )));
            }
        }
        let n = match subs.first() {
            Some(s) => s.height(),
            None => 0,
        };
        if subs.iter().any(|s| s.height() != n) {
            return Err(Error::HeightMismatch("grafted trees must share a height".into()));
        }
        let mut levels = self.levels.clone();
        let mut targets = self.targets.clone();
        let summed = sum_levels(leaves, subs)?;
        // Edge (e,f) at the first grafted level targets the leaf e.
        let first: Vec<usize> =
            subs.iter().enumerate().flat_map(|(k, s)| std::iter::repeat(k).take(s.levels[0].len())).collect();
        targets.push(first);
        let (lv, tg) = summed;
        levels.extend(lv);
        targets.extend(tg);
        Tree::from_parts(self.root_color, levels, targets)
    }

    /// `T_{≥e}` for `e` the `k`-th edge of `E^0`.
    pub fn subtree_above(&self, k: usize) -> Result<Tree> {
        if k >= self.levels[0].len() {
            return Err(Error::NoSuchEdge(format!("no edge {k} at level 0")));
        }
        let mut keep: Vec<Vec<usize>> = vec![vec![k]];
        for i in 1..=self.height() {
            let prev = &keep[i - 1];
            keep.push((0..self.levels[i].len()).filter(|&c| prev.contains(&self.targets[i - 1][c])).collect());
        }
        let levels: Vec<RelSet> = keep
            .iter()
            .enumerate()
            .map(|(i, ks)| {
                RelSet::new(
                    self.root_color,
                    ks.iter().map(|&j| (self.levels[i].label(j).clone(), self.levels[i].color_at(j))),
                )
            })
            .collect::<Result<_>>()?;
        let targets = (1..keep.len())
            .map(|i| {
                keep[i]
                    .iter()
                    .map(|&c| keep[i - 1].iter().position(|&p| p == self.targets[i - 1][c]).expect("kept"))
                    .collect()
            })
            .collect();
        Tree::from_parts(self.root_color, levels, targets)
    }

    /// Canonical key for isomorphism of bare trees (labels forgotten).
    pub fn canonical_key(&self) -> String {
        let mut keys: Vec<String> = (0..self.levels[0].len()).map(|k| self.edge_key(0, k)).collect();
        keys.sort();
        format!("{}[{}]", self.root_color, keys.join(""))
    }

    fn edge_key(&self, i: usize, k: usize) -> String {
        let color = self.levels[i].color_at(k);
        if i == self.height() {
            return color.to_string();
        }
        let mut keys: Vec<String> = self.children(i, k).into_iter().map(|c| self.edge_key(i + 1, c)).collect();
        keys.sort();
        format!("{color}({})", keys.join(""))
    }

    pub fn is_isomorphic(&self, other: &Tree) -> bool {
        self.height() == other.height() && self.canonical_key() == other.canonical_key()
    }

    /// A levelwise isomorphism `self → other`, when one exists.
    pub fn find_isomorphism(&self, other: &Tree) -> Option<TreeMorphism> {
        if !self.is_isomorphic(other) {
            return None;
        }
        let m = self.height();
        let mut maps: Vec<Vec<usize>> = self.levels.iter().map(|l| vec![usize::MAX; l.len()]).collect();
        let mut used: Vec<Vec<bool>> = other.levels.iter().map(|l| vec![false; l.len()]).collect();
        // Match siblings greedily by canonical key; equal keys are interchangeable.
        fn assign(
            s: &Tree,
            o: &Tree,
            i: usize,
            ks: Vec<usize>,
            os: Vec<usize>,
            maps: &mut Vec<Vec<usize>>,
            used: &mut Vec<Vec<bool>>,
            m: usize,
        ) {
            for k in ks {
                let key = s.edge_key(i, k);
                let j = *os.iter().find(|&&j| !used[i][j] && o.edge_key(i, j) == key).expect("iso");
                used[i][j] = true;
                maps[i][k] = j;
                if i < m {
                    assign(s, o, i + 1, s.children(i, k), o.children(i, j), maps, used, m);
                }
            }
        }
        assign(
            self,
            other,
            0,
            (0..self.levels[0].len()).collect(),
            (0..other.levels[0].len()).collect(),
            &mut maps,
            &mut used,
            m,
        );
        let rel = maps
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let map = row
                    .iter()
                    .enumerate()
                    .map(|(k, &j)| (self.levels[i].label(k).clone(), other.levels[i].label(j).clone()))
                    .collect();
                RelMap::new(self.levels[i].clone(), other.levels[i].clone(), map, Flavor::Bij)
            })
            .collect::<Result<Vec<_>>>()
            .ok()?;
        Some(TreeMorphism { maps: rel })
    }

    /// Relabel every level to `"1".."n"` in order.
    pub fn with_plain_labels(&self) -> Tree {
        let levels = self
            .levels
            .iter()
            .map(|l| {
                RelSet::new(self.root_color, l.iter().enumerate().map(|(k, (_, c))| (Label::from(k + 1), c)))
                    .expect("valid")
            })
            .collect();
        Tree { root_color: self.root_color, levels, targets: self.targets.clone() }
    }

    /// Number of edges per level.
    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(RelSet::len).collect()
    }

    /// Every tree satisfies color monotonicity; exposed for post-hoc checks.
    pub fn is_well_colored(&self) -> bool {
        self.validate().is_ok()
    }
}

fn sum_levels(a: &RelSet, trees: &[Tree]) -> Result<(Vec<RelSet>, Vec<Vec<usize>>)> {
    let h = trees.first().map(Tree::height).unwrap_or(0);
    let mut levels = Vec::with_capacity(h + 1);
    let mut targets = Vec::with_capacity(h);
    for j in 0..=h {
        let fam: Vec<RelSet> = trees.iter().map(|t| t.levels[j].clone()).collect();
        levels.push(dep_sum(a, &fam)?);
        if j > 0 {
            let mut row = Vec::new();
            let mut offset_lower = 0;
            for t in trees {
                row.extend(t.targets[j - 1].iter().map(|&p| p + offset_lower));
                offset_lower += t.levels[j - 1].len();
            }
            targets.push(row);
        }
    }
    Ok((levels, targets))
}

fn check_tree_family(a: &RelSet, trees: &[Tree]) -> Result<usize> {
    if trees.len() != a.len() {
        return Err(Error::ShapeMismatch("one tree per element of the index set required".into()));
    }
    for (k, t) in trees.iter().enumerate() {
        if t.root_color != a.color_at(k) {
            return Err(Error::ColorMismatch(format!("tree over {} has root color {}", a.label(k), t.root_color)));
        }
    }
    let h = trees.first().map(Tree::height).unwrap_or(0);
    if trees.iter().any(|t| t.height() != h) {
        return Err(Error::HeightMismatch("trees must share a height".into()));
    }
    Ok(h)
}

/// `Σ_A T^a`: levelwise dependent sum.
pub fn sum_trees(a: &RelSet, trees: &[Tree]) -> Result<Tree> {
    let h = check_tree_family(a, trees)?;
    if trees.is_empty() {
        let levels = vec![RelSet::empty(a.ambient()); h + 1];
        return Tree::from_parts(a.ambient(), levels, vec![vec![]; h]);
    }
    let (levels, targets) = sum_levels(a, trees)?;
    Tree::from_parts(a.ambient(), levels, targets)
}

/// Height of an empty family must be supplied explicitly.
pub fn sum_trees_with_height(a: &RelSet, trees: &[Tree], height: usize) -> Result<Tree> {
    if trees.is_empty() {
        let levels = vec![RelSet::empty(a.ambient()); height + 1];
        return Tree::from_parts(a.ambient(), levels, vec![vec![]; height]);
    }
    sum_trees(a, trees)
}

/// `Π_A T^a`: levelwise dependent product with coordinatewise targets.
/// An empty family yields the linear tree of the given height.
pub fn prod_trees_with_height(a: &RelSet, trees: &[Tree], height: usize) -> Result<Tree> {
    let h = if trees.is_empty() { height } else { check_tree_family(a, trees)? };
    let mut levels = Vec::with_capacity(h + 1);
    let mut targets = Vec::with_capacity(h);
    let mut prev_index: Option<BTreeMap<Vec<usize>, usize>> = None;
    for j in 0..=h {
        let fam: Vec<RelSet> = trees.iter().map(|t| t.levels[j].clone()).collect();
        levels.push(dep_prod(a, &fam)?);
        let secs = section_indices(&fam);
        if let Some(prev) = &prev_index {
            let row = secs
                .iter()
                .map(|s| {
                    let parent: Vec<usize> = s.iter().zip(trees).map(|(&k, t)| t.targets[j - 1][k]).collect();
                    prev[&parent]
                })
                .collect();
            targets.push(row);
        }
        prev_index = Some(secs.into_iter().enumerate().map(|(n, s)| (s, n)).collect());
    }
    Tree::from_parts(a.ambient(), levels, targets)
}

pub fn prod_trees(a: &RelSet, trees: &[Tree]) -> Result<Tree> {
    prod_trees_with_height(a, trees, 0)
}

/// A levelwise family of bijections commuting with the target maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeMorphism {
    pub maps: Vec<RelMap>,
}

impl TreeMorphism {
    /// Whether the maps form a morphism `s → t`.
    pub fn is_morphism(&self, s: &Tree, t: &Tree) -> bool {
        if self.maps.len() != s.levels.len() || s.height() != t.height() || s.root_color != t.root_color {
            return false;
        }
        for (i, m) in self.maps.iter().enumerate() {
            if m.source() != &s.levels[i] || m.target() != &t.levels[i] {
                return false;
            }
        }
        for i in 1..s.levels.len() {
            for k in 0..s.levels[i].len() {
                let img = self.maps[i].apply(s.levels[i].label(k)).expect("total");
                let img_k = t.levels[i].index_of(img).expect("in target");
                let via_parent = self.maps[i - 1].apply(s.levels[i - 1].label(s.targets[i - 1][k])).expect("total");
                if t.levels[i - 1].label(t.targets[i - 1][img_k]) != via_parent {
                    return false;
                }
            }
        }
        true
    }
}

/// Contravariant action of a monotone map on any simplicial object given by
/// its faces and degeneracies, via epi-mono factorization.
pub fn act_generic<T: Clone>(
    x: &T,
    phi: &SimplexMap,
    face: &dyn Fn(&T, usize) -> Result<T>,
    degeneracy: &dyn Fn(&T, usize) -> Result<T>,
) -> Result<T> {
    let v = phi.values();
    // φ(i) = φ(i+1): φ = φ'∘σ_i, so x·φ = (x·φ')·σ_i.
    if let Some(i) = (0..v.len().saturating_sub(1)).find(|&i| v[i] == v[i + 1]) {
        let mut w = v.to_vec();
        w.remove(i + 1);
        let inner = act_generic(x, &SimplexMap::new(w, phi.cod())?, face, degeneracy)?;
        return degeneracy(&inner, i);
    }
    // φ injective missing j: φ = ∂_j∘φ', so x·φ = (x·∂_j)·φ'.
    if let Some(j) = (0..=phi.cod()).find(|j| !v.contains(j)) {
        let w: Vec<usize> = v.iter().map(|&k| if k < j { k } else { k - 1 }).collect();
        let faced = face(x, j)?;
        return act_generic(&faced, &SimplexMap::new(w, phi.cod() - 1)?, face, degeneracy);
    }
    Ok(x.clone())
}

/// A seeded random tree of the given height with at most `max_edges` edges per level.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, height: usize, max_edges: usize) -> Tree {
    let root_color = if rng.gen_bool(0.75) { Color::C } else { Color::D };
    let mut levels: Vec<Vec<(Label, Color)>> = Vec::new();
    let mut targets = Vec::new();
    for i in 0..=height {
        let parents: Vec<Color> = if i == 0 { vec![root_color] } else { levels[i - 1].iter().map(|e| e.1).collect() };
        let n = if parents.is_empty() { 0 } else { rng.gen_range(if i == height { 0 } else { 1 }..=max_edges) };
        let mut lvl = Vec::with_capacity(n);
        let mut row = Vec::with_capacity(n);
        for k in 0..n {
            let p = rng.gen_range(0..parents.len());
            let color = if parents[p] == Color::D || rng.gen_bool(0.4) { Color::D } else { Color::C };
            lvl.push((Label::from(format!("e{i}_{k}")), color));
            row.push(p);
        }
        levels.push(lvl);
        if i > 0 {
            targets.push(row);
        }
    }
    Tree::new(root_color, levels, targets).expect("random trees are well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use Color::{C, D};

    fn l(s: &str) -> Label {
        Label::from(s)
    }

    fn small() -> Tree {
        Tree::new(C, vec![vec![(l("e0"), C)], vec![(l("f1"), C), (l("f2"), C)]], vec![vec![0, 0]]).unwrap()
    }

    #[test]
    fn faces_of_small_tree() {
        let t = small();
        let f0 = t.face(0).unwrap();
        assert_eq!(f0.height(), 0);
        assert_eq!(f0.level(0).labels().cloned().collect::<Vec<_>>(), vec![l("f1"), l("f2")]);
        let f1 = t.face(1).unwrap();
        assert_eq!(f1.level(0).labels().cloned().collect::<Vec<_>>(), vec![l("e0")]);
        assert!(matches!(t.face(2), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(Tree::corolla(&RelSet::singleton(C)).face(0), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn degeneracy_of_corolla() {
        let a = RelSet::of(C, &[("f1", C), ("f2", D)]).unwrap();
        let t = Tree::corolla(&a).degeneracy(0).unwrap();
        assert_eq!(t.height(), 1);
        assert_eq!(t.level(0), t.level(1));
        assert_eq!(t.target_row(1), &[0, 1]);
    }

    #[test]
    fn monotonicity_is_enforced() {
        let err = Tree::new(C, vec![vec![(l("a"), D)], vec![(l("b"), C)]], vec![vec![0]]);
        assert!(err.is_err());
        assert!(Tree::new(D, vec![vec![(l("a"), C)]], vec![]).is_err());
    }

    #[test]
    fn graft_corollas() {
        let a = RelSet::of(C, &[("1", C), ("2", C)]).unwrap();
        let s1 = Tree::corolla(&RelSet::of(C, &[("a", C), ("b", C)]).unwrap());
        let s2 = Tree::corolla(&RelSet::of(C, &[("c", C)]).unwrap());
        let g = Tree::corolla(&a).graft(&[s1, s2]).unwrap();
        assert_eq!(g.height(), 1);
        let leaves: Vec<String> = g.leaves().labels().map(|x| x.to_string()).collect();
        assert_eq!(leaves, vec!["1.a", "1.b", "2.c"]);
        assert_eq!(g.target_row(1), &[0, 0, 1]);

        let t = small();
        let subs: Vec<Tree> = (0..2).map(|_| Tree::corolla(&RelSet::singleton(C))).collect();
        let g = t.graft(&subs).unwrap();
        assert_eq!(g.height(), 2);
        assert_eq!(g.level_sizes(), vec![1, 2, 2]);

        let bad = vec![Tree::corolla(&RelSet::singleton(D)), Tree::corolla(&RelSet::singleton(C))];
        assert!(matches!(t.graft(&bad), Err(Error::ColorMismatch(_))));
    }

    #[test]
    fn sums_and_products() {
        let a = RelSet::singleton(C);
        let t = small();
        let s = sum_trees(&a, &[t.clone()]).unwrap();
        assert!(s.is_isomorphic(&t));
        let p = prod_trees(&a, &[t.clone()]).unwrap();
        assert!(p.is_isomorphic(&t));

        let two = RelSet::of(C, &[("1", C), ("2", C)]).unwrap();
        let c2 = Tree::corolla(&RelSet::of(C, &[("x", C), ("y", C)]).unwrap()).degeneracy(0).unwrap();
        let c3 = Tree::corolla(&RelSet::of(C, &[("p", C), ("q", D), ("r", C)]).unwrap()).degeneracy(0).unwrap();
        let p = prod_trees(&two, &[c2.clone(), c3.clone()]).unwrap();
        assert_eq!(p.height(), 1);
        assert_eq!(p.leaves().len(), 6);
        let s = sum_trees(&two, &[c2, c3]).unwrap();
        assert_eq!(s.leaves().len(), 5);
        assert!(s.is_well_colored() && p.is_well_colored());
    }

    #[test]
    fn subtree_of_two_branch_tree() {
        let t = Tree::new(
            C,
            vec![vec![(l("a"), C), (l("b"), D)], vec![(l("x"), C), (l("y"), D), (l("z"), D)]],
            vec![vec![0, 1, 0]],
        )
        .unwrap();
        let s = t.subtree_above(0).unwrap();
        assert_eq!(s.level_sizes(), vec![1, 2]);
        assert_eq!(s.leaves().labels().cloned().collect::<Vec<_>>(), vec![l("x"), l("z")]);
        assert!(matches!(t.subtree_above(5), Err(Error::NoSuchEdge(_))));
        let single = small();
        assert_eq!(single.subtree_above(0).unwrap(), single);
    }

    #[test]
    fn inputs_and_ambient() {
        let t = Tree::new(C, vec![vec![(l("a"), C), (l("b"), D)], vec![(l("x"), C)]], vec![vec![0]]).unwrap();
        let i = t.inputs(0, 1).unwrap();
        assert!(i.is_empty());
        assert_eq!(i.ambient(), D);
        assert_eq!(t.inputs(0, 0).unwrap().len(), 1);
        assert!(matches!(t.inputs(1, 0), Err(Error::NoSuchEdge(_))));
    }

    /// Direct formula for `T·φ`: `E'^j = E^{φ(j)}` with ancestor targets.
    fn act_direct(t: &Tree, phi: &SimplexMap) -> Tree {
        let v = phi.values();
        let levels: Vec<RelSet> = v.iter().map(|&k| t.level(k).clone()).collect();
        let targets =
            (1..v.len()).map(|j| (0..levels[j].len()).map(|k| t.ancestor(v[j], k, v[j - 1])).collect()).collect();
        Tree::from_parts(t.root_color(), levels, targets).unwrap()
    }

    #[test]
    fn act_matches_direct_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let m = rng.gen_range(0..=3);
            let t = random_tree(&mut rng, m, 4);
            let n = rng.gen_range(0..=4);
            let phi = SimplexMap::random(&mut rng, n, m);
            assert_eq!(t.act(&phi).unwrap(), act_direct(&t, &phi), "{phi:?}");
        }
    }

    #[test]
    fn act_fig2_degeneracy_inserts_one_level() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = random_tree(&mut rng, 2, 3);
        let phi = SimplexMap::new(vec![0, 1, 1, 2], 2).unwrap();
        let out = t.act(&phi).unwrap();
        assert_eq!(out.height(), 3);
        assert_eq!(out, t.degeneracy(1).unwrap());
    }
}
