//! The two-sided bar construction `B(P,P,X)` on decorated filtered trees,
//! its geometric realization and the delooping levels.
//!
//! A level-`m` element is `[α^r, ⟨α^v⟩, ⟨x^e⟩]_T`: a tree of height `m`, an
//! operad element at the root inputs `E^0`, one element per inner vertex
//! (the edges of `E^0..E^{m-1}`) and one algebra value per leaf. Every
//! decoration has exactly the inputs of its vertex as arity, in order.

use indexmap::IndexMap;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operad::check::ElementCache;
use crate::operad::{Algebra, Operad};
use crate::partitions::SimplexMap;
use crate::sets::{Flavor, Label, RelMap, RelSet};
use crate::trees::{act_generic, random_tree, Tree};

pub mod check;
pub mod deloop;
pub mod dot;
pub mod realize;

pub use check::{check_bar, BarConfig};
pub use deloop::{
    deloop_degeneracy, deloop_equivalent, deloop_face, deloop_normalize, deloop_shift, eta_eval, DeloopElement, Formal,
    RootInverse,
};
pub use dot::{bar_to_dot, deloop_to_dot, point_to_dot};
pub use realize::{
    bar_theta, collapse, eta_prime, realization_mult, realization_theta, realize_normalize, Additive, RealizationPoint,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarElement<E, X> {
    pub tree: Tree,
    pub root: E,
    /// `vertices[i][k]` decorates the vertex on edge `k` of level `i < m`.
    pub vertices: Vec<Vec<E>>,
    pub leaves: Vec<X>,
}

impl<E: Clone, X: Clone> BarElement<E, X> {
    pub fn level(&self) -> usize {
        self.tree.height()
    }

    /// The level-0 element `[α, ⟨x^a⟩]`.
    pub fn corolla<O: Operad<Elem = E>>(op: &O, alpha: E, leaves: Vec<X>) -> Result<Self> {
        let b = BarElement { tree: Tree::corolla(op.arity(&alpha)), root: alpha, vertices: vec![], leaves };
        b.validate(op)?;
        Ok(b)
    }

    pub fn validate<O: Operad<Elem = E>>(&self, op: &O) -> Result<()> {
        check_parts(op, &self.tree, &self.vertices, self.leaves.len())?;
        if !same_order(op.arity(&self.root), self.tree.root_inputs()) {
            return Err(Error::ShapeMismatch(format!(
                "root decoration at {} but the root inputs are {}",
                op.arity(&self.root),
                self.tree.root_inputs()
            )));
        }
        Ok(())
    }
}

pub(crate) fn same_order(a: &RelSet, b: &RelSet) -> bool {
    a.ambient() == b.ambient() && a.len() == b.len() && a.iter().eq(b.iter())
}

pub(crate) fn check_parts<O: Operad>(op: &O, tree: &Tree, vertices: &[Vec<O::Elem>], leaves: usize) -> Result<()> {
    let m = tree.height();
    if vertices.len() != m {
        return Err(Error::ShapeMismatch(format!("{} vertex levels for a tree of height {m}", vertices.len())));
    }
    for (i, row) in vertices.iter().enumerate() {
        if row.len() != tree.level(i).len() {
            return Err(Error::ShapeMismatch(format!("level {i} has {} decorations", row.len())));
        }
        for (k, dec) in row.iter().enumerate() {
            let inputs = tree.inputs(i, k)?;
            if !same_order(op.arity(dec), &inputs) {
                return Err(Error::ShapeMismatch(format!(
                    "decoration at {} on a vertex with inputs {inputs}",
                    op.arity(dec)
                )));
            }
        }
    }
    if leaves != tree.leaves().len() {
        return Err(Error::ShapeMismatch(format!("{leaves} leaf values for {} leaves", tree.leaves().len())));
    }
    Ok(())
}

/// Transport `alpha` onto `target`; `to_arity` names the arity label matching each target label.
pub(crate) fn relabel<O: Operad>(
    op: &O,
    alpha: &O::Elem,
    target: &RelSet,
    to_arity: impl Fn(&Label) -> Label,
) -> Result<O::Elem> {
    let arity = op.arity(alpha);
    let map: IndexMap<Label, Label> = target.labels().map(|l| (l.clone(), to_arity(l))).collect();
    if same_order(arity, target) && map.iter().all(|(a, b)| a == b) {
        return Ok(alpha.clone());
    }
    let sigma = RelMap::new(target.clone(), arity.clone(), map, Flavor::Bij)?;
    op.act(alpha, &sigma)
}

/// `α⟨α^{se'}⟩` for `α` with inputs at level `i`, relabeled onto the
/// level-`i+1` edges forming `target`.
pub(crate) fn compose_into<O: Operad>(
    op: &O,
    tree: &Tree,
    alpha: &O::Elem,
    i: usize,
    upper: &[O::Elem],
    target: &RelSet,
) -> Result<O::Elem> {
    let level = tree.level(i);
    let inner = op
        .arity(alpha)
        .labels()
        .map(|l| level.index_of(l).map(|k| upper[k].clone()).ok_or_else(|| Error::NoSuchEdge(l.to_string())))
        .collect::<Result<Vec<_>>>()?;
    let composite = op.compose(alpha, &inner)?;
    let above = tree.level(i + 1);
    relabel(op, &composite, target, |g| {
        let k = above.index_of(g).expect("target edges lie one level up");
        Label::pair(level.label(tree.parent(i + 1, k)), g)
    })
}

/// Middle face `0 < i < m` on the inner decorations.
pub(crate) fn middle_face<O: Operad>(
    op: &O,
    tree: &Tree,
    vertices: &[Vec<O::Elem>],
    i: usize,
) -> Result<(Tree, Vec<Vec<O::Elem>>)> {
    let faced = tree.face(i)?;
    let mut out: Vec<Vec<O::Elem>> = vertices.to_vec();
    let merged = (0..tree.level(i - 1).len())
        .map(|k| compose_into(op, tree, &vertices[i - 1][k], i, &vertices[i], &faced.inputs(i - 1, k)?))
        .collect::<Result<Vec<_>>>()?;
    out[i - 1] = merged;
    out.remove(i);
    Ok((faced, out))
}

/// Top face: the last inner level acts on the leaves through `θ`.
pub(crate) fn top_face<O: Operad, A: Algebra<O>>(
    op: &O,
    alg: &A,
    tree: &Tree,
    vertices: &[Vec<O::Elem>],
    leaves: &[A::Val],
) -> Result<(Tree, Vec<Vec<O::Elem>>, Vec<A::Val>)> {
    let m = tree.height();
    let faced = tree.face(m)?;
    let top = tree.leaves();
    let values = vertices[m - 1]
        .iter()
        .map(|alpha| {
            let args = op
                .arity(alpha)
                .labels()
                .map(|l| top.index_of(l).map(|k| leaves[k].clone()).ok_or_else(|| Error::NoSuchEdge(l.to_string())))
                .collect::<Result<Vec<_>>>()?;
            alg.theta(op, alpha, &args)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((faced, vertices[..m - 1].to_vec(), values))
}

/// Degeneracy `δ_i`: duplicate level `i`, decorating the new unary vertices by units.
pub(crate) fn degenerate<O: Operad>(
    op: &O,
    tree: &Tree,
    vertices: &[Vec<O::Elem>],
    i: usize,
) -> Result<(Tree, Vec<Vec<O::Elem>>)> {
    let t = tree.degeneracy(i)?;
    let units = tree.level(i).iter().map(|(l, c)| op.unit_at(l, c)).collect();
    let mut out = vertices.to_vec();
    out.insert(i, units);
    Ok((t, out))
}

/// Whether the element lies in the image of `δ_i`: every vertex of level `i`
/// is unary, color preserving and decorated by a unit.
pub(crate) fn is_degenerate_at<O: Operad>(op: &O, tree: &Tree, vertices: &[Vec<O::Elem>], i: usize) -> bool {
    if i >= tree.height() {
        return false;
    }
    let (lower, upper) = (tree.level(i), tree.level(i + 1));
    if lower.len() != upper.len() {
        return false;
    }
    (0..lower.len()).all(|k| {
        let ch = tree.children(i, k);
        ch.len() == 1 && upper.color_at(ch[0]) == lower.color_at(k) && {
            let unit = op.unit_at(upper.label(ch[0]), upper.color_at(ch[0]));
            op.same(&vertices[i][k], &unit)
        }
    })
}

/// `b·∂_i`. The top face needs the algebra; formal leaves give `MissingAlgebra`.
pub fn bar_face<O: Operad, A: Algebra<O>>(
    op: &O,
    alg: &A,
    b: &BarElement<O::Elem, A::Val>,
    i: usize,
) -> Result<BarElement<O::Elem, A::Val>> {
    let m = b.level();
    if m == 0 || i > m {
        return Err(Error::IndexOutOfRange { index: i, max: m });
    }
    if i == 0 {
        let tree = b.tree.face(0)?;
        let root = compose_into(op, &b.tree, &b.root, 0, &b.vertices[0], tree.root_inputs())?;
        return Ok(BarElement { tree, root, vertices: b.vertices[1..].to_vec(), leaves: b.leaves.clone() });
    }
    if i == m {
        let (tree, vertices, leaves) = top_face(op, alg, &b.tree, &b.vertices, &b.leaves)?;
        return Ok(BarElement { tree, root: b.root.clone(), vertices, leaves });
    }
    let (tree, vertices) = middle_face(op, &b.tree, &b.vertices, i)?;
    Ok(BarElement { tree, root: b.root.clone(), vertices, leaves: b.leaves.clone() })
}

/// `b·δ_i`.
pub fn bar_degeneracy<O: Operad, X: Clone>(
    op: &O,
    b: &BarElement<O::Elem, X>,
    i: usize,
) -> Result<BarElement<O::Elem, X>> {
    let (tree, vertices) = degenerate(op, &b.tree, &b.vertices, i)?;
    Ok(BarElement { tree, root: b.root.clone(), vertices, leaves: b.leaves.clone() })
}

/// `b·φ` for a monotone map `φ`.
pub fn bar_act<O: Operad, A: Algebra<O>>(
    op: &O,
    alg: &A,
    b: &BarElement<O::Elem, A::Val>,
    phi: &SimplexMap,
) -> Result<BarElement<O::Elem, A::Val>> {
    if phi.cod() != b.level() {
        return Err(Error::DomainMismatch(format!("map into ⟨{}⟩ on a level-{} element", phi.cod(), b.level())));
    }
    act_generic(b, phi, &|x, i| bar_face(op, alg, x, i), &|x, i| bar_degeneracy(op, x, i))
}

/// Carriers whose elements have a label-free key given keys for their inputs.
pub trait DecorationKey: Operad {
    fn decoration_key(&self, alpha: &Self::Elem, input: &dyn Fn(&Label) -> String) -> String;
}

impl DecorationKey for crate::operad::Com {
    fn decoration_key(&self, alpha: &RelSet, input: &dyn Fn(&Label) -> String) -> String {
        let mut keys: Vec<String> = alpha.labels().map(input).collect();
        keys.sort();
        format!("{}{{{}}}", alpha.ambient(), keys.join(","))
    }
}

impl DecorationKey for crate::operad::FreeOperad {
    fn decoration_key(&self, alpha: &crate::operad::FreeElem, input: &dyn Fn(&Label) -> String) -> String {
        let term = alpha.term.substitute(&mut |l| crate::operad::Term::Leaf(Label::new(input(l))));
        format!("{}:{}", alpha.arity.ambient(), term.render(&self.sig))
    }
}

/// Key of `b` up to relabeling of its tree; `leaf` keys the leaf values.
pub fn bar_key<O: DecorationKey, X>(op: &O, b: &BarElement<O::Elem, X>, leaf: &dyn Fn(&X) -> String) -> String {
    fn edge<O: DecorationKey, X>(
        op: &O,
        b: &BarElement<O::Elem, X>,
        leaf: &dyn Fn(&X) -> String,
        i: usize,
        k: usize,
    ) -> String {
        let color = b.tree.level(i).color_at(k);
        if i == b.tree.height() {
            return format!("{color}'{}'", leaf(&b.leaves[k]));
        }
        let above = b.tree.level(i + 1);
        let key =
            op.decoration_key(&b.vertices[i][k], &|l| edge(op, b, leaf, i + 1, above.index_of(l).expect("input edge")));
        format!("{color}<{key}>")
    }
    let level0 = b.tree.root_inputs();
    op.decoration_key(&b.root, &|l| edge(op, b, leaf, 0, level0.index_of(l).expect("input edge")))
}

/// Exact comparison with labels: equal trees, `op.same` decorations and equal leaves.
pub fn bar_same<O: Operad, X: PartialEq>(op: &O, a: &BarElement<O::Elem, X>, b: &BarElement<O::Elem, X>) -> bool {
    a.tree == b.tree
        && op.same(&a.root, &b.root)
        && a.vertices.len() == b.vertices.len()
        && a.vertices
            .iter()
            .zip(&b.vertices)
            .all(|(r, s)| r.len() == s.len() && r.iter().zip(s).all(|(x, y)| op.same(x, y)))
        && a.leaves == b.leaves
}

/// The unique `Com` decoration of a tree.
pub fn com_element<X>(tree: Tree, leaves: Vec<X>) -> Result<BarElement<RelSet, X>> {
    let root = tree.root_inputs().clone();
    let vertices = (0..tree.height())
        .map(|i| (0..tree.level(i).len()).map(|k| tree.inputs(i, k)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(BarElement { tree, root, vertices, leaves })
}

/// Every tree of height `h` with at most `e` edges per level, one per
/// isomorphism class.
pub fn tree_shapes(h: usize, e: usize) -> Vec<Tree> {
    use crate::sets::Color;
    fn go(
        root: Color,
        h: usize,
        e: usize,
        levels: &mut Vec<Vec<(Label, Color)>>,
        targets: &mut Vec<Vec<usize>>,
        seen: &mut std::collections::HashSet<String>,
        out: &mut Vec<Tree>,
    ) {
        let i = levels.len();
        if i == h + 1 {
            let t = Tree::new(root, levels.clone(), targets.clone()).expect("well formed");
            if seen.insert(t.canonical_key()) {
                out.push(t);
            }
            return;
        }
        let parents: Vec<Color> = if i == 0 { vec![root] } else { levels[i - 1].iter().map(|x| x.1).collect() };
        let max = if parents.is_empty() { 0 } else { e };
        for n in 0..=max {
            // non-decreasing targets and all colorings allowed by the parents
            let mut assigns: Vec<Vec<(usize, Color)>> = vec![vec![]];
            for _ in 0..n {
                let mut next = Vec::new();
                for a in &assigns {
                    let lo = a.last().map_or(0, |x| x.0);
                    for p in lo..parents.len() {
                        for c in [Color::C, Color::D] {
                            if parents[p] == Color::D && c == Color::C {
                                continue;
                            }
                            let mut b = a.clone();
                            b.push((p, c));
                            next.push(b);
                        }
                    }
                }
                assigns = next;
            }
            for a in assigns {
                levels.push(a.iter().enumerate().map(|(k, x)| (Label::from(format!("e{i}_{k}")), x.1)).collect());
                if i > 0 {
                    targets.push(a.iter().map(|x| x.0).collect());
                }
                go(root, h, e, levels, targets, seen, out);
                levels.pop();
                if i > 0 {
                    targets.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for root in [Color::C, Color::D] {
        go(root, h, e, &mut vec![], &mut vec![], &mut seen, &mut out);
    }
    out
}

/// A random element: a random tree with seeded decorations. Vertices whose
/// inputs admit no element are retried with a fresh tree.
pub fn random_element<O: Operad, X>(
    op: &O,
    rng: &mut ChaCha8Rng,
    cache: &mut ElementCache<O::Elem>,
    height: usize,
    max_edges: usize,
    leaf: &mut dyn FnMut(crate::sets::Color, &mut ChaCha8Rng) -> X,
) -> Option<BarElement<O::Elem, X>> {
    for _ in 0..50 {
        let tree = random_tree(rng, height, max_edges);
        let Some(root) = cache.pick(op, tree.root_inputs(), rng) else { continue };
        let mut vertices = Vec::with_capacity(height);
        let mut ok = true;
        'levels: for i in 0..height {
            let mut row = Vec::new();
            for k in 0..tree.level(i).len() {
                let inputs = tree.inputs(i, k).expect("inner vertex");
                match cache.pick(op, &inputs, rng) {
                    Some(e) => row.push(e),
                    None => {
                        ok = false;
                        break 'levels;
                    }
                }
            }
            vertices.push(row);
        }
        if !ok {
            continue;
        }
        let leaves = tree.leaves().iter().map(|(_, c)| leaf(c, rng)).collect();
        return Some(BarElement { tree, root, vertices, leaves });
    }
    let _ = rng.gen::<u8>();
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::{Com, FreeAlgebra, FreeOperad, Signature, SymVal};
    use crate::pairs::{semiring_gp, SVal, SemiringPair};
    use crate::sets::Color::{C, D};
    use crate::sets::RelSet;

    fn nat(n: u64) -> SVal {
        SVal::nat(n)
    }

    fn nn() -> crate::pairs::SemiringGp {
        semiring_gp(SemiringPair::nat_nat())
    }

    /// Level-1 corolla of corollas with leaf groups `(2,3)` in a `c`-root.
    fn corolla_23() -> BarElement<RelSet, SVal> {
        let tree = Tree::new(C, vec![vec![("e".into(), C)], vec![("x".into(), C), ("y".into(), C)]], vec![vec![0, 0]])
            .unwrap();
        let root = tree.root_inputs().clone();
        let v = tree.inputs(0, 0).unwrap();
        BarElement { tree, root, vertices: vec![vec![v]], leaves: vec![nat(2), nat(3)] }
    }

    #[test]
    fn faces_of_a_corolla() {
        let b = corolla_23();
        b.validate(&Com).unwrap();
        let top = bar_face(&Com, &nn(), &b, 1).unwrap();
        assert_eq!(top.leaves, vec![nat(5)]);
        assert_eq!(top.level(), 0);
        let bottom = bar_face(&Com, &nn(), &b, 0).unwrap();
        assert_eq!(bottom.leaves, vec![nat(2), nat(3)]);
        assert_eq!(bottom.root.len(), 2);
        bottom.validate(&Com).unwrap();
    }

    #[test]
    fn top_face_needs_an_algebra() {
        let tree = Tree::new(C, vec![vec![("e".into(), C)], vec![("x".into(), C)]], vec![vec![0]]).unwrap();
        let b: BarElement<RelSet, SymVal> = BarElement {
            root: tree.root_inputs().clone(),
            vertices: vec![vec![tree.inputs(0, 0).unwrap()]],
            leaves: vec![SymVal::symbol("x", C)],
            tree,
        };
        let err = bar_face(&Com, &NoAlgebraSym, &b, 1).unwrap_err();
        assert_eq!(err, Error::MissingAlgebra);
        assert!(bar_face(&Com, &NoAlgebraSym, &b, 0).is_ok());
    }

    /// `NoAlgebra` over symbols, which have no default value.
    struct NoAlgebraSym;

    impl Algebra<Com> for NoAlgebraSym {
        type Val = SymVal;
        fn basepoint(&self, color: crate::sets::Color) -> SymVal {
            SymVal { color, term: crate::operad::Term::Star(color) }
        }
        fn theta(&self, _op: &Com, _alpha: &RelSet, _args: &[SymVal]) -> Result<SymVal> {
            Err(Error::MissingAlgebra)
        }
        fn sample_values(&self, _op: &Com, color: crate::sets::Color, _rng: &mut ChaCha8Rng, n: usize) -> Vec<SymVal> {
            vec![self.basepoint(color); n]
        }
    }

    #[test]
    fn degeneracy_then_face_is_identity() {
        let b = corolla_23();
        for i in 0..=1 {
            let d = bar_degeneracy(&Com, &b, i).unwrap();
            d.validate(&Com).unwrap();
            assert!(is_degenerate_at(&Com, &d.tree, &d.vertices, i));
            assert!(bar_same(&Com, &bar_face(&Com, &nn(), &d, i).unwrap(), &b));
            assert!(bar_same(&Com, &bar_face(&Com, &nn(), &d, i + 1).unwrap(), &b));
        }
        assert!(!is_degenerate_at(&Com, &b.tree, &b.vertices, 0));
    }

    #[test]
    fn bottom_face_grafts_like_the_free_operad() {
        let op = FreeOperad::new(Signature::standard());
        let alg = FreeAlgebra::default();
        // m_c(e1, e2) with m_c on e1 and h on e2
        let tree = Tree::new(
            C,
            vec![
                vec![("e1".into(), C), ("e2".into(), C)],
                vec![("a".into(), C), ("b".into(), C), ("p".into(), D), ("q".into(), C)],
            ],
            vec![vec![0, 0, 1, 1]],
        )
        .unwrap();
        let gen_at = |g: usize, target: &RelSet| {
            let e = op.generator(g);
            let labels: Vec<Label> = op.arity(&e).labels().cloned().collect();
            let tl: Vec<Label> = target.labels().cloned().collect();
            relabel(&op, &e, target, |l| labels[tl.iter().position(|x| x == l).unwrap()].clone()).unwrap()
        };
        let root = gen_at(0, tree.root_inputs());
        let v1 = gen_at(0, &tree.inputs(0, 0).unwrap());
        let v2 = gen_at(3, &tree.inputs(0, 1).unwrap());
        let leaves: Vec<SymVal> = tree.leaves().iter().map(|(l, c)| SymVal::symbol(l.as_str(), c)).collect();
        let b = BarElement { tree, root: root.clone(), vertices: vec![vec![v1.clone(), v2.clone()]], leaves };
        b.validate(&op).unwrap();
        let f = bar_face(&op, &alg, &b, 0).unwrap();
        let expected = op.compose(&root, &[v1, v2]).unwrap();
        let parent = |g: &Label| if ["a", "b"].contains(&g.as_str()) { "e1" } else { "e2" };
        let expected = relabel(&op, &expected, op.arity(&f.root), |g| Label::pair(&parent(g).into(), g)).unwrap();
        assert!(op.same(&f.root, &expected));
        let full = bar_face(&op, &alg, &b, 1).unwrap();
        let v0 = alg.theta(&op, &full.root, &full.leaves).unwrap();
        let v1 = alg.theta(&op, &f.root, &f.leaves).unwrap();
        assert_eq!(v0, v1);
    }
}
