//! Points of the realization `|B_-(P,P,X)|`, their normal forms and the
//! structure maps of the bar resolution.

use std::collections::HashMap;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{bar_degeneracy, bar_face, is_degenerate_at, relabel, BarElement};
use crate::error::{Error, Result};
use crate::operad::{Algebra, Operad, Pointed};
use crate::pairs::{GpAlgebra, OperadPair};
use crate::partitions::{merge, Partition, SimplexMap};
use crate::sets::{section_color, section_indices, Color, Label, RelMap, RelSet};
use crate::trees::{act_generic, prod_trees_with_height, sum_trees_with_height};

/// `[b, t]` with `b` of level `m` and `t ∈ Part^⟨m⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationPoint<E, X> {
    pub element: BarElement<E, X>,
    pub partition: Partition,
}

impl<E: Clone, X: Clone> RealizationPoint<E, X> {
    pub fn new(element: BarElement<E, X>, partition: Partition) -> Result<Self> {
        if element.level() != partition.level() {
            return Err(Error::DomainMismatch(format!(
                "element of level {} with a partition of level {}",
                element.level(),
                partition.level()
            )));
        }
        Ok(RealizationPoint { element, partition })
    }

    /// Strictly increasing interior partition and a non-degenerate element.
    pub fn is_normal<O: Operad<Elem = E>>(&self, op: &O) -> bool {
        let b = &self.element;
        self.partition.is_strict_interior() && (0..b.level()).all(|i| !is_degenerate_at(op, &b.tree, &b.vertices, i))
    }
}

/// A coface pattern of `t`: `t = s·∂_i`, returning `(i, s)`.
pub(crate) fn coface_pattern(t: &Partition) -> Option<(usize, Partition)> {
    let c = t.coords();
    let m = c.len();
    if m == 0 {
        return None;
    }
    let drop = |k: usize| {
        let mut v = c.to_vec();
        v.remove(k);
        Partition::new(v).expect("a sub-tuple stays a partition")
    };
    let found = if num_traits::Zero::is_zero(&c[0]) {
        Some((0, drop(0)))
    } else if num_traits::One::is_one(&c[m - 1]) {
        Some((m, drop(m - 1)))
    } else {
        (1..m).find(|&i| c[i - 1] == c[i]).map(|i| (i, drop(i)))
    };
    debug_assert!(found.as_ref().is_none_or(|(i, s)| s.coface(*i).as_ref() == Ok(t)));
    found
}

/// Strip coface patterns of the partition and degeneracies of the element
/// until neither applies. `level` is `None` for an absorbing basepoint.
pub(crate) fn normalize_with<T: Clone>(
    mut x: T,
    mut t: Partition,
    level: &dyn Fn(&T) -> Option<usize>,
    face: &dyn Fn(&T, usize) -> Result<T>,
    degenerate_at: &dyn Fn(&T) -> Option<usize>,
) -> Result<(T, Partition)> {
    loop {
        if level(&x).is_none() {
            return Ok((x, Partition::empty()));
        }
        if let Some((i, s)) = coface_pattern(&t) {
            x = face(&x, i)?;
            t = s;
            continue;
        }
        if let Some(i) = degenerate_at(&x) {
            // x = y·δ_i with y = x·∂_i, and [y·δ_i, t] = [y, δ_i t]
            x = face(&x, i)?;
            t = t.codegeneracy(i)?;
            continue;
        }
        return Ok((x, t));
    }
}

/// The non-degenerate representative with a strictly increasing interior partition.
pub fn realize_normalize<O: Operad, A: Algebra<O>>(
    op: &O,
    alg: &A,
    p: &RealizationPoint<O::Elem, A::Val>,
) -> Result<RealizationPoint<O::Elem, A::Val>> {
    let (element, partition) = normalize_with(
        p.element.clone(),
        p.partition.clone(),
        &|b: &BarElement<O::Elem, A::Val>| Some(b.level()),
        &|b, i| bar_face(op, alg, b, i),
        &|b| (0..b.level()).find(|&i| is_degenerate_at(op, &b.tree, &b.vertices, i)),
    )?;
    Ok(RealizationPoint { element, partition })
}

/// `b·δ` for a surjection `δ`, i.e. degeneracies only.
pub(crate) fn expand<O: Operad, X: Clone>(
    op: &O,
    b: &BarElement<O::Elem, X>,
    delta: &SimplexMap,
) -> Result<BarElement<O::Elem, X>> {
    if !delta.is_surjective() || delta.cod() != b.level() {
        return Err(Error::DomainMismatch(format!("{delta:?} is not a surjection onto ⟨{}⟩", b.level())));
    }
    let out = act_generic(
        b,
        delta,
        &|_: &BarElement<O::Elem, X>, i| Err(Error::IndexOutOfRange { index: i, max: 0 }),
        &|x, i| bar_degeneracy(op, x, i),
    )?;
    // The vertices at levels j with δ(j) = δ(j+1) are exactly the inserted identities.
    for j in 0..delta.dom() {
        if delta.apply(j) == delta.apply(j + 1) && !is_degenerate_at(op, &out.tree, &out.vertices, j) {
            return Err(Error::ShapeMismatch(format!("level {j} of the expansion is not an identity level")));
        }
    }
    Ok(out)
}

/// Labels of `Σ_A T^a` at every level mapped back to the labels of `T^a`.
fn summand_labels(a_label: &Label, b: &BarElement<impl Clone, impl Clone>, out: &mut HashMap<Label, Label>) {
    for lvl in b.tree.levels() {
        for l in lvl.labels() {
            out.insert(Label::pair(a_label, l), l.clone());
        }
    }
}

/// `α⟨[β^{a,r}, ⟨β^{a,v}⟩, ⟨x^{a,e}⟩]_{T^a}⟩ = [α⟨β^{a,r}⟩, ⟨β^{a,v}⟩, ⟨x^{a,e}⟩]_{Σ_A T^a}` in one level.
pub fn bar_theta<O: Operad, X: Clone>(
    op: &O,
    alpha: &O::Elem,
    bs: &[BarElement<O::Elem, X>],
) -> Result<BarElement<O::Elem, X>> {
    let a = op.arity(alpha).clone();
    if bs.len() != a.len() {
        return Err(Error::ShapeMismatch(format!("{} operands for {a}", bs.len())));
    }
    let m = bs.first().map_or(0, BarElement::level);
    let trees: Vec<_> = bs.iter().map(|b| b.tree.clone()).collect();
    let tree = sum_trees_with_height(&a, &trees, m)?;
    let roots: Vec<O::Elem> = bs.iter().map(|b| b.root.clone()).collect();
    let root = op.compose(alpha, &roots)?;
    let root = relabel(op, &root, tree.root_inputs(), Label::clone)?;
    let mut back = HashMap::new();
    for (la, b) in a.labels().zip(bs) {
        summand_labels(la, b, &mut back);
    }
    let mut vertices = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = Vec::with_capacity(tree.level(i).len());
        let mut k = 0;
        for b in bs {
            for dec in &b.vertices[i] {
                let inputs = tree.inputs(i, k)?;
                row.push(relabel(op, dec, &inputs, |l| back[l].clone())?);
                k += 1;
            }
        }
        vertices.push(row);
    }
    let leaves = bs.iter().flat_map(|b| b.leaves.iter().cloned()).collect();
    Ok(BarElement { tree, root, vertices, leaves })
}

fn partitions_of<E, X>(ps: &[RealizationPoint<E, X>]) -> Vec<Partition> {
    ps.iter().map(|p| p.partition.clone()).collect()
}

/// The `𝓟`-structure of the realization: merge the partitions, expand every
/// operand by its extraction map, sum the trees and renormalize.
pub fn realization_theta<O: Operad, A: Algebra<O>>(
    op: &O,
    alg: &A,
    alpha: &O::Elem,
    ps: &[RealizationPoint<O::Elem, A::Val>],
) -> Result<RealizationPoint<O::Elem, A::Val>> {
    if ps.is_empty() {
        return RealizationPoint::new(bar_theta(op, alpha, &[])?, Partition::empty());
    }
    let (merged, deltas) = merge(&partitions_of(ps))?;
    let expanded = ps.iter().zip(&deltas).map(|(p, d)| expand(op, &p.element, d)).collect::<Result<Vec<_>>>()?;
    let point = RealizationPoint::new(bar_theta(op, alpha, &expanded)?, merged)?;
    realize_normalize(op, alg, &point)
}

/// `η′[[α^r, ⟨α^v⟩, ⟨x^e⟩]_T, t] = ∘_T α^v ⟨x^e⟩`.
pub fn eta_prime<O: Operad, A: Algebra<O>>(op: &O, alg: &A, p: &RealizationPoint<O::Elem, A::Val>) -> Result<A::Val> {
    collapse(op, alg, &p.element)
}

/// Full operadic collapse of an element.
pub fn collapse<O: Operad, A: Algebra<O>>(op: &O, alg: &A, b: &BarElement<O::Elem, A::Val>) -> Result<A::Val> {
    let mut b = b.clone();
    while b.level() > 0 {
        b = bar_face(op, alg, &b, b.level())?;
    }
    alg.theta(op, &b.root, &b.leaves)
}

/// The additive structure of a `(𝓖,𝓟)`-space as a `𝓟`-algebra.
pub struct Additive<'a, P, G> {
    pub pair: &'a P,
    pub alg: &'a G,
}

impl<P: OperadPair, G: GpAlgebra<P>> Algebra<P::Add> for Additive<'_, P, G>
where
    G::Val: Pointed,
{
    type Val = G::Val;

    fn basepoint(&self, color: Color) -> G::Val {
        self.alg.zero(color)
    }

    fn theta(&self, _op: &P::Add, alpha: &<P::Add as Operad>::Elem, args: &[G::Val]) -> Result<G::Val> {
        self.alg.theta(self.pair, alpha, args)
    }

    fn sample_values(&self, _op: &P::Add, color: Color, rng: &mut ChaCha8Rng, n: usize) -> Vec<G::Val> {
        (0..n).map(|_| self.alg.sample(color, rng)).collect()
    }
}

/// `f` regarded at `A'`: the same labels with the colors of a chosen section.
fn recolored<P: OperadPair>(
    pair: &P,
    f: &<P::Mult as Operad>::Elem,
    fam: &[RelSet],
    idx: &[usize],
) -> Result<<P::Mult as Operad>::Elem> {
    let a = pair.mult().arity(f);
    let colors: Vec<Color> = fam.iter().zip(idx).map(|(b, &j)| b.color_at(j)).collect();
    if a.iter().map(|(_, c)| c).eq(colors.iter().copied()) && section_color(fam, idx) == a.ambient() {
        return Ok(f.clone());
    }
    let src = RelSet::new(section_color(fam, idx), a.labels().cloned().zip(colors))?;
    let map = src.labels().map(|l| (l.clone(), l.clone())).collect();
    let sigma = RelMap::infer(src, a.clone(), map)?;
    pair.act_any(f, &sigma)
}

/// The `𝓖`-structure of the realization: merge and expand as for the sum,
/// then take the product tree with `f⋉` on every vertex and `χ_f` on the leaves.
pub fn realization_mult<P: OperadPair, G: GpAlgebra<P>>(
    pair: &P,
    alg: &G,
    f: &<P::Mult as Operad>::Elem,
    ps: &[RealizationPoint<<P::Add as Operad>::Elem, G::Val>],
) -> Result<RealizationPoint<<P::Add as Operad>::Elem, G::Val>>
where
    G::Val: Pointed,
{
    let (m_op, p_op) = (pair.mult(), pair.add());
    let a = m_op.arity(f).clone();
    if ps.len() != a.len() {
        return Err(Error::ShapeMismatch(format!("{} operands for {a}", ps.len())));
    }
    let (merged, expanded) = if ps.is_empty() {
        (Partition::empty(), vec![])
    } else {
        let (merged, deltas) = merge(&partitions_of(ps))?;
        let ex = ps.iter().zip(&deltas).map(|(p, d)| expand(p_op, &p.element, d)).collect::<Result<Vec<_>>>()?;
        (merged, ex)
    };
    let height = merged.level();
    let trees: Vec<_> = expanded.iter().map(|b| b.tree.clone()).collect();
    let tree = prod_trees_with_height(&a, &trees, height)?;

    let roots: Vec<_> = expanded.iter().map(|b| b.root.clone()).collect();
    let root = relabel(p_op, &pair.ltimes(f, &roots)?, tree.root_inputs(), Label::clone)?;

    let mut vertices = Vec::with_capacity(height);
    for j in 0..height {
        let fam: Vec<RelSet> = expanded.iter().map(|b| b.tree.level(j).clone()).collect();
        let row = section_indices(&fam)
            .into_iter()
            .enumerate()
            .map(|(k, idx)| {
                let fk = recolored(pair, f, &fam, &idx)?;
                let decs: Vec<_> = expanded.iter().zip(&idx).map(|(b, &v)| b.vertices[j][v].clone()).collect();
                relabel(p_op, &pair.ltimes(&fk, &decs)?, &tree.inputs(j, k)?, Label::clone)
            })
            .collect::<Result<Vec<_>>>()?;
        vertices.push(row);
    }

    let fam: Vec<RelSet> = expanded.iter().map(|b| b.tree.leaves().clone()).collect();
    let leaves = section_indices(&fam)
        .into_iter()
        .map(|idx| {
            let fk = recolored(pair, f, &fam, &idx)?;
            let xs: Vec<G::Val> = expanded.iter().zip(&idx).map(|(b, &e)| b.leaves[e].clone()).collect();
            alg.chi(pair, &fk, &xs)
        })
        .collect::<Result<Vec<_>>>()?;

    let point = RealizationPoint::new(BarElement { tree, root, vertices, leaves }, merged)?;
    realize_normalize(p_op, &Additive { pair, alg }, &point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::Com;
    use crate::pairs::{semiring_gp, ComPair, SVal, SemiringGp, SemiringPair};
    use crate::partitions::rat;
    use crate::sets::Color::{C, D};
    use crate::trees::Tree;

    fn gp() -> SemiringGp {
        semiring_gp(SemiringPair::nat_nat())
    }

    fn com_element(tree: Tree, leaves: Vec<u64>) -> BarElement<RelSet, SVal> {
        let root = tree.root_inputs().clone();
        let vertices = (0..tree.height())
            .map(|i| (0..tree.level(i).len()).map(|k| tree.inputs(i, k).unwrap()).collect())
            .collect();
        BarElement { tree, root, vertices, leaves: leaves.into_iter().map(SVal::nat).collect() }
    }

    fn two_level() -> BarElement<RelSet, SVal> {
        let t = Tree::new(
            C,
            vec![
                vec![("a".into(), C), ("b".into(), C)],
                vec![("a1".into(), C), ("b1".into(), C)],
                vec![("x".into(), C), ("y".into(), C), ("z".into(), C)],
            ],
            vec![vec![0, 1], vec![0, 0, 1]],
        )
        .unwrap();
        com_element(t, vec![2, 3, 4])
    }

    #[test]
    fn eta_prime_collapses() {
        let b = two_level();
        let p = RealizationPoint::new(b, Partition::from_fracs(&[(1, 4), (1, 2)]).unwrap()).unwrap();
        assert_eq!(eta_prime(&Com, &gp(), &p).unwrap(), SVal::nat(9));
        let leaf = BarElement::corolla(&Com, RelSet::singleton(C), vec![SVal::nat(7)]).unwrap();
        let p = RealizationPoint::new(leaf, Partition::empty()).unwrap();
        assert_eq!(eta_prime(&Com, &gp(), &p).unwrap(), SVal::nat(7));
    }

    #[test]
    fn leading_zero_strips_the_bottom_face() {
        let b = two_level();
        let p = RealizationPoint::new(b.clone(), Partition::from_fracs(&[(0, 1), (1, 3)]).unwrap()).unwrap();
        let n = realize_normalize(&Com, &gp(), &p).unwrap();
        assert_eq!(n.partition, Partition::from_fracs(&[(1, 3)]).unwrap());
        assert!(super::super::bar_same(&Com, &n.element, &bar_face(&Com, &gp(), &b, 0).unwrap()));
        assert!(n.is_normal(&Com));
        let again = realize_normalize(&Com, &gp(), &n).unwrap();
        assert_eq!(again, n);
    }

    fn branching() -> BarElement<RelSet, SVal> {
        let t = Tree::new(
            C,
            vec![
                vec![("a".into(), C), ("b".into(), C)],
                vec![("a1".into(), C), ("a2".into(), C), ("b1".into(), C)],
                vec![("x".into(), C), ("y".into(), C), ("z".into(), C), ("w".into(), C)],
            ],
            vec![vec![0, 0, 1], vec![0, 0, 1, 2]],
        )
        .unwrap();
        com_element(t, vec![2, 3, 4, 5])
    }

    #[test]
    fn degenerate_presentations_normalize_back() {
        let b = branching();
        let t = Partition::from_fracs(&[(1, 4), (1, 2)]).unwrap();
        let p = RealizationPoint::new(b.clone(), t.clone()).unwrap();
        for i in 0..=2 {
            let d = bar_degeneracy(&Com, &b, i).unwrap();
            let mut c = t.coords().to_vec();
            let lo = if i == 0 { rat(0, 1) } else { c[i - 1].clone() };
            let hi = if i == 2 { rat(1, 1) } else { c[i].clone() };
            c.insert(i, (lo + hi) / rat(2, 1));
            let q = RealizationPoint::new(d, Partition::new(c).unwrap()).unwrap();
            assert_eq!(realize_normalize(&Com, &gp(), &q).unwrap(), p);
        }
    }

    #[test]
    fn fig2_partitions_and_identity_levels() {
        let t1 = Tree::new(C, vec![vec![("p".into(), C)], vec![("x".into(), C), ("y".into(), D)]], vec![vec![0, 0]])
            .unwrap();
        let t2 = Tree::new(
            D,
            vec![
                vec![("q".into(), D)],
                vec![("r1".into(), D), ("r2".into(), D)],
                vec![("z1".into(), D), ("z2".into(), D), ("z3".into(), D)],
            ],
            vec![vec![0, 0], vec![0, 0, 1]],
        )
        .unwrap();
        let p1 = RealizationPoint::new(com_element(t1, vec![1, 2]), Partition::from_fracs(&[(1, 3)]).unwrap()).unwrap();
        let p2 =
            RealizationPoint::new(com_element(t2, vec![5, 1, 1]), Partition::from_fracs(&[(1, 6), (2, 3)]).unwrap())
                .unwrap();
        let alpha = RelSet::of(C, &[("1", C), ("2", D)]).unwrap();
        let s = realization_theta(&Com, &gp(), &alpha, &[p1.clone(), p2.clone()]).unwrap();
        assert_eq!(s.element.level(), 3);
        assert_eq!(s.partition, Partition::from_fracs(&[(1, 6), (1, 3), (2, 3)]).unwrap());
        assert_eq!(eta_prime(&Com, &gp(), &s).unwrap(), SVal::nat(10));
        let f = RelSet::of(C, &[("1", C), ("2", D)]).unwrap();
        let pr = realization_mult(&ComPair::default(), &gp(), &f, &[p1, p2]).unwrap();
        assert_eq!(pr.element.tree.leaves().len(), 6);
        assert_eq!(pr.partition, s.partition);
        assert_eq!(eta_prime(&Com, &Additive { pair: &ComPair::default(), alg: &gp() }, &pr).unwrap(), SVal::nat(21));
    }

    #[test]
    fn empty_operands() {
        let alpha = RelSet::empty(C);
        let s = realization_theta(&Com, &gp(), &alpha, &[]).unwrap();
        assert_eq!(eta_prime(&Com, &gp(), &s).unwrap(), SVal::nat(0));
        let s = realization_mult(&ComPair::default(), &gp(), &alpha, &[]).unwrap();
        assert_eq!(eta_prime(&Com, &gp(), &s).unwrap(), SVal::nat(1));
    }
}
