//! Simplicial levels of the delooping: decorated trees with a single first
//! vertex, no root decoration and a root vector, or the basepoint `∞`.

use serde::{Deserialize, Serialize};

use super::realize::{normalize_with, RealizationPoint};
use super::{check_parts, degenerate, is_degenerate_at, middle_face, top_face};
use crate::error::{Error, Result};
use crate::geom::steiner::psi;
use crate::geom::{close_vec, EmbOperad, EmbSystem, SteinerOperad, SteinerSystem};
use crate::operad::{Algebra, Com, FreeElem, FreeOperad, Operad, Pointed};
use crate::partitions::Partition;
use crate::sets::{Color, RelSet};
use crate::trees::Tree;

/// Carriers whose elements have componentwise invertible embeddings.
pub trait RootInverse: Operad {
    /// Index of the component whose certified image contains `v` and the preimage.
    fn locate(&self, alpha: &Self::Elem, v: &[f64]) -> Result<Option<(usize, Vec<f64>)>>;
}

impl RootInverse for EmbOperad {
    fn locate(&self, alpha: &EmbSystem, v: &[f64]) -> Result<Option<(usize, Vec<f64>)>> {
        Ok(alpha.locate(v))
    }
}

impl RootInverse for SteinerOperad {
    fn locate(&self, alpha: &SteinerSystem, v: &[f64]) -> Result<Option<(usize, Vec<f64>)>> {
        Ok(psi(alpha).locate(v))
    }
}

impl RootInverse for Com {
    fn locate(&self, _alpha: &RelSet, _v: &[f64]) -> Result<Option<(usize, Vec<f64>)>> {
        Err(Error::NotInvertible("Com elements have no components to invert".into()))
    }
}

impl RootInverse for FreeOperad {
    fn locate(&self, _alpha: &FreeElem, _v: &[f64]) -> Result<Option<(usize, Vec<f64>)>> {
        Err(Error::NotInvertible("free operad elements have no components to invert".into()))
    }
}

/// A formal leaf symbol; the empty name is the basepoint.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Formal(pub String);

impl Pointed for Formal {
    fn is_basepoint(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DeloopElement<E, X> {
    Infinity(Color),
    At {
        tree: Tree,
        vertices: Vec<Vec<E>>,
        leaves: Vec<X>,
        #[serde(with = "crate::geom::decimal")]
        vector: Vec<f64>,
    },
}

impl<E: Clone, X: Clone> DeloopElement<E, X> {
    pub fn new<O: Operad<Elem = E>>(
        op: &O,
        tree: Tree,
        vertices: Vec<Vec<E>>,
        leaves: Vec<X>,
        vector: Vec<f64>,
    ) -> Result<Self> {
        if tree.level(0).len() != 1 {
            return Err(Error::ShapeMismatch(format!(
                "{} edges at the first level, expected one",
                tree.level(0).len()
            )));
        }
        check_parts(op, &tree, &vertices, leaves.len())?;
        Ok(DeloopElement::At { tree, vertices, leaves, vector })
    }

    /// `None` for the basepoint.
    pub fn level(&self) -> Option<usize> {
        match self {
            DeloopElement::Infinity(_) => None,
            DeloopElement::At { tree, .. } => Some(tree.height()),
        }
    }

    pub fn color(&self) -> Color {
        match self {
            DeloopElement::Infinity(c) => *c,
            DeloopElement::At { tree, .. } => tree.root_color(),
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, DeloopElement::Infinity(_))
    }
}

/// Edge indices of `tree.subtree_above(k)` inside `tree`, level by level.
fn kept_edges(tree: &Tree, k: usize) -> Vec<Vec<usize>> {
    let mut keep = vec![vec![k]];
    for i in 1..=tree.height() {
        let prev = &keep[i - 1];
        keep.push((0..tree.level(i).len()).filter(|&c| prev.contains(&tree.parent(i, c))).collect());
    }
    keep
}

/// `T_{≥e}` for the `k`-th edge of `E^0` with the decorations and leaves above it.
fn restrict<E: Clone, X: Clone>(
    tree: &Tree,
    vertices: &[Vec<E>],
    leaves: &[X],
    k: usize,
) -> Result<(Tree, Vec<Vec<E>>, Vec<X>)> {
    let keep = kept_edges(tree, k);
    let sub = tree.subtree_above(k)?;
    let m = tree.height();
    let vs = (0..m).map(|i| keep[i].iter().map(|&j| vertices[i][j].clone()).collect()).collect();
    let ls = keep[m].iter().map(|&j| leaves[j].clone()).collect();
    Ok((sub, vs, ls))
}

/// `d·∂_i`. The bottom face pulls the vector back through the first vertex or
/// returns `∞`; the top face evaluates the leaves as for bar elements.
pub fn deloop_face<O: RootInverse, A: Algebra<O>>(
    op: &O,
    alg: &A,
    d: &DeloopElement<O::Elem, A::Val>,
    i: usize,
) -> Result<DeloopElement<O::Elem, A::Val>> {
    let DeloopElement::At { tree, vertices, leaves, vector } = d else {
        return Ok(d.clone());
    };
    let m = tree.height();
    if m == 0 || i > m {
        return Err(Error::IndexOutOfRange { index: i, max: m });
    }
    if i == 0 {
        let Some((k, u)) = op.locate(&vertices[0][0], vector)? else {
            return Ok(DeloopElement::Infinity(tree.root_color()));
        };
        let faced = tree.face(0)?;
        let (tree, vertices, leaves) = restrict(&faced, &vertices[1..], leaves, k)?;
        return Ok(DeloopElement::At { tree, vertices, leaves, vector: u });
    }
    if i == m {
        let (tree, vertices, leaves) = top_face(op, alg, tree, vertices, leaves)?;
        return Ok(DeloopElement::At { tree, vertices, leaves, vector: vector.clone() });
    }
    let (tree, vertices) = middle_face(op, tree, vertices, i)?;
    Ok(DeloopElement::At { tree, vertices, leaves: leaves.clone(), vector: vector.clone() })
}

/// `d·δ_i`.
pub fn deloop_degeneracy<O: Operad, X: Clone>(
    op: &O,
    d: &DeloopElement<O::Elem, X>,
    i: usize,
) -> Result<DeloopElement<O::Elem, X>> {
    let DeloopElement::At { tree, vertices, leaves, vector } = d else {
        return Ok(d.clone());
    };
    let (tree, vertices) = degenerate(op, tree, vertices, i)?;
    Ok(DeloopElement::At { tree, vertices, leaves: leaves.clone(), vector: vector.clone() })
}

/// `σ^U_V`: translate the root vector by `v`; `∞` is fixed.
pub fn deloop_shift<E: Clone, X: Clone>(d: &DeloopElement<E, X>, v: &[f64]) -> DeloopElement<E, X> {
    match d {
        DeloopElement::Infinity(_) => d.clone(),
        DeloopElement::At { tree, vertices, leaves, vector } => {
            let n = vector.len().max(v.len());
            let sum = (0..n).map(|j| vector.get(j).unwrap_or(&0.0) + v.get(j).unwrap_or(&0.0)).collect();
            DeloopElement::At { tree: tree.clone(), vertices: vertices.clone(), leaves: leaves.clone(), vector: sum }
        }
    }
}

/// Normal form of `[d, t]`; `∞` collapses the partition.
pub fn deloop_normalize<O: RootInverse, A: Algebra<O>>(
    op: &O,
    alg: &A,
    d: DeloopElement<O::Elem, A::Val>,
    t: Partition,
) -> Result<(DeloopElement<O::Elem, A::Val>, Partition)> {
    normalize_with(d, t, &DeloopElement::level, &|x, i| deloop_face(op, alg, x, i), &|x| match x {
        DeloopElement::Infinity(_) => None,
        DeloopElement::At { tree, vertices, .. } => {
            (0..tree.height()).find(|&i| is_degenerate_at(op, tree, vertices, i))
        }
    })
}

/// `η[[α^r, ⟨α^v⟩, ⟨x^e⟩]_T, t]` evaluated at `u`: the branch of the root
/// component containing `u` with the pulled back vector, or `∞`.
pub fn eta_eval<O: RootInverse, A: Algebra<O>>(
    op: &O,
    alg: &A,
    p: &RealizationPoint<O::Elem, A::Val>,
    u: &[f64],
) -> Result<(DeloopElement<O::Elem, A::Val>, Partition)> {
    let b = &p.element;
    let Some((k, v)) = op.locate(&b.root, u)? else {
        return Ok((DeloopElement::Infinity(b.tree.root_color()), Partition::empty()));
    };
    let (tree, vertices, leaves) = restrict(&b.tree, &b.vertices, &b.leaves, k)?;
    deloop_normalize(op, alg, DeloopElement::At { tree, vertices, leaves, vector: v }, p.partition.clone())
}

/// Equality up to relabeling: same bare trees, positionally equal decorations
/// and leaves, and vectors within `tol`.
pub fn deloop_equivalent<O: Operad, X: PartialEq>(
    op: &O,
    a: &DeloopElement<O::Elem, X>,
    b: &DeloopElement<O::Elem, X>,
    tol: f64,
) -> bool {
    match (a, b) {
        (DeloopElement::Infinity(c), DeloopElement::Infinity(d)) => c == d,
        (
            DeloopElement::At { tree: t1, vertices: v1, leaves: l1, vector: u1 },
            DeloopElement::At { tree: t2, vertices: v2, leaves: l2, vector: u2 },
        ) => {
            t1.with_plain_labels() == t2.with_plain_labels()
                && l1 == l2
                && close_vec(u1, u2, tol)
                && v1.iter().zip(v2).all(|(r, s)| {
                    r.iter().zip(s).all(|(x, y)| op.relabel_to(x, op.arity(y)).is_ok_and(|x| op.same(&x, y)))
                })
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bar::realize::realization_theta;
    use crate::bar::BarElement;
    use crate::geom::Config;
    use crate::operad::NoAlgebra;
    use crate::sets::Color::C;

    fn chi(centers: &[[f64; 2]], arity: &RelSet) -> EmbSystem {
        Config::new(arity.clone(), 2, centers.iter().map(|c| c.to_vec()).collect()).unwrap().chi()
    }

    fn leaf(s: &str) -> Formal {
        Formal(s.into())
    }

    /// Root with two components; the first branch has a binary vertex.
    fn sample() -> RealizationPoint<EmbSystem, Formal> {
        let op = EmbOperad::new(2);
        let t = Tree::new(
            C,
            vec![vec![("a".into(), C), ("b".into(), C)], vec![("x".into(), C), ("y".into(), C), ("z".into(), C)]],
            vec![vec![0, 0, 1]],
        )
        .unwrap();
        let root = chi(&[[-3.0, 0.0], [3.0, 0.0]], t.root_inputs());
        let va = chi(&[[-1.0, 0.0], [1.0, 0.0]], &t.inputs(0, 0).unwrap());
        let vb = op.unit_at(t.level(1).label(2), C);
        let b =
            BarElement { tree: t, root, vertices: vec![vec![va, vb]], leaves: vec![leaf("x"), leaf("y"), leaf("z")] };
        b.validate(&op).unwrap();
        RealizationPoint::new(b, Partition::from_fracs(&[(1, 2)]).unwrap()).unwrap()
    }

    #[test]
    fn eta_selects_the_branch() {
        let op = EmbOperad::new(2);
        let alg = NoAlgebra::<Formal>::default();
        let p = sample();
        let (d, t) = eta_eval(&op, &alg, &p, &[-3.0, 0.0]).unwrap();
        assert_eq!(t, Partition::from_fracs(&[(1, 2)]).unwrap());
        let DeloopElement::At { tree, leaves, vector, .. } = &d else { panic!("expected a tree") };
        assert_eq!(tree.leaves().len(), 2);
        assert_eq!(leaves, &vec![leaf("x"), leaf("y")]);
        assert!(close_vec(vector, &[0.0, 0.0], 1e-9));

        // The second branch is a unit vertex, so the level collapses.
        let (d, t) = eta_eval(&op, &alg, &p, &[3.0, 0.0]).unwrap();
        assert_eq!(t, Partition::empty());
        assert_eq!(d.level(), Some(0));

        let (d, _) = eta_eval(&op, &alg, &p, &[0.0, 50.0]).unwrap();
        assert!(d.is_infinity());
    }

    #[test]
    fn bottom_face_and_shift() {
        let op = EmbOperad::new(2);
        let alg = NoAlgebra::<Formal>::default();
        let (d, _) = eta_eval(&op, &alg, &sample(), &[-3.0, 0.0]).unwrap();
        let inner = deloop_face(&op, &alg, &d, 0).unwrap();
        assert!(inner.is_infinity(), "the origin sits between the two discs");
        let moved = deloop_shift(&d, &[1.0, 0.0]);
        let DeloopElement::At { leaves, vector, .. } = deloop_face(&op, &alg, &moved, 0).unwrap() else {
            panic!("expected a tree")
        };
        assert_eq!(leaves, vec![leaf("y")]);
        assert!(vector.iter().all(|x| x.is_finite()));
        assert!(deloop_shift(&DeloopElement::<EmbSystem, Formal>::Infinity(C), &[1.0]).is_infinity());
        assert!(matches!(deloop_face(&op, &alg, &d, 1), Err(Error::MissingAlgebra)));
    }

    #[test]
    fn degeneracy_then_face_is_identity() {
        let op = EmbOperad::new(2);
        let alg = NoAlgebra::<Formal>::default();
        let (d, _) = eta_eval(&op, &alg, &sample(), &[-3.2, 0.1]).unwrap();
        for i in 0..=1 {
            let up = deloop_degeneracy(&op, &d, i).unwrap();
            for j in [i, i + 1] {
                if j == 2 {
                    continue;
                }
                assert!(deloop_equivalent(&op, &deloop_face(&op, &alg, &up, j).unwrap(), &d, 1e-9), "i={i} j={j}");
            }
        }
    }

    #[test]
    fn composite_consistency() {
        let op = EmbOperad::new(2);
        let alg = NoAlgebra::<Formal>::default();
        let p = sample();
        let a = RelSet::of(C, &[("1", C), ("2", C)]).unwrap();
        let alpha = chi(&[[0.0, -10.0], [0.0, 10.0]], &a);
        let q = realization_theta(&op, &alg, &alpha, &[p.clone(), p.clone()]).unwrap();
        for u in [[-3.0, 10.0], [3.0, -10.0], [0.0, 0.0], [-3.1, -9.9]] {
            let (direct, t1) = eta_eval(&op, &alg, &q, &u).unwrap();
            let (two, t2) = match alpha.locate(&u) {
                None => (DeloopElement::Infinity(C), Partition::empty()),
                Some((k, v)) => eta_eval(&op, &alg, &[p.clone(), p.clone()][k], &v).unwrap(),
            };
            assert!(deloop_equivalent(&op, &direct, &two, 1e-9), "{u:?}");
            assert_eq!(t1, t2);
        }
    }

    #[test]
    fn symbolic_carriers_are_not_invertible() {
        let a = RelSet::of(C, &[("1", C)]).unwrap();
        assert!(matches!(Com.locate(&a, &[0.0]), Err(Error::NotInvertible(_))));
    }
}
