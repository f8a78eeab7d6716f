//! The relative operad contract and its symbolic instances.

use std::fmt;

use indexmap::IndexMap;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sets::{Color, Flavor, Label, RelMap, RelSet};

pub mod algebra;
pub mod check;
pub mod com;
pub mod endo;
pub mod free;
pub mod monad;

pub use algebra::{check_algebra, Algebra, NoAlgebra};
pub use check::{check_operad_axioms, AxiomConfig};
pub use com::Com;
pub use endo::{EndAlgebra, EndElem, EndOperad, PointedPair};
pub use free::{FreeAlgebra, FreeElem, FreeOperad, Generator, Signature, SymVal, Term};
pub use monad::{MonadElem, Pointed};

/// A relative operad presented by its elements.
///
/// `compose(α, inner)` takes `inner` aligned with the element order of
/// `arity(α)`; `act(α, σ)` takes a bijection `σ: A → arity(α)` and returns an
/// element at `A`.
pub trait Operad: Send + Sync {
    type Elem: Clone + fmt::Debug + Send + Sync;

    fn name(&self) -> String;

    fn arity<'a>(&self, alpha: &'a Self::Elem) -> &'a RelSet;

    /// `𝐢𝐝_⋆` at `{1_⋆}_⋆`.
    fn unit(&self, color: Color) -> Self::Elem;

    /// The unique element `∗_⋆` of `𝓟∅_⋆`.
    fn point(&self, color: Color) -> Self::Elem;

    fn compose(&self, alpha: &Self::Elem, inner: &[Self::Elem]) -> Result<Self::Elem>;

    fn act(&self, alpha: &Self::Elem, sigma: &RelMap) -> Result<Self::Elem>;

    fn same(&self, a: &Self::Elem, b: &Self::Elem) -> bool;

    /// All elements at `arity` when there are at most `budget` of them,
    /// otherwise `budget` seeded samples.
    fn elements_at(&self, arity: &RelSet, rng: &mut ChaCha8Rng, budget: usize) -> Vec<Self::Elem>;

    /// Relabel along a bijection that may change element colors. Only
    /// carriers that ignore colors support this.
    fn recolor(&self, alpha: &Self::Elem, sigma: &RelMap) -> Result<Self::Elem> {
        let _ = (alpha, sigma);
        Err(Error::NotInvertible(format!("{} elements cannot be recolored", self.name())))
    }

    /// The unit relabeled to `{label_⋆}_⋆`.
    fn unit_at(&self, label: &Label, color: Color) -> Self::Elem {
        let sigma = single_map(label, color);
        self.act(&self.unit(color), &sigma).expect("unit relabeling is a bijection")
    }

    /// Transport `alpha` to `target` along the positional bijection.
    fn relabel_to(&self, alpha: &Self::Elem, target: &RelSet) -> Result<Self::Elem> {
        let sigma = positional_map(target, self.arity(alpha))?;
        self.act(alpha, &sigma)
    }

    /// `α·σ` for an injection `σ: A → A'`, plugging units into the image
    /// and points elsewhere.
    fn degeneration(&self, alpha: &Self::Elem, sigma: &RelMap) -> Result<Self::Elem> {
        let target = self.arity(alpha);
        if sigma.target() != target {
            return Err(Error::ShapeMismatch("degeneration target differs from the arity".into()));
        }
        if sigma.flavor() != Flavor::Inj && sigma.flavor() != Flavor::Bij {
            return Err(Error::ShapeMismatch("degenerations need color-preserving injections".into()));
        }
        let inner: Vec<Self::Elem> =
            target.iter().map(|(l, c)| if sigma.in_image(l) { self.unit(c) } else { self.point(c) }).collect();
        let plugged = self.compose(alpha, &inner)?;
        let one = Label::from("1");
        let map: IndexMap<Label, Label> =
            sigma.assignment().iter().map(|(a, b)| (a.clone(), Label::pair(b, &one))).collect();
        let back = RelMap::new(sigma.source().clone(), self.arity(&plugged).clone(), map, Flavor::Bij)?;
        self.act(&plugged, &back)
    }
}

/// `{label_⋆}_⋆ → {1_⋆}_⋆`.
pub fn single_map(label: &Label, color: Color) -> RelMap {
    let mut map = IndexMap::new();
    map.insert(label.clone(), Label::from("1"));
    RelMap::new(RelSet::single(label.clone(), color), RelSet::singleton(color), map, Flavor::Bij)
        .expect("singletons of one color")
}

/// The bijection matching elements of `source` and `target` by position.
pub fn positional_map(source: &RelSet, target: &RelSet) -> Result<RelMap> {
    if source.len() != target.len() {
        return Err(Error::ShapeMismatch(format!("cannot match {source} with {target}")));
    }
    let map = source.labels().cloned().zip(target.labels().cloned()).collect();
    RelMap::new(source.clone(), target.clone(), map, Flavor::Bij)
}

/// Verify that `inner` can be plugged into an element of arity `a`.
pub fn check_inner(a: &RelSet, inner: &[&RelSet]) -> Result<()> {
    if inner.len() != a.len() {
        return Err(Error::ShapeMismatch(format!("{} inputs for an arity of size {}", inner.len(), a.len())));
    }
    for ((l, c), b) in a.iter().zip(inner) {
        if b.ambient() != c {
            return Err(Error::ShapeMismatch(format!("input {l} has color {c} but receives ambient {}", b.ambient())));
        }
    }
    Ok(())
}

/// Check that `sigma` is a bijection onto the arity of an element.
pub fn check_action(arity: &RelSet, sigma: &RelMap) -> Result<()> {
    if sigma.target() != arity {
        return Err(Error::ShapeMismatch(format!("action by a map into {} on an element at {arity}", sigma.target())));
    }
    if !matches!(sigma.flavor(), Flavor::Bij) {
        return Err(Error::NotInvertible("the symmetric action needs a color-preserving bijection".into()));
    }
    Ok(())
}
