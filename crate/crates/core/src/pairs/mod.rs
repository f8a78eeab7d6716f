//! Relative operad pairs: a multiplicative operad acting on an additive one.

use crate::error::Result;
use crate::geom::iso::{is_reindexing, IsoElem};
use crate::geom::steiner::isometry_act;
use crate::geom::{IsometryOperad, SteinerOperad, SteinerSystem};
use crate::operad::{Com, Operad};
use crate::sets::{dep_prod, RelMap, RelSet};

pub mod check;
pub mod gp;
pub mod gzero;
pub mod semiring;

pub use check::{check_pair_axioms, PairConfig};
pub use gp::{check_gp_interchange, hom_coincidence, semiring_gp, GpAlgebra, SemiringGp};
pub use gzero::{check_g0_monad, g0_classes, G0Class};
pub use semiring::{Coercion, FiniteSemiring, Poly, SVal, Semiring, SemiringPair};

/// `(𝓖, 𝓟)` with the action `f⋉⟨α^a⟩ ∈ 𝓟Π_A B^a`.
pub trait OperadPair: Send + Sync {
    type Mult: Operad;
    type Add: Operad;

    fn name(&self) -> String;
    fn mult(&self) -> &Self::Mult;
    fn add(&self) -> &Self::Add;

    fn ltimes(
        &self,
        f: &<Self::Mult as Operad>::Elem,
        alphas: &[<Self::Add as Operad>::Elem],
    ) -> Result<<Self::Add as Operad>::Elem>;

    /// The extension of the right action of `𝓖` to bijections that may raise colors.
    fn act_any(&self, f: &<Self::Mult as Operad>::Elem, sigma: &RelMap) -> Result<<Self::Mult as Operad>::Elem> {
        self.mult().recolor(f, sigma)
    }
}

/// `(Com→, Com→)`: `Π_A ⋉ ⟨Σ_{B^a}⟩ = Σ_{Π_A B^a}`.
#[derive(Debug, Clone, Default)]
pub struct ComPair {
    /// Drop singleton factors, breaking the second unit law.
    pub fault: bool,
}

impl OperadPair for ComPair {
    type Mult = Com;
    type Add = Com;

    fn name(&self) -> String {
        "(Com,Com)".into()
    }

    fn mult(&self) -> &Com {
        &Com
    }

    fn add(&self) -> &Com {
        &Com
    }

    fn ltimes(&self, f: &RelSet, alphas: &[RelSet]) -> Result<RelSet> {
        if self.fault && alphas.iter().any(|b| b.len() == 1) {
            let fam: Vec<RelSet> =
                alphas.iter().map(|b| if b.len() == 1 { RelSet::empty(b.ambient()) } else { b.clone() }).collect();
            return dep_prod(f, &fam);
        }
        dep_prod(f, alphas)
    }
}

/// `(𝓛→, 𝓗→)` on finitely supported vectors.
#[derive(Debug, Clone)]
pub struct SteinerPair {
    pub iso: IsometryOperad,
    pub steiner: SteinerOperad,
}

impl SteinerPair {
    pub fn new(dim: usize) -> Self {
        SteinerPair { iso: IsometryOperad::default(), steiner: SteinerOperad::new(dim) }
    }
}

impl OperadPair for SteinerPair {
    type Mult = IsometryOperad;
    type Add = SteinerOperad;

    fn name(&self) -> String {
        format!("(L,{})", self.steiner.name())
    }

    fn mult(&self) -> &IsometryOperad {
        &self.iso
    }

    fn add(&self) -> &SteinerOperad {
        &self.steiner
    }

    fn ltimes(&self, f: &IsoElem, alphas: &[SteinerSystem]) -> Result<SteinerSystem> {
        isometry_act(f, alphas)
    }

    fn act_any(&self, f: &IsoElem, sigma: &RelMap) -> Result<IsoElem> {
        debug_assert!(is_reindexing(sigma));
        self.iso.recolor(f, sigma)
    }
}
