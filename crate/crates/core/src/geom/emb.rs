//! Embedding systems `Emb→_U` as closed expressions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::Config;
use super::iso::{block_action, IsoExpr};
use super::{add, close_vec, decimal, norm, sample_point, scale, sub, SAMPLES, TOLERANCE};
use crate::error::{Error, Result};
use crate::operad::{check_action, check_inner, Operad};
use crate::sets::{dep_sum, Color, RelMap, RelSet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EmbExpr {
    Id,
    /// `u ↦ x + m u/(m + 2‖u‖)` on the leading `len(center)` coordinates;
    /// without a scale it is the translation `u ↦ x + u`.
    Radial {
        #[serde(with = "decimal")]
        center: Vec<f64>,
        scale: Option<f64>,
    },
    /// Composite, outermost map first.
    Chain {
        parts: Vec<EmbExpr>,
    },
    /// `v ↦ Σ f_a g_a(f_aᵀ v) + (v − Σ f_a f_aᵀ v)`.
    Conj {
        blocks: Vec<(IsoExpr, EmbExpr)>,
    },
}

fn split(u: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let head: Vec<f64> = (0..n).map(|i| super::at(u, i)).collect();
    let tail: Vec<f64> = u.iter().enumerate().map(|(i, x)| if i < n { 0.0 } else { *x }).collect();
    (head, tail)
}

pub(crate) fn radial(center: &[f64], m: Option<f64>, u: &[f64]) -> Vec<f64> {
    let (head, tail) = split(u, center.len());
    let moved = match m {
        Some(m) => scale(&head, m / (m + 2.0 * norm(&head))),
        None => head,
    };
    add(&add(center, &moved), &tail)
}

pub(crate) fn radial_inverse(center: &[f64], m: Option<f64>, v: &[f64]) -> Option<Vec<f64>> {
    let (head, tail) = split(v, center.len());
    let w = sub(&head, center);
    let u = match m {
        Some(m) => {
            let r = norm(&w);
            if r >= m / 2.0 {
                return None;
            }
            scale(&w, m / (m - 2.0 * r))
        }
        None => w,
    };
    Some(add(&u, &tail))
}

impl EmbExpr {
    pub fn eval(&self, u: &[f64]) -> Vec<f64> {
        match self {
            EmbExpr::Id => u.to_vec(),
            EmbExpr::Radial { center, scale } => radial(center, *scale, u),
            EmbExpr::Chain { parts } => parts.iter().rev().fold(u.to_vec(), |acc, p| p.eval(&acc)),
            EmbExpr::Conj { blocks } => {
                let vals: Vec<(&IsoExpr, Vec<f64>)> = blocks.iter().map(|(f, g)| (f, g.eval(&f.adjoint(u)))).collect();
                block_action(&vals, u)
            }
        }
    }

    /// The preimage of `v`, or `None` when `v` is outside the certified open image.
    pub fn invert(&self, v: &[f64]) -> Option<Vec<f64>> {
        match self {
            EmbExpr::Id => Some(v.to_vec()),
            EmbExpr::Radial { center, scale } => radial_inverse(center, *scale, v),
            EmbExpr::Chain { parts } => parts.iter().try_fold(v.to_vec(), |acc, p| p.invert(&acc)),
            EmbExpr::Conj { blocks } => {
                let mut vals = Vec::new();
                for (f, g) in blocks {
                    vals.push((f, g.invert(&f.adjoint(v))?));
                }
                Some(block_action(&vals, v))
            }
        }
    }

    /// Number of leading coordinates outside of which the map is the identity.
    pub fn support(&self) -> usize {
        match self {
            EmbExpr::Id => 0,
            EmbExpr::Radial { center, .. } => center.len(),
            EmbExpr::Chain { parts } => parts.iter().map(EmbExpr::support).max().unwrap_or(0),
            EmbExpr::Conj { blocks } => blocks
                .iter()
                .map(|(f, g)| match g.support() {
                    0 => 0,
                    s => f.image_support(s),
                })
                .max()
                .unwrap_or(0),
        }
    }

    /// `outer ∘ inner`, flattening chains and dropping identities.
    pub fn then_outer(inner: &EmbExpr, outer: &EmbExpr) -> EmbExpr {
        let mut parts = Vec::new();
        for e in [outer, inner] {
            match e {
                EmbExpr::Id => {}
                EmbExpr::Chain { parts: p } => parts.extend(p.iter().cloned()),
                other => parts.push(other.clone()),
            }
        }
        match parts.len() {
            0 => EmbExpr::Id,
            1 => parts.pop().expect("one part"),
            _ => EmbExpr::Chain { parts },
        }
    }
}

/// An element of `Emb→_U`: one embedding per element of the arity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbSystem {
    pub arity: RelSet,
    /// Dimension of `U`; 0 for systems that are the identity everywhere.
    pub dim: usize,
    pub comps: Vec<EmbExpr>,
}

impl EmbSystem {
    pub fn support(&self) -> usize {
        self.comps.iter().map(EmbExpr::support).max().unwrap_or(0)
    }

    pub fn is_supported_in(&self, n: usize) -> bool {
        self.support() <= n
    }

    /// `i^U_V`: the same maps regarded in dimension `n ≥ dim`.
    pub fn pad(&self, n: usize) -> Result<EmbSystem> {
        if n < self.dim {
            return Err(Error::DimMismatch(format!("cannot pad dimension {} down to {n}", self.dim)));
        }
        Ok(EmbSystem { dim: n, ..self.clone() })
    }

    pub fn eval(&self, a: usize, u: &[f64]) -> Vec<f64> {
        self.comps[a].eval(u)
    }

    /// Component index and preimage of `v`, if `v` lies in some certified image.
    pub fn locate(&self, v: &[f64]) -> Option<(usize, Vec<f64>)> {
        self.comps.iter().enumerate().find_map(|(a, c)| c.invert(v).map(|u| (a, u)))
    }

    /// Sampled certificate: every sampled image point of a component has a
    /// preimage under that component only.
    pub fn check_disjoint(&self, rng: &mut ChaCha8Rng, samples: usize) -> std::result::Result<(), String> {
        let n = self.dim.max(self.support()).max(1);
        for _ in 0..samples {
            let u = sample_point(rng, n, 3.0);
            for (a, c) in self.comps.iter().enumerate() {
                let v = c.eval(&u);
                for (b, other) in self.comps.iter().enumerate() {
                    let hit = other.invert(&v);
                    if a == b {
                        match hit {
                            Some(back) if close_vec(&back, &u, 1e-7) => {}
                            _ => return Err(format!("component {a} does not invert at {u:?}")),
                        }
                    } else if hit.is_some() {
                        return Err(format!("images of components {a} and {b} meet at {v:?}"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Sampled comparison of two families of maps `ℝ^n → ℝ^n`.
pub(crate) fn same_maps<F: Fn(usize, &[f64]) -> Vec<f64>, G: Fn(usize, &[f64]) -> Vec<f64>>(
    count: usize,
    n: usize,
    f: F,
    g: G,
) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(0xe3b);
    (0..SAMPLES).all(|_| {
        let u = sample_point(&mut rng, n, 2.0);
        (0..count).all(|a| close_vec(&f(a, &u), &g(a, &u), TOLERANCE))
    })
}

/// `Emb→_U` for `U = ℝ^dim`; random elements are `χ`-images of configurations.
#[derive(Debug, Clone)]
pub struct EmbOperad {
    pub dim: usize,
}

impl EmbOperad {
    pub fn new(dim: usize) -> Self {
        EmbOperad { dim }
    }

    fn reorder(alpha: &EmbSystem, sigma: &RelMap) -> EmbSystem {
        let comps = sigma
            .source()
            .labels()
            .map(|s| alpha.comps[alpha.arity.index_of(sigma.apply(s).expect("total")).expect("in arity")].clone())
            .collect();
        EmbSystem { arity: sigma.source().clone(), dim: alpha.dim, comps }
    }
}

impl Operad for EmbOperad {
    type Elem = EmbSystem;

    fn name(&self) -> String {
        format!("Emb(R^{})", self.dim)
    }

    fn arity<'a>(&self, alpha: &'a EmbSystem) -> &'a RelSet {
        &alpha.arity
    }

    fn unit(&self, color: Color) -> EmbSystem {
        EmbSystem { arity: RelSet::singleton(color), dim: 0, comps: vec![EmbExpr::Id] }
    }

    fn point(&self, color: Color) -> EmbSystem {
        EmbSystem { arity: RelSet::empty(color), dim: 0, comps: vec![] }
    }

    fn compose(&self, alpha: &EmbSystem, inner: &[EmbSystem]) -> Result<EmbSystem> {
        check_inner(&alpha.arity, &inner.iter().map(|b| &b.arity).collect::<Vec<_>>())?;
        let fam: Vec<RelSet> = inner.iter().map(|b| b.arity.clone()).collect();
        let comps = alpha
            .comps
            .iter()
            .zip(inner)
            .flat_map(|(a, b)| b.comps.iter().map(move |c| EmbExpr::then_outer(c, a)))
            .collect();
        let dim = inner.iter().map(|b| b.dim).fold(alpha.dim, usize::max);
        Ok(EmbSystem { arity: dep_sum(&alpha.arity, &fam)?, dim, comps })
    }

    fn act(&self, alpha: &EmbSystem, sigma: &RelMap) -> Result<EmbSystem> {
        check_action(&alpha.arity, sigma)?;
        Ok(Self::reorder(alpha, sigma))
    }

    fn recolor(&self, alpha: &EmbSystem, sigma: &RelMap) -> Result<EmbSystem> {
        if sigma.target() != &alpha.arity || !sigma.is_bijective() {
            return Err(Error::NotInvertible("recoloring needs a bijection onto the arity".into()));
        }
        Ok(Self::reorder(alpha, sigma))
    }

    fn same(&self, a: &EmbSystem, b: &EmbSystem) -> bool {
        if a.arity != b.arity || a.comps.len() != b.comps.len() {
            return false;
        }
        let n = a.dim.max(b.dim).max(a.support()).max(b.support()) + 1;
        same_maps(a.comps.len(), n, |k, u| a.eval(k, u), |k, u| b.eval(k, u))
    }

    fn elements_at(&self, arity: &RelSet, rng: &mut ChaCha8Rng, budget: usize) -> Vec<EmbSystem> {
        if arity.is_empty() {
            return vec![self.point(arity.ambient())];
        }
        (0..budget.max(1)).map(|_| Config::random(rng, arity.clone(), self.dim).chi()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::{check_operad_axioms, AxiomConfig};
    use crate::sets::Flavor;
    use indexmap::IndexMap;

    #[test]
    fn inverse_examples() {
        let e = EmbExpr::Radial { center: vec![0.0], scale: Some(1.0) };
        let u = e.invert(&[1.0 / 3.0]).unwrap();
        assert!((u[0] - 1.0).abs() < 1e-12);
        assert!(e.invert(&[0.6]).is_none());
        assert!(e.invert(&[0.5]).is_none());
    }

    #[test]
    fn chi_images_are_disjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=4 {
            let cfg = Config::random(&mut rng, RelSet::canonical(1, 3, Color::C).unwrap(), n);
            cfg.chi().check_disjoint(&mut rng, 50).unwrap();
        }
    }

    #[test]
    fn degeneration_deletes_components() {
        let op = EmbOperad::new(2);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = RelSet::canonical(0, 3, Color::C).unwrap();
        let alpha = Config::random(&mut rng, a.clone(), 2).chi();
        let sub = RelSet::of(Color::C, &[("1", Color::C), ("3", Color::C)]).unwrap();
        let map: IndexMap<_, _> = sub.labels().map(|l| (l.clone(), l.clone())).collect();
        let sigma = RelMap::new(sub.clone(), a, map, Flavor::Inj).unwrap();
        let d = op.degeneration(&alpha, &sigma).unwrap();
        let want = EmbSystem { arity: sub, dim: 2, comps: vec![alpha.comps[0].clone(), alpha.comps[2].clone()] };
        assert!(op.same(&d, &want));
    }

    #[test]
    fn pad_is_identity_on_complement() {
        let e = EmbExpr::Radial { center: vec![1.0], scale: Some(2.0) };
        let sys = EmbSystem { arity: RelSet::singleton(Color::C), dim: 1, comps: vec![e] };
        let padded = sys.pad(3).unwrap();
        assert_eq!(padded.eval(0, &[0.0, 4.0, -1.0]), vec![1.0, 4.0, -1.0]);
        assert_eq!(padded.support(), 1);
        assert!(sys.pad(0).is_err());
    }

    #[test]
    fn pad_differs_from_chi_of_padded_config() {
        let a = RelSet::canonical(0, 2, Color::C).unwrap();
        let cfg = Config::new(a.clone(), 1, vec![vec![0.0], vec![1.0]]).unwrap();
        let padded = cfg.chi().pad(2).unwrap();
        let lifted = Config::new(a, 2, vec![vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap().chi();
        assert!(!EmbOperad::new(2).same(&padded, &lifted));
    }

    #[test]
    fn axioms_hold() {
        for n in 1..=3 {
            let cfg = AxiomConfig { trials: 60, budget: 4, ..Default::default() };
            let r = check_operad_axioms(&EmbOperad::new(n), &cfg);
            assert!(r.passed(), "{}", r.to_text());
        }
    }
}
