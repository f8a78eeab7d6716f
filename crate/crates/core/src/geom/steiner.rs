//! Steiner systems `𝓗→_U`: paths of distance non-increasing embeddings
//! ending at the identity, with `Φ_U`, `Ψ` and `Φ̄_U`.

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::Config;
use super::emb::{radial, same_maps, EmbExpr, EmbSystem};
use super::iso::{block_action, IsoElem, IsoExpr};
use super::{add, close_vec, decimal, dist, norm, sample_point, sample_time, scale, sub, TOLERANCE};
use crate::error::{Error, Result};
use crate::operad::{check_action, check_inner, Operad};
use crate::sets::{dep_prod, dep_sum, Color, RelMap, RelSet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SteinExpr {
    Id,
    /// `(t,u) ↦ (1−t)(χ x)_a(u) + t u`.
    Path {
        #[serde(with = "decimal")]
        center: Vec<f64>,
        scale: Option<f64>,
    },
    /// Composite at equal times, outermost first.
    Chain {
        parts: Vec<SteinExpr>,
    },
    /// `(t,v) ↦ Σ f_a α^a(t, f_aᵀ v) + (v − Σ f_a f_aᵀ v)`.
    Act {
        blocks: Vec<(IsoExpr, SteinExpr)>,
    },
}

impl SteinExpr {
    pub fn eval(&self, t: f64, u: &[f64]) -> Vec<f64> {
        match self {
            SteinExpr::Id => u.to_vec(),
            SteinExpr::Path { center, scale: m } => {
                let n = center.len();
                let head: Vec<f64> = (0..n).map(|i| super::at(u, i)).collect();
                let moved = radial(center, *m, &head);
                let mixed = add(&scale(&moved, 1.0 - t), &scale(&head, t));
                let mut out: Vec<f64> = u.to_vec();
                if out.len() < n {
                    out.resize(n, 0.0);
                }
                out[..n].copy_from_slice(&mixed[..n]);
                out
            }
            SteinExpr::Chain { parts } => parts.iter().rev().fold(u.to_vec(), |acc, p| p.eval(t, &acc)),
            SteinExpr::Act { blocks } => {
                let vals: Vec<(&IsoExpr, Vec<f64>)> =
                    blocks.iter().map(|(f, a)| (f, a.eval(t, &f.adjoint(u)))).collect();
                block_action(&vals, u)
            }
        }
    }

    /// Preimage of `v` under the embedding at time `t`, if any.
    pub fn invert(&self, t: f64, v: &[f64]) -> Option<Vec<f64>> {
        match self {
            SteinExpr::Id => Some(v.to_vec()),
            SteinExpr::Path { center, scale: m } => {
                let n = center.len();
                let head: Vec<f64> = (0..n).map(|i| super::at(v, i)).collect();
                let w = sub(&head, &scale(center, 1.0 - t));
                let u = match m {
                    None => w,
                    Some(m) => {
                        // ‖w‖ = (1−t) m r/(m+2r) + t r, solved for r
                        let s = norm(&w);
                        if s == 0.0 {
                            w
                        } else if t == 0.0 {
                            if s >= m / 2.0 {
                                return None;
                            }
                            scale(&w, m / (m - 2.0 * s))
                        } else {
                            let b = m - 2.0 * s;
                            let r = (-b + (b * b + 8.0 * t * s * m).sqrt()) / (4.0 * t);
                            scale(&w, r / s)
                        }
                    }
                };
                let mut out: Vec<f64> = v.to_vec();
                if out.len() < n {
                    out.resize(n, 0.0);
                }
                out[..n].copy_from_slice(&u[..n]);
                Some(out)
            }
            SteinExpr::Chain { parts } => parts.iter().try_fold(v.to_vec(), |acc, p| p.invert(t, &acc)),
            SteinExpr::Act { blocks } => {
                let mut vals = Vec::new();
                for (f, a) in blocks {
                    vals.push((f, a.invert(t, &f.adjoint(v))?));
                }
                Some(block_action(&vals, v))
            }
        }
    }

    /// `Ψ` on one component: the time-0 embedding.
    pub fn psi(&self) -> EmbExpr {
        match self {
            SteinExpr::Id => EmbExpr::Id,
            SteinExpr::Path { center, scale } => EmbExpr::Radial { center: center.clone(), scale: *scale },
            SteinExpr::Chain { parts } => EmbExpr::Chain { parts: parts.iter().map(SteinExpr::psi).collect() },
            SteinExpr::Act { blocks } => {
                EmbExpr::Conj { blocks: blocks.iter().map(|(f, a)| (f.clone(), a.psi())).collect() }
            }
        }
    }

    pub fn support(&self) -> usize {
        match self {
            SteinExpr::Id => 0,
            SteinExpr::Path { center, .. } => center.len(),
            SteinExpr::Chain { parts } => parts.iter().map(SteinExpr::support).max().unwrap_or(0),
            SteinExpr::Act { blocks } => blocks
                .iter()
                .map(|(f, a)| match a.support() {
                    0 => 0,
                    s => f.image_support(s),
                })
                .max()
                .unwrap_or(0),
        }
    }

    pub fn then_outer(inner: &SteinExpr, outer: &SteinExpr) -> SteinExpr {
        let mut parts = Vec::new();
        for e in [outer, inner] {
            match e {
                SteinExpr::Id => {}
                SteinExpr::Chain { parts: p } => parts.extend(p.iter().cloned()),
                other => parts.push(other.clone()),
            }
        }
        match parts.len() {
            0 => SteinExpr::Id,
            1 => parts.pop().expect("one part"),
            _ => SteinExpr::Chain { parts },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteinerSystem {
    pub arity: RelSet,
    pub dim: usize,
    pub comps: Vec<SteinExpr>,
}

impl SteinerSystem {
    pub fn support(&self) -> usize {
        self.comps.iter().map(SteinExpr::support).max().unwrap_or(0)
    }

    pub fn is_supported_in(&self, n: usize) -> bool {
        self.support() <= n
    }

    /// `ι^U_V`.
    pub fn pad(&self, n: usize) -> Result<SteinerSystem> {
        if n < self.dim {
            return Err(Error::DimMismatch(format!("cannot pad dimension {} down to {n}", self.dim)));
        }
        Ok(SteinerSystem { dim: n, ..self.clone() })
    }

    pub fn eval(&self, a: usize, t: f64, u: &[f64]) -> Vec<f64> {
        self.comps[a].eval(t, u)
    }

    fn probe_dim(&self) -> usize {
        self.dim.max(self.support()).max(1)
    }

    /// Endpoint law, 1-Lipschitz property and disjointness of the time-0 slice at samples.
    pub fn check_invariants(&self, rng: &mut ChaCha8Rng, samples: usize) -> std::result::Result<(), String> {
        let n = self.probe_dim();
        for k in 0..samples {
            let u = sample_point(rng, n, 3.0);
            let v = sample_point(rng, n, 3.0);
            let t = sample_time(rng, k);
            for (a, c) in self.comps.iter().enumerate() {
                if !close_vec(&c.eval(1.0, &u), &u, TOLERANCE) {
                    return Err(format!("component {a} moves {u:?} at t=1"));
                }
                let d = dist(&c.eval(t, &u), &c.eval(t, &v));
                if d > dist(&u, &v) * (1.0 + TOLERANCE) {
                    return Err(format!("component {a} stretches {u:?},{v:?} at t={t}"));
                }
            }
        }
        psi(self).check_disjoint(rng, samples / 4 + 1)
    }
}

/// `Φ_U x = ⟨(t,u) ↦ (1−t)(χ_U x)_a u + t u⟩`.
pub fn steiner_from_config(cfg: &Config) -> SteinerSystem {
    let m = cfg.min_distance();
    let comps = cfg.points.iter().map(|x| SteinExpr::Path { center: x.clone(), scale: m }).collect();
    SteinerSystem { arity: cfg.arity.clone(), dim: cfg.dim, comps }
}

/// `Ψ α = ⟨u ↦ α_a(0,u)⟩`.
pub fn psi(s: &SteinerSystem) -> EmbSystem {
    EmbSystem { arity: s.arity.clone(), dim: s.dim, comps: s.comps.iter().map(SteinExpr::psi).collect() }
}

/// `Φ̄_U α = ⟨α_a(0,0)⟩`.
pub fn phibar(s: &SteinerSystem) -> Result<Config> {
    let n = s.probe_dim();
    let zero = vec![0.0; n];
    let points = s
        .comps
        .iter()
        .map(|c| {
            let mut p = c.eval(0.0, &zero);
            p.resize(n, 0.0);
            p
        })
        .collect();
    Config::new(s.arity.clone(), n, points)
}

/// `f⋉⟨α^a⟩`: for each section `⟨b^a⟩` of `Π_A B^a` the component
/// `(t,v) ↦ Σ f_a α^a_{b^a}(t, f_aᵀ v) + (v − Σ f_a f_aᵀ v)`.
pub fn isometry_act(f: &IsoElem, alphas: &[SteinerSystem]) -> Result<SteinerSystem> {
    if alphas.len() != f.arity.len() {
        return Err(Error::ShapeMismatch("one Steiner system per isometry block".into()));
    }
    let fam: Vec<RelSet> = alphas.iter().map(|a| a.arity.clone()).collect();
    let prod = dep_prod(&f.arity, &fam)?;
    let comps = crate::sets::section_indices(&fam)
        .into_iter()
        .map(|sec| SteinExpr::Act {
            blocks: sec.iter().enumerate().map(|(a, &b)| (f.blocks[a].clone(), alphas[a].comps[b].clone())).collect(),
        })
        .collect();
    let mut out = SteinerSystem { arity: prod, dim: 0, comps };
    out.dim = out.support();
    Ok(out)
}

/// `𝓗→_U` for `U = ℝ^dim`; random elements are `Φ_U`-images.
#[derive(Debug, Clone)]
pub struct SteinerOperad {
    pub dim: usize,
}

impl SteinerOperad {
    pub fn new(dim: usize) -> Self {
        SteinerOperad { dim }
    }

    fn reorder(alpha: &SteinerSystem, sigma: &RelMap) -> SteinerSystem {
        let comps = sigma
            .source()
            .labels()
            .map(|s| alpha.comps[alpha.arity.index_of(sigma.apply(s).expect("total")).expect("in arity")].clone())
            .collect();
        SteinerSystem { arity: sigma.source().clone(), dim: alpha.dim, comps }
    }
}

impl Operad for SteinerOperad {
    type Elem = SteinerSystem;

    fn name(&self) -> String {
        format!("H(R^{})", self.dim)
    }

    fn arity<'a>(&self, alpha: &'a SteinerSystem) -> &'a RelSet {
        &alpha.arity
    }

    fn unit(&self, color: Color) -> SteinerSystem {
        SteinerSystem { arity: RelSet::singleton(color), dim: 0, comps: vec![SteinExpr::Id] }
    }

    fn point(&self, color: Color) -> SteinerSystem {
        SteinerSystem { arity: RelSet::empty(color), dim: 0, comps: vec![] }
    }

    fn compose(&self, alpha: &SteinerSystem, inner: &[SteinerSystem]) -> Result<SteinerSystem> {
        check_inner(&alpha.arity, &inner.iter().map(|b| &b.arity).collect::<Vec<_>>())?;
        let fam: Vec<RelSet> = inner.iter().map(|b| b.arity.clone()).collect();
        let comps = alpha
            .comps
            .iter()
            .zip(inner)
            .flat_map(|(a, b)| b.comps.iter().map(move |c| SteinExpr::then_outer(c, a)))
            .collect();
        let dim = inner.iter().map(|b| b.dim).fold(alpha.dim, usize::max);
        Ok(SteinerSystem { arity: dep_sum(&alpha.arity, &fam)?, dim, comps })
    }

    fn act(&self, alpha: &SteinerSystem, sigma: &RelMap) -> Result<SteinerSystem> {
        check_action(&alpha.arity, sigma)?;
        Ok(Self::reorder(alpha, sigma))
    }

    fn recolor(&self, alpha: &SteinerSystem, sigma: &RelMap) -> Result<SteinerSystem> {
        if sigma.target() != &alpha.arity || !sigma.is_bijective() {
            return Err(Error::NotInvertible("recoloring needs a bijection onto the arity".into()));
        }
        Ok(Self::reorder(alpha, sigma))
    }

    fn same(&self, a: &SteinerSystem, b: &SteinerSystem) -> bool {
        if a.arity != b.arity || a.comps.len() != b.comps.len() {
            return false;
        }
        let n = a.probe_dim().max(b.probe_dim()) + 1;
        // time rides along as an extra leading coordinate in [0,1]
        let split = |u: &[f64]| ((u[0] + 2.0) / 4.0, u[1..].to_vec());
        same_maps(
            a.comps.len(),
            n + 1,
            |k, u| {
                let (t, x) = split(u);
                a.eval(k, t, &x)
            },
            |k, u| {
                let (t, x) = split(u);
                b.eval(k, t, &x)
            },
        )
    }

    fn elements_at(&self, arity: &RelSet, rng: &mut ChaCha8Rng, budget: usize) -> Vec<SteinerSystem> {
        if arity.is_empty() {
            return vec![self.point(arity.ambient())];
        }
        (0..budget.max(1)).map(|_| steiner_from_config(&Config::random(rng, arity.clone(), self.dim))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::IsometryOperad;
    use crate::operad::{check_operad_axioms, AxiomConfig};
    use rand::SeedableRng;

    #[test]
    fn phibar_after_phi_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in 1..=4 {
            let cfg = Config::random(&mut rng, RelSet::canonical(1, 2, Color::C).unwrap(), n);
            assert_eq!(phibar(&steiner_from_config(&cfg)).unwrap(), cfg);
        }
    }

    #[test]
    fn psi_after_phi_is_chi() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let cfg = Config::random(&mut rng, RelSet::canonical(0, 3, Color::C).unwrap(), 2);
        assert_eq!(psi(&steiner_from_config(&cfg)), cfg.chi());
    }

    #[test]
    fn invariants_of_phi_images_and_actions() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let iso = IsometryOperad::default();
        for n in 1..=3 {
            let a = RelSet::canonical(0, 2, Color::C).unwrap();
            let s = steiner_from_config(&Config::random(&mut rng, a.clone(), n));
            s.check_invariants(&mut rng, 100).unwrap();
            let f = iso.random(&mut rng, &a);
            let t = steiner_from_config(&Config::random(&mut rng, RelSet::canonical(0, 3, Color::C).unwrap(), n));
            isometry_act(&f, &[s, t]).unwrap().check_invariants(&mut rng, 100).unwrap();
        }
    }

    #[test]
    fn inverse_at_all_times() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = steiner_from_config(&Config::random(&mut rng, RelSet::canonical(0, 3, Color::C).unwrap(), 2));
        for k in 0..50 {
            let t = sample_time(&mut rng, k);
            let u = sample_point(&mut rng, 2, 3.0);
            for c in &s.comps {
                let back = c.invert(t, &c.eval(t, &u)).unwrap();
                assert!(close_vec(&back, &u, 1e-9), "{back:?} {u:?} t={t}");
            }
        }
    }

    #[test]
    fn endpoint_survives_composition() {
        let op = SteinerOperad::new(2);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let a = RelSet::canonical(0, 2, Color::C).unwrap();
        let alpha = op.elements_at(&a, &mut rng, 1).remove(0);
        let inner: Vec<_> = (0..2).map(|_| op.elements_at(&a, &mut rng, 1).remove(0)).collect();
        let c = op.compose(&alpha, &inner).unwrap();
        let u = vec![0.3, -1.7];
        for k in 0..4 {
            assert_eq!(c.eval(k, 1.0, &u), u);
        }
    }

    #[test]
    fn axioms_hold() {
        let cfg = AxiomConfig { trials: 60, budget: 4, ..Default::default() };
        let r = check_operad_axioms(&SteinerOperad::new(2), &cfg);
        assert!(r.passed(), "{}", r.to_text());
    }
}
