//! Seeded checker for the relative operad axioms.

use std::collections::HashMap;

use indexmap::IndexMap;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::Operad;
use crate::error::Result;
use crate::report::{Check, Report};
use crate::sets::{induced_sum_map, sum_of_maps, Color, Flavor, Label, RelMap, RelSet};

#[derive(Debug, Clone)]
pub struct AxiomConfig {
    /// Instances drawn per axiom.
    pub trials: usize,
    pub max_outer: usize,
    pub max_inner: usize,
    /// Elements enumerated (or sampled) per arity.
    pub budget: usize,
    pub seed: u64,
}

impl Default for AxiomConfig {
    fn default() -> Self {
        AxiomConfig { trials: 300, max_outer: 3, max_inner: 2, budget: 64, seed: 0 }
    }
}

/// Memoized `elements_at` per arity.
pub struct ElementCache<E> {
    budget: usize,
    map: HashMap<String, Vec<E>>,
}

impl<E: Clone> ElementCache<E> {
    pub fn new(budget: usize) -> Self {
        ElementCache { budget, map: HashMap::new() }
    }

    pub fn pick<O: Operad<Elem = E>>(&mut self, op: &O, arity: &RelSet, rng: &mut ChaCha8Rng) -> Option<E> {
        let key = arity.to_string();
        if !self.map.contains_key(&key) {
            let es = op.elements_at(arity, rng, self.budget);
            self.map.insert(key.clone(), es);
        }
        self.map[&key].choose(rng).cloned()
    }
}

/// A canonical set of the given ambient with at most `max` elements.
pub fn random_arity(rng: &mut ChaCha8Rng, ambient: Color, max: usize) -> RelSet {
    let n = rng.gen_range(0..=max);
    let d = if ambient == Color::D { n } else { rng.gen_range(0..=n) };
    RelSet::canonical(d, n - d, ambient).expect("canonical")
}

/// A random bijection `σ: Ã → a` from a freshly labeled copy `Ã`.
pub fn random_permutation(rng: &mut ChaCha8Rng, a: &RelSet) -> (RelMap, RelSet) {
    let mut perm: Vec<usize> = (0..a.len()).collect();
    perm.shuffle(rng);
    relabeled_injection(a, &perm, Flavor::Bij)
}

/// A random color-preserving injection into `a` from a freshly labeled set.
pub fn random_injection(rng: &mut ChaCha8Rng, a: &RelSet) -> Option<RelMap> {
    let mut perm: Vec<usize> = (0..a.len()).collect();
    perm.shuffle(rng);
    let k = rng.gen_range(0..=a.len());
    perm.truncate(k);
    Some(relabeled_injection(a, &perm, Flavor::Inj).0)
}

fn relabeled_injection(a: &RelSet, picks: &[usize], flavor: Flavor) -> (RelMap, RelSet) {
    let src = RelSet::new(
        a.ambient(),
        picks.iter().enumerate().map(|(k, &p)| (Label::from(format!("s{}", k + 1)), a.color_at(p))),
    )
    .expect("copy of a relative set");
    let map: IndexMap<Label, Label> = src.labels().cloned().zip(picks.iter().map(|&p| a.label(p).clone())).collect();
    (RelMap::new(src.clone(), a.clone(), map, flavor).expect("injection"), src)
}

/// `((a,b),c) ↦ (a,(b,c))` between the two bracketings of a triple sum.
pub fn associator(a: &RelSet, b: &[RelSet], c: &[Vec<RelSet>]) -> Result<RelMap> {
    let mut src = Vec::new();
    let mut map = IndexMap::new();
    for (i, la) in a.labels().enumerate() {
        for (j, (lb, _)) in b[i].iter().enumerate() {
            for (lc, col) in c[i][j].iter() {
                let l = Label::pair(&Label::pair(la, lb), lc);
                src.push((l.clone(), col));
                map.insert(l, Label::pair(la, &Label::pair(lb, lc)));
            }
        }
    }
    let source = RelSet::new(a.ambient(), src)?;
    let tgt: Vec<(Label, Color)> = map.values().cloned().zip(source.iter().map(|(_, c)| c)).collect();
    let target = RelSet::new(a.ambient(), tgt)?;
    RelMap::new(source, target, map, Flavor::Bij)
}

/// `(x,1) ↦ x` or `(1,x) ↦ x` collapsing a sum over singletons.
pub fn collapse_units(composite: &RelSet, original: &RelSet) -> Result<RelMap> {
    let map = composite.labels().cloned().zip(original.labels().cloned()).collect();
    RelMap::new(composite.clone(), original.clone(), map, Flavor::Bij)
}

enum Axiom {
    Assoc,
    LeftUnit,
    RightUnit,
    Equiv1,
    Equiv2,
    ActFunctor,
    DegenFunctor,
    Nullary,
}

impl Axiom {
    fn name(&self) -> &'static str {
        match self {
            Axiom::Assoc => "associativity",
            Axiom::LeftUnit => "left unit",
            Axiom::RightUnit => "right unit",
            Axiom::Equiv1 => "equivariance (outer)",
            Axiom::Equiv2 => "equivariance (inner)",
            Axiom::ActFunctor => "action functoriality",
            Axiom::DegenFunctor => "degeneration functoriality",
            Axiom::Nullary => "nullary point",
        }
    }
}

fn draw<O: Operad>(
    op: &O,
    cache: &mut ElementCache<O::Elem>,
    rng: &mut ChaCha8Rng,
    color: Color,
    max: usize,
) -> Option<O::Elem> {
    let a = random_arity(rng, color, max);
    cache.pick(op, &a, rng)
}

fn draw_family<O: Operad>(
    op: &O,
    cache: &mut ElementCache<O::Elem>,
    rng: &mut ChaCha8Rng,
    over: &RelSet,
    max: usize,
) -> Option<Vec<O::Elem>> {
    over.iter().map(|(_, c)| draw(op, cache, rng, c, max)).collect()
}

fn run_axiom<O: Operad>(op: &O, axiom: &Axiom, cfg: &AxiomConfig, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cache = ElementCache::new(cfg.budget);
    let mut check = Check::new(axiom.name());
    if let Axiom::Nullary = axiom {
        for color in Color::ALL {
            let pt = op.point(color);
            for e in op.elements_at(&RelSet::empty(color), &mut rng, cfg.budget) {
                check.record(op.same(&e, &pt), || format!("{e:?} differs from the point"));
            }
        }
        return check;
    }
    for _ in 0..cfg.trials {
        let amb = if rng.gen_bool(0.7) { Color::C } else { Color::D };
        let Some(alpha) = draw(op, &mut cache, &mut rng, amb, cfg.max_outer) else { continue };
        let a = op.arity(&alpha).clone();
        match axiom {
            Axiom::Assoc => {
                let Some(betas) = draw_family(op, &mut cache, &mut rng, &a, cfg.max_inner) else { continue };
                let bs: Vec<RelSet> = betas.iter().map(|b| op.arity(b).clone()).collect();
                let mut gammas = Vec::new();
                let mut ok = true;
                for b in &bs {
                    match draw_family(op, &mut cache, &mut rng, b, cfg.max_inner) {
                        Some(g) => gammas.push(g),
                        None => ok = false,
                    }
                }
                if !ok {
                    continue;
                }
                let outcome = (|| {
                    let cs: Vec<Vec<RelSet>> =
                        gammas.iter().map(|gs| gs.iter().map(|g| op.arity(g).clone()).collect()).collect();
                    let lhs = op.compose(&op.compose(&alpha, &betas)?, &gammas.concat())?;
                    let inner = betas.iter().zip(&gammas).map(|(b, g)| op.compose(b, g)).collect::<Result<Vec<_>>>()?;
                    let rhs = op.compose(&alpha, &inner)?;
                    let assoc = associator(&a, &bs, &cs)?;
                    Ok(op.same(&lhs, &op.act(&rhs, &assoc)?))
                })();
                check.record_result(outcome, || format!("α={alpha:?} β={betas:?} γ={gammas:?}"));
            }
            Axiom::LeftUnit => {
                let outcome = (|| {
                    let lhs = op.compose(&op.unit(amb), std::slice::from_ref(&alpha))?;
                    let sigma = collapse_units(op.arity(&lhs), &a)?;
                    Ok(op.same(&lhs, &op.act(&alpha, &sigma)?))
                })();
                check.record_result(outcome, || format!("α={alpha:?}"));
            }
            Axiom::RightUnit => {
                let outcome = (|| {
                    let units: Vec<O::Elem> = a.iter().map(|(_, c)| op.unit(c)).collect();
                    let lhs = op.compose(&alpha, &units)?;
                    let sigma = collapse_units(op.arity(&lhs), &a)?;
                    Ok(op.same(&lhs, &op.act(&alpha, &sigma)?))
                })();
                check.record_result(outcome, || format!("α={alpha:?}"));
            }
            Axiom::Equiv1 => {
                let (sigma, src) = random_permutation(&mut rng, &a);
                let Some(betas) = draw_family(op, &mut cache, &mut rng, &src, cfg.max_inner) else { continue };
                let outcome = (|| {
                    let lhs = op.compose(&op.act(&alpha, &sigma)?, &betas)?;
                    let moved: Vec<O::Elem> = a
                        .labels()
                        .map(|t| betas[src.index_of(sigma.preimage(t).expect("bij")).expect("src")].clone())
                        .collect();
                    let fam: Vec<RelSet> = betas.iter().map(|b| op.arity(b).clone()).collect();
                    let rhs = op.act(&op.compose(&alpha, &moved)?, &induced_sum_map(&sigma, &fam)?)?;
                    Ok(op.same(&lhs, &rhs))
                })();
                check.record_result(outcome, || format!("α={alpha:?} σ={sigma:?} β={betas:?}"));
            }
            Axiom::Equiv2 => {
                let Some(betas) = draw_family(op, &mut cache, &mut rng, &a, cfg.max_inner) else { continue };
                let taus: Vec<RelMap> = betas.iter().map(|b| random_permutation(&mut rng, op.arity(b)).0).collect();
                let outcome = (|| {
                    let moved = betas.iter().zip(&taus).map(|(b, t)| op.act(b, t)).collect::<Result<Vec<_>>>()?;
                    let lhs = op.compose(&alpha, &moved)?;
                    let rhs = op.act(&op.compose(&alpha, &betas)?, &sum_of_maps(&a, &taus)?)?;
                    Ok(op.same(&lhs, &rhs))
                })();
                check.record_result(outcome, || format!("α={alpha:?} τ={taus:?} β={betas:?}"));
            }
            Axiom::ActFunctor => {
                let (s1, a1) = random_permutation(&mut rng, &a);
                let (s2, _) = random_permutation(&mut rng, &a1);
                let outcome = (|| {
                    let step = op.act(&op.act(&alpha, &s1)?, &s2)?;
                    let once = op.act(&alpha, &s1.after(&s2)?)?;
                    let id = op.act(&alpha, &RelMap::identity(&a))?;
                    Ok(op.same(&step, &once) && op.same(&id, &alpha))
                })();
                check.record_result(outcome, || format!("α={alpha:?} σ={s1:?} σ'={s2:?}"));
            }
            Axiom::DegenFunctor => {
                let Some(outer) = random_injection(&mut rng, &a) else { continue };
                let Some(inner) = random_injection(&mut rng, outer.source()) else { continue };
                let outcome = (|| {
                    let step = op.degeneration(&op.degeneration(&alpha, &outer)?, &inner)?;
                    let once = op.degeneration(&alpha, &with_flavor(outer.after(&inner)?, Flavor::Inj)?)?;
                    let mut ok = op.same(&step, &once);
                    if outer.source().len() == a.len() {
                        let as_bij = with_flavor(outer.clone(), Flavor::Bij)?;
                        ok &= op.same(&op.degeneration(&alpha, &outer)?, &op.act(&alpha, &as_bij)?);
                    }
                    Ok(ok)
                })();
                check.record_result(outcome, || format!("α={alpha:?} σ={outer:?} σ'={inner:?}"));
            }
            Axiom::Nullary => unreachable!(),
        }
    }
    check
}

fn with_flavor(m: RelMap, flavor: Flavor) -> Result<RelMap> {
    RelMap::new(m.source().clone(), m.target().clone(), m.assignment().clone(), flavor)
}

/// Check associativity, both unit laws, both equivariance laws, action and
/// degeneration functoriality, and that the nullary part is a point.
pub fn check_operad_axioms<O: Operad>(op: &O, cfg: &AxiomConfig) -> Report {
    let axioms = [
        Axiom::Assoc,
        Axiom::LeftUnit,
        Axiom::RightUnit,
        Axiom::Equiv1,
        Axiom::Equiv2,
        Axiom::ActFunctor,
        Axiom::DegenFunctor,
        Axiom::Nullary,
    ];
    let checks: Vec<Check> = axioms
        .par_iter()
        .enumerate()
        .map(|(i, ax)| run_axiom(op, ax, cfg, cfg.seed.wrapping_mul(0x9E37_79B9).wrapping_add(i as u64)))
        .collect();
    let mut report = Report::new(op.name());
    for c in checks {
        report.push(c);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::{Com, EndOperad, FreeOperad, PointedPair, Signature};

    #[test]
    fn com_passes() {
        let r = check_operad_axioms(&Com, &AxiomConfig::default());
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn free_passes_and_fault_is_caught() {
        let op = FreeOperad::new(Signature::two_generators());
        let cfg = AxiomConfig { trials: 150, ..Default::default() };
        let r = check_operad_axioms(&op, &cfg);
        assert!(r.passed(), "{}", r.to_text());
        let bad = check_operad_axioms(&op.clone().with_fault(), &cfg);
        assert!(!bad.passed());
        assert!(bad.failures().any(|c| c.witness.is_some()));
    }

    #[test]
    fn end_passes_and_fault_is_caught() {
        let op = EndOperad::new(PointedPair::of_sizes(2, 3));
        let cfg = AxiomConfig { trials: 100, ..Default::default() };
        let r = check_operad_axioms(&op, &cfg);
        assert!(r.passed(), "{}", r.to_text());
        let mut bad = op.clone();
        bad.fault = true;
        assert!(!check_operad_axioms(&bad, &cfg).passed());
    }
}
