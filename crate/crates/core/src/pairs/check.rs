//! Seeded checker for the six action axioms of a relative operad pair.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::OperadPair;
use crate::error::Result;
use crate::operad::check::{random_arity, random_permutation, ElementCache};
use crate::operad::{positional_map, Operad};
use crate::report::{Check, Report};
use crate::sets::{
    dep_prod, fiber_set, induced_prod_map, nu, prod_of_maps, section_indices, transport_family, Color, Label, RelMap,
    RelSet,
};

#[derive(Debug, Clone)]
pub struct PairConfig {
    pub trials: usize,
    pub max_outer: usize,
    pub max_inner: usize,
    pub budget: usize,
    pub seed: u64,
}

impl Default for PairConfig {
    fn default() -> Self {
        PairConfig { trials: 300, max_outer: 3, max_inner: 3, budget: 16, seed: 0 }
    }
}

type MElem<P> = <<P as OperadPair>::Mult as Operad>::Elem;
type AElem<P> = <<P as OperadPair>::Add as Operad>::Elem;

/// `f ⋉ ⟨β^{a,b^a}⟩ := f·π_{⟨b^a⟩} ⋉ ⟨β^{a,b^a}⟩` for the section with index `idx`.
pub fn ltimes_along<P: OperadPair>(
    pair: &P,
    f: &MElem<P>,
    fam: &[RelSet],
    idx: &[usize],
    betas: &[AElem<P>],
) -> Result<AElem<P>> {
    let a = pair.mult().arity(f).clone();
    let section: Vec<Label> = fam.iter().zip(idx).map(|(b, &j)| b.label(j).clone()).collect();
    let (_, proj) = fiber_set(&a, fam, &section)?;
    pair.ltimes(&pair.act_any(f, &proj)?, betas)
}

/// Map from a one-element set onto `{1_⋆}_⋆`, possibly raising the color.
fn onto_single(source: &RelSet, color: Color) -> Result<RelMap> {
    let one = RelSet::singleton(color);
    let map = source.labels().cloned().zip(one.labels().cloned()).collect();
    RelMap::infer(source.clone(), one, map)
}

enum Axiom {
    Act,
    Distr,
    Unit1,
    Unit2,
    Equiv1,
    Equiv2,
}

impl Axiom {
    fn name(&self) -> &'static str {
        match self {
            Axiom::Act => "action composition",
            Axiom::Distr => "distributivity",
            Axiom::Unit1 => "multiplicative unit",
            Axiom::Unit2 => "additive unit",
            Axiom::Equiv1 => "equivariance (multiplicative)",
            Axiom::Equiv2 => "equivariance (additive)",
        }
    }
}

struct Draw<'p, P: OperadPair> {
    pair: &'p P,
    rng: ChaCha8Rng,
    mults: ElementCache<MElem<P>>,
    adds: ElementCache<AElem<P>>,
    max_inner: usize,
}

impl<P: OperadPair> Draw<'_, P> {
    fn mult_at(&mut self, a: &RelSet) -> Option<MElem<P>> {
        self.mults.pick(self.pair.mult(), a, &mut self.rng)
    }

    fn add_of(&mut self, color: Color) -> Option<AElem<P>> {
        let b = random_arity(&mut self.rng, color, self.max_inner);
        self.adds.pick(self.pair.add(), &b, &mut self.rng)
    }

    fn mult_of(&mut self, color: Color) -> Option<MElem<P>> {
        let b = random_arity(&mut self.rng, color, self.max_inner);
        self.mult_at(&b)
    }

    fn adds_over(&mut self, a: &RelSet) -> Option<Vec<AElem<P>>> {
        a.iter().map(|(_, c)| self.add_of(c)).collect()
    }
}

fn arities<O: Operad>(op: &O, xs: &[O::Elem]) -> Vec<RelSet> {
    xs.iter().map(|x| op.arity(x).clone()).collect()
}

fn run<P: OperadPair>(pair: &P, axiom: &Axiom, cfg: &PairConfig, seed: u64) -> Check {
    let mut d = Draw {
        pair,
        rng: ChaCha8Rng::seed_from_u64(seed),
        mults: ElementCache::new(cfg.budget),
        adds: ElementCache::new(cfg.budget),
        max_inner: cfg.max_inner,
    };
    let (m, p) = (pair.mult(), pair.add());
    let mut check = Check::new(axiom.name());
    for _ in 0..cfg.trials {
        let amb = if d.rng.gen_bool(0.7) { Color::C } else { Color::D };
        let a = random_arity(&mut d.rng, amb, cfg.max_outer);
        let Some(f) = d.mult_at(&a) else { continue };
        match axiom {
            Axiom::Act => {
                let Some(gs) = a.iter().map(|(_, c)| d.mult_of(c)).collect::<Option<Vec<_>>>() else { continue };
                let mut alphas = Vec::new();
                for g in &gs {
                    match d.adds_over(&m.arity(g).clone()) {
                        Some(x) => alphas.push(x),
                        None => break,
                    }
                }
                if alphas.len() != gs.len() {
                    continue;
                }
                let outcome = (|| {
                    let inner = gs.iter().zip(&alphas).map(|(g, al)| pair.ltimes(g, al)).collect::<Result<Vec<_>>>()?;
                    let lhs = pair.ltimes(&f, &inner)?;
                    let rhs = pair.ltimes(&m.compose(&f, &gs)?, &alphas.concat())?;
                    // Π_A Π_{B^a} C and Π_{Σ_A B^a} C enumerate sections in the same order
                    let sigma = positional_map(p.arity(&rhs), p.arity(&lhs))?;
                    Ok(p.same(&p.act(&lhs, &sigma)?, &rhs))
                })();
                check.record_result(outcome, || format!("f={f:?} g={gs:?} α={alphas:?}"));
            }
            Axiom::Distr => {
                let Some(alphas) = d.adds_over(&a) else { continue };
                let bs = arities(p, &alphas);
                let mut betas: Vec<Vec<AElem<P>>> = Vec::new();
                for b in &bs {
                    match d.adds_over(b) {
                        Some(x) => betas.push(x),
                        None => break,
                    }
                }
                if betas.len() != bs.len() {
                    continue;
                }
                let outcome = (|| {
                    let composed =
                        alphas.iter().zip(&betas).map(|(al, be)| p.compose(al, be)).collect::<Result<Vec<_>>>()?;
                    let lhs = pair.ltimes(&f, &composed)?;
                    let outer = pair.ltimes(&f, &alphas)?;
                    let mut inner = Vec::new();
                    for idx in section_indices(&bs) {
                        let chosen: Vec<AElem<P>> = betas.iter().zip(&idx).map(|(row, &j)| row[j].clone()).collect();
                        inner.push(ltimes_along(pair, &f, &bs, &idx, &chosen)?);
                    }
                    let cs: Vec<Vec<RelSet>> = betas.iter().map(|row| arities(p, row)).collect();
                    let rhs = p.act(&p.compose(&outer, &inner)?, &nu(&a, &bs, &cs)?)?;
                    Ok(p.same(&lhs, &rhs))
                })();
                check.record_result(outcome, || format!("f={f:?} α={alphas:?} β={betas:?}"));
            }
            Axiom::Unit1 => {
                let Some(alpha) = d.add_of(amb) else { continue };
                let outcome = (|| {
                    let lhs = pair.ltimes(&m.unit(amb), std::slice::from_ref(&alpha))?;
                    Ok(p.same(&p.relabel_to(&lhs, p.arity(&alpha))?, &alpha))
                })();
                check.record_result(outcome, || format!("α={alpha:?}"));
            }
            Axiom::Unit2 => {
                let outcome = (|| {
                    let units: Vec<AElem<P>> = a.iter().map(|(_, c)| p.unit(c)).collect();
                    let lhs = pair.ltimes(&f, &units)?;
                    let sigma = onto_single(p.arity(&lhs), amb)?;
                    Ok(p.same(&lhs, &p.recolor(&p.unit(amb), &sigma)?))
                })();
                check.record_result(outcome, || format!("f={f:?}"));
            }
            Axiom::Equiv1 => {
                let (sigma, src) = random_permutation(&mut d.rng, &a);
                let Some(alphas) = d.adds_over(&src) else { continue };
                let outcome = (|| {
                    let lhs = pair.ltimes(&m.act(&f, &sigma)?, &alphas)?;
                    let fam = arities(p, &alphas);
                    let moved: Vec<AElem<P>> = a
                        .labels()
                        .map(|t| alphas[src.index_of(sigma.preimage(t).expect("bij")).expect("src")].clone())
                        .collect();
                    debug_assert_eq!(arities(p, &moved), transport_family(&sigma, &fam)?);
                    let rhs = p.act(&pair.ltimes(&f, &moved)?, &induced_prod_map(&sigma, &fam)?)?;
                    Ok(p.same(&lhs, &rhs))
                })();
                check.record_result(outcome, || format!("f={f:?} σ={sigma:?} α={alphas:?}"));
            }
            Axiom::Equiv2 => {
                let Some(alphas) = d.adds_over(&a) else { continue };
                let taus: Vec<RelMap> = alphas.iter().map(|al| random_permutation(&mut d.rng, p.arity(al)).0).collect();
                let outcome = (|| {
                    let moved = alphas.iter().zip(&taus).map(|(al, t)| p.act(al, t)).collect::<Result<Vec<_>>>()?;
                    let lhs = pair.ltimes(&f, &moved)?;
                    let rhs = p.act(&pair.ltimes(&f, &alphas)?, &prod_of_maps(&a, &taus)?)?;
                    debug_assert_eq!(p.arity(&lhs), &dep_prod(&a, &arities(p, &moved))?);
                    Ok(p.same(&lhs, &rhs))
                })();
                check.record_result(outcome, || format!("f={f:?} τ={taus:?} α={alphas:?}"));
            }
        }
    }
    check
}

/// Check the action composition law, distributivity through `ν`, both unit
/// laws and both equivariance laws on seeded instances.
pub fn check_pair_axioms<P: OperadPair>(pair: &P, cfg: &PairConfig) -> Report {
    let axioms = [Axiom::Act, Axiom::Distr, Axiom::Unit1, Axiom::Unit2, Axiom::Equiv1, Axiom::Equiv2];
    let checks: Vec<Check> = axioms
        .par_iter()
        .enumerate()
        .map(|(i, ax)| run(pair, ax, cfg, cfg.seed.wrapping_mul(0x2545_F491).wrapping_add(100 + i as u64)))
        .collect();
    let mut report = Report::new(pair.name());
    for c in checks {
        report.push(c);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairs::{ComPair, SteinerPair};

    #[test]
    fn com_pair_passes() {
        let r = check_pair_axioms(&ComPair::default(), &PairConfig { trials: 400, ..Default::default() });
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn faulty_com_pair_breaks_the_additive_unit() {
        let r = check_pair_axioms(&ComPair { fault: true }, &PairConfig::default());
        let unit = r.check("additive unit").unwrap();
        assert!(!unit.passed());
        assert!(unit.witness.is_some());
    }

    #[test]
    fn steiner_pair_passes() {
        let cfg = PairConfig { trials: 25, max_outer: 2, max_inner: 2, budget: 3, seed: 1 };
        let r = check_pair_axioms(&SteinerPair::new(2), &cfg);
        assert!(r.passed(), "{}", r.to_text());
    }
}
