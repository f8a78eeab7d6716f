//! The monad `P` induced by a relative operad, on finite models.
//!
//! An element `[α, ⟨x^a⟩]` of `PX` is a class under the coend relation
//! over injections: degenerating `α` corresponds to inserting basepoints
//! among the arguments. Classes are compared by first dropping basepoint
//! arguments and then searching for a relabeling bijection.

use std::fmt;

use indexmap::IndexMap;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Operad;
use crate::error::{Error, Result};
use crate::report::{Check, Report};
use crate::sets::{enumerate_hom_bounded, Color, Flavor, RelMap, RelSet};

/// Values with a distinguished basepoint.
pub trait Pointed: Clone + fmt::Debug + Send + Sync {
    fn is_basepoint(&self) -> bool;
}

/// A representative `[α, ⟨x^a⟩]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonadElem<E, X> {
    pub op: E,
    pub args: Vec<X>,
}

impl<E: Clone + fmt::Debug + Send + Sync, X: Pointed> Pointed for MonadElem<E, X> {
    fn is_basepoint(&self) -> bool {
        self.args.iter().all(Pointed::is_basepoint)
    }
}

/// Largest arity searched for relabeling bijections.
pub const CLASS_BOUND: usize = 7;

/// Drop basepoint arguments by degenerating the operation.
pub fn normalize<O: Operad, X: Pointed>(op: &O, m: &MonadElem<O::Elem, X>) -> Result<MonadElem<O::Elem, X>> {
    let a = op.arity(&m.op);
    if m.args.len() != a.len() {
        return Err(Error::ShapeMismatch("one argument per input required".into()));
    }
    let keep: Vec<usize> = (0..a.len()).filter(|&i| !m.args[i].is_basepoint()).collect();
    if keep.len() == a.len() {
        return Ok(m.clone());
    }
    let sub = RelSet::new(a.ambient(), keep.iter().map(|&i| (a.label(i).clone(), a.color_at(i))))?;
    let map: IndexMap<_, _> = sub.labels().map(|l| (l.clone(), l.clone())).collect();
    let sigma = RelMap::new(sub, a.clone(), map, Flavor::Inj)?;
    Ok(MonadElem { op: op.degeneration(&m.op, &sigma)?, args: keep.iter().map(|&i| m.args[i].clone()).collect() })
}

/// Whether two representatives define the same class.
pub fn equivalent<O: Operad, X: Pointed>(
    op: &O,
    m1: &MonadElem<O::Elem, X>,
    m2: &MonadElem<O::Elem, X>,
    eq: &dyn Fn(&X, &X) -> bool,
) -> Result<bool> {
    let n1 = normalize(op, m1)?;
    let n2 = normalize(op, m2)?;
    let (a1, a2) = (op.arity(&n1.op), op.arity(&n2.op));
    if !a1.is_isomorphic(a2) {
        return Ok(false);
    }
    for sigma in enumerate_hom_bounded(a1, a2, Flavor::Bij, CLASS_BOUND)? {
        let args_match = a1.labels().enumerate().all(|(i, l)| {
            let j = a2.index_of(sigma.apply(l).expect("total")).expect("target");
            eq(&n1.args[i], &n2.args[j])
        });
        if args_match && op.same(&op.act(&n2.op, &sigma)?, &n1.op) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `η x = [𝐢𝐝, x]`.
pub fn eta<O: Operad, X>(op: &O, x: X, color: Color) -> MonadElem<O::Elem, X> {
    MonadElem { op: op.unit(color), args: vec![x] }
}

/// `μ[α, ⟨[β^a, ⟨x^{a,b}⟩]⟩] = [α⟨β^a⟩, ⟨x^{a,b}⟩]`.
pub fn mu<O: Operad, X: Clone>(
    op: &O,
    mm: &MonadElem<O::Elem, MonadElem<O::Elem, X>>,
) -> Result<MonadElem<O::Elem, X>> {
    let inner: Vec<O::Elem> = mm.args.iter().map(|m| m.op.clone()).collect();
    Ok(MonadElem {
        op: op.compose(&mm.op, &inner)?,
        args: mm.args.iter().flat_map(|m| m.args.iter().cloned()).collect(),
    })
}

/// Non-basepoint classes of `PX_⋆` with arity at most `max_arity`.
pub fn enumerate_classes<O: Operad, X: Pointed + PartialEq>(
    op: &O,
    values_d: &[X],
    values_c: &[X],
    ambient: Color,
    max_arity: usize,
    budget: usize,
    seed: u64,
) -> Result<Vec<MonadElem<O::Elem, X>>> {
    if max_arity > CLASS_BOUND {
        return Err(Error::SizeBound { bound: CLASS_BOUND, size: max_arity });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut classes: Vec<MonadElem<O::Elem, X>> = Vec::new();
    let eq = |x: &X, y: &X| x == y;
    for n in 0..=max_arity {
        for d in 0..=n {
            let c = n - d;
            if ambient == Color::D && c > 0 {
                continue;
            }
            let a = RelSet::canonical(d, c, ambient)?;
            let pools: Vec<&[X]> = a.iter().map(|(_, col)| if col == Color::D { values_d } else { values_c }).collect();
            for alpha in op.elements_at(&a, &mut rng, budget) {
                for args in tuples(&pools) {
                    let cand = MonadElem { op: alpha.clone(), args };
                    let mut fresh = true;
                    for k in &classes {
                        if equivalent(op, k, &cand, &eq)? {
                            fresh = false;
                            break;
                        }
                    }
                    if fresh {
                        classes.push(cand);
                    }
                }
            }
        }
    }
    Ok(classes)
}

fn tuples<X: Clone>(pools: &[&[X]]) -> Vec<Vec<X>> {
    let mut out = vec![vec![]];
    for p in pools {
        let mut next = Vec::new();
        for prefix in &out {
            for x in p.iter() {
                let mut t: Vec<X> = prefix.clone();
                t.push(x.clone());
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// Number of multisets of size at most `k` drawn from `n` kinds.
pub fn multiset_count(n: usize, k: usize) -> usize {
    // Σ_{j≤k} C(n+j-1, j) = C(n+k, k)
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 1..=k as u128 {
        num *= n as u128 + i;
        den *= i;
    }
    (num / den) as usize
}

/// Check the monad laws on seeded samples of `PX`, `PPX` and `PPPX`.
pub fn check_monad_laws<O: Operad, X: Pointed + PartialEq>(
    op: &O,
    sample: &dyn Fn(Color, &mut ChaCha8Rng) -> X,
    trials: usize,
    seed: u64,
) -> Report {
    use super::check::{random_arity, ElementCache};
    use rand::Rng;

    let mut report = Report::new(format!("monad of {}", op.name()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cache = ElementCache::new(48);
    let eq = |x: &X, y: &X| x == y;
    let mut left = Check::new("mu after eta_P");
    let mut right = Check::new("mu after P eta");
    let mut assoc = Check::new("mu associativity");

    let draw = |rng: &mut ChaCha8Rng, cache: &mut ElementCache<O::Elem>, color: Color, max: usize| {
        let a = random_arity(rng, color, max);
        cache.pick(op, &a, rng).map(|e| (a, e))
    };

    for _ in 0..trials {
        let amb = if rng.gen_bool(0.7) { Color::C } else { Color::D };
        let Some((a, alpha)) = draw(&mut rng, &mut cache, amb, 3) else { continue };
        let args: Vec<X> = a.iter().map(|(_, c)| sample(c, &mut rng)).collect();
        let m = MonadElem { op: alpha.clone(), args: args.clone() };

        let wrapped = MonadElem { op: op.unit(amb), args: vec![m.clone()] };
        let outcome = mu(op, &wrapped).and_then(|r| equivalent(op, &r, &m, &eq));
        left.record_result(outcome, || format!("{m:?}"));

        let lifted = MonadElem {
            op: alpha.clone(),
            args: a.iter().zip(&args).map(|((_, c), x)| eta(op, x.clone(), c)).collect(),
        };
        let outcome = mu(op, &lifted).and_then(|r| equivalent(op, &r, &m, &eq));
        right.record_result(outcome, || format!("{m:?}"));

        // PPPX element [α, ⟨[β^a, ⟨[γ^{a,b}, x]⟩]⟩]
        let mut middle = Vec::new();
        let mut ok = true;
        for (_, c) in a.iter() {
            let Some((b, beta)) = draw(&mut rng, &mut cache, c, 2) else {
                ok = false;
                break;
            };
            let mut inner = Vec::new();
            for (_, cb) in b.iter() {
                let Some((g, gamma)) = draw(&mut rng, &mut cache, cb, 2) else {
                    ok = false;
                    break;
                };
                let xs: Vec<X> = g.iter().map(|(_, cg)| sample(cg, &mut rng)).collect();
                inner.push(MonadElem { op: gamma, args: xs });
            }
            middle.push(MonadElem { op: beta, args: inner });
        }
        if !ok {
            continue;
        }
        let ppp = MonadElem { op: alpha, args: middle };
        let outcome = (|| {
            let flat_outer = MonadElem {
                op: op.compose(&ppp.op, &ppp.args.iter().map(|m| m.op.clone()).collect::<Vec<_>>())?,
                args: ppp.args.iter().flat_map(|m| m.args.iter().cloned()).collect(),
            };
            let lhs = mu(op, &flat_outer)?;
            let inner_mu =
                MonadElem { op: ppp.op.clone(), args: ppp.args.iter().map(|m| mu(op, m)).collect::<Result<Vec<_>>>()? };
            let rhs = mu(op, &inner_mu)?;
            equivalent(op, &lhs, &rhs, &eq)
        })();
        assoc.record_result(outcome, || format!("{ppp:?}"));
    }
    report.push(left);
    report.push(right);
    report.push(assoc);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::endo::Pt;
    use crate::operad::Com;

    #[test]
    fn com_classes_are_multisets() {
        let vd = vec![Pt(1)];
        let vc = vec![Pt(1)];
        for k in 0..=4 {
            let cls = enumerate_classes(&Com, &vd, &vc, Color::C, k, 16, 0).unwrap();
            assert_eq!(cls.len(), multiset_count(2, k));
            let cls = enumerate_classes(&Com, &vd, &vc, Color::D, k, 16, 0).unwrap();
            assert_eq!(cls.len(), multiset_count(1, k));
        }
    }

    #[test]
    fn basepoint_arguments_are_dropped() {
        let a = RelSet::canonical(0, 2, Color::C).unwrap();
        let m = MonadElem { op: a, args: vec![Pt(0), Pt(1)] };
        let n = normalize(&Com, &m).unwrap();
        assert_eq!(n.args, vec![Pt(1)]);
        assert_eq!(n.op.len(), 1);
    }

    #[test]
    fn multiset_formula() {
        assert_eq!(multiset_count(2, 0), 1);
        assert_eq!(multiset_count(2, 2), 6);
        assert_eq!(multiset_count(1, 4), 5);
    }
}
