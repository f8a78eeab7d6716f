//! The monad `G₀` on pairs with zeros and ones.
//!
//! Classes `[f, [x^a]]` are smash-coend classes: any zero argument collapses
//! the class to the zero, and degenerating `f` corresponds to inserting ones.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::semiring::SVal;
use crate::error::Result;
use crate::operad::check::{random_arity, ElementCache};
use crate::operad::monad::{self, check_monad_laws, MonadElem};
use crate::operad::{Operad, Pointed};
use crate::report::{Check, Report};
use crate::sets::Color;

/// Values with a zero and a one.
pub trait Unital: Clone + fmt::Debug + PartialEq + Send + Sync {
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
}

impl Unital for SVal {
    fn is_zero(&self) -> bool {
        self.is_basepoint()
    }

    fn is_one(&self) -> bool {
        match self {
            SVal::Nat(n) => num_traits::One::is_one(n),
            SVal::Poly(p) => p.0.len() == 1 && p.0.get(&0).is_some_and(num_traits::One::is_one),
            SVal::Fin(i) => *i == 1,
        }
    }
}

/// A value seen with its one as the basepoint, so that coend normalization drops ones.
#[derive(Debug, Clone, PartialEq)]
pub struct AsOne<X>(pub X);

impl<X: Unital> Pointed for AsOne<X> {
    fn is_basepoint(&self) -> bool {
        self.0.is_one()
    }
}

#[derive(Debug, Clone)]
pub enum G0Class<E, X> {
    Zero(Color),
    Class(MonadElem<E, AsOne<X>>),
}

/// `[f, [x^a]]`.
pub fn g0_class<O: Operad, X: Unital>(op: &O, f: O::Elem, args: Vec<X>) -> G0Class<O::Elem, X> {
    if args.iter().any(Unital::is_zero) {
        return G0Class::Zero(op.arity(&f).ambient());
    }
    G0Class::Class(MonadElem { op: f, args: args.into_iter().map(AsOne).collect() })
}

pub fn g0_equivalent<O: Operad, X: Unital>(op: &O, a: &G0Class<O::Elem, X>, b: &G0Class<O::Elem, X>) -> Result<bool> {
    match (a, b) {
        (G0Class::Zero(c1), G0Class::Zero(c2)) => Ok(c1 == c2),
        (G0Class::Class(m1), G0Class::Class(m2)) => monad::equivalent(op, m1, m2, &|x, y| x == y),
        _ => Ok(false),
    }
}

/// `η x = [id, x]`.
pub fn g0_eta<O: Operad, X: Unital>(op: &O, x: X, color: Color) -> G0Class<O::Elem, X> {
    g0_class(op, op.unit(color), vec![x])
}

/// `μ[f, [[g^a, [x^{a,b}]]]] = [f⟨g^a⟩, [x^{a,b}]]`, zero if any inner class is zero.
pub fn g0_mu<O: Operad, X: Unital>(op: &O, f: &O::Elem, inner: &[G0Class<O::Elem, X>]) -> Result<G0Class<O::Elem, X>> {
    let mut gs = Vec::new();
    let mut args = Vec::new();
    for c in inner {
        match c {
            G0Class::Zero(_) => return Ok(G0Class::Zero(op.arity(f).ambient())),
            G0Class::Class(m) => {
                gs.push(m.op.clone());
                args.extend(m.args.iter().cloned());
            }
        }
    }
    Ok(G0Class::Class(MonadElem { op: op.compose(f, &gs)?, args }))
}

/// The classes of `G₀X_⋆` of arity at most `max_arity`: the zero class and one
/// class per coend orbit of tuples without zeros.
pub fn g0_classes<O: Operad, X: Unital>(
    op: &O,
    values_d: &[X],
    values_c: &[X],
    ambient: Color,
    max_arity: usize,
    budget: usize,
    seed: u64,
) -> Result<Vec<G0Class<O::Elem, X>>> {
    let wrap = |v: &[X]| v.iter().filter(|x| !x.is_zero()).cloned().map(AsOne).collect::<Vec<_>>();
    let classes = monad::enumerate_classes(op, &wrap(values_d), &wrap(values_c), ambient, max_arity, budget, seed)?;
    let mut out = vec![G0Class::Zero(ambient)];
    out.extend(classes.into_iter().map(G0Class::Class));
    Ok(out)
}

/// Monad laws on classes without zeros, plus absorption of zeros by `μ`.
pub fn check_g0_monad<O: Operad, X: Unital>(
    op: &O,
    sample: &dyn Fn(Color, &mut ChaCha8Rng) -> X,
    trials: usize,
    seed: u64,
) -> Report {
    let nonzero = |c: Color, rng: &mut ChaCha8Rng| loop {
        let x = sample(c, rng);
        if !x.is_zero() {
            return AsOne(x);
        }
    };
    let laws = check_monad_laws(op, &nonzero, trials, seed);
    let mut report = Report::new(format!("G0 monad of {}", op.name()));
    report.extend("laws", laws);

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6e0);
    let mut cache = ElementCache::new(16);
    let mut absorb = Check::new("zero absorbs");
    for _ in 0..trials {
        let amb = if rng.gen_bool(0.7) { Color::C } else { Color::D };
        let a = random_arity(&mut rng, amb, 3);
        if a.is_empty() {
            continue;
        }
        let Some(f) = cache.pick(op, &a, &mut rng) else { continue };
        let k = rng.gen_range(0..a.len());
        let mut inner = Vec::new();
        for (i, (_, c)) in a.iter().enumerate() {
            if i == k {
                inner.push(G0Class::Zero(c));
            } else {
                inner.push(g0_eta(op, sample(c, &mut rng), c));
            }
        }
        let outcome = g0_mu(op, &f, &inner).map(|m| matches!(m, G0Class::Zero(c) if c == amb));
        absorb.record_result(outcome, || format!("f={f:?} zero at {k}"));
    }
    report.push(absorb);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::monad::multiset_count;
    use crate::operad::Com;
    use crate::pairs::semiring::{Poly, Semiring};

    #[test]
    fn com_classes_are_multisets_plus_zero() {
        let vd = vec![SVal::nat(0), SVal::nat(1), SVal::nat(2)];
        let vc = vec![SVal::Poly(Poly::default()), SVal::Poly(Poly::monomial(1, 0)), SVal::Poly(Poly::y())];
        for k in 0..=4 {
            let c = g0_classes(&Com, &vd, &vc, Color::C, k, 8, 0).unwrap();
            assert_eq!(c.len(), multiset_count(2, k) + 1);
            let d = g0_classes(&Com, &vd, &vc, Color::D, k, 8, 0).unwrap();
            assert_eq!(d.len(), multiset_count(1, k) + 1);
        }
    }

    #[test]
    fn ones_are_dropped_and_zeros_absorb() {
        let a = crate::sets::RelSet::canonical(0, 2, Color::C).unwrap();
        let x = SVal::Poly(Poly::y());
        let with_one = g0_class(&Com, a.clone(), vec![x.clone(), Semiring::Poly.one()]);
        let alone = g0_eta(&Com, x.clone(), Color::C);
        assert!(g0_equivalent(&Com, &with_one, &alone).unwrap());
        let zero = g0_class(&Com, a, vec![x, Semiring::Poly.zero()]);
        assert!(matches!(zero, G0Class::Zero(Color::C)));
    }

    #[test]
    fn monad_laws() {
        let s = Semiring::Poly;
        let n = Semiring::Nat;
        let sample = move |c: Color, rng: &mut ChaCha8Rng| match c {
            Color::D => n.sample(rng),
            Color::C => s.sample(rng),
        };
        let r = check_g0_monad(&Com, &sample, 100, 0);
        assert!(r.passed(), "{}", r.to_text());
    }
}
