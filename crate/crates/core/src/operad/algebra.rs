//! Algebras over relative operads and their law checker.

use std::fmt;
use std::marker::PhantomData;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::check::{random_arity, random_injection, random_permutation, ElementCache};
use super::monad::Pointed;
use super::Operad;
use crate::error::{Error, Result};
use crate::report::{Check, Report};
use crate::sets::{Color, RelSet};

/// A `𝓟`-space: a pointed pair with structure maps `θ_A`.
pub trait Algebra<O: Operad>: Send + Sync {
    type Val: Pointed + PartialEq;

    fn basepoint(&self, color: Color) -> Self::Val;

    /// `α⟨x^a⟩`, with `args` aligned with the arity of `α`.
    fn theta(&self, op: &O, alpha: &O::Elem, args: &[Self::Val]) -> Result<Self::Val>;

    fn sample_values(&self, op: &O, color: Color, rng: &mut ChaCha8Rng, n: usize) -> Vec<Self::Val>;
}

/// Placeholder for leaves that are formal symbols: every evaluation fails.
pub struct NoAlgebra<X>(PhantomData<fn() -> X>);

impl<X> Default for NoAlgebra<X> {
    fn default() -> Self {
        NoAlgebra(PhantomData)
    }
}

impl<X> fmt::Debug for NoAlgebra<X> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("NoAlgebra")
    }
}

impl<O: Operad, X: Pointed + PartialEq + Default> Algebra<O> for NoAlgebra<X> {
    type Val = X;

    fn basepoint(&self, _color: Color) -> X {
        X::default()
    }

    fn theta(&self, _op: &O, _alpha: &O::Elem, _args: &[X]) -> Result<X> {
        Err(Error::MissingAlgebra)
    }

    fn sample_values(&self, _op: &O, _color: Color, _rng: &mut ChaCha8Rng, n: usize) -> Vec<X> {
        (0..n).map(|_| X::default()).collect()
    }
}

#[derive(Debug, Clone)]
pub struct AlgebraConfig {
    pub trials: usize,
    pub max_outer: usize,
    pub max_inner: usize,
    pub budget: usize,
    pub seed: u64,
}

impl Default for AlgebraConfig {
    fn default() -> Self {
        AlgebraConfig { trials: 200, max_outer: 3, max_inner: 2, budget: 64, seed: 0 }
    }
}

fn args_for<O: Operad, A: Algebra<O>>(op: &O, alg: &A, arity: &RelSet, rng: &mut ChaCha8Rng) -> Vec<A::Val> {
    arity.iter().map(|(_, c)| alg.sample_values(op, c, rng, 1).remove(0)).collect()
}

/// Check the composition, unit and equivariance laws of an algebra.
pub fn check_algebra<O: Operad, A: Algebra<O>>(op: &O, alg: &A, cfg: &AlgebraConfig) -> Report {
    let mut report = Report::new(format!("algebra over {}", op.name()));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cache = ElementCache::new(cfg.budget);

    let mut comp = Check::new("composition");
    let mut unit = Check::new("unit");
    let mut equi = Check::new("equivariance");
    let mut degen = Check::new("basepoint insertion");
    let mut nullary = Check::new("nullary is basepoint");

    for color in Color::ALL {
        let v = alg.theta(op, &op.point(color), &[]);
        nullary.record_result(v.map(|v| v == alg.basepoint(color)), || format!("θ(∗_{color})"));
    }

    for _ in 0..cfg.trials {
        let amb = if rng.gen_bool(0.7) { Color::C } else { Color::D };
        let a = random_arity(&mut rng, amb, cfg.max_outer);
        let Some(alpha) = cache.pick(op, &a, &mut rng) else { continue };

        // composition
        let mut betas = Vec::new();
        let mut inner_args = Vec::new();
        let mut ok = true;
        for (_, c) in a.iter() {
            let b = random_arity(&mut rng, c, cfg.max_inner);
            match cache.pick(op, &b, &mut rng) {
                Some(beta) => {
                    inner_args.push(args_for(op, alg, &b, &mut rng));
                    betas.push(beta);
                }
                None => ok = false,
            }
        }
        if ok {
            let outcome = (|| {
                let composite = op.compose(&alpha, &betas)?;
                let flat: Vec<A::Val> = inner_args.iter().flatten().cloned().collect();
                let lhs = alg.theta(op, &composite, &flat)?;
                let mid =
                    betas.iter().zip(&inner_args).map(|(b, x)| alg.theta(op, b, x)).collect::<Result<Vec<_>>>()?;
                Ok(lhs == alg.theta(op, &alpha, &mid)?)
            })();
            comp.record_result(outcome, || format!("α={alpha:?} β={betas:?} x={inner_args:?}"));
        }

        // unit
        let x = alg.sample_values(op, amb, &mut rng, 1).remove(0);
        let outcome = alg.theta(op, &op.unit(amb), std::slice::from_ref(&x)).map(|y| y == x);
        unit.record_result(outcome, || format!("x={x:?}"));

        // symmetric equivariance
        let (sigma, _) = random_permutation(&mut rng, &a);
        let args = args_for(op, alg, sigma.source(), &mut rng);
        let outcome = (|| {
            let lhs = alg.theta(op, &op.act(&alpha, &sigma)?, &args)?;
            let moved: Vec<A::Val> = a
                .labels()
                .map(|t| args[sigma.source().index_of(sigma.preimage(t).expect("bij")).expect("src")].clone())
                .collect();
            Ok(lhs == alg.theta(op, &alpha, &moved)?)
        })();
        equi.record_result(outcome, || format!("α={alpha:?} σ={sigma:?} x={args:?}"));

        // degenerations insert basepoints
        if let Some(sigma) = random_injection(&mut rng, &a) {
            let args = args_for(op, alg, sigma.source(), &mut rng);
            let outcome = (|| {
                let lhs = alg.theta(op, &op.degeneration(&alpha, &sigma)?, &args)?;
                let spread: Vec<A::Val> = a
                    .iter()
                    .map(|(t, c)| match sigma.preimage(t) {
                        Some(s) => args[sigma.source().index_of(s).expect("src")].clone(),
                        None => alg.basepoint(c),
                    })
                    .collect();
                Ok(lhs == alg.theta(op, &alpha, &spread)?)
            })();
            degen.record_result(outcome, || format!("α={alpha:?} σ={sigma:?} x={args:?}"));
        }
    }
    for c in [comp, unit, equi, degen, nullary] {
        report.push(c);
    }
    report
}
