//! `(𝓖,𝓟)`-spaces: the interchange law, the semiring model and the
//! coincidence of the additive and multiplicative coercions.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::check::PairConfig;
use super::semiring::{Coercion, SVal, SemiringPair};
use super::{ComPair, OperadPair};
use crate::error::{Error, Result};
use crate::operad::check::{random_arity, ElementCache};
use crate::operad::{Algebra, Com, Operad, Pointed};
use crate::report::{Check, Report};
use crate::sets::{section_indices, Color, RelSet};

type MElem<P> = <<P as OperadPair>::Mult as Operad>::Elem;
type AElem<P> = <<P as OperadPair>::Add as Operad>::Elem;

/// A pair of pointed sets with zeros and ones, a `𝓖₀`-structure `χ` and a
/// `𝓟`-structure `θ`.
pub trait GpAlgebra<P: OperadPair>: Send + Sync {
    type Val: Clone + fmt::Debug + PartialEq + Send + Sync;

    fn zero(&self, color: Color) -> Self::Val;
    fn one(&self, color: Color) -> Self::Val;
    fn theta(&self, pair: &P, alpha: &AElem<P>, args: &[Self::Val]) -> Result<Self::Val>;
    fn chi(&self, pair: &P, f: &MElem<P>, args: &[Self::Val]) -> Result<Self::Val>;
    fn sample(&self, color: Color, rng: &mut ChaCha8Rng) -> Self::Val;
}

/// The semiring model: `θ` sums and `χ` multiplies after coercing `d`-inputs
/// into a `c`-ambient.
#[derive(Debug, Clone)]
pub struct SemiringGp {
    pub s: SemiringPair,
    /// Coercion used by `χ`; `None` means the same `ι` as `θ`.
    pub mult_iota: Option<Coercion>,
    /// Add an extra one to every sum of two or more terms.
    pub fault_theta: bool,
}

pub fn semiring_gp(s: SemiringPair) -> SemiringGp {
    SemiringGp { s, mult_iota: None, fault_theta: false }
}

impl SemiringGp {
    fn coerced(&self, a: &RelSet, args: &[SVal], iota: &Coercion) -> Result<Vec<SVal>> {
        if args.len() != a.len() {
            return Err(Error::ShapeMismatch(format!("{} arguments at {a}", args.len())));
        }
        let to = a.ambient();
        a.iter()
            .zip(args)
            .map(|((l, c), x)| {
                if !self.s.side(c).contains(x) {
                    return Err(Error::ShapeMismatch(format!("{x} is not a valid {c}-value at {l}")));
                }
                match (c, to) {
                    (Color::D, Color::C) => iota.apply(x),
                    _ => Ok(x.clone()),
                }
            })
            .collect()
    }

    pub fn sum(&self, a: &RelSet, args: &[SVal]) -> Result<SVal> {
        let xs = self.coerced(a, args, &self.s.iota)?;
        let side = self.s.side(a.ambient());
        let total = side.sum(&xs)?;
        if self.fault_theta && xs.len() >= 2 {
            return side.add(&total, &side.one());
        }
        Ok(total)
    }

    pub fn product(&self, a: &RelSet, args: &[SVal]) -> Result<SVal> {
        let iota = self.mult_iota.as_ref().unwrap_or(&self.s.iota);
        let xs = self.coerced(a, args, iota)?;
        self.s.side(a.ambient()).product(&xs)
    }
}

impl GpAlgebra<ComPair> for SemiringGp {
    type Val = SVal;

    fn zero(&self, color: Color) -> SVal {
        self.s.side(color).zero()
    }

    fn one(&self, color: Color) -> SVal {
        self.s.side(color).one()
    }

    fn theta(&self, _pair: &ComPair, alpha: &RelSet, args: &[SVal]) -> Result<SVal> {
        self.sum(alpha, args)
    }

    fn chi(&self, _pair: &ComPair, f: &RelSet, args: &[SVal]) -> Result<SVal> {
        self.product(f, args)
    }

    fn sample(&self, color: Color, rng: &mut ChaCha8Rng) -> SVal {
        self.s.side(color).sample(rng)
    }
}

impl Pointed for SVal {
    fn is_basepoint(&self) -> bool {
        match self {
            SVal::Nat(n) => num_traits::Zero::is_zero(n),
            SVal::Poly(p) => p.0.is_empty(),
            SVal::Fin(i) => *i == 0,
        }
    }
}

/// The additive structure alone, as a `Com→`-algebra.
impl Algebra<Com> for SemiringGp {
    type Val = SVal;

    fn basepoint(&self, color: Color) -> SVal {
        self.s.side(color).zero()
    }

    fn theta(&self, _op: &Com, alpha: &RelSet, args: &[SVal]) -> Result<SVal> {
        self.sum(alpha, args)
    }

    fn sample_values(&self, _op: &Com, color: Color, rng: &mut ChaCha8Rng, n: usize) -> Vec<SVal> {
        (0..n).map(|_| self.s.side(color).sample(rng)).collect()
    }
}

/// `f[α^a⟨x^{a,b}⟩] = f⋉⟨α^a⟩⟨f[x^{a,b^a}]⟩`, zero absorption and the nullary values.
pub fn check_gp_interchange<P: OperadPair, A: GpAlgebra<P>>(pair: &P, alg: &A, cfg: &PairConfig) -> Report {
    let (m, p) = (pair.mult(), pair.add());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x1e7c);
    let mut mults = ElementCache::new(cfg.budget);
    let mut adds = ElementCache::new(cfg.budget);
    let mut inter = Check::new("interchange");
    let mut absorb = Check::new("zero absorbs");
    let mut nullary = Check::new("empty sum and product");

    for color in Color::ALL {
        let e = RelSet::empty(color);
        let ok = (|| -> Result<bool> {
            Ok(alg.theta(pair, &p.point(color), &[])? == alg.zero(color)
                && alg.chi(pair, &m.point(color), &[])? == alg.one(color))
        })();
        nullary.record_result(ok, || format!("at {e}"));
    }

    for _ in 0..cfg.trials {
        let amb = if rng.gen_bool(0.7) { Color::C } else { Color::D };
        let a = random_arity(&mut rng, amb, cfg.max_outer);
        let Some(f) = mults.pick(m, &a, &mut rng) else { continue };
        let mut alphas = Vec::new();
        for (_, c) in a.iter() {
            let b = random_arity(&mut rng, c, cfg.max_inner);
            match adds.pick(p, &b, &mut rng) {
                Some(al) => alphas.push(al),
                None => break,
            }
        }
        if alphas.len() != a.len() {
            continue;
        }
        let bs: Vec<RelSet> = alphas.iter().map(|al| p.arity(al).clone()).collect();
        let xs: Vec<Vec<A::Val>> =
            bs.iter().map(|b| b.iter().map(|(_, c)| alg.sample(c, &mut rng)).collect()).collect();
        let outcome = (|| -> Result<bool> {
            let sums = alphas.iter().zip(&xs).map(|(al, x)| alg.theta(pair, al, x)).collect::<Result<Vec<_>>>()?;
            let lhs = alg.chi(pair, &f, &sums)?;
            let prod = pair.ltimes(&f, &alphas)?;
            let mut terms = Vec::new();
            for idx in section_indices(&bs) {
                let (_, proj) = crate::sets::fiber_set(
                    &a,
                    &bs,
                    &bs.iter().zip(&idx).map(|(b, &j)| b.label(j).clone()).collect::<Vec<_>>(),
                )?;
                let fs = pair.act_any(&f, &proj)?;
                let args: Vec<A::Val> = xs.iter().zip(&idx).map(|(row, &j)| row[j].clone()).collect();
                terms.push(alg.chi(pair, &fs, &args)?);
            }
            Ok(lhs == alg.theta(pair, &prod, &terms)?)
        })();
        inter.record_result(outcome, || format!("f={f:?} α={alphas:?} x={xs:?}"));

        if !a.is_empty() {
            let mut args: Vec<A::Val> = a.iter().map(|(_, c)| alg.sample(c, &mut rng)).collect();
            let k = rng.gen_range(0..a.len());
            args[k] = alg.zero(a.color_at(k));
            let outcome = alg.chi(pair, &f, &args).map(|v| v == alg.zero(amb));
            absorb.record_result(outcome, || format!("f={f:?} x={args:?}"));
        }
    }
    let mut report = Report::new(format!("(G,P)-space over {}", pair.name()));
    for c in [inter, absorb, nullary] {
        report.push(c);
    }
    report
}

/// The displayed chain `φ_+x = Π⟨φ_+x, 1_c⟩ = Π⋉⟨φ_+, id_c⟩ Π⟨x, 1_c⟩ = φ_·x`,
/// each equality checked on sampled `x`.
pub fn hom_coincidence(alg: &SemiringGp, samples: usize, seed: u64) -> Report {
    let pair = ComPair::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d1 = RelSet::of(Color::C, &[("1", Color::D)]).expect("set");
    let c12 = RelSet::canonical(0, 2, Color::C).expect("set");
    let dc = RelSet::canonical(1, 1, Color::C).expect("set");
    let id_c = Com.unit(Color::C);
    let one_c = alg.s.c.one();
    let mut steps = [Check::new("unit insertion"), Check::new("interchange step"), Check::new("multiplicative route")];
    let mut values = Vec::new();
    for _ in 0..samples {
        let x = alg.s.d.sample(&mut rng);
        let chain = (|| -> Result<[SVal; 4]> {
            let plus = alg.sum(&d1, std::slice::from_ref(&x))?;
            let t1 = alg.product(&c12, &[plus.clone(), one_c.clone()])?;
            let prod = pair.ltimes(&c12, &[d1.clone(), id_c.clone()])?;
            let fam = [d1.clone(), id_c.clone()];
            let mut inner = Vec::new();
            for idx in section_indices(&fam) {
                let section: Vec<_> = fam.iter().zip(&idx).map(|(b, &j)| b.label(j).clone()).collect();
                let (_, proj) = crate::sets::fiber_set(&c12, &fam, &section)?;
                let f_s = pair.act_any(&c12, &proj)?;
                debug_assert_eq!(f_s.color_counts(), dc.color_counts());
                inner.push(alg.product(&f_s, &[x.clone(), one_c.clone()])?);
            }
            let t2 = alg.sum(&prod, &inner)?;
            let dot = alg.product(&d1, std::slice::from_ref(&x))?;
            Ok([plus, t1, t2, dot])
        })();
        values.push((x, chain));
    }
    for (x, chain) in values {
        match chain {
            Ok(t) => {
                for (k, step) in steps.iter_mut().enumerate() {
                    step.record(t[k] == t[k + 1], || format!("x={x}: {} vs {}", t[k], t[k + 1]));
                }
            }
            Err(e) => {
                for step in steps.iter_mut() {
                    step.record(false, || format!("x={x}: error {e}"));
                }
            }
        }
    }
    let mut report = Report::new("coercion coincidence");
    for s in steps {
        report.push(s);
    }
    report
}

/// Reading `+`, `·`, `0`, `1` and `ι` back off the structure maps.
pub fn read_back(alg: &SemiringGp, samples: usize, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::new("semiring read-back");
    for color in Color::ALL {
        let s = alg.s.side(color);
        let two =
            RelSet::canonical(if color == Color::D { 2 } else { 0 }, if color == Color::C { 2 } else { 0 }, color)
                .expect("set");
        let pairs: Vec<(SVal, SVal)> = match s.elements() {
            Some(es) => es.iter().flat_map(|x| es.iter().map(move |y| (x.clone(), y.clone()))).collect(),
            None => (0..samples).map(|_| (s.sample(&mut rng), s.sample(&mut rng))).collect(),
        };
        let mut ops = Check::new(format!("{color}: binary operations"));
        for (x, y) in &pairs {
            let ok = (|| -> Result<bool> {
                let args = [x.clone(), y.clone()];
                Ok(alg.sum(&two, &args)? == s.add(x, y)? && alg.product(&two, &args)? == s.mul(x, y)?)
            })();
            ops.record_result(ok, || format!("x={x} y={y}"));
        }
        report.push(ops);
        let mut units = Check::new(format!("{color}: nullary operations"));
        let e = RelSet::empty(color);
        units.record_result(
            (|| -> Result<bool> { Ok(alg.sum(&e, &[])? == s.zero() && alg.product(&e, &[])? == s.one()) })(),
            || "empty".into(),
        );
        report.push(units);
    }
    let d1 = RelSet::of(Color::C, &[("1", Color::D)]).expect("set");
    let mut iota = Check::new("coercion");
    let xs: Vec<SVal> = alg.s.d.elements().unwrap_or_else(|| (0..samples).map(|_| alg.s.d.sample(&mut rng)).collect());
    for x in &xs {
        let ok = (|| -> Result<bool> { Ok(alg.sum(&d1, std::slice::from_ref(x))? == alg.s.iota.apply(x)?) })();
        iota.record_result(ok, || format!("x={x}"));
    }
    report.push(iota);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::algebra::AlgebraConfig;
    use crate::operad::check_algebra;
    use crate::pairs::semiring::{FiniteSemiring, Poly};

    #[test]
    fn sum_with_coercion() {
        let alg = semiring_gp(SemiringPair::nat_poly());
        let a = RelSet::canonical(1, 1, Color::C).unwrap();
        let y = SVal::Poly(Poly::y());
        assert_eq!(alg.sum(&a, &[SVal::nat(3), y]).unwrap().to_string(), "3 + y");
    }

    #[test]
    fn distributivity_two_by_two() {
        let alg = semiring_gp(SemiringPair::nat_poly());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = RelSet::canonical(0, 2, Color::C).unwrap();
        let b = RelSet::canonical(0, 2, Color::C).unwrap();
        for _ in 0..50 {
            let x: Vec<Vec<SVal>> = (0..2).map(|_| (0..2).map(|_| alg.s.c.sample(&mut rng)).collect()).collect();
            let lhs = alg.product(&a, &[alg.sum(&b, &x[0]).unwrap(), alg.sum(&b, &x[1]).unwrap()]).unwrap();
            let mut terms = vec![];
            for i in 0..2 {
                for j in 0..2 {
                    terms.push(alg.product(&a, &[x[0][i].clone(), x[1][j].clone()]).unwrap());
                }
            }
            assert_eq!(lhs, alg.s.c.sum(&terms).unwrap());
        }
    }

    #[test]
    fn interchange_holds_and_fault_is_caught() {
        let cfg = PairConfig { trials: 300, ..Default::default() };
        let alg = semiring_gp(SemiringPair::nat_poly());
        let r = check_gp_interchange(&ComPair::default(), &alg, &cfg);
        assert!(r.passed(), "{}", r.to_text());
        let bad = SemiringGp { fault_theta: true, ..alg };
        let r = check_gp_interchange(&ComPair::default(), &bad, &cfg);
        assert!(r.check("interchange").unwrap().witness.is_some());
    }

    #[test]
    fn coercions_coincide() {
        for s in [SemiringPair::nat_poly(), SemiringPair::nat_nat()] {
            let r = hom_coincidence(&semiring_gp(s), 100, 0);
            assert!(r.passed(), "{}", r.to_text());
        }
        let bad = SemiringGp { mult_iota: Some(Coercion::Scaled(2)), ..semiring_gp(SemiringPair::nat_poly()) };
        assert!(!hom_coincidence(&bad, 100, 0).passed());
    }

    #[test]
    fn read_back_recovers_tables() {
        for s in [SemiringPair::nat_poly(), SemiringPair::finite(FiniteSemiring::modular(4))] {
            let r = read_back(&semiring_gp(s), 100, 0);
            assert!(r.passed(), "{}", r.to_text());
        }
    }

    #[test]
    fn additive_part_is_a_com_algebra() {
        let alg = semiring_gp(SemiringPair::finite(FiniteSemiring::modular(3)));
        let r = check_algebra(&Com, &alg, &AlgebraConfig::default());
        assert!(r.passed(), "{}", r.to_text());
        let bad = SemiringGp { fault_theta: true, ..alg };
        assert!(!check_algebra(&Com, &bad, &AlgebraConfig::default()).passed());
    }
}
