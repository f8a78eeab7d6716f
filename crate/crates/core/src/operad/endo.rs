//! Endomorphism operads of finite pointed pairs.
//!
//! `End(X)A` consists of the based maps `Π_A X_{𝔠a} → X_{𝔠A}`, stored as
//! lookup tables over the tuples of `Π_A X` in odometer order (first
//! coordinate slowest). Index 0 of each set is its basepoint.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::algebra::Algebra;
use super::monad::Pointed;
use super::{check_action, check_inner, Operad};
use crate::error::{Error, Result};
use crate::sets::{Color, RelMap, RelSet};

/// `((X_d, e_d), (X_c, e_c))`; the first name of each list is the basepoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointedPair {
    pub d: Vec<String>,
    pub c: Vec<String>,
}

impl PointedPair {
    pub fn new(d: Vec<String>, c: Vec<String>) -> Result<Self> {
        if d.is_empty() || c.is_empty() {
            return Err(Error::InvalidSet("each side needs a basepoint".into()));
        }
        for side in [&d, &c] {
            let mut s = side.clone();
            s.sort();
            s.dedup();
            if s.len() != side.len() {
                return Err(Error::InvalidSet("names must be distinct".into()));
            }
        }
        Ok(PointedPair { d, c })
    }

    /// `X_d = {e_d, a_1..}`, `X_c = {e_c, b_1..}` of the given sizes.
    pub fn of_sizes(nd: usize, nc: usize) -> Self {
        let side = |base: &str, n: usize, stem: &str| {
            std::iter::once(base.to_string()).chain((1..n).map(|i| format!("{stem}{i}"))).collect()
        };
        PointedPair { d: side("e_d", nd.max(1), "a"), c: side("e_c", nc.max(1), "b") }
    }

    pub fn size(&self, color: Color) -> usize {
        match color {
            Color::D => self.d.len(),
            Color::C => self.c.len(),
        }
    }
}

/// A point of `X_⋆` by index; 0 is the basepoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pt(pub usize);

impl Pointed for Pt {
    fn is_basepoint(&self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndElem {
    pub arity: RelSet,
    pub table: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct EndOperad {
    pub x: PointedPair,
    /// Corrupt one table entry after every composition.
    pub fault: bool,
}

impl EndOperad {
    pub fn new(x: PointedPair) -> Self {
        EndOperad { x, fault: false }
    }

    fn radices(&self, a: &RelSet) -> Vec<usize> {
        a.iter().map(|(_, c)| self.x.size(c)).collect()
    }

    fn tuple_count(&self, a: &RelSet) -> usize {
        self.radices(a).iter().product()
    }

    fn index_of(radices: &[usize], tuple: &[usize]) -> usize {
        tuple.iter().zip(radices).fold(0, |acc, (&t, &r)| acc * r + t)
    }

    fn tuple_at(radices: &[usize], mut index: usize) -> Vec<usize> {
        let mut out = vec![0; radices.len()];
        for k in (0..radices.len()).rev() {
            out[k] = index % radices[k];
            index /= radices[k];
        }
        out
    }

    /// Evaluate an element on a tuple of point indices.
    pub fn eval(&self, alpha: &EndElem, tuple: &[usize]) -> usize {
        alpha.table[Self::index_of(&self.radices(&alpha.arity), tuple)]
    }

    /// Build an element from a function on tuples; the result is forced to be based.
    pub fn from_fn(&self, arity: &RelSet, f: impl Fn(&[usize]) -> usize) -> EndElem {
        let r = self.radices(arity);
        let n = self.tuple_count(arity);
        let table = (0..n).map(|i| if i == 0 { 0 } else { f(&Self::tuple_at(&r, i)) }).collect();
        EndElem { arity: arity.clone(), table }
    }
}

impl Operad for EndOperad {
    type Elem = EndElem;

    fn name(&self) -> String {
        format!("End(|X_d|={},|X_c|={})", self.x.d.len(), self.x.c.len())
    }

    fn arity<'a>(&self, alpha: &'a EndElem) -> &'a RelSet {
        &alpha.arity
    }

    fn unit(&self, color: Color) -> EndElem {
        EndElem { arity: RelSet::singleton(color), table: (0..self.x.size(color)).collect() }
    }

    fn point(&self, color: Color) -> EndElem {
        EndElem { arity: RelSet::empty(color), table: vec![0] }
    }

    fn compose(&self, alpha: &EndElem, inner: &[EndElem]) -> Result<EndElem> {
        check_inner(&alpha.arity, &inner.iter().map(|b| &b.arity).collect::<Vec<_>>())?;
        let fam: Vec<RelSet> = inner.iter().map(|b| b.arity.clone()).collect();
        let arity = crate::sets::dep_sum(&alpha.arity, &fam)?;
        let r = self.radices(&arity);
        let widths: Vec<usize> = inner.iter().map(|b| b.arity.len()).collect();
        let mut table: Vec<usize> = (0..self.tuple_count(&arity))
            .map(|i| {
                let t = Self::tuple_at(&r, i);
                let mut offset = 0;
                let outer: Vec<usize> = inner
                    .iter()
                    .zip(&widths)
                    .map(|(b, &w)| {
                        let v = self.eval(b, &t[offset..offset + w]);
                        offset += w;
                        v
                    })
                    .collect();
                self.eval(alpha, &outer)
            })
            .collect();
        if self.fault && table.len() > 1 {
            let last = table.len() - 1;
            table[last] = (table[last] + 1) % self.x.size(arity.ambient());
        }
        Ok(EndElem { arity, table })
    }

    fn act(&self, alpha: &EndElem, sigma: &RelMap) -> Result<EndElem> {
        check_action(&alpha.arity, sigma)?;
        let src = sigma.source();
        let pos: Vec<usize> = alpha
            .arity
            .labels()
            .map(|t| src.index_of(sigma.preimage(t).expect("bijection")).expect("in source"))
            .collect();
        Ok(self.from_fn(src, |x| {
            let y: Vec<usize> = pos.iter().map(|&p| x[p]).collect();
            self.eval(alpha, &y)
        }))
    }

    fn same(&self, a: &EndElem, b: &EndElem) -> bool {
        a == b
    }

    fn elements_at(&self, arity: &RelSet, rng: &mut ChaCha8Rng, budget: usize) -> Vec<EndElem> {
        let n = self.tuple_count(arity);
        let out_size = self.x.size(arity.ambient());
        let free_entries = (n - 1) as u32;
        let total = (out_size as u128).checked_pow(free_entries);
        match total {
            Some(t) if t <= budget as u128 => (0..t as usize)
                .map(|mut code| {
                    let mut table = vec![0; n];
                    for entry in table.iter_mut().skip(1) {
                        *entry = code % out_size;
                        code /= out_size;
                    }
                    EndElem { arity: arity.clone(), table }
                })
                .collect(),
            _ => (0..budget)
                .map(|_| {
                    let mut table: Vec<usize> = (0..n).map(|_| rng.gen_range(0..out_size)).collect();
                    table[0] = 0;
                    EndElem { arity: arity.clone(), table }
                })
                .collect(),
        }
    }
}

/// `X` as an `End(X)`-algebra by evaluation.
#[derive(Debug, Clone, Copy, Default)]
pub struct EndAlgebra;

impl Algebra<EndOperad> for EndAlgebra {
    type Val = Pt;

    fn basepoint(&self, _color: Color) -> Pt {
        Pt(0)
    }

    fn theta(&self, op: &EndOperad, alpha: &EndElem, args: &[Pt]) -> Result<Pt> {
        if args.len() != alpha.arity.len() {
            return Err(Error::ShapeMismatch("one argument per input required".into()));
        }
        for ((_, c), x) in alpha.arity.iter().zip(args) {
            if x.0 >= op.x.size(c) {
                return Err(Error::ShapeMismatch("argument outside the carrier".into()));
            }
        }
        let t: Vec<usize> = args.iter().map(|p| p.0).collect();
        Ok(Pt(op.eval(alpha, &t)))
    }

    fn sample_values(&self, op: &EndOperad, color: Color, rng: &mut ChaCha8Rng, n: usize) -> Vec<Pt> {
        (0..n).map(|_| Pt(rng.gen_range(0..op.x.size(color)))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn unit_is_identity_and_point_is_based() {
        let op = EndOperad::new(PointedPair::of_sizes(2, 3));
        let u = op.unit(Color::C);
        for x in 0..3 {
            assert_eq!(op.eval(&u, &[x]), x);
        }
        assert_eq!(op.point(Color::D).table, vec![0]);
    }

    #[test]
    fn composition_is_pointwise() {
        let op = EndOperad::new(PointedPair::of_sizes(2, 3));
        let a = RelSet::of(Color::C, &[("1", Color::D), ("2", Color::C)]).unwrap();
        let alpha = op.from_fn(&a, |t| (t[0] + t[1]) % 3);
        let beta = op.from_fn(&RelSet::singleton(Color::C), |t| (2 * t[0]) % 3);
        let e = op.compose(&alpha, &[op.unit(Color::D), beta]).unwrap();
        for x in 0..2 {
            for y in 0..3 {
                assert_eq!(op.eval(&e, &[x, y]), (x + (2 * y) % 3) % 3);
            }
        }
    }

    #[test]
    fn small_arities_are_enumerated() {
        let op = EndOperad::new(PointedPair::of_sizes(2, 2));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let a = RelSet::canonical(1, 1, Color::C).unwrap();
        assert_eq!(op.elements_at(&a, &mut rng, 1000).len(), 8);
        assert_eq!(op.elements_at(&RelSet::empty(Color::C), &mut rng, 1000).len(), 1);
    }
}
