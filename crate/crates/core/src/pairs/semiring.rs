//! Commutative semirings and coercions `ι: R_d → R_c`, the model for
//! `(Com→, Com→)`-spaces.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{Check, Report};
use crate::sets::Color;

/// A polynomial in `y` with natural coefficients, stored sparsely.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Poly(pub BTreeMap<u32, BigUint>);

impl Poly {
    pub fn constant(c: BigUint) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(0, c);
        }
        Poly(m)
    }

    pub fn y() -> Self {
        Poly(BTreeMap::from([(1, BigUint::one())]))
    }

    pub fn monomial(coef: u64, deg: u32) -> Self {
        let mut p = Poly::default();
        if coef > 0 {
            p.0.insert(deg, BigUint::from(coef));
        }
        p
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut m = self.0.clone();
        for (d, c) in &other.0 {
            *m.entry(*d).or_default() += c;
        }
        Poly(m)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut m: BTreeMap<u32, BigUint> = BTreeMap::new();
        for (d1, c1) in &self.0 {
            for (d2, c2) in &other.0 {
                *m.entry(d1 + d2).or_default() += c1 * c2;
            }
        }
        m.retain(|_, c| !c.is_zero());
        Poly(m)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .0
            .iter()
            .map(|(d, c)| {
                let coef = if c.is_one() && *d > 0 { String::new() } else { c.to_string() };
                match d {
                    0 => c.to_string(),
                    1 => format!("{coef}y"),
                    _ => format!("{coef}y^{d}"),
                }
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

/// An element of one of the supported semirings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SVal {
    Nat(BigUint),
    Poly(Poly),
    Fin(usize),
}

impl SVal {
    pub fn nat(n: u64) -> SVal {
        SVal::Nat(BigUint::from(n))
    }
}

impl fmt::Display for SVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SVal::Nat(n) => write!(f, "{n}"),
            SVal::Poly(p) => write!(f, "{p}"),
            SVal::Fin(i) => write!(f, "#{i}"),
        }
    }
}

/// A finite commutative semiring given by tables, normalized so that the
/// zero is element 0 and the one is element 1 (when distinct).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteSemiring {
    pub name: String,
    pub size: usize,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct FiniteRepr {
    name: String,
    size: usize,
    zero: usize,
    one: usize,
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
}

impl FiniteSemiring {
    /// Tables with explicit zero and one; elements are renumbered.
    pub fn from_tables(
        name: &str,
        size: usize,
        zero: usize,
        one: usize,
        add: Vec<Vec<usize>>,
        mul: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let square =
            |t: &Vec<Vec<usize>>| t.len() == size && t.iter().all(|r| r.len() == size && r.iter().all(|&x| x < size));
        if size == 0 || zero >= size || one >= size || !square(&add) || !square(&mul) {
            return Err(Error::Parse(format!("malformed tables for {name}")));
        }
        // permutation old → new putting zero first and one second
        let mut order: Vec<usize> = vec![zero];
        if one != zero {
            order.push(one);
        }
        order.extend((0..size).filter(|&x| x != zero && x != one));
        let mut new_of = vec![0; size];
        for (n, &o) in order.iter().enumerate() {
            new_of[o] = n;
        }
        let remap = |t: &Vec<Vec<usize>>| -> Vec<Vec<usize>> {
            order.iter().map(|&i| order.iter().map(|&j| new_of[t[i][j]]).collect()).collect()
        };
        Ok(FiniteSemiring { name: name.into(), size, add: remap(&add), mul: remap(&mul) })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: FiniteRepr = serde_json::from_str(s)?;
        FiniteSemiring::from_tables(&r.name, r.size, r.zero, r.one, r.add, r.mul)
    }

    /// `ℤ/n` with its usual operations.
    pub fn modular(n: usize) -> Self {
        let add = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        let mul = (0..n).map(|i| (0..n).map(|j| (i * j) % n).collect()).collect();
        FiniteSemiring::from_tables(&format!("Z/{n}"), n, 0, 1 % n, add, mul).expect("valid tables")
    }

    fn one(&self) -> usize {
        if self.size > 1 {
            1
        } else {
            0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Semiring {
    Nat,
    /// `ℕ[y]`.
    Poly,
    Finite(FiniteSemiring),
}

impl Semiring {
    pub fn name(&self) -> String {
        match self {
            Semiring::Nat => "N".into(),
            Semiring::Poly => "N[y]".into(),
            Semiring::Finite(f) => f.name.clone(),
        }
    }

    pub fn zero(&self) -> SVal {
        match self {
            Semiring::Nat => SVal::Nat(BigUint::zero()),
            Semiring::Poly => SVal::Poly(Poly::default()),
            Semiring::Finite(_) => SVal::Fin(0),
        }
    }

    pub fn one(&self) -> SVal {
        match self {
            Semiring::Nat => SVal::Nat(BigUint::one()),
            Semiring::Poly => SVal::Poly(Poly::constant(BigUint::one())),
            Semiring::Finite(f) => SVal::Fin(f.one()),
        }
    }

    pub fn contains(&self, x: &SVal) -> bool {
        match (self, x) {
            (Semiring::Nat, SVal::Nat(_)) | (Semiring::Poly, SVal::Poly(_)) => true,
            (Semiring::Finite(f), SVal::Fin(i)) => *i < f.size,
            _ => false,
        }
    }

    fn binop(&self, x: &SVal, y: &SVal, add: bool) -> Result<SVal> {
        Ok(match (self, x, y) {
            (Semiring::Nat, SVal::Nat(a), SVal::Nat(b)) => SVal::Nat(if add { a + b } else { a * b }),
            (Semiring::Poly, SVal::Poly(a), SVal::Poly(b)) => SVal::Poly(if add { a.add(b) } else { a.mul(b) }),
            (Semiring::Finite(f), SVal::Fin(a), SVal::Fin(b)) if *a < f.size && *b < f.size => {
                SVal::Fin(if add { f.add[*a][*b] } else { f.mul[*a][*b] })
            }
            _ => return Err(Error::ShapeMismatch(format!("{x} or {y} is not in {}", self.name()))),
        })
    }

    pub fn add(&self, x: &SVal, y: &SVal) -> Result<SVal> {
        self.binop(x, y, true)
    }

    pub fn mul(&self, x: &SVal, y: &SVal) -> Result<SVal> {
        self.binop(x, y, false)
    }

    pub fn sum<'a>(&self, xs: impl IntoIterator<Item = &'a SVal>) -> Result<SVal> {
        xs.into_iter().try_fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    pub fn product<'a>(&self, xs: impl IntoIterator<Item = &'a SVal>) -> Result<SVal> {
        xs.into_iter().try_fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    /// A random element, with zero and one over-represented.
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> SVal {
        let roll = rng.gen_range(0..10);
        if roll == 0 {
            return self.zero();
        }
        if roll == 1 {
            return self.one();
        }
        match self {
            Semiring::Nat => SVal::nat(rng.gen_range(0..7)),
            Semiring::Poly => {
                let mut p = Poly::default();
                for d in 0..3 {
                    p = p.add(&Poly::monomial(rng.gen_range(0..4), d));
                }
                SVal::Poly(p)
            }
            Semiring::Finite(f) => SVal::Fin(rng.gen_range(0..f.size)),
        }
    }

    /// All elements when finite.
    pub fn elements(&self) -> Option<Vec<SVal>> {
        match self {
            Semiring::Finite(f) => Some((0..f.size).map(SVal::Fin).collect()),
            _ => None,
        }
    }
}

/// A map `R_d → R_c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coercion {
    Identity,
    /// `ℕ → ℕ[y]` as constants.
    Constant,
    /// `ℕ → ℕ[y]`, `n ↦ k n`; additive but not multiplicative unless `k = 1`.
    Scaled(u32),
    /// Finite table.
    Table(Vec<usize>),
}

impl Coercion {
    pub fn apply(&self, x: &SVal) -> Result<SVal> {
        Ok(match (self, x) {
            (Coercion::Identity, _) => x.clone(),
            (Coercion::Constant, SVal::Nat(n)) => SVal::Poly(Poly::constant(n.clone())),
            (Coercion::Scaled(k), SVal::Nat(n)) => SVal::Poly(Poly::constant(n * BigUint::from(*k))),
            (Coercion::Table(t), SVal::Fin(i)) if *i < t.len() => SVal::Fin(t[*i]),
            _ => return Err(Error::ShapeMismatch(format!("coercion {self:?} does not apply to {x}"))),
        })
    }
}

/// `(R_d, R_c, ι)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemiringPair {
    pub d: Semiring,
    pub c: Semiring,
    pub iota: Coercion,
}

impl SemiringPair {
    /// `(ℕ, ℕ[y])` with constants.
    pub fn nat_poly() -> Self {
        SemiringPair { d: Semiring::Nat, c: Semiring::Poly, iota: Coercion::Constant }
    }

    /// `(ℕ, ℕ)` with the identity.
    pub fn nat_nat() -> Self {
        SemiringPair { d: Semiring::Nat, c: Semiring::Nat, iota: Coercion::Identity }
    }

    /// Both sides the same finite semiring with the identity.
    pub fn finite(f: FiniteSemiring) -> Self {
        SemiringPair { d: Semiring::Finite(f.clone()), c: Semiring::Finite(f), iota: Coercion::Identity }
    }

    /// `{"d": tables, "c": tables, "iota": [..]}` with tables as in [`FiniteSemiring::from_json`].
    pub fn from_json(s: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(s)?;
        let side = |k: &str| -> Result<FiniteSemiring> {
            let t = v.get(k).ok_or_else(|| Error::Parse(format!("missing {k}")))?;
            FiniteSemiring::from_json(&t.to_string())
        };
        let (d, c) = (side("d")?, side("c")?);
        let iota = match v.get("iota") {
            Some(t) => Coercion::Table(serde_json::from_value(t.clone())?),
            None => Coercion::Identity,
        };
        Ok(SemiringPair { d: Semiring::Finite(d), c: Semiring::Finite(c), iota })
    }

    pub fn side(&self, color: Color) -> &Semiring {
        match color {
            Color::D => &self.d,
            Color::C => &self.c,
        }
    }

    /// `x` moved from color `from` to color `to`.
    pub fn coerce(&self, x: &SVal, from: Color, to: Color) -> Result<SVal> {
        match (from, to) {
            (Color::D, Color::C) => self.iota.apply(x),
            (a, b) if a == b => Ok(x.clone()),
            _ => Err(Error::ColorMismatch("no coercion from c to d".into())),
        }
    }

    /// Semiring laws on both sides and the homomorphism laws of `ι`,
    /// exhaustively for finite sides and on `samples` triples otherwise.
    pub fn validate(&self, rng: &mut ChaCha8Rng, samples: usize) -> Report {
        let mut report = Report::new(format!("semiring pair ({},{})", self.d.name(), self.c.name()));
        for color in Color::ALL {
            let s = self.side(color);
            let triples: Vec<[SVal; 3]> = match s.elements() {
                Some(es) => {
                    let mut out = vec![];
                    for x in &es {
                        for y in &es {
                            for z in &es {
                                out.push([x.clone(), y.clone(), z.clone()]);
                            }
                        }
                    }
                    out
                }
                None => (0..samples).map(|_| [s.sample(rng), s.sample(rng), s.sample(rng)]).collect(),
            };
            let mut laws = Check::new(format!("{color}: semiring laws"));
            for [x, y, z] in &triples {
                let ok = (|| -> Result<bool> {
                    let (a, m) = (|p: &SVal, q: &SVal| s.add(p, q), |p: &SVal, q: &SVal| s.mul(p, q));
                    Ok(a(&a(x, y)?, z)? == a(x, &a(y, z)?)?
                        && a(x, y)? == a(y, x)?
                        && a(x, &s.zero())? == *x
                        && m(&m(x, y)?, z)? == m(x, &m(y, z)?)?
                        && m(x, y)? == m(y, x)?
                        && m(x, &s.one())? == *x
                        && m(x, &s.zero())? == s.zero()
                        && m(x, &a(y, z)?)? == a(&m(x, y)?, &m(x, z)?)?)
                })();
                laws.record_result(ok, || format!("x={x} y={y} z={z}"));
            }
            report.push(laws);
        }
        let mut hom = Check::new("iota is a homomorphism");
        let pairs: Vec<(SVal, SVal)> = match self.d.elements() {
            Some(es) => es.iter().flat_map(|x| es.iter().map(move |y| (x.clone(), y.clone()))).collect(),
            None => (0..samples).map(|_| (self.d.sample(rng), self.d.sample(rng))).collect(),
        };
        let i = |x: &SVal| self.iota.apply(x);
        hom.record_result(i(&self.d.zero()).map(|z| z == self.c.zero()), || "iota(0)".into());
        hom.record_result(i(&self.d.one()).map(|o| o == self.c.one()), || "iota(1)".into());
        for (x, y) in &pairs {
            let ok = (|| -> Result<bool> {
                Ok(i(&self.d.add(x, y)?)? == self.c.add(&i(x)?, &i(y)?)?
                    && i(&self.d.mul(x, y)?)? == self.c.mul(&i(x)?, &i(y)?)?)
            })();
            hom.record_result(ok, || format!("x={x} y={y}"));
        }
        report.push(hom);
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn polynomial_arithmetic() {
        let p = Poly::constant(BigUint::from(3u8)).add(&Poly::y());
        assert_eq!(p.to_string(), "3 + y");
        assert_eq!(p.mul(&p).to_string(), "9 + 6y + y^2");
        assert_eq!(Poly::default().mul(&p), Poly::default());
    }

    #[test]
    fn default_pairs_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for s in [SemiringPair::nat_poly(), SemiringPair::nat_nat(), SemiringPair::finite(FiniteSemiring::modular(3))] {
            let r = s.validate(&mut rng, 200);
            assert!(r.passed(), "{}", r.to_text());
        }
    }

    #[test]
    fn scaled_coercion_is_not_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let s = SemiringPair { iota: Coercion::Scaled(2), ..SemiringPair::nat_poly() };
        assert!(!s.validate(&mut rng, 50).passed());
    }

    #[test]
    fn finite_json_is_normalized() {
        // Boolean semiring with zero listed second
        let js = r#"{"name":"B","size":2,"zero":1,"one":0,"add":[[0,0],[0,1]],"mul":[[0,1],[1,1]]}"#;
        let b = FiniteSemiring::from_json(js).unwrap();
        assert_eq!(b.add, vec![vec![0, 1], vec![1, 1]]);
        assert_eq!(b.mul, vec![vec![0, 0], vec![0, 1]]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(SemiringPair::finite(b).validate(&mut rng, 0).passed());
    }

    #[test]
    fn broken_table_is_caught() {
        let mut f = FiniteSemiring::modular(3);
        f.add[1][2] = 1;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(!SemiringPair::finite(f).validate(&mut rng, 0).passed());
    }
}
