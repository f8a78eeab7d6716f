//! Exact partitions of the unit interval and monotone maps of `Δ`.
//!
//! `Part^⟨m⟩` is the set of weakly increasing `m`-tuples in `[0,1]`. A
//! monotone map `φ: ⟨n⟩ → ⟨m⟩` pushes a partition of level `n` forward to
//! one of level `m` by moving the gap masses between consecutive
//! coordinates.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A monotone map `⟨n⟩ → ⟨m⟩` where `⟨k⟩ = {0,…,k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimplexMap {
    values: Vec<usize>,
    cod: usize,
}

impl SimplexMap {
    pub fn new(values: Vec<usize>, cod: usize) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::NotMonotone("a map out of ⟨n⟩ has n+1 values".into()));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::NotMonotone(format!("{values:?}")));
        }
        if values.iter().any(|&v| v > cod) {
            return Err(Error::IndexOutOfRange { index: *values.iter().max().expect("nonempty"), max: cod });
        }
        Ok(SimplexMap { values, cod })
    }

    pub fn identity(n: usize) -> Self {
        SimplexMap { values: (0..=n).collect(), cod: n }
    }

    /// The coface `∂_i: ⟨m-1⟩ → ⟨m⟩` skipping `i`.
    pub fn coface(m: usize, i: usize) -> Result<Self> {
        if m == 0 || i > m {
            return Err(Error::IndexOutOfRange { index: i, max: m });
        }
        Ok(SimplexMap { values: (0..=m).filter(|&k| k != i).collect(), cod: m })
    }

    /// The codegeneracy `δ_i: ⟨m+1⟩ → ⟨m⟩` hitting `i` twice.
    pub fn codegeneracy(m: usize, i: usize) -> Result<Self> {
        if i > m {
            return Err(Error::IndexOutOfRange { index: i, max: m });
        }
        let mut values: Vec<usize> = (0..=m).collect();
        values.insert(i, i);
        Ok(SimplexMap { values, cod: m })
    }

    pub fn dom(&self) -> usize {
        self.values.len() - 1
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, i: usize) -> usize {
        self.values[i]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &SimplexMap) -> Result<SimplexMap> {
        if first.cod != self.dom() {
            return Err(Error::DomainMismatch(format!("⟨{}⟩ vs ⟨{}⟩", first.cod, self.dom())));
        }
        Ok(SimplexMap { values: first.values.iter().map(|&v| self.values[v]).collect(), cod: self.cod })
    }

    pub fn is_surjective(&self) -> bool {
        (0..=self.cod).all(|k| self.values.contains(&k))
    }

    /// A uniformly drawn monotone map `⟨n⟩ → ⟨m⟩`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> Self {
        let mut values: Vec<usize> = (0..=n).map(|_| rng.gen_range(0..=m)).collect();
        values.sort_unstable();
        SimplexMap { values, cod: m }
    }
}

/// A weakly increasing tuple of exact rationals in `[0,1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    coords: Vec<BigRational>,
}

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

impl Partition {
    pub fn new(coords: Vec<BigRational>) -> Result<Self> {
        let zero = BigRational::zero();
        let one = BigRational::one();
        if coords.iter().any(|t| *t < zero || *t > one) {
            return Err(Error::InvalidPartition("coordinates must lie in [0,1]".into()));
        }
        if coords.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidPartition("coordinates must be weakly increasing".into()));
        }
        Ok(Partition { coords })
    }

    /// Parse entries such as `"1/3"`, `"0"`, `"1"`.
    pub fn parse<S: AsRef<str>>(items: &[S]) -> Result<Self> {
        let coords = items.iter().map(|s| parse_rational(s.as_ref())).collect::<Result<Vec<_>>>()?;
        Partition::new(coords)
    }

    pub fn from_fracs(fracs: &[(i64, i64)]) -> Result<Self> {
        Partition::new(fracs.iter().map(|&(p, q)| rat(p, q)).collect())
    }

    pub fn empty() -> Self {
        Partition { coords: vec![] }
    }

    pub fn level(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    /// `∂_i·t`: insert a coordinate (0 at the front, 1 at the back, a copy of
    /// `t^{i-1}` in the middle).
    pub fn coface(&self, i: usize) -> Result<Partition> {
        let m = self.level() + 1;
        if i > m {
            return Err(Error::IndexOutOfRange { index: i, max: m });
        }
        let mut c = self.coords.clone();
        if i == 0 {
            c.insert(0, BigRational::zero());
        } else if i == m {
            c.push(BigRational::one());
        } else {
            c.insert(i, self.coords[i - 1].clone());
        }
        Ok(Partition { coords: c })
    }

    /// `δ_i·t`: delete `t^i`.
    pub fn codegeneracy(&self, i: usize) -> Result<Partition> {
        if i >= self.level() {
            return Err(Error::IndexOutOfRange { index: i, max: self.level().saturating_sub(1) });
        }
        let mut c = self.coords.clone();
        c.remove(i);
        Ok(Partition { coords: c })
    }

    /// Gap masses `t^j - t^{j-1}` with `t^{-1} = 0`, `t^m = 1`.
    pub fn gaps(&self) -> Vec<BigRational> {
        let mut prev = BigRational::zero();
        let mut out = Vec::with_capacity(self.level() + 1);
        for t in &self.coords {
            out.push(t - &prev);
            prev = t.clone();
        }
        out.push(BigRational::one() - prev);
        out
    }

    fn from_gaps(gaps: &[BigRational]) -> Partition {
        let mut acc = BigRational::zero();
        let mut coords = Vec::with_capacity(gaps.len().saturating_sub(1));
        for g in &gaps[..gaps.len() - 1] {
            acc += g;
            coords.push(acc.clone());
        }
        Partition { coords }
    }

    /// Whether every coordinate lies in `(0,1)` and they strictly increase.
    pub fn is_strict_interior(&self) -> bool {
        let zero = BigRational::zero();
        let one = BigRational::one();
        self.coords.iter().all(|t| *t > zero && *t < one) && self.coords.windows(2).all(|w| w[0] < w[1])
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, level: usize, max_den: i64) -> Partition {
        let mut coords: Vec<BigRational> = (0..level)
            .map(|_| {
                let q = rng.gen_range(1..=max_den);
                rat(rng.gen_range(0..=q), q)
            })
            .collect();
        coords.sort();
        Partition { coords }
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let parse_int = |x: &str| x.trim().parse::<BigInt>().map_err(|_| Error::Parse(format!("bad rational {s:?}")));
    match s.split_once('/') {
        Some((p, q)) => {
            let q = parse_int(q)?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(parse_int(p)?, q))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "⟨{}⟩", parts.join(","))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        Partition::parse(&v).map_err(serde::de::Error::custom)
    }
}

/// Covariant action of `φ: ⟨n⟩ → ⟨m⟩` on a level-`n` partition by gap
/// pushforward.
pub fn part_act(phi: &SimplexMap, t: &Partition) -> Result<Partition> {
    if phi.dom() != t.level() {
        return Err(Error::DomainMismatch(format!(
            "map out of ⟨{}⟩ applied to a partition of level {}",
            phi.dom(),
            t.level()
        )));
    }
    let mut gaps = vec![BigRational::zero(); phi.cod() + 1];
    for (j, g) in t.gaps().into_iter().enumerate() {
        gaps[phi.apply(j)] += g;
    }
    Ok(Partition::from_gaps(&gaps))
}

/// `⊲_A t^a` together with the extraction maps `δ^a: ⟨Σm⟩ → ⟨m^a⟩`.
pub fn merge(family: &[Partition]) -> Result<(Partition, Vec<SimplexMap>)> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    // Stable sort keeps ties in family order.
    let mut all: Vec<&BigRational> = family.iter().flat_map(|t| t.coords.iter()).collect();
    all.sort();
    let merged = Partition { coords: all.into_iter().cloned().collect() };
    let total = merged.level();
    let deltas = family
        .iter()
        .map(|t| {
            let ma = t.level();
            let mut values: Vec<usize> =
                merged.coords.iter().map(|x| t.coords.iter().position(|y| x <= y).unwrap_or(ma)).collect();
            values.push(ma);
            debug_assert_eq!(values.len(), total + 1);
            SimplexMap::new(values, ma)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((merged, deltas))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(f: &[(i64, i64)]) -> Partition {
        Partition::from_fracs(f).unwrap()
    }

    #[test]
    fn coface_examples() {
        let t = p(&[(1, 3)]);
        assert_eq!(t.coface(0).unwrap(), p(&[(0, 1), (1, 3)]));
        assert_eq!(t.coface(1).unwrap(), p(&[(1, 3), (1, 3)]));
        assert_eq!(t.coface(2).unwrap(), p(&[(1, 3), (1, 1)]));
        assert!(t.coface(3).is_err());
    }

    #[test]
    fn codegeneracy_example() {
        assert_eq!(p(&[(1, 6), (2, 3)]).codegeneracy(0).unwrap(), p(&[(2, 3)]));
    }

    #[test]
    fn part_act_generators_and_example() {
        let t = p(&[(1, 6), (1, 3), (2, 3)]);
        let phi = SimplexMap::new(vec![0, 1, 1, 2], 2).unwrap();
        assert_eq!(part_act(&phi, &t).unwrap(), p(&[(1, 6), (2, 3)]));
        assert_eq!(part_act(&SimplexMap::identity(3), &t).unwrap(), t);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let m = rng.gen_range(1..=5);
            let t = Partition::random(&mut rng, m, 24);
            for i in 0..m {
                let g = SimplexMap::codegeneracy(m - 1, i).unwrap();
                assert_eq!(part_act(&g, &t).unwrap(), t.codegeneracy(i).unwrap());
            }
            for i in 0..=m + 1 {
                let g = SimplexMap::coface(m + 1, i).unwrap();
                assert_eq!(part_act(&g, &t).unwrap(), t.coface(i).unwrap());
            }
        }
        assert!(matches!(part_act(&phi, &p(&[(1, 2)])), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn merge_fig2() {
        let (m, d) = merge(&[p(&[(1, 3)]), p(&[(1, 6), (2, 3)])]).unwrap();
        assert_eq!(m, p(&[(1, 6), (1, 3), (2, 3)]));
        assert_eq!(d[0].values(), &[0, 0, 1, 1]);
        assert_eq!(d[1].values(), &[0, 1, 1, 2]);
        let single = p(&[(1, 4), (1, 2)]);
        let (m, d) = merge(std::slice::from_ref(&single)).unwrap();
        assert_eq!(m, single);
        assert_eq!(d[0], SimplexMap::identity(2));
        assert!(matches!(merge(&[]), Err(Error::EmptyFamily)));
    }

    #[test]
    fn serde_as_strings() {
        let t = p(&[(1, 6), (1, 1)]);
        let js = serde_json::to_string(&t).unwrap();
        assert_eq!(js, r#"["1/6","1"]"#);
        assert_eq!(serde_json::from_str::<Partition>(&js).unwrap(), t);
        assert!(serde_json::from_str::<Partition>(r#"["2/3","1/3"]"#).is_err());
    }
}
