//! Numeric models of the geometric relative operads.
//!
//! Vectors are finitely supported: a `Vec<f64>` stands for its extension by
//! zeros, so every map here is defined on all finite stages at once and
//! padding is implicit. A component supported in the first `n` coordinates
//! acts as the identity on the rest.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub mod config;
pub mod emb;
pub mod iso;
pub mod loops;
pub mod steiner;

pub use config::Config;
pub use emb::{EmbExpr, EmbOperad, EmbSystem};
pub use iso::{IsoAtom, IsoElem, IsoExpr, IsometryOperad};
pub use loops::{loop_act, LoopMap};
pub use steiner::{phibar, psi, steiner_from_config, SteinExpr, SteinerOperad, SteinerSystem};

/// Relative tolerance for sampled equality.
pub const TOLERANCE: f64 = 1e-9;
/// Sample points per sampled comparison.
pub const SAMPLES: usize = 200;

pub fn close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * 1f64.max(x.abs()).max(y.abs())
}

/// Componentwise [`close`] after zero-extending the shorter vector.
pub fn close_vec(a: &[f64], b: &[f64], tol: f64) -> bool {
    let n = a.len().max(b.len());
    (0..n).all(|i| close(at(a, i), at(b, i), tol))
}

pub(crate) fn at(v: &[f64], i: usize) -> f64 {
    v.get(i).copied().unwrap_or(0.0)
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    (0..n).map(|i| at(a, i) + at(b, i)).collect()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    (0..n).map(|i| at(a, i) - at(b, i)).collect()
}

pub(crate) fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    norm(&sub(a, b))
}

/// A point of `[-r, r]^n`.
pub fn sample_point(rng: &mut ChaCha8Rng, n: usize, r: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-r..=r)).collect()
}

/// Times for sampling paths; both endpoints are always included.
pub fn sample_time(rng: &mut ChaCha8Rng, k: usize) -> f64 {
    match k % 10 {
        0 => 0.0,
        1 => 1.0,
        _ => rng.gen_range(0.0..=1.0),
    }
}

/// Serde for vectors as arrays of decimal strings.
pub mod decimal {
    use super::*;

    pub fn to_strings(v: &[f64]) -> Vec<String> {
        v.iter().map(|x| format!("{x:?}")).collect()
    }

    pub fn from_strings(v: &[String]) -> Result<Vec<f64>, String> {
        v.iter().map(|s| s.trim().parse::<f64>().map_err(|e| format!("{s}: {e}"))).collect()
    }

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        to_strings(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        from_strings(&raw).map_err(serde::de::Error::custom)
    }
}

/// Serde for lists of vectors (matrix rows, configuration points).
pub mod decimal_rows {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<f64>], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|r| decimal::to_strings(r)).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<f64>>, D::Error> {
        let raw = Vec::<Vec<String>>::deserialize(d)?;
        raw.iter().map(|r| decimal::from_strings(r)).collect::<Result<_, _>>().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_extension() {
        assert!(close_vec(&[1.0, 0.0], &[1.0], TOLERANCE));
        assert_eq!(add(&[1.0], &[0.0, 2.0]), vec![1.0, 2.0]);
        assert!(!close(1.0, 1.0 + 1e-6, TOLERANCE));
    }
}
