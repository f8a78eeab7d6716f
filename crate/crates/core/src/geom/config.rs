//! Configurations of distinct points and the radial map `χ_U`.

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::emb::{EmbExpr, EmbSystem};
use super::{decimal_rows, dist, sample_point};
use crate::error::{Error, Result};
use crate::sets::RelSet;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub arity: RelSet,
    pub dim: usize,
    #[serde(with = "decimal_rows")]
    pub points: Vec<Vec<f64>>,
}

impl Config {
    pub fn new(arity: RelSet, dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimMismatch("configurations live in a positive dimension".into()));
        }
        if points.len() != arity.len() {
            return Err(Error::ShapeMismatch(format!("{} points for {} labels", points.len(), arity.len())));
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimMismatch(format!("point of dimension {} in dimension {dim}", p.len())));
        }
        let cfg = Config { arity, dim, points };
        if cfg.min_distance() == Some(0.0) {
            return Err(Error::DegenerateConfig("coincident points".into()));
        }
        Ok(cfg)
    }

    /// Minimal pairwise distance, `None` below two points.
    pub fn min_distance(&self) -> Option<f64> {
        let mut m: Option<f64> = None;
        for i in 0..self.points.len() {
            for j in i + 1..self.points.len() {
                let d = dist(&self.points[i], &self.points[j]);
                m = Some(m.map_or(d, |x| x.min(d)));
            }
        }
        m
    }

    /// Points uniform in `[-3,3]^dim`, redrawn until no two are closer than `1e-3`.
    pub fn random(rng: &mut ChaCha8Rng, arity: RelSet, dim: usize) -> Self {
        loop {
            let points = (0..arity.len()).map(|_| sample_point(rng, dim, 3.0)).collect();
            let cfg = Config { arity: arity.clone(), dim, points };
            if cfg.min_distance().is_none_or(|m| m > 1e-3) {
                return cfg;
            }
        }
    }

    /// `χ_U x = ⟨u ↦ x_a + m u / (m + 2‖u‖)⟩`; a single point gives the translation.
    pub fn chi(&self) -> EmbSystem {
        let scale = self.min_distance();
        let comps = self.points.iter().map(|x| EmbExpr::Radial { center: x.clone(), scale }).collect();
        EmbSystem { arity: self.arity.clone(), dim: self.dim, comps }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::Color;

    fn line(points: &[f64]) -> Config {
        let a = RelSet::canonical(0, points.len(), Color::C).unwrap();
        Config::new(a, 1, points.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    #[test]
    fn chi_on_two_points() {
        let e = line(&[0.0, 1.0]).chi();
        assert_eq!(e.comps[0].eval(&[1.0]), vec![1.0 / 3.0]);
    }

    #[test]
    fn singleton_is_translation() {
        let e = line(&[2.5]).chi();
        assert_eq!(e.comps[0].eval(&[4.0]), vec![6.5]);
    }

    #[test]
    fn balls_for_far_points() {
        let e = line(&[0.0, 10.0]).chi();
        for (k, c) in e.comps.iter().enumerate() {
            let center = 10.0 * k as f64;
            for u in [-1e6, -3.0, 0.0, 2.0, 1e6] {
                let v = c.eval(&[u])[0];
                assert!((v - center).abs() < 5.0);
            }
        }
    }

    #[test]
    fn coincident_points_are_rejected() {
        let a = RelSet::canonical(0, 2, Color::C).unwrap();
        assert!(matches!(Config::new(a, 1, vec![vec![1.0], vec![1.0]]), Err(Error::DegenerateConfig(_))));
    }

    #[test]
    fn decimal_json() {
        let cfg = line(&[0.5, -2.0]);
        let js = serde_json::to_string(&cfg).unwrap();
        assert!(js.contains("\"0.5\""));
        assert_eq!(serde_json::from_str::<Config>(&js).unwrap(), cfg);
    }
}
