//! Relative double loop pairs and their `Emb→_U`-action.

use std::fmt;
use std::sync::Arc;

use super::emb::EmbSystem;
use super::{dist, norm};
use crate::error::{Error, Result};
use crate::sets::Color;

/// Values in a pointed set; `None` is the basepoint.
pub type LoopVal = Option<String>;

type LoopFn = dyn Fn(&[f64]) -> LoopVal + Send + Sync;

/// A based map `S^U → Y_⋆`; points at infinity are represented by `None`
/// arguments and always go to the basepoint.
#[derive(Clone)]
pub struct LoopMap {
    pub color: Color,
    pub dim: usize,
    f: Arc<LoopFn>,
}

impl fmt::Debug for LoopMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LoopMap({}, dim {})", self.color, self.dim)
    }
}

impl LoopMap {
    pub fn new(color: Color, dim: usize, f: impl Fn(&[f64]) -> LoopVal + Send + Sync + 'static) -> Self {
        LoopMap { color, dim, f: Arc::new(f) }
    }

    /// `value` on the open ball, basepoint elsewhere.
    pub fn bump(color: Color, center: Vec<f64>, radius: f64, value: &str) -> Self {
        let dim = center.len();
        let value = value.to_string();
        LoopMap::new(color, dim, move |u| (dist(u, &center) < radius).then(|| value.clone()))
    }

    /// A value for each of finitely many shells around the origin.
    pub fn shells(color: Color, dim: usize, values: Vec<String>) -> Self {
        LoopMap::new(color, dim, move |u| {
            let r = norm(u);
            values.get(r.floor() as usize).cloned()
        })
    }

    pub fn eval(&self, u: Option<&[f64]>) -> LoopVal {
        u.and_then(|u| (self.f)(u))
    }
}

/// `α⟨γ^a⟩`: `γ^a(α_a^{-1} u)` on the image of `α_a`, coerced by `iota` when
/// the colors of `a` and of the arity differ, and the basepoint elsewhere.
pub fn loop_act(
    alpha: &EmbSystem,
    gammas: &[LoopMap],
    iota: impl Fn(&str) -> String + Send + Sync + 'static,
) -> Result<LoopMap> {
    if gammas.len() != alpha.arity.len() {
        return Err(Error::ShapeMismatch("one loop per embedding".into()));
    }
    for ((l, c), g) in alpha.arity.iter().zip(gammas) {
        if g.color != c {
            return Err(Error::ColorMismatch(format!("loop of color {} at input {l} of color {c}", g.color)));
        }
    }
    let ambient = alpha.arity.ambient();
    let alpha = alpha.clone();
    let gammas = gammas.to_vec();
    let dim = alpha.dim.max(gammas.iter().map(|g| g.dim).max().unwrap_or(0));
    Ok(LoopMap::new(ambient, dim, move |u| {
        let (a, x) = alpha.locate(u)?;
        let v = gammas[a].eval(Some(&x))?;
        Some(if alpha.arity.color_at(a) == ambient { v } else { iota(&v) })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Config;
    use crate::geom::EmbOperad;
    use crate::operad::Operad;
    use crate::sets::RelSet;

    fn iota(s: &str) -> String {
        format!("i({s})")
    }

    #[test]
    fn values_inside_and_outside_the_balls() {
        let a = RelSet::canonical(1, 1, Color::C).unwrap();
        let alpha = Config::new(a, 1, vec![vec![0.0], vec![4.0]]).unwrap().chi();
        let g1 = LoopMap::bump(Color::D, vec![0.0], 1e9, "x");
        let g2 = LoopMap::bump(Color::C, vec![0.0], 1e9, "y");
        let h = loop_act(&alpha, &[g1, g2], iota).unwrap();
        assert_eq!(h.eval(Some(&[0.5])), Some("i(x)".into()));
        assert_eq!(h.eval(Some(&[4.5])), Some("y".into()));
        assert_eq!(h.eval(Some(&[2.0])), None);
        assert_eq!(h.eval(Some(&[100.0])), None);
        assert_eq!(h.eval(None), None);
    }

    #[test]
    fn unit_reindexes() {
        let op = EmbOperad::new(1);
        let g = LoopMap::shells(Color::C, 1, vec!["p".into(), "q".into()]);
        let h = loop_act(&op.unit(Color::C), std::slice::from_ref(&g), iota).unwrap();
        for u in [0.2, 1.5, -1.2, 7.0] {
            assert_eq!(h.eval(Some(&[u])), g.eval(Some(&[u])));
        }
    }

    #[test]
    fn action_is_associative_at_samples() {
        let op = EmbOperad::new(1);
        let a = RelSet::canonical(0, 2, Color::C).unwrap();
        let b = RelSet::canonical(1, 1, Color::C).unwrap();
        let alpha = Config::new(a, 1, vec![vec![-1.0], vec![1.0]]).unwrap().chi();
        let beta = Config::new(b.clone(), 1, vec![vec![0.0], vec![2.0]]).unwrap().chi();
        let gamma = Config::new(b, 1, vec![vec![-3.0], vec![3.0]]).unwrap().chi();
        let loops = [
            LoopMap::shells(Color::D, 1, vec!["a".into(), "b".into()]),
            LoopMap::shells(Color::C, 1, vec!["c".into()]),
            LoopMap::shells(Color::D, 1, vec!["d".into(), "e".into(), "f".into()]),
            LoopMap::shells(Color::C, 1, vec!["g".into(), "h".into()]),
        ];
        let composite = op.compose(&alpha, &[beta.clone(), gamma.clone()]).unwrap();
        let lhs = loop_act(&composite, &loops, iota).unwrap();
        let inner1 = loop_act(&beta, &loops[..2], iota).unwrap();
        let inner2 = loop_act(&gamma, &loops[2..], iota).unwrap();
        let rhs = loop_act(&alpha, &[inner1, inner2], iota).unwrap();
        for k in 0..400 {
            let u = -3.0 + 6.0 * k as f64 / 400.0;
            assert_eq!(lhs.eval(Some(&[u])), rhs.eval(Some(&[u])), "at {u}");
        }
    }
}
