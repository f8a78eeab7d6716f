//! Finitely presented linear isometries and the relative linear isometries operad.
//!
//! An isometry is a word in two kinds of atoms: an orthogonal matrix acting
//! on the first `k ≤ 4` coordinates, and a coordinate shift `e_i ↦ e_{p·i+q}`.
//! Both are isometries of the finitely supported vectors, so elements of any
//! arity compose without dimension bookkeeping.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{add, at, close_vec, decimal_rows, sample_point, sub, SAMPLES, TOLERANCE};
use crate::error::{Error, Result};
use crate::operad::{check_action, check_inner, Operad};
use crate::sets::{dep_sum, Color, Flavor, RelMap, RelSet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IsoAtom {
    /// Rows of an orthogonal matrix acting on the leading coordinates.
    Rot {
        #[serde(with = "decimal_rows")]
        rows: Vec<Vec<f64>>,
    },
    Shift {
        stride: usize,
        offset: usize,
    },
}

impl IsoAtom {
    fn apply(&self, v: &[f64]) -> Vec<f64> {
        match self {
            IsoAtom::Rot { rows } => {
                let k = rows.len();
                let mut out: Vec<f64> = v.to_vec();
                if out.len() < k {
                    out.resize(k, 0.0);
                }
                for (i, row) in rows.iter().enumerate() {
                    out[i] = row.iter().enumerate().map(|(j, q)| q * at(v, j)).sum();
                }
                out
            }
            IsoAtom::Shift { stride, offset } => {
                if v.is_empty() {
                    return vec![];
                }
                let mut out = vec![0.0; stride * (v.len() - 1) + offset + 1];
                for (i, x) in v.iter().enumerate() {
                    out[stride * i + offset] = *x;
                }
                out
            }
        }
    }

    fn adjoint(&self, v: &[f64]) -> Vec<f64> {
        match self {
            IsoAtom::Rot { rows } => {
                let k = rows.len();
                let mut out: Vec<f64> = v.to_vec();
                if out.len() < k {
                    out.resize(k, 0.0);
                }
                for (j, slot) in out.iter_mut().enumerate().take(k) {
                    *slot = (0..k).map(|i| rows[i][j] * at(v, i)).sum();
                }
                out
            }
            IsoAtom::Shift { stride, offset } => {
                if v.len() <= *offset {
                    return vec![];
                }
                (0..=(v.len() - 1 - offset) / stride).map(|i| at(v, stride * i + offset)).collect()
            }
        }
    }

    /// A random orthogonal `k×k` matrix from the QR factorization of a uniform one.
    pub fn random_rot(rng: &mut ChaCha8Rng, k: usize) -> IsoAtom {
        loop {
            let m: DMatrix<f64> = DMatrix::from_fn(k, k, |_, _| rng.gen_range(-1.0..1.0));
            if m.determinant().abs() < 1e-3 {
                continue;
            }
            let q = m.qr().q();
            let rows = (0..k).map(|i| (0..k).map(|j| q[(i, j)]).collect()).collect();
            return IsoAtom::Rot { rows };
        }
    }
}

/// A word of atoms, applied first to last. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IsoExpr {
    pub atoms: Vec<IsoAtom>,
}

impl IsoExpr {
    pub fn identity() -> Self {
        IsoExpr::default()
    }

    pub fn is_identity(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.atoms.iter().fold(v.to_vec(), |acc, a| a.apply(&acc))
    }

    pub fn adjoint(&self, v: &[f64]) -> Vec<f64> {
        self.atoms.iter().rev().fold(v.to_vec(), |acc, a| a.adjoint(&acc))
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &IsoExpr) -> IsoExpr {
        IsoExpr { atoms: inner.atoms.iter().chain(&self.atoms).cloned().collect() }
    }

    /// A bound on the coordinates reached from the first `n` coordinates.
    pub fn image_support(&self, n: usize) -> usize {
        (0..n)
            .map(|i| {
                let mut e = vec![0.0; i + 1];
                e[i] = 1.0;
                self.apply(&e).len()
            })
            .max()
            .unwrap_or(0)
    }

    /// The projection `f fᵀ v` onto the image.
    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        self.apply(&self.adjoint(v))
    }
}

/// `Σ_a f_a g_a(f_aᵀ v) + (v − Σ_a f_a f_aᵀ v)` for jointly isometric `f_a`.
pub fn block_action(blocks: &[(&IsoExpr, Vec<f64>)], v: &[f64]) -> Vec<f64> {
    let mut out = v.to_vec();
    for (f, gv) in blocks {
        out = add(&sub(&out, &f.project(v)), &f.apply(gv));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsoElem {
    pub arity: RelSet,
    pub blocks: Vec<IsoExpr>,
}

impl IsoElem {
    /// Largest deviation of the Gram matrix of all block columns from the
    /// identity, over the first `n` input coordinates of each block.
    pub fn orthonormality_defect(&self, n: usize) -> f64 {
        let cols: Vec<Vec<f64>> = self
            .blocks
            .iter()
            .flat_map(|f| {
                (0..n).map(move |i| {
                    let mut e = vec![0.0; i + 1];
                    e[i] = 1.0;
                    f.apply(&e)
                })
            })
            .collect();
        let mut worst: f64 = 0.0;
        for (i, x) in cols.iter().enumerate() {
            for (j, y) in cols.iter().enumerate() {
                let dot: f64 = (0..x.len().min(y.len())).map(|k| x[k] * y[k]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - want).abs());
            }
        }
        worst
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let d = self.orthonormality_defect(n);
        if d > 1e-12 {
            return Err(Error::NonOrthonormal(d));
        }
        Ok(())
    }
}

/// `𝓛→` on finitely supported vectors; rotations act on at most `max_rot` coordinates.
#[derive(Debug, Clone)]
pub struct IsometryOperad {
    pub max_rot: usize,
    /// Coordinates probed by sampled equality.
    pub probe_dim: usize,
}

impl Default for IsometryOperad {
    fn default() -> Self {
        IsometryOperad { max_rot: 4, probe_dim: 12 }
    }
}

impl IsometryOperad {
    /// A random element: per-block rotations, interleaving shifts, and a common rotation.
    pub fn random(&self, rng: &mut ChaCha8Rng, arity: &RelSet) -> IsoElem {
        let n = arity.len();
        let k = rng.gen_range(1..=self.max_rot);
        let outer = IsoAtom::random_rot(rng, k);
        let blocks = (0..n)
            .map(|a| {
                let k = rng.gen_range(1..=self.max_rot);
                let mut atoms = vec![IsoAtom::random_rot(rng, k)];
                if n > 1 {
                    atoms.push(IsoAtom::Shift { stride: n, offset: a });
                }
                atoms.push(outer.clone());
                IsoExpr { atoms }
            })
            .collect();
        IsoElem { arity: arity.clone(), blocks }
    }

    fn reorder(&self, alpha: &IsoElem, sigma: &RelMap) -> IsoElem {
        let blocks = sigma
            .source()
            .labels()
            .map(|s| {
                let t = sigma.apply(s).expect("total");
                alpha.blocks[alpha.arity.index_of(t).expect("in arity")].clone()
            })
            .collect();
        IsoElem { arity: sigma.source().clone(), blocks }
    }
}

impl Operad for IsometryOperad {
    type Elem = IsoElem;

    fn name(&self) -> String {
        "L".into()
    }

    fn arity<'a>(&self, alpha: &'a IsoElem) -> &'a RelSet {
        &alpha.arity
    }

    fn unit(&self, color: Color) -> IsoElem {
        IsoElem { arity: RelSet::singleton(color), blocks: vec![IsoExpr::identity()] }
    }

    fn point(&self, color: Color) -> IsoElem {
        IsoElem { arity: RelSet::empty(color), blocks: vec![] }
    }

    fn compose(&self, alpha: &IsoElem, inner: &[IsoElem]) -> Result<IsoElem> {
        check_inner(&alpha.arity, &inner.iter().map(|g| &g.arity).collect::<Vec<_>>())?;
        let fam: Vec<RelSet> = inner.iter().map(|g| g.arity.clone()).collect();
        let blocks =
            alpha.blocks.iter().zip(inner).flat_map(|(f, g)| g.blocks.iter().map(move |gb| f.after(gb))).collect();
        Ok(IsoElem { arity: dep_sum(&alpha.arity, &fam)?, blocks })
    }

    fn act(&self, alpha: &IsoElem, sigma: &RelMap) -> Result<IsoElem> {
        check_action(&alpha.arity, sigma)?;
        Ok(self.reorder(alpha, sigma))
    }

    /// The extension to color-forgetting bijections is by identity maps.
    fn recolor(&self, alpha: &IsoElem, sigma: &RelMap) -> Result<IsoElem> {
        if sigma.target() != &alpha.arity || !sigma.is_bijective() {
            return Err(Error::NotInvertible("recoloring needs a bijection onto the arity".into()));
        }
        Ok(self.reorder(alpha, sigma))
    }

    fn same(&self, a: &IsoElem, b: &IsoElem) -> bool {
        if a.arity != b.arity || a.blocks.len() != b.blocks.len() {
            return false;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x15_0e7);
        (0..SAMPLES).all(|_| {
            let v = sample_point(&mut rng, self.probe_dim, 2.0);
            a.blocks.iter().zip(&b.blocks).all(|(f, g)| {
                close_vec(&f.apply(&v), &g.apply(&v), TOLERANCE) && close_vec(&f.adjoint(&v), &g.adjoint(&v), TOLERANCE)
            })
        })
    }

    fn elements_at(&self, arity: &RelSet, rng: &mut ChaCha8Rng, budget: usize) -> Vec<IsoElem> {
        if arity.is_empty() {
            return vec![self.point(arity.ambient())];
        }
        (0..budget.max(1)).map(|_| self.random(rng, arity)).collect()
    }
}

/// Whether `sigma` may reindex `𝓛` elements (any bijection, colors ignored).
pub fn is_reindexing(sigma: &RelMap) -> bool {
    sigma.is_bijective() && matches!(sigma.flavor(), Flavor::Bij | Flavor::BijAny)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::{check_operad_axioms, AxiomConfig};

    #[test]
    fn random_elements_are_jointly_isometric() {
        let op = IsometryOperad::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 0..4 {
            let a = RelSet::canonical(0, n, Color::C).unwrap();
            let f = op.random(&mut rng, &a);
            f.validate(6).unwrap();
        }
    }

    #[test]
    fn adjoint_inverts_on_the_image() {
        let op = IsometryOperad::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = op.random(&mut rng, &RelSet::canonical(0, 3, Color::C).unwrap());
        for b in &f.blocks {
            let v = sample_point(&mut rng, 5, 1.0);
            assert!(close_vec(&b.adjoint(&b.apply(&v)), &v, 1e-12));
        }
    }

    #[test]
    fn axioms_hold() {
        let cfg = AxiomConfig { trials: 60, budget: 4, ..Default::default() };
        let r = check_operad_axioms(&IsometryOperad::default(), &cfg);
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn matrices_serialize_as_decimal_strings() {
        let e = IsoExpr { atoms: vec![IsoAtom::Rot { rows: vec![vec![0.0, 1.0], vec![1.0, 0.0]] }] };
        let js = serde_json::to_string(&e).unwrap();
        assert!(js.contains("\"1.0\""));
        assert_eq!(serde_json::from_str::<IsoExpr>(&js).unwrap(), e);
    }
}
