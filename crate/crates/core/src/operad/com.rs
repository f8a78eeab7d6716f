use rand_chacha::ChaCha8Rng;

use super::{check_action, check_inner, Operad};
use crate::error::{Error, Result};
use crate::sets::{dep_sum, Color, Flavor, RelMap, RelSet};

/// The terminal relative operad: one point in every arity, recorded by the
/// arity itself.
#[derive(Debug, Clone, Copy, Default)]
pub struct Com;

impl Operad for Com {
    type Elem = RelSet;

    fn name(&self) -> String {
        "Com".into()
    }

    fn arity<'a>(&self, alpha: &'a RelSet) -> &'a RelSet {
        alpha
    }

    fn unit(&self, color: Color) -> RelSet {
        RelSet::singleton(color)
    }

    fn point(&self, color: Color) -> RelSet {
        RelSet::empty(color)
    }

    fn compose(&self, alpha: &RelSet, inner: &[RelSet]) -> Result<RelSet> {
        check_inner(alpha, &inner.iter().collect::<Vec<_>>())?;
        dep_sum(alpha, inner)
    }

    fn act(&self, alpha: &RelSet, sigma: &RelMap) -> Result<RelSet> {
        check_action(alpha, sigma)?;
        Ok(sigma.source().clone())
    }

    fn same(&self, a: &RelSet, b: &RelSet) -> bool {
        a == b
    }

    fn elements_at(&self, arity: &RelSet, _rng: &mut ChaCha8Rng, _budget: usize) -> Vec<RelSet> {
        vec![arity.clone()]
    }

    fn recolor(&self, alpha: &RelSet, sigma: &RelMap) -> Result<RelSet> {
        if sigma.target() != alpha || !matches!(sigma.flavor(), Flavor::Bij | Flavor::BijAny) {
            return Err(Error::ShapeMismatch("recoloring needs a bijection onto the arity".into()));
        }
        Ok(sigma.source().clone())
    }
}
