//! Seeded checks of the bar construction: simplicial identities, the
//! resolution map, the structure maps and the realization normal form.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::realize::{
    collapse, eta_prime, realization_mult, realization_theta, realize_normalize, Additive, RealizationPoint,
};
use super::{
    bar_act, bar_degeneracy, bar_face, bar_key, bar_same, com_element, random_element, tree_shapes, BarElement,
};
use crate::error::Result;
use crate::operad::check::{random_arity, ElementCache};
use crate::operad::{Algebra, Com, FreeAlgebra, FreeOperad, Operad, Signature};
use crate::pairs::semiring::Poly;
use crate::pairs::{semiring_gp, ComPair, GpAlgebra, SVal, SemiringGp, SemiringPair};
use crate::partitions::{part_act, rat, Partition, SimplexMap};
use crate::report::{Check, Report};
use crate::sets::{Color, RelSet};
use crate::trees::Tree;

#[derive(Debug, Clone)]
pub struct BarConfig {
    /// Random elements per simplicial check.
    pub trials: usize,
    pub max_height: usize,
    pub max_edges: usize,
    /// Elements enumerated (or sampled) per arity.
    pub budget: usize,
    pub seed: u64,
    /// Use a degeneracy that reverses the leaves.
    pub fault: bool,
}

impl Default for BarConfig {
    fn default() -> Self {
        BarConfig { trials: 1000, max_height: 3, max_edges: 3, budget: 16, seed: 0, fault: false }
    }
}

struct Simplicial<'a, O: Operad, A: Algebra<O>> {
    op: &'a O,
    alg: &'a A,
    fault: bool,
}

impl<O: Operad, A: Algebra<O>> Simplicial<'_, O, A> {
    fn face(&self, b: &BarElement<O::Elem, A::Val>, i: usize) -> Result<BarElement<O::Elem, A::Val>> {
        bar_face(self.op, self.alg, b, i)
    }

    fn degeneracy(&self, b: &BarElement<O::Elem, A::Val>, i: usize) -> Result<BarElement<O::Elem, A::Val>> {
        let mut out = bar_degeneracy(self.op, b, i)?;
        if self.fault {
            out.leaves.reverse();
        }
        Ok(out)
    }

    fn same(&self, x: Result<BarElement<O::Elem, A::Val>>, y: Result<BarElement<O::Elem, A::Val>>) -> Result<bool> {
        Ok(bar_same(self.op, &x?, &y?))
    }

    /// Every identity among `∂_i∂_j`, `δ_iδ_j` and `∂_iδ_j` at `b`.
    fn identities(&self, b: &BarElement<O::Elem, A::Val>, checks: &mut [Check; 3]) {
        let m = b.level();
        for j in 0..=m {
            for i in 0..j {
                if m < 2 {
                    break;
                }
                let lhs = self.face(b, j).and_then(|x| self.face(&x, i));
                let rhs = self.face(b, i).and_then(|x| self.face(&x, j - 1));
                checks[0].record_result(self.same(lhs, rhs), || format!("∂{i}∂{j} on {b:?}"));
            }
        }
        for j in 0..=m {
            for i in 0..=j {
                let lhs = self.degeneracy(b, j).and_then(|x| self.degeneracy(&x, i));
                let rhs = self.degeneracy(b, i).and_then(|x| self.degeneracy(&x, j + 1));
                checks[1].record_result(self.same(lhs, rhs), || format!("δ{i}δ{j} on {b:?}"));
            }
        }
        for j in 0..=m {
            for i in 0..=m + 1 {
                let lhs = self.degeneracy(b, j).and_then(|x| self.face(&x, i));
                let rhs = if i < j {
                    self.face(b, i).and_then(|x| self.degeneracy(&x, j - 1))
                } else if i == j || i == j + 1 {
                    Ok(b.clone())
                } else {
                    self.face(b, i - 1).and_then(|x| self.degeneracy(&x, j))
                };
                checks[2].record_result(self.same(lhs, rhs), || format!("∂{i}δ{j} on {b:?}"));
            }
        }
    }
}

fn simplicial_checks<O: Operad, A: Algebra<O>>(
    op: &O,
    alg: &A,
    cfg: &BarConfig,
    salt: u64,
    leaf: &mut dyn FnMut(Color, &mut ChaCha8Rng) -> A::Val,
) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ salt);
    let mut cache = ElementCache::new(cfg.budget);
    let mut checks = [Check::new("face-face"), Check::new("degeneracy-degeneracy"), Check::new("face-degeneracy")];
    let mut collapse_check = Check::new("collapse is simplicial");
    let s = Simplicial { op, alg, fault: cfg.fault };
    let mut drawn = 0;
    while drawn < cfg.trials {
        let h = rng.gen_range(0..=cfg.max_height);
        let Some(b) = random_element(op, &mut rng, &mut cache, h, cfg.max_edges, leaf) else { continue };
        drawn += 1;
        s.identities(&b, &mut checks);
        if let Ok(whole) = collapse(op, alg, &b) {
            for i in 0..=b.level() {
                if b.level() == 0 {
                    break;
                }
                let routed = bar_face(op, alg, &b, i).and_then(|x| collapse(op, alg, &x));
                collapse_check.record_result(routed.map(|v| v == whole), || format!("∂{i} then collapse on {b:?}"));
            }
        }
    }
    let mut out: Vec<Check> = checks.into_iter().collect();
    out.push(collapse_check);
    out
}

/// A normal realization point with a root of the given color over `Com` with semiring leaves.
fn random_point(
    rng: &mut ChaCha8Rng,
    cache: &mut ElementCache<crate::sets::RelSet>,
    alg: &SemiringGp,
    color: Color,
    cfg: &BarConfig,
) -> Result<RealizationPoint<crate::sets::RelSet, crate::pairs::SVal>> {
    loop {
        let h = rng.gen_range(0..=cfg.max_height.min(3));
        let mut leaf = |c: Color, r: &mut ChaCha8Rng| GpAlgebra::<ComPair>::sample(alg, c, r);
        let Some(b) = random_element(&Com, rng, cache, h, cfg.max_edges, &mut leaf) else { continue };
        if b.tree.root_color() != color {
            continue;
        }
        let t = Partition::random(rng, h, 6);
        return realize_normalize(&Com, alg, &RealizationPoint::new(b, t)?);
    }
}

/// `η′` against `θ` and `χ` on the semiring model.
fn structure_checks(cfg: &BarConfig) -> Vec<Check> {
    let alg = semiring_gp(SemiringPair::nat_poly());
    let pair = ComPair::default();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xba5);
    let mut cache = ElementCache::new(cfg.budget);
    let mut sum = Check::new("eta' intertwines theta");
    let mut prod = Check::new("eta' intertwines chi");
    let mut rep = Check::new("eta' ignores the representative");
    for _ in 0..cfg.trials / 4 {
        let amb = if rng.gen_bool(0.7) { Color::C } else { Color::D };
        let a = random_arity(&mut rng, amb, 3);
        let ps = a.iter().map(|(_, c)| random_point(&mut rng, &mut cache, &alg, c, cfg)).collect::<Result<Vec<_>>>();
        let Ok(ps) = ps else {
            sum.record(false, || "could not draw operands".into());
            continue;
        };
        let values = ps.iter().map(|p| eta_prime(&Com, &alg, p)).collect::<Result<Vec<_>>>();
        let outcome = values.as_ref().map_err(Clone::clone).and_then(|vs| {
            let lhs = eta_prime(&Com, &alg, &realization_theta(&Com, &alg, &a, &ps)?)?;
            Ok(lhs == Algebra::<Com>::theta(&alg, &Com, &a, vs)?)
        });
        sum.record_result(outcome, || format!("α={a} operands {ps:?}"));
        let outcome = values.as_ref().map_err(Clone::clone).and_then(|vs| {
            let additive = Additive { pair: &pair, alg: &alg };
            let lhs = eta_prime(&Com, &additive, &realization_mult(&pair, &alg, &a, &ps)?)?;
            Ok(lhs == alg.chi(&pair, &a, vs)?)
        });
        prod.record_result(outcome, || format!("f={a} operands {ps:?}"));

        if let Some(p) = ps.first() {
            let m = p.element.level();
            let n = m + rng.gen_range(0..=1);
            let phi = random_surjection(&mut rng, n, m);
            let t = Partition::random(&mut rng, n, 6);
            let outcome = (|| {
                let pushed = RealizationPoint::new(p.element.clone(), part_act(&phi, &t)?)?;
                let pulled = RealizationPoint::new(bar_act(&Com, &alg, &p.element, &phi)?, t.clone())?;
                Ok(eta_prime(&Com, &alg, &pushed)? == eta_prime(&Com, &alg, &pulled)?)
            })();
            rep.record_result(outcome, || format!("{p:?} along {phi:?}"));
        }
    }
    vec![sum, prod, rep]
}

/// Largest level of the exhaustive passes and the edge bound per level.
pub const EXHAUSTIVE_LEVEL: usize = 2;
pub const EXHAUSTIVE_EDGES: usize = 2;

/// Leaf values that differ from leaf to leaf: `k+2` on `d` and `y+k+1` on `c`.
fn fixed_leaves(tree: &Tree) -> Vec<SVal> {
    tree.leaves()
        .iter()
        .enumerate()
        .map(|(k, (_, c))| match c {
            Color::D => SVal::nat(k as u64 + 2),
            Color::C => SVal::Poly(Poly::y().add(&Poly::monomial(k as u64 + 1, 0))),
        })
        .collect()
}

/// Interior partitions, alternating by index so that merges see ties and gaps.
fn shape_partition(level: usize, idx: usize) -> Partition {
    let fracs: &[(i64, i64)] = match (level, idx % 2) {
        (0, _) => &[],
        (1, 0) => &[(1, 2)],
        (1, _) => &[(1, 3)],
        (_, 0) => &[(1, 3), (2, 3)],
        _ => &[(1, 6), (1, 2)],
    };
    Partition::new(fracs.iter().map(|&(a, b)| rat(a, b)).collect()).expect("sorted interior coordinates")
}

type ComPoint = RealizationPoint<RelSet, SVal>;

fn shape_points(alg: &SemiringGp) -> Vec<ComPoint> {
    (0..=EXHAUSTIVE_LEVEL)
        .flat_map(|h| tree_shapes(h, EXHAUSTIVE_EDGES))
        .enumerate()
        .map(|(idx, tree)| {
            let h = tree.height();
            let leaves = fixed_leaves(&tree);
            let b = com_element(tree, leaves).expect("Com decorates every tree");
            realize_normalize(&Com, alg, &RealizationPoint::new(b, shape_partition(h, idx)).expect("matching level"))
                .expect("normalizable")
        })
        .collect()
}

fn arities_over(colors: &[Color]) -> Vec<RelSet> {
    let elems: Vec<(String, Color)> = colors.iter().enumerate().map(|(k, &c)| (format!("{}", k + 1), c)).collect();
    let pairs: Vec<(&str, Color)> = elems.iter().map(|(l, c)| (l.as_str(), *c)).collect();
    let mut out = vec![RelSet::of(Color::C, &pairs).expect("c ambient admits everything")];
    if colors.iter().all(|&c| c == Color::D) {
        out.push(RelSet::of(Color::D, &pairs).expect("all d"));
    }
    out
}

/// `η′` against `θ` and `χ` for one operand family and every arity over it.
fn intertwines(alg: &SemiringGp, ps: &[ComPoint], sum: &mut Check, prod: &mut Check) {
    let pair = ComPair::default();
    let colors: Vec<Color> = ps.iter().map(|p| p.element.tree.root_color()).collect();
    let values = match ps.iter().map(|p| eta_prime(&Com, alg, p)).collect::<Result<Vec<_>>>() {
        Ok(v) => v,
        Err(e) => return sum.record(false, || format!("{e} on {ps:?}")),
    };
    for a in arities_over(&colors) {
        let outcome = (|| {
            Ok(eta_prime(&Com, alg, &realization_theta(&Com, alg, &a, ps)?)?
                == Algebra::<Com>::theta(alg, &Com, &a, &values)?)
        })();
        sum.record_result(outcome, || format!("α={a} operands {ps:?}"));
        let outcome = (|| {
            let additive = Additive { pair: &pair, alg };
            Ok(eta_prime(&Com, &additive, &realization_mult(&pair, alg, &a, ps)?)? == alg.chi(&pair, &a, &values)?)
        })();
        prod.record_result(outcome, || format!("f={a} operands {ps:?}"));
    }
}

/// Every shape of level at most 2 alone, every pair of level at most 1
/// shapes, and every level 2 shape next to fixed companions of each level.
fn exhaustive_structure_checks() -> Vec<Check> {
    let alg = semiring_gp(SemiringPair::nat_poly());
    let points = shape_points(&alg);
    let low: Vec<&ComPoint> = points.iter().filter(|p| p.element.level() <= 1).collect();
    let companions: Vec<&ComPoint> = (0..=EXHAUSTIVE_LEVEL)
        .flat_map(|h| {
            [Color::C, Color::D]
                .map(|c| points.iter().find(|p| p.element.level() == h && p.element.tree.root_color() == c))
        })
        .flatten()
        .collect();
    let mut families: Vec<Vec<ComPoint>> = points.iter().map(|p| vec![p.clone()]).collect();
    for p in &low {
        for q in &low {
            families.push(vec![(*p).clone(), (*q).clone()]);
        }
    }
    for p in points.iter().filter(|p| p.element.level() == EXHAUSTIVE_LEVEL) {
        for q in &companions {
            families.push(vec![p.clone(), (*q).clone()]);
            families.push(vec![(*q).clone(), p.clone()]);
        }
    }
    let parts: Vec<(Check, Check)> = families
        .par_iter()
        .map(|ps| {
            let mut sum = Check::new("eta' intertwines theta on every small shape");
            let mut prod = Check::new("eta' intertwines chi on every small shape");
            intertwines(&alg, ps, &mut sum, &mut prod);
            (sum, prod)
        })
        .collect();
    let mut sum = Check::new("eta' intertwines theta on every small shape");
    let mut prod = Check::new("eta' intertwines chi on every small shape");
    for (s, p) in parts {
        sum.absorb(s);
        prod.absorb(p);
    }
    vec![sum, prod]
}

fn random_surjection(rng: &mut ChaCha8Rng, n: usize, m: usize) -> SimplexMap {
    loop {
        let phi = SimplexMap::random(rng, n, m);
        if phi.is_surjective() {
            return phi;
        }
    }
}

/// All monotone maps `⟨n⟩ → ⟨m⟩`.
pub(crate) fn monotone_maps(n: usize, m: usize) -> Vec<SimplexMap> {
    fn go(n: usize, m: usize, prefix: &mut Vec<usize>, out: &mut Vec<SimplexMap>) {
        if prefix.len() == n + 1 {
            out.push(SimplexMap::new(prefix.clone(), m).expect("monotone"));
            return;
        }
        let lo = prefix.last().copied().unwrap_or(0);
        for v in lo..=m {
            prefix.push(v);
            go(n, m, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, m, &mut vec![], &mut out);
    out
}

/// All partitions of level `n` with coordinates on the grid `{0, 1/3, 1/2, 2/3, 1}`.
fn grid_partitions(n: usize) -> Vec<Partition> {
    let grid = [rat(0, 1), rat(1, 3), rat(1, 2), rat(2, 3), rat(1, 1)];
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                let lo = p.last().copied().unwrap_or(0);
                (lo..grid.len()).map(move |g| {
                    let mut q = p.clone();
                    q.push(g);
                    q
                })
            })
            .collect();
    }
    out.into_iter()
        .map(|ix| Partition::new(ix.into_iter().map(|g| grid[g].clone()).collect()).expect("sorted"))
        .collect()
}

/// Normal form computed in the opposite order: degeneracies first, coface
/// patterns scanned from the top.
fn normalize_reversed<O: Operad, A: Algebra<O>>(
    op: &O,
    alg: &A,
    p: &RealizationPoint<O::Elem, A::Val>,
) -> Result<RealizationPoint<O::Elem, A::Val>> {
    let (mut x, mut t) = (p.element.clone(), p.partition.clone());
    loop {
        let m = x.level();
        if let Some(i) = (0..m).rev().find(|&i| super::is_degenerate_at(op, &x.tree, &x.vertices, i)) {
            x = bar_face(op, alg, &x, i)?;
            t = t.codegeneracy(i)?;
            continue;
        }
        let c = t.coords();
        let zero = num_traits::Zero::is_zero;
        let one = num_traits::One::is_one;
        let hit = if m > 0 && one(&c[m - 1]) {
            Some((m, m - 1))
        } else if let Some(i) = (1..m).rev().find(|&i| c[i - 1] == c[i]) {
            Some((i, i))
        } else if m > 0 && zero(&c[0]) {
            Some((0, 0))
        } else {
            None
        };
        let Some((face, drop)) = hit else {
            return Ok(RealizationPoint { element: x, partition: t });
        };
        x = bar_face(op, alg, &x, face)?;
        let mut v = c.to_vec();
        v.remove(drop);
        t = Partition::new(v)?;
    }
}

/// Idempotence, confluence, normality and the coend relation `[b·φ, t] ~ [b, φ_* t]`
/// on every presentation `[b·φ, t]` with `φ: ⟨n⟩ → ⟨h⟩`, `n ≤ 2`, over the partition grid.
fn presentations(alg: &SemiringGp, b: &BarElement<RelSet, SVal>) -> [Check; 4] {
    let mut idem = Check::new("normal form is idempotent");
    let mut conf = Check::new("normal form is confluent");
    let mut coend = Check::new("coend relation");
    let mut normal = Check::new("normal form is strict and non-degenerate");
    let key = |x: &BarElement<RelSet, SVal>| bar_key(&Com, x, &|v: &SVal| format!("{v:?}"));
    for n in 0..=EXHAUSTIVE_LEVEL {
        for phi in monotone_maps(n, b.level()) {
            let Ok(x) = bar_act(&Com, alg, b, &phi) else { continue };
            for t in grid_partitions(n) {
                let p = RealizationPoint { element: x.clone(), partition: t.clone() };
                let Ok(a) = realize_normalize(&Com, alg, &p) else {
                    idem.record(false, || format!("normalization failed on {p:?}"));
                    continue;
                };
                normal.record(a.is_normal(&Com), || format!("{a:?}"));
                idem.record_result(realize_normalize(&Com, alg, &a).map(|c| c == a), || format!("{p:?}"));
                conf.record_result(
                    normalize_reversed(&Com, alg, &p)
                        .map(|c| c.partition == a.partition && key(&c.element) == key(&a.element)),
                    || format!("{p:?}"),
                );
                let outcome = (|| {
                    let q = RealizationPoint::new(b.clone(), part_act(&phi, &t)?)?;
                    let c = realize_normalize(&Com, alg, &q)?;
                    Ok(c.partition == a.partition && key(&c.element) == key(&a.element))
                })();
                coend.record_result(outcome, || format!("b={b:?} φ={phi:?} t={t:?}"));
            }
        }
    }
    [idem, conf, coend, normal]
}

/// Presentations over every shape of level at most 2 and over random
/// wider elements.
fn normal_form_checks(cfg: &BarConfig) -> Vec<Check> {
    let alg = semiring_gp(SemiringPair::nat_nat());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x40f);
    let mut cache = ElementCache::new(cfg.budget);
    let mut bases: Vec<BarElement<RelSet, SVal>> = (0..=EXHAUSTIVE_LEVEL)
        .flat_map(|h| tree_shapes(h, EXHAUSTIVE_EDGES))
        .map(|tree| {
            let leaves = (0..tree.leaves().len()).map(|k| SVal::nat(k as u64 + 2)).collect();
            com_element(tree, leaves).expect("Com decorates every tree")
        })
        .collect();
    let extra = cfg.trials / 50 + 1;
    let mut drawn = 0;
    while drawn < extra {
        let h = drawn % (EXHAUSTIVE_LEVEL + 1);
        let mut leaf = |c: Color, r: &mut ChaCha8Rng| GpAlgebra::<ComPair>::sample(&alg, c, r);
        let Some(b) = random_element(&Com, &mut rng, &mut cache, h, cfg.max_edges, &mut leaf) else { continue };
        drawn += 1;
        bases.push(b);
    }
    let parts: Vec<[Check; 4]> = bases.par_iter().map(|b| presentations(&alg, b)).collect();
    let mut out = [
        Check::new("normal form is idempotent"),
        Check::new("normal form is confluent"),
        Check::new("coend relation"),
        Check::new("normal form is strict and non-degenerate"),
    ];
    for part in parts {
        for (o, c) in out.iter_mut().zip(part) {
            o.absorb(c);
        }
    }
    out.into_iter().collect()
}

/// The bar suite over `Com` with semiring leaves and the free operad with symbol leaves.
pub fn check_bar(cfg: &BarConfig) -> Report {
    let mut report = Report::new("bar");
    let com_alg = semiring_gp(SemiringPair::nat_poly());
    let mut leaf = |c: Color, r: &mut ChaCha8Rng| GpAlgebra::<ComPair>::sample(&com_alg, c, r);
    for c in simplicial_checks(&Com, &com_alg, cfg, 0xc0, &mut leaf) {
        report.push_prefixed("com", c);
    }
    let free = FreeOperad::new(Signature::standard());
    let free_alg =
        FreeAlgebra { symbols_d: vec!["p".into(), "q".into()], symbols_c: vec!["x".into(), "y".into(), "z".into()] };
    let mut leaf = |c: Color, r: &mut ChaCha8Rng| free_alg.sample_values(&free, c, r, 1).remove(0);
    for c in simplicial_checks(&free, &free_alg, cfg, 0xf4, &mut leaf) {
        report.push_prefixed("free", c);
    }
    for c in structure_checks(cfg).into_iter().chain(exhaustive_structure_checks()) {
        report.push_prefixed("realization", c);
    }
    for c in normal_form_checks(cfg) {
        report.push_prefixed("normal form", c);
    }
    report.sorted()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> BarConfig {
        BarConfig { trials: 200, ..BarConfig::default() }
    }

    #[test]
    fn suite_passes() {
        let r = check_bar(&small());
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn fault_is_caught() {
        let r = check_bar(&BarConfig { fault: true, ..small() });
        assert!(!r.passed());
        assert!(r.failures().any(|c| c.name.contains("face-degeneracy")));
    }

    #[test]
    fn maps_and_grid() {
        assert_eq!(monotone_maps(2, 1).len(), 4);
        assert_eq!(monotone_maps(0, 2).len(), 3);
        assert_eq!(grid_partitions(2).len(), 15);
    }
}
