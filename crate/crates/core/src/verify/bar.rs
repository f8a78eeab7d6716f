use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Fault, RunConfig};
use crate::bar::{check_bar, eta_eval, BarConfig, BarElement, DeloopElement, Formal, RealizationPoint};
use crate::geom::{close_vec, sample_point, Config, EmbExpr, EmbOperad};
use crate::operad::check::random_arity;
use crate::operad::NoAlgebra;
use crate::partitions::Partition;
use crate::report::{Check, Report};
use crate::sets::Color;

pub const BAR_TRIALS: usize = 1000;
pub const ETA_SAMPLES: usize = 400;

/// `η` on corollas of `χ` images: a point inside component `a` yields the
/// `a`-th leaf with the pulled back vector, anything else yields `∞`.
fn eta_checks(cfg: &RunConfig) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xe7a);
    let op = EmbOperad::new(2);
    let alg = NoAlgebra::<Formal>::default();
    let mut branch = Check::new("eta selects the branch containing the point");
    let mut far = Check::new("eta sends far points to the basepoint unless a translation reaches them");
    for _ in 0..ETA_SAMPLES / 20 {
        let n = rng.gen_range(1..=3);
        let a = random_arity(&mut rng, Color::C, n);
        if a.is_empty() {
            continue;
        }
        let alpha = Config::random(&mut rng, a.clone(), 2).chi();
        let leaves: Vec<Formal> = (0..a.len()).map(|k| Formal(format!("x{k}"))).collect();
        let Ok(b) = BarElement::corolla(&op, alpha.clone(), leaves.clone()) else {
            branch.record(false, || format!("corolla over {a}"));
            continue;
        };
        let p = RealizationPoint { element: b, partition: Partition::empty() };
        let expect = |u: &[f64]| alpha.comps.iter().enumerate().find_map(|(k, c)| c.invert(u).map(|v| (k, v)));
        let agrees = |u: &[f64], hit: Option<(usize, Vec<f64>)>| {
            eta_eval(&op, &alg, &p, u).map(|(d, _)| match (&d, &hit) {
                (DeloopElement::Infinity(_), None) => true,
                (DeloopElement::At { leaves: l, vector, .. }, Some((k, v))) => {
                    l == &vec![leaves[*k].clone()] && close_vec(vector, v, cfg.tolerance)
                }
                _ => false,
            })
        };
        for _ in 0..20 {
            let u = sample_point(&mut rng, 2, 5.0);
            branch.record_result(agrees(&u, expect(&u)), || format!("{alpha:?} at {u:?}"));
            // unscaled components are translations and still reach far points
            let u = sample_point(&mut rng, 2, 1.0).iter().map(|x| x * 1e4).collect::<Vec<_>>();
            let hit = expect(&u);
            let scaled = alpha.comps.iter().all(|c| matches!(c, EmbExpr::Radial { scale: Some(_), .. }));
            let outcome = agrees(&u, hit.clone()).map(|ok| ok && (hit.is_none() || !scaled));
            far.record_result(outcome, || format!("{alpha:?} at {u:?}"));
        }
    }
    vec![branch, far]
}

pub fn bar_suite(cfg: &RunConfig) -> Report {
    let bar_cfg = BarConfig {
        trials: BAR_TRIALS,
        max_height: 4,
        max_edges: 5,
        seed: cfg.seed,
        fault: cfg.has(Fault::BarDegeneracy),
        ..Default::default()
    };
    let mut report = check_bar(&bar_cfg);
    for c in eta_checks(cfg) {
        report.push_prefixed("deloop", c);
    }
    report
}
