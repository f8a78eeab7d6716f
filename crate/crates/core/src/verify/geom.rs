use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::RunConfig;
use crate::geom::steiner::isometry_act;
use crate::geom::{
    close_vec, phibar, psi, sample_point, sample_time, steiner_from_config, Config, EmbExpr, EmbOperad, IsometryOperad,
    SteinerOperad, SAMPLES,
};
use crate::operad::check::random_arity;
use crate::operad::{check_operad_axioms, AxiomConfig};
use crate::report::{Check, Report};
use crate::sets::Color;

pub const CONFIGS: usize = 100;
pub const GEOM_TRIALS: usize = 200;
pub const MAX_DIM: usize = 4;

fn random_config(rng: &mut ChaCha8Rng) -> Config {
    let amb = if rng.gen_bool(0.8) { Color::C } else { Color::D };
    let a = random_arity(rng, amb, 4);
    let dim = rng.gen_range(1..=MAX_DIM);
    Config::random(rng, a, dim)
}

/// A point at distance `frac * r` from `center` in a random direction.
fn at_distance(rng: &mut ChaCha8Rng, center: &[f64], r: f64, frac: f64) -> Vec<f64> {
    let dir = loop {
        let d = sample_point(rng, center.len(), 1.0);
        let n = d.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 {
            break d.into_iter().map(|x| x / n).collect::<Vec<f64>>();
        }
    };
    center.iter().zip(dir).map(|(c, d)| c + frac * r * d).collect()
}

/// Operad axioms for the geometric carriers, compared at sampled points.
pub fn geom_operad_axioms(seed: u64) -> Report {
    let cfg = AxiomConfig { trials: GEOM_TRIALS, budget: 4, seed, ..Default::default() };
    let mut parts: Vec<(String, Report)> = (1..=MAX_DIM)
        .into_par_iter()
        .flat_map(|n| {
            vec![
                (format!("emb/{n}"), check_operad_axioms(&EmbOperad::new(n), &cfg)),
                (format!("steiner/{n}"), check_operad_axioms(&SteinerOperad::new(n), &cfg)),
            ]
        })
        .collect();
    parts.push(("isometries".into(), check_operad_axioms(&IsometryOperad::default(), &cfg)));
    let mut report = Report::new("geometric operads");
    for (tag, r) in parts {
        report.extend(&tag, r);
    }
    report
}

pub fn geom_suite(cfg: &RunConfig) -> Report {
    let tol = cfg.tolerance;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x6e0);
    let iso = IsometryOperad::default();
    let mut phibar_phi = Check::new("phibar after phi is the identity");
    let mut psi_phi = Check::new("psi after phi is chi");
    let mut invariants = Check::new("steiner systems keep endpoints and are 1-Lipschitz");
    let mut acted = Check::new("isometry actions keep steiner invariants");
    let mut disjoint = Check::new("chi images are disjoint");
    let mut emb_inv = Check::new("embedding inverse is two-sided on the certified interior");
    let mut emb_out = Check::new("embedding inverse is undefined outside the certified image");
    let mut st_inv = Check::new("steiner inverse is two-sided");

    for _ in 0..CONFIGS {
        let x = random_config(&mut rng);
        let s = steiner_from_config(&x);
        phibar_phi.record(phibar(&s).is_ok_and(|y| y == x), || format!("{x:?}"));
        psi_phi.record(psi(&s) == x.chi(), || format!("{x:?}"));
        let w = |r: std::result::Result<(), String>| r.err().unwrap_or_default();
        let outcome = s.check_invariants(&mut rng, SAMPLES);
        invariants.record(outcome.is_ok(), || w(outcome.clone()));
        let chi = x.chi();
        let outcome = chi.check_disjoint(&mut rng, SAMPLES / 4);
        disjoint.record(outcome.is_ok(), || w(outcome.clone()));

        if x.arity.ambient() == Color::C && !x.arity.is_empty() {
            let f = iso.random(&mut rng, &x.arity);
            let others: Vec<_> = x
                .arity
                .iter()
                .map(|(_, c)| {
                    let b = random_arity(&mut rng, c, 2);
                    steiner_from_config(&Config::random(&mut rng, b, x.dim))
                })
                .collect();
            match isometry_act(&f, &others) {
                Ok(sys) => {
                    let outcome = sys.check_invariants(&mut rng, SAMPLES / 4);
                    acted.record(outcome.is_ok(), || w(outcome.clone()));
                }
                Err(e) => acted.record(false, || e.to_string()),
            }
        }

        let m = x.min_distance();
        for (a, c) in chi.comps.iter().enumerate() {
            let EmbExpr::Radial { center, .. } = c else { continue };
            for _ in 0..SAMPLES / 20 {
                let u = sample_point(&mut rng, x.dim, 3.0);
                let back = c.invert(&c.eval(&u));
                emb_inv
                    .record(back.as_ref().is_some_and(|b| close_vec(b, &u, tol)), || format!("{a} of {x:?} at {u:?}"));
                let r = m.map_or(3.0, |m| m / 2.0);
                let frac = rng.gen_range(0.0..0.99);
                let v = at_distance(&mut rng, center, r, frac);
                let there = c.invert(&v).map(|u| c.eval(&u));
                emb_inv
                    .record(there.as_ref().is_some_and(|y| close_vec(y, &v, tol)), || format!("{a} of {x:?} at {v:?}"));
                if let Some(m) = m {
                    let frac = rng.gen_range(1.0..3.0);
                    let v = at_distance(&mut rng, center, m / 2.0, frac);
                    emb_out.record(c.invert(&v).is_none(), || format!("{a} of {x:?} at {v:?}"));
                }
            }
        }
        for (a, c) in s.comps.iter().enumerate() {
            for k in 0..SAMPLES / 20 {
                let t = sample_time(&mut rng, k);
                let u = sample_point(&mut rng, x.dim, 3.0);
                let back = c.invert(t, &c.eval(t, &u));
                st_inv.record(back.is_some_and(|b| close_vec(&b, &u, tol)), || format!("{a} of {x:?} at t={t}, {u:?}"));
                let v = c.eval(t, &sample_point(&mut rng, x.dim, 3.0));
                let there = c.invert(t, &v).map(|u| c.eval(t, &u));
                st_inv
                    .record(there.is_some_and(|y| close_vec(&y, &v, tol)), || format!("{a} of {x:?} at t={t}, {v:?}"));
            }
        }
    }

    let mut report = Report::new("geom");
    for c in [phibar_phi, psi_phi, invariants, acted, disjoint, emb_inv, emb_out, st_inv] {
        report.push(c);
    }
    report.extend("axioms", geom_operad_axioms(cfg.seed));
    report
}
