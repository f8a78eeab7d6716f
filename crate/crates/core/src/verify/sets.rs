use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::RunConfig;
use crate::error::Result;
use crate::operad::check::random_arity;
use crate::report::{Check, Report};
use crate::sets::{
    canonical_sets, dep_prod, dep_sum, enumerate_hom, fiber_set, induced_prod_map, induced_sum_map, nu, sections,
    transport_family, Color, Flavor, Label, RelMap, RelSet,
};

/// A random family over `a`: each member has the ambient of its index.
pub(crate) fn random_family(rng: &mut ChaCha8Rng, a: &RelSet, max: usize) -> Vec<RelSet> {
    a.iter().map(|(_, c)| random_arity(rng, c, max)).collect()
}

fn renamed(a: &RelSet, prefix: &str) -> RelSet {
    RelSet::new(a.ambient(), a.iter().enumerate().map(|(k, (_, c))| (Label::new(format!("{prefix}{k}")), c)))
        .expect("renaming keeps colors")
}

fn induced_functorial(
    induced: fn(&RelMap, &[RelSet]) -> Result<RelMap>,
    first: &RelMap,
    second: &RelMap,
    fam: &[RelSet],
) -> Result<bool> {
    let whole = induced(&second.after(first)?, fam)?;
    let step = induced(second, &transport_family(first, fam)?)?.after(&induced(first, fam)?)?;
    Ok(whole.same_function(&step))
}

fn well_colored(s: &RelSet) -> bool {
    s.iter().all(|(_, c)| c.fits_in(s.ambient()))
}

pub fn sets_suite(cfg: &RunConfig) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5e7);
    let mut sum_f = Check::new("induced sum maps are functorial");
    let mut prod_f = Check::new("induced product maps are functorial");
    let mut nu_bij = Check::new("nu is a bijection");
    let mut mono = Check::new("sums, products and fibers are well colored");
    let mut hom = Check::new("hom sets compose within their flavor");

    for a in canonical_sets(cfg.bound) {
        let b = renamed(&a, "p");
        let c = renamed(&a, "q");
        let (Ok(firsts), Ok(seconds)) = (enumerate_hom(&a, &b, Flavor::Bij), enumerate_hom(&b, &c, Flavor::Bij)) else {
            sum_f.record(false, || format!("could not enumerate bijections out of {a}"));
            continue;
        };
        let fam = random_family(&mut rng, &a, 2);
        for s in &firsts {
            for t in &seconds {
                sum_f.record_result(induced_functorial(induced_sum_map, s, t, &fam), || {
                    format!("{s:?} then {t:?} over {fam:?}")
                });
                prod_f.record_result(induced_functorial(induced_prod_map, s, t, &fam), || {
                    format!("{s:?} then {t:?} over {fam:?}")
                });
            }
        }

        let outcome = (|| {
            let mut ok = well_colored(&dep_sum(&a, &fam)?) && well_colored(&dep_prod(&a, &fam)?);
            for sec in sections(&a, &fam)? {
                let (fiber, proj) = fiber_set(&a, &fam, &sec)?;
                ok &= well_colored(&fiber) && proj.is_bijective();
            }
            Ok(ok)
        })();
        mono.record_result(outcome, || format!("{a} over {fam:?}"));

        for flavor in [Flavor::General, Flavor::Inj, Flavor::Bij, Flavor::BijAny] {
            let small = random_arity(&mut rng, a.ambient(), 2);
            let outcome = (|| {
                let mut ok = true;
                for f in enumerate_hom(&small, &a, flavor)? {
                    for g in enumerate_hom(&a, &b, flavor)? {
                        ok &= g.after(&f).is_ok_and(|h| {
                            RelMap::new(h.source().clone(), h.target().clone(), h.assignment().clone(), flavor).is_ok()
                        });
                    }
                }
                Ok(ok)
            })();
            hom.record_result(outcome, || format!("{flavor:?} maps {small} -> {a} -> {b}"));
        }
    }

    // ν on nested families of total size at most 12.
    let mut drawn = 0;
    while drawn < 200 {
        let amb = if rng.gen_bool(0.7) { Color::C } else { Color::D };
        let a = random_arity(&mut rng, amb, 3);
        let b = random_family(&mut rng, &a, 2);
        let nested: Vec<Vec<RelSet>> = b.iter().map(|bi| random_family(&mut rng, bi, 2)).collect();
        let total: usize = a.len()
            + b.iter().map(RelSet::len).sum::<usize>()
            + nested.iter().flatten().map(RelSet::len).sum::<usize>();
        if total > 12 {
            continue;
        }
        drawn += 1;
        // Independent count: Π_a Σ_b |C^{a,b}|.
        let expected: usize = nested.iter().map(|row| row.iter().map(RelSet::len).sum::<usize>()).product();
        let outcome = nu(&a, &b, &nested).map(|m| m.is_bijective() && m.source().len() == expected);
        nu_bij.record_result(outcome, || format!("A={a} B={b:?} C={nested:?}"));
    }

    let mut report = Report::new("sets");
    for c in [sum_f, prod_f, nu_bij, mono, hom] {
        report.push(c);
    }
    report
}
