use rand::Rng;

use super::{Fault, RunConfig};
use crate::operad::algebra::AlgebraConfig;
use crate::operad::endo::Pt;
use crate::operad::monad::{check_monad_laws, enumerate_classes, multiset_count};
use crate::operad::{
    check_algebra, check_operad_axioms, AxiomConfig, Com, EndAlgebra, EndOperad, FreeAlgebra, FreeOperad, Generator,
    PointedPair, Signature, SymVal,
};
use crate::pairs::{semiring_gp, SemiringPair};
use crate::report::{Check, Report};
use crate::sets::{Color, RelSet};

pub const SYMBOLIC_TRIALS: usize = 300;

/// A single binary `c`-colored generator.
pub fn one_generator() -> Signature {
    let inputs = RelSet::of(Color::C, &[("x", Color::C), ("y", Color::C)]).expect("valid generator");
    Signature::new(vec![Generator { name: "m".into(), inputs }]).expect("valid signature")
}

fn axioms(seed: u64) -> AxiomConfig {
    AxiomConfig { trials: SYMBOLIC_TRIALS, seed, ..Default::default() }
}

pub fn operads_suite(cfg: &RunConfig) -> Report {
    let mut report = Report::new("operads");
    let seed = cfg.seed;

    report.extend("com", check_operad_axioms(&Com, &axioms(seed)));

    for (tag, sig) in [("free/one", one_generator()), ("free/two", Signature::two_generators())] {
        let mut op = FreeOperad::new(sig);
        if cfg.has(Fault::FreeSwap) {
            op = op.with_fault();
        }
        report.extend(tag, check_operad_axioms(&op, &AxiomConfig { trials: 150, ..axioms(seed) }));
        let alg = FreeAlgebra { symbols_d: vec!["p".into(), "q".into()], symbols_c: vec!["u".into(), "v".into()] };
        let acfg = AlgebraConfig { trials: 150, seed, ..Default::default() };
        report.extend(&format!("{tag}/algebra"), check_algebra(&op, &alg, &acfg));
        let sample = |c: Color, rng: &mut rand_chacha::ChaCha8Rng| {
            let names = if c == Color::D { ["p", "q"] } else { ["u", "v"] };
            SymVal::symbol(names[rng.gen_range(0..2)], c)
        };
        report.extend(&format!("{tag}/monad"), check_monad_laws(&op, &sample, 100, seed));
    }

    for (nd, nc) in [(1, 2), (2, 3)] {
        let x = PointedPair::of_sizes(nd, nc);
        let mut op = EndOperad::new(x.clone());
        op.fault = cfg.has(Fault::EndTable);
        let tag = format!("end/{nd}x{nc}");
        report.extend(&tag, check_operad_axioms(&op, &AxiomConfig { trials: 100, ..axioms(seed) }));
        let acfg = AlgebraConfig { trials: 100, seed, ..Default::default() };
        report.extend(&format!("{tag}/algebra"), check_algebra(&op, &EndAlgebra, &acfg));
        let sample = move |c: Color, rng: &mut rand_chacha::ChaCha8Rng| Pt(rng.gen_range(0..x.size(c)));
        report.extend(&format!("{tag}/monad"), check_monad_laws(&op, &sample, 100, seed));
    }

    let com_alg = semiring_gp(SemiringPair::nat_poly());
    report.extend("com/algebra", check_algebra(&Com, &com_alg, &AlgebraConfig { seed, ..Default::default() }));

    // Com-monad classes over one non-basepoint value per color are multisets.
    let mut classes = Check::new("com monad classes are multisets");
    let (vd, vc) = (vec![Pt(1)], vec![Pt(1)]);
    for k in 0..=cfg.bound {
        for (amb, kinds) in [(Color::C, 2), (Color::D, 1)] {
            let outcome =
                enumerate_classes(&Com, &vd, &vc, amb, k, 16, seed).map(|c| c.len() == multiset_count(kinds, k));
            classes.record_result(outcome, || format!("arity at most {k} over ambient {amb}"));
        }
    }
    report.push(classes);
    report
}
