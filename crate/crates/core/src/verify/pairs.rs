use rand_chacha::ChaCha8Rng;

use super::{Fault, RunConfig};
use crate::operad::Com;
use crate::pairs::gp::read_back;
use crate::pairs::semiring::Semiring;
use crate::pairs::{
    check_g0_monad, check_gp_interchange, check_pair_axioms, hom_coincidence, semiring_gp, ComPair, PairConfig,
    SemiringGp, SemiringPair, SteinerPair,
};
use crate::report::Report;
use crate::sets::Color;

pub const COM_PAIR_TRIALS: usize = 400;
pub const STEINER_PAIR_TRIALS: usize = 25;
pub const SEMIRING_SAMPLES: usize = 200;

fn semiring(cfg: &RunConfig, s: SemiringPair) -> SemiringGp {
    SemiringGp { fault_theta: cfg.has(Fault::SemiringTheta), ..semiring_gp(s) }
}

pub fn pairs_suite(cfg: &RunConfig) -> Report {
    let seed = cfg.seed;
    let mut report = Report::new("pairs");
    let com = ComPair { fault: cfg.has(Fault::ComPairUnit) };

    let com_cfg = PairConfig { trials: COM_PAIR_TRIALS, max_outer: 3, max_inner: 3, seed, ..Default::default() };
    report.extend("com", check_pair_axioms(&com, &com_cfg));

    let st_cfg = PairConfig { trials: STEINER_PAIR_TRIALS, max_outer: 2, max_inner: 2, budget: 3, seed };
    for dim in 1..=2 {
        report.extend(&format!("steiner/{dim}"), check_pair_axioms(&SteinerPair::new(dim), &st_cfg));
    }

    for (tag, s) in [("nat-poly", SemiringPair::nat_poly()), ("nat-nat", SemiringPair::nat_nat())] {
        let alg = semiring(cfg, s);
        report.extend(&format!("{tag}/interchange"), check_gp_interchange(&com, &alg, &com_cfg));
        report.extend(&format!("{tag}/coercions"), hom_coincidence(&alg, SEMIRING_SAMPLES, seed));
        report.extend(&format!("{tag}/tables"), read_back(&alg, SEMIRING_SAMPLES, seed));
    }

    let sample = |c: Color, rng: &mut ChaCha8Rng| match c {
        Color::D => Semiring::Nat.sample(rng),
        Color::C => Semiring::Poly.sample(rng),
    };
    report.extend("g0", check_g0_monad(&Com, &sample, 100, seed));
    report
}
