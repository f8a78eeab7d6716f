//! The (Com, Com) operad pair acting on a semiring model.

use relop::pairs::{
    check_gp_interchange, check_pair_axioms, semiring_gp, ComPair, GpAlgebra, PairConfig, SVal, SemiringPair,
};
use relop::sets::{Color, RelSet};

fn main() -> relop::Result<()> {
    let pair = ComPair::default();
    let alg = semiring_gp(SemiringPair::nat_nat());
    let f = RelSet::of(Color::C, &[("1", Color::C), ("2", Color::C)])?;
    let xs = [SVal::nat(3), SVal::nat(5)];
    println!("chi(f; 3, 5) = {}", alg.chi(&pair, &f, &xs)?);

    let cfg = PairConfig { trials: 100, ..Default::default() };
    print!("{}", check_pair_axioms(&pair, &cfg).to_text());
    print!("{}", check_gp_interchange(&pair, &alg, &cfg).to_text());
    Ok(())
}
