//! Configurations, their radial embeddings, Steiner paths and inverses.

use relop::geom::{phibar, psi, steiner_from_config, Config};
use relop::sets::{Color, RelSet};

fn main() -> relop::Result<()> {
    let a = RelSet::of(Color::C, &[("1", Color::C), ("2", Color::C), ("3", Color::D)])?;
    let x = Config::new(a, 2, vec![vec![0.0, 1.5], vec![0.0, 0.0], vec![1.0, -1.0]])?;
    let chi = x.chi();
    let s = steiner_from_config(&x);
    assert_eq!(phibar(&s)?, x);
    assert_eq!(psi(&s), chi);

    let u = [0.7, -0.4];
    for (k, c) in chi.comps.iter().enumerate() {
        let v = c.eval(&u);
        println!("component {k}: {u:?} -> {v:?} -> {:?}", c.invert(&v));
    }
    println!("outside every image: {:?}", chi.locate(&[5.0, 5.0]));
    for t in [0.0, 0.5, 1.0] {
        println!("steiner path of component 0 at t={t}: {:?}", s.eval(0, t, &u));
    }
    Ok(())
}
