use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::RunConfig;
use crate::error::Result;
use crate::partitions::SimplexMap;
use crate::report::{Check, Report};
use crate::sets::Color;
use crate::trees::{prod_trees, random_tree, sum_trees, Tree};

pub const TREE_TRIALS: usize = 1000;

/// A random tree of height `h` whose root has the given color.
pub(crate) fn random_tree_rooted(rng: &mut ChaCha8Rng, color: Color, h: usize, max_edges: usize) -> Tree {
    loop {
        let t = random_tree(rng, h, max_edges);
        if t.root_color() == color {
            return t;
        }
    }
}

fn faces(t: &Tree, i: usize, j: usize) -> Result<bool> {
    // i < j: deleting j then i equals deleting i then j-1.
    Ok(t.face(j)?.face(i)? == t.face(i)?.face(j - 1)?)
}

fn degeneracies(t: &Tree, i: usize, j: usize) -> Result<bool> {
    Ok(t.degeneracy(j)?.degeneracy(i)? == t.degeneracy(i)?.degeneracy(j + 1)?)
}

fn face_degeneracy(t: &Tree, i: usize, j: usize) -> Result<bool> {
    let lhs = t.degeneracy(j)?.face(i)?;
    let rhs = if i == j || i == j + 1 {
        t.clone()
    } else if i < j {
        t.face(i)?.degeneracy(j - 1)?
    } else {
        t.face(i - 1)?.degeneracy(j)?
    };
    Ok(lhs == rhs)
}

fn graft_checks(rng: &mut ChaCha8Rng, t: &Tree) -> Result<(bool, bool)> {
    // with no leaves there is nothing to graft and the height grows by one
    let n = if t.leaves().is_empty() { 0 } else { rng.gen_range(0..=1) };
    let subs: Vec<Tree> = t.leaves().iter().map(|(_, c)| random_tree_rooted(rng, c, n, 2)).collect();
    let g = t.graft(&subs)?;
    let m = t.height();
    let mut top = g.clone();
    for _ in 0..=n {
        top = top.face(top.height())?;
    }
    let mut bottom = g.clone();
    for _ in 0..=m {
        bottom = bottom.face(0)?;
    }
    let sum = sum_trees(t.leaves(), &subs)?;
    let sizes_ok = (0..=n).all(|j| g.level(m + 1 + j).len() == subs.iter().map(|s| s.level(j).len()).sum::<usize>());
    Ok((top == *t && bottom.is_isomorphic(&sum) && sizes_ok, g.is_well_colored() && sum.is_well_colored()))
}

pub fn trees_suite(cfg: &RunConfig) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x7ee);
    let mut ff = Check::new("face-face identity");
    let mut dd = Check::new("degeneracy-degeneracy identity");
    let mut fd = Check::new("face-degeneracy identities");
    let mut act = Check::new("action is functorial");
    let mut graft = Check::new("grafting stacks levels");
    let mut colored = Check::new("constructed trees are well colored");
    let mut sp = Check::new("sum and product level sizes");

    for _ in 0..TREE_TRIALS {
        let h = rng.gen_range(0..=4);
        let t = random_tree(&mut rng, h, 5);
        let m = t.height();
        for j in 0..=m {
            // two faces need two inner levels to remove
            for i in (0..j).filter(|_| m >= 2) {
                ff.record_result(faces(&t, i, j), || format!("i={i} j={j} on {t:?}"));
            }
            for i in 0..=j {
                dd.record_result(degeneracies(&t, i, j), || format!("i={i} j={j} on {t:?}"));
            }
            for i in 0..=m + 1 {
                fd.record_result(face_degeneracy(&t, i, j), || format!("i={i} j={j} on {t:?}"));
            }
        }

        let k = rng.gen_range(0..=3);
        let n = rng.gen_range(0..=3);
        let phi = SimplexMap::random(&mut rng, k, n);
        let psi = SimplexMap::random(&mut rng, n, m);
        let outcome = (|| Ok(t.act(&psi.after(&phi)?)? == t.act(&psi)?.act(&phi)?))();
        act.record_result(outcome, || format!("psi={psi:?} phi={phi:?} on {t:?}"));

        match graft_checks(&mut rng, &t) {
            Ok((shape, wc)) => {
                graft.record(shape, || format!("grafting onto {t:?}"));
                colored.record(wc, || format!("grafting onto {t:?}"));
            }
            Err(e) => graft.record(false, || format!("{e} grafting onto {t:?}")),
        }
    }

    for _ in 0..TREE_TRIALS / 5 {
        let h = rng.gen_range(0..=2);
        let amb = if rng.gen_bool(0.7) { Color::C } else { Color::D };
        let a = crate::operad::check::random_arity(&mut rng, amb, 3);
        let trees: Vec<Tree> = a.iter().map(|(_, c)| random_tree_rooted(&mut rng, c, h, 2)).collect();
        if trees.is_empty() {
            continue;
        }
        let outcome = (|| {
            let s = sum_trees(&a, &trees)?;
            let p = prod_trees(&a, &trees)?;
            let mut ok = true;
            for j in 0..=h {
                ok &= s.level(j).len() == trees.iter().map(|t| t.level(j).len()).sum::<usize>();
                ok &= p.level(j).len() == trees.iter().map(|t| t.level(j).len()).product::<usize>();
            }
            colored.record(s.is_well_colored() && p.is_well_colored(), || format!("sum or product over {a}"));
            Ok(ok)
        })();
        sp.record_result(outcome, || format!("family over {a}"));
    }

    let mut report = Report::new("trees");
    for c in [ff, dd, fd, act, graft, colored, sp] {
        report.push(c);
    }
    report
}
