use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Fault, RunConfig};
use crate::error::Result;
use crate::partitions::{merge, part_act, Partition, SimplexMap};
use crate::report::{Check, Report};

pub const PARTITION_TRIALS: usize = 1000;
pub const MAX_MEMBERS: usize = 4;
pub const MAX_LEVEL: usize = 4;
pub const MAX_DEN: i64 = 24;

/// Extraction that sends ties to the next coordinate. Used only as a fault.
fn faulty_merge(family: &[Partition]) -> Result<(Partition, Vec<SimplexMap>)> {
    let (merged, _) = merge(family)?;
    let deltas = family
        .iter()
        .map(|t| {
            let ma = t.level();
            let mut values: Vec<usize> =
                merged.coords().iter().map(|x| t.coords().iter().position(|y| x < y).unwrap_or(ma)).collect();
            values.push(ma);
            SimplexMap::new(values, ma)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((merged, deltas))
}

/// `δ^a(j)` counts the coordinates of `t^a` strictly below the `j`-th merged one.
pub fn delta_oracle(merged: &Partition, t: &Partition) -> Vec<usize> {
    let mut v: Vec<usize> = merged.coords().iter().map(|x| t.coords().iter().filter(|y| *y < x).count()).collect();
    v.push(t.level());
    v
}

fn random_family(rng: &mut ChaCha8Rng) -> Vec<Partition> {
    let n = rng.gen_range(1..=MAX_MEMBERS);
    (0..n)
        .map(|_| {
            let level = rng.gen_range(0..=MAX_LEVEL);
            Partition::random(rng, level, MAX_DEN)
        })
        .collect()
}

fn identities(t: &Partition, ff: &mut Check, dd: &mut Check, fd: &mut Check, agree: &mut Check) {
    let m = t.level();
    let w = || format!("{t}");
    for j in 0..=m + 1 {
        for i in 0..j {
            ff.record_result((|| Ok(t.coface(i)?.coface(j)? == t.coface(j - 1)?.coface(i)?))(), w);
        }
    }
    for j in 0..m.saturating_sub(1) {
        for i in 0..=j {
            dd.record_result(
                (|| Ok(t.codegeneracy(i)?.codegeneracy(j)? == t.codegeneracy(j + 1)?.codegeneracy(i)?))(),
                w,
            );
        }
    }
    for j in 0..=m {
        for i in 0..=m + 1 {
            let outcome = (|| {
                let lhs = t.coface(i)?.codegeneracy(j)?;
                let rhs = if i == j || i == j + 1 {
                    t.clone()
                } else if i < j {
                    t.codegeneracy(j - 1)?.coface(i)?
                } else {
                    t.codegeneracy(j)?.coface(i - 1)?
                };
                Ok(lhs == rhs)
            })();
            fd.record_result(outcome, || format!("i={i} j={j} on {t}"));
        }
    }
    for i in 0..=m + 1 {
        agree.record_result((|| Ok(part_act(&SimplexMap::coface(m + 1, i)?, t)? == t.coface(i)?))(), w);
    }
    for i in 0..m {
        agree.record_result((|| Ok(part_act(&SimplexMap::codegeneracy(m - 1, i)?, t)? == t.codegeneracy(i)?))(), w);
    }
}

pub fn partitions_suite(cfg: &RunConfig) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9a7);
    let merger: fn(&[Partition]) -> Result<(Partition, Vec<SimplexMap>)> =
        if cfg.has(Fault::PartitionMerge) { faulty_merge } else { merge };

    let mut ff = Check::new("coface-coface identity");
    let mut dd = Check::new("codegeneracy-codegeneracy identity");
    let mut fd = Check::new("coface-codegeneracy identities");
    let mut agree = Check::new("cofaces and codegeneracies are gap pushforwards");
    let mut functor = Check::new("pushforward is functorial");
    let mut round = Check::new("merge round-trip");
    let mut oracle = Check::new("extraction maps match the counting oracle");
    let mut perm = Check::new("merge ignores member order");
    let mut fig = Check::new("worked merge instance");

    for _ in 0..PARTITION_TRIALS {
        let level = rng.gen_range(0..=MAX_LEVEL);
        let t = Partition::random(&mut rng, level, MAX_DEN);
        identities(&t, &mut ff, &mut dd, &mut fd, &mut agree);

        let n = rng.gen_range(0..=MAX_LEVEL);
        let k = rng.gen_range(0..=MAX_LEVEL);
        let phi = SimplexMap::random(&mut rng, t.level(), n);
        let psi = SimplexMap::random(&mut rng, n, k);
        let outcome = (|| Ok(part_act(&psi.after(&phi)?, &t)? == part_act(&psi, &part_act(&phi, &t)?)?))();
        functor.record_result(outcome, || format!("phi={phi:?} psi={psi:?} on {t}"));

        let family = random_family(&mut rng);
        let fam_text = || family.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        match merger(&family) {
            Ok((merged, deltas)) => {
                let back = family.iter().zip(&deltas).all(|(t, d)| part_act(d, &merged).is_ok_and(|x| x == *t));
                round.record(back, || format!("{} from {}", merged, fam_text()));
                let same = family.iter().zip(&deltas).all(|(t, d)| d.values() == delta_oracle(&merged, t).as_slice());
                oracle.record(same, fam_text);
                let mut shuffled: Vec<usize> = (0..family.len()).collect();
                shuffled.shuffle(&mut rng);
                let permuted: Vec<Partition> = shuffled.iter().map(|&i| family[i].clone()).collect();
                let ok = merger(&permuted)
                    .is_ok_and(|(m2, d2)| m2 == merged && shuffled.iter().zip(&d2).all(|(&i, d)| *d == deltas[i]));
                perm.record(ok, fam_text);
            }
            Err(e) => round.record(false, || format!("{e} on {}", fam_text())),
        }
    }

    let outcome = (|| {
        let t1 = Partition::from_fracs(&[(1, 3)])?;
        let t2 = Partition::from_fracs(&[(1, 6), (2, 3)])?;
        let (merged, deltas) = merger(&[t1, t2])?;
        Ok(merged == Partition::from_fracs(&[(1, 6), (1, 3), (2, 3)])?
            && deltas[0].values() == [0, 0, 1, 1]
            && deltas[1].values() == [0, 1, 1, 2])
    })();
    fig.record_result(outcome, || "<1/3> and <1/6,2/3>".to_string());
    fig.record(merger(&[]).is_err(), || "empty family merged".to_string());

    let mut report = Report::new("partitions");
    for c in [ff, dd, fd, agree, functor, round, oracle, perm, fig] {
        report.push(c);
    }
    report
}
