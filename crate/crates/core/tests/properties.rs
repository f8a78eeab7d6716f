use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use relop::partitions::{merge, part_act, rat, Partition, SimplexMap};
use relop::trees::random_tree;
use relop::verify::partitions::delta_oracle;

fn partition() -> impl Strategy<Value = Partition> {
    prop::collection::vec((0i64..=24, 1i64..=24), 0..=4).prop_map(|v| {
        let mut c: Vec<_> = v.into_iter().map(|(p, q)| rat(p.min(q), q)).collect();
        c.sort();
        Partition::new(c).expect("sorted coordinates in [0,1]")
    })
}

fn family() -> impl Strategy<Value = Vec<Partition>> {
    prop::collection::vec(partition(), 1..=4)
}

proptest! {
    #[test]
    fn merge_round_trips(fam in family()) {
        let (merged, deltas) = merge(&fam).unwrap();
        prop_assert_eq!(merged.level(), fam.iter().map(Partition::level).sum::<usize>());
        for (t, d) in fam.iter().zip(&deltas) {
            prop_assert_eq!(&part_act(d, &merged).unwrap(), t);
            let oracle = delta_oracle(&merged, t);
            prop_assert_eq!(d.values(), oracle.as_slice());
        }
    }

    #[test]
    fn coface_then_codegeneracy_is_identity(t in partition(), i in 0usize..6) {
        let i = i.min(t.level());
        prop_assert_eq!(t.coface(i).unwrap().codegeneracy(i).unwrap(), t.clone());
        prop_assert_eq!(t.coface(i + 1).unwrap().codegeneracy(i).unwrap(), t);
    }

    #[test]
    fn pushforward_is_functorial(t in partition(), n in 0usize..4, k in 0usize..4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = SimplexMap::random(&mut rng, t.level(), n);
        let psi = SimplexMap::random(&mut rng, n, k);
        let lhs = part_act(&psi.after(&phi).unwrap(), &t).unwrap();
        prop_assert_eq!(lhs, part_act(&psi, &part_act(&phi, &t).unwrap()).unwrap());
    }

    #[test]
    fn partition_text_round_trips(t in partition()) {
        let json = serde_json::to_string(&t).unwrap();
        prop_assert_eq!(serde_json::from_str::<Partition>(&json).unwrap(), t);
    }

    #[test]
    fn tree_faces_commute(seed in any::<u64>(), h in 2usize..=4) {
        let t = random_tree(&mut ChaCha8Rng::seed_from_u64(seed), h, 5);
        for j in 1..=h {
            for i in 0..j {
                prop_assert_eq!(t.face(j).unwrap().face(i).unwrap(), t.face(i).unwrap().face(j - 1).unwrap());
            }
        }
    }

    #[test]
    fn tree_degeneracy_is_split_by_faces(seed in any::<u64>(), h in 0usize..=4, j in 0usize..=4) {
        let t = random_tree(&mut ChaCha8Rng::seed_from_u64(seed), h, 5);
        let j = j.min(h);
        let d = t.degeneracy(j).unwrap();
        prop_assert_eq!(d.face(j).unwrap(), t.clone());
        prop_assert_eq!(d.face(j + 1).unwrap(), t.clone());
        prop_assert!(d.is_well_colored());
        prop_assert!(t.is_isomorphic(&t.with_plain_labels()));
    }

    #[test]
    fn tree_json_round_trips(seed in any::<u64>(), h in 0usize..=3) {
        let t = random_tree(&mut ChaCha8Rng::seed_from_u64(seed), h, 4);
        let json = serde_json::to_string(&t).unwrap();
        prop_assert_eq!(serde_json::from_str::<relop::trees::Tree>(&json).unwrap(), t);
    }
}
