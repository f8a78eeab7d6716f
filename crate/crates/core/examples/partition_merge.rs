//! Merging partitions and recovering each member through its extraction map.

use relop::partitions::{merge, part_act, Partition};

fn main() -> relop::Result<()> {
    let family = [Partition::parse(&["1/3"])?, Partition::parse(&["1/6", "2/3"])?, Partition::parse(&["1/3", "1/2"])?];
    let (merged, deltas) = merge(&family)?;
    println!("merged {merged}");
    for (t, d) in family.iter().zip(&deltas) {
        let back = part_act(d, &merged)?;
        println!("{t}: delta {:?} gives back {back}", d.values());
        assert_eq!(&back, t);
    }
    println!("cofaces of {}: {} {}", family[0], family[0].coface(0)?, family[0].coface(1)?);
    Ok(())
}
