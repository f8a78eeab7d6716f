//! Faces, degeneracies and grafting of filtered rooted trees.

use relop::bar::dot::tree_to_dot;
use relop::demo::fig1_tree;
use relop::trees::Tree;

fn main() -> relop::Result<()> {
    let t = fig1_tree();
    println!("level sizes {:?}", t.level_sizes());
    for i in 0..=t.height() {
        println!("face {i}: {:?}", t.face(i)?.level_sizes());
    }
    let d = t.degeneracy(1)?;
    println!("degeneracy 1: {:?}", d.level_sizes());
    assert_eq!(d.face(1)?, t);

    // one corolla on every leaf, matching its color
    let subs: Vec<Tree> = t.leaves().iter().map(|(_, c)| Tree::corolla(&relop::sets::RelSet::singleton(c))).collect();
    let g = t.graft(&subs)?;
    println!("grafted: {:?}", g.level_sizes());

    print!("{}", tree_to_dot(&t.face(t.height())?, None));
    Ok(())
}
