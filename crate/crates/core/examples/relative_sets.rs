//! Dependent sums and products of relative sets, and the distributivity
//! bijection between them.

use relop::sets::{dep_prod, dep_sum, nu, Color, RelSet};

fn main() -> relop::Result<()> {
    let a = RelSet::of(Color::C, &[("1", Color::C), ("2", Color::D)])?;
    let b = vec![RelSet::of(Color::C, &[("p", Color::C), ("q", Color::D)])?, RelSet::of(Color::D, &[("r", Color::D)])?];
    let nested = vec![
        vec![RelSet::of(Color::C, &[("x", Color::C), ("y", Color::C)])?, RelSet::of(Color::D, &[("z", Color::D)])?],
        vec![RelSet::of(Color::D, &[("u", Color::D), ("v", Color::D)])?],
    ];
    println!("A = {a}");
    println!("sum over A = {}", dep_sum(&a, &b)?);
    println!("product over A = {}", dep_prod(&a, &b)?);

    let map = nu(&a, &b, &nested)?;
    println!("nu: {} elements, bijective: {}", map.source().len(), map.is_bijective());
    for (x, y) in map.assignment() {
        println!("  {x} -> {y}");
    }
    Ok(())
}
