//! Composition in a free relative operad and a seeded run of the operad axioms.

use relop::operad::{check_operad_axioms, AxiomConfig, FreeOperad, Operad, Signature};

fn main() -> relop::Result<()> {
    let op = FreeOperad::new(Signature::two_generators());
    for (k, g) in op.sig.generators.iter().enumerate() {
        println!("generator {k}: {} at {}", g.name, g.inputs);
    }
    let m = op.generator(0);
    let inner: Vec<_> =
        op.arity(&m).iter().map(|(_, c)| if c == op.arity(&m).ambient() { m.clone() } else { op.unit(c) }).collect();
    match op.compose(&m, &inner) {
        Ok(x) => println!("composite: {}", op.describe(&x)),
        Err(e) => println!("composite rejected: {e}"),
    }

    let report = check_operad_axioms(&op, &AxiomConfig { trials: 50, ..Default::default() });
    print!("{}", report.to_text());
    Ok(())
}
