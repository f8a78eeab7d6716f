//! Run one verification suite with and without an injected fault.

use relop::verify::{run, Fault, RunConfig, Suite};

fn main() -> relop::Result<()> {
    let cfg = RunConfig { seed: 7, ..Default::default() };
    print!("{}", run(Suite::Partitions, &cfg)?.to_text());
    let broken = run(Suite::Partitions, &RunConfig { fault: Some(Fault::PartitionMerge), ..cfg })?;
    println!("with a faulty merge: {} failing checks", broken.failures().count());
    Ok(())
}
