//! The unit of the delooping on a three-component root: each branch, and
//! infinity outside.

use relop::demo::run_demo;

fn main() -> relop::Result<()> {
    let demo = run_demo("fig4", 1e-9)?;
    print!("{}", demo.report.to_text());
    for b in demo.facts["branches"].as_array().into_iter().flatten() {
        println!("{b}");
    }
    Ok(())
}
