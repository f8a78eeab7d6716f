//! Sums and products of realized bar points, with their diagrams.

use relop::demo::run_demo;

fn main() -> relop::Result<()> {
    for name in ["fig2", "fig3"] {
        let demo = run_demo(name, 1e-9)?;
        print!("{}", demo.report.to_text());
        println!("{}", serde_json::to_string_pretty(&demo.facts).expect("json"));
    }
    print!("{}", run_demo("fig2", 1e-9)?.dot);
    Ok(())
}
