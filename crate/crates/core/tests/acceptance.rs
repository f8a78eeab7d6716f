//! Acceptance criteria 1 to 7, one PASS/FAIL line each. Runs without the
//! test harness so the lines are always printed.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use relop::bar::tree_shapes;
use relop::demo::run_demo;
use relop::geom::TOLERANCE;
use relop::partitions::{merge, Partition};
use relop::report::Report;
use relop::verify::partitions::{delta_oracle, MAX_DEN, MAX_LEVEL, MAX_MEMBERS, PARTITION_TRIALS};
use relop::verify::{bar::BAR_TRIALS, geom::CONFIGS, geom::GEOM_TRIALS, trees::TREE_TRIALS};
use relop::verify::{geom_operad_axioms, run, RunConfig, Suite};

const SEED: u64 = 0;
/// Numeric tolerance of every sampled comparison.
const TOL: f64 = 1e-9;
const MIN_INSTANCES: usize = 1000;
const GEOM_SAMPLES: usize = 200;
const IDENTITY_BUDGET: Duration = Duration::from_secs(30);
const AXIOM_BUDGET: Duration = Duration::from_secs(60);
const GEOMETRY_BUDGET: Duration = Duration::from_secs(30);

struct Outcome {
    ok: bool,
    detail: String,
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into() }
}

fn cfg() -> RunConfig {
    RunConfig { seed: SEED, tolerance: TOL, ..Default::default() }
}

/// Every named check exists, passes and has at least `min` instances.
fn require(report: &Report, names: &[&str], min: usize) -> Result<usize, String> {
    let mut total = 0;
    for name in names {
        let c = report.check(name).ok_or_else(|| format!("missing check {name:?}"))?;
        if !c.passed() {
            return Err(format!(
                "{name}: {} of {} failed, e.g. {}",
                c.failures,
                c.instances,
                c.witness.clone().unwrap_or_default()
            ));
        }
        if c.instances < min {
            return Err(format!("{name}: {} instances, need {min}", c.instances));
        }
        total += c.instances;
    }
    Ok(total)
}

/// Every check whose name starts with `prefix` passes; at least one exists.
fn require_prefix(report: &Report, prefix: &str) -> Result<usize, String> {
    let checks: Vec<_> = report.checks.iter().filter(|c| c.name.starts_with(prefix)).collect();
    if checks.is_empty() {
        return Err(format!("no checks under {prefix:?}"));
    }
    if let Some(c) = checks.iter().find(|c| !c.passed()) {
        return Err(format!("{}: {} failures, e.g. {}", c.name, c.failures, c.witness.clone().unwrap_or_default()));
    }
    Ok(checks.len())
}

fn within(start: Instant, budget: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    if t < budget {
        Ok(t)
    } else {
        Err(format!("took {t:?}, budget {budget:?}"))
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let go = || -> Result<String, String> {
        if TREE_TRIALS < MIN_INSTANCES || PARTITION_TRIALS < MIN_INSTANCES || BAR_TRIALS < MIN_INSTANCES {
            return Err("fewer than 1000 random instances configured".into());
        }
        let trees = run(Suite::Trees, &cfg()).map_err(|e| e.to_string())?;
        let parts = run(Suite::Partitions, &cfg()).map_err(|e| e.to_string())?;
        let bar = run(Suite::Bar, &cfg()).map_err(|e| e.to_string())?;
        let mut n = require(
            &trees,
            &["face-face identity", "degeneracy-degeneracy identity", "face-degeneracy identities"],
            MIN_INSTANCES,
        )?;
        n += require(
            &parts,
            &["coface-coface identity", "codegeneracy-codegeneracy identity", "coface-codegeneracy identities"],
            MIN_INSTANCES,
        )?;
        for op in ["com", "free"] {
            let names: Vec<String> =
                ["face-face", "degeneracy-degeneracy", "face-degeneracy"].iter().map(|x| format!("{op}/{x}")).collect();
            n += require(&bar, &names.iter().map(String::as_str).collect::<Vec<_>>(), MIN_INSTANCES)?;
        }
        let t = within(start, IDENTITY_BUDGET)?;
        Ok(format!("{n} identity instances over trees, partitions and bar elements in {t:.1?}"))
    };
    into_outcome(go())
}

fn criterion_2() -> Outcome {
    let go = || -> Result<String, String> {
        if (MAX_MEMBERS, MAX_LEVEL, MAX_DEN) != (4, 4, 24) || PARTITION_TRIALS < MIN_INSTANCES {
            return Err("random family bounds changed".into());
        }
        let parts = run(Suite::Partitions, &cfg()).map_err(|e| e.to_string())?;
        let n = require(&parts, &["merge round-trip", "extraction maps match the counting oracle"], MIN_INSTANCES)?;
        require(&parts, &["worked merge instance"], 1)?;
        let t1 = Partition::parse(&["1/3"]).map_err(|e| e.to_string())?;
        let t2 = Partition::parse(&["1/6", "2/3"]).map_err(|e| e.to_string())?;
        let (merged, deltas) = merge(&[t1.clone(), t2.clone()]).map_err(|e| e.to_string())?;
        let want = Partition::parse(&["1/6", "1/3", "2/3"]).map_err(|e| e.to_string())?;
        // frozen from the counting oracle
        let frozen: [&[usize]; 2] = [&[0, 0, 1, 1], &[0, 1, 1, 2]];
        let oracle = [delta_oracle(&merged, &t1), delta_oracle(&merged, &t2)];
        if merged != want || deltas[0].values() != frozen[0] || deltas[1].values() != frozen[1] {
            return Err(format!(
                "worked instance gave {merged} with {:?} and {:?}",
                deltas[0].values(),
                deltas[1].values()
            ));
        }
        if oracle[0] != frozen[0] || oracle[1] != frozen[1] {
            return Err(format!("counting oracle gave {oracle:?}"));
        }
        Ok(format!("{n} round-trip instances; <1/6,1/3,2/3> with [0,0,1,1] and [0,1,1,2]"))
    };
    into_outcome(go())
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let go = || -> Result<String, String> {
        if TOLERANCE != TOL || GEOM_TRIALS < GEOM_SAMPLES {
            return Err(format!("geometric tolerance {TOLERANCE:e} with {GEOM_TRIALS} samples"));
        }
        let ops = run(Suite::Operads, &cfg()).map_err(|e| e.to_string())?;
        let mut n = 0;
        for prefix in ["com/", "free/one/", "free/two/", "end/1x2/", "end/2x3/"] {
            n += require_prefix(&ops, prefix)?;
        }
        let geom = geom_operad_axioms(SEED).sorted();
        for dim in 1..=4 {
            n += require_prefix(&geom, &format!("emb/{dim}/"))?;
            n += require_prefix(&geom, &format!("steiner/{dim}/"))?;
        }
        n += require_prefix(&geom, "isometries/")?;
        if let Some(c) = geom.checks.iter().find(|c| !c.name.ends_with("nullary point") && c.instances < GEOM_SAMPLES) {
            return Err(format!("{} has {} samples", c.name, c.instances));
        }
        let t = within(start, AXIOM_BUDGET)?;
        Ok(format!(
            "{n} axiom checks, symbolic exactly and geometric at {GEOM_SAMPLES} samples within {TOL:e}, in {t:.1?}"
        ))
    };
    into_outcome(go())
}

fn criterion_4() -> Outcome {
    let go = || -> Result<String, String> {
        let pairs = run(Suite::Pairs, &cfg()).map_err(|e| e.to_string())?;
        let mut n = 0;
        for prefix in [
            "com/",
            "steiner/1/",
            "steiner/2/",
            "nat-poly/interchange/",
            "nat-poly/coercions/",
            "nat-poly/tables/",
            "g0/",
        ] {
            n += require_prefix(&pairs, prefix)?;
        }
        Ok(format!("{n} pair checks"))
    };
    into_outcome(go())
}

fn criterion_5() -> Outcome {
    let go = || -> Result<String, String> {
        let shapes: usize = (0..=2).map(|h| tree_shapes(h, 2).len()).sum();
        if tree_shapes(0, 2).len() != 9 {
            return Err("height 0 shapes: expected 6 with a c root and 3 with a d root".into());
        }
        let bar = run(Suite::Bar, &cfg()).map_err(|e| e.to_string())?;
        let n = require(
            &bar,
            &[
                "realization/eta' intertwines theta on every small shape",
                "realization/eta' intertwines chi on every small shape",
                "realization/eta' intertwines theta",
                "realization/eta' intertwines chi",
                "normal form/normal form is idempotent",
                "normal form/normal form is confluent",
            ],
            1,
        )?;
        require_prefix(&bar, "realization/")?;
        require_prefix(&bar, "normal form/")?;
        Ok(format!("{n} instances over {shapes} exhaustive shapes and random level 3 operands"))
    };
    into_outcome(go())
}

fn criterion_6() -> Outcome {
    let go = || -> Result<String, String> {
        let mut lines = Vec::new();
        for name in ["fig2", "fig3", "fig4"] {
            let d = run_demo(name, TOL).map_err(|e| e.to_string())?;
            if !d.report.passed() {
                return Err(d.report.to_text());
            }
            lines.push(d);
        }
        let f2 = &lines[0].facts;
        if f2["merged"] != serde_json::json!(["1/6", "1/3", "2/3"])
            || f2["leaves"].as_array().map(Vec::len) != Some(7)
            || f2["identity_levels"] != serde_json::json!([[0, 2], [1]])
        {
            return Err(format!("fig2 facts {f2}"));
        }
        if lines[1].facts["leaves"].as_array().map(Vec::len) != Some(12) {
            return Err(format!("fig3 facts {}", lines[1].facts));
        }
        if lines[2].facts["branches"].as_array().map(Vec::len) != Some(3) {
            return Err(format!("fig4 facts {}", lines[2].facts));
        }
        Ok("sum with 7 leaves and identities at [[0,2],[1]], 12 product leaves, 3 branches and infinity outside".into())
    };
    into_outcome(go())
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let go = || -> Result<String, String> {
        if CONFIGS != 100 {
            return Err(format!("{CONFIGS} configurations"));
        }
        let geom = run(Suite::Geom, &cfg()).map_err(|e| e.to_string())?;
        let n = require(
            &geom,
            &[
                "phibar after phi is the identity",
                "psi after phi is chi",
                "steiner systems keep endpoints and are 1-Lipschitz",
            ],
            CONFIGS,
        )?;
        let m = require(
            &geom,
            &["embedding inverse is two-sided on the certified interior", "steiner inverse is two-sided"],
            MIN_INSTANCES,
        )?;
        let t = within(start, GEOMETRY_BUDGET)?;
        Ok(format!("{n} configuration checks and {m} inverse samples within {TOL:e} in {t:.1?}"))
    };
    into_outcome(go())
}

fn into_outcome(r: Result<String, String>) -> Outcome {
    match r {
        Ok(detail) => Outcome { ok: true, detail },
        Err(e) => fail(e),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("simplicial identities", criterion_1),
        ("merge and extraction round-trip", criterion_2),
        ("operad axioms", criterion_3),
        ("operad pair axioms", criterion_4),
        ("bar and eta' homomorphisms", criterion_5),
        ("worked instance reconstructions", criterion_6),
        ("geometry", criterion_7),
    ];
    let mut all = true;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        all &= o.ok;
        println!("{} criterion {}: {name}: {}", if o.ok { "PASS" } else { "FAIL" }, k + 1, o.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
