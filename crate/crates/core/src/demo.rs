//! Worked instances: a sum and a product of two realized points, and the
//! branch restrictions of `η` on a three-component root.

use serde_json::{json, Value};

use crate::bar::{
    com_element, eta_eval, eta_prime, point_to_dot, realization_mult, realization_theta, Additive, BarElement,
    DeloopElement, Formal, RealizationPoint,
};
use crate::bar::{deloop_to_dot, dot::tree_to_dot};
use crate::error::{Error, Result};
use crate::geom::{close_vec, Config, EmbOperad, EmbSystem};
use crate::operad::{Algebra, FreeAlgebra, FreeElem, FreeOperad, Generator, NoAlgebra, Operad, Signature, SymVal};
use crate::pairs::semiring::Poly;
use crate::pairs::{semiring_gp, ComPair, GpAlgebra, SVal, SemiringPair};
use crate::partitions::{merge, Partition};
use crate::report::{Check, Report};
use crate::sets::Color::{self, C, D};
use crate::sets::{Label, RelSet};
use crate::trees::Tree;

#[derive(Debug, Clone)]
pub struct Demo {
    pub name: String,
    pub report: Report,
    pub dot: String,
    pub facts: Value,
}

pub const DEMOS: [&str; 4] = ["fig1", "fig2", "fig3", "fig4"];

pub fn run_demo(name: &str, tolerance: f64) -> Result<Demo> {
    match name {
        "fig1" => fig1(),
        "fig2" => fig2(),
        "fig3" => fig3(),
        "fig4" => fig4(tolerance),
        _ => Err(Error::Parse(format!("unknown demo {name:?}, expected one of {}", DEMOS.join(", ")))),
    }
}

fn edges(list: &[(&str, Color)]) -> Vec<(Label, Color)> {
    list.iter().map(|&(l, c)| (Label::from(l), c)).collect()
}

/// Height 3, root `c`, nine leaves; `d` edges only feed `d` edges.
pub fn fig1_tree() -> Tree {
    Tree::new(
        C,
        vec![
            edges(&[("v1", D), ("v2", C), ("v3", C)]),
            edges(&[("v4", D), ("v5", D), ("v6", C), ("v7", C)]),
            edges(&[("v8", D), ("v9", D), ("v10", D), ("v11", C), ("v12", C), ("v13", C)]),
            edges(&[("e1", D), ("e2", D), ("e3", D), ("e4", D), ("e5", C), ("e6", D), ("e7", C), ("e8", D), ("e9", C)]),
        ],
        vec![vec![0, 1, 1, 2], vec![0, 0, 1, 2, 3, 3], vec![0, 0, 1, 2, 3, 3, 4, 5, 5]],
    )
    .expect("fixed tree is well formed")
}

/// First operand: one inner level, root `c`, leaves `c c d c`.
fn left_tree() -> Tree {
    Tree::new(
        C,
        vec![edges(&[("a1", C), ("a2", C)]), edges(&[("x11", C), ("x12", C), ("x13", D), ("x14", C)])],
        vec![vec![0, 0, 1, 1]],
    )
    .expect("fixed tree is well formed")
}

/// Second operand: two inner levels, all `d`, with a nullary vertex `s`.
fn right_tree() -> Tree {
    Tree::new(
        D,
        vec![
            edges(&[("b1", D), ("b2", D)]),
            edges(&[("s", D), ("r4", D), ("r5", D)]),
            edges(&[("x21", D), ("x22", D), ("x23", D)]),
        ],
        vec![vec![0, 0, 1], vec![1, 1, 2]],
    )
    .expect("fixed tree is well formed")
}

fn left_partition() -> Partition {
    Partition::from_fracs(&[(1, 3)]).expect("interior")
}

fn right_partition() -> Partition {
    Partition::from_fracs(&[(1, 6), (2, 3)]).expect("interior")
}

fn fig1() -> Result<Demo> {
    let t = fig1_tree();
    let mut shape = Check::new("tree has height 3 and nine leaves");
    shape.record(t.height() == 3 && t.leaves().len() == 9, || format!("{:?}", t.level_sizes()));
    let mut colored = Check::new("tree is well colored");
    colored.record(t.is_well_colored(), || format!("{t:?}"));
    let mut report = Report::new("fig1");
    report.push(shape);
    report.push(colored);
    Ok(Demo {
        name: "fig1".into(),
        report,
        dot: tree_to_dot(&t, None),
        facts: json!({ "level_sizes": t.level_sizes(), "tree": t }),
    })
}

const FIG2_GENERATORS: [(&str, Color, &[Color]); 9] = [
    ("b1r", C, &[C, C]),
    ("b11", C, &[C, C]),
    ("b12", C, &[D, C]),
    ("b2r", D, &[D, D]),
    ("b21", D, &[D, D]),
    ("b22", D, &[D]),
    ("b24", D, &[D, D]),
    ("b25", D, &[D]),
    ("alpha", C, &[C, D]),
];

fn fig2_operad() -> FreeOperad {
    let gens = FIG2_GENERATORS
        .iter()
        .map(|&(name, out, ins)| {
            let labels: Vec<String> = (1..=ins.len()).map(|k| k.to_string()).collect();
            let elems: Vec<(&str, Color)> = labels.iter().map(String::as_str).zip(ins.iter().copied()).collect();
            Ok(Generator { name: name.into(), inputs: RelSet::of(out, &elems)? })
        })
        .collect::<Result<Vec<_>>>()
        .expect("fixed generators are valid");
    FreeOperad::new(Signature::new(gens).expect("fixed signature is valid"))
}

fn generator(op: &FreeOperad, name: &str, inputs: &RelSet) -> Result<FreeElem> {
    let g = op.sig.generators.iter().position(|g| g.name == name).ok_or_else(|| Error::Parse(name.into()))?;
    op.relabel_to(&op.generator(g), inputs)
}

fn symbols(t: &Tree) -> Vec<SymVal> {
    t.leaves().iter().map(|(l, c)| SymVal::symbol(l.as_str(), c)).collect()
}

fn free_operands(op: &FreeOperad) -> Result<[RealizationPoint<FreeElem, SymVal>; 2]> {
    let t1 = left_tree();
    let b1 = BarElement {
        root: generator(op, "b1r", t1.root_inputs())?,
        vertices: vec![vec![generator(op, "b11", &t1.inputs(0, 0)?)?, generator(op, "b12", &t1.inputs(0, 1)?)?]],
        leaves: symbols(&t1),
        tree: t1,
    };
    let t2 = right_tree();
    let b2 = BarElement {
        root: generator(op, "b2r", t2.root_inputs())?,
        vertices: vec![
            vec![generator(op, "b21", &t2.inputs(0, 0)?)?, generator(op, "b22", &t2.inputs(0, 1)?)?],
            vec![
                op.relabel_to(&op.point(D), &t2.inputs(1, 0)?)?,
                generator(op, "b24", &t2.inputs(1, 1)?)?,
                generator(op, "b25", &t2.inputs(1, 2)?)?,
            ],
        ],
        leaves: symbols(&t2),
        tree: t2,
    };
    b1.validate(op)?;
    b2.validate(op)?;
    Ok([RealizationPoint::new(b1, left_partition())?, RealizationPoint::new(b2, right_partition())?])
}

/// Whether the vertex at edge `k` of level `i` is a unit on its single input.
fn is_identity<O: Operad, X>(op: &O, b: &BarElement<O::Elem, X>, i: usize, k: usize) -> bool {
    let Ok(inputs) = b.tree.inputs(i, k) else { return false };
    inputs.len() == 1 && inputs.color_at(0) == b.tree.level(i).color_at(k) && {
        let unit = op.unit_at(inputs.label(0), inputs.color_at(0));
        op.same(&b.vertices[i][k], &unit)
    }
}

/// Levels of the merged element at which every vertex coming from operand
/// `a` is an identity; `sizes[a][j]` counts the vertices of operand `a` at level `j`.
fn identity_levels<O: Operad, X>(op: &O, b: &BarElement<O::Elem, X>, sizes: &[Vec<usize>]) -> Vec<Vec<usize>> {
    (0..sizes.len())
        .map(|a| {
            (0..b.tree.height())
                .filter(|&j| {
                    let start: usize = sizes[..a].iter().map(|s| s[j]).sum();
                    (start..start + sizes[a][j]).all(|k| is_identity(op, b, j, k))
                })
                .collect()
        })
        .collect()
}

fn fig2() -> Result<Demo> {
    let op = fig2_operad();
    let alg = FreeAlgebra::default();
    let ps = free_operands(&op)?;
    let alpha = generator(&op, "alpha", &RelSet::of(C, &[("1", C), ("2", D)])?)?;
    let q = realization_theta(&op, &alg, &alpha, &ps)?;

    let (merged, deltas) = merge(&[left_partition(), right_partition()])?;
    let sizes: Vec<Vec<usize>> =
        ps.iter().zip(&deltas).map(|(p, d)| Ok(p.element.tree.act(d)?.level_sizes())).collect::<Result<_>>()?;
    let expected_merge = Partition::from_fracs(&[(1, 6), (1, 3), (2, 3)])?;

    let mut report = Report::new("fig2");
    let mut part = Check::new("merged partition is <1/6,1/3,2/3>");
    part.record(q.partition == expected_merge && merged == expected_merge, || format!("{}", q.partition));
    let mut leaves = Check::new("sum tree has seven leaves");
    leaves.record(q.element.leaves.len() == 7, || format!("{} leaves", q.element.leaves.len()));
    let ids = identity_levels(&op, &q.element, &sizes);
    let mut inserted = Check::new("identities inserted at levels 0 and 2 of the first operand and 1 of the second");
    inserted.record(ids == vec![vec![0, 2], vec![1]], || format!("{ids:?}"));
    let mut hom = Check::new("eta' of the sum is alpha of the eta' values");
    let outcome = (|| {
        let vals = ps.iter().map(|p| eta_prime(&op, &alg, p)).collect::<Result<Vec<_>>>()?;
        Ok(eta_prime(&op, &alg, &q)? == alg.theta(&op, &alpha, &vals)?)
    })();
    hom.record_result(outcome, || "collapse disagrees".into());
    for c in [part, leaves, inserted, hom] {
        report.push(c);
    }

    let render = |e: &FreeElem| e.term.render(&op.sig);
    let dot = point_to_dot(&q, &render, &|x: &SymVal| x.term.render(&op.sig));
    let facts = json!({
        "merged": q.partition,
        "deltas": deltas.iter().map(|d| d.values().to_vec()).collect::<Vec<_>>(),
        "leaves": q.element.leaves.iter().map(|x| x.term.render(&op.sig)).collect::<Vec<_>>(),
        "level_sizes": q.element.tree.level_sizes(),
        "identity_levels": ids,
    });
    Ok(Demo { name: "fig2".into(), report, dot, facts })
}

fn poly(constant: u64, y: u64, y2: u64) -> SVal {
    SVal::Poly(Poly::monomial(constant, 0).add(&Poly::monomial(y, 1)).add(&Poly::monomial(y2, 2)))
}

/// Expected product `x·y`: natural numbers when both are, polynomials otherwise.
fn product_oracle(x: &SVal, y: &SVal) -> Option<SVal> {
    let as_poly = |v: &SVal| match v {
        SVal::Nat(n) => Some(Poly::constant(n.clone())),
        SVal::Poly(p) => Some(p.clone()),
        SVal::Fin(_) => None,
    };
    match (x, y) {
        (SVal::Nat(a), SVal::Nat(b)) => Some(SVal::Nat(a * b)),
        _ => Some(SVal::Poly(as_poly(x)?.mul(&as_poly(y)?))),
    }
}

fn fig3() -> Result<Demo> {
    let pair = ComPair::default();
    let alg = semiring_gp(SemiringPair::nat_poly());
    let left = vec![poly(0, 1, 0), poly(1, 1, 0), SVal::nat(2), poly(0, 0, 1)];
    let right = vec![SVal::nat(3), SVal::nat(5), SVal::nat(7)];
    let ps = [
        RealizationPoint::new(com_element(left_tree(), left.clone())?, left_partition())?,
        RealizationPoint::new(com_element(right_tree(), right.clone())?, right_partition())?,
    ];
    let f = RelSet::of(C, &[("1", C), ("2", D)])?;
    let q = realization_mult(&pair, &alg, &f, &ps)?;

    let mut report = Report::new("fig3");
    let mut part = Check::new("merged partition is <1/6,1/3,2/3>");
    part.record(q.partition == Partition::from_fracs(&[(1, 6), (1, 3), (2, 3)])?, || format!("{}", q.partition));
    let mut count = Check::new("product tree has twelve leaves");
    count.record(q.element.leaves.len() == 12, || format!("{} leaves", q.element.leaves.len()));
    let mut sizes = Check::new("product level sizes are 4, 6, 12, 12");
    sizes.record(q.element.tree.level_sizes() == [4, 6, 12, 12], || format!("{:?}", q.element.tree.level_sizes()));
    let mut values = Check::new("product leaves are the pairwise products");
    let key = |v: &SVal| format!("{v:?}");
    let mut want: Vec<String> =
        left.iter().flat_map(|x| right.iter().filter_map(|y| product_oracle(x, y))).map(|v| key(&v)).collect();
    let mut got: Vec<String> = q.element.leaves.iter().map(key).collect();
    want.sort();
    got.sort();
    values.record(want == got, || format!("{got:?}"));
    let mut hom = Check::new("eta' of the product is chi of the eta' values");
    let outcome = (|| {
        let additive = Additive { pair: &pair, alg: &alg };
        let vals = ps.iter().map(|p| eta_prime(&crate::operad::Com, &additive, p)).collect::<Result<Vec<_>>>()?;
        Ok(eta_prime(&crate::operad::Com, &additive, &q)? == alg.chi(&pair, &f, &vals)?)
    })();
    hom.record_result(outcome, || "collapse disagrees".into());
    for c in [part, count, sizes, values, hom] {
        report.push(c);
    }

    let dot = point_to_dot(&q, &|a: &RelSet| a.to_string(), &|x: &SVal| x.to_string());
    let facts = json!({
        "merged": q.partition,
        "level_sizes": q.element.tree.level_sizes(),
        "leaves": q.element.leaves.iter().map(ToString::to_string).collect::<Vec<_>>(),
    });
    Ok(Demo { name: "fig3".into(), report, dot, facts })
}

/// Root centers of the three components and their common minimal distance.
pub const FIG4_CENTERS: [[f64; 2]; 3] = [[0.0, 1.5], [0.0, 0.0], [0.0, -1.5]];
const FIG4_M: f64 = 1.5;

fn spread(inputs: &RelSet) -> Result<EmbSystem> {
    let n = inputs.len();
    let points: Vec<Vec<f64>> = if n == 1 {
        // a nonzero translation, so that no level is degenerate
        vec![vec![0.25, 0.0]]
    } else {
        (0..n).map(|k| vec![0.0, k as f64 - (n as f64 - 1.0) / 2.0]).collect()
    };
    Ok(Config::new(inputs.clone(), 2, points)?.chi())
}

fn fig4_point() -> Result<RealizationPoint<EmbSystem, Formal>> {
    let tree = fig1_tree();
    let root = Config::new(tree.root_inputs().clone(), 2, FIG4_CENTERS.iter().map(|c| c.to_vec()).collect())?.chi();
    let vertices = (0..tree.height())
        .map(|i| (0..tree.level(i).len()).map(|k| spread(&tree.inputs(i, k)?)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let leaves = (1..=tree.leaves().len()).map(|k| Formal(format!("x{k}"))).collect();
    let b = BarElement { tree, root, vertices, leaves };
    b.validate(&EmbOperad::new(2))?;
    RealizationPoint::new(b, Partition::from_fracs(&[(1, 4), (1, 2), (3, 4)])?)
}

/// `w ↦ w·m/(m − 2‖w‖)` with `w = v − x_a`, the inverse of the radial map.
pub fn radial_pullback(center: &[f64], m: f64, v: &[f64]) -> Vec<f64> {
    let w: Vec<f64> = v.iter().zip(center).map(|(a, b)| a - b).collect();
    let r = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    w.iter().map(|x| x * m / (m - 2.0 * r)).collect()
}

const FIG4_OFFSETS: [[f64; 2]; 4] = [[0.3, 0.2], [-0.5, 0.1], [0.0, -0.6], [0.1, 0.7]];
const FIG4_OUTSIDE: [[f64; 2]; 5] = [[1.0, 0.0], [0.0, 3.0], [-2.0, -2.0], [0.5, 0.75], [0.0, 0.75]];

fn fig4(tol: f64) -> Result<Demo> {
    let op = EmbOperad::new(2);
    let alg = NoAlgebra::<Formal>::default();
    let p = fig4_point()?;
    let tree = fig1_tree();
    let mut report = Report::new("fig4");
    let mut dots = vec![point_to_dot(&p, &|_: &EmbSystem| "chi".into(), &|x: &Formal| x.0.clone())];
    let mut branches = Vec::new();
    for (a, center) in FIG4_CENTERS.iter().enumerate() {
        let want_leaves: Vec<Formal> = (3 * a + 1..=3 * a + 3).map(|k| Formal(format!("x{k}"))).collect();
        let want_tree = tree.subtree_above(a)?;
        let mut check = Check::new(format!("branch {} restricts to its subtree with the closed-form pullback", a + 1));
        for off in FIG4_OFFSETS {
            let v = [center[0] + off[0], center[1] + off[1]];
            let want = radial_pullback(center, FIG4_M, &v);
            let outcome = eta_eval(&op, &alg, &p, &v).map(|(d, _)| match &d {
                DeloopElement::At { tree, leaves, vector, .. } => {
                    *tree == want_tree && *leaves == want_leaves && close_vec(vector, &want, tol)
                }
                DeloopElement::Infinity(_) => false,
            });
            check.record_result(outcome, || format!("at {v:?}"));
        }
        let v = [center[0] + FIG4_OFFSETS[0][0], center[1] + FIG4_OFFSETS[0][1]];
        if let Ok((d, t)) = eta_eval(&op, &alg, &p, &v) {
            dots.push(deloop_to_dot(&d, Some(&t), &|_: &EmbSystem| "chi".into(), &|x: &Formal| x.0.clone()));
            branches.push(json!({ "at": v, "pullback": radial_pullback(center, FIG4_M, &v), "leaves": want_leaves.iter().map(|x| x.0.clone()).collect::<Vec<_>>() }));
        }
        report.push(check);
    }
    let mut outside = Check::new("points outside the certified union go to infinity");
    for v in FIG4_OUTSIDE {
        outside.record_result(eta_eval(&op, &alg, &p, &v).map(|(d, _)| d == DeloopElement::Infinity(C)), || {
            format!("at {v:?}")
        });
    }
    report.push(outside);
    Ok(Demo {
        name: "fig4".into(),
        report,
        dot: dots.join("\n"),
        facts: json!({ "centers": FIG4_CENTERS, "min_distance": FIG4_M, "branches": branches }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_demo_passes() {
        for name in DEMOS {
            let d = run_demo(name, 1e-9).unwrap();
            assert!(d.report.passed(), "{}", d.report.to_text());
        }
    }

    #[test]
    fn unknown_demo() {
        assert!(run_demo("fig9", 1e-9).is_err());
    }
}
