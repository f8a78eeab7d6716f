//! Free relative operads on a signature of generators.
//!
//! Elements are unleveled trees whose vertices carry generators and whose
//! leaves are labeled bijectively by the arity. Any subtree without leaves
//! is identified with the point of its color, so that the nullary part of
//! the operad is a single point per color.

use std::collections::HashSet;

use indexmap::IndexMap;
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::algebra::Algebra;
use super::monad::Pointed;
use super::{check_action, check_inner, Operad};
use crate::error::{Error, Result};
use crate::sets::{Color, Label, RelSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub inputs: RelSet,
}

impl Generator {
    pub fn output(&self) -> Color {
        self.inputs.ambient()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    pub generators: Vec<Generator>,
}

#[derive(Serialize, Deserialize)]
struct GenRepr {
    name: String,
    inputs: Vec<InputRepr>,
    output: Color,
}

#[derive(Serialize, Deserialize)]
struct InputRepr {
    label: Label,
    color: Color,
}

#[derive(Serialize, Deserialize)]
struct SigRepr {
    generators: Vec<GenRepr>,
}

impl Signature {
    pub fn new(generators: Vec<Generator>) -> Result<Self> {
        let mut seen = HashSet::new();
        for g in &generators {
            if !seen.insert(g.name.clone()) {
                return Err(Error::Parse(format!("duplicate generator {}", g.name)));
            }
        }
        Ok(Signature { generators })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: SigRepr = serde_json::from_str(text)?;
        let gens = repr
            .generators
            .into_iter()
            .map(|g| {
                let inputs = RelSet::new(g.output, g.inputs.into_iter().map(|i| (i.label, i.color)))?;
                Ok(Generator { name: g.name, inputs })
            })
            .collect::<Result<Vec<_>>>()?;
        Signature::new(gens)
    }

    pub fn to_json(&self) -> String {
        let repr = SigRepr {
            generators: self
                .generators
                .iter()
                .map(|g| GenRepr {
                    name: g.name.clone(),
                    inputs: g.inputs.iter().map(|(l, c)| InputRepr { label: l.clone(), color: c }).collect(),
                    output: g.output(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&repr).expect("serializable")
    }

    fn gen(name: &str, inputs: &[(&str, Color)], output: Color) -> Generator {
        Generator { name: name.into(), inputs: RelSet::of(output, inputs).expect("valid generator") }
    }

    /// `g: {x_c, y_d}_c` and `k: {x_d, y_d}_d`.
    pub fn two_generators() -> Self {
        Signature {
            generators: vec![
                Self::gen("g", &[("x", Color::C), ("y", Color::D)], Color::C),
                Self::gen("k", &[("x", Color::D), ("y", Color::D)], Color::D),
            ],
        }
    }

    /// Binary products of each color, a unary coercion and a mixed product.
    pub fn standard() -> Self {
        Signature {
            generators: vec![
                Self::gen("m_c", &[("x", Color::C), ("y", Color::C)], Color::C),
                Self::gen("m_d", &[("x", Color::D), ("y", Color::D)], Color::D),
                Self::gen("i", &[("x", Color::D)], Color::C),
                Self::gen("h", &[("x", Color::D), ("y", Color::C)], Color::C),
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Term {
    Leaf(Label),
    Star(Color),
    Node { gen: usize, children: Vec<Term> },
}

impl Term {
    fn has_leaf(&self) -> bool {
        match self {
            Term::Leaf(_) => true,
            Term::Star(_) => false,
            Term::Node { children, .. } => children.iter().any(Term::has_leaf),
        }
    }

    /// Collapse leafless subtrees to points.
    fn normalize(self, sig: &Signature) -> Term {
        match self {
            Term::Node { gen, children } => {
                let children: Vec<Term> = children.into_iter().map(|c| c.normalize(sig)).collect();
                if children.iter().any(Term::has_leaf) {
                    Term::Node { gen, children }
                } else {
                    Term::Star(sig.generators[gen].output())
                }
            }
            t => t,
        }
    }

    pub(crate) fn substitute(&self, f: &mut dyn FnMut(&Label) -> Term) -> Term {
        match self {
            Term::Leaf(l) => f(l),
            Term::Star(c) => Term::Star(*c),
            Term::Node { gen, children } => {
                Term::Node { gen: *gen, children: children.iter().map(|c| c.substitute(f)).collect() }
            }
        }
    }

    fn leaves<'a>(&'a self, out: &mut Vec<&'a Label>) {
        match self {
            Term::Leaf(l) => out.push(l),
            Term::Star(_) => {}
            Term::Node { children, .. } => children.iter().for_each(|c| c.leaves(out)),
        }
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            Term::Node { children, .. } => 1 + children.iter().map(Term::vertex_count).sum::<usize>(),
            _ => 0,
        }
    }

    pub fn render(&self, sig: &Signature) -> String {
        match self {
            Term::Leaf(l) => l.to_string(),
            Term::Star(c) => format!("*{c}"),
            Term::Node { gen, children } => {
                let inner: Vec<String> = children.iter().map(|c| c.render(sig)).collect();
                format!("{}({})", sig.generators[*gen].name, inner.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeElem {
    pub arity: RelSet,
    pub term: Term,
}

#[derive(Debug, Clone)]
pub struct FreeOperad {
    pub sig: Signature,
    /// Vertex bound used when enumerating elements.
    pub max_vertices: usize,
    /// Corrupt composition by swapping two leaves of equal color.
    pub fault: bool,
}

impl FreeOperad {
    pub fn new(sig: Signature) -> Self {
        FreeOperad { sig, max_vertices: 3, fault: false }
    }

    pub fn with_fault(mut self) -> Self {
        self.fault = true;
        self
    }

    /// Build and validate an element.
    pub fn element(&self, arity: RelSet, term: Term) -> Result<FreeElem> {
        let term = term.normalize(&self.sig);
        let root = self.output_color(&term, &arity)?;
        if root != arity.ambient() {
            return Err(Error::ShapeMismatch(format!(
                "term of color {root} at an arity of ambient {}",
                arity.ambient()
            )));
        }
        let mut ls = Vec::new();
        term.leaves(&mut ls);
        if ls.len() != arity.len() || ls.iter().collect::<HashSet<_>>().len() != ls.len() {
            return Err(Error::ShapeMismatch("leaves must be labeled bijectively by the arity".into()));
        }
        Ok(FreeElem { arity, term })
    }

    /// A single generator as an element at its inputs.
    pub fn generator(&self, index: usize) -> FreeElem {
        let g = &self.sig.generators[index];
        FreeElem {
            arity: g.inputs.clone(),
            term: Term::Node { gen: index, children: g.inputs.labels().map(|l| Term::Leaf(l.clone())).collect() },
        }
    }

    fn output_color(&self, term: &Term, arity: &RelSet) -> Result<Color> {
        match term {
            Term::Leaf(l) => arity.color_of(l).ok_or_else(|| Error::ShapeMismatch(format!("leaf {l} not in arity"))),
            Term::Star(c) => Ok(*c),
            Term::Node { gen, children } => {
                let g =
                    self.sig.generators.get(*gen).ok_or_else(|| Error::ShapeMismatch("unknown generator".into()))?;
                if children.len() != g.inputs.len() {
                    return Err(Error::ShapeMismatch(format!("{} takes {} inputs", g.name, g.inputs.len())));
                }
                for (child, (_, c)) in children.iter().zip(g.inputs.iter()) {
                    if self.output_color(child, arity)? != c {
                        return Err(Error::ShapeMismatch(format!("input color mismatch under {}", g.name)));
                    }
                }
                Ok(g.output())
            }
        }
    }

    /// Terms with leaves replaced by color placeholders, at most `budget` vertices.
    fn shapes(&self, color: Color, budget: usize) -> Vec<(Term, usize)> {
        let mut out = vec![(Term::Leaf(placeholder(color)), 0), (Term::Star(color), 0)];
        if budget == 0 {
            return out;
        }
        for (gi, g) in self.sig.generators.iter().enumerate() {
            if g.output() != color {
                continue;
            }
            let mut partial: Vec<(Vec<Term>, usize)> = vec![(vec![], 1)];
            for (_, c) in g.inputs.iter() {
                let mut next = Vec::new();
                for (kids, used) in &partial {
                    for (t, n) in self.shapes(c, budget - used) {
                        if used + n <= budget {
                            let mut k = kids.clone();
                            k.push(t);
                            next.push((k, used + n));
                        }
                    }
                }
                partial = next;
            }
            for (children, used) in partial {
                if children.iter().any(Term::has_leaf) {
                    out.push((Term::Node { gen: gi, children }, used));
                }
            }
        }
        out
    }
}

fn placeholder(c: Color) -> Label {
    Label::from(format!("?{c}"))
}

fn fill(term: &Term, d_labels: &[Label], c_labels: &[Label]) -> Term {
    let (mut di, mut ci) = (0, 0);
    let d = placeholder(Color::D);
    term.substitute(&mut |l| {
        if *l == d {
            di += 1;
            Term::Leaf(d_labels[di - 1].clone())
        } else {
            ci += 1;
            Term::Leaf(c_labels[ci - 1].clone())
        }
    })
}

fn permutations(items: &[Label]) -> Vec<Vec<Label>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head.clone());
            out.push(p);
        }
    }
    out
}

impl Operad for FreeOperad {
    type Elem = FreeElem;

    fn name(&self) -> String {
        let names: Vec<&str> = self.sig.generators.iter().map(|g| g.name.as_str()).collect();
        format!("Free[{}]", names.join(","))
    }

    fn arity<'a>(&self, alpha: &'a FreeElem) -> &'a RelSet {
        &alpha.arity
    }

    fn unit(&self, color: Color) -> FreeElem {
        FreeElem { arity: RelSet::singleton(color), term: Term::Leaf(Label::from("1")) }
    }

    fn point(&self, color: Color) -> FreeElem {
        FreeElem { arity: RelSet::empty(color), term: Term::Star(color) }
    }

    fn compose(&self, alpha: &FreeElem, inner: &[FreeElem]) -> Result<FreeElem> {
        check_inner(&alpha.arity, &inner.iter().map(|b| &b.arity).collect::<Vec<_>>())?;
        let fam: Vec<RelSet> = inner.iter().map(|b| b.arity.clone()).collect();
        let arity = crate::sets::dep_sum(&alpha.arity, &fam)?;
        let term = alpha.term.substitute(&mut |a| {
            let i = alpha.arity.index_of(a).expect("leaf in arity");
            inner[i].term.substitute(&mut |b| Term::Leaf(Label::pair(a, b)))
        });
        let mut term = term.normalize(&self.sig);
        if self.fault {
            let mut ls = Vec::new();
            term.leaves(&mut ls);
            let of_color = |c: Color| -> Vec<Label> {
                ls.iter().filter(|l| arity.color_of(l) == Some(c)).map(|l| (*l).clone()).take(2).collect()
            };
            let mut same_color = of_color(Color::C);
            if same_color.len() < 2 {
                same_color = of_color(Color::D);
            }
            if same_color.len() == 2 {
                let (x, y) = (same_color[0].clone(), same_color[1].clone());
                term = term.substitute(&mut |l| {
                    Term::Leaf(if *l == x {
                        y.clone()
                    } else if *l == y {
                        x.clone()
                    } else {
                        l.clone()
                    })
                });
            }
        }
        Ok(FreeElem { arity, term })
    }

    fn act(&self, alpha: &FreeElem, sigma: &crate::sets::RelMap) -> Result<FreeElem> {
        check_action(&alpha.arity, sigma)?;
        let term = alpha.term.substitute(&mut |l| Term::Leaf(sigma.preimage(l).expect("bijection").clone()));
        Ok(FreeElem { arity: sigma.source().clone(), term })
    }

    fn same(&self, a: &FreeElem, b: &FreeElem) -> bool {
        a == b
    }

    fn elements_at(&self, arity: &RelSet, rng: &mut ChaCha8Rng, budget: usize) -> Vec<FreeElem> {
        let (nd, nc) = arity.color_counts();
        let d_labels: Vec<Label> = arity.iter().filter(|(_, c)| *c == Color::D).map(|(l, _)| l.clone()).collect();
        let c_labels: Vec<Label> = arity.iter().filter(|(_, c)| *c == Color::C).map(|(l, _)| l.clone()).collect();
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (shape, _) in self.shapes(arity.ambient(), self.max_vertices) {
            let shape = shape.normalize(&self.sig);
            let mut ls = Vec::new();
            shape.leaves(&mut ls);
            let pd = ls.iter().filter(|l| **l == &placeholder(Color::D)).count();
            if pd != nd || ls.len() - pd != nc || !seen.insert(shape.clone()) {
                continue;
            }
            if arity.is_empty() != matches!(shape, Term::Star(_)) {
                continue;
            }
            for dp in permutations(&d_labels) {
                for cp in permutations(&c_labels) {
                    out.push(FreeElem { arity: arity.clone(), term: fill(&shape, &dp, &cp) });
                }
            }
        }
        out.sort_by(|a, b| a.term.cmp(&b.term));
        out.dedup();
        if out.len() > budget {
            out.shuffle(rng);
            out.truncate(budget);
        }
        out
    }
}

/// Elements of the free algebra on symbols: terms whose leaves are symbol
/// names. The point `∗_⋆` is the basepoint.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymVal {
    pub color: Color,
    pub term: Term,
}

impl SymVal {
    pub fn symbol(name: &str, color: Color) -> Self {
        SymVal { color, term: Term::Leaf(Label::from(name)) }
    }
}

impl Pointed for SymVal {
    fn is_basepoint(&self) -> bool {
        matches!(self.term, Term::Star(_))
    }
}

/// The free algebra on symbols, with `θ` given by substitution.
#[derive(Debug, Clone, Default)]
pub struct FreeAlgebra {
    pub symbols_d: Vec<String>,
    pub symbols_c: Vec<String>,
}

impl Algebra<FreeOperad> for FreeAlgebra {
    type Val = SymVal;

    fn basepoint(&self, color: Color) -> SymVal {
        SymVal { color, term: Term::Star(color) }
    }

    fn theta(&self, op: &FreeOperad, alpha: &FreeElem, args: &[SymVal]) -> Result<SymVal> {
        if args.len() != alpha.arity.len() {
            return Err(Error::ShapeMismatch("one argument per input required".into()));
        }
        for ((l, c), x) in alpha.arity.iter().zip(args) {
            if x.color != c {
                return Err(Error::ShapeMismatch(format!("argument for {l} has color {}", x.color)));
            }
        }
        let term = alpha
            .term
            .substitute(&mut |a| args[alpha.arity.index_of(a).expect("leaf")].term.clone())
            .normalize(&op.sig);
        Ok(SymVal { color: alpha.arity.ambient(), term })
    }

    fn sample_values(&self, _op: &FreeOperad, color: Color, rng: &mut ChaCha8Rng, n: usize) -> Vec<SymVal> {
        let pool = if color == Color::D { &self.symbols_d } else { &self.symbols_c };
        let mut out: Vec<SymVal> = (0..n)
            .map(|_| match pool.choose(rng) {
                Some(s) => SymVal::symbol(s, color),
                None => self.basepoint(color),
            })
            .collect();
        if n > 0 && rand::Rng::gen_bool(rng, 0.2) {
            out[0] = self.basepoint(color);
        }
        out
    }
}

impl FreeOperad {
    /// Enumerate elements together with a human-readable rendering.
    pub fn describe(&self, e: &FreeElem) -> String {
        format!("{} @ {}", e.term.render(&self.sig), e.arity)
    }

    /// Leaf labels in term order.
    pub fn leaf_order(e: &FreeElem) -> Vec<Label> {
        let mut ls = Vec::new();
        e.term.leaves(&mut ls);
        ls.into_iter().cloned().collect()
    }

    /// Assignment of each leaf to its position in term order.
    pub fn leaf_positions(e: &FreeElem) -> IndexMap<Label, usize> {
        Self::leaf_order(e).into_iter().enumerate().map(|(i, l)| (l, i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn signature_json_round_trip() {
        let s = Signature::standard();
        let back = Signature::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn leafless_subterms_collapse() {
        let op = FreeOperad::new(Signature::standard());
        let m = op.generator(0);
        let pt = op.point(Color::C);
        let one = op.unit_at(&Label::from("y"), Color::C);
        let e = op.compose(&m, &[pt.clone(), one]).unwrap();
        assert_eq!(e.arity.len(), 1);
        let both = op.compose(&m, &[pt.clone(), pt]).unwrap();
        assert_eq!(both.term, Term::Star(Color::C));
    }

    #[test]
    fn grafting_relabels_to_pairs() {
        let op = FreeOperad::new(Signature::standard());
        let m = op.generator(0);
        let e = op.compose(&m, &[m.clone(), op.unit(Color::C)]).unwrap();
        assert_eq!(e.term.render(&op.sig), "m_c(m_c(x.x,x.y),y.1)");
    }

    #[test]
    fn enumeration_is_valid_and_distinct() {
        let op = FreeOperad::new(Signature::two_generators());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for a in crate::sets::canonical_sets(3) {
            let es = op.elements_at(&a, &mut rng, usize::MAX);
            for e in &es {
                op.element(e.arity.clone(), e.term.clone()).unwrap();
            }
            let set: HashSet<_> = es.iter().map(|e| e.term.clone()).collect();
            assert_eq!(set.len(), es.len());
        }
        let one_c = RelSet::singleton(Color::C);
        assert!(!op.elements_at(&one_c, &mut rng, usize::MAX).is_empty());
    }
}
