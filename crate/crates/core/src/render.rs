//! Input formats of the command line: partitions for `merge` and trees or
//! realization points for `render`.

use serde::Deserialize;
use serde_json::{json, Value};

use crate::bar::dot::tree_to_dot;
use crate::bar::{point_to_dot, RealizationPoint};
use crate::error::{Error, Result};
use crate::pairs::SVal;
use crate::partitions::{merge, Partition};
use crate::sets::RelSet;
use crate::trees::Tree;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RenderInput {
    /// A `Com` realization point with semiring leaves.
    Point(RealizationPoint<RelSet, SVal>),
    Tree {
        tree: Tree,
        #[serde(default)]
        partition: Option<Partition>,
    },
    Bare(Tree),
}

impl RenderInput {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("expected a tree, a tree with a partition or a point: {e}")))
    }

    pub fn to_dot(&self) -> Result<String> {
        match self {
            RenderInput::Point(p) => {
                p.element.validate(&crate::operad::Com)?;
                Ok(point_to_dot(p, &|a: &RelSet| a.to_string(), &|x: &SVal| x.to_string()))
            }
            RenderInput::Tree { tree, partition } => {
                if let Some(t) = partition {
                    if t.level() != tree.height() {
                        return Err(Error::DomainMismatch(format!(
                            "partition of level {} for a tree of height {}",
                            t.level(),
                            tree.height()
                        )));
                    }
                }
                Ok(tree_to_dot(tree, partition.as_ref()))
            }
            RenderInput::Bare(tree) => Ok(tree_to_dot(tree, None)),
        }
    }
}

/// Partitions from JSON (one partition or a list of them) or from text with
/// one comma separated partition per line; an empty line is `⟨⟩`.
pub fn parse_partitions(text: &str) -> Result<Vec<Partition>> {
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        let v: Value = serde_json::from_str(trimmed)?;
        let nested = v.as_array().is_some_and(|a| a.iter().any(Value::is_array));
        return if nested { Ok(serde_json::from_value(v)?) } else { Ok(vec![serde_json::from_value(v)?]) };
    }
    text.lines()
        .map(|l| {
            let items: Vec<&str> = l.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            Partition::parse(&items)
        })
        .collect()
}

/// The merged partition and the extraction maps as JSON.
pub fn merge_summary(family: &[Partition]) -> Result<Value> {
    let (merged, deltas) = merge(family)?;
    Ok(json!({
        "merged": merged,
        "deltas": deltas.iter().map(|d| d.values().to_vec()).collect::<Vec<_>>(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_json_agree() {
        let a = parse_partitions("1/3\n1/6, 2/3\n").unwrap();
        let b = parse_partitions(r#"[["1/3"], ["1/6", "2/3"]]"#).unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_partitions(r#"["1/3"]"#).unwrap().len(), 1);
    }

    #[test]
    fn bare_tree_renders() {
        let t = crate::demo::fig1_tree();
        let text = serde_json::to_string(&t).unwrap();
        let dot = RenderInput::parse(&text).unwrap().to_dot().unwrap();
        assert_eq!(dot.matches("subgraph cluster_level_").count(), 3);
    }

    #[test]
    fn height_zero_has_no_clusters() {
        let t = Tree::corolla(&RelSet::of(crate::sets::Color::C, &[("x", crate::sets::Color::C)]).unwrap());
        let dot = RenderInput::Bare(t).to_dot().unwrap();
        assert!(!dot.contains("cluster"));
        assert!(dot.contains("r -> l0"));
    }
}
