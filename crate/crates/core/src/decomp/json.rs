use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::branch::BranchDecomposition;
use super::tree::TreeDecomposition;
use crate::error::{Error, Result};

fn key(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(Error::Parse(format!("node ids must be strings or numbers, got {other}"))),
    }
}

fn vertex_lookup(names: &[String]) -> HashMap<&str, usize> {
    let mut map: HashMap<&str, usize> = names.iter().enumerate().map(|(k, s)| (s.as_str(), k)).collect();
    // Prefixed incidence names may also be given without their prefix when unambiguous.
    for (k, s) in names.iter().enumerate() {
        if let Some(bare) = s.strip_prefix("j:").or_else(|| s.strip_prefix("m:")) {
            let clash = names.iter().filter(|x| x.ends_with(&format!(":{bare}"))).count() > 1;
            if !clash {
                map.entry(bare).or_insert(k);
            }
        }
    }
    map
}

fn vertex(map: &HashMap<&str, usize>, v: &Value) -> Result<usize> {
    let name = key(v)?;
    map.get(name.as_str()).copied().ok_or(Error::UnknownId { kind: "vertex", id: name })
}

#[derive(Deserialize, Serialize)]
struct RawTd {
    nodes: Vec<RawNode>,
    #[serde(default)]
    edges: Vec<[Value; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    root: Option<Value>,
}

#[derive(Deserialize, Serialize)]
struct RawNode {
    id: Value,
    bag: Vec<Value>,
}

/// Parses a tree decomposition over vertices named by `names`; returns it with the optional root.
pub fn tree_decomposition_from_json(text: &str, names: &[String]) -> Result<(TreeDecomposition, Option<usize>)> {
    let raw: RawTd = serde_json::from_str(text)?;
    let vmap = vertex_lookup(names);
    let mut ids = HashMap::new();
    let mut bags = Vec::with_capacity(raw.nodes.len());
    for (k, node) in raw.nodes.iter().enumerate() {
        let id = key(&node.id)?;
        if ids.insert(id.clone(), k).is_some() {
            return Err(Error::DuplicateId { kind: "node", id });
        }
        bags.push(node.bag.iter().map(|v| vertex(&vmap, v)).collect::<Result<Vec<_>>>()?);
    }
    let node = |v: &Value| -> Result<usize> {
        let id = key(v)?;
        ids.get(&id).copied().ok_or(Error::UnknownId { kind: "node", id })
    };
    let edges = raw.edges.iter().map(|[a, b]| Ok((node(a)?, node(b)?))).collect::<Result<Vec<_>>>()?;
    let root = raw.root.as_ref().map(node).transpose()?;
    Ok((TreeDecomposition::new(bags, edges), root))
}

pub fn tree_decomposition_to_json(td: &TreeDecomposition, names: &[String], root: Option<usize>) -> String {
    let raw = RawTd {
        nodes: td
            .bags
            .iter()
            .enumerate()
            .map(|(k, bag)| RawNode {
                id: Value::from(k),
                bag: bag.iter().map(|&v| Value::from(names[v].clone())).collect(),
            })
            .collect(),
        edges: td.edges.iter().map(|&(a, b)| [Value::from(a), Value::from(b)]).collect(),
        root: root.map(Value::from),
    };
    serde_json::to_string_pretty(&raw).expect("json values always serialize")
}

#[derive(Deserialize, Serialize)]
struct RawBd {
    leaves: BTreeMap<String, Value>,
    #[serde(default)]
    edges: Vec<[Value; 2]>,
}

pub fn branch_decomposition_from_json(text: &str, names: &[String]) -> Result<BranchDecomposition> {
    let raw: RawBd = serde_json::from_str(text)?;
    let vmap = vertex_lookup(names);
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut intern = |v: &Value| -> Result<usize> {
        let id = key(v)?;
        let next = ids.len();
        Ok(*ids.entry(id).or_insert(next))
    };
    let mut leaf_of = vec![usize::MAX; names.len()];
    for (vname, leaf) in &raw.leaves {
        let v = vertex(&vmap, &Value::from(vname.clone()))?;
        leaf_of[v] = intern(leaf)?;
    }
    if let Some(v) = leaf_of.iter().position(|&t| t == usize::MAX) {
        return Err(Error::Invalid(format!("vertex `{}` has no leaf", names[v])));
    }
    let edges = raw.edges.iter().map(|[a, b]| Ok((intern(a)?, intern(b)?))).collect::<Result<Vec<_>>>()?;
    Ok(BranchDecomposition::from_edges(ids.len(), &edges, leaf_of))
}

pub fn branch_decomposition_to_json(bd: &BranchDecomposition, names: &[String]) -> String {
    let raw = RawBd {
        leaves: bd.leaf_of.iter().enumerate().map(|(v, &t)| (names[v].clone(), Value::from(t))).collect(),
        edges: bd.edges().into_iter().map(|(a, b)| [Value::from(a), Value::from(b)]).collect(),
    };
    serde_json::to_string_pretty(&raw).expect("json values always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_roundtrip() {
        let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        let text = tree_decomposition_to_json(&td, &names, Some(1));
        let (back, root) = tree_decomposition_from_json(&text, &names).unwrap();
        assert_eq!(back, td);
        assert_eq!(root, Some(1));
    }

    #[test]
    fn branch_roundtrip() {
        let names: Vec<String> = ["j:x", "m:x", "j:y"].iter().map(|s| s.to_string()).collect();
        let bd = BranchDecomposition::caterpillar(&[0, 1, 2]);
        let text = branch_decomposition_to_json(&bd, &names);
        let back = branch_decomposition_from_json(&text, &names).unwrap();
        assert_eq!(back.vertex_count(), 3);
        assert_eq!(back.edges().len(), bd.edges().len());
    }

    #[test]
    fn unknown_vertex() {
        let names = vec!["a".to_string()];
        let err = tree_decomposition_from_json(r#"{"nodes":[{"id":0,"bag":["z"]}],"edges":[]}"#, &names);
        assert!(matches!(err, Err(Error::UnknownId { .. })));
    }
}
