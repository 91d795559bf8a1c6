//! Coxeter graphs: data model, JSON schema, full subgraphs and components.

mod catalog;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use catalog::{classify_finite_type, ComponentType, FiniteType, FiniteTypeReport};

/// Off-diagonal entry `m_{s,t}` of a Coxeter matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoxeterLabel {
    Finite(u32),
    Infinity,
}

impl CoxeterLabel {
    /// Rejects `m < 2`.
    pub fn finite(m: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::Parse(format!("Coxeter label {m} < 2")));
        }
        Ok(Self::Finite(m))
    }

    /// Pairs with `m >= 3` or `m = inf` are the edges of the graph.
    pub fn is_edge(self) -> bool {
        !matches!(self, Self::Finite(2))
    }

    pub fn as_finite(self) -> Option<u32> {
        match self {
            Self::Finite(m) => Some(m),
            Self::Infinity => None,
        }
    }
}

impl fmt::Display for CoxeterLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(m) => write!(f, "{m}"),
            Self::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for CoxeterLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Finite(m) => s.serialize_u32(*m),
            Self::Infinity => s.serialize_str("inf"),
        }
    }
}

/// JSON form of a label: an integer, or the string `"inf"`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum LabelDoc {
    Int(i64),
    Str(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    u: String,
    v: String,
    m: LabelDoc,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    vertices: Vec<String>,
    #[serde(default)]
    edges: Vec<EdgeDoc>,
}

/// A Coxeter graph on a lexicographically ordered vertex set.
///
/// Only pairs with `m != 2` are stored; vertex indices follow the sorted
/// order of the identifiers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoxeterGraph {
    vertices: Vec<String>,
    labels: BTreeMap<(usize, usize), CoxeterLabel>,
}

impl CoxeterGraph {
    /// Builds a graph from vertex names and labelled pairs. Pairs labelled 2
    /// are accepted and dropped.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (String, String, CoxeterLabel)>,
    {
        let mut names: Vec<String> = vertices.into_iter().map(Into::into).collect();
        names.sort();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Parse(format!("duplicate vertex `{}`", w[0])));
        }
        let mut g = Self { vertices: names, labels: BTreeMap::new() };
        for (u, v, m) in edges {
            if let CoxeterLabel::Finite(k) = m {
                if k < 2 {
                    return Err(Error::Parse(format!("label {k} < 2 on pair ({u}, {v})")));
                }
            }
            let i = g.index_of(&u)?;
            let j = g.index_of(&v)?;
            if i == j {
                return Err(Error::Parse(format!("self-loop label on `{u}`")));
            }
            let key = (i.min(j), i.max(j));
            match g.labels.get(&key) {
                Some(&old) if old != m => {
                    return Err(Error::Parse(format!("conflicting labels on pair ({u}, {v})")));
                }
                _ => {}
            }
            if m.is_edge() {
                g.labels.insert(key, m);
            }
        }
        Ok(g)
    }

    /// Convenience constructor from string slices and finite labels, mostly
    /// for tests and built-in examples. `0` stands for infinity.
    pub fn from_edges(vertices: &[&str], edges: &[(&str, &str, u32)]) -> Result<Self> {
        Self::new(
            vertices.iter().copied(),
            edges.iter().map(|&(u, v, m)| {
                let label = if m == 0 { CoxeterLabel::Infinity } else { CoxeterLabel::Finite(m) };
                (u.to_string(), v.to_string(), label)
            }),
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GraphDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("graph JSON: {e}")))?;
        let mut edges = Vec::with_capacity(doc.edges.len());
        for e in doc.edges {
            let m = match e.m {
                LabelDoc::Int(k) if k >= 2 => {
                    let k = u32::try_from(k)
                        .map_err(|_| Error::Parse(format!("label {k} out of range")))?;
                    CoxeterLabel::Finite(k)
                }
                LabelDoc::Int(k) => {
                    return Err(Error::Parse(format!("label {k} < 2 on pair ({}, {})", e.u, e.v)))
                }
                LabelDoc::Str(s) if s == "inf" => CoxeterLabel::Infinity,
                LabelDoc::Str(s) => return Err(Error::Parse(format!("bad label `{s}`"))),
            };
            edges.push((e.u, e.v, m));
        }
        Self::new(doc.vertices, edges)
    }

    /// Canonical JSON: sorted vertices, edges with `m != 2` in index order.
    pub fn to_json(&self) -> String {
        let doc = GraphDoc {
            vertices: self.vertices.clone(),
            edges: self
                .labels
                .iter()
                .map(|(&(i, j), &m)| EdgeDoc {
                    u: self.vertices[i].clone(),
                    v: self.vertices[j].clone(),
                    m: match m {
                        CoxeterLabel::Finite(k) => LabelDoc::Int(i64::from(k)),
                        CoxeterLabel::Infinity => LabelDoc::Str("inf".into()),
                    },
                })
                .collect(),
        };
        serde_json::to_string(&doc).expect("graph serializes")
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.vertices
            .binary_search_by(|v| v.as_str().cmp(name))
            .map_err(|_| Error::UnknownVertex(name.to_string()))
    }

    pub fn name(&self, i: usize) -> &str {
        &self.vertices[i]
    }

    /// `m_{i,j}` by index; `m_{i,i}` is reported as `Finite(1)`.
    pub fn label(&self, i: usize, j: usize) -> CoxeterLabel {
        if i == j {
            return CoxeterLabel::Finite(1);
        }
        self.labels.get(&(i.min(j), i.max(j))).copied().unwrap_or(CoxeterLabel::Finite(2))
    }

    /// Iterates over edges `(i, j, m)` with `i < j` and `m != 2`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, CoxeterLabel)> + '_ {
        self.labels.iter().map(|(&(i, j), &m)| (i, j, m))
    }

    /// Neighbours of `i` along edges (`m >= 3` or infinite).
    pub fn neighbours(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&j| j != i && self.label(i, j).is_edge())
    }

    /// Full Coxeter matrix with `1` on the diagonal; `None` encodes infinity.
    pub fn coxeter_matrix(&self) -> Vec<Vec<Option<u32>>> {
        (0..self.len()).map(|i| (0..self.len()).map(|j| self.label(i, j).as_finite()).collect()).collect()
    }

    /// The full subgraph spanned by the named vertices.
    pub fn full_subgraph<S: AsRef<str>>(&self, subset: &[S]) -> Result<Self> {
        let idx = subset.iter().map(|s| self.index_of(s.as_ref())).collect::<Result<Vec<_>>>()?;
        Ok(self.full_subgraph_by_index(&idx))
    }

    /// Same as [`Self::full_subgraph`] on already-resolved indices.
    pub fn full_subgraph_by_index(&self, subset: &[usize]) -> Self {
        let mut idx = subset.to_vec();
        idx.sort_unstable();
        idx.dedup();
        let vertices: Vec<String> = idx.iter().map(|&i| self.vertices[i].clone()).collect();
        let mut labels = BTreeMap::new();
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate().skip(a + 1) {
                let m = self.label(i, j);
                if m.is_edge() {
                    labels.insert((a, b), m);
                }
            }
        }
        Self { vertices, labels }
    }

    /// Connected components along edges, each sorted, ordered by least vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                for j in self.neighbours(i) {
                    if !seen[j] {
                        seen[j] = true;
                        comp.push(j);
                        stack.push(j);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Components as vertex names.
    pub fn component_names(&self) -> Vec<Vec<String>> {
        self.connected_components()
            .into_iter()
            .map(|c| c.into_iter().map(|i| self.vertices[i].clone()).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a3() -> CoxeterGraph {
        CoxeterGraph::from_edges(&["a", "b", "c"], &[("a", "b", 3), ("b", "c", 3)]).unwrap()
    }

    #[test]
    fn parses_schema_examples() {
        let g = CoxeterGraph::from_json(r#"{"vertices":["a","b"],"edges":[{"u":"a","v":"b","m":3}]}"#)
            .unwrap();
        assert_eq!(g.label(0, 1), CoxeterLabel::Finite(3));
        let inf = CoxeterGraph::from_json(r#"{"vertices":["a","b"],"edges":[{"u":"a","v":"b","m":"inf"}]}"#)
            .unwrap();
        assert_eq!(inf.label(1, 0), CoxeterLabel::Infinity);
        let bad = CoxeterGraph::from_json(r#"{"vertices":["a","b"],"edges":[{"u":"a","v":"b","m":1}]}"#);
        assert!(matches!(bad, Err(Error::Parse(msg)) if msg.contains("< 2")));
    }

    #[test]
    fn parse_errors() {
        let dup = CoxeterGraph::from_json(r#"{"vertices":["a","a"],"edges":[]}"#);
        assert!(matches!(dup, Err(Error::Parse(msg)) if msg.contains("duplicate")));
        let unknown = CoxeterGraph::from_json(r#"{"vertices":["a"],"edges":[{"u":"a","v":"z","m":3}]}"#);
        assert!(matches!(unknown, Err(Error::UnknownVertex(v)) if v == "z"));
        let lp = CoxeterGraph::from_json(r#"{"vertices":["a"],"edges":[{"u":"a","v":"a","m":3}]}"#);
        assert!(matches!(lp, Err(Error::Parse(msg)) if msg.contains("self-loop")));
        assert!(CoxeterGraph::from_json("{not json").is_err());
        let word = CoxeterGraph::from_json(r#"{"vertices":["a","b"],"edges":[{"u":"a","v":"b","m":"infinity"}]}"#);
        assert!(word.is_err());
    }

    #[test]
    fn vertices_are_sorted_and_explicit_twos_accepted() {
        let g = CoxeterGraph::from_json(
            r#"{"vertices":["c","a","b"],"edges":[{"u":"c","v":"a","m":2},{"u":"b","v":"c","m":4}]}"#,
        )
        .unwrap();
        assert_eq!(g.vertices(), ["a", "b", "c"]);
        assert_eq!(g.edges().count(), 1);
        assert_eq!(g.label(1, 2), CoxeterLabel::Finite(4));
        assert_eq!(g.to_json(), r#"{"vertices":["a","b","c"],"edges":[{"u":"b","v":"c","m":4}]}"#);
    }

    #[test]
    fn full_subgraphs() {
        let g = a3();
        let ac = g.full_subgraph(&["a", "c"]).unwrap();
        assert_eq!(ac.label(0, 1), CoxeterLabel::Finite(2));
        let ab = g.full_subgraph(&["a", "b"]).unwrap();
        assert_eq!(ab.label(0, 1), CoxeterLabel::Finite(3));
        let f4 = CoxeterGraph::from_edges(
            &["a1", "a2", "a3", "a4"],
            &[("a1", "a2", 3), ("a2", "a3", 4), ("a3", "a4", 3)],
        )
        .unwrap();
        let mid = f4.full_subgraph(&["a2", "a3"]).unwrap();
        assert_eq!(mid.label(0, 1), CoxeterLabel::Finite(4));
        assert!(matches!(g.full_subgraph(&["q"]), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn components() {
        assert_eq!(a3().connected_components(), vec![vec![0, 1, 2]]);
        let two = CoxeterGraph::from_edges(&["x", "y"], &[]).unwrap();
        assert_eq!(two.connected_components().len(), 2);
        let a2a2 =
            CoxeterGraph::from_edges(&["a", "b", "c", "d"], &[("a", "c", 3), ("b", "d", 3)]).unwrap();
        assert_eq!(a2a2.connected_components(), vec![vec![0, 2], vec![1, 3]]);
    }
}
