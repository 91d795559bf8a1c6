//! Symmetries of a Coxeter graph, the groups they generate, and orbits.

use std::collections::{BTreeMap, HashSet, VecDeque};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::graph::CoxeterGraph;

/// Default bound on the size of a generated symmetry group.
pub const DEFAULT_GROUP_CAP: usize = 1_000_000;
/// Default bound on the vertex count for the full automorphism search.
pub const DEFAULT_AUTOMORPHISM_CAP: usize = 16;

/// A Coxeter-matrix preserving permutation, stored as an index map.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symmetry {
    image: Vec<usize>,
}

impl Symmetry {
    pub fn identity(n: usize) -> Self {
        Self { image: (0..n).collect() }
    }

    /// Image of vertex index `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self { image: other.image.iter().map(|&j| self.image[j]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.image.len()];
        for (i, &j) in self.image.iter().enumerate() {
            inv[j] = i;
        }
        Self { image: inv }
    }

    /// Non-fixed points as vertex-name pairs.
    pub fn to_named_map(&self, g: &CoxeterGraph) -> BTreeMap<String, String> {
        self.image
            .iter()
            .enumerate()
            .filter(|(i, j)| i != *j)
            .map(|(i, &j)| (g.name(i).to_string(), g.name(j).to_string()))
            .collect()
    }
}

/// Checks that an index permutation is a symmetry of `g`.
pub fn validate_permutation(g: &CoxeterGraph, image: Vec<usize>) -> Result<Symmetry> {
    let n = g.len();
    if image.len() != n {
        return Err(Error::NotABijection(format!("expected {n} images, got {}", image.len())));
    }
    let mut hit = vec![false; n];
    for &j in &image {
        if j >= n || std::mem::replace(&mut hit[j], true) {
            let name = if j < n { g.name(j).to_string() } else { j.to_string() };
            return Err(Error::NotABijection(format!("`{name}` is hit twice or is out of range")));
        }
    }
    for s in 0..n {
        for t in s + 1..n {
            if g.label(image[s], image[t]) != g.label(s, t) {
                return Err(Error::LabelNotPreserved {
                    s: g.name(s).to_string(),
                    t: g.name(t).to_string(),
                });
            }
        }
    }
    Ok(Symmetry { image })
}

/// Validates a permutation given as a vertex-to-vertex map. Unlisted
/// vertices are fixed.
pub fn validate_symmetry(g: &CoxeterGraph, map: &BTreeMap<String, String>) -> Result<Symmetry> {
    let mut image: Vec<usize> = (0..g.len()).collect();
    for (from, to) in map {
        image[g.index_of(from)?] = g.index_of(to)?;
    }
    validate_permutation(g, image)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorDoc {
    map: BTreeMap<String, String>,
}

/// Parses the symmetry JSON schema: `[{"map": {vertex: vertex, ...}}, ...]`.
pub fn parse_symmetries(g: &CoxeterGraph, text: &str) -> Result<Vec<Symmetry>> {
    let docs: Vec<GeneratorDoc> =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("symmetry JSON: {e}")))?;
    docs.iter().map(|d| validate_symmetry(g, &d.map)).collect()
}

/// A finite group of symmetries, fully materialized, identity first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryGroup {
    graph: CoxeterGraph,
    elements: Vec<Symmetry>,
}

impl SymmetryGroup {
    pub fn trivial(g: &CoxeterGraph) -> Self {
        Self { graph: g.clone(), elements: vec![Symmetry::identity(g.len())] }
    }

    pub fn graph(&self) -> &CoxeterGraph {
        &self.graph
    }

    pub fn elements(&self) -> &[Symmetry] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }
}

/// Closure of `generators` under composition, in breadth-first order from
/// the identity with generators tried in the given order.
pub fn generate_group(g: &CoxeterGraph, generators: &[Symmetry], cap: usize) -> Result<SymmetryGroup> {
    let id = Symmetry::identity(g.len());
    let mut seen: HashSet<Symmetry> = HashSet::from([id.clone()]);
    let mut elements = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for h in generators {
            let y = h.compose(&x);
            if seen.insert(y.clone()) {
                if elements.len() >= cap {
                    return Err(Error::GroupTooLarge { cap });
                }
                elements.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(SymmetryGroup { graph: g.clone(), elements })
}

/// Orbits of the group on the vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPartition {
    /// Vertex indices; each orbit sorted, orbits ordered by least member.
    pub orbits: Vec<Vec<usize>>,
}

impl OrbitPartition {
    pub fn names(&self, g: &CoxeterGraph) -> Vec<Vec<String>> {
        self.orbits.iter().map(|o| o.iter().map(|&i| g.name(i).to_string()).collect()).collect()
    }

    /// Index of the orbit containing vertex `v`.
    pub fn orbit_of(&self, v: usize) -> usize {
        self.orbits.iter().position(|o| o.contains(&v)).expect("orbits partition the vertices")
    }
}

pub fn orbits(group: &SymmetryGroup) -> OrbitPartition {
    let n = group.graph.len();
    let mut assigned = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if assigned[s] {
            continue;
        }
        let mut orbit: Vec<usize> = group.elements.iter().map(|e| e.apply(s)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &t in &orbit {
            assigned[t] = true;
        }
        out.push(orbit);
    }
    OrbitPartition { orbits: out }
}

/// All Coxeter-matrix preserving permutations, found by backtracking.
/// Elements are listed in lexicographic order of their index images, so
/// the identity comes first.
pub fn automorphism_group(g: &CoxeterGraph, cap: usize) -> Result<SymmetryGroup> {
    let n = g.len();
    if n > cap {
        return Err(Error::TooManyVertices { vertices: n, cap });
    }
    let signature = |v: usize| {
        let mut s: Vec<_> = g.neighbours(v).map(|u| g.label(v, u)).collect();
        s.sort_unstable();
        s
    };
    let sigs: Vec<_> = (0..n).map(signature).collect();
    let mut out = Vec::new();
    let mut image = vec![0usize; n];
    let mut used = vec![false; n];
    search(g, &sigs, 0, &mut image, &mut used, &mut out);
    Ok(SymmetryGroup { graph: g.clone(), elements: out })
}

fn search<S: PartialEq>(
    g: &CoxeterGraph,
    sigs: &[S],
    v: usize,
    image: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Symmetry>,
) {
    let n = g.len();
    if v == n {
        out.push(Symmetry { image: image.clone() });
        return;
    }
    for w in 0..n {
        if used[w] || sigs[v] != sigs[w] {
            continue;
        }
        if (0..v).any(|u| g.label(v, u) != g.label(w, image[u])) {
            continue;
        }
        image[v] = w;
        used[w] = true;
        search(g, sigs, v + 1, image, used, out);
        used[w] = false;
    }
}
