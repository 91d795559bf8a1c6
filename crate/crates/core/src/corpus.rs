//! Named graph/symmetry instances: the classical folds plus a handful of
//! affine and hyperbolic cases.

use std::collections::BTreeMap;

use crate::graph::CoxeterGraph;
use crate::linalg::Matrix;
use crate::rootbasis::RootBasis;
use crate::symmetry::{generate_group, validate_symmetry, Symmetry, SymmetryGroup, DEFAULT_GROUP_CAP};

#[derive(Clone, Debug)]
pub struct Instance {
    pub name: &'static str,
    pub graph: CoxeterGraph,
    pub generators: Vec<Symmetry>,
    /// `None` means the canonical root basis.
    pub root_basis: Option<RootBasis<f64>>,
}

impl Instance {
    pub fn group(&self) -> SymmetryGroup {
        generate_group(&self.graph, &self.generators, DEFAULT_GROUP_CAP).expect("corpus groups are small")
    }

    pub fn root_basis(&self) -> RootBasis<f64> {
        self.root_basis.clone().unwrap_or_else(|| crate::rootbasis::canonical_root_basis(&self.graph))
    }
}

/// Builds a graph; `0` labels mean infinity.
fn graph(vertices: &[&str], edges: &[(&str, &str, u32)]) -> CoxeterGraph {
    CoxeterGraph::from_edges(vertices, edges).expect("corpus graphs are well formed")
}

/// Builds a symmetry from cycles written as vertex lists.
fn cycles(g: &CoxeterGraph, cs: &[&[&str]]) -> Symmetry {
    let mut map = BTreeMap::new();
    for c in cs {
        for (i, &v) in c.iter().enumerate() {
            map.insert(v.to_string(), c[(i + 1) % c.len()].to_string());
        }
    }
    validate_symmetry(g, &map).expect("corpus symmetries are valid")
}

fn instance(name: &'static str, graph: CoxeterGraph, gens: &[&[&[&str]]]) -> Instance {
    let generators = gens.iter().map(|cs| cycles(&graph, cs)).collect();
    Instance { name, graph, generators, root_basis: None }
}

/// Path `a1 - a2 - ... - an` with the given labels.
pub fn path(n: usize, labels: &[u32]) -> CoxeterGraph {
    let names: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let edges: Vec<(&str, &str, u32)> = labels.iter().enumerate().map(|(i, &m)| (refs[i], refs[i + 1], m)).collect();
    graph(&refs, &edges)
}

pub fn a2_flip() -> Instance {
    instance("A2/flip", path(2, &[3]), &[&[&["a1", "a2"]]])
}

pub fn a3_flip() -> Instance {
    instance("A3/flip", path(3, &[3, 3]), &[&[&["a1", "a3"]]])
}

pub fn a4_flip() -> Instance {
    instance("A4/flip", path(4, &[3, 3, 3]), &[&[&["a1", "a4"], &["a2", "a3"]]])
}

pub fn a5_flip() -> Instance {
    instance("A5/flip", path(5, &[3, 3, 3, 3]), &[&[&["a1", "a5"], &["a2", "a4"]]])
}

pub fn d4() -> CoxeterGraph {
    graph(&["c", "x1", "x2", "x3"], &[("c", "x1", 3), ("c", "x2", 3), ("c", "x3", 3)])
}

pub fn d4_triality() -> Instance {
    instance("D4/triality", d4(), &[&[&["x1", "x2", "x3"]]])
}

pub fn d4_full() -> Instance {
    instance("D4/S3", d4(), &[&[&["x1", "x2", "x3"]], &[&["x1", "x2"]]])
}

pub fn d4_swap() -> Instance {
    instance("D4/swap", d4(), &[&[&["x1", "x2"]]])
}

pub fn d5_swap() -> Instance {
    let g = graph(
        &["a1", "a2", "a3", "b1", "b2"],
        &[("a1", "a2", 3), ("a2", "a3", 3), ("a3", "b1", 3), ("a3", "b2", 3)],
    );
    instance("D5/swap", g, &[&[&["b1", "b2"]]])
}

pub fn e6() -> CoxeterGraph {
    graph(
        &["e1", "e2", "e3", "e4", "e5", "e6"],
        &[("e1", "e3", 3), ("e3", "e4", 3), ("e4", "e5", 3), ("e5", "e6", 3), ("e2", "e4", 3)],
    )
}

pub fn e6_flip() -> Instance {
    instance("E6/flip", e6(), &[&[&["e1", "e6"], &["e3", "e5"]]])
}

pub fn f4() -> CoxeterGraph {
    path(4, &[3, 4, 3])
}

pub fn f4_flip() -> Instance {
    instance("F4/flip", f4(), &[&[&["a1", "a4"], &["a2", "a3"]]])
}

pub fn f4_trivial() -> Instance {
    instance("F4/trivial", f4(), &[])
}

pub fn a3_trivial() -> Instance {
    instance("A3/trivial", path(3, &[3, 3]), &[])
}

pub fn a1a1_swap() -> Instance {
    instance("A1xA1/swap", graph(&["a", "b"], &[]), &[&[&["a", "b"]]])
}

pub fn a2a2_swap() -> Instance {
    let g = graph(&["a", "b", "c", "d"], &[("a", "b", 3), ("c", "d", 3)]);
    instance("A2xA2/swap", g, &[&[&["a", "c"], &["b", "d"]]])
}

pub fn i2_5_flip() -> Instance {
    instance("I2(5)/flip", path(2, &[5]), &[&[&["a1", "a2"]]])
}

pub fn i2_5_pair_swap() -> Instance {
    let g = graph(&["a", "b", "c", "d"], &[("a", "b", 5), ("c", "d", 5)]);
    instance("I2(5)xI2(5)/swap", g, &[&[&["a", "c"], &["b", "d"]]])
}

pub fn b3_pair_swap() -> Instance {
    // Two copies of B3 exchanged; folds to B3.
    let g = graph(
        &["a1", "a2", "a3", "b1", "b2", "b3"],
        &[("a1", "a2", 4), ("a2", "a3", 3), ("b1", "b2", 4), ("b2", "b3", 3)],
    );
    instance("B3xB3/swap", g, &[&[&["a1", "b1"], &["a2", "b2"], &["a3", "b3"]]])
}

pub fn triangle() -> CoxeterGraph {
    graph(&["a1", "a2", "a3"], &[("a1", "a2", 3), ("a2", "a3", 3), ("a1", "a3", 3)])
}

/// Affine `Ã2` with a reflection: the folded pair has inner product `-1`.
pub fn affine_a2_reflection() -> Instance {
    instance("~A2/reflection", triangle(), &[&[&["a1", "a2"]]])
}

/// Affine `Ã2` with the rotation: the single orbit is infinite.
pub fn affine_a2_rotation() -> Instance {
    instance("~A2/rotation", triangle(), &[&[&["a1", "a2", "a3"]]])
}

pub fn square() -> CoxeterGraph {
    graph(&["a", "b", "c", "d"], &[("a", "b", 3), ("b", "c", 3), ("c", "d", 3), ("a", "d", 3)])
}

/// Affine `Ã3` with the reflection through two opposite vertices; folds to
/// affine `C̃2` (labels 4, 4).
pub fn affine_a3_reflection() -> Instance {
    instance("~A3/reflection", square(), &[&[&["b", "d"]]])
}

/// Affine `Ã3` with the half turn; both orbits are joined in one 4-cycle.
pub fn affine_a3_half_turn() -> Instance {
    instance("~A3/half-turn", square(), &[&[&["a", "c"], &["b", "d"]]])
}

pub fn infinite_dihedral_flip() -> Instance {
    instance("inf-dihedral/flip", graph(&["a", "b"], &[("a", "b", 0)]), &[&[&["a", "b"]]])
}

/// Path `a - b - c` with both labels infinite and the end swap.
pub fn hyperbolic_path_flip() -> Instance {
    instance("inf-path/flip", graph(&["a", "b", "c"], &[("a", "b", 0), ("b", "c", 0)]), &[&[&["a", "c"]]])
}

/// Four mutually infinite vertices with dependent roots in a Lorentzian
/// 3-space: `ε_k = (√2 cos(kπ/2), √2 sin(kπ/2), 1)`, form `diag(1, 1, -1)`.
pub fn dependent_k4_basis(g: &CoxeterGraph) -> RootBasis<f64> {
    let r = 2f64.sqrt();
    let roots = vec![vec![r, 0.0, 1.0], vec![0.0, r, 1.0], vec![-r, 0.0, 1.0], vec![0.0, -r, 1.0]];
    let form = Matrix::from_rows(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, -1.0]]);
    RootBasis::new(g.clone(), form, roots).expect("well-formed basis")
}

fn k4_infinite() -> CoxeterGraph {
    let v = ["k0", "k1", "k2", "k3"];
    let mut edges = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            edges.push((v[i], v[j], 0));
        }
    }
    graph(&v, &edges)
}

/// Dependent roots, trivial group: the folded basis is the input basis
/// and needs the linear-programming witness.
pub fn dependent_k4_trivial() -> Instance {
    let g = k4_infinite();
    let rb = dependent_k4_basis(&g);
    Instance { name: "K4(inf)/dependent/trivial", graph: g, generators: vec![], root_basis: Some(rb) }
}

/// Dependent roots with the reflection `k1 <-> k3`.
pub fn dependent_k4_swap() -> Instance {
    let g = k4_infinite();
    let rb = dependent_k4_basis(&g);
    let s = cycles(&g, &[&["k1", "k3"]]);
    Instance { name: "K4(inf)/dependent/swap", graph: g, generators: vec![s], root_basis: Some(rb) }
}

/// Path `a - b - c`, both infinite, with pairings `-1.5` and the end swap.
pub fn non_canonical_path_flip() -> Instance {
    let g = graph(&["a", "b", "c"], &[("a", "b", 0), ("b", "c", 0)]);
    let form = Matrix::from_rows(&[vec![1.0, -1.5, 0.0], vec![-1.5, 1.0, -1.5], vec![0.0, -1.5, 1.0]]);
    let rb = RootBasis::new(g.clone(), form, (0..3).map(|i| (0..3).map(|j| f64::from(i == j)).collect()).collect())
        .expect("well-formed basis");
    let s = cycles(&g, &[&["a", "c"]]);
    Instance { name: "inf-path/-1.5/flip", graph: g, generators: vec![s], root_basis: Some(rb) }
}

/// Every instance, canonical and not.
pub fn all() -> Vec<Instance> {
    vec![
        a2_flip(),
        a3_flip(),
        a4_flip(),
        a5_flip(),
        d4_triality(),
        d4_full(),
        d4_swap(),
        d5_swap(),
        e6_flip(),
        f4_flip(),
        f4_trivial(),
        a3_trivial(),
        a1a1_swap(),
        a2a2_swap(),
        i2_5_flip(),
        i2_5_pair_swap(),
        b3_pair_swap(),
        affine_a2_reflection(),
        affine_a2_rotation(),
        affine_a3_reflection(),
        affine_a3_half_turn(),
        infinite_dihedral_flip(),
        hyperbolic_path_flip(),
        dependent_k4_trivial(),
        dependent_k4_swap(),
        non_canonical_path_flip(),
    ]
}

/// Instances using the canonical root basis.
pub fn canonical() -> Vec<Instance> {
    all().into_iter().filter(|i| i.root_basis.is_none()).collect()
}
