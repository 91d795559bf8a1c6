//! Catalog of connected Coxeter graphs with finite Coxeter group, and a
//! label-preserving isomorphism matcher against it.

use std::fmt;

use super::{CoxeterGraph, CoxeterLabel};

/// Irreducible finite Coxeter types.
///
/// Rank two is written `A2` (m = 3), `B2` (m = 4) and `I2(m)` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FiniteType {
    A(usize),
    B(usize),
    D(usize),
    E(usize),
    F4,
    H(usize),
    I2(u32),
}

impl FiniteType {
    /// Order of the Coxeter group of this type.
    pub fn group_order(self) -> u128 {
        fn fact(n: usize) -> u128 {
            (1..=n as u128).product()
        }
        match self {
            FiniteType::A(n) => fact(n + 1),
            FiniteType::B(n) => (1u128 << n) * fact(n),
            FiniteType::D(n) => (1u128 << (n - 1)) * fact(n),
            FiniteType::E(6) => 51_840,
            FiniteType::E(7) => 2_903_040,
            FiniteType::E(_) => 696_729_600,
            FiniteType::F4 => 1152,
            FiniteType::H(3) => 120,
            FiniteType::H(_) => 14_400,
            FiniteType::I2(m) => 2 * u128::from(m),
        }
    }

    pub fn rank(self) -> usize {
        match self {
            FiniteType::A(n) | FiniteType::B(n) | FiniteType::D(n) | FiniteType::E(n) | FiniteType::H(n) => n,
            FiniteType::F4 => 4,
            FiniteType::I2(_) => 2,
        }
    }
}

impl fmt::Display for FiniteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteType::A(n) => write!(f, "A{n}"),
            FiniteType::B(n) => write!(f, "B{n}"),
            FiniteType::D(n) => write!(f, "D{n}"),
            FiniteType::E(n) => write!(f, "E{n}"),
            FiniteType::F4 => f.write_str("F4"),
            FiniteType::H(n) => write!(f, "H{n}"),
            FiniteType::I2(m) => write!(f, "I2({m})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentType {
    Finite(FiniteType),
    NotFinite,
}

impl fmt::Display for ComponentType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentType::Finite(t) => t.fmt(f),
            ComponentType::NotFinite => f.write_str("not finite"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTypeReport {
    pub is_finite: bool,
    pub components: Vec<(Vec<String>, ComponentType)>,
}

impl FiniteTypeReport {
    /// Order of the Coxeter group, when finite.
    pub fn group_order(&self) -> Option<u128> {
        self.is_finite.then(|| {
            self.components
                .iter()
                .map(|(_, t)| match t {
                    ComponentType::Finite(ft) => ft.group_order(),
                    ComponentType::NotFinite => unreachable!(),
                })
                .product()
        })
    }
}

/// Decomposes `g` into components and matches each one against the catalog.
pub fn classify_finite_type(g: &CoxeterGraph) -> FiniteTypeReport {
    let components: Vec<(Vec<String>, ComponentType)> = g
        .connected_components()
        .into_iter()
        .map(|comp| {
            let names = comp.iter().map(|&i| g.name(i).to_string()).collect();
            (names, classify_component(g, &comp))
        })
        .collect();
    FiniteTypeReport {
        is_finite: components.iter().all(|(_, t)| *t != ComponentType::NotFinite),
        components,
    }
}

/// Label matrix of a connected component: `2` off the edges, `1` on the diagonal.
type Labels = Vec<Vec<u32>>;

fn classify_component(g: &CoxeterGraph, comp: &[usize]) -> ComponentType {
    let n = comp.len();
    let mut labels = vec![vec![2u32; n]; n];
    for (a, &i) in comp.iter().enumerate() {
        labels[a][a] = 1;
        for (b, &j) in comp.iter().enumerate() {
            if a != b {
                match g.label(i, j) {
                    CoxeterLabel::Finite(m) => labels[a][b] = m,
                    CoxeterLabel::Infinity => return ComponentType::NotFinite,
                }
            }
        }
    }
    match n {
        1 => return ComponentType::Finite(FiniteType::A(1)),
        2 => {
            return ComponentType::Finite(match labels[0][1] {
                3 => FiniteType::A(2),
                4 => FiniteType::B(2),
                m => FiniteType::I2(m),
            })
        }
        _ => {}
    }
    // A finite connected Coxeter graph of rank >= 3 is a tree.
    let edge_count: usize = (0..n).map(|a| (a + 1..n).filter(|&b| labels[a][b] != 2).count()).sum();
    if edge_count != n - 1 {
        return ComponentType::NotFinite;
    }
    candidates(n)
        .into_iter()
        .find(|(_, cat)| isomorphic(&labels, cat))
        .map_or(ComponentType::NotFinite, |(t, _)| ComponentType::Finite(t))
}

fn path(n: usize, edge_labels: &[u32]) -> Labels {
    let mut m = vec![vec![2u32; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    for (i, &l) in edge_labels.iter().enumerate() {
        m[i][i + 1] = l;
        m[i + 1][i] = l;
    }
    m
}

/// A path on `n - 1` simple edges' worth of vertices with one extra vertex
/// hanging off vertex `branch`.
fn branched(n: usize, branch: usize) -> Labels {
    let mut m = path(n, &vec![3; n - 2]);
    let extra = n - 1;
    m[branch][extra] = 3;
    m[extra][branch] = 3;
    m
}

fn candidates(n: usize) -> Vec<(FiniteType, Labels)> {
    let mut out = vec![(FiniteType::A(n), path(n, &vec![3; n - 1]))];
    let mut b = vec![3; n - 1];
    b[0] = 4;
    out.push((FiniteType::B(n), path(n, &b)));
    if n >= 4 {
        out.push((FiniteType::D(n), branched(n, n - 3)));
    }
    if (6..=8).contains(&n) {
        out.push((FiniteType::E(n), branched(n, 2)));
    }
    if n == 4 {
        out.push((FiniteType::F4, path(4, &[3, 4, 3])));
    }
    if n == 3 {
        out.push((FiniteType::H(3), path(3, &[5, 3])));
    }
    if n == 4 {
        out.push((FiniteType::H(4), path(4, &[5, 3, 3])));
    }
    out
}

/// Sorted off-diagonal non-2 labels at each vertex: an isomorphism invariant.
fn signature(m: &Labels, v: usize) -> Vec<u32> {
    let mut s: Vec<u32> = (0..m.len()).filter(|&u| u != v && m[v][u] != 2).map(|u| m[v][u]).collect();
    s.sort_unstable();
    s
}

/// Label-preserving isomorphism test: signature pruning, then backtracking.
pub(crate) fn isomorphic(a: &Labels, b: &Labels) -> bool {
    let n = a.len();
    if b.len() != n {
        return false;
    }
    let sig_a: Vec<Vec<u32>> = (0..n).map(|v| signature(a, v)).collect();
    let sig_b: Vec<Vec<u32>> = (0..n).map(|v| signature(b, v)).collect();
    let mut sa = sig_a.clone();
    let mut sb = sig_b.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return false;
    }
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend(a, b, &sig_a, &sig_b, 0, &mut image, &mut used)
}

fn extend(
    a: &Labels,
    b: &Labels,
    sig_a: &[Vec<u32>],
    sig_b: &[Vec<u32>],
    v: usize,
    image: &mut [usize],
    used: &mut [bool],
) -> bool {
    let n = a.len();
    if v == n {
        return true;
    }
    for w in 0..n {
        if used[w] || sig_a[v] != sig_b[w] {
            continue;
        }
        if (0..v).any(|u| a[v][u] != b[w][image[u]]) {
            continue;
        }
        image[v] = w;
        used[w] = true;
        if extend(a, b, sig_a, sig_b, v + 1, image, used) {
            return true;
        }
        used[w] = false;
    }
    image[v] = usize::MAX;
    false
}
