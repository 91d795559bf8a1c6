//! Folding a Coxeter graph along a group of symmetries.
//!
//! Each orbit `X` whose parabolic subgroup `W_X` is finite becomes a vertex
//! of the folded graph, with simple root `ε̃_X = a_X / ‖a_X‖` where
//! `a_X = Σ_{s∈X} ε_s`, and generator the longest element `w_X` of `W_X`.
//! Labels `m̃_{X,Y}` are computed twice: from the inner products of the
//! folded roots, and from the shape of `Γ_{X∪Y}`. On the canonical basis the
//! two must agree.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{classify_finite_type, CoxeterGraph, CoxeterLabel};
use crate::linalg::dot;
use crate::rootbasis::{
    check_equivariance, fixed_subspace, validate_root_basis, FixedSubspace, GroupAction, RootBasis,
};
use crate::scalar::{Scalar, Tolerances};
use crate::symmetry::{orbits, SymmetryGroup};

/// Default largest finite `m̃` the numeric classifier tries.
pub const DEFAULT_K_MAX: u32 = 360;

/// Shape of the full subgraph on an orbit with finite parabolic subgroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrbitType {
    /// No edges.
    I,
    /// Disjoint single edges, all labelled `m` (`3 <= m < ∞`).
    II(u32),
}

impl fmt::Display for OrbitType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitType::I => f.write_str("I"),
            OrbitType::II(m) => write!(f, "II_{m}"),
        }
    }
}

/// Name of an orbit as a folded vertex: `O_` followed by its least member.
pub fn orbit_name(g: &CoxeterGraph, orbit: &[usize]) -> String {
    let least = orbit.iter().map(|&i| g.name(i)).min().unwrap_or("");
    format!("O_{least}")
}

fn orbit_names(g: &CoxeterGraph, orbit: &[usize]) -> Vec<String> {
    orbit.iter().map(|&i| g.name(i).to_string()).collect()
}

/// Types an orbit of `group` whose parabolic subgroup is finite.
pub fn classify_orbit(group: &SymmetryGroup, orbit: &[usize]) -> Result<OrbitType> {
    let g = group.graph();
    let mut sorted = orbit.to_vec();
    sorted.sort_unstable();
    if !orbits(group).orbits.contains(&sorted) {
        return Err(Error::NotAnOrbit(orbit_names(g, orbit)));
    }
    if !classify_finite_type(&g.full_subgraph_by_index(&sorted)).is_finite {
        return Err(Error::InfiniteOrbit(orbit_names(g, &sorted)));
    }
    orbit_type_unchecked(g, &sorted)
}

/// Types an orbit from `v_s(X) = |{t ∈ X : m_{s,t} >= 3}|`, which is constant
/// on an orbit.
fn orbit_type_unchecked(g: &CoxeterGraph, orbit: &[usize]) -> Result<OrbitType> {
    let valence = |s: usize| orbit.iter().filter(|&&t| t != s && g.label(s, t).is_edge()).count();
    let v0 = valence(orbit[0]);
    if orbit.iter().any(|&s| valence(s) != v0) || v0 > 1 {
        return Err(Error::InconsistentOrbit(orbit_names(g, orbit)));
    }
    if v0 == 0 {
        return Ok(OrbitType::I);
    }
    let mut label = None;
    for &s in orbit {
        for &t in orbit {
            if s < t && g.label(s, t).is_edge() {
                let m = g.label(s, t).as_finite().filter(|&m| m >= 3);
                match (label, m) {
                    (_, None) => return Err(Error::InfiniteOrbit(orbit_names(g, orbit))),
                    (None, Some(m)) => label = Some(m),
                    (Some(l), Some(m)) if l != m => return Err(Error::InconsistentOrbit(orbit_names(g, orbit))),
                    _ => {}
                }
            }
        }
    }
    Ok(OrbitType::II(label.expect("valence one implies an edge")))
}

/// A reduced word for the longest element `w_X`, as vertex indices.
///
/// Type I: the members in order. Type `II_m`: for each edge `{s, t}`
/// (`s < t`, edges ordered by least member) `(st)^{m/2}` for even `m`,
/// `(st)^{(m-1)/2} s` for odd `m`.
pub fn longest_element_word(g: &CoxeterGraph, orbit: &[usize], ty: OrbitType) -> Vec<usize> {
    let mut members = orbit.to_vec();
    members.sort_unstable();
    match ty {
        OrbitType::I => members,
        OrbitType::II(m) => {
            let mut word = Vec::with_capacity(members.len() * m as usize / 2);
            for &s in &members {
                let Some(&t) = members.iter().find(|&&t| t > s && g.label(s, t).is_edge()) else {
                    continue;
                };
                for _ in 0..m / 2 {
                    word.extend([s, t]);
                }
                if m % 2 == 1 {
                    word.push(s);
                }
            }
            word
        }
    }
}

/// Folded simple root and generator of one orbit.
#[derive(Clone, Debug, PartialEq)]
pub struct FoldedGenerator<T> {
    /// Sorted vertex indices.
    pub orbit: Vec<usize>,
    pub name: String,
    pub orbit_type: OrbitType,
    /// `a_X = Σ ε_s`, coordinates in `V`.
    pub a_x: Vec<T>,
    pub norm_ax: T,
    /// `ε̃_X`, coordinates in `V`.
    pub eps_tilde: Vec<T>,
    /// Word for `w_X` in vertex indices.
    pub word: Vec<usize>,
}

impl<T: Scalar> FoldedGenerator<T> {
    /// Builds the generator of an orbit already known to be typed `ty`.
    pub fn new(rb: &RootBasis<T>, orbit: &[usize], ty: OrbitType) -> Self {
        let g = rb.graph();
        let mut orbit = orbit.to_vec();
        orbit.sort_unstable();
        let mut a_x = vec![T::zero(); rb.dim()];
        for &s in &orbit {
            for (a, &e) in a_x.iter_mut().zip(rb.root(s)) {
                *a = *a + e;
            }
        }
        let norm_ax = rb.form(&a_x, &a_x).sqrt();
        let eps_tilde = a_x.iter().map(|&a| a / norm_ax).collect();
        Self {
            name: orbit_name(g, &orbit),
            word: longest_element_word(g, &orbit, ty),
            orbit,
            orbit_type: ty,
            a_x,
            norm_ax,
            eps_tilde,
        }
    }

    /// `‖a_X‖` predicted from the orbit type: `√|X|` or `√(|X|(1 - cos(π/m)))`.
    pub fn predicted_norm(&self) -> T {
        let size = T::of_usize(self.orbit.len());
        (size * type_factor::<T>(self.orbit_type)).sqrt()
    }

    pub fn word_names(&self, g: &CoxeterGraph) -> Vec<String> {
        self.word.iter().map(|&i| g.name(i).to_string()).collect()
    }
}

/// `‖a_X‖² / |X|`: `1` for type I, `1 - cos(π/m)` for type `II_m`.
fn type_factor<T: Scalar>(ty: OrbitType) -> T {
    match ty {
        OrbitType::I => T::one(),
        OrbitType::II(m) => T::one() + T::neg_cos_pi_over(m),
    }
}

/// Local shape of `Γ_{X∪Y}` that fixes `m̃_{X,Y}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BiOrbitPattern {
    /// No edges between the orbits.
    Orthogonal,
    /// Single edges `x - y` carrying the given label.
    Type1(CoxeterLabel),
    /// Paths `x - y - x` of simple edges.
    Type2,
    /// Paths `y - x - x - y`, labels 3, 3, 3 (`X` of type `II_3`).
    Type3,
    /// Paths `y - x - x - y`, labels 3, 4, 3 (`X` of type `II_4`).
    Type4,
    /// Stars with one `y` joined to three `x` by simple edges.
    Type5,
    /// Anything else.
    Infinite,
}

impl BiOrbitPattern {
    /// The folded label this pattern prescribes.
    pub fn label(self) -> CoxeterLabel {
        match self {
            BiOrbitPattern::Orthogonal => CoxeterLabel::Finite(2),
            BiOrbitPattern::Type1(m) => m,
            BiOrbitPattern::Type2 | BiOrbitPattern::Type3 => CoxeterLabel::Finite(4),
            BiOrbitPattern::Type4 => CoxeterLabel::Finite(8),
            BiOrbitPattern::Type5 => CoxeterLabel::Finite(6),
            BiOrbitPattern::Infinite => CoxeterLabel::Infinity,
        }
    }
}

impl fmt::Display for BiOrbitPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BiOrbitPattern::Orthogonal => f.write_str("orthogonal"),
            BiOrbitPattern::Type1(m) => write!(f, "type1({m})"),
            BiOrbitPattern::Type2 => f.write_str("type2"),
            BiOrbitPattern::Type3 => f.write_str("type3"),
            BiOrbitPattern::Type4 => f.write_str("type4"),
            BiOrbitPattern::Type5 => f.write_str("type5"),
            BiOrbitPattern::Infinite => f.write_str("infinite"),
        }
    }
}

/// Vertex colour in a bi-orbit template.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    X,
    Y,
}

struct Template {
    pattern: BiOrbitPattern,
    sides: Vec<Side>,
    edges: Vec<(usize, usize, u32)>,
}

fn templates() -> Vec<Template> {
    use Side::{X, Y};
    vec![
        Template { pattern: BiOrbitPattern::Type2, sides: vec![X, X, Y], edges: vec![(0, 2, 3), (1, 2, 3)] },
        Template {
            pattern: BiOrbitPattern::Type3,
            sides: vec![Y, X, X, Y],
            edges: vec![(0, 1, 3), (1, 2, 3), (2, 3, 3)],
        },
        Template {
            pattern: BiOrbitPattern::Type4,
            sides: vec![Y, X, X, Y],
            edges: vec![(0, 1, 3), (1, 2, 4), (2, 3, 3)],
        },
        Template {
            pattern: BiOrbitPattern::Type5,
            sides: vec![X, X, X, Y],
            edges: vec![(0, 3, 3), (1, 3, 3), (2, 3, 3)],
        },
    ]
}

/// Colour-preserving isomorphism between a component and a template, by
/// trying every bijection (components have at most four vertices here).
fn matches_template(g: &CoxeterGraph, comp: &[usize], sides: &[Side], t: &Template) -> bool {
    let n = comp.len();
    if n != t.sides.len() {
        return false;
    }
    let tlabel = |a: usize, b: usize| {
        t.edges
            .iter()
            .find(|&&(u, v, _)| (u, v) == (a, b) || (u, v) == (b, a))
            .map_or(CoxeterLabel::Finite(2), |&(_, _, m)| CoxeterLabel::Finite(m))
    };
    let mut perm: Vec<usize> = (0..n).collect();
    let mut found = false;
    permute(&mut perm, 0, &mut |p| {
        if found {
            return;
        }
        let colours = (0..n).all(|i| sides[i] == t.sides[p[i]]);
        let labels = (0..n).all(|i| (i + 1..n).all(|j| g.label(comp[i], comp[j]) == tlabel(p[i], p[j])));
        found = colours && labels;
    });
    found
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Determines the bi-orbit pattern of `(X, Y)` from `Γ_{X∪Y}` alone.
pub fn bi_orbit_combinatorial(
    g: &CoxeterGraph,
    x: &[usize],
    x_type: OrbitType,
    y: &[usize],
    y_type: OrbitType,
) -> BiOrbitPattern {
    let joined = x.iter().any(|&s| y.iter().any(|&t| g.label(s, t).is_edge()));
    if !joined {
        return BiOrbitPattern::Orthogonal;
    }
    let mut union: Vec<usize> = x.iter().chain(y).copied().collect();
    union.sort_unstable();
    let sub = g.full_subgraph_by_index(&union);
    let mut found: Option<BiOrbitPattern> = None;
    for comp in sub.connected_components() {
        let comp: Vec<usize> = comp.iter().map(|&i| union[i]).collect();
        let sides: Vec<Side> = comp.iter().map(|v| if x.contains(v) { Side::X } else { Side::Y }).collect();
        let flipped: Vec<Side> = sides.iter().map(|&s| if s == Side::X { Side::Y } else { Side::X }).collect();
        let pattern = component_pattern(g, &comp, &sides, &flipped, x_type, y_type);
        match (found, pattern) {
            (_, None) => return BiOrbitPattern::Infinite,
            (None, Some(p)) => found = Some(p),
            (Some(q), Some(p)) if q != p => return BiOrbitPattern::Infinite,
            _ => {}
        }
    }
    found.unwrap_or(BiOrbitPattern::Infinite)
}

fn component_pattern(
    g: &CoxeterGraph,
    comp: &[usize],
    sides: &[Side],
    flipped: &[Side],
    x_type: OrbitType,
    y_type: OrbitType,
) -> Option<BiOrbitPattern> {
    if comp.len() == 2 && sides[0] != sides[1] && x_type == OrbitType::I && y_type == OrbitType::I {
        return Some(BiOrbitPattern::Type1(g.label(comp[0], comp[1])));
    }
    for t in templates() {
        // Types 3 and 4 need the type II orbit on the `x` side.
        let orientations: &[(&[Side], OrbitType)] = &[(sides, x_type), (flipped, y_type)];
        for &(colouring, xt) in orientations {
            let type_ok = match t.pattern {
                BiOrbitPattern::Type3 => xt == OrbitType::II(3),
                BiOrbitPattern::Type4 => xt == OrbitType::II(4),
                _ => x_type == OrbitType::I && y_type == OrbitType::I,
            };
            if type_ok && matches_template(g, comp, colouring, &t) {
                return Some(t.pattern);
            }
        }
    }
    None
}

/// Quantities attached to a pair of folded generators.
#[derive(Clone, Debug, PartialEq)]
pub struct BiOrbitData<T> {
    pub x: String,
    pub y: String,
    /// Neighbours in `Y` of a vertex of `X`.
    pub v_x: usize,
    /// Neighbours in `X` of a vertex of `Y`.
    pub v_y: usize,
    /// `<ε_s, a_Y>` for `s ∈ X`.
    pub p_x: T,
    /// `<ε_t, a_X>` for `t ∈ Y`.
    pub p_y: T,
    /// `<ε̃_X, ε̃_Y>` computed directly.
    pub inner: T,
    /// Same inner product from `p_X`, `v_X`, `v_Y` and the orbit types.
    pub inner_by_formula: T,
    pub m_tilde: CoxeterLabel,
    pub pattern: BiOrbitPattern,
}

/// Inner product of folded roots from the orbit counts:
/// `p_X √v_Y / √(v_X c_X c_Y)` with `c = 1` for type I and `1 - cos(π/m)`
/// for type `II_m`. Zero when the orbits are not joined.
pub fn inner_by_case_formula<T: Scalar>(p_x: T, v_x: usize, v_y: usize, x_type: OrbitType, y_type: OrbitType) -> T {
    if v_x == 0 {
        return T::zero();
    }
    let vx = T::of_usize(v_x);
    let vy = T::of_usize(v_y);
    match (x_type, y_type) {
        (OrbitType::I, OrbitType::I) => p_x * vy.sqrt() / vx.sqrt(),
        (OrbitType::II(_), OrbitType::I) => p_x * vy.sqrt() / (vx * type_factor::<T>(x_type)).sqrt(),
        (OrbitType::I, OrbitType::II(_)) => p_x * vy.sqrt() / (vx * type_factor::<T>(y_type)).sqrt(),
        (OrbitType::II(_), OrbitType::II(_)) => {
            p_x * vy.sqrt() / (vx * type_factor::<T>(x_type) * type_factor::<T>(y_type)).sqrt()
        }
    }
}

/// Reads a Coxeter label off an inner product: `0 → 2`, `<= -1 → ∞`,
/// `-cos(π/k) → k` for `3 <= k <= k_max`.
pub fn label_from_inner<T: Scalar>(inner: T, k_max: u32, tol: T) -> Option<CoxeterLabel> {
    if inner.abs() <= tol {
        return Some(CoxeterLabel::Finite(2));
    }
    if inner <= -T::one() + tol {
        return Some(CoxeterLabel::Infinity);
    }
    (3..=k_max).find(|&k| (inner - T::neg_cos_pi_over(k)).abs() < tol).map(CoxeterLabel::Finite)
}

/// Numeric side of the folded label: counts, pairings, both inner-product
/// routes (which must agree), and `m̃` read off the inner product.
pub fn bi_orbit_numeric<T: Scalar>(
    rb: &RootBasis<T>,
    x: &FoldedGenerator<T>,
    y: &FoldedGenerator<T>,
    k_max: u32,
    tol: &Tolerances<T>,
) -> Result<BiOrbitData<T>> {
    let g = rb.graph();
    let s = x.orbit[0];
    let t = y.orbit[0];
    let v_x = y.orbit.iter().filter(|&&u| g.label(s, u).is_edge()).count();
    let v_y = x.orbit.iter().filter(|&&u| g.label(t, u).is_edge()).count();
    let p_x = rb.form(rb.root(s), &y.a_x);
    let p_y = rb.form(rb.root(t), &x.a_x);
    let inner = rb.form(&x.a_x, &y.a_x) / (x.norm_ax * y.norm_ax);
    let inner_by_formula = inner_by_case_formula(p_x, v_x, v_y, x.orbit_type, y.orbit_type);
    if (inner - inner_by_formula).abs() > tol.eq {
        return Err(Error::CaseFormulaMismatch {
            x: x.name.clone(),
            y: y.name.clone(),
            direct: inner.as_f64(),
            formula: inner_by_formula.as_f64(),
        });
    }
    let m_tilde = label_from_inner(inner, k_max, tol.eq).ok_or_else(|| Error::Classification {
        x: x.name.clone(),
        y: y.name.clone(),
        inner: inner.as_f64(),
        k_max,
    })?;
    let pattern = bi_orbit_combinatorial(g, &x.orbit, x.orbit_type, &y.orbit, y.orbit_type);
    Ok(BiOrbitData { x: x.name.clone(), y: y.name.clone(), v_x, v_y, p_x, p_y, inner, inner_by_formula, m_tilde, pattern })
}

#[derive(Clone, Debug)]
pub struct FoldConfig<T> {
    pub k_max: u32,
    pub tol: Tolerances<T>,
}

impl<T: Scalar> Default for FoldConfig<T> {
    fn default() -> Self {
        Self { k_max: DEFAULT_K_MAX, tol: Tolerances::default() }
    }
}

/// Folded Coxeter graph together with its root basis on `V^G`.
#[derive(Clone, Debug)]
pub struct FoldedSystem<T> {
    pub generators: Vec<FoldedGenerator<T>>,
    /// Pairs `(i, j)`, `i < j`, in generator order.
    pub bi_orbits: Vec<BiOrbitData<T>>,
    /// `m̃` over generator indices, `1` on the diagonal.
    pub m_tilde: Vec<Vec<CoxeterLabel>>,
    pub folded_graph: CoxeterGraph,
    /// Root basis of the folded graph in the coordinates of `fixed.basis`.
    pub folded_root_basis: RootBasis<T>,
    pub fixed: FixedSubspace<T>,
    /// Orbits with infinite parabolic subgroup, left out of the folding.
    pub excluded_orbits: Vec<Vec<usize>>,
}

impl<T: Scalar> FoldedSystem<T> {
    pub fn action(&self) -> &GroupAction<T> {
        &self.fixed.action
    }

    pub fn bi_orbit(&self, i: usize, j: usize) -> Option<&BiOrbitData<T>> {
        let n = self.generators.len();
        let (i, j) = (i.min(j), i.max(j));
        if i == j || j >= n {
            return None;
        }
        // Pairs are stored row by row.
        let idx = i * n - i * (i + 1) / 2 + (j - i - 1);
        self.bi_orbits.get(idx)
    }
}

/// Folds `rb` along `group`.
pub fn fold<T: Scalar>(rb: &RootBasis<T>, group: &SymmetryGroup, config: &FoldConfig<T>) -> Result<FoldedSystem<T>> {
    let tol = &config.tol;
    let g = rb.graph();
    let action = check_equivariance(rb, group, tol)?;
    let fixed = fixed_subspace(rb, &action, tol);

    let mut generators = Vec::new();
    let mut excluded_orbits = Vec::new();
    for orbit in orbits(group).orbits {
        if !classify_finite_type(&g.full_subgraph_by_index(&orbit)).is_finite {
            excluded_orbits.push(orbit);
            continue;
        }
        let ty = orbit_type_unchecked(g, &orbit)?;
        generators.push(FoldedGenerator::new(rb, &orbit, ty));
    }

    let canonical = rb.is_canonical();
    let n = generators.len();
    let mut m_tilde = vec![vec![CoxeterLabel::Finite(2); n]; n];
    let mut bi_orbits = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        m_tilde[i][i] = CoxeterLabel::Finite(1);
        for j in i + 1..n {
            let data = bi_orbit_numeric(rb, &generators[i], &generators[j], config.k_max, tol)?;
            if canonical && data.pattern.label() != data.m_tilde {
                return Err(Error::ClassifierDisagreement {
                    x: data.x.clone(),
                    y: data.y.clone(),
                    numeric: data.m_tilde.to_string(),
                    combinatorial: format!("{} ({})", data.pattern.label(), data.pattern),
                });
            }
            m_tilde[i][j] = data.m_tilde;
            m_tilde[j][i] = data.m_tilde;
            bi_orbits.push(data);
        }
    }

    let folded_graph = CoxeterGraph::new(
        generators.iter().map(|x| x.name.clone()),
        (0..n).flat_map(|i| {
            let gens = &generators;
            let m = &m_tilde;
            (i + 1..n).map(move |j| (gens[i].name.clone(), gens[j].name.clone(), m[i][j]))
        }),
    )?;
    let roots: Vec<Vec<T>> = generators.iter().map(|x| fixed.coordinates(&x.eps_tilde, tol)).collect();
    let folded_root_basis = RootBasis::new(folded_graph.clone(), fixed.projected_bilinear.clone(), roots)?;
    validate_root_basis(&folded_root_basis, tol).map_err(|e| Error::FoldedBasis(Box::new(e)))?;

    Ok(FoldedSystem { generators, bi_orbits, m_tilde, folded_graph, folded_root_basis, fixed, excluded_orbits })
}

/// `<ε̃_X, ε̃_Y>` in `V`.
pub fn folded_inner<T: Scalar>(rb: &RootBasis<T>, x: &FoldedGenerator<T>, y: &FoldedGenerator<T>) -> T {
    rb.form(&x.eps_tilde, &y.eps_tilde)
}

/// Checks `‖ε̃_X‖ = 1` and the predicted norm of `a_X`.
pub fn generator_norms_ok<T: Scalar>(rb: &RootBasis<T>, x: &FoldedGenerator<T>, tol: T) -> bool {
    (rb.form(&x.eps_tilde, &x.eps_tilde) - T::one()).abs() <= tol
        && (x.norm_ax - x.predicted_norm()).abs() <= tol
        && dot(&x.a_x, &x.a_x) > T::zero()
}
