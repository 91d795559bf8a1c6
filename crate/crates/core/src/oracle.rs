//! Brute-force check of the folding on finite instances: enumerate `W` as a
//! matrix group, extract the elements fixed by `G`, and compare with the
//! group generated by the folded generators and with the Coxeter group of
//! the folded graph.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::folding::{fold, FoldConfig, FoldedSystem};
use crate::graph::{classify_finite_type, CoxeterGraph, CoxeterLabel};
use crate::linalg::{dot, Matrix};
use crate::repr::{build_rep, check_reflection_on_fixed_space, evaluate_word, folded_rep, relation_defect, ReflectionRep};
use crate::rootbasis::{GroupAction, RootBasis};
use crate::scalar::{Scalar, Tolerances};
use crate::symmetry::SymmetryGroup;

/// Fingerprint grid.
pub const GRID: f64 = 1e-6;
/// Equal fingerprints must be closer than this.
pub const SAME_ELEMENT: f64 = 1e-5;
/// Distinct elements must be further apart than this.
pub const SEPARATION: f64 = 1e-4;
pub const DEFAULT_CAP: usize = 200_000;
/// Word-length bound for the fixed-element search on infinite groups.
pub const FIXED_WORD_SEARCH_LENGTH: usize = 20;
pub const DEFAULT_SAMPLES: usize = 100;
pub const DEFAULT_SEED: u64 = 42;

type Key = Vec<i64>;

fn fingerprint<T: Scalar>(m: &Matrix<T>) -> Key {
    m.as_slice().iter().map(|&x| (x.as_f64() / GRID).round() as i64).collect()
}

/// Keys of the grid cells `m` could fall into under rounding noise: entries
/// sitting within `slack` grid units of a cell boundary contribute both cells.
fn candidate_keys<T: Scalar>(m: &Matrix<T>, slack: f64) -> Vec<Key> {
    let mut keys = vec![Vec::with_capacity(m.as_slice().len())];
    for &x in m.as_slice() {
        let scaled = x.as_f64() / GRID;
        let base = scaled.round();
        let frac = scaled - base;
        let alt = if frac > 0.5 - slack {
            Some(base as i64 + 1)
        } else if frac < -0.5 + slack {
            Some(base as i64 - 1)
        } else {
            None
        };
        match alt {
            // Cap the fan-out; two ambiguous entries at once is already rare.
            Some(a) if keys.len() < 64 => {
                let mut extra = keys.clone();
                for k in &mut keys {
                    k.push(base as i64);
                }
                for k in &mut extra {
                    k.push(a);
                }
                keys.extend(extra);
            }
            _ => {
                for k in &mut keys {
                    k.push(base as i64);
                }
            }
        }
    }
    keys
}

/// A group element as a matrix, with a witness word in the generators.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixGroupElement<T> {
    pub matrix: Matrix<T>,
    pub key: Vec<i64>,
    /// Generator indices, shortest in breadth-first order.
    pub word: Vec<usize>,
}

/// Elements found by a breadth-first closure.
#[derive(Clone, Debug, Default)]
pub struct EnumerationResult<T> {
    pub elements: Vec<MatrixGroupElement<T>>,
    pub truncated: bool,
    index: HashMap<Key, usize>,
}

impl<T: Scalar> EnumerationResult<T> {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Index of the stored element equal to `m`, if any.
    pub fn find(&self, m: &Matrix<T>) -> Result<Option<usize>> {
        for key in candidate_keys(m, 1e-3) {
            if let Some(&i) = self.index.get(&key) {
                let d = self.elements[i].matrix.max_abs_diff(m).as_f64();
                if d >= SAME_ELEMENT {
                    return Err(Error::ToleranceCollapse { distance: d });
                }
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    pub fn contains(&self, m: &Matrix<T>) -> Result<bool> {
        self.find(m).map(|i| i.is_some())
    }

    fn push(&mut self, el: MatrixGroupElement<T>) {
        self.index.insert(el.key.clone(), self.elements.len());
        self.elements.push(el);
    }

    fn from_elements(elements: Vec<MatrixGroupElement<T>>, truncated: bool) -> Self {
        let mut out = Self { elements: Vec::with_capacity(elements.len()), truncated, index: HashMap::new() };
        for e in elements {
            out.push(e);
        }
        out
    }

    /// Checks that distinct stored elements are at least `SEPARATION` apart.
    ///
    /// Elements are sorted by a seeded random projection; two matrices
    /// within `SEPARATION` in sup norm project within `SEPARATION · ‖w‖₁`,
    /// so only neighbours in that window need a full comparison.
    pub fn audit_separation(&self) -> Result<()> {
        let Some(first) = self.elements.first() else {
            return Ok(());
        };
        let len = first.matrix.as_slice().len();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let w: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let window = SEPARATION * w.iter().map(|x| x.abs()).sum::<f64>();
        let mut proj: Vec<(f64, usize)> = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, e)| (dot(&w, &e.matrix.as_slice().iter().map(|x| x.as_f64()).collect::<Vec<_>>()), i))
            .collect();
        proj.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (a, &(pa, i)) in proj.iter().enumerate() {
            for &(pb, j) in &proj[a + 1..] {
                if pb - pa > window {
                    break;
                }
                let d = self.elements[i].matrix.max_abs_diff(&self.elements[j].matrix).as_f64();
                if d <= SEPARATION {
                    return Err(Error::ToleranceCollapse { distance: d });
                }
            }
        }
        Ok(())
    }
}

/// Breadth-first closure from the identity under right multiplication by
/// the generators, stopping once more than `cap` elements are found or
/// words would exceed `max_length`.
pub fn enumerate_matrices<T: Scalar>(
    generators: &[Matrix<T>],
    dim: usize,
    cap: usize,
    max_length: Option<usize>,
) -> Result<EnumerationResult<T>> {
    let id = Matrix::identity(dim);
    let mut out = EnumerationResult::default();
    out.push(MatrixGroupElement { key: fingerprint(&id), matrix: id, word: vec![] });
    let mut head = 0;
    while head < out.elements.len() {
        if max_length.is_some_and(|l| out.elements[head].word.len() >= l) {
            out.truncated = true;
            break;
        }
        for (k, gen) in generators.iter().enumerate() {
            let m = &out.elements[head].matrix * gen;
            if out.find(&m)?.is_some() {
                continue;
            }
            if out.elements.len() >= cap {
                out.truncated = true;
                return Ok(out);
            }
            let mut word = out.elements[head].word.clone();
            word.push(k);
            out.push(MatrixGroupElement { key: fingerprint(&m), matrix: m, word });
        }
        head += 1;
    }
    Ok(out)
}

/// Enumerates the image of `W` under the representation.
pub fn enumerate_group<T: Scalar>(rep: &ReflectionRep<T>, cap: usize) -> Result<EnumerationResult<T>> {
    enumerate_matrices(&rep.matrices, rep.dim(), cap, None)
}

/// Elements `w` with `P_g w P_g⁻¹ = w` for every group element.
pub fn fixed_subgroup<T: Scalar>(
    all: &EnumerationResult<T>,
    action: &GroupAction<T>,
    tol: &Tolerances<T>,
) -> Result<EnumerationResult<T>> {
    let conj: Vec<(Matrix<T>, Matrix<T>)> = action
        .matrices
        .iter()
        .filter(|p| p.distance_to_identity() > T::zero())
        .map(|p| {
            let inv = p
                .inverse(tol.pivot)
                .ok_or_else(|| Error::UndefinedAction("symmetry acts singularly on V".into()))?;
            Ok((p.clone(), inv))
        })
        .collect::<Result<_>>()?;
    let fixed = all
        .elements
        .iter()
        .filter(|e| {
            conj.iter().all(|(p, pinv)| (&(p * &e.matrix) * pinv).max_abs_diff(&e.matrix).as_f64() < SAME_ELEMENT)
        })
        .cloned()
        .collect();
    Ok(EnumerationResult::from_elements(fixed, all.truncated))
}

/// One named check of a verification run.
#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Full enumeration of `W` and `W^G`.
    Oracle,
    /// `W` too large or infinite: relations and reflection properties only.
    Property,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairLabel {
    pub x: String,
    pub y: String,
    pub m_tilde: CoxeterLabel,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub mode: Mode,
    pub order_w: Option<usize>,
    pub order_fixed: Option<usize>,
    pub order_generated: Option<usize>,
    pub order_folded: Option<usize>,
    pub folded_graph: String,
    /// `m̃` for every pair of folded generators.
    pub labels: Vec<PairLabel>,
    pub checks: Vec<CheckOutcome>,
    /// Witness words (vertex names) of elements involved in failed checks.
    pub counterexamples: Vec<Vec<String>>,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct VerifyConfig<T> {
    pub fold: FoldConfig<T>,
    pub cap: usize,
    pub samples: usize,
    pub seed: u64,
    /// Threshold for the sampled reflection identity and restrictions.
    pub reflection_tol: T,
}

impl<T: Scalar> Default for VerifyConfig<T> {
    fn default() -> Self {
        Self {
            fold: FoldConfig::default(),
            cap: DEFAULT_CAP,
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            reflection_tol: T::of(T::DEFAULT_TOL * 10.0),
        }
    }
}

/// Runs the folding and checks it against brute force where possible.
pub fn verify_theorem<T: Scalar>(
    rb: &RootBasis<T>,
    group: &SymmetryGroup,
    config: &VerifyConfig<T>,
) -> Result<(FoldedSystem<T>, VerificationReport)> {
    let folded = fold(rb, group, &config.fold)?;
    let report = verify_folded(rb, &folded, config)?;
    Ok((folded, report))
}

/// Verification of an already folded system.
pub fn verify_folded<T: Scalar>(
    rb: &RootBasis<T>,
    folded: &FoldedSystem<T>,
    config: &VerifyConfig<T>,
) -> Result<VerificationReport> {
    let tol = &config.fold.tol;
    let g = rb.graph();
    let rep = build_rep(rb);
    let mut checks = Vec::new();
    let mut counterexamples = Vec::new();

    // Relations (w_X w_Y)^m̃ = 1.
    let n = folded.generators.len();
    let mut worst = 0.0f64;
    let mut checked = 0;
    let mut failed_pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (x, y) = (&folded.generators[i], &folded.generators[j]);
            if let Some(d) = relation_defect(&rep, x, y, folded.m_tilde[i][j])? {
                worst = worst.max(d.as_f64());
                checked += 1;
                if !(d < tol.loose) {
                    failed_pairs.push(format!("({}, {})", x.name, y.name));
                    counterexamples.push(x.word_names(g).into_iter().chain(y.word_names(g)).collect());
                }
            }
        }
    }
    checks.push(CheckOutcome {
        name: "relations".into(),
        passed: failed_pairs.is_empty(),
        detail: if checked == 0 {
            "vacuous: no finite folded labels".to_string()
        } else if failed_pairs.is_empty() {
            format!("{checked} relations, max defect {worst:e}")
        } else {
            format!("failed on {}", failed_pairs.join(", "))
        },
    });

    // w_X acts on V^G as the reflection in ε̃_X.
    let mut worst = 0.0f64;
    let mut failed = Vec::new();
    for x in &folded.generators {
        let c = check_reflection_on_fixed_space(&rep, &folded.fixed, x, config.samples, config.seed, config.reflection_tol)?;
        worst = worst.max(c.max_deviation.as_f64());
        if !c.passed {
            failed.push(x.name.clone());
        }
    }
    checks.push(CheckOutcome {
        name: "reflection on fixed space".into(),
        passed: failed.is_empty(),
        detail: format!("{} samples per orbit, seed {}, max deviation {worst:e}", config.samples, config.seed),
    });

    // The folded basis was validated by `fold`; the restriction check builds
    // the folded representation.
    let folded_rep = folded_rep(folded, &rep, tol, config.reflection_tol);
    checks.push(CheckOutcome {
        name: "folded root basis and restriction".into(),
        passed: folded_rep.is_ok(),
        detail: match &folded_rep {
            Ok(_) => "conditions (a), (b), (c) hold; restrictions match".into(),
            Err(e) => e.to_string(),
        },
    });

    let finite = classify_finite_type(g);
    let expected_order = finite.group_order().filter(|&o| o <= config.cap as u128);
    let wx_matrices: Vec<Matrix<T>> =
        folded.generators.iter().map(|x| evaluate_word(&rep, &x.word)).collect::<Result<_>>()?;

    let mut report = VerificationReport {
        mode: Mode::Property,
        order_w: None,
        order_fixed: None,
        order_generated: None,
        order_folded: None,
        folded_graph: folded_graph_summary(&folded.folded_graph),
        labels: folded
            .bi_orbits
            .iter()
            .map(|b| PairLabel { x: b.x.clone(), y: b.y.clone(), m_tilde: b.m_tilde })
            .collect(),
        checks,
        counterexamples,
        passed: false,
    };

    match (expected_order, folded_rep) {
        (Some(expected), Ok(frep)) => {
            report.mode = Mode::Oracle;
            let all = enumerate_group(&rep, config.cap)?;
            all.audit_separation()?;
            report.order_w = Some(all.order());
            report.checks.push(CheckOutcome {
                name: "order of W".into(),
                passed: !all.truncated && all.order() as u128 == expected,
                detail: format!("enumerated {}, catalog {expected}", all.order()),
            });

            let fixed = fixed_subgroup(&all, folded.action(), tol)?;
            report.order_fixed = Some(fixed.order());

            let generated = enumerate_matrices(&wx_matrices, rep.dim(), config.cap, None)?;
            report.order_generated = Some(generated.order());
            let mut missing = Vec::new();
            for e in &generated.elements {
                if !fixed.contains(&e.matrix)? {
                    missing.push(e);
                }
            }
            let mut ungenerated = Vec::new();
            for e in &fixed.elements {
                if !generated.contains(&e.matrix)? {
                    ungenerated.push(e);
                }
            }
            report.counterexamples.extend(missing.iter().take(5).map(|e| {
                e.word.iter().flat_map(|&k| folded.generators[k].word_names(g)).collect::<Vec<_>>()
            }));
            report.counterexamples.extend(ungenerated.iter().take(5).map(|e| e.word.iter().map(|&k| g.name(k).to_string()).collect()));
            report.checks.push(CheckOutcome {
                name: "generation".into(),
                passed: missing.is_empty() && ungenerated.is_empty() && !generated.truncated,
                detail: format!(
                    "|<w_X>| = {}, |W^G| = {}, {} generated elements not fixed, {} fixed elements not generated",
                    generated.order(),
                    fixed.order(),
                    missing.len(),
                    ungenerated.len()
                ),
            });

            let mut closed = true;
            for e in &fixed.elements {
                for w in &wx_matrices {
                    if !fixed.contains(&(&e.matrix * w))? {
                        closed = false;
                    }
                }
            }
            report.checks.push(CheckOutcome {
                name: "fixed set is a subgroup".into(),
                passed: closed && all.order() % fixed.order() == 0,
                detail: format!("|W| / |W^G| = {} / {}", all.order(), fixed.order()),
            });

            let folded_group = enumerate_group(&frep, config.cap)?;
            report.order_folded = Some(folded_group.order());
            report.checks.push(CheckOutcome {
                name: "order of folded Coxeter group".into(),
                passed: !folded_group.truncated && folded_group.order() == fixed.order(),
                detail: format!("|W(folded)| = {}, |W^G| = {}", folded_group.order(), fixed.order()),
            });
        }
        (_, _) => {
            // Bounded search for fixed elements of short length.
            let bounded = enumerate_matrices(&rep.matrices, rep.dim(), config.cap, Some(FIXED_WORD_SEARCH_LENGTH))?;
            let fixed = fixed_subgroup(&bounded, folded.action(), tol)?;
            let passed = !folded.generators.is_empty() || fixed.order() == 1;
            report.checks.push(CheckOutcome {
                name: "bounded fixed-element search".into(),
                passed,
                detail: format!(
                    "{} fixed elements among {} of length <= {}{}",
                    fixed.order(),
                    bounded.order(),
                    FIXED_WORD_SEARCH_LENGTH,
                    if bounded.elements.len() >= config.cap { " (capped)" } else { "" }
                ),
            });
            if !passed {
                report
                    .counterexamples
                    .extend(fixed.elements.iter().skip(1).take(5).map(|e| e.word.iter().map(|&k| g.name(k).to_string()).collect()));
            }
        }
    }
    report.passed = report.checks.iter().all(|c| c.passed);
    Ok(report)
}

fn folded_graph_summary(g: &CoxeterGraph) -> String {
    let r = classify_finite_type(g);
    if g.is_empty() {
        return "empty".into();
    }
    r.components.iter().map(|(_, t)| t.to_string()).collect::<Vec<_>>().join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::rootbasis::canonical_root_basis;

    #[test]
    fn small_orders() {
        let a2 = corpus::a2_flip();
        let rep = build_rep(&a2.root_basis());
        assert_eq!(enumerate_group(&rep, 1000).unwrap().order(), 6);
        let a3 = corpus::a3_flip();
        let rep = build_rep(&a3.root_basis());
        let all = enumerate_group(&rep, 1000).unwrap();
        assert_eq!(all.order(), 24);
        assert!(!all.truncated);
        all.audit_separation().unwrap();
    }

    #[test]
    fn infinite_dihedral_truncates() {
        let inst = corpus::infinite_dihedral_flip();
        let rep = build_rep(&canonical_root_basis::<f64>(&inst.graph));
        let r = enumerate_group(&rep, 100).unwrap();
        assert!(r.truncated);
        assert_eq!(r.order(), 100);
    }

    #[test]
    fn witness_words_are_shortest() {
        let inst = corpus::a3_flip();
        let rep = build_rep(&inst.root_basis());
        let all = enumerate_group(&rep, 1000).unwrap();
        let longest = all.elements.iter().map(|e| e.word.len()).max().unwrap();
        assert_eq!(longest, 6);
        for e in &all.elements {
            assert!(evaluate_word(&rep, &e.word).unwrap().max_abs_diff(&e.matrix) < 1e-12);
        }
    }

    #[test]
    fn fixed_subgroups() {
        let tol = Tolerances::default();
        for (inst, whole, fixed) in [(corpus::a3_flip(), 24, 8), (corpus::a2_flip(), 6, 2), (corpus::a3_trivial(), 24, 24)] {
            let rb = inst.root_basis();
            let action = crate::rootbasis::check_equivariance(&rb, &inst.group(), &tol).unwrap();
            let all = enumerate_group(&build_rep(&rb), 1000).unwrap();
            assert_eq!(all.order(), whole);
            assert_eq!(fixed_subgroup(&all, &action, &tol).unwrap().order(), fixed, "{}", inst.name);
        }
    }

    #[test]
    fn boundary_entries_get_both_cells() {
        let m: Matrix<f64> = Matrix::from_rows(&[vec![0.5e-6 + 1e-13, 1.0]]);
        assert_eq!(candidate_keys(&m, 1e-3).len(), 2);
        let m: Matrix<f64> = Matrix::from_rows(&[vec![0.25, 1.0]]);
        assert_eq!(candidate_keys(&m, 1e-3).len(), 1);
    }
}
