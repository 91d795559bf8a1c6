use proptest::prelude::*;

use coxfold::folding::{fold, generator_norms_ok, FoldConfig};
use coxfold::graph::{classify_finite_type, CoxeterGraph, CoxeterLabel};
use coxfold::linalg::Matrix;
use coxfold::oracle::{verify_theorem, Mode, VerifyConfig};
use coxfold::repr::{build_rep, evaluate_word};
use coxfold::rootbasis::{canonical_root_basis, check_equivariance};
use coxfold::scalar::Tolerances;
use coxfold::symmetry::{automorphism_group, orbits, SymmetryGroup};

fn label() -> impl Strategy<Value = CoxeterLabel> {
    prop_oneof![
        6 => Just(CoxeterLabel::Finite(2)),
        4 => Just(CoxeterLabel::Finite(3)),
        1 => Just(CoxeterLabel::Finite(4)),
        1 => Just(CoxeterLabel::Finite(5)),
        1 => Just(CoxeterLabel::Finite(6)),
        1 => Just(CoxeterLabel::Infinity),
    ]
}

fn coxeter_graph(max: usize) -> impl Strategy<Value = CoxeterGraph> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec(label(), n * (n - 1) / 2).prop_map(move |labels| {
            let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let mut edges = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    edges.push((names[i].clone(), names[j].clone(), labels[k]));
                    k += 1;
                }
            }
            CoxeterGraph::new(names.clone(), edges).unwrap()
        })
    })
}

/// Graphs with a good chance of nontrivial symmetry: a random path with
/// mirrored labels, or a star with equal arms.
fn symmetric_graph() -> impl Strategy<Value = CoxeterGraph> {
    let path = (2usize..=7, prop::collection::vec(label(), 3)).prop_map(|(n, ls)| {
        let names: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
        let edges = (0..n - 1)
            .map(|i| {
                let k = i.min(n - 2 - i);
                let m = if ls[k % 3] == CoxeterLabel::Finite(2) { CoxeterLabel::Finite(3) } else { ls[k % 3] };
                (names[i].clone(), names[i + 1].clone(), m)
            })
            .collect::<Vec<_>>();
        CoxeterGraph::new(names.clone(), edges).unwrap()
    });
    let star = (2usize..=4, 1usize..=2, label()).prop_map(|(arms, len, m)| {
        let mut names = vec!["c".to_string()];
        let mut edges = Vec::new();
        for a in 0..arms {
            let mut prev = "c".to_string();
            for l in 0..len {
                let v = format!("r{a}_{l}");
                let lab = if l == 0 && m != CoxeterLabel::Finite(2) { m } else { CoxeterLabel::Finite(3) };
                edges.push((prev.clone(), v.clone(), lab));
                names.push(v.clone());
                prev = v;
            }
        }
        CoxeterGraph::new(names, edges).unwrap()
    });
    prop_oneof![path, star, coxeter_graph(5)]
}

fn full_group(g: &CoxeterGraph) -> SymmetryGroup {
    automorphism_group(g, 16).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn json_round_trip(g in coxeter_graph(7)) {
        let back = CoxeterGraph::from_json(&g.to_json()).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(back.to_json(), g.to_json());
    }

    #[test]
    fn catalog_matches_positive_definiteness(g in coxeter_graph(8)) {
        let eig = canonical_root_basis::<f64>(&g).gram().symmetric_eigenvalues()[0];
        prop_assert_eq!(classify_finite_type(&g).is_finite, eig > 1e-9, "smallest eigenvalue {}", eig);
    }

    #[test]
    fn orbit_partition(g in symmetric_graph()) {
        let group = full_group(&g);
        let part = orbits(&group);
        let mut seen = vec![0; g.len()];
        for o in &part.orbits {
            prop_assert_eq!(group.order() % o.len(), 0);
            for &v in o {
                seen[v] += 1;
                for h in group.elements() {
                    prop_assert!(o.contains(&h.apply(v)));
                }
            }
        }
        prop_assert!(seen.iter().all(|&c| c == 1));
        for h in group.elements() {
            for s in 0..g.len() {
                for t in 0..g.len() {
                    prop_assert_eq!(g.label(s, t), g.label(h.apply(s), h.apply(t)));
                }
            }
        }
    }

    #[test]
    fn braid_relations(g in coxeter_graph(5)) {
        let rep = build_rep(&canonical_root_basis::<f64>(&g));
        for s in 0..g.len() {
            prop_assert!(evaluate_word(&rep, &[s, s]).unwrap().distance_to_identity() < 1e-9);
            for t in s + 1..g.len() {
                if let Some(m) = g.label(s, t).as_finite() {
                    let st = evaluate_word(&rep, &[s, t]).unwrap();
                    prop_assert!(st.pow(m).distance_to_identity() < 1e-6);
                }
            }
        }
    }

    #[test]
    fn symmetries_intertwine_generators(g in symmetric_graph()) {
        let group = full_group(&g);
        let rb = canonical_root_basis::<f64>(&g);
        let action = check_equivariance(&rb, &group, &Tolerances::default()).unwrap();
        let rep = build_rep(&rb);
        for (h, p) in group.elements().iter().zip(&action.matrices) {
            let pt: Matrix<f64> = p.transpose();
            for s in 0..g.len() {
                let conj = &(p * &rep.matrices[s]) * &pt;
                prop_assert!(conj.max_abs_diff(&rep.matrices[h.apply(s)]) < 1e-12);
            }
        }
    }

    #[test]
    fn folding_invariants(g in symmetric_graph()) {
        let group = full_group(&g);
        let rb = canonical_root_basis::<f64>(&g);
        let f = fold(&rb, &group, &FoldConfig::default()).unwrap();
        let n = f.generators.len();
        prop_assert_eq!(n + f.excluded_orbits.len(), orbits(&group).orbits.len());
        let rep = build_rep(&rb);
        for x in &f.generators {
            prop_assert!(generator_norms_ok(&rb, x, 1e-9));
            let w = evaluate_word(&rep, &x.word).unwrap();
            prop_assert!((&w * &w).distance_to_identity() < 1e-9);
        }
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(f.m_tilde[i][j], f.m_tilde[j][i]);
            }
        }
    }

    #[test]
    fn trivial_group_reproduces_graph(g in coxeter_graph(6)) {
        let rb = canonical_root_basis::<f64>(&g);
        let f = fold(&rb, &SymmetryGroup::trivial(&g), &FoldConfig::default()).unwrap();
        prop_assert_eq!(f.folded_graph.len(), g.len());
        for (i, x) in f.generators.iter().enumerate() {
            for (j, y) in f.generators.iter().enumerate() {
                prop_assert_eq!(f.m_tilde[i][j], g.label(x.orbit[0], y.orbit[0]));
            }
        }
    }

    #[test]
    fn oracle_confirms_random_finite_folds(g in symmetric_graph()) {
        let order = classify_finite_type(&g).group_order();
        prop_assume!(order.is_some_and(|o| o <= 20_000));
        let group = full_group(&g);
        let config = VerifyConfig { cap: 20_000, ..VerifyConfig::default() };
        let (_, report) = verify_theorem(&canonical_root_basis::<f64>(&g), &group, &config).unwrap();
        prop_assert_eq!(report.mode, Mode::Oracle);
        prop_assert!(report.passed, "{:?}", report.checks);
        prop_assert_eq!(report.order_fixed, report.order_folded);
    }
}
