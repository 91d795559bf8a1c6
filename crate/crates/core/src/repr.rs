//! Rooted representations as explicit matrices, and the checks tying the
//! representation of `W` on `V` to the folded one on `V^G`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::folding::{FoldedGenerator, FoldedSystem};
use crate::graph::CoxeterLabel;
use crate::linalg::{max_abs, Matrix};
use crate::rootbasis::{FixedSubspace, RootBasis};
use crate::scalar::{Scalar, Tolerances};

/// Matrices of `f_s(x) = x - 2<x, ε_s> ε_s`, one per vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct ReflectionRep<T> {
    pub basis: RootBasis<T>,
    pub matrices: Vec<Matrix<T>>,
}

impl<T: Scalar> ReflectionRep<T> {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn generator(&self, s: usize) -> &Matrix<T> {
        &self.matrices[s]
    }
}

/// `f_s = Id - 2 ε_s (B ε_s)ᵀ` in coordinates.
pub fn build_rep<T: Scalar>(rb: &RootBasis<T>) -> ReflectionRep<T> {
    let dim = rb.dim();
    let two = T::one() + T::one();
    let matrices = rb
        .roots()
        .iter()
        .map(|e| {
            let be = rb.bilinear().mul_vec(e);
            let mut f = Matrix::identity(dim);
            for i in 0..dim {
                for j in 0..dim {
                    f[(i, j)] = f[(i, j)] - two * e[i] * be[j];
                }
            }
            f
        })
        .collect();
    ReflectionRep { basis: rb.clone(), matrices }
}

/// A word in the generators, as vertex indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<usize>);

impl Word {
    /// Resolves letters by vertex name.
    pub fn parse<S: AsRef<str>>(rb_graph: &crate::graph::CoxeterGraph, letters: &[S]) -> Result<Self> {
        letters
            .iter()
            .map(|l| rb_graph.index_of(l.as_ref()).map_err(|_| Error::UnknownLetter(l.as_ref().to_string())))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn names(&self, g: &crate::graph::CoxeterGraph) -> Vec<String> {
        self.0.iter().map(|&i| g.name(i).to_string()).collect()
    }
}

/// Product of generator matrices, first letter leftmost.
pub fn evaluate_word<T: Scalar>(rep: &ReflectionRep<T>, word: &[usize]) -> Result<Matrix<T>> {
    let mut m = Matrix::identity(rep.dim());
    for &s in word {
        let f = rep.matrices.get(s).ok_or_else(|| Error::UnknownLetter(s.to_string()))?;
        m = &m * f;
    }
    Ok(m)
}

/// Whether `(w_X w_Y)^m̃` is the identity within the loose tolerance.
/// Infinite labels impose no relation and pass vacuously.
pub fn check_relation<T: Scalar>(
    rep: &ReflectionRep<T>,
    x: &FoldedGenerator<T>,
    y: &FoldedGenerator<T>,
    m_tilde: CoxeterLabel,
    tol: &Tolerances<T>,
) -> Result<bool> {
    Ok(relation_defect(rep, x, y, m_tilde)?.is_none_or(|d| d < tol.loose))
}

/// Sup distance of `(w_X w_Y)^m̃` from the identity; `None` for infinite labels.
pub fn relation_defect<T: Scalar>(
    rep: &ReflectionRep<T>,
    x: &FoldedGenerator<T>,
    y: &FoldedGenerator<T>,
    m_tilde: CoxeterLabel,
) -> Result<Option<T>> {
    let Some(m) = m_tilde.as_finite() else {
        return Ok(None);
    };
    let word: Vec<usize> = x.word.iter().chain(&y.word).copied().collect();
    let prod = evaluate_word(rep, &word)?;
    Ok(Some(prod.pow(m).distance_to_identity()))
}

/// Outcome of comparing `w_X` on sampled fixed vectors with the reflection
/// in `ε̃_X`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReflectionCheck<T> {
    pub orbit: String,
    pub samples: usize,
    pub seed: u64,
    pub max_deviation: T,
    pub passed: bool,
}

/// Samples `x ∈ V^G` and checks `w_X(x) = x - 2<x, ε̃_X> ε̃_X`.
pub fn check_reflection_on_fixed_space<T: Scalar>(
    rep: &ReflectionRep<T>,
    fs: &FixedSubspace<T>,
    x: &FoldedGenerator<T>,
    samples: usize,
    seed: u64,
    tol: T,
) -> Result<ReflectionCheck<T>> {
    let w = evaluate_word(rep, &x.word)?;
    let rb = &rep.basis;
    let two = T::one() + T::one();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = T::zero();
    for _ in 0..samples {
        let coords: Vec<T> = (0..fs.dim()).map(|_| T::of(rng.gen_range(-1.0..1.0))).collect();
        let v = fs.embed(&coords);
        let acted = w.mul_vec(&v);
        let k = two * rb.form(&v, &x.eps_tilde);
        let reflected: Vec<T> = v.iter().zip(&x.eps_tilde).map(|(&a, &e)| a - k * e).collect();
        let dev = max_abs(&acted.iter().zip(&reflected).map(|(&a, &b)| a - b).collect::<Vec<_>>());
        worst = worst.max(dev);
    }
    Ok(ReflectionCheck { orbit: x.name.clone(), samples, seed, max_deviation: worst, passed: worst < tol })
}

/// Matrix of an operator preserving `V^G`, in the coordinates of the fixed
/// basis: `(BᵀB)⁻¹ Bᵀ M B`.
pub fn restrict_to_fixed<T: Scalar>(m: &Matrix<T>, fs: &FixedSubspace<T>, tol: &Tolerances<T>) -> Matrix<T> {
    let b = &fs.basis;
    let bt = b.transpose();
    let gram_inv = (&bt * b).inverse(tol.pivot).expect("fixed-subspace basis is independent");
    &(&(&gram_inv * &bt) * m) * b
}

/// Rooted representation of the folded graph on `V^G`, after checking that
/// each `w_X` restricted to `V^G` equals the folded reflection.
pub fn folded_rep<T: Scalar>(
    folded: &FoldedSystem<T>,
    rep: &ReflectionRep<T>,
    tol: &Tolerances<T>,
    restriction_tol: T,
) -> Result<ReflectionRep<T>> {
    let out = build_rep(&folded.folded_root_basis);
    for (x, reflection) in folded.generators.iter().zip(&out.matrices) {
        let w = evaluate_word(rep, &x.word)?;
        let restricted = restrict_to_fixed(&w, &folded.fixed, tol);
        let deviation = restricted.max_abs_diff(reflection);
        if !(deviation < restriction_tol) {
            return Err(Error::RestrictionMismatch { orbit: x.name.clone(), deviation: deviation.as_f64() });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::CoxeterGraph;
    use crate::rootbasis::canonical_root_basis;

    fn a2() -> CoxeterGraph {
        CoxeterGraph::from_edges(&["a", "b"], &[("a", "b", 3)]).unwrap()
    }

    #[test]
    fn single_vertex_generator() {
        let g = CoxeterGraph::from_edges(&["s"], &[]).unwrap();
        let rep = build_rep(&canonical_root_basis::<f64>(&g));
        assert_eq!(rep.matrices[0], Matrix::from_rows(&[vec![-1.0]]));
    }

    #[test]
    fn a2_generator_by_hand() {
        // f_a(ε_a) = -ε_a, f_a(ε_b) = ε_b + ε_a.
        let rep = build_rep(&canonical_root_basis::<f64>(&a2()));
        let expected = Matrix::from_rows(&[vec![-1.0, 1.0], vec![0.0, 1.0]]);
        assert!(rep.matrices[0].max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn generators_negate_their_root() {
        let g = CoxeterGraph::from_edges(&["a", "b", "c"], &[("a", "b", 5), ("b", "c", 0)]).unwrap();
        let rb = canonical_root_basis::<f64>(&g);
        let rep = build_rep(&rb);
        for s in 0..3 {
            let img = rep.matrices[s].mul_vec(rb.root(s));
            assert!(img.iter().zip(rb.root(s)).all(|(&a, &b)| (a + b).abs() < 1e-12));
        }
    }

    #[test]
    fn words() {
        let rb = canonical_root_basis::<f64>(&a2());
        let rep = build_rep(&rb);
        assert_eq!(evaluate_word(&rep, &[]).unwrap(), Matrix::identity(2));
        assert!(evaluate_word(&rep, &[0, 0]).unwrap().distance_to_identity() < 1e-12);
        let aba = evaluate_word(&rep, &[0, 1, 0]).unwrap();
        let bab = evaluate_word(&rep, &[1, 0, 1]).unwrap();
        assert!(aba.max_abs_diff(&bab) < 1e-9);
        assert!(matches!(Word::parse(rb.graph(), &["a", "q"]), Err(Error::UnknownLetter(l)) if l == "q"));
        assert!(matches!(evaluate_word(&rep, &[7]), Err(Error::UnknownLetter(_))));
    }

    #[test]
    fn single_precision_rep() {
        let rep = build_rep(&canonical_root_basis::<f32>(&a2()));
        let aba = evaluate_word(&rep, &[0, 1, 0]).unwrap();
        let bab = evaluate_word(&rep, &[1, 0, 1]).unwrap();
        assert!(aba.max_abs_diff(&bab) < 1e-5);
    }
}
