//! Lie algebras given by structure constants, the graded algebra sp(6) of
//! type C3, subspaces and subalgebras, and Tanaka prolongation.

mod c3;
mod ksub;
mod subspace;
mod tanaka;

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::exactmath::{add_mul, Field, MathError, Matrix, Rational, RatFunc};

pub use c3::{build_c3, C3Algebra, GradingElementData, IDX_E, IDX_EP, IDX_H, IDX_X, IDX_Y};
pub use ksub::{GradedSubalgebra, Weight};
pub use subspace::{coordinates, induced_algebra, is_graded_subalgebra, adjoint_action, Subspace};
pub use tanaka::{positive_prolongation_dims, tanaka_prolongation, Prolongation};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LieError {
    #[error(transparent)]
    Math(#[from] MathError),
    #[error("bracket of {0} and {1} leaves the subspace")]
    NotClosed(String, String),
    #[error("subspace is not invariant under the given element")]
    NotInvariant,
    #[error("algebra is not generated in degree -1")]
    NotGenerated,
    #[error("structure constants violate {0}")]
    Invalid(String),
    #[error("json: {0}")]
    Json(String),
}

/// Structure constants on a basis with an integer degree per basis vector.
#[derive(Clone, PartialEq)]
pub struct LieAlgebra<F: Field> {
    labels: Vec<String>,
    degrees: Vec<i32>,
    table: Vec<Vec<(usize, F)>>,
}

impl<F: Field> LieAlgebra<F> {
    /// Builds from brackets `[e_i, e_j] = Σ c_k e_k` given for `i < j`.
    pub fn new(
        labels: Vec<String>,
        degrees: Vec<i32>,
        brackets: impl IntoIterator<Item = (usize, usize, Vec<(usize, F)>)>,
    ) -> Result<Self, LieError> {
        let n = labels.len();
        if degrees.len() != n {
            return Err(LieError::Invalid("label/degree count".into()));
        }
        let mut table = vec![Vec::new(); n * n];
        for (i, j, terms) in brackets {
            if i >= n || j >= n {
                return Err(LieError::Invalid(format!("index ({i},{j}) out of range")));
            }
            if i == j {
                if terms.iter().any(|(_, c)| !c.is_zero()) {
                    return Err(LieError::Invalid("antisymmetry".into()));
                }
                continue;
            }
            let (a, b, sign) = if i < j { (i, j, false) } else { (j, i, true) };
            let mut acc = vec![F::zero(); n];
            for (k, c) in terms {
                if k >= n {
                    return Err(LieError::Invalid(format!("index {k} out of range")));
                }
                acc[k] = acc[k].add(&if sign { c.neg() } else { c });
            }
            let fwd: Vec<(usize, F)> = acc
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k, c.clone()))
                .collect();
            let back = fwd.iter().map(|(k, c)| (*k, c.neg())).collect();
            table[a * n + b] = fwd;
            table[b * n + a] = back;
        }
        Ok(LieAlgebra {
            labels,
            degrees,
            table,
        })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Basis indices of a given degree.
    pub fn indices_of_degree(&self, d: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == d).collect()
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &[(usize, F)] {
        &self.table[i * self.dim() + j]
    }

    pub fn bracket(&self, x: &[F], y: &[F]) -> Vec<F> {
        let n = self.dim();
        let mut out = vec![F::zero(); n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let t = &self.table[i * n + j];
                if t.is_empty() {
                    continue;
                }
                let c = xi.mul(yj);
                for (k, s) in t {
                    add_mul(&mut out[*k], &c, s);
                }
            }
        }
        out
    }

    pub fn basis_vector(&self, i: usize) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim()];
        v[i] = F::one();
        v
    }

    /// Matrix of `ad x`; column `j` holds `[x, e_j]`.
    pub fn ad(&self, x: &[F]) -> Matrix<F> {
        let n = self.dim();
        let cols: Vec<Vec<F>> = (0..n).map(|j| self.bracket(x, &self.basis_vector(j))).collect();
        Matrix::from_cols(&cols, n).expect("square")
    }

    /// Jacobi identity on all basis triples.
    pub fn check_jacobi(&self) -> bool {
        let n = self.dim();
        for i in 0..n {
            for j in i + 1..n {
                let ij = self.bracket(&self.basis_vector(i), &self.basis_vector(j));
                for k in j + 1..n {
                    let jk = self.bracket(&self.basis_vector(j), &self.basis_vector(k));
                    let ki = self.bracket(&self.basis_vector(k), &self.basis_vector(i));
                    let a = self.bracket(&ij, &self.basis_vector(k));
                    let b = self.bracket(&jk, &self.basis_vector(i));
                    let c = self.bracket(&ki, &self.basis_vector(j));
                    if a.iter().zip(&b).zip(&c).any(|((x, y), z)| !x.add(y).add(z).is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Every bracket lies exactly in the sum of the degrees.
    pub fn is_graded(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                self.bracket_basis(i, j)
                    .iter()
                    .all(|(k, _)| self.degrees[*k] == self.degrees[i] + self.degrees[j])
            })
        })
    }

    /// Every bracket lies in filtration degree at least the sum of the degrees.
    pub fn is_filtered(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                self.bracket_basis(i, j)
                    .iter()
                    .all(|(k, _)| self.degrees[*k] >= self.degrees[i] + self.degrees[j])
            })
        })
    }

    /// Brackets as `(i, j, k, c)` with `i < j`, in index order.
    pub fn triples(&self) -> Vec<(usize, usize, usize, F)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for (k, c) in self.bracket_basis(i, j) {
                    out.push((i, j, *k, c.clone()));
                }
            }
        }
        out
    }

    pub fn with_bracket_triples(&self, triples: Vec<(usize, usize, usize, F)>) -> Result<Self, LieError> {
        let mut grouped: std::collections::BTreeMap<(usize, usize), Vec<(usize, F)>> =
            Default::default();
        for (i, j, k, c) in triples {
            grouped.entry((i, j)).or_default().push((k, c));
        }
        LieAlgebra::new(
            self.labels.clone(),
            self.degrees.clone(),
            grouped.into_iter().map(|((i, j), t)| (i, j, t)),
        )
    }

    pub fn map_field<G: Field>(&self, f: impl Fn(&F) -> G) -> LieAlgebra<G> {
        LieAlgebra {
            labels: self.labels.clone(),
            degrees: self.degrees.clone(),
            table: self
                .table
                .iter()
                .map(|t| t.iter().map(|(k, c)| (*k, f(c))).collect())
                .collect(),
        }
    }

    /// Keeps only the degree-additive part of every bracket.
    pub fn associated_graded(&self) -> GradedLieAlgebra<F> {
        let n = self.dim();
        let mut table = self.table.clone();
        for i in 0..n {
            for j in 0..n {
                let s = self.degrees[i] + self.degrees[j];
                table[i * n + j].retain(|(k, _)| self.degrees[*k] == s);
            }
        }
        GradedLieAlgebra(LieAlgebra {
            labels: self.labels.clone(),
            degrees: self.degrees.clone(),
            table,
        })
    }

    pub fn to_json(&self) -> String {
        let doc = AlgebraJson {
            labels: self.labels.clone(),
            degrees: self.degrees.clone(),
            brackets: self
                .triples()
                .into_iter()
                .map(|(i, j, k, c)| (i, j, k, c.to_string()))
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }
}

impl LieAlgebra<Rational> {
    pub fn lift<G: Field>(&self) -> LieAlgebra<G> {
        self.map_field(|q| G::from_rational(q))
    }
}

pub trait ParseScalar: Sized {
    fn parse_scalar(s: &str) -> Result<Self, MathError>;
}

impl ParseScalar for Rational {
    fn parse_scalar(s: &str) -> Result<Self, MathError> {
        s.parse()
    }
}

impl ParseScalar for RatFunc {
    fn parse_scalar(s: &str) -> Result<Self, MathError> {
        s.parse()
    }
}

impl<F: Field + ParseScalar> LieAlgebra<F> {
    pub fn from_json(s: &str) -> Result<Self, LieError> {
        let doc: AlgebraJson = serde_json::from_str(s).map_err(|e| LieError::Json(e.to_string()))?;
        let mut grouped: std::collections::BTreeMap<(usize, usize), Vec<(usize, F)>> =
            Default::default();
        for (i, j, k, c) in doc.brackets {
            grouped.entry((i, j)).or_default().push((k, F::parse_scalar(&c)?));
        }
        LieAlgebra::new(doc.labels, doc.degrees, grouped.into_iter().map(|((i, j), t)| (i, j, t)))
    }
}

#[derive(Serialize, Deserialize)]
struct AlgebraJson {
    labels: Vec<String>,
    degrees: Vec<i32>,
    brackets: Vec<(usize, usize, usize, String)>,
}

impl<F: Field> fmt::Debug for LieAlgebra<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LieAlgebra(dim {}) {{", self.dim())?;
        for (i, j, k, c) in self.triples() {
            writeln!(f, "  [{}, {}] ∋ ({c})·{}", self.labels[i], self.labels[j], self.labels[k])?;
        }
        write!(f, "}}")
    }
}

/// Lie algebra whose brackets respect the degrees exactly.
#[derive(Clone, PartialEq, Debug)]
pub struct GradedLieAlgebra<F: Field>(LieAlgebra<F>);

impl<F: Field> GradedLieAlgebra<F> {
    pub fn new(inner: LieAlgebra<F>) -> Result<Self, LieError> {
        if !inner.is_graded() {
            return Err(LieError::Invalid("grading compatibility".into()));
        }
        Ok(GradedLieAlgebra(inner))
    }

    pub fn into_inner(self) -> LieAlgebra<F> {
        self.0
    }
}

impl<F: Field> Deref for GradedLieAlgebra<F> {
    type Target = LieAlgebra<F>;
    fn deref(&self) -> &LieAlgebra<F> {
        &self.0
    }
}

/// Lie algebra with a filtration `[k^i, k^j] ⊆ k^{i+j}` read off the degrees.
#[derive(Clone, PartialEq, Debug)]
pub struct FilteredLieAlgebra<F: Field>(LieAlgebra<F>);

impl<F: Field> FilteredLieAlgebra<F> {
    pub fn new(inner: LieAlgebra<F>) -> Result<Self, LieError> {
        if !inner.is_filtered() {
            return Err(LieError::Invalid("filtration compatibility".into()));
        }
        Ok(FilteredLieAlgebra(inner))
    }

    pub fn into_inner(self) -> LieAlgebra<F> {
        self.0
    }

    pub fn gr(&self) -> GradedLieAlgebra<F> {
        self.0.associated_graded()
    }
}

impl<F: Field> Deref for FilteredLieAlgebra<F> {
    type Target = LieAlgebra<F>;
    fn deref(&self) -> &LieAlgebra<F> {
        &self.0
    }
}

/// Three-dimensional Heisenberg algebra with degrees (-1, -1, -2).
pub fn heisenberg<F: Field>() -> GradedLieAlgebra<F> {
    let alg = LieAlgebra::new(
        vec!["p".into(), "q".into(), "z".into()],
        vec![-1, -1, -2],
        vec![(0, 1, vec![(2, F::one())])],
    )
    .expect("valid");
    GradedLieAlgebra(alg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abelian_algebra_satisfies_jacobi() {
        let a: LieAlgebra<Rational> =
            LieAlgebra::new(vec!["a".into(), "b".into(), "c".into()], vec![0, 0, 0], vec![]).unwrap();
        assert!(a.check_jacobi());
        assert!(a.is_graded());
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let g = build_c3().g;
        let s = g.to_json();
        let back = LieAlgebra::<Rational>::from_json(&s).unwrap();
        assert_eq!(&back, &*g);
        assert_eq!(back.to_json(), s);
    }

    #[test]
    fn heisenberg_is_graded_nilpotent() {
        let h = heisenberg::<Rational>();
        assert!(h.check_jacobi());
        assert_eq!(h.bracket_basis(1, 0), &[(2, Rational::integer(-1))]);
    }
}
