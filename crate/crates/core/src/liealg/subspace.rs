use crate::exactmath::{solve_linear, Field, IncrementalEchelon, LinearSolver, Matrix};

use super::{LieAlgebra, LieError};

/// Linear subspace of Fⁿ held in reduced echelon form.
#[derive(Clone, Debug)]
pub struct Subspace<F: Field> {
    ech: IncrementalEchelon<F>,
}

impl<F: Field> Subspace<F> {
    pub fn span(ambient: usize, vectors: &[Vec<F>]) -> Self {
        let mut ech = IncrementalEchelon::new(ambient);
        for v in vectors {
            ech.insert(v);
        }
        Subspace { ech }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ech: IncrementalEchelon::new(ambient),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ech.width()
    }

    pub fn dim(&self) -> usize {
        self.ech.rank()
    }

    pub fn basis(&self) -> Vec<Vec<F>> {
        self.ech.basis()
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.ech.contains(v)
    }

    pub fn insert(&mut self, v: &[F]) -> bool {
        self.ech.insert(v)
    }

    pub fn contains_space(&self, o: &Subspace<F>) -> bool {
        o.basis().iter().all(|v| self.contains(v))
    }

    pub fn same_as(&self, o: &Subspace<F>) -> bool {
        self.dim() == o.dim() && self.contains_space(o)
    }

    pub fn sum(&self, o: &Subspace<F>) -> Subspace<F> {
        let mut s = self.clone();
        for v in o.basis() {
            s.insert(&v);
        }
        s
    }

    pub fn intersect(&self, o: &Subspace<F>) -> Subspace<F> {
        let a = self.basis();
        let b = o.basis();
        if a.is_empty() || b.is_empty() {
            return Subspace::zero(self.ambient());
        }
        let n = self.ambient();
        let mut cols = a.clone();
        cols.extend(b.iter().map(|v| v.iter().map(|x| x.neg()).collect()));
        let m = Matrix::from_cols(&cols, n).expect("shape");
        let ker = crate::exactmath::kernel_basis(&m);
        let vecs: Vec<Vec<F>> = ker
            .iter()
            .map(|k| {
                let mut v = vec![F::zero(); n];
                for (c, av) in k.iter().zip(&a) {
                    for (x, y) in v.iter_mut().zip(av) {
                        crate::exactmath::add_mul(x, c, y);
                    }
                }
                v
            })
            .collect();
        Subspace::span(n, &vecs)
    }
}

/// Coordinates of `v` in the (independent) vectors `basis`.
pub fn coordinates<F: Field>(basis: &[Vec<F>], v: &[F]) -> Option<Vec<F>> {
    if basis.is_empty() {
        return v.iter().all(|x| x.is_zero()).then(Vec::new);
    }
    let m = Matrix::from_cols(basis, v.len()).ok()?;
    solve_linear(&m, v).map(|s| s.particular)
}

/// Structure constants of the subalgebra spanned by `basis`.
pub fn induced_algebra<F: Field>(
    g: &LieAlgebra<F>,
    basis: &[Vec<F>],
    labels: Vec<String>,
    degrees: Vec<i32>,
) -> Result<LieAlgebra<F>, LieError> {
    let n = g.dim();
    let m = Matrix::from_cols(basis, n)?;
    let solver = LinearSolver::new(&m);
    if solver.rank() != basis.len() {
        return Err(LieError::Invalid("dependent basis".into()));
    }
    let mut brackets = Vec::new();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let b = g.bracket(&basis[i], &basis[j]);
            let c = solver
                .solve(&b, |x| x.clone())
                .ok_or_else(|| LieError::NotClosed(labels[i].clone(), labels[j].clone()))?;
            let terms: Vec<(usize, F)> =
                c.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
            brackets.push((i, j, terms));
        }
    }
    LieAlgebra::new(labels, degrees, brackets)
}

pub fn is_graded_subalgebra<F: Field>(g: &LieAlgebra<F>, basis: &[Vec<F>]) -> bool {
    let s = Subspace::span(g.dim(), basis);
    basis
        .iter()
        .all(|a| basis.iter().all(|b| s.contains(&g.bracket(a, b))))
}

/// Matrix of `ad x` on the subspace with basis `basis`.
pub fn adjoint_action<F: Field>(
    g: &LieAlgebra<F>,
    x: &[F],
    basis: &[Vec<F>],
) -> Result<Matrix<F>, LieError> {
    let n = g.dim();
    let m = Matrix::from_cols(basis, n)?;
    let solver = LinearSolver::new(&m);
    let cols: Vec<Vec<F>> = basis
        .iter()
        .map(|b| solver.solve(&g.bracket(x, b), |c| c.clone()).ok_or(LieError::NotInvariant))
        .collect::<Result<_, _>>()?;
    Ok(Matrix::from_cols(&cols, basis.len())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::Rational;
    use crate::liealg::build_c3;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| Rational::integer(x)).collect()
    }

    #[test]
    fn intersection_of_planes() {
        let a = Subspace::span(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::span(3, &[v(&[0, 1, 0]), v(&[0, 0, 1])]);
        let c = a.intersect(&b);
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&v(&[0, 5, 0])));
    }

    #[test]
    fn levi_factor_is_subalgebra() {
        let c = build_c3();
        let g = &c.g;
        let basis = vec![c.grading.x.clone(), c.grading.y.clone(), c.grading.h.clone()];
        assert!(is_graded_subalgebra(g, &basis));
        let s = induced_algebra(g, &basis, vec!["X".into(), "Y".into(), "H".into()], vec![0, 0, 0])
            .unwrap();
        assert!(s.check_jacobi());
        assert_eq!(s.bracket_basis(2, 0), &[(0, Rational::integer(2))]);
    }

    #[test]
    fn non_closed_span_is_rejected() {
        let c = build_c3();
        let g = &c.g;
        let basis = vec![g.basis_vector(6), g.basis_vector(7)];
        let r = induced_algebra(g, &basis, vec!["a".into(), "b".into()], vec![-1, -1]);
        assert!(matches!(r, Err(LieError::NotClosed(_, _))));
    }
}
