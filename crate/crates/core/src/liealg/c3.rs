use crate::exactmath::{Field, LinearSolver, Matrix, Rational};

use super::{GradedLieAlgebra, LieAlgebra, LieError};

/// Distinguished elements of g₀ as coordinate vectors in the standard basis.
#[derive(Clone, Debug, PartialEq)]
pub struct GradingElementData {
    /// Grading element: `[E, x] = deg(x)·x`.
    pub e: Vec<Rational>,
    /// Central element of g₀ complementary to E in the centre.
    pub e_prime: Vec<Rational>,
    pub h: Vec<Rational>,
    pub x: Vec<Rational>,
    pub y: Vec<Rational>,
}

/// sp(6,ℚ) with the contact grading of depth 3 and its 6×6 realization.
#[derive(Clone, Debug)]
pub struct C3Algebra {
    pub g: GradedLieAlgebra<Rational>,
    pub grading: GradingElementData,
    /// Eigenvalues of (ad H, ad E, ad E′) on each basis vector.
    pub weights: Vec<[i64; 3]>,
    /// Root in ε-coordinates, `None` on the Cartan part.
    pub roots: Vec<Option<[i64; 3]>>,
    /// Killing form `tr(ad x ad y)` on the basis.
    pub killing: Matrix<Rational>,
    matrices: Vec<Matrix<Rational>>,
    solver: LinearSolver<Rational>,
}

pub const IDX_H: usize = 8;
pub const IDX_X: usize = 9;
pub const IDX_Y: usize = 10;
pub const IDX_E: usize = 11;
pub const IDX_EP: usize = 12;

fn q(n: i64) -> Rational {
    Rational::integer(n)
}

fn half(n: i64) -> Rational {
    Rational::new(n, 2).expect("nonzero")
}

fn unit(i: usize, j: usize) -> Matrix<Rational> {
    let mut m = Matrix::zeros(6, 6);
    m.set(i, j, q(1));
    m
}

fn diag(d: [Rational; 3]) -> Matrix<Rational> {
    let mut m = Matrix::zeros(6, 6);
    for i in 0..3 {
        m.set(i, i, d[i].clone());
        m.set(i + 3, i + 3, d[i].neg());
    }
    m
}

/// Root vector for a root in ε-coordinates.
fn root_matrix(r: [i64; 3]) -> Matrix<Rational> {
    let nz: Vec<usize> = (0..3).filter(|&i| r[i] != 0).collect();
    match nz.as_slice() {
        [i] => {
            if r[*i] > 0 {
                unit(*i, i + 3)
            } else {
                unit(i + 3, *i)
            }
        }
        [i, j] => {
            let (i, j) = (*i, *j);
            match (r[i], r[j]) {
                (1, -1) => unit(i, j).sub(&unit(j + 3, i + 3)),
                (-1, 1) => unit(j, i).sub(&unit(i + 3, j + 3)),
                (1, 1) => unit(i, j + 3).add(&unit(j, i + 3)),
                (-1, -1) => unit(j + 3, i).add(&unit(i + 3, j)),
                _ => unreachable!("not a root"),
            }
        }
        _ => unreachable!("not a root"),
    }
}

/// Coordinates of an ε-root in the simple roots e1−e2, e2−e3, 2e3.
fn simple_coords(r: [i64; 3]) -> [i64; 3] {
    let c1 = r[0];
    let c2 = r[0] + r[1];
    let c3 = (r[0] + r[1] + r[2]) / 2;
    [c1, c2, c3]
}

fn root_label(r: [i64; 3]) -> String {
    let c = simple_coords(r);
    if c.iter().all(|&x| x >= 0) {
        format!("x{}{}{}", c[0], c[1], c[2])
    } else {
        format!("y{}{}{}", -c[0], -c[1], -c[2])
    }
}

fn flatten(m: &Matrix<Rational>) -> Vec<Rational> {
    m.to_rows().into_iter().flatten().collect()
}

/// Builds sp(6) with basis ordered by degree −3..3.
pub fn build_c3() -> C3Algebra {
    let neg3 = [[-2, 0, 0], [-1, -1, 0], [0, -2, 0]];
    let neg2 = [[-1, 0, -1], [0, -1, -1]];
    let neg1 = [[-1, 0, 1], [0, -1, 1], [0, 0, -2]];
    let pos1 = [[0, 0, 2], [0, 1, -1], [1, 0, -1]];
    let pos2 = [[0, 1, 1], [1, 0, 1]];
    let pos3 = [[0, 2, 0], [1, 1, 0], [2, 0, 0]];

    let mut entries: Vec<(String, i32, Matrix<Rational>, Option<[i64; 3]>)> = Vec::new();
    let roots_of = |rs: &[[i64; 3]], d: i32| {
        rs.iter()
            .map(|r| (root_label(*r), d, root_matrix(*r), Some(*r)))
            .collect::<Vec<_>>()
    };
    entries.extend(roots_of(&neg3, -3));
    entries.extend(roots_of(&neg2, -2));
    entries.extend(roots_of(&neg1, -1));
    let h = diag([q(1), q(-1), q(0)]);
    let e = diag([half(3), half(3), half(1)]);
    let ep = diag([half(-1), half(-1), half(-1)]);
    entries.push(("H".into(), 0, h, None));
    entries.push(("X".into(), 0, root_matrix([1, -1, 0]), Some([1, -1, 0])));
    entries.push(("Y".into(), 0, root_matrix([-1, 1, 0]), Some([-1, 1, 0])));
    entries.push(("E".into(), 0, e, None));
    entries.push(("E'".into(), 0, ep, None));
    entries.extend(roots_of(&pos1, 1));
    entries.extend(roots_of(&pos2, 2));
    entries.extend(roots_of(&pos3, 3));
    let mut labels = Vec::new();
    let mut degrees = Vec::new();
    let mut matrices = Vec::new();
    let mut roots = Vec::new();
    for (l, d, m, r) in entries {
        labels.push(l);
        degrees.push(d);
        matrices.push(m);
        roots.push(r);
    }

    let n = matrices.len();
    let cols: Vec<Vec<Rational>> = matrices.iter().map(flatten).collect();
    let basis = Matrix::from_cols(&cols, 36).expect("36 entries");
    let solver = LinearSolver::new(&basis);
    assert_eq!(solver.rank(), n, "root and Cartan matrices independent");

    let coords = |m: &Matrix<Rational>| -> Vec<Rational> {
        solver.solve(&flatten(m), |c| c.clone()).expect("matrix lies in sp(6)")
    };
    let mut brackets = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let a = &matrices[i];
            let b = &matrices[j];
            let c = a.mul(b).unwrap().sub(&b.mul(a).unwrap());
            let v = coords(&c);
            let terms: Vec<(usize, Rational)> =
                v.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
            if !terms.is_empty() {
                brackets.push((i, j, terms));
            }
        }
    }
    let alg = LieAlgebra::new(labels, degrees, brackets).expect("valid constants");
    let g = GradedLieAlgebra::new(alg).expect("grading by E");

    let basis_vec = |i: usize| g.basis_vector(i);
    let grading = GradingElementData {
        e: basis_vec(IDX_E),
        e_prime: basis_vec(IDX_EP),
        h: basis_vec(IDX_H),
        x: basis_vec(IDX_X),
        y: basis_vec(IDX_Y),
    };

    let weights = (0..n)
        .map(|i| {
            let mut w = [0i64; 3];
            for (slot, z) in [IDX_H, IDX_E, IDX_EP].into_iter().enumerate() {
                let br = g.bracket_basis(z, i);
                w[slot] = match br {
                    [] => 0,
                    [(k, c)] if *k == i => c.to_i64().expect("integral weight"),
                    _ => panic!("basis vector not a weight vector"),
                };
            }
            w
        })
        .collect();

    let ads: Vec<Matrix<Rational>> = (0..n).map(|i| g.ad(&basis_vec(i))).collect();
    let killing = Matrix::from_fn(n, n, |i, j| {
        let p = ads[i].mul(&ads[j]).unwrap();
        (0..n).fold(Rational::zero(), |acc, k| acc.add(p.get(k, k)))
    });

    C3Algebra {
        g,
        grading,
        weights,
        roots,
        killing,
        matrices,
        solver,
    }
}

impl C3Algebra {
    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn matrix(&self, i: usize) -> &Matrix<Rational> {
        &self.matrices[i]
    }

    /// 6×6 matrix of a general element.
    pub fn to_matrix<F: Field>(&self, v: &[F]) -> Matrix<F> {
        let mut acc = Matrix::zeros(6, 6);
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&self.matrices[i].lift::<F>().scale(c));
            }
        }
        acc
    }

    /// Coordinates of a 6×6 matrix; errors if it is not in sp(6).
    pub fn from_matrix<F: Field>(&self, m: &Matrix<F>) -> Result<Vec<F>, LieError> {
        let flat: Vec<F> = m.to_rows().into_iter().flatten().collect();
        self.solver
            .solve(&flat, |c| F::from_rational(c))
            .ok_or_else(|| LieError::Invalid("matrix outside sp(6)".into()))
    }

    pub fn indices_of_degree(&self, d: i32) -> Vec<usize> {
        self.g.indices_of_degree(d)
    }

    pub fn negative_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.g.degree(i) < 0).collect()
    }

    pub fn nonnegative_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.g.degree(i) >= 0).collect()
    }

    pub fn positive_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.g.degree(i) > 0).collect()
    }

    pub fn h_weight(&self, i: usize) -> i64 {
        self.weights[i][0]
    }

    /// g₋ as a graded algebra on the first eight basis vectors.
    pub fn negative_part(&self) -> GradedLieAlgebra<Rational> {
        let neg = self.negative_indices();
        let brackets = neg.iter().flat_map(|&i| {
            neg.iter().filter(move |&&j| j > i).map(move |&j| {
                let t = self.g.bracket_basis(i, j).to_vec();
                (i, j, t)
            })
        });
        let alg = LieAlgebra::new(
            neg.iter().map(|&i| self.g.label(i).to_string()).collect(),
            neg.iter().map(|&i| self.g.degree(i)).collect(),
            brackets.collect::<Vec<_>>(),
        )
        .expect("negative part closed");
        GradedLieAlgebra::new(alg).expect("graded")
    }

    /// `ad x` restricted to g₋, as a matrix on the g₋ basis.
    pub fn restrict_to_negative<F: Field>(&self, x: &[F]) -> Result<Matrix<F>, LieError> {
        let neg = self.negative_indices();
        let gl = self.g.lift::<F>();
        let mut m = Matrix::zeros(neg.len(), neg.len());
        for (c, &j) in neg.iter().enumerate() {
            let v = gl.bracket(x, &gl.basis_vector(j));
            for (k, val) in v.iter().enumerate() {
                if val.is_zero() {
                    continue;
                }
                let r = neg.iter().position(|&n| n == k).ok_or(LieError::NotInvariant)?;
                m.set(r, c, val.clone());
            }
        }
        Ok(m)
    }

    /// Killing pairing of two coordinate vectors.
    pub fn killing_pairing<F: Field>(&self, x: &[F], y: &[F]) -> F {
        let mut acc = F::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                let k = self.killing.get(i, j);
                if yj.is_zero() || k.is_zero() {
                    continue;
                }
                acc = acc.add(&xi.mul(yj).mul(&F::from_rational(k)));
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_dimensions() {
        let c = build_c3();
        let dims: Vec<usize> = (-3..=3).map(|d| c.indices_of_degree(d).len()).collect();
        assert_eq!(dims, vec![3, 2, 3, 5, 3, 2, 3]);
        assert_eq!(c.dim(), 21);
    }

    #[test]
    fn jacobi_holds() {
        assert!(build_c3().g.check_jacobi());
    }

    #[test]
    fn grading_element_acts_by_degree() {
        let c = build_c3();
        for i in 0..c.dim() {
            assert_eq!(c.weights[i][1], c.g.degree(i) as i64);
        }
    }

    #[test]
    fn sl2_triple_and_centre() {
        let c = build_c3();
        let g = &c.g;
        let xy = g.bracket(&c.grading.x, &c.grading.y);
        assert_eq!(xy, c.grading.h);
        let hx = g.bracket(&c.grading.h, &c.grading.x);
        assert_eq!(hx, c.grading.x.iter().map(|v| v.add(v)).collect::<Vec<_>>());
        for z in [&c.grading.e, &c.grading.e_prime] {
            for i in c.indices_of_degree(0) {
                assert!(g.bracket(z, &g.basis_vector(i)).iter().all(|v| v.is_zero()));
            }
        }
    }

    #[test]
    fn killing_form_nondegenerate_and_pairs_opposite_degrees() {
        let c = build_c3();
        assert!(c.killing.inverse().is_ok());
        for i in 0..21 {
            for j in 0..21 {
                if c.g.degree(i) + c.g.degree(j) != 0 {
                    assert!(c.killing.get(i, j).is_zero());
                }
            }
        }
    }

    #[test]
    fn matrix_round_trip() {
        let c = build_c3();
        let v: Vec<Rational> = (0..21).map(|i| Rational::integer(i as i64 - 7)).collect();
        let m = c.to_matrix(&v);
        assert_eq!(c.from_matrix(&m).unwrap(), v);
    }
}
