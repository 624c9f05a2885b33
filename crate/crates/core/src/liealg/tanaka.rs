use std::collections::{BTreeMap, HashMap};

use crate::exactmath::{add_mul, kernel_basis, solve_linear, Field, LinearSolver, Matrix};

use super::{GradedLieAlgebra, LieAlgebra, LieError, Subspace};

/// Tanaka prolongation of a fundamental graded nilpotent algebra.
#[derive(Clone, Debug)]
pub struct Prolongation<F: Field> {
    /// Basis of m first, then the nonnegative levels in order.
    pub algebra: GradedLieAlgebra<F>,
    /// Dimensions of the nonnegative levels.
    pub dims: BTreeMap<i32, usize>,
    m_dim: usize,
}

struct Level<F: Field> {
    indices: Vec<usize>,
    width: usize,
    solver: LinearSolver<F>,
}

struct Builder<'a, F: Field> {
    m: &'a LieAlgebra<F>,
    nm: usize,
    degrees: Vec<i32>,
    /// `values[g - nm][j]`: image of `m_j` under level element `g`.
    values: Vec<Vec<Vec<F>>>,
    levels: Vec<Level<F>>,
    memo: HashMap<(usize, usize), Vec<F>>,
}

fn padded<F: Field>(v: &[F], n: usize) -> Vec<F> {
    let mut out = v.to_vec();
    out.resize(n, F::zero());
    out
}

impl<'a, F: Field> Builder<'a, F> {
    fn new(m: &'a LieAlgebra<F>) -> Result<Self, LieError> {
        let nm = m.dim();
        if m.degrees().iter().any(|&d| d >= 0) {
            return Err(LieError::Invalid("negative degrees required".into()));
        }
        check_generated(m)?;
        Ok(Builder {
            m,
            nm,
            degrees: m.degrees().to_vec(),
            values: Vec::new(),
            levels: Vec::new(),
            memo: HashMap::new(),
        })
    }

    fn total(&self) -> usize {
        self.degrees.len()
    }

    fn br_basis(&mut self, i: usize, j: usize) -> Result<Vec<F>, LieError> {
        let n = self.total();
        let nm = self.nm;
        if i < nm && j < nm {
            let mut v = vec![F::zero(); n];
            for (k, c) in self.m.bracket_basis(i, j) {
                v[*k] = c.clone();
            }
            return Ok(v);
        }
        if i >= nm && j < nm {
            return Ok(padded(&self.values[i - nm][j], n));
        }
        if i < nm {
            return Ok(self.br_basis(j, i)?.iter().map(|x| x.neg()).collect());
        }
        if let Some(v) = self.memo.get(&(i, j)) {
            return Ok(padded(v, n));
        }
        let level = self.degrees[i] + self.degrees[j];
        let mut map = Vec::with_capacity(nm);
        for y in 0..nm {
            let by = self.br_basis(j, y)?;
            let ay = self.br_basis(i, y)?;
            let a_by = self.br_with(i, &by)?;
            let b_ay = self.br_with(j, &ay)?;
            map.push(a_by.iter().zip(&b_ay).map(|(a, b)| a.sub(b)).collect::<Vec<F>>());
        }
        let mut out = vec![F::zero(); n];
        if map.iter().all(|v| v.iter().all(|x| x.is_zero())) {
            self.memo.insert((i, j), out.clone());
            return Ok(out);
        }
        let lv = self
            .levels
            .get(level as usize)
            .ok_or_else(|| LieError::Invalid(format!("bracket lands in uncomputed degree {level}")))?;
        let flat: Vec<F> = map.iter().flat_map(|v| padded(v, lv.width)).collect();
        let coeffs = lv
            .solver
            .solve(&flat, |c| c.clone())
            .ok_or_else(|| LieError::Invalid("bracket of derivations is not a derivation".into()))?;
        for (c, &g) in coeffs.iter().zip(&lv.indices) {
            out[g] = c.clone();
        }
        self.memo.insert((i, j), out.clone());
        Ok(out)
    }

    fn br_with(&mut self, i: usize, w: &[F]) -> Result<Vec<F>, LieError> {
        let n = self.total();
        let mut out = vec![F::zero(); n];
        for (k, c) in w.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let b = self.br_basis(i, k)?;
            for (o, x) in out.iter_mut().zip(&b) {
                add_mul(o, c, x);
            }
        }
        Ok(out)
    }

    /// Degree-`d` derivations of m with values in the algebra built so far.
    fn solve_level(&mut self, d: i32) -> Result<Vec<Vec<Vec<F>>>, LieError> {
        let nm = self.nm;
        let n = self.total();
        let mut slots: Vec<Vec<usize>> = Vec::with_capacity(nm);
        let mut offsets = Vec::with_capacity(nm);
        let mut count = 0;
        for j in 0..nm {
            let target = self.degrees[j] + d;
            let s: Vec<usize> = (0..n).filter(|&t| self.degrees[t] == target).collect();
            offsets.push(count);
            count += s.len();
            slots.push(s);
        }
        if count == 0 {
            return Ok(Vec::new());
        }
        let mut rows: Vec<Vec<F>> = Vec::new();
        for i in 0..nm {
            for j in i + 1..nm {
                let mut block = vec![vec![F::zero(); count]; n];
                for (k, c) in self.m.bracket_basis(i, j) {
                    for (s, &t) in slots[*k].iter().enumerate() {
                        block[t][offsets[*k] + s] = block[t][offsets[*k] + s].add(c);
                    }
                }
                for (s, &t) in slots[i].clone().iter().enumerate() {
                    let b = self.br_basis(t, j)?;
                    for (r, x) in b.iter().enumerate() {
                        if !x.is_zero() {
                            block[r][offsets[i] + s] = block[r][offsets[i] + s].sub(x);
                        }
                    }
                }
                for (s, &t) in slots[j].clone().iter().enumerate() {
                    let b = self.br_basis(t, i)?;
                    for (r, x) in b.iter().enumerate() {
                        if !x.is_zero() {
                            block[r][offsets[j] + s] = block[r][offsets[j] + s].add(x);
                        }
                    }
                }
                rows.extend(block.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())));
            }
        }
        let ker = if rows.is_empty() {
            (0..count)
                .map(|k| {
                    let mut v = vec![F::zero(); count];
                    v[k] = F::one();
                    v
                })
                .collect()
        } else {
            kernel_basis(&Matrix::from_rows(rows, count)?)
        };
        Ok(ker
            .iter()
            .map(|u| {
                (0..nm)
                    .map(|j| {
                        let mut v = vec![F::zero(); n];
                        for (s, &t) in slots[j].iter().enumerate() {
                            v[t] = u[offsets[j] + s].clone();
                        }
                        v
                    })
                    .collect()
            })
            .collect())
    }

    fn push_level(&mut self, d: i32, elems: Vec<Vec<Vec<F>>>) -> Result<(), LieError> {
        let width = self.total();
        let start = width;
        let cols: Vec<Vec<F>> = elems
            .iter()
            .map(|e| e.iter().flat_map(|v| padded(v, width)).collect())
            .collect();
        let solver = if cols.is_empty() {
            LinearSolver::new(&Matrix::zeros(self.nm * width, 0))
        } else {
            LinearSolver::new(&Matrix::from_cols(&cols, self.nm * width)?)
        };
        if solver.rank() != cols.len() {
            return Err(LieError::Invalid(format!("degree {d} elements are dependent")));
        }
        let k = elems.len();
        for e in elems {
            self.values.push(e);
            self.degrees.push(d);
        }
        self.levels.push(Level {
            indices: (start..start + k).collect(),
            width,
            solver,
        });
        Ok(())
    }

    fn check_derivation(&mut self, elem: &[Vec<F>]) -> Result<bool, LieError> {
        let nm = self.nm;
        let n = self.total();
        for i in 0..nm {
            for j in i + 1..nm {
                let mut lhs = vec![F::zero(); n];
                for (k, c) in self.m.bracket_basis(i, j) {
                    for (o, x) in lhs.iter_mut().zip(padded(&elem[*k], n)) {
                        add_mul(o, c, &x);
                    }
                }
                let di = padded(&elem[i], n);
                let dj = padded(&elem[j], n);
                let a = self.m_bracket_into(&di, j)?;
                let b = self.m_bracket_into(&dj, i)?;
                if lhs.iter().zip(&a).zip(&b).any(|((l, a), b)| !l.sub(a).add(b).is_zero()) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `[w, m_j]` for `w` in the algebra built so far.
    fn m_bracket_into(&mut self, w: &[F], j: usize) -> Result<Vec<F>, LieError> {
        let n = self.total();
        let mut out = vec![F::zero(); n];
        for (k, c) in w.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let b = self.br_basis(k, j)?;
            for (o, x) in out.iter_mut().zip(&b) {
                add_mul(o, c, x);
            }
        }
        Ok(out)
    }
}

fn check_generated<F: Field>(m: &LieAlgebra<F>) -> Result<(), LieError> {
    let n = m.dim();
    let gens: Vec<Vec<F>> = m.indices_of_degree(-1).iter().map(|&i| m.basis_vector(i)).collect();
    let mut span = Subspace::span(n, &gens);
    let mut frontier = gens.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &gens {
            for b in &frontier {
                let c = m.bracket(a, b);
                if span.insert(&c) {
                    next.push(c);
                }
            }
        }
        frontier = next;
    }
    if span.dim() == n {
        Ok(())
    } else {
        Err(LieError::NotGenerated)
    }
}

fn level_dims<F: Field>(
    b: &mut Builder<'_, F>,
    degree_zero: Option<&[Matrix<F>]>,
    max_degree: i32,
) -> Result<(BTreeMap<i32, usize>, bool), LieError> {
    let mut dims = BTreeMap::new();
    for d in 0..=max_degree {
        let elems = match (d, degree_zero) {
            (0, Some(maps)) => {
                let elems: Vec<Vec<Vec<F>>> = maps
                    .iter()
                    .map(|mat| (0..b.nm).map(|j| padded(&mat.col(j), b.total())).collect())
                    .collect();
                for e in &elems {
                    if !b.check_derivation(e)? {
                        return Err(LieError::Invalid("degree-zero map is not a derivation".into()));
                    }
                }
                elems
            }
            _ => b.solve_level(d)?,
        };
        let k = elems.len();
        dims.insert(d, k);
        b.push_level(d, elems)?;
        if k == 0 {
            return Ok((dims, true));
        }
    }
    Ok((dims, false))
}

/// Full prolongation of `m`; fails if it does not terminate by `max_degree`.
pub fn tanaka_prolongation<F: Field>(
    m: &GradedLieAlgebra<F>,
    max_degree: i32,
) -> Result<Prolongation<F>, LieError> {
    let mut b = Builder::new(m)?;
    let (dims, complete) = level_dims(&mut b, None, max_degree)?;
    if !complete {
        return Err(LieError::Invalid(format!("prolongation nonzero in degree {max_degree}")));
    }
    let n = b.total();
    let mut brackets = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let v = b.br_basis(i, j)?;
            let terms: Vec<(usize, F)> =
                v.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
            if !terms.is_empty() {
                brackets.push((i, j, terms));
            }
        }
    }
    let mut labels: Vec<String> = m.labels().to_vec();
    let mut counter: BTreeMap<i32, usize> = BTreeMap::new();
    for &d in &b.degrees[b.nm..] {
        let c = counter.entry(d).or_insert(0);
        labels.push(format!("D{d}_{c}"));
        *c += 1;
    }
    let alg = LieAlgebra::new(labels, b.degrees.clone(), brackets)?;
    Ok(Prolongation {
        algebra: GradedLieAlgebra::new(alg)?,
        dims,
        m_dim: b.nm,
    })
}

/// Dimensions of the positive levels of the prolongation of (m, k₀), where
/// `degree_zero` lists derivations of m as matrices on its basis. Returns
/// the dimensions for degrees `1..=max_degree`; levels past the first zero are 0.
pub fn positive_prolongation_dims<F: Field>(
    m: &GradedLieAlgebra<F>,
    degree_zero: &[Matrix<F>],
    max_degree: i32,
) -> Result<Vec<usize>, LieError> {
    let mut b = Builder::new(m)?;
    let (dims, _) = level_dims(&mut b, Some(degree_zero), max_degree)?;
    let mut out: Vec<usize> = dims.into_iter().filter(|(d, _)| *d > 0).map(|(_, k)| k).collect();
    out.resize(max_degree.max(0) as usize, 0);
    Ok(out)
}

impl<F: Field> Prolongation<F> {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Embeds the prolongation into `g`, sending basis vector `j` of m to
    /// `g[neg[j]]` and each nonnegative element to the unique element of `g`
    /// with the same bracket action on m. Returns the matrix whose columns
    /// are the images, after checking it is a bijective homomorphism.
    pub fn isomorphism_to(&self, g: &LieAlgebra<F>, neg: &[usize]) -> Result<Matrix<F>, LieError> {
        let n = self.dim();
        let ng = g.dim();
        if neg.len() != self.m_dim {
            return Err(LieError::Invalid("negative part size".into()));
        }
        let mut images: Vec<Vec<F>> = Vec::with_capacity(n);
        for &k in neg {
            images.push(g.basis_vector(k));
        }
        for a in self.m_dim..n {
            let d = self.algebra.degree(a);
            let cand = g.indices_of_degree(d);
            let mut rows = Vec::new();
            for &k in neg {
                let ek = g.basis_vector(k);
                let block: Vec<Vec<F>> =
                    cand.iter().map(|&c| g.bracket(&g.basis_vector(c), &ek)).collect();
                for r in 0..ng {
                    rows.push(block.iter().map(|b| b[r].clone()).collect::<Vec<F>>());
                }
            }
            let system = Matrix::from_rows(rows, cand.len())?;
            let mut rhs = Vec::with_capacity(neg.len() * ng);
            for j in 0..self.m_dim {
                let v = self.algebra.bracket_basis(a, j);
                let mut img = vec![F::zero(); ng];
                for (k, c) in v {
                    for (o, x) in img.iter_mut().zip(&images[*k]) {
                        add_mul(o, c, x);
                    }
                }
                rhs.extend(img);
            }
            let sol = solve_linear(&system, &rhs)
                .ok_or_else(|| LieError::Invalid(format!("no element realizes {}", self.algebra.label(a))))?;
            if !sol.kernel.is_empty() {
                return Err(LieError::Invalid("negative part has a centralizer".into()));
            }
            let mut z = vec![F::zero(); ng];
            for (c, &i) in sol.particular.into_iter().zip(&cand) {
                z[i] = c;
            }
            images.push(z);
        }
        for i in 0..n {
            for j in i + 1..n {
                let mut lhs = vec![F::zero(); ng];
                for (k, c) in self.algebra.bracket_basis(i, j) {
                    for (o, x) in lhs.iter_mut().zip(&images[*k]) {
                        add_mul(o, c, x);
                    }
                }
                if lhs != g.bracket(&images[i], &images[j]) {
                    return Err(LieError::Invalid(format!(
                        "not a homomorphism on ({}, {})",
                        self.algebra.label(i),
                        self.algebra.label(j)
                    )));
                }
            }
        }
        let m = Matrix::from_cols(&images, ng)?;
        if n != ng || crate::exactmath::rank(&m) != n {
            return Err(LieError::Invalid("not bijective".into()));
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::Rational;
    use crate::liealg::{build_c3, heisenberg};

    #[test]
    fn heisenberg_degree_zero_is_four_dimensional() {
        let h = heisenberg::<Rational>();
        let mut b = Builder::new(&h).unwrap();
        let l0 = b.solve_level(0).unwrap();
        assert_eq!(l0.len(), 4);
    }

    #[test]
    fn c3_symbol_prolongs_to_sp6() {
        let c = build_c3();
        let m = c.negative_part();
        let p = tanaka_prolongation(&m, 6).unwrap();
        let dims: Vec<usize> = p.dims.values().copied().collect();
        assert_eq!(dims, vec![5, 3, 2, 3, 0]);
        assert!(p.algebra.check_jacobi());
        let iso = p.isomorphism_to(&c.g, &c.negative_indices()).unwrap();
        assert_eq!(iso.cols(), 21);
    }

    #[test]
    fn full_degree_zero_gives_full_positive_part() {
        let c = build_c3();
        let m = c.negative_part();
        let maps: Vec<Matrix<Rational>> = c
            .indices_of_degree(0)
            .iter()
            .map(|&i| c.restrict_to_negative(&c.g.basis_vector(i)).unwrap())
            .collect();
        assert_eq!(positive_prolongation_dims(&m, &maps, 4).unwrap(), vec![3, 2, 3, 0]);
    }

    #[test]
    fn centre_of_levi_prolongs_by_one_long_root() {
        let c = build_c3();
        let m = c.negative_part();
        let maps = vec![
            c.restrict_to_negative(&c.grading.e).unwrap(),
            c.restrict_to_negative(&c.grading.e_prime).unwrap(),
        ];
        assert_eq!(positive_prolongation_dims(&m, &maps, 3).unwrap(), vec![1, 0, 0]);
    }
}
