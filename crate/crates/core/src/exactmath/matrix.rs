use std::fmt;

use super::{add_mul, Field, MathError, Rational};

/// Dense row-major matrix over an exact field.
#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

/// Execution strategy for row elimination.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    Parallel,
}

impl Default for Strategy {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Strategy::Parallel
        } else {
            Strategy::Sequential
        }
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>, cols: usize) -> Result<Self, MathError> {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            if row.len() != cols {
                return Err(MathError::Dimension(format!(
                    "row of length {} in a {cols}-column matrix",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Matrix { rows: r, cols, data })
    }

    pub fn from_cols(cols: &[Vec<F>], rows: usize) -> Result<Self, MathError> {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != rows {
                return Err(MathError::Dimension("column length".into()));
            }
            for (i, x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: F) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, o: &Self) -> Result<Self, MathError> {
        if self.cols != o.rows {
            return Err(MathError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] = out.data[idx].add(&a.mul(b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension");
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    add_mul(&mut acc, a, b);
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<G: Field>(
        &self,
        f: impl Fn(&F) -> Result<G, MathError>,
    ) -> Result<Matrix<G>, MathError> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_, _>>()?,
        })
    }

    pub fn hstack(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows);
        Self::from_fn(self.rows, self.cols + o.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                o.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&o.data);
        Matrix {
            rows: self.rows + o.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn inverse(&self) -> Result<Self, MathError> {
        if self.rows != self.cols {
            return Err(MathError::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let e = Echelon::new(&self.hstack(&Self::identity(n)), Strategy::default());
        if e.pivots.len() < n || e.pivots[n - 1] != n - 1 {
            return Err(MathError::DivisionByZero);
        }
        Ok(Self::from_fn(n, n, |i, j| e.rref.get(i, n + j).clone()))
    }
}

impl Matrix<Rational> {
    pub fn lift<G: Field>(&self) -> Matrix<G> {
        self.map(|q| G::from_rational(q))
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

fn eliminate_row<F: Field>(row: &mut [F], prow: &[F], nz: &[usize], c: usize) {
    let f = row[c].clone();
    if f.is_zero() {
        return;
    }
    for &j in nz {
        row[j] = row[j].sub(&f.mul(&prow[j]));
    }
}

/// Reduced row echelon form with pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    pub rref: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Echelon<F> {
    pub fn new(m: &Matrix<F>, strategy: Strategy) -> Self {
        let cols = m.cols;
        let mut rows: Vec<Vec<F>> = m.to_rows();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows.len() {
                break;
            }
            // cheapest nonzero pivot keeps rational-function growth down
            let mut best: Option<(usize, usize)> = None;
            for (i, row) in rows.iter().enumerate().skip(r) {
                if !row[c].is_zero() {
                    let cost = row[c].cost();
                    if best.map_or(true, |(_, bc)| cost < bc) {
                        best = Some((i, cost));
                    }
                }
            }
            let Some((p, _)) = best else { continue };
            rows.swap(r, p);
            let inv = rows[r][c].inv().expect("nonzero pivot");
            if !inv.is_one() {
                for x in rows[r].iter_mut() {
                    if !x.is_zero() {
                        *x = x.mul(&inv);
                    }
                }
            }
            let prow = rows[r].clone();
            let nz: Vec<usize> = (0..cols).filter(|&j| !prow[j].is_zero()).collect();
            let (before, rest) = rows.split_at_mut(r);
            let after = &mut rest[1..];
            match strategy {
                Strategy::Sequential => {
                    for row in before.iter_mut().chain(after.iter_mut()) {
                        eliminate_row(row, &prow, &nz, c);
                    }
                }
                Strategy::Parallel => par_eliminate(before, after, &prow, &nz, c),
            }
            pivots.push(c);
            r += 1;
        }
        let rref = Matrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        };
        Echelon { rref, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn kernel(&self) -> Vec<Vec<F>> {
        let cols = self.rref.cols;
        let mut is_pivot = vec![false; cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::new();
        for f in (0..cols).filter(|&j| !is_pivot[j]) {
            let mut v = vec![F::zero(); cols];
            v[f] = F::one();
            for (k, &p) in self.pivots.iter().enumerate() {
                let x = self.rref.get(k, f);
                if !x.is_zero() {
                    v[p] = x.neg();
                }
            }
            out.push(v);
        }
        out
    }
}

#[cfg(feature = "parallel")]
fn par_eliminate<F: Field>(
    before: &mut [Vec<F>],
    after: &mut [Vec<F>],
    prow: &[F],
    nz: &[usize],
    c: usize,
) {
    use rayon::prelude::*;
    before
        .par_iter_mut()
        .chain(after.par_iter_mut())
        .for_each(|row| eliminate_row(row, prow, nz, c));
}

#[cfg(not(feature = "parallel"))]
fn par_eliminate<F: Field>(
    before: &mut [Vec<F>],
    after: &mut [Vec<F>],
    prow: &[F],
    nz: &[usize],
    c: usize,
) {
    for row in before.iter_mut().chain(after.iter_mut()) {
        eliminate_row(row, prow, nz, c);
    }
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    Echelon::new(m, Strategy::default()).rank()
}

/// Basis of the right null space.
pub fn kernel_basis<F: Field>(m: &Matrix<F>) -> Vec<Vec<F>> {
    Echelon::new(m, Strategy::default()).kernel()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution<F> {
    pub particular: Vec<F>,
    pub kernel: Vec<Vec<F>>,
}

/// Solves `m·x = b`; `None` when inconsistent.
pub fn solve_linear<F: Field>(m: &Matrix<F>, b: &[F]) -> Option<Solution<F>> {
    assert_eq!(b.len(), m.rows, "right-hand side length");
    let aug = m.hstack(&Matrix::from_cols(&[b.to_vec()], m.rows).expect("column"));
    let e = Echelon::new(&aug, Strategy::default());
    if e.pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![F::zero(); m.cols];
    for (k, &p) in e.pivots.iter().enumerate() {
        x[p] = e.rref.get(k, m.cols).clone();
    }
    let ker = Echelon {
        rref: Matrix::from_fn(e.rref.rows, m.cols, |i, j| e.rref.get(i, j).clone()),
        pivots: e.pivots.clone(),
    }
    .kernel();
    Some(Solution {
        particular: x,
        kernel: ker,
    })
}

/// Precomputed left transform for repeated solves against one matrix.
#[derive(Clone, Debug)]
pub struct LinearSolver<F: Field> {
    transform: Matrix<F>,
    pivots: Vec<usize>,
    cols: usize,
}

impl<F: Field> LinearSolver<F> {
    pub fn new(m: &Matrix<F>) -> Self {
        let n = m.rows;
        let e = Echelon::new(&m.hstack(&Matrix::identity(n)), Strategy::default());
        let pivots: Vec<usize> = e.pivots.iter().copied().filter(|&p| p < m.cols).collect();
        let transform = Matrix::from_fn(n, n, |i, j| e.rref.get(i, m.cols + j).clone());
        LinearSolver {
            transform,
            pivots,
            cols: m.cols,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Particular solution with free variables zero; `None` if inconsistent.
    pub fn solve<G: Field>(&self, b: &[G], lift: impl Fn(&F) -> G) -> Option<Vec<G>> {
        let n = self.transform.rows;
        let mut y = vec![G::zero(); n];
        for i in 0..n {
            let mut acc = G::zero();
            for (a, bj) in self.transform.row(i).iter().zip(b) {
                if !a.is_zero() && !bj.is_zero() {
                    acc = acc.add(&lift(a).mul(bj));
                }
            }
            y[i] = acc;
        }
        if y[self.pivots.len()..].iter().any(|v| !v.is_zero()) {
            return None;
        }
        let mut x = vec![G::zero(); self.cols];
        for (k, &p) in self.pivots.iter().enumerate() {
            x[p] = y[k].clone();
        }
        Some(x)
    }
}

/// Row-echelon basis built one vector at a time.
#[derive(Clone, Debug)]
pub struct IncrementalEchelon<F> {
    width: usize,
    rows: Vec<(usize, Vec<F>)>,
}

impl<F: Field> IncrementalEchelon<F> {
    pub fn new(width: usize) -> Self {
        IncrementalEchelon {
            width,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            let f = v[*p].clone();
            if f.is_zero() {
                continue;
            }
            for (j, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    v[j] = v[j].sub(&f.mul(x));
                }
            }
        }
        v
    }

    /// Inserts `v`; returns whether it enlarged the span.
    pub fn insert(&mut self, v: &[F]) -> bool {
        assert_eq!(v.len(), self.width);
        if self.rows.len() == self.width {
            return false;
        }
        let v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inv().expect("nonzero");
        let v: Vec<F> = v.iter().map(|x| if x.is_zero() { F::zero() } else { x.mul(&inv) }).collect();
        self.rows.push((p, v));
        true
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    pub fn basis(&self) -> Vec<Vec<F>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }
}
