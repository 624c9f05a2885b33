//! Homogeneous models given by structure equations dθᵏ = Σ aᵏᵢⱼ θⁱ∧θʲ,
//! checked independently of the deformation side.

use serde::{Deserialize, Serialize};

use crate::cartan::{classify_quintic, CartanContext};
use crate::exactmath::{parse_ratfunc, solve_linear, var_index, Field, LinearSolver, Matrix, RatFunc, Rational};
use crate::liealg::{coordinates, C3Algebra, FilteredLieAlgebra, GradedSubalgebra, LieAlgebra, Subspace, IDX_E, IDX_EP, IDX_H, IDX_X, IDX_Y};

use super::catalog::render_word;
use super::PipelineError;

const MODELS: &str = include_str!("../../data/models.json");

/// Number of θ's not annihilating the fibre (k/l has this dimension).
const BASE: usize = 8;
/// θ's whose common kernel is the distribution.
const DIST: usize = 5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParam {
    pub name: String,
    /// Discrete values to run separately; symbolic when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelExpected {
    pub symmetry_dimension: usize,
    pub quintic: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelTable {
    pub label: String,
    pub dim: usize,
    pub params: Vec<ModelParam>,
    /// `[k, i, j, a]`: dθᵏ contains a·θⁱ∧θʲ (1-based).
    pub equations: Vec<(usize, usize, usize, String)>,
    pub expected: ModelExpected,
}

/// Outcome for one instance of a table (discrete parameters fixed).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelRecord {
    pub label: String,
    pub instance: String,
    pub jacobi: bool,
    pub isotropy_subalgebra: bool,
    pub symbol_isomorphic: bool,
    /// Words of the image of the isotropy in g₀.
    pub isotropy: Vec<String>,
    pub symmetry_dimension: Option<usize>,
    pub quintic_type: Option<String>,
    pub scalar_zero: Option<bool>,
    pub failures: Vec<String>,
}

impl ModelRecord {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn load_models() -> Result<Vec<ModelTable>, PipelineError> {
    let ts: Vec<ModelTable> = serde_json::from_str(MODELS)?;
    for t in &ts {
        if t.dim <= BASE || t.dim > 32 {
            return Err(PipelineError::Model(format!("{}: dimension {}", t.label, t.dim)));
        }
        for (k, i, j, _) in &t.equations {
            if [k, i, j].iter().any(|&&x| x == 0 || x > t.dim) || i == j {
                return Err(PipelineError::Model(format!("{}: bad entry ({k}, {i}, {j})", t.label)));
            }
        }
    }
    Ok(ts)
}

impl ModelTable {
    /// All assignments of the discrete parameters.
    pub fn instances(&self) -> Result<Vec<Vec<(String, Rational)>>, PipelineError> {
        let mut out: Vec<Vec<(String, Rational)>> = vec![Vec::new()];
        for p in &self.params {
            let Some(vals) = &p.values else { continue };
            let mut next = Vec::new();
            for inst in &out {
                for v in vals {
                    let mut i = inst.clone();
                    i.push((p.name.clone(), v.parse()?));
                    next.push(i);
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// k with [e_i, e_j] = −Σ_k aᵏᵢⱼ e_k, dual to dθ(X, Y) = −θ([X, Y]).
    pub fn algebra(&self, fixed: &[(String, Rational)]) -> Result<LieAlgebra<RatFunc>, PipelineError> {
        let assign: Vec<(usize, Rational)> =
            fixed.iter().map(|(n, q)| Ok((var_index(n)?, q.clone()))).collect::<Result<_, PipelineError>>()?;
        let declared: Vec<usize> = self.params.iter().map(|p| var_index(&p.name)).collect::<Result<_, _>>()?;
        let mut br: std::collections::BTreeMap<(usize, usize), Vec<(usize, RatFunc)>> = Default::default();
        for (k, i, j, a) in &self.equations {
            let c = parse_ratfunc(a)?;
            if c.variables().iter().any(|v| !declared.contains(v)) {
                return Err(PipelineError::Model(format!("{}: undeclared parameter in {a}", self.label)));
            }
            let c = c.specialize_partial(&assign)?;
            let (a, b, c) = if i < j { (i - 1, j - 1, c.neg()) } else { (j - 1, i - 1, c) };
            br.entry((a, b)).or_default().push((k - 1, c));
        }
        let labels = (1..=self.dim).map(|i| format!("e{i}")).collect();
        Ok(LieAlgebra::new(labels, vec![0; self.dim], br.into_iter().map(|((i, j), t)| (i, j, t)))?)
    }
}

fn unit(n: usize, i: usize) -> Vec<RatFunc> {
    (0..n).map(|j| if i == j { RatFunc::one() } else { RatFunc::zero() }).collect()
}

/// A filtration level K_d = R_d ⊕ K_{d+1} with chosen representatives.
struct Level {
    reps: Vec<Vec<RatFunc>>,
    frame: Vec<Vec<RatFunc>>,
}

impl Level {
    fn new(lower: &Subspace<RatFunc>, upper: &Subspace<RatFunc>) -> Level {
        let mut s = lower.clone();
        let mut reps = Vec::new();
        for v in upper.basis() {
            if s.insert(&v) {
                reps.push(v);
            }
        }
        let mut frame = reps.clone();
        frame.extend(lower.basis());
        Level { reps, frame }
    }

    /// Class of `v ∈ K_d` in K_d / K_{d+1}.
    fn quot(&self, v: &[RatFunc]) -> Option<Vec<RatFunc>> {
        coordinates(&self.frame, v).map(|c| c[..self.reps.len()].to_vec())
    }

    fn lift(&self, c: &[RatFunc]) -> Vec<RatFunc> {
        let n = self.reps.first().map_or(0, |r| r.len());
        let mut v = vec![RatFunc::zero(); n];
        for (x, r) in c.iter().zip(&self.reps) {
            for (o, y) in v.iter_mut().zip(r) {
                *o = o.add(&x.mul(y));
            }
        }
        v
    }
}

/// Negative part of a graded algebra of type (3, 2, 3) through its two
/// brackets in quotient coordinates.
struct Symbol {
    b11: Box<dyn Fn(&[RatFunc], &[RatFunc]) -> Vec<RatFunc>>,
    b12: Box<dyn Fn(&[RatFunc], &[RatFunc]) -> Vec<RatFunc>>,
}

/// Adapted bases (v₁, v₂, u), ([u, v₁], [u, v₂]), ([[u,vᵢ],vⱼ]) with
/// [v₁, v₂] = 0 and [[u, vᵢ], u] = 0, as column matrices per degree.
fn adapted_frame(s: &Symbol) -> Option<[Matrix<RatFunc>; 3]> {
    let e: Vec<Vec<RatFunc>> = (0..3).map(|i| unit(3, i)).collect();
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let cols: Vec<Vec<RatFunc>> = pairs.iter().map(|&(a, b)| (s.b11)(&e[a], &e[b])).collect();
    let ker = crate::exactmath::kernel_basis(&Matrix::from_cols(&cols, 2).ok()?);
    let [w] = ker.as_slice() else { return None };
    let plane = crate::exactmath::kernel_basis(&Matrix::from_rows(vec![vec![w[2].clone(), w[1].neg(), w[0].clone()]], 3).ok()?);
    let [v1, v2] = plane.as_slice() else { return None };
    let span = Subspace::span(3, &[v1.clone(), v2.clone()]);
    let w0 = e.iter().find(|x| !span.contains(x))?.clone();
    let y: Vec<Vec<RatFunc>> = [v1, v2].iter().map(|v| (s.b11)(&w0, v)).collect();
    // [[u, vᵢ], u] = −[u, yᵢ] = 0 with u = w0 + a v1 + b v2
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for yi in &y {
        let c0 = (s.b12)(&w0, yi);
        let c1 = (s.b12)(v1, yi);
        let c2 = (s.b12)(v2, yi);
        for r in 0..3 {
            rows.push(vec![c1[r].clone(), c2[r].clone()]);
            rhs.push(c0[r].neg());
        }
    }
    let sol = solve_linear(&Matrix::from_rows(rows, 2).ok()?, &rhs)?.particular;
    let u: Vec<RatFunc> = (0..3).map(|i| w0[i].add(&sol[0].mul(&v1[i])).add(&sol[1].mul(&v2[i]))).collect();
    let y: Vec<Vec<RatFunc>> = [v1, v2].iter().map(|v| (s.b11)(&u, v)).collect();
    let neg = |v: Vec<RatFunc>| v.into_iter().map(|x| x.neg()).collect::<Vec<_>>();
    let s3 = vec![neg((s.b12)(v1, &y[0])), neg((s.b12)(v2, &y[0])), neg((s.b12)(v2, &y[1]))];
    let m1 = Matrix::from_cols(&[v1.clone(), v2.clone(), u], 3).ok()?;
    let m2 = Matrix::from_cols(&y, 2).ok()?;
    let m3 = Matrix::from_cols(&s3, 3).ok()?;
    if m2.inverse().is_err() || m3.inverse().is_err() {
        return None;
    }
    Some([m1, m2, m3])
}

fn g_symbol(c3: &C3Algebra) -> (Symbol, [Vec<usize>; 3]) {
    let idx = [c3.indices_of_degree(-1), c3.indices_of_degree(-2), c3.indices_of_degree(-3)];
    let g: LieAlgebra<RatFunc> = c3.g.lift();
    let n = g.dim();
    let embed = move |ix: &[usize], c: &[RatFunc]| {
        let mut v = vec![RatFunc::zero(); n];
        for (x, &i) in c.iter().zip(ix) {
            v[i] = x.clone();
        }
        v
    };
    let graded = move |a: usize, b: usize, c: usize| {
        let (g, ia, ib, ic) = (g.clone(), idx[a].clone(), idx[b].clone(), idx[c].clone());
        Box::new(move |x: &[RatFunc], y: &[RatFunc]| {
            let z = g.bracket(&embed(&ia, x), &embed(&ib, y));
            ic.iter().map(|&i| z[i].clone()).collect::<Vec<_>>()
        }) as Box<dyn Fn(&[RatFunc], &[RatFunc]) -> Vec<RatFunc>>
    };
    let sym = Symbol { b11: graded(0, 0, 1), b12: graded(0, 1, 2) };
    (sym, [c3.indices_of_degree(-1), c3.indices_of_degree(-2), c3.indices_of_degree(-3)])
}

/// Structure checks and the invariant computation for one instance.
pub fn verify_model(
    table: &ModelTable,
    fixed: &[(String, Rational)],
    c3: &C3Algebra,
    ctx: &CartanContext<RatFunc>,
) -> ModelRecord {
    let instance = fixed.iter().map(|(n, q)| format!("{n}={q}")).collect::<Vec<_>>().join(", ");
    let mut rec = ModelRecord {
        label: table.label.clone(),
        instance,
        jacobi: false,
        isotropy_subalgebra: false,
        symbol_isomorphic: false,
        isotropy: Vec::new(),
        symmetry_dimension: None,
        quintic_type: None,
        scalar_zero: None,
        failures: Vec::new(),
    };
    if let Err(e) = model_steps(table, fixed, c3, ctx, &mut rec) {
        rec.failures.push(e.to_string());
    }
    if let Some(d) = rec.symmetry_dimension {
        if d != table.expected.symmetry_dimension {
            rec.failures.push(format!("symmetry dimension {d}, expected {}", table.expected.symmetry_dimension));
        }
    }
    if rec.quintic_type.is_some() && rec.quintic_type.as_deref() != Some(table.expected.quintic.as_str()) {
        rec.failures.push(format!(
            "quintic type {}, expected {}",
            rec.quintic_type.as_deref().unwrap_or("-"),
            table.expected.quintic
        ));
    }
    rec
}

fn model_steps(
    table: &ModelTable,
    fixed: &[(String, Rational)],
    c3: &C3Algebra,
    ctx: &CartanContext<RatFunc>,
    rec: &mut ModelRecord,
) -> Result<(), PipelineError> {
    let fail = |m: &str| PipelineError::Model(m.to_string());
    let k = table.algebra(fixed)?;
    let n = k.dim();
    rec.jacobi = k.check_jacobi();
    if !rec.jacobi {
        return Err(fail("Jacobi identity fails"));
    }
    let span = |r: std::ops::Range<usize>| Subspace::span(n, &r.map(|i| unit(n, i)).collect::<Vec<_>>());
    let l = span(BASE..n);
    let dist = span(DIST..n);
    let lb = l.basis();
    rec.isotropy_subalgebra = lb.iter().all(|a| lb.iter().all(|b| l.contains(&k.bracket(a, b))));
    if !rec.isotropy_subalgebra {
        return Err(fail("isotropy is not a subalgebra"));
    }
    let db = dist.basis();
    if !lb.iter().all(|a| db.iter().all(|b| dist.contains(&k.bracket(a, b)))) {
        return Err(fail("isotropy does not preserve the distribution"));
    }
    let mut k2 = dist.clone();
    for a in &db {
        for b in &db {
            k2.insert(&k.bracket(a, b));
        }
    }
    let mut k3 = k2.clone();
    for a in &db {
        for b in k2.basis() {
            k3.insert(&k.bracket(a, &b));
        }
    }
    let r = n - BASE;
    if (dist.dim(), k2.dim(), k3.dim()) != (3 + r, 5 + r, n) {
        return Err(fail("weak derived flag does not have growth (3, 5, 8)"));
    }
    let levels = [Level::new(&l, &dist), Level::new(&dist, &k2), Level::new(&k2, &k3)];
    let lv = std::rc::Rc::new(levels);
    let (ka, kb, la, lb2) = (k.clone(), k.clone(), lv.clone(), lv.clone());
    let m = Symbol {
        b11: Box::new(move |x, y| la[1].quot(&ka.bracket(&la[0].lift(x), &la[0].lift(y))).expect("in K₋₂")),
        b12: Box::new(move |x, y| lb2[2].quot(&kb.bracket(&lb2[0].lift(x), &lb2[1].lift(y))).expect("in K₋₃")),
    };
    let (gs, gidx) = g_symbol(c3);
    let fm = adapted_frame(&m).ok_or_else(|| fail("symbol has no adapted frame"))?;
    let fg = adapted_frame(&gs).ok_or_else(|| PipelineError::Inconsistent("g₋ has no adapted frame".into()))?;
    let a: Vec<Matrix<RatFunc>> = (0..3)
        .map(|d| fg[d].mul(&fm[d].inverse()?))
        .collect::<Result<_, _>>()?;
    // certificate: φ commutes with both brackets
    let e = |dim: usize| (0..dim).map(|i| unit(dim, i)).collect::<Vec<_>>();
    let mut iso = true;
    for x in e(3) {
        for y in e(3) {
            iso &= a[1].mul_vec(&(m.b11)(&x, &y)) == (gs.b11)(&a[0].mul_vec(&x), &a[0].mul_vec(&y));
        }
        for y in e(2) {
            iso &= a[2].mul_vec(&(m.b12)(&x, &y)) == (gs.b12)(&a[0].mul_vec(&x), &a[1].mul_vec(&y));
        }
    }
    rec.symbol_isomorphic = iso;
    if !iso {
        return Err(fail("symbol is not isomorphic to g₋"));
    }
    let ainv: Vec<Matrix<RatFunc>> = a.iter().map(|x| x.inverse()).collect::<Result<_, _>>()?;
    // lifts of the g₋ basis, in g's order
    let dg = c3.dim();
    let mut lifts: Vec<(usize, Vec<RatFunc>)> = Vec::new();
    for (d, ix) in gidx.iter().enumerate() {
        for (p, &gi) in ix.iter().enumerate() {
            lifts.push((gi, lv[d].lift(&ainv[d].col(p))));
        }
    }
    lifts.sort_by_key(|(gi, _)| *gi);
    // ι on the isotropy: the derivation it induces on gr, read in g₀
    let g: LieAlgebra<RatFunc> = c3.g.lift();
    let g0 = c3.indices_of_degree(0);
    let gneg: Vec<usize> = gidx.iter().flatten().copied().collect();
    let mut sys_cols = Vec::new();
    for &z in &g0 {
        let mut col = Vec::new();
        for &j in &gneg {
            col.extend(g.bracket(&g.basis_vector(z), &g.basis_vector(j)));
        }
        sys_cols.push(col);
    }
    let sys = Matrix::from_cols(&sys_cols, gneg.len() * dg)?;
    let solver = LinearSolver::new(&sys);
    let mut iota: Vec<Vec<RatFunc>> = Vec::new();
    for y in &lb {
        let mut rhs = Vec::new();
        for &j in &gneg {
            let d = gidx.iter().position(|ix| ix.contains(&j)).expect("negative");
            let lift = &lifts.iter().find(|(gi, _)| *gi == j).expect("lifted").1;
            let q = lv[d].quot(&k.bracket(y, lift)).ok_or_else(|| fail("isotropy does not preserve the filtration"))?;
            let img = a[d].mul_vec(&q);
            let mut v = vec![RatFunc::zero(); dg];
            for (x, &gi) in img.iter().zip(&gidx[d]) {
                v[gi] = x.clone();
            }
            rhs.extend(v);
        }
        let c = solver
            .solve(&rhs, |x| x.clone())
            .ok_or_else(|| fail("isotropy does not act through g₀"))?;
        let mut v = vec![RatFunc::zero(); dg];
        for (x, &z) in c.iter().zip(&g0) {
            v[z] = x.clone();
        }
        iota.push(v);
    }
    // weight-adapted basis of ι(l)
    let img = Subspace::span(dg, &iota);
    if img.dim() != r {
        return Err(fail("isotropy acts non-faithfully on the symbol"));
    }
    let piece = |ix: &[usize]| img.intersect(&Subspace::span(dg, &ix.iter().map(|&i| unit(dg, i)).collect::<Vec<_>>()));
    let pieces = [piece(&[IDX_H, IDX_E, IDX_EP]), piece(&[IDX_X]), piece(&[IDX_Y])];
    let adapted: Vec<Vec<RatFunc>> = pieces.iter().flat_map(|p| p.basis()).collect();
    if adapted.len() != r {
        return Err(fail("isotropy image is not spanned by weight vectors"));
    }
    rec.isotropy = adapted.iter().map(|v| render_word(v)).collect();
    let mut basis: Vec<Vec<RatFunc>> = lifts.into_iter().map(|(_, v)| v).collect();
    for v in &adapted {
        let c = coordinates(&iota, v).ok_or_else(|| PipelineError::Inconsistent("isotropy preimage".into()))?;
        let mut y = vec![RatFunc::zero(); n];
        for (x, b) in c.iter().zip(&lb) {
            for (o, z) in y.iter_mut().zip(b) {
                *o = o.add(&x.mul(z));
            }
        }
        basis.push(y);
    }
    let bm = Matrix::from_cols(&basis, n)?;
    let bsolve = LinearSolver::new(&bm);
    let mut brackets = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let c = bsolve
                .solve(&k.bracket(&basis[i], &basis[j]), |x| x.clone())
                .ok_or_else(|| PipelineError::Inconsistent("basis change".into()))?;
            brackets.push((i, j, c.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect::<Vec<_>>()));
        }
    }
    let mut labels: Vec<String> = (0..BASE).map(|i| c3.g.label(i).to_string()).collect();
    labels.extend(rec.isotropy.iter().cloned());
    let mut degrees: Vec<i32> = (0..BASE).map(|i| c3.g.degree(i)).collect();
    degrees.extend(std::iter::repeat(0).take(r));
    let kf = FilteredLieAlgebra::new(LieAlgebra::new(labels, degrees, brackets)?)?;
    let sub = GradedSubalgebra::new(c3, &adapted, &rec.isotropy)?;
    let (conn, kappa, h) = ctx.normal_data(&kf, &sub)?;
    rec.scalar_zero = Some(h.scalar.is_zero());
    rec.quintic_type = if h.quintic.iter().all(|x| x.is_zero()) {
        None
    } else {
        Some(classify_quintic(&h.quintic)?.to_string())
    };
    rec.symmetry_dimension = Some(ctx.symmetry_dimension(&conn, &kappa));
    if rec.scalar_zero == Some(false) {
        rec.failures.push("scalar harmonic curvature is nonzero".into());
    }
    if rec.quintic_type.is_none() {
        rec.failures.push("harmonic curvature vanishes".into());
    }
    Ok(())
}

/// Every instance of every embedded table, optionally filtered by label.
pub fn verify_models(c3: &C3Algebra, only: Option<&str>, workers: usize) -> Result<Vec<ModelRecord>, PipelineError> {
    let ctx = CartanContext::<RatFunc>::new(c3)?;
    let mut jobs = Vec::new();
    for t in load_models()? {
        if only.is_some_and(|l| l != t.label) {
            continue;
        }
        for inst in t.instances()? {
            jobs.push((t.clone(), inst));
        }
    }
    if jobs.is_empty() {
        return Err(PipelineError::Model(format!("no model labelled {}", only.unwrap_or("?"))));
    }
    Ok(super::map_with_workers(jobs, workers, |(t, inst)| verify_model(&t, &inst, c3, &ctx)))
}
