use serde::{Deserialize, Serialize};

use crate::cartan::{classify_quintic, CartanContext, HarmonicClass};
use crate::cohomology::{Cochain, Weight};
use crate::exactmath::{kernel_basis, var_index, Embed, Field, Matrix, MultiPoly, RatFunc, Rational};
use crate::kuranishi::{decompose_locus, deformed_bracket, Component, Coordinate, Dgla, KuranishiFamily};
use crate::liealg::{C3Algebra, FilteredLieAlgebra, GradedSubalgebra};

use super::catalog::{render_word, FromRatFunc};
use super::{map_with_workers, special_points, ClassDescriptor, PipelineError, ProjPoint};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoordinateReport {
    pub name: String,
    /// Eigenvalues of H, E, E′ on the coordinate.
    pub weight: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Verdict {
    Retained,
    Discarded { reason: String },
}

impl Verdict {
    pub fn is_retained(&self) -> bool {
        matches!(self, Verdict::Retained)
    }

    pub fn status(&self) -> &'static str {
        match self {
            Verdict::Retained => "retained",
            Verdict::Discarded { .. } => "discarded",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub locus: String,
    pub free: Vec<String>,
    pub scalar: String,
    pub quintic: Vec<String>,
    /// N, IV, F, another root pattern, or absent when the quintic vanishes.
    pub quintic_type: Option<String>,
    pub generic_d: usize,
    pub bianchi: bool,
    /// Components of the zero set of the quintic inside this component.
    pub flat_locus: Vec<String>,
    /// Normalized slices for the torus action, e.g. `t1=1; ...`.
    pub slices: Vec<String>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub label: String,
    pub k0: Vec<String>,
    pub params: Vec<String>,
    pub dim_k: usize,
    /// (E-weight, dim) of H²(k̲, k̲) and H³(k̲, k̲) on the invariant subcomplex.
    pub betti2: Vec<(i64, usize)>,
    pub betti3: Vec<(i64, usize)>,
    pub coordinates: Vec<CoordinateReport>,
    pub obstructions: Vec<String>,
    pub components: Vec<ComponentReport>,
    pub notes: Vec<String>,
}

impl ClassReport {
    /// M″ is nonempty exactly when some component is retained.
    pub fn has_models(&self) -> bool {
        self.components.iter().any(|c| c.verdict.is_retained())
    }
}

/// Field-dependent step of the run: replacing the harmonic representatives
/// by coboundary-adjusted ones adapted to the flat direction.
pub trait ClassField: FromRatFunc
where
    RatFunc: Embed<Self>,
{
    fn adapt(l: &Dgla<Self>, fam: &KuranishiFamily<Self>, quintic: &[RatFunc]) -> Result<Option<(KuranishiFamily<Self>, String)>, PipelineError>;
}

impl ClassField for RatFunc {
    fn adapt(_: &Dgla<Self>, _: &KuranishiFamily<Self>, _: &[RatFunc]) -> Result<Option<(KuranishiFamily<Self>, String)>, PipelineError> {
        Ok(None)
    }
}

impl ClassField for Rational {
    /// For a two-dimensional unobstructed H¹ of a single weight: take the
    /// kernel of the linear quintic map as υ′, the other basis class as υ″,
    /// make both self-bracket free by coboundaries and use the bilinear
    /// family tυ′ + sυ″ + tsυ‴.
    fn adapt(l: &Dgla<Self>, fam: &KuranishiFamily<Self>, quintic: &[RatFunc]) -> Result<Option<(KuranishiFamily<Self>, String)>, PipelineError> {
        if fam.coords.len() != 2 || fam.coords[0].weight != fam.coords[1].weight || !fam.obstructions.is_empty() {
            return Ok(None);
        }
        let vars: Vec<usize> = fam.coords.iter().map(|c| var_index(&c.name)).collect::<Result<_, _>>()?;
        let mut rows = Vec::new();
        for qj in quintic {
            let row: Option<Vec<Rational>> = vars.iter().map(|&v| qj.derivative(v).as_rational()).collect();
            let Some(row) = row else { return Ok(None) };
            let mut lin = RatFunc::zero();
            for (c, &v) in row.iter().zip(&vars) {
                lin = lin.add(&RatFunc::from_rational(c).mul(&RatFunc::var(&crate::exactmath::var_name(v))?));
            }
            if lin != *qj {
                return Ok(None);
            }
            rows.push(row);
        }
        let ker = kernel_basis(&Matrix::from_rows(rows, 2)?);
        let [flat] = ker.as_slice() else { return Ok(None) };
        let h = [&fam.coords[0].cocycle, &fam.coords[1].cocycle];
        let c1 = h[0].scale(&flat[0]).add(&h[1].scale(&flat[1]));
        let c2 = if flat[0].is_zero() { h[0].clone() } else { h[1].clone() };
        let (Some(r1), Some(r2)) = (l.isotropic_representative(&c1)?, l.isotropic_representative(&c2)?) else {
            return Ok(None);
        };
        let w = fam.coords[0].weight;
        let u1 = Coordinate { name: "t".into(), weight: w, cocycle: r1 };
        let u2 = Coordinate { name: "s".into(), weight: w, cocycle: r2 };
        let Some((adapted, _)) = l.bilinear_family((&u1, "t"), (&u2, "s"))? else {
            return Ok(None);
        };
        let note = format!(
            "coordinates adapted: t along the flat class ({}, {}) in ({}, {}), s along {}; representatives self-bracket free",
            flat[0],
            flat[1],
            fam.coords[0].name,
            fam.coords[1].name,
            if flat[0].is_zero() { &fam.coords[0].name } else { &fam.coords[1].name }
        );
        Ok(Some((adapted, note)))
    }
}

/// Coordinate names by E-weight: t for weight 1, s for 2, r for 3, then
/// numbered within each weight when there are several.
fn coordinate_names(weights: &[Weight]) -> Vec<String> {
    let letter = |e: i64| match e {
        1 => "t".to_string(),
        2 => "s".to_string(),
        3 => "r".to_string(),
        e => format!("u{e}_"),
    };
    let mut seen = std::collections::BTreeMap::<i64, usize>::new();
    let counts = weights.iter().fold(std::collections::BTreeMap::<i64, usize>::new(), |mut m, w| {
        *m.entry(w[1]).or_default() += 1;
        m
    });
    weights
        .iter()
        .map(|w| {
            let i = seen.entry(w[1]).or_default();
            *i += 1;
            if counts[&w[1]] == 1 {
                letter(w[1])
            } else {
                format!("{}{}", letter(w[1]), i)
            }
        })
        .collect()
}

/// Exact torus weights of the Kuranishi coordinates.
pub fn torus_weights<F: Field>(fam: &KuranishiFamily<F>) -> Vec<CoordinateReport> {
    fam.coords
        .iter()
        .map(|c| CoordinateReport { name: c.name.clone(), weight: c.weight })
        .collect()
}

/// The Kuranishi family of a class with the data needed to evaluate it.
pub struct Prepared<F: Field> {
    pub sub: GradedSubalgebra<F>,
    pub dgla: Dgla<F>,
    pub family: KuranishiFamily<F>,
    pub notes: Vec<String>,
}

pub struct Evaluated {
    pub harmonic: HarmonicClass<RatFunc>,
    pub d: usize,
    pub bianchi: bool,
}

fn evaluate<F: ClassField>(
    ctx: &CartanContext<RatFunc>,
    p: &Prepared<F>,
    comp: &Component,
) -> Result<Evaluated, PipelineError>
where
    RatFunc: Embed<F>,
{
    let xi = p.family.xi_on(comp)?;
    let k = p.dgla.deformed_algebra(&xi)?;
    let (conn, kappa, harmonic) = ctx.normal_data(&k, &p.sub)?;
    Ok(Evaluated {
        d: ctx.symmetry_dimension(&conn, &kappa),
        bianchi: ctx.bianchi_holds(&conn, &kappa),
        harmonic,
    })
}

/// Builds the family, adapting representatives where the field allows.
pub fn run_family<F: ClassField>(
    desc: &ClassDescriptor,
    c3: &C3Algebra,
    ctx: &CartanContext<RatFunc>,
) -> Result<Prepared<F>, PipelineError>
where
    RatFunc: Embed<F>,
{
    let sub: GradedSubalgebra<F> = desc.subalgebra(c3)?;
    let dgla = Dgla::new(sub.clone(), true)?;
    let weights: Vec<Weight> = dgla.harmonic_basis(1).iter().map(|(w, _)| *w).collect();
    let names = coordinate_names(&weights);
    let family = dgla.kuranishi_family(Some(&names))?;
    if family.needs_manual_components {
        return Err(PipelineError::Inconsistent(format!("{}: obstruction locus not decomposed", desc.label)));
    }
    let mut p = Prepared { sub, dgla, family, notes: Vec::new() };
    if p.family.components.len() == 1 && p.family.coords.len() == 2 {
        let e = evaluate(ctx, &p, &p.family.components[0])?;
        if let Some((fam, note)) = F::adapt(&p.dgla, &p.family, &e.harmonic.quintic)? {
            p.family = fam;
            p.notes.push(note);
        }
    }
    Ok(p)
}

fn poly_strings(ps: &[MultiPoly]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

/// Zero set of the quintic coefficients inside a component.
fn flat_locus(quintic: &[RatFunc], free: &[String]) -> Result<Option<Vec<String>>, PipelineError> {
    let vars: Vec<usize> = free.iter().map(|n| var_index(n)).collect::<Result<_, _>>()?;
    let mut fs: Vec<MultiPoly> = Vec::new();
    for q in quintic.iter().filter(|q| !q.is_zero()) {
        if q.variables().iter().any(|v| !vars.contains(v)) {
            return Ok(None);
        }
        let p = q.num().monic();
        if !fs.contains(&p) {
            fs.push(p);
        }
    }
    let (comps, manual) = decompose_locus(&fs, free)?;
    if manual {
        return Ok(None);
    }
    Ok(Some(comps.iter().map(|c| c.describe()).collect()))
}

/// Primitive integer vector with positive leading entry.
fn primitive(v: &[Rational]) -> Vec<Rational> {
    use num_integer::Integer;
    let mut l = num_bigint::BigInt::from(1);
    for x in v {
        l = l.lcm(x.denom());
    }
    let lq = Rational::from_big(l, 1.into()).expect("nonzero");
    let ints: Vec<Rational> = v.iter().map(|x| x.mul(&lq)).collect();
    let mut g = num_bigint::BigInt::from(0);
    for x in &ints {
        g = g.gcd(x.numer());
    }
    if g == 0.into() {
        return ints;
    }
    let gq = Rational::from_big(g, 1.into()).expect("nonzero");
    ints.iter().map(|x| x.div(&gq).expect("nonzero")).collect()
}

fn torus_word(a: &[Rational]) -> String {
    let mut v = vec![RatFunc::zero(); 21];
    for (c, i) in a.iter().zip([crate::liealg::IDX_H, crate::liealg::IDX_E, crate::liealg::IDX_EP]) {
        v[i] = RatFunc::from_rational(c);
    }
    render_word(&v)
}

fn pair(a: &[Rational], w: &Weight) -> Rational {
    a.iter()
        .zip(w)
        .fold(Rational::integer(0), |s, (c, x)| s.add(&c.mul(&Rational::integer(*x))))
}

/// Normalizes the first quintic coordinate with nonzero weight to 1 and
/// lists the residual torus with its weights on the other free coordinates.
fn slices(quintic: &[RatFunc], comp: &Component, coords: &[CoordinateReport]) -> Result<Vec<String>, PipelineError> {
    let mut used: Vec<usize> = Vec::new();
    for q in quintic {
        used.extend(q.variables());
    }
    let free: Vec<&CoordinateReport> = coords.iter().filter(|c| comp.free.contains(&c.name)).collect();
    let mut out = Vec::new();
    for c in &free {
        if !used.contains(&var_index(&c.name)?) || c.weight == [0, 0, 0] {
            continue;
        }
        let row = Matrix::from_rows(vec![c.weight.iter().map(|x| Rational::integer(*x)).collect()], 3)?;
        let others: Vec<&&CoordinateReport> = free.iter().filter(|o| o.name != c.name).collect();
        let mut parts = vec![format!("{}=1", c.name)];
        for k in kernel_basis(&row) {
            let mut a = primitive(&k);
            let ws: Vec<Rational> = others.iter().map(|o| pair(&a, &o.weight)).collect();
            if ws.iter().all(|w| w.is_zero()) {
                parts.push(format!("{} acts trivially", torus_word(&a)));
                continue;
            }
            if ws.iter().find(|w| !w.is_zero()).is_some_and(|w| w.is_negative()) {
                a = a.iter().map(|x| x.neg()).collect();
            }
            let ws: Vec<String> = others.iter().map(|o| pair(&a, &o.weight).to_string()).collect();
            let names: Vec<&str> = others.iter().map(|o| o.name.as_str()).collect();
            parts.push(format!("{} acts on ({}) with weights ({})", torus_word(&a), names.join(", "), ws.join(", ")));
        }
        out.push(parts.join("; "));
        break;
    }
    Ok(out)
}

fn run_generic<F: ClassField>(desc: &ClassDescriptor, c3: &C3Algebra, ctx: &CartanContext<RatFunc>) -> Result<ClassReport, PipelineError>
where
    RatFunc: Embed<F>,
{
    let p = run_family::<F>(desc, c3, ctx)?;
    let dim_k = p.sub.dim();
    let coords = torus_weights(&p.family);
    let mut components = Vec::new();
    for comp in &p.family.components {
        let e = evaluate(ctx, &p, comp)?;
        let h = &e.harmonic;
        let qzero = h.quintic.iter().all(|x| x.is_zero());
        let quintic_type = if qzero { None } else { Some(classify_quintic(&h.quintic)?.to_string()) };
        let verdict = if !h.scalar.is_zero() {
            Verdict::Discarded { reason: "scalar component nonzero".into() }
        } else if qzero {
            Verdict::Discarded { reason: "harmonic curvature identically flat".into() }
        } else if e.d > dim_k {
            Verdict::Discarded { reason: format!("generic d = {} > {}", e.d, dim_k) }
        } else if e.d < dim_k {
            return Err(PipelineError::Inconsistent(format!("{}: generic d = {} < dim k = {}", desc.label, e.d, dim_k)));
        } else {
            Verdict::Retained
        };
        let flat = if qzero { Some(vec![comp.describe()]) } else { flat_locus(&h.quintic, &comp.free)? };
        let slice = if verdict.is_retained() { slices(&h.quintic, comp, &coords)? } else { Vec::new() };
        components.push(ComponentReport {
            locus: comp.describe(),
            free: comp.free.clone(),
            scalar: h.scalar.to_string(),
            quintic: h.quintic.iter().map(|x| x.to_string()).collect(),
            quintic_type,
            generic_d: e.d,
            bianchi: e.bianchi,
            flat_locus: flat.unwrap_or_else(|| vec!["not computed".into()]),
            slices: slice,
            verdict,
        });
    }
    let mut notes = p.notes.clone();
    notes.extend(desc.notes.iter().cloned());
    if components.iter().any(|c| c.verdict.is_retained()) {
        notes.push("verdicts refer to generic points; isolated members with larger symmetry are not stratified".into());
    }
    Ok(ClassReport {
        label: desc.label.clone(),
        k0: desc.k0.clone(),
        params: desc.params.clone(),
        dim_k,
        betti2: p.dgla.betti(1).into_iter().collect(),
        betti3: p.dgla.betti(2).into_iter().collect(),
        coordinates: coords,
        obstructions: poly_strings(&p.family.obstructions),
        components,
        notes,
    })
}

/// Steps (1)–(7) for one class: ℚ for discrete classes, ℚ(params) otherwise.
pub fn run_class(desc: &ClassDescriptor, c3: &C3Algebra, ctx: &CartanContext<RatFunc>) -> Result<ClassReport, PipelineError> {
    if desc.is_parametric() {
        run_generic::<RatFunc>(desc, c3, ctx)
    } else {
        run_generic::<Rational>(desc, c3, ctx)
    }
}

/// Every class of the catalog, computed on `workers` threads in catalog
/// order. Each parametric family is followed by those of its candidate
/// special points where the cohomology of k̲ differs from the generic one;
/// the remaining candidates are listed in a note on the family.
pub fn classify_all(
    classes: &[ClassDescriptor],
    c3: &C3Algebra,
    workers: usize,
) -> Result<Vec<ClassReport>, PipelineError> {
    let mut jobs: Vec<(usize, ClassDescriptor)> = Vec::new();
    for (i, c) in classes.iter().enumerate() {
        jobs.push((i, c.clone()));
        if c.is_parametric() {
            for pt in special_points(c, c3)? {
                jobs.push((i, c.specialize(c3, &pt)?));
            }
        }
    }
    let ctx = CartanContext::<RatFunc>::new(c3)?;
    let done = map_with_workers(jobs, workers, |(i, d)| run_class(&d, c3, &ctx).map(|r| (i, r)));
    let mut out: Vec<ClassReport> = Vec::new();
    let mut generic: Option<usize> = None;
    let mut same: Vec<String> = Vec::new();
    let mut last = usize::MAX;
    for r in done {
        let (i, r) = r?;
        if i != last {
            flush_same(&mut out, generic, &mut same);
            last = i;
            generic = classes[i].is_parametric().then_some(out.len());
            out.push(r);
            continue;
        }
        let g = &out[generic.expect("special point after its family")];
        if r.betti2 == g.betti2 && r.betti3 == g.betti3 && !r.has_models() {
            same.push(r.label);
        } else {
            out.push(r);
        }
    }
    flush_same(&mut out, generic, &mut same);
    Ok(out)
}

fn flush_same(out: &mut [ClassReport], generic: Option<usize>, same: &mut Vec<String>) {
    if let Some(g) = generic {
        if !same.is_empty() {
            let n = same.len();
            out[g].notes.push(format!(
                "{n} further candidate special values have generic cohomology and no retained component: {}",
                same.join(", ")
            ));
        }
    }
    same.clear();
}
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecializationSample {
    pub point: Vec<(String, Rational)>,
    pub d: usize,
    pub quintic_type: Option<String>,
}

/// Symmetry dimension and quintic type of one member of a component: the
/// class parameter (if any) and the free coordinates set to `point`. `None`
/// when the point hits a pole of the family.
pub fn specialization_check<F: ClassField>(
    desc: &ClassDescriptor,
    c3: &C3Algebra,
    ctx: &CartanContext<Rational>,
    prepared: &Prepared<F>,
    comp: &Component,
    point: &[(String, Rational)],
) -> Result<Option<SpecializationSample>, PipelineError>
where
    RatFunc: Embed<F>,
{
    let assign: Vec<(usize, Rational)> = point
        .iter()
        .map(|(n, q)| Ok((var_index(n)?, q.clone())))
        .collect::<Result<_, PipelineError>>()?;
    let member = match desc.params.as_slice() {
        [] => desc.clone(),
        [param] => {
            let (_, q) = point
                .iter()
                .find(|(n, _)| n == param)
                .ok_or_else(|| PipelineError::Inconsistent(format!("no value for {param}")))?;
            desc.specialize(c3, &ProjPoint::Finite(q.clone()))?
        }
        _ => return Err(PipelineError::Catalog("several parameters".into())),
    };
    let sub: GradedSubalgebra<Rational> = member.subalgebra(c3)?;
    let xi = prepared.family.xi_on(comp)?;
    let mut x = Cochain::zero(xi.p);
    for (k, c) in &xi.terms {
        match c.specialize(&assign) {
            Ok(v) => x.add_term(*k, v),
            Err(_) => return Ok(None),
        }
    }
    let k = FilteredLieAlgebra::new(deformed_bracket(&sub.alg, &x))?;
    if !k.check_jacobi() {
        return Err(PipelineError::Inconsistent(format!("{}: specialization is not a Lie algebra", desc.label)));
    }
    let (conn, kappa, h) = ctx.normal_data(&k, &sub)?;
    let quintic_type = if h.quintic.iter().all(|x| x.is_zero()) {
        None
    } else {
        Some(classify_quintic(&h.quintic)?.to_string())
    };
    Ok(Some(SpecializationSample { point: point.to_vec(), d: ctx.symmetry_dimension(&conn, &kappa), quintic_type }))
}
