use crate::exactmath::{Field, Rational};

use super::c3::{IDX_E, IDX_EP, IDX_H};
use super::subspace::{coordinates, induced_algebra, Subspace};
use super::{C3Algebra, LieAlgebra, LieError};

/// Eigenvalues of (ad H, ad E, ad E′) on a weight vector.
pub type Weight = [i64; 3];

/// Graded subalgebra k̲ = g₋ ⊕ k̲₀ of g, with basis g₋ (in g's order)
/// followed by the given basis of k̲₀.
#[derive(Clone, Debug)]
pub struct GradedSubalgebra<F: Field> {
    pub alg: LieAlgebra<F>,
    /// g-coordinates of each basis vector.
    pub embed: Vec<Vec<F>>,
    pub weights: Vec<Weight>,
    /// Basis of a = k̲₀ ∩ h as (H, E, E′)-coefficients.
    pub torus: Vec<[F; 3]>,
    pub neg_dim: usize,
}

impl<F: Field> GradedSubalgebra<F> {
    pub fn new(c3: &C3Algebra, k0: &[Vec<F>], k0_labels: &[String]) -> Result<Self, LieError> {
        let g: LieAlgebra<F> = c3.g.lift();
        let n = g.dim();
        let neg = c3.negative_indices();
        let mut embed: Vec<Vec<F>> = neg.iter().map(|&i| g.basis_vector(i)).collect();
        let mut labels: Vec<String> = neg.iter().map(|&i| g.label(i).to_string()).collect();
        let mut degrees: Vec<i32> = neg.iter().map(|&i| g.degree(i)).collect();
        for (v, l) in k0.iter().zip(k0_labels) {
            if v.len() != n {
                return Err(LieError::Invalid(format!("{l}: wrong length")));
            }
            if v.iter().enumerate().any(|(i, x)| !x.is_zero() && g.degree(i) != 0) {
                return Err(LieError::Invalid(format!("{l} is not in degree 0")));
            }
            embed.push(v.clone());
            labels.push(l.clone());
            degrees.push(0);
        }
        let alg = induced_algebra(&g, &embed, labels, degrees)?;
        let weights = embed
            .iter()
            .map(|v| weight_of(&g, v))
            .collect::<Result<Vec<_>, _>>()?;
        let hs: Vec<Vec<F>> = [IDX_H, IDX_E, IDX_EP].iter().map(|&i| g.basis_vector(i)).collect();
        let cartan = Subspace::span(n, &hs);
        let a = Subspace::span(n, k0).intersect(&cartan);
        let torus = a
            .basis()
            .iter()
            .map(|v| {
                let c = coordinates(&hs, v).expect("inside h");
                [c[0].clone(), c[1].clone(), c[2].clone()]
            })
            .collect();
        Ok(GradedSubalgebra { alg, embed, weights, torus, neg_dim: neg.len() })
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    /// Value of a weight on a torus element.
    pub fn pair(a: &[F; 3], w: &Weight) -> F {
        let mut s = F::zero();
        for (c, x) in a.iter().zip(w) {
            s = s.add(&c.mul(&F::from_i64(*x)));
        }
        s
    }

    pub fn is_invariant(&self, w: &Weight) -> bool {
        self.torus.iter().all(|a| Self::pair(a, w).is_zero())
    }
}

/// Simultaneous (H, E, E′) eigenvalues of `v`; error unless `v` is a weight
/// vector with integral eigenvalues.
fn weight_of<F: Field>(g: &LieAlgebra<F>, v: &[F]) -> Result<Weight, LieError> {
    let mut w = [0i64; 3];
    for (slot, z) in [IDX_H, IDX_E, IDX_EP].into_iter().enumerate() {
        let br = g.bracket(&g.basis_vector(z), v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return Err(LieError::Invalid("zero vector".into()));
        };
        let c = br[p].div(&v[p])?;
        if br.iter().zip(v).any(|(b, x)| *b != c.mul(x)) {
            return Err(LieError::Invalid("not a weight vector".into()));
        }
        let q: Rational = c.as_rational().ok_or_else(|| LieError::Invalid("non-constant weight".into()))?;
        w[slot] = q.to_i64().ok_or_else(|| LieError::Invalid("non-integral weight".into()))?;
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::build_c3;

    #[test]
    fn n3_subalgebra() {
        let c3 = build_c3();
        let gr = &c3.grading;
        let h5e: Vec<Rational> = gr.h.iter().zip(&gr.e).map(|(a, b)| a.sub(&b.mul(&Rational::integer(5)))).collect();
        let k0 = vec![gr.x.clone(), h5e, gr.e_prime.clone()];
        let labels: Vec<String> = ["X", "H-5E", "E'"].iter().map(|s| s.to_string()).collect();
        let k = GradedSubalgebra::new(&c3, &k0, &labels).unwrap();
        assert_eq!(k.dim(), 11);
        assert!(k.alg.check_jacobi());
        assert_eq!(k.torus.len(), 2);
        assert_eq!(k.weights[8], [2, 0, 0]);
    }

    #[test]
    fn non_subalgebra_rejected() {
        let c3 = build_c3();
        let gr = &c3.grading;
        let k0 = vec![gr.x.clone(), gr.y.clone()];
        let labels = vec!["X".to_string(), "Y".to_string()];
        assert!(GradedSubalgebra::new(&c3, &k0, &labels).is_err());
    }
}
