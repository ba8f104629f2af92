//! Sparse multivariate polynomials with exact term-wise derivatives.

use serde::{Deserialize, Serialize};

use crate::error::GameError;

/// One monomial `coef · Π x_k^exp[k]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coef: f64,
    pub exp: Vec<u32>,
}

/// `Σ coef · Π x^exp` over `dim` variables. Exponent vectors are unique.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    dim: usize,
    terms: Vec<Term>,
}

impl Polynomial {
    /// Build from terms, merging duplicate exponent vectors and dropping zeros.
    pub fn new(dim: usize, terms: Vec<Term>) -> Result<Self, GameError> {
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            if t.exp.len() != dim {
                return Err(GameError::DimensionMismatch { expected: dim, found: t.exp.len() });
            }
            if !t.coef.is_finite() {
                return Err(GameError::Invalid(format!("non-finite coefficient {}", t.coef)));
            }
            match merged.iter_mut().find(|m| m.exp == t.exp) {
                Some(m) => m.coef += t.coef,
                None => merged.push(t),
            }
        }
        merged.retain(|t| t.coef != 0.0);
        Ok(Self { dim, terms: merged })
    }

    /// Shorthand for literal coefficient/exponent lists.
    pub fn from_terms(dim: usize, terms: &[(f64, &[u32])]) -> Self {
        Self::new(dim, terms.iter().map(|(c, e)| Term { coef: *c, exp: e.to_vec() }).collect())
            .expect("literal polynomial is well formed")
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: Vec::new() }
    }

    /// `Σ coef_k x_k + constant`.
    pub fn affine(coef: &[f64], constant: f64) -> Self {
        let dim = coef.len();
        let mut terms: Vec<Term> =
            coef.iter().enumerate().map(|(k, &c)| Term { coef: c, exp: unit_exp(dim, k, 1) }).collect();
        terms.push(Term { coef: constant, exp: vec![0; dim] });
        Self::new(dim, terms).expect("affine polynomial is well formed")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.exp.iter().sum::<u32>()).max().unwrap_or(0)
    }

    pub fn is_affine(&self) -> bool {
        self.degree() <= 1
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        self.terms.iter().map(|t| t.coef * monomial(x, &t.exp)).sum()
    }

    /// Checked evaluation.
    pub fn try_eval(&self, x: &[f64]) -> Result<f64, GameError> {
        if x.len() != self.dim {
            return Err(GameError::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        Ok(self.eval(x))
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.dim];
        for t in &self.terms {
            for k in 0..self.dim {
                let e = t.exp[k];
                if e == 0 {
                    continue;
                }
                let mut prod = t.coef * e as f64;
                for (l, (&xl, &el)) in x.iter().zip(&t.exp).enumerate() {
                    let p = if l == k { el - 1 } else { el };
                    prod *= xl.powi(p as i32);
                }
                g[k] += prod;
            }
        }
        g
    }

    /// Checked gradient.
    pub fn try_gradient(&self, x: &[f64]) -> Result<Vec<f64>, GameError> {
        if x.len() != self.dim {
            return Err(GameError::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        Ok(self.gradient(x))
    }

    /// Dense Hessian, row-major `dim × dim`.
    pub fn hessian(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut h = vec![0.0; n * n];
        for t in &self.terms {
            for k in 0..n {
                if t.exp[k] == 0 {
                    continue;
                }
                for l in k..n {
                    let mut e = t.exp.clone();
                    let mut c = t.coef * e[k] as f64;
                    e[k] -= 1;
                    if e[l] == 0 {
                        continue;
                    }
                    c *= e[l] as f64;
                    e[l] -= 1;
                    let v = c * monomial(x, &e);
                    h[k * n + l] += v;
                    if l != k {
                        h[l * n + k] += v;
                    }
                }
            }
        }
        h
    }

    /// Same polynomial over a larger variable vector, its variables placed at
    /// `offset..offset+dim`.
    pub fn embed(&self, total_dim: usize, offset: usize) -> Self {
        assert!(offset + self.dim <= total_dim);
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut e = vec![0; total_dim];
                e[offset..offset + self.dim].copy_from_slice(&t.exp);
                Term { coef: t.coef, exp: e }
            })
            .collect();
        Self { dim: total_dim, terms }
    }

    /// Substitute `x = base + S·ξ` where `S` selects a subset of coordinates
    /// (`free[k]` is the position in `ξ` of variable `k`, or `None` if fixed
    /// to `base[k]`). Returns a polynomial in `ξ`.
    pub fn restrict(&self, base: &[f64], free: &[Option<usize>], new_dim: usize) -> Self {
        let mut out: Vec<Term> = Vec::new();
        for t in &self.terms {
            let mut coef = t.coef;
            let mut e = vec![0u32; new_dim];
            for (k, &ek) in t.exp.iter().enumerate() {
                if ek == 0 {
                    continue;
                }
                match free[k] {
                    Some(j) => e[j] += ek,
                    None => coef *= base[k].powi(ek as i32),
                }
            }
            out.push(Term { coef, exp: e });
        }
        Self::new(new_dim, out).expect("restriction preserves dimension")
    }

    pub fn scaled(&self, s: f64) -> Self {
        let terms = self.terms.iter().map(|t| Term { coef: t.coef * s, exp: t.exp.clone() }).collect();
        Self::new(self.dim, terms).expect("scaling preserves dimension")
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::new(self.dim, terms).expect("sum preserves dimension")
    }
}

fn unit_exp(dim: usize, k: usize, p: u32) -> Vec<u32> {
    let mut e = vec![0; dim];
    e[k] = p;
    e
}

#[inline]
fn monomial(x: &[f64], exp: &[u32]) -> f64 {
    let mut p = 1.0;
    for (&xi, &e) in x.iter().zip(exp) {
        match e {
            0 => {}
            1 => p *= xi,
            2 => p *= xi * xi,
            _ => p *= xi.powi(e as i32),
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn square_derivative() {
        let f = Polynomial::from_terms(1, &[(1.0, &[2])]);
        assert_eq!(f.gradient(&[3.0]), vec![6.0]);
        assert_eq!(f.hessian(&[3.0]), vec![2.0]);
    }

    #[test]
    fn constant_has_zero_gradient() {
        let f = Polynomial::from_terms(3, &[(4.5, &[0, 0, 0])]);
        assert_eq!(f.gradient(&[1.0, -2.0, 0.3]), vec![0.0; 3]);
        assert_eq!(Polynomial::zero(2).eval(&[7.0, 8.0]), 0.0);
    }

    #[test]
    fn duplicates_merge() {
        let f = Polynomial::from_terms(2, &[(1.0, &[1, 0]), (2.0, &[1, 0]), (1.0, &[0, 1]), (-1.0, &[0, 1])]);
        assert_eq!(f.terms().len(), 1);
        assert_eq!(f.terms()[0].coef, 3.0);
    }

    #[test]
    fn wrong_dimension_rejected() {
        let f = Polynomial::from_terms(2, &[(1.0, &[1, 0])]);
        assert!(f.try_eval(&[1.0]).is_err());
        assert!(f.try_gradient(&[1.0, 2.0, 3.0]).is_err());
        assert!(Polynomial::new(2, vec![Term { coef: 1.0, exp: vec![1] }]).is_err());
    }

    #[test]
    fn restrict_fixes_coordinates() {
        // x0² + x0 x1 + x1³ with x1 = 2 → ξ² + 2ξ + 8
        let f = Polynomial::from_terms(2, &[(1.0, &[2, 0]), (1.0, &[1, 1]), (1.0, &[0, 3])]);
        let g = f.restrict(&[0.0, 2.0], &[Some(0), None], 1);
        for &t in &[-1.0, 0.0, 0.5, 3.0] {
            assert!((g.eval(&[t]) - f.eval(&[t, 2.0])).abs() < 1e-12);
        }
    }

    fn arb_poly(dim: usize) -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((-3.0f64..3.0, prop::collection::vec(0u32..=2, dim)), 1..8).prop_map(move |ts| {
            // cap total degree at 4
            let terms = ts
                .into_iter()
                .filter(|(_, e)| e.iter().sum::<u32>() <= 4)
                .map(|(c, e)| Term { coef: c, exp: e })
                .collect();
            Polynomial::new(dim, terms).unwrap()
        })
    }

    proptest! {
        #[test]
        fn gradient_matches_central_differences(
            f in arb_poly(3),
            x in prop::collection::vec(-1.5f64..1.5, 3),
        ) {
            let g = f.gradient(&x);
            let h = 1e-5;
            for k in 0..3 {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[k] += h;
                xm[k] -= h;
                let fd = (f.eval(&xp) - f.eval(&xm)) / (2.0 * h);
                let scale = g[k].abs().max(1.0);
                prop_assert!((fd - g[k]).abs() <= 1e-6 * scale, "k={} fd={} g={}", k, fd, g[k]);
            }
        }

        #[test]
        fn hessian_matches_gradient_differences(
            f in arb_poly(2),
            x in prop::collection::vec(-1.0f64..1.0, 2),
        ) {
            let hs = f.hessian(&x);
            let h = 1e-5;
            for k in 0..2 {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[k] += h;
                xm[k] -= h;
                let gp = f.gradient(&xp);
                let gm = f.gradient(&xm);
                for l in 0..2 {
                    let fd = (gp[l] - gm[l]) / (2.0 * h);
                    prop_assert!((fd - hs[l * 2 + k]).abs() <= 1e-5 * hs[l * 2 + k].abs().max(1.0));
                }
            }
        }
    }
}
