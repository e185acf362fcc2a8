//! Evaluation of symbolic objects at a representation.
//!
//! A representation of m generators supplies values for all n = 2m
//! variables through X_j = U_j + U_j*, X_{m+j} = i(U_j − U_j*); polynomial
//! evaluation is then the homomorphic extension over words, and a tensor
//! polynomial becomes the operator T ↦ Σ coeff · a(X) · T · b(X).

use std::collections::BTreeMap;

use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ncalg::{Monomial, NcPoly, TensorPoly};
use crate::repkit::representation::Representation;

/// Largest singular value; the operator norm.
pub fn operator_norm(m: faer::MatRef<'_, Complex64>) -> Result<f64> {
    let sv = m
        .singular_values()
        .map_err(|e| Error::numerical(format!("svd failed: {e:?}")))?;
    Ok(sv.first().copied().unwrap_or(0.0))
}

/// Largest entry modulus.
pub fn max_abs(m: faer::MatRef<'_, Complex64>) -> f64 {
    let mut worst: f64 = 0.0;
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            worst = worst.max(m[(r, c)].norm());
        }
    }
    worst
}

/// Frobenius (Hilbert–Schmidt) norm.
pub fn hs_norm(m: faer::MatRef<'_, Complex64>) -> f64 {
    let mut sum = 0.0;
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            sum += m[(r, c)].norm_sqr();
        }
    }
    sum.sqrt()
}

/// The n = 2m matrices X_1, …, X_n built from the generator unitaries.
/// Each is self-adjoint by construction.
pub fn generator_images(rep: &Representation) -> Vec<Mat<Complex64>> {
    let m = rep.num_generators();
    let d = rep.dim();
    let mut xs = Vec::with_capacity(2 * m);
    let dense: Vec<Mat<Complex64>> = rep.generators().iter().map(|g| g.to_dense()).collect();
    for u in &dense {
        // X_j = U + U*
        let mut x = Mat::zeros(d, d);
        for c in 0..d {
            for r in 0..d {
                x[(r, c)] = u[(r, c)] + u[(c, r)].conj();
            }
        }
        xs.push(x);
    }
    for u in &dense {
        // X_{m+j} = i (U − U*)
        let i = Complex64::new(0.0, 1.0);
        let mut x = Mat::zeros(d, d);
        for c in 0..d {
            for r in 0..d {
                x[(r, c)] = i * (u[(r, c)] - u[(c, r)].conj());
            }
        }
        xs.push(x);
    }
    xs
}

/// Caches monomial evaluations; words recur constantly across Jacobian
/// entries, and products of D×D matrices dominate the symbolic cost.
pub struct EvalContext<'a> {
    xs: &'a [Mat<Complex64>],
    dim: usize,
    cache: BTreeMap<Monomial, Mat<Complex64>>,
}

impl<'a> EvalContext<'a> {
    /// `xs` are the variable values, one per polynomial variable.
    pub fn new(xs: &'a [Mat<Complex64>]) -> Self {
        let dim = xs.first().map(|m| m.nrows()).unwrap_or(0);
        EvalContext {
            xs,
            dim,
            cache: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_vars(&self) -> usize {
        self.xs.len()
    }

    fn check_nvars(&self, nvars: usize) -> Result<()> {
        if nvars != self.xs.len() {
            return Err(Error::usage(format!(
                "polynomial has {nvars} variables but {} values were supplied",
                self.xs.len()
            )));
        }
        Ok(())
    }

    pub fn monomial(&mut self, mono: &Monomial) -> Result<Mat<Complex64>> {
        if let Some(m) = self.cache.get(mono) {
            return Ok(m.clone());
        }
        let value = match mono.vars() {
            [] => Mat::identity(self.dim, self.dim),
            [j] => self.xs[*j as usize - 1].clone(),
            vars => {
                // peel the last letter so prefixes populate the cache
                let prefix = Monomial::from_vars(vars[..vars.len() - 1].to_vec());
                let head = self.monomial(&prefix)?;
                head * &self.xs[vars[vars.len() - 1] as usize - 1]
            }
        };
        self.cache.insert(mono.clone(), value.clone());
        Ok(value)
    }

    /// Homomorphic evaluation of a polynomial.
    pub fn poly(&mut self, p: &NcPoly) -> Result<Mat<Complex64>> {
        self.check_nvars(p.nvars())?;
        let mut acc: Mat<Complex64> = Mat::zeros(self.dim, self.dim);
        for (mono, coeff) in p.terms() {
            let c = coeff.to_c64();
            let m = self.monomial(mono)?;
            for col in 0..self.dim {
                for row in 0..self.dim {
                    acc[(row, col)] += c * m[(row, col)];
                }
            }
        }
        Ok(acc)
    }

    /// Evaluates a tensor polynomial into its action and (optionally) its
    /// materialized matrix.
    pub fn tensor(&mut self, tp: &TensorPoly) -> Result<TensorOperator> {
        self.check_nvars(tp.nvars())?;
        let mut terms = Vec::with_capacity(tp.num_terms());
        for ((l, r), coeff) in tp.terms() {
            terms.push(TensorTerm {
                coeff: coeff.to_c64(),
                left: self.monomial(l)?,
                right: self.monomial(r)?,
            });
        }
        Ok(TensorOperator {
            dim: self.dim,
            terms,
        })
    }
}

/// Convenience wrapper: evaluate one polynomial at a representation.
pub fn evaluate_poly(p: &NcPoly, rep: &Representation) -> Result<Mat<Complex64>> {
    let xs = generator_images(rep);
    if p.nvars() != xs.len() {
        return Err(Error::usage(format!(
            "polynomial has {} variables but the representation provides {}",
            p.nvars(),
            xs.len()
        )));
    }
    EvalContext::new(&xs).poly(p)
}

/// Convenience wrapper: evaluate one tensor polynomial at a representation.
pub fn evaluate_tensor(tp: &TensorPoly, rep: &Representation) -> Result<TensorOperator> {
    let xs = generator_images(rep);
    if tp.nvars() != xs.len() {
        return Err(Error::usage(format!(
            "tensor polynomial has {} variables but the representation provides {}",
            tp.nvars(),
            xs.len()
        )));
    }
    EvalContext::new(&xs).tensor(tp)
}

/// One evaluated elementary tensor: coeff · a(X) ⊗ b(X).
pub struct TensorTerm {
    pub coeff: Complex64,
    pub left: Mat<Complex64>,
    pub right: Mat<Complex64>,
}

/// Which flattening identifies D×D matrices with length-D² vectors when a
/// tensor operator is materialized. Results that matter (spectra, ranks)
/// are invariant under this choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flattening {
    /// vec(T)[u·D + v] = T[u][v]; the operator matrix is Σ c · A ⊗ Bᵀ.
    RowMajor,
    /// vec(T)[v·D + u] = T[u][v]; the operator matrix is Σ c · Bᵀ ⊗ A.
    ColumnMajor,
}

/// The evaluated bimodule action T ↦ Σ coeff · a(X) · T · b(X).
pub struct TensorOperator {
    dim: usize,
    terms: Vec<TensorTerm>,
}

impl TensorOperator {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[TensorTerm] {
        &self.terms
    }

    /// Applies the operator to a D×D matrix.
    pub fn apply(&self, t: faer::MatRef<'_, Complex64>) -> Mat<Complex64> {
        let mut acc: Mat<Complex64> = Mat::zeros(self.dim, self.dim);
        for term in &self.terms {
            let atb = &term.left * t * &term.right;
            for c in 0..self.dim {
                for r in 0..self.dim {
                    acc[(r, c)] += term.coeff * atb[(r, c)];
                }
            }
        }
        acc
    }

    /// Materializes the D²×D² matrix of the action on flattened matrices.
    pub fn materialize(&self, flattening: Flattening) -> Mat<Complex64> {
        let d = self.dim;
        let mut out: Mat<Complex64> = Mat::zeros(d * d, d * d);
        let index = |u: usize, v: usize| match flattening {
            Flattening::RowMajor => u * d + v,
            Flattening::ColumnMajor => v * d + u,
        };
        for term in &self.terms {
            // (A T B)[u, v] = Σ_{w,x} A[u, w] T[w, x] B[x, v]
            for u in 0..d {
                for w in 0..d {
                    let a = term.coeff * term.left[(u, w)];
                    if a == Complex64::ZERO {
                        continue;
                    }
                    for x in 0..d {
                        for v in 0..d {
                            out[(index(u, v), index(w, x))] += a * term.right[(x, v)];
                        }
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repkit::representation::cyclic_shift;

    #[test]
    fn x_matrices_for_swap() {
        // at the 2-cycle, X_1 = U + U* = [[0, 2], [2, 0]]
        let rep = cyclic_shift(2).unwrap();
        let p = NcPoly::var(2, 1).unwrap();
        let x1 = evaluate_poly(&p, &rep).unwrap();
        assert_eq!(x1[(0, 1)], Complex64::new(2.0, 0.0));
        assert_eq!(x1[(1, 0)], Complex64::new(2.0, 0.0));
        assert_eq!(x1[(0, 0)], Complex64::new(0.0, 0.0));
        // X_2 = i(U − U*) = 0 for the symmetric swap
        let p2 = NcPoly::var(2, 2).unwrap();
        let x2 = evaluate_poly(&p2, &rep).unwrap();
        assert!(max_abs(x2.as_ref()) < 1e-15);
    }

    #[test]
    fn empty_monomial_evaluates_to_identity() {
        let rep = cyclic_shift(3).unwrap();
        let one = NcPoly::one(2);
        let m = evaluate_poly(&one, &rep).unwrap();
        for r in 0..3 {
            for c in 0..3 {
                let expected = if r == c { 1.0 } else { 0.0 };
                assert_eq!(m[(r, c)], Complex64::new(expected, 0.0));
            }
        }
    }

    #[test]
    fn self_adjoint_generators() {
        let rep = crate::repkit::representation::random_permutations(6, 2, 3).unwrap();
        for x in generator_images(&rep) {
            let mut defect: f64 = 0.0;
            for r in 0..6 {
                for c in 0..6 {
                    defect = defect.max((x[(r, c)] - x[(c, r)].conj()).norm());
                }
            }
            assert!(defect <= 1e-12);
        }
    }

    #[test]
    fn tensor_unit_acts_as_identity() {
        let rep = cyclic_shift(2).unwrap();
        let op = evaluate_tensor(&TensorPoly::one_tensor_one(2), &rep).unwrap();
        let mut t: Mat<Complex64> = Mat::zeros(2, 2);
        t[(0, 1)] = Complex64::new(3.0, -1.0);
        let got = op.apply(t.as_ref());
        assert!((got[(0, 1)] - t[(0, 1)]).norm() < 1e-15);
        let mat = op.materialize(Flattening::RowMajor);
        for r in 0..4 {
            for c in 0..4 {
                let expected = if r == c { 1.0 } else { 0.0 };
                assert!((mat[(r, c)] - Complex64::new(expected, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn tensor_left_factor_multiplies() {
        // (t_1 ⊗ 1) acts as T ↦ X_1 T; check on the standard basis
        let rep = cyclic_shift(2).unwrap();
        let t1 = NcPoly::var(2, 1).unwrap();
        let tp = TensorPoly::outer(&t1, &NcPoly::one(2)).unwrap();
        let op = evaluate_tensor(&tp, &rep).unwrap();
        let x1 = evaluate_poly(&t1, &rep).unwrap();
        for (u, v) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let mut e: Mat<Complex64> = Mat::zeros(2, 2);
            e[(u, v)] = Complex64::new(1.0, 0.0);
            let got = op.apply(e.as_ref());
            let expected = &x1 * &e;
            for r in 0..2 {
                for c in 0..2 {
                    assert!((got[(r, c)] - expected[(r, c)]).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn materialize_matches_apply_in_both_conventions() {
        let rep = crate::repkit::representation::random_permutations(3, 1, 5).unwrap();
        let t1 = NcPoly::var(2, 1).unwrap();
        let t2 = NcPoly::var(2, 2).unwrap();
        let tp = TensorPoly::outer(&t1, &t2)
            .unwrap()
            .add(&TensorPoly::outer(&t2.mul(&t1).unwrap(), &NcPoly::one(2)).unwrap())
            .unwrap();
        let op = evaluate_tensor(&tp, &rep).unwrap();
        let d = 3usize;
        let mut t: Mat<Complex64> = Mat::zeros(d, d);
        for r in 0..d {
            for c in 0..d {
                t[(r, c)] = Complex64::new((r * d + c) as f64, (r as f64) - (c as f64));
            }
        }
        let direct = op.apply(t.as_ref());
        for flattening in [Flattening::RowMajor, Flattening::ColumnMajor] {
            let big = op.materialize(flattening);
            let index = |u: usize, v: usize| match flattening {
                Flattening::RowMajor => u * d + v,
                Flattening::ColumnMajor => v * d + u,
            };
            let mut vec_t: Mat<Complex64> = Mat::zeros(d * d, 1);
            for u in 0..d {
                for v in 0..d {
                    vec_t[(index(u, v), 0)] = t[(u, v)];
                }
            }
            let flat = &big * &vec_t;
            for u in 0..d {
                for v in 0..d {
                    assert!(
                        (flat[(index(u, v), 0)] - direct[(u, v)]).norm() < 1e-12,
                        "mismatch at ({u},{v}) under {flattening:?}"
                    );
                }
            }
        }
    }
}
