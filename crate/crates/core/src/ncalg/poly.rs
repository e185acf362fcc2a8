use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ncalg::monomial::Monomial;
use crate::ncalg::tensor::TensorPoly;
use crate::ncalg::Limits;
use crate::scalar::GaussianRational;

/// A noncommutative polynomial in t_1, …, t_nvars with exact ℚ(i)
/// coefficients.
///
/// Canonical form is maintained by every operation: no stored coefficient is
/// zero, so structural equality coincides with algebraic equality. Values are
/// immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl NcPoly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars >= 1, "nvars must be positive");
        NcPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, GaussianRational::one())
    }

    pub fn constant(nvars: usize, c: GaussianRational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::unit(), c);
        }
        p
    }

    /// The variable t_j (1-based).
    pub fn var(nvars: usize, j: u32) -> Result<Self> {
        if j == 0 || j as usize > nvars {
            return Err(Error::usage(format!(
                "variable index {j} out of range 1..={nvars}"
            )));
        }
        let mut p = Self::zero(nvars);
        p.terms.insert(Monomial::var(j), GaussianRational::one());
        Ok(p)
    }

    /// Builds a polynomial from raw terms, merging duplicates and dropping
    /// zero coefficients.
    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, GaussianRational)>,
    ) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            if m.max_var() as usize > nvars {
                return Err(Error::usage(format!(
                    "monomial {m} references a variable beyond nvars = {nvars}"
                )));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let merged = e.get() + &c;
                if merged.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = merged;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    fn check_nvars(&self, rhs: &NcPoly) -> Result<()> {
        if self.nvars != rhs.nvars {
            return Err(Error::usage(format!(
                "mismatched nvars: {} vs {}",
                self.nvars, rhs.nvars
            )));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &NcPoly) -> Result<NcPoly> {
        self.check_nvars(rhs)?;
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &NcPoly) -> Result<NcPoly> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> NcPoly {
        NcPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> NcPoly {
        if c.is_zero() {
            return NcPoly::zero(self.nvars);
        }
        NcPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// Concatenation-of-words product, extended bilinearly.
    pub fn mul(&self, rhs: &NcPoly) -> Result<NcPoly> {
        self.check_nvars(rhs)?;
        let mut out = NcPoly::zero(self.nvars);
        for (ml, cl) in &self.terms {
            for (mr, cr) in &rhs.terms {
                out.add_term(ml.concat(mr), cl * cr);
            }
        }
        Ok(out)
    }

    /// Product with degree and term-count guards; relator substitution goes
    /// through here because expansion grows as 2^length.
    pub fn checked_mul(&self, rhs: &NcPoly, limits: &Limits) -> Result<NcPoly> {
        let out = self.mul(rhs)?;
        if out.degree() > limits.max_degree {
            return Err(Error::resource(format!(
                "product degree {} exceeds the cap of {}",
                out.degree(),
                limits.max_degree
            )));
        }
        if out.num_terms() > limits.max_terms {
            return Err(Error::resource(format!(
                "product has {} terms, exceeding the cap of {}",
                out.num_terms(),
                limits.max_terms
            )));
        }
        Ok(out)
    }

    /// The involution *: coefficients conjugated, words reversed; the
    /// variables themselves are fixed (they stand for self-adjoint elements).
    pub fn star(&self) -> NcPoly {
        NcPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.reversed(), c.conj()))
                .collect(),
        }
    }

    /// The free difference quotient ∂_j, determined by the Leibniz rule and
    /// ∂_j t_i = δ_{i=j} 1⊗1. On a word v_1…v_d it sums, over the positions
    /// `a` carrying variable j, the split (v_1…v_{a-1}) ⊗ (v_{a+1}…v_d).
    pub fn differentiate(&self, j: u32) -> Result<TensorPoly> {
        if j == 0 || j as usize > self.nvars {
            return Err(Error::usage(format!(
                "derivation index {j} out of range 1..={}",
                self.nvars
            )));
        }
        let mut out = TensorPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            for (left, right) in m.split_at_var(j) {
                out.add_term(left, right, c.clone());
            }
        }
        Ok(out)
    }
}

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().map(|(m, c)| (c, MonoText(m))))
    }
}

struct MonoText<'a>(&'a Monomial);

impl fmt::Display for MonoText<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Shared term-list rendering for polynomials and tensor polynomials:
/// terms in canonical order joined by ` + `/` - `, with unit coefficients
/// elided in front of nonunit monomials.
pub(crate) fn write_terms<'a, M: fmt::Display, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: Iterator<Item = (&'a GaussianRational, M)>,
{
    let mut any = false;
    for (c, mono) in terms {
        let rendered = render_term(c, &mono);
        if !any {
            write!(f, "{rendered}")?;
        } else if let Some(stripped) = rendered.strip_prefix('-') {
            write!(f, " - {stripped}")?;
        } else {
            write!(f, " + {rendered}")?;
        }
        any = true;
    }
    if !any {
        write!(f, "0")?;
    }
    Ok(())
}

fn render_term<M: fmt::Display>(c: &GaussianRational, mono: &M) -> String {
    let mono = mono.to_string();
    if mono == "1" {
        return c.to_string();
    }
    if c.is_one() {
        return mono;
    }
    if (-c).is_one() {
        return format!("-{mono}");
    }
    format!("{c}*{mono}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(j: u32) -> NcPoly {
        NcPoly::var(2, j).unwrap()
    }

    #[test]
    fn word_product() {
        // t_1 * t_2 is the single word (1,2) with coefficient 1
        let p = var(1).mul(&var(2)).unwrap();
        let terms: Vec<_> = p.terms().collect();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].0, &Monomial::from_vars(vec![1, 2]));
        assert!(terms[0].1.is_one());
    }

    #[test]
    fn additive_inverse_cancels() {
        let p = var(1).mul(&var(2)).unwrap().add(&var(1)).unwrap();
        let z = p.add(&p.scale(&GaussianRational::from_integer(-1))).unwrap();
        assert!(z.is_zero());
        assert_eq!(z, NcPoly::zero(2));
    }

    #[test]
    fn product_expansion() {
        // (t1 + t2)(t1 - t2) = t1 t1 - t1 t2 + t2 t1 - t2 t2
        let sum = var(1).add(&var(2)).unwrap();
        let diff = var(1).sub(&var(2)).unwrap();
        let p = sum.mul(&diff).unwrap();
        let expected = NcPoly::from_terms(
            2,
            vec![
                (Monomial::from_vars(vec![1, 1]), GaussianRational::one()),
                (Monomial::from_vars(vec![1, 2]), GaussianRational::from_integer(-1)),
                (Monomial::from_vars(vec![2, 1]), GaussianRational::one()),
                (Monomial::from_vars(vec![2, 2]), GaussianRational::from_integer(-1)),
            ],
        )
        .unwrap();
        assert_eq!(p, expected);
    }

    #[test]
    fn involution_examples() {
        // (i t1 t2)* = -i t2 t1
        let p = var(1)
            .mul(&var(2))
            .unwrap()
            .scale(&GaussianRational::i());
        let expected = NcPoly::from_terms(
            2,
            vec![(Monomial::from_vars(vec![2, 1]), -GaussianRational::i())],
        )
        .unwrap();
        assert_eq!(p.star(), expected);
        // generators are fixed
        assert_eq!(var(1).star(), var(1));
        // (t1 - i t2)(t1 + i t2) is formally self-adjoint
        let z = var(1).sub(&var(2).scale(&GaussianRational::i())).unwrap();
        let zb = var(1).add(&var(2).scale(&GaussianRational::i())).unwrap();
        let prod = z.mul(&zb).unwrap();
        assert_eq!(prod.star(), prod);
    }

    #[test]
    fn differentiate_generators() {
        // ∂_1 t_1 = 1⊗1, ∂_2 t_1 = 0
        let d = var(1).differentiate(1).unwrap();
        assert_eq!(d, TensorPoly::one_tensor_one(2));
        assert!(var(1).differentiate(2).unwrap().is_zero());
    }

    #[test]
    fn differentiate_word() {
        // ∂_1 (t1 t2 t1) = 1⊗(t2 t1) + (t1 t2)⊗1
        let w = var(1).mul(&var(2)).unwrap().mul(&var(1)).unwrap();
        let d = w.differentiate(1).unwrap();
        let mut expected = TensorPoly::zero(2);
        expected.add_term(
            Monomial::unit(),
            Monomial::from_vars(vec![2, 1]),
            GaussianRational::one(),
        );
        expected.add_term(
            Monomial::from_vars(vec![1, 2]),
            Monomial::unit(),
            GaussianRational::one(),
        );
        assert_eq!(d, expected);
    }

    #[test]
    fn index_errors() {
        assert!(var(1).differentiate(0).is_err());
        assert!(var(1).differentiate(3).is_err());
        let q = NcPoly::var(4, 1).unwrap();
        assert!(var(1).add(&q).is_err());
        assert!(var(1).mul(&q).is_err());
    }

    #[test]
    fn caps_fire() {
        let limits = Limits {
            max_degree: 3,
            max_terms: 1_000_000,
        };
        let p = var(1).mul(&var(2)).unwrap();
        assert!(p.checked_mul(&p, &limits).is_err());
        let tight = Limits {
            max_degree: 64,
            max_terms: 1,
        };
        let s = var(1).add(&var(2)).unwrap();
        assert!(s.checked_mul(&s, &tight).is_err());
    }

    #[test]
    fn display_canonical() {
        let z = var(1).sub(&var(2).scale(&GaussianRational::i())).unwrap();
        let zb = var(1).add(&var(2).scale(&GaussianRational::i())).unwrap();
        let f = z
            .mul(&zb)
            .unwrap()
            .add(&NcPoly::constant(2, GaussianRational::from_integer(-4)))
            .unwrap();
        assert_eq!(f.to_string(), "-4 + t1*t1 + i*t1*t2 - i*t2*t1 + t2*t2");
        assert_eq!(NcPoly::zero(2).to_string(), "0");
    }
}
