use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ncalg::monomial::Monomial;
use crate::ncalg::poly::{write_terms, NcPoly};
use crate::scalar::GaussianRational;

/// An element of the tensor square of the polynomial algebra: a finite
/// ℚ(i)-combination of elementary tensors `left ⊗ right`.
///
/// Difference quotients land here; the `#` contraction sends it back to the
/// polynomial algebra. Canonical form (no zero coefficients) is maintained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorPoly {
    nvars: usize,
    terms: BTreeMap<(Monomial, Monomial), GaussianRational>,
}

impl TensorPoly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars >= 1, "nvars must be positive");
        TensorPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    /// The unit tensor 1⊗1.
    pub fn one_tensor_one(nvars: usize) -> Self {
        let mut t = Self::zero(nvars);
        t.add_term(Monomial::unit(), Monomial::unit(), GaussianRational::one());
        t
    }

    /// The elementary tensor p⊗q, extended bilinearly over the terms.
    pub fn outer(p: &NcPoly, q: &NcPoly) -> Result<Self> {
        if p.nvars() != q.nvars() {
            return Err(Error::usage(format!(
                "mismatched nvars: {} vs {}",
                p.nvars(),
                q.nvars()
            )));
        }
        let mut out = Self::zero(p.nvars());
        for (ml, cl) in p.terms() {
            for (mr, cr) in q.terms() {
                out.add_term(ml.clone(), mr.clone(), cl * cr);
            }
        }
        Ok(out)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Monomial, Monomial), &GaussianRational)> {
        self.terms.iter()
    }

    pub(crate) fn add_term(&mut self, left: Monomial, right: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((left, right)) {
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

    fn check_nvars(&self, other_nvars: usize) -> Result<()> {
        if self.nvars != other_nvars {
            return Err(Error::usage(format!(
                "mismatched nvars: {} vs {}",
                self.nvars, other_nvars
            )));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &TensorPoly) -> Result<TensorPoly> {
        self.check_nvars(rhs.nvars)?;
        let mut out = self.clone();
        for ((l, r), c) in &rhs.terms {
            out.add_term(l.clone(), r.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> TensorPoly {
        TensorPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|((l, r), c)| ((l.clone(), r.clone()), -c))
                .collect(),
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> TensorPoly {
        if c.is_zero() {
            return TensorPoly::zero(self.nvars);
        }
        TensorPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|((l, r), k)| ((l.clone(), r.clone()), k * c))
                .collect(),
        }
    }

    /// Factorwise product: (a⊗b)(c⊗d) = (ac)⊗(bd). This is the
    /// multiplication under which the Leibniz rule reads
    /// ∂(pq) = ∂p · (1⊗q) + (p⊗1) · ∂q.
    pub fn mul(&self, rhs: &TensorPoly) -> Result<TensorPoly> {
        self.check_nvars(rhs.nvars)?;
        let mut out = TensorPoly::zero(self.nvars);
        for ((l1, r1), c1) in &self.terms {
            for ((l2, r2), c2) in &rhs.terms {
                out.add_term(l1.concat(l2), r1.concat(r2), c1 * c2);
            }
        }
        Ok(out)
    }

    /// The contraction (a⊗b)#x = a·x·b, extended bilinearly.
    pub fn contract(&self, x: &NcPoly) -> Result<NcPoly> {
        self.check_nvars(x.nvars())?;
        let mut out = NcPoly::zero(self.nvars);
        for ((l, r), c) in &self.terms {
            let left = NcPoly::from_terms(self.nvars, [(l.clone(), c.clone())])?;
            let right = NcPoly::from_terms(self.nvars, [(r.clone(), GaussianRational::one())])?;
            out = out.add(&left.mul(x)?.mul(&right)?)?;
        }
        Ok(out)
    }

    /// Swap the tensor legs, reverse each leg, and conjugate coefficients.
    /// For self-adjoint generators this matches differentiation after the
    /// involution: ∂_j(p*) = flip_conj(∂_j p).
    pub fn flip_conj(&self) -> TensorPoly {
        TensorPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|((l, r), c)| ((r.reversed(), l.reversed()), c.conj()))
                .collect(),
        }
    }
}

impl fmt::Display for TensorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            self.terms.iter().map(|((l, r), c)| (c, TensorMonoText(l, r))),
        )
    }
}

struct TensorMonoText<'a>(&'a Monomial, &'a Monomial);

impl fmt::Display for TensorMonoText<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} (x) {}]", self.0, self.1)
    }
}
