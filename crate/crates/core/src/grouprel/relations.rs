//! The relation system F and its symbolic Jacobian.
//!
//! For a presentation with m generators the group algebra is generated by
//! the 2m self-adjoint elements X_j = g_j + g_j^{-1} and
//! X_{m+j} = i(g_j − g_j^{-1}). Inverting that convention substitutes
//!
//! ```text
//! g_j      ↦ ½ (t_j − i t_{m+j})
//! g_j^{-1} ↦ ½ (t_j + i t_{m+j})
//! ```
//!
//! The unit relations g_j g_j^{-1} = g_j^{-1} g_j = 1, cleared of the ¼
//! factor, become
//!
//! ```text
//! F'_j  = (t_j − i t_{m+j})(t_j + i t_{m+j}) − 4
//! F''_j = (t_j + i t_{m+j})(t_j − i t_{m+j}) − 4
//! ```
//!
//! and every relator R contributes F''' = R̂ − 1, where R̂ substitutes the
//! letters and multiplies in order (keeping its exact 2^{-length} factor).
//! Every polynomial vanishes identically when evaluated at the image of an
//! actual representation of the group.

use crate::error::{Error, Result};
use crate::grouprel::presentation::{GroupWord, Presentation};
use crate::ncalg::{Limits, NcPoly, TensorPoly};
use crate::scalar::GaussianRational;

/// The degree-one substitution polynomials for one generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSubstitution {
    /// Image of g_j: ½(t_j − i t_{m+j}).
    pub direct: NcPoly,
    /// Image of g_j^{-1}: ½(t_j + i t_{m+j}).
    pub inverse: NcPoly,
}

/// Labels for the three families of relation polynomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationKind {
    /// F'_j, from g_j g_j^{-1} = 1.
    UnitDirect(usize),
    /// F''_j, from g_j^{-1} g_j = 1.
    UnitInverse(usize),
    /// F'''_r, from relator r.
    Relator(usize),
}

impl RelationKind {
    pub fn label(&self) -> String {
        match self {
            RelationKind::UnitDirect(j) => format!("F'_{j}"),
            RelationKind::UnitInverse(j) => format!("F''_{j}"),
            RelationKind::Relator(r) => format!("F'''_{r}"),
        }
    }
}

/// The tuple F = (F', F'', F''') for a presentation, with n = 2m variables
/// and k = 2m + p polynomials (unit relations first, then relators).
#[derive(Debug, Clone)]
pub struct RelationSystem {
    n: usize,
    m: usize,
    polys: Vec<(RelationKind, NcPoly)>,
    substitution: Vec<GeneratorSubstitution>,
}

impl RelationSystem {
    /// Builds the relation system with default expansion limits.
    pub fn build(presentation: &Presentation) -> Result<Self> {
        Self::build_with_limits(presentation, &Limits::default())
    }

    pub fn build_with_limits(presentation: &Presentation, limits: &Limits) -> Result<Self> {
        let m = presentation.num_generators();
        if m == 0 {
            return Err(Error::usage("presentation has no generators"));
        }
        let n = 2 * m;
        let substitution = build_generators(m)?;

        let minus_four = NcPoly::constant(n, GaussianRational::from_integer(-4));
        let minus_one = NcPoly::constant(n, GaussianRational::from_integer(-1));
        let two = GaussianRational::from_integer(2);

        let mut polys = Vec::with_capacity(n + presentation.num_relators());
        for (j, sub) in substitution.iter().enumerate() {
            // Clear the ¼ so the unit relations stay Gaussian-integral; row
            // scaling does not change the kernel of the Jacobian.
            let z = sub.direct.scale(&two);
            let zbar = sub.inverse.scale(&two);
            polys.push((
                RelationKind::UnitDirect(j + 1),
                z.mul(&zbar)?.add(&minus_four)?,
            ));
            polys.push((
                RelationKind::UnitInverse(j + 1),
                zbar.mul(&z)?.add(&minus_four)?,
            ));
        }
        for (r, relator) in presentation.relators.iter().enumerate() {
            let rhat = substitute_word(relator, &substitution, n, limits).map_err(|e| match e {
                Error::Resource(msg) => Error::resource(format!(
                    "expanding relator #{} ({}): {msg}",
                    r + 1,
                    presentation.word_text(relator)
                )),
                other => other,
            })?;
            polys.push((RelationKind::Relator(r + 1), rhat.add(&minus_one)?));
        }

        Ok(RelationSystem {
            n,
            m,
            polys,
            substitution,
        })
    }

    /// Number of polynomial variables (2m).
    pub fn num_vars(&self) -> usize {
        self.n
    }

    /// Number of relation polynomials (2m + p).
    pub fn num_relations(&self) -> usize {
        self.polys.len()
    }

    /// Number of group generators.
    pub fn num_generators(&self) -> usize {
        self.m
    }

    pub fn relations(&self) -> impl Iterator<Item = (&RelationKind, &NcPoly)> {
        self.polys.iter().map(|(k, p)| (k, p))
    }

    pub fn polynomials(&self) -> impl Iterator<Item = &NcPoly> {
        self.polys.iter().map(|(_, p)| p)
    }

    pub fn polynomial(&self, i: usize) -> &NcPoly {
        &self.polys[i].1
    }

    pub fn kind(&self, i: usize) -> RelationKind {
        self.polys[i].0
    }

    /// The substitution g_j, g_j^{-1} ↦ degree-one polynomials.
    pub fn substitution(&self) -> &[GeneratorSubstitution] {
        &self.substitution
    }

    /// Returns a copy with row i scaled by c (used to check that rank is
    /// invariant under nonzero row scalings).
    pub fn with_scaled_row(&self, i: usize, c: &GaussianRational) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::usage("row scaling must be nonzero"));
        }
        if i >= self.polys.len() {
            return Err(Error::usage(format!("row {i} out of range")));
        }
        let mut out = self.clone();
        out.polys[i].1 = out.polys[i].1.scale(c);
        Ok(out)
    }

    /// Substitutes an arbitrary word of the presentation's free group, e.g.
    /// for checking inverse-relator identities.
    pub fn substitute(&self, word: &GroupWord, limits: &Limits) -> Result<NcPoly> {
        substitute_word(word, &self.substitution, self.n, limits)
    }
}

/// The substitution map derived from X_j = g_j + g_j^{-1},
/// X_{m+j} = i(g_j − g_j^{-1}).
pub fn build_generators(m: usize) -> Result<Vec<GeneratorSubstitution>> {
    let n = 2 * m;
    let half = GaussianRational::rational(1, 2);
    let half_i = GaussianRational::complex(0, 1, 1, 2);
    (1..=m)
        .map(|j| {
            let tj = NcPoly::var(n, j as u32)?;
            let tmj = NcPoly::var(n, (m + j) as u32)?;
            let direct = tj.scale(&half).sub(&tmj.scale(&half_i))?;
            let inverse = tj.scale(&half).add(&tmj.scale(&half_i))?;
            Ok(GeneratorSubstitution { direct, inverse })
        })
        .collect()
}

fn substitute_word(
    word: &GroupWord,
    substitution: &[GeneratorSubstitution],
    n: usize,
    limits: &Limits,
) -> Result<NcPoly> {
    let mut acc = NcPoly::one(n);
    for letter in word.letters() {
        let sub = substitution.get(letter.gen - 1).ok_or_else(|| {
            Error::usage(format!("letter references unknown generator {}", letter.gen))
        })?;
        let factor = if letter.exp == 1 {
            &sub.direct
        } else {
            &sub.inverse
        };
        acc = acc.checked_mul(factor, limits)?;
    }
    Ok(acc)
}

/// The k×n matrix of difference quotients (∂_j F_i), stored row-major.
#[derive(Debug, Clone)]
pub struct Jacobian {
    k: usize,
    n: usize,
    entries: Vec<TensorPoly>,
}

impl Jacobian {
    pub fn build(system: &RelationSystem) -> Result<Self> {
        let k = system.num_relations();
        let n = system.num_vars();
        let mut entries = Vec::with_capacity(k * n);
        for (_, poly) in system.relations() {
            for j in 1..=n {
                entries.push(poly.differentiate(j as u32)?);
            }
        }
        Ok(Jacobian { k, n, entries })
    }

    pub fn num_rows(&self) -> usize {
        self.k
    }

    pub fn num_cols(&self) -> usize {
        self.n
    }

    /// Entry (i, j), 0-based.
    pub fn entry(&self, i: usize, j: usize) -> &TensorPoly {
        &self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[TensorPoly] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouprel::presentation::parse_presentation;
    use crate::ncalg::Monomial;

    fn z_presentation() -> Presentation {
        parse_presentation("group Z\ngens a\norder infinite").unwrap()
    }

    fn zmod2_presentation() -> Presentation {
        parse_presentation("group Zmod2\ngens a\nrel a^2\norder finite 2").unwrap()
    }

    #[test]
    fn generator_substitution_m1() {
        let subs = build_generators(1).unwrap();
        // g ↦ ½(t1 − i t2), g^{-1} ↦ ½(t1 + i t2)
        let half = GaussianRational::rational(1, 2);
        let mhalf_i = GaussianRational::complex(0, 1, -1, 2);
        let expected_direct = NcPoly::from_terms(
            2,
            vec![(Monomial::var(1), half.clone()), (Monomial::var(2), mhalf_i)],
        )
        .unwrap();
        assert_eq!(subs[0].direct, expected_direct);
        let half_i = GaussianRational::complex(0, 1, 1, 2);
        let expected_inverse = NcPoly::from_terms(
            2,
            vec![(Monomial::var(1), half.clone()), (Monomial::var(2), half_i)],
        )
        .unwrap();
        assert_eq!(subs[0].inverse, expected_inverse);
    }

    #[test]
    fn generator_substitution_m2_shifts_indices() {
        let subs = build_generators(2).unwrap();
        // g_2 ↦ ½(t2 − i t4)
        let half = GaussianRational::rational(1, 2);
        let mhalf_i = GaussianRational::complex(0, 1, -1, 2);
        let expected = NcPoly::from_terms(
            4,
            vec![(Monomial::var(2), half), (Monomial::var(4), mhalf_i)],
        )
        .unwrap();
        assert_eq!(subs[1].direct, expected);
    }

    #[test]
    fn z_system_shape_and_text() {
        let rs = RelationSystem::build(&z_presentation()).unwrap();
        assert_eq!(rs.num_vars(), 2);
        assert_eq!(rs.num_relations(), 2);
        assert_eq!(
            rs.polynomial(0).to_string(),
            "-4 + t1*t1 + i*t1*t2 - i*t2*t1 + t2*t2"
        );
        assert_eq!(
            rs.polynomial(1).to_string(),
            "-4 + t1*t1 - i*t1*t2 + i*t2*t1 + t2*t2"
        );
        assert_eq!(rs.kind(0).label(), "F'_1");
        assert_eq!(rs.kind(1).label(), "F''_1");
    }

    #[test]
    fn zmod2_relator_polynomial() {
        let rs = RelationSystem::build(&zmod2_presentation()).unwrap();
        assert_eq!(rs.num_relations(), 3);
        // F''' = ¼(t1 − i t2)^2 − 1
        let quarter = GaussianRational::rational(1, 4);
        let m_quarter_i = GaussianRational::complex(0, 1, -1, 4);
        let expected = NcPoly::from_terms(
            2,
            vec![
                (Monomial::unit(), GaussianRational::from_integer(-1)),
                (Monomial::from_vars(vec![1, 1]), quarter.clone()),
                (Monomial::from_vars(vec![1, 2]), m_quarter_i.clone()),
                (Monomial::from_vars(vec![2, 1]), m_quarter_i),
                (
                    Monomial::from_vars(vec![2, 2]),
                    GaussianRational::rational(-1, 4),
                ),
            ],
        )
        .unwrap();
        assert_eq!(rs.polynomial(2), &expected);
    }

    #[test]
    fn unit_relations_are_self_adjoint() {
        let p = parse_presentation("gens a b\nrel a b a^-1 b^-1\norder infinite").unwrap();
        let rs = RelationSystem::build(&p).unwrap();
        for (kind, poly) in rs.relations() {
            match kind {
                RelationKind::Relator(_) => {}
                _ => assert_eq!(&poly.star(), poly, "{} not fixed by *", kind.label()),
            }
        }
    }

    #[test]
    fn jacobian_entries() {
        // Z: entry (F'_1, t1) = 1⊗(t1 + i t2) + (t1 − i t2)⊗1
        let rs = RelationSystem::build(&z_presentation()).unwrap();
        let jac = Jacobian::build(&rs).unwrap();
        let i = GaussianRational::i();
        let t1 = NcPoly::var(2, 1).unwrap();
        let t2 = NcPoly::var(2, 2).unwrap();
        let z = t1.sub(&t2.scale(&i)).unwrap();
        let zbar = t1.add(&t2.scale(&i)).unwrap();
        let expected = TensorPoly::outer(&NcPoly::one(2), &zbar)
            .unwrap()
            .add(&TensorPoly::outer(&z, &NcPoly::one(2)).unwrap())
            .unwrap();
        assert_eq!(jac.entry(0, 0), &expected);

        // Z^2: F'_1 only involves the first generator's pair (t1, t3), so
        // the entries at t2 and t4 vanish
        let p2 = parse_presentation("gens a b\nrel a b a^-1 b^-1\norder infinite").unwrap();
        let rs2 = RelationSystem::build(&p2).unwrap();
        let jac2 = Jacobian::build(&rs2).unwrap();
        assert!(jac2.entry(0, 1).is_zero());
        assert!(jac2.entry(0, 3).is_zero());
        assert!(!jac2.entry(0, 2).is_zero());

        // Z/2: entry (F'''_1, t1) = ¼[1⊗(t1 − i t2) + (t1 − i t2)⊗1]
        let rs3 = RelationSystem::build(&zmod2_presentation()).unwrap();
        let jac3 = Jacobian::build(&rs3).unwrap();
        let quarter = GaussianRational::rational(1, 4);
        let expected3 = TensorPoly::outer(&NcPoly::one(2), &z)
            .unwrap()
            .add(&TensorPoly::outer(&z, &NcPoly::one(2)).unwrap())
            .unwrap()
            .scale(&quarter);
        assert_eq!(jac3.entry(2, 0), &expected3);
    }

    #[test]
    fn jacobian_completeness_unit_rows() {
        // every variable appears in the unit-relation rows of its generator
        let p = parse_presentation("gens a b\norder infinite").unwrap();
        let rs = RelationSystem::build(&p).unwrap();
        let jac = Jacobian::build(&rs).unwrap();
        for j in 0..rs.num_vars() {
            assert!(
                (0..rs.num_relations()).any(|i| !jac.entry(i, j).is_zero()),
                "variable t{} appears in no Jacobian entry",
                j + 1
            );
        }
    }

    #[test]
    fn relator_cap_names_the_relator() {
        let p = parse_presentation("gens a\nrel a^9\norder finite 9").unwrap();
        let limits = Limits {
            max_degree: 64,
            max_terms: 100,
        };
        let err = RelationSystem::build_with_limits(&p, &limits).unwrap_err();
        match err {
            Error::Resource(msg) => {
                assert!(msg.contains("relator #1"), "message was: {msg}");
                assert!(msg.contains("a a a"), "message was: {msg}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn row_scaling() {
        let rs = RelationSystem::build(&z_presentation()).unwrap();
        let scaled = rs
            .with_scaled_row(0, &GaussianRational::rational(3, 2))
            .unwrap();
        assert_eq!(
            scaled.polynomial(0),
            &rs.polynomial(0).scale(&GaussianRational::rational(3, 2))
        );
        assert!(rs
            .with_scaled_row(0, &GaussianRational::zero())
            .is_err());
    }
}
