use std::cmp::Ordering;
use std::fmt;

/// A word in the noncommuting variables t_1, …, t_n.
///
/// Stored as the sequence of 1-based variable indices; the empty word is the
/// multiplicative unit. Equality is sequence equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    vars: Vec<u32>,
}

impl Monomial {
    /// The empty word (multiplicative identity).
    pub fn unit() -> Self {
        Monomial { vars: Vec::new() }
    }

    /// The single variable t_j (1-based).
    pub fn var(j: u32) -> Self {
        assert!(j >= 1, "variable indices are 1-based");
        Monomial { vars: vec![j] }
    }

    pub fn from_vars(vars: Vec<u32>) -> Self {
        assert!(vars.iter().all(|&v| v >= 1), "variable indices are 1-based");
        Monomial { vars }
    }

    pub fn vars(&self) -> &[u32] {
        &self.vars
    }

    pub fn degree(&self) -> usize {
        self.vars.len()
    }

    pub fn is_unit(&self) -> bool {
        self.vars.is_empty()
    }

    /// Largest variable index appearing, or 0 for the unit.
    pub fn max_var(&self) -> u32 {
        self.vars.iter().copied().max().unwrap_or(0)
    }

    /// Concatenation product of words.
    pub fn concat(&self, rhs: &Monomial) -> Monomial {
        let mut vars = Vec::with_capacity(self.vars.len() + rhs.vars.len());
        vars.extend_from_slice(&self.vars);
        vars.extend_from_slice(&rhs.vars);
        Monomial { vars }
    }

    /// The reversed word; combined with coefficient conjugation this is the
    /// involution on monomials in self-adjoint variables.
    pub fn reversed(&self) -> Monomial {
        let mut vars = self.vars.clone();
        vars.reverse();
        Monomial { vars }
    }

    /// Positions `a` with `vars[a] == j`, with the flanking subwords; this is
    /// the combinatorial core of the difference quotient.
    pub fn split_at_var(&self, j: u32) -> impl Iterator<Item = (Monomial, Monomial)> + '_ {
        self.vars
            .iter()
            .enumerate()
            .filter(move |(_, &v)| v == j)
            .map(|(a, _)| {
                (
                    Monomial {
                        vars: self.vars[..a].to_vec(),
                    },
                    Monomial {
                        vars: self.vars[a + 1..].to_vec(),
                    },
                )
            })
    }
}

/// Canonical order: total degree first, then lexicographic on the index
/// sequence. This fixes the term order of all rendered polynomials.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.vars.cmp(&other.vars))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vars.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for v in &self.vars {
            if !first {
                write!(f, "*")?;
            }
            write!(f, "t{v}")?;
            first = false;
        }
        Ok(())
    }
}
