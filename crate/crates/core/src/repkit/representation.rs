use std::fmt;

use faer::Mat;
use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::grouprel::Presentation;
use crate::repkit::eval::operator_norm;

/// How a generator image is stored. Permutations keep their index array
/// (entry (u, v) = 1 iff u = σ(v)); everything else is a dense row-major
/// complex matrix.
#[derive(Debug, Clone)]
pub enum GeneratorMatrix {
    Permutation(Vec<usize>),
    Dense(Mat<Complex64>),
}

impl GeneratorMatrix {
    pub fn dim(&self) -> usize {
        match self {
            GeneratorMatrix::Permutation(images) => images.len(),
            GeneratorMatrix::Dense(m) => m.nrows(),
        }
    }

    /// Dense materialization of the unitary U.
    pub fn to_dense(&self) -> Mat<Complex64> {
        match self {
            GeneratorMatrix::Permutation(images) => {
                let d = images.len();
                let mut m = Mat::zeros(d, d);
                for (v, &u) in images.iter().enumerate() {
                    m[(u, v)] = Complex64::new(1.0, 0.0);
                }
                m
            }
            GeneratorMatrix::Dense(m) => m.clone(),
        }
    }

    /// Max-entry norm of U*U − I; exactly zero for permutations.
    pub fn unitarity_defect(&self) -> f64 {
        match self {
            GeneratorMatrix::Permutation(_) => 0.0,
            GeneratorMatrix::Dense(m) => {
                let gram = m.adjoint().to_owned() * m;
                let d = m.nrows();
                let mut worst: f64 = 0.0;
                for r in 0..d {
                    for c in 0..d {
                        let expected = if r == c { 1.0 } else { 0.0 };
                        worst = worst.max((gram[(r, c)] - expected).norm());
                    }
                }
                worst
            }
        }
    }
}

/// Which family a representation came from, with its parameters. The
/// descriptor string round-trips through the CLI `--rep` syntax.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Cyclic { size: usize },
    Torus { size: usize },
    RegularCyclic { size: usize },
    RandPerm { size: usize, seed: u64 },
    File { path: String },
}

impl Family {
    /// Exact families carry zero relator defect by construction and are
    /// required to; sofic proxies and loaded files only report theirs.
    pub fn is_exact(&self) -> bool {
        matches!(
            self,
            Family::Cyclic { .. } | Family::Torus { .. } | Family::RegularCyclic { .. }
        )
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Cyclic { size } => write!(f, "cyclic:{size}"),
            Family::Torus { size } => write!(f, "torus:{size}"),
            Family::RegularCyclic { size } => write!(f, "regular-cyclic:{size}"),
            Family::RandPerm { size, seed } => write!(f, "randperm:{size}:{seed}"),
            Family::File { path } => write!(f, "file:{path}"),
        }
    }
}

/// A finite-dimensional unitary tuple standing in for the group generators.
///
/// Immutable after construction; all families are bit-reproducible from
/// their parameters (and seed).
#[derive(Debug, Clone)]
pub struct Representation {
    dim: usize,
    mats: Vec<GeneratorMatrix>,
    family: Family,
}

impl Representation {
    pub fn new(dim: usize, mats: Vec<GeneratorMatrix>, family: Family) -> Result<Self> {
        if dim == 0 {
            return Err(Error::usage("representation dimension must be positive"));
        }
        if mats.is_empty() {
            return Err(Error::usage("representation needs at least one generator"));
        }
        for (g, m) in mats.iter().enumerate() {
            if m.dim() != dim {
                return Err(Error::usage(format!(
                    "generator {} has dimension {} instead of {dim}",
                    g + 1,
                    m.dim()
                )));
            }
        }
        Ok(Representation { dim, mats, family })
    }

    /// Dimension D of the representation space.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of group generators m.
    pub fn num_generators(&self) -> usize {
        self.mats.len()
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn generator(&self, j: usize) -> &GeneratorMatrix {
        &self.mats[j]
    }

    pub fn generators(&self) -> &[GeneratorMatrix] {
        &self.mats
    }

    /// Worst unitarity defect over the generators.
    pub fn unitarity_defect(&self) -> f64 {
        self.mats
            .iter()
            .map(GeneratorMatrix::unitarity_defect)
            .fold(0.0, f64::max)
    }

    /// Operator-norm defect ‖R(U) − I‖ for each relator of the presentation.
    /// Exact quotient families give zeros (up to rounding); sofic proxies
    /// report whatever they have.
    pub fn relator_defects(&self, presentation: &Presentation) -> Result<Vec<f64>> {
        if presentation.num_generators() != self.num_generators() {
            return Err(Error::usage(format!(
                "presentation has {} generators but the representation has {}",
                presentation.num_generators(),
                self.num_generators()
            )));
        }
        let dense: Vec<Mat<Complex64>> = self.mats.iter().map(|m| m.to_dense()).collect();
        presentation
            .relators
            .iter()
            .map(|word| {
                let mut acc = Mat::<Complex64>::identity(self.dim, self.dim);
                for letter in word.letters() {
                    let u = &dense[letter.gen - 1];
                    acc = if letter.exp == 1 {
                        acc * u
                    } else {
                        acc * u.adjoint()
                    };
                }
                for r in 0..self.dim {
                    acc[(r, r)] -= Complex64::new(1.0, 0.0);
                }
                operator_norm(acc.as_ref())
            })
            .collect()
    }

    /// If all generator images are simultaneously diagonalized by a known
    /// unitary basis (the circulant families), returns per-generator
    /// eigenvalue lists in that common basis. This feeds the fast spectral
    /// path; `None` means only the dense routes apply.
    pub fn simultaneous_eigenvalues(&self) -> Option<Vec<Vec<Complex64>>> {
        fn roots(size: usize, dim: usize, stride: usize) -> Vec<Complex64> {
            // eigenvalue of the size-cycle at basis index (q / stride) mod size
            (0..dim)
                .map(|q| {
                    let k = (q / stride) % size;
                    let angle = 2.0 * std::f64::consts::PI * (k as f64) / (size as f64);
                    Complex64::new(angle.cos(), angle.sin())
                })
                .collect()
        }
        match &self.family {
            Family::Cyclic { size } | Family::RegularCyclic { size } => {
                Some(vec![roots(*size, self.dim, 1)])
            }
            Family::Torus { size } => Some(vec![
                roots(*size, self.dim, *size),
                roots(*size, self.dim, 1),
            ]),
            _ => None,
        }
    }
}

fn cycle_images(n: usize) -> Vec<usize> {
    (0..n).map(|v| (v + 1) % n).collect()
}

/// The n-cycle permutation representation of a single generator (the image
/// of ℤ in the quotient ℤ/N).
pub fn cyclic_shift(n: usize) -> Result<Representation> {
    if n == 0 {
        return Err(Error::usage("cyclic shift size must be at least 1"));
    }
    Representation::new(
        n,
        vec![GeneratorMatrix::Permutation(cycle_images(n))],
        Family::Cyclic { size: n },
    )
}

/// The left regular representation of ℤ/k: the same k-cycle, used with the
/// one-relator presentation of ℤ/k.
pub fn regular_cyclic(k: usize) -> Result<Representation> {
    if k == 0 {
        return Err(Error::usage("regular cyclic size must be at least 1"));
    }
    Representation::new(
        k,
        vec![GeneratorMatrix::Permutation(cycle_images(k))],
        Family::RegularCyclic { size: k },
    )
}

/// Two commuting shifts on (ℤ/N)²: shift⊗identity and identity⊗shift, each
/// of dimension N².
pub fn torus(n: usize) -> Result<Representation> {
    if n == 0 {
        return Err(Error::usage("torus size must be at least 1"));
    }
    let d = n * n;
    // index q = a*n + b represents basis vector e_a ⊗ e_b
    let first = (0..d)
        .map(|q| {
            let (a, b) = (q / n, q % n);
            ((a + 1) % n) * n + b
        })
        .collect();
    let second = (0..d)
        .map(|q| {
            let (a, b) = (q / n, q % n);
            a * n + (b + 1) % n
        })
        .collect();
    Representation::new(
        d,
        vec![
            GeneratorMatrix::Permutation(first),
            GeneratorMatrix::Permutation(second),
        ],
        Family::Torus { size: n },
    )
}

/// Draws a uniform value in 0..bound from the ChaCha stream, rejecting the
/// biased tail of the 64-bit range.
fn bounded(rng: &mut ChaCha8Rng, bound: u64) -> u64 {
    debug_assert!(bound > 0);
    let threshold = bound.wrapping_neg() % bound; // 2^64 mod bound
    loop {
        let x = rng.next_u64();
        if x >= threshold {
            return x % bound;
        }
    }
}

/// m independent uniform random permutation matrices of size N, drawn by a
/// Fisher–Yates shuffle over a ChaCha8 stream seeded with `seed`. The output
/// is identical for identical (N, m, seed) on every platform; seed 0 is the
/// conventional choice in documentation examples.
pub fn random_permutations(n: usize, m: usize, seed: u64) -> Result<Representation> {
    if n == 0 || m == 0 {
        return Err(Error::usage("randperm needs n >= 1 and m >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mats = (0..m)
        .map(|_| {
            let mut images: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                let j = bounded(&mut rng, (i + 1) as u64) as usize;
                images.swap(i, j);
            }
            GeneratorMatrix::Permutation(images)
        })
        .collect();
    Representation::new(n, mats, Family::RandPerm { size: n, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouprel::parse_presentation;

    #[test]
    fn cyclic_small_cases() {
        let r = cyclic_shift(1).unwrap();
        assert_eq!(r.dim(), 1);
        let m = r.generator(0).to_dense();
        assert_eq!(m[(0, 0)], Complex64::new(1.0, 0.0));

        let r = cyclic_shift(2).unwrap();
        let m = r.generator(0).to_dense();
        assert_eq!(m[(0, 1)], Complex64::new(1.0, 0.0));
        assert_eq!(m[(1, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(m[(0, 0)], Complex64::new(0.0, 0.0));

        let r = cyclic_shift(4).unwrap();
        assert_eq!(r.unitarity_defect(), 0.0);
        let p = parse_presentation("gens a\norder infinite").unwrap();
        assert!(r.relator_defects(&p).unwrap().is_empty());
    }

    #[test]
    fn torus_commutes_exactly() {
        for n in [1usize, 2, 3] {
            let r = torus(n).unwrap();
            assert_eq!(r.dim(), n * n);
            let p =
                parse_presentation("gens a b\nrel a b a^-1 b^-1\norder infinite").unwrap();
            let defects = r.relator_defects(&p).unwrap();
            assert!(defects[0] <= 1e-12, "torus({n}) defect {}", defects[0]);
        }
    }

    #[test]
    fn regular_cyclic_kills_its_relator() {
        for k in [1usize, 2, 3] {
            let r = regular_cyclic(k).unwrap();
            let p = parse_presentation(&format!("gens a\nrel a^{k}\norder finite {k}"))
                .unwrap();
            let defects = r.relator_defects(&p).unwrap();
            assert!(defects[0] <= 1e-12);
        }
    }

    #[test]
    fn randperm_properties() {
        let r = random_permutations(1, 2, 42).unwrap();
        for g in 0..2 {
            assert_eq!(r.generator(g).to_dense()[(0, 0)], Complex64::new(1.0, 0.0));
        }

        let r = random_permutations(5, 2, 7).unwrap();
        for g in 0..2 {
            match r.generator(g) {
                GeneratorMatrix::Permutation(images) => {
                    let mut seen = vec![false; 5];
                    for &u in images {
                        assert!(!seen[u]);
                        seen[u] = true;
                    }
                }
                _ => panic!("expected permutation storage"),
            }
        }
    }

    #[test]
    fn randperm_is_reproducible() {
        let a = random_permutations(16, 3, 9).unwrap();
        let b = random_permutations(16, 3, 9).unwrap();
        for g in 0..3 {
            match (a.generator(g), b.generator(g)) {
                (GeneratorMatrix::Permutation(x), GeneratorMatrix::Permutation(y)) => {
                    assert_eq!(x, y)
                }
                _ => panic!("expected permutation storage"),
            }
        }
        let c = random_permutations(16, 3, 10).unwrap();
        let differs = (0..3).any(|g| match (a.generator(g), c.generator(g)) {
            (GeneratorMatrix::Permutation(x), GeneratorMatrix::Permutation(y)) => x != y,
            _ => false,
        });
        assert!(differs, "different seeds should give different permutations");
    }

    #[test]
    fn randperm_relator_defect_reported_not_failed() {
        let r = random_permutations(5, 2, 7).unwrap();
        let p = parse_presentation("gens a b\nrel a b a^-1 b^-1\norder infinite").unwrap();
        let defects = r.relator_defects(&p).unwrap();
        assert_eq!(defects.len(), 1);
        // with overwhelming probability two random 5-permutations do not commute
        assert!(defects[0] > 0.0);
    }

    #[test]
    fn simultaneous_eigenvalues_match_dense() {
        // eigenvalue multiset of the shift must be the N-th roots of unity
        let r = cyclic_shift(6).unwrap();
        let eig = r.simultaneous_eigenvalues().unwrap();
        assert_eq!(eig[0].len(), 6);
        let mut product = Complex64::new(1.0, 0.0);
        for v in &eig[0] {
            assert!((v.norm() - 1.0).abs() < 1e-14);
            product *= v;
        }
        // ∏ ω^k = ω^{15} = e^{2πi·15/6} = -1 for N = 6
        assert!((product - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        assert!(random_permutations(4, 2, 0)
            .unwrap()
            .simultaneous_eigenvalues()
            .is_none());
    }
}
