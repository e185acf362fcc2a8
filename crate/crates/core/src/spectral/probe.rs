//! The perturbative-formula probe.
//!
//! With S an n-tuple of independent self-adjoint Gaussian matrices (scaled
//! so the expected squared Hilbert–Schmidt norm of each matrix is 1, a
//! finite-dimensional proxy for a semicircular tuple), the first-order
//! expansion F(X + √ε·S) = F(X) + √ε·∂F(X)#S + O(ε) leaves the remainder
//!
//! ```text
//! defect(ε) = ‖F(X + √ε S) − F(X) − √ε · ∂F(X)#S‖_HS
//! ```
//!
//! which the probe tabulates together with defect/ε. The same S is used for
//! every ε so halving ratios are meaningful.

use faer::Mat;
use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grouprel::{Jacobian, RelationSystem};
use crate::repkit::{generator_images, EvalContext, Representation};

/// One probe row. `defect_over_eps` is absent at ε = 0 (where the defect is
/// identically zero); `linear_norm` is ‖∂F(X)#S‖_HS and
/// `increment_over_sqrt_eps` is ‖F(X+√εS) − F(X)‖_HS/√ε, so their ratio
/// witnesses the first-order term directly.
#[derive(Debug, Clone, Serialize)]
pub struct ProbeRow {
    pub eps: f64,
    pub defect: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub defect_over_eps: Option<f64>,
    pub linear_norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub increment_over_sqrt_eps: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeTable {
    pub seed: u64,
    pub rows: Vec<ProbeRow>,
}

/// Draws standard normals from a ChaCha8 stream by Box–Muller; the spare
/// value is kept so consecutive draws consume the stream deterministically.
struct GaussianSource {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl GaussianSource {
    fn new(seed: u64) -> Self {
        GaussianSource {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    fn uniform(&mut self) -> f64 {
        // 53 random bits into [0, 1)
        (self.rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    fn normal(&mut self) -> f64 {
        if let Some(v) = self.spare.take() {
            return v;
        }
        // u1 shifted into (0, 1] so the logarithm is finite
        let u1 = (self.uniform() * 9007199254740992.0 + 1.0) / 9007199254740993.0;
        let u2 = self.uniform();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(radius * angle.sin());
        radius * angle.cos()
    }
}

/// An n-tuple of self-adjoint Gaussian D×D matrices with
/// E‖S_l‖²_HS = 1: diagonal entries N(0,1), off-diagonal complex entries of
/// total variance 1, the whole matrix scaled by 1/D.
pub fn gaussian_selfadjoint_tuple(n: usize, dim: usize, seed: u64) -> Vec<Mat<Complex64>> {
    let mut src = GaussianSource::new(seed);
    let scale = 1.0 / dim as f64;
    (0..n)
        .map(|_| {
            let mut s: Mat<Complex64> = Mat::zeros(dim, dim);
            for u in 0..dim {
                s[(u, u)] = Complex64::new(src.normal() * scale, 0.0);
                for v in (u + 1)..dim {
                    let re = src.normal() / std::f64::consts::SQRT_2;
                    let im = src.normal() / std::f64::consts::SQRT_2;
                    let z = Complex64::new(re * scale, im * scale);
                    s[(u, v)] = z;
                    s[(v, u)] = z.conj();
                }
            }
            s
        })
        .collect()
}

fn hs_norm_sq(m: &Mat<Complex64>) -> f64 {
    let mut sum = 0.0;
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            sum += m[(r, c)].norm_sqr();
        }
    }
    sum
}

/// Runs the probe over `eps_list` (each value in [0, 1]).
pub fn perturbation_probe(
    system: &RelationSystem,
    jacobian: &Jacobian,
    rep: &Representation,
    eps_list: &[f64],
    seed: u64,
) -> Result<ProbeTable> {
    if system.num_generators() != rep.num_generators() {
        return Err(Error::usage(format!(
            "relation system has {} generators but the representation has {}",
            system.num_generators(),
            rep.num_generators()
        )));
    }
    for &eps in eps_list {
        if !(0.0..=1.0).contains(&eps) || !eps.is_finite() {
            return Err(Error::usage(format!("epsilon {eps} outside [0, 1]")));
        }
    }

    let n = system.num_vars();
    let k = system.num_relations();
    let dim = rep.dim();
    let xs = generator_images(rep);
    let s = gaussian_selfadjoint_tuple(n, dim, seed);

    // base values F_i(X) and the linear images Σ_j ∂_j F_i(X) # S_j
    let mut base_ctx = EvalContext::new(&xs);
    let mut base: Vec<Mat<Complex64>> = Vec::with_capacity(k);
    let mut linear: Vec<Mat<Complex64>> = Vec::with_capacity(k);
    for i in 0..k {
        base.push(base_ctx.poly(system.polynomial(i))?);
        let mut lin: Mat<Complex64> = Mat::zeros(dim, dim);
        for j in 0..n {
            let entry = jacobian.entry(i, j);
            if entry.is_zero() {
                continue;
            }
            let op = base_ctx.tensor(entry)?;
            let image = op.apply(s[j].as_ref());
            for c in 0..dim {
                for r in 0..dim {
                    lin[(r, c)] += image[(r, c)];
                }
            }
        }
        linear.push(lin);
    }
    let linear_norm = linear.iter().map(hs_norm_sq).sum::<f64>().sqrt();

    let mut rows = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let sqrt_eps = eps.sqrt();
        let shifted: Vec<Mat<Complex64>> = xs
            .iter()
            .zip(&s)
            .map(|(x, sj)| {
                let mut out = x.clone();
                for c in 0..dim {
                    for r in 0..dim {
                        out[(r, c)] += sqrt_eps * sj[(r, c)];
                    }
                }
                out
            })
            .collect();
        let mut ctx = EvalContext::new(&shifted);
        let mut defect_sq = 0.0;
        let mut increment_sq = 0.0;
        for i in 0..k {
            let shifted_value = ctx.poly(system.polynomial(i))?;
            let mut residual = shifted_value;
            for c in 0..dim {
                for r in 0..dim {
                    let increment = residual[(r, c)] - base[i][(r, c)];
                    residual[(r, c)] = increment - sqrt_eps * linear[i][(r, c)];
                    increment_sq += increment.norm_sqr();
                }
            }
            defect_sq += hs_norm_sq(&residual);
        }
        let defect = defect_sq.sqrt();
        rows.push(ProbeRow {
            eps,
            defect,
            defect_over_eps: (eps > 0.0).then(|| defect / eps),
            linear_norm,
            increment_over_sqrt_eps: (eps > 0.0).then(|| increment_sq.sqrt() / sqrt_eps),
        });
    }
    Ok(ProbeTable { seed, rows })
}
