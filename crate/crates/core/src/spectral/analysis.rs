//! From a Q-spectrum to rank curves, measures, and diagnostics.
//!
//! The trace normalization is fixed throughout: the non-normalized trace on
//! the n×n matrix algebra over the tensor-square factor divides by D² at a
//! finite level, so the rank estimate lands in [0, n] and the spectral
//! measure μ has total mass n.

use serde::Serialize;

use crate::spectral::options::{SpectralOptions, ThresholdPolicy};

/// One point of the rank curve: λ ↦ (1/D²)·#{σ² ≥ λ}.
#[derive(Debug, Clone, Serialize)]
pub struct RankPoint {
    pub lambda: f64,
    pub value: f64,
}

/// The winning plateau of the rank curve (grid indices, λ descending).
#[derive(Debug, Clone, Serialize)]
pub struct Plateau {
    pub lambda_hi: f64,
    pub lambda_lo: f64,
    pub length: usize,
}

/// Histogram of the spectral measure μ of Q: each eigenvalue carries mass
/// 1/D², for a total of n. Counts are integers so the mass bookkeeping is
/// exact.
#[derive(Debug, Clone, Serialize)]
pub struct MuHistogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub masses: Vec<f64>,
    pub total_mass: f64,
}

/// The log-determinant piece: (1/D²) Σ_{σ² > λ_cut} log σ², with the count
/// of spectrum entries at or below the cut.
#[derive(Debug, Clone, Serialize)]
pub struct FkLogDet {
    pub value: f64,
    pub lambda_cut: f64,
    pub discarded: usize,
}

/// One tail row: φ(λ) = (1/D²)·#{kernel_cut ≤ σ² < λ} (kernel mass
/// excluded), and the log-integrability witness φ(λ)·|log λ|.
#[derive(Debug, Clone, Serialize)]
pub struct TailRow {
    pub lambda: f64,
    pub phi: f64,
    pub product: f64,
}

/// Everything derived from one Q-spectrum.
#[derive(Debug, Clone)]
pub struct SpectralAnalysis {
    pub svals: Vec<f64>,
    pub q_spectrum: Vec<f64>,
    pub sigma2_max: f64,
    pub rank_curve: Vec<RankPoint>,
    pub plateau: Plateau,
    pub rank_est: f64,
    pub kernel_cut: f64,
    pub mu_hist: MuHistogram,
    pub fk_logdet: FkLogDet,
    pub tail: Vec<TailRow>,
}

/// Number of spectrum entries ≥ λ (spectrum sorted descending).
fn count_at_least(q: &[f64], lambda: f64) -> usize {
    q.partition_point(|&v| v >= lambda)
}

pub fn analyze_spectrum(
    q: Vec<f64>,
    k: usize,
    n: usize,
    dim: usize,
    opts: &SpectralOptions,
) -> SpectralAnalysis {
    let d2 = (dim * dim) as f64;
    debug_assert_eq!(q.len(), n * dim * dim);
    debug_assert!(q.windows(2).all(|w| w[0] >= w[1]));

    let sigma2_max = q.first().copied().unwrap_or(0.0);
    let svals: Vec<f64> = q
        .iter()
        .take(k.min(n) * dim * dim)
        .map(|v| v.sqrt())
        .collect();

    let grid = grid_for(&opts.policy, sigma2_max);
    let rank_curve: Vec<RankPoint> = grid
        .iter()
        .map(|&lambda| RankPoint {
            lambda,
            value: if sigma2_max > 0.0 {
                count_at_least(&q, lambda) as f64 / d2
            } else {
                0.0
            },
        })
        .collect();

    let (plateau, rank_est, kernel_cut) = find_plateau(&rank_curve);

    let lambda_cut = opts.lambda_cut_override.unwrap_or(kernel_cut);
    let mut fk_value = 0.0;
    let mut discarded = 0usize;
    for &v in &q {
        if v > lambda_cut {
            fk_value += v.ln();
        } else {
            discarded += 1;
        }
    }
    fk_value /= d2;
    let fk_logdet = FkLogDet {
        value: fk_value,
        lambda_cut,
        discarded,
    };

    let nonkernel = count_at_least(&q, kernel_cut);
    let tail: Vec<TailRow> = rank_curve
        .iter()
        .map(|pt| {
            let below = nonkernel.saturating_sub(count_at_least(&q, pt.lambda));
            let phi = if sigma2_max > 0.0 {
                below as f64 / d2
            } else {
                0.0
            };
            let product = if phi > 0.0 { phi * pt.lambda.ln().abs() } else { 0.0 };
            TailRow {
                lambda: pt.lambda,
                phi,
                product,
            }
        })
        .collect();

    let mu_hist = histogram(&q, dim, opts.histogram_bins);

    SpectralAnalysis {
        svals,
        q_spectrum: q,
        sigma2_max,
        rank_curve,
        plateau,
        rank_est,
        kernel_cut,
        mu_hist,
        fk_logdet,
        tail,
    }
}

fn grid_for(policy: &ThresholdPolicy, sigma2_max: f64) -> Vec<f64> {
    if sigma2_max > 0.0 {
        policy.grid(sigma2_max)
    } else {
        // degenerate zero spectrum: keep the grid shape with unit scale
        policy.grid(1.0)
    }
}

/// Longest run of equal curve values; ties break toward smaller λ. Returns
/// the plateau, its value (the rank estimate), and its smallest λ (the
/// kernel boundary used by the tail and the log-determinant cut).
fn find_plateau(curve: &[RankPoint]) -> (Plateau, f64, f64) {
    assert!(!curve.is_empty());
    let mut best = (0usize, 0usize); // (start, end) inclusive
    let mut best_len = 0usize;
    let mut start = 0usize;
    for idx in 0..=curve.len() {
        let run_ended = idx == curve.len() || curve[idx].value != curve[start].value;
        if run_ended {
            let len = idx - start;
            // >= prefers the later run, i.e. the plateau with smaller λ
            if len >= best_len {
                best_len = len;
                best = (start, idx - 1);
            }
            start = idx;
        }
    }
    let plateau = Plateau {
        lambda_hi: curve[best.0].lambda,
        lambda_lo: curve[best.1].lambda,
        length: best_len,
    };
    (plateau, curve[best.0].value, curve[best.1].lambda)
}

fn histogram(q: &[f64], dim: usize, bins: usize) -> MuHistogram {
    let d2 = (dim * dim) as f64;
    let bins = bins.max(1);
    let top = q.first().copied().unwrap_or(0.0);
    if top <= 0.0 {
        let count = q.len() as u64;
        return MuHistogram {
            edges: vec![0.0, 0.0],
            counts: vec![count],
            masses: vec![count as f64 / d2],
            total_mass: count as f64 / d2,
        };
    }
    let edges: Vec<f64> = (0..=bins).map(|b| top * (b as f64) / (bins as f64)).collect();
    let mut counts = vec![0u64; bins];
    for &v in q {
        let mut b = ((v / top) * bins as f64).floor() as usize;
        if b >= bins {
            b = bins - 1; // the top edge is inclusive
        }
        counts[b] += 1;
    }
    let masses: Vec<f64> = counts.iter().map(|&c| c as f64 / d2).collect();
    let total_mass = counts.iter().sum::<u64>() as f64 / d2;
    MuHistogram {
        edges,
        counts,
        masses,
        total_mass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn analyze(q: Vec<f64>, k: usize, n: usize, dim: usize) -> SpectralAnalysis {
        analyze_spectrum(q, k, n, dim, &SpectralOptions::default())
    }

    #[test]
    fn identity_operator() {
        // Q = identity on a 4-dimensional space (n = 1, D = 2): rank 1
        let q = vec![1.0; 4];
        let a = analyze(q, 1, 1, 2);
        assert_eq!(a.rank_est, 1.0);
        assert_eq!(a.svals, vec![1.0; 4]);
        assert_eq!(a.fk_logdet.value, 0.0);
        assert!(a.tail.iter().all(|row| row.phi == 0.0 && row.product == 0.0));
        assert!((a.mu_hist.total_mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_operator() {
        let q = vec![0.0; 8];
        let a = analyze(q, 2, 2, 2);
        assert_eq!(a.rank_est, 0.0);
        assert_eq!(a.svals, vec![0.0; 8]);
        assert_eq!(a.fk_logdet.value, 0.0);
        assert_eq!(a.fk_logdet.discarded, 8);
    }

    #[test]
    fn q_multiple_of_identity() {
        // spectrum {4} with multiplicity D²: fk_logdet = log 4
        let q = vec![4.0; 4];
        let a = analyze(q, 1, 1, 2);
        assert!((a.fk_logdet.value - 4.0f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn plateau_prefers_length_then_small_lambda() {
        // counts drop once inside the grid: the long flat tail wins
        let mut q = vec![1.0; 3];
        q.extend(vec![0.04; 2]); // between 1e-1 and 1e-2 relative
        q.extend(vec![0.0; 3]);
        let a = analyze(q, 2, 2, 2);
        // from 1e-2·σ²max on, the count is constant at 5/4
        assert_eq!(a.rank_est, 1.25);
        assert_eq!(a.plateau.length, 9);
        assert!(a.kernel_cut < 1e-9);
    }

    #[test]
    fn tail_excludes_kernel_and_counts_midrange() {
        let mut q = vec![1.0; 3];
        q.push(0.04);
        q.extend(vec![0.0; 4]);
        let a = analyze(q, 2, 2, 2);
        // at λ = 0.1·σ²max, φ counts only the 0.04 value (kernel excluded)
        let first = &a.tail[0];
        assert!((first.phi - 0.25).abs() < 1e-12);
        assert!((first.product - 0.25 * (0.1f64).ln().abs()).abs() < 1e-12);
    }

    #[test]
    fn histogram_mass_is_exact() {
        let q = vec![9.0, 4.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        let a = analyze(q, 2, 2, 2);
        assert_eq!(a.mu_hist.total_mass, 2.0);
        assert_eq!(a.mu_hist.counts.iter().sum::<u64>(), 8);
    }
}
