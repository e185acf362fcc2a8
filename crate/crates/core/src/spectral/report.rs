use serde::Serialize;

use crate::error::{Error, Result};
use crate::grouprel::{GroupOrder, Jacobian, Presentation, RelationSystem};
use crate::repkit::Representation;
use crate::spectral::analysis::{
    analyze_spectrum, FkLogDet, MuHistogram, Plateau, RankPoint, TailRow,
};
use crate::spectral::assemble::q_spectrum;
use crate::spectral::options::{SpectralOptions, Tolerances};

/// Everything a spectral job reports for one (system, representation) pair.
///
/// `svals` and `q_spectrum` are the full descending spectra; summaries drop
/// them (see [`SpectralReport::without_spectra`]) to keep sweep reports
/// small.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralReport {
    pub k: usize,
    pub n: usize,
    pub dim: usize,
    pub path: String,
    pub sigma2_max: f64,
    pub rank_est: f64,
    pub rank_curve: Vec<RankPoint>,
    pub plateau: Plateau,
    pub kernel_cut: f64,
    pub fk_logdet: FkLogDet,
    pub mu_hist: MuHistogram,
    pub tail: Vec<TailRow>,
    pub relator_defects: Vec<f64>,
    pub unitarity_defect: f64,
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub svals: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_spectrum: Option<Vec<f64>>,
}

impl SpectralReport {
    /// Drops the bulk spectra, keeping curves and scalars.
    pub fn without_spectra(mut self) -> Self {
        self.svals = None;
        self.q_spectrum = None;
        self
    }
}

/// Validates a (presentation, representation) pair and returns the defect
/// data: exact families must annihilate their relators to 1e-12, sofic
/// proxies and loaded files only report.
pub fn validate_pair(
    presentation: &Presentation,
    rep: &Representation,
) -> Result<(Vec<f64>, f64)> {
    let tolerances = Tolerances::default();
    let unitarity = rep.unitarity_defect();
    if unitarity > tolerances.unitary_tolerance {
        return Err(Error::usage(format!(
            "representation is not unitary: defect {unitarity:.3e}"
        )));
    }
    let defects = rep.relator_defects(presentation)?;
    if rep.family().is_exact() {
        for (idx, &defect) in defects.iter().enumerate() {
            if defect > tolerances.exact_family_defect_tolerance {
                return Err(Error::usage(format!(
                    "exact family mismatch: {} does not satisfy relator #{} of {} \
                     (word '{}', defect {defect:.3e} > {:.0e})",
                    rep.family(),
                    idx + 1,
                    presentation.name,
                    presentation.word_text(&presentation.relators[idx]),
                    tolerances.exact_family_defect_tolerance,
                )));
            }
        }
    }
    Ok((defects, unitarity))
}

/// Runs one full spectral job: validation, spectrum, and analysis.
pub fn analyze(
    presentation: &Presentation,
    system: &RelationSystem,
    jacobian: &Jacobian,
    rep: &Representation,
    opts: &SpectralOptions,
) -> Result<SpectralReport> {
    if system.num_generators() != rep.num_generators() {
        return Err(Error::usage(format!(
            "relation system has {} generators but the representation has {}",
            system.num_generators(),
            rep.num_generators()
        )));
    }
    let (relator_defects, unitarity_defect) = validate_pair(presentation, rep)?;
    let (q, path) = q_spectrum(jacobian, rep, opts)?;
    let analysis = analyze_spectrum(q, jacobian.num_rows(), jacobian.num_cols(), rep.dim(), opts);
    Ok(SpectralReport {
        k: jacobian.num_rows(),
        n: jacobian.num_cols(),
        dim: rep.dim(),
        path: path.as_str().to_string(),
        sigma2_max: analysis.sigma2_max,
        rank_est: analysis.rank_est,
        rank_curve: analysis.rank_curve,
        plateau: analysis.plateau,
        kernel_cut: analysis.kernel_cut,
        fk_logdet: analysis.fk_logdet,
        mu_hist: analysis.mu_hist,
        tail: analysis.tail,
        relator_defects,
        unitarity_defect,
        tolerances: Tolerances::default(),
        svals: Some(analysis.svals),
        q_spectrum: Some(analysis.q_spectrum),
    })
}

/// The Betti / free-entropy-dimension summary derived from a rank estimate
/// through the kernel identity β₁ − β₀ + 1 = n − rank ∂F(X).
#[derive(Debug, Clone, Serialize)]
pub struct BettiEstimate {
    pub rank_est: f64,
    pub beta0: f64,
    pub beta1_est: f64,
    pub delta_upper: f64,
    pub verdict: String,
}

impl BettiEstimate {
    /// `tol` decides when β₁ counts as zero for the verdict.
    pub fn new(rank_est: f64, n: usize, order: GroupOrder, tol: f64) -> Result<Self> {
        if !(0.0..=n as f64).contains(&rank_est) {
            return Err(Error::usage(format!(
                "rank estimate {rank_est} outside [0, {n}]"
            )));
        }
        let beta0 = order.beta0();
        let beta1_est = n as f64 - rank_est - 1.0 + beta0;
        let delta_upper = n as f64 - rank_est;
        // arithmetic identity: beta1 + (1 − beta0) + rank = n exactly
        debug_assert!((beta1_est + (1.0 - beta0) + rank_est - n as f64).abs() == 0.0);
        // consistency of the two derived fields: delta ≥ β₁ − β₀ + 1 − 1e-9
        debug_assert!(delta_upper >= beta1_est - beta0 + 1.0 - 1e-9);
        let r_bound = beta1_est - beta0 + 1.0;
        let verdict = if beta1_est.abs() <= tol && order == GroupOrder::Infinite {
            "consistent with strong 1-boundedness (theorem hypotheses: sofic, finitely \
             presented, beta_1 = 0)"
                .to_string()
        } else {
            format!(
                "r-bounded estimate: r = beta_1 - beta_0 + 1 = {r_bound:.6}; strong \
                 1-boundedness needs beta_1 = 0, an infinite group, and the theorem \
                 hypotheses (sofic, finitely presented)"
            )
        };
        Ok(BettiEstimate {
            rank_est,
            beta0,
            beta1_est,
            delta_upper,
            verdict,
        })
    }
}
