use serde::Serialize;

/// Relative λ-grid for rank curves: thresholds σ²_max · 10^{-t} for
/// t = shallow..=deep. The honest finite-level object is the whole curve;
/// the rank estimate is read off its longest plateau (ties resolved toward
/// smaller λ).
#[derive(Debug, Clone, Serialize)]
pub struct ThresholdPolicy {
    pub shallow_decade: u32,
    pub deep_decade: u32,
}

impl Default for ThresholdPolicy {
    fn default() -> Self {
        ThresholdPolicy {
            shallow_decade: 1,
            deep_decade: 10,
        }
    }
}

impl ThresholdPolicy {
    pub fn grid(&self, sigma2_max: f64) -> Vec<f64> {
        (self.shallow_decade..=self.deep_decade)
            .map(|t| sigma2_max * 10f64.powi(-(t as i32)))
            .collect()
    }
}

/// Which spectral route to use; `Auto` picks the circulant fast path when
/// the representation carries a common eigenbasis and the Gram eigensolve
/// otherwise. `DenseSvd` is the reference the others are validated against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathChoice {
    Auto,
    Circulant,
    GramEig,
    DenseSvd,
}

/// Numeric configuration for spectral jobs. The side caps guard dense
/// materializations: beyond `dense_side_cap` the job refuses with a
/// resource error, and `hard_side_cap` is never crossed.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralOptions {
    pub policy: ThresholdPolicy,
    pub path: PathChoice,
    pub dense_side_cap: usize,
    pub hard_side_cap: usize,
    pub histogram_bins: usize,
    /// Override for the log-determinant cut; defaults to the rank plateau
    /// threshold.
    pub lambda_cut_override: Option<f64>,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions {
            policy: ThresholdPolicy::default(),
            path: PathChoice::Auto,
            dense_side_cap: 20_000,
            hard_side_cap: 260_000,
            histogram_bins: 50,
            lambda_cut_override: None,
        }
    }
}

/// Tolerances that accompany every spectral report so numeric fields carry
/// their thresholds with them.
#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    pub unitary_tolerance: f64,
    pub exact_family_defect_tolerance: f64,
    pub betti_zero_tolerance: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            unitary_tolerance: 1e-12,
            exact_family_defect_tolerance: 1e-12,
            betti_zero_tolerance: 1e-6,
        }
    }
}
