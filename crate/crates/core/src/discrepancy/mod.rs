//! Point sets, local discrepancy and the two evaluators of
//! `∫₀¹∫_{ℍⁿ}|D_N(z,t;ρ)|² dz dt dρ` for `D_N = Σ_j χ_{c∘B_ρ}(p_j) − Nμ(c∘B_ρ)`.

pub mod direct;
pub mod generate;
pub mod measure;
pub mod pointset;
pub mod scaling;
pub mod spectral;

use serde::{Deserialize, Serialize};

pub use direct::{audit_bounding_region, expected_iid_l2, l2_direct, local_discrepancy, DirectSampler, McConfig};
pub use generate::{gen_iid, gen_jittered, JitterGrid};
pub use measure::{koranyi_ball_volume, mu_ball_mass, mu_box_mass, MeasureModel};
pub use pointset::PointSet;
pub use scaling::{least_squares, scaling_study, scaling_table, Generator, ScalingResult, ScalingRow};
pub use spectral::{l2_spectral, spectral_weight, spectral_weight_with, SigmaMode, SpectralConfig, SpectralPlan};

/// One labelled contribution to an estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BreakdownRow {
    pub key: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyEstimate {
    pub value: f64,
    pub stat_stderr: f64,
    pub trunc_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub breakdown: Option<Vec<BreakdownRow>>,
}

impl DiscrepancyEstimate {
    /// Statistical plus truncation uncertainty.
    pub fn error_bar(&self) -> f64 {
        self.stat_stderr + self.trunc_bound
    }
}
