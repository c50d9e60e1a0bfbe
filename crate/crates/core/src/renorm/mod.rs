//! Volume renormalization, the conformal anomaly and the Lee transformation law.

mod anomaly;
pub mod ball;
mod fit;
mod lee;
mod special;
mod volume;

pub use anomaly::{
    anomaly_integrands, conformal_anomaly, conformal_anomaly_for, scaled_field, AnomalyIntegrands, AnomalyReport,
    FieldSummary,
};
pub use fit::{fit_volume_expansion, parse_samples, VolumeExpansion, MIN_SAMPLES};
pub use lee::{lee_transform, rescaled_defining_function, rescaled_domain};
pub use special::{check_special_phi, log_gradient_norm, SpecialPhiCheck, SPECIAL_PHI_TOL};
pub use volume::{
    kahler_metric, log_spaced_window, sample_volumes, sphere_measure, volume_density, volume_of_sublevel,
};
