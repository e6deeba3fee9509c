//! Closed-form statistics of the aggregate RFI temperature.
//!
//! Both lobe totals are compound-Poisson sums of per-cluster contributions, so
//! their log-MGFs are linear in the cluster intensity and every cumulant has a
//! closed form built from `p_n(lambda_bs)`. The MGFs themselves are also
//! exposed so the closed forms can be checked by differentiation.

mod cumulants;
mod mgf;
mod numeric;
pub mod quadrature;

pub use cumulants::{
    cumulants, cumulants_main_lobe, cumulants_side_lobe, threshold_verdict, CumulantSet,
    ThresholdVerdict, MIN_REPORTED_ORDER,
};
pub use mgf::{
    cgf, cgf_main_lobe, cgf_side_lobe, cluster_cgf, mgf_cluster, mgf_cluster_capped,
    mgf_cluster_series, mgf_main_lobe, mgf_side_lobe, t_cluster_unit, unit_temperature,
    DEFAULT_OVERFLOW_CAP, DEFAULT_REL_TOL,
};
pub use numeric::{
    cgf_numeric_cumulants, numeric_cumulants_from_cgf, step_size, MAX_NUMERIC_ORDER,
};
