//! Self-check of a scenario: closed forms against the Monte Carlo oracle on a
//! fixed grid, finite-difference cumulants against the closed forms, and the
//! cap-geometry identities.

use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::analytic::{self, quadrature, CumulantSet};
use crate::error::Result;
use crate::geometry::{
    derive_geometry, distance_from_polar_angle, footprint_polar_angle, radial_intensity_weight,
    radial_weight_integral,
};
use crate::montecarlo::{estimate_alpha_sweep, McConfig};
use crate::scenario::{Lobe, Scenario};

pub const ORACLE_ALPHAS: [f64; 5] = [2.02, 2.06, 2.1, 2.15, 2.2];
pub const ORACLE_BS_INTENSITIES: [f64; 3] = [50.0, 100.0, 200.0];
/// Allowed distance between closed form and sample estimate, in standard errors.
pub const ORACLE_Z_LIMIT: f64 = 3.0;
pub const CGF_CHECK_ALPHA: f64 = 2.05;
pub const CGF_REL_LIMIT: f64 = 1e-5;
pub const IDENTITY_REL_LIMIT: f64 = 1e-9;
pub const CAP_AREA_REL_LIMIT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Geometry,
    Cgf,
    Oracle,
}

impl CheckKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckKind::Geometry => "geometry",
            CheckKind::Cgf => "cgf",
            CheckKind::Oracle => "oracle",
        }
    }
}

/// One comparison. `score` is a relative error for geometry and cgf checks and
/// a z-score for oracle checks; the check passes when `score <= limit`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub kind: CheckKind,
    pub name: String,
    pub observed: f64,
    pub expected: f64,
    pub score: f64,
    pub limit: f64,
    pub passed: bool,
}

impl Check {
    fn relative(kind: CheckKind, name: String, observed: f64, expected: f64, limit: f64) -> Self {
        let score = ((observed - expected) / expected).abs();
        Check {
            kind,
            name,
            observed,
            expected,
            score,
            limit,
            passed: score <= limit,
        }
    }

    fn z(name: String, observed: f64, expected: f64, se: f64) -> Self {
        let score = (observed - expected).abs() / se;
        Check {
            kind: CheckKind::Oracle,
            name,
            observed,
            expected,
            score,
            limit: ORACLE_Z_LIMIT,
            passed: score <= ORACLE_Z_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub trials: u64,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub elapsed_s: f64,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn of_kind(&self, kind: CheckKind) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(move |c| c.kind == kind)
    }

    /// Fraction of checks of `kind` that passed.
    pub fn pass_rate(&self, kind: CheckKind) -> f64 {
        let total = self.of_kind(kind).count();
        if total == 0 {
            return 1.0;
        }
        self.of_kind(kind).filter(|c| c.passed).count() as f64 / total as f64
    }

    /// Fixed-width pass/fail table.
    pub fn table(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(4).max(5);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<8} {:<width$} {:>14} {:>14} {:>10} {:>8}  result",
            "kind", "check", "observed", "expected", "score", "limit"
        );
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{:<8} {:<width$} {:>14.6e} {:>14.6e} {:>10.3e} {:>8.1e}  {}",
                c.kind.as_str(),
                c.name,
                c.observed,
                c.expected,
                c.score,
                c.limit,
                if c.passed { "PASS" } else { "FAIL" }
            );
        }
        let failed = self.failures().count();
        let _ = writeln!(
            out,
            "{} of {} checks passed ({} trials, seed {}, {:.1} s)",
            self.checks.len() - failed,
            self.checks.len(),
            self.trials,
            self.seed,
            self.elapsed_s
        );
        out
    }
}

pub fn geometry_checks(s: &Scenario) -> Result<Vec<Check>> {
    let geo = derive_geometry(s)?;
    let g = CheckKind::Geometry;
    let mut checks = vec![
        Check::relative(
            g,
            "d_min = distance(theta = 0)".into(),
            distance_from_polar_angle(s, 0.0)?,
            geo.d_min,
            IDENTITY_REL_LIMIT,
        ),
        Check::relative(
            g,
            "d_max = distance(theta_max)".into(),
            distance_from_polar_angle(s, geo.theta_max())?,
            geo.d_max,
            IDENTITY_REL_LIMIT,
        ),
        Check::relative(
            g,
            "d_ml = distance(footprint angle)".into(),
            distance_from_polar_angle(s, footprint_polar_angle(s)?)?,
            geo.d_ml,
            IDENTITY_REL_LIMIT,
        ),
    ];
    if s.cluster_intensity > 0.0 {
        checks.push(Check::relative(
            g,
            "radial weight integral = lambda_c cap area".into(),
            radial_weight_integral(s, &geo),
            geo.lambda_cap,
            CAP_AREA_REL_LIMIT,
        ));
        let numeric = quadrature::integrate(
            |x| radial_intensity_weight(s, &geo, x),
            geo.d_min,
            geo.d_max,
            1e-12,
            quadrature::DEFAULT_MAX_SUBDIVISIONS,
        )?;
        checks.push(Check::relative(
            g,
            "quadrature of radial weight = lambda_cap".into(),
            numeric.value,
            geo.lambda_cap,
            IDENTITY_REL_LIMIT,
        ));
    }
    Ok(checks)
}

/// Central-difference `k_1, k_2` of each lobe's log-MGF at
/// [`CGF_CHECK_ALPHA`] against the closed forms.
pub fn cgf_checks(s: &Scenario) -> Result<Vec<Check>> {
    let sa = s.with_path_loss_exponent(CGF_CHECK_ALPHA);
    let geo = derive_geometry(&sa)?;
    let mut checks = Vec::new();
    for lobe in Lobe::ALL {
        let cs = analytic::cumulants(&sa, &geo, lobe, analytic::MIN_REPORTED_ORDER)?;
        if cs.mean == 0.0 {
            continue;
        }
        let numeric =
            analytic::numeric_cumulants_from_cgf(|t| analytic::cgf(&sa, &geo, lobe, t), 2, cs.mean)?;
        for (n, value) in numeric.iter().enumerate() {
            checks.push(Check::relative(
                CheckKind::Cgf,
                format!("{lobe} k{} at alpha {CGF_CHECK_ALPHA}", n + 1),
                *value,
                cs.cumulants[n],
                CGF_REL_LIMIT,
            ));
        }
    }
    Ok(checks)
}

/// Mean and variance of both lobes on the fixed `alpha x lambda_bs` grid,
/// within [`ORACLE_Z_LIMIT`] standard errors of the Monte Carlo estimates.
pub fn oracle_checks(s: &Scenario, cfg: &McConfig) -> Result<Vec<Check>> {
    let geo = derive_geometry(s)?;
    let mut checks = Vec::new();
    for lobe in Lobe::ALL {
        for lambda in ORACLE_BS_INTENSITIES {
            let sl = s.with_bs_intensity(lambda);
            let estimates = estimate_alpha_sweep(&sl, &geo, lobe, &ORACLE_ALPHAS, cfg)?;
            for est in estimates {
                let alpha = est.path_loss_exponent;
                let cs: CumulantSet = analytic::cumulants(
                    &sl.with_path_loss_exponent(alpha),
                    &geo,
                    lobe,
                    analytic::MIN_REPORTED_ORDER,
                )?;
                let tag = format!("{lobe} alpha {alpha} lambda_bs {lambda}");
                checks.push(Check::z(format!("{tag} mean"), est.mean, cs.mean, est.se_mean));
                checks.push(Check::z(
                    format!("{tag} variance"),
                    est.variance,
                    cs.variance,
                    est.se_variance,
                ));
            }
        }
    }
    Ok(checks)
}

/// Runs every check. Parameters other than the grid axes come from `s`.
pub fn run_validation(s: &Scenario, cfg: &McConfig) -> Result<ValidationReport> {
    s.validate()?;
    let start = Instant::now();
    let mut checks = geometry_checks(s)?;
    checks.extend(cgf_checks(s)?);
    checks.extend(oracle_checks(s, cfg)?);
    Ok(ValidationReport {
        trials: cfg.trials,
        seed: cfg.seed,
        checks,
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}
