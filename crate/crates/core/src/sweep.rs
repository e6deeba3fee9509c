//! Parameter sweeps over the path-loss exponent: statistics per
//! `(lobe, lambda_bs, alpha)` grid point, written as CSV with a summary
//! document and optional SVG charts.
//!
//! # Sweep document
//!
//! ```toml
//! bs_intensities = [50.0, 100.0, 200.0]   # default
//! lobes = ["main", "side"]                # default
//! with_mc = false                         # default
//!
//! # either an explicit list ...
//! # alpha_grid = [2.01, 2.05, 2.1]
//! # ... or an evenly spaced grid, endpoints included (default below)
//! [alpha]
//! min = 2.005
//! max = 2.2
//! points = 40
//!
//! [mc]                 # used when with_mc = true
//! trials = 20000
//! seed = 42
//!
//! [alpha_bounds]       # admissible grid values, (lower, upper]
//! lower = 2.0
//! upper = 2.2
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{cumulants, MIN_REPORTED_ORDER};
use crate::error::{Error, Result};
use crate::geometry::GeometrySummary;
use crate::montecarlo::{default_workers, estimate_alpha_sweep, McConfig};
use crate::scenario::{Lobe, Scenario};

pub const CSV_HEADER: &str = "alpha,lambda_bs,lobe,mean_K,std_K,skewness,excess_kurtosis,exceeds_tau,mc_mean_K,mc_se_mean_K,mc_std_K";

pub const DEFAULT_BS_INTENSITIES: [f64; 3] = [50.0, 100.0, 200.0];
pub const DEFAULT_ALPHA_MIN: f64 = 2.005;
pub const DEFAULT_ALPHA_MAX: f64 = 2.2;
pub const DEFAULT_ALPHA_POINTS: usize = 40;
pub const DEFAULT_SWEEP_TRIALS: u64 = 20_000;

/// Grid and options of one sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub alpha_grid: Vec<f64>,
    pub bs_intensities: Vec<f64>,
    pub lobes: Vec<Lobe>,
    pub with_mc: bool,
    pub mc: McConfig,
    /// Grid values must lie in `(lower, upper]`.
    pub alpha_bounds: (f64, f64),
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            alpha_grid: linspace(DEFAULT_ALPHA_MIN, DEFAULT_ALPHA_MAX, DEFAULT_ALPHA_POINTS),
            bs_intensities: DEFAULT_BS_INTENSITIES.to_vec(),
            lobes: Lobe::ALL.to_vec(),
            with_mc: false,
            mc: McConfig {
                trials: DEFAULT_SWEEP_TRIALS,
                seed: 42,
                workers: default_workers(),
            },
            alpha_bounds: (2.0, DEFAULT_ALPHA_MAX),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecDoc {
    alpha_grid: Option<Vec<f64>>,
    alpha: Option<AlphaRange>,
    bs_intensities: Option<Vec<f64>>,
    lobes: Option<Vec<Lobe>>,
    with_mc: Option<bool>,
    mc: Option<McDoc>,
    alpha_bounds: Option<BoundsDoc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlphaRange {
    min: f64,
    max: f64,
    points: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct McDoc {
    trials: Option<u64>,
    seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundsDoc {
    lower: f64,
    upper: f64,
}

/// `points` evenly spaced values from `min` to `max`, both included.
pub fn linspace(min: f64, max: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![min],
        _ => {
            let step = (max - min) / (points - 1) as f64;
            (0..points)
                .map(|i| if i + 1 == points { max } else { min + step * i as f64 })
                .collect()
        }
    }
}

impl SweepSpec {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let doc: SpecDoc =
            toml::from_str(text).map_err(|e| Error::Malformed(e.message().to_string()))?;
        let mut spec = SweepSpec::default();
        if let Some(b) = doc.alpha_bounds {
            spec.alpha_bounds = (b.lower, b.upper);
        }
        match (doc.alpha_grid, doc.alpha) {
            (Some(_), Some(_)) => {
                return Err(Error::Malformed(
                    "give either `alpha_grid` or `[alpha]`, not both".into(),
                ))
            }
            (Some(grid), None) => spec.alpha_grid = grid,
            (None, Some(r)) => spec.alpha_grid = linspace(r.min, r.max, r.points),
            (None, None) => {}
        }
        if let Some(v) = doc.bs_intensities {
            spec.bs_intensities = v;
        }
        if let Some(v) = doc.lobes {
            spec.lobes = v;
        }
        if let Some(v) = doc.with_mc {
            spec.with_mc = v;
        }
        if let Some(mc) = doc.mc {
            spec.mc.trials = mc.trials.unwrap_or(spec.mc.trials);
            spec.mc.seed = mc.seed.unwrap_or(spec.mc.seed);
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha_grid.is_empty() {
            return Err(Error::EmptyGrid("alpha grid"));
        }
        if self.bs_intensities.is_empty() {
            return Err(Error::EmptyGrid("bs_intensities"));
        }
        if self.lobes.is_empty() {
            return Err(Error::EmptyGrid("lobes"));
        }
        let (lower, upper) = self.alpha_bounds;
        if !(lower >= 2.0 && upper > lower && upper.is_finite()) {
            return Err(Error::InvalidField {
                field: "alpha_bounds".into(),
                reason: format!("({lower}, {upper}] must satisfy 2 <= lower < upper"),
            });
        }
        for &alpha in &self.alpha_grid {
            if !(alpha > lower && alpha <= upper) {
                return Err(Error::AlphaOutOfRange {
                    alpha,
                    min: lower,
                    max: upper,
                });
            }
        }
        for &lambda in &self.bs_intensities {
            if !(lambda.is_finite() && lambda > 0.0) {
                return Err(Error::NonPositive {
                    field: "bs_intensities".into(),
                    value: lambda,
                });
            }
        }
        if self.with_mc && self.mc.trials < 2 {
            return Err(Error::InsufficientTrials {
                trials: self.mc.trials,
            });
        }
        Ok(())
    }

    /// Number of rows the sweep produces.
    pub fn len(&self) -> usize {
        self.alpha_grid.len() * self.bs_intensities.len() * self.lobes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Monte Carlo columns of a row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McColumns {
    pub mean: f64,
    pub se_mean: f64,
    pub std: f64,
}

/// One grid point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub lambda_bs: f64,
    pub lobe: Lobe,
    pub mean_k: f64,
    pub std_k: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    /// `mean_k > rfi_threshold`.
    pub exceeds_tau: bool,
    pub mc: Option<McColumns>,
}

impl SweepRow {
    pub fn to_csv_line(&self) -> String {
        let mut line = format!(
            "{},{},{},{},{},{},{},{}",
            fmt_plain(self.alpha),
            fmt_plain(self.lambda_bs),
            self.lobe,
            fmt_sig(self.mean_k),
            fmt_sig(self.std_k),
            fmt_sig(self.skewness),
            fmt_sig(self.excess_kurtosis),
            self.exceeds_tau,
        );
        match &self.mc {
            Some(mc) => {
                let _ = write!(
                    line,
                    ",{},{},{}",
                    fmt_sig(mc.mean),
                    fmt_sig(mc.se_mean),
                    fmt_sig(mc.std)
                );
            }
            None => line.push_str(",,,"),
        }
        line
    }
}

/// Six significant digits.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    // exponent after rounding to six digits, so carries (9.9999999) count
    let sci = format!("{x:.5e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

/// Up to twelve significant digits, trailing zeros dropped.
fn fmt_plain(x: f64) -> String {
    let s = format!("{:.12}", x);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

/// Evaluates every grid point, rows ordered by lobe, then `lambda_bs`, then
/// `alpha` (the spec's list orders).
///
/// Analytic points are evaluated in parallel on `spec.mc.workers` threads;
/// each Monte Carlo curve uses common random numbers across the grid.
pub fn run_sweep(s: &Scenario, geo: &GeometrySummary, spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let mut points = Vec::with_capacity(spec.len());
    for &lobe in &spec.lobes {
        for &lambda in &spec.bs_intensities {
            for &alpha in &spec.alpha_grid {
                points.push((lobe, lambda, alpha));
            }
        }
    }

    let evaluate = |&(lobe, lambda, alpha): &(Lobe, f64, f64)| -> Result<SweepRow> {
        let sp = s.with_bs_intensity(lambda).with_path_loss_exponent(alpha);
        let cs = cumulants(&sp, geo, lobe, MIN_REPORTED_ORDER)?;
        Ok(SweepRow {
            alpha,
            lambda_bs: lambda,
            lobe,
            mean_k: cs.mean,
            std_k: cs.std,
            skewness: cs.skewness,
            excess_kurtosis: cs.excess_kurtosis,
            exceeds_tau: cs.mean > s.rfi_threshold,
            mc: None,
        })
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.mc.workers.max(1))
        .build()
        .map_err(|e| Error::InvalidField {
            field: "workers".into(),
            reason: e.to_string(),
        })?;
    let mut rows: Vec<SweepRow> =
        pool.install(|| points.par_iter().map(evaluate).collect::<Result<_>>())?;

    if spec.with_mc {
        let n_alpha = spec.alpha_grid.len();
        for curve in rows.chunks_mut(n_alpha) {
            let sp = s.with_bs_intensity(curve[0].lambda_bs);
            let est = estimate_alpha_sweep(&sp, geo, curve[0].lobe, &spec.alpha_grid, &spec.mc)?;
            for (row, e) in curve.iter_mut().zip(est) {
                row.mc = Some(McColumns {
                    mean: e.mean,
                    se_mean: e.se_mean,
                    std: e.std,
                });
            }
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(80 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv_line());
        out.push('\n');
    }
    out
}

/// Extremes and shape of one `(lobe, lambda_bs)` curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveSummary {
    pub lobe: Lobe,
    pub lambda_bs: f64,
    pub points: usize,
    pub min_mean_k: f64,
    pub alpha_at_min_mean: f64,
    pub max_mean_k: f64,
    pub alpha_at_max_mean: f64,
    /// Mean strictly decreases along increasing `alpha`.
    pub mean_decreasing: bool,
    pub std_decreasing: bool,
    pub rows_exceeding_tau: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub rfi_threshold_k: f64,
    pub rows: usize,
    pub with_mc: bool,
    pub curves: Vec<CurveSummary>,
}

pub fn summarize(s: &Scenario, spec: &SweepSpec, rows: &[SweepRow]) -> SweepSummary {
    let n_alpha = spec.alpha_grid.len().max(1);
    let curves = rows
        .chunks(n_alpha)
        .map(|curve| {
            let mut sorted: Vec<&SweepRow> = curve.iter().collect();
            sorted.sort_by(|a, b| a.alpha.total_cmp(&b.alpha));
            let min = curve
                .iter()
                .min_by(|a, b| a.mean_k.total_cmp(&b.mean_k))
                .expect("curves are non-empty");
            let max = curve
                .iter()
                .max_by(|a, b| a.mean_k.total_cmp(&b.mean_k))
                .expect("curves are non-empty");
            CurveSummary {
                lobe: curve[0].lobe,
                lambda_bs: curve[0].lambda_bs,
                points: curve.len(),
                min_mean_k: min.mean_k,
                alpha_at_min_mean: min.alpha,
                max_mean_k: max.mean_k,
                alpha_at_max_mean: max.alpha,
                mean_decreasing: sorted.windows(2).all(|w| w[1].mean_k < w[0].mean_k),
                std_decreasing: sorted.windows(2).all(|w| w[1].std_k < w[0].std_k),
                rows_exceeding_tau: curve.iter().filter(|r| r.exceeds_tau).count(),
            }
        })
        .collect();
    SweepSummary {
        rfi_threshold_k: s.rfi_threshold,
        rows: rows.len(),
        with_mc: spec.with_mc,
        curves,
    }
}

/// Paths written by [`write_outputs`] next to the CSV.
pub fn summary_path(csv: &Path) -> PathBuf {
    csv.with_extension("summary.json")
}

pub fn svg_path(csv: &Path, lobe: Lobe, stat: &str) -> PathBuf {
    let stem = csv.file_stem().map_or_else(|| "sweep".into(), |s| s.to_string_lossy().into_owned());
    csv.with_file_name(format!("{stem}_{lobe}_{stat}.svg"))
}

/// Writes the CSV, the summary document and, with `svg`, one chart per lobe
/// and statistic. Removes whatever it wrote if any write fails.
pub fn write_outputs(
    csv: &Path,
    s: &Scenario,
    spec: &SweepSpec,
    rows: &[SweepRow],
    svg: bool,
) -> Result<Vec<PathBuf>> {
    let mut files: Vec<(PathBuf, String)> = vec![(csv.to_path_buf(), to_csv(rows))];
    let summary = summarize(s, spec, rows);
    let json = serde_json::to_string_pretty(&summary)
        .map_err(|e| Error::Malformed(e.to_string()))?;
    files.push((summary_path(csv), json + "\n"));
    if svg {
        for &lobe in &spec.lobes {
            for stat in ["mean", "std"] {
                files.push((svg_path(csv, lobe, stat), render_svg(rows, lobe, stat, s.rfi_threshold)));
            }
        }
    }

    let mut written = Vec::new();
    for (path, body) in &files {
        if let Err(source) = fs::write(path, body) {
            for p in &written {
                let _ = fs::remove_file(p);
            }
            let _ = fs::remove_file(path);
            return Err(Error::Io {
                path: path.display().to_string(),
                source,
            });
        }
        written.push(path.clone());
    }
    Ok(written)
}

const SVG_W: f64 = 640.0;
const SVG_H: f64 = 420.0;
const MARGIN: (f64, f64, f64, f64) = (70.0, 20.0, 30.0, 50.0); // left, right, top, bottom
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Line chart of `stat` ("mean" or "std") against alpha, one line per
/// `lambda_bs`; the mean chart also draws the threshold.
pub fn render_svg(rows: &[SweepRow], lobe: Lobe, stat: &str, threshold: f64) -> String {
    let value = |r: &SweepRow| if stat == "std" { r.std_k } else { r.mean_k };
    let sel: Vec<&SweepRow> = rows.iter().filter(|r| r.lobe == lobe).collect();
    let mut lambdas: Vec<f64> = Vec::new();
    for r in &sel {
        if !lambdas.contains(&r.lambda_bs) {
            lambdas.push(r.lambda_bs);
        }
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, 0.0f64, f64::MIN);
    for r in &sel {
        x0 = x0.min(r.alpha);
        x1 = x1.max(r.alpha);
        y0 = y0.min(value(r));
        y1 = y1.max(value(r));
    }
    let show_tau = stat == "mean" && threshold <= 2.0 * y1;
    if show_tau {
        y1 = y1.max(threshold);
    }
    if !(x1 > x0) {
        x1 = x0 + 1.0;
    }
    if !(y1 > y0) {
        y1 = y0 + 1.0;
    }
    let (ml, mr, mt, mb) = MARGIN;
    let px = |x: f64| ml + (x - x0) / (x1 - x0) * (SVG_W - ml - mr);
    let py = |y: f64| SVG_H - mb - (y - y0) / (y1 - y0) * (SVG_H - mt - mb);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_W}" height="{SVG_H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="18" text-anchor="middle">{lobe} lobe: {stat} RFI temperature (K)</text>"#,
        SVG_W / 2.0
    );
    let _ = writeln!(
        svg,
        r#"<path d="M{ml},{mt} V{} H{}" fill="none" stroke="black"/>"#,
        SVG_H - mb,
        SVG_W - mr
    );
    for i in 0..=4 {
        let fx = x0 + (x1 - x0) * i as f64 / 4.0;
        let fy = y0 + (y1 - y0) * i as f64 / 4.0;
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{}" text-anchor="middle">{}</text>"#,
            px(fx),
            SVG_H - mb + 18.0,
            fmt_plain((fx * 1e4).round() / 1e4)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{:.1}" text-anchor="end">{}</text>"#,
            ml - 6.0,
            py(fy) + 4.0,
            fmt_sig(fy)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">path-loss exponent</text>"#,
        SVG_W / 2.0,
        SVG_H - 10.0
    );
    if show_tau {
        let _ = writeln!(
            svg,
            r#"<line x1="{ml}" x2="{}" y1="{y:.1}" y2="{y:.1}" stroke="gray" stroke-dasharray="6 4"/>"#,
            SVG_W - mr,
            y = py(threshold)
        );
    }
    for (i, lambda) in lambdas.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = sel
            .iter()
            .filter(|r| r.lambda_bs == *lambda)
            .map(|r| format!("{:.1},{:.1}", px(r.alpha), py(value(r))))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            pts.join(" ")
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" fill="{color}" text-anchor="end">lambda_bs = {}</text>"#,
            SVG_W - mr - 4.0,
            mt + 16.0 * (i + 1) as f64,
            fmt_plain(*lambda)
        );
    }
    svg.push_str("</svg>\n");
    svg
}
