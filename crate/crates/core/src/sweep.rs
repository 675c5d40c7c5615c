//! Eigenvalue curves `W_ν(a)` on a grid of `a`, overlaid with the truncation
//! points `(a^{(k)}, W_n)`, plus CSV, JSON and SVG renderings.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frobenius::ProblemSpec;
use crate::variational::{spectrum, truncation_point_locator, DEFAULT_BASIS_SIZE};

/// Rows whose convergence estimate exceeds this for a plotted level are flagged.
pub const CONVERGENCE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub gamma: f64,
    pub a_min: f64,
    pub a_max: f64,
    pub steps: usize,
    pub levels: usize,
    pub n_max: usize,
    pub n_basis: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            gamma: 0.0,
            a_min: -8.0,
            a_max: 8.0,
            steps: 161,
            levels: 5,
            n_max: 6,
            n_basis: DEFAULT_BASIS_SIZE,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.gamma.is_finite() || !self.a_min.is_finite() || !self.a_max.is_finite() {
            return Err(Error::invalid("gamma and the a range must be finite"));
        }
        if !(self.a_min < self.a_max) {
            return Err(Error::invalid(format!(
                "a_min = {} must be below a_max = {}",
                self.a_min, self.a_max
            )));
        }
        if self.steps < 2 {
            return Err(Error::invalid("steps must be at least 2"));
        }
        if self.levels == 0 || self.levels > self.n_basis {
            return Err(Error::invalid(format!(
                "levels = {} must lie in 1..={}",
                self.levels, self.n_basis
            )));
        }
        if self.n_basis < self.n_max + 3 {
            return Err(Error::invalid(format!(
                "basis size {} must be at least n_max + 3 = {}",
                self.n_basis,
                self.n_max + 3
            )));
        }
        Ok(())
    }

    /// Grid `a_min + (a_max - a_min) i / (steps - 1)`, ending exactly at `a_max`.
    pub fn grid(&self) -> Vec<f64> {
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.a_max
                } else {
                    self.a_min + (self.a_max - self.a_min) * i as f64 / last as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Ok,
    /// Some plotted level has a convergence estimate above [`CONVERGENCE_TOL`].
    Unconverged,
    /// The usable basis has fewer than `levels` functions.
    Insufficient,
}

impl RowStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::Unconverged => "unconverged",
            RowStatus::Insufficient => "insufficient",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub a: f64,
    /// `W_0..W_{levels-1}`; `None` beyond the usable basis.
    pub w: Vec<Option<f64>>,
    pub convergence: Vec<Option<f64>>,
    pub usable_n: usize,
    pub status: RowStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub n: usize,
    pub k: usize,
    pub a_root: f64,
    pub w: f64,
    pub matched_level: usize,
    /// `|W_ν(a^{(k)}) - W_n|` from a solve at the root itself.
    pub mismatch: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub config: SweepConfig,
    pub rows: Vec<SweepRow>,
    /// Truncation points inside the window, ordered by `n` then `k`.
    pub points: Vec<SweepPoint>,
}

fn sweep_row(config: &SweepConfig, a: f64) -> Result<SweepRow> {
    let res = spectrum(&ProblemSpec::new(config.gamma, a)?, config.n_basis)?;
    let w: Vec<Option<f64>> = (0..config.levels).map(|nu| res.eigenvalues.get(nu).copied()).collect();
    let convergence: Vec<Option<f64>> = (0..config.levels)
        .map(|nu| res.convergence_estimate.get(nu).copied().flatten())
        .collect();
    let status = if res.usable_n < config.levels {
        RowStatus::Insufficient
    } else if convergence.iter().any(|c| c.is_none_or(|v| v > CONVERGENCE_TOL)) {
        RowStatus::Unconverged
    } else {
        RowStatus::Ok
    };
    Ok(SweepRow {
        a,
        w,
        convergence,
        usable_n: res.usable_n,
        status,
    })
}

/// Evaluates the curves on the grid (in parallel, assembled in grid order) and
/// locates every truncation point with `n ≤ n_max` that falls in the window.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepTable> {
    config.validate()?;
    let rows = config
        .grid()
        .par_iter()
        .map(|&a| sweep_row(config, a))
        .collect::<Result<Vec<_>>>()?;
    let mut points = Vec::new();
    for n in 0..=config.n_max {
        for m in truncation_point_locator(n, config.gamma, config.n_basis)? {
            if m.a_root < config.a_min || m.a_root > config.a_max || m.level >= config.levels {
                continue;
            }
            points.push(SweepPoint {
                n,
                k: m.k,
                a_root: m.a_root,
                w: m.w_truncation,
                matched_level: m.level,
                mismatch: m.mismatch,
            });
        }
    }
    Ok(SweepTable {
        config: *config,
        rows,
        points,
    })
}

/// 17 significant digits, enough to round-trip any `f64`.
fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_float).unwrap_or_default()
}

impl SweepTable {
    pub fn curves_csv(&self) -> String {
        let mut out = String::from("a");
        for nu in 0..self.config.levels {
            let _ = write!(out, ",W{nu}");
        }
        out.push_str(",status\n");
        for row in &self.rows {
            out.push_str(&fmt_float(row.a));
            for w in &row.w {
                out.push(',');
                out.push_str(&fmt_opt(*w));
            }
            let _ = writeln!(out, ",{}", row.status.as_str());
        }
        out
    }

    pub fn points_csv(&self) -> String {
        let mut out = String::from("n,k,a_root,W,matched_level,mismatch\n");
        for p in &self.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                p.n,
                p.k,
                fmt_float(p.a_root),
                fmt_float(p.w),
                p.matched_level,
                fmt_opt(p.mismatch)
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sweep table serializes")
    }

    /// Static line plot: one polyline per level and one circle per point.
    pub fn to_svg(&self) -> String {
        const WIDTH: f64 = 800.0;
        const HEIGHT: f64 = 600.0;
        const MARGIN: f64 = 60.0;
        let (a_lo, a_hi) = (self.config.a_min, self.config.a_max);
        let values = self
            .rows
            .iter()
            .flat_map(|r| r.w.iter().flatten().copied())
            .chain(self.points.iter().map(|p| p.w));
        let (mut w_lo, mut w_hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if !(w_lo < w_hi) {
            w_lo = if w_lo.is_finite() { w_lo - 1.0 } else { 0.0 };
            w_hi = w_lo + 2.0;
        }
        let x = |a: f64| MARGIN + (a - a_lo) / (a_hi - a_lo) * (WIDTH - 2.0 * MARGIN);
        let y = |w: f64| HEIGHT - MARGIN - (w - w_lo) / (w_hi - w_lo) * (HEIGHT - 2.0 * MARGIN);

        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
        );
        let _ = writeln!(svg, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            svg,
            r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            WIDTH - 2.0 * MARGIN,
            HEIGHT - 2.0 * MARGIN
        );
        for (label, lx, ly) in [
            (format!("{a_lo:.3}"), MARGIN, HEIGHT - MARGIN + 20.0),
            (format!("{a_hi:.3}"), WIDTH - MARGIN, HEIGHT - MARGIN + 20.0),
            ("a".to_string(), WIDTH / 2.0, HEIGHT - 15.0),
            (format!("{w_lo:.3}"), MARGIN - 5.0, HEIGHT - MARGIN),
            (format!("{w_hi:.3}"), MARGIN - 5.0, MARGIN + 5.0),
            ("W".to_string(), 15.0, HEIGHT / 2.0),
        ] {
            let anchor = if lx < MARGIN { "end" } else { "middle" };
            let _ = writeln!(svg, r#"<text x="{lx:.2}" y="{ly:.2}" font-size="12" text-anchor="{anchor}">{label}</text>"#);
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="20" font-size="14" text-anchor="middle">gamma = {}</text>"#,
            WIDTH / 2.0,
            self.config.gamma
        );
        for nu in 0..self.config.levels {
            let pts: Vec<String> = self
                .rows
                .iter()
                .filter_map(|r| r.w[nu].map(|w| format!("{:.3},{:.3}", x(r.a), y(w))))
                .collect();
            let _ = writeln!(
                svg,
                r#"<polyline fill="none" stroke="blue" stroke-width="1.5" points="{}"/>"#,
                pts.join(" ")
            );
        }
        for p in &self.points {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.3}" cy="{:.3}" r="4" fill="none" stroke="red" stroke-width="1.5"/>"#,
                x(p.a_root),
                y(p.w)
            );
        }
        svg.push_str("</svg>\n");
        svg
    }
}
