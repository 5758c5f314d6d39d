//! Dolan–Moré performance profiles over solver × problem metric tables.
//!
//! For each problem the ratio `r = t / min_s t` is formed against the best
//! solver, and `ρ_s(τ)` is the fraction of problems with `r ≤ τ`. Missing
//! values (`None`) never count as solved.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{DmsError, Result};
use crate::metrics::{MetricKind, MetricReport};

/// Row minima below this are floored before dividing.
pub const RATIO_FLOOR: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct ProfileTable {
    problems: Vec<String>,
    solvers: Vec<String>,
    values: Vec<Vec<Option<f64>>>,
}

impl ProfileTable {
    /// `values[i][s]` is the performance of solver `s` on problem `i`.
    pub fn new(problems: Vec<String>, solvers: Vec<String>, values: Vec<Vec<Option<f64>>>) -> Result<Self> {
        if values.len() != problems.len() {
            return Err(DmsError::Dimension {
                expected: problems.len(),
                found: values.len(),
            });
        }
        if let Some(row) = values.iter().find(|r| r.len() != solvers.len()) {
            return Err(DmsError::Dimension {
                expected: solvers.len(),
                found: row.len(),
            });
        }
        Ok(Self {
            problems,
            solvers,
            values,
        })
    }

    /// Collects one metric column from a set of reports. Problems and solvers
    /// keep their order of first appearance; absent cells are failures.
    pub fn from_reports(reports: &[MetricReport], metric: MetricKind) -> Self {
        let mut problems: Vec<String> = Vec::new();
        let mut solvers: Vec<String> = Vec::new();
        for r in reports {
            if !problems.contains(&r.problem) {
                problems.push(r.problem.clone());
            }
            if !solvers.contains(&r.solver) {
                solvers.push(r.solver.clone());
            }
        }
        let mut values = vec![vec![None; solvers.len()]; problems.len()];
        for r in reports {
            let i = problems.iter().position(|p| *p == r.problem).unwrap();
            let s = solvers.iter().position(|p| *p == r.solver).unwrap();
            values[i][s] = metric.value(r);
        }
        Self {
            problems,
            solvers,
            values,
        }
    }

    pub fn problems(&self) -> &[String] {
        &self.problems
    }

    pub fn solvers(&self) -> &[String] {
        &self.solvers
    }

    pub fn values(&self) -> &[Vec<Option<f64>>] {
        &self.values
    }
}

/// Turns larger-is-better metrics into smaller-is-better ones via `t ↦ 1/t`.
/// A zero becomes a failure. Spread metrics pass through.
pub fn invert_for_profile(table: &ProfileTable, metric: MetricKind) -> ProfileTable {
    if !metric.larger_is_better() {
        return table.clone();
    }
    let values = table
        .values
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| v.and_then(|t| if t == 0.0 { None } else { Some(1.0 / t) }))
                .collect()
        })
        .collect();
    ProfileTable {
        values,
        ..table.clone()
    }
}

/// The step function `ρ_s(τ)`, stored as its breakpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileCurve {
    pub solver: String,
    /// `(τ, ρ(τ))`, strictly increasing in τ, starting at τ = 1.
    pub breakpoints: Vec<(f64, f64)>,
}

impl ProfileCurve {
    pub fn rho(&self, tau: f64) -> f64 {
        self.breakpoints
            .iter()
            .take_while(|(t, _)| *t <= tau)
            .last()
            .map_or(0.0, |(_, r)| *r)
    }
}

/// Performance ratios `r[i][s]`; rows where every solver failed are dropped.
pub fn performance_ratios(table: &ProfileTable) -> Vec<Vec<Option<f64>>> {
    table
        .values
        .iter()
        .filter_map(|row| {
            let best = row.iter().flatten().copied().reduce(f64::min)?;
            Some(
                row.iter()
                    .map(|v| {
                        v.map(|t| {
                            if t == best {
                                1.0
                            } else {
                                (t / best.max(RATIO_FLOOR)).max(1.0)
                            }
                        })
                    })
                    .collect(),
            )
        })
        .collect()
}

pub fn compute_profiles(table: &ProfileTable) -> Result<Vec<ProfileCurve>> {
    if table.problems.is_empty() || table.solvers.is_empty() {
        return Err(DmsError::State("performance profile of an empty table".into()));
    }
    let ratios = performance_ratios(table);
    if ratios.is_empty() {
        return Err(DmsError::State("every solver failed on every problem".into()));
    }
    let total = ratios.len() as f64;
    let curves = table
        .solvers
        .iter()
        .enumerate()
        .map(|(s, solver)| {
            let mut rs: Vec<f64> = ratios.iter().filter_map(|row| row[s]).collect();
            rs.sort_by(f64::total_cmp);
            let mut breakpoints = vec![(1.0, 0.0)];
            for (k, r) in rs.iter().enumerate() {
                let rho = (k + 1) as f64 / total;
                match breakpoints.last_mut() {
                    Some(last) if last.0 >= *r => last.1 = rho,
                    _ => breakpoints.push((*r, rho)),
                }
            }
            ProfileCurve {
                solver: solver.clone(),
                breakpoints,
            }
        })
        .collect();
    Ok(curves)
}

/// Plain-text breakpoint table: one `solver tau rho` line per breakpoint.
pub fn format_breakpoint_table(metric: &str, curves: &[ProfileCurve]) -> Result<String> {
    let mut out = String::new();
    writeln!(out, "# performance profile: {metric}").unwrap();
    writeln!(out, "# ratios use a row-minimum floor of {RATIO_FLOOR:e}").unwrap();
    writeln!(out, "# solver tau rho").unwrap();
    for c in curves {
        if c.solver.is_empty() || c.solver.chars().any(char::is_whitespace) {
            return Err(DmsError::Config(format!("solver id `{}` must be a single word", c.solver)));
        }
        for (tau, rho) in &c.breakpoints {
            writeln!(out, "{} {tau:.16e} {rho:.16e}", c.solver).unwrap();
        }
    }
    Ok(out)
}

pub fn parse_breakpoint_table(text: &str, origin: &Path) -> Result<Vec<ProfileCurve>> {
    let mut curves: Vec<ProfileCurve> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: &str| DmsError::Parse {
            path: origin.to_path_buf(),
            line: idx + 1,
            message: message.to_string(),
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [solver, tau, rho] = fields[..] else {
            return Err(err("expected `solver tau rho`"));
        };
        let tau: f64 = tau.parse().map_err(|_| err("bad tau"))?;
        let rho: f64 = rho.parse().map_err(|_| err("bad rho"))?;
        match curves.iter_mut().find(|c| c.solver == solver) {
            Some(c) => c.breakpoints.push((tau, rho)),
            None => curves.push(ProfileCurve {
                solver: solver.to_string(),
                breakpoints: vec![(tau, rho)],
            }),
        }
    }
    Ok(curves)
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];
const DASHES: [&str; 3] = ["", "6,3", "2,2"];

/// Renders the curves as an SVG step plot over `τ ∈ [1, tau_max]`.
pub fn render_svg(title: &str, curves: &[ProfileCurve], tau_max: f64) -> String {
    let (w, h) = (640.0, 420.0);
    let (left, right, top, bottom) = (60.0, 20.0, 40.0, 50.0);
    let pw = w - left - right;
    let ph = h - top - bottom;
    let span = (tau_max - 1.0).max(f64::EPSILON);
    let sx = |tau: f64| left + (tau.clamp(1.0, tau_max) - 1.0) / span * pw;
    let sy = |rho: f64| top + (1.0 - rho) * ph;

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="{w}" height="{h}" fill="white"/>"#).unwrap();
    writeln!(
        svg,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        w / 2.0,
        escape(title)
    )
    .unwrap();
    writeln!(
        svg,
        r#"<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    )
    .unwrap();
    for k in 0..=5 {
        let rho = k as f64 / 5.0;
        let y = sy(rho);
        writeln!(
            svg,
            r##"<line x1="{left}" y1="{y}" x2="{}" y2="{y}" stroke="#dddddd"/><text x="{}" y="{}" text-anchor="end">{rho:.1}</text>"##,
            left + pw,
            left - 6.0,
            y + 4.0
        )
        .unwrap();
    }
    for k in 0..=5 {
        let tau = 1.0 + span * k as f64 / 5.0;
        let x = sx(tau);
        writeln!(
            svg,
            r#"<text x="{x}" y="{}" text-anchor="middle">{}</text>"#,
            top + ph + 18.0,
            trim_number(tau)
        )
        .unwrap();
    }
    writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">τ</text><text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">ρ(τ)</text>"#,
        left + pw / 2.0,
        h - 10.0,
        top + ph / 2.0,
        top + ph / 2.0
    )
    .unwrap();

    for (i, c) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let dash = DASHES[(i / PALETTE.len() + i) % DASHES.len()];
        let mut points = String::new();
        let mut rho = 0.0;
        let push = |tau: f64, r: f64, pts: &mut String| {
            write!(pts, "{:.2},{:.2} ", sx(tau), sy(r)).unwrap();
        };
        push(1.0, 0.0, &mut points);
        for (tau, r) in c.breakpoints.iter().filter(|(t, _)| *t <= tau_max) {
            push(*tau, rho, &mut points);
            push(*tau, *r, &mut points);
            rho = *r;
        }
        push(tau_max, rho, &mut points);
        let dash_attr = if dash.is_empty() {
            String::new()
        } else {
            format!(r#" stroke-dasharray="{dash}""#)
        };
        writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2"{dash_attr} points="{}"/>"#,
            points.trim_end()
        )
        .unwrap();
        let ly = top + 16.0 + 18.0 * i as f64;
        let lx = left + pw - 150.0;
        writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"{dash_attr}/><text x="{}" y="{}">{}</text>"#,
            lx + 24.0,
            lx + 30.0,
            ly + 4.0,
            escape(&c.solver)
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    svg
}

fn trim_number(v: f64) -> String {
    let s = format!("{v:.2}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Writes `<stem>.svg` and `<stem>.txt` into `dir`.
pub fn emit_profile_plot(metric: &str, curves: &[ProfileCurve], tau_max: f64, dir: &Path) -> Result<()> {
    if curves.is_empty() {
        return Err(DmsError::State("no curves to plot".into()));
    }
    if !(tau_max > 1.0) {
        return Err(DmsError::Config("tau_max must exceed 1".into()));
    }
    let table = format_breakpoint_table(metric, curves)?;
    let svg = render_svg(&format!("Performance profile: {metric}"), curves, tau_max);
    let txt_path = dir.join(format!("{metric}.txt"));
    let svg_path = dir.join(format!("{metric}.svg"));
    std::fs::write(&txt_path, table).map_err(|e| DmsError::io(&txt_path, e))?;
    std::fs::write(&svg_path, svg).map_err(|e| DmsError::io(&svg_path, e))?;
    Ok(())
}

/// Builds and writes all four metric profiles for a set of reports.
pub fn emit_all_profiles(reports: &[MetricReport], tau_max: f64, dir: &Path) -> Result<Vec<(MetricKind, Vec<ProfileCurve>)>> {
    std::fs::create_dir_all(dir).map_err(|e| DmsError::io(dir, e))?;
    let mut out = Vec::new();
    for metric in MetricKind::ALL {
        let table = invert_for_profile(&ProfileTable::from_reports(reports, metric), metric);
        let curves = compute_profiles(&table)?;
        emit_profile_plot(metric.as_str(), &curves, tau_max, dir)?;
        out.push((metric, curves));
    }
    Ok(out)
}
