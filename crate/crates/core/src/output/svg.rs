use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::analysis::{ConvergenceReport, ErrorColumn};
use crate::{Error, Result};

pub const WIDTH: f64 = 640.0;
pub const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 160.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 60.0;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scale {
    Linear,
    Log,
}

impl Scale {
    fn forward(self, v: f64) -> f64 {
        match self {
            Scale::Linear => v,
            Scale::Log => v.log10(),
        }
    }
}

/// Maps data coordinates onto the plotting area of the canvas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub x_scale: Scale,
    pub y_scale: Scale,
}

impl Frame {
    /// Frame enclosing `xs` and `ys` with a small padding in transformed space.
    pub fn fit(xs: &[f64], ys: &[f64], x_scale: Scale, y_scale: Scale) -> Self {
        let bounds = |vals: &[f64], scale: Scale| {
            let (lo, hi) = vals
                .iter()
                .map(|&v| scale.forward(v))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
            let pad = if hi > lo { 0.05 * (hi - lo) } else { 0.5 * lo.abs().max(1e-3) };
            (lo - pad, hi + pad)
        };
        Self {
            x: bounds(xs, x_scale),
            y: bounds(ys, y_scale),
            x_scale,
            y_scale,
        }
    }

    /// Pixel position of the data point `(x, y)`.
    pub fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (self.map_x(x), self.map_y(y))
    }

    fn map_x(&self, x: f64) -> f64 {
        let t = (self.x_scale.forward(x) - self.x.0) / (self.x.1 - self.x.0);
        MARGIN_LEFT + t * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn map_y(&self, y: f64) -> f64 {
        let t = (self.y_scale.forward(y) - self.y.0) / (self.y.1 - self.y.0);
        MARGIN_TOP + (1.0 - t) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }

    fn ticks(range: (f64, f64), scale: Scale) -> Vec<f64> {
        match scale {
            Scale::Log => {
                let mut out = Vec::new();
                for decade in range.0.floor() as i32..=range.1.ceil() as i32 {
                    for m in [1.0, 2.0, 5.0] {
                        let v = m * 10f64.powi(decade);
                        let t = v.log10();
                        if t >= range.0 && t <= range.1 {
                            out.push(v);
                        }
                    }
                }
                out
            }
            Scale::Linear => {
                let span = range.1 - range.0;
                let raw = span / 5.0;
                let mag = 10f64.powf(raw.log10().floor());
                let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(raw);
                let first = (range.0 / step).ceil() as i64;
                let last = (range.1 / step).floor() as i64;
                (first..=last).map(|k| k as f64 * step).collect()
            }
        }
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if (1e-2..1e3).contains(&v.abs()) {
        format!("{}", (v * 1e6).round() / 1e6)
    } else {
        format!("{v:.0e}")
    }
}

/// One data series on a chart.
#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// Straight guide line between two data points.
#[derive(Debug, Clone)]
pub struct Guide {
    pub label: String,
    pub from: (f64, f64),
    pub to: (f64, f64),
}

struct Chart<'a> {
    title: &'a str,
    x_label: &'a str,
    y_label: &'a str,
    frame: Frame,
    series: &'a [Series],
    guides: &'a [Guide],
}

impl Chart<'_> {
    fn render(&self) -> String {
        let f = &self.frame;
        let mut s = String::new();
        let (left, right) = (MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
        let (top, bottom) = (MARGIN_TOP, HEIGHT - MARGIN_BOTTOM);
        let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
            (left + right) / 2.0,
            escape(self.title)
        );

        // Axes and ticks.
        let _ = writeln!(
            s,
            r#"<rect class="axes" x="{left:.2}" y="{top:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
            right - left,
            bottom - top
        );
        for v in Frame::ticks(f.x, f.x_scale) {
            let px = f.map_x(v);
            let _ = writeln!(
                s,
                r##"<line x1="{px:.2}" y1="{top:.2}" x2="{px:.2}" y2="{bottom:.2}" stroke="#dddddd"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
                bottom + 16.0,
                tick_label(v)
            );
        }
        for v in Frame::ticks(f.y, f.y_scale) {
            let py = f.map_y(v);
            let _ = writeln!(
                s,
                r##"<line x1="{left:.2}" y1="{py:.2}" x2="{right:.2}" y2="{py:.2}" stroke="#dddddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
                left - 6.0,
                py + 4.0,
                tick_label(v)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            (left + right) / 2.0,
            HEIGHT - 18.0,
            escape(self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text transform="translate(18 {:.2}) rotate(-90)" text-anchor="middle">{}</text>"#,
            (top + bottom) / 2.0,
            escape(self.y_label)
        );

        let mut legend_y = top + 10.0;
        let mut legend = |s: &mut String, colour: &str, label: &str| {
            let _ = writeln!(
                s,
                r#"<line x1="{:.2}" y1="{legend_y:.2}" x2="{:.2}" y2="{legend_y:.2}" stroke="{colour}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text>"#,
                right + 10.0,
                right + 34.0,
                right + 40.0,
                legend_y + 4.0,
                escape(label)
            );
            legend_y += 18.0;
        };

        for g in self.guides {
            let (x1, y1) = f.map(g.from.0, g.from.1);
            let (x2, y2) = f.map(g.to.0, g.to.1);
            let _ = writeln!(
                s,
                r#"<line class="reference" x1="{x1:.4}" y1="{y1:.4}" x2="{x2:.4}" y2="{y2:.4}" stroke="black" stroke-width="1.5"/>"#
            );
            legend(&mut s, "black", &g.label);
        }
        for (k, series) in self.series.iter().enumerate() {
            let colour = PALETTE[k % PALETTE.len()];
            let pts: Vec<(f64, f64)> = series.points.iter().map(|&(x, y)| f.map(x, y)).collect();
            let path = pts.iter().map(|(x, y)| format!("{x:.4},{y:.4}")).collect::<Vec<_>>().join(" ");
            let _ = writeln!(
                s,
                r#"<polyline class="series" points="{path}" fill="none" stroke="{colour}" stroke-width="1.5"/>"#
            );
            for (x, y) in pts {
                let _ = writeln!(s, r#"<circle class="data" cx="{x:.4}" cy="{y:.4}" r="3" fill="{colour}"/>"#);
            }
            legend(&mut s, colour, &series.label);
        }
        s.push_str("</svg>\n");
        s
    }
}

/// Slope drawn next to each error column: `p + 1` for L² errors, `p` otherwise.
pub fn reference_slope(column: ErrorColumn, degree: usize) -> f64 {
    match column {
        ErrorColumn::L2U | ErrorColumn::L2V => degree as f64 + 1.0,
        ErrorColumn::EnergyU | ErrorColumn::JSemi => degree as f64,
    }
}

fn require_levels(report: &ConvergenceReport) -> Result<()> {
    if report.levels.len() < 2 {
        return Err(Error::NotEnoughLevels {
            needed: 2,
            got: report.levels.len(),
        });
    }
    Ok(())
}

/// Log–log chart of one error column against `h`, with a reference line of
/// slope [`reference_slope`] through the finest level.
pub fn error_chart(report: &ConvergenceReport, column: ErrorColumn) -> Result<String> {
    require_levels(report)?;
    let h = report.h();
    let e = report.column(column);
    if let Some(k) = e.iter().position(|v| !(*v > 0.0)) {
        return Err(Error::NonPositiveError { level: k, value: e[k] });
    }
    let slope = reference_slope(column, report.degree);
    let (h_fine, e_fine) = (*h.last().unwrap(), *e.last().unwrap());
    let h_coarse = h.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let guide = Guide {
        label: format!("slope {slope}"),
        from: (h_fine, e_fine),
        to: (h_coarse, e_fine * (h_coarse / h_fine).powf(slope)),
    };
    let ys: Vec<f64> = e.iter().cloned().chain([guide.to.1]).collect();
    let frame = Frame::fit(&h, &ys, Scale::Log, Scale::Log);
    let series = [Series {
        label: column.label().into(),
        points: h.iter().cloned().zip(e).collect(),
    }];
    let title = format!("{}, p = {}, i = {}", column.label(), report.degree, report.exponent);
    Ok(Chart {
        title: &title,
        x_label: "h",
        y_label: column.label(),
        frame,
        series: &series,
        guides: &[guide],
    }
    .render())
}

/// Linear chart of `max u_h` against `h` for each report, with the exact
/// maximum drawn as a horizontal line.
pub fn max_chart(reports: &[ConvergenceReport], exact_max: f64) -> Result<String> {
    if reports.is_empty() {
        return Err(Error::NotEnoughLevels { needed: 2, got: 0 });
    }
    reports.iter().try_for_each(require_levels)?;
    let series: Vec<Series> = reports
        .iter()
        .map(|r| Series {
            label: format!("p = {}, i = {}", r.degree, r.exponent),
            points: r.levels.iter().map(|l| (l.h, l.max_uh)).collect(),
        })
        .collect();
    let xs: Vec<f64> = series.iter().flat_map(|s| s.points.iter().map(|p| p.0)).collect();
    let ys: Vec<f64> = series.iter().flat_map(|s| s.points.iter().map(|p| p.1)).chain([exact_max]).collect();
    let frame = Frame::fit(&xs, &ys, Scale::Linear, Scale::Linear);
    let (x_lo, x_hi) = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let guide = Guide {
        label: "exact maximum".into(),
        from: (x_lo, exact_max),
        to: (x_hi, exact_max),
    };
    Ok(Chart {
        title: "max u_h",
        x_label: "h",
        y_label: "max u_h",
        frame,
        series: &series,
        guides: &[guide],
    }
    .render())
}

fn write(path: PathBuf, contents: &str) -> Result<PathBuf> {
    fs::write(&path, contents).map_err(|source| Error::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

/// File stem shared by the outputs of one report.
pub fn stem(report: &ConvergenceReport) -> String {
    format!("p{}_i{}", report.degree, report.exponent)
}

/// Writes one error chart per column and report plus a combined `max u_h`
/// chart into `dir`. Returns the written paths.
pub fn emit_plots(reports: &[ConvergenceReport], exact_max: f64, dir: &Path) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for report in reports {
        for column in ErrorColumn::ALL {
            let svg = error_chart(report, column)?;
            written.push(write(dir.join(format!("{}_{}.svg", stem(report), column.slug())), &svg)?);
        }
    }
    let svg = max_chart(reports, exact_max)?;
    let name = match reports {
        [single] => format!("{}_max_uh.svg", stem(single)),
        _ => "max_uh.svg".to_string(),
    };
    written.push(write(dir.join(name), &svg)?);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::LevelRecord;

    fn report(sizes: &[usize], degree: usize, error: impl Fn(f64) -> f64) -> ConvergenceReport {
        ConvergenceReport {
            degree,
            exponent: 1,
            sigma0: 1.0,
            sigma1: 1.0,
            levels: sizes
                .iter()
                .map(|&n| {
                    let h = std::f64::consts::SQRT_2 / n as f64;
                    LevelRecord {
                        n,
                        h,
                        l2_u: error(h),
                        energy_u: error(h),
                        l2_v: error(h),
                        j_semi: error(h),
                        max_uh: 0.015 + h * 1e-3,
                        residual: 0.0,
                        solve_seconds: 0.0,
                    }
                })
                .collect(),
            failures: vec![],
        }
    }

    fn attr(tag: &str, name: &str) -> f64 {
        let key = format!(" {name}=\"");
        let start = tag.find(&key).unwrap() + key.len();
        let end = start + tag[start..].find('"').unwrap();
        tag[start..end].parse().unwrap()
    }

    #[test]
    fn quadratic_errors_lie_on_the_slope_two_line() {
        let r = report(&[5, 10, 20, 40], 1, |h| 3.0 * h * h);
        let svg = error_chart(&r, ErrorColumn::L2U).unwrap();
        let line = svg.lines().find(|l| l.contains(r#"class="reference""#)).unwrap();
        let (x1, y1, x2, y2) = (attr(line, "x1"), attr(line, "y1"), attr(line, "x2"), attr(line, "y2"));
        let len = ((x2 - x1).powi(2) + (y2 - y1).powi(2)).sqrt();
        let circles: Vec<_> = svg.lines().filter(|l| l.contains(r#"class="data""#)).collect();
        assert_eq!(circles.len(), 4);
        for c in circles {
            let (cx, cy) = (attr(c, "cx"), attr(c, "cy"));
            let distance = ((x2 - x1) * (y1 - cy) - (x1 - cx) * (y2 - y1)).abs() / len;
            assert!(distance < 1.0, "{distance}");
        }
    }

    #[test]
    fn frame_maps_corners() {
        let f = Frame::fit(&[0.1, 1.0], &[1e-4, 1e-2], Scale::Log, Scale::Log);
        let (x0, y0) = f.map(0.1, 1e-4);
        let (x1, y1) = f.map(1.0, 1e-2);
        assert!(x0 < x1 && y0 > y1);
        assert!(x0 > MARGIN_LEFT && x1 < WIDTH - MARGIN_RIGHT);
        assert!(y1 > MARGIN_TOP && y0 < HEIGHT - MARGIN_BOTTOM);
    }

    #[test]
    fn fewer_than_two_levels() {
        let r = report(&[5], 1, |h| h);
        assert!(matches!(error_chart(&r, ErrorColumn::L2U), Err(Error::NotEnoughLevels { .. })));
        assert!(max_chart(&[r], 0.015).is_err());
        assert!(max_chart(&[], 0.015).is_err());
    }

    #[test]
    fn reference_slopes() {
        assert_eq!(reference_slope(ErrorColumn::L2U, 2), 3.0);
        assert_eq!(reference_slope(ErrorColumn::EnergyU, 2), 2.0);
        assert_eq!(reference_slope(ErrorColumn::L2V, 1), 2.0);
    }

    #[test]
    fn max_chart_overlays_reports() {
        let a = report(&[10, 20], 1, |h| h);
        let mut b = a.clone();
        b.exponent = 3;
        let svg = max_chart(&[a, b], 1000.0 * 2f64.powi(-16)).unwrap();
        assert_eq!(svg.matches(r#"class="series""#).count(), 2);
        assert_eq!(svg.matches(r#"class="reference""#).count(), 1);
        assert!(svg.contains("p = 1, i = 3"));
    }

    #[test]
    fn labels_are_escaped() {
        assert_eq!(escape("a<b & c>\""), "a&lt;b &amp; c&gt;&quot;");
    }
}
