//! Static SVG charts of benchmark CSVs: relative run-time and verified-point
//! curves over the iteration budget (log10 x-axis), and run-time CDFs.
//!
//! One polyline per (family, strategy, cells) series; grid strategies carry
//! the total number of joint cells in brackets, e.g. `grid [16]` for 2 cells
//! per axis in both images.

use crate::bench::BenchRow;
use crate::error::{GridsacError, Result};

/// Chart type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// Mean total time relative to the traditional baseline vs log10(iters).
    RelativeTimeVsIters,
    /// Cumulative distribution of total run-times.
    CdfTimes,
    /// Mean residual evaluations vs log10(iters).
    PointsVerified,
}

impl PlotKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "relative_time_vs_iters" => Ok(Self::RelativeTimeVsIters),
            "cdf_times" => Ok(Self::CdfTimes),
            "points_verified" => Ok(Self::PointsVerified),
            other => Err(GridsacError::Config(format!(
                "unknown plot kind `{other}` (expected relative_time_vs_iters, cdf_times or points_verified)"
            ))),
        }
    }

    fn axis_labels(self) -> (&'static str, &'static str) {
        match self {
            Self::RelativeTimeVsIters => ("log10 iterations", "relative time"),
            Self::CdfTimes => ("total time (ms)", "fraction of runs"),
            Self::PointsVerified => ("log10 iterations", "points verified"),
        }
    }
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const PLOT: (f64, f64, f64, f64) = (70.0, 20.0, 770.0, 440.0); // x0, y0, x1, y1

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

#[derive(Debug)]
struct Series {
    label: String,
    points: Vec<(f64, f64)>,
}

fn series_key(row: &BenchRow) -> (String, String, usize) {
    (row.family.clone(), row.strategy.clone(), row.cells)
}

fn series_label(family: &str, strategy: &str, cells: usize) -> String {
    if cells > 0 {
        let joint = cells * cells * cells * cells;
        format!("{family} {strategy} [{joint}]")
    } else {
        format!("{family} {strategy}")
    }
}

fn build_series(rows: &[BenchRow], kind: PlotKind) -> Vec<Series> {
    use std::collections::BTreeMap;
    let mut grouped: BTreeMap<(String, String, usize), Vec<&BenchRow>> = BTreeMap::new();
    for row in rows.iter().filter(|r| r.error.is_none()) {
        grouped.entry(series_key(row)).or_default().push(row);
    }
    let mut out = Vec::new();
    for ((family, strategy, cells), rows) in grouped {
        let label = series_label(&family, &strategy, cells);
        let points = match kind {
            PlotKind::CdfTimes => {
                let mut times: Vec<f64> = rows.iter().map(|r| r.total_ms).collect();
                times.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let k = times.len();
                let mut pts = Vec::with_capacity(2 * k);
                for (i, t) in times.iter().enumerate() {
                    pts.push((*t, i as f64 / k as f64));
                    pts.push((*t, (i + 1) as f64 / k as f64));
                }
                pts
            }
            PlotKind::RelativeTimeVsIters | PlotKind::PointsVerified => {
                let mut by_iters: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
                for r in rows {
                    let y = match kind {
                        PlotKind::RelativeTimeVsIters => match r.rel_total {
                            Some(v) => v,
                            None => continue,
                        },
                        _ => r.evaluated_points as f64,
                    };
                    let e = by_iters.entry(r.iters).or_insert((0.0, 0));
                    e.0 += y;
                    e.1 += 1;
                }
                by_iters
                    .into_iter()
                    .map(|(iters, (sum, cnt))| ((iters as f64).log10(), sum / cnt as f64))
                    .collect()
            }
        };
        if !points.is_empty() {
            out.push(Series { label, points });
        }
    }
    out
}

fn fmt(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if a >= 1000.0 || a < 0.01 {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

/// Render rows as an SVG 1.1 document. An empty or all-error input produces
/// an empty chart with a warning annotation.
pub fn emit_svg(rows: &[BenchRow], kind: PlotKind) -> String {
    let series = build_series(rows, kind);
    let (xlabel, ylabel) = kind.axis_labels();
    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    let (px0, py0, px1, py1) = PLOT;
    svg.push_str(&format!(
        "  <rect x=\"{px0}\" y=\"{py0}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#333\"/>\n",
        px1 - px0,
        py1 - py0
    ));
    if series.is_empty() {
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\" fill=\"#a00\">warning: no data to plot</text>\n",
            (px0 + px1) / 2.0,
            (py0 + py1) / 2.0
        ));
        svg.push_str("</svg>\n");
        return svg;
    }

    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for s in &series {
        for &(x, y) in &s.points {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    if x_max - x_min < 1e-12 {
        x_min -= 0.5;
        x_max += 0.5;
    }
    if y_max - y_min < 1e-12 {
        y_min -= 0.5;
        y_max += 0.5;
    }
    let pad_x = 0.04 * (x_max - x_min);
    let pad_y = 0.06 * (y_max - y_min);
    let (x_lo, x_hi) = (x_min - pad_x, x_max + pad_x);
    let (y_lo, y_hi) = (y_min - pad_y, y_max + pad_y);
    let to_px = |x: f64| px0 + (x - x_lo) / (x_hi - x_lo) * (px1 - px0);
    let to_py = |y: f64| py1 - (y - y_lo) / (y_hi - y_lo) * (py1 - py0);

    // Axis tick labels at the data range ends plus the midpoint.
    for (v, anchor) in [
        (x_min, "start"),
        ((x_min + x_max) / 2.0, "middle"),
        (x_max, "end"),
    ] {
        svg.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"{anchor}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
            to_px(v),
            py1 + 18.0,
            fmt(v)
        ));
    }
    for v in [y_min, (y_min + y_max) / 2.0, y_max] {
        svg.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
            px0 - 6.0,
            to_py(v) + 4.0,
            fmt(v)
        ));
    }
    svg.push_str(&format!(
        "  <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">{xlabel}</text>\n",
        (px0 + px1) / 2.0,
        HEIGHT - 12.0
    ));
    svg.push_str(&format!(
        "  <text x=\"16\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" transform=\"rotate(-90 16 {:.2})\">{ylabel}</text>\n",
        (py0 + py1) / 2.0,
        (py0 + py1) / 2.0
    ));

    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", to_px(x), to_py(y)))
            .collect();
        svg.push_str(&format!(
            "  <polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\" points=\"{}\"/>\n",
            pts.join(" ")
        ));
        // Legend entry.
        let ly = py0 + 16.0 + 18.0 * i as f64;
        svg.push_str(&format!(
            "  <rect x=\"{:.2}\" y=\"{:.2}\" width=\"12\" height=\"12\" fill=\"{color}\"/>\n",
            px1 - 190.0,
            ly - 10.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
            px1 - 172.0,
            ly,
            s.label
        ));
    }
    svg.push_str("</svg>\n");
    svg
}
