//! Static SVG charts of partial dependence and permutation importance series.

use std::collections::BTreeMap;
use std::path::Path;

use plotters::coord::ranged1d::SegmentValue;
use plotters::prelude::*;
use serde::Deserialize;
use serde_json::Value;

use exemplar_core::explain::{Importance, PdpPoint};

use crate::error::{AppError, AppResult};

pub const WIDTH: u32 = 800;
pub const HEIGHT: u32 = 500;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Series {
    Pdp(Vec<PdpPoint<f64>>),
    PdpByFeature(BTreeMap<String, Vec<PdpPoint<f64>>>),
    Importance(BTreeMap<String, Importance<f64>>),
}

impl Series {
    /// Parses `value`, or the part of it addressed by a JSON pointer such as `/pdp`.
    pub fn from_json(value: &Value, pointer: Option<&str>) -> AppResult<Self> {
        let target = match pointer {
            Some(p) => value
                .pointer(p)
                .ok_or_else(|| AppError::BadRequest(format!("pointer {p:?} matches nothing")))?,
            None => value,
        };
        let series: Series = Series::deserialize(target)
            .map_err(|_| AppError::BadRequest("input is neither a PDP series nor an importance map".into()))?;
        let empty = match &series {
            Series::Pdp(p) => p.is_empty(),
            Series::PdpByFeature(m) => m.is_empty() || m.values().any(Vec::is_empty),
            Series::Importance(m) => m.is_empty(),
        };
        if empty {
            return Err(AppError::BadRequest("series is empty".into()));
        }
        Ok(series)
    }
}

fn plot_err<E: std::fmt::Display>(e: E) -> AppError {
    AppError::Plot(e.to_string())
}

fn padded(lo: f64, hi: f64) -> std::ops::Range<f64> {
    let pad = if hi > lo { (hi - lo) * 0.05 } else { 0.5 };
    (lo - pad)..(hi + pad)
}

fn draw_pdp(root: &DrawingArea<SVGBackend, plotters::coord::Shift>, lines: &BTreeMap<String, Vec<PdpPoint<f64>>>, title: &str) -> AppResult<()> {
    let all = lines.values().flatten();
    let (mut x_lo, mut x_hi, mut y_lo, mut y_hi) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in all {
        x_lo = x_lo.min(p.value);
        x_hi = x_hi.max(p.value);
        y_lo = y_lo.min(p.mean_prediction);
        y_hi = y_hi.max(p.mean_prediction);
    }
    let mut chart = ChartBuilder::on(root)
        .caption(title, ("sans-serif", 20))
        .margin(15)
        .x_label_area_size(40)
        .y_label_area_size(60)
        .build_cartesian_2d(padded(x_lo, x_hi), padded(y_lo, y_hi))
        .map_err(plot_err)?;
    chart
        .configure_mesh()
        .x_desc("feature value")
        .y_desc("mean prediction")
        .draw()
        .map_err(plot_err)?;
    for (i, (name, points)) in lines.iter().enumerate() {
        let color = Palette99::pick(i).to_rgba();
        chart
            .draw_series(LineSeries::new(points.iter().map(|p| (p.value, p.mean_prediction)), color.stroke_width(2)))
            .map_err(plot_err)?
            .label(name.clone())
            .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 20, y)], color.stroke_width(2)));
    }
    if lines.len() > 1 || lines.keys().any(|k| !k.is_empty()) {
        chart
            .configure_series_labels()
            .background_style(WHITE.mix(0.8))
            .border_style(BLACK)
            .draw()
            .map_err(plot_err)?;
    }
    Ok(())
}

fn draw_importance(root: &DrawingArea<SVGBackend, plotters::coord::Shift>, imp: &BTreeMap<String, Importance<f64>>, title: &str) -> AppResult<()> {
    let names: Vec<&String> = imp.keys().collect();
    let lo = imp.values().map(|i| (i.mean - i.std).min(0.0)).fold(0.0, f64::min);
    let hi = imp.values().map(|i| i.mean + i.std).fold(0.0, f64::max);
    let mut chart = ChartBuilder::on(root)
        .caption(title, ("sans-serif", 20))
        .margin(15)
        .x_label_area_size(40)
        .y_label_area_size(60)
        .build_cartesian_2d((0..names.len()).into_segmented(), padded(lo, hi))
        .map_err(plot_err)?;
    let label = |v: &SegmentValue<usize>| match v {
        SegmentValue::CenterOf(i) => names.get(*i).map(|s| s.to_string()).unwrap_or_default(),
        _ => String::new(),
    };
    chart
        .configure_mesh()
        .disable_x_mesh()
        .x_labels(names.len())
        .x_label_formatter(&label)
        .y_desc("importance")
        .draw()
        .map_err(plot_err)?;
    chart
        .draw_series(names.iter().enumerate().map(|(i, n)| {
            let mut bar = Rectangle::new(
                [(SegmentValue::Exact(i), 0.0), (SegmentValue::Exact(i + 1), imp[*n].mean)],
                BLUE.mix(0.6).filled(),
            );
            bar.set_margin(0, 0, 12, 12);
            bar
        }))
        .map_err(plot_err)?;
    chart
        .draw_series(names.iter().enumerate().map(|(i, n)| {
            let m = imp[*n];
            PathElement::new(
                vec![(SegmentValue::CenterOf(i), m.mean - m.std), (SegmentValue::CenterOf(i), m.mean + m.std)],
                BLACK.stroke_width(2),
            )
        }))
        .map_err(plot_err)?;
    Ok(())
}

/// Renders `series` as an SVG document.
pub fn render_svg(series: &Series, title: &str) -> AppResult<String> {
    let mut svg = String::new();
    {
        let root = SVGBackend::with_string(&mut svg, (WIDTH, HEIGHT)).into_drawing_area();
        root.fill(&WHITE).map_err(plot_err)?;
        match series {
            Series::Pdp(points) => draw_pdp(&root, &BTreeMap::from([(String::new(), points.clone())]), title)?,
            Series::PdpByFeature(lines) => draw_pdp(&root, lines, title)?,
            Series::Importance(imp) => draw_importance(&root, imp, title)?,
        }
        root.present().map_err(plot_err)?;
    }
    Ok(svg)
}

pub fn write_svg(series: &Series, title: &str, out: &Path) -> AppResult<()> {
    std::fs::write(out, render_svg(series, title)?)?;
    Ok(())
}
