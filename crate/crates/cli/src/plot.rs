use std::path::Path;

use anyhow::{anyhow, Result};
use plotters::prelude::*;

const SIZE: (u32, u32) = (800, 500);

fn colour(i: usize) -> RGBColor {
    const C: [RGBColor; 6] = [
        RGBColor(31, 119, 180),
        RGBColor(255, 127, 14),
        RGBColor(44, 160, 44),
        RGBColor(214, 39, 40),
        RGBColor(148, 103, 189),
        RGBColor(140, 86, 75),
    ];
    C[i % C.len()]
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
        (a.min(v), b.max(v))
    });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let pad = ((hi - lo) * 0.05).max(1e-12);
    (lo.min(0.0), hi + pad)
}

/// Line chart of named `(x, y)` series.
pub fn lines(
    path: &Path,
    title: &str,
    (x_label, y_label): (&str, &str),
    series: &[(String, Vec<(f64, f64)>)],
) -> Result<()> {
    let (x0, x1) = bounds(series.iter().flat_map(|s| s.1.iter().map(|p| p.0)));
    let (y0, y1) = bounds(series.iter().flat_map(|s| s.1.iter().map(|p| p.1)));
    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(|e| anyhow!("{e}"))?;
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 22))
        .margin(12)
        .x_label_area_size(40)
        .y_label_area_size(60)
        .build_cartesian_2d(x0..x1, y0..y1)
        .map_err(|e| anyhow!("{e}"))?;
    chart
        .configure_mesh()
        .x_desc(x_label)
        .y_desc(y_label)
        .draw()
        .map_err(|e| anyhow!("{e}"))?;
    for (i, (name, pts)) in series.iter().enumerate() {
        let c = colour(i);
        chart
            .draw_series(LineSeries::new(pts.iter().copied(), c.stroke_width(2)))
            .map_err(|e| anyhow!("{e}"))?
            .label(name.as_str())
            .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 18, y)], c.stroke_width(2)));
    }
    chart
        .configure_series_labels()
        .border_style(BLACK)
        .background_style(WHITE.mix(0.8))
        .draw()
        .map_err(|e| anyhow!("{e}"))?;
    root.present().map_err(|e| anyhow!("{e}"))?;
    Ok(())
}

/// Grouped bars of `ideal[step][qubit]` with markers for `modeled[step][qubit]`
/// and optional measured points `(step, qubit, value, uncertainty)`, all 1-based.
pub fn grouped_bars(
    path: &Path,
    title: &str,
    qubits: &[String],
    ideal: &[Vec<f64>],
    modeled: &[Vec<f64>],
    measured: &[(usize, usize, f64, f64)],
) -> Result<()> {
    let steps = ideal.len();
    let nq = qubits.len();
    let (y0, y1) = bounds(
        ideal
            .iter()
            .chain(modeled)
            .flatten()
            .copied()
            .chain(measured.iter().map(|m| m.2 + m.3)),
    );
    let width = 0.8 / nq as f64;
    let x_of = |step: usize, q: usize| step as f64 - 0.4 + width * (q as f64 - 0.5);

    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(|e| anyhow!("{e}"))?;
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 22))
        .margin(12)
        .x_label_area_size(40)
        .y_label_area_size(60)
        .build_cartesian_2d(0.4..steps as f64 + 0.6, y0..y1)
        .map_err(|e| anyhow!("{e}"))?;
    chart
        .configure_mesh()
        .x_labels(steps)
        .x_label_formatter(&|x| format!("{:.0}", x))
        .x_desc("step")
        .y_desc("polarization / P'")
        .disable_x_mesh()
        .draw()
        .map_err(|e| anyhow!("{e}"))?;

    for q in 0..nq {
        let c = colour(q);
        let bars = ideal.iter().enumerate().map(move |(s, row)| {
            let x = x_of(s + 1, q + 1);
            Rectangle::new(
                [(x - width / 2.0, 0.0), (x + width / 2.0, row[q])],
                c.mix(0.35).filled(),
            )
        });
        chart
            .draw_series(bars)
            .map_err(|e| anyhow!("{e}"))?
            .label(format!("{} ideal", qubits[q]))
            .legend(move |(x, y)| {
                Rectangle::new([(x, y - 5), (x + 14, y + 5)], c.mix(0.35).filled())
            });
        let marks = modeled.iter().enumerate().map(move |(s, row)| {
            let x = x_of(s + 1, q + 1);
            PathElement::new(
                vec![(x - width / 2.0, row[q]), (x + width / 2.0, row[q])],
                c.stroke_width(3),
            )
        });
        chart
            .draw_series(marks)
            .map_err(|e| anyhow!("{e}"))?
            .label(format!("{} model", qubits[q]))
            .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 14, y)], c.stroke_width(3)));
    }
    let points = measured.iter().flat_map(|&(s, q, v, u)| {
        let x = x_of(s, q);
        [
            PathElement::new(vec![(x, v - u), (x, v + u)], BLACK.stroke_width(1)),
            PathElement::new(
                vec![(x - width / 4.0, v), (x + width / 4.0, v)],
                BLACK.stroke_width(2),
            ),
        ]
    });
    if !measured.is_empty() {
        chart
            .draw_series(points)
            .map_err(|e| anyhow!("{e}"))?
            .label("measured")
            .legend(|(x, y)| PathElement::new(vec![(x, y), (x + 14, y)], BLACK.stroke_width(2)));
    }
    chart
        .configure_series_labels()
        .position(SeriesLabelPosition::UpperLeft)
        .border_style(BLACK)
        .background_style(WHITE.mix(0.8))
        .draw()
        .map_err(|e| anyhow!("{e}"))?;
    root.present().map_err(|e| anyhow!("{e}"))?;
    Ok(())
}
