//! SVG scatter plots of 2-D datasets.

use std::fmt::Write as _;

use skewbench::clustering::discover;
use skewbench::{summarize, Dataset, Error, ExampleKind, Result};

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 40.0;
const MAJORITY_COLOR: &str = "#4477AA";
const MINORITY_COLOR: &str = "#EE6677";
const RADIUS: f64 = 4.0;
const CROSS: f64 = 7.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlotOptions {
    /// Run MeanShift on the minority class and mark each center with a cross.
    pub show_centers: bool,
    /// Ring borderline (dashed) and rare (double) minority points.
    pub show_kinds: bool,
    pub quantile: f64,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions { show_centers: false, show_kinds: false, quantile: skewbench::clustering::DEFAULT_QUANTILE }
    }
}

struct Frame {
    min: [f64; 2],
    scale: [f64; 2],
}

impl Frame {
    fn fit(ds: &Dataset, extra: &[Vec<f64>]) -> Frame {
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for p in ds.rows().chain(extra.iter().map(Vec::as_slice)) {
            for j in 0..2 {
                min[j] = min[j].min(p[j]);
                max[j] = max[j].max(p[j]);
            }
        }
        let mut scale = [1.0; 2];
        let span = [WIDTH - 2.0 * MARGIN, HEIGHT - 2.0 * MARGIN];
        for j in 0..2 {
            let range = max[j] - min[j];
            if range > 0.0 {
                scale[j] = span[j] / range;
            } else {
                // Degenerate axis: center the points.
                min[j] -= span[j] / 2.0;
            }
        }
        Frame { min, scale }
    }

    fn map(&self, p: &[f64]) -> (f64, f64) {
        let x = MARGIN + (p[0] - self.min[0]) * self.scale[0];
        let y = HEIGHT - MARGIN - (p[1] - self.min[1]) * self.scale[1];
        (x, y)
    }
}

fn triangle(x: f64, y: f64) -> String {
    let h = RADIUS * 1.25;
    format!(
        "{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}",
        x,
        y - h,
        x - h,
        y + h * 0.8,
        x + h,
        y + h * 0.8
    )
}

/// Render `ds` as an 800×600 SVG document.
pub fn render_svg(ds: &Dataset, opts: &PlotOptions) -> Result<String> {
    if ds.is_empty() {
        return Err(Error::InvalidData("cannot plot an empty dataset".into()));
    }
    if ds.dims() != 2 {
        return Err(Error::InvalidData("plotting requires 2-D data".into()));
    }
    let summary = summarize(ds)?;
    let minority = summary.minority_label;

    let centers = if opts.show_centers {
        let points: Vec<Vec<f64>> = ds.indices_of(minority).iter().map(|&i| ds.point(i).to_vec()).collect();
        if points.len() < 2 {
            points
        } else {
            discover(&points, opts.quantile)?.centers
        }
    } else {
        Vec::new()
    };
    let frame = Frame::fit(ds, &centers);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="#999999"/>"##,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );

    let _ = writeln!(s, r#"<g class="majority" fill="{MAJORITY_COLOR}">"#);
    for i in (0..ds.len()).filter(|&i| ds.label(i) != minority) {
        let (x, y) = frame.map(ds.point(i));
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{RADIUS}"/>"#);
    }
    s.push_str("</g>\n");

    let _ = writeln!(s, r#"<g class="minority" fill="{MINORITY_COLOR}">"#);
    for i in ds.indices_of(minority) {
        let (x, y) = frame.map(ds.point(i));
        let _ = writeln!(s, r#"<polygon points="{}"/>"#, triangle(x, y));
    }
    s.push_str("</g>\n");

    if opts.show_kinds {
        let _ = writeln!(s, r##"<g class="kinds" fill="none" stroke="#222222" stroke-width="1">"##);
        for i in 0..ds.len() {
            let (x, y) = frame.map(ds.point(i));
            match ds.kind(i) {
                Some(ExampleKind::Borderline) => {
                    let _ = writeln!(
                        s,
                        r#"<circle class="borderline" cx="{x:.2}" cy="{y:.2}" r="{:.2}" stroke-dasharray="2,2"/>"#,
                        RADIUS * 2.0
                    );
                }
                Some(ExampleKind::Rare) => {
                    for r in [RADIUS * 2.0, RADIUS * 2.75] {
                        let _ = writeln!(s, r#"<circle class="rare" cx="{x:.2}" cy="{y:.2}" r="{r:.2}"/>"#);
                    }
                }
                _ => {}
            }
        }
        s.push_str("</g>\n");
    }

    if !centers.is_empty() {
        let _ = writeln!(s, r#"<g class="centers" stroke="black" stroke-width="2">"#);
        for c in &centers {
            let (x, y) = frame.map(c);
            let _ = writeln!(
                s,
                r#"<path class="center" d="M{:.2},{:.2} L{:.2},{:.2} M{:.2},{:.2} L{:.2},{:.2}"/>"#,
                x - CROSS,
                y - CROSS,
                x + CROSS,
                y + CROSS,
                x - CROSS,
                y + CROSS,
                x + CROSS,
                y - CROSS
            );
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    Ok(s)
}
