//! Plot data: a colored scatter table and an SVG of the three pairwise
//! projections.
//!
//! Numbers in the SVG are printed at fixed precision so the same input
//! always renders to the same bytes.

use std::fmt::Write as _;
use std::io::Write;

use pitchmbc_core::pitch::AXIS_NAMES;
use pitchmbc_core::{PitchType, Point};

#[derive(Debug, Clone, PartialEq)]
pub struct PlotPoint {
    pub point: Point,
    pub pitch_type: PitchType,
    pub color: &'static str,
}

/// Color per cluster. The first curveball cluster is drawn in the curveball
/// color and any further curveball clusters in the alternate color, so a
/// split curveball shows up as two visibly distinct groups.
pub fn cluster_colors(labels: &[PitchType]) -> Vec<&'static str> {
    let mut seen_curveball = false;
    labels
        .iter()
        .map(|&t| {
            if t == PitchType::Curveball {
                let color = if seen_curveball { PitchType::ALTERNATE_CURVEBALL_COLOR } else { t.color() };
                seen_curveball = true;
                color
            } else {
                t.color()
            }
        })
        .collect()
}

/// `start_speed,back_spin,side_spin,pitch_type,color`; header only when
/// `points` is empty.
pub fn write_scatter_csv(sink: impl Write, points: &[PlotPoint]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["start_speed", "back_spin", "side_spin", "pitch_type", "color"])?;
    for p in points {
        w.write_record([
            p.point[0].to_string(),
            p.point[1].to_string(),
            p.point[2].to_string(),
            p.pitch_type.name().to_string(),
            p.color.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

const PANEL: f64 = 300.0;
const MARGIN: f64 = 50.0;
const LEGEND: f64 = 60.0;
/// `(x axis, y axis)` in point coordinates for each panel.
const PANELS: [(usize, usize); 3] = [(0, 1), (2, 1), (0, 2)];

fn range(points: &[PlotPoint], axis: usize) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for p in points {
        lo = lo.min(p.point[axis]);
        hi = hi.max(p.point[axis]);
    }
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let pad = if hi > lo { 0.05 * (hi - lo) } else { 1.0 };
    (lo - pad, hi + pad)
}

/// Three side-by-side panels: speed vs back spin, side spin vs back spin,
/// speed vs side spin.
pub fn render_svg(points: &[PlotPoint]) -> String {
    let width = 3.0 * (PANEL + MARGIN) + MARGIN;
    let height = PANEL + 2.0 * MARGIN + LEGEND;
    let ranges = [range(points, 0), range(points, 1), range(points, 2)];
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (i, &(ax, ay)) in PANELS.iter().enumerate() {
        let left = MARGIN + i as f64 * (PANEL + MARGIN);
        let top = MARGIN;
        let (x0, x1) = ranges[ax];
        let (y0, y1) = ranges[ay];
        let _ = writeln!(s, r#"<g id="panel-{}-{}">"#, AXIS_NAMES[ax], AXIS_NAMES[ay]);
        let _ = writeln!(
            s,
            r#"<rect x="{left:.2}" y="{top:.2}" width="{PANEL:.2}" height="{PANEL:.2}" fill="none" stroke="black"/>"#
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            left + PANEL / 2.0,
            top + PANEL + 35.0,
            AXIS_NAMES[ax]
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" transform="rotate(-90 {:.2} {:.2})">{}</text>"#,
            left - 35.0,
            top + PANEL / 2.0,
            left - 35.0,
            top + PANEL / 2.0,
            AXIS_NAMES[ay]
        );
        for (value, x) in [(x0, left), (x1, left + PANEL)] {
            let _ = writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{value:.1}</text>"#, top + PANEL + 15.0);
        }
        for (value, y) in [(y0, top + PANEL), (y1, top)] {
            let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{value:.1}</text>"#, left - 4.0, y + 4.0);
        }
        for p in points {
            let cx = left + (p.point[ax] - x0) / (x1 - x0) * PANEL;
            let cy = top + PANEL - (p.point[ay] - y0) / (y1 - y0) * PANEL;
            let _ = writeln!(s, r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="2" fill="{}" fill-opacity="0.7"/>"#, p.color);
        }
        let _ = writeln!(s, "</g>");
    }

    let mut legend: Vec<(PitchType, &str)> = Vec::new();
    for p in points {
        if !legend.contains(&(p.pitch_type, p.color)) {
            legend.push((p.pitch_type, p.color));
        }
    }
    legend.sort();
    let base = height - LEGEND / 2.0;
    for (i, (t, color)) in legend.iter().enumerate() {
        let x = MARGIN + i as f64 * 120.0;
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{base:.2}" r="5" fill="{color}"/>"#);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, x + 10.0, base + 4.0, t.name());
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_curveball_cluster_is_purple() {
        use PitchType::*;
        assert_eq!(
            cluster_colors(&[Curveball, FourSeam, Curveball, Curveball]),
            vec!["black", "red", "purple", "purple"]
        );
    }

    #[test]
    fn empty_scatter_is_header_only() {
        let mut buf = Vec::new();
        write_scatter_csv(&mut buf, &[]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "start_speed,back_spin,side_spin,pitch_type,color\n");
        let svg = render_svg(&[]);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert!(!svg.contains("<circle"));
    }

    #[test]
    fn svg_has_one_circle_per_point_per_panel() {
        let pts = vec![
            PlotPoint { point: [90.0, 150.0, -40.0], pitch_type: PitchType::FourSeam, color: "red" },
            PlotPoint { point: [75.0, -80.0, 60.0], pitch_type: PitchType::Curveball, color: "black" },
        ];
        let svg = render_svg(&pts);
        // 2 points × 3 panels + 2 legend entries
        assert_eq!(svg.matches("<circle").count(), 8);
        assert_eq!(svg, render_svg(&pts));
    }
}
