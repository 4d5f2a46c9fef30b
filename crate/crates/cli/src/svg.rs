//! SVG rendering of patches. Exact coordinates are converted to floats
//! here only; 6 decimal places.

use penrose_core::lattice::FramePoint;
use penrose_core::tile::{ArrowKind, Shape};
use penrose_core::Patch;

pub struct RenderOptions {
    /// Fill thin rhombi (the usual reading aid).
    pub fill_thin: bool,
    /// Draw the arc decorations of labelled tiles.
    pub arcs: bool,
    /// Highlight the k-maps centred at these vertex positions.
    pub highlight: Vec<(f64, f64, f64)>, // (x, y, radius)
    pub scale: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            fill_thin: true,
            arcs: true,
            highlight: Vec::new(),
            scale: 24.0,
        }
    }
}

fn esc(v: f64) -> String {
    format!("{:.6}", v)
}

pub fn render(patch: &Patch, opt: &RenderOptions) -> String {
    let mut min = (f64::INFINITY, f64::INFINITY);
    let mut max = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    let pts: Vec<Vec<(f64, f64)>> = patch
        .tiles()
        .iter()
        .map(|t| {
            t.corners()
                .iter()
                .map(|c| {
                    let (x, y) = FramePoint::from_planar(c).to_f64();
                    let p = (x * opt.scale, -y * opt.scale);
                    min.0 = min.0.min(p.0);
                    min.1 = min.1.min(p.1);
                    max.0 = max.0.max(p.0);
                    max.1 = max.1.max(p.1);
                    p
                })
                .collect()
        })
        .collect();
    let pad = opt.scale;
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
        esc(min.0 - pad),
        esc(min.1 - pad),
        esc(max.0 - min.0 + 2.0 * pad),
        esc(max.1 - min.1 + 2.0 * pad)
    ));
    for (t, poly) in patch.tiles().iter().zip(&pts) {
        let fill = match (t.shape, opt.fill_thin) {
            (Shape::Thin, true) => "#9db8e8",
            _ => "#f6f2e8",
        };
        let d: Vec<String> = poly.iter().map(|p| format!("{},{}", esc(p.0), esc(p.1))).collect();
        out.push_str(&format!(
            "  <polygon points=\"{}\" fill=\"{}\" stroke=\"#444444\" stroke-width=\"{}\"/>\n",
            d.join(" "),
            fill,
            esc(opt.scale * 0.02)
        ));
    }
    if opt.arcs {
        for (t, poly) in patch.tiles().iter().zip(&pts) {
            let Some(labels) = t.edge_labels() else { continue };
            // arc through points 30% along each marked-corner edge: drawn
            // as small circles at the arrow heads, offset towards the
            // tile interior
            let centroid = (
                poly.iter().map(|p| p.0).sum::<f64>() / 4.0,
                poly.iter().map(|p| p.1).sum::<f64>() / 4.0,
            );
            for (edge, lab) in t.edges().iter().zip(labels.iter()) {
                let (hx, hy) = {
                    let (x, y) = FramePoint::from_planar(&lab.head).to_f64();
                    (x * opt.scale, -y * opt.scale)
                };
                let (ox, oy) = {
                    let other = if edge.0 == lab.head { edge.1 } else { edge.0 };
                    let (x, y) = FramePoint::from_planar(&other).to_f64();
                    (x * opt.scale, -y * opt.scale)
                };
                // arrow marks near the head end of the edge, nudged inside
                let t0 = 0.25;
                let bx = hx + (ox - hx) * t0 + (centroid.0 - hx) * 0.08;
                let by = hy + (oy - hy) * t0 + (centroid.1 - hy) * 0.08;
                let color = match lab.kind {
                    ArrowKind::Single => "#c03a2b",
                    ArrowKind::Double => "#2b70c0",
                };
                let r = match lab.kind {
                    ArrowKind::Single => 0.045,
                    ArrowKind::Double => 0.075,
                };
                out.push_str(&format!(
                    "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\"/>\n",
                    esc(bx),
                    esc(by),
                    esc(opt.scale * r),
                    color
                ));
            }
        }
    }
    for (x, y, r) in &opt.highlight {
        out.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"#d07000\" stroke-width=\"{}\"/>\n",
            esc(x * opt.scale),
            esc(-y * opt.scale),
            esc(r * opt.scale),
            esc(opt.scale * 0.05)
        ));
    }
    out.push_str("</svg>\n");
    out
}
