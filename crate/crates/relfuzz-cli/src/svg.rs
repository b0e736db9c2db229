//! Minimal standalone SVG rendering of membership polylines.

use crate::pipeline::PlotSeries;
use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 60.0;

const PALETTE: [&str; 6] = [
    "#1b6ca8", "#c0392b", "#1e8449", "#7d3c98", "#b7950b", "#148f77",
];

pub fn render(series: &[PlotSeries]) -> String {
    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for s in series {
        for &(x, _) in &s.points {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
        }
    }
    if !x_min.is_finite() || !x_max.is_finite() {
        x_min = 0.0;
        x_max = 1.0;
    }
    if x_max - x_min < 1e-12 {
        let pad = x_max.abs().max(1.0) * 0.1;
        x_min -= pad;
        x_max += pad;
    }

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = |mu: f64| MARGIN_TOP + (1.0 - mu) * plot_h;

    let mut svg = String::new();
    let _ = write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
         font-family=\"sans-serif\" font-size=\"12\">\n"
    );
    let _ = write!(svg, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"#ffffff\"/>\n");
    let _ = write!(
        svg,
        "<text x=\"{:.2}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\" fill=\"#333\">\
         MTTF membership</text>\n",
        MARGIN_LEFT + plot_w / 2.0
    );

    // gridlines and y ticks at fixed membership levels
    for i in 0..=4 {
        let mu = i as f64 / 4.0;
        let y = sy(mu);
        let _ = write!(
            svg,
            "<line x1=\"{MARGIN_LEFT:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" \
             stroke=\"#dddddd\"/>\n",
            MARGIN_LEFT + plot_w
        );
        let _ = write!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" fill=\"#333\">{mu:.2}</text>\n",
            MARGIN_LEFT - 8.0,
            y + 4.0
        );
    }
    // x ticks
    for i in 0..=4 {
        let x_val = x_min + (x_max - x_min) * i as f64 / 4.0;
        let x = sx(x_val);
        let _ = write!(
            svg,
            "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"#333\"/>\n",
            MARGIN_TOP + plot_h,
            MARGIN_TOP + plot_h + 5.0
        );
        let _ = write!(
            svg,
            "<text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\" fill=\"#333\">{x_val:.4}</text>\n",
            MARGIN_TOP + plot_h + 20.0
        );
    }
    // axes
    let _ = write!(
        svg,
        "<line x1=\"{MARGIN_LEFT:.2}\" y1=\"{MARGIN_TOP:.2}\" x2=\"{MARGIN_LEFT:.2}\" \
         y2=\"{:.2}\" stroke=\"#333\"/>\n",
        MARGIN_TOP + plot_h
    );
    let _ = write!(
        svg,
        "<line x1=\"{MARGIN_LEFT:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#333\"/>\n",
        MARGIN_TOP + plot_h,
        MARGIN_LEFT + plot_w,
        MARGIN_TOP + plot_h
    );
    let _ = write!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" fill=\"#333\">MTTF (years)</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    );
    let _ = write!(
        svg,
        "<text x=\"18\" y=\"{:.2}\" text-anchor=\"middle\" fill=\"#333\" \
         transform=\"rotate(-90 18 {:.2})\">membership</text>\n",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    );

    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        if s.points.len() == 1 {
            // crisp spike: a vertical needle
            let (x, mu) = s.points[0];
            let _ = write!(
                svg,
                "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"{color}\" \
                 stroke-width=\"2\"/>\n",
                sx(x),
                sy(0.0),
                sx(x),
                sy(mu)
            );
        } else {
            let mut points = String::new();
            for &(x, mu) in &s.points {
                let _ = write!(points, "{:.2},{:.2} ", sx(x), sy(mu));
            }
            let _ = write!(
                svg,
                "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" \
                 points=\"{}\"/>\n",
                points.trim_end()
            );
        }
        // legend entry
        let ly = MARGIN_TOP + 14.0 * i as f64;
        let _ = write!(
            svg,
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"10\" height=\"10\" fill=\"{color}\"/>\n",
            MARGIN_LEFT + plot_w - 150.0,
            ly
        );
        let _ = write!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" fill=\"#333\">{}</text>\n",
            MARGIN_LEFT + plot_w - 135.0,
            ly + 9.0,
            s.name
        );
    }

    svg.push_str("</svg>\n");
    svg
}
