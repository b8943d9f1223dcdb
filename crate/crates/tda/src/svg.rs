//! Data-only SVG line charts. Each series is min-max scaled into the plot
//! box so differently scaled series remain comparable by shape, which is
//! how the source figures present norm series. Output is deterministic:
//! fixed palette, fixed geometry, coordinates at two decimals.

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 540.0;
const MARGIN: f64 = 48.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn scale(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let (mut x_lo, mut x_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_lo, mut y_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in points {
        x_lo = x_lo.min(x);
        x_hi = x_hi.max(x);
        y_lo = y_lo.min(y);
        y_hi = y_hi.max(y);
    }
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    points
        .iter()
        .map(|&(x, y)| {
            let fx = if x_hi > x_lo {
                (x - x_lo) / (x_hi - x_lo)
            } else {
                0.5
            };
            let fy = if y_hi > y_lo {
                (y - y_lo) / (y_hi - y_lo)
            } else {
                0.5
            };
            (MARGIN + fx * plot_w, HEIGHT - MARGIN - fy * plot_h)
        })
        .collect()
}

/// Renders named series as one overlaid line chart.
pub fn line_chart(title: &str, series: &[(String, Vec<(f64, f64)>)]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
         font-family=\"sans-serif\">\n"
    ));
    out.push_str(&format!(
        "  <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    out.push_str(&format!(
        "  <text x=\"{}\" y=\"28\" font-size=\"18\" text-anchor=\"middle\">{}</text>\n",
        WIDTH / 2.0,
        xml_escape(title)
    ));
    // Axes box.
    out.push_str(&format!(
        "  <rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{}\" height=\"{}\" fill=\"none\" \
         stroke=\"#999\"/>\n",
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    ));
    let mut drew_any = false;
    for (i, (name, points)) in series.iter().enumerate() {
        if points.is_empty() {
            continue;
        }
        drew_any = true;
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = scale(points)
            .iter()
            .map(|(x, y)| format!("{x:.2},{y:.2}"))
            .collect();
        out.push_str(&format!(
            "  <polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            coords.join(" ")
        ));
        out.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-size=\"13\" fill=\"{color}\">{}</text>\n",
            MARGIN + 8.0,
            MARGIN + 18.0 + 16.0 * i as f64,
            xml_escape(name)
        ));
    }
    if !drew_any {
        out.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\">no data</text>\n",
            WIDTH / 2.0,
            HEIGHT / 2.0
        ));
    }
    out.push_str("</svg>\n");
    out
}
