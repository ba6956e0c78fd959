//! Minimal SVG line plots. CSV remains the authoritative output; these are
//! quick-look renderings with fixed geometry and no external dependencies.

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 360.0;
const MARGIN: f64 = 48.0;

/// Render a precision-recall curve (recall on x, precision on y, both in
/// [0, 1]) as a standalone SVG document.
pub fn pr_curve_svg(points: &[(f64, f64)], title: &str) -> String {
    let x = |recall: f64| MARGIN + recall * (WIDTH - 2.0 * MARGIN);
    let y = |precision: f64| HEIGHT - MARGIN - precision * (HEIGHT - 2.0 * MARGIN);

    let mut poly = String::new();
    for &(recall, precision) in points {
        poly.push_str(&format!("{:.2},{:.2} ", x(recall), y(precision)));
    }

    let mut ticks = String::new();
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        ticks.push_str(&format!(
            "<line x1='{0:.1}' y1='{1:.1}' x2='{0:.1}' y2='{2:.1}' stroke='#ccc'/>\
             <text x='{0:.1}' y='{3:.1}' font-size='11' text-anchor='middle'>{4:.2}</text>",
            x(t),
            y(0.0),
            y(1.0),
            HEIGHT - MARGIN + 16.0,
            t
        ));
        ticks.push_str(&format!(
            "<line x1='{0:.1}' y1='{1:.1}' x2='{2:.1}' y2='{1:.1}' stroke='#ccc'/>\
             <text x='{3:.1}' y='{4:.1}' font-size='11' text-anchor='end'>{5:.2}</text>",
            x(0.0),
            y(t),
            x(1.0),
            MARGIN - 6.0,
            y(t) + 4.0,
            t
        ));
    }

    format!(
        "<svg xmlns='http://www.w3.org/2000/svg' width='{WIDTH}' height='{HEIGHT}' \
         viewBox='0 0 {WIDTH} {HEIGHT}'>\
         <rect width='{WIDTH}' height='{HEIGHT}' fill='white'/>\
         {ticks}\
         <text x='{tx:.1}' y='20' font-size='13' text-anchor='middle'>{title}</text>\
         <text x='{tx:.1}' y='{bx:.1}' font-size='12' text-anchor='middle'>recall</text>\
         <text x='14' y='{my:.1}' font-size='12' text-anchor='middle' \
         transform='rotate(-90 14 {my:.1})'>precision</text>\
         <polyline points='{poly}' fill='none' stroke='#1f77b4' stroke-width='1.5'/>\
         </svg>\n",
        tx = WIDTH / 2.0,
        bx = HEIGHT - 10.0,
        my = HEIGHT / 2.0,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svg_is_well_formed_enough() {
        let svg = pr_curve_svg(&[(0.0, 1.0), (0.5, 0.8), (1.0, 0.6)], "class 0");
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("polyline"));
        assert!(svg.contains("class 0"));
    }
}
