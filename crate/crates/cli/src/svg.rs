//! Minimal self-contained SVG emitter: polylines, scatter circles, axes
//! with tick labels. Byte-stable for identical inputs.

use std::fmt::Write as _;

const W: f64 = 640.0;
const H: f64 = 480.0;
const MARGIN: f64 = 60.0;

pub struct Series<'a> {
    pub name: &'a str,
    pub points: Vec<(f64, f64)>,
    pub color: &'a str,
    pub line: bool,
}

pub struct Plot<'a> {
    pub title: &'a str,
    pub x_label: &'a str,
    pub y_label: &'a str,
    pub series: Vec<Series<'a>>,
    /// Draw the y = x reference diagonal.
    pub diagonal: bool,
}

impl Plot<'_> {
    pub fn render(&self) -> String {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for s in &self.series {
            for &(x, y) in &s.points {
                x0 = x0.min(x);
                x1 = x1.max(x);
                y0 = y0.min(y);
                y1 = y1.max(y);
            }
        }
        if !(x0.is_finite() && x1.is_finite() && y0.is_finite() && y1.is_finite()) {
            x0 = 0.0;
            x1 = 1.0;
            y0 = 0.0;
            y1 = 1.0;
        }
        if x1 - x0 < 1e-12 {
            x1 = x0 + 1.0;
        }
        if y1 - y0 < 1e-12 {
            y1 = y0 + 1.0;
        }
        let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (W - 2.0 * MARGIN);
        let py = |y: f64| H - MARGIN - (y - y0) / (y1 - y0) * (H - 2.0 * MARGIN);

        let mut svg = String::new();
        let _ = write!(
            svg,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
        );
        let _ = write!(
            svg,
            "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n<text x=\"{:.1}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">{}</text>\n",
            W / 2.0,
            xml_escape(self.title)
        );
        // axes
        let _ = write!(
            svg,
            "<line x1=\"{m}\" y1=\"{b:.1}\" x2=\"{r:.1}\" y2=\"{b:.1}\" stroke=\"black\"/>\n<line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b:.1}\" stroke=\"black\"/>\n",
            m = MARGIN,
            b = H - MARGIN,
            r = W - MARGIN,
            t = MARGIN,
        );
        for i in 0..=4 {
            let fx = x0 + (x1 - x0) * i as f64 / 4.0;
            let fy = y0 + (y1 - y0) * i as f64 / 4.0;
            let _ = write!(
                svg,
                "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">{:.3}</text>\n",
                px(fx),
                H - MARGIN + 18.0,
                fx
            );
            let _ = write!(
                svg,
                "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">{:.3}</text>\n",
                MARGIN - 6.0,
                py(fy) + 4.0,
                fy
            );
        }
        let _ = write!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">{}</text>\n",
            W / 2.0,
            H - 14.0,
            xml_escape(self.x_label)
        );
        let _ = write!(
            svg,
            "<text x=\"16\" y=\"{:.1}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16 {mid:.1})\">{}</text>\n",
            H / 2.0,
            xml_escape(self.y_label),
            mid = H / 2.0,
        );
        if self.diagonal {
            let lo = x0.max(y0);
            let hi = x1.min(y1);
            if hi > lo {
                let _ = write!(
                    svg,
                    "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"red\" stroke-dasharray=\"5,4\"/>\n",
                    px(lo),
                    py(lo),
                    px(hi),
                    py(hi)
                );
            }
        }
        for (si, s) in self.series.iter().enumerate() {
            if s.line && s.points.len() > 1 {
                let mut pts = String::new();
                for &(x, y) in &s.points {
                    let _ = write!(pts, "{:.2},{:.2} ", px(x), py(y));
                }
                let _ = write!(
                    svg,
                    "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n",
                    pts.trim_end(),
                    s.color
                );
            } else {
                for &(x, y) in &s.points {
                    let _ = write!(
                        svg,
                        "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{}\" fill-opacity=\"0.7\"/>\n",
                        px(x),
                        py(y),
                        s.color
                    );
                }
            }
            // legend
            let ly = MARGIN + 16.0 * si as f64;
            let _ = write!(
                svg,
                "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"10\" height=\"10\" fill=\"{}\"/>\n<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
                W - MARGIN - 150.0,
                ly,
                s.color,
                W - MARGIN - 135.0,
                ly + 9.0,
                xml_escape(s.name)
            );
        }
        svg.push_str("</svg>\n");
        svg
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_is_stable_and_well_formed() {
        let plot = Plot {
            title: "test",
            x_label: "x",
            y_label: "y",
            series: vec![Series {
                name: "data",
                points: vec![(0.0, 0.0), (0.5, 0.3), (1.0, 0.9)],
                color: "blue",
                line: true,
            }],
            diagonal: true,
        };
        let a = plot.render();
        let b = plot.render();
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.ends_with("</svg>\n"));
        assert!(a.contains("polyline"));
    }
}
