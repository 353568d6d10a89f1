//! Minimal standalone SVG 1.1 line plots.

use crate::output::{format_sig, OutputSpec};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_L: f64 = 80.0;
const MARGIN_R: f64 = 150.0;
const MARGIN_T: f64 = 50.0;
const MARGIN_B: f64 = 60.0;
const COLORS: [&str; 4] = ["#1f5fa8", "#c0392b", "#2e8b57", "#8e44ad"];

struct Series {
    name: String,
    points: Vec<(f64, f64)>,
}

pub struct Plot {
    title: String,
    x_label: String,
    y_label: String,
    series: Vec<Series>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    (0..=4).map(|i| lo + (hi - lo) * i as f64 / 4.0).collect()
}

impl Plot {
    pub fn new(title: String, x_label: &str, y_label: &str) -> Self {
        Self {
            title,
            x_label: x_label.into(),
            y_label: y_label.into(),
            series: Vec::new(),
        }
    }

    pub fn line(&mut self, name: &str, points: Vec<(f64, f64)>) {
        self.series.push(Series {
            name: name.into(),
            points,
        });
    }

    fn bounds(&self) -> (f64, f64, f64, f64) {
        let finite = self
            .series
            .iter()
            .flat_map(|s| s.points.iter())
            .filter(|(x, y)| x.is_finite() && y.is_finite());
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, 0.0f64, f64::MIN);
        for &(x, y) in finite {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if x0 > x1 {
            return (0.0, 1.0, 0.0, 1.0);
        }
        if x1 == x0 {
            x1 = x0 + 1.0;
        }
        if y1 <= y0 {
            y1 = y0 + 1.0;
        }
        (x0, x1, y0, y1 + 0.05 * (y1 - y0))
    }

    /// The document embeds `data` (normally the CSV twin) in `<metadata>`.
    pub fn render(&self, out: &OutputSpec, data: &str) -> String {
        let (x0, x1, y0, y1) = self.bounds();
        let pw = WIDTH - MARGIN_L - MARGIN_R;
        let ph = HEIGHT - MARGIN_T - MARGIN_B;
        let sx = |x: f64| MARGIN_L + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| MARGIN_T + ph - (y - y0) / (y1 - y0) * ph;
        let n = |v: f64| format_sig(v, 6);

        let mut s = String::new();
        s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n");
        s.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
        ));
        s.push_str(&format!("<title>{}</title>\n", escape(&self.title)));
        s.push_str(&format!(
            "<metadata><![CDATA[\n{}]]></metadata>\n",
            data.replace("]]>", "]]]]><![CDATA[>")
        ));
        s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
        s.push_str(&format!(
            "<text x=\"{}\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">{}</text>\n",
            n(MARGIN_L + pw / 2.0),
            escape(&self.title)
        ));

        // Axes, ticks and labels.
        s.push_str(&format!(
            "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\"><path d=\"M{} {} V{} H{}\"/></g>\n",
            n(MARGIN_L),
            n(MARGIN_T),
            n(MARGIN_T + ph),
            n(MARGIN_L + pw)
        ));
        s.push_str("<g font-family=\"sans-serif\" font-size=\"11\">\n");
        for x in ticks(x0, x1) {
            s.push_str(&format!(
                "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/><text x=\"{0}\" y=\"{3}\" text-anchor=\"middle\">{4}</text>\n",
                n(sx(x)),
                n(MARGIN_T + ph),
                n(MARGIN_T + ph + 5.0),
                n(MARGIN_T + ph + 18.0),
                format_sig(x, 4)
            ));
        }
        for y in ticks(y0, y1) {
            s.push_str(&format!(
                "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/><text x=\"{3}\" y=\"{4}\" text-anchor=\"end\">{5}</text>\n",
                n(MARGIN_L - 5.0),
                n(sy(y)),
                n(MARGIN_L),
                n(MARGIN_L - 8.0),
                n(sy(y) + 4.0),
                format_sig(y, 4)
            ));
        }
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"13\">{}</text>\n",
            n(MARGIN_L + pw / 2.0),
            n(HEIGHT - 15.0),
            escape(&self.x_label)
        ));
        s.push_str(&format!(
            "<text x=\"20\" y=\"{0}\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 20 {0})\">{1}</text>\n",
            n(MARGIN_T + ph / 2.0),
            escape(&self.y_label)
        ));
        s.push_str("</g>\n");

        for (i, series) in self.series.iter().enumerate() {
            let color = COLORS[i % COLORS.len()];
            let pts: Vec<String> = series
                .points
                .iter()
                .filter(|(x, y)| x.is_finite() && y.is_finite())
                .map(|&(x, y)| format!("{},{}", out.num(sx(x)), out.num(sy(y.min(y1)))))
                .collect();
            s.push_str(&format!(
                "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                pts.join(" ")
            ));
            let ly = MARGIN_T + 10.0 + 18.0 * i as f64;
            s.push_str(&format!(
                "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{color}\" stroke-width=\"2\"/><text x=\"{3}\" y=\"{4}\" font-family=\"sans-serif\" font-size=\"11\">{5}</text>\n",
                n(WIDTH - MARGIN_R + 10.0),
                n(ly),
                n(WIDTH - MARGIN_R + 30.0),
                n(WIDTH - MARGIN_R + 35.0),
                n(ly + 4.0),
                escape(&series.name)
            ));
        }
        s.push_str("</svg>\n");
        s
    }
}
