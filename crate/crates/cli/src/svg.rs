//! Minimal SVG writer in mathematical orientation (y up).

use std::fmt::Write;

use hyperzero::Rect;

pub struct Plot {
    rect: Rect,
    width: f64,
    height: f64,
    body: String,
}

impl Plot {
    /// A plot of `rect` whose larger side is `size` pixels.
    pub fn new(rect: Rect, size: f64) -> Self {
        let (w, h) = (rect.width(), rect.height());
        let (width, height) = if w >= h { (size, size * h / w) } else { (size * w / h, size) };
        Plot {
            rect,
            width,
            height,
            body: String::new(),
        }
    }

    pub fn px(&self, x: f64) -> f64 {
        (x - self.rect.x0) / self.rect.width() * self.width
    }

    pub fn py(&self, y: f64) -> f64 {
        (self.rect.y1 - y) / self.rect.height() * self.height
    }

    pub fn polyline(&mut self, pts: &[[f64; 2]], stroke: &str, width: f64) {
        if pts.len() < 2 {
            return;
        }
        let mut d = String::new();
        for (k, p) in pts.iter().enumerate() {
            let _ = write!(d, "{}{:.2},{:.2}", if k == 0 { "M" } else { " L" }, self.px(p[0]), self.py(p[1]));
        }
        let _ = writeln!(
            self.body,
            r#"<path d="{d}" fill="none" stroke="{stroke}" stroke-width="{width}"/>"#
        );
    }

    pub fn line(&mut self, a: [f64; 2], b: [f64; 2], stroke: &str, width: f64, dash: bool) {
        let _ = writeln!(
            self.body,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{stroke}" stroke-width="{width}"{}/>"#,
            self.px(a[0]),
            self.py(a[1]),
            self.px(b[0]),
            self.py(b[1]),
            if dash { r#" stroke-dasharray="4 3""# } else { "" }
        );
    }

    pub fn dot(&mut self, x: f64, y: f64, r: f64, fill: &str) {
        if !self.rect.contains(x, y) {
            return;
        }
        let _ = writeln!(
            self.body,
            r#"<circle cx="{:.2}" cy="{:.2}" r="{r}" fill="{fill}"/>"#,
            self.px(x),
            self.py(y)
        );
    }

    /// Axis-aligned cell given in plot coordinates.
    pub fn cell(&mut self, x0: f64, x1: f64, y0: f64, y1: f64, fill: &str) {
        let (a, b) = (self.px(x0), self.px(x1));
        let (c, d) = (self.py(y1), self.py(y0));
        let _ = writeln!(
            self.body,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{fill}" shape-rendering="crispEdges"/>"#,
            a,
            c,
            b - a,
            d - c
        );
    }

    pub fn label(&mut self, x_px: f64, y_px: f64, text: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{x_px:.1}" y="{y_px:.1}" font-family="sans-serif" font-size="12">{}</text>"#,
            escape(text)
        );
    }

    /// Real and imaginary axes where they cross the plot.
    pub fn axes(&mut self) {
        let r = self.rect;
        if r.y0 <= 0.0 && r.y1 >= 0.0 {
            self.line([r.x0, 0.0], [r.x1, 0.0], "#888888", 1.0, false);
        }
        if r.x0 <= 0.0 && r.x1 >= 0.0 {
            self.line([0.0, r.y0], [0.0, r.y1], "#bbbbbb", 0.5, false);
        }
    }

    pub fn finish(self, title: &str) -> String {
        format!(
            concat!(
                r#"<?xml version="1.0" encoding="UTF-8"?>"#,
                "\n",
                r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.2} {h:.2}">"#,
                "\n<title>{t}</title>\n",
                r#"<rect width="100%" height="100%" fill="white"/>"#,
                "\n{body}</svg>\n"
            ),
            w = self.width,
            h = self.height,
            t = escape(title),
            body = self.body
        )
    }
}

pub fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
