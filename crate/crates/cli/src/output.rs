//! CSV, JSON and SVG writers.

use std::fmt::Write as _;
use std::io::{Read, Write};

use incrrelay_core::characteristics::{Characteristic, Sample};
use incrrelay_core::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Serialize, Deserialize)]
struct CloudRow {
    m_t: String,
    m_f: String,
    re: String,
    im: String,
}

/// Seventeen significant digits: enough to round-trip any f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_cloud_csv<W: Write>(samples: &[Sample], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for s in samples {
        w.serialize(CloudRow {
            m_t: fmt_f64(s.m_t),
            m_f: fmt_f64(s.m_f),
            re: fmt_f64(s.z.re),
            im: fmt_f64(s.z.im),
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_cloud_csv<R: Read>(input: R) -> Result<Vec<Sample>, String> {
    let mut r = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for (line, row) in r.deserialize::<CloudRow>().enumerate() {
        let row = row.map_err(|e| e.to_string())?;
        let num = |field: &str, s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| format!("row {}: {field}: {e}", line + 1))
        };
        out.push(Sample {
            m_t: num("m_t", &row.m_t)?,
            m_f: num("m_f", &row.m_f)?,
            z: Complex64::new(num("re", &row.re)?, num("im", &row.im)?),
        });
    }
    Ok(out)
}

/// Everything emitted for one fault type.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CharacteristicReport {
    pub line_impedance: Complex64,
    pub hull: Characteristic,
    pub parallelogram: Characteristic,
}

pub fn to_json(report: &CharacteristicReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

pub fn from_json(text: &str) -> serde_json::Result<CharacteristicReport> {
    serde_json::from_str(text)
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const PAD: f64 = 0.1;

struct View {
    min_re: f64,
    max_im: f64,
    scale: f64,
    off_x: f64,
    off_y: f64,
}

impl View {
    fn fit(points: impl Iterator<Item = Complex64>) -> View {
        let (mut lo_re, mut hi_re, mut lo_im, mut hi_im) = (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        );
        for p in points {
            lo_re = lo_re.min(p.re);
            hi_re = hi_re.max(p.re);
            lo_im = lo_im.min(p.im);
            hi_im = hi_im.max(p.im);
        }
        let span_re = (hi_re - lo_re).max(1e-12);
        let span_im = (hi_im - lo_im).max(1e-12);
        let inner_w = WIDTH * (1.0 - 2.0 * PAD);
        let inner_h = HEIGHT * (1.0 - 2.0 * PAD);
        // equal scale on both axes so angles read true
        let scale = (inner_w / span_re).min(inner_h / span_im);
        View {
            min_re: lo_re,
            max_im: hi_im,
            scale,
            off_x: WIDTH * PAD + (inner_w - span_re * scale) / 2.0,
            off_y: HEIGHT * PAD + (inner_h - span_im * scale) / 2.0,
        }
    }

    fn map(&self, p: Complex64) -> (f64, f64) {
        (
            self.off_x + (p.re - self.min_re) * self.scale,
            self.off_y + (self.max_im - p.im) * self.scale,
        )
    }

    fn path(&self, pts: &[Complex64], closed: bool) -> String {
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let (x, y) = self.map(*p);
            let _ = write!(d, "{}{x:.3},{y:.3} ", if i == 0 { "M" } else { "L" });
        }
        if closed {
            d.push('Z');
        }
        d.trim_end().to_string()
    }
}

/// Impedance-plane plot: R right, X up. The output depends only on the inputs.
pub fn render_svg(report: &CharacteristicReport) -> String {
    let zero = Complex64::new(0.0, 0.0);
    let z = report.line_impedance;
    let view = View::fit(
        [zero, z]
            .into_iter()
            .chain(report.hull.samples.iter().map(|s| s.z))
            .chain(report.hull.vertices.iter().copied())
            .chain(report.parallelogram.vertices.iter().copied()),
    );
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="8" y="18" font-family="sans-serif" font-size="13">{} loop {}</text>"#,
        report.hull.eta, report.hull.lp
    );
    let (ox, oy) = view.map(zero);
    let _ = writeln!(
        s,
        r##"<g stroke="#bbb" stroke-width="0.5"><line x1="0" y1="{oy:.3}" x2="{WIDTH}" y2="{oy:.3}"/><line x1="{ox:.3}" y1="0" x2="{ox:.3}" y2="{HEIGHT}"/></g>"##
    );
    let _ = writeln!(
        s,
        r##"<path d="{}" fill="none" stroke="#444" stroke-width="1.5"/>"##,
        view.path(&[zero, z], false)
    );
    if !report.parallelogram.vertices.is_empty() {
        let _ = writeln!(
            s,
            r##"<path d="{}" fill="none" stroke="#1f77b4" stroke-width="1" stroke-dasharray="6 4"/>"##,
            view.path(&report.parallelogram.vertices, true)
        );
    }
    if !report.hull.vertices.is_empty() {
        let _ = writeln!(
            s,
            r##"<path d="{}" fill="#d62728" fill-opacity="0.08" stroke="#d62728" stroke-width="1.2"/>"##,
            view.path(&report.hull.vertices, true)
        );
    }
    let _ = writeln!(s, r##"<g fill="#222">"##);
    for smp in &report.hull.samples {
        let (x, y) = view.map(smp.z);
        let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="2.5"/>"#);
    }
    s.push_str("</g>\n</svg>\n");
    s
}
