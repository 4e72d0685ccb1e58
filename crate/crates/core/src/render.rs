//! Deterministic SVG figures: kernel lines dashed, broken lines solid with
//! subscripted vertex labels, sails shaded.

use crate::forms::{factor, BinaryQuadraticForm};
use crate::geometry::{BrokenLine, Point};
use crate::io::{IoError, SceneJson};
use crate::sail::Sail;
use std::fmt::Write;

#[derive(Debug, thiserror::Error)]
pub enum RenderError {
    #[error("the scene has nothing to draw")]
    EmptyScene,
    #[error("degenerate viewport")]
    BadViewport,
    #[error(transparent)]
    Io(#[from] IoError),
}

#[derive(Debug, Clone, Default)]
pub struct Scene {
    pub forms: Vec<BinaryQuadraticForm>,
    /// Lines with their vertex label stem; an empty stem draws no labels.
    pub lines: Vec<(BrokenLine, String)>,
    pub sails: Vec<Sail>,
    pub points: Vec<(Point, String)>,
    /// `[xmin, xmax, ymin, ymax]`.
    pub viewport: Option<[f64; 4]>,
}

impl Scene {
    pub fn from_json(s: &SceneJson) -> Result<Self, RenderError> {
        let pt = |p: &crate::io::JsonPoint| Point::checked(p[0].0.clone(), p[1].0.clone()).map_err(IoError::from);
        let mut scene = Scene {
            forms: s.forms.iter().map(|f| f.to_form()).collect::<Result<_, _>>()?,
            sails: s.sails.iter().map(|x| x.to_sail()).collect::<Result<_, _>>()?,
            ..Scene::default()
        };
        for l in &s.lines {
            let v = l.vertices.iter().map(pt).collect::<Result<Vec<_>, _>>()?;
            let line = BrokenLine::new(v).map_err(IoError::from)?;
            scene.lines.push((line, l.label.clone().unwrap_or_else(|| "A".into())));
        }
        for p in &s.points {
            scene.points.push((pt(&p.at)?, p.label.clone()));
        }
        if let Some(v) = &s.viewport {
            scene.viewport = Some([v.xmin.0.to_f64(), v.xmax.0.to_f64(), v.ymin.0.to_f64(), v.ymax.0.to_f64()]);
        }
        Ok(scene)
    }

    fn is_empty(&self) -> bool {
        self.forms.is_empty() && self.lines.is_empty() && self.sails.is_empty() && self.points.is_empty()
    }

    fn extent(&self) -> [f64; 4] {
        let mut pts: Vec<(f64, f64)> = vec![(0.0, 0.0)];
        let mut push = |p: &Point| pts.push((p.x.to_f64(), p.y.to_f64()));
        self.lines.iter().flat_map(|(l, _)| l.vertices()).for_each(&mut push);
        self.sails.iter().flat_map(|s| &s.vertices).for_each(&mut push);
        self.points.iter().map(|(p, _)| p).for_each(&mut push);
        let fold = |f: fn(f64, f64) -> f64, init: f64, sel: fn(&(f64, f64)) -> f64| pts.iter().map(sel).fold(init, f);
        let (mut x0, mut x1) = (fold(f64::min, 0.0, |p| p.0), fold(f64::max, 0.0, |p| p.0));
        let (mut y0, mut y1) = (fold(f64::min, 0.0, |p| p.1), fold(f64::max, 0.0, |p| p.1));
        // One unit of margin, and a square-ish frame around bare kernels.
        let span = (x1 - x0).max(y1 - y0).max(2.0);
        let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
        x0 = x0.min(cx - span / 2.0) - 1.0;
        x1 = x1.max(cx + span / 2.0) + 1.0;
        y0 = y0.min(cy - span / 2.0) - 1.0;
        y1 = y1.max(cy + span / 2.0) + 1.0;
        [x0, x1, y0, y1]
    }
}

const WIDTH: f64 = 600.0;
const PAD: f64 = 20.0;

struct Frame {
    x0: f64,
    y1: f64,
    scale: f64,
    width: f64,
    height: f64,
}

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        "0.000".into()
    } else {
        s
    }
}

impl Frame {
    fn new([x0, x1, y0, y1]: [f64; 4]) -> Result<Self, RenderError> {
        if !(x1 > x0 && y1 > y0) || ![x0, x1, y0, y1].iter().all(|v| v.is_finite()) {
            return Err(RenderError::BadViewport);
        }
        let scale = (WIDTH - 2.0 * PAD) / (x1 - x0);
        Ok(Frame { x0, y1, scale, width: WIDTH, height: (y1 - y0) * scale + 2.0 * PAD })
    }

    fn map(&self, x: f64, y: f64) -> (String, String) {
        (num((x - self.x0) * self.scale + PAD), num((self.y1 - y) * self.scale + PAD))
    }

    fn point(&self, p: &Point) -> (String, String) {
        self.map(p.x.to_f64(), p.y.to_f64())
    }

    fn path(&self, pts: &[(f64, f64)]) -> String {
        pts.iter().map(|&(x, y)| {
            let (a, b) = self.map(x, y);
            format!("{a},{b}")
        }).collect::<Vec<_>>().join(" ")
    }

    /// Length along a unit direction that leaves the frame from anywhere inside.
    fn reach(&self) -> f64 {
        (self.width + self.height) / self.scale * 2.0
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn label(out: &mut String, f: &Frame, p: &Point, stem: &str, sub: Option<usize>) {
    let (x, y) = f.point(p);
    let _ = write!(out, "<circle class=\"vertex\" cx=\"{x}\" cy=\"{y}\" r=\"3\"/>");
    let _ = write!(out, "<text class=\"vertex-label\" x=\"{x}\" y=\"{y}\" dx=\"5\" dy=\"-5\">{}", escape(stem));
    if let Some(k) = sub {
        let _ = write!(out, "<tspan baseline-shift=\"sub\" font-size=\"70%\">{k}</tspan>");
    }
    out.push_str("</text>\n");
}

pub fn render(scene: &Scene) -> Result<String, RenderError> {
    if scene.is_empty() {
        return Err(RenderError::EmptyScene);
    }
    let f = Frame::new(scene.viewport.unwrap_or_else(|| scene.extent()))?;
    let (w, h) = (num(f.width), num(f.height));
    let mut out = String::new();
    let _ = writeln!(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    out.push_str(
        "<style>.kernel{stroke:#555;stroke-width:1.2;stroke-dasharray:6 4;fill:none}\
.broken-line{stroke:#1f4e9c;stroke-width:2;fill:none}\
.sail{fill:#e8b04a;fill-opacity:0.3;stroke:none}.sail-edge{stroke:#a0641a;stroke-width:1.5;fill:none}\
.axis{stroke:#bbb;stroke-width:0.8}.vertex{fill:#111}.vertex-label{font-family:serif;font-size:14px}</style>\n",
    );
    let _ = writeln!(out, "<defs><clipPath id=\"frame\"><rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\"/></clipPath></defs>");
    out.push_str("<g clip-path=\"url(#frame)\">\n");
    let r = f.reach();
    let (ox, oy) = f.map(0.0, 0.0);
    let _ = writeln!(out, "<line class=\"axis\" x1=\"0.000\" y1=\"{oy}\" x2=\"{w}\" y2=\"{oy}\"/>");
    let _ = writeln!(out, "<line class=\"axis\" x1=\"{ox}\" y1=\"0.000\" x2=\"{ox}\" y2=\"{h}\"/>");

    for s in &scene.sails {
        let v: Vec<(f64, f64)> = s.vertices.iter().map(|p| (p.x.to_f64(), p.y.to_f64())).collect();
        let far = |&(x, y): &(f64, f64)| {
            let n = x.hypot(y);
            (x / n * r, y / n * r)
        };
        if let (Some(first), Some(last)) = (v.first(), v.last()) {
            let mut poly = vec![far(first)];
            poly.extend(v.iter().copied());
            poly.push(far(last));
            let _ = writeln!(out, "<polygon class=\"sail\" points=\"{}\"/>", f.path(&poly));
            let _ = writeln!(out, "<polyline class=\"sail-edge\" points=\"{}\"/>", f.path(&v));
        }
    }
    for form in &scene.forms {
        let ff = factor(form);
        for lf in [&ff.first, &ff.second] {
            let d = lf.kernel_direction();
            let (x, y) = (d.x.to_f64(), d.y.to_f64());
            let n = x.hypot(y);
            let (a, b) = f.map(-x / n * r, -y / n * r);
            let (c, e) = f.map(x / n * r, y / n * r);
            let _ = writeln!(out, "<line class=\"kernel\" x1=\"{a}\" y1=\"{b}\" x2=\"{c}\" y2=\"{e}\"/>");
        }
    }
    for (line, _) in &scene.lines {
        let v: Vec<(f64, f64)> = line.vertices().iter().map(|p| (p.x.to_f64(), p.y.to_f64())).collect();
        let _ = writeln!(out, "<polyline class=\"broken-line\" points=\"{}\"/>", f.path(&v));
    }
    out.push_str("</g>\n");
    for (line, stem) in scene.lines.iter().filter(|(_, stem)| !stem.is_empty()) {
        for (k, p) in line.vertices().iter().enumerate() {
            label(&mut out, &f, p, stem, Some(k));
        }
    }
    for (p, name) in &scene.points {
        label(&mut out, &f, p, name, None);
    }
    out.push_str("</svg>\n");
    Ok(out)
}
