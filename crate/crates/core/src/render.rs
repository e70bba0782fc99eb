//! SVG output: parallel-axes polylines and 2D scatter dots.
//!
//! Samples are emitted in ascending `|Ψ|` (ties by sample index), so the
//! strongest configurations end up on top. Each sample element carries a
//! `data-abs` attribute with its `|Ψ|`.

use std::fmt::Write as _;

use crate::color::{ColorScale, BACKGROUND};
use crate::error::{Error, Result};
use crate::sample::{PlotMode, SampleBatch, RNG_ID};

const AXIS_COLOR: &str = "#c8c8c8";
const TEXT_COLOR: &str = "#404040";
const MARGIN_LEFT: f64 = 56.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 36.0;
const MARGIN_BOTTOM: f64 = 40.0;

/// Sample indices sorted by ascending `|Ψ|`, ties broken by index.
pub fn draw_order(batch: &SampleBatch) -> Vec<usize> {
    let mags: Vec<f64> = batch.values().iter().map(|v| v.norm()).collect();
    let mut order: Vec<usize> = (0..mags.len()).collect();
    order.sort_by(|&a, &b| mags[a].total_cmp(&mags[b]).then(a.cmp(&b)));
    order
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

struct Frame {
    width: f64,
    height: f64,
    left: f64,
    top: f64,
    plot_w: f64,
    plot_h: f64,
    window: f64,
}

impl Frame {
    fn new(batch: &SampleBatch) -> Self {
        let s = batch.spec();
        let (width, height) = (f64::from(s.width), f64::from(s.height));
        Self {
            width,
            height,
            left: MARGIN_LEFT,
            top: MARGIN_TOP,
            plot_w: width - MARGIN_LEFT - MARGIN_RIGHT,
            plot_h: height - MARGIN_TOP - MARGIN_BOTTOM,
            window: s.window,
        }
    }

    fn y(&self, q: f64) -> f64 {
        self.top + (self.window - q) / (2.0 * self.window) * self.plot_h
    }

    fn x_of_value(&self, q: f64) -> f64 {
        self.left + (q + self.window) / (2.0 * self.window) * self.plot_w
    }

    fn bottom(&self) -> f64 {
        self.top + self.plot_h
    }
}

fn check(batch: &SampleBatch) -> Result<()> {
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    if let Some(i) = batch
        .values()
        .iter()
        .position(|v| !(v.re.is_finite() && v.im.is_finite()))
    {
        return Err(Error::NonFinite(i));
    }
    Ok(())
}

fn header(out: &mut String, batch: &SampleBatch, frame: &Frame) {
    let s = batch.spec();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = frame.width,
        h = frame.height
    );
    let _ = writeln!(
        out,
        r#"<metadata><chainviz:run xmlns:chainviz="urn:chainviz:run:v1" tool="chainviz {ver}" rng="{RNG_ID}" seed="{seed}" samples="{m}" window="{l:?}" n_sites="{n}" mode="{mode}" color="{color}" state="{state}"/></metadata>"#,
        ver = env!("CARGO_PKG_VERSION"),
        seed = s.seed,
        m = batch.len(),
        l = s.window,
        n = batch.n_dims(),
        mode = s.mode,
        color = s.color_mode,
        state = escape(batch.label()),
    );
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{}" height="{}" fill="{}"/>"#,
        frame.width,
        frame.height,
        BACKGROUND.hex()
    );
}

fn footer(out: &mut String, batch: &SampleBatch, frame: &Frame) {
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="14" fill="{TEXT_COLOR}">{}</text>"#,
        frame.left,
        frame.top - 14.0,
        escape(batch.label())
    );
    out.push_str("</svg>\n");
}

fn value_ticks(out: &mut String, frame: &Frame, axis_x: f64) {
    for q in [-frame.window, 0.0, frame.window] {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="11" fill="{TEXT_COLOR}">{}</text>"#,
            axis_x - 8.0,
            frame.y(q) + 4.0,
            format_tick(q)
        );
    }
}

fn format_tick(q: f64) -> String {
    let s = format!("{q:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

/// One polyline per sample across `N` equally spaced vertical axes.
pub fn render_parallel_axes(batch: &SampleBatch) -> Result<String> {
    check(batch)?;
    let frame = Frame::new(batch);
    let n = batch.n_dims();
    let axis_x: Vec<f64> = (0..n)
        .map(|i| {
            if n == 1 {
                frame.left + frame.plot_w / 2.0
            } else {
                frame.left + i as f64 / (n - 1) as f64 * frame.plot_w
            }
        })
        .collect();

    let mut out = String::with_capacity(batch.len() * n * 16 + 4096);
    header(&mut out, batch, &frame);

    out.push_str("<g id=\"axes\">\n");
    for (i, &x) in axis_x.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="{AXIS_COLOR}" stroke-width="1"/>"#,
            frame.top,
            frame.bottom()
        );
        let _ = writeln!(
            out,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="11" fill="{TEXT_COLOR}">{}</text>"#,
            frame.bottom() + 16.0,
            i + 1
        );
    }
    value_ticks(&mut out, &frame, axis_x[0]);
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="12" fill="{TEXT_COLOR}">n</text>"#,
        frame.left + frame.plot_w / 2.0,
        frame.height - 6.0
    );
    let _ = writeln!(
        out,
        r#"<text x="14" y="{:.2}" font-family="sans-serif" font-size="12" fill="{TEXT_COLOR}">q</text>"#,
        frame.top + frame.plot_h / 2.0
    );
    out.push_str("</g>\n");

    let scale = ColorScale::fit(batch.spec().color_mode, batch.values());
    out.push_str(
        "<g id=\"samples\" fill=\"none\" stroke-width=\"0.6\" stroke-linejoin=\"round\">\n",
    );
    for i in draw_order(batch) {
        let v = batch.values()[i];
        let _ = write!(
            out,
            r#"<polyline data-abs="{:.6e}" stroke="{}" points=""#,
            v.norm(),
            scale.color(v).hex()
        );
        for (j, q) in batch.points().row(i).iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{:.2},{:.2}", axis_x[j], frame.y(*q));
        }
        out.push_str("\"/>\n");
    }
    out.push_str("</g>\n");
    footer(&mut out, batch, &frame);
    Ok(out)
}

/// One dot per sample at `(q_1, q_2)`.
pub fn render_scatter2d(batch: &SampleBatch) -> Result<String> {
    check(batch)?;
    if batch.n_dims() != 2 {
        return Err(Error::InvalidSpec(format!(
            "scatter plot needs 2 dimensions, got {}",
            batch.n_dims()
        )));
    }
    let mut frame = Frame::new(batch);
    // square plotting area
    let side = frame.plot_w.min(frame.plot_h);
    frame.plot_w = side;
    frame.plot_h = side;

    let mut out = String::with_capacity(batch.len() * 64 + 4096);
    header(&mut out, batch, &frame);
    out.push_str("<g id=\"axes\">\n");
    let _ = writeln!(
        out,
        r#"<rect x="{:.2}" y="{:.2}" width="{side:.2}" height="{side:.2}" fill="none" stroke="{AXIS_COLOR}" stroke-width="1"/>"#,
        frame.left, frame.top
    );
    let (x0, y0) = (frame.x_of_value(0.0), frame.y(0.0));
    let _ = writeln!(
        out,
        r#"<line x1="{x0:.2}" y1="{:.2}" x2="{x0:.2}" y2="{:.2}" stroke="{AXIS_COLOR}" stroke-width="0.5"/>"#,
        frame.top,
        frame.bottom()
    );
    let _ = writeln!(
        out,
        r#"<line x1="{:.2}" y1="{y0:.2}" x2="{:.2}" y2="{y0:.2}" stroke="{AXIS_COLOR}" stroke-width="0.5"/>"#,
        frame.left,
        frame.left + side
    );
    value_ticks(&mut out, &frame, frame.left);
    for q in [-frame.window, 0.0, frame.window] {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="11" fill="{TEXT_COLOR}">{}</text>"#,
            frame.x_of_value(q),
            frame.bottom() + 16.0,
            format_tick(q)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="12" fill="{TEXT_COLOR}">q1</text>"#,
        frame.left + side / 2.0,
        frame.bottom() + 32.0
    );
    let _ = writeln!(
        out,
        r#"<text x="10" y="{:.2}" font-family="sans-serif" font-size="12" fill="{TEXT_COLOR}">q2</text>"#,
        frame.top + side / 2.0
    );
    out.push_str("</g>\n");

    let scale = ColorScale::fit(batch.spec().color_mode, batch.values());
    let radius = (side / 300.0).max(1.0);
    out.push_str("<g id=\"samples\" stroke=\"none\">\n");
    for i in draw_order(batch) {
        let v = batch.values()[i];
        let p = batch.points().row(i);
        let _ = writeln!(
            out,
            r#"<circle data-abs="{:.6e}" cx="{:.2}" cy="{:.2}" r="{radius:.2}" fill="{}"/>"#,
            v.norm(),
            frame.x_of_value(p[0]),
            frame.y(p[1]),
            scale.color(v).hex()
        );
    }
    out.push_str("</g>\n");
    footer(&mut out, batch, &frame);
    Ok(out)
}

/// Renders according to `batch.spec().mode`.
pub fn render(batch: &SampleBatch) -> Result<String> {
    match batch.spec().mode {
        PlotMode::ParallelAxes => render_parallel_axes(batch),
        PlotMode::Scatter2d => render_scatter2d(batch),
    }
}
