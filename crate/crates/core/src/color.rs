//! Colormaps for wavefunction values. Zero always maps to the white
//! background so nodal configurations disappear from the chart.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::sample::ColorMode;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rgb(pub u8, pub u8, pub u8);

impl Rgb {
    pub fn hex(self) -> String {
        format!("#{:02x}{:02x}{:02x}", self.0, self.1, self.2)
    }

    /// Largest per-channel difference, as a fraction of full scale.
    pub fn distance(self, other: Rgb) -> f64 {
        let d = |a: u8, b: u8| (f64::from(a) - f64::from(b)).abs() / 255.0;
        d(self.0, other.0)
            .max(d(self.1, other.1))
            .max(d(self.2, other.2))
    }
}

pub const BACKGROUND: Rgb = Rgb(255, 255, 255);
/// extreme positive color
pub const WARM: Rgb = Rgb(178, 24, 43);
/// extreme negative color
pub const COOL: Rgb = Rgb(33, 102, 172);

fn channel(from: u8, to: u8, t: f64) -> u8 {
    (f64::from(from) + (f64::from(to) - f64::from(from)) * t).round() as u8
}

fn blend(from: Rgb, to: Rgb, t: f64) -> Rgb {
    Rgb(
        channel(from.0, to.0, t),
        channel(from.1, to.1, t),
        channel(from.2, to.2, t),
    )
}

/// Linear diverging map on `[-1, 1]`: `COOL` at -1, white at 0, `WARM` at 1.
pub fn diverging(t: f64) -> Rgb {
    let t = t.clamp(-1.0, 1.0);
    if t >= 0.0 {
        blend(BACKGROUND, WARM, t)
    } else {
        blend(BACKGROUND, COOL, -t)
    }
}

/// HSV with hue `arg z`, saturation `|z|/max` clamped to 1 and full value,
/// so magnitude zero is white. Hue 0 (positive real) is red.
pub fn phase_hue(z: Complex64, max: f64) -> Rgb {
    let s = if max > 0.0 {
        (z.norm() / max).min(1.0)
    } else {
        0.0
    };
    let hue = (z.arg().rem_euclid(2.0 * PI)) / (2.0 * PI) * 6.0;
    let sector = (hue.floor() as i64).rem_euclid(6);
    let f = hue - hue.floor();
    let (p, q, t) = (1.0 - s, 1.0 - s * f, 1.0 - s * (1.0 - f));
    let (r, g, b) = match sector {
        0 => (1.0, t, p),
        1 => (q, 1.0, p),
        2 => (p, 1.0, t),
        3 => (p, q, 1.0),
        4 => (t, p, 1.0),
        _ => (1.0, p, q),
    };
    let to8 = |x: f64| (x * 255.0).round() as u8;
    Rgb(to8(r), to8(g), to8(b))
}

/// A colormap normalized to one batch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColorScale {
    mode: ColorMode,
    max: f64,
}

impl ColorScale {
    /// Normalizes to `max |Re Ψ|` (diverging) or `max |Ψ|` (phase hue).
    pub fn fit(mode: ColorMode, values: &[Complex64]) -> Self {
        let max = match mode {
            ColorMode::DivergingReal => values.iter().map(|v| v.re.abs()).fold(0.0, f64::max),
            ColorMode::PhaseHue => values.iter().map(|v| v.norm()).fold(0.0, f64::max),
        };
        Self { mode, max }
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn color(&self, value: Complex64) -> Rgb {
        if self.max == 0.0 {
            return BACKGROUND;
        }
        match self.mode {
            ColorMode::DivergingReal => diverging(value.re / self.max),
            ColorMode::PhaseHue => phase_hue(value, self.max),
        }
    }
}
