//! Uniform configuration sampling and the CSV sample table.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use ndarray::Array2;
use num_complex::Complex64;
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::chain::ModeBasis;
use crate::error::{Error, Result};
use crate::par::{map_indexed, Execution};
use crate::psi::{Oscillator2d, Wavefunction};

/// Generator identifier written into every output: ChaCha20 seeded with
/// `seed_from_u64`, each coordinate from the top 53 bits of one `u64`.
pub const RNG_ID: &str = "chacha20-u53-v1";

/// Default sample count for both chart types.
pub const DEFAULT_SAMPLES: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotMode {
    Scatter2d,
    ParallelAxes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorMode {
    /// white at zero, warm for positive and cool for negative `Re Ψ`
    DivergingReal,
    /// hue from `arg Ψ`, saturation from `|Ψ|`
    PhaseHue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    VectorGraphic,
    SampleTable,
}

macro_rules! keyword_enum {
    ($ty:ty { $($variant:ident => $kw:literal),+ $(,)? }) => {
        impl $ty {
            pub fn keyword(self) -> &'static str {
                match self { $(Self::$variant => $kw),+ }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.keyword())
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($kw => Ok(Self::$variant),)+
                    other => Err(Error::InvalidSpec(format!(
                        "unknown {} '{other}'", stringify!($ty)
                    ))),
                }
            }
        }
    };
}

keyword_enum!(PlotMode { Scatter2d => "scatter2d", ParallelAxes => "parallel_axes" });
keyword_enum!(ColorMode { DivergingReal => "diverging_real", PhaseHue => "phase_hue" });
keyword_enum!(OutputFormat { VectorGraphic => "svg", SampleTable => "csv" });

/// Sampling and rendering parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderSpec {
    pub sample_count: usize,
    /// half-width `L` of the window `[-L, L]^N`
    pub window: f64,
    pub seed: u64,
    pub mode: PlotMode,
    pub color_mode: ColorMode,
    pub width: u32,
    pub height: u32,
    pub output_format: OutputFormat,
}

impl RenderSpec {
    pub fn new(mode: PlotMode, window: f64, seed: u64) -> Self {
        let (width, height) = match mode {
            PlotMode::ParallelAxes => (1200, 600),
            PlotMode::Scatter2d => (700, 700),
        };
        Self {
            sample_count: DEFAULT_SAMPLES,
            window,
            seed,
            mode,
            color_mode: ColorMode::DivergingReal,
            width,
            height,
            output_format: OutputFormat::VectorGraphic,
        }
    }

    pub fn validate(&self, n_dims: usize) -> Result<()> {
        if self.sample_count == 0 {
            return Err(Error::InvalidSpec("sample count must be at least 1".into()));
        }
        if !(self.window > 0.0 && self.window.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "window must be finite and positive, got {}",
                self.window
            )));
        }
        if self.width < 64 || self.height < 64 {
            return Err(Error::InvalidSpec(
                "image must be at least 64x64 pixels".into(),
            ));
        }
        if self.mode == PlotMode::Scatter2d && n_dims != 2 {
            return Err(Error::InvalidSpec(format!(
                "scatter2d needs exactly 2 dimensions, got {n_dims}"
            )));
        }
        Ok(())
    }
}

/// `3 · max_k (mΩ_k)^{-1/2}`: three ground-state widths of the softest mode.
pub fn default_window(basis: &ModeBasis) -> f64 {
    3.0 * basis.max_mode_width()
}

pub fn default_window_2d(oscillator: &Oscillator2d) -> f64 {
    3.0 * oscillator.width()
}

/// `M × N` points, each coordinate i.i.d. uniform on `[-L, L)`, filled row
/// by row from one ChaCha20 stream. Bit-identical for equal
/// `(seed, M, N, L)`.
pub fn draw_samples(spec: &RenderSpec, n_dims: usize) -> Array2<f64> {
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
    let scale = 2.0 * spec.window;
    Array2::from_shape_simple_fn((spec.sample_count, n_dims), || {
        let unit = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        unit * scale - spec.window
    })
}

/// Sampled points with their wavefunction values.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    points: Array2<f64>,
    values: Vec<Complex64>,
    spec: RenderSpec,
    label: String,
}

impl SampleBatch {
    /// Draws `spec.sample_count` points and evaluates `psi` on them.
    pub fn evaluate<W: Wavefunction>(
        spec: &RenderSpec,
        psi: &W,
        label: impl Into<String>,
        execution: Execution,
    ) -> Result<Self> {
        let n = psi.n_dims();
        spec.validate(n)?;
        let points = draw_samples(spec, n);
        let values = evaluate_points(&points, psi, execution);
        Self::from_parts(points, values, *spec, label.into())
    }

    pub fn from_parts(
        points: Array2<f64>,
        values: Vec<Complex64>,
        spec: RenderSpec,
        label: String,
    ) -> Result<Self> {
        if points.nrows() == 0 {
            return Err(Error::EmptyBatch);
        }
        if points.nrows() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: points.nrows(),
                actual: values.len(),
            });
        }
        if let Some(i) = values
            .iter()
            .position(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::NonFinite(i));
        }
        if label.contains('\n') {
            return Err(Error::InvalidSpec(
                "state label must be a single line".into(),
            ));
        }
        let sample_count = values.len();
        Ok(Self {
            points,
            values,
            spec: RenderSpec {
                sample_count,
                ..spec
            },
            label,
        })
    }

    pub fn points(&self) -> &Array2<f64> {
        &self.points
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn spec(&self) -> &RenderSpec {
        &self.spec
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn n_dims(&self) -> usize {
        self.points.ncols()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Comma-separated table: one metadata header line, then
    /// `q_1,…,q_N,re,im` per sample with 17 significant digits.
    pub fn to_table(&self) -> String {
        let s = &self.spec;
        let mut out = String::with_capacity(self.len() * (self.n_dims() + 2) * 25);
        let _ = writeln!(
            out,
            "# chainviz-samples v1 n_sites={} samples={} seed={} window={:?} rng={} mode={} color={} width={} height={} state={}",
            self.n_dims(),
            self.len(),
            s.seed,
            s.window,
            RNG_ID,
            s.mode,
            s.color_mode,
            s.width,
            s.height,
            self.label
        );
        for (row, v) in self.points.rows().into_iter().zip(&self.values) {
            for q in row {
                let _ = write!(out, "{q:.16e},");
            }
            let _ = writeln!(out, "{:.16e},{:.16e}", v.re, v.im);
        }
        out
    }

    /// Reads a [`Self::to_table`] document back.
    pub fn from_table(text: &str) -> Result<Self> {
        let err = |line: usize, msg: String| Error::Parse {
            what: "sample table",
            line,
            msg,
        };
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| err(1, "empty document".into()))?;
        let rest = header
            .strip_prefix("# chainviz-samples v1 ")
            .ok_or_else(|| err(1, "missing header".into()))?;
        let (fields, label) = rest
            .split_once(" state=")
            .ok_or_else(|| err(1, "missing state label".into()))?;
        let mut meta = std::collections::HashMap::new();
        for kv in fields.split(' ') {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| err(1, format!("bad field '{kv}'")))?;
            meta.insert(k, v);
        }
        let get = |k: &str| {
            meta.get(k)
                .copied()
                .ok_or_else(|| err(1, format!("missing {k}")))
        };
        fn parse<T: FromStr>(s: &str, line: usize, what: &str) -> Result<T> {
            s.parse().map_err(|_| Error::Parse {
                what: "sample table",
                line,
                msg: format!("bad {what} '{s}'"),
            })
        }
        if get("rng")? != RNG_ID {
            return Err(err(1, format!("unsupported generator {}", get("rng")?)));
        }
        let n: usize = parse(get("n_sites")?, 1, "n_sites")?;
        let m: usize = parse(get("samples")?, 1, "samples")?;
        let spec = RenderSpec {
            sample_count: m,
            window: parse(get("window")?, 1, "window")?,
            seed: parse(get("seed")?, 1, "seed")?,
            mode: get("mode")?.parse()?,
            color_mode: get("color")?.parse()?,
            width: parse(get("width")?, 1, "width")?,
            height: parse(get("height")?, 1, "height")?,
            output_format: OutputFormat::SampleTable,
        };
        let mut coords = Vec::with_capacity(m * n);
        let mut values = Vec::with_capacity(m);
        for (i, line) in lines.enumerate() {
            let lineno = i + 2;
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != n + 2 {
                return Err(err(
                    lineno,
                    format!("expected {} columns, got {}", n + 2, cells.len()),
                ));
            }
            for c in &cells[..n] {
                coords.push(parse::<f64>(c, lineno, "coordinate")?);
            }
            values.push(Complex64::new(
                parse(cells[n], lineno, "re")?,
                parse(cells[n + 1], lineno, "im")?,
            ));
        }
        if values.len() != m {
            return Err(err(
                1,
                format!("header says {m} samples, found {}", values.len()),
            ));
        }
        let points = Array2::from_shape_vec((m, n), coords).map_err(|e| err(1, e.to_string()))?;
        Self::from_parts(points, values, spec, label.to_string())
    }
}

/// `Ψ` at every row of `points`, in row order.
pub fn evaluate_points<W: Wavefunction>(
    points: &Array2<f64>,
    psi: &W,
    execution: Execution,
) -> Vec<Complex64> {
    let n = points.ncols();
    let flat = points
        .as_slice()
        .expect("sample arrays are built in standard layout");
    map_indexed(points.nrows(), execution, |i| {
        psi.value(&flat[i * n..(i + 1) * n])
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::ChainParams;
    use crate::fock::FockState;
    use crate::psi::EvalContext;

    fn spec(m: usize, window: f64, seed: u64) -> RenderSpec {
        RenderSpec {
            sample_count: m,
            ..RenderSpec::new(PlotMode::ParallelAxes, window, seed)
        }
    }

    #[test]
    fn deterministic_and_bounded() {
        let s = spec(2000, 3.0, 7);
        let a = draw_samples(&s, 5);
        let b = draw_samples(&s, 5);
        assert_eq!(a, b);
        assert_eq!(a.dim(), (2000, 5));
        assert!(a.iter().all(|q| q.abs() <= 3.0));
        assert_ne!(a, draw_samples(&spec(2000, 3.0, 8), 5));
    }

    #[test]
    fn uniform_mean() {
        let (m, l) = (100_000, 3.0);
        let pts = draw_samples(&spec(m, l, 2024), 3);
        let bound = 3.0 * (l / 3f64.sqrt()) / (m as f64).sqrt();
        for col in pts.columns() {
            let mean = col.sum() / m as f64;
            assert!(mean.abs() < bound, "{mean} vs {bound}");
        }
    }

    #[test]
    fn validation() {
        assert!(spec(0, 1.0, 0).validate(3).is_err());
        assert!(spec(1, 0.0, 0).validate(3).is_err());
        assert!(spec(1, f64::INFINITY, 0).validate(3).is_err());
        let scatter = RenderSpec::new(PlotMode::Scatter2d, 1.0, 0);
        assert!(scatter.validate(3).is_err());
        assert!(scatter.validate(2).is_ok());
    }

    #[test]
    fn keywords_round_trip() {
        for m in [PlotMode::Scatter2d, PlotMode::ParallelAxes] {
            assert_eq!(m.keyword().parse::<PlotMode>().unwrap(), m);
        }
        for c in [ColorMode::DivergingReal, ColorMode::PhaseHue] {
            assert_eq!(c.to_string().parse::<ColorMode>().unwrap(), c);
        }
        assert!("rainbow".parse::<ColorMode>().is_err());
    }

    fn vacuum_batch(m: usize, gamma: f64) -> SampleBatch {
        let p = ChainParams::new(3, 1.0, 1.0, gamma).unwrap();
        let b = ModeBasis::new(&p);
        let v = FockState::vacuum(&p);
        let ctx = EvalContext::new(&v, &b).unwrap();
        SampleBatch::evaluate(
            &spec(m, default_window(&b), 11),
            &ctx,
            "vac",
            Execution::Parallel,
        )
        .unwrap()
    }

    #[test]
    fn batch_values_match_pointwise() {
        let p = ChainParams::new(5, 1.0, 1.0, 0.5).unwrap();
        let b = ModeBasis::new(&p);
        let s = FockState::vacuum(&p).apply_create_local(&b, 2).unwrap();
        let ctx = EvalContext::new(&s, &b).unwrap();
        let batch =
            SampleBatch::evaluate(&spec(300, 2.0, 3), &ctx, "b[2] vac", Execution::Parallel)
                .unwrap();
        for (row, v) in batch.points().rows().into_iter().zip(batch.values()) {
            assert_eq!(ctx.evaluate(row.as_slice().unwrap()).unwrap(), *v);
        }
    }

    #[test]
    fn single_sample_table_has_two_lines() {
        let batch = vacuum_batch(1, 1.0);
        let t = batch.to_table();
        assert_eq!(t.lines().count(), 2);
        assert!(t.starts_with("# chainviz-samples v1 n_sites=3 samples=1 seed=11"));
        assert!(t.lines().next().unwrap().ends_with("state=vac"));
    }

    #[test]
    fn table_round_trip_is_exact() {
        let batch = vacuum_batch(50, 1.0);
        let back = SampleBatch::from_table(&batch.to_table()).unwrap();
        assert_eq!(back.points(), batch.points());
        assert_eq!(back.values(), batch.values());
        assert_eq!(back.label(), "vac");
        assert_eq!(back.to_table(), batch.to_table());
    }

    #[test]
    fn table_errors() {
        assert!(SampleBatch::from_table("").is_err());
        assert!(SampleBatch::from_table("hello").is_err());
        let t = vacuum_batch(2, 1.0).to_table();
        let truncated: String = t.lines().take(2).map(|l| format!("{l}\n")).collect();
        assert!(SampleBatch::from_table(&truncated).is_err());
    }

    #[test]
    fn vacuum_peak_sample_is_closest_to_origin() {
        let batch = vacuum_batch(500, 0.0);
        let norms: Vec<f64> = batch
            .points()
            .rows()
            .into_iter()
            .map(|r| r.dot(&r))
            .collect();
        let by_value = (0..batch.len())
            .max_by(|&a, &b| batch.values()[a].re.total_cmp(&batch.values()[b].re))
            .unwrap();
        let by_norm = (0..batch.len())
            .min_by(|&a, &b| norms[a].total_cmp(&norms[b]))
            .unwrap();
        assert_eq!(by_value, by_norm);
    }

    #[test]
    fn empty_and_non_finite_batches_rejected() {
        let s = spec(1, 1.0, 0);
        assert_eq!(
            SampleBatch::from_parts(Array2::zeros((0, 3)), vec![], s, "x".into()),
            Err(Error::EmptyBatch)
        );
        assert_eq!(
            SampleBatch::from_parts(
                Array2::zeros((1, 3)),
                vec![Complex64::new(f64::NAN, 0.0)],
                s,
                "x".into()
            ),
            Err(Error::NonFinite(0))
        );
    }
}
