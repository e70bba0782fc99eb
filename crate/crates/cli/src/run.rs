//! One chainviz invocation: build the state, sample, render, write.
//!
//! Every output document is rendered in memory before the first file is
//! touched, and each file is written to a temporary sibling and renamed into
//! place, so a failed run leaves no partial output behind.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use chainviz_core::sample::default_window_2d;
use chainviz_core::{
    default_window, real_mode_basis, render, ChainParams, ColorMode, EvalContext, Execution,
    Oscillator2d, OutputFormat, PlotMode, RenderSpec, SampleBatch,
};
use thiserror::Error;

use crate::expr::parse_state_expr;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numeric(#[from] chainviz_core::Error),
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl RunError {
    /// 1 for bad input, 2 for numerical failures, 3 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Usage(_) => 1,
            RunError::Numeric(_) => 2,
            RunError::Io { .. } => 3,
        }
    }
}

/// What to draw.
#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    Chain {
        params: ChainParams,
        state: String,
    },
    Oscillator2d {
        mass: f64,
        kappa: f64,
        nu1: u32,
        nu2: u32,
    },
    /// re-render a previously dumped sample table
    Table(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub target: Target,
    pub samples: Option<usize>,
    pub window: Option<f64>,
    pub seed: u64,
    pub plot_mode: Option<PlotMode>,
    pub color_mode: ColorMode,
    pub width: Option<u32>,
    pub height: Option<u32>,
    pub format: OutputFormat,
    pub out: PathBuf,
    pub dump_samples: Option<PathBuf>,
    pub dump_state: Option<PathBuf>,
    pub execution: Execution,
}

impl RunConfig {
    pub fn new(target: Target, out: impl Into<PathBuf>) -> Self {
        Self {
            target,
            samples: None,
            window: None,
            seed: 0,
            plot_mode: None,
            color_mode: ColorMode::DivergingReal,
            width: None,
            height: None,
            format: OutputFormat::VectorGraphic,
            out: out.into(),
            dump_samples: None,
            dump_state: None,
            execution: Execution::default(),
        }
    }

    fn spec(&self, default_mode: PlotMode, default_window: f64) -> RenderSpec {
        let mut spec = RenderSpec::new(
            self.plot_mode.unwrap_or(default_mode),
            self.window.unwrap_or(default_window),
            self.seed,
        );
        if let Some(m) = self.samples {
            spec.sample_count = m;
        }
        if let Some(w) = self.width {
            spec.width = w;
        }
        if let Some(h) = self.height {
            spec.height = h;
        }
        spec.color_mode = self.color_mode;
        spec.output_format = self.format;
        spec
    }
}

/// Result of a successful run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub n_dims: usize,
    pub label: String,
    pub samples: usize,
    pub seed: u64,
    pub written: Vec<PathBuf>,
}

impl Outcome {
    pub fn summary(&self) -> String {
        let out = self
            .written
            .first()
            .map(|p| p.display().to_string())
            .unwrap_or_default();
        format!(
            "N={} state={} samples={} seed={} out={}",
            self.n_dims, self.label, self.samples, self.seed, out
        )
    }
}

pub fn run(config: &RunConfig) -> Result<Outcome, RunError> {
    let mut state_text = None;
    let batch = match &config.target {
        Target::Chain { params, state } => {
            let expr = parse_state_expr(state, params).map_err(|e| {
                RunError::Usage(format!("bad state expression\n{}", e.render(state)))
            })?;
            let basis = real_mode_basis(params);
            let fock = expr.evaluate(&basis)?;
            if fock.is_empty() {
                return Err(RunError::Usage(format!(
                    "state '{state}' is the zero vector"
                )));
            }
            let spec = config.spec(PlotMode::ParallelAxes, default_window(&basis));
            let ctx = EvalContext::new(&fock, &basis)?;
            if config.dump_state.is_some() {
                state_text = Some(fock.to_text());
            }
            SampleBatch::evaluate(&spec, &ctx, expr.to_string(), config.execution)?
        }
        Target::Oscillator2d {
            mass,
            kappa,
            nu1,
            nu2,
        } => {
            if config.dump_state.is_some() {
                return Err(RunError::Usage(
                    "--dump-state needs a chain state, not --mode2d".into(),
                ));
            }
            let osc = Oscillator2d::new(*mass, *kappa)?;
            let spec = config.spec(PlotMode::Scatter2d, default_window_2d(&osc));
            let psi = osc.state(*nu1, *nu2);
            SampleBatch::evaluate(&spec, &psi, format!("osc2d({nu1},{nu2})"), config.execution)?
        }
        Target::Table(path) => {
            if config.dump_state.is_some() {
                return Err(RunError::Usage(
                    "--dump-state is unavailable with --from-table".into(),
                ));
            }
            let text = fs::read_to_string(path).map_err(|source| RunError::Io {
                path: path.clone(),
                source,
            })?;
            SampleBatch::from_table(&text)?
        }
    };

    let main_doc = match config.format {
        OutputFormat::VectorGraphic => render(&batch)?,
        OutputFormat::SampleTable => batch.to_table(),
    };
    let mut docs = vec![(config.out.clone(), main_doc)];
    if let Some(path) = &config.dump_samples {
        docs.push((path.clone(), batch.to_table()));
    }
    if let (Some(path), Some(text)) = (&config.dump_state, state_text) {
        docs.push((path.clone(), text));
    }
    check_distinct(&docs)?;
    for (path, doc) in &docs {
        write_atomic(path, doc.as_bytes())?;
    }

    Ok(Outcome {
        n_dims: batch.n_dims(),
        label: batch.label().to_string(),
        samples: batch.len(),
        seed: batch.spec().seed,
        written: docs.into_iter().map(|(p, _)| p).collect(),
    })
}

fn check_distinct(docs: &[(PathBuf, String)]) -> Result<(), RunError> {
    for (i, (a, _)) in docs.iter().enumerate() {
        if docs[..i].iter().any(|(b, _)| a == b) {
            return Err(RunError::Usage(format!(
                "{} is named as more than one output",
                a.display()
            )));
        }
    }
    Ok(())
}

/// Writes `bytes` to a temporary file next to `path`, then renames it over
/// `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), RunError> {
    let io = |source| RunError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut builder = tempfile::Builder::new();
    builder.prefix(".chainviz-");
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        builder.permissions(fs::Permissions::from_mode(0o644));
    }
    let mut tmp = builder.tempfile_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}
