use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use chainviz_cli::presets::{self, PresetKind, PRESETS};
use chainviz_cli::run::{run, RunConfig, RunError, Target};
use chainviz_core::{ChainParams, ColorMode, Execution, OutputFormat, PlotMode};
use clap::error::ErrorKind;
use clap::Parser;

/// Monte Carlo pictures of quantum states of a periodic harmonic chain.
///
/// Samples configurations uniformly in [-L, L]^N, evaluates the
/// wavefunction at each one and draws every sample as a polyline across N
/// parallel axes, colored by its value.
#[derive(Debug, Parser)]
#[command(name = "chainviz", version)]
struct Args {
    /// Named figure preset (see --list-presets); explicit flags override it
    #[arg(long)]
    preset: Option<String>,
    /// Print the presets and exit
    #[arg(long)]
    list_presets: bool,
    /// Number of sites (odd)
    #[arg(long = "n")]
    n_sites: Option<usize>,
    /// Particle mass m
    #[arg(long, default_value_t = 1.0)]
    mass: f64,
    /// On-site stiffness κ
    #[arg(long, default_value_t = 1.0)]
    kappa: f64,
    /// Nearest-neighbour coupling γ
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// State expression, e.g. "b[3] b[8] vac" or "(a[1] + i a[-1]) vac"
    #[arg(long)]
    state: Option<String>,
    /// Draw the separable 2D oscillator instead of a chain
    #[arg(long)]
    mode2d: bool,
    /// Quantum number along q1 for --mode2d [default: 0]
    #[arg(long)]
    nu1: Option<u32>,
    /// Quantum number along q2 for --mode2d [default: 0]
    #[arg(long)]
    nu2: Option<u32>,
    /// Re-render a table written by --dump-samples or --format csv
    #[arg(long, value_name = "CSV")]
    from_table: Option<PathBuf>,
    /// Monte Carlo sample count [default: 20000]
    #[arg(long)]
    samples: Option<usize>,
    /// Half-width L of the sampling box [default: 3 widths of the softest mode]
    #[arg(long)]
    window: Option<f64>,
    /// Random seed; equal seeds give byte-identical output
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file [default: <preset>.svg or chainviz.svg]
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the sample table here
    #[arg(long, value_name = "CSV")]
    dump_samples: Option<PathBuf>,
    /// Also write the Fock-space amplitudes here
    #[arg(long, value_name = "FILE")]
    dump_state: Option<PathBuf>,
    /// diverging_real or phase_hue
    #[arg(long, default_value = "diverging_real")]
    color_mode: ColorMode,
    /// parallel_axes or scatter2d [default: scatter2d for --mode2d]
    #[arg(long)]
    plot: Option<PlotMode>,
    /// Image width in pixels [default: 1200, or 700 for scatter2d]
    #[arg(long)]
    width: Option<u32>,
    /// Image height in pixels [default: 600, or 700 for scatter2d]
    #[arg(long)]
    height: Option<u32>,
    /// svg or csv
    #[arg(long, default_value = "svg")]
    format: OutputFormat,
    /// Worker threads; 0 uses every core
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

fn build_config(args: Args) -> Result<RunConfig, RunError> {
    let usage = |m: String| RunError::Usage(m);
    let preset = match &args.preset {
        Some(name) => Some(
            presets::find(name)
                .ok_or_else(|| usage(format!("unknown preset '{name}' (try --list-presets)")))?,
        ),
        None => None,
    };

    let chain_preset = match preset.map(|p| p.kind) {
        Some(PresetKind::Chain { n_sites, state }) => Some((n_sites, state)),
        _ => None,
    };
    let osc_preset = match preset.map(|p| p.kind) {
        Some(PresetKind::Oscillator2d { nu1, nu2 }) => Some((nu1, nu2)),
        _ => None,
    };

    let target = if let Some(path) = args.from_table.clone() {
        if preset.is_some() || args.state.is_some() || args.mode2d {
            return Err(usage("--from-table cannot be combined with a state".into()));
        }
        Target::Table(path)
    } else if args.mode2d || osc_preset.is_some() {
        if args.state.is_some() {
            return Err(usage("--state does not apply to --mode2d".into()));
        }
        let (nu1, nu2) = osc_preset.unwrap_or((0, 0));
        let (nu1, nu2) = (args.nu1.unwrap_or(nu1), args.nu2.unwrap_or(nu2));
        Target::Oscillator2d {
            mass: args.mass,
            kappa: args.kappa,
            nu1,
            nu2,
        }
    } else {
        let n_sites = args
            .n_sites
            .or(chain_preset.map(|p| p.0))
            .ok_or_else(|| usage("give --n and --state, --mode2d, or --preset".into()))?;
        let state = args
            .state
            .clone()
            .or(chain_preset.map(|p| p.1.to_string()))
            .ok_or_else(|| usage("--state is required without --preset".into()))?;
        let params = ChainParams::new(n_sites, args.mass, args.kappa, args.gamma)
            .map_err(|e| usage(e.to_string()))?;
        Target::Chain { params, state }
    };

    let extension = match args.format {
        OutputFormat::VectorGraphic => "svg",
        OutputFormat::SampleTable => "csv",
    };
    let out = args.out.clone().unwrap_or_else(|| {
        PathBuf::from(format!(
            "{}.{extension}",
            preset.map_or("chainviz", |p| p.name)
        ))
    });
    let execution = match args.threads {
        0 => Execution::Parallel,
        1 => Execution::Sequential,
        n => Execution::Threads(n),
    };

    let mut config = RunConfig::new(target, out);
    config.samples = args.samples;
    config.window = args.window;
    config.seed = args.seed;
    config.plot_mode = args.plot;
    config.color_mode = args.color_mode;
    config.width = args.width;
    config.height = args.height;
    config.format = args.format;
    config.dump_samples = args.dump_samples;
    config.dump_state = args.dump_state;
    config.execution = execution;
    Ok(config)
}

fn list_presets() {
    let mut out = std::io::stdout().lock();
    for p in PRESETS {
        let line = format!(
            "{:<6} {}\n       {}",
            p.name,
            p.description,
            p.command_line()
        );
        if writeln!(out, "{line}").is_err() {
            return;
        }
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    if args.list_presets {
        list_presets();
        return ExitCode::SUCCESS;
    }
    let result = build_config(args).and_then(|config| run(&config));
    match result {
        Ok(outcome) => {
            println!("{}", outcome.summary());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("chainviz: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
