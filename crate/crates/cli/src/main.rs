use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rosette_core::complex::{self, demos, Complex, VertexId};
use rosette_core::motif::TrimFillerRule;
use rosette_core::patch::{TauMode, TauSweep};
use rosette_core::pipeline::{self, DesignParams, PipelineError};
use rosette_core::render::{emit_svg, Layer};

#[derive(Parser)]
#[command(
    name = "rosette",
    version,
    about = "Freeform rosette patterns from circle packings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a complex and report every violated invariant.
    Validate(InputArgs),
    /// Solve the circle packing and print it as JSON.
    Pack {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Build the polygon patch and print it as JSON.
    Patch(StageArgs),
    /// Build the trimmed design and print it as JSON.
    Design(StageArgs),
    /// Draw the design as SVG.
    Render(StageArgs),
    /// Run every stage, writing the SVG and (optionally) the full JSON.
    Pipeline {
        #[command(flatten)]
        stage: StageArgs,
        /// Packing, patch and design as one JSON document.
        #[arg(long, value_name = "FILE")]
        json: Option<PathBuf>,
    },
    /// Mean filler CSM over a range of τ.
    TauSweep {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 0.5)]
        start: f64,
        #[arg(long, default_value_t = 0.95)]
        end: f64,
        #[arg(long, default_value_t = 0.005)]
        step: f64,
        #[arg(long, value_enum, default_value_t = ModeArg::Scale)]
        tau_mode: ModeArg,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Serve the HTTP design API.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        bind: String,
    },
}

#[derive(Args)]
struct InputArgs {
    #[command(flatten)]
    source: Source,
    /// Seed for `--random`.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Complex document (JSON).
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
    /// Built-in complex: flower<k>, hex7, grid-gadgets, bowtie-grid, square,
    /// bowtie, torus-hex, torus-grid, delaunay.
    #[arg(long)]
    demo: Option<String>,
    /// Delaunay triangulation of this many seeded random points.
    #[arg(long, value_name = "N")]
    random: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Scale,
    Offset,
}

impl From<ModeArg> for TauMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Scale => TauMode::Scale,
            ModeArg::Offset => TauMode::Offset,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    All,
    AnyTwo,
}

#[derive(Clone, Copy, ValueEnum)]
enum LayerArg {
    Circles,
    Patch,
    Motif,
    Labels,
}

impl From<LayerArg> for Layer {
    fn from(l: LayerArg) -> Self {
        match l {
            LayerArg::Circles => Layer::Circles,
            LayerArg::Patch => Layer::Patch,
            LayerArg::Motif => Layer::Motif,
            LayerArg::Labels => Layer::RosetteLabels,
        }
    }
}

#[derive(Args)]
struct StageArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Parameter document; the flags below override it.
    #[arg(long, value_name = "FILE")]
    params: Option<PathBuf>,
    /// Patch shrink factor in (0, 1) [default: 0.8].
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long, value_enum)]
    tau_mode: Option<ModeArg>,
    /// Pick τ by minimising the mean filler CSM.
    #[arg(long)]
    optimize_tau: bool,
    /// Contact angle in radians.
    #[arg(long)]
    theta: Option<f64>,
    /// Inner-circle ratio for every star, instead of deriving it from θ.
    #[arg(long)]
    alpha: Option<f64>,
    /// Boundary layers to trim, or `none`.
    #[arg(long, value_name = "N|none")]
    trim_depth: Option<String>,
    /// Circles whose rosettes are kept, overriding the trim.
    #[arg(long, value_delimiter = ',')]
    keep: Option<Vec<VertexId>>,
    #[arg(long, value_enum)]
    filler_rule: Option<RuleArg>,
    /// Torus designs are drawn on a (2k+1)×(2k+1) block of copies.
    #[arg(long, value_name = "K")]
    torus_copies: Option<u32>,
    #[arg(long, value_enum, value_delimiter = ',')]
    layers: Option<Vec<LayerArg>>,
    #[arg(long)]
    stroke_width: Option<f64>,
    #[arg(long)]
    margin: Option<f64>,
    #[arg(long)]
    background: Option<String>,
    /// Output file; stdout when omitted.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

enum Failure {
    Pipeline(PipelineError),
    Input(String),
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        Failure::Pipeline(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Pipeline(e) => e.exit_code() as u8,
            Failure::Input(_) => 1,
        }
    }
}

type Result<T> = std::result::Result<T, Failure>;

fn load(input: &InputArgs) -> Result<Complex> {
    let src = &input.source;
    if let Some(path) = &src.input {
        let bytes =
            std::fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        return complex::parse_unchecked(&bytes)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())));
    }
    if let Some(name) = &src.demo {
        return demos::by_name(name).ok_or_else(|| {
            Failure::Input(format!(
                "unknown demo {name:?}; try flower<k> or one of {}",
                demos::DEMO_NAMES.join(", ")
            ))
        });
    }
    let n = src.random.expect("clap requires an input");
    Ok(demos::random_delaunay(n, input.seed))
}

fn params(args: &StageArgs) -> Result<DesignParams> {
    let mut p = match &args.params {
        Some(path) => {
            let bytes = std::fs::read(path)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            serde_json::from_slice(&bytes)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
        }
        None => DesignParams::default(),
    };
    if let Some(t) = args.tau {
        p.tau = t;
    }
    if let Some(m) = args.tau_mode {
        p.tau_mode = m.into();
    }
    p.optimize_tau |= args.optimize_tau;
    if let Some(t) = args.theta {
        p.motif.theta = t;
    }
    if let Some(a) = args.alpha {
        p.motif.alpha_override = Some(a);
    }
    if let Some(d) = &args.trim_depth {
        p.motif.trim_depth = match d.as_str() {
            "none" => None,
            n => Some(n.parse().map_err(|_| {
                Failure::Input(format!(
                    "--trim-depth: expected a count or `none`, got {n:?}"
                ))
            })?),
        };
    }
    if let Some(k) = &args.keep {
        p.motif.keep = Some(k.iter().copied().collect::<BTreeSet<_>>());
    }
    if let Some(r) = args.filler_rule {
        p.motif.trim_filler_rule = match r {
            RuleArg::All => TrimFillerRule::AllNeighborsKept,
            RuleArg::AnyTwo => TrimFillerRule::AnyTwoKept,
        };
    }
    if let Some(c) = args.torus_copies {
        p.motif.torus_copies = c;
    }
    if let Some(l) = &args.layers {
        p.style.layers = l.iter().map(|&x| x.into()).collect();
    }
    if let Some(w) = args.stroke_width {
        p.style.stroke_width = w;
    }
    if let Some(m) = args.margin {
        p.style.margin = m;
    }
    if let Some(b) = &args.background {
        p.style.background = Some(b.clone());
    }
    Ok(p)
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    let r = match path {
        Some(p) => std::fs::write(p, bytes),
        None => std::io::stdout().lock().write_all(bytes),
    };
    r.map_err(|e| Failure::Input(format!("cannot write output: {e}")))
}

fn json_bytes<S: Serialize>(value: &S) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(value).expect("dump serializes");
    v.push(b'\n');
    v
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Validate(input) => {
            let c = load(&input)?;
            let report = complex::validate(&c);
            if !report.is_empty() {
                return Err(PipelineError::InvalidComplex(report).into());
            }
            println!(
                "valid: {} vertices, {} triangles, {} gadgets",
                c.vertices().len(),
                c.triangles().len(),
                c.gadgets().len()
            );
        }
        Command::Pack { input, out } => {
            let packing = pipeline::run_pack(&load(&input)?)?;
            write_out(out.as_deref(), &json_bytes(&packing.dump()))?;
        }
        Command::Patch(args) => {
            let (_, patch, _, _) = pipeline::run_patch(&load(&args.input)?, &params(&args)?)?;
            write_out(args.out.as_deref(), &json_bytes(&patch.dump()))?;
        }
        Command::Design(args) => {
            let s = pipeline::run_design(&load(&args.input)?, &params(&args)?)?;
            write_out(args.out.as_deref(), &json_bytes(&s.design.dump()))?;
        }
        Command::Render(args) => {
            let p = params(&args)?;
            let s = pipeline::run_design(&load(&args.input)?, &p)?;
            let svg = emit_svg(&s.scene(), &p.style).map_err(PipelineError::from)?;
            write_out(args.out.as_deref(), svg.as_bytes())?;
        }
        Command::Pipeline { stage, json } => {
            let out = pipeline::run(&load(&stage.input)?, &params(&stage)?)?;
            if let Some(j) = json {
                write_out(Some(&j), &json_bytes(&out.to_json()))?;
            }
            write_out(stage.out.as_deref(), out.svg.as_bytes())?;
            for f in &out.stages.design.failures {
                eprintln!("warning: polygon {}: {}", f.polygon, f.error);
            }
        }
        Command::TauSweep {
            input,
            start,
            end,
            step,
            tau_mode,
            out,
        } => {
            let sweep = TauSweep { start, end, step };
            let curve = pipeline::tau_sweep(&load(&input)?, &sweep, tau_mode.into())?;
            write_out(out.as_deref(), &json_bytes(&curve))?;
        }
        Command::Serve { bind } => {
            let rt = tokio::runtime::Runtime::new().map_err(|e| Failure::Input(e.to_string()))?;
            eprintln!("listening on {bind}");
            rt.block_on(rosette_cli::serve(&bind))
                .map_err(|e| Failure::Input(format!("{bind}: {e}")))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Pipeline(e) => eprintln!("error: {e}"),
                Failure::Input(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(f.exit_code())
        }
    }
}
