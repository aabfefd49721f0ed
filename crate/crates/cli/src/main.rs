//! `atq`: validate, transform, quantize and render base diagrams from the
//! command line. Every subcommand reads and writes JSON so stages can be
//! piped; `-` in place of a path means stdin.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use atq_core::catalog::{self, CatalogError, CatalogItem};
use atq_core::diagram::{symplectic_sum, ClosedBase, Diagram, DiagramError, Violation};
use atq_core::graded::GradedQuant;
use atq_core::lattice::RatPolygon;
use atq_core::mv::{self, FFCovering, MvError};
use atq_core::quantization::{report, report_closed, QuantReport};
use atq_core::rat::Rat;
use atq_core::render;
use atq_core::semitoric::{quantize_semitoric, SemitoricError, SemitoricModel, Window};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "atq",
    version,
    about = "Real quantization of almost toric base diagrams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a diagram's invariants; exit 1 listing violations if any fail.
    Validate { input: PathBuf },
    /// Areas, lattice counts, Delzant checks and node summary.
    Info { input: PathBuf },
    /// Bohr–Sommerfeld classification and graded counts.
    Quantize {
        input: PathBuf,
        /// Lattice window `x0,y0,x1,y1` for semitoric models.
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: Option<Window>,
    },
    /// Nodal trades, applied in the order given.
    Trade {
        input: PathBuf,
        /// `vertex=INDEX,t=RAT[,k=INT]`
        #[arg(long = "trade", required = true, value_parser = parse_trade)]
        trades: Vec<TradeSpec>,
    },
    /// Nodal slides, applied in the order given.
    Slide {
        input: PathBuf,
        /// `node=INDEX,t=RAT`
        #[arg(long = "slide", required = true, value_parser = parse_slide)]
        slides: Vec<SlideSpec>,
    },
    /// Glue two fully traded diagrams into a closed base.
    Sum {
        a: PathBuf,
        b: PathBuf,
        /// Declare the pre-quantum bundles incompatible along the gluing torus.
        #[arg(long)]
        incompatible: bool,
    },
    /// Mayer–Vietoris computation for a focus-focus fiber neighbourhood.
    Mv {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        compact: bool,
        #[arg(long)]
        bs: bool,
    },
    /// Künneth product of two graded quantizations, or of the model factors.
    Kunneth(KunnethArgs),
    /// Built-in examples.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
    /// SVG drawing of a diagram or closed base.
    Render { input: PathBuf },
}

#[derive(Args)]
struct KunnethArgs {
    /// Graded quantization JSON files (`{"0": [f, s], ...}`).
    #[arg(
        num_args = 2,
        required_unless_present = "model",
        conflicts_with = "model"
    )]
    factors: Vec<PathBuf>,
    /// Use `T*I × (I_s × S¹)` with this many integers in `I_s`.
    #[arg(long)]
    model: Option<u64>,
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// Names, parameters and expected quantizations.
    List,
    /// Build a fixture.
    Build {
        name: String,
        /// `NAME=RAT`, e.g. `d=9` for `cp2`.
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, Rat)>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Sample a moment map on a grid.
    Sample {
        #[arg(value_enum)]
        system: System,
        #[arg(long, default_value_t = 16)]
        grid: usize,
        /// Disk radius for the oscillator coordinates.
        #[arg(long, default_value_t = 2.0)]
        radius: f64,
        #[arg(long, value_enum, default_value_t = SampleFormat::Json)]
        format: SampleFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum System {
    SpinSpin,
    SpinOscillator,
}

#[derive(Clone, Debug)]
struct TradeSpec {
    vertex: usize,
    t: Rat,
    k: u32,
}

#[derive(Clone, Debug)]
struct SlideSpec {
    node: usize,
    t: Rat,
}

/// Splits `key=value,key=value` into a map, rejecting unknown or repeated keys.
fn key_values<'a>(s: &'a str, allowed: &[&str]) -> Result<BTreeMap<&'a str, &'a str>, String> {
    let mut out = BTreeMap::new();
    for part in s.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got {part:?}"))?;
        let k = k.trim();
        if !allowed.contains(&k) {
            return Err(format!("unknown key {k:?}; expected one of {allowed:?}"));
        }
        if out.insert(k, v.trim()).is_some() {
            return Err(format!("key {k:?} given twice"));
        }
    }
    Ok(out)
}

fn required<T: FromStr>(kv: &BTreeMap<&str, &str>, key: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    let v = kv.get(key).ok_or_else(|| format!("missing {key}="))?;
    v.parse().map_err(|e| format!("{key}={v}: {e}"))
}

fn parse_trade(s: &str) -> Result<TradeSpec, String> {
    let kv = key_values(s, &["vertex", "t", "k"])?;
    let k = match kv.get("k") {
        Some(_) => required(&kv, "k")?,
        None => 1,
    };
    Ok(TradeSpec {
        vertex: required(&kv, "vertex")?,
        t: required(&kv, "t")?,
        k,
    })
}

fn parse_slide(s: &str) -> Result<SlideSpec, String> {
    let kv = key_values(s, &["node", "t"])?;
    Ok(SlideSpec {
        node: required(&kv, "node")?,
        t: required(&kv, "t")?,
    })
}

fn parse_window(s: &str) -> Result<Window, String> {
    let parts: Vec<i64> = s
        .split(',')
        .map(|p| p.trim().parse::<i64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [x0, y0, x1, y1] => Ok(Window { x0, y0, x1, y1 }),
        _ => Err(format!("expected x0,y0,x1,y1, got {} numbers", parts.len())),
    }
}

fn parse_param(s: &str) -> Result<(String, Rat), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got {s:?}"))?;
    let r = v.trim().parse::<Rat>().map_err(|e| e.to_string())?;
    Ok((k.trim().to_string(), r))
}

/// A domain error, reported on stderr as `{"error": {"code", "message", ...}}`.
#[derive(Debug)]
struct Failure {
    code: String,
    message: String,
    violations: Vec<Violation>,
}

impl Failure {
    fn new(code: impl Into<String>, message: impl Into<String>) -> Self {
        Failure {
            code: code.into(),
            message: message.into(),
            violations: Vec::new(),
        }
    }

    fn to_json(&self) -> Value {
        let mut err = json!({ "code": self.code, "message": self.message });
        if !self.violations.is_empty() {
            err["violations"] = json!(self.violations);
        }
        json!({ "error": err })
    }
}

impl From<DiagramError> for Failure {
    fn from(e: DiagramError) -> Self {
        match e {
            // report the first violation's code so callers can tell them apart
            DiagramError::Invalid(vs) if !vs.is_empty() => invalid(vs),
            e => Failure::new(e.code(), e.to_string()),
        }
    }
}

macro_rules! coded {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::new(e.code(), e.to_string())
            }
        }
    )*};
}

coded!(MvError, SemitoricError, atq_core::lattice::LatticeError);

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Self {
        match e {
            CatalogError::Diagram(d) => d.into(),
            e => Failure::new(e.code(), e.to_string()),
        }
    }
}

fn invalid(vs: Vec<Violation>) -> Failure {
    let message = vs
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ");
    Failure {
        code: vs[0].code().to_string(),
        message,
        violations: vs,
    }
}

type Outcome = Result<Output, Failure>;

enum Output {
    Json(Value),
    Text(String),
}

fn json_out<T: serde::Serialize>(v: &T) -> Outcome {
    serde_json::to_value(v)
        .map(Output::Json)
        .map_err(|e| Failure::new("serialization_failed", e.to_string()))
}

fn read_input(path: &PathBuf) -> Result<Value, Failure> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::new("io_error", format!("stdin: {e}")))?;
    } else {
        text = fs::read_to_string(path)
            .map_err(|e| Failure::new("io_error", format!("{}: {e}", path.display())))?;
    }
    serde_json::from_str(&text).map_err(|e| Failure::new("malformed_json", e.to_string()))
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value) -> Result<T, Failure> {
    serde_json::from_value(v).map_err(|e| Failure::new("malformed_input", e.to_string()))
}

/// Any input document, told apart by its top-level keys.
enum Input {
    Diagram(Diagram),
    Closed(ClosedBase),
    Semitoric(SemitoricModel),
}

fn load(path: &PathBuf) -> Result<Input, Failure> {
    let v = read_input(path)?;
    let has = |k: &str| v.get(k).is_some();
    if has("half_a") {
        Ok(Input::Closed(from_value(v)?))
    } else if has("region") {
        Ok(Input::Semitoric(from_value(v)?))
    } else if has("polygon") {
        Ok(Input::Diagram(from_value(v)?))
    } else if has("vertices") {
        Ok(Input::Diagram(Diagram::toric(from_value::<RatPolygon>(v)?)))
    } else {
        Err(Failure::new(
            "unknown_input",
            "expected a polygon, diagram, closed base or semitoric model",
        ))
    }
}

fn checked(d: Diagram) -> Result<Diagram, Failure> {
    let vs = d.validate();
    if vs.is_empty() {
        Ok(d)
    } else {
        Err(invalid(vs))
    }
}

fn load_diagram(path: &PathBuf) -> Result<Diagram, Failure> {
    match load(path)? {
        Input::Diagram(d) => checked(d),
        _ => Err(Failure::new(
            "expected_diagram",
            "this command takes a single diagram",
        )),
    }
}

fn load_closed_checked(c: ClosedBase) -> Result<ClosedBase, Failure> {
    Ok(ClosedBase {
        half_a: checked(c.half_a)?,
        half_b: checked(c.half_b)?,
        ..c
    })
}

fn diagram_info(d: &Diagram) -> Result<Value, Failure> {
    let pts = d.polygon.lattice_points();
    let delzant = d.polygon.is_delzant()?;
    Ok(json!({
        "vertices": d.polygon.len(),
        "area": d.polygon.area(),
        "affine_perimeter": d.polygon.affine_perimeter(),
        "interior_points": pts.interior.len(),
        "boundary_points": pts.boundary.len(),
        "integral": d.polygon.is_integral(),
        "delzant": delzant.iter().all(|c| c.ok),
        "vertex_dets": delzant.iter().map(|c| c.det).collect::<Vec<_>>(),
        "nodes": d.nodes.len(),
        "total_multiplicity": d.total_multiplicity(),
        "fully_traded": d.is_fully_traded(),
    }))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate { input } => match load(&input)? {
            Input::Diagram(d) => checked(d).map(|_| Output::Json(json!({ "valid": true }))),
            Input::Closed(c) => {
                load_closed_checked(c).map(|_| Output::Json(json!({ "valid": true })))
            }
            Input::Semitoric(m) => {
                quantize_semitoric(
                    &m,
                    &Window {
                        x0: 0,
                        y0: 0,
                        x1: 0,
                        y1: 0,
                    },
                )?;
                Ok(Output::Json(json!({ "valid": true })))
            }
        },
        Command::Info { input } => match load(&input)? {
            Input::Diagram(d) => diagram_info(&checked(d)?).map(Output::Json),
            Input::Closed(c) => {
                let c = load_closed_checked(c)?;
                Ok(Output::Json(json!({
                    "kind": c.kind,
                    "gluing_note": c.gluing_note,
                    "total_multiplicity": c.total_multiplicity(),
                    "half_a": diagram_info(&c.half_a)?,
                    "half_b": diagram_info(&c.half_b)?,
                })))
            }
            Input::Semitoric(m) => Ok(Output::Json(json!({
                "name": m.name,
                "halfplanes": m.region.halfplanes.len(),
                "nodes": m.nodes.len(),
                "empty": m.region.is_empty(),
            }))),
        },
        Command::Quantize { input, window } => {
            let r: QuantReport = match load(&input)? {
                Input::Diagram(d) => report(&checked(d)?),
                Input::Closed(c) => report_closed(&load_closed_checked(c)?),
                Input::Semitoric(m) => {
                    let item = CatalogItem::Semitoric(m);
                    item.report(window.as_ref())?
                }
            };
            json_out(&r)
        }
        Command::Trade { input, trades } => {
            let mut d = load_diagram(&input)?;
            for t in trades {
                d = d.nodal_trade(t.vertex, &t.t, t.k)?;
            }
            json_out(&d)
        }
        Command::Slide { input, slides } => {
            let mut d = load_diagram(&input)?;
            for s in slides {
                d = d.nodal_slide(s.node, &s.t)?;
            }
            json_out(&d)
        }
        Command::Sum { a, b, incompatible } => {
            let (a, b) = (load_diagram(&a)?, load_diagram(&b)?);
            json_out(&symplectic_sum(&a, &b, !incompatible)?)
        }
        Command::Mv { nodes, compact, bs } => {
            let cov = FFCovering {
                n_nodes: nodes,
                compact,
                bs,
            };
            let map = mv::build_ff_covering_map(&cov)?;
            let kc = mv::kernel_cokernel(&map.map)?;
            let graded = mv::local_ff_quantization(&cov)?;
            Ok(Output::Json(json!({
                "covering": cov,
                "matrix": map.map.matrix.to_rows(),
                "vanishes": map.vanishes,
                "rank": kc.rank,
                "kernel_rank": kc.kernel_rank,
                "cokernel_rank": kc.cokernel_rank,
                "graded": graded,
            })))
        }
        Command::Kunneth(args) => {
            let g = match args.model {
                Some(n) => mv::prop_kunn_model(n)?,
                None => {
                    let a: GradedQuant = from_value(read_input(&args.factors[0])?)?;
                    let b: GradedQuant = from_value(read_input(&args.factors[1])?)?;
                    mv::kunneth(&a, &b)?
                }
            };
            json_out(&g)
        }
        Command::Catalog { command } => catalog_command(command),
        Command::Render { input } => match load(&input)? {
            Input::Diagram(d) => Ok(Output::Text(render::render_diagram(&checked(d)?))),
            Input::Closed(c) => Ok(Output::Text(render::render_closed(&load_closed_checked(
                c,
            )?))),
            Input::Semitoric(_) => Err(Failure::new(
                "render_unsupported",
                "semitoric models have no bounded polygon to draw",
            )),
        },
    }
}

fn catalog_command(command: CatalogCommand) -> Outcome {
    match command {
        CatalogCommand::List => json_out(&catalog::examples()),
        CatalogCommand::Build {
            name,
            params,
            format,
        } => {
            let params: BTreeMap<String, Rat> = params.into_iter().collect();
            let item = catalog::build(&name, &params)?;
            match (format, &item) {
                (Format::Json, _) => json_out(&item),
                (Format::Svg, CatalogItem::Diagram(d)) => {
                    Ok(Output::Text(render::render_diagram(d)))
                }
                (Format::Svg, CatalogItem::Closed(c)) => Ok(Output::Text(render::render_closed(c))),
                (Format::Svg, CatalogItem::Semitoric(_)) => Err(Failure::new(
                    "render_unsupported",
                    "semitoric models have no bounded polygon to draw",
                )),
            }
        }
        CatalogCommand::Sample {
            system,
            grid,
            radius,
            format,
        } => {
            let sample = match system {
                System::SpinSpin => catalog::sample_spin_spin(grid)?,
                System::SpinOscillator => catalog::sample_spin_oscillator(grid, radius)?,
            };
            match format {
                SampleFormat::Json => json_out(&sample),
                SampleFormat::Csv => Ok(Output::Text(sample.to_csv())),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let text = match out {
                Output::Json(v) => {
                    let mut s =
                        serde_json::to_string_pretty(&v).expect("JSON values always serialize");
                    s.push('\n');
                    s
                }
                Output::Text(s) => s,
            };
            let mut stdout = io::stdout().lock();
            // a closed pipe downstream is not our failure
            let _ = stdout.write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{}", f.to_json());
            ExitCode::from(1)
        }
    }
}
