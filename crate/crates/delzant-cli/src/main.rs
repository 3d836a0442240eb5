//! `delzant`: command-line front end for the Delzant polygon calculus.
//!
//! All commands are pure functions of their inputs and print deterministic,
//! byte-identical output for identical inputs. Exit codes: 0 success,
//! 1 invalid input, 2 undecidable comparison (retry with `--precision`),
//! 3 internal contract violation.

use std::io::Read;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use delzant_kit::census::{census, CensusParams};
use delzant_kit::classify::{
    candidate_sizes, classify, count_s2s2_actions, ClassifyOptions, ManifoldSpec,
};
use delzant_kit::decomposition::decompose;
use delzant_kit::error::Error;
use delzant_kit::homology::{intersection_form, Parity};
use delzant_kit::json as wire;
use delzant_kit::minkowski::{del_pezzo_exceptional_count, enumerate_classes, evaluate, BlowupForm};
use delzant_kit::polygon::canonical_form;
use delzant_kit::scalar::{parse_rational, Scalar, SymbolTable};
use delzant_kit::DelzantPolygon;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "delzant", version, about = "Exact calculus of Delzant polygons")]
struct Cli {
    /// Output rendering.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// Precision cap (bisection rounds) for certified comparisons.
    #[arg(long, global = true)]
    precision: Option<u32>,

    /// Worker threads for parallel enumeration (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a polygon file and echo it back.
    Validate { file: String },
    /// Canonical form of a polygon, with the congruence witness.
    Canon { file: String },
    /// Decide whether two polygons are AGL(2,Z)-congruent.
    Congruent { file1: String, file2: String },
    /// Edge table, perimeter, and area of a polygon.
    Invariants { file: String },
    /// Corner chopping at a vertex.
    Chop {
        file: String,
        /// Vertex index to chop.
        #[arg(long)]
        vertex: usize,
        /// Chop size, a rational like 1/2.
        #[arg(long)]
        size: String,
    },
    /// Blow down an edge of self-intersection -1.
    Blowdown {
        /// Polygon file; defaults to standard input.
        file: Option<String>,
        /// Edge index, or "new" for the edge recorded by a prior chop.
        #[arg(long)]
        edge: String,
    },
    /// Decompose into a standard root plus chopping steps.
    Decompose {
        file: String,
        /// Prefer a trapezoid root with odd k (possible for 5+ edges).
        #[arg(long = "odd-k")]
        odd_k: bool,
    },
    /// Reduced intersection form of the ambient manifold.
    Form { file: String },
    /// Enumerate lattice classes of prescribed self-intersection.
    Exceptional(ExceptionalArgs),
    /// Classify toric actions on a manifold.
    Classify(ClassifyArgs),
    /// Stream all canonical polygons on a rational parameter grid.
    Census {
        #[arg(long = "max-edges")]
        max_edges: usize,
        #[arg(long)]
        bound: String,
        #[arg(long)]
        step: String,
        /// Abort when more than this many polygons accumulate.
        #[arg(long = "max-results")]
        max_results: Option<usize>,
    },
}

#[derive(Debug, Args)]
struct ExceptionalArgs {
    /// Count exceptional classes on the k-fold blow-up lattice (1..8),
    /// ignoring all period data.
    #[arg(long = "del-pezzo")]
    del_pezzo: Option<u32>,
    /// Line period lambda (rational).
    #[arg(long)]
    lambda: Option<String>,
    /// Blow-up period; repeat for several blow-ups.
    #[arg(long = "delta")]
    deltas: Vec<String>,
    /// Form file with symbols: {"symbols": {...}, "lambda": .., "deltas": [..]}.
    #[arg(long)]
    spec: Option<String>,
    /// Required self-intersection.
    #[arg(long, default_value = "-1", allow_hyphen_values = true)]
    alpha: i64,
    /// Period window upper bound (rational).
    #[arg(long = "max-omega")]
    max_omega: Option<String>,
    /// Require this pairing with the first Chern class.
    #[arg(long)]
    c1: Option<i64>,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    /// Blow-up of the projective plane: the line period lambda (rational).
    #[arg(long)]
    cp2: Option<String>,
    /// Blow-up size for --cp2; repeat for several blow-ups.
    #[arg(long = "delta")]
    deltas: Vec<String>,
    /// Product of spheres with the two factor areas.
    #[arg(long, num_args = 2)]
    s2s2: Option<Vec<String>>,
    /// Manifold spec file (accepts symbolic scalars).
    #[arg(long)]
    spec: Option<String>,
    /// Keep only polygons whose intersection-form parity matches the
    /// manifold.
    #[arg(long = "parity-filter", default_value = "true", action = clap::ArgAction::Set)]
    parity_filter: bool,
    /// Override the candidate chopping sizes (comma-separated rationals).
    #[arg(long = "candidate-sizes")]
    candidate_sizes: Option<String>,
    /// Print the candidate size set instead of classifying.
    #[arg(long = "sizes-only")]
    sizes_only: bool,
    /// Count toric actions on the sphere product instead of listing them.
    #[arg(long = "count-only")]
    count_only: bool,
}

fn read_input(path: &str) -> Result<String, Error> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Parse(format!("stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))
    }
}

fn load_polygon(path: &str, precision: Option<u32>) -> Result<DelzantPolygon, Error> {
    wire::polygon_from_str(&read_input(path)?, precision)
}

fn rational_scalar(text: &str) -> Result<Scalar, Error> {
    Ok(Scalar::from_rational(parse_rational(text)?))
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string(v).expect("serialization cannot fail"));
}

fn scalar_cell(s: &Scalar) -> String {
    format!("{s}")
}

fn run(cli: Cli) -> Result<(), Error> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Parse(format!("--threads: {e}")))?;
    }
    let precision = cli.precision;
    match cli.command {
        Command::Validate { file } => {
            let p = load_polygon(&file, precision)?;
            println!("{}", serde_json::to_string(&wire::polygon_to_dto(&p)).unwrap());
        }
        Command::Canon { file } => {
            let p = load_polygon(&file, precision)?;
            let c = canonical_form(&p)?;
            let mut dto = serde_json::to_value(wire::polygon_to_dto(&c.polygon)).unwrap();
            dto["witness"] = serde_json::to_value(wire::map_to_dto(&c.witness)).unwrap();
            print_json(&dto);
        }
        Command::Congruent { file1, file2 } => {
            let p = load_polygon(&file1, precision)?;
            let q = load_polygon(&file2, precision)?;
            let same = delzant_kit::polygon::congruent(&p, &q)?;
            match cli.format {
                Format::Json => print_json(&json!({ "congruent": same })),
                Format::Table => println!("{}", if same { "congruent" } else { "not congruent" }),
            }
        }
        Command::Invariants { file } => {
            let p = load_polygon(&file, precision)?;
            match cli.format {
                Format::Json => {
                    println!("{}", serde_json::to_string(&wire::invariants_to_dto(&p)).unwrap())
                }
                Format::Table => {
                    println!("edges      {}", p.edge_count());
                    println!("perimeter  {}", scalar_cell(&p.perimeter()));
                    println!("area       {}", scalar_cell(&p.area()));
                    println!("edge  direction  normal  length  self-intersection");
                    for e in p.edges() {
                        println!(
                            "{:<5} ({},{})      ({},{})   {:<7} {}",
                            e.index,
                            e.primitive_direction.x,
                            e.primitive_direction.y,
                            e.outward_normal.x,
                            e.outward_normal.y,
                            scalar_cell(&e.rational_length),
                            e.self_intersection
                        );
                    }
                }
            }
        }
        Command::Chop { file, vertex, size } => {
            let p = load_polygon(&file, precision)?;
            let delta = rational_scalar(&size)?;
            let step = p.chop(vertex, &delta)?;
            let mut dto = wire::polygon_to_dto(&step.after);
            dto.new_edge = Some(step.new_edge);
            println!("{}", serde_json::to_string(&dto).unwrap());
        }
        Command::Blowdown { file, edge } => {
            let text = read_input(file.as_deref().unwrap_or("-"))?;
            let dto: wire::PolygonDto = serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("polygon JSON: {e}")))?;
            let p = wire::polygon_from_dto(&dto, precision)?;
            let edge_index = if edge == "new" {
                dto.new_edge.ok_or_else(|| {
                    Error::Parse("--edge new needs a `new_edge` field in the input".into())
                })?
            } else {
                edge.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad edge `{edge}`")))?
            };
            let (down, delta, vertex) = p.blow_down(edge_index)?;
            let mut out = serde_json::to_value(wire::polygon_to_dto(&down)).unwrap();
            out["delta"] = wire::scalar_to_value(&delta);
            out["vertex"] = json!(vertex);
            print_json(&out);
        }
        Command::Decompose { file, odd_k } => {
            let p = load_polygon(&file, precision)?;
            let d = decompose(&p, odd_k)?;
            let mut out = serde_json::to_value(wire::decomposition_to_dto(&d)).unwrap();
            out["type"] = json!(delzant_kit::decomposition::symplectomorphism_type(&d.root));
            print_json(&out);
        }
        Command::Form { file } => {
            let p = load_polygon(&file, precision)?;
            let f = intersection_form(&p)?;
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string(&wire::form_to_dto(&f)).unwrap()),
                Format::Table => {
                    println!("rank       {}", f.rank);
                    println!("parity     {}", f.parity);
                    println!("signature  ({}, {})", f.signature.0, f.signature.1);
                    for row in &f.gram {
                        println!(
                            "  [{}]",
                            row.iter()
                                .map(|v| v.to_string())
                                .collect::<Vec<_>>()
                                .join(", ")
                        );
                    }
                }
            }
        }
        Command::Exceptional(args) => {
            if let Some(k) = args.del_pezzo {
                let count = del_pezzo_exceptional_count(k)?;
                match cli.format {
                    Format::Json => print_json(&json!({ "k": k, "count": count })),
                    Format::Table => println!("k={k}: {count} exceptional classes"),
                }
                return Ok(());
            }
            let (table, lambda, deltas) = if let Some(path) = &args.spec {
                let text = read_input(path)?;
                let v: Value = serde_json::from_str(&text)
                    .map_err(|e| Error::Parse(format!("spec JSON: {e}")))?;
                let symbols = parse_symbols(&v, precision)?;
                let lambda = wire::scalar_from_value(
                    v.get("lambda")
                        .ok_or_else(|| Error::Parse("spec needs `lambda`".into()))?,
                )?;
                let deltas = parse_scalar_array(v.get("deltas"))?;
                (Arc::new(symbols), lambda, deltas)
            } else {
                let lambda = args
                    .lambda
                    .as_deref()
                    .ok_or_else(|| Error::Parse("need --lambda or --spec".into()))?;
                let deltas = args
                    .deltas
                    .iter()
                    .map(|d| rational_scalar(d))
                    .collect::<Result<Vec<_>, _>>()?;
                (table_with_precision(precision), rational_scalar(lambda)?, deltas)
            };
            let window = match &args.max_omega {
                Some(text) => rational_scalar(text)?,
                None => return Err(Error::Parse("need --max-omega (or --del-pezzo)".into())),
            };
            let form = BlowupForm::new(table, lambda, deltas)?;
            let classes = enumerate_classes(&form, args.alpha, &window, args.c1)?;
            let mut rows = Vec::new();
            for c in &classes {
                let (_, period, _) = evaluate(&form, c)?;
                rows.push(wire::minkowski_class_to_dto(c, &period));
            }
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string(&rows).unwrap()),
                Format::Table => {
                    println!("d     m                 period        c1");
                    for r in rows {
                        println!(
                            "{:<5} {:<17} {:<13} {}",
                            r.d,
                            format!("{:?}", r.m),
                            r.period.as_str().unwrap_or("?"),
                            r.c1
                        );
                    }
                }
            }
        }
        Command::Classify(args) => run_classify(args, cli.format, precision)?,
        Command::Census {
            max_edges,
            bound,
            step,
            max_results,
        } => {
            let polys = census(&CensusParams {
                max_edges,
                bound: parse_rational(&bound)?,
                step: parse_rational(&step)?,
                max_results,
            })?;
            for p in &polys {
                match cli.format {
                    Format::Json => {
                        println!("{}", serde_json::to_string(&wire::polygon_to_dto(p)).unwrap())
                    }
                    Format::Table => {
                        println!(
                            "{} edges  perimeter {}  area {}",
                            p.edge_count(),
                            scalar_cell(&p.perimeter()),
                            scalar_cell(&p.area())
                        );
                    }
                }
            }
        }
    }
    Ok(())
}

fn table_with_precision(precision: Option<u32>) -> Arc<SymbolTable> {
    let mut t = SymbolTable::new();
    if let Some(cap) = precision {
        t = t.with_precision_cap(cap);
    }
    Arc::new(t)
}

fn parse_symbols(v: &Value, precision: Option<u32>) -> Result<SymbolTable, Error> {
    match v.get("symbols") {
        None => Ok(match precision {
            Some(cap) => SymbolTable::new().with_precision_cap(cap),
            None => SymbolTable::new(),
        }),
        Some(s) => {
            let dto: std::collections::BTreeMap<String, wire::SymbolDto> =
                serde_json::from_value(s.clone())
                    .map_err(|e| Error::Parse(format!("symbols: {e}")))?;
            wire::symbols_from_dto(&dto, precision)
        }
    }
}

fn parse_scalar_array(v: Option<&Value>) -> Result<Vec<Scalar>, Error> {
    match v {
        None => Ok(Vec::new()),
        Some(Value::Array(items)) => items.iter().map(wire::scalar_from_value).collect(),
        Some(other) => Err(Error::Parse(format!("expected an array, got {other}"))),
    }
}

fn run_classify(args: ClassifyArgs, format: Format, precision: Option<u32>) -> Result<(), Error> {
    let (table, spec) = if let Some(path) = &args.spec {
        let text = read_input(path)?;
        let v: Value =
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("spec JSON: {e}")))?;
        let table = Arc::new(parse_symbols(&v, precision)?);
        let spec = if let Some(c) = v.get("cp2_blowups") {
            ManifoldSpec::CP2Blowups {
                lambda: wire::scalar_from_value(
                    c.get("lambda")
                        .ok_or_else(|| Error::Parse("cp2_blowups needs `lambda`".into()))?,
                )?,
                deltas: parse_scalar_array(c.get("deltas"))?,
            }
        } else if let Some(c) = v.get("s2s2") {
            ManifoldSpec::S2xS2 {
                a: wire::scalar_from_value(
                    c.get("a").ok_or_else(|| Error::Parse("s2s2 needs `a`".into()))?,
                )?,
                b: wire::scalar_from_value(
                    c.get("b").ok_or_else(|| Error::Parse("s2s2 needs `b`".into()))?,
                )?,
            }
        } else if let Some(c) = v.get("raw") {
            let parity = match c.get("parity").and_then(|p| p.as_str()) {
                Some("even") => Some(Parity::Even),
                Some("odd") => Some(Parity::Odd),
                Some(other) => return Err(Error::Parse(format!("bad parity `{other}`"))),
                None => None,
            };
            ManifoldSpec::RawInvariants {
                perimeter: wire::scalar_from_value(
                    c.get("perimeter")
                        .ok_or_else(|| Error::Parse("raw needs `perimeter`".into()))?,
                )?,
                area: wire::scalar_from_value(
                    c.get("area").ok_or_else(|| Error::Parse("raw needs `area`".into()))?,
                )?,
                b2: c
                    .get("b2")
                    .and_then(|b| b.as_u64())
                    .ok_or_else(|| Error::Parse("raw needs integer `b2`".into()))?
                    as u32,
                candidate_sizes: parse_scalar_array(c.get("candidate_sizes"))?,
                parity,
            }
        } else {
            return Err(Error::Parse(
                "spec needs one of `cp2_blowups`, `s2s2`, `raw`".into(),
            ));
        };
        (table, spec)
    } else if let Some(lambda) = &args.cp2 {
        let deltas = args
            .deltas
            .iter()
            .map(|d| rational_scalar(d))
            .collect::<Result<Vec<_>, _>>()?;
        (
            table_with_precision(precision),
            ManifoldSpec::CP2Blowups {
                lambda: rational_scalar(lambda)?,
                deltas,
            },
        )
    } else if let Some(ab) = &args.s2s2 {
        (
            table_with_precision(precision),
            ManifoldSpec::S2xS2 {
                a: rational_scalar(&ab[0])?,
                b: rational_scalar(&ab[1])?,
            },
        )
    } else {
        return Err(Error::Parse("need --cp2, --s2s2, or --spec".into()));
    };

    if args.count_only {
        if let ManifoldSpec::S2xS2 { a, b } = &spec {
            let count = count_s2s2_actions(&table, a, b)?;
            match format {
                Format::Json => print_json(&json!({ "count": count })),
                Format::Table => println!("{count} toric actions"),
            }
            return Ok(());
        }
        return Err(Error::Parse("--count-only applies to --s2s2".into()));
    }
    if args.sizes_only {
        let sizes = candidate_sizes(&spec, &table)?;
        let vals: Vec<Value> = sizes.iter().map(wire::scalar_to_value).collect();
        print_json(&serde_json::to_value(vals).unwrap());
        return Ok(());
    }

    let options = ClassifyOptions {
        parity_filter: args.parity_filter,
        candidate_sizes_override: match &args.candidate_sizes {
            None => None,
            Some(text) => Some(
                text.split(',')
                    .map(|t| rational_scalar(t.trim()))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        },
    };
    let result = classify(&spec, &table, &options)?;
    match format {
        Format::Json => {
            let classes: Vec<Value> = result
                .classes
                .iter()
                .map(|c| {
                    json!({
                        "polygon": serde_json::to_value(wire::polygon_to_dto(&c.polygon)).unwrap(),
                        "decomposition": serde_json::to_value(
                            wire::decomposition_to_dto(&c.decomposition)
                        ).unwrap(),
                        "type": c.label,
                    })
                })
                .collect();
            print_json(&json!({
                "exactness": match result.exactness {
                    delzant_kit::classify::Exactness::Exact => "exact",
                    delzant_kit::classify::Exactness::CandidateSuperset => "candidate_superset",
                },
                "classes": classes,
            }));
        }
        Format::Table => {
            println!(
                "{} class(es), {}",
                result.classes.len(),
                match result.exactness {
                    delzant_kit::classify::Exactness::Exact => "exact",
                    delzant_kit::classify::Exactness::CandidateSuperset => "candidate superset",
                }
            );
            for c in &result.classes {
                println!(
                    "  {}  edges {}  perimeter {}  area {}",
                    c.label,
                    c.polygon.edge_count(),
                    scalar_cell(&c.polygon.perimeter()),
                    scalar_cell(&c.polygon.area())
                );
            }
        }
    }
    Ok(())
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Undecidable { .. } => 2,
        Error::Internal(_) | Error::ReductionFailure(_) | Error::NoBlowDownableEdge => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
