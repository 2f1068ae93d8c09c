mod geometry_file;
mod svg;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use okx_core::fixtures::{build_fixture, FixtureSpec};
use okx_core::loci::{
    augmented_base_locus, criterion_bminus, criterion_bplus, restricted_base_locus,
};
use okx_core::okounkov::{area, limiting_body};
use okx_core::seshadri::{lambda_lengths, moving_seshadri_bounds};
use okx_core::verify::{verify, Verdict};
use okx_core::zariski::zariski_decompose;
use okx_core::{Body, Divisor, Error, Model, Rational};
use serde_json::{json, Value};

use geometry_file::{parse_divisor, GeometryFile};
use svg::{format_point, vertex_list};

/// Exact Okounkov bodies, Zariski decompositions and base loci on surfaces.
#[derive(Debug, Parser)]
#[command(name = "okx", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Zariski decomposition D = P + N.
    Zariski {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[command(flatten)]
        divisor: DivisorArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Limiting Okounkov body of D for a flag.
    Body {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[command(flatten)]
        divisor: DivisorArg,
        /// Flag as CURVE:POINT; POINT may be `gen` for a general point of CURVE.
        #[arg(long)]
        flag: String,
        #[command(flatten)]
        output: OutputArgs,
        /// Also write an SVG plot of the body.
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
    /// Restricted and augmented base loci, with the body criteria per flag.
    Loci {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[command(flatten)]
        divisor: DivisorArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Bounds on the moving Seshadri constant at a named point.
    Seshadri {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[command(flatten)]
        divisor: DivisorArg,
        /// Named point.
        #[arg(short = 'x', value_name = "POINT")]
        point: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print the geometry as a JSON geometry file.
    Geometry {
        #[command(flatten)]
        geometry: GeometryArgs,
    },
    /// Seeded cross-check of every body criterion against its oracle.
    Verify {
        #[command(flatten)]
        geometry: GeometryArgs,
        /// Number of sampled classes.
        #[arg(short = 'n', default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report format; JSON unless stated otherwise.
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

#[derive(Debug, Args)]
struct GeometryArgs {
    /// Built-in surface: p2, blp2, f_e, fpp.
    #[arg(long, conflicts_with = "geometry_file")]
    fixture: Option<String>,
    /// Fixture parameter KEY=VALUE (m for p2, e for f_e, k for fpp).
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Geometry file in JSON.
    #[arg(short = 'g', value_name = "FILE")]
    geometry_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DivisorArg {
    /// Divisor class as comma-separated rationals, e.g. `1,-1/2`.
    #[arg(short = 'D', allow_hyphen_values = true, value_name = "C1,C2,...")]
    divisor: String,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

/// Failures sorted by exit code.
#[derive(Debug)]
enum Failure {
    Input(anyhow::Error),
    NotPseudoeffective,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<Error>() {
            Some(Error::NotPseudoeffective) => Failure::NotPseudoeffective,
            _ => Failure::Input(e),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

impl GeometryArgs {
    fn load(&self) -> Result<Model> {
        match (&self.fixture, &self.geometry_file) {
            (Some(name), None) => {
                let mut params = BTreeMap::new();
                for p in &self.params {
                    let (k, v) = p
                        .split_once('=')
                        .with_context(|| format!("parameter `{p}` is not KEY=VALUE"))?;
                    let v: i64 = v
                        .trim()
                        .parse()
                        .with_context(|| format!("parameter `{p}` needs an integer value"))?;
                    params.insert(k.trim().to_string(), v);
                }
                Ok(build_fixture(FixtureSpec::parse(name, &params)?)?)
            }
            (None, Some(path)) => {
                if !self.params.is_empty() {
                    bail!("--param applies only to fixtures");
                }
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("cannot read {}", path.display()))?;
                GeometryFile::from_json(&text)?.into_model()
            }
            _ => bail!("give exactly one of --fixture NAME or -g FILE"),
        }
    }
}

fn divisor(model: &Model, arg: &DivisorArg) -> Result<Divisor> {
    let d = parse_divisor(&arg.divisor)?;
    model.geometry.check_rank(&d)?;
    Ok(d)
}

fn flag_of(model: &Model, spec: &str) -> Result<okx_core::okounkov::Flag2D> {
    let (curve, point) = spec
        .split_once(':')
        .with_context(|| format!("flag `{spec}` is not CURVE:POINT"))?;
    Ok(model.flag(curve, point)?)
}

fn q(r: &Rational) -> Value {
    Value::String(r.to_string())
}

fn point_json(p: &[Rational]) -> Value {
    Value::Array(p.iter().map(q).collect())
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

fn cmd_zariski(model: &Model, d: &Divisor, format: Format) -> Result<String, Failure> {
    let g = &model.geometry;
    let zd = zariski_decompose(g, d)?;
    let negative: Vec<(String, Rational)> = zd
        .negative
        .iter()
        .map(|(i, a)| (g.label(*i).to_string(), a.clone()))
        .collect();
    Ok(match format {
        Format::Text => {
            let n: Vec<String> = negative.iter().map(|(c, a)| format!("{c}:{a}")).collect();
            format!("P = {}\nN = [{}]\n", zd.positive, n.join(", "))
        }
        Format::Json => pretty(&json!({
            "divisor": point_json(d.coeffs()),
            "positive": point_json(zd.positive.coeffs()),
            "negative": negative
                .iter()
                .map(|(c, a)| json!({ "curve": c, "coefficient": q(a) }))
                .collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut out = String::from("curve,coefficient\n");
            for (c, a) in &negative {
                let _ = writeln!(out, "{c},{a}");
            }
            out
        }
    })
}

fn body_json(body: &Body) -> Value {
    json!({
        "empty": body.is_empty(),
        "vertices": body.vertices().iter().map(|v| point_json(v)).collect::<Vec<_>>(),
        "lambda": point_json(&body.max_subsimplex().lengths),
        "area": q(&area(body)),
    })
}

fn cmd_body(
    model: &Model,
    d: &Divisor,
    flag: &str,
    format: Format,
    svg_path: Option<&PathBuf>,
) -> Result<String, Failure> {
    let flag = flag_of(model, flag)?;
    let body = limiting_body(&model.geometry, d, &flag)?;
    if let Some(path) = svg_path {
        let caption = format!("Okounkov body of D = {d}, flag {flag}");
        std::fs::write(path, svg::render(&body, &caption))
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(match format {
        Format::Text if body.is_empty() => "empty body\n".to_string(),
        Format::Text => {
            let l = body.max_subsimplex().lengths;
            format!(
                "vertices: {}\nlambda: ({}, {})\narea: {}\n",
                vertex_list(&body),
                l[0],
                l[1],
                area(&body)
            )
        }
        Format::Json => {
            let mut v = body_json(&body);
            v["flag"] = Value::String(flag.to_string());
            v["divisor"] = point_json(d.coeffs());
            pretty(&v)
        }
        Format::Csv => {
            let mut out = String::from("x1,x2\n");
            for v in body.vertices() {
                let _ = writeln!(out, "{},{}", v[0], v[1]);
            }
            out
        }
    })
}

struct LociRow {
    flag: String,
    bminus: bool,
    bplus: bool,
    bminus_ok: bool,
    bplus_ok: bool,
}

fn cmd_loci(model: &Model, d: &Divisor, format: Format) -> Result<(String, bool), Failure> {
    let g = &model.geometry;
    let bminus = restricted_base_locus(g, d)?;
    let bplus = augmented_base_locus(g, d)?;
    let mut rows = Vec::new();
    for flag in model.enumerate_flags() {
        let cm = criterion_bminus(g, d, &flag)?;
        let cp = criterion_bplus(g, d, &flag)?;
        rows.push(LociRow {
            flag: flag.to_string(),
            bminus: cm,
            bplus: cp,
            bminus_ok: cm == bminus.contains_point(&flag.point),
            bplus_ok: cp == bplus.contains_point(&flag.point),
        });
    }
    let consistent = rows.iter().all(|r| r.bminus_ok && r.bplus_ok);
    let status = |ok: bool| if ok { "PASS" } else { "FAIL" };
    let out = match format {
        Format::Text => {
            let mut out = format!("B- = {bminus}\nB+ = {bplus}\n");
            let width = rows.iter().map(|r| r.flag.len()).max().unwrap_or(4).max(4);
            let _ = writeln!(out, "{:<width$}  bminus  bplus  status", "flag");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{:<width$}  {:<6}  {:<5}  {}",
                    r.flag,
                    r.bminus,
                    r.bplus,
                    status(r.bminus_ok && r.bplus_ok)
                );
            }
            out
        }
        Format::Json => {
            let locus = |l: &okx_core::loci::BaseLocus| match l.curves() {
                Some(cs) => json!(cs),
                None => json!("X"),
            };
            pretty(&json!({
                "divisor": point_json(d.coeffs()),
                "bminus": locus(&bminus),
                "bplus": locus(&bplus),
                "flags": rows.iter().map(|r| json!({
                    "flag": r.flag,
                    "bminus_criterion": r.bminus,
                    "bplus_criterion": r.bplus,
                    "verdict": status(r.bminus_ok && r.bplus_ok),
                })).collect::<Vec<_>>(),
            }))
        }
        Format::Csv => {
            let mut out = String::from("flag,bminus_criterion,bplus_criterion,verdict\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    r.flag,
                    r.bminus,
                    r.bplus,
                    status(r.bminus_ok && r.bplus_ok)
                );
            }
            out
        }
    };
    Ok((out, consistent))
}

fn cmd_seshadri(
    model: &Model,
    d: &Divisor,
    point: &str,
    format: Format,
) -> Result<String, Failure> {
    let g = &model.geometry;
    let x = model.point(point)?;
    let b = moving_seshadri_bounds(g, d, x)?;
    let mut flags = Vec::new();
    for flag in model.flags_at(x) {
        let (l1, l2) = lambda_lengths(g, d, &flag)?;
        flags.push((flag.to_string(), l1, l2));
    }
    let oracle = b
        .oracle
        .as_ref()
        .map_or("n/a".to_string(), ToString::to_string);
    Ok(match format {
        Format::Text => {
            let mut out = format!(
                "lower = {}\nupper = {}\noracle = {oracle}\n",
                b.lower, b.upper
            );
            for (f, l1, l2) in &flags {
                let _ = writeln!(
                    out,
                    "{f}: lambda = {}",
                    format_point(&[l1.clone(), l2.clone()])
                );
            }
            out
        }
        Format::Json => pretty(&json!({
            "divisor": point_json(d.coeffs()),
            "point": point,
            "lower": q(&b.lower),
            "upper": q(&b.upper),
            "oracle": b.oracle.as_ref().map(q),
            "flags": flags.iter().map(|(f, l1, l2)| json!({
                "flag": f, "lambda": [q(l1), q(l2)],
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut out = String::from("flag,lambda1,lambda2\n");
            for (f, l1, l2) in &flags {
                let _ = writeln!(out, "{f},{l1},{l2}");
            }
            out
        }
    })
}

fn cmd_verify(
    model: &Model,
    samples: usize,
    seed: u64,
    format: Format,
) -> Result<(String, bool), Failure> {
    if samples == 0 {
        return Err(Failure::Input(anyhow::anyhow!("-n must be positive")));
    }
    let report = verify(model, samples, seed)?;
    let out = match format {
        Format::Json => serde_json::to_string_pretty(&report).expect("reports serialize") + "\n",
        Format::Text | Format::Csv => {
            let text = format == Format::Text;
            let mut out = if text {
                format!(
                    "{} seed={} samples={}\n",
                    report.geometry, report.seed, report.samples
                )
            } else {
                String::from("claim,checks,verdict,inputs,oracle,body\n")
            };
            for c in &report.claims {
                let verdict = if c.verdict == Verdict::Pass {
                    "PASS"
                } else {
                    "FAIL"
                };
                let ce = c.counterexample.as_ref();
                if text {
                    let _ = writeln!(out, "{verdict} {} ({} checks)", c.claim, c.checks);
                    if let Some(ce) = ce {
                        let _ = writeln!(
                            out,
                            "  inputs: {}\n  oracle: {}\n  body: {}",
                            ce.inputs, ce.oracle, ce.body
                        );
                    }
                } else {
                    let field = |s: Option<&String>| {
                        format!("\"{}\"", s.map_or("", |s| s).replace('"', "\"\""))
                    };
                    let _ = writeln!(
                        out,
                        "{},{},{verdict},{},{},{}",
                        c.claim,
                        c.checks,
                        field(ce.map(|c| &c.inputs)),
                        field(ce.map(|c| &c.oracle)),
                        field(ce.map(|c| &c.body)),
                    );
                }
            }
            out
        }
    };
    Ok((out, report.passed))
}

fn run(cli: Cli) -> Result<(String, bool), Failure> {
    match cli.command {
        Command::Zariski {
            geometry,
            divisor: arg,
            output,
        } => {
            let model = geometry.load()?;
            let d = divisor(&model, &arg)?;
            Ok((cmd_zariski(&model, &d, output.format)?, true))
        }
        Command::Body {
            geometry,
            divisor: arg,
            flag,
            output,
            svg,
        } => {
            let model = geometry.load()?;
            let d = divisor(&model, &arg)?;
            Ok((
                cmd_body(&model, &d, &flag, output.format, svg.as_ref())?,
                true,
            ))
        }
        Command::Loci {
            geometry,
            divisor: arg,
            output,
        } => {
            let model = geometry.load()?;
            let d = divisor(&model, &arg)?;
            cmd_loci(&model, &d, output.format)
        }
        Command::Seshadri {
            geometry,
            divisor: arg,
            point,
            output,
        } => {
            let model = geometry.load()?;
            let d = divisor(&model, &arg)?;
            Ok((cmd_seshadri(&model, &d, &point, output.format)?, true))
        }
        Command::Geometry { geometry } => {
            let model = geometry.load()?;
            Ok((GeometryFile::from_model(&model).to_json() + "\n", true))
        }
        Command::Verify {
            geometry,
            samples,
            seed,
            format,
        } => {
            let model = geometry.load()?;
            cmd_verify(&model, samples, seed, format.unwrap_or(Format::Json))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::NotPseudoeffective) => {
            eprintln!("error: {}", Error::NotPseudoeffective);
            ExitCode::from(3)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
