//! Batch command-line frontend: series, weights, resummations, diagnostics,
//! the bracket oracle, bivariate series, and the acceptance selftest.
//!
//! Output is byte-deterministic for a fixed request: rationals print
//! exactly, floats through one fixed formatter, JSON maps in fixed key
//! order. Timings go to stderr only. Exit codes: 0 ok, 2 usage (from the
//! argument parser), 3 invalid arguments, 4 computation error, 5 tolerance
//! or acceptance failure.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num::complex::Complex64;
use serde_json::{json, Value};

use crate::acceptance;
use crate::borel::{formal_borel_rational, gevrey_diagnose, resum, BorelEvaluator, ResumConfig};
use crate::chord::weight::{cv_weight, weight_character, WeightCache};
use crate::chord::ChordDiagram;
use crate::error::{Error, Result};
use crate::exact::rat::{parse_rat, rat_string, rat_to_f64};
use crate::knot::bracket::{kauffman_jones_oracle, PlanarDiagram};
use crate::knot::{jones_habiro, normalize_by_unknot, series_at_colour, KnotKind, KnotSpec};
use crate::lorentz::{g_expansion, lorentz_series, rep_to_color, ColourValue, RepLabel};
use crate::torus::TorusParams;

#[derive(Debug, Parser)]
#[command(name = "zjones", version, about = "coloured Jones series at complex spin: exact expansions and Borel resummation")]
pub struct Cli {
    /// key=value configuration file (flags override file entries)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact colour-s series of a built-in knot
    Series {
        #[arg(long)]
        knot: String,
        #[arg(long)]
        order: Option<i64>,
        /// divide out the quantum dimension
        #[arg(long)]
        normalized: bool,
    },
    /// Weight system of a chord diagram (casimir polynomial and character)
    Weight {
        /// whitespace-separated label word, e.g. "1 2 1 2"
        #[arg(long)]
        diagram: String,
    },
    /// Borel resummation of a torus-knot series at complex colour
    Resum {
        /// torus knot, e.g. "torus(2,3)"
        #[arg(long)]
        knot: String,
        /// colour value 2z+1 (real or complex, e.g. "0.5" or "1+0.5i")
        #[arg(long)]
        colour: String,
        /// evaluation point h (complex)
        #[arg(long)]
        h: String,
        /// Laplace direction angle in radians
        #[arg(long)]
        theta: Option<f64>,
        /// scan all branches of the direction domain
        #[arg(long)]
        scan: bool,
        #[arg(long)]
        tol: Option<f64>,
        /// contour truncation radius (default: from the tail bound)
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Coefficient diagnostics: exact values, Borel coefficients, root test
    Diagnose {
        #[arg(long)]
        knot: String,
        /// rational colour value 2z+1, e.g. "1/2"
        #[arg(long)]
        colour: String,
        #[arg(long)]
        order: Option<i64>,
    },
    /// Bivariate-colour series; with --rep, the representation-to-colour map
    Lorentz {
        #[arg(long)]
        knot: Option<String>,
        #[arg(long)]
        order: Option<i64>,
        /// representation label, e.g. "sl2r:discrete:m=-3"
        #[arg(long)]
        rep: Option<String>,
        /// verify the moment expansion against the product (torus knots)
        #[arg(long)]
        gcheck: bool,
    },
    /// Kauffman bracket oracle series at colour 2
    Oracle {
        /// PD code JSON: {"crossings":[[1,4,2,5],...],"writhe":w}
        #[arg(long)]
        pd: Option<String>,
        /// built-in diagram: unknot | trefoil | fig8
        #[arg(long)]
        builtin: Option<String>,
        #[arg(long)]
        order: Option<i64>,
    },
    /// Run the acceptance suite
    Selftest {
        /// comma-separated criterion ids, e.g. "A9" or "A1,A12"
        #[arg(long)]
        only: Option<String>,
    },
}

/// Effective configuration: defaults, overridden by file, overridden by flags.
#[derive(Debug, Clone)]
pub struct Config {
    pub order: i64,
    pub tol: f64,
    pub nodes: usize,
    pub precision: u32,
    pub threads: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config { order: 12, tol: 1e-8, nodes: 16, precision: 53, threads: 1 }
    }
}

impl Config {
    fn load(path: Option<&PathBuf>) -> Result<Config> {
        let mut cfg = Config::default();
        if let Ok(t) = std::env::var("ZJONES_THREADS") {
            cfg.threads = t.parse().map_err(|_| Error::Parse("bad ZJONES_THREADS".into()))?;
        }
        let Some(path) = path else { return Ok(cfg) };
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("config {}: {e}", path.display())))?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("config line {}: want key=value", lineno + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            match k {
                "order" => cfg.order = v.parse().map_err(|_| bad_cfg(k, v))?,
                "tol" => cfg.tol = v.parse().map_err(|_| bad_cfg(k, v))?,
                "nodes" => cfg.nodes = v.parse().map_err(|_| bad_cfg(k, v))?,
                "precision" => cfg.precision = v.parse().map_err(|_| bad_cfg(k, v))?,
                "threads" => cfg.threads = v.parse().map_err(|_| bad_cfg(k, v))?,
                _ => return Err(Error::Parse(format!("unknown config key '{k}'"))),
            }
        }
        Ok(cfg)
    }

    fn to_json(&self) -> Value {
        json!({
            "order": self.order,
            "tol": self.tol,
            "nodes": self.nodes,
            "precision": self.precision,
            "threads": self.threads,
        })
    }

    fn csv_header(&self) -> String {
        format!(
            "# order={} tol={} nodes={} precision={} threads={}\n",
            self.order, self.tol, self.nodes, self.precision, self.threads
        )
    }
}

fn bad_cfg(k: &str, v: &str) -> Error {
    Error::Parse(format!("config key '{k}': bad value '{v}'"))
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn json_f64(x: f64) -> Value {
    // fixed-precision decimal string keeps the byte stream independent of
    // serde's shortest-representation choices
    json!(fmt_f64(x))
}

fn json_complex(z: Complex64) -> Value {
    json!({ "re": json_f64(z.re), "im": json_f64(z.im) })
}

/// Parse "a", "ai", "a+bi", "a-bi" into a complex number.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let t: String = text.trim().replace(' ', "");
    if t.is_empty() {
        return Err(Error::Parse("empty complex literal".into()));
    }
    let bad = |t: &str| Error::Parse(format!("bad complex literal '{t}'"));
    if let Some(im) = t.strip_suffix('i') {
        // find the split between real and imaginary parts, if any
        let body = im;
        for (idx, ch) in body.char_indices().rev() {
            if (ch == '+' || ch == '-') && idx > 0 {
                let prev = body.as_bytes()[idx - 1] as char;
                if prev != 'e' && prev != 'E' {
                    let re: f64 = body[..idx].parse().map_err(|_| bad(&t))?;
                    let imtxt = &body[idx..];
                    let imval: f64 = if imtxt == "+" {
                        1.0
                    } else if imtxt == "-" {
                        -1.0
                    } else {
                        imtxt.parse().map_err(|_| bad(&t))?
                    };
                    return Ok(Complex64::new(re, imval));
                }
            }
        }
        let imval: f64 = if body.is_empty() {
            1.0
        } else if body == "-" {
            -1.0
        } else {
            body.parse().map_err(|_| bad(&t))?
        };
        return Ok(Complex64::new(0.0, imval));
    }
    Ok(Complex64::new(t.parse().map_err(|_| bad(&t))?, 0.0))
}

fn torus_params_of(knot: &str) -> Result<TorusParams> {
    let spec = KnotSpec::parse(knot)?;
    match spec.kind {
        KnotKind::Torus(m, p) => TorusParams::new(m, p),
        _ => Err(Error::BadKnot(format!("'{knot}' is not a torus knot"))),
    }
}

/// Execute a parsed command; returns the stdout payload.
pub fn run(cli: &Cli) -> Result<String> {
    let cfg = Config::load(cli.config.as_ref())?;
    let format = cli.format.unwrap_or(OutputFormat::Json);
    match &cli.command {
        Command::Series { knot, order, normalized } => {
            let spec = KnotSpec::parse(knot)?;
            let order = order.unwrap_or(cfg.order);
            let mut j = jones_habiro(spec, order)?;
            if *normalized {
                j = normalize_by_unknot(&j);
            }
            match format {
                OutputFormat::Json => Ok(pretty(&json!({
                    "command": "series",
                    "config": cfg.to_json(),
                    "knot": spec.to_string(),
                    "order": order,
                    "normalized": *normalized,
                    "series": j.series.to_json(),
                }))),
                OutputFormat::Csv => {
                    let mut s = cfg.csv_header();
                    s.push_str("n,coefficient\n");
                    for n in 0..=j.series.trunc() {
                        let _ = writeln!(s, "{n},\"{}\"", j.series.coeff(n));
                    }
                    Ok(s)
                }
            }
        }
        Command::Weight { diagram } => {
            let d = ChordDiagram::parse(diagram)?;
            let mut cache = WeightCache::new();
            let cas = cv_weight(&d, &mut cache);
            let ch = weight_character(&d, &mut cache);
            Ok(pretty(&json!({
                "command": "weight",
                "config": cfg.to_json(),
                "diagram": d.to_text(),
                "chords": d.chord_count(),
                "casimir_poly": cas.to_string(),
                "character": ch.to_string(),
            })))
        }
        Command::Resum { knot, colour, h, theta, scan, tol, radius } => {
            let tp = torus_params_of(knot)?;
            let s0 = parse_complex(colour)?;
            let hval = parse_complex(h)?;
            let rcfg = ResumConfig {
                theta: theta.unwrap_or(0.0),
                r: *radius,
                nodes: cfg.nodes,
                tol: tol.unwrap_or(cfg.tol),
                precision_bits: cfg.precision,
            };
            if *scan {
                let results = crate::borel::branch_scan(tp, s0, hval, &rcfg)?;
                let arr: Vec<Value> = results.iter().map(resum_json).collect();
                Ok(pretty(&json!({
                    "command": "resum",
                    "config": cfg.to_json(),
                    "knot": knot,
                    "colour": json_complex(s0),
                    "h": json_complex(hval),
                    "scan": arr,
                })))
            } else {
                let ev = BorelEvaluator::new(tp, s0);
                let r = resum(&ev, hval, &rcfg)?;
                Ok(pretty(&json!({
                    "command": "resum",
                    "config": cfg.to_json(),
                    "knot": knot,
                    "colour": json_complex(s0),
                    "h": json_complex(hval),
                    "resum": resum_json(&r),
                })))
            }
        }
        Command::Diagnose { knot, colour, order } => {
            let spec = KnotSpec::parse(knot)?;
            let s_value = parse_rat(colour)?;
            let order = order.unwrap_or(40.max(cfg.order));
            let j = jones_habiro(spec, order)?;
            let a = series_at_colour(&j.series, s_value.clone())?;
            let b = formal_borel_rational(&a);
            let af: Vec<Complex64> =
                a.iter().map(|r| Complex64::new(rat_to_f64(r), 0.0)).collect();
            let report = gevrey_diagnose(&af).ok();
            match format {
                OutputFormat::Csv => {
                    let mut s = cfg.csv_header();
                    s.push_str("n,coefficient,float,borel_coefficient,root_test\n");
                    for n in 0..a.len() {
                        let root = report
                            .as_ref()
                            .map(|r| r.root_test[n])
                            .filter(|v| v.is_finite())
                            .map(fmt_f64)
                            .unwrap_or_default();
                        let _ = writeln!(
                            s,
                            "{n},\"{}\",{},{},{root}",
                            rat_string(&a[n]),
                            fmt_f64(rat_to_f64(&a[n])),
                            fmt_f64(rat_to_f64(&b[n])),
                        );
                    }
                    Ok(s)
                }
                OutputFormat::Json => {
                    let rows: Vec<Value> = (0..a.len())
                        .map(|n| {
                            json!({
                                "n": n,
                                "coefficient": rat_string(&a[n]),
                                "float": json_f64(rat_to_f64(&a[n])),
                                "borel_coefficient": json_f64(rat_to_f64(&b[n])),
                                "root_test": report
                                    .as_ref()
                                    .map(|r| r.root_test[n])
                                    .filter(|v| v.is_finite())
                                    .map(json_f64)
                                    .unwrap_or(Value::Null),
                            })
                        })
                        .collect();
                    let diag = report.map(|r| {
                        json!({
                            "c_fit": json_f64(r.c_fit),
                            "radius_estimate": if r.radius_estimate.is_finite() {
                                json_f64(r.radius_estimate)
                            } else {
                                json!("infinite")
                            },
                            "superconvergent": r.superconvergent,
                        })
                    });
                    Ok(pretty(&json!({
                        "command": "diagnose",
                        "config": cfg.to_json(),
                        "knot": spec.to_string(),
                        "colour": rat_string(&s_value),
                        "order": order,
                        "rows": rows,
                        "gevrey": diag.unwrap_or(Value::Null),
                    })))
                }
            }
        }
        Command::Lorentz { knot, order, rep, gcheck } => {
            if let Some(rep_text) = rep {
                let label = RepLabel::parse(rep_text)?;
                let colour = rep_to_color(&label)?;
                let colour_json = match colour {
                    ColourValue::Single(c) => json!({ "colour": json_complex(c) }),
                    ColourValue::Pair(a, b) => {
                        json!({ "colour_z": json_complex(a), "colour_w": json_complex(b) })
                    }
                };
                return Ok(pretty(&json!({
                    "command": "lorentz",
                    "config": cfg.to_json(),
                    "rep": label.to_string(),
                    "colours": colour_json,
                })));
            }
            let knot = knot
                .as_ref()
                .ok_or_else(|| Error::Parse("lorentz needs --knot or --rep".into()))?;
            let spec = KnotSpec::parse(knot)?;
            let order = order.unwrap_or(cfg.order.min(10));
            let l = lorentz_series(spec, order)?;
            let gcheck_result = if *gcheck {
                let tp = torus_params_of(knot)?;
                let (_, fact) = g_expansion(tp, order)?;
                Some(fact == l.series.truncate(fact.trunc()))
            } else {
                None
            };
            Ok(pretty(&json!({
                "command": "lorentz",
                "config": cfg.to_json(),
                "knot": spec.to_string(),
                "order": order,
                "series": l.series.to_json(),
                "gcheck": gcheck_result.map(|ok| if ok { "pass" } else { "fail" }),
            })))
        }
        Command::Oracle { pd, builtin, order } => {
            let diagram = match (pd, builtin) {
                (Some(text), None) => PlanarDiagram::parse_json(text)?,
                (None, Some(name)) => match name.as_str() {
                    "unknot" => PlanarDiagram::unknot(),
                    "trefoil" => PlanarDiagram::trefoil(),
                    "fig8" | "figure-eight" => PlanarDiagram::figure_eight(),
                    other => return Err(Error::Parse(format!("unknown builtin '{other}'"))),
                },
                _ => return Err(Error::Parse("oracle needs exactly one of --pd/--builtin".into())),
            };
            let order = order.unwrap_or(cfg.order);
            let series = kauffman_jones_oracle(&diagram, order)?;
            Ok(pretty(&json!({
                "command": "oracle",
                "config": cfg.to_json(),
                "crossings": diagram.crossings,
                "writhe": diagram.writhe,
                "colour": "2",
                "series": series.to_json(),
            })))
        }
        Command::Selftest { only } => {
            let reports = acceptance::run_all(only.as_deref());
            if reports.is_empty() {
                return Err(Error::Parse(format!(
                    "--only {:?} selected no criteria",
                    only.as_deref().unwrap_or("")
                )));
            }
            for r in &reports {
                eprintln!("[timing] {} {} ms", r.id, r.wall_ms);
            }
            let text = acceptance::render_report(&reports);
            if reports.iter().any(|r| !r.passed) {
                return Err(Error::ToleranceNotMet { requested: 0.0, achieved: f64::NAN })
                    .map_err(|e| {
                        // attach the report so the caller still sees it
                        Error::Parse(format!("{text}\nacceptance failure ({e})"))
                    });
            }
            Ok(text)
        }
    }
}

fn resum_json(r: &crate::borel::ResumResult) -> Value {
    json!({
        "value": json_complex(r.value),
        "branch": r.branch_id,
        "err": json_f64(r.error_estimate),
        "theta": json_f64(r.theta),
        "R": json_f64(r.r_used),
        "tail_bound": json_f64(r.tail_bound),
        "panels": r.panels,
    })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

/// Entry point used by the binary: prints stdout payload, maps errors to
/// machine-readable JSON on stdout and the documented exit codes.
pub fn run_and_print(cli: &Cli) -> i32 {
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            0
        }
        Err(e) => {
            // selftest failures carry their report in the message
            let code = match (&cli.command, &e) {
                (Command::Selftest { .. }, _) => 5,
                _ => e.exit_code(),
            };
            print!("{}", pretty(&json!({ "error": e.to_string(), "code": code })));
            code
        }
    }
}
