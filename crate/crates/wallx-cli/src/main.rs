//! `wallx`: command-line front end for the wall-crossing toolkit.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain error.

mod cache;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};
use thiserror::Error;
use wallx_core::engine::{self, Flavor, Mode, PINNED_ORIENTATION};
use wallx_core::homalg::hom_ext;
use wallx_core::quiver::Quiver;
use wallx_core::series::{self, Series};
use wallx_core::toric::{self, presets, DivisorKind, Geometry};
use wallx_core::{crystal, io, rootlat, verify};

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] wallx_core::Error),
    #[error("{0}")]
    Precondition(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            _ => 2,
        }
    }
}

fn domain<E: Into<wallx_core::Error>>(e: E) -> CliError {
    CliError::Domain(e.into())
}

#[derive(Parser, Debug)]
#[command(name = "wallx", version, about = "Wall-crossing generating functions for small toric CY3 quivers")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Hard limit on the degree cap.
    #[arg(long, default_value_t = 12, global = true)]
    max_degree: u32,
    /// Ignore and do not write the crystal cache.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Debug, Default)]
struct GeomArgs {
    /// Named geometry: conifold, c3, 2-0, 2-1a, 2-1b, 2-1c, 3-1, 4-2.
    #[arg(long)]
    geom: Option<String>,
    /// Geometry JSON file: {"N0":..,"N1":..,"sigma":[{"x2":..,"y":..},..]}.
    #[arg(long)]
    geom_file: Option<PathBuf>,
    #[arg(long = "N0")]
    n0: Option<usize>,
    #[arg(long = "N1")]
    n1: Option<usize>,
    /// σ list as a JSON file, or inline JSON starting with '['.
    #[arg(long)]
    sigma: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Divisor matrix and its support function.
    Divisors {
        #[command(flatten)]
        geom: GeomArgs,
        /// E+, E-, F+, F-, Fplus_total, G+, G-, H, I.
        #[arg(long)]
        kind: String,
        /// Half-integer (E, G, H) or integer (F, I) index.
        #[arg(long, allow_hyphen_values = true)]
        index: Option<String>,
    },
    /// Arrows, relations and potential.
    Quiver {
        #[command(flatten)]
        geom: GeomArgs,
    },
    /// Positive real roots up to a height.
    Roots {
        #[command(flatten)]
        geom: GeomArgs,
        /// Number of vertices; taken from the geometry when one is given.
        #[arg(long = "N")]
        n: Option<usize>,
        #[arg(long)]
        max_height: i64,
    },
    /// Walls crossed by the ray ζ − c·δ.
    Path {
        #[command(flatten)]
        geom: GeomArgs,
        #[arg(long, allow_hyphen_values = true)]
        zeta: String,
    },
    /// Generating function at a stability parameter.
    Zfun {
        #[command(flatten)]
        geom: GeomArgs,
        #[arg(long, allow_hyphen_values = true)]
        zeta: String,
        #[arg(long)]
        degree: u32,
        /// relative_to_cyclic, relative_to_trivial, absolute_with_oracle, absolute_with_dtpt.
        #[arg(long, default_value = "relative_to_cyclic")]
        mode: String,
        /// euler or signed.
        #[arg(long, default_value = "euler")]
        flavor: String,
    },
    /// Closed PT product in sheaf variables.
    Zpt {
        #[command(flatten)]
        geom: GeomArgs,
        #[arg(long)]
        degree: u32,
    },
    /// Gopakumar–Vafa invariants.
    Gv {
        #[command(flatten)]
        geom: GeomArgs,
    },
    /// Molten-crystal count at the cyclic chamber.
    Crystal {
        #[command(flatten)]
        geom: GeomArgs,
        #[arg(long)]
        degree: u32,
        /// Use the subset-filtering enumerator.
        #[arg(long)]
        naive: bool,
    },
    /// Hom and Ext dimensions between two modules given as JSON files.
    Ext {
        #[command(flatten)]
        geom: GeomArgs,
        #[arg(long)]
        e: PathBuf,
        #[arg(long)]
        f: PathBuf,
    },
    /// Runs the acceptance checks.
    Selftest,
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn geometry(a: &GeomArgs) -> Result<Geometry, CliError> {
    let inline = a.n0.is_some() || a.n1.is_some() || a.sigma.is_some();
    let sources = usize::from(a.geom.is_some()) + usize::from(a.geom_file.is_some()) + usize::from(inline);
    if sources != 1 {
        return Err(CliError::Usage(
            "give exactly one geometry source: --geom, --geom-file, or --N0/--N1/--sigma".into(),
        ));
    }
    if let Some(name) = &a.geom {
        return presets::by_name(name).ok_or_else(|| {
            CliError::Usage(format!("unknown geometry {name:?}; known: {}", presets::NAMES.join(", ")))
        });
    }
    if let Some(p) = &a.geom_file {
        return io::parse_geometry_json(&read(p)?).map_err(domain);
    }
    let (Some(n0), Some(n1), Some(sigma)) = (a.n0, a.n1, &a.sigma) else {
        return Err(CliError::Usage("--N0, --N1 and --sigma must be given together".into()));
    };
    let text = if sigma.trim_start().starts_with('[') { sigma.clone() } else { read(&PathBuf::from(sigma))? };
    if n0.saturating_add(n1) > io::MAX_VERTICES {
        return Err(CliError::Precondition(format!("N0 + N1 exceeds {}", io::MAX_VERTICES)));
    }
    let cells = io::parse_sigma_json(&text).map_err(domain)?;
    Geometry::new(n0, n1, cells).map_err(domain)
}

fn has_geometry(a: &GeomArgs) -> bool {
    a.geom.is_some() || a.geom_file.is_some() || a.n0.is_some() || a.n1.is_some() || a.sigma.is_some()
}

fn check_degree(d: u32, limit: u32) -> Result<(), CliError> {
    if d > limit {
        return Err(CliError::Precondition(format!("degree {d} exceeds the limit {limit} (see --max-degree)")));
    }
    Ok(())
}

fn zeta(s: &str, g: &Geometry) -> Result<Vec<BigRational>, CliError> {
    let z = io::parse_zeta(s).map_err(domain)?;
    if z.len() != g.n() {
        return Err(CliError::Precondition(format!("zeta has {} entries, geometry has {} vertices", z.len(), g.n())));
    }
    Ok(z)
}

/// Crystal series, through the cache when enabled.
fn crystal_series(g: &Geometry, d: u32, naive: bool, use_cache: bool) -> Result<Series, CliError> {
    let dir = if use_cache { cache::dir() } else { None };
    let key = cache::key(g, d, naive);
    if let Some(s) = dir.as_ref().and_then(|dir| cache::load(dir, &key)) {
        return Ok(s);
    }
    let q = Quiver::from_geometry(g);
    let s = if naive { crystal::enumerate_molten_naive(&q, d).map_err(domain)? } else { crystal::enumerate_molten(&q, d) };
    if let Some(dir) = dir {
        cache::store(&dir, &key, &s);
    }
    Ok(s)
}

struct Output {
    value: Value,
    text: String,
}

fn with_provenance(g: &Geometry, mode: &str, dtpt: bool, result: Value) -> Value {
    json!({ "result": result, "provenance": engine::provenance(g, mode, dtpt) })
}

fn execute(cli: &Cli) -> Result<Output, CliError> {
    let use_cache = !cli.no_cache;
    match &cli.cmd {
        Command::Divisors { geom, kind, index } => {
            let g = geometry(geom)?;
            let k = DivisorKind::parse(kind, index.as_deref()).map_err(domain)?;
            let dv = toric::divisor(&g, k).map_err(domain)?;
            let s = toric::support_function(&g, &dv).map_err(domain)?;
            let result = json!({
                "kind": kind,
                "index": index,
                "divisor": io::divisor_to_json(&dv),
                "support_function": {
                    "forms": s.forms,
                    "globally_linear": toric::is_globally_linear(&g, &s),
                    "upper_convex": toric::is_upper_convex(&g, &s),
                },
            });
            Ok(Output { text: render::divisor(&dv, &s), value: with_provenance(&g, "divisors", false, result) })
        }
        Command::Quiver { geom } => {
            let g = geometry(geom)?;
            let q = Quiver::from_geometry(&g);
            let result = json!({
                "geometry": io::geometry_to_json(&g),
                "quiver": io::quiver_to_json(&q),
                "ir": g.ir(),
                "tau": g.tau(),
            });
            Ok(Output { text: render::quiver(&q), value: with_provenance(&g, "quiver", false, result) })
        }
        Command::Roots { geom, n, max_height } => {
            let g = if has_geometry(geom) { Some(geometry(geom)?) } else { None };
            let nv = match (n, &g) {
                (Some(n), Some(g)) if *n != g.n() => {
                    return Err(CliError::Usage(format!("--N {n} disagrees with the geometry (N = {})", g.n())))
                }
                (_, Some(g)) => g.n(),
                (Some(n), None) => *n,
                (None, None) => return Err(CliError::Usage("give --N or a geometry".into())),
            };
            if nv > io::MAX_VERTICES || *max_height > 64 {
                return Err(CliError::Precondition("N must be <= 64 and max height <= 64".into()));
            }
            let roots = rootlat::positive_real_roots(nv, *max_height);
            let rows: Vec<Value> = roots
                .iter()
                .map(|r| {
                    let mut v = json!({
                        "root": r.coords,
                        "height": r.height(),
                        "interval": [r.a, r.b],
                        "n": r.n,
                        "family": if r.family == rootlat::Family::Plus { "plus" } else { "minus" },
                    });
                    if let Some(g) = &g {
                        v["epsilon"] = json!(rootlat::epsilon(g.ir_mask(), &r.coords).unwrap_or(0));
                    }
                    v
                })
                .collect();
            let text = render::roots(&rows);
            let value = match &g {
                Some(g) => with_provenance(g, "roots", false, Value::Array(rows)),
                None => json!({ "result": rows }),
            };
            Ok(Output { value, text })
        }
        Command::Path { geom, zeta: zs } => {
            let g = geometry(geom)?;
            let z = zeta(zs, &g)?;
            let p = rootlat::chamber_path(&z).map_err(domain)?;
            let crossings: Vec<Value> = p
                .crossings
                .iter()
                .map(|c| json!({ "root": c.root.coords, "c": io::format_rational(&c.c), "k": c.k }))
                .collect();
            let result = json!({
                "side": if p.negative_side { "negative" } else { "positive" },
                "crossings": crossings,
                "k_sequence": p.k_sequence(),
            });
            Ok(Output { text: render::path(&p), value: with_provenance(&g, "path", false, result) })
        }
        Command::Zfun { geom, zeta: zs, degree, mode, flavor } => {
            let g = geometry(geom)?;
            check_degree(*degree, cli.max_degree)?;
            let z = zeta(zs, &g)?;
            let mode = Mode::parse(mode).ok_or_else(|| CliError::Usage(format!("unknown mode {mode:?}")))?;
            let flavor = Flavor::parse(flavor).ok_or_else(|| CliError::Usage(format!("unknown flavor {flavor:?}")))?;
            let eu = if mode == Mode::AbsoluteWithOracle {
                // Same as the engine's oracle mode, with the crystal count cached.
                let ratio = engine::z_eu(&g, &z, *degree, Mode::RelativeToCyclic).map_err(|e| match e {
                    engine::EngineError::ModeMismatch { .. } => domain(engine::EngineError::ModeMismatch {
                        mode: mode.name(),
                        need: "a negative parameter sum",
                    }),
                    e => domain(e),
                })?;
                let base = crystal_series(&g, *degree, false, use_cache)?;
                ratio.mul(&base).map_err(domain)?
            } else {
                engine::z_eu(&g, &z, *degree, mode).map_err(domain)?
            };
            let s = match flavor {
                Flavor::Euler => eu,
                Flavor::Signed => series::sign_substitute(&eu, g.ir_mask()).map_err(domain)?,
            };
            let result = json!({ "flavor": flavor.name(), "series": io::series_to_json(&s) });
            let dtpt = mode == Mode::AbsoluteWithDtpt;
            Ok(Output { text: render::series(&s), value: with_provenance(&g, mode.name(), dtpt, result) })
        }
        Command::Zpt { geom, degree } => {
            let g = geometry(geom)?;
            check_degree(*degree, cli.max_degree)?;
            let t = engine::z_pt_macmahon(g.ir_mask(), *degree);
            let result = json!({ "orientation": PINNED_ORIENTATION.name(), "terms": io::sheaf_to_json(&t) });
            Ok(Output { text: render::sheaf(&t), value: with_provenance(&g, "zpt", false, result) })
        }
        Command::Gv { geom } => {
            let g = geometry(geom)?;
            let gv = engine::gv_invariants(g.ir_mask());
            let rows: Vec<Value> =
                gv.iter().map(|((genus, a, b), n)| json!({ "genus": genus, "interval": [a, b], "n": n })).collect();
            Ok(Output { text: render::gv(&gv), value: with_provenance(&g, "gv", false, Value::Array(rows)) })
        }
        Command::Crystal { geom, degree, naive } => {
            let g = geometry(geom)?;
            check_degree(*degree, cli.max_degree)?;
            let s = crystal_series(&g, *degree, *naive, use_cache)?;
            let result = json!({ "series": io::series_to_json(&s) });
            Ok(Output { text: render::series(&s), value: with_provenance(&g, "crystal", false, result) })
        }
        Command::Ext { geom, e, f } => {
            let g = geometry(geom)?;
            let q = Quiver::from_geometry(&g);
            let re = io::parse_rep_json(&read(e)?, &q).map_err(domain)?;
            let rf = io::parse_rep_json(&read(f)?, &q).map_err(domain)?;
            let h = hom_ext(&q, &re, &rf).map_err(domain)?;
            let mut result = json!({ "hom": h.hom, "ext1": h.ext1 });
            if !re.framed {
                result["ext2"] = json!(h.ext2);
                result["ext3"] = json!(h.ext3);
            }
            let text = render::ext(&result);
            Ok(Output { text, value: with_provenance(&g, "ext", false, result) })
        }
        Command::Selftest => {
            let results = verify::run_all();
            let passed = results.iter().all(|r| r.passed);
            let rows: Vec<Value> = results
                .iter()
                .map(|r| json!({ "id": r.id, "passed": r.passed, "detail": r.detail, "millis": r.elapsed.as_millis() as u64 }))
                .collect();
            let text = results.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n");
            if !passed {
                let failed: Vec<&str> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
                eprintln!("{text}");
                return Err(CliError::Precondition(format!("failed criteria: {}", failed.join(", "))));
            }
            Ok(Output { value: json!({ "result": rows }), text })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.value).expect("values serialize")),
                Format::Text => println!("{}", out.text),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
