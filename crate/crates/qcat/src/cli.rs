//! The `qc` command line.
//!
//! Exit codes: 0 success, 1 refuted or invalid, 2 unsupported enumeration,
//! 3 malformed input.

use crate::anodyne::{generate, verify, AnodyneCertificate};
use crate::corpus::{self, Recipe};
use crate::equivalence::{dk_check, model_agreement};
use crate::error::{QcError, Result};
use crate::homology::{homology, pi0};
use crate::homotopy::iso_classes;
use crate::horn::{
    is_inner_fibrant_up_to, j_subcomplex, kan_failure_up_to, quasi_iso, verify_quasi_category, Ambient, Fibrancy,
    QuasiIsoMode,
};
use crate::mapping::{hom_model, necklace_model, rel_map_space, relative_pullback_check, Model, SquareConfig};
use crate::sset::{enumerate_maps, from_json, map_from_json, to_json, Constraints, Idx, SSet, Subcomplex};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "qc", version, about = "Finite quasi-category combinatorics")]
pub struct Cli {
    /// Truncation of the E direction (default: max-dim + 2).
    #[arg(long, global = true)]
    pub trunc: Option<usize>,
    /// Highest level of computed mapping spaces and homology.
    #[arg(long, global = true)]
    pub max_dim: Option<usize>,
    /// Write the main artifact (a simplicial set, category or certificate) here.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a simplicial set from a recipe (inline JSON, a file, or a corpus name).
    Build { recipe: String },
    /// Search for an unfillable inner horn (any horn with --kan).
    CheckFibrant {
        sset: String,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long)]
        kan: bool,
    },
    /// Decide which edges are quasi-isomorphisms.
    QuasiIso {
        sset: String,
        #[arg(long)]
        edge: Option<String>,
        #[arg(long, default_value = "providers")]
        mode: String,
    },
    /// The maximal Kan subcomplex of a quasi-category.
    J { sset: String },
    /// The homotopy category.
    HoCat { sset: String },
    /// A model of the mapping space between two vertices.
    Hom {
        sset: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value = "R")]
        model: String,
    },
    /// A relative mapping space into a coskeletal target, or the strict
    /// pullback check on the square with --square g0,g1.
    Relmap {
        target: String,
        #[arg(long)]
        base: Option<String>,
        /// JSON `{"sub": [ids], "assign": {id: id}}` on the base.
        #[arg(long)]
        boundary: Option<String>,
        #[arg(long)]
        square: Option<String>,
    },
    /// The necklace model of the mapping space.
    Necklace {
        sset: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 3)]
        max_vertices: usize,
    },
    /// Integral homology.
    Homology { sset: String },
    /// Anodyne certificates.
    #[command(subcommand)]
    Cert(CertCommand),
    /// Evidence for or against a DK-equivalence.
    DkCheck { map: String },
    /// Compare all mapping-space models between two vertices.
    Compare {
        sset: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 3)]
        max_vertices: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum CertCommand {
    /// Generate certificates for a family: spine-simplex N, spine N, squash N K,
    /// cyl-squash N, box-inner N K R, box-special R D.
    Gen { family: String, params: Vec<usize> },
    /// Replay certificates from a file, or `-` for stdin.
    Verify { file: String },
}

struct Outcome {
    summary: Value,
    artifact: Option<Value>,
    /// Print the artifact on stdout when no --out is given.
    artifact_to_stdout: bool,
    code: i32,
}

impl Outcome {
    fn ok(summary: Value) -> Outcome {
        Outcome { summary, artifact: None, artifact_to_stdout: false, code: 0 }
    }

    fn with(mut self, artifact: Value) -> Outcome {
        self.artifact = Some(artifact);
        self
    }

    fn code(mut self, code: i32) -> Outcome {
        self.code = code;
        self
    }
}

fn read_text(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| QcError::Io(format!("{path}: {e}")))
    }
}

fn read_json(path: &str) -> Result<Value> {
    serde_json::from_str(&read_text(path)?).map_err(|e| QcError::Malformed(format!("{path}: {e}")))
}

fn load_sset(path: &str) -> Result<Arc<SSet>> {
    let v = read_json(path)?;
    from_json(&v).map(Arc::new).map_err(|e| match e {
        QcError::Malformed(m) => QcError::Malformed(format!("{path}: {m}")),
        other => other,
    })
}

fn base_dir(path: &str) -> Option<PathBuf> {
    (path != "-").then(|| Path::new(path).parent().map(Path::to_path_buf).unwrap_or_default())
}

fn groups(x: &SSet, m: usize) -> Result<Value> {
    let h = homology(x, m)?;
    Ok(json!({
        "groups": h.groups.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        "truncated": h.truncated,
    }))
}

fn space_summary(x: &SSet, m: usize) -> Result<Value> {
    Ok(json!({
        "level_sizes": x.level_sizes(),
        "pi0": pi0(x).len(),
        "homology": groups(x, m.saturating_sub(1))?,
    }))
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Some(a), Value::Object(b)) = (a.as_object_mut(), b) {
        a.extend(b);
    }
    a
}

fn build_recipe(arg: &str) -> Result<SSet> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') {
        let v: Value = serde_json::from_str(trimmed)?;
        return Recipe::from_json(&v)?.build(None);
    }
    if let Some(e) = corpus::entries().into_iter().find(|e| e.name == arg) {
        return e.recipe.build(None);
    }
    let v = read_json(arg)?;
    Recipe::from_json(&v)?.build(base_dir(arg).as_deref())
}

fn boundary_map(base: &Arc<SSet>, x: &Arc<SSet>, data: &Value) -> Result<(Subcomplex, Vec<Vec<Idx>>)> {
    let bad = |s: &str| QcError::Malformed(format!("boundary: {s}"));
    let sub: Vec<&str> = data
        .get("sub")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing sub"))?
        .iter()
        .map(|v| v.as_str().ok_or_else(|| bad("ids are strings")))
        .collect::<Result<_>>()?;
    let a = Subcomplex::from_ids(base, &sub)?;
    let (aset, incl) = a.to_sset(base)?;
    let mut c = Constraints::new();
    if let Some(assign) = data.get("assign").and_then(Value::as_object) {
        for (k, v) in assign {
            c = c.fix_ids(&aset, x, k, v.as_str().ok_or_else(|| bad("values are ids"))?)?;
        }
    }
    let maps = enumerate_maps(&aset, x, &c)?;
    if maps.len() != 1 {
        return Err(QcError::InvalidParameter(format!(
            "the assignment determines {} maps on the subcomplex, expected one",
            maps.len()
        )));
    }
    let f = &maps[0];
    let mut values: Vec<Vec<Idx>> = (0..=base.trunc_dim()).map(|q| vec![Idx::MAX; base.len(q)]).collect();
    for q in 0..=f.top().min(incl.top()) {
        for y in 0..aset.len(q) as Idx {
            values[q][incl.apply(q, y) as usize] = f.apply(q, y);
        }
    }
    Ok((a, values))
}

fn run_command(cli: &Cli) -> Result<Outcome> {
    let m = cli.max_dim.unwrap_or(4);
    let d = cli.trunc.unwrap_or(m + 2);
    Ok(match &cli.command {
        Command::Build { recipe } => {
            let x = build_recipe(recipe)?;
            x.audit()?;
            Outcome {
                summary: json!({ "level_sizes": x.level_sizes(), "nondegenerate": x.nondegenerate_counts(), "stable": x.is_stable() }),
                artifact: Some(to_json(&x)),
                artifact_to_stdout: true,
                code: 0,
            }
        }
        Command::CheckFibrant { sset, dim, kan } => {
            let x = load_sset(sset)?;
            let failure = if *kan {
                kan_failure_up_to(&x, *dim)?
            } else {
                match is_inner_fibrant_up_to(&x, *dim)? {
                    Fibrancy::Verified(_) => None,
                    Fibrancy::Failure(h) => Some(h),
                }
            };
            let kind = if *kan { "kan" } else { "inner" };
            match failure {
                None => Outcome::ok(json!({ "verdict": "verified", "horns": kind, "dim": dim })),
                Some(h) => Outcome::ok(json!({ "verdict": "failure", "horns": kind, "horn": h.to_json() })).code(1),
            }
        }
        Command::QuasiIso { sset, edge, mode } => {
            let x = load_sset(sset)?;
            let mode: QuasiIsoMode = mode.parse()?;
            let q = verify_quasi_category(&x, 3).ok();
            let amb = q.as_ref().map_or(Ambient::Plain(&x), Ambient::Verified);
            let edges: Vec<Idx> = match edge {
                Some(e) => vec![x.find_at(1, e)?],
                None => (0..x.len(1) as Idx).collect(),
            };
            let mut out = serde_json::Map::new();
            for e in edges {
                out.insert(x.id(1, e).to_string(), json!(quasi_iso(amb, e, mode)?.label()));
            }
            Outcome::ok(json!({ "verified_quasi_category": q.is_some(), "edges": out }))
        }
        Command::J { sset } => {
            let x = load_sset(sset)?;
            let q = verify_quasi_category(&x, 3)?;
            let (j, _) = j_subcomplex(&q)?;
            let kan = kan_failure_up_to(&j, 3.min(j.trunc_dim()))?;
            Outcome::ok(json!({
                "level_sizes": j.level_sizes(),
                "kan_up_to_3": kan.is_none(),
            }))
            .with(to_json(&j))
        }
        Command::HoCat { sset } => {
            let x = load_sset(sset)?;
            let q = verify_quasi_category(&x, 3)?;
            let h = q.ho()?;
            Outcome::ok(json!({
                "objects": h.base.num_objects(),
                "morphisms": h.base.num_morphisms(),
                "iso_classes": iso_classes(h).len(),
            }))
            .with(h.base.to_json())
        }
        Command::Hom { sset, a, b, model } => {
            let x = load_sset(sset)?;
            let kind: Model = model.parse()?;
            let h = hom_model(kind, &x, a, b, m, d)?;
            let s = merge(json!({ "model": kind, "a": a, "b": b, "max_dim": m }), space_summary(h.set(), m)?);
            Outcome::ok(s).with(to_json(h.set()))
        }
        Command::Relmap { target, base, boundary, square } => {
            let x = load_sset(target)?;
            if let Some(sq) = square {
                let Some((g0, g1)) = sq.split_once(',') else {
                    return Err(QcError::Malformed(format!("--square expects two edge ids, got {sq:?}")));
                };
                let g0 = x.find_at(1, g0.trim())?;
                let g1 = x.find_at(1, g1.trim())?;
                let cfg = SquareConfig::new(&x, g0, g1, d.max(2))?;
                let rep = relative_pullback_check(&cfg.base, &cfg.a, &cfg.s, &cfg.t, &x, &|q, y| cfg.f(q, y), m, d)?;
                let code = if rep.holds { 0 } else { 1 };
                return Ok(Outcome::ok(serde_json::to_value(&rep)?).code(code));
            }
            let (Some(base), Some(boundary)) = (base, boundary) else {
                return Err(QcError::InvalidParameter("relmap needs --base and --boundary, or --square".into()));
            };
            let b = load_sset(base)?;
            let (a, values) = boundary_map(&b, &x, &read_json(boundary)?)?;
            let rel = rel_map_space(&b, &a, &x, &|q, y| values[q][y as usize], m, d)?;
            let s = merge(json!({ "max_dim": m, "trunc": rel.trunc }), space_summary(rel.set(), m)?);
            Outcome::ok(s).with(to_json(rel.set()))
        }
        Command::Necklace { sset, a, b, max_vertices } => {
            let x = load_sset(sset)?;
            let nm = necklace_model(&x, a, b, *max_vertices, m)?;
            let s = merge(
                json!({ "a": a, "b": b, "max_vertices": max_vertices, "max_dim": m, "objects": nm.category.num_objects() }),
                space_summary(&nm.set, m)?,
            );
            Outcome::ok(s).with(to_json(&nm.set))
        }
        Command::Homology { sset } => {
            let x = load_sset(sset)?;
            Outcome::ok(merge(json!({ "max_dim": m }), groups(&x, m)?))
        }
        Command::Cert(CertCommand::Gen { family, params }) => {
            let certs = generate(family, params)?;
            let art = if certs.len() == 1 {
                certs[0].to_json()
            } else {
                Value::Array(certs.iter().map(AnodyneCertificate::to_json).collect())
            };
            let steps: Vec<usize> = certs.iter().map(|c| c.steps.len()).collect();
            Outcome { summary: json!({ "family": family, "certificates": certs.len(), "steps": steps }), artifact: Some(art), artifact_to_stdout: true, code: 0 }
        }
        Command::Cert(CertCommand::Verify { file }) => {
            let v = read_json(file)?;
            let base = base_dir(file);
            let items = match v {
                Value::Array(xs) => xs,
                other => vec![other],
            };
            let mut verdicts = Vec::new();
            let mut all = true;
            for item in &items {
                let c = AnodyneCertificate::from_json(item, base.as_deref())?;
                let verdict = verify(&c);
                all &= verdict.is_valid();
                verdicts.push(verdict.to_json());
            }
            Outcome::ok(json!({ "valid": all, "verdicts": verdicts })).code(if all { 0 } else { 1 })
        }
        Command::DkCheck { map } => {
            let v = read_json(map)?;
            let f = map_from_json(&v, base_dir(map).as_deref())?;
            let verdict = dk_check(&f, m, d)?;
            let code = if verdict.is_consistent() { 0 } else { 1 };
            Outcome::ok(serde_json::to_value(&verdict)?).code(code)
        }
        Command::Compare { sset, a, b, max_vertices } => {
            let x = load_sset(sset)?;
            let r = model_agreement(&x, a, b, m, d, *max_vertices)?;
            let code = if r.agree { 0 } else { 1 };
            Outcome::ok(serde_json::to_value(&r)?).code(code)
        }
    })
}

fn render_text(v: &Value) -> String {
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}: {s}\n"),
                other => format!("{k}: {other}\n"),
            })
            .collect(),
        other => format!("{other}\n"),
    }
}

/// Runs one invocation and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    3
                }
            };
        }
    };
    match run_command(&cli) {
        Ok(out) => {
            let art_text = out.artifact.as_ref().map(|a| {
                let mut s = serde_json::to_string_pretty(a).expect("serializable");
                s.push('\n');
                s
            });
            match (&cli.out, art_text) {
                (Some(path), Some(text)) => {
                    if let Err(e) = std::fs::write(path, text) {
                        let _ = writeln!(stderr, "qc: {}: {e}", path.display());
                        return 3;
                    }
                }
                (None, Some(text)) if out.artifact_to_stdout => {
                    let _ = write!(stdout, "{text}");
                    let _ = write!(stderr, "{}", render_text(&out.summary));
                    return out.code;
                }
                _ => {}
            }
            let shown = match cli.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&out.summary).expect("serializable");
                    s.push('\n');
                    s
                }
                Format::Text => render_text(&out.summary),
            };
            let _ = write!(stdout, "{shown}");
            out.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "qc: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("qc").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_are_malformed_input() {
        assert_eq!(call(&["--help"]).0, 0);
        assert_eq!(call(&["hom"]).0, 3);
        assert_eq!(call(&["homology", "x.json", "--format", "yaml"]).0, 3);
    }

    #[test]
    fn build_prints_the_set() {
        let (code, out, err) = call(&["build", r#"{"op":"boundary","n":2,"trunc":2}"#]);
        assert_eq!(code, 0);
        assert_eq!(from_json(&serde_json::from_str(&out).unwrap()).unwrap().nondegenerate_counts(), vec![3, 3, 0]);
        assert!(err.contains("nondegenerate: [3,3,0]"));
        assert_eq!(call(&["build", "no-such-entry"]).0, 3);
    }

    #[test]
    fn certificate_families() {
        let (code, out, _) = call(&["cert", "gen", "squash", "3", "1"]);
        assert_eq!(code, 0);
        assert!(out.trim_start().starts_with('{'));
        assert_eq!(call(&["cert", "gen", "squash", "3"]).0, 1);
        assert_eq!(call(&["cert", "gen", "nonsense", "1"]).0, 1);
    }

    #[test]
    fn text_rendering() {
        let v = json!({"a": "x", "sizes": [1, 2]});
        assert_eq!(render_text(&v), "a: x\nsizes: [1,2]\n");
    }
}
