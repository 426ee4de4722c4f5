//! Command-line surface: every subcommand prints its report and, when
//! `NNQ_REPORT_DIR` is set, also writes it there atomically.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use super::descriptor::{catalog_list, ManifoldDescriptor, DEFAULT_K_MAX, DEFAULT_K_MIN};
use super::realize::{block_pair, boundary_collar, realize, ODD_JET_TOL, PRODUCT_FORM_TOL};
use super::CatalogError;
use crate::builders::{
    boundary_form_check, gluing_isometry_check, make_profile, sphere_bundle_quotient, Factor, GluedSpace, GluingMap,
    ProductMetric, ProfileKind, DEFAULT_JET_ORDER, ISOMETRY_TOL,
};
use crate::collapse::{build_structure, corrupted_polarized, evaluate_structure, trace};
use crate::geom::{curvature_scan, ScanReport, SCAN_CSV_HEADER};
use crate::pin::{distinguish, pin_table_csv, pin_verdicts, DistinguishVerdict};

pub const REPORT_DIR_ENV: &str = "NNQ_REPORT_DIR";

#[derive(Debug, Parser)]
#[command(name = "nnq", version, about = "Certify metrics, pin obstructions and collapse traces of the catalog manifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Manifold descriptors.
    #[command(subcommand)]
    Catalog(CatalogCmd),
    /// Sampled sectional curvature.
    #[command(subcommand)]
    Curvature(CurvatureCmd),
    /// Collar form of the disk-bundle blocks.
    #[command(subcommand)]
    Boundary(BoundaryCmd),
    /// Isometry of the boundary identification.
    #[command(subcommand)]
    Glue(GlueCmd),
    /// Pin obstruction table of projective spaces.
    #[command(subcommand)]
    Pin(PinCmd),
    /// Compare two catalog entries in pin bordism.
    Distinguish {
        /// Two tags separated by a comma, e.g. `P4.0,P4.2`.
        #[arg(long)]
        pair: String,
    },
    /// Collapsing metric families.
    #[command(subcommand)]
    Collapse(CollapseCmd),
    /// Circle-action structures.
    #[command(subcommand)]
    Structure(StructureCmd),
}

#[derive(Debug, Subcommand)]
pub enum CatalogCmd {
    List {
        #[arg(long, default_value_t = DEFAULT_K_MIN)]
        k_min: usize,
        #[arg(long, default_value_t = DEFAULT_K_MAX)]
        k_max: usize,
    },
}

#[derive(Debug, Args)]
pub struct ManifoldArg {
    /// Catalog tag such as `X5.2`, or `H2` for the hyperbolic test chart.
    #[arg(long)]
    pub manifold: String,
    /// `collar_torpedo`, `hemisphere`, or `bundle` (the direct quotient of
    /// round `S² × S^m`, `j = 0` only).
    #[arg(long, default_value = "collar_torpedo")]
    pub profile: String,
}

#[derive(Debug, Subcommand)]
pub enum CurvatureCmd {
    Scan {
        #[command(flatten)]
        target: ManifoldArg,
        #[arg(long, default_value_t = 10_000)]
        points: usize,
        #[arg(long, default_value_t = 5)]
        planes: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum BoundaryCmd {
    Check {
        #[command(flatten)]
        target: ManifoldArg,
        /// Collar depth; defaults to the profile's product collar.
        #[arg(long)]
        collar: Option<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum GlueCmd {
    Check {
        #[command(flatten)]
        target: ManifoldArg,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum PinCmd {
    Table {
        #[arg(long, default_value_t = 32)]
        n_max: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum CollapseCmd {
    Trace {
        #[arg(long)]
        manifold: String,
        #[arg(long, value_delimiter = ',', default_value = "1,0.5,0.1,0.02")]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 2000)]
        points: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum StructureCmd {
    Validate {
        #[arg(long)]
        manifold: String,
        /// Validate a copy that falsely claims to be polarized.
        #[arg(long)]
        corrupt: bool,
    },
}

/// Result of one invocation.
#[derive(Debug, Default)]
pub struct Outcome {
    /// First failing verdict, if any.
    pub failure: Option<String>,
    pub files: Vec<PathBuf>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

struct Reporter<'a> {
    out: &'a mut dyn Write,
    dir: Option<PathBuf>,
    outcome: Outcome,
}

impl Reporter<'_> {
    fn emit(&mut self, name: &str, body: &str) -> Result<(), CatalogError> {
        self.out.write_all(body.as_bytes())?;
        if let Some(dir) = &self.dir {
            let path = write_atomic(dir, name, body)?;
            self.outcome.files.push(path);
        }
        Ok(())
    }

    fn fail(&mut self, why: String) {
        if self.outcome.failure.is_none() {
            self.outcome.failure = Some(why);
        }
    }
}

fn write_atomic(dir: &Path, name: &str, body: &str) -> Result<PathBuf, CatalogError> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let tmp = dir.join(format!(".{name}.tmp"));
    fs::write(&tmp, body)?;
    fs::rename(&tmp, &path)?;
    Ok(path)
}

fn json<T: serde::Serialize>(v: &T) -> Result<String, CatalogError> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn descriptor(tag: &str) -> Result<ManifoldDescriptor, CatalogError> {
    tag.parse()
}

fn scan_csv(r: &ScanReport) -> String {
    format!("{SCAN_CSV_HEADER}\n{}\n", r.csv_row())
}

fn run_scan(target: &ManifoldArg, points: usize, planes: usize, seed: u64, tol: f64) -> Result<ScanReport, CatalogError> {
    if target.manifold == "H2" {
        let m = ProductMetric::new("H2", vec![Factor::hyperbolic_plane(2.0)])?;
        return Ok(curvature_scan(m.metric(), points, planes, seed, tol)?);
    }
    let d = descriptor(&target.manifold)?;
    if target.profile == "bundle" {
        if d.j != 0 {
            return Err(CatalogError::Usage(format!("{}: the bundle construction exists only for j = 0", d.tag())));
        }
        let q = sphere_bundle_quotient(d.tag(), d.sphere_dim())?;
        return Ok(curvature_scan(q.metric(), points, planes, seed, tol)?);
    }
    let kind: ProfileKind = target.profile.parse()?;
    Ok(realize(&d, kind)?.scan(points, planes, seed, tol)?)
}

/// Parse `args` (including the program name) and execute one subcommand,
/// writing the report to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<Outcome, CatalogError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CatalogError::Usage(e.to_string()))?;
    let dir = std::env::var_os(REPORT_DIR_ENV).map(PathBuf::from);
    let mut rep = Reporter { out, dir, outcome: Outcome::default() };
    match cli.command {
        Command::Catalog(CatalogCmd::List { k_min, k_max }) => {
            let list = catalog_list(k_min, k_max)?;
            rep.emit("catalog.json", &json(&list)?)?;
        }
        Command::Curvature(CurvatureCmd::Scan { target, points, planes, seed, tol }) => {
            let r = run_scan(&target, points, planes, seed, tol)?;
            let stem = format!("scan-{}-{}", target.manifold, target.profile);
            rep.emit(&format!("{stem}.csv"), &scan_csv(&r))?;
            if let Some(dir) = rep.dir.clone() {
                rep.outcome.files.push(write_atomic(&dir, &format!("{stem}.json"), &json(&r)?)?);
            }
            if !r.passed() {
                rep.fail(format!("curvature scan of {}: min K = {:e} below -{:e}", target.manifold, r.min_k, tol));
            }
        }
        Command::Boundary(BoundaryCmd::Check { target, collar }) => {
            let d = descriptor(&target.manifold)?;
            let profile = make_profile(target.profile.parse()?, 1.0, DEFAULT_JET_ORDER)?;
            let depth = collar.unwrap_or_else(|| boundary_collar(&profile));
            let mut verdicts = Vec::new();
            for q in block_pair(&d, &profile)? {
                let v = boundary_form_check(&q, depth, PRODUCT_FORM_TOL, ODD_JET_TOL)?;
                if !v.passed {
                    rep.fail(format!("boundary check of {}: product defect {:e}", v.block, v.product_defect));
                }
                verdicts.push(v);
            }
            rep.emit(&format!("boundary-{}-{}.json", d.tag(), target.profile), &json(&verdicts)?)?;
        }
        Command::Glue(GlueCmd::Check { target, samples, seed }) => {
            let d = descriptor(&target.manifold)?;
            let profile = make_profile(target.profile.parse()?, 1.0, DEFAULT_JET_ORDER)?;
            let [a, b] = block_pair(&d, &profile)?;
            let gs = GluedSpace::new(a, b, GluingMap::Loop(d.gluing.rotation_loop()?), profile.collar_width());
            let v = gluing_isometry_check(&gs, samples, seed, ISOMETRY_TOL)?;
            if !v.passed {
                rep.fail(format!("gluing of {}: fiber defect {:e}", d.tag(), v.fiber_defect));
            }
            rep.emit(&format!("glue-{}.json", d.tag()), &json(&v)?)?;
        }
        Command::Pin(PinCmd::Table { n_max }) => {
            let table = pin_table_csv(n_max)?;
            for n in 2..=n_max {
                let v = pin_verdicts(n)?;
                let expected = match n % 4 {
                    0 => (true, false),
                    1 => (false, false),
                    2 => (false, true),
                    _ => (true, true),
                };
                if (v.pin_plus, v.pin_minus) != expected {
                    rep.fail(format!("pin table row {n} breaks the period-4 pattern"));
                }
            }
            rep.emit("pin-table.csv", &table)?;
        }
        Command::Distinguish { pair } => {
            let (a, b) = pair
                .split_once(',')
                .ok_or_else(|| CatalogError::Usage(format!("--pair expects two comma-separated tags, got {pair:?}")))?;
            let (da, db) = (descriptor(a.trim())?, descriptor(b.trim())?);
            let r = distinguish(&da.characteristic_tag(), &db.characteristic_tag())?;
            let verdict = match r.verdict {
                DistinguishVerdict::Distinct => "distinct",
                DistinguishVerdict::NoConclusion => "no conclusion",
                DistinguishVerdict::Undetermined => "undetermined",
            };
            let mut body = String::new();
            writeln!(body, "classes {} vs {}; {verdict}", r.pair[0].rendered, r.pair[1].rendered).unwrap();
            body.push_str(&json(&r)?);
            if r.verdict == DistinguishVerdict::Undetermined {
                rep.fail(format!("distinguish {pair}: {}", r.conclusion));
            }
            rep.emit(&format!("distinguish-{}-{}.txt", da.tag(), db.tag()), &body)?;
        }
        Command::Collapse(CollapseCmd::Trace { manifold, eps, points, seed }) => {
            let d = descriptor(&manifold)?;
            let t = trace(&d, &eps, points, seed)?;
            if eps.len() > 1 && !t.passed() {
                rep.fail(format!("collapse trace of {}: {}", d.tag(), t.verdict.as_str()));
            }
            rep.emit(&format!("collapse-{}.csv", d.tag()), &t.to_csv())?;
        }
        Command::Structure(StructureCmd::Validate { manifold, corrupt }) => {
            let d = descriptor(&manifold)?;
            let mut s = build_structure(&d)?;
            if corrupt {
                s = corrupted_polarized(&s);
            }
            let profile = make_profile(ProfileKind::CollarTorpedo, 1.0, DEFAULT_JET_ORDER)?;
            let [a, b] = block_pair(&d, &profile)?;
            let gs = GluedSpace::new(a, b, GluingMap::Loop(d.gluing.rotation_loop()?), profile.collar_width());
            let v = evaluate_structure(&s, &gs)?;
            if let Some(c) = v.first_violation() {
                rep.fail(format!("structure of {}: item {} ({}) violated: {}", d.tag(), c.item, c.name, c.detail));
            }
            let body = json(&serde_json::json!({ "structure": s, "verdict": v }))?;
            let suffix = if corrupt { "-corrupted" } else { "" };
            rep.emit(&format!("structure-{}{suffix}.json", d.tag()), &body)?;
        }
    }
    Ok(rep.outcome)
}
