//! Command line interface: patch generation, atlas computation by three
//! methods, verification, relabelling, frequencies, recurrence constants,
//! the square-substitution appendix checks and SVG rendering.
//!
//! Exit codes: 0 success/pass, 1 verification failure, 2 invalid flags or
//! malformed input, 3 resource limit, 4 cross-check mismatch.

mod svg;

use std::collections::HashSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use penrose_core::cutproject::{
    atlas_by_regions, generate_penrose_patch, penrose_atlas_by_sections,
};
use penrose_core::golden::GoldenNum;
use penrose_core::io;
use penrose_core::lattice::{PlanarPoint, ProjectionScheme};
use penrose_core::localrules::{
    check_deception, deception_fixtures, find_periodic_witness, reconstruct_labels, verify_kmaps,
    PenroseAtlases,
};
use penrose_core::patch::{sun_patch, Atlas, EquivMode, KMap, Patch};
use penrose_core::recurrence::compute_constants;
use penrose_core::recurrence::extract_p_a1;
use penrose_core::solomyak::non_lr_witness;
use penrose_core::substitution::{
    atlas_by_substitution, iterate_sigma, penrose_seed_kmap, SubstitutionRule,
};
use penrose_core::Error;

#[derive(Parser)]
#[command(name = "penrose", version, about = "Exact Penrose rhombus tiling toolkit")]
struct Cli {
    /// Output file (defaults to stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format for patches
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for randomized sampling oracles
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads (reserved; computations are currently serial)
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Svg,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a patch of the canonical Penrose tiling
    Generate(GenerateArgs),
    /// Compute a k-atlas by one of the three methods
    Atlas(AtlasArgs),
    /// Verify the k-maps of a patch against an atlas
    Verify(VerifyArgs),
    /// Reconstruct the arrow labels of an unlabelled patch
    Label(LabelArgs),
    /// Exact k-map frequencies from the window sections
    Frequencies(FrequenciesArgs),
    /// Certified recurrence constants
    Constants,
    /// Non-linear-recurrence witness for the padded Thue-Morse substitution
    Appendix(AppendixArgs),
    /// Render a patch to SVG
    Render(RenderArgs),
    /// Write the built-in fixtures (atlases, deceptions, witness) with checksums
    Fixtures(FixturesArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    method: GenMethod,
    /// Substitution steps (substitution method)
    #[arg(long, default_value_t = 4)]
    steps: u32,
    /// Seed pattern name (substitution method)
    #[arg(long, default_value = "sun")]
    seed_pattern: String,
    /// Intercept of the affine slope, e.g. 1/5 (cut-and-project method)
    #[arg(long, default_value = "1/5")]
    intercept: String,
    /// Disc radius (cut-and-project method)
    #[arg(long, default_value_t = 10)]
    radius: i64,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenMethod {
    Substitution,
    Cutproject,
}

#[derive(Args)]
struct AtlasArgs {
    #[arg(long, value_enum)]
    method: AtlasMethod,
    #[arg(short, default_value_t = 1)]
    k: u32,
    #[arg(long, value_enum, default_value_t = ModeArg::Isometry)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = SlopeArg::Penrose)]
    slope: SlopeArg,
    /// Keep the arrow labels on the atlas entries
    #[arg(long)]
    labelled: bool,
    /// Run all three methods and require identical atlases
    #[arg(long)]
    cross_check: bool,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum AtlasMethod {
    Subst,
    Regions,
    Patch,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Translation,
    Isometry,
}

#[derive(Clone, Copy, ValueEnum)]
enum SlopeArg {
    Penrose,
    Generalized,
}

#[derive(Args)]
struct VerifyArgs {
    /// Patch JSON file
    input: PathBuf,
    #[arg(short, default_value_t = 1)]
    k: u32,
    /// Atlas JSON written by `penrose atlas` (default: built-in atlas)
    #[arg(long)]
    atlas_file: Option<PathBuf>,
}

#[derive(Args)]
struct LabelArgs {
    input: PathBuf,
}

#[derive(Args)]
struct FrequenciesArgs {
    #[arg(short, default_value_t = 0)]
    k: u32,
}

#[derive(Args)]
struct AppendixArgs {
    #[arg(long, default_value_t = 3)]
    n: u32,
}

#[derive(Args)]
struct RenderArgs {
    input: PathBuf,
}

#[derive(Args)]
struct FixturesArgs {
    /// Directory to write fixture files into
    #[arg(long, default_value = "data")]
    dir: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads == 0 {
        eprintln!("--threads must be at least 1");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Parse(_) | Error::InvalidPatch(_) | Error::PreconditionViolated(_) => 2,
                Error::ResourceLimit(_) => 3,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}

fn write_out(cli: &Cli, content: &str) -> penrose_core::Result<()> {
    match &cli.out {
        None => {
            println!("{content}");
            Ok(())
        }
        Some(p) => std::fs::write(p, content)
            .map_err(|e| Error::Parse(format!("cannot write {}: {e}", p.display()))),
    }
}

fn emit_patch(cli: &Cli, patch: &Patch) -> penrose_core::Result<()> {
    match cli.format {
        Format::Json => write_out(cli, &io::patch_to_string(patch)),
        Format::Svg => write_out(cli, &svg::render(patch, &svg::RenderOptions::default())),
    }
}

fn run(cli: &Cli) -> penrose_core::Result<ExitCode> {
    match &cli.cmd {
        Cmd::Generate(a) => {
            let patch = match a.method {
                GenMethod::Substitution => {
                    let seed = match a.seed_pattern.as_str() {
                        "sun" => sun_patch(),
                        other => {
                            return Err(Error::Parse(format!("unknown seed pattern {other:?}")))
                        }
                    };
                    iterate_sigma(&seed, a.steps, None)?.patch
                }
                GenMethod::Cutproject => {
                    let gamma = GoldenNum::parse(&a.intercept)?;
                    let sum = gamma * GoldenNum::from_int(5);
                    let scheme = ProjectionScheme::with_intercept(sum);
                    if !scheme.is_penrose_mode() {
                        return Err(Error::PreconditionViolated(
                            "cut-and-project generation needs a Penrose intercept (5γ ∈ Z)".into(),
                        ));
                    }
                    generate_penrose_patch(&scheme, GoldenNum::from_int(a.radius))?
                }
            };
            emit_patch(cli, &patch)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Atlas(a) => run_atlas(cli, a),
        Cmd::Verify(a) => {
            let text = std::fs::read_to_string(&a.input)
                .map_err(|e| Error::Parse(format!("{}: {e}", a.input.display())))?;
            let patch = io::patch_from_str(&text)?;
            let labelled = patch.tiles().iter().all(|t| t.mark.is_some());
            let atlas = match &a.atlas_file {
                Some(f) => load_atlas_file(f, a.k)?,
                None => {
                    let atlases = PenroseAtlases::compute()?;
                    let base = if a.k == 0 {
                        &atlases.labelled0
                    } else {
                        &atlases.labelled1
                    };
                    if labelled {
                        base.clone()
                    } else {
                        base.erase_labels()
                    }
                }
            };
            if atlas.k != a.k {
                return Err(Error::PreconditionViolated(format!(
                    "atlas has k={}, requested k={}",
                    atlas.k, a.k
                )));
            }
            let report = verify_kmaps(&patch, &atlas);
            let json =
                serde_json::to_string_pretty(&io::report_to_json(&report)).expect("serializable");
            write_out(cli, &json)?;
            Ok(if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Cmd::Label(a) => {
            let text = std::fs::read_to_string(&a.input)
                .map_err(|e| Error::Parse(format!("{}: {e}", a.input.display())))?;
            let patch = io::patch_from_str(&text)?;
            let atlases = PenroseAtlases::compute()?;
            let relabelled = reconstruct_labels(&patch.erase_labels(), &atlases)?;
            emit_patch(cli, &relabelled.patch)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Frequencies(a) => {
            let scheme = ProjectionScheme::penrose();
            let sa = penrose_atlas_by_sections(&scheme, a.k, false)?;
            let rows = io::frequencies_to_json(&sa);
            let total: GoldenNum = sa
                .frequencies()
                .iter()
                .fold(GoldenNum::ZERO, |acc, (_, f)| acc + *f);
            let doc = serde_json::json!({
                "k": a.k,
                "classes": rows.len(),
                "sum": total.to_string(),
                "frequencies": rows,
            });
            write_out(cli, &serde_json::to_string_pretty(&doc).expect("serializable"))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Constants => {
            let c = compute_constants();
            let line = |name: &str, v: &penrose_core::recurrence::CertifiedValue| {
                serde_json::json!({
                    "name": name,
                    "expr": v.expr,
                    "exact": v.exact.map(|g| g.to_string()),
                    "exact_square": v.exact_square.map(|g| g.to_string()),
                    "interval": [v.interval.lo, v.interval.hi],
                })
            };
            let assertions = serde_json::json!({
                "C1 in 0.588±0.001": c.c1.interval.gt(0.587) && c.c1.interval.lt(0.589),
                "r_v = 1+phi": c.r_v.exact == Some(GoldenNum::from_parts(1, 1)),
                "r_c^2 = 19+30phi": c.r_c.exact_square == Some(GoldenNum::from_parts(19, 30)),
                "C_p < 29.830": c.c_p.interval.lt(29.830),
                "R_A1 < 86.57": c.r_a1.interval.lt(86.57),
            });
            let all_pass = assertions
                .as_object()
                .unwrap()
                .values()
                .all(|v| v.as_bool() == Some(true));
            let doc = serde_json::json!({
                "constants": [
                    line("C1", &c.c1),
                    line("r_v'", &c.r_v_prime),
                    line("r_v", &c.r_v),
                    line("r_c", &c.r_c),
                    line("C0_lower", &c.c0_lower),
                    line("C0_upper", &c.c0_upper),
                    line("C_p", &c.c_p),
                    line("R_A1", &c.r_a1),
                ],
                "assertions": assertions,
                "pass": all_pass,
            });
            write_out(cli, &serde_json::to_string_pretty(&doc).expect("serializable"))?;
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Cmd::Appendix(a) => {
            let mut reports = Vec::new();
            for n in 0..=a.n {
                let r = non_lr_witness(n, n <= 3)?;
                reports.push(serde_json::json!({
                    "n": n,
                    "pattern_len": r.pattern_len,
                    "zero_region": r.zero_region,
                    "grid": [r.grid_width, r.grid_height],
                }));
            }
            let doc = serde_json::json!({ "claim_holds": true, "reports": reports });
            write_out(cli, &serde_json::to_string_pretty(&doc).expect("serializable"))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Render(a) => {
            let text = std::fs::read_to_string(&a.input)
                .map_err(|e| Error::Parse(format!("{}: {e}", a.input.display())))?;
            let patch = io::patch_from_str(&text)?;
            write_out(cli, &svg::render(&patch, &svg::RenderOptions::default()))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Fixtures(a) => write_fixtures(&a.dir),
    }
}

fn run_atlas(cli: &Cli, a: &AtlasArgs) -> penrose_core::Result<ExitCode> {
    let mode = match a.mode {
        ModeArg::Translation => EquivMode::Translation,
        ModeArg::Isometry => EquivMode::Isometry,
    };
    if let SlopeArg::Generalized = a.slope {
        if a.method != AtlasMethod::Regions {
            return Err(Error::PreconditionViolated(
                "the generalized slope is only available with --method regions".into(),
            ));
        }
        let ra = atlas_by_regions(&ProjectionScheme::generalized(), a.k)?;
        let count = match mode {
            EquivMode::Translation => ra.translation_count(),
            EquivMode::Isometry => ra.isometry_count(),
        };
        println!("{count}");
        if cli.out.is_some() {
            let doc = serde_json::json!({
                "k": a.k,
                "translation_classes": ra.translation_count(),
                "isometry_classes": ra.isometry_count(),
                "regions": io::regions_to_json(&ra),
            });
            write_out(cli, &serde_json::to_string_pretty(&doc).expect("serializable"))?;
        }
        return Ok(ExitCode::SUCCESS);
    }
    let compute = |method: AtlasMethod| -> penrose_core::Result<Atlas> {
        let atlas = match method {
            AtlasMethod::Subst => {
                let rule = SubstitutionRule::penrose();
                let seed = penrose_seed_kmap(a.k)?;
                atlas_by_substitution(&rule, &seed, a.k, mode)?.0
            }
            AtlasMethod::Regions => {
                let sa = penrose_atlas_by_sections(&ProjectionScheme::penrose(), a.k, true)?;
                sa.to_atlas(mode)
            }
            AtlasMethod::Patch => {
                let atlases = PenroseAtlases::compute()?;
                let pa1 = extract_p_a1(&atlases)?;
                let ambient = &pa1.patch;
                let mut kmaps = Vec::new();
                let mut vs: Vec<PlanarPoint> = ambient.vertices().copied().collect();
                vs.sort();
                for v in vs {
                    if let Ok(km) = ambient.extract_kmap(&v, a.k) {
                        kmaps.push(km);
                    }
                }
                Atlas::from_kmaps(a.k, mode, kmaps)
            }
        };
        Ok(if a.labelled { atlas } else { atlas.erase_labels() })
    };
    if a.cross_check {
        let subst = compute(AtlasMethod::Subst)?;
        let regions = compute(AtlasMethod::Regions)?;
        let patch = compute(AtlasMethod::Patch)?;
        let key =
            |at: &Atlas| -> HashSet<_> { at.entries.iter().map(|e| e.tiles.clone()).collect() };
        let (s, r, p) = (key(&subst), key(&regions), key(&patch));
        if s != r || s != p {
            eprintln!(
                "cross-check mismatch: subst {} / regions {} / patch {}",
                s.len(),
                r.len(),
                p.len()
            );
            return Ok(ExitCode::from(4));
        }
        println!("{}", subst.len());
        if cli.out.is_some() {
            let doc =
                serde_json::to_string_pretty(&io::atlas_to_json(&subst)).expect("serializable");
            write_out(cli, &doc)?;
        }
        return Ok(ExitCode::SUCCESS);
    }
    let atlas = compute(a.method)?;
    println!("{}", atlas.len());
    if cli.out.is_some() {
        let doc = serde_json::to_string_pretty(&io::atlas_to_json(&atlas)).expect("serializable");
        write_out(cli, &doc)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn load_atlas_file(path: &PathBuf, k: u32) -> penrose_core::Result<Atlas> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let v: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("bad atlas JSON: {e}")))?;
    let entries = v
        .get("entries")
        .and_then(|e| e.as_array())
        .ok_or_else(|| Error::Parse("atlas JSON lacks entries".into()))?;
    let mut kmaps = Vec::new();
    for e in entries {
        let pj: io::PatchJson = serde_json::from_value(e.clone())
            .map_err(|e| Error::Parse(format!("bad atlas entry: {e}")))?;
        let tiles = pj
            .tiles
            .iter()
            .map(io::tile_from_json)
            .collect::<penrose_core::Result<Vec<_>>>()?;
        kmaps.push(KMap {
            center: PlanarPoint::ORIGIN,
            tiles,
            k,
        });
    }
    Ok(Atlas::from_kmaps(k, EquivMode::Isometry, kmaps))
}

/// 64-bit FNV-1a, for the fixture checksums.
fn fnv1a(data: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in data {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn write_fixtures(dir: &PathBuf) -> penrose_core::Result<ExitCode> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Error::Parse(format!("cannot create {}: {e}", dir.display())))?;
    let atlases = PenroseAtlases::compute()?;
    let mut files: Vec<(String, String)> = Vec::new();
    files.push((
        "labelled_0_atlas.json".into(),
        serde_json::to_string_pretty(&io::atlas_to_json(&atlases.labelled0)).unwrap(),
    ));
    files.push((
        "labelled_1_atlas.json".into(),
        serde_json::to_string_pretty(&io::atlas_to_json(&atlases.labelled1)).unwrap(),
    ));
    files.push((
        "geometric_0_atlas.json".into(),
        serde_json::to_string_pretty(&io::atlas_to_json(&atlases.geometric0)).unwrap(),
    ));
    files.push((
        "geometric_1_atlas.json".into(),
        serde_json::to_string_pretty(&io::atlas_to_json(&atlases.geometric1)).unwrap(),
    ));
    let fixtures = deception_fixtures(&atlases);
    for (i, f) in fixtures.iter().enumerate() {
        let rep = check_deception(f, &atlases)?;
        if !rep.is_deception() {
            return Err(Error::ClaimFalsified("fixture is not a deception".into()));
        }
        files.push((format!("deception_{i}.json"), io::patch_to_string(f)));
    }
    match find_periodic_witness(&atlases) {
        Ok(w) => {
            files.push((
                "periodic_witness.json".into(),
                io::patch_to_string(&w.patch),
            ));
        }
        Err(e) => eprintln!("warning: periodic witness unavailable: {e}"),
    }
    let mut sums = String::new();
    for (name, content) in &files {
        let p = dir.join(name);
        std::fs::write(&p, content)
            .map_err(|e| Error::Parse(format!("cannot write {}: {e}", p.display())))?;
        sums.push_str(&format!("{:016x}  {}\n", fnv1a(content.as_bytes()), name));
    }
    std::fs::write(dir.join("CHECKSUMS"), &sums)
        .map_err(|e| Error::Parse(format!("cannot write checksums: {e}")))?;
    println!("wrote {} fixtures to {}", files.len(), dir.display());
    Ok(ExitCode::SUCCESS)
}
