//! The `rosa` command line.
//!
//! Every subcommand writes its result to standard output or to `--out`.
//! Domain errors exit with status 1 and a JSON object on standard error;
//! usage errors exit with status 2.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::edgeword::{billiard_prefix, candidate_edgeword, subrosa_edgeword, Edgeword};
use crate::error::RosaError;
use crate::geometry::{LiftedPoint, Tile};
use crate::kenyon::{
    boundary_polygon, build_matching, corner_crossing_check, tile_interior, tileability_criterion,
};
use crate::multigrid::{dual_patch_capped, halfline_word};
use crate::planarity::{
    bounded_evidence, deviation_profile, planarity_verdict, BOUNDED_EVIDENCE_FACTOR,
};
use crate::render::{render_svg, RenderOptions};
use crate::spectral::{spectrum_report, DEFAULT_CLASSIFY_TOL};
use crate::substitution::{
    build_substitution, iterate_audited, scan_planar_rosa, star, LiftedPatch, PatchFile, PatchMeta,
    DEFAULT_TILE_CAP,
};

pub const DEFAULT_GROWTH_TOL: f64 = 0.1;
pub const DEFAULT_MAX_I: usize = 500;

/// Settings shared by all subcommands. Values come from defaults, then the
/// config file, then flags.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub n: Option<usize>,
    pub classify_tol: f64,
    pub growth_tol: f64,
    pub max_i: usize,
    pub iterations: usize,
    pub tile_cap: usize,
    pub intersection_cap: usize,
    pub radius: f64,
    pub out: Option<PathBuf>,
    pub render: RenderOptions,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: None,
            classify_tol: DEFAULT_CLASSIFY_TOL,
            growth_tol: DEFAULT_GROWTH_TOL,
            max_i: DEFAULT_MAX_I,
            iterations: 2,
            tile_cap: DEFAULT_TILE_CAP,
            intersection_cap: crate::multigrid::DEFAULT_INTERSECTION_CAP,
            radius: 6.0,
            out: None,
            render: RenderOptions::default(),
        }
    }
}

impl RunConfig {
    /// Reads `key = value` lines; lines starting with `#` are comments.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut c = RunConfig::default();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected key = value", no + 1))
            })?;
            c.set(k.trim(), v.trim())
                .map_err(|e| CliError::Usage(format!("config line {}: {e}", no + 1)))?;
        }
        c.validate()?;
        Ok(c)
    }

    fn set(&mut self, key: &str, v: &str) -> Result<(), String> {
        fn num<T: std::str::FromStr>(v: &str) -> Result<T, String> {
            v.parse().map_err(|_| format!("bad value {v:?}"))
        }
        match key {
            "n" => self.n = Some(num(v)?),
            "tol" | "classify_tol" => self.classify_tol = num(v)?,
            "growth_tol" => self.growth_tol = num(v)?,
            "max_i" => self.max_i = num(v)?,
            "iterations" => self.iterations = num(v)?,
            "tile_cap" | "memory_cap" => self.tile_cap = num(v)?,
            "intersection_cap" => self.intersection_cap = num(v)?,
            "radius" => self.radius = num(v)?,
            "out" => self.out = Some(PathBuf::from(v)),
            "scale" => self.render.scale = num(v)?,
            "stroke" => self.render.stroke = v.to_string(),
            "stroke_width" => self.render.stroke_width = num(v)?,
            "colors" => {
                self.render.colors = v
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect()
            }
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), CliError> {
        if let Some(n) = self.n {
            if n < 4 || n % 2 != 0 {
                return Err(CliError::Usage(format!(
                    "n must be even and at least 4, got {n}"
                )));
            }
        }
        if self.tile_cap == 0 || self.intersection_cap == 0 || self.max_i == 0 {
            return Err(CliError::Usage("caps must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(RosaError),
    Io(String),
}

impl From<RosaError> for CliError {
    fn from(e: RosaError) -> Self {
        CliError::Domain(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            CliError::Usage(m) => json!({"error": "Usage", "message": m}),
            CliError::Domain(e) => json!({"error": e.kind(), "message": e.to_string()}),
            CliError::Io(m) => json!({"error": "Io", "message": m}),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "rosa",
    version,
    about = "Rhombus substitutions with 2n-fold symmetry"
)]
pub struct Cli {
    /// Key = value settings, overridden by flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Subrosa,
    Billiard,
    Candidate,
}

#[derive(Args, Debug, Clone, Default)]
pub struct WordArgs {
    #[arg(long)]
    pub n: Option<usize>,
    /// Letters such as 020020; overrides --kind.
    #[arg(long)]
    pub edgeword: Option<String>,
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    /// Prefix length for --kind billiard.
    #[arg(long)]
    pub length: Option<usize>,
    /// Index for --kind candidate.
    #[arg(long)]
    pub i: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print an edgeword.
    Edgeword(WordArgs),
    /// Expansion matrix, eigenvalues and planarity class of an edgeword.
    Spectrum {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Counting test, corner checks and metatile tilings of an edgeword.
    Tileability(WordArgs),
    /// Find the Planar Rosa index.
    Select {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        max_i: Option<usize>,
    },
    /// Build the substitution and iterate it on a seed.
    Generate {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long)]
        iterations: Option<usize>,
        /// `star` or `tile:I,J`.
        #[arg(long, default_value = "star")]
        seed: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Deviation profile and growth verdict.
    Planarity {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long)]
        iterations: Option<usize>,
        #[arg(long, default_value = "star")]
        seed: String,
        /// Growth tolerance of the verdict.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dual patch of the multigrid, or the half-line word with --length.
    Multigrid {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long)]
        length: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a patch file as SVG.
    Render {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn need_n(flag: Option<usize>, cfg: &RunConfig) -> Result<usize, CliError> {
    let n = flag
        .or(cfg.n)
        .ok_or_else(|| CliError::Usage("--n is required".into()))?;
    if n < 4 || n % 2 != 0 {
        return Err(CliError::Usage(format!(
            "n must be even and at least 4, got {n}"
        )));
    }
    Ok(n)
}

fn resolve_word(
    w: &WordArgs,
    cfg: &RunConfig,
    default: Kind,
) -> Result<(usize, Edgeword), CliError> {
    let n = need_n(w.n, cfg)?;
    if let Some(s) = &w.edgeword {
        return Ok((n, Edgeword::parse(n, s)?));
    }
    let u = match w.kind.unwrap_or(default) {
        Kind::Subrosa => subrosa_edgeword(n)?,
        Kind::Billiard => {
            let len = w
                .length
                .ok_or_else(|| CliError::Usage("--kind billiard needs --length".into()))?;
            billiard_prefix(n, len)?
        }
        Kind::Candidate => {
            let i =
                w.i.ok_or_else(|| CliError::Usage("--kind candidate needs --i".into()))?;
            candidate_edgeword(n, i)?
        }
    };
    Ok((n, u))
}

fn parse_seed(n: usize, s: &str) -> Result<LiftedPatch, CliError> {
    if s == "star" {
        return Ok(star(n)?);
    }
    let bad = || CliError::Usage(format!("--seed must be star or tile:I,J, got {s:?}"));
    let rest = s.strip_prefix("tile:").ok_or_else(bad)?;
    let (i, j) = rest.split_once(',').ok_or_else(bad)?;
    let i: usize = i.trim().parse().map_err(|_| bad())?;
    let j: usize = j.trim().parse().map_err(|_| bad())?;
    Ok(LiftedPatch::single(Tile::new(LiftedPoint::zero(n), i, j)?))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable output");
    s.push('\n');
    s
}

/// What a subcommand produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub stdout: String,
    pub files: BTreeMap<PathBuf, String>,
}

impl Output {
    fn text(s: String) -> Self {
        Output {
            stdout: s,
            files: BTreeMap::new(),
        }
    }

    /// The result goes to `out` when given, with `summary` on standard output.
    fn routed(result: String, out: Option<PathBuf>, summary: String) -> Self {
        match out {
            Some(p) => Output {
                stdout: summary,
                files: BTreeMap::from([(p, result)]),
            },
            None => Output::text(result),
        }
    }
}

fn read_patch(path: &Path) -> Result<LiftedPatch, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let file: PatchFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Domain(RosaError::Parse(format!("{}: {e}", path.display()))))?;
    Ok(LiftedPatch::from_file(&file)?)
}

/// Runs one parsed command.
pub fn execute(cmd: &Command, cfg: &RunConfig) -> Result<Output, CliError> {
    match cmd {
        Command::Edgeword(w) => {
            let (_, u) = resolve_word(w, cfg, Kind::Subrosa)?;
            Ok(Output::text(format!("{u}\n")))
        }
        Command::Spectrum { word, tol } => {
            let (n, u) = resolve_word(word, cfg, Kind::Subrosa)?;
            let r = spectrum_report(n, &u, tol.unwrap_or(cfg.classify_tol))?;
            Ok(Output::text(to_json(&r)))
        }
        Command::Tileability(w) => {
            let (n, u) = resolve_word(w, cfg, Kind::Subrosa)?;
            let criterion = tileability_criterion(n, &u)?;
            let corners = (1..n)
                .map(|k| corner_crossing_check(n, &u, k).map(|ok| json!({"k": k, "ok": ok})))
                .collect::<Result<Vec<_>, _>>();
            let corners = match corners {
                Ok(c) => json!(c),
                Err(e) => json!({"error": e.kind(), "message": e.to_string()}),
            };
            let classes: Vec<_> = (1..=n / 2)
                .map(|k| {
                    let tiled = boundary_polygon(n, &u, k).and_then(|p| {
                        build_matching(&p).and_then(|m| tile_interior(&p, &m, false))
                    });
                    match tiled {
                        Ok(t) => json!({"k": k, "tiles": t.tiles.len()}),
                        Err(e) => json!({"k": k, "error": e.kind(), "message": e.to_string()}),
                    }
                })
                .collect();
            Ok(Output::text(to_json(&json!({
                "n": n,
                "edgeword": u.to_string(),
                "criterion": criterion,
                "corners": corners,
                "classes": classes,
            }))))
        }
        Command::Select { n, max_i } => {
            let n = need_n(*n, cfg)?;
            let max_i = max_i.unwrap_or(cfg.max_i);
            let (sel, log) = scan_planar_rosa(n, max_i)?;
            let Some(sel) = sel else {
                return Err(RosaError::NotFound { max_i }.into());
            };
            let e = log.last().expect("an accepted index is logged");
            Ok(Output::text(to_json(&json!({
                "n": n,
                "i": sel.i,
                "edgeword": e.edgeword,
                "lambdas": sel.spectrum.lambdas,
                "checks": {
                    "letters": e.letters_present,
                    "tileable": e.tileable,
                    "corners": e.corners_cross,
                    "planar": e.planar_spectrum,
                    "primitive": e.primitive,
                },
                "log": log,
            }))))
        }
        Command::Generate {
            word,
            iterations,
            seed,
            out,
        } => {
            let (n, u) = resolve_word(word, cfg, Kind::Subrosa)?;
            let k = iterations.unwrap_or(cfg.iterations);
            let rule = build_substitution(n, &u)?;
            let start = parse_seed(n, seed)?;
            let (patch, audits) = iterate_audited(&rule, &start, k, cfg.tile_cap)?;
            patch.audit()?;
            if let Some(a) = audits.iter().find(|a| !a.holds(1e-9)) {
                return Err(RosaError::Consistency(format!("area identity fails: {a:?}")).into());
            }
            let file = patch.to_file(PatchMeta {
                edgeword: u.to_string(),
                iterations: k,
                seed: seed.clone(),
            });
            let summary = to_json(&json!({
                "tiles": patch.len(),
                "halfTiles": patch.half_count(),
                "audits": audits,
            }));
            Ok(Output::routed(
                to_json(&file),
                out.clone().or(cfg.out.clone()),
                summary,
            ))
        }
        Command::Planarity {
            word,
            iterations,
            seed,
            tol,
            out,
        } => {
            let (n, u) = resolve_word(word, cfg, Kind::Subrosa)?;
            let k = iterations.unwrap_or(cfg.iterations.max(5));
            let rule = build_substitution(n, &u)?;
            let start = parse_seed(n, seed)?;
            let profile = deviation_profile(&rule, &start, k)?;
            let verdict = planarity_verdict(&profile, tol.unwrap_or(cfg.growth_tol)).ok();
            let report = to_json(&json!({
                "n": n,
                "edgeword": u.to_string(),
                "rows": profile.rows,
                "verdict": verdict,
                "boundedEvidence": bounded_evidence(&profile, BOUNDED_EVIDENCE_FACTOR),
                "note": "heuristic evidence from finitely many iterations, not a proof",
            }));
            let summary = to_json(&json!({"verdict": verdict}));
            Ok(Output::routed(
                report,
                out.clone().or(cfg.out.clone()),
                summary,
            ))
        }
        Command::Multigrid {
            n,
            radius,
            length,
            out,
        } => {
            let n = need_n(*n, cfg)?;
            if let Some(len) = length {
                return Ok(Output::text(format!("{}\n", halfline_word(n, *len)?)));
            }
            let r = radius.unwrap_or(cfg.radius);
            let patch = dual_patch_capped(n, r, cfg.intersection_cap)?;
            patch.audit()?;
            let file = patch.to_file(PatchMeta {
                edgeword: String::new(),
                iterations: 0,
                seed: format!("multigrid:{r}"),
            });
            let summary = to_json(&json!({"tiles": patch.len()}));
            Ok(Output::routed(
                to_json(&file),
                out.clone().or(cfg.out.clone()),
                summary,
            ))
        }
        Command::Render { input, out } => {
            let patch = read_patch(input)?;
            let svg = render_svg(&patch, &cfg.render);
            let summary = to_json(&json!({"tiles": patch.len()}));
            Ok(Output::routed(
                svg,
                out.clone().or(cfg.out.clone()),
                summary,
            ))
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<RunConfig, CliError> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => {
            let text =
                fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            RunConfig::parse(&text)
        }
    }
}

fn write_output(o: &Output, stdout: &mut dyn Write) -> Result<(), CliError> {
    for (path, body) in &o.files {
        fs::write(path, body).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    stdout
        .write_all(o.stdout.as_bytes())
        .map_err(|e| CliError::Io(e.to_string()))
}

/// Parses `args`, runs the command and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let result = load_config(cli.config.as_deref())
        .and_then(|cfg| execute(&cli.command, &cfg))
        .and_then(|o| write_output(&o, stdout));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.to_json());
            e.exit_code()
        }
    }
}
