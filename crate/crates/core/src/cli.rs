//! The `quillen` command line front end.
//!
//! Every subcommand returns its primary artifact as text; `--out` writes it
//! to a file instead of stdout. Failures map to exit codes through
//! [`Error::exit_code`].

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cecobar::{adjunction_homology_check, ce_construction_with, CeOptions, FiniteDgl};
use crate::error::{Error, Result};
use crate::freelie::FreeDgl;
use crate::io;
use crate::models::{
    ce_projection, h_star, pi_star, sphere_homology_closed_form, sphere_model, suspended_linear_homology,
    CellComplexDescription,
};
use crate::persist::{interleaving_distance_with, Barcode, BarcodeFile, Distance, Solver};
use crate::pipeline::{
    build_persistence_model, delay_pair, generator_barcode, h_barcode, pi_barcode, plain_pair, shift_pair,
    stability_report, FiltrationPair, ModelFile, PersistenceQuillenModel, MODEL_KIND,
};
use crate::qlinalg::rational::{format_rational, frac, int, parse_rational};
use crate::qlinalg::Rational;

/// Environment variable overriding the corpus directory of `selftest`.
pub const CORPUS_ENV: &str = "QUILLEN_CORPUS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BarcodeKind {
    /// Rational homotopy `π_*`.
    Pi,
    /// Rational homology `H_* = sV ⊕ ℚ`; needs minimal stages.
    H,
    /// Generator module `𝕍` of the minimal model.
    Generators,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    Auto,
    Bipartite,
    Exhaustive,
}

#[derive(Debug, Parser)]
#[command(name = "quillen", version, about = "Persistence minimal Quillen models and rational homotopy barcodes")]
pub struct Cli {
    /// Lie truncation degree N; barcodes are reliable through degree N − 2.
    #[arg(long, short = 'N', global = true, default_value_t = 8)]
    pub truncation: i32,
    /// Write the artifact here instead of stdout (a directory for `selftest`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Persistence Quillen models.
    Model {
        #[command(subcommand)]
        action: ModelCommand,
    },
    /// Barcode of a model file or a cell complex file.
    Barcode {
        input: PathBuf,
        #[arg(value_enum)]
        kind: BarcodeKind,
    },
    /// Interleaving distance between two barcode files (JSON or CSV).
    Distance {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = SolverArg::Auto)]
        solver: SolverArg,
    },
    /// Stability report for two cell complexes, or one complex and a shift or delay.
    Stability {
        x: PathBuf,
        y: Option<PathBuf>,
        /// Compare against the same complex shifted by δ.
        #[arg(long, conflicts_with_all = ["y", "delay"])]
        shift: Option<String>,
        /// `STAGE:δ`: compare against the complex with stages from STAGE on delayed by δ.
        #[arg(long, conflicts_with = "y")]
        delay: Option<String>,
        /// Only try the inclusion certificate at this δ.
        #[arg(long)]
        certificate_delta: Option<String>,
        /// Known bound on the distance of the inputs.
        #[arg(long)]
        input_bound: Option<String>,
    },
    /// Runs the golden corpus and the invariant suites.
    Selftest {
        #[arg(long, env = CORPUS_ENV)]
        corpus: Option<PathBuf>,
        /// Corrupts a sign in the Chevalley–Eilenberg differential.
        #[arg(long, hide = true)]
        mutate: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum ModelCommand {
    /// Builds the free and minimal persistence models of a cell complex.
    Build {
        complex: PathBuf,
        /// Skip minimalization.
        #[arg(long)]
        free_only: bool,
    },
}

/// Options shared by all subcommands, validated before any computation.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub truncation: i32,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        if cli.truncation < 3 {
            return Err(Error::truncation(format!("truncation must be >= 3, got {}", cli.truncation)));
        }
        Ok(RunConfig { truncation: cli.truncation, out: cli.out.clone(), format: cli.format })
    }
}

fn existing(path: &Path) -> Result<&Path> {
    if !path.is_file() {
        return Err(Error::validation(format!("no such file: {}", path.display())));
    }
    Ok(path)
}

fn read(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(existing(path)?)?)
}

fn read_complex(path: &Path) -> Result<CellComplexDescription> {
    CellComplexDescription::from_json(&read(path)?).map_err(|e| e.context(path.display()))
}

fn rational_arg(text: &str, what: &str) -> Result<Rational> {
    parse_rational(text).map_err(|e| e.context(what))
}

/// A model file as written by `model build`, or a cell complex to build.
fn read_model(path: &Path, truncation: i32) -> Result<PersistenceQuillenModel> {
    let text = read(path)?;
    let value: serde_json::Value = io::from_json(&text, "input")?;
    if value.get("kind").and_then(|k| k.as_str()) == Some(MODEL_KIND) {
        return ModelFile::from_json(&text)?.to_model().map_err(|e| e.context(path.display()));
    }
    let desc = CellComplexDescription::from_json(&text).map_err(|e| e.context(path.display()))?;
    build_persistence_model(&desc, truncation, true)
}

fn read_barcode(path: &Path) -> Result<Barcode> {
    let text = read(path)?;
    let parsed = if text.trim_start().starts_with('{') {
        BarcodeFile::from_json(&text).map(|f| f.barcode())
    } else {
        Barcode::from_csv(&text)
    };
    parsed.map_err(|e| e.context(path.display()))
}

fn model_barcode(model: &PersistenceQuillenModel, kind: BarcodeKind) -> Result<Barcode> {
    let cutoff = model.cutoff();
    match kind {
        BarcodeKind::Pi => pi_barcode(&model.free, cutoff),
        BarcodeKind::H => match &model.minimal {
            Some(m) => h_barcode(m, cutoff),
            None => h_barcode(&model.free, cutoff),
        },
        BarcodeKind::Generators => match &model.minimal {
            Some(m) => generator_barcode(m, cutoff),
            None => Err(Error::validation("generator barcode needs the minimal model")),
        },
    }
}

fn kind_name(kind: BarcodeKind) -> &'static str {
    match kind {
        BarcodeKind::Pi => "pi",
        BarcodeKind::H => "h",
        BarcodeKind::Generators => "generators",
    }
}

fn render_barcode(name: &str, kind: &str, barcode: &Barcode, format: Format) -> Result<String> {
    match format {
        Format::Csv => Ok(barcode.to_csv()),
        Format::Json => io::to_json(&BarcodeFile::new(name, kind, barcode)),
    }
}

#[derive(Serialize)]
struct DistanceFile {
    format_version: u32,
    distance: Distance,
}

fn parse_delay(text: &str) -> Result<(usize, Rational)> {
    let (stage, delta) = text.split_once(':').ok_or_else(|| Error::parse(text, "expected STAGE:δ"))?;
    let stage = stage.trim().parse().map_err(|_| Error::parse(stage, "stage must be a nonnegative integer"))?;
    Ok((stage, rational_arg(delta.trim(), "delay")?))
}

/// Runs a parsed command line; returns the artifact text.
pub fn run(cli: &Cli) -> Result<String> {
    let cfg = RunConfig::from_cli(cli)?;
    let n = cfg.truncation;
    match &cli.command {
        Command::Model { action: ModelCommand::Build { complex, free_only } } => {
            if cfg.format != Format::Json {
                return Err(Error::validation("model files are JSON"));
            }
            let desc = read_complex(complex)?;
            log::info!("building `{}` at N = {n}", desc.name);
            let model = build_persistence_model(&desc, n, !free_only)?;
            ModelFile::from_model(&model).to_json()
        }
        Command::Barcode { input, kind } => {
            let model = read_model(input, n)?;
            let barcode = model_barcode(&model, *kind)?;
            render_barcode(&model.name, kind_name(*kind), &barcode, cfg.format)
        }
        Command::Distance { a, b, solver } => {
            let (x, y) = (read_barcode(a)?, read_barcode(b)?);
            let solver = match solver {
                SolverArg::Auto => Solver::Auto,
                SolverArg::Bipartite => Solver::Bipartite,
                SolverArg::Exhaustive => Solver::Exhaustive,
            };
            let d = interleaving_distance_with(&x, &y, solver);
            match cfg.format {
                Format::Csv => Ok(format!("{d}\n")),
                Format::Json => io::to_json(&DistanceFile { format_version: io::FORMAT_VERSION, distance: d }),
            }
        }
        Command::Stability { x, y, shift, delay, certificate_delta, input_bound } => {
            let xd = read_complex(x)?;
            let mut pair = match (y, shift, delay) {
                (Some(y), None, None) => plain_pair(&xd, &read_complex(y)?),
                (None, Some(s), None) => shift_pair(&xd, &rational_arg(s, "shift")?)?,
                (None, None, Some(d)) => {
                    let (stage, delta) = parse_delay(d)?;
                    delay_pair(&xd, stage, &delta)?
                }
                _ => return Err(Error::validation("give a second complex, --shift or --delay")),
            };
            if let Some(b) = input_bound {
                pair.input_bound = Some(rational_arg(b, "input bound")?);
            }
            let cert = certificate_delta.as_deref().map(|c| rational_arg(c, "certificate delta")).transpose()?;
            let report = stability_report(&pair, n, cert.as_ref())?;
            match cfg.format {
                Format::Json => report.to_json(),
                Format::Csv => {
                    let mut out = String::from("check,holds,detail\n");
                    for c in &report.checks {
                        out.push_str(&format!("\"{}\",{},\"{}\"\n", c.name, c.holds, c.detail));
                    }
                    Ok(out)
                }
            }
        }
        Command::Selftest { corpus, mutate } => {
            let dir = corpus.clone().unwrap_or_else(default_corpus);
            let result = selftest(&dir, n, *mutate)?;
            if let Some(out) = &cfg.out {
                result.write(out)?;
            }
            Ok(result.summary())
        }
    }
}

/// Parses `args`, runs, writes output; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli).and_then(|text| emit(&cli, &text)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match (&cli.out, &cli.command) {
        (Some(_), Command::Selftest { .. }) | (None, _) => {
            print!("{text}");
            Ok(())
        }
        (Some(path), _) => Ok(fs::write(path, text)?),
    }
}

pub fn default_corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

/// Outcome of `selftest`: named checks plus the artifacts they produced,
/// in a fixed order.
#[derive(Clone, Debug, Default)]
pub struct SelftestResult {
    pub passed: Vec<String>,
    pub artifacts: Vec<(String, String)>,
}

impl SelftestResult {
    fn pass(&mut self, name: impl Into<String>) {
        let name = name.into();
        log::info!("pass: {name}");
        self.passed.push(name);
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for p in &self.passed {
            out.push_str(&format!("PASS {p}\n"));
        }
        out.push_str(&format!("selftest: {} checks passed\n", self.passed.len()));
        out
    }

    /// Writes every artifact and `summary.txt` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        for (name, text) in &self.artifacts {
            fs::write(dir.join(name), text)?;
        }
        fs::write(dir.join("summary.txt"), self.summary())?;
        Ok(())
    }
}

fn expect(cond: bool, what: impl Into<String>, witness: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::invariant(what, witness))
    }
}

/// Contractible `𝕃(a, b)`, `|a| = 1`, `|b| = 2`, `db = a`: its
/// Chevalley–Eilenberg differential needs the bracket sign to square to zero.
fn contractible_pair(truncation: i32) -> Result<FreeDgl> {
    FreeDgl::from_text(&[("a", 1), ("b", 2)], &[("b", "a")], truncation)
}

/// `C⁎` squares to zero, the projection to `sV ⊕ ℚ` is a quasi-isomorphism,
/// and the Quillen construction recovers `H(L)` through `N − 2`.
fn dgl_invariants(name: &str, dgl: &FreeDgl, n: i32, opts: CeOptions, result: &mut SelftestResult) -> Result<()> {
    let finite = FiniteDgl::from_free(dgl);
    ce_construction_with(&finite, n, opts).map_err(|e| e.context(format!("{name}: cecobar d²=0")))?;
    result.pass(format!("{name}: cecobar d²=0"));
    let adj = adjunction_homology_check(&finite, n)?;
    expect(adj.agrees, format!("{name}: H(𝓛C⁎L) = H(L)"), format!("degree {:?}", adj.first_mismatch))?;
    result.pass(format!("{name}: H(𝓛C⁎L) = H(L) through degree {}", adj.cutoff));
    let q = ce_projection(dgl, n)?.is_quasi_iso(n - 2);
    expect(q.is_quasi_iso, format!("{name}: C⁎ → sV⊕ℚ quasi-iso"), format!("degree {:?}", q.first_failure))?;
    result.pass(format!("{name}: C⁎ → sV⊕ℚ quasi-iso"));
    Ok(())
}

fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>> {
    if !dir.is_dir() {
        return Err(Error::validation(format!("corpus directory not found: {}", dir.display())));
    }
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<Vec<_>>>()?
        .into_iter()
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::validation(format!("corpus directory has no complexes: {}", dir.display())));
    }
    Ok(files)
}

/// Compares against `golden/<stem>.<kind>.csv` when present. Golden bars
/// beyond the reliable range are a truncation error, not a mismatch.
fn check_golden(
    dir: &Path,
    stem: &str,
    kind: &str,
    computed: &Barcode,
    max_degree: i32,
    result: &mut SelftestResult,
) -> Result<()> {
    let path = dir.join("golden").join(format!("{stem}.{kind}.csv"));
    if !path.is_file() {
        return Ok(());
    }
    let golden = Barcode::from_csv(&fs::read_to_string(&path)?).map_err(|e| e.context(path.display()))?;
    if let Some(top) = golden.degrees().into_iter().max().filter(|&d| d > max_degree) {
        return Err(Error::truncation(format!(
            "golden {stem}.{kind}.csv has degree {top}; truncation reaches degree {max_degree}"
        )));
    }
    expect(
        &golden == computed,
        format!("{stem}: {kind} barcode matches golden"),
        format!("{} vs {}", computed.to_compact_string(), golden.to_compact_string()),
    )?;
    result.pass(format!("{stem}: {kind} barcode matches golden"));
    Ok(())
}

fn record_report(label: &str, pair: &FiltrationPair, n: i32, result: &mut SelftestResult) -> Result<()> {
    let report = stability_report(pair, n, None)?;
    if let Some(c) = report.violations().first() {
        return Err(Error::invariant(format!("{label}: {}", c.name), c.detail.clone()));
    }
    result.pass(format!(
        "{label}: d(pi) = {} = d(H∘M), d(H) = {}, certificate {}, input {}",
        report.pi_distance, report.h_distance, report.certificate_bound, report.input_bound
    ));
    result.artifacts.push((format!("{label}.report.json"), report.to_json()?));
    Ok(())
}

/// Golden corpus, sphere closed forms, per-model invariant suites and
/// stability reports for shift and delay pairs. Output is deterministic.
pub fn selftest(dir: &Path, n: i32, mutate: bool) -> Result<SelftestResult> {
    if n < 3 {
        return Err(Error::truncation(format!("truncation must be >= 3, got {n}")));
    }
    let opts = CeOptions { drop_bracket_sign: mutate };
    let mut result = SelftestResult::default();
    dgl_invariants("contractible 𝕃(a,b; db=a)", &contractible_pair(n)?, n, opts, &mut result)?;

    for k in 2..=7 {
        let model = sphere_model(k, n.max(12))?;
        let dims: Vec<(i32, usize)> = pi_star(&model.dgl).lie_dims().into_iter().filter(|(_, d)| *d > 0).collect();
        let closed: Vec<(i32, usize)> = sphere_homology_closed_form(k, n.max(12) - 1).into_iter().collect();
        expect(dims == closed, format!("S^{k}: H(𝕃(v)) closed form"), format!("{dims:?} vs {closed:?}"))?;
        result.pass(format!("S^{k}: H(𝕃(v)) closed form"));
    }

    for path in corpus_files(dir)? {
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("complex").to_string();
        let desc = read_complex(&path)?;
        let model = build_persistence_model(&desc, n, true).map_err(|e| e.context(&stem))?;
        let cutoff = model.cutoff();
        for (i, (free, data)) in model.free.objects().iter().zip(&model.minimal_data).enumerate() {
            let label = format!("{stem} stage {i}");
            dgl_invariants(&label, free, n, opts, &mut result)?;
            let h = h_star(&data.minimal)?.dims();
            let lin = suspended_linear_homology(free);
            expect(h == lin, format!("{label}: H_* = sV⊕ℚ"), format!("{h:?} vs {lin:?}"))?;
            result.pass(format!("{label}: H_* = sV⊕ℚ"));
        }
        let pi = pi_barcode(&model.free, cutoff)?;
        let h = model_barcode(&model, BarcodeKind::H)?;
        check_golden(dir, &stem, "pi", &pi, cutoff + 1, &mut result)?;
        check_golden(dir, &stem, "h", &h, cutoff + 1, &mut result)?;
        result.artifacts.push((format!("{stem}.model.json"), ModelFile::from_model(&model).to_json()?));
        result.artifacts.push((format!("{stem}.pi.csv"), pi.to_csv()));
        result.artifacts.push((format!("{stem}.h.csv"), h.to_csv()));

        for delta in [frac(1, 2), int(1), int(2)] {
            let label = format!("{stem}.shift-{}", format_rational(&delta).replace('/', "_"));
            record_report(&label, &shift_pair(&desc, &delta)?, n, &mut result)?;
        }
        if desc.stages.len() > 1 {
            let label = format!("{stem}.delay-last-1");
            record_report(&label, &delay_pair(&desc, desc.stages.len() - 1, &int(1))?, n, &mut result)?;
        }
    }
    Ok(result)
}
