//! The `cwres` command line.
//!
//! Every command prints one JSON report on stdout. The exit code is 0 when
//! all checks the command performs pass, 1 when one fails, and 2 on invalid
//! input, in which case the report carries `{kind, location, message}`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::chain::{compare_complexes, sign_equivalence, HomologyResult};
use crate::construction::{
    check_all_filtration_squares, check_filtration_square, d_construction, CoverStrategy,
};
use crate::cw::{cellular_chain_complex, RegularCWComplex};
use crate::error::{Error, Result};
use crate::field::FieldConfig;
use crate::io::{read_json, ComplexFile, CwFile, IdealFile, PosetFile, ResolutionExport};
use crate::matrix::FieldMatrix;
use crate::monomial::{
    cw_lattice_report, gpw_betti, homogenize_cellular, homogenize_d, is_lattice_linear, is_minimal,
    is_resolution, lcm_lattice, lyubeznik_complex, scarf_complex, taylor_complex, MonomialIdeal,
    MultigradedComplex,
};
use crate::poset::Poset;

#[derive(Debug, Parser)]
#[command(
    name = "cwres",
    version,
    about = "Face posets, the construction D(P), and cellular resolutions"
)]
pub struct Cli {
    /// Coefficient field: `q` or `fp:<p>`.
    #[arg(long, global = true, default_value = "q")]
    pub field: String,
    /// Indent the JSON and print a short summary on stderr.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Strategy {
    SmallestId,
    LargestId,
}

impl From<Strategy> for CoverStrategy {
    fn from(s: Strategy) -> Self {
        match s {
            Strategy::SmallestId => CoverStrategy::SmallestId,
            Strategy::LargestId => CoverStrategy::LargestId,
        }
    }
}

/// One of the accepted complex-like inputs.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Regular CW-complex file.
    #[arg(long)]
    pub cw: Option<PathBuf>,
    /// Poset file.
    #[arg(long)]
    pub poset: Option<PathBuf>,
    /// Simplicial complex file.
    #[arg(long)]
    pub complex: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ResolveKind {
    #[arg(long)]
    pub taylor: bool,
    #[arg(long)]
    pub scarf: bool,
    #[arg(long)]
    pub lyubeznik: bool,
    /// `F(η)` on the lcm-lattice graded by its own monomials.
    #[arg(long)]
    pub poset: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Face poset and ranks of a CW-complex.
    FacePoset {
        #[arg(long)]
        cw: PathBuf,
    },
    /// Order complex of a poset or of one of its open intervals.
    OrderComplex {
        #[arg(long)]
        poset: PathBuf,
        /// Open interval `(a, b)`.
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        interval: Option<Vec<String>>,
    },
    /// Reduced homology: simplicial, cellular, or of an order complex.
    Homology {
        #[command(flatten)]
        source: Source,
    },
    IsCwPoset {
        #[arg(long)]
        poset: PathBuf,
    },
    DConstruction {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value = "smallest-id")]
        strategy: Strategy,
    },
    /// Compares `C(X)` with `D(P_X)` shifted by one.
    Compare {
        #[command(flatten)]
        source: Source,
    },
    /// Checks the filtration square for one `(element, j)` or all of them.
    FiltrationCheck {
        #[command(flatten)]
        source: Source,
        #[arg(long, requires = "j")]
        element: Option<String>,
        #[arg(long, requires = "element")]
        j: Option<usize>,
        #[arg(long, value_enum, default_value = "smallest-id")]
        strategy: Strategy,
    },
    LcmLattice {
        #[arg(long)]
        ideal: PathBuf,
    },
    /// Builds and checks a resolution of `R/N`.
    Resolve {
        #[arg(long)]
        ideal: PathBuf,
        #[command(flatten)]
        kind: ResolveKind,
        /// Generator order for `--lyubeznik`, comma separated indices.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
        /// Also write the resolution to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    VerifyResolution {
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long)]
        resolution: PathBuf,
    },
    Betti {
        #[arg(long)]
        ideal: PathBuf,
    },
    CwLatticeReport {
        #[arg(long)]
        ideal: PathBuf,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::FacePoset { .. } => "face-poset",
            Command::OrderComplex { .. } => "order-complex",
            Command::Homology { .. } => "homology",
            Command::IsCwPoset { .. } => "is-cw-poset",
            Command::DConstruction { .. } => "d-construction",
            Command::Compare { .. } => "compare",
            Command::FiltrationCheck { .. } => "filtration-check",
            Command::LcmLattice { .. } => "lcm-lattice",
            Command::Resolve { .. } => "resolve",
            Command::VerifyResolution { .. } => "verify-resolution",
            Command::Betti { .. } => "betti",
            Command::CwLatticeReport { .. } => "cw-lattice-report",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub kind: String,
    pub location: Option<String>,
    pub message: String,
}

impl From<&Error> for ErrorReport {
    fn from(e: &Error) -> Self {
        ErrorReport {
            kind: e.kind().to_string(),
            location: e.location(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub field: String,
    pub inputs: Vec<InputDigest>,
    pub ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

struct Outcome {
    ok: bool,
    result: Value,
    warnings: Vec<String>,
    summary: String,
}

impl Outcome {
    fn new(ok: bool, result: Value, summary: impl Into<String>) -> Self {
        Outcome {
            ok,
            result,
            warnings: Vec::new(),
            summary: summary.into(),
        }
    }
}

struct Context {
    field: FieldConfig,
    inputs: Vec<InputDigest>,
}

impl Context {
    fn load<T: serde::de::DeserializeOwned>(&mut self, path: &Path) -> Result<T> {
        let name = path.display().to_string();
        let (value, sha256) = read_json(path).map_err(|e| match e {
            Error::Json(j) => Error::Input {
                path: name.clone(),
                kind: "Json",
                line: Some(j.line()),
                reason: j.to_string(),
            },
            Error::Io(io) => Error::Input {
                path: name.clone(),
                kind: "Io",
                line: None,
                reason: io.to_string(),
            },
            other => other,
        })?;
        self.inputs.push(InputDigest { path: name, sha256 });
        Ok(value)
    }

    fn poset(&mut self, path: &Path) -> Result<Poset> {
        self.load::<PosetFile>(path)?.build()
    }

    fn cw(&mut self, path: &Path) -> Result<RegularCWComplex> {
        self.load::<CwFile>(path)?.build(self.field)
    }

    fn ideal(&mut self, path: &Path) -> Result<MonomialIdeal> {
        self.load::<IdealFile>(path)?.build()
    }

    /// A CW-complex from any source: posets must be CW-posets and
    /// simplicial complexes become one cell per face.
    fn cw_from(&mut self, s: &Source) -> Result<RegularCWComplex> {
        if let Some(p) = &s.cw {
            self.cw(p)
        } else if let Some(p) = &s.poset {
            let poset = self.poset(p)?;
            RegularCWComplex::from_face_poset(&poset, self.field)
        } else {
            let k = self
                .load::<ComplexFile>(s.complex.as_ref().expect("clap enforces one source"))?
                .build();
            Ok(RegularCWComplex::from_simplicial(&k))
        }
    }

    /// A poset with least element from any source.
    fn poset_from(&mut self, s: &Source) -> Result<Poset> {
        match &s.poset {
            Some(p) => self.poset(p),
            None => Ok(self.cw_from(s)?.poset().clone()),
        }
    }
}

fn betti_json(h: &HomologyResult) -> Value {
    let map: BTreeMap<String, usize> = h
        .degrees
        .iter()
        .map(|d| (d.degree.to_string(), d.betti))
        .collect();
    json!(map)
}

fn matrix_json(m: &FieldMatrix) -> Value {
    json!((0..m.rows())
        .map(|r| m.row(r).iter().map(|s| s.to_string()).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn resolution_outcome(
    f: &MultigradedComplex,
    ideal: &MonomialIdeal,
    include_complex: bool,
) -> Result<Outcome> {
    let verdict = is_resolution(f, ideal)?;
    let minimal = is_minimal(f);
    let linear = is_lattice_linear(f, ideal);
    let mut out = Outcome::new(
        verdict.is_resolution,
        json!({
            "ranks": f.ranks(),
            "is_resolution": verdict.is_resolution,
            "verdict": verdict,
            "is_minimal": minimal,
            "is_lattice_linear": linear.lattice_linear,
            "lattice_linear_witnesses": linear.witnesses,
        }),
        format!(
            "ranks {:?}; resolution: {}; minimal: {}; lattice-linear: {}",
            f.ranks(),
            verdict.is_resolution,
            minimal,
            linear.lattice_linear
        ),
    );
    if include_complex {
        out.result["resolution"] = serde_json::to_value(f.to_export())?;
    }
    if !minimal {
        out.warnings.push(
            "complex is not minimal; lattice-linearity is defined for minimal resolutions".into(),
        );
    }
    Ok(out)
}

fn execute(cmd: &Command, cx: &mut Context) -> Result<Outcome> {
    let field = cx.field;
    Ok(match cmd {
        Command::FacePoset { cw } => {
            let x = cx.cw(cw)?;
            let fp = x.face_poset();
            let ranks: BTreeMap<&str, usize> = (0..fp.poset.len())
                .map(|i| (fp.poset.id(i), fp.rank.rank(i)))
                .collect();
            Outcome::new(
                true,
                json!({ "poset": PosetFile::from_poset(&fp.poset), "ranks": ranks, "f_vector": x.f_vector() }),
                format!("f-vector {:?}", x.f_vector()),
            )
        }
        Command::OrderComplex { poset, interval } => {
            let p = cx.poset(poset)?;
            let k = match interval.as_deref() {
                Some([a, b]) => {
                    let (ia, ib) = (p.index_of(a)?, p.index_of(b)?);
                    if !p.lt(ia, ib) {
                        return Err(Error::NotComparable {
                            a: a.clone(),
                            b: b.clone(),
                        });
                    }
                    p.order_complex_on(&p.open_interval_elements(ia, ib))
                }
                _ => p.order_complex(),
            };
            Outcome::new(
                true,
                json!({ "f_vector": k.f_vector(), "complex": ComplexFile::from_complex(&k) }),
                format!("f-vector {:?}", k.f_vector()),
            )
        }
        Command::Homology { source } => {
            let h = if let Some(path) = &source.complex {
                cx.load::<ComplexFile>(path)?
                    .build()
                    .reduced_chain_complex(field)
                    .homology()?
            } else if let Some(path) = &source.poset {
                cx.poset(path)?
                    .order_complex()
                    .reduced_chain_complex(field)
                    .homology()?
            } else {
                cellular_chain_complex(&cx.cw_from(source)?, field)?.homology()?
            };
            Outcome::new(
                true,
                json!({ "betti": betti_json(&h) }),
                format!("betti {:?}", h.betti_numbers()),
            )
        }
        Command::IsCwPoset { poset } => {
            let report = cx.poset(poset)?.is_cw_poset(field);
            let summary = match &report.witness {
                Some(w) => format!("not a CW-poset, witness {w}"),
                None if report.is_cw => "CW-poset (homology-sphere certified)".to_string(),
                None => format!(
                    "not a CW-poset: {}",
                    report.reason.clone().unwrap_or_default()
                ),
            };
            Outcome::new(report.is_cw, serde_json::to_value(&report)?, summary)
        }
        Command::DConstruction { source, strategy } => {
            let p = cx.poset_from(source)?;
            let d = d_construction(&p, field, (*strategy).into())?;
            let h = d.is_complex.then(|| d.complex.homology()).transpose()?;
            let phi: Vec<Value> = (1..=d.max_degree())
                .map(|i| matrix_json(&d.phi(i)))
                .collect();
            let labels: Vec<&[String]> = (0..=d.max_degree())
                .map(|i| d.complex.labels(i as i32))
                .collect();
            Outcome::new(
                d.is_complex,
                json!({
                    "dims": d.dims(),
                    "is_complex": d.is_complex,
                    "ranks": (1..=d.max_degree()).map(|i| d.complex.diff_rank(i as i32)).collect::<Vec<_>>(),
                    "labels": labels,
                    "phi": phi,
                    "betti": h.as_ref().map(betti_json),
                    "strategy": d.strategy,
                }),
                format!("dims {:?}; complex: {}", d.dims(), d.is_complex),
            )
        }
        Command::Compare { source } => {
            let x = cx.cw_from(source)?;
            let c = cellular_chain_complex(&x, field)?;
            let d = d_construction(x.poset(), field, CoverStrategy::SmallestId)?;
            let cmp = compare_complexes(&c, &d.complex, 1);
            let signs = sign_equivalence(&c, &d.complex, 1).is_some();
            Outcome::new(
                cmp.isomorphic,
                json!({
                    "isomorphic": cmp.isomorphic,
                    "dims": c.dims(),
                    "d_dims": d.dims(),
                    "sign_equivalent": signs,
                    "comparison": cmp,
                }),
                format!("isomorphic: {}; dims {:?}", cmp.isomorphic, c.dims()),
            )
        }
        Command::FiltrationCheck {
            source,
            element,
            j,
            strategy,
        } => {
            let p = cx.poset_from(source)?;
            let d = d_construction(&p, field, (*strategy).into())?;
            let checks = match (element, j) {
                (Some(e), Some(j)) => vec![check_filtration_square(&p, &d, p.index_of(e)?, *j)?],
                _ => check_all_filtration_squares(&p, &d)?,
            };
            let holds = checks.iter().all(|c| c.holds);
            let classes: usize = checks.iter().map(|c| c.classes_checked).sum();
            Outcome::new(
                holds,
                json!({ "holds": holds, "classes_checked": classes, "checks": checks }),
                format!(
                    "{} squares, {classes} classes, all hold: {holds}",
                    checks.len()
                ),
            )
        }
        Command::LcmLattice { ideal } => {
            let i = cx.ideal(ideal)?;
            let l = lcm_lattice(&i);
            let report = l.poset.is_cw_poset(field);
            Outcome::new(
                true,
                json!({
                    "poset": PosetFile::from_poset(&l.poset),
                    "monomials": l.monomials,
                    "is_cw": report.is_cw,
                    "witness": report.witness,
                }),
                format!("{} elements; CW-poset: {}", l.len(), report.is_cw),
            )
        }
        Command::Resolve {
            ideal,
            kind,
            order,
            out,
        } => {
            let i = cx.ideal(ideal)?;
            let f = if kind.taylor {
                homogenize_cellular(&taylor_complex(&i), field)?
            } else if kind.scarf {
                homogenize_cellular(&scarf_complex(&i), field)?
            } else if kind.lyubeznik {
                homogenize_cellular(&lyubeznik_complex(&i, order.as_deref())?, field)?
            } else {
                let l = lcm_lattice(&i);
                let d = d_construction(&l.poset, field, CoverStrategy::SmallestId)?;
                homogenize_d(&l.poset, &d, &l.monomials)?
            };
            if let Some(path) = out {
                std::fs::write(path, serde_json::to_string_pretty(&f.to_export())?)?;
            }
            resolution_outcome(&f, &i, true)?
        }
        Command::VerifyResolution { ideal, resolution } => {
            let i = cx.ideal(ideal)?;
            let export: ResolutionExport = cx.load(resolution)?;
            let f = MultigradedComplex::from_export(&export)?;
            resolution_outcome(&f, &i, false)?
        }
        Command::Betti { ideal } => {
            let b = gpw_betti(&cx.ideal(ideal)?, field)?;
            Outcome::new(
                true,
                json!({ "total": b.total, "entries": b.entries }),
                format!("total {:?}", b.total),
            )
        }
        Command::CwLatticeReport { ideal } => {
            let r = cw_lattice_report(&cx.ideal(ideal)?, field)?;
            let ok = r.is_cw && r.lattice_linear_certified;
            let summary = match &r.witness {
                Some(w) => format!("lcm-lattice is not a CW-poset, witness {w}"),
                None => format!(
                    "CW lcm-lattice; minimal cellular resolution: {}",
                    r.lattice_linear_certified
                ),
            };
            Outcome::new(ok, serde_json::to_value(&r)?, summary)
        }
    })
}

fn configure_threads() {
    if let Some(n) = std::env::var("CWRES_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        // a second call in the same process fails harmlessly
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
}

/// Runs a parsed command; returns the text for stdout, an optional summary
/// for stderr, and the exit code.
pub fn run(cli: &Cli) -> (String, Option<String>, i32) {
    configure_threads();
    let start = Instant::now();
    let mut report = RunReport {
        command: cli.command.name().to_string(),
        field: cli.field.clone(),
        inputs: Vec::new(),
        ok: false,
        result: None,
        warnings: Vec::new(),
        error: None,
        timing_ms: None,
    };
    let mut summary = None;
    let code = match FieldConfig::parse(&cli.field) {
        Err(e) => {
            report.error = Some((&e).into());
            2
        }
        Ok(field) => {
            report.field = field.name();
            let mut cx = Context {
                field,
                inputs: Vec::new(),
            };
            let outcome = execute(&cli.command, &mut cx);
            report.inputs = cx.inputs;
            match outcome {
                Ok(o) => {
                    report.ok = o.ok;
                    report.result = Some(o.result);
                    report.warnings = o.warnings;
                    summary = Some(format!("{}: {}", report.command, o.summary));
                    if o.ok {
                        0
                    } else {
                        1
                    }
                }
                Err(e) => {
                    summary = Some(format!("{}: error: {e}", report.command));
                    report.error = Some((&e).into());
                    2
                }
            }
        }
    };
    if cli.timing {
        report.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    let text = if cli.pretty {
        serde_json::to_string_pretty(&report)
    } else {
        serde_json::to_string(&report)
    }
    .expect("reports serialize");
    (text, summary.filter(|_| cli.pretty), code)
}

/// Parses and runs an argument list whose first item is the program name.
/// Usage errors come back as their message with exit code 2.
pub fn run_args<I, T>(args: I) -> (String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => {
            let (text, _, code) = run(&cli);
            (text, code)
        }
        Err(e) => (e.to_string(), 2),
    }
}

/// Entry point used by the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (text, summary, code) = run(&cli);
    println!("{text}");
    if let Some(s) = summary {
        eprintln!("{s}");
    }
    code
}
