//! The `uaext` command-line driver.
//!
//! Exit codes: 0 when every requested check passes, 1 when a mathematical
//! check fails (the artifact is still written), 2 for input or usage errors,
//! 3 when the solver or root finder gives up.

pub mod args;
pub mod expr;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::Parser;
use serde::{Deserialize, Serialize};
use uaext::averaging::{default_probes, equivalences_report, gce_certificate, ProbeSet, DEFAULT_RANDOM_PROBES};
use uaext::boundary::{check_peak_witness, choquet_csv, choquet_scan, peak_set_feasible};
use uaext::cert::{Certificate, RunManifest};
use uaext::cole::{cole_extend, cole_report, ColeSpec};
use uaext::funcsys::{FunctionSystem, FunctionTable};
use uaext::gallery::{
    build_basener, build_contraction_default, build_dfp, build_disk_algebra, build_tensor_disk, BasenerParams,
    ContractionAlgebra, ContractionParams, DfpParams, DiskGrid, TensorDiskParams,
};
use uaext::group_ext::{bicontractive_analyze, implemented_report, reconstruct_cole};
use uaext::io::{
    map_dto, read_json, to_json, ActionDto, BundleDocument, BundleDto, LoadedBundle, MeasureDto, OperatorDto, Pair,
    SystemDocument, TableDto,
};
use uaext::space::{FiniteSpace, DEFAULT_MERGE_TOL};
use uaext::{Error, Tolerances, C64};

use args::*;

/// Span tolerance used when a saved bundle is reassembled.
const LOAD_SPAN_TOL: f64 = 1e-8;

#[derive(Debug)]
enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Core(e) if e.is_computational() => 3,
            _ => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "{m}"),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Parses `argv` (program name first), runs the command, and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let outcome = match cli.threads {
        Some(0) => Err(usage("--threads must be positive")),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(usage(format!("cannot start thread pool: {e}"))),
        },
        None => dispatch(&cli),
    };
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(f) => {
            eprintln!("error: {f}");
            f.code()
        }
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    tol: Tolerances,
}

impl Ctx<'_> {
    fn manifest(&self, command: &str, params: &impl Serialize) -> RunManifest {
        let mut m = RunManifest::new(command, self.cli.seed);
        if let Ok(serde_json::Value::Object(map)) = serde_json::to_value(params) {
            m.parameters = map.into_iter().collect();
        }
        m.tolerances = self.tol.to_map();
        m
    }

    fn emit(&self, text: &str) -> Res<()> {
        match &self.cli.out {
            Some(path) => std::fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())
                    .and_then(|_| out.flush())
                    .map_err(|e| usage(format!("cannot write to standard output: {e}")))
            }
        }
    }

    fn emit_json(&self, value: &impl Serialize) -> Res<()> {
        if self.cli.format == Some(Format::Csv) {
            return Err(usage("this command writes JSON only"));
        }
        self.emit(&to_json(value)?)
    }

    fn probes(&self, system: &FunctionSystem) -> ProbeSet {
        default_probes(system, self.cli.seed, DEFAULT_RANDOM_PROBES)
    }

    /// Writes a certificate in the requested format and reports its verdict.
    fn certificate(&self, mut cert: Certificate, manifest: RunManifest) -> Res<bool> {
        eprint!("{}", cert.render_table());
        let pass = cert.passes();
        let text = match self.cli.format {
            Some(Format::Csv) => certificate_csv(&cert, &manifest)?,
            _ => {
                cert.manifest = Some(manifest);
                to_json(&cert)?
            }
        };
        self.emit(&text)?;
        Ok(pass)
    }
}

fn num(x: f64) -> String {
    if x.is_finite() {
        serde_json::to_string(&x).expect("finite float")
    } else {
        x.to_string()
    }
}

fn manifest_comment(manifest: &RunManifest) -> Res<String> {
    Ok(format!("# manifest {}\n", serde_json::to_string(manifest).map_err(Error::from)?))
}

fn certificate_csv(cert: &Certificate, manifest: &RunManifest) -> Res<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let io = |e: csv::Error| usage(format!("csv: {e}"));
    w.write_record(["certificate", "clause", "status", "residual", "tolerance", "probe_count", "note"])
        .map_err(io)?;
    for c in &cert.clauses {
        let status = match (c.informational, c.pass) {
            (true, _) => "info",
            (false, true) => "pass",
            (false, false) => "fail",
        };
        w.write_record([
            cert.name.as_str(),
            c.clause.as_str(),
            status,
            &num(c.residual),
            &num(c.tolerance),
            &c.probe_count.to_string(),
            c.note.as_deref().unwrap_or(""),
        ])
        .map_err(io)?;
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| usage(format!("csv: {e}")))?).expect("utf-8 fields");
    Ok(manifest_comment(manifest)? + &body)
}

fn dispatch(cli: &Cli) -> Res<bool> {
    let mut tol = Tolerances::default();
    if !(cli.tol_cert.is_finite() && cli.tol_cert > 0.0) {
        return Err(usage("--tol-cert must be a positive number"));
    }
    tol = tol.scaled(cli.tol_cert);
    if let Some(f) = cli.tol_feas {
        if !(f.is_finite() && f > 0.0) {
            return Err(usage("--tol-feas must be a positive number"));
        }
        tol.lp_feas = f;
    }
    let ctx = Ctx { cli, tol };
    match &cli.command {
        Command::Gallery {
            cmd: GalleryCmd::Build { which },
        } => gallery(&ctx, which),
        Command::Cole { cmd } => match cmd {
            ColeCmd::Extend { spec } => cole_extend_cmd(&ctx, spec),
            ColeCmd::Report(a) => {
                let lb = load_bundle(&a.bundle)?;
                let cb = lb.cole.ok_or_else(|| usage("bundle carries no Cole data"))?;
                let cert = cole_report(&cb, &ctx.probes(cb.bundle.b()), &ctx.tol)?;
                ctx.certificate(cert, ctx.manifest("cole report", a))
            }
        },
        Command::Verify { cmd } => verify(&ctx, cmd),
        Command::Group { cmd } => match cmd {
            GroupCmd::AnalyzeProjection(a) => analyze_projection(&ctx, a),
            GroupCmd::Reconstruct(a) => reconstruct(&ctx, a),
        },
        Command::Boundary { cmd } => match cmd {
            BoundaryCmd::Choquet(a) => choquet(&ctx, a),
            BoundaryCmd::Peakset(a) => peakset(&ctx, a),
        },
        Command::Report(a) => report(&ctx, a),
    }
}

fn load_bundle(path: &Path) -> Res<LoadedBundle> {
    let doc: BundleDocument = read_json(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(doc.bundle.load(DEFAULT_MERGE_TOL, LOAD_SPAN_TOL)?)
}

fn load_system_doc(path: &Path) -> Res<FunctionSystem> {
    let doc: SystemDocument = read_json(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(doc.load(DEFAULT_MERGE_TOL)?)
}

fn load_source(src: &SystemSource) -> Res<(FunctionSystem, Option<LoadedBundle>)> {
    match (&src.system, &src.bundle) {
        (Some(p), _) => Ok((load_system_doc(p)?, None)),
        (None, Some(p)) => {
            let lb = load_bundle(p)?;
            let sys = match src.side {
                Side::A => lb.bundle.a().clone(),
                Side::B => lb.bundle.b().clone(),
            };
            Ok((sys, Some(lb)))
        }
        (None, None) => Err(usage("give --system or --bundle")),
    }
}

fn bundle_document(manifest: RunManifest, dto: BundleDto) -> BundleDocument {
    BundleDocument {
        manifest: Some(manifest),
        bundle: dto,
    }
}

fn grid(g: &GridArgs) -> DiskGrid {
    DiskGrid {
        boundary: g.boundary,
        lattice: g.lattice,
        spacing: g.spacing,
    }
}

fn gallery(ctx: &Ctx, which: &Build) -> Res<bool> {
    let (name, doc) = match which {
        Build::Disk(a) => {
            let (sys, warnings) = build_disk_algebra(&grid(&a.grid), a.cap)?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            eprintln!("disk algebra: {} points, dimension {}", sys.space().len(), sys.dim());
            let doc = SystemDocument::new(&sys, Some(ctx.manifest("gallery build disk", a)));
            return ctx.emit_json(&doc).map(|_| true);
        }
        Build::Basener(a) => {
            let g = build_basener(&BasenerParams {
                r0: a.r0,
                r1: a.r1,
                n_r: a.nr,
                n_theta: a.ntheta,
                m: a.m,
                cap: a.cap,
            })?;
            ("basener", bundle_document(ctx.manifest("gallery build basener", a), BundleDto::from_parts(&g.bundle, g.action.as_ref(), None)))
        }
        Build::Dfp(a) => {
            let g = build_dfp(&DfpParams {
                grid: grid(&a.grid),
                base_cap: a.base_cap,
                n: a.n,
                m: a.m,
                cap: a.cap,
            })?;
            ("dfp", bundle_document(ctx.manifest("gallery build dfp", a), BundleDto::from_parts(&g.bundle, g.action.as_ref(), None)))
        }
        Build::TensorDisk(a) => {
            let g = build_tensor_disk(&TensorDiskParams {
                diameter: a.diameter,
                m: a.m,
                cap: a.cap,
            })?;
            (
                "tensor-disk",
                bundle_document(ctx.manifest("gallery build tensor-disk", a), BundleDto::from_parts(&g.bundle, g.action.as_ref(), None)),
            )
        }
        Build::Contraction(a) => {
            let a0 = match a.a0 {
                A0Kind::Constants => ContractionAlgebra::Constants,
                A0Kind::Full => ContractionAlgebra::Full,
                A0Kind::Polynomial => ContractionAlgebra::Polynomial { cap: a.a0_cap },
            };
            let b = build_contraction_default(&ContractionParams {
                circle: a.circle,
                k: a.k,
                a0,
            })?;
            ("contraction", bundle_document(ctx.manifest("gallery build contraction", a), BundleDto::from_parts(&b, None, None)))
        }
    };
    let bd = &doc.bundle;
    eprintln!(
        "{name}: |X| = {}, |Y| = {}, dim A = {}, dim B = {}",
        bd.base.points.len(),
        bd.cover.points.len(),
        bd.a.basis.len(),
        bd.b.basis.len()
    );
    ctx.emit_json(&doc)?;
    Ok(true)
}

/// A table given as an expression over coordinates, as `[re, im]` values,
/// or as an object holding either.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum TableInput {
    Expression(String),
    Values(Vec<Pair>),
    Object {
        #[serde(default)]
        name: Option<String>,
        #[serde(default)]
        values: Option<Vec<Pair>>,
        #[serde(default)]
        expression: Option<String>,
    },
}

impl TableInput {
    fn to_table(&self, space: &Arc<FiniteSpace>) -> Res<FunctionTable> {
        let (name, values, expression) = match self {
            TableInput::Expression(e) => (None, None, Some(e)),
            TableInput::Values(v) => (None, Some(v), None),
            TableInput::Object { name, values, expression } => (name.clone(), values.as_ref(), expression.as_ref()),
        };
        let table = match (values, expression) {
            (Some(v), None) => FunctionTable::new(space.clone(), v.iter().map(|p| C64::new(p[0], p[1])).collect())?,
            (None, Some(src)) => {
                let e = expr::parse(src).map_err(|m| usage(format!("expression `{src}`: {m}")))?;
                if let Some(k) = e.max_coord() {
                    if k >= space.arity() {
                        return Err(usage(format!("expression `{src}` uses coordinate {k} of {}", space.arity())));
                    }
                }
                let t = FunctionTable::from_fn(space.clone(), |z| e.eval(z));
                if t.values().iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
                    return Err(usage(format!("expression `{src}` is not finite on every point")));
                }
                t.named(src.clone())
            }
            _ => return Err(usage("a table needs exactly one of `values` or `expression`")),
        };
        Ok(match name {
            Some(n) => table.named(n),
            None => table,
        })
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum BaseSpec {
    Disk {
        disk: DiskGrid,
        cap: u32,
    },
    File {
        system: PathBuf,
    },
    Inline(SystemDocument),
}

/// `q(t) = t^n + h_(n-1) t^(n-1) + ... + h_0` over a base system.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ColeSpecFile {
    base: BaseSpec,
    /// `h_0, ..., h_(n-1)`, lowest degree first.
    coefficients: Vec<TableInput>,
    #[serde(default)]
    extension_degree_cap: Option<u32>,
}

fn cole_extend_cmd(ctx: &Ctx, spec_path: &Path) -> Res<bool> {
    let text = std::fs::read_to_string(spec_path).map_err(|e| usage(format!("{}: {e}", spec_path.display())))?;
    let spec: ColeSpecFile = serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", spec_path.display())))?;
    let base = match &spec.base {
        BaseSpec::Disk { disk, cap } => build_disk_algebra(disk, *cap)?.0,
        BaseSpec::File { system } => {
            let dir = spec_path.parent().unwrap_or(Path::new("."));
            load_system_doc(&dir.join(system))?
        }
        BaseSpec::Inline(doc) => doc.load(DEFAULT_MERGE_TOL)?,
    };
    let x = base.space().clone();
    let coeffs = spec.coefficients.iter().map(|c| c.to_table(&x)).collect::<Res<Vec<_>>>()?;
    let cs = ColeSpec::new(base, coeffs, spec.extension_degree_cap)?;
    let cb = cole_extend(&cs, DEFAULT_MERGE_TOL, LOAD_SPAN_TOL)?;
    eprintln!(
        "cole extension of degree {}: |X| = {}, |Y| = {}, dim B = {}",
        cb.degree(),
        x.len(),
        cb.bundle.pi().source().len(),
        cb.bundle.b().dim()
    );
    let params = serde_json::json!({ "spec": spec_path, "spec_contents": serde_json::from_str::<serde_json::Value>(&text).map_err(Error::from)? });
    let doc = bundle_document(ctx.manifest("cole extend", &params), BundleDto::from_parts(&cb.bundle, None, Some(&cb)));
    ctx.emit_json(&doc)?;
    Ok(true)
}

fn verify(ctx: &Ctx, cmd: &VerifyCmd) -> Res<bool> {
    match cmd {
        VerifyCmd::Gce(a) => {
            let lb = load_bundle(&a.bundle)?;
            let cert = gce_certificate(&lb.bundle, &ctx.probes(lb.bundle.b()), &ctx.tol)?;
            ctx.certificate(cert, ctx.manifest("verify gce", a))
        }
        VerifyCmd::Averaging(a) => {
            let lb = load_bundle(&a.bundle)?;
            let b = &lb.bundle;
            let t = b.t().ok_or_else(|| usage("bundle has no averaging operator"))?;
            let cert = equivalences_report(t, b.pi(), b.a(), &ctx.probes(b.b()), &ctx.tol)?;
            ctx.certificate(cert, ctx.manifest("verify averaging", a))
        }
        VerifyCmd::Implemented(a) => {
            let lb = load_bundle(&a.bundle)?;
            let action = lb.action.as_ref().ok_or_else(|| usage("bundle carries no group action"))?;
            let cert = implemented_report(&lb.bundle, action, &ctx.probes(lb.bundle.b()), &ctx.tol)?;
            ctx.certificate(cert, ctx.manifest("verify implemented", a))
        }
    }
}

fn report(ctx: &Ctx, a: &BundleArg) -> Res<bool> {
    let lb = load_bundle(&a.bundle)?;
    let b = &lb.bundle;
    let probes = ctx.probes(b.b());
    let mut cert = Certificate::new("report");
    let mut any = false;
    if let Some(t) = b.t() {
        cert.absorb("gce", gce_certificate(b, &probes, &ctx.tol)?);
        cert.absorb("averaging", equivalences_report(t, b.pi(), b.a(), &probes, &ctx.tol)?);
        any = true;
    }
    if let Some(action) = &lb.action {
        cert.absorb("implemented", implemented_report(b, action, &probes, &ctx.tol)?);
        any = true;
    }
    if let Some(cb) = &lb.cole {
        cert.absorb("cole", cole_report(cb, &probes, &ctx.tol)?);
        any = true;
    }
    if !any {
        return Err(usage("bundle has no operator, action, or Cole data to check"));
    }
    ctx.certificate(cert, ctx.manifest("report", a))
}

#[derive(Debug, Serialize)]
struct ProjectionReport {
    manifest: RunManifest,
    is_bicontractive: bool,
    rho: Option<Vec<usize>>,
    action: Option<ActionDto>,
    certificate: Certificate,
}

fn analyze_projection(ctx: &Ctx, a: &ProjectionArgs) -> Res<bool> {
    let lb = load_bundle(&a.bundle)?;
    let y = lb.bundle.pi().source().clone();
    let p = match &a.projection {
        Some(path) => {
            let dto: OperatorDto = read_json(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            dto.to_operator(y.clone(), y)?
        }
        None => lb.bundle.projection()?,
    };
    let an = bicontractive_analyze(&p, lb.bundle.b(), &ctx.probes(lb.bundle.b()), &ctx.tol)?;
    eprint!("{}", an.certificate.render_table());
    let out = ProjectionReport {
        manifest: ctx.manifest("group analyze-projection", a),
        is_bicontractive: an.is_bicontractive,
        rho: an.rho,
        action: an.action.map(|g| ActionDto {
            elements: g.elements().to_vec(),
        }),
        certificate: an.certificate,
    };
    ctx.emit_json(&out)?;
    Ok(out.is_bicontractive)
}

#[derive(Debug, Serialize)]
struct ReconstructionReport {
    manifest: RunManifest,
    matched: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    collision: Option<(String, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    psi: Option<uaext::io::MapDto>,
    certificate: Certificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    cole: Option<BundleDto>,
}

fn reconstruct(ctx: &Ctx, a: &ReconstructArgs) -> Res<bool> {
    let lb = load_bundle(&a.bundle)?;
    let b = &lb.bundle;
    let text = std::fs::read_to_string(&a.h0).map_err(|e| usage(format!("{}: {e}", a.h0.display())))?;
    let input: TableInput = serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", a.h0.display())))?;
    let h0 = input.to_table(b.pi().source())?;
    let p = b.projection()?;
    let an = bicontractive_analyze(&p, b.b(), &ctx.probes(b.b()), &ctx.tol)?;
    let manifest = ctx.manifest("group reconstruct", a);
    let Some(rho) = an.rho.filter(|_| an.is_bicontractive) else {
        eprint!("{}", an.certificate.render_table());
        eprintln!("projection is not bicontractive; nothing to reconstruct");
        ctx.emit_json(&ReconstructionReport {
            manifest,
            matched: false,
            collision: None,
            psi: None,
            certificate: an.certificate,
            cole: None,
        })?;
        return Ok(false);
    };
    let rec = reconstruct_cole(b, &rho, &h0, a.generated_by_h0, DEFAULT_MERGE_TOL, &ctx.tol)?;
    eprint!("{}", rec.certificate.render_table());
    let pass = rec.matched && rec.certificate.passes();
    ctx.emit_json(&ReconstructionReport {
        manifest,
        matched: rec.matched,
        collision: rec.collision,
        psi: rec.psi.as_ref().map(map_dto),
        certificate: rec.certificate,
        cole: Some(BundleDto::from_parts(&rec.cole.bundle, None, Some(&rec.cole))),
    })?;
    Ok(pass)
}

#[derive(Debug, Serialize)]
struct ChoquetPoint {
    label: String,
    escaping_mass: f64,
    is_choquet: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<MeasureDto>,
}

#[derive(Debug, Serialize)]
struct ChoquetDocument {
    manifest: RunManifest,
    points: Vec<ChoquetPoint>,
}

fn choquet(ctx: &Ctx, a: &ChoquetArgs) -> Res<bool> {
    let (sys, _) = load_source(&a.source)?;
    let reports = choquet_scan(&sys, &ctx.tol)?;
    let manifest = ctx.manifest("boundary choquet", a);
    let n = reports.iter().filter(|r| r.is_choquet).count();
    eprintln!("{n} of {} points are Choquet points", reports.len());
    match ctx.cli.format {
        Some(Format::Json) => {
            let points = reports
                .iter()
                .map(|r| ChoquetPoint {
                    label: sys.space().label(r.point).to_string(),
                    escaping_mass: r.escaping_mass,
                    is_choquet: r.is_choquet,
                    witness: if a.witnesses { r.witness.as_ref().map(MeasureDto::from_measure) } else { None },
                })
                .collect();
            ctx.emit_json(&ChoquetDocument { manifest, points })?;
        }
        _ => {
            if a.witnesses {
                return Err(usage("witnesses are written with --format json"));
            }
            ctx.emit(&(manifest_comment(&manifest)? + &choquet_csv(&sys, &reports)))?;
        }
    }
    Ok(true)
}

#[derive(Debug, Serialize)]
struct PeakOutcome {
    set: Vec<String>,
    feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<TableDto>,
    /// `max_E |f - 1|` and `max |f|` off `E` for the witness.
    #[serde(skip_serializing_if = "Option::is_none")]
    on_set: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    off_set: Option<f64>,
}

#[derive(Debug, Serialize)]
struct PeakDocument {
    manifest: RunManifest,
    margin: f64,
    polygon_sides: usize,
    peak: PeakOutcome,
    /// The preimage in the cover, when the set was given on the base of a bundle.
    #[serde(skip_serializing_if = "Option::is_none")]
    pullback: Option<PeakOutcome>,
}

fn peak_outcome(ctx: &Ctx, sys: &FunctionSystem, e: &[usize], margin: f64, sides: usize) -> Res<PeakOutcome> {
    let r = peak_set_feasible(sys, e, margin, sides, &ctx.tol)?;
    let check = r.witness.as_ref().map(|w| check_peak_witness(w, e));
    Ok(PeakOutcome {
        set: e.iter().map(|&i| sys.space().label(i).to_string()).collect(),
        feasible: r.feasible,
        witness: r.witness.as_ref().map(TableDto::from_table),
        on_set: check.map(|c| c.on_set),
        off_set: check.map(|c| c.off_set),
    })
}

fn peakset(ctx: &Ctx, a: &PeakArgs) -> Res<bool> {
    let (sys, lb) = load_source(&a.source)?;
    let e = a
        .set
        .iter()
        .map(|l| sys.space().index_of(l.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    let peak = peak_outcome(ctx, &sys, &e, a.margin, a.sides)?;
    let pullback = match (&lb, a.source.side) {
        (Some(lb), Side::A) => {
            let pre = lb.bundle.pi().preimage(&e);
            Some(peak_outcome(ctx, lb.bundle.b(), &pre, a.margin, a.sides)?)
        }
        _ => None,
    };
    let pass = peak.feasible && pullback.as_ref().is_none_or(|p| p.feasible);
    eprintln!(
        "peak set of {} points: {}{}",
        e.len(),
        if peak.feasible { "witness found" } else { "no witness at this margin" },
        match &pullback {
            Some(p) if p.feasible => "; preimage in the cover peaks",
            Some(_) => "; no witness for the preimage",
            None => "",
        }
    );
    ctx.emit_json(&PeakDocument {
        manifest: ctx.manifest("boundary peakset", a),
        margin: a.margin,
        polygon_sides: a.sides,
        peak,
        pullback,
    })?;
    Ok(pass)
}
