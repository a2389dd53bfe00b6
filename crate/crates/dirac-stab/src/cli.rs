//! Command dispatcher behind the `dirac-stab` binary. Every command
//! reads one input document, runs the requested computation, and emits
//! a deterministic report. Exit codes: 0 success, 1 semantic failure,
//! 2 input error.

use crate::courant;
use crate::doc::{DocError, InputDocument};
use crate::gauge::{self, FloatAlgebra};
use crate::linfty::GradedSubspace;
use crate::rat::{to_f64, Rat};
use crate::report::{digest, Format, Report};
use crate::stability::{self, Verdict};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "dirac-stab",
    version,
    about = "Deformations and stability of Dirac structures at desk scale"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Table,
    Json,
}

#[derive(Debug, Args)]
struct Common {
    /// Input document (JSON, one object with a `kind` field).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "table")]
    format: OutputFormat,
    /// Seed recorded in the report; defaults to DIRAC_STAB_SEED or 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Numeric tolerance for floating-point checks.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Structural checks for the input kind (Jacobi, axioms, closedness).
    Verify {
        #[command(flatten)]
        common: Common,
    },
    /// Cohomology tables (quotient complexes, germ complexes, CE).
    Cohomology {
        #[command(flatten)]
        common: Common,
        /// Restrict the table to one degree.
        #[arg(long)]
        degree: Option<i32>,
        /// Named subalgebra to quotient by (linfty documents).
        #[arg(long)]
        subalgebra: Option<String>,
        /// Named Maurer-Cartan element to twist by.
        #[arg(long)]
        mc: Option<String>,
    },
    /// Fixed-point stability verdict.
    Stability {
        #[command(flatten)]
        common: Common,
        /// Rational coordinates "x1,...,xm" (poly_algebroid documents).
        #[arg(long)]
        point: Option<String>,
    },
    /// Gauge flow of a deformation element along a parameter.
    Flow {
        #[command(flatten)]
        common: Common,
        /// Named starting element (default: zero).
        #[arg(long)]
        mc: Option<String>,
        /// Named flow parameter (default: zero).
        #[arg(long)]
        xi: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
    },
    /// Newton rectification of a perturbed Maurer-Cartan element.
    Rectify {
        #[command(flatten)]
        common: Common,
        /// Named exact Maurer-Cartan element.
        #[arg(long)]
        q: String,
        /// Named perturbed starting element.
        #[arg(long)]
        qprime: String,
        /// Named subalgebra W.
        #[arg(long)]
        subalgebra: String,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[arg(long, default_value_t = 20)]
        max_iter: usize,
    },
}

enum CliError {
    /// Unreadable, unparseable, or schematically invalid input: exit 2.
    Input(String),
    /// The computation ran and the answer is a failure: exit 1.
    Semantic(Report),
}

impl From<DocError> for CliError {
    fn from(e: DocError) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Options shared by the CLI and the C interface; JSON-deserializable
/// so callers can pass them as one document.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunOptions {
    pub format: Format,
    pub seed: Option<u64>,
    pub tol: f64,
    pub degree: Option<i32>,
    pub subalgebra: Option<String>,
    pub mc: Option<String>,
    pub xi: Option<String>,
    pub t: f64,
    pub step: f64,
    pub q: Option<String>,
    pub qprime: Option<String>,
    pub max_iter: usize,
    pub point: Option<String>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            format: Format::Table,
            seed: None,
            tol: 1e-6,
            degree: None,
            subalgebra: None,
            mc: None,
            xi: None,
            t: 1.0,
            step: 1e-3,
            q: None,
            qprime: None,
            max_iter: 20,
            point: None,
        }
    }
}

/// Runs one command on raw document bytes; returns (exit code, stdout,
/// stderr). This is the whole tool minus argument parsing and file IO.
pub fn run_document(command: &str, input: &[u8], opts: &RunOptions) -> (i32, String, String) {
    let outcome = load(input, opts).and_then(|c| match command {
        "verify" => verify(&c),
        "cohomology" => cohomology(&c, opts.degree, opts.subalgebra.as_deref(), opts.mc.as_deref()),
        "stability" => cmd_stability(&c, opts.point.as_deref()),
        "flow" => flow(&c, opts.mc.as_deref(), opts.xi.as_deref(), opts.t, opts.step),
        "rectify" => {
            let need = |o: &Option<String>, what: &str| {
                o.clone()
                    .ok_or_else(|| CliError::Input(format!("rectify needs `{what}`")))
            };
            let q = need(&opts.q, "q")?;
            let qp = need(&opts.qprime, "qprime")?;
            let w = need(&opts.subalgebra, "subalgebra")?;
            rectify(&c, &q, &qp, &w, opts.step, opts.max_iter)
        }
        other => Err(CliError::Input(format!("unknown command `{other}`"))),
    });
    match outcome {
        Ok(report) => (
            if report.passed() { 0 } else { 1 },
            report.render(opts.format),
            String::new(),
        ),
        Err(CliError::Semantic(report)) => (1, report.render(opts.format), String::new()),
        Err(CliError::Input(msg)) => (2, String::new(), format!("error: {msg}\n")),
    }
}

/// Runs the CLI on explicit arguments; returns (exit code, stdout,
/// stderr). The binary and the golden-file tests share this entry.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // clap handles --help/--version with success exit codes
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, if code == 0 { e.to_string() } else { String::new() }, if code == 0 { String::new() } else { e.to_string() });
        }
    };
    let (name, common, opts) = match cli.command {
        Command::Verify { common } => {
            let opts = options_from(&common);
            ("verify", common, opts)
        }
        Command::Cohomology {
            common,
            degree,
            subalgebra,
            mc,
        } => {
            let mut opts = options_from(&common);
            opts.degree = degree;
            opts.subalgebra = subalgebra;
            opts.mc = mc;
            ("cohomology", common, opts)
        }
        Command::Stability { common, point } => {
            let mut opts = options_from(&common);
            opts.point = point;
            ("stability", common, opts)
        }
        Command::Flow {
            common,
            mc,
            xi,
            t,
            step,
        } => {
            let mut opts = options_from(&common);
            opts.mc = mc;
            opts.xi = xi;
            opts.t = t;
            opts.step = step;
            ("flow", common, opts)
        }
        Command::Rectify {
            common,
            q,
            qprime,
            subalgebra,
            step,
            max_iter,
        } => {
            let mut opts = options_from(&common);
            opts.q = Some(q);
            opts.qprime = Some(qprime);
            opts.subalgebra = Some(subalgebra);
            opts.step = step;
            opts.max_iter = max_iter;
            ("rectify", common, opts)
        }
    };
    match std::fs::read(&common.input) {
        Ok(bytes) => run_document(name, &bytes, &opts),
        Err(e) => (
            2,
            String::new(),
            format!("error: {}: {e}\n", common.input.display()),
        ),
    }
}

fn options_from(common: &Common) -> RunOptions {
    RunOptions {
        format: match common.format {
            OutputFormat::Table => Format::Table,
            OutputFormat::Json => Format::Json,
        },
        seed: common.seed,
        tol: common.tol,
        ..RunOptions::default()
    }
}

struct Ctx {
    doc: InputDocument,
    digest: String,
    seed: u64,
    tol: f64,
}

fn load(bytes: &[u8], opts: &RunOptions) -> Result<Ctx, CliError> {
    let text = std::str::from_utf8(bytes)
        .map_err(|_| CliError::Input("input is not UTF-8".into()))?;
    let doc = InputDocument::from_json(text)?;
    let seed = opts
        .seed
        .or_else(|| std::env::var("DIRAC_STAB_SEED").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(0);
    Ok(Ctx {
        doc,
        digest: digest(bytes),
        seed,
        tol: opts.tol,
    })
}

fn fmtf(x: f64) -> String {
    format!("{x:.9e}")
}

fn verify(c: &Ctx) -> Result<Report, CliError> {
    let mut rep = Report::new("verify", &c.digest, c.seed);
    match &c.doc {
        InputDocument::Linfty(doc) => {
            let data = doc.build()?;
            let depth = data.alg.default_jacobi_depth();
            let jac = data.alg.check_jacobi(depth);
            let s = rep.section("linfty");
            s.row("dim", data.alg.space.dim());
            s.row("jacobi depth", depth);
            s.row("jacobi failures", jac.failures.len());
            if !jac.passed() {
                rep.fail();
            }
        }
        InputDocument::QuadraticLie(doc) => {
            if doc.pairing.is_none() && doc.twist.is_none() {
                // plain Lie algebra: Jacobi is verified at construction
                let g = doc.lie_algebra()?;
                rep.section("lie algebra")
                    .row("dim", g.dim)
                    .row("jacobi", "pass");
            } else {
                let e = doc.ambient()?;
                let axioms = courant::check_courant_axioms(&e);
                let s = rep.section("courant axioms");
                s.row("dim", e.dim);
                s.row("leibniz failures", axioms.c1_failures.len());
                s.row("invariance failures", axioms.c4_failures.len());
                s.row("antisymmetry failures", axioms.c5_failures.len());
                s.row("pairing nondegenerate", !axioms.degenerate_pairing);
                if !axioms.passed() {
                    rep.fail();
                }
                for (name, basis) in doc.dirac_bases()? {
                    let (ok, witness) = courant::is_dirac(&e, &basis);
                    let s = rep.section(&format!("dirac `{name}`"));
                    s.row("dirac", ok);
                    if let Some(w) = witness {
                        s.row("witness", w);
                        rep.fail();
                    }
                }
            }
        }
        InputDocument::DiracSplit(doc) => {
            let e = doc.ambient.ambient()?;
            let axioms = courant::check_courant_axioms(&e);
            rep.section("courant axioms")
                .row("dim", e.dim)
                .row("passed", axioms.passed());
            if !axioms.passed() {
                rep.fail();
            }
            let a = doc.dirac_basis()?;
            let k = doc.complement_basis()?;
            let split = courant::split_data(&e, &a, k.as_deref())
                .map_err(|err| CliError::Input(err.to_string()))?;
            let s = rep.section("split");
            s.row("rank", split.n);
            s.row("reconstruction", courant::verify_reconstruction(&e, &split));
            let def = courant::deformation_algebra(&split);
            let depth = def.alg.default_jacobi_depth();
            let jac = def.alg.check_jacobi(depth);
            s.row("deformation jacobi depth", depth);
            s.row("deformation jacobi failures", jac.failures.len());
            if !jac.passed() || !courant::verify_reconstruction(&e, &split) {
                rep.fail();
            }
        }
        InputDocument::PolyAlgebroid(doc) => {
            let data = doc.build()?;
            let ar = crate::algebroid::check_algebroid(&data.algebroid);
            let s = rep.section("algebroid");
            s.row("base dim", data.algebroid.base_dim);
            s.row("rank", data.algebroid.rank);
            s.row("antisymmetry failures", ar.antisymmetry_failures.len());
            s.row("anchor morphism failures", ar.anchor_morphism_failures.len());
            s.row("jacobi failures", ar.jacobi_failures.len());
            if !ar.passed() {
                rep.fail();
            }
            let closed = crate::algebroid::d_b(&data.algebroid, &data.twist).is_zero();
            let mut residual_zero = true;
            {
                let s = rep.section("twisted poisson");
                s.row("twist closed", closed);
                if closed {
                    let res = crate::algebroid::twisted_poisson_residual(
                        &data.algebroid,
                        &data.pi,
                        &data.twist,
                    )
                    .map_err(|e| CliError::Input(e.to_string()))?;
                    residual_zero = res.is_zero();
                    s.row("residual zero", residual_zero);
                    if let Some(p) = &data.point {
                        s.row(
                            "fixed point",
                            crate::algebroid::is_fixed_point(&data.algebroid, &data.pi, p),
                        );
                    }
                }
            }
            if !closed || !residual_zero {
                rep.fail();
            }
        }
        InputDocument::Germ(doc) => {
            let germ = doc.build()?;
            let s = rep.section("germ");
            s.row("fiber dim", germ.dim_e);
            s.row("fixed point", germ.is_fixed_point());
            let h = stability::ideal_h(&germ).map_err(|e| CliError::Input(e.to_string()))?;
            s.row("ideal dim", h.len());
            let les = stability::les_consistency(&germ)
                .map_err(|e| CliError::Input(e.to_string()))?;
            s.row("les consistent", les);
            if !germ.is_fixed_point() || !les {
                rep.fail();
            }
        }
        InputDocument::CartanDirac(doc) => {
            let (g, metric) = doc.build()?;
            let germ = stability::cartan_dirac_germ(&g, &metric)
                .map_err(|e| CliError::Input(format!("metric rejected: {e}")))?;
            rep.section("cartan-dirac germ")
                .row("algebra dim", g.dim)
                .row("fiber dim", germ.dim_e)
                .row("fixed point", germ.is_fixed_point());
        }
    }
    Ok(rep)
}

fn cohomology(
    c: &Ctx,
    degree: Option<i32>,
    subalgebra: Option<&str>,
    mc: Option<&str>,
) -> Result<Report, CliError> {
    let mut rep = Report::new("cohomology", &c.digest, c.seed);
    let table = |rep: &mut Report, cx: &crate::linfty::ChainComplex| {
        let s = rep.section("cohomology");
        let degrees: Vec<i32> = match degree {
            Some(d) => vec![d],
            None => cx.dims.keys().copied().collect(),
        };
        for d in degrees {
            s.row(&format!("dim H^{d}"), cx.cohomology(d).0);
        }
    };
    match &c.doc {
        InputDocument::Linfty(doc) => {
            let data = doc.build()?;
            let q = match mc {
                None => crate::graded::GradedVector::zero(),
                Some(name) => data
                    .elements
                    .get(name)
                    .cloned()
                    .ok_or_else(|| CliError::Input(format!("unknown element `{name}`")))?,
            };
            let res = data
                .alg
                .mc_residual(&q)
                .map_err(|e| CliError::Input(e.to_string()))?;
            if !res.is_zero() {
                rep.fail();
                rep.section("refused")
                    .row("reason", "element is not Maurer-Cartan")
                    .row("residual", format!("{res:?}"));
                return Err(CliError::Semantic(rep));
            }
            let w = match subalgebra {
                None => GradedSubspace::zero(&data.alg.space),
                Some(name) => data
                    .subalgebras
                    .get(name)
                    .cloned()
                    .ok_or_else(|| CliError::Input(format!("unknown subalgebra `{name}`")))?,
            };
            let cx = data
                .alg
                .quotient_complex(&w, &q)
                .map_err(|e| CliError::Input(e.to_string()))?;
            table(&mut rep, &cx);
        }
        InputDocument::QuadraticLie(doc) if doc.pairing.is_none() && doc.twist.is_none() => {
            let g = doc.lie_algebra()?;
            let cx = stability::ce_complex(&g);
            table(&mut rep, &cx);
        }
        InputDocument::DiracSplit(doc) => {
            let e = doc.ambient.ambient()?;
            let a = doc.dirac_basis()?;
            let split = courant::split_data(&e, &a, doc.complement_basis()?.as_deref())
                .map_err(|e| CliError::Input(e.to_string()))?;
            let def = courant::deformation_algebra(&split);
            let q = match mc {
                None => crate::graded::GradedVector::zero(),
                Some(name) => def.to_vec(&doc.element(name)?),
            };
            let res = def
                .alg
                .mc_residual(&q)
                .map_err(|e| CliError::Input(e.to_string()))?;
            if !res.is_zero() {
                rep.fail();
                rep.section("refused")
                    .row("reason", "element is not Maurer-Cartan");
                return Err(CliError::Semantic(rep));
            }
            let w = GradedSubspace::zero(&def.alg.space);
            let cx = def
                .alg
                .quotient_complex(&w, &q)
                .map_err(|e| CliError::Input(e.to_string()))?;
            table(&mut rep, &cx);
        }
        InputDocument::PolyAlgebroid(doc) => {
            let data = doc.build()?;
            let p = data
                .point
                .clone()
                .ok_or_else(|| CliError::Input("document has no point".into()))?;
            let gc = crate::algebroid::germ_complex(&data.algebroid, &data.pi, &data.twist, &p)
                .map_err(|e| CliError::Input(e.to_string()))?;
            let s = rep.section("germ complex");
            for k in 1..=3usize {
                s.row(&format!("dim quotient ^{k}"), gc.dims[k - 1]);
            }
            let rank_d1 = gc.d1.rank();
            s.row("dim H^1", gc.dims[0] - rank_d1);
            s.row("dim H^2", gc.dims[1] - gc.d2.rank() - rank_d1);
        }
        InputDocument::Germ(doc) => {
            let germ = doc.build()?;
            let h = stability::ideal_h(&germ).map_err(|e| CliError::Input(e.to_string()))?;
            let cx = stability::quotient_ce_complex(&germ.algebra, &h)
                .map_err(|e| CliError::Input(e.to_string()))?;
            table(&mut rep, &cx);
        }
        InputDocument::CartanDirac(doc) => {
            let (g, metric) = doc.build()?;
            let germ = stability::cartan_dirac_germ(&g, &metric)
                .map_err(|e| CliError::Input(e.to_string()))?;
            let h = stability::ideal_h(&germ).map_err(|e| CliError::Input(e.to_string()))?;
            let cx = stability::quotient_ce_complex(&germ.algebra, &h)
                .map_err(|e| CliError::Input(e.to_string()))?;
            table(&mut rep, &cx);
        }
        InputDocument::QuadraticLie(_) => {
            return Err(CliError::Input(
                "cohomology needs a plain Lie algebra, a split, a germ, or an algebroid".into(),
            ))
        }
    }
    Ok(rep)
}

fn parse_point(s: &str) -> Result<Vec<Rat>, CliError> {
    s.split(',')
        .map(|c| crate::doc::parse_rat(c.trim()).map_err(|e| CliError::Input(e.to_string())))
        .collect()
}

fn stability_rows(rep: &mut Report, sr: &stability::StabilityReport) {
    let s = rep.section("stability");
    s.row("verdict", &sr.verdict);
    s.row("dim H^2", sr.dim_h2);
    s.row("family dim", sr.family_dim);
    s.row("ideal dim", sr.dim_h);
    for (k, d) in &sr.quotient_dims {
        s.row(&format!("dim quotient ^{k}"), d);
    }
    if sr.verdict == Verdict::NotFixedPoint {
        rep.fail();
    }
}

fn cmd_stability(c: &Ctx, point: Option<&str>) -> Result<Report, CliError> {
    let mut rep = Report::new("stability", &c.digest, c.seed);
    match &c.doc {
        InputDocument::PolyAlgebroid(doc) => {
            let data = doc.build()?;
            let p = match point {
                Some(s) => parse_point(s)?,
                None => data
                    .point
                    .clone()
                    .ok_or_else(|| CliError::Input("no point given".into()))?,
            };
            if p.len() != data.algebroid.base_dim {
                return Err(CliError::Input("point dimension mismatch".into()));
            }
            let sr = crate::algebroid::stability_verdict(&data.algebroid, &data.pi, &data.twist, &p)
                .map_err(|e| CliError::Input(e.to_string()))?;
            stability_rows(&mut rep, &sr);
        }
        InputDocument::Germ(doc) => {
            let germ = doc.build()?;
            let sr = stability::obstruction(&germ).map_err(|e| CliError::Input(e.to_string()))?;
            stability_rows(&mut rep, &sr);
        }
        InputDocument::CartanDirac(doc) => {
            let (g, metric) = doc.build()?;
            let germ = stability::cartan_dirac_germ(&g, &metric)
                .map_err(|e| CliError::Input(e.to_string()))?;
            let sr = stability::obstruction(&germ).map_err(|e| CliError::Input(e.to_string()))?;
            stability_rows(&mut rep, &sr);
        }
        _ => {
            return Err(CliError::Input(format!(
                "stability is not defined for kind `{}`",
                c.doc.kind_name()
            )))
        }
    }
    Ok(rep)
}

fn flow(
    c: &Ctx,
    mc: Option<&str>,
    xi: Option<&str>,
    t: f64,
    step: f64,
) -> Result<Report, CliError> {
    let InputDocument::DiracSplit(doc) = &c.doc else {
        return Err(CliError::Input("flow needs a dirac_split document".into()));
    };
    let mut rep = Report::new("flow", &c.digest, c.seed);
    let e = doc.ambient.ambient()?;
    let a = doc.dirac_basis()?;
    let split = courant::split_data(&e, &a, doc.complement_basis()?.as_deref())
        .map_err(|e| CliError::Input(e.to_string()))?;
    let def = courant::deformation_algebra(&split);
    let zero_elem = crate::exterior::ExtElem::<Rat>::zero(split.n);
    let eps = match mc {
        None => zero_elem.clone(),
        Some(name) => doc.element(name)?,
    };
    let xi_elem = match xi {
        None => zero_elem,
        Some(name) => doc.element(name)?,
    };
    let falg = FloatAlgebra::from_exact(&def.alg);
    let q0 = def.to_dense_f64(&eps);
    let x = def.to_dense_f64(&xi_elem);
    let result = gauge::gauge_flow(&falg, &q0, &x, t, step);
    let s = rep.section("flow");
    s.row("t", fmtf(t));
    s.row("step", fmtf(step));
    s.row("mc residual (start)", fmtf(result.mc_residual_norms[0]));
    s.row(
        "mc residual (end)",
        fmtf(*result.mc_residual_norms.last().unwrap()),
    );
    match result.blew_up {
        Some(tb) => {
            s.row("blew up at", fmtf(tb));
            rep.fail();
        }
        None => {
            let s = rep.section("endpoint");
            for (w, coeff) in def.dense_to_ext_f64(&result.endpoint) {
                let word: String = w.iter().map(|l| (l + 1).to_string()).collect::<Vec<_>>().join("");
                s.row(&format!("e^{{{word}}}"), fmtf(coeff));
            }
        }
    }
    // exact MC start: the flow endpoint must match exponential transport
    let exact_mc = def
        .alg
        .mc_residual(&def.to_vec(&eps))
        .map(|r| r.is_zero())
        .unwrap_or(false);
    if exact_mc && result.blew_up.is_none() {
        match courant::verify_prop_caauto(&split, &eps, &xi_elem, t, step) {
            Ok(dev) => {
                let s = rep.section("transport comparison");
                s.row("max deviation", fmtf(dev));
                s.row("tolerance", fmtf(c.tol));
                if dev > c.tol {
                    rep.fail();
                }
            }
            Err(err) => {
                rep.section("transport comparison").row("error", err);
                rep.fail();
            }
        }
    }
    Ok(rep)
}

fn rectify(
    c: &Ctx,
    q_name: &str,
    qprime_name: &str,
    sub_name: &str,
    step: f64,
    max_iter: usize,
) -> Result<Report, CliError> {
    let InputDocument::Linfty(doc) = &c.doc else {
        return Err(CliError::Input("rectify needs a linfty document".into()));
    };
    let mut rep = Report::new("rectify", &c.digest, c.seed);
    let data = doc.build()?;
    let q = data
        .elements
        .get(q_name)
        .ok_or_else(|| CliError::Input(format!("unknown element `{q_name}`")))?;
    let qprime = data
        .elements
        .get(qprime_name)
        .ok_or_else(|| CliError::Input(format!("unknown element `{qprime_name}`")))?;
    let w = data
        .subalgebras
        .get(sub_name)
        .ok_or_else(|| CliError::Input(format!("unknown subalgebra `{sub_name}`")))?;
    let qprime_f64: Vec<f64> = qprime
        .to_dense(data.alg.space.dim())
        .iter()
        .map(to_f64)
        .collect();
    let result = gauge::rectify(&data.alg, w, q, &qprime_f64, c.tol, max_iter, step)
        .map_err(|e| CliError::Input(e.to_string()))?;
    let s = rep.section("rectify");
    s.row("success", result.success);
    s.row("iterations", result.trace.len().saturating_sub(1));
    s.row("ev norm", fmtf(result.ev_norm));
    s.row("mc norm", fmtf(result.mc_norm));
    s.row("message", if result.message.is_empty() { "converged" } else { &result.message });
    if !result.success {
        rep.fail();
    }
    Ok(rep)
}
