//! Command dispatch.
//!
//! Exit codes: 0 when every exact invariant holds, 2 when one fails, 3 for
//! bad input. Conditional findings never change the exit code.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use econvex_core::audit::{eset_suite, run_suite, AuditReport, Suite};
use econvex_core::conjugation::{biconjugate, boundary_coincidences, c_conjugate, DualGrid};
use econvex_core::duality::{converse_duality_report, PerturbationProblem};
use econvex_core::esets::EPolyhedron;
use econvex_core::funcrep::{Grid, GridLike};
use econvex_core::lagrangian::{minimax_audit, saddle_audit, CLagrangian};
use econvex_core::scalar::{parse_rational, Rational};
use econvex_core::subdifferential::{default_ladder, eps_c_subdifferential, intersection_audit, projection_audit, transfer_audit};
use econvex_core::{ExtReal, Scalar};

use crate::catalog;
use crate::error::CliError;
use crate::problem::{BackendName, Built, Kind, ProblemFile};
use crate::render::{cells, coord_headers, dual_cells, dual_headers, dual_tuple, ext, tuple, yes, Report, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_EXACT_FAILURE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "econvex", version, about = "Evenly convex duality on finite grids")]
struct Args {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Output::Report, global = true)]
    output: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Csv,
    Report,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Exact,
    Conditional,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// c-conjugate of Phi(., 0) over the (x*, u*, alpha) grid.
    Conjugate {
        /// Problem file path or `catalog:NAME`.
        problem: String,
    },
    /// c'-conjugate of the c-conjugate of Phi(., 0) on the x-grid.
    Biconjugate { problem: String },
    /// Primal and dual values, gap, attainment and regularity audits.
    Duality { problem: String },
    /// Grid members of the epsilon-c-subdifferential of Phi(., 0).
    Subdiff {
        problem: String,
        /// Base point, comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, default_value = "0")]
        eps: String,
    },
    /// The c-Lagrangian table, minimax values and saddle points.
    Lagrangian { problem: String },
    /// Emptiness, separation and representability of a set.
    Eset {
        problem: String,
        /// Point to test, comma-separated; repeatable.
        #[arg(long = "point", allow_hyphen_values = true)]
        points: Vec<String>,
    },
    /// Runs the invariant suites.
    Audit {
        problem: String,
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
    /// Lists the shipped problems, or prints one as JSON.
    Catalog { name: Option<String> },
}

struct Outcome {
    stdout: String,
    code: i32,
}

impl Outcome {
    fn new(stdout: String, exact_ok: bool) -> Self {
        Outcome { stdout, code: if exact_ok { EXIT_OK } else { EXIT_EXACT_FAILURE } }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Warnings and errors go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut warnings = Vec::new();
    let result = with_threads(|| dispatch(&args, &mut warnings));
    for w in &warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    match result {
        Ok(o) => {
            let _ = out.write_all(o.stdout.as_bytes());
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn with_threads<R: Send>(f: impl FnOnce() -> Result<R, CliError> + Send) -> Result<R, CliError> {
    match std::env::var("ECONVEX_THREADS") {
        Err(_) => f(),
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| CliError::Usage(format!("ECONVEX_THREADS must be a positive integer, got `{v}`")))?;
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().map_err(|e| CliError::Usage(e.to_string()))?;
            pool.install(f)
        }
    }
}

fn load(arg: &str) -> Result<ProblemFile, CliError> {
    match arg.strip_prefix("catalog:") {
        Some(name) => catalog::load(name),
        None => ProblemFile::load(std::path::Path::new(arg)),
    }
}

fn problem_arg(c: &Command) -> Option<&str> {
    match c {
        Command::Conjugate { problem }
        | Command::Biconjugate { problem }
        | Command::Duality { problem }
        | Command::Subdiff { problem, .. }
        | Command::Lagrangian { problem }
        | Command::Eset { problem, .. }
        | Command::Audit { problem, .. } => Some(problem),
        Command::Catalog { .. } => None,
    }
}

fn dispatch(args: &Args, warnings: &mut Vec<String>) -> Result<Outcome, CliError> {
    let Some(path) = problem_arg(&args.command) else {
        let Command::Catalog { name } = &args.command else { unreachable!() };
        return catalog_cmd(name.as_deref(), args.output);
    };
    let file = load(path)?;
    if file.kind == Kind::Eset {
        let set = file.eset()?;
        return match &args.command {
            Command::Eset { points, .. } => eset_cmd(&file, &set, points, args.output),
            Command::Audit { .. } => eset_audit(&file, &set, args.output),
            _ => Err(CliError::Usage(format!("`{}` is a set; use the `eset` or `audit` command", file.name))),
        };
    }
    match file.backend {
        BackendName::Rational => perturbation::<Rational>(&file, args, warnings),
        BackendName::Float => perturbation::<f64>(&file, args, warnings),
    }
}

fn header(r: &mut Report, file: &ProblemFile, command: &str) {
    r.section("problem")
        .field("name", &file.name)
        .field("command", command)
        .field("backend", format!("{:?}", file.backend).to_lowercase())
        .field("tolerance", format!("{:e}", file.tolerance));
}

fn parse_point<S: Scalar>(text: &str, dim: usize, what: &str) -> Result<Vec<S>, CliError> {
    let v = text
        .split(',')
        .map(|t| S::parse_literal(t.trim()).map_err(|e| CliError::Usage(format!("{what}: {e}"))))
        .collect::<Result<Vec<S>, _>>()?;
    if v.len() != dim {
        return Err(CliError::Usage(format!("{what}: expected {dim} coordinates, found {}", v.len())));
    }
    Ok(v)
}

fn warn_boundary<S: Scalar>(warnings: &mut Vec<String>, label: &str, gate: &str, grid: &Grid<S>, w_grid: &DualGrid<S>) {
    let hits = boundary_coincidences(grid, w_grid);
    if let Some(&(i, k)) = hits.first() {
        warnings.push(format!(
            "{} grid pairs lie on the coupling boundary <{label}, {gate}> = alpha; first at {label} = {}, w = {}",
            hits.len(),
            tuple(grid.point(i)),
            dual_tuple(w_grid.point(k))
        ));
    }
}

fn positive_problem<S: Scalar>(built: &Built<S>) -> Result<PerturbationProblem<S>, CliError> {
    if let Some(w) = built.dual_y.points().iter().find(|w| w.alpha <= S::zero()) {
        return Err(CliError::Invalid(format!("grids.alpha must be strictly positive for this command, found {}", w.alpha)));
    }
    built.problem()
}

fn perturbation<S: Scalar>(file: &ProblemFile, args: &Args, warnings: &mut Vec<String>) -> Result<Outcome, CliError> {
    let built = file.instance::<S>()?;
    let w_grid = built.w_grid()?;
    warn_boundary(warnings, "x", "u*", &built.x_grid, &w_grid);
    warn_boundary(warnings, "y", "v*", &built.y_grid, &built.dual_y);
    let csv = args.output == Output::Csv;
    let mut r = Report::default();
    match &args.command {
        Command::Conjugate { .. } => {
            header(&mut r, file, "conjugate");
            let f = built.primal_fn()?;
            let fc = c_conjugate(&f, &w_grid).map_err(|e| CliError::invalid("conjugate", e))?;
            let mut t = Table::new([dual_headers("xstar", "ustar", w_grid.dim()), vec!["value".into()]].concat());
            for (k, w) in w_grid.points().iter().enumerate() {
                t.push([dual_cells(w), vec![ext(fc.value(k))]].concat());
            }
            if csv {
                return Ok(Outcome::new(t.to_csv(), true));
            }
            let s = r.section("conjugate");
            s.field("points", w_grid.len()).field("sup", ext(&fc.sup())).field("inf", ext(&fc.inf()));
            s.table = Some(t);
            Ok(Outcome::new(r.render(), true))
        }
        Command::Biconjugate { .. } => {
            header(&mut r, file, "biconjugate");
            let f = built.primal_fn()?;
            let fcc = biconjugate(&f, &w_grid).map_err(|e| CliError::invalid("biconjugate", e))?;
            let below = fcc.le(&f);
            let xh = coord_headers("x", built.x_grid.dim());
            let mut t = Table::new([xh.clone(), vec!["value".into()]].concat());
            let mut full = Table::new([xh, vec!["f".into(), "biconjugate".into(), "gap".into()]].concat());
            let mut gap = ExtReal::NegInf;
            for (i, x) in built.x_grid.points().iter().enumerate() {
                let d = ExtReal::sub(f.value(i), fcc.value(i));
                if d > gap {
                    gap = d.clone();
                }
                t.push([cells(x), vec![ext(fcc.value(i))]].concat());
                full.push([cells(x), vec![ext(f.value(i)), ext(fcc.value(i)), ext(&d)]].concat());
            }
            if csv {
                return Ok(Outcome::new(t.to_csv(), below));
            }
            let s = r.section("biconjugate");
            s.field("hull_below_f", yes(below)).field("max_gap", ext(&gap)).field("surrogate_econvex", yes(fcc == f));
            s.table = Some(full);
            Ok(Outcome::new(r.render(), below))
        }
        Command::Duality { .. } => {
            let p = positive_problem(&built)?;
            let d = converse_duality_report(&p);
            let g = p.dual_objective();
            let mut t = Table::new([dual_headers("ystar", "vstar", p.dual_y().dim()), vec!["value".into()]].concat());
            for (j, w) in p.dual_y().points().iter().enumerate() {
                t.push([dual_cells(w), vec![ext(g.value(j))]].concat());
            }
            let ok = d.weak_ok && d.chain.ok() && d.via_p_ok && d.c5.le_ok && d.c5bar.le_ok && d.restriction.ge_ok && d.value_hull.le_ok;
            if csv {
                return Ok(Outcome::new(t.to_csv(), ok));
            }
            header(&mut r, file, "duality");
            let xs = p.x_grid().points();
            let ws = p.dual_y().points();
            r.section("values")
                .field("v_gp", ext(&d.v_gp))
                .field("v_gdc", ext(&d.v_gdc))
                .field("gap", ext(&d.gap))
                .field("v_gpbar", ext(&d.v_gpbar))
                .field("v_gdbar", ext(&d.v_gdbar))
                .field("primal_argmin", d.primal.attainers.iter().map(|&i| tuple(&xs[i])).collect::<Vec<_>>().join(" "))
                .field("primal_truncated", yes(d.primal.truncated))
                .field("dual_argmax", d.dual.attainers.iter().map(|&j| dual_tuple(&ws[j])).collect::<Vec<_>>().join(" "))
                .field("dual_truncated", yes(d.dual.truncated))
                .field("origin_feasible", yes(d.origin_feasible));
            r.section("duality")
                .field("weak", yes(d.weak_ok))
                .field("zero_gap", yes(d.zero_gap))
                .field("strong", yes(d.strong))
                .field("converse", yes(d.converse))
                .field("total", yes(d.total))
                .field("barred_strong", yes(d.barred_strong))
                .field("converse_equivalence", yes(d.equivalence_ok))
                .field("dual_value_via_p", yes(d.via_p_ok));
            r.section("chain")
                .field("inf_g", ext(&d.chain.gp_bar))
                .field("sup_minus_phi_biconjugate", ext(&d.chain.middle))
                .field("sup_minus_phi", ext(&d.chain.gd_bar))
                .field("holds", yes(d.chain.ok()));
            r.section("regularity")
                .field("c5_le", yes(d.c5.le_ok))
                .field("c5", yes(d.c5.holds))
                .field("c5_witnesses", d.c5.witnesses.len())
                .field("c5bar_le", yes(d.c5bar.le_ok))
                .field("c5bar", yes(d.c5bar.holds))
                .field("c5bar_truncated", yes(d.c5bar.truncated))
                .field("restriction_ge", yes(d.restriction.ge_ok))
                .field("restriction_equality", opt(d.restriction.equality))
                .field("value_hull_le", yes(d.value_hull.le_ok))
                .field("value_hull_equality", opt(d.value_hull.equality));
            r.section("dual objective").table = Some(t);
            Ok(Outcome::new(r.render(), ok))
        }
        Command::Subdiff { at, eps, .. } => {
            let p = positive_problem(&built)?;
            let x0 = parse_point::<S>(at, p.x_grid().dim(), "--at")?;
            let eps = S::parse_literal(eps.trim()).map_err(|e| CliError::Usage(format!("--eps: {e}")))?;
            let f = p.primal_fn();
            let set = eps_c_subdifferential(&f, &x0, &eps, p.w_grid()).map_err(|e| CliError::invalid("subdiff", e))?;
            let mut t = Table::new(dual_headers("xstar", "ustar", p.x_grid().dim()));
            for w in &set.points {
                t.push(dual_cells(w));
            }
            let transfer = transfer_audit(&f, p.w_grid()).map_err(|e| CliError::invalid("subdiff", e))?;
            let ok = set.definitional_agrees && transfer.forward_ok && transfer.forms_agree;
            if csv {
                return Ok(Outcome::new(t.to_csv(), ok));
            }
            let inter = intersection_audit(&p, &x0, &eps, &default_ladder()).map_err(|e| CliError::invalid("subdiff", e))?;
            let proj = projection_audit(&p, &x0, &eps).map_err(|e| CliError::invalid("subdiff", e))?;
            header(&mut r, file, "subdiff");
            r.section("subdifferential")
                .field("at", tuple(&x0))
                .field("eps", &eps)
                .field("members", set.points.len())
                .field("grid_points", p.w_grid().len())
                .field("definitional_agrees", yes(set.definitional_agrees));
            r.section("transfer")
                .field("pairs_checked", transfer.pairs_checked)
                .field("forward", yes(transfer.forward_ok))
                .field("converse_failures", transfer.converse_failures.len())
                .field("surrogate_econvex", yes(transfer.econvex_surrogate))
                .field("forms_agree", yes(transfer.forms_agree));
            r.section("intersection formula")
                .field("superset", yes(inter.superset_ok))
                .field("hypothesis_surrogate", yes(inter.hypothesis_surrogate))
                .field("equal_limit", yes(inter.equal_limit))
                .field("equal_ladder", yes(inter.equal_ladder))
                .field("witnesses", inter.witnesses.len());
            r.section("projection formula")
                .field("superset", yes(proj.superset_ok))
                .field("c5", yes(proj.c5_holds))
                .field("equal", yes(proj.equal))
                .field("witnesses", proj.witnesses.len());
            r.section("members").table = Some(t);
            Ok(Outcome::new(r.render(), ok))
        }
        Command::Lagrangian { .. } => {
            let p = positive_problem(&built)?;
            let l = CLagrangian::new(&p);
            let mm = minimax_audit(&l, file.tolerance).map_err(|e| CliError::invalid("lagrangian", e))?;
            let sa = saddle_audit(&l).map_err(|e| CliError::invalid("lagrangian", e))?;
            let ok = mm.exact_ok() && sa.minimax_ok;
            let (xd, yd) = (p.x_grid().dim(), p.dual_y().dim());
            let mut t = Table::new([coord_headers("x", xd), dual_headers("ystar", "vstar", yd), vec!["value".into()]].concat());
            for (i, x) in p.x_grid().points().iter().enumerate() {
                for (j, w) in p.dual_y().points().iter().enumerate() {
                    t.push([cells(x), dual_cells(w), vec![ext(l.at(i, j))]].concat());
                }
            }
            if csv {
                return Ok(Outcome::new(t.to_csv(), ok));
            }
            header(&mut r, file, "lagrangian");
            r.section("minimax")
                .field("supinf", ext(&mm.supinf))
                .field("infsup", ext(&mm.infsup))
                .field("v_gp", ext(&mm.v_gp))
                .field("v_gdc", ext(&mm.v_gdc))
                .field("column_identity", yes(mm.column_identity_ok))
                .field("row_identity", yes(mm.slices_ok))
                .field("supinf_is_dual_value", yes(mm.supinf_is_dual_value))
                .field("row_bound", yes(mm.row_bound_ok))
                .field("supinf_le_infsup", yes(mm.supinf_le_infsup))
                .field("slice_surrogate", yes(mm.slice_surrogate))
                .field("infsup_is_primal_value", yes(mm.infsup_is_primal_value));
            let mut st = Table::new([coord_headers("x", xd), dual_headers("ystar", "vstar", yd), vec!["value".into()]].concat());
            for s in &sa.saddles {
                st.push([cells(&s.xbar), dual_cells(&s.wbar), vec![ext(&s.value)]].concat());
            }
            let s = r.section("saddle points");
            s.field("count", sa.saddles.len())
                .field("expected_pairs", sa.expected.len())
                .field("minimax_consistent", yes(sa.minimax_ok))
                .field("expected_are_saddles", yes(sa.expected_are_saddles))
                .field("equivalence", yes(sa.equivalence))
                .field("primal_truncated", yes(sa.truncated))
                .field("boundary_saddles", sa.boundary_saddles.len());
            s.table = Some(st);
            r.section("table").table = Some(t);
            Ok(Outcome::new(r.render(), ok))
        }
        Command::Audit { suite, .. } => {
            let p = positive_problem(&built)?;
            let suite = match suite {
                SuiteArg::Exact => Suite::Exact,
                SuiteArg::Conditional => Suite::Conditional,
                SuiteArg::All => Suite::All,
            };
            let report = run_suite(&p, suite, file.tolerance).map_err(|e| CliError::invalid("audit", e))?;
            Ok(audit_outcome(file, &report, csv))
        }
        Command::Eset { .. } => Err(CliError::Usage(format!("`{}` is a perturbation problem, not a set", file.name))),
        Command::Catalog { .. } => unreachable!("handled before loading"),
    }
}

fn opt(b: Option<bool>) -> &'static str {
    match b {
        None => "not-applicable",
        Some(b) => yes(b),
    }
}

fn audit_outcome(file: &ProblemFile, report: &AuditReport, csv: bool) -> Outcome {
    let mut t = Table::new(vec!["audit".into(), "kind".into(), "status".into(), "witnesses".into()]);
    for e in &report.entries {
        t.push(vec![e.name.into(), e.kind.label().into(), e.status.label().into(), e.witnesses.join("; ")]);
    }
    if csv {
        return Outcome::new(t.to_csv(), report.exact_ok());
    }
    let mut r = Report::default();
    header(&mut r, file, "audit");
    let s = r.section("summary");
    s.field("audits", report.entries.len()).field("exact_failures", report.exact_failures().count());
    for e in &report.entries {
        s.field(&format!("{}.status", e.name), e.status.label());
    }
    let mut short = Table::new(vec!["audit".into(), "kind".into(), "status".into(), "witnesses".into()]);
    for e in &report.entries {
        short.push(vec![e.name.into(), e.kind.label().into(), e.status.label().into(), e.witnesses.len().to_string()]);
    }
    s.table = Some(short);
    let w = r.section("witnesses");
    for e in report.entries.iter().filter(|e| !e.witnesses.is_empty()) {
        for (k, line) in e.witnesses.iter().take(10).enumerate() {
            w.field(&format!("{}.{k}", e.name), line);
        }
    }
    Outcome::new(r.render(), report.exact_ok())
}

/// The lattice `{-3, -5/2, ..., 3}^dim` used to sample sets.
pub fn lattice(dim: usize) -> Vec<Vec<Rational>> {
    let axis: Vec<Rational> = (-6..=6).map(|k| Rational::new(k, 2)).collect();
    let mut pts: Vec<Vec<Rational>> = vec![Vec::new()];
    for _ in 0..dim {
        pts = pts.into_iter().flat_map(|p| axis.iter().map(move |a| [p.clone(), vec![*a]].concat())).collect();
    }
    pts
}

fn eset_audit(file: &ProblemFile, set: &EPolyhedron<Rational>, output: Output) -> Result<Outcome, CliError> {
    let report = eset_suite(set, &lattice(set.dim())).map_err(|e| CliError::invalid("audit", e))?;
    Ok(audit_outcome(file, &report, output == Output::Csv))
}

fn eset_cmd(file: &ProblemFile, set: &EPolyhedron<Rational>, points: &[String], output: Output) -> Result<Outcome, CliError> {
    let dim = set.dim();
    let pts = points
        .iter()
        .map(|t| {
            let v = t.split(',').map(|s| parse_rational(s.trim()).map_err(|e| CliError::Usage(format!("--point: {e}")))).collect::<Result<Vec<_>, _>>()?;
            if v.len() != dim {
                return Err(CliError::Usage(format!("--point: expected {dim} coordinates, found {}", v.len())));
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let geo = |e| CliError::invalid("eset", e);
    let mut t = Table::new([coord_headers("x", dim), vec!["member".into()], coord_headers("a", dim), vec!["certified".into()]].concat());
    let mut ok = true;
    for p in &pts {
        let member = set.contains(p).map_err(geo)?;
        let (cert, certified) = if member {
            (vec![String::new(); dim], String::new())
        } else {
            match set.separate(p).map_err(geo)? {
                Some(a) => {
                    let c = set.certifies(p, &a).map_err(geo)?;
                    ok &= c;
                    (cells(&a), yes(c).to_string())
                }
                None => (vec![String::new(); dim], "inconclusive".into()),
            }
        };
        t.push([cells(p), vec![yes(member).into()], cert, vec![certified]].concat());
    }
    if output == Output::Csv {
        return Ok(Outcome::new(t.to_csv(), ok));
    }
    let mut r = Report::default();
    header(&mut r, file, "eset");
    let s = r.section("set");
    s.field("dim", dim).field("constraints", set.constraints().len());
    match set.find_point() {
        Ok(Some(z)) => {
            s.field("empty", "false").field("point", tuple(&z));
        }
        Ok(None) => {
            s.field("empty", "true");
        }
        Err(e) => {
            s.field("empty", format!("unsupported: {e}"));
        }
    }
    match set.is_functionally_representable() {
        Ok(rep) => {
            s.field("functionally_representable", yes(rep.representable));
            if let Some(x) = rep.witness {
                s.field("representability_witness", format!("x = {x}"));
            }
        }
        Err(e) => {
            s.field("functionally_representable", format!("not-applicable: {e}"));
        }
    }
    if !pts.is_empty() {
        r.section("points").table = Some(t);
    }
    Ok(Outcome::new(r.render(), ok))
}

fn catalog_cmd(name: Option<&str>, output: Output) -> Result<Outcome, CliError> {
    match name {
        Some(n) => {
            let text = catalog::text(n).ok_or_else(|| catalog::load(n).err().expect("unknown entry"))?;
            Ok(Outcome::new(text.to_string(), true))
        }
        None => {
            let mut t = Table::new(vec!["name".into(), "kind".into(), "description".into()]);
            for ((n, text), d) in catalog::FILES.iter().zip(catalog::SUMMARIES) {
                let f = ProblemFile::from_json(text)?;
                t.push(vec![n.to_string(), format!("{:?}", f.kind).to_lowercase(), d.to_string()]);
            }
            let s = if output == Output::Csv {
                t.to_csv()
            } else {
                let mut r = Report::default();
                r.section("catalog").table = Some(t);
                r.render()
            };
            Ok(Outcome::new(s, true))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use econvex_core::audit::{AuditEntry, AuditKind, AuditStatus};

    fn entry(kind: AuditKind, status: AuditStatus) -> AuditEntry {
        AuditEntry { name: "probe", kind, status, witnesses: vec!["w".into()] }
    }

    #[test]
    fn only_exact_failures_change_the_exit_code() {
        let file = catalog::load("example52").unwrap();
        let cond = AuditReport { entries: vec![entry(AuditKind::Conditional, AuditStatus::Fail)] };
        assert_eq!(audit_outcome(&file, &cond, false).code, EXIT_OK);
        let exact = AuditReport { entries: vec![entry(AuditKind::Exact, AuditStatus::Fail)] };
        assert_eq!(audit_outcome(&file, &exact, true).code, EXIT_EXACT_FAILURE);
    }

    #[test]
    fn lattice_covers_the_box() {
        assert_eq!(lattice(1).len(), 13);
        assert_eq!(lattice(2).len(), 169);
        assert_eq!(lattice(2)[0], vec![Rational::new(-3, 1), Rational::new(-3, 1)]);
    }

    #[test]
    fn run_writes_to_the_given_streams() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(["econvex", "catalog", "--output", "csv"], &mut out, &mut err);
        assert_eq!(code, EXIT_OK);
        assert!(String::from_utf8(out).unwrap().starts_with("name,kind,description\n"));
        assert!(err.is_empty());
    }
}
