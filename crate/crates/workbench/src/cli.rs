//! The `workbench` command tree.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use workbench_core::algebra::{frobenius_assumption, tensor, LocalAlgebra};
use workbench_core::dfield::DField;
use workbench_core::frac::{rf_text, Frac};
use workbench_core::free::FreeModule;
use workbench_core::gamma::{hs_tensor_reduce, CoeffTensor, GammaFailure, GammaSystem, OperatorAlgebras};
use workbench_core::groebner::GbConfig;
use workbench_core::index::{OpIndex, Word};
use workbench_core::kernel::{jet_name, Kernel, KernelEnv, RouteChoice};

use crate::files::{
    algebra_file, gamma_file, load_algebra, load_field, load_gamma, load_kernel, read_json, to_pretty, Canon,
    KernelFile, LoadError, Ref,
};
use crate::report::{Report, Status};

pub const DEGREE_CAP_VAR: &str = "WORKBENCH_GB_DEGREE_CAP";
pub const DEFAULT_DEGREE_CAP: u32 = 12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Route {
    #[default]
    Least,
    Greatest,
}

impl From<Route> for RouteChoice {
    fn from(r: Route) -> RouteChoice {
        match r {
            Route::Least => RouteChoice::Least,
            Route::Greatest => RouteChoice::Greatest,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "workbench", version, about = "Local operator algebras, commutation systems and kernel prolongation")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Progress messages on stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Local algebras.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Commutation systems.
    #[command(subcommand)]
    Gamma(GammaCmd),
    /// Operator fields.
    #[command(subcommand)]
    Dfield(DfieldCmd),
    /// The free operator module.
    #[command(subcommand)]
    Free(FreeCmd),
    /// Kernels.
    #[command(subcommand)]
    Kernel(KernelCmd),
    /// Print the canonical form of any input file.
    Fmt {
        file: PathBuf,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum AlgebraCmd {
    Validate { file: PathBuf },
    Tensor {
        a: PathBuf,
        b: PathBuf,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct CheckSel {
    #[arg(long)]
    pub jacobi: bool,
    #[arg(long)]
    pub assoc: bool,
    #[arg(long)]
    pub all: bool,
}

#[derive(Debug, Subcommand)]
pub enum GammaCmd {
    Check {
        file: PathBuf,
        #[command(flatten)]
        sel: CheckSel,
    },
    /// Tensor together pure HS-iteration systems.
    Reduce {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum DfieldCmd {
    Validate {
        file: PathBuf,
        /// Check against this commutation system instead of the trivial one.
        #[arg(long)]
        gamma: Option<PathBuf>,
    },
    Apply {
        file: PathBuf,
        /// `u,i` or a word `[u,i;...]` (rightmost operator first).
        #[arg(long)]
        op: String,
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum FreeCmd {
    Table {
        #[arg(long)]
        gamma: PathBuf,
        #[arg(long)]
        order: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum KernelCmd {
    Leaders { file: PathBuf },
    Prolong {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Route::Least)]
        route: Route,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    Realize {
        file: PathBuf,
        #[arg(long = "r")]
        r: usize,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Route::Least)]
        route: Route,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    CheckPoint {
        file: PathBuf,
        /// Comma separated, one per variable.
        #[arg(long, allow_hyphen_values = true)]
        values: String,
    },
}

/// What a run printed and its exit status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn gb_config() -> Result<GbConfig, String> {
    match std::env::var(DEGREE_CAP_VAR) {
        Ok(s) => s
            .trim()
            .parse::<u32>()
            .map(GbConfig::capped)
            .map_err(|_| format!("{} must be a nonnegative integer, got `{}`", DEGREE_CAP_VAR, s)),
        Err(_) => Ok(GbConfig::capped(DEFAULT_DEGREE_CAP)),
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let mut ctx = Ctx { verbose: cli.verbose, log: String::new() };
    let format = cli.format;
    let result = match gb_config() {
        Ok(cfg) => ctx.dispatch(cli.cmd, cfg),
        Err(msg) => Err(Report::new("workbench", Status::Error, msg, json!({})).with_code("PARSE_ERROR")),
    };
    match result {
        Ok(Done::Raw(text)) => Outcome { code: 0, stdout: text, stderr: ctx.log },
        Ok(Done::Report(r)) | Err(r) => {
            let stdout = match format {
                Format::Json => r.json(),
                Format::Text => r.text(),
            };
            Outcome { code: r.exit_code(), stdout, stderr: ctx.log }
        }
    }
}

enum Done {
    Report(Report),
    Raw(String),
}

struct Ctx {
    verbose: u8,
    log: String,
}

type Res = Result<Done, Report>;

fn load_fail(command: &str, e: LoadError) -> Report {
    let status = if e.exit_code() == 2 { Status::Error } else { Status::Fail };
    Report::new(command, status, e.to_string(), json!({})).with_code(e.code())
}

fn write_out(command: &str, path: &Path, text: &str) -> Result<(), Report> {
    std::fs::write(path, text).map_err(|e| {
        Report::new(command, Status::Error, format!("cannot write {}: {}", path.display(), e), json!({}))
            .with_code("IO_ERROR")
    })
}

fn ok(r: Report) -> Res {
    Ok(Done::Report(r))
}

fn parse_op_or_word(s: &str) -> Option<Word> {
    let t = s.trim();
    if t.starts_with('[') {
        Word::parse(t).ok()
    } else {
        OpIndex::parse(t).ok().map(|o| Word(vec![o]))
    }
}

impl Ctx {
    fn note(&mut self, msg: impl AsRef<str>) {
        if self.verbose > 0 {
            self.log.push_str(msg.as_ref());
            self.log.push('\n');
        }
    }

    fn dispatch(&mut self, cmd: Cmd, cfg: GbConfig) -> Res {
        match cmd {
            Cmd::Algebra(AlgebraCmd::Validate { file }) => self.algebra_validate(&file),
            Cmd::Algebra(AlgebraCmd::Tensor { a, b, out }) => self.algebra_tensor(&a, &b, out.as_deref()),
            Cmd::Gamma(GammaCmd::Check { file, sel }) => self.gamma_check(&file, &sel),
            Cmd::Gamma(GammaCmd::Reduce { files, out }) => self.gamma_reduce(&files, out.as_deref()),
            Cmd::Dfield(DfieldCmd::Validate { file, gamma }) => self.dfield_validate(&file, gamma.as_deref()),
            Cmd::Dfield(DfieldCmd::Apply { file, op, expr }) => self.dfield_apply(&file, &op, &expr),
            Cmd::Free(FreeCmd::Table { gamma, order }) => self.free_table(&gamma, order),
            Cmd::Kernel(k) => self.kernel(k, cfg),
            Cmd::Fmt { file, out } => self.fmt(&file, out.as_deref(), cfg),
        }
    }

    fn algebra_validate(&mut self, file: &Path) -> Res {
        const C: &str = "algebra validate";
        let a = load_algebra(file).map_err(|e| load_fail(C, e))?;
        ok(Report::new(C, Status::Pass, format!("local algebra of dimension {}", a.dim()), algebra_summary(&a)))
    }

    fn algebra_tensor(&mut self, a: &Path, b: &Path, out: Option<&Path>) -> Res {
        const C: &str = "algebra tensor";
        let x = load_algebra(a).map_err(|e| load_fail(C, e))?;
        let y = load_algebra(b).map_err(|e| load_fail(C, e))?;
        if x.characteristic() != y.characteristic() {
            return Err(Report::new(C, Status::Error, "algebras over different fields", json!({})).with_code("PARSE_ERROR"));
        }
        let t = tensor(&x, &y).map_err(|e| Report::new(C, Status::Fail, e.to_string(), json!({})).with_code(e.code()))?;
        let text = to_pretty(&algebra_file(&t.algebra));
        let pairs: Vec<String> = t.pairs.iter().map(|(i, j)| format!("{}x{}", i, j)).collect();
        let mut data = algebra_summary(&t.algebra);
        data["pairs"] = json!(pairs);
        match out {
            Some(p) => {
                write_out(C, p, &text)?;
                data["output"] = json!(p.display().to_string());
            }
            None => data["algebra"] = serde_json::from_str(&text).expect("valid json"),
        }
        ok(Report::new(C, Status::Pass, format!("tensor product of dimension {}", t.algebra.dim()), data))
    }

    fn gamma_check(&mut self, file: &Path, sel: &CheckSel) -> Res {
        const C: &str = "gamma check";
        let (field, g) = load_gamma(file).map_err(|e| load_fail(C, e))?;
        let all = sel.all || !(sel.jacobi || sel.assoc);
        let mut checks: Vec<(&str, Option<Result<(), GammaFailure>>)> = Vec::new();
        if all || sel.jacobi {
            checks.push(("hom_lie", Some(g.check_hom(1))));
            checks.push(("jacobi", Some(g.check_jacobi(&field))));
        }
        if all || sel.assoc {
            let hs = g.algebras.hs.is_some();
            checks.push(("hom_hs", hs.then(|| g.check_hom(2))));
            checks.push(("associative", hs.then(|| g.check_associative(&field))));
        }
        if all {
            checks.push(("cross", Some(g.check_cross(&field))));
        }
        let mut first: Option<(String, String)> = None;
        let mut rows = Vec::new();
        for (name, res) in &checks {
            let (verdict, witness) = match res {
                None => ("SKIP", Value::Null),
                Some(Ok(())) => ("PASS", Value::Null),
                Some(Err(f)) => {
                    first.get_or_insert((f.code().to_string(), f.to_string()));
                    ("FAIL", json!(f.to_string()))
                }
            };
            rows.push(json!({"check": name, "verdict": verdict, "witness": witness}));
        }
        if all {
            let v = field.validate(&g);
            if let Err(e) = &v {
                first.get_or_insert((e.code().to_string(), e.to_string()));
            }
            rows.push(json!({
                "check": "field",
                "verdict": if v.is_ok() { "PASS" } else { "FAIL" },
                "witness": v.err().map(|e| json!(e.to_string())).unwrap_or(Value::Null),
            }));
        }
        let data = json!({
            "ops": g.opset().ops().iter().map(|o| o.to_string()).collect::<Vec<_>>(),
            "checks": rows,
        });
        match first {
            None => ok(Report::new(C, Status::Pass, "all selected checks pass", data)),
            Some((code, msg)) => Err(Report::new(C, Status::Fail, msg, data).with_code(&code)),
        }
    }

    fn gamma_reduce(&mut self, files: &[PathBuf], out: Option<&Path>) -> Res {
        const C: &str = "gamma reduce";
        let mut systems: Vec<(LocalAlgebra, CoeffTensor)> = Vec::new();
        for f in files {
            let (field, g) = load_gamma(f).map_err(|e| load_fail(C, e))?;
            let bad = |msg: &str| {
                Report::new(C, Status::Error, format!("{}: {}", f.display(), msg), json!({})).with_code("PARSE_ERROR")
            };
            let Some(hs) = g.algebras.hs.clone() else { return Err(bad("no HS algebra")) };
            if g.algebras.lie.m() > 0 || !field.gens().is_empty() {
                return Err(bad("only pure HS systems over the prime field can be reduced"));
            }
            if let Err(e) = g.check_associative(&field) {
                return Err(Report::new(C, Status::Fail, format!("{}: {}", f.display(), e), json!({})).with_code(e.code()));
            }
            systems.push((hs, g.hs.clone()));
        }
        let (alg, coeffs) = hs_tensor_reduce(&systems).map_err(|e| load_fail(C, LoadError::Gamma { path: "<reduce>".into(), err: e }))?;
        let algs = OperatorAlgebras::pure_hs(alg);
        let field = DField::prime(algs.clone());
        let g = GammaSystem::new(algs, CoeffTensor::new(), coeffs)
            .map_err(|e| load_fail(C, LoadError::Gamma { path: "<reduce>".into(), err: e }))?;
        let text = to_pretty(&gamma_file(&field, &g));
        let mut data = json!({
            "dim": g.algebras.hs.as_ref().map(|a| a.dim()),
            "hom": g.check_hom(2).is_ok(),
            "associative": g.check_associative(&field).is_ok(),
        });
        match out {
            Some(p) => {
                write_out(C, p, &text)?;
                data["output"] = json!(p.display().to_string());
            }
            None => data["gamma"] = serde_json::from_str(&text).expect("valid json"),
        }
        ok(Report::new(C, Status::Pass, format!("reduced {} systems", files.len()), data))
    }

    fn dfield_validate(&mut self, file: &Path, gamma: Option<&Path>) -> Res {
        const C: &str = "dfield validate";
        let f = load_field(file).map_err(|e| load_fail(C, e))?;
        let g = match gamma {
            Some(p) => load_gamma(p).map_err(|e| load_fail(C, e))?.1,
            None => GammaSystem::trivial(f.algebras().clone()),
        };
        let constants: Vec<&String> = f.gens().iter().enumerate().filter(|(k, _)| f.is_constant(&f.gen(*k))).map(|(_, g)| g).collect();
        let data = json!({
            "char": f.characteristic().value(),
            "gens": f.gens(),
            "ops": f.opset().ops().iter().map(|o| o.to_string()).collect::<Vec<_>>(),
            "constant_gens": constants,
            "frobenius": frobenius_assumption(&f.algebras().lie, f.algebras().hs.as_ref()).to_string(),
        });
        match f.validate(&g) {
            Ok(()) => ok(Report::new(C, Status::Pass, "operators commute on the generators", data)),
            Err(e) => {
                let status = if e.code() == "INVALID" { Status::Error } else { Status::Fail };
                Err(Report::new(C, status, e.to_string(), data).with_code(e.code()))
            }
        }
    }

    fn dfield_apply(&mut self, file: &Path, op: &str, expr: &str) -> Res {
        const C: &str = "dfield apply";
        let f = load_field(file).map_err(|e| load_fail(C, e))?;
        let bad = |msg: String| Report::new(C, Status::Error, msg, json!({})).with_code("PARSE_ERROR");
        let w = parse_op_or_word(op).ok_or_else(|| bad(format!("bad operator `{}`", op)))?;
        if let Some(o) = w.entries().iter().find(|o| !f.opset().contains(**o)) {
            return Err(bad(format!("operator ({}) is not in the system", o)));
        }
        let x = f.parse(expr).map_err(|e| bad(format!("{} in `{}`", e, expr)))?;
        let y = f.apply_word(w.entries(), &x);
        let data = json!({
            "op": op,
            "expr": f.render(&x),
            "value": f.render(&y),
            "expr_is_constant": f.is_constant(&x),
        });
        ok(Report::new(C, Status::Ok, f.render(&y), data))
    }

    fn free_table(&mut self, gamma: &Path, order: usize) -> Res {
        const C: &str = "free table";
        let (field, g) = load_gamma(gamma).map_err(|e| load_fail(C, e))?;
        if let Err(e) = g.check_all(&field) {
            return Err(Report::new(C, Status::Fail, e.to_string(), json!({})).with_code(e.code()));
        }
        let m = FreeModule::new(&g, &field);
        let names = |v: u32| field.gen_name(v);
        let rows: Vec<Value> = m
            .table(order)
            .iter()
            .map(|(i, xi, v)| json!({"op": i.to_string(), "word": xi.text(), "value": v.text(&names)}))
            .collect();
        let n = rows.len();
        ok(Report::new(C, Status::Ok, format!("{} entries", n), json!({"order": order, "entries": rows})))
    }

    fn fmt(&mut self, file: &Path, out: Option<&Path>, cfg: GbConfig) -> Res {
        const C: &str = "fmt";
        let v: Value = read_json(file).map_err(|e| load_fail(C, e))?;
        let canon = Canon::new(cfg).any(file, &v).map_err(|e| load_fail(C, e))?;
        let text = to_pretty(&canon);
        match out {
            Some(p) => {
                write_out(C, p, &text)?;
                ok(Report::new(C, Status::Ok, format!("wrote {}", p.display()), json!({})))
            }
            None => Ok(Done::Raw(text)),
        }
    }

    fn kernel(&mut self, cmd: KernelCmd, cfg: GbConfig) -> Res {
        let (c, file) = match &cmd {
            KernelCmd::Leaders { file } => ("kernel leaders", file),
            KernelCmd::Prolong { file, .. } => ("kernel prolong", file),
            KernelCmd::Realize { file, .. } => ("kernel realize", file),
            KernelCmd::CheckPoint { file, .. } => ("kernel check-point", file),
        };
        let setup = load_kernel(file).map_err(|e| load_fail(c, e))?;
        let env = setup.env(cfg).map_err(|e| load_fail(c, e))?;
        let kfail = |e| load_fail(c, setup.err(e));
        let k = Kernel::from_texts(&env, setup.n, setup.r, &setup.relations).map_err(kfail)?;
        match cmd {
            KernelCmd::Leaders { .. } => {
                let data = leaders_json(&k);
                let sep = data["separable"].as_bool().unwrap_or(false);
                let msg = format!("{} leaders, kernel is {}", data["leaders"].as_array().map_or(0, |v| v.len()), if sep { "separable" } else { "not separable" });
                ok(Report::new(c, Status::Ok, msg, data))
            }
            KernelCmd::Prolong { steps, route, out, .. } => {
                let mut k = k;
                let mut steps_json = Vec::new();
                let mut agree = true;
                for _ in 0..steps {
                    self.note(format!("prolonging to length {}", k.r() + 1));
                    let p = k.generic_prolong(route.into()).map_err(kfail)?;
                    let rows: Vec<Value> = p
                        .routes
                        .iter()
                        .map(|rr| {
                            agree &= rr.agree;
                            json!({
                                "jet": jet_name(&rr.jet.0, rr.jet.1),
                                "routes": rr.routes.iter().map(|(i, eta)| format!("d_({}) {}", i, jet_name(eta, rr.jet.1))).collect::<Vec<_>>(),
                                "chosen": rr.chosen,
                                "agree": rr.agree,
                            })
                        })
                        .collect();
                    steps_json.push(json!({"length": p.kernel.r(), "routes": rows}));
                    k = p.kernel;
                }
                let mut data = kernel_json(&k);
                data["steps"] = json!(steps_json);
                self.save_kernel(c, &k, out.as_deref(), &setup, &mut data)?;
                let status = if agree { Status::Pass } else { Status::Fail };
                let r = Report::new(c, status, format!("prolonged to length {}", k.r()), data);
                if agree {
                    ok(r)
                } else {
                    Err(r.with_code("ROUTE_DISAGREE"))
                }
            }
            KernelCmd::Realize { r, order, route, out, .. } => {
                let base = if k.r() < 2 * r { k.prolong_to(2 * r, route.into()).map_err(kfail)? } else { k.clone() };
                let base = if base.r() > 2 * r { base.truncate(2 * r).map_err(kfail)? } else { base };
                let v = base.realisation_criterion(r).map_err(kfail)?;
                let verdict = json!({
                    "holds": v.holds,
                    "separable": v.separable,
                    "shortcut": v.shortcut,
                    "witness": v.witness.as_ref().map(|(w, t)| jet_name(w, *t)),
                });
                self.note(format!("criterion at r = {}: {}", r, v.holds));
                let real = match k.realize(r, order, route.into()) {
                    Ok(x) => x,
                    Err(e) => {
                        let mut rep = load_fail(c, setup.err(e));
                        rep.data = json!({"criterion": verdict});
                        return Err(rep);
                    }
                };
                let mut data = kernel_json(&real);
                data["criterion"] = verdict;
                data["jets"] = jets_table(&real);
                self.save_kernel(c, &real, out.as_deref(), &setup, &mut data)?;
                ok(Report::new(c, Status::Pass, format!("principal realisation to length {}", real.r()), data))
            }
            KernelCmd::CheckPoint { values, .. } => {
                let bad = |msg: String| Report::new(c, Status::Error, msg, json!({})).with_code("PARSE_ERROR");
                let parts: Vec<&str> = values.split(',').map(str::trim).collect();
                if parts.len() != k.n() {
                    return Err(bad(format!("expected {} values, got {}", k.n(), parts.len())));
                }
                let b = parts
                    .iter()
                    .map(|s| env.field.parse(s).map_err(|e| bad(format!("{} in `{}`", e, s))))
                    .collect::<Result<Vec<_>, _>>()?;
                let data = json!({"values": b.iter().map(|x| env.field.render(x)).collect::<Vec<_>>()});
                match k.specialize_check(&b) {
                    Ok(()) => ok(Report::new(c, Status::Accept, "every relation vanishes", data)),
                    Err(rel) => {
                        let mut d = data;
                        d["violated"] = json!(rel);
                        Err(Report::new(c, Status::Reject, format!("relation {} does not vanish", rel), d).with_code("REJECT"))
                    }
                }
            }
        }
    }

    fn save_kernel(&mut self, c: &str, k: &Kernel<'_>, out: Option<&Path>, setup: &crate::files::KernelSetup, data: &mut Value) -> Result<(), Report> {
        if let Some(p) = out {
            let f = KernelFile {
                gamma: Ref::Inline(Box::new(gamma_file(&setup.field, &setup.gamma))),
                dfield: None,
                n: k.n(),
                r: k.r(),
                relations: k.relation_texts(),
            };
            write_out(c, p, &to_pretty(&f))?;
            data["output"] = json!(p.display().to_string());
        }
        Ok(())
    }
}

fn algebra_summary(a: &LocalAlgebra) -> Value {
    json!({
        "char": a.characteristic().value(),
        "dim": a.dim(),
        "grades": a.grades(),
        "nilpotency": a.nilpotency(),
        "breakpoints": a.breakpoints(),
        "null_set": a.null_set(),
        "supports": (1..=a.m()).map(|i| json!({"i": i, "support": a.support(i)})).collect::<Vec<_>>(),
        "frobenius": frobenius_assumption(a, None).to_string(),
    })
}

fn kernel_json(k: &Kernel<'_>) -> Value {
    json!({"n": k.n(), "r": k.r(), "relations": k.relation_texts()})
}

fn leaders_json(k: &Kernel<'_>) -> Value {
    let rep = k.leaders();
    let env = k.env();
    let names = |v: &[(Word, usize)]| v.iter().map(|(w, t)| jet_name(w, *t)).collect::<Vec<_>>();
    let mut data = kernel_json(k);
    data["leaders"] = json!(rep
        .leaders
        .iter()
        .map(|l| json!({
            "jet": jet_name(&l.jet.0, l.jet.1),
            "separable": l.separable,
            "min_poly": env.render(k.space(), &l.min_poly),
        }))
        .collect::<Vec<_>>());
    data["minimal_separable"] = json!(names(&rep.minimal_separable));
    data["inseparable"] = json!(names(&rep.inseparable));
    data["separable"] = json!(rep.separable);
    data
}

/// Each jet as free, determined by lower jets, or algebraic over them.
fn jets_table(k: &Kernel<'_>) -> Value {
    let env: &KernelEnv<'_> = k.env();
    let space = k.space();
    let rep = k.leaders();
    let gens = |v: u32| env.field.gen_name(v);
    let mut rows = Vec::new();
    for v in 0..space.len() as u32 {
        let (w, t) = space.jet(v);
        let name = jet_name(w, *t);
        let Some(l) = rep.leaders.iter().find(|l| &l.jet.0 == w && l.jet.1 == *t) else {
            rows.push(json!({"jet": name, "status": "free"}));
            continue;
        };
        let cs = l.min_poly.coeffs_in(v);
        if cs.len() == 2 {
            let val = Frac::new(cs[0].negated(), cs[1].clone());
            let text = val.render(&|x| space.name(x), &|c| rf_text(c, &gens));
            rows.push(json!({"jet": name, "status": "determined", "value": text}));
        } else {
            rows.push(json!({"jet": name, "status": "algebraic", "min_poly": env.render(space, &l.min_poly)}));
        }
    }
    json!(rows)
}
