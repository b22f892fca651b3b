//! Command-line front end. Exit codes: 0 success, 1 mathematical failure,
//! 2 input error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::calculus::{check_weird_isom, verify_diagram, DiagramKind, Monomial};
use crate::cohomology::{is_abelian_3_cocycle, trace, trivialize_3cocycle, Trivialization};
use crate::error::Error;
use crate::group::FiniteAbelianGroup;
use crate::io;
use crate::quadratic::{cocycle_from_form, enumerate_pm1_forms, is_quadratic_form, FormFailure};
use crate::testbed::{
    apply_twist, classify_parity, coset_module_build, obstruction_report, validate, verify_extension, GradedAlgebraData,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "sc-obstruction", version, about = "Abelian cohomology obstructions for graded extensions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Write the machine-readable report to stdout instead of text
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the main result (cocycle, twist, form or algebra) to this file
    #[arg(short = 'o', long = "output", global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the pentagon and both hexagons
    CocycleCheck(CocycleArgs),
    /// Print the trace Q(i) = Omega(i,i)
    CocycleTrace(CocycleArgs),
    /// Write an abelian 3-cocycle as a coboundary, or report the obstruction
    Trivialize(CocycleArgs),
    /// Build an abelian 3-cocycle with a given trace
    FromForm(FormArgs),
    /// Compare expansion routes in the star or octagon diagrams
    SeriesVerify(SeriesArgs),
    /// Derive the obstruction cocycle of a graded algebra and decide extendability
    AlgebraAnalyze(AlgebraArgs),
    /// Twist a graded algebra into an extension
    AlgebraExtend(AlgebraArgs),
    /// Check validity, associativity and skew-symmetry of a graded algebra
    AlgebraVerify(AlgebraArgs),
    /// List all quadratic forms with values in {1, -1}
    FormsEnumerate(GroupArgs),
}

#[derive(Args, Debug)]
pub struct CocycleArgs {
    /// Cyclic orders, e.g. 4,2
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long)]
    pub cocycle: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct FormArgs {
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long)]
    pub form: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct SeriesArgs {
    /// star, octagon-1, octagon-2, all, or weird-isom
    #[arg(long, default_value = "all")]
    pub diagram: String,
    /// Exponents of z, w, t, z-w, z-t, w-t
    #[arg(long, allow_hyphen_values = true)]
    pub exponents: String,
    #[arg(long, default_value_t = 8)]
    pub frontier: i64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct AlgebraArgs {
    pub file: PathBuf,
    /// Generators of a subgroup B, separated by ';' (or ',' for cyclic groups)
    #[arg(long)]
    pub subgroup: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct GroupArgs {
    #[arg(long)]
    pub group: String,
    #[command(flatten)]
    pub common: Common,
}

/// Result of one command before printing.
pub struct Outcome {
    pub code: u8,
    pub text: String,
    pub report: Value,
    pub artifact: Option<Value>,
}

impl Outcome {
    fn new(ok: bool, text: String, report: Value) -> Outcome {
        Outcome { code: if ok { EXIT_OK } else { EXIT_FAILED }, text, report, artifact: None }
    }

    fn with_artifact(mut self, v: Value) -> Outcome {
        self.artifact = Some(v);
        self
    }
}

/// Exit code for an error raised while running a command.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::GroupMismatch(_) | Error::InvalidData(_) | Error::GroupTooLarge { .. } => EXIT_INPUT,
        Error::NonPositiveMagnitude(_) | Error::NotASubgroup(_) => EXIT_INPUT,
        _ => EXIT_FAILED,
    }
}

/// Rewrites `series verify` into `series-verify` and so on.
pub fn normalize_args(args: Vec<String>) -> Vec<String> {
    const PAIRS: &[(&str, &[&str])] = &[
        ("cocycle", &["check", "trace"]),
        ("series", &["verify"]),
        ("algebra", &["analyze", "extend", "verify"]),
        ("forms", &["enumerate"]),
        ("from", &["form"]),
    ];
    if args.len() >= 3 {
        for (head, tails) in PAIRS {
            if args[1] == *head && tails.contains(&args[2].as_str()) {
                let mut out = vec![args[0].clone(), format!("{}-{}", args[1], args[2])];
                out.extend_from_slice(&args[3..]);
                return out;
            }
        }
    }
    args
}

/// Parses arguments, runs the command and writes output; returns the exit code.
pub fn run(args: Vec<String>, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let cli = match Cli::try_parse_from(normalize_args(args)) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{rendered}") } else { write!(out, "{rendered}") };
            return code;
        }
    };
    let common = cli.command.common().clone();
    match execute(&cli.command) {
        Ok(outcome) => {
            if let (Some(path), Some(artifact)) = (&common.output, &outcome.artifact) {
                if let Err(e) = std::fs::write(path, io::to_pretty(artifact) + "\n") {
                    let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                    return EXIT_INPUT;
                }
            }
            let _ = if common.json {
                writeln!(out, "{}", io::to_pretty(&outcome.report))
            } else {
                write!(out, "{}", outcome.text)
            };
            outcome.code
        }
        Err(e) => {
            let code = exit_code(&e);
            if common.json {
                let kind = if code == EXIT_INPUT { "input-error" } else { "failed" };
                let _ = writeln!(out, "{}", io::to_pretty(&json!({ "status": kind, "error": e.to_string() })));
            }
            let _ = writeln!(err, "error: {e}");
            code
        }
    }
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::CocycleCheck(a) | Command::CocycleTrace(a) | Command::Trivialize(a) => &a.common,
            Command::FromForm(a) => &a.common,
            Command::SeriesVerify(a) => &a.common,
            Command::AlgebraAnalyze(a) | Command::AlgebraExtend(a) | Command::AlgebraVerify(a) => &a.common,
            Command::FormsEnumerate(a) => &a.common,
        }
    }
}

fn read_json(path: &Path) -> crate::Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    io::parse_json(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn parse_group(spec: &Option<String>) -> crate::Result<Option<FiniteAbelianGroup>> {
    spec.as_deref().map(str::parse).transpose()
}

fn status(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "failed"
    }
}

fn execute(cmd: &Command) -> crate::Result<Outcome> {
    match cmd {
        Command::CocycleCheck(a) => cocycle_check(a),
        Command::CocycleTrace(a) => cocycle_trace(a),
        Command::Trivialize(a) => trivialize(a),
        Command::FromForm(a) => from_form(a),
        Command::SeriesVerify(a) => series_verify(a),
        Command::AlgebraAnalyze(a) => algebra_analyze(a),
        Command::AlgebraExtend(a) => algebra_extend(a),
        Command::AlgebraVerify(a) => algebra_verify(a),
        Command::FormsEnumerate(a) => forms_enumerate(a),
    }
}

fn cocycle_check(a: &CocycleArgs) -> crate::Result<Outcome> {
    let c = io::cochain3_from_json(&read_json(&a.cocycle)?, parse_group(&a.group)?.as_ref())?;
    let report = is_abelian_3_cocycle(&c);
    let text = if report.ok() {
        "abelian 3-cocycle: pentagon, hexagon-1 and hexagon-2 hold\n".to_string()
    } else {
        format!("not an abelian 3-cocycle: {}\n", report.describe(&c.group))
    };
    let failure = report
        .failure
        .as_ref()
        .map(|f| json!({ "condition": f.condition.to_string(), "tuple": io::tuple_key(&c.group, &f.tuple) }));
    let json = json!({ "status": status(report.ok()), "group": io::group_to_json(&c.group), "failure": failure });
    Ok(Outcome::new(report.ok(), text, json))
}

fn cocycle_trace(a: &CocycleArgs) -> crate::Result<Outcome> {
    let c = io::cochain3_from_json(&read_json(&a.cocycle)?, parse_group(&a.group)?.as_ref())?;
    let q = trace(&c)?;
    let mut text = String::new();
    for i in c.group.elements() {
        text += &format!("Q({}) = {}\n", c.group.format_element(i), io::format_scalar(q.value(i)));
    }
    let form = io::form_to_json(&q);
    Ok(Outcome::new(true, text, json!({ "status": "ok", "trace": form })).with_artifact(form))
}

fn trivialize(a: &CocycleArgs) -> crate::Result<Outcome> {
    let c = io::cochain3_from_json(&read_json(&a.cocycle)?, parse_group(&a.group)?.as_ref())?;
    let g = &c.group;
    match trivialize_3cocycle(&c)? {
        Trivialization::Trivial(lambda) => {
            let lj = io::cochain2_to_json(&lambda);
            let mut text = "trivial: cocycle = d2(lambda)\n".to_string();
            for i in g.elements() {
                for j in g.elements() {
                    let v = lambda.get(i, j);
                    if !v.is_one() {
                        text += &format!(
                            "lambda({}, {}) = {}\n",
                            g.format_element(i),
                            g.format_element(j),
                            io::format_scalar(v)
                        );
                    }
                }
            }
            Ok(Outcome::new(true, text, json!({ "status": "ok", "lambda": lj })).with_artifact(lj))
        }
        Trivialization::Obstructed { witness, trace } => {
            let i = witness[0];
            let text = format!(
                "obstructed at i={}, Q({})={}\n",
                g.format_element(i),
                g.format_element(i),
                io::format_scalar(trace.value(i))
            );
            let json = json!({
                "status": "obstructed",
                "witness": witness.iter().map(|w| g.format_element(*w)).collect::<Vec<_>>(),
                "trace": io::form_to_json(&trace),
            });
            Ok(Outcome::new(false, text, json))
        }
    }
}

fn from_form(a: &FormArgs) -> crate::Result<Outcome> {
    let q = io::form_from_json(&read_json(&a.form)?, parse_group(&a.group)?.as_ref())?;
    let g = &q.group;
    if let Some(f) = is_quadratic_form(&q) {
        let why = match f {
            FormFailure::NotEven(i) => format!("Q({}) != Q(-{})", g.format_element(i), g.format_element(i)),
            FormFailure::Cube(i, j, k) => format!("cube relation fails at {}", io::tuple_key(g, &[i, j, k])),
        };
        return Ok(Outcome::new(
            false,
            format!("not a quadratic form: {why}\n"),
            json!({ "status": "failed", "error": why }),
        ));
    }
    let c = cocycle_from_form(&q)?;
    let cj = io::cochain3_to_json(&c);
    let trivial = if c.is_trivial() { " (identically 1)" } else { "" };
    let text = format!("abelian 3-cocycle with the given trace{trivial}\n{}\n", io::to_pretty(&cj));
    Ok(Outcome::new(true, text, json!({ "status": "ok", "cocycle": cj })).with_artifact(cj))
}

fn series_verify(a: &SeriesArgs) -> crate::Result<Outcome> {
    let m = Monomial::parse_exponents(&a.exponents)?;
    if a.frontier < 0 {
        return Err(Error::Parse("frontier must be nonnegative".into()));
    }
    if a.diagram == "weird-isom" {
        let diff = check_weird_isom(std::slice::from_ref(&m), a.frontier)?;
        let text = match diff {
            None => format!("weird-isom: triangle commutes for {m} below frontier {}\n", a.frontier),
            Some(e) => format!("weird-isom: mismatch at exponents {e:?}\n"),
        };
        let json = json!({ "status": status(diff.is_none()), "diagram": "weird-isom", "mismatch": diff });
        return Ok(Outcome::new(diff.is_none(), text, json));
    }
    let kinds: Vec<DiagramKind> =
        if a.diagram == "all" { DiagramKind::ALL.to_vec() } else { vec![a.diagram.parse()?] };
    let mut text = String::new();
    let mut reports = Vec::new();
    let mut ok = true;
    for kind in kinds {
        let r = verify_diagram(kind, &m, a.frontier)?;
        ok &= r.ok();
        match &r.mismatch {
            None => text += &format!("{}: {} route pairs agree for {m}\n", r.diagram, r.comparisons),
            Some(p) => {
                text += &format!(
                    "{}: routes {} and {} into {} differ at {:?}\n",
                    r.diagram, p.left, p.right, p.tower, p.exponents
                )
            }
        }
        reports.push(json!({
            "diagram": r.diagram,
            "comparisons": r.comparisons,
            "mismatch": r.mismatch.as_ref().map(|p| json!({
                "tower": p.tower, "left": p.left, "right": p.right, "exponents": p.exponents,
            })),
        }));
    }
    Ok(Outcome::new(ok, text, json!({ "status": status(ok), "frontier": a.frontier, "diagrams": reports })))
}

fn load_algebra(path: &Path) -> crate::Result<GradedAlgebraData> {
    io::algebra_from_json(&read_json(path)?).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn parse_subgroup(g: &FiniteAbelianGroup, spec: &str) -> crate::Result<Vec<usize>> {
    let parts: Vec<&str> = if g.rank() <= 1 { spec.split([',', ';']).collect() } else { spec.split(';').collect() };
    let gens =
        parts.iter().filter(|p| !p.trim().is_empty()).map(|p| g.parse_element(p)).collect::<crate::Result<Vec<_>>>()?;
    Ok(g.generated_subgroup(&gens))
}

fn algebra_analyze(a: &AlgebraArgs) -> crate::Result<Outcome> {
    let alg = load_algebra(&a.file)?;
    let g = &alg.group;
    let v = validate(&alg);
    if let Some(msg) = &v.violation {
        return Ok(Outcome::new(false, format!("invalid: {msg}\n"), json!({ "status": "invalid", "violation": msg })));
    }
    let r = obstruction_report(&alg)?;
    let mut text = String::new();
    let fmt_q: Vec<String> = g.elements().map(|i| io::format_scalar(r.trace.value(i))).collect();
    text += &format!("trace Q = ({})\n", fmt_q.join(", "));
    let mut parities = serde_json::Map::new();
    for i in g.elements() {
        if let Ok(p) = classify_parity(&alg, i) {
            text += &format!("M_{}: {:?}\n", g.format_element(i), p.parity);
            parities.insert(io::tuple_key(g, &[i]), json!(p.parity));
        }
    }
    let mut json = json!({
        "status": if r.extendable { "extendable" } else { "obstructed" },
        "cocycle": io::cochain3_to_json(&r.cocycle),
        "trace": io::form_to_json(&r.trace),
        "extendable": r.extendable,
        "witness": r.witness.iter().map(|w| g.format_element(*w)).collect::<Vec<_>>(),
        "parity": parities,
        "notes": r.notes,
    });
    for n in &r.notes {
        text += &format!("note: {n}\n");
    }
    let mut artifact = None;
    if let Some(lambda) = &r.lambda {
        text += "extendable: twist by lambda\n";
        let lj = io::cochain2_to_json(lambda);
        text += &format!("{}\n", io::to_pretty(&lj));
        json["lambda"] = lj.clone();
        artifact = Some(lj);
    } else {
        let i = r.witness[0];
        text += &format!("obstructed at i={}, Q({})={}\n", g.format_element(i), g.format_element(i), fmt_q[i]);
    }
    if let Some(spec) = &a.subgroup {
        let b = parse_subgroup(g, spec)?;
        let cm = coset_module_build(&alg, &b)?;
        text += &format!(
            "subgroup of order {}: {} cosets, Phi trivial: {}, Psi trivial: {}\n",
            b.len(),
            cm.blocks.len(),
            cm.phi_trivial,
            cm.psi_trivial
        );
        json["cosets"] = json!({
            "subgroup": b.iter().map(|x| g.format_element(*x)).collect::<Vec<_>>(),
            "blocks": cm.blocks.iter().map(|blk| json!({
                "representative": g.format_element(blk.representative),
                "elements": blk.elements.iter().map(|x| g.format_element(*x)).collect::<Vec<_>>(),
                "dimension": blk.dimension,
            })).collect::<Vec<_>>(),
            "lambda": io::cochain2_to_json(&cm.lambda),
            "phi_trivial": cm.phi_trivial,
            "psi_trivial": cm.psi_trivial,
        });
    }
    let outcome = Outcome::new(r.extendable, text, json);
    Ok(match artifact {
        Some(v) => outcome.with_artifact(v),
        None => outcome,
    })
}

fn algebra_extend(a: &AlgebraArgs) -> crate::Result<Outcome> {
    let alg = load_algebra(&a.file)?;
    let g = &alg.group;
    if let Some(msg) = validate(&alg).violation {
        return Ok(Outcome::new(false, format!("invalid: {msg}\n"), json!({ "status": "invalid", "violation": msg })));
    }
    let r = obstruction_report(&alg)?;
    let Some(lambda) = r.lambda else {
        let i = r.witness[0];
        let text = format!(
            "obstructed at i={}, Q({})={}\n",
            g.format_element(i),
            g.format_element(i),
            io::format_scalar(r.trace.value(i))
        );
        return Ok(Outcome::new(false, text, json!({ "status": "obstructed", "trace": io::form_to_json(&r.trace) })));
    };
    let twisted = apply_twist(&alg, &lambda)?;
    let check = verify_extension(&twisted);
    let aj = io::algebra_to_json(&twisted);
    let text = format!("twisted algebra: {}\n", check.describe(&twisted));
    let json = json!({ "status": status(check.ok()), "lambda": io::cochain2_to_json(&lambda), "algebra": aj });
    Ok(Outcome::new(check.ok(), text, json).with_artifact(aj))
}

fn algebra_verify(a: &AlgebraArgs) -> crate::Result<Outcome> {
    let alg = load_algebra(&a.file)?;
    if let Some(msg) = validate(&alg).violation {
        return Ok(Outcome::new(false, format!("invalid: {msg}\n"), json!({ "status": "invalid", "violation": msg })));
    }
    let check = verify_extension(&alg);
    let text = format!("{}\n", check.describe(&alg));
    Ok(Outcome::new(check.ok(), text.clone(), json!({ "status": status(check.ok()), "detail": text.trim_end() })))
}

fn forms_enumerate(a: &GroupArgs) -> crate::Result<Outcome> {
    let g: FiniteAbelianGroup = a.group.parse()?;
    let forms = enumerate_pm1_forms(&g)?;
    let mut text = format!("{} quadratic forms with values in {{1, -1}} on {g}\n", forms.len());
    for q in &forms {
        let vals: Vec<String> = g.elements().map(|i| io::format_scalar(q.value(i))).collect();
        text += &format!("({})\n", vals.join(", "));
    }
    let list: Vec<Value> = forms.iter().map(io::form_to_json).collect();
    let json = json!({ "status": "ok", "count": forms.len(), "forms": list });
    Ok(Outcome::new(true, text, json.clone()).with_artifact(json!(list)))
}
