use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use intermod::cosets::{covering_degrees, genus_of, invariants_of};
use intermod::exactalg::{classify_quadric, AlgError, QuadricClassification, RationalMatrix, SymmetricForm};
use intermod::facts::{delta_symbol, load_facts, FactsBundle, FactsError};
use intermod::obstructions::{
    computed_setup_inputs, genus_x1, ramification_obstruction, ramification_setup, square_degree_obstruction,
    ObstructionError,
};
use intermod::petri::{build_model, is_trigonal_over_q, PetriError, Polynomial};
use intermod::pipeline::{
    decide, render_decision_text, render_markdown, render_text, survey, FixtureSet, PipelineError,
};
use intermod::qseries::{parse_fixture, FixtureError};
use intermod::quadforms::{atkin_lehner_fixed_points, class_number, quotient_genus, reduced_forms, QuadFormError};
use intermod::zmod::{proper_nontrivial_subgroups, subgroup_closure, DeltaSubgroup, Level, ZmodError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Md,
}

/// Cubic points on intermediate modular curves X_Δ(N).
#[derive(Debug, Parser)]
#[command(name = "intermod", version)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Directory holding the fact tables (defaults to the bundled copy).
    #[arg(long, global = true)]
    data_dir: Option<PathBuf>,
    /// Directory of q-expansion fixtures (defaults to the bundled set).
    #[arg(long, global = true)]
    fixtures_dir: Option<PathBuf>,
    /// Ignore all fixtures; genus-4 verdicts then come from the bundled table.
    #[arg(long, global = true, conflicts_with = "fixtures_dir")]
    no_fixtures: bool,
    #[arg(long, default_value_t = 81, global = true)]
    max_n: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Proper subgroups {±1} ⊊ Δ ⊊ (Z/NZ)^×.
    Subgroups { n: u64 },
    /// Index, elliptic points, cusps and genus of X_Δ(N).
    Invariants {
        n: u64,
        /// Residues generating Δ, comma separated; all proper Δ if omitted.
        #[arg(long, value_delimiter = ',')]
        delta: Option<Vec<u64>>,
    },
    /// Classify the quadric with symmetric matrix "a,b,..;c,d,..", or --poly.
    ClassifyQuadric {
        #[arg(required_unless_present = "poly")]
        matrix: Option<String>,
        /// Homogeneous quadratic in x, y, z, w, e.g. "x*w - y*z".
        #[arg(long, conflicts_with = "matrix")]
        poly: Option<String>,
    },
    /// Canonical model from a q-expansion fixture.
    Model {
        #[arg(long)]
        fixture: PathBuf,
    },
    /// Number of primitive reduced forms of discriminant D < 0.
    #[command(allow_negative_numbers = true)]
    Classnumber { d: i64 },
    /// Fixed points of w_N on X_0(N) for an odd prime N.
    Fixedpoints { n: u64 },
    /// Run the degree and ramification obstructions for (N, Δ).
    Obstruct {
        n: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        delta: Vec<u64>,
    },
    /// Decide whether X_Δ(N) has infinitely many cubic points.
    Decide {
        n: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        delta: Vec<u64>,
    },
    /// Decide every proper (N, Δ) with N up to --max-n.
    Survey,
    /// Fact table maintenance.
    Facts {
        #[command(subcommand)]
        action: FactsAction,
    },
}

#[derive(Debug, Subcommand)]
enum FactsAction {
    /// Load the tables and run every integrity check.
    Validate,
}

#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(Usage(msg.into()))
}

/// 1 usage, 2 data, 3 integrity.
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<Usage>()
            || cause.is::<ZmodError>()
            || cause.is::<QuadFormError>()
            || cause.is::<AlgError>()
        {
            return 1;
        }
        if let Some(e) = cause.downcast_ref::<FactsError>() {
            return if e.is_data_error() { 2 } else { 3 };
        }
        if let Some(e) = cause.downcast_ref::<PipelineError>() {
            return match e {
                PipelineError::OutOfScope { .. } | PipelineError::BadSurveyBound(_) => 1,
                PipelineError::Fixture { .. } | PipelineError::Io(_) => 2,
                PipelineError::Obstruction(ObstructionError::PreconditionViolation(_)) => 1,
                _ => 3,
            };
        }
        if let Some(e) = cause.downcast_ref::<PetriError>() {
            return if matches!(e, PetriError::WrongGenus { .. }) { 1 } else { 3 };
        }
        if let Some(e) = cause.downcast_ref::<ObstructionError>() {
            return match e {
                ObstructionError::SetupMismatch { .. } => 3,
                _ => 1,
            };
        }
        if cause.is::<FixtureError>() || cause.is::<std::io::Error>() {
            return 2;
        }
    }
    3
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn level(n: u64) -> Result<Level> {
    Ok(Level::new(n)?)
}

fn delta_from(level: Level, residues: &[u64]) -> Result<DeltaSubgroup> {
    let mut gens: Vec<u64> = residues.to_vec();
    gens.push(level.get() - 1);
    Ok(subgroup_closure(level, &gens)?)
}

fn bundle(cli: &Cli) -> Result<FactsBundle> {
    Ok(match &cli.data_dir {
        Some(dir) => load_facts(dir)?,
        None => FactsBundle::bundled()?,
    })
}

fn fixtures(cli: &Cli) -> Result<FixtureSet> {
    if cli.no_fixtures {
        return Ok(FixtureSet::empty());
    }
    Ok(match &cli.fixtures_dir {
        Some(dir) => FixtureSet::load_dir(dir)?,
        None => FixtureSet::bundled(),
    })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Subgroups { n } => subgroups(cli, *n),
        Command::Invariants { n, delta } => invariants(cli, *n, delta.as_deref()),
        Command::ClassifyQuadric { matrix, poly } => classify(cli, matrix.as_deref(), poly.as_deref()),
        Command::Model { fixture } => model(cli, fixture),
        Command::Classnumber { d } => classnumber(cli, *d),
        Command::Fixedpoints { n } => fixedpoints(cli, *n),
        Command::Obstruct { n, delta } => obstruct(cli, *n, delta),
        Command::Decide { n, delta } => {
            let lv = level(*n)?;
            let d = decide(lv, &delta_from(lv, delta)?, &bundle(cli)?, &fixtures(cli)?)?;
            Ok(match cli.format {
                Format::Json => pretty(&serde_json::to_value(&d)?),
                Format::Md => render_markdown(std::slice::from_ref(&d), *n),
                Format::Text => render_decision_text(&d),
            })
        }
        Command::Survey => {
            let decisions = survey(cli.max_n, &bundle(cli)?, &fixtures(cli)?)?;
            Ok(match cli.format {
                Format::Json => pretty(&serde_json::to_value(&decisions)?),
                Format::Md => render_markdown(&decisions, cli.max_n),
                Format::Text => render_text(&decisions),
            })
        }
        Command::Facts { action: FactsAction::Validate } => {
            let b = match &cli.data_dir {
                Some(dir) => load_facts(dir)?,
                None => FactsBundle::bundled()?,
            };
            let report = b.validate()?;
            Ok(match cli.format {
                Format::Json => pretty(&json!({ "status": "ok", "report": report })),
                _ => format!("{report}\nall checks passed\n"),
            })
        }
    }
}

fn subgroups(cli: &Cli, n: u64) -> Result<String> {
    let lv = level(n)?;
    let list = proper_nontrivial_subgroups(lv);
    let rows = list
        .iter()
        .enumerate()
        .map(|(i, d)| Ok((i as u32 + 1, d, genus_of(lv, d)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(match cli.format {
        Format::Json => pretty(&Value::Array(
            rows.iter()
                .map(|(i, d, g)| json!({ "label": i, "residues": d.residues(), "pm": d.pm_notation(), "order": d.order(), "genus": g }))
                .collect(),
        )),
        _ if rows.is_empty() => format!("no proper nontrivial Δ for N = {n}\n"),
        Format::Md => {
            let mut s = String::from("| Δ | residues | order | genus |\n|---|---|---|---|\n");
            for (i, d, g) in &rows {
                s += &format!("| {} | {} | {} | {g} |\n", delta_symbol(*i), d.pm_notation(), d.order());
            }
            s
        }
        Format::Text => rows
            .iter()
            .map(|(i, d, g)| format!("{} = {}  order {}  genus {g}\n", delta_symbol(*i), d.pm_notation(), d.order()))
            .collect(),
    })
}

fn invariants(cli: &Cli, n: u64, delta: Option<&[u64]>) -> Result<String> {
    let lv = level(n)?;
    let deltas = match delta {
        Some(r) => vec![delta_from(lv, r)?],
        None => proper_nontrivial_subgroups(lv),
    };
    let mut values = Vec::new();
    let mut text = String::new();
    for d in &deltas {
        let inv = invariants_of(lv, d)?;
        let chain = covering_degrees(lv, d);
        text += &format!(
            "X_Δ({n}), Δ = {}: index {}, ν₂ = {}, ν₃ = {}, cusps {}, genus {}; deg X_1 → X_Δ = {}, deg X_Δ → X_0 = {}\n",
            d.pm_notation(),
            inv.mu,
            inv.nu2,
            inv.nu3,
            inv.nu_inf,
            inv.genus,
            chain.deg_x1_to_delta,
            chain.deg_delta_to_x0
        );
        values.push(json!({
            "level": n,
            "delta": d.residues(),
            "invariants": inv,
            "covering": {
                "deg_x1_to_delta": chain.deg_x1_to_delta,
                "deg_delta_to_x0": chain.deg_delta_to_x0,
                "deg_x0_to_plus": chain.deg_x0_to_plus,
            },
        }));
    }
    Ok(match cli.format {
        Format::Json => pretty(&Value::Array(values)),
        _ => text,
    })
}

fn classification_text(c: &QuadricClassification) -> String {
    let diag: Vec<String> = c.diagonal.iter().map(ToString::to_string).collect();
    format!("rank {}\ndiagonal [{}]\nsquarefree discriminant {}\nverdict {}\n", c.rank, diag.join(", "), c.squarefree_disc, c.verdict)
}

fn classify(cli: &Cli, matrix: Option<&str>, poly: Option<&str>) -> Result<String> {
    let form = match (matrix, poly) {
        (_, Some(p)) => Polynomial::parse(4, p)
            .map_err(|e| usage(e.to_string()))?
            .quadratic_form()
            .ok_or_else(|| usage("--poly must be a homogeneous quadratic"))?,
        (Some(m), None) => SymmetricForm::new(RationalMatrix::parse(m)?)?,
        (None, None) => bail!(usage("give a matrix or --poly")),
    };
    let c = classify_quadric(&form);
    Ok(match cli.format {
        Format::Json => pretty(&serde_json::to_value(&c)?),
        _ => classification_text(&c),
    })
}

fn model(cli: &Cli, path: &PathBuf) -> Result<String> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let basis = parse_fixture(&text)?;
    let model = build_model(&basis)?;
    let trig = is_trigonal_over_q(&model);
    Ok(match cli.format {
        Format::Json => pretty(&json!({
            "level": basis.level().get(),
            "delta": basis.delta().residues(),
            "genus": model.genus,
            "prec": basis.prec(),
            "rigor": model.rigor,
            "relations": model.relations,
            "classification": trig.classification,
            "trigonal_over_q": trig.trigonal_over_q,
        })),
        _ => {
            let mut s = format!(
                "X_Δ({}), Δ = {}, genus {}, {} to q^{}\n",
                basis.level(),
                basis.delta().pm_notation(),
                model.genus,
                model.rigor,
                basis.prec()
            );
            for r in &model.relations {
                s += &format!("  {r}\n");
            }
            if let Some(c) = &trig.classification {
                s += &classification_text(c);
            }
            s += &format!("trigonal over Q: {} ({})\n", trig.trigonal_over_q, trig.reason);
            s
        }
    })
}

fn classnumber(cli: &Cli, d: i64) -> Result<String> {
    let h = class_number(d)?;
    Ok(match cli.format {
        Format::Json => {
            let forms: Vec<[i64; 3]> = reduced_forms(d)?.iter().map(|f| [f.a, f.b, f.c]).collect();
            pretty(&json!({ "discriminant": d, "class_number": h, "forms": forms }))
        }
        _ => format!("{h}\n"),
    })
}

fn fixedpoints(cli: &Cli, n: u64) -> Result<String> {
    let r = atkin_lehner_fixed_points(n)?;
    Ok(match cli.format {
        Format::Json => {
            let lv = level(n)?;
            let g = genus_of(lv, &DeltaSubgroup::full(lv))? as i64;
            pretty(&json!({
                "level": n,
                "fixed_points": r,
                "genus_x0": g,
                "genus_x0_plus": quotient_genus(g, r as i64)?,
            }))
        }
        _ => format!("{r}\n"),
    })
}

fn obstruct(cli: &Cli, n: u64, residues: &[u64]) -> Result<String> {
    let lv = level(n)?;
    let delta = delta_from(lv, residues)?;
    let facts = bundle(cli)?;
    let target = facts
        .x0_plus_curve(n)
        .filter(|c| c.curve.rank > 0)
        .ok_or_else(|| usage(format!("X_0^+({n}) is not a positive-rank elliptic curve in the bundled data")))?;
    let chain = covering_degrees(lv, &delta);
    let g1 = genus_x1(lv)?;
    let square = square_degree_obstruction(chain.deg_x1_to_delta, chain.deg_delta_to_plus(), 3, &target.curve, g1)?;
    let ramification = if square.is_obstructed() {
        None
    } else {
        let setup = ramification_setup(lv, &delta, 3, computed_setup_inputs(lv, &delta, 3)?)?;
        let result = ramification_obstruction(setup.deg_f as u64, setup.required_index as u64);
        Some((setup, result))
    };
    Ok(match cli.format {
        Format::Json => pretty(&json!({
            "level": n,
            "delta": delta.residues(),
            "target": target.curve.label,
            "covering": {
                "deg_x1_to_delta": chain.deg_x1_to_delta,
                "deg_delta_to_x0": chain.deg_delta_to_x0,
                "deg_delta_to_plus": chain.deg_delta_to_plus(),
                "genus_x1": g1,
            },
            "square_degree": square,
            "ramification": ramification.as_ref().map(|(s, r)| json!({ "setup": s, "result": r })),
        })),
        _ => {
            let fmt_result = |r: &intermod::obstructions::ObstructionResult| {
                let nums: Vec<String> = r.numerics.iter().map(|(k, v)| format!("{k}={v}")).collect();
                format!("{:?} ({}) {}", r.status, r.reason, nums.join(" "))
            };
            let mut s = format!(
                "X_Δ({n}), Δ = {} → {}: deg X_1 → X_Δ = {}, deg X_Δ → X_0^+ = {}\nsquare-degree: {}\n",
                delta.pm_notation(),
                target.curve.label,
                chain.deg_x1_to_delta,
                chain.deg_delta_to_plus(),
                fmt_result(&square)
            );
            if let Some((setup, r)) = &ramification {
                s += &format!(
                    "ramification: fiber of g {}×e{}, fiber of α {}×e{}; {}\n",
                    setup.g_fiber.points,
                    setup.g_fiber.index,
                    setup.alpha_fiber.points,
                    setup.alpha_fiber.index,
                    fmt_result(r)
                );
            }
            s
        }
    })
}
