//! The decision procedure: for each `(N, Delta)` decide whether `X_Delta(N)`
//! has infinitely many cubic points, with a trail of the computed values and
//! imported facts the verdict rests on.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::Path;

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::cosets::{covering_degrees, genus_of, CosetError};
use crate::exactalg::QuadricVerdict;
use crate::facts::{delta_symbol, FactsBundle, GonalityClass, GonalityFact, RankClass};
use crate::obstructions::{
    computed_setup_inputs, genus_x1, ramification_obstruction, ramification_setup, square_degree_obstruction,
    ObstructionError, ObstructionResult,
};
use crate::petri::{build_model, is_trigonal_over_q, PetriError};
use crate::qseries::{parse_fixture, CuspFormBasis, FixtureError, Rigor};
use crate::zmod::{proper_nontrivial_subgroups, DeltaSubgroup, Level};

/// Degree of the maps to elliptic curves and to `P^1` under consideration.
const DEG_F: u64 = 3;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("({level}, {delta}) is outside the scope {{±1}} ⊊ Δ ⊊ (Z/NZ)^x")]
    OutOfScope { level: u64, delta: String },
    #[error("survey needs max N >= 3, got {0}")]
    BadSurveyBound(u64),
    #[error("no rule classifies ({level}, {delta}); the bundled facts do not cover it")]
    UnclassifiedCase { level: u64, delta: String },
    #[error("model for ({level}, {delta}) classifies as {computed}, bundled table says {cited}")]
    ModelMismatch { level: u64, delta: String, computed: QuadricVerdict, cited: QuadricVerdict },
    #[error("model for ({level}, {delta}): {source}")]
    Model { level: u64, delta: String, source: PetriError },
    #[error(transparent)]
    Obstruction(#[from] ObstructionError),
    #[error(transparent)]
    Coset(#[from] CosetError),
    #[error("{path}: {source}")]
    Fixture { path: String, source: FixtureError },
    #[error("cannot read fixtures: {0}")]
    Io(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Infinite,
    Finite,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reason {
    LevelNotInS,
    GenusAtMostOne,
    TrigonalGenus3,
    TrigonalGenus4Quadric(QuadricVerdict),
    HyperellipticRankZero,
    NotTrigonalOverQRankZero,
    BiellipticRankZero,
    NoPositiveRankCurve,
    SquareDegreeObstruction,
    RamificationObstruction,
}

impl Reason {
    pub fn code(&self) -> &'static str {
        match self {
            Reason::LevelNotInS => "LevelNotInS",
            Reason::GenusAtMostOne => "GenusAtMostOne",
            Reason::TrigonalGenus3 => "TrigonalGenus3",
            Reason::TrigonalGenus4Quadric(_) => "TrigonalGenus4Quadric",
            Reason::HyperellipticRankZero => "HyperellipticRankZero",
            Reason::NotTrigonalOverQRankZero => "NotTrigonalOverQRankZero",
            Reason::BiellipticRankZero => "BiellipticRankZero",
            Reason::NoPositiveRankCurve => "NoPositiveRankCurve",
            Reason::SquareDegreeObstruction => "SquareDegreeObstruction",
            Reason::RamificationObstruction => "RamificationObstruction",
        }
    }

    pub fn verdict(&self) -> Verdict {
        match self {
            Reason::GenusAtMostOne | Reason::TrigonalGenus3 | Reason::TrigonalGenus4Quadric(_) => Verdict::Infinite,
            _ => Verdict::Finite,
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::TrigonalGenus4Quadric(v) => write!(f, "TrigonalGenus4Quadric({})", v.code()),
            other => f.write_str(other.code()),
        }
    }
}

impl Serialize for Reason {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.code())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EvidenceKind {
    Computed,
    Cited,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvidenceStep {
    pub step: String,
    pub kind: EvidenceKind,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub citation: Option<String>,
}

/// How the deciding step was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DecisionRigor {
    /// Exact computation on top of the cited facts.
    Exact,
    /// A model checked to the Sturm bound.
    Verified,
    /// A model below the Sturm bound.
    Heuristic,
    /// A bundled classification taken as given.
    Cited,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub level: u64,
    pub label: u32,
    pub delta: Vec<u64>,
    pub delta_pm: String,
    pub genus: u64,
    pub verdict: Verdict,
    pub reason: Reason,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason_detail: Option<String>,
    pub evidence: Vec<EvidenceStep>,
    pub rigor: DecisionRigor,
}

impl Decision {
    pub fn symbol(&self) -> String {
        delta_symbol(self.label)
    }
}

/// Cusp-form bases keyed by `(N, residues of Delta)`; the most precise one
/// wins when several are supplied.
#[derive(Debug, Clone, Default)]
pub struct FixtureSet {
    bases: BTreeMap<(u64, Vec<u64>), CuspFormBasis>,
}

macro_rules! bundled_fixtures {
    ($($name:literal),* $(,)?) => {
        [$(($name, include_str!(concat!("../fixtures/", $name)))),*]
    };
}

const BUNDLED_FIXTURES: [(&str, &str); 14] = bundled_fixtures!(
    "N24_delta1-5-19-23q65.txt",
    "N24_delta1-7-17-23q65.txt",
    "N25_delta1-7-18-24q76.txt",
    "N26_delta1-3-9-17-23-25q64.txt",
    "N26_delta1-5-21-25q10.txt",
    "N26_delta1-5-21-25q64.txt",
    "N28_delta1-13-15-27q73.txt",
    "N28_delta1-3-9-19-25-27q64.txt",
    "N29_delta1-4-5-6-7-9-13-16-20-22-23-24-25-28q64.txt",
    "N36_delta1-11-13-23-25-35q97.txt",
    "N37_delta1-3-4-7-9-10-11-12-16-21-25-26-27-28-30-33-34-36q64.txt",
    "N37_delta1-6-8-10-11-14-23-26-27-29-31-36q64.txt",
    "N49_delta1-6-8-13-15-20-22-27-29-34-36-41-43-48q113.txt",
    "N50_delta1-9-11-19-21-29-31-39-41-49q91.txt",
);

impl FixtureSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The fixtures shipped with the crate.
    pub fn bundled() -> Self {
        let mut set = Self::empty();
        for (name, text) in BUNDLED_FIXTURES {
            set.insert(parse_fixture(text).unwrap_or_else(|e| panic!("bundled fixture {name}: {e}")));
        }
        set
    }

    /// Every `*.txt` file in `dir`.
    pub fn load_dir(dir: &Path) -> Result<Self, PipelineError> {
        let io = |e: std::io::Error| PipelineError::Io(format!("{}: {e}", dir.display()));
        let mut paths: Vec<_> = std::fs::read_dir(dir)
            .map_err(io)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "txt"))
            .collect();
        paths.sort();
        let mut set = Self::empty();
        for path in paths {
            let text = std::fs::read_to_string(&path).map_err(io)?;
            let basis = parse_fixture(&text)
                .map_err(|source| PipelineError::Fixture { path: path.display().to_string(), source })?;
            set.insert(basis);
        }
        Ok(set)
    }

    pub fn insert(&mut self, basis: CuspFormBasis) {
        let key = (basis.level().get(), basis.delta().residues().to_vec());
        match self.bases.get(&key) {
            Some(old) if old.prec() >= basis.prec() => {}
            _ => {
                self.bases.insert(key, basis);
            }
        }
    }

    pub fn get(&self, level: u64, delta: &DeltaSubgroup) -> Option<&CuspFormBasis> {
        self.bases.get(&(level, delta.residues().to_vec()))
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }
}

struct Trail(Vec<EvidenceStep>);

impl Trail {
    fn computed(&mut self, step: &str, detail: impl Into<String>) {
        self.0.push(EvidenceStep { step: step.into(), kind: EvidenceKind::Computed, detail: detail.into(), citation: None });
    }

    fn cited(&mut self, step: &str, detail: impl Into<String>, citation: &str) {
        self.0.push(EvidenceStep {
            step: step.into(),
            kind: EvidenceKind::Cited,
            detail: detail.into(),
            citation: Some(citation.into()),
        });
    }
}

fn numerics(r: &ObstructionResult) -> String {
    r.numerics.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(", ")
}

/// Position of `delta` among the proper nontrivial subgroups, from 1.
pub fn subgroup_label(level: Level, delta: &DeltaSubgroup) -> Option<u32> {
    proper_nontrivial_subgroups(level).iter().position(|d| d == delta).map(|i| i as u32 + 1)
}

/// Decides `(N, Delta)`. The rules are tried in order and the first that
/// applies gives the verdict.
pub fn decide(
    level: Level,
    delta: &DeltaSubgroup,
    bundle: &FactsBundle,
    fixtures: &FixtureSet,
) -> Result<Decision, PipelineError> {
    let n = level.get();
    let pm = delta.pm_notation();
    let label = match subgroup_label(level, delta) {
        Some(l) if delta.level() == level => l,
        _ => return Err(PipelineError::OutOfScope { level: n, delta: pm }),
    };
    let genus = genus_of(level, delta)?;
    let mut trail = Trail(Vec::new());
    trail.computed("genus", format!("g(X_Δ({n})) = {genus} from the coset permutation model"));
    let mut rigor = DecisionRigor::Exact;
    let mut detail = None;

    let reason = 'rules: {
        if !bundle.in_set_s(n) {
            trail.cited("level set", format!("{n} ∉ S, so X_0({n}) has finitely many cubic points"), "[Jeo21, Theorem 0.1]");
            break 'rules Reason::LevelNotInS;
        }
        trail.cited("level set", format!("{n} ∈ S"), "[Jeo21, Theorem 0.1]");
        if genus <= 1 {
            trail.computed("genus rule", "a rational cusp gives a degree-3 map to P^1 over Q");
            detail = Some(format!("genus {genus}"));
            break 'rules Reason::GenusAtMostOne;
        }
        let Some(fact) = bundle.gonality_fact(n, delta) else {
            return Err(PipelineError::UnclassifiedCase { level: n, delta: pm });
        };
        cite_gonality(&mut trail, fact);
        let rank = bundle.jacobian_rank(n);
        let rank_zero = rank.is_some_and(|r| r.rank_of_jac_x1 == RankClass::Zero);
        let cite_rank = |trail: &mut Trail| {
            if let Some(r) = rank {
                trail.cited("jacobian rank", format!("rank of Jac(X_1({n}))(Q) is {:?}", r.rank_of_jac_x1).to_lowercase(), &r.citation);
            }
        };

        match fact.gonality_class {
            GonalityClass::AtMost2 if fact.hyperelliptic && genus >= 3 && rank_zero => {
                cite_rank(&mut trail);
                break 'rules Reason::HyperellipticRankZero;
            }
            GonalityClass::Exactly3 if genus == 3 => {
                if let Some(basis) = fixtures.get(n, delta) {
                    match build_model(basis) {
                        Ok(model) => trail.computed(
                            "plane quartic",
                            format!("{} = 0 ({} to q^{})", model.relations[0], model.rigor, basis.prec()),
                        ),
                        Err(e) => trail.computed("plane quartic", format!("not determined: {e}")),
                    }
                }
                trail.computed("trigonal map", "projection from the rational cusp has degree 3");
                break 'rules Reason::TrigonalGenus3;
            }
            GonalityClass::Exactly3 if genus == 4 => {
                let (verdict, used) = genus4_quadric(level, delta, fact, bundle, fixtures, &mut trail)?;
                rigor = used;
                if verdict.ruling_over_q() {
                    detail = Some(verdict.code().to_string());
                    break 'rules Reason::TrigonalGenus4Quadric(verdict);
                }
                if let QuadricVerdict::RuledOverField(d) = verdict {
                    if rank_zero {
                        detail = Some(format!("rulings over Q(sqrt({d}))"));
                        cite_rank(&mut trail);
                        break 'rules Reason::NotTrigonalOverQRankZero;
                    }
                }
            }
            GonalityClass::GreaterThan3 if fact.bielliptic && rank_zero => {
                cite_rank(&mut trail);
                break 'rules Reason::BiellipticRankZero;
            }
            GonalityClass::GreaterThan3 if !fact.bielliptic => {
                if let Some(reason) = rule_elliptic_targets(level, delta, bundle, &mut trail)? {
                    break 'rules reason;
                }
            }
            _ => {}
        }
        return Err(PipelineError::UnclassifiedCase { level: n, delta: pm });
    };

    Ok(Decision {
        level: n,
        label,
        delta: delta.residues().to_vec(),
        delta_pm: pm,
        genus,
        verdict: reason.verdict(),
        reason,
        reason_detail: detail,
        evidence: trail.0,
        rigor,
    })
}

fn cite_gonality(trail: &mut Trail, fact: &GonalityFact) {
    let class = match fact.gonality_class {
        GonalityClass::AtMost2 => "gonality ≤ 2",
        GonalityClass::Exactly3 => "gonality 3",
        GonalityClass::GreaterThan3 => "gonality > 3",
    };
    let mut text = format!("table {}: {class}", fact.table);
    if fact.hyperelliptic {
        text.push_str(", hyperelliptic");
    }
    if fact.bielliptic {
        text.push_str(", bielliptic");
    }
    trail.cited("gonality", text, &fact.citation);
}

/// Quadric classification for a trigonal genus-4 curve: from a fixture when
/// one is available, else the bundled table.
fn genus4_quadric(
    level: Level,
    delta: &DeltaSubgroup,
    fact: &GonalityFact,
    bundle: &FactsBundle,
    fixtures: &FixtureSet,
    trail: &mut Trail,
) -> Result<(QuadricVerdict, DecisionRigor), PipelineError> {
    let n = level.get();
    let cited = bundle.model(n, fact.label);
    if let Some(basis) = fixtures.get(n, delta) {
        match build_model(basis) {
            Ok(model) => {
                let t = is_trigonal_over_q(&model);
                let c = t.classification.expect("genus 4 model has a quadric");
                trail.computed(
                    "petri model",
                    format!(
                        "quadric {}; cubic {} ({} to q^{})",
                        model.relations[1], model.relations[0], model.rigor, basis.prec()
                    ),
                );
                let diag: Vec<String> = c.diagonal.iter().map(ToString::to_string).collect();
                trail.computed("quadric", format!("diagonal [{}], {}", diag.join(", "), c.verdict));
                if let Some(m) = cited {
                    if m.verdict != c.verdict {
                        return Err(PipelineError::ModelMismatch {
                            level: n,
                            delta: delta.pm_notation(),
                            computed: c.verdict,
                            cited: m.verdict,
                        });
                    }
                    trail.cited("published model", format!("agrees: {}", m.verdict), &m.citation);
                }
                let rigor = match model.rigor {
                    Rigor::Verified => DecisionRigor::Verified,
                    Rigor::Heuristic => DecisionRigor::Heuristic,
                };
                return Ok((c.verdict, rigor));
            }
            Err(e) if basis.rigor_for_degree(3) == Rigor::Verified => {
                return Err(PipelineError::Model { level: n, delta: delta.pm_notation(), source: e });
            }
            Err(e) => trail.computed("petri model", format!("fixture to q^{} is too short: {e}", basis.prec())),
        }
    }
    let Some(m) = cited else {
        return Err(PipelineError::UnclassifiedCase { level: n, delta: delta.pm_notation() });
    };
    trail.cited("published model", format!("diagonal form {}, {}", m.diagonal_form, m.verdict), &m.citation);
    Ok((m.verdict, DecisionRigor::Cited))
}

/// Positive-rank elliptic curves of conductor dividing `N`, and the two
/// obstructions to a degree-3 map onto one.
fn rule_elliptic_targets(
    level: Level,
    delta: &DeltaSubgroup,
    bundle: &FactsBundle,
    trail: &mut Trail,
) -> Result<Option<Reason>, PipelineError> {
    let n = level.get();
    let curves = bundle.positive_rank_curves(n);
    if curves.is_empty() {
        trail.cited("elliptic curves", format!("no elliptic curve of positive rank has conductor dividing {n}"), "[Cremona tables]");
        return Ok(Some(Reason::NoPositiveRankCurve));
    }
    let [target] = curves.as_slice() else { return Ok(None) };
    if target.x0_plus_iso != Some(n) {
        return Ok(None);
    }
    let e = &target.curve;
    trail.cited(
        "elliptic curves",
        format!(
            "{} is the only positive-rank curve of conductor dividing {n}; X_0^+({n}) ≅ {}; no CM; isogeny class of size {}",
            e.label, e.label, e.isogeny_class_size
        ),
        &target.citation,
    );
    let chain = covering_degrees(level, delta);
    let g1 = genus_x1(level)?;
    trail.computed(
        "covering degrees",
        format!(
            "deg(X_1 → X_Δ) = {}, deg(X_Δ → X_0) = {}, deg(X_Δ → X_0^+) = {}, g(X_1({n})) = {g1}",
            chain.deg_x1_to_delta,
            chain.deg_delta_to_x0,
            chain.deg_delta_to_plus()
        ),
    );
    let square = square_degree_obstruction(chain.deg_x1_to_delta, chain.deg_delta_to_plus(), DEG_F, e, g1)?;
    trail.computed("square-degree test", format!("{:?} ({}): {}", square.status, square.reason, numerics(&square)));
    if square.is_obstructed() {
        return Ok(Some(Reason::SquareDegreeObstruction));
    }
    let inputs = computed_setup_inputs(level, delta, DEG_F)?;
    let setup = ramification_setup(level, delta, DEG_F, inputs)?;
    trail.cited("unramified lift", format!("X_Δ({n}) → X_0({n}) is unramified above the fixed points of w_{n}"), "[JKS20, Lemma 2.4]");
    trail.computed(
        "ramification setup",
        format!(
            "w_{n} has {} fixed points, g(X_0^+({n})) = {}; fiber of g: {} points of index {}; fiber of α: {} points of index {}",
            inputs.fixed_points,
            setup.quotient_genus,
            setup.g_fiber.points,
            setup.g_fiber.index,
            setup.alpha_fiber.points,
            setup.alpha_fiber.index
        ),
    );
    let ram = ramification_obstruction(setup.deg_f as u64, setup.required_index as u64);
    trail.computed("ramification test", format!("{:?} ({}): {}", ram.status, ram.reason, numerics(&ram)));
    Ok(ram.is_obstructed().then_some(Reason::RamificationObstruction))
}

/// Decisions for every `N <= max_n` and every proper nontrivial `Delta`, in
/// order of `N`, then of `Delta` by size and residues.
pub fn survey(max_n: u64, bundle: &FactsBundle, fixtures: &FixtureSet) -> Result<Vec<Decision>, PipelineError> {
    if max_n < 3 {
        return Err(PipelineError::BadSurveyBound(max_n));
    }
    let cases: Vec<(Level, DeltaSubgroup)> = (3..=max_n)
        .flat_map(|n| {
            let level = Level::new(n).expect("positive");
            proper_nontrivial_subgroups(level).into_iter().map(move |d| (level, d))
        })
        .collect();
    cases.par_iter().map(|(level, delta)| decide(*level, delta, bundle, fixtures)).collect()
}

fn row(d: &Decision) -> String {
    format!("| {} | {} = {} | {} |", d.level, d.symbol(), d.delta_pm, d.genus)
}

/// Markdown report: the curves of genus
/// at least 2 with infinitely many cubic points, those of genus at most 1,
/// then every finite case with its reason.
pub fn render_markdown(decisions: &[Decision], max_n: u64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# Cubic points on X_Δ(N) for N ≤ {max_n}\n");
    let header = "| N | {±1} ⊊ Δ ⊊ (Z/NZ)^× | g |\n|---|---|---|";
    let infinite: Vec<&Decision> = decisions.iter().filter(|d| d.verdict == Verdict::Infinite).collect();

    let _ = writeln!(out, "## Infinitely many cubic points, genus ≥ 2\n\n{header}");
    for d in infinite.iter().filter(|d| d.genus >= 2) {
        let _ = writeln!(out, "{}", row(d));
    }
    let _ = writeln!(out, "\n## Infinitely many cubic points, genus ≤ 1\n\n{header}");
    for d in infinite.iter().filter(|d| d.genus <= 1) {
        let _ = writeln!(out, "{}", row(d));
    }
    let _ = writeln!(out, "\n## Finitely many cubic points\n\n| N | {{±1}} ⊊ Δ ⊊ (Z/NZ)^× | g | reason |\n|---|---|---|---|");
    for d in decisions.iter().filter(|d| d.verdict == Verdict::Finite) {
        let _ = writeln!(out, "| {} | {} = {} | {} | {} |", d.level, d.symbol(), d.delta_pm, d.genus, d.reason);
    }
    out
}

/// One line per decision.
pub fn render_text(decisions: &[Decision]) -> String {
    decisions
        .iter()
        .map(|d| format!("{} {} {} g={} {} {} [{}]\n", d.level, d.symbol(), d.delta_pm, d.genus, d.verdict, d.reason, rigor_name(d.rigor)))
        .collect()
}

pub fn rigor_name(r: DecisionRigor) -> &'static str {
    match r {
        DecisionRigor::Exact => "exact",
        DecisionRigor::Verified => "verified",
        DecisionRigor::Heuristic => "heuristic",
        DecisionRigor::Cited => "cited",
    }
}

/// A decision with its full evidence trail.
pub fn render_decision_text(d: &Decision) -> String {
    let mut out = format!(
        "X_{}({}), Δ = {}, genus {}\nverdict: {} ({}{})\nrigor: {}\n",
        d.symbol(),
        d.level,
        d.delta_pm,
        d.genus,
        d.verdict,
        d.reason.code(),
        d.reason_detail.as_ref().map(|s| format!(": {s}")).unwrap_or_default(),
        rigor_name(d.rigor)
    );
    for (i, e) in d.evidence.iter().enumerate() {
        let cite = e.citation.as_ref().map(|c| format!(" {c}")).unwrap_or_default();
        let kind = match e.kind {
            EvidenceKind::Computed => "computed",
            EvidenceKind::Cited => "cited",
        };
        let _ = writeln!(out, "{:>2}. [{kind}] {}: {}{cite}", i + 1, e.step, e.detail);
    }
    out
}
