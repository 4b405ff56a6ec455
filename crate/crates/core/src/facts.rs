//! Imported facts: the level set `S`, the gonality partition of the curves
//! in scope, Jacobian ranks of `X_1(N)`, elliptic curves of small conductor,
//! and the published genus-4 models. Everything is validated against
//! recomputed invariants on load.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cosets::genus_of;
use crate::exactalg::QuadricVerdict;
use crate::obstructions::EllipticTarget;
use crate::petri::{trigonality_of_quadric, Polynomial};
use crate::zmod::{proper_nontrivial_subgroups, DeltaSubgroup, Level};

/// The levels `N` for which `X_0(N)` has infinitely many cubic points.
pub const LEVEL_SET_S: [u64; 41] = [
    1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21, 22, 23, 24, 25, 26, 27, 28, 29, 31, 32,
    34, 36, 37, 43, 45, 49, 50, 54, 64, 81,
];

pub const DATA_FILES: [&str; 8] = [
    "set_s.txt",
    "table1.tsv",
    "table2.tsv",
    "table3.tsv",
    "table4.tsv",
    "table5.tsv",
    "jacobian_ranks.tsv",
    "elliptic_curves.tsv",
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactsError {
    #[error("data file missing: {0}")]
    DataFileMissing(PathBuf),
    #[error("{file}:{line}: {message}")]
    ParseError { file: String, line: usize, message: String },
    #[error("genus mismatch for ({level}, Δ{label}): printed {printed}, computed {computed}")]
    GenusIntegrityFailure { level: u64, label: u32, printed: u64, computed: u64 },
    #[error("integrity failure: {0}")]
    Integrity(String),
}

impl FactsError {
    /// Missing or malformed input, as opposed to a failed consistency check.
    pub fn is_data_error(&self) -> bool {
        matches!(self, FactsError::DataFileMissing(_) | FactsError::ParseError { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum GonalityClass {
    AtMost2,
    Exactly3,
    GreaterThan3,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GonalityFact {
    pub level: u64,
    /// Index `i` of `Delta_i`.
    pub label: u32,
    #[serde(serialize_with = "serialize_residues")]
    pub delta: DeltaSubgroup,
    pub gonality_class: GonalityClass,
    pub hyperelliptic: bool,
    pub bielliptic: bool,
    pub printed_genus: u64,
    pub table: u8,
    pub citation: String,
}

fn serialize_residues<S: serde::Serializer>(d: &DeltaSubgroup, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(d.residues())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RankClass {
    Zero,
    Positive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JacobianRankFact {
    pub level: u64,
    pub rank_of_jac_x1: RankClass,
    pub citation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EllipticCurveFact {
    #[serde(flatten)]
    pub curve: EllipticTarget,
    pub x0_plus_iso: Option<u64>,
    pub citation: String,
}

/// A published genus-4 model with its quadric in diagonal form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelFact {
    pub level: u64,
    pub label: u32,
    pub cubic: Polynomial,
    pub quadric: Polynomial,
    pub diagonal_form: Polynomial,
    pub verdict: QuadricVerdict,
    pub citation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactsBundle {
    pub set_s: BTreeSet<u64>,
    pub gonality: Vec<GonalityFact>,
    pub models: Vec<ModelFact>,
    pub jacobian_ranks: Vec<JacobianRankFact>,
    pub elliptic_curves: Vec<EllipticCurveFact>,
}

/// What `validate` checked.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegrityReport {
    pub levels_in_s: usize,
    pub gonality_rows: usize,
    pub genus_checks: usize,
    pub subgroups_covered: usize,
    pub model_rows: usize,
    pub rank_rows: usize,
    pub curve_rows: usize,
}

impl fmt::Display for IntegrityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "level set S: {} levels", self.levels_in_s)?;
        writeln!(f, "gonality rows: {} ({} genus checks passed)", self.gonality_rows, self.genus_checks)?;
        writeln!(f, "proper nontrivial subgroups covered: {}", self.subgroups_covered)?;
        writeln!(f, "genus-4 models: {} (verdicts re-derived)", self.model_rows)?;
        writeln!(f, "jacobian ranks: {}", self.rank_rows)?;
        write!(f, "elliptic curves: {}", self.curve_rows)
    }
}

/// Raw file contents keyed by file name.
pub type Sources = BTreeMap<String, String>;

macro_rules! bundled_file {
    ($name:literal) => {
        ($name, include_str!(concat!("../data/", $name)))
    };
}

const BUNDLED: [(&str, &str); 8] = [
    bundled_file!("set_s.txt"),
    bundled_file!("table1.tsv"),
    bundled_file!("table2.tsv"),
    bundled_file!("table3.tsv"),
    bundled_file!("table4.tsv"),
    bundled_file!("table5.tsv"),
    bundled_file!("jacobian_ranks.tsv"),
    bundled_file!("elliptic_curves.tsv"),
];

/// Lines that are neither blank nor comments, with 1-based line numbers.
fn records(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end())).filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}

struct Row<'a> {
    file: &'a str,
    line: usize,
    fields: Vec<&'a str>,
}

impl<'a> Row<'a> {
    fn split(file: &'a str, line: usize, text: &'a str, arity: usize) -> Result<Self, FactsError> {
        let fields: Vec<&str> = text.split('\t').map(str::trim).collect();
        let row = Row { file, line, fields };
        if row.fields.len() != arity {
            return Err(row.error(format!("expected {arity} tab-separated fields, found {}", row.fields.len())));
        }
        Ok(row)
    }

    fn error(&self, message: String) -> FactsError {
        FactsError::ParseError { file: self.file.to_string(), line: self.line, message }
    }

    fn parse<T: FromStr>(&self, i: usize) -> Result<T, FactsError> {
        self.fields[i].parse().map_err(|_| self.error(format!("bad value {:?} in column {}", self.fields[i], i + 1)))
    }

    fn flag(&self, i: usize) -> Result<bool, FactsError> {
        match self.fields[i] {
            "true" => Ok(true),
            "false" => Ok(false),
            other => Err(self.error(format!("expected true/false, found {other:?}"))),
        }
    }
}

fn parse_set_s(text: &str) -> Result<BTreeSet<u64>, FactsError> {
    let mut out = BTreeSet::new();
    for (line, l) in records(text) {
        let err = || FactsError::ParseError { file: "set_s.txt".into(), line, message: format!("bad entry {l:?}") };
        match l.trim().split_once('-') {
            Some((a, b)) => {
                let (a, b): (u64, u64) = (a.parse().map_err(|_| err())?, b.parse().map_err(|_| err())?);
                out.extend(a..=b);
            }
            None => {
                out.insert(l.trim().parse().map_err(|_| err())?);
            }
        }
    }
    Ok(out)
}

fn parse_gonality(file: &str, text: &str, table: u8) -> Result<Vec<GonalityFact>, FactsError> {
    let gonality_class = match table {
        1 => GonalityClass::AtMost2,
        2 => GonalityClass::Exactly3,
        _ => GonalityClass::GreaterThan3,
    };
    records(text)
        .map(|(line, l)| {
            let row = Row::split(file, line, l, 7)?;
            let level: u64 = row.parse(0)?;
            let lv = Level::new(level).map_err(|e| row.error(e.to_string()))?;
            let reps = row.fields[2]
                .split(',')
                .map(|r| r.trim().parse::<u64>().map_err(|_| row.error(format!("bad residue {r:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            let residues = reps.iter().flat_map(|&r| [r % level, (level - r % level) % level]);
            let delta = DeltaSubgroup::new(lv, residues).map_err(|e| row.error(e.to_string()))?;
            Ok(GonalityFact {
                level,
                label: row.parse(1)?,
                delta,
                gonality_class,
                hyperelliptic: row.flag(4)?,
                bielliptic: row.flag(5)?,
                printed_genus: row.parse(3)?,
                table,
                citation: row.fields[6].to_string(),
            })
        })
        .collect()
}

fn parse_models(text: &str) -> Result<Vec<ModelFact>, FactsError> {
    records(text)
        .map(|(line, l)| {
            let row = Row::split("table5.tsv", line, l, 7)?;
            let poly = |i: usize| Polynomial::parse(4, row.fields[i]).map_err(|e| row.error(e.to_string()));
            let verdict = QuadricVerdict::from_str(row.fields[5]).map_err(|_| row.error(format!("bad verdict {:?}", row.fields[5])))?;
            Ok(ModelFact {
                level: row.parse(0)?,
                label: row.parse(1)?,
                cubic: poly(2)?,
                quadric: poly(3)?,
                diagonal_form: poly(4)?,
                verdict,
                citation: row.fields[6].to_string(),
            })
        })
        .collect()
}

fn parse_ranks(text: &str) -> Result<Vec<JacobianRankFact>, FactsError> {
    records(text)
        .map(|(line, l)| {
            let row = Row::split("jacobian_ranks.tsv", line, l, 3)?;
            let rank_of_jac_x1 = match row.fields[1] {
                "zero" => RankClass::Zero,
                "positive" => RankClass::Positive,
                other => return Err(row.error(format!("expected zero/positive, found {other:?}"))),
            };
            Ok(JacobianRankFact { level: row.parse(0)?, rank_of_jac_x1, citation: row.fields[2].to_string() })
        })
        .collect()
}

fn parse_curves(text: &str) -> Result<Vec<EllipticCurveFact>, FactsError> {
    records(text)
        .map(|(line, l)| {
            let row = Row::split("elliptic_curves.tsv", line, l, 7)?;
            let x0_plus_iso = match row.fields[5] {
                "-" => None,
                _ => Some(row.parse(5)?),
            };
            Ok(EllipticCurveFact {
                curve: EllipticTarget {
                    label: row.fields[0].to_string(),
                    conductor: row.parse(1)?,
                    rank: row.parse(2)?,
                    has_cm: row.flag(3)?,
                    isogeny_class_size: row.parse(4)?,
                },
                x0_plus_iso,
                citation: row.fields[6].to_string(),
            })
        })
        .collect()
}

impl FactsBundle {
    /// The data files shipped with the crate, parsed and validated.
    pub fn bundled() -> Result<Self, FactsError> {
        let sources: Sources = BUNDLED.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        let bundle = Self::parse(&sources)?;
        bundle.validate()?;
        Ok(bundle)
    }

    /// Parses without validating.
    pub fn parse(sources: &Sources) -> Result<Self, FactsError> {
        let get = |name: &str| sources.get(name).map(String::as_str).ok_or_else(|| FactsError::DataFileMissing(name.into()));
        let mut gonality = Vec::new();
        for table in 1..=4u8 {
            let name = format!("table{table}.tsv");
            gonality.extend(parse_gonality(&name, get(&name)?, table)?);
        }
        Ok(FactsBundle {
            set_s: parse_set_s(get("set_s.txt")?)?,
            gonality,
            models: parse_models(get("table5.tsv")?)?,
            jacobian_ranks: parse_ranks(get("jacobian_ranks.tsv")?)?,
            elliptic_curves: parse_curves(get("elliptic_curves.tsv")?)?,
        })
    }

    pub fn validate(&self) -> Result<IntegrityReport, FactsError> {
        let fail = |m: String| Err(FactsError::Integrity(m));
        let expected: BTreeSet<u64> = LEVEL_SET_S.into_iter().collect();
        if self.set_s != expected {
            let extra: Vec<_> = self.set_s.symmetric_difference(&expected).collect();
            return fail(format!("level set S differs from the expected set at {extra:?}"));
        }

        let mut keys = BTreeSet::new();
        for f in &self.gonality {
            if !keys.insert((f.level, f.delta.residues().to_vec())) {
                return fail(format!("duplicate gonality row ({}, Δ{})", f.level, f.label));
            }
            if f.hyperelliptic && f.gonality_class != GonalityClass::AtMost2 {
                return fail(format!("({}, Δ{}) is hyperelliptic but not of gonality at most 2", f.level, f.label));
            }
            if f.bielliptic != (f.table == 3) {
                return fail(format!("({}, Δ{}) has a bielliptic flag inconsistent with its table", f.level, f.label));
            }
            if !self.set_s.contains(&f.level) || !f.delta.is_proper_nontrivial() {
                return fail(format!("({}, Δ{}) is out of scope", f.level, f.label));
            }
        }
        self.gonality.par_iter().try_for_each(|f| {
            let computed = genus_of(Level::new(f.level).expect("validated"), &f.delta)
                .map_err(|e| FactsError::Integrity(e.to_string()))?;
            if computed != f.printed_genus {
                return Err(FactsError::GenusIntegrityFailure {
                    level: f.level,
                    label: f.label,
                    printed: f.printed_genus,
                    computed,
                });
            }
            Ok(())
        })?;

        let mut covered = 0;
        for &n in &self.set_s {
            for (i, delta) in proper_nontrivial_subgroups(Level::new(n).expect("positive")).iter().enumerate() {
                match self.gonality_fact(n, delta) {
                    None => return fail(format!("no gonality fact for level {n}, Δ = {}", delta.pm_notation())),
                    Some(f) if f.label as usize != i + 1 => {
                        return fail(format!("({n}, Δ{}) is subgroup number {} in enumeration order", f.label, i + 1))
                    }
                    Some(_) => covered += 1,
                }
            }
        }
        if covered != self.gonality.len() {
            return fail(format!("{} gonality rows but {covered} subgroups in scope", self.gonality.len()));
        }

        for m in &self.models {
            let Some(fact) = self.lookup_label(m.level, m.label) else {
                return fail(format!("model for unknown curve ({}, Δ{})", m.level, m.label));
            };
            if fact.gonality_class != GonalityClass::Exactly3 || fact.printed_genus != 4 {
                return fail(format!("model row ({}, Δ{}) is not a trigonal genus-4 curve", m.level, m.label));
            }
            for (what, q) in [("diagonal form", &m.diagonal_form), ("quadric", &m.quadric)] {
                let form = q.quadratic_form().ok_or_else(|| FactsError::Integrity(format!("{what} of ({}, Δ{}) is not quadratic", m.level, m.label)))?;
                let computed = trigonality_of_quadric(&form).classification.expect("genus 4").verdict;
                if computed != m.verdict {
                    return fail(format!("{what} of ({}, Δ{}) classifies as {computed}, table says {}", m.level, m.label, m.verdict));
                }
            }
        }

        let mut levels = BTreeSet::new();
        if !self.jacobian_ranks.iter().all(|r| levels.insert(r.level)) {
            return fail("duplicate jacobian rank level".into());
        }
        let mut labels = BTreeSet::new();
        for c in &self.elliptic_curves {
            if !labels.insert(c.curve.label.as_str()) || c.curve.conductor < 11 {
                return fail(format!("bad elliptic curve row {}", c.curve.label));
            }
            if c.x0_plus_iso.is_some_and(|n| n != c.curve.conductor) {
                return fail(format!("{} cannot be X_0^+ of another level", c.curve.label));
            }
        }

        Ok(IntegrityReport {
            levels_in_s: self.set_s.len(),
            gonality_rows: self.gonality.len(),
            genus_checks: self.gonality.len(),
            subgroups_covered: covered,
            model_rows: self.models.len(),
            rank_rows: self.jacobian_ranks.len(),
            curve_rows: self.elliptic_curves.len(),
        })
    }

    pub fn in_set_s(&self, n: u64) -> bool {
        self.set_s.contains(&n)
    }

    pub fn gonality_fact(&self, level: u64, delta: &DeltaSubgroup) -> Option<&GonalityFact> {
        self.gonality.iter().find(|f| f.level == level && f.delta.residues() == delta.residues())
    }

    pub fn lookup_label(&self, level: u64, label: u32) -> Option<&GonalityFact> {
        self.gonality.iter().find(|f| f.level == level && f.label == label)
    }

    pub fn model(&self, level: u64, label: u32) -> Option<&ModelFact> {
        self.models.iter().find(|m| m.level == level && m.label == label)
    }

    pub fn jacobian_rank(&self, level: u64) -> Option<&JacobianRankFact> {
        self.jacobian_ranks.iter().find(|r| r.level == level)
    }

    /// Curves of positive rank whose conductor divides `n`.
    pub fn positive_rank_curves(&self, n: u64) -> Vec<&EllipticCurveFact> {
        self.elliptic_curves.iter().filter(|c| c.curve.rank > 0 && n % c.curve.conductor == 0).collect()
    }

    /// The curve isomorphic to `X_0^+(n)`, if recorded.
    pub fn x0_plus_curve(&self, n: u64) -> Option<&EllipticCurveFact> {
        self.elliptic_curves.iter().find(|c| c.x0_plus_iso == Some(n))
    }
}

/// Reads every data file from `dir`, then parses and validates.
pub fn load_facts(dir: &Path) -> Result<FactsBundle, FactsError> {
    let mut sources = Sources::new();
    for name in DATA_FILES {
        let path = dir.join(name);
        let text = std::fs::read_to_string(&path).map_err(|_| FactsError::DataFileMissing(path.clone()))?;
        sources.insert(name.to_string(), text);
    }
    let bundle = FactsBundle::parse(&sources)?;
    bundle.validate()?;
    Ok(bundle)
}

/// The bundled data as editable sources, for tests and tooling.
pub fn bundled_sources() -> Sources {
    BUNDLED.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

/// `Δ₁`, `Δ₁₂`, ...
pub fn delta_symbol(label: u32) -> String {
    const SUB: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    let digits: String = label.to_string().chars().map(|c| SUB[c.to_digit(10).expect("digit") as usize]).collect();
    format!("Δ{digits}")
}
