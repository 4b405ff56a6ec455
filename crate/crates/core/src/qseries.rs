//! Truncated `q`-expansions over `Q` and the line-oriented fixture format
//! used to ship bases of weight-2 cusp forms.
//!
//! ```text
//! qexp-fixture v1
//! # comments anywhere
//! level 26
//! delta 1 5 21 25
//! weight 2
//! prec 10
//! form 0 1 0 0 0 -2 -1 -3 0 2 1
//! ...
//! ```
//!
//! `delta` must list the whole subgroup; no closure is applied. Each `form`
//! line carries `a_0 .. a_prec`, as integers or `p/q`.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cosets::{invariants_of, CurveInvariants};
use crate::exactalg::{parse_rational, ExactRational};
use crate::zmod::{DeltaSubgroup, Level};

/// `a_0 + a_1 q + ... + a_prec q^prec + O(q^{prec+1})`.
#[derive(Clone, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<ExactRational>,
}

impl QSeries {
    pub fn new(coeffs: Vec<ExactRational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least a_0");
        QSeries { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| crate::exactalg::rat(c)).collect())
    }

    pub fn zero(prec: usize) -> Self {
        QSeries { coeffs: vec![ExactRational::zero(); prec + 1] }
    }

    pub fn one(prec: usize) -> Self {
        let mut s = Self::zero(prec);
        s.coeffs[0] = ExactRational::one();
        s
    }

    /// `q^k`, truncated to `prec`.
    pub fn monomial(k: usize, prec: usize) -> Self {
        let mut s = Self::zero(prec);
        if k <= prec {
            s.coeffs[k] = ExactRational::one();
        }
        s
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &ExactRational {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, prec: usize) -> Self {
        QSeries { coeffs: self.coeffs[..=prec.min(self.prec())].to_vec() }
    }

    /// Lowest `k` with `a_k != 0`.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let prec = self.prec().min(other.prec());
        QSeries { coeffs: (0..=prec).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect() }
    }

    pub fn scale(&self, c: &ExactRational) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn pow(&self, e: u32) -> QSeries {
        (0..e).fold(QSeries::one(self.prec()), |acc, _| series_mul(&acc, self))
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("{c}*q^{k}"))
            .collect();
        write!(f, "{} + O(q^{})", if terms.is_empty() { "0".into() } else { terms.join(" + ") }, self.prec() + 1)
    }
}

/// Cauchy product truncated to the smaller precision.
pub fn series_mul(a: &QSeries, b: &QSeries) -> QSeries {
    let prec = a.prec().min(b.prec());
    let mut out = vec![ExactRational::zero(); prec + 1];
    for (i, ai) in a.coeffs[..=prec].iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.coeffs[..=prec - i].iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    QSeries { coeffs: out }
}

/// Whether a relation of this weight verified to `prec` is provably exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Rigor {
    Verified,
    Heuristic,
}

impl fmt::Display for Rigor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rigor::Verified => "verified",
            Rigor::Heuristic => "heuristic",
        })
    }
}

/// `floor(k mu / 12) + 1`: a weight-`k` form on a subgroup of index `mu` that
/// vanishes to this order vanishes identically.
pub fn sturm_bound(weight: u64, mu: u64) -> u64 {
    weight * mu / 12 + 1
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FixtureError {
    #[error("line {line}: {message}")]
    SyntaxError { line: usize, message: String },
    #[error("bad header: {0}")]
    BadHeader(String),
    #[error("{forms} forms given but X_Delta({level}) has genus {genus}")]
    GenusMismatch { level: u64, forms: usize, genus: u64 },
    #[error("form {index} has nonzero constant term")]
    NotCuspidal { index: usize },
    #[error("form {index} has {found} coefficients, expected {expected}")]
    PrecisionMismatch { index: usize, found: usize, expected: usize },
}

/// A basis of `S_2(Gamma_Delta(N))` by truncated expansions at infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspFormBasis {
    level: Level,
    delta: DeltaSubgroup,
    forms: Vec<QSeries>,
    invariants: CurveInvariants,
}

impl CuspFormBasis {
    /// Validates cuspidality, a shared precision, and that the number of
    /// forms equals the genus of `X_Delta(N)`.
    pub fn new(level: Level, delta: DeltaSubgroup, forms: Vec<QSeries>) -> Result<Self, FixtureError> {
        let basis = Self::new_unchecked(level, delta, forms)?;
        if basis.forms.len() as u64 != basis.invariants.genus {
            return Err(FixtureError::GenusMismatch {
                level: level.get(),
                forms: basis.forms.len(),
                genus: basis.invariants.genus,
            });
        }
        Ok(basis)
    }

    /// As [`CuspFormBasis::new`] but without the genus check, for synthetic
    /// series that are not actually modular forms of this level.
    pub fn new_unchecked(level: Level, delta: DeltaSubgroup, forms: Vec<QSeries>) -> Result<Self, FixtureError> {
        let expected = forms.first().map_or(0, |f| f.coeffs.len());
        for (index, f) in forms.iter().enumerate() {
            if f.coeffs.len() != expected {
                return Err(FixtureError::PrecisionMismatch { index, found: f.coeffs.len(), expected });
            }
            if !f.coeffs[0].is_zero() {
                return Err(FixtureError::NotCuspidal { index });
            }
        }
        let invariants = invariants_of(level, &delta).map_err(|e| FixtureError::BadHeader(e.to_string()))?;
        Ok(CuspFormBasis { level, delta, forms, invariants })
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn delta(&self) -> &DeltaSubgroup {
        &self.delta
    }

    pub fn weight(&self) -> u64 {
        2
    }

    pub fn forms(&self) -> &[QSeries] {
        &self.forms
    }

    pub fn declared_genus(&self) -> usize {
        self.forms.len()
    }

    pub fn prec(&self) -> usize {
        self.forms.first().map_or(0, QSeries::prec)
    }

    /// Index of `Gamma_Delta(N)` in `PSL_2(Z)`.
    pub fn mu(&self) -> u64 {
        self.invariants.mu
    }

    /// Rigor of a degree-`d` relation among the forms (a weight `2d` form).
    pub fn rigor_for_degree(&self, degree: u64) -> Rigor {
        if self.prec() as u64 >= sturm_bound(2 * degree, self.mu()) {
            Rigor::Verified
        } else {
            Rigor::Heuristic
        }
    }
}

/// `prod forms[i]^exponents[i]`, truncated to the basis precision.
pub fn monomial_eval(basis: &CuspFormBasis, exponents: &[u32]) -> QSeries {
    assert_eq!(exponents.len(), basis.forms.len(), "one exponent per form");
    eval_monomial(&basis.forms, exponents, basis.prec())
}

pub(crate) fn eval_monomial(forms: &[QSeries], exponents: &[u32], prec: usize) -> QSeries {
    forms
        .iter()
        .zip(exponents)
        .filter(|(_, &e)| e > 0)
        .fold(QSeries::one(prec), |acc, (f, &e)| series_mul(&acc, &f.pow(e)))
}

pub fn parse_fixture(text: &str) -> Result<CuspFormBasis, FixtureError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let syntax = |line: usize, message: &str| FixtureError::SyntaxError { line, message: message.to_string() };

    match lines.next() {
        Some((_, "qexp-fixture v1")) => {}
        Some((line, _)) => return Err(syntax(line, "expected `qexp-fixture v1`")),
        None => return Err(syntax(1, "empty fixture")),
    }

    let mut header = |key: &str| -> Result<(usize, Vec<String>), FixtureError> {
        let (line, l) = lines.next().ok_or_else(|| syntax(0, &format!("missing `{key}` line")))?;
        let mut parts = l.split_whitespace();
        if parts.next() != Some(key) {
            return Err(syntax(line, &format!("expected `{key}`")));
        }
        Ok((line, parts.map(String::from).collect()))
    };
    let bad = |what: String| FixtureError::BadHeader(what);

    let (line, level) = header("level")?;
    let level: u64 = match level.as_slice() {
        [n] => n.parse().map_err(|_| syntax(line, "level must be an integer"))?,
        _ => return Err(syntax(line, "level takes one value")),
    };
    let level = Level::new(level).map_err(|e| bad(e.to_string()))?;

    let (line, residues) = header("delta")?;
    let residues: Vec<u64> = residues
        .iter()
        .map(|r| r.parse().map_err(|_| syntax(line, "delta residues must be integers")))
        .collect::<Result<_, _>>()?;
    if residues.iter().any(|&r| r >= level.get()) {
        return Err(bad(format!("delta residues must lie in [1, {}]", level.get() - 1)));
    }
    let delta = DeltaSubgroup::new(level, residues).map_err(|e| bad(e.to_string()))?;

    let (line, weight) = header("weight")?;
    if weight != ["2"] {
        return Err(syntax(line, "only weight 2 is supported"));
    }
    let (line, prec) = header("prec")?;
    let prec: usize = match prec.as_slice() {
        [p] => p.parse().map_err(|_| syntax(line, "prec must be an integer"))?,
        _ => return Err(syntax(line, "prec takes one value")),
    };

    let mut forms = Vec::new();
    for (line, l) in lines {
        let mut parts = l.split_whitespace();
        if parts.next() != Some("form") {
            return Err(syntax(line, "expected `form`"));
        }
        let coeffs: Vec<ExactRational> = parts
            .map(|c| parse_rational(c).map_err(|e| syntax(line, &e.to_string())))
            .collect::<Result<_, _>>()?;
        if coeffs.len() != prec + 1 {
            return Err(FixtureError::PrecisionMismatch { index: forms.len(), found: coeffs.len(), expected: prec + 1 });
        }
        forms.push(QSeries::new(coeffs));
    }
    CuspFormBasis::new(level, delta, forms)
}

pub fn render_fixture(basis: &CuspFormBasis) -> String {
    let mut out = String::from("qexp-fixture v1\n");
    out.push_str(&format!("level {}\n", basis.level));
    let residues: Vec<String> = basis.delta.residues().iter().map(u64::to_string).collect();
    out.push_str(&format!("delta {}\n", residues.join(" ")));
    out.push_str("weight 2\n");
    out.push_str(&format!("prec {}\n", basis.prec()));
    for f in &basis.forms {
        let coeffs: Vec<String> = f.coeffs.iter().map(ToString::to_string).collect();
        out.push_str(&format!("form {}\n", coeffs.join(" ")));
    }
    out
}
