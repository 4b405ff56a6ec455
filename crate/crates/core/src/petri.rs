//! Canonical (Petri) models from a basis of weight-2 cusp forms.
//!
//! For a non-hyperelliptic curve of genus `g` the forms `f_1, ..., f_g` give
//! the canonical embedding into `P^{g-1}`. The homogeneous relations of
//! degree `d` among them are the kernel of the matrix whose columns are the
//! `q`-expansions of the degree-`d` monomials. Genus 4 curves are cut out by
//! one quadric and one cubic, genus 3 curves by one plane quartic.
//!
//! Variables are named `x, y, z, w` after `f_1 .. f_4`, and monomials are
//! ordered graded-lexicographically with `x > y > z > w`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactalg::{
    classify_quadric, kernel_basis, normalize_integer, parse_rational, ExactRational, QuadricClassification,
    QuadricVerdict, RationalMatrix, SymmetricForm,
};
use crate::qseries::{eval_monomial, CuspFormBasis, QSeries, Rigor};

const VARS: [&str; 4] = ["x", "y", "z", "w"];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PetriError {
    #[error("expected a basis of genus {expected}, got {found} forms")]
    WrongGenus { expected: usize, found: usize },
    #[error("quadric space has dimension {dimension} at verified precision (hyperelliptic or too few coefficients)")]
    HyperellipticOrLowPrecision { dimension: usize },
    #[error("degree-{degree} relation space has unexpected dimension {dimension}")]
    UnexpectedKernelDimension { degree: u32, dimension: usize },
    #[error("cannot parse polynomial {text:?}: {message}")]
    Parse { text: String, message: String },
}

/// Exponent vector of a monomial.
pub type Exponents = Vec<u32>;

/// A polynomial in at most four variables with rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Exponents, ExactRational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponents, ExactRational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponents, c: ExactRational) {
        let entry = self.terms.entry(e).or_insert_with(ExactRational::zero);
        *entry += c;
        self.terms.retain(|_, c| !c.is_zero());
    }

    /// Parses `x^2*z - 3*x*y + 1/2*w^2` in the variables `x, y, z, w`.
    pub fn parse(nvars: usize, text: &str) -> Result<Self, PetriError> {
        let fail = |message: &str| PetriError::Parse { text: text.to_string(), message: message.to_string() };
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(fail("empty"));
        }
        let mut poly = Self::zero(nvars);
        let mut rest = cleaned.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ => (1, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let (term, tail) = body.split_at(end);
            rest = tail;
            if term.is_empty() {
                return Err(fail("dangling sign"));
            }
            let mut coeff = ExactRational::from_integer(BigInt::from(sign));
            let mut exps = vec![0u32; nvars];
            for factor in term.split('*') {
                let (base, power) = match factor.split_once('^') {
                    Some((b, p)) => (b, p.parse::<u32>().map_err(|_| fail("bad exponent"))?),
                    None => (factor, 1),
                };
                match VARS[..nvars].iter().position(|v| *v == base) {
                    Some(i) => exps[i] += power,
                    None => {
                        let c = parse_rational(base).map_err(|e| fail(&e.to_string()))?;
                        coeff *= num_traits::pow(c, power as usize);
                    }
                }
            }
            poly.add_term(exps, coeff);
        }
        Ok(poly)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &ExactRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &[u32]) -> ExactRational {
        self.terms.get(e).cloned().unwrap_or_else(ExactRational::zero)
    }

    /// Degree if homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let d = degrees.next()?;
        degrees.all(|x| x == d).then_some(d)
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// Coefficient vector over the degree-`d` monomials in graded-lex order.
    pub fn to_vector(&self, degree: u32) -> Vec<ExactRational> {
        monomials(self.nvars, degree).iter().map(|m| self.coefficient(m)).collect()
    }

    pub fn from_vector(nvars: usize, degree: u32, v: &[ExactRational]) -> Self {
        Self::from_terms(nvars, monomials(nvars, degree).into_iter().zip(v.iter().cloned()))
    }

    /// Symmetric matrix of a homogeneous quadratic polynomial.
    pub fn quadratic_form(&self) -> Option<SymmetricForm> {
        if !self.is_zero() && self.homogeneous_degree() != Some(2) {
            return None;
        }
        let coeffs = self.terms.iter().map(|(e, c)| {
            let idx: Vec<usize> = e.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat(i).take(k as usize)).collect();
            ((idx[0], idx[1]), c.clone())
        });
        Some(SymmetricForm::from_quadratic_coefficients(self.nvars, coeffs))
    }

    /// Substitutes the series for the variables.
    pub fn evaluate(&self, forms: &[QSeries]) -> QSeries {
        assert_eq!(forms.len(), self.nvars, "one series per variable");
        let prec = forms.iter().map(QSeries::prec).min().unwrap_or(0);
        self.terms
            .iter()
            .fold(QSeries::zero(prec), |acc, (e, c)| acc.add(&eval_monomial(forms, e, prec).scale(c)))
    }

    /// Clears denominators and content; the first monomial in graded-lex
    /// order gets a positive coefficient.
    pub fn normalized(&self) -> Polynomial {
        let Some(degree) = self.homogeneous_degree() else {
            return self.clone();
        };
        let ints = normalize_integer(&self.to_vector(degree));
        Polynomial::from_terms(
            self.nvars,
            monomials(self.nvars, degree).into_iter().zip(ints.into_iter().map(ExactRational::from_integer)),
        )
    }

    /// Terms in graded-lex order (highest first).
    fn ordered_terms(&self) -> Vec<(&Exponents, &ExactRational)> {
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let (da, db) = (a.iter().sum::<u32>(), b.iter().sum::<u32>());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        terms
    }

    /// `[(exponents, "coefficient")]` in graded-lex order.
    pub fn term_list(&self) -> Vec<(Exponents, String)> {
        self.ordered_terms().into_iter().map(|(e, c)| (e.clone(), c.to_string())).collect()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.ordered_terms().into_iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| if k == 1 { VARS[v].to_string() } else { format!("{}^{k}", VARS[v]) })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term {
            exponents: Exponents,
            coefficient: String,
        }
        s.collect_seq(self.term_list().into_iter().map(|(exponents, coefficient)| Term { exponents, coefficient }))
    }
}

/// Monomials of degree `d` in `n` variables, graded-lex with `x > y > ...`.
pub fn monomials(n: usize, d: u32) -> Vec<Exponents> {
    fn rec(n: usize, d: u32, prefix: &mut Exponents, out: &mut Vec<Exponents>) {
        if n == 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=d).rev() {
            prefix.push(k);
            rec(n - 1, d - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, d, &mut Vec::new(), &mut out);
    }
    out
}

/// Columns: degree-`d` monomials in the forms; rows: coefficients of
/// `q^1 .. q^prec`.
pub fn coefficient_matrix(forms: &[QSeries], degree: u32) -> RationalMatrix {
    let prec = forms.iter().map(QSeries::prec).min().unwrap_or(0);
    let series: Vec<QSeries> = monomials(forms.len(), degree).iter().map(|m| eval_monomial(forms, m, prec)).collect();
    RationalMatrix::from_rows(
        (1..=prec).map(|k| series.iter().map(|s| s.coeff(k).clone()).collect()).collect(),
    )
}

/// All degree-`d` relations visible to the available precision.
pub fn relations_of_degree(forms: &[QSeries], degree: u32) -> Vec<Polynomial> {
    let nvars = forms.len();
    kernel_basis(&coefficient_matrix(forms, degree))
        .into_iter()
        .map(|v| {
            let v: Vec<ExactRational> = v.into_iter().map(ExactRational::from_integer).collect();
            Polynomial::from_vector(nvars, degree, &v)
        })
        .collect()
}

fn require_genus(basis: &CuspFormBasis, genus: usize) -> Result<(), PetriError> {
    if basis.declared_genus() != genus {
        return Err(PetriError::WrongGenus { expected: genus, found: basis.declared_genus() });
    }
    Ok(())
}

/// The quadrics through a genus-4 canonical curve. At verified precision
/// exactly one is expected.
pub fn quadric_relations(basis: &CuspFormBasis) -> Result<Vec<Polynomial>, PetriError> {
    require_genus(basis, 4)?;
    let quadrics = relations_of_degree(basis.forms(), 2);
    if basis.rigor_for_degree(2) == Rigor::Verified && quadrics.len() != 1 {
        return Err(PetriError::HyperellipticOrLowPrecision { dimension: quadrics.len() });
    }
    Ok(quadrics)
}

/// Row space of `{x Q, y Q, z Q, w Q}` in reduced echelon form.
fn multiples_of(quadric: &Polynomial) -> (RationalMatrix, Vec<usize>) {
    let n = quadric.nvars();
    let rows: Vec<Vec<ExactRational>> = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            Polynomial::from_terms(n, [(e, ExactRational::one())]).mul(quadric).to_vector(3)
        })
        .collect();
    RationalMatrix::from_rows(rows).rref()
}

fn reduce_modulo(v: &[ExactRational], span: &(RationalMatrix, Vec<usize>)) -> Vec<ExactRational> {
    let (rows, pivots) = span;
    let mut v = v.to_vec();
    for (r, &p) in pivots.iter().enumerate() {
        if v[p].is_zero() {
            continue;
        }
        let f = v[p].clone();
        for (j, x) in v.iter_mut().enumerate() {
            *x -= &rows[(r, j)] * &f;
        }
    }
    v
}

/// Canonical representative of `cubic` modulo the linear multiples of
/// `quadric`: reduced against the echelon basis of `{x Q, ..., w Q}`, then
/// normalized.
pub fn reduce_cubic(cubic: &Polynomial, quadric: &Polynomial) -> Polynomial {
    let span = multiples_of(quadric);
    let reduced = reduce_modulo(&cubic.to_vector(3), &span);
    Polynomial::from_vector(cubic.nvars(), 3, &reduced).normalized()
}

/// Whether two cubics agree up to a scalar modulo multiples of the quadric.
pub fn cubics_equivalent(a: &Polynomial, b: &Polynomial, quadric: &Polynomial) -> bool {
    reduce_cubic(a, quadric) == reduce_cubic(b, quadric)
}

/// The cubic completing the genus-4 model: the degree-3 relations modulo the
/// four multiples of the quadric must leave a single new relation.
pub fn cubic_relations(basis: &CuspFormBasis, quadric: &Polynomial) -> Result<Polynomial, PetriError> {
    require_genus(basis, 4)?;
    let cubics = relations_of_degree(basis.forms(), 3);
    let span = multiples_of(quadric);
    let residual: Vec<Vec<ExactRational>> = cubics
        .iter()
        .map(|c| reduce_modulo(&c.to_vector(3), &span))
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect();
    let residual_dim = if residual.is_empty() { 0 } else { RationalMatrix::from_rows(residual.clone()).rank() };
    if quadric.is_zero() || span.1.len() != 4 || residual_dim != 1 {
        return Err(PetriError::UnexpectedKernelDimension { degree: 3, dimension: residual_dim });
    }
    Ok(Polynomial::from_vector(4, 3, &residual[0]).normalized())
}

/// The plane quartic of a genus-3 canonical curve.
pub fn quartic_relation(basis: &CuspFormBasis) -> Result<Polynomial, PetriError> {
    require_genus(basis, 3)?;
    let mut quartics = relations_of_degree(basis.forms(), 4);
    if quartics.len() != 1 {
        return Err(PetriError::UnexpectedKernelDimension { degree: 4, dimension: quartics.len() });
    }
    Ok(quartics.remove(0))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PetriModel {
    pub genus: usize,
    /// Genus 4: `[cubic, quadric]`. Genus 3: `[quartic]`.
    pub relations: Vec<Polynomial>,
    #[serde(skip)]
    pub quadric: Option<SymmetricForm>,
    pub rigor: Rigor,
}

impl PetriModel {
    pub fn quadric_polynomial(&self) -> Option<&Polynomial> {
        (self.genus == 4).then(|| &self.relations[1])
    }
}

/// Builds the canonical model of a genus-3 or genus-4 basis.
pub fn build_model(basis: &CuspFormBasis) -> Result<PetriModel, PetriError> {
    match basis.declared_genus() {
        3 => {
            let quartic = quartic_relation(basis)?;
            Ok(PetriModel { genus: 3, relations: vec![quartic], quadric: None, rigor: basis.rigor_for_degree(4) })
        }
        4 => {
            let mut quadrics = quadric_relations(basis)?;
            if quadrics.len() != 1 {
                return Err(PetriError::HyperellipticOrLowPrecision { dimension: quadrics.len() });
            }
            let quadric = quadrics.remove(0);
            let cubic = cubic_relations(basis, &quadric)?;
            let form = quadric.quadratic_form();
            Ok(PetriModel { genus: 4, relations: vec![cubic, quadric], quadric: form, rigor: basis.rigor_for_degree(3) })
        }
        found => Err(PetriError::WrongGenus { expected: 4, found }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trigonality {
    pub trigonal_over_q: bool,
    pub reason: String,
    pub classification: Option<QuadricClassification>,
}

/// Genus 3: always trigonal over `Q` (projection of the plane quartic from a
/// rational point). Genus 4: trigonal over `Q` iff the quadric's ruling is
/// rational.
pub fn is_trigonal_over_q(model: &PetriModel) -> Trigonality {
    match &model.quadric {
        None => Trigonality {
            trigonal_over_q: true,
            reason: "plane quartic; projection from the rational cusp has degree 3".into(),
            classification: None,
        },
        Some(q) => trigonality_of_quadric(q),
    }
}

pub fn trigonality_of_quadric(q: &SymmetricForm) -> Trigonality {
    let c = classify_quadric(q);
    let reason = match c.verdict {
        QuadricVerdict::RuledOverField(d) => format!("rulings defined only over Q(sqrt({d}))"),
        v => format!("lies on a {v}"),
    };
    Trigonality { trigonal_over_q: c.verdict.ruling_over_q(), reason, classification: Some(c) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;
    use crate::qseries::parse_fixture;
    use crate::zmod::{subgroup_closure, Level};
    use proptest::prelude::*;

    const PREFIX: &str = include_str!("../fixtures/N26_delta1-5-21-25q10.txt");
    const VERIFIED: &str = include_str!("../fixtures/N26_delta1-5-21-25q64.txt");
    const PUBLISHED_CUBIC: &str = "x^2*z - x*y^2 - x*z^2 + 2*y^2*z - 2*y*z^2 + y*z*w - y*w^2 + z^3 - 2*z^2*w + z*w^2";

    fn poly(s: &str) -> Polynomial {
        Polynomial::parse(4, s).unwrap()
    }

    fn synthetic(level: u64, gens: &[u64], nforms: usize, prec: usize) -> CuspFormBasis {
        let lv = Level::new(level).unwrap();
        let forms = (1..=nforms).map(|k| QSeries::monomial(k, prec)).collect();
        CuspFormBasis::new_unchecked(lv, subgroup_closure(lv, gens).unwrap(), forms).unwrap()
    }

    #[test]
    fn monomial_order() {
        let m = monomials(4, 2);
        assert_eq!(m.len(), 10);
        assert_eq!(m[0], vec![2, 0, 0, 0]);
        assert_eq!(m[3], vec![1, 0, 0, 1]);
        assert_eq!(m[9], vec![0, 0, 0, 2]);
        assert_eq!(monomials(4, 3).len(), 20);
        assert_eq!(monomials(3, 4).len(), 15);
    }

    #[test]
    fn parse_and_print() {
        let p = poly("x*w - y*z + z^2");
        assert_eq!(p.to_string(), "x*w - y*z + z^2");
        assert_eq!(poly(PUBLISHED_CUBIC).to_string(), PUBLISHED_CUBIC);
        assert_eq!(poly("-2*x^2 + 1/2*y*w").to_string(), "-2*x^2 + 1/2*y*w");
        assert!(Polynomial::parse(4, "x*v").is_err());
        assert!(Polynomial::parse(4, "x +").is_err());
    }

    #[test]
    fn published_model_annihilates_prefix() {
        let basis = parse_fixture(PREFIX).unwrap();
        assert!(poly("x*w - y*z + z^2").evaluate(basis.forms()).is_zero());
        assert!(poly(PUBLISHED_CUBIC).evaluate(basis.forms()).is_zero());
        let quadrics = quadric_relations(&basis).unwrap();
        assert!(quadrics.contains(&poly("x*w - y*z + z^2")));
        assert_eq!(basis.rigor_for_degree(2), Rigor::Heuristic);
    }

    #[test]
    fn verified_model_of_delta1_26() {
        let basis = parse_fixture(VERIFIED).unwrap();
        let model = build_model(&basis).unwrap();
        assert_eq!(model.rigor, Rigor::Verified);
        let quadric = model.quadric_polynomial().unwrap();
        assert_eq!(quadric, &poly("x*w - y*z + z^2"));
        assert!(cubics_equivalent(&model.relations[0], &poly(PUBLISHED_CUBIC), quadric));
        for r in &model.relations {
            assert!(r.evaluate(basis.forms()).is_zero());
        }
        let t = is_trigonal_over_q(&model);
        assert!(t.trigonal_over_q);
        assert_eq!(t.classification.unwrap().verdict, QuadricVerdict::RuledOverQ);
    }

    #[test]
    fn kernel_dimensions_at_verified_precision() {
        let basis = parse_fixture(VERIFIED).unwrap();
        for (degree, kernel) in [(2, 1), (3, 5)] {
            let m = coefficient_matrix(basis.forms(), degree);
            assert_eq!(m.rank() + kernel, monomials(4, degree).len());
            assert_eq!(relations_of_degree(basis.forms(), degree).len(), kernel);
        }
    }

    #[test]
    fn synthetic_monomial_basis_is_rejected() {
        let basis = synthetic(26, &[5], 4, 64);
        let rels = relations_of_degree(basis.forms(), 2);
        assert!(rels.len() > 1);
        assert!(rels.iter().all(|r| r.evaluate(basis.forms()).is_zero()));
        assert!(matches!(quadric_relations(&basis), Err(PetriError::HyperellipticOrLowPrecision { .. })));

        let basis = synthetic(24, &[5], 3, 65);
        let quartics = relations_of_degree(basis.forms(), 4);
        assert!(quartics.len() > 1);
        assert!(matches!(quartic_relation(&basis), Err(PetriError::UnexpectedKernelDimension { degree: 4, .. })));
    }

    #[test]
    fn zero_quadric_is_rejected() {
        let basis = parse_fixture(VERIFIED).unwrap();
        assert!(matches!(
            cubic_relations(&basis, &Polynomial::zero(4)),
            Err(PetriError::UnexpectedKernelDimension { degree: 3, .. })
        ));
    }

    #[test]
    fn quartic_needs_genus_three() {
        let basis = parse_fixture(VERIFIED).unwrap();
        assert_eq!(quartic_relation(&basis), Err(PetriError::WrongGenus { expected: 3, found: 4 }));
    }

    #[test]
    fn quadratic_form_splits_cross_terms() {
        let q = poly("x*w - y*z + z^2").quadratic_form().unwrap();
        assert_eq!(q.matrix()[(0, 3)], crate::exactalg::ratio(1, 2));
        assert_eq!(q.matrix()[(2, 2)], rat(1));
        assert!(poly("x^3").quadratic_form().is_none());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn quadric_verdict_survives_basis_change(
            lower in prop::collection::vec(-2i64..=2, 6),
            upper in prop::collection::vec(-2i64..=2, 6),
            signs in prop::collection::vec(prop_oneof![Just(-1i64), Just(1)], 4),
        ) {
            let basis = parse_fixture(VERIFIED).unwrap();
            let mut coeff = [[0i64; 4]; 4];
            for (i, row) in coeff.iter_mut().enumerate() {
                for (j, c) in row.iter_mut().enumerate() {
                    // (L * diag(signs) * U)[i][j]
                    *c = (0..4)
                        .map(|k| {
                            let l = if k == i { 1 } else if k < i { lower[i * (i - 1) / 2 + k] } else { 0 };
                            let u = if k == j { 1 } else if k < j { upper[j * (j - 1) / 2 + k] } else { 0 };
                            l * signs[k] * u
                        })
                        .sum();
                }
            }
            let forms: Vec<QSeries> = coeff
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(basis.forms())
                        .fold(QSeries::zero(basis.prec()), |acc, (&c, f)| acc.add(&f.scale(&rat(c))))
                })
                .collect();
            let changed = CuspFormBasis::new_unchecked(basis.level(), basis.delta().clone(), forms).unwrap();
            let quadrics = quadric_relations(&changed).unwrap();
            prop_assert_eq!(quadrics.len(), 1);
            prop_assert!(quadrics[0].evaluate(changed.forms()).is_zero());
            let q = quadrics[0].quadratic_form().unwrap();
            prop_assert_eq!(classify_quadric(&q).verdict, QuadricVerdict::RuledOverQ);
        }
    }
}
