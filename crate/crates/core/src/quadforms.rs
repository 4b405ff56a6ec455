//! Positive definite binary quadratic forms, class numbers, and the
//! Riemann–Hurwitz bookkeeping behind the Atkin–Lehner quotient argument.

use num_integer::{Integer, Roots};
use serde::Serialize;
use thiserror::Error;

use crate::zmod::Level;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadFormError {
    #[error("discriminant {0} is not negative and congruent to 0 or 1 mod 4")]
    BadDiscriminant(i64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("the fixed-point formula needs an odd prime, got 2")]
    EvenPrime,
    #[error("2*{genus_top} - 2 - {fixed_points} is not 4 times an integer >= -1")]
    NonIntegralGenus { genus_top: i64, fixed_points: i64 },
}

/// `a x^2 + b x y + c y^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Bqf {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Bqf {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    pub fn is_reduced(&self) -> bool {
        let Bqf { a, b, c } = *self;
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }
}

fn check_discriminant(d: i64) -> Result<(), QuadFormError> {
    if d >= 0 || d.rem_euclid(4) > 1 {
        return Err(QuadFormError::BadDiscriminant(d));
    }
    Ok(())
}

/// Primitive reduced forms with `a` up to `a_max`.
fn reduced_forms_up_to(d: i64, a_max: i64) -> Vec<Bqf> {
    let mut out = Vec::new();
    for a in 1..=a_max {
        for b in -a..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = Bqf { a, b, c: num / (4 * a) };
            if f.is_reduced() && f.is_primitive() {
                out.push(f);
            }
        }
    }
    out
}

/// All primitive reduced forms of discriminant `d`, sorted by `(a, b)`.
pub fn reduced_forms(d: i64) -> Result<Vec<Bqf>, QuadFormError> {
    check_discriminant(d)?;
    Ok(reduced_forms_up_to(d, (-d / 3).sqrt()))
}

pub fn class_number(d: i64) -> Result<u64, QuadFormError> {
    Ok(reduced_forms(d)?.len() as u64)
}

/// Fixed points of `w_N` on `X_0(N)` for an odd prime `N`.
pub fn atkin_lehner_fixed_points(n: u64) -> Result<u64, QuadFormError> {
    if n == 2 {
        return Err(QuadFormError::EvenPrime);
    }
    if n < 2 || !Level::new(n).is_ok_and(Level::is_prime) {
        return Err(QuadFormError::NotPrime(n));
    }
    let n = n as i64;
    let h4 = class_number(-4 * n)?;
    Ok(if n % 4 == 1 { h4 } else { class_number(-n)? + h4 })
}

/// Genus of the quotient by an involution with `fixed_points` fixed points:
/// `2 g - 2 = 2 (2 g' - 2) + r`.
pub fn quotient_genus(genus_top: i64, fixed_points: i64) -> Result<i64, QuadFormError> {
    let err = QuadFormError::NonIntegralGenus { genus_top, fixed_points };
    let lhs = 2 * genus_top + 2 - fixed_points;
    if fixed_points < 0 || lhs < 0 || lhs % 4 != 0 {
        return Err(err);
    }
    Ok(lhs / 4)
}

/// A map of curves with its ramification, as `(count, index)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RamificationDatum {
    pub genus_top: i64,
    pub genus_bottom: i64,
    pub degree: i64,
    pub ramification_points: Vec<(i64, i64)>,
}

impl RamificationDatum {
    pub fn total_ramification(&self) -> i64 {
        self.ramification_points.iter().map(|(n, e)| n * (e - 1)).sum()
    }
}

pub fn check_riemann_hurwitz(datum: &RamificationDatum) -> bool {
    2 * datum.genus_top - 2 == datum.degree * (2 * datum.genus_bottom - 2) + datum.total_ramification()
}
