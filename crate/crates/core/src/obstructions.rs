//! Nonexistence arguments for a degree-3 map `X_Delta(N) -> E` onto a
//! positive-rank elliptic curve: the square-degree test on isogenies through
//! the optimal parametrization, and a ramification count over the images of
//! the Atkin–Lehner fixed points.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cosets::{covering_degrees, genus_of, CosetError};
use crate::exactalg::is_perfect_square;
use crate::quadforms::{atkin_lehner_fixed_points, quotient_genus, QuadFormError};
use crate::zmod::{subgroup_closure, DeltaSubgroup, Level};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ObstructionError {
    #[error("argument does not apply: {0}")]
    PreconditionViolation(String),
    #[error("setup mismatch for {field}: supplied {supplied}, computed {computed}")]
    SetupMismatch { field: &'static str, supplied: i64, computed: i64 },
    #[error(transparent)]
    QuadForm(#[from] QuadFormError),
    #[error(transparent)]
    Coset(#[from] CosetError),
}

/// An elliptic curve over `Q`, as far as the arguments need it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticTarget {
    pub label: String,
    pub conductor: u64,
    pub rank: u64,
    pub has_cm: bool,
    pub isogeny_class_size: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ObstructionStatus {
    Obstructed,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ObstructionReason {
    NonIntegralIsogenyDegree,
    NonSquareIsogenyDegree,
    RamificationParityViolation,
    OptimalNotForced,
    SquareIsogenyDegree,
    CompatibleRamification,
}

impl fmt::Display for ObstructionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObstructionResult {
    pub status: ObstructionStatus,
    pub reason: ObstructionReason,
    pub numerics: BTreeMap<String, i64>,
}

impl ObstructionResult {
    fn new(status: ObstructionStatus, reason: ObstructionReason, numerics: &[(&str, i64)]) -> Self {
        ObstructionResult {
            status,
            reason,
            numerics: numerics.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }

    pub fn is_obstructed(&self) -> bool {
        self.status == ObstructionStatus::Obstructed
    }

    pub fn get(&self, key: &str) -> Option<i64> {
        self.numerics.get(key).copied()
    }
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Suppose `f: X_Delta(N) -> E` has degree `deg_f`. Then `f . phi` with
/// `phi: X_1(N) -> X_Delta(N)` factors through the optimal parametrization
/// with an isogeny of square degree; if that pins the optimal map as the
/// composite, the map `X_Delta(N) -> X_0^+(N) = E` forces an isogeny of degree
/// `deg_to_plus / deg_f`, which must again be a square.
pub fn square_degree_obstruction(
    deg_phi: u64,
    deg_to_plus: u64,
    deg_f: u64,
    target: &EllipticTarget,
    genus_x1: u64,
) -> Result<ObstructionResult, ObstructionError> {
    if target.has_cm {
        return Err(ObstructionError::PreconditionViolation(format!("{} has complex multiplication", target.label)));
    }
    if target.isogeny_class_size != 1 {
        return Err(ObstructionError::PreconditionViolation(format!(
            "{} lies in an isogeny class of size {}",
            target.label, target.isogeny_class_size
        )));
    }
    if genus_x1 < 1 {
        return Err(ObstructionError::PreconditionViolation("X_1(N) has genus 0".into()));
    }
    if deg_f == 0 || deg_phi == 0 {
        return Err(ObstructionError::PreconditionViolation("map degrees must be positive".into()));
    }
    let composite = deg_f * deg_phi;
    let forced: Vec<u64> =
        divisors(composite).into_iter().filter(|&d| d >= 2 && is_perfect_square(composite / d)).collect();
    let mut numerics = vec![
        ("composite_degree", composite as i64),
        ("deg_to_plus", deg_to_plus as i64),
        ("deg_f", deg_f as i64),
        ("candidate_optimal_degrees", forced.len() as i64),
    ];
    if forced != [composite] {
        return Ok(ObstructionResult::new(ObstructionStatus::Inconclusive, ObstructionReason::OptimalNotForced, &numerics));
    }
    numerics.push(("optimal_degree", composite as i64));
    if deg_to_plus % deg_f != 0 {
        return Ok(ObstructionResult::new(
            ObstructionStatus::Obstructed,
            ObstructionReason::NonIntegralIsogenyDegree,
            &numerics,
        ));
    }
    let beta = deg_to_plus / deg_f;
    numerics.push(("beta_degree", beta as i64));
    let (status, reason) = if is_perfect_square(beta) {
        (ObstructionStatus::Inconclusive, ObstructionReason::SquareIsogenyDegree)
    } else {
        (ObstructionStatus::Obstructed, ObstructionReason::NonSquareIsogenyDegree)
    };
    Ok(ObstructionResult::new(status, reason, &numerics))
}

/// A fiber of `f` of total degree `deg_f` in which every point has
/// ramification index `required_index` exists iff the index divides the degree.
pub fn ramification_obstruction(deg_f: u64, required_index: u64) -> ObstructionResult {
    let numerics = [("deg_f", deg_f as i64), ("required_index", required_index as i64)];
    if required_index == 0 || deg_f % required_index != 0 {
        ObstructionResult::new(ObstructionStatus::Obstructed, ObstructionReason::RamificationParityViolation, &numerics)
    } else {
        ObstructionResult::new(ObstructionStatus::Inconclusive, ObstructionReason::CompatibleRamification, &numerics)
    }
}

/// Inputs to the ramification argument, each re-derived and compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SetupInputs {
    pub genus_x0: i64,
    pub fixed_points: i64,
    pub deg_pi: i64,
    pub deg_alpha: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Fiber {
    pub points: i64,
    pub index: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RamificationSetup {
    pub inputs: SetupInputs,
    pub quotient_genus: i64,
    /// Fiber of `g: X_Delta(N) -> X_0^+(N)` over the image of a fixed point.
    pub g_fiber: Fiber,
    /// Fiber of the isogeny `alpha` over the same point.
    pub alpha_fiber: Fiber,
    pub deg_f: i64,
    pub required_index: i64,
}

/// The values the argument expects for `(N, Delta)` when `f` has degree `deg_f`.
pub fn computed_setup_inputs(level: Level, delta: &DeltaSubgroup, deg_f: u64) -> Result<SetupInputs, ObstructionError> {
    let chain = covering_degrees(level, delta);
    Ok(SetupInputs {
        genus_x0: genus_of(level, &DeltaSubgroup::full(level))? as i64,
        fixed_points: atkin_lehner_fixed_points(level.get())? as i64,
        deg_pi: chain.deg_delta_to_x0 as i64,
        deg_alpha: (chain.deg_delta_to_plus() / deg_f) as i64,
    })
}

/// Checks the supplied inputs and derives the fibers: `X_Delta -> X_0` is
/// unramified above the fixed points of `w_N`, so the fiber of `g` over the
/// image of one has `deg_pi` points of index 2, while the isogeny `alpha` is
/// unramified.
pub fn ramification_setup(
    level: Level,
    delta: &DeltaSubgroup,
    deg_f: u64,
    inputs: SetupInputs,
) -> Result<RamificationSetup, ObstructionError> {
    let expected = computed_setup_inputs(level, delta, deg_f)?;
    for (field, supplied, computed) in [
        ("genus_x0", inputs.genus_x0, expected.genus_x0),
        ("fixed_points", inputs.fixed_points, expected.fixed_points),
        ("deg_pi", inputs.deg_pi, expected.deg_pi),
        ("deg_alpha", inputs.deg_alpha, expected.deg_alpha),
    ] {
        if supplied != computed {
            return Err(ObstructionError::SetupMismatch { field, supplied, computed });
        }
    }
    let g_plus = quotient_genus(inputs.genus_x0, inputs.fixed_points)?;
    if g_plus != 1 {
        return Err(ObstructionError::PreconditionViolation(format!("X_0^+({level}) has genus {g_plus}, not 1")));
    }
    if inputs.fixed_points < 1 {
        return Err(ObstructionError::PreconditionViolation("w_N has no fixed points".into()));
    }
    Ok(RamificationSetup {
        inputs,
        quotient_genus: g_plus,
        g_fiber: Fiber { points: inputs.deg_pi, index: 2 },
        alpha_fiber: Fiber { points: inputs.deg_alpha, index: 1 },
        deg_f: deg_f as i64,
        required_index: 2,
    })
}

/// The level-37 instance with `Delta = {±1, ±10, ±11}` and `deg f = 3`.
pub fn ramification_setup_37(inputs: SetupInputs) -> Result<RamificationSetup, ObstructionError> {
    let level = Level::new(37).expect("nonzero");
    let delta = subgroup_closure(level, &[10]).expect("10 is a unit mod 37");
    ramification_setup(level, &delta, 3, inputs)
}

/// Genus of `X_1(N)`, needed for the square-degree precondition.
pub fn genus_x1(level: Level) -> Result<u64, CosetError> {
    genus_of(level, &DeltaSubgroup::trivial(level))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, squarefree_part};
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn curve(label: &str, conductor: u64) -> EllipticTarget {
        EllipticTarget { label: label.into(), conductor, rank: 1, has_cm: false, isogeny_class_size: 1 }
    }

    fn canonical_37() -> SetupInputs {
        SetupInputs { genus_x0: 2, fixed_points: 2, deg_pi: 6, deg_alpha: 4 }
    }

    #[test]
    fn square_degree_examples() {
        let e37 = curve("37a1", 37);
        let e43 = curve("43a1", 43);
        let r = square_degree_obstruction(2, 18, 3, &e37, 2).unwrap();
        assert_eq!((r.status, r.reason, r.get("beta_degree")), (ObstructionStatus::Obstructed, ObstructionReason::NonSquareIsogenyDegree, Some(6)));
        let r = square_degree_obstruction(3, 12, 3, &e37, 2).unwrap();
        assert_eq!((r.status, r.get("beta_degree")), (ObstructionStatus::Inconclusive, Some(4)));
        let r = square_degree_obstruction(3, 14, 3, &e43, 2).unwrap();
        assert_eq!(r.reason, ObstructionReason::NonIntegralIsogenyDegree);
        assert!(r.is_obstructed() && r.get("beta_degree").is_none());
        let r = square_degree_obstruction(7, 6, 3, &e43, 2).unwrap();
        assert_eq!((r.reason, r.get("beta_degree")), (ObstructionReason::NonSquareIsogenyDegree, Some(2)));
    }

    #[test]
    fn forcing_step() {
        // 12 = 3 * 2^2: both 3 and 12 have square cofactors
        let r = square_degree_obstruction(4, 12, 3, &curve("37a1", 37), 2).unwrap();
        assert_eq!((r.status, r.reason), (ObstructionStatus::Inconclusive, ObstructionReason::OptimalNotForced));
        assert_eq!(r.get("candidate_optimal_degrees"), Some(2));
    }

    #[test]
    fn preconditions() {
        let mut cm = curve("27a1", 27);
        cm.has_cm = true;
        assert!(matches!(square_degree_obstruction(2, 18, 3, &cm, 2), Err(ObstructionError::PreconditionViolation(_))));
        let mut big = curve("11a1", 11);
        big.isogeny_class_size = 3;
        assert!(matches!(square_degree_obstruction(2, 18, 3, &big, 2), Err(ObstructionError::PreconditionViolation(_))));
        assert!(square_degree_obstruction(2, 18, 3, &curve("37a1", 37), 0).is_err());
    }

    #[test]
    fn ramification_examples() {
        assert_eq!(ramification_obstruction(3, 2).reason, ObstructionReason::RamificationParityViolation);
        assert_eq!(ramification_obstruction(4, 2).status, ObstructionStatus::Inconclusive);
        assert_eq!(ramification_obstruction(3, 1).status, ObstructionStatus::Inconclusive);
    }

    #[test]
    fn setup_37() {
        let s = ramification_setup_37(canonical_37()).unwrap();
        assert_eq!(s.g_fiber, Fiber { points: 6, index: 2 });
        assert_eq!(s.alpha_fiber, Fiber { points: 4, index: 1 });
        assert_eq!(s.quotient_genus, 1);
        assert!(ramification_obstruction(s.deg_f as u64, s.required_index as u64).is_obstructed());

        let bad = SetupInputs { fixed_points: 3, ..canonical_37() };
        assert!(matches!(ramification_setup_37(bad), Err(ObstructionError::SetupMismatch { field: "fixed_points", .. })));
        let bad = SetupInputs { deg_pi: 5, ..canonical_37() };
        assert_eq!(
            ramification_setup_37(bad),
            Err(ObstructionError::SetupMismatch { field: "deg_pi", supplied: 5, computed: 6 })
        );
    }

    #[test]
    fn setup_needs_elliptic_quotient() {
        let level = Level::new(23).unwrap();
        let delta = DeltaSubgroup::trivial(level);
        let inputs = computed_setup_inputs(level, &delta, 1).unwrap();
        assert!(matches!(ramification_setup(level, &delta, 1, inputs), Err(ObstructionError::PreconditionViolation(_))));
        let level = Level::new(26).unwrap();
        assert!(matches!(
            computed_setup_inputs(level, &DeltaSubgroup::trivial(level), 3),
            Err(ObstructionError::QuadForm(QuadFormError::NotPrime(26)))
        ));
    }

    #[test]
    fn ramification_matches_partition_search() {
        for d in 1..=100u64 {
            for e in 1..=100u64 {
                let partition_exists = (0..=d).any(|k| k * e == d);
                assert_eq!(ramification_obstruction(d, e).is_obstructed(), !partition_exists, "d={d} e={e}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn ramification_brute_force(d in 1u64..=100, e in 1u64..=100) {
            // all multisets of parts equal to e summing to d
            let mut reachable = vec![false; d as usize + 1];
            reachable[0] = true;
            for s in 0..=d as usize {
                if reachable[s] && s + e as usize <= d as usize {
                    reachable[s + e as usize] = true;
                }
            }
            prop_assert_eq!(ramification_obstruction(d, e).is_obstructed(), !reachable[d as usize]);
        }

        #[test]
        fn square_degree_reasons_are_sound(
            deg_phi in 1u64..50, deg_to_plus in 1u64..200, deg_f in 1u64..6, cm in any::<bool>(),
        ) {
            let mut target = curve("37a1", 37);
            target.has_cm = cm;
            let result = square_degree_obstruction(deg_phi, deg_to_plus, deg_f, &target, 1);
            if cm {
                prop_assert!(matches!(result, Err(ObstructionError::PreconditionViolation(_))));
                return Ok(());
            }
            let r = result.unwrap();
            match r.reason {
                ObstructionReason::NonIntegralIsogenyDegree => prop_assert!(deg_to_plus % deg_f != 0),
                ObstructionReason::NonSquareIsogenyDegree => {
                    prop_assert_eq!(deg_to_plus % deg_f, 0);
                    let beta = rat((deg_to_plus / deg_f) as i64);
                    prop_assert_ne!(squarefree_part(&beta).unwrap(), BigInt::from(1));
                }
                _ => prop_assert!(!r.is_obstructed()),
            }
        }
    }
}
