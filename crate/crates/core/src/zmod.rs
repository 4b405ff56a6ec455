//! Arithmetic in `(Z/NZ)^x` and the subgroups `Delta` that parameterize the
//! intermediate curves `X_Delta(N)`.
//!
//! Residues are always stored as canonical integers in `[1, N-1]`; `-r` is
//! written as `N - r`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZmodError {
    #[error("level must be a positive integer, got {0}")]
    ZeroLevel(u64),
    #[error("generator {generator} is not a unit modulo {level}")]
    NonUnitGenerator { level: u64, generator: u64 },
    #[error("residue set is not a subgroup of (Z/{level}Z)^x containing -1: {detail}")]
    NotASubgroup { level: u64, detail: String },
}

/// The modulus `N` of `Gamma_Delta(N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Level(u64);

impl Level {
    pub fn new(n: u64) -> Result<Self, ZmodError> {
        if n == 0 {
            return Err(ZmodError::ZeroLevel(n));
        }
        Ok(Level(n))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// Euler's totient of the level.
    pub fn phi(self) -> u64 {
        if self.0 == 1 {
            return 1;
        }
        prime_factors(self.0)
            .into_iter()
            .fold(self.0, |acc, p| acc / p * (p - 1))
    }

    pub fn is_prime(self) -> bool {
        let n = self.0;
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// All units of `Z/NZ` in `[1, N-1]`, ascending. Empty for `N = 1`.
pub fn units(level: Level) -> Vec<u64> {
    let n = level.get();
    (1..n).filter(|r| r.gcd(&n) == 1).collect()
}

/// A subgroup of `(Z/NZ)^x` that contains `-1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeltaSubgroup {
    level: Level,
    residues: Vec<u64>,
}

impl DeltaSubgroup {
    /// Validates an explicit residue list. The list must already be the
    /// whole subgroup; no closure is taken.
    pub fn new(level: Level, residues: impl IntoIterator<Item = u64>) -> Result<Self, ZmodError> {
        let n = level.get();
        let set: BTreeSet<u64> = residues.into_iter().map(|r| r % n).collect();
        let fail = |detail: String| ZmodError::NotASubgroup { level: n, detail };
        if n <= 2 {
            // (Z/NZ)^x is trivial: 1 = -1, and for N = 1 every integer is that class.
            if n == 2 && set.contains(&0) {
                return Err(fail("0 is not a unit".into()));
            }
            return Ok(DeltaSubgroup::full(level));
        }
        if let Some(bad) = set.iter().find(|r| r.gcd(&n) != 1) {
            return Err(fail(format!("{bad} is not a unit")));
        }
        if !set.contains(&1) {
            return Err(fail("missing 1".into()));
        }
        if !set.contains(&(n - 1)) {
            return Err(fail("missing -1".into()));
        }
        for &a in &set {
            for &b in &set {
                if !set.contains(&(a * b % n)) {
                    return Err(fail(format!("{a}*{b} = {} not in the set", a * b % n)));
                }
            }
        }
        Ok(DeltaSubgroup { level, residues: set.into_iter().collect() })
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    /// `|Delta|`; the trivial unit group at `N <= 2` counts as order 1.
    pub fn order(&self) -> u64 {
        self.residues.len().max(1) as u64
    }

    pub fn contains(&self, r: u64) -> bool {
        self.residues.binary_search(&(r % self.level.get())).is_ok()
    }

    /// `Delta = {+-1}`.
    pub fn is_trivial(&self) -> bool {
        self.order() <= 2
    }

    /// `Delta = (Z/NZ)^x`.
    pub fn is_full(&self) -> bool {
        self.order() == self.level.phi()
    }

    pub fn is_proper_nontrivial(&self) -> bool {
        !self.is_trivial() && !self.is_full()
    }

    pub fn is_subset_of(&self, other: &DeltaSubgroup) -> bool {
        self.level == other.level && self.residues.iter().all(|&r| other.contains(r))
    }

    /// The `+-` representatives `r < N - r`, e.g. `[1, 5]` for `{+-1, +-5}`.
    pub fn plus_minus_representatives(&self) -> Vec<u64> {
        let n = self.level.get();
        self.residues.iter().copied().filter(|&r| r <= n - r).collect()
    }

    /// Renders `{±1, ±5}`.
    pub fn pm_notation(&self) -> String {
        let reps: Vec<String> = self
            .plus_minus_representatives()
            .iter()
            .map(|r| format!("±{r}"))
            .collect();
        format!("{{{}}}", reps.join(", "))
    }

    /// The full unit group.
    pub fn full(level: Level) -> Self {
        DeltaSubgroup { level, residues: units(level) }
    }

    /// `{+-1}`.
    pub fn trivial(level: Level) -> Self {
        subgroup_closure(level, &[]).expect("closure of no generators")
    }
}

impl fmt::Display for DeltaSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.residues.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Smallest subgroup of `(Z/NZ)^x` containing `generators` and `-1`.
pub fn subgroup_closure(level: Level, generators: &[u64]) -> Result<DeltaSubgroup, ZmodError> {
    let n = level.get();
    for &g in generators {
        if (g % n).gcd(&n) != 1 && n > 1 {
            return Err(ZmodError::NonUnitGenerator { level: n, generator: g });
        }
    }
    if n <= 2 {
        return Ok(DeltaSubgroup::full(level));
    }
    let mut gens: Vec<u64> = generators.iter().map(|g| g % n).collect();
    gens.push(n - 1);
    Ok(DeltaSubgroup { level, residues: close(n, &[1], &gens) })
}

/// Closure of `seed` under multiplication by `gens` modulo `n`.
fn close(n: u64, seed: &[u64], gens: &[u64]) -> Vec<u64> {
    let mut seen: BTreeSet<u64> = seed.iter().copied().collect();
    let mut queue: VecDeque<u64> = seed.iter().copied().collect();
    while let Some(x) = queue.pop_front() {
        for &g in gens {
            let y = x * g % n;
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    seen.into_iter().collect()
}

/// Every subgroup of `(Z/NZ)^x` containing `-1`, including `{+-1}` and the
/// full group, ordered by size and then lexicographically.
///
/// Subgroups are grown breadth-first from `{+-1}` by adjoining one unit at a
/// time; every subgroup is reachable along such a chain.
pub fn enumerate_delta_subgroups(level: Level) -> Vec<DeltaSubgroup> {
    let n = level.get();
    if n <= 2 {
        return vec![DeltaSubgroup::full(level)];
    }
    let all_units = units(level);
    let start = close(n, &[1], &[n - 1]);
    let mut seen: HashSet<Vec<u64>> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(h) = queue.pop_front() {
        for &u in &all_units {
            if h.binary_search(&u).is_ok() {
                continue;
            }
            let bigger = close(n, &h, &h.iter().copied().chain([u]).collect::<Vec<_>>());
            if seen.insert(bigger.clone()) {
                queue.push_back(bigger);
            }
        }
    }
    let mut out: Vec<DeltaSubgroup> = seen
        .into_iter()
        .map(|residues| DeltaSubgroup { level, residues })
        .collect();
    out.sort_by(|a, b| a.residues.len().cmp(&b.residues.len()).then_with(|| a.residues.cmp(&b.residues)));
    out
}

/// The subgroups with `{+-1} < Delta < (Z/NZ)^x`, i.e. the curves strictly
/// between `X_1(N)` and `X_0(N)`.
pub fn proper_nontrivial_subgroups(level: Level) -> Vec<DeltaSubgroup> {
    enumerate_delta_subgroups(level)
        .into_iter()
        .filter(DeltaSubgroup::is_proper_nontrivial)
        .collect()
}
