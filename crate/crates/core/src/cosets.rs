//! The right coset space `Gamma_Delta(N) \ PSL_2(Z)` as a permutation model.
//!
//! A right coset `Gamma_Delta(N) g` is determined by the bottom row `(c, d)`
//! of `g` modulo `N`, up to scaling by `Delta`. Right multiplication by the
//! generators acts on bottom rows:
//!
//! * `T = [[1, 1], [0, 1]]`:  `(c, d) -> (c, c + d)`
//! * `S = [[0, -1], [1, 0]]`: `(c, d) -> (d, -c)`
//!
//! The order-3 element is `ST`, applied as "first `S`, then `T`". Elliptic
//! points are fixed points of `S` and `ST`, cusps are orbits of `T`, and the
//! genus follows from
//! `12 (g - 1) = mu - 3 nu2 - 4 nu3 - 6 nu_inf`.

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::zmod::{DeltaSubgroup, Level};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CosetError {
    #[error(
        "genus formula is not integral: mu={mu} nu2={nu2} nu3={nu3} cusps={nu_inf}"
    )]
    NonIntegralGenus { mu: u64, nu2: u64, nu3: u64, nu_inf: u64 },
}

/// A permutation of `0..len`, stored as the image of each point.
pub type Permutation = Vec<usize>;

#[derive(Debug, Clone)]
pub struct CosetSpace {
    level: Level,
    delta: DeltaSubgroup,
    labels: Vec<(u64, u64)>,
    sigma_s: Permutation,
    sigma_t: Permutation,
    sigma_r: Permutation,
}

impl CosetSpace {
    pub fn level(&self) -> Level {
        self.level
    }

    pub fn delta(&self) -> &DeltaSubgroup {
        &self.delta
    }

    /// Canonical bottom rows `(c, d)`, one per coset.
    pub fn labels(&self) -> &[(u64, u64)] {
        &self.labels
    }

    pub fn sigma_s(&self) -> &Permutation {
        &self.sigma_s
    }

    pub fn sigma_t(&self) -> &Permutation {
        &self.sigma_t
    }

    pub fn sigma_r(&self) -> &Permutation {
        &self.sigma_r
    }

    /// `[PSL_2(Z) : Gamma_Delta(N)]`.
    pub fn index(&self) -> u64 {
        self.labels.len() as u64
    }
}

/// Builds the coset space. `N = 1` and `N = 2` go through the same path with
/// the trivial unit group.
pub fn build_coset_space(level: Level, delta: &DeltaSubgroup) -> CosetSpace {
    let n = level.get();
    let scalars: Vec<u64> = if n == 1 { vec![0] } else { delta.residues().to_vec() };
    let nn = n as usize;
    let slot = |c: u64, d: u64| (c as usize) * nn + d as usize;

    // Pairs are visited in lexicographic order, so the first member of each
    // orbit seen is its canonical (least) representative.
    let mut label_of = vec![usize::MAX; nn * nn];
    let mut labels = Vec::new();
    for c in 0..n {
        for d in 0..n {
            if label_of[slot(c, d)] != usize::MAX || c.gcd(&d).gcd(&n) != 1 {
                continue;
            }
            let id = labels.len();
            labels.push((c, d));
            for &s in &scalars {
                label_of[slot(s * c % n, s * d % n)] = id;
            }
        }
    }

    let act = |f: &dyn Fn(u64, u64) -> (u64, u64)| -> Permutation {
        labels
            .iter()
            .map(|&(c, d)| {
                let (c2, d2) = f(c, d);
                label_of[slot(c2, d2)]
            })
            .collect()
    };
    let sigma_t = act(&|c, d| (c, (c + d) % n));
    let sigma_s = act(&|c, d| (d, (n - c) % n));
    let sigma_r: Permutation = sigma_s.iter().map(|&i| sigma_t[i]).collect();

    CosetSpace { level, delta: delta.clone(), labels, sigma_s, sigma_t, sigma_r }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CurveInvariants {
    pub mu: u64,
    pub nu2: u64,
    pub nu3: u64,
    pub nu_inf: u64,
    pub genus: u64,
}

pub fn fixed_points(p: &Permutation) -> u64 {
    p.iter().enumerate().filter(|&(i, &j)| i == j).count() as u64
}

pub fn cycle_count(p: &Permutation) -> u64 {
    let mut seen = vec![false; p.len()];
    let mut cycles = 0;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
        }
    }
    cycles
}

pub fn curve_invariants(space: &CosetSpace) -> Result<CurveInvariants, CosetError> {
    let mu = space.index();
    let nu2 = fixed_points(&space.sigma_s);
    let nu3 = fixed_points(&space.sigma_r);
    let nu_inf = cycle_count(&space.sigma_t);
    let twelve_g = 12 + mu as i64 - 3 * nu2 as i64 - 4 * nu3 as i64 - 6 * nu_inf as i64;
    if twelve_g < 0 || twelve_g % 12 != 0 {
        return Err(CosetError::NonIntegralGenus { mu, nu2, nu3, nu_inf });
    }
    Ok(CurveInvariants { mu, nu2, nu3, nu_inf, genus: (twelve_g / 12) as u64 })
}

/// Invariants of `X_Delta(N)` in one call.
pub fn invariants_of(level: Level, delta: &DeltaSubgroup) -> Result<CurveInvariants, CosetError> {
    curve_invariants(&build_coset_space(level, delta))
}

pub fn genus_of(level: Level, delta: &DeltaSubgroup) -> Result<u64, CosetError> {
    invariants_of(level, delta).map(|inv| inv.genus)
}

/// Degrees along `X_1(N) -> X_Delta(N) -> X_0(N) -> X_0^+(N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CoveringChain {
    pub deg_x1_to_delta: u64,
    pub deg_delta_to_x0: u64,
    pub deg_x0_to_plus: u64,
}

impl CoveringChain {
    /// Degree of the composite `X_Delta(N) -> X_0^+(N)`.
    pub fn deg_delta_to_plus(&self) -> u64 {
        self.deg_delta_to_x0 * self.deg_x0_to_plus
    }
}

/// Degrees from subgroup orders. `X_1` and `X_0` are quotients by `{+-1}`
/// and the full unit group, so for `N <= 2` every degree in the first two
/// steps is 1.
pub fn covering_degrees(level: Level, delta: &DeltaSubgroup) -> CoveringChain {
    let trivial_order = DeltaSubgroup::trivial(level).order();
    CoveringChain {
        deg_x1_to_delta: delta.order() / trivial_order,
        deg_delta_to_x0: level.phi() / delta.order(),
        deg_x0_to_plus: 2,
    }
}

/// Classical index of `Gamma_0(N)`: `N prod_{p | N} (1 + 1/p)`.
pub fn gamma0_index(level: Level) -> u64 {
    crate::zmod::prime_factors(level.get())
        .into_iter()
        .fold(level.get(), |acc, p| acc / p * (p + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zmod::{enumerate_delta_subgroups, subgroup_closure};
    use proptest::prelude::*;

    fn lv(n: u64) -> Level {
        Level::new(n).unwrap()
    }

    fn delta(n: u64, gens: &[u64]) -> DeltaSubgroup {
        subgroup_closure(lv(n), gens).unwrap()
    }

    fn compose(a: &Permutation, b: &Permutation) -> Permutation {
        // apply a, then b
        a.iter().map(|&i| b[i]).collect()
    }

    fn is_identity(p: &Permutation) -> bool {
        p.iter().enumerate().all(|(i, &j)| i == j)
    }

    fn legendre_like(a: i64, p: u64) -> i64 {
        // Kronecker symbol (a / p) for prime p
        let p = p as i64;
        if p == 2 {
            return match a.rem_euclid(8) {
                1 | 7 => 1,
                3 | 5 => -1,
                _ => 0,
            };
        }
        let r = a.rem_euclid(p);
        if r == 0 {
            return 0;
        }
        let mut acc = 1i64;
        let mut base = r;
        let mut e = (p - 1) / 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        if acc == 1 { 1 } else { -1 }
    }

    fn totient(n: u64) -> u64 {
        (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
    }

    /// Closed forms for `Gamma_0(N)`.
    fn gamma0_oracle(n: u64) -> (u64, u64, u64, u64) {
        let primes = crate::zmod::prime_factors(n);
        let mu = primes.iter().fold(n, |acc, &p| acc / p * (p + 1));
        let nu2 = if n % 4 == 0 {
            0
        } else {
            primes.iter().map(|&p| (1 + legendre_like(-4, p)) as u64).product()
        };
        let nu3 = if n % 9 == 0 {
            0
        } else {
            primes.iter().map(|&p| (1 + legendre_like(-3, p)) as u64).product()
        };
        let cusps = (1..=n).filter(|d| n % d == 0).map(|d| totient(d.gcd(&(n / d)))).sum();
        (mu, nu2, nu3, cusps)
    }

    #[test]
    fn level_one_is_a_single_coset() {
        let space = build_coset_space(lv(1), &DeltaSubgroup::full(lv(1)));
        assert_eq!(space.index(), 1);
        assert!(is_identity(space.sigma_s()) && is_identity(space.sigma_t()));
        let inv = curve_invariants(&space).unwrap();
        assert_eq!((inv.nu2, inv.nu3, inv.nu_inf, inv.genus), (1, 1, 1, 0));
    }

    #[test]
    fn index_examples() {
        assert_eq!(build_coset_space(lv(37), &DeltaSubgroup::full(lv(37))).index(), 38);
        assert_eq!(gamma0_index(lv(37)), 38);
        assert_eq!(build_coset_space(lv(26), &delta(26, &[5])).index(), 126);
        assert_eq!(gamma0_index(lv(26)) * (lv(26).phi() / 4), 126);
    }

    #[test]
    fn genus_examples() {
        assert_eq!(genus_of(lv(26), &delta(26, &[5])).unwrap(), 4);
        assert_eq!(genus_of(lv(13), &delta(13, &[5])).unwrap(), 0);
        assert_eq!(genus_of(lv(64), &delta(64, &[31])).unwrap(), 37);
        assert_eq!(genus_of(lv(37), &DeltaSubgroup::full(lv(37))).unwrap(), 2);
        assert_eq!(genus_of(lv(43), &DeltaSubgroup::full(lv(43))).unwrap(), 3);
        assert_eq!(genus_of(lv(23), &DeltaSubgroup::full(lv(23))).unwrap(), 2);
    }

    #[test]
    fn covering_examples() {
        let d2 = delta(37, &[10, 11]);
        assert_eq!(d2.order(), 6);
        let c = covering_degrees(lv(37), &d2);
        assert_eq!((c.deg_x1_to_delta, c.deg_delta_to_x0, c.deg_x0_to_plus), (3, 6, 2));
        let c = covering_degrees(lv(37), &delta(37, &[6]));
        assert_eq!((c.deg_x1_to_delta, c.deg_delta_to_x0, c.deg_delta_to_plus()), (2, 9, 18));
        let d = delta(43, &[2, 11]);
        assert_eq!(d.order(), 14);
        let c = covering_degrees(lv(43), &d);
        assert_eq!((c.deg_x1_to_delta, c.deg_delta_to_x0, c.deg_delta_to_plus()), (7, 3, 6));
    }

    #[test]
    fn relations_and_gamma0_closed_forms() {
        for n in 1..=100u64 {
            let level = lv(n);
            let full = DeltaSubgroup::full(level);
            let full_space = build_coset_space(level, &full);
            let inv = curve_invariants(&full_space).unwrap();
            let (mu, nu2, nu3, cusps) = gamma0_oracle(n);
            assert_eq!((inv.mu, inv.nu2, inv.nu3, inv.nu_inf), (mu, nu2, nu3, cusps), "N = {n}");

            for d in enumerate_delta_subgroups(level) {
                let space = build_coset_space(level, &d);
                let s2 = compose(space.sigma_s(), space.sigma_s());
                let r = space.sigma_r();
                assert!(is_identity(&s2), "S^2 at N={n} {d}");
                assert!(is_identity(&compose(&compose(r, r), r)), "R^3 at N={n} {d}");
                let chain = covering_degrees(level, &d);
                assert_eq!(space.index(), full_space.index() * chain.deg_delta_to_x0);
                assert_eq!(chain.deg_x1_to_delta * chain.deg_delta_to_x0, (level.phi() / 2).max(1));
                let x1 = build_coset_space(level, &DeltaSubgroup::trivial(level));
                assert_eq!(x1.index(), space.index() * chain.deg_x1_to_delta);
                curve_invariants(&space).unwrap();
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn permutation_model_relations(n in 1u64..=100, pick in any::<prop::sample::Index>()) {
            let level = lv(n);
            let subgroups = enumerate_delta_subgroups(level);
            let d = &subgroups[pick.index(subgroups.len())];
            let space = build_coset_space(level, d);
            let r = space.sigma_r();
            prop_assert!(is_identity(&compose(space.sigma_s(), space.sigma_s())));
            prop_assert!(is_identity(&compose(&compose(r, r), r)));
            // R = S then T
            prop_assert_eq!(r, &compose(space.sigma_s(), space.sigma_t()));
            let inv = curve_invariants(&space).unwrap();
            prop_assert_eq!(inv.nu2, fixed_points(space.sigma_s()));
            prop_assert_eq!(inv.nu_inf, cycle_count(space.sigma_t()));
            prop_assert_eq!(inv.mu, space.index());
        }
    }
}
