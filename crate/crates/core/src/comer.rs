//! Cyclotomic coset schemes over `Z/p`.
//!
//! The cosets `X_0, ..., X_{m-1}` of the index-`m` subgroup of `(Z/p)^*` are
//! unions of multiplicative orbits, so every sumset `X_j + X_k` is a union of
//! whole cosets (plus possibly 0). The pattern of which `X_i` lie inside which
//! `X_j + X_k` is the cycle structure of a relation algebra on the cosets.

use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::group::{
    cyclotomic_cosets, is_prime, primitive_root, sumset, ElementSet, GroupError, GroupSpec,
};
use crate::verify::{ColoredPartition, VerifyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComerError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("sumset X_{j} + X_{k} meets X_{i} partially")]
    Unsaturated { i: usize, j: usize, k: usize },
    #[error("cosets are not symmetric for p = {p}, m = {m} (need m | (p-1)/2)")]
    Asymmetric { p: u64, m: u64 },
    #[error("cycle structure is not permutation invariant at ({i},{j},{k})")]
    NotPermutationInvariant { i: usize, j: usize, k: usize },
    #[error("the 59_65 partition needs m = 8, got m = {0}")]
    WrongM(u64),
}

#[derive(Clone, Debug)]
pub struct CosetScheme {
    pub p: u64,
    pub m: u64,
    pub g: u64,
    group: Arc<GroupSpec>,
    cosets: Vec<ElementSet>,
    symmetric: bool,
    // contains[(i * m + j) * m + k] <=> X_i ⊆ X_j + X_k
    contains: Vec<bool>,
    cycles: BTreeSet<[usize; 3]>,
}

/// Builds the scheme for prime `p`, index `m` and primitive root `g`
/// (default: the smallest one). With `require_symmetric`, schemes whose
/// cosets are not closed under negation are rejected.
pub fn build_scheme(
    p: u64,
    m: u64,
    g: Option<u64>,
    require_symmetric: bool,
) -> Result<CosetScheme, ComerError> {
    if !is_prime(p) {
        return Err(GroupError::NotPrime(p).into());
    }
    let modulus = u32::try_from(p).map_err(|_| GroupError::TooLarge {
        order: p as u128,
        cap: crate::group::DEFAULT_MAX_ORDER,
    })?;
    let group = Arc::new(GroupSpec::cyclic(modulus)?);
    let g = match g {
        Some(g) => g,
        None => primitive_root(p)?,
    };
    let cosets = cyclotomic_cosets(&group, m, g)?;
    let symmetric = cosets.iter().all(ElementSet::is_symmetric);
    if require_symmetric && !symmetric {
        return Err(ComerError::Asymmetric { p, m });
    }
    let mm = m as usize;
    let zero = group.zero();
    let mut contains = vec![false; mm * mm * mm];
    for j in 0..mm {
        for k in j..mm {
            let s = sumset(&cosets[j], &cosets[k])?;
            for (i, x) in cosets.iter().enumerate() {
                let hit = s.intersection_len(x);
                if hit != 0 && hit != x.len() {
                    return Err(ComerError::Unsaturated { i, j, k });
                }
                let inside = hit == x.len();
                contains[(i * mm + j) * mm + k] = inside;
                contains[(i * mm + k) * mm + j] = inside;
            }
            if symmetric && s.contains(zero) != (j == k) {
                return Err(ComerError::Unsaturated { i: 0, j, k });
            }
        }
    }
    let mut cycles = BTreeSet::new();
    for i in 0..mm {
        for j in i..mm {
            for k in j..mm {
                let here = contains[(i * mm + j) * mm + k];
                if symmetric {
                    // with -X = X the relation is invariant under all permutations
                    let perms = [(j, i, k), (k, j, i)];
                    for (a, b, c) in perms {
                        if contains[(a * mm + b) * mm + c] != here {
                            return Err(ComerError::NotPermutationInvariant { i, j, k });
                        }
                    }
                }
                if here {
                    cycles.insert([i, j, k]);
                }
            }
        }
    }
    Ok(CosetScheme {
        p,
        m,
        g,
        group,
        cosets,
        symmetric,
        contains,
        cycles,
    })
}

impl CosetScheme {
    pub fn group(&self) -> &Arc<GroupSpec> {
        &self.group
    }

    pub fn cosets(&self) -> &[ElementSet] {
        &self.cosets
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// `X_i ⊆ X_j + X_k`.
    pub fn is_contained(&self, i: usize, j: usize, k: usize) -> bool {
        let m = self.m as usize;
        self.contains[(i * m + j) * m + k]
    }

    /// Sorted triples `i <= j <= k` with `X_i ⊆ X_j + X_k`.
    pub fn cycles(&self) -> &BTreeSet<[usize; 3]> {
        &self.cycles
    }

    /// Sorted triples that are not cycles.
    pub fn forbidden(&self) -> Vec<[usize; 3]> {
        let m = self.m as usize;
        let mut out = Vec::new();
        for i in 0..m {
            for j in i..m {
                for k in j..m {
                    if !self.cycles.contains(&[i, j, k]) {
                        out.push([i, j, k]);
                    }
                }
            }
        }
        out
    }

    /// A permutation `pi` of coset indices with `(i,j,k)` a cycle here iff
    /// `(pi i, pi j, pi k)` is a cycle of `other`, found by backtracking.
    pub fn reindexing_to(&self, other: &CosetScheme) -> Option<Vec<usize>> {
        if self.m != other.m || self.cycles.len() != other.cycles.len() {
            return None;
        }
        let m = self.m as usize;
        let mut pi = vec![usize::MAX; m];
        let mut used = vec![false; m];
        fn consistent(a: &CosetScheme, b: &CosetScheme, pi: &[usize], upto: usize) -> bool {
            // check every triple among already-mapped indices that involves `upto`
            for i in 0..=upto {
                for j in 0..=upto {
                    let (x, y, z) = (upto, i, j);
                    let mut s = [x, y, z];
                    s.sort_unstable();
                    let mut t = [pi[x], pi[y], pi[z]];
                    t.sort_unstable();
                    if a.cycles.contains(&s) != b.cycles.contains(&t) {
                        return false;
                    }
                }
            }
            true
        }
        fn extend(
            a: &CosetScheme,
            b: &CosetScheme,
            pi: &mut Vec<usize>,
            used: &mut Vec<bool>,
            pos: usize,
        ) -> bool {
            if pos == pi.len() {
                return true;
            }
            for v in 0..pi.len() {
                if used[v] {
                    continue;
                }
                pi[pos] = v;
                used[v] = true;
                if consistent(a, b, pi, pos) && extend(a, b, pi, used, pos + 1) {
                    return true;
                }
                used[v] = false;
            }
            pi[pos] = usize::MAX;
            false
        }
        extend(self, other, &mut pi, &mut used, 0).then_some(pi)
    }
}

/// The 59_65 representation over `Z/p` with `m = 8`: `a = X_1 ∪ ... ∪ X_5`,
/// `b = X_0`, `c = X_6 ∪ X_7`.
pub fn build_59_65_partition(scheme: &CosetScheme) -> Result<ColoredPartition, ComerError> {
    if scheme.m != 8 {
        return Err(ComerError::WrongM(scheme.m));
    }
    if !scheme.symmetric {
        return Err(ComerError::Asymmetric {
            p: scheme.p,
            m: scheme.m,
        });
    }
    let x = &scheme.cosets;
    let union = |idx: &[usize]| {
        idx.iter()
            .fold(ElementSet::empty(&scheme.group), |acc, &i| acc.union(&x[i]))
    };
    let a = union(&[1, 2, 3, 4, 5]);
    let b = union(&[0]);
    let c = union(&[6, 7]);
    Ok(ColoredPartition::new(&scheme.group, vec![a, b, c])?)
}

#[derive(Clone, Debug, Serialize)]
pub struct SchemeSummary {
    pub p: u64,
    pub m: u64,
    pub g: u64,
    pub symmetric: bool,
    pub coset_size: u64,
    pub cycles: Vec<[usize; 3]>,
    pub forbidden: Vec<[usize; 3]>,
}

impl From<&CosetScheme> for SchemeSummary {
    fn from(s: &CosetScheme) -> Self {
        SchemeSummary {
            p: s.p,
            m: s.m,
            g: s.g,
            symmetric: s.symmetric,
            coset_size: (s.p - 1) / s.m,
            cycles: s.cycles.iter().copied().collect(),
            forbidden: s.forbidden(),
        }
    }
}

/// Cycle structures for every prime `p <= p_max` with `m | (p-1)/2`,
/// ordered by `p`.
pub fn sweep(m: u64, p_max: u64) -> Vec<SchemeSummary> {
    let primes: Vec<u64> = (3..=p_max)
        .filter(|&p| is_prime(p) && m > 0 && ((p - 1) / 2) % m == 0)
        .collect();
    let mut out: Vec<SchemeSummary> = primes
        .par_iter()
        .filter_map(|&p| build_scheme(p, m, None, true).ok())
        .map(|s| SchemeSummary::from(&s))
        .collect();
    out.sort_by_key(|s| s.p);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Element;

    fn three_families(m: usize) -> BTreeSet<[usize; 3]> {
        let mut out = BTreeSet::new();
        for i in 0..m {
            for d in [0, 6, 7] {
                let mut t = [i, i, (i + d) % m];
                t.sort_unstable();
                out.insert(t);
            }
        }
        out
    }

    #[test]
    fn forbidden_113_8() {
        let s = build_scheme(113, 8, None, true).unwrap();
        assert_eq!(s.g, 3);
        assert!(s.is_symmetric());
        let forbidden: BTreeSet<[usize; 3]> = s.forbidden().into_iter().collect();
        assert_eq!(forbidden, three_families(8));
        assert_eq!(forbidden.len(), 24);
        assert_eq!(s.cycles().len(), 120 - 24);
    }

    #[test]
    fn generator_only_changes_indexing() {
        let base = build_scheme(113, 8, None, true).unwrap();
        for e in (1..112u64).filter(|e| num_integer_gcd(*e, 112) == 1) {
            let g = crate::group::mod_pow(3, e, 113);
            let other = build_scheme(113, 8, Some(g), true).unwrap();
            // X'_i = X_{e i mod 8}
            for i in 0..8 {
                assert_eq!(other.cosets()[i], base.cosets()[(e as usize * i) % 8]);
            }
            let pi = other.reindexing_to(&base).expect("isomorphic");
            for t in other.cycles() {
                let mut u = [pi[t[0]], pi[t[1]], pi[t[2]]];
                u.sort_unstable();
                assert!(base.cycles().contains(&u));
            }
        }
    }

    fn num_integer_gcd(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    }

    #[test]
    fn small_asymmetric_scheme() {
        let s = build_scheme(7, 2, Some(3), false).unwrap();
        assert!(!s.is_symmetric());
        let x0: Vec<usize> = s.cosets()[0].iter().map(|e| e.0).collect();
        let x1: Vec<usize> = s.cosets()[1].iter().map(|e| e.0).collect();
        assert_eq!(x0, [1, 2, 4]);
        assert_eq!(x1, [3, 5, 6]);
        assert!(s.cosets()[1].contains(Element(6)));
        assert!(matches!(
            build_scheme(7, 2, Some(3), true),
            Err(ComerError::Asymmetric { p: 7, m: 2 })
        ));
    }

    #[test]
    fn build_errors() {
        assert!(matches!(
            build_scheme(113, 5, None, true),
            Err(ComerError::Group(GroupError::NotDivisor { .. }))
        ));
        assert!(matches!(
            build_scheme(113, 8, Some(2), true),
            Err(ComerError::Group(GroupError::NotPrimitive { .. }))
        ));
        assert!(matches!(
            build_scheme(111, 2, None, true),
            Err(ComerError::Group(GroupError::NotPrime(111)))
        ));
        let s = build_scheme(97, 4, None, true).unwrap();
        assert!(matches!(
            build_59_65_partition(&s),
            Err(ComerError::WrongM(4))
        ));
    }

    #[test]
    fn saturation_everywhere() {
        for (p, m) in [
            (13u64, 2u64),
            (17, 4),
            (41, 4),
            (73, 4),
            (17, 8),
            (113, 8),
            (97, 6),
        ] {
            let s = build_scheme(p, m, None, true).unwrap();
            let m = m as usize;
            for j in 0..m {
                for k in 0..m {
                    let sum = sumset(&s.cosets()[j], &s.cosets()[k]).unwrap();
                    for (i, x) in s.cosets().iter().enumerate() {
                        assert_eq!(x.is_subset(&sum), s.is_contained(i, j, k));
                        assert!(x.is_subset(&sum) || x.is_disjoint(&sum));
                    }
                }
            }
        }
    }

    #[test]
    fn sweep_is_ordered() {
        let rows = sweep(4, 120);
        let ps: Vec<u64> = rows.iter().map(|r| r.p).collect();
        assert_eq!(ps, [17, 41, 73, 89, 97, 113]);
        assert!(rows.iter().all(|r| r.symmetric));
    }
}
