//! Enumeration of permutations, quasi-hereditary certification, equivalence
//! classing by standard-module tuples, and the brute-force count.

use crate::quiver::Quiver;
use crate::thinmod::{end_is_local, peel_filtration, standard_support, FiltrationTrace};
use crate::vset::VertexSet;
use num_bigint::BigUint;
use rayon::prelude::*;
use std::collections::HashMap;
use thiserror::Error;

/// Default cap on the vertex count for brute-force enumeration (n! grows
/// fast; 10 means about 3.6M permutations).
pub const DEFAULT_ENUM_CAP: usize = 10;

/// Hard upper bound the cap can be raised to.
pub const MAX_ENUM_CAP: usize = 11;

#[derive(Debug, Error)]
pub enum StructuresError {
    #[error("images {0:?} are not a bijection on 1..={1}")]
    NotBijection(Vec<usize>, usize),
    #[error("{n} vertices exceed the enumeration cap {cap} ({n}! permutations)")]
    CapExceeded { n: usize, cap: usize },
}

/// A bijection on `1..=n` in one-line image notation: `images[i-1] = sigma(i)`,
/// read as the priority of vertex `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, StructuresError> {
        let n = images.len();
        let mut sorted = images.clone();
        sorted.sort_unstable();
        if sorted != (1..=n).collect::<Vec<_>>() {
            return Err(StructuresError::NotBijection(images, n));
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// All permutations of `1..=n` in lexicographic one-line order.
    pub fn iter_all(n: usize) -> impl Iterator<Item = Permutation> {
        let mut images: Vec<usize> = (1..=n).collect();
        let mut first = true;
        std::iter::from_fn(move || {
            if first {
                first = false;
            } else if !next_permutation(&mut images) {
                return None;
            }
            Some(Permutation {
                images: images.clone(),
            })
        })
    }
}

/// Advances `a` to its lexicographic successor in place; false at the end.
fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// The indexed family of standard-module supports `(supp Δ(1), ..., supp Δ(n))`.
/// Equality of these tuples is the equivalence defining quasi-hereditary
/// structures.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StandardTuple {
    pub supports: Vec<VertexSet>,
}

impl StandardTuple {
    fn key(&self) -> Vec<u128> {
        self.supports.iter().map(|s| s.bits()).collect()
    }
}

pub fn standard_tuple(q: &Quiver, sigma: &Permutation) -> StandardTuple {
    StandardTuple {
        supports: (1..=q.n())
            .map(|i| standard_support(q, sigma, i).support)
            .collect(),
    }
}

/// Witness for the quasi-hereditary check of a single permutation.
#[derive(Debug, Clone)]
pub struct QHCertificate {
    pub locality_ok: Vec<bool>,
    pub filtration: FiltrationTrace,
    pub verdict: bool,
}

pub fn is_quasi_hereditary(q: &Quiver, sigma: &Permutation) -> QHCertificate {
    let locality_ok: Vec<bool> = (1..=q.n())
        .map(|i| end_is_local(q, &standard_support(q, sigma, i)))
        .collect();
    let filtration = peel_filtration(q, sigma);
    let verdict = locality_ok.iter().all(|&b| b) && filtration.is_complete();
    QHCertificate {
        locality_ok,
        filtration,
        verdict,
    }
}

/// One equivalence class of permutations with equal standard tuples.
#[derive(Debug, Clone)]
pub struct ClassRecord {
    /// Lexicographically smallest permutation in the class.
    pub representative: Permutation,
    pub tuple: StandardTuple,
    pub class_size: u64,
}

type ClassMap = HashMap<Vec<u128>, (Vec<usize>, StandardTuple, u64)>;

fn merge_class_maps(mut a: ClassMap, b: ClassMap) -> ClassMap {
    for (key, (rep, tuple, size)) in b {
        a.entry(key)
            .and_modify(|(r, _, s)| {
                if rep < *r {
                    *r = rep.clone();
                }
                *s += size;
            })
            .or_insert((rep, tuple, size));
    }
    a
}

/// Groups all n! permutations by standard tuple. Work is fanned out across
/// permutation blocks sharing sigma(1); tuples are pure functions of the
/// permutation, so the merged result is schedule-independent.
pub fn enumerate_structures(q: &Quiver, cap: usize) -> Result<Vec<ClassRecord>, StructuresError> {
    let n = q.n();
    if n > cap {
        return Err(StructuresError::CapExceeded { n, cap });
    }
    let merged: ClassMap = (1..=n)
        .into_par_iter()
        .map(|first| {
            let mut map: ClassMap = HashMap::new();
            let mut images: Vec<usize> = Vec::with_capacity(n);
            images.push(first);
            images.extend((1..=n).filter(|&v| v != first));
            loop {
                let sigma = Permutation {
                    images: images.clone(),
                };
                let tuple = standard_tuple(q, &sigma);
                map.entry(tuple.key())
                    .and_modify(|(_, _, s)| *s += 1)
                    .or_insert((images.clone(), tuple, 1));
                if !next_permutation(&mut images[1..]) {
                    break;
                }
            }
            map
        })
        .reduce(HashMap::new, merge_class_maps);
    let mut records: Vec<ClassRecord> = merged
        .into_values()
        .map(|(rep, tuple, class_size)| ClassRecord {
            representative: Permutation { images: rep },
            tuple,
            class_size,
        })
        .collect();
    records.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(records)
}

/// Number of distinct standard tuples over all permutations.
pub fn count_brute(q: &Quiver, cap: usize) -> Result<BigUint, StructuresError> {
    let n = q.n();
    if n > cap {
        return Err(StructuresError::CapExceeded { n, cap });
    }
    let count: usize = (1..=n)
        .into_par_iter()
        .map(|first| {
            let mut seen: std::collections::HashSet<Vec<u128>> = Default::default();
            let mut images: Vec<usize> = Vec::with_capacity(n);
            images.push(first);
            images.extend((1..=n).filter(|&v| v != first));
            loop {
                let sigma = Permutation {
                    images: images.clone(),
                };
                seen.insert(standard_tuple(q, &sigma).key());
                if !next_permutation(&mut images[1..]) {
                    break;
                }
            }
            seen
        })
        .reduce(Default::default, |mut a, b| {
            a.extend(b);
            a
        })
        .len();
    Ok(BigUint::from(count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{make_branch, make_line};
    use proptest::prelude::*;

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![2, 3, 1]).is_ok());
        assert!(matches!(
            Permutation::new(vec![1, 1]),
            Err(StructuresError::NotBijection(_, 2))
        ));
        assert!(Permutation::new(vec![0, 1]).is_err());
    }

    #[test]
    fn iter_all_is_lexicographic_and_complete() {
        let perms: Vec<_> = Permutation::iter_all(3).collect();
        assert_eq!(perms.len(), 6);
        assert_eq!(perms[0].images(), &[1, 2, 3]);
        assert_eq!(perms[5].images(), &[3, 2, 1]);
        assert!(perms.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(Permutation::iter_all(1).count(), 1);
    }

    #[test]
    fn standard_tuple_line2() {
        let l2 = make_line(2).unwrap();
        let t12 = standard_tuple(&l2, &Permutation::new(vec![1, 2]).unwrap());
        assert_eq!(t12.supports[0].to_vec(), vec![1]);
        assert_eq!(t12.supports[1].to_vec(), vec![2]);
        let t21 = standard_tuple(&l2, &Permutation::new(vec![2, 1]).unwrap());
        assert_eq!(t21.supports[0].to_vec(), vec![1, 2]);
        assert_eq!(t21.supports[1].to_vec(), vec![2]);
    }

    #[test]
    fn tuple_of_projectives_under_reversed_topological_priority() {
        let q = make_branch(1, 2, 1);
        // Priorities decreasing along arrows: every Δ(i) = P(i).
        let sigma = Permutation::new(vec![4, 5, 3, 2, 1]).unwrap();
        for (idx, supp) in standard_tuple(&q, &sigma).supports.iter().enumerate() {
            assert_eq!(*supp, q.reachable_set(idx + 1));
        }
    }

    #[test]
    fn quasi_hereditary_examples() {
        let l3 = make_line(3).unwrap();
        assert!(is_quasi_hereditary(&l3, &Permutation::identity(3)).verdict);
        let l1 = make_line(1).unwrap();
        assert!(is_quasi_hereditary(&l1, &Permutation::identity(1)).verdict);
        let d4 = make_branch(1, 1, 1);
        for sigma in Permutation::iter_all(4) {
            assert!(is_quasi_hereditary(&d4, &sigma).verdict);
        }
    }

    #[test]
    fn enumerate_line2() {
        let records = enumerate_structures(&make_line(2).unwrap(), DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(records.len(), 2);
        assert!(records.iter().all(|r| r.class_size == 1));
    }

    #[test]
    fn enumerate_line1() {
        let records = enumerate_structures(&make_line(1).unwrap(), DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].class_size, 1);
    }

    #[test]
    fn enumerate_d4() {
        let records = enumerate_structures(&make_branch(1, 1, 1), DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(records.len(), 13);
        assert_eq!(records.iter().map(|r| r.class_size).sum::<u64>(), 24);
    }

    #[test]
    fn class_sizes_partition_the_symmetric_group() {
        for q in [make_line(4).unwrap(), make_branch(1, 2, 1), make_branch(0, 2, 2)] {
            let records = enumerate_structures(&q, DEFAULT_ENUM_CAP).unwrap();
            let total: u64 = records.iter().map(|r| r.class_size).sum();
            let fact: u64 = (1..=q.n() as u64).product();
            assert_eq!(total, fact);
            assert!(records
                .windows(2)
                .all(|w| w[0].representative < w[1].representative));
        }
    }

    #[test]
    fn count_brute_small_lines() {
        let expected = [1usize, 2, 5, 14, 42, 132];
        for (n, &want) in expected.iter().enumerate() {
            let q = make_line(n + 1).unwrap();
            assert_eq!(count_brute(&q, DEFAULT_ENUM_CAP).unwrap(), BigUint::from(want));
        }
    }

    #[test]
    fn count_brute_small_branches() {
        assert_eq!(
            count_brute(&make_branch(1, 2, 2), DEFAULT_ENUM_CAP).unwrap(),
            BigUint::from(106u32)
        );
    }

    #[test]
    fn cap_is_enforced() {
        let q = make_line(5).unwrap();
        assert!(matches!(
            count_brute(&q, 4),
            Err(StructuresError::CapExceeded { n: 5, cap: 4 })
        ));
        assert!(enumerate_structures(&q, 4).is_err());
    }

    #[test]
    fn indexed_tuple_classing_equals_unordered_set_classing() {
        use std::collections::{BTreeSet, HashMap};
        for q in [
            make_line(5).unwrap(),
            make_branch(1, 2, 1),
            make_branch(2, 2, 1),
            make_branch(0, 2, 2).opposite(),
        ] {
            let mut by_tuple: HashMap<Vec<u128>, Vec<usize>> = HashMap::new();
            let mut by_set: HashMap<BTreeSet<u128>, Vec<usize>> = HashMap::new();
            for (idx, sigma) in Permutation::iter_all(q.n()).enumerate() {
                let tuple = standard_tuple(&q, &sigma);
                by_tuple.entry(tuple.key()).or_default().push(idx);
                by_set
                    .entry(tuple.supports.iter().map(|s| s.bits()).collect())
                    .or_default()
                    .push(idx);
            }
            let mut parts_a: Vec<Vec<usize>> = by_tuple.into_values().collect();
            let mut parts_b: Vec<Vec<usize>> = by_set.into_values().collect();
            parts_a.sort();
            parts_b.sort();
            assert_eq!(parts_a, parts_b);
        }
    }

    #[test]
    fn monotonicity_of_standard_supports() {
        // Raising sigma(i) while preserving the relative order of the other
        // values only grows the support at i.
        let quivers = [make_line(4).unwrap(), make_branch(1, 1, 1)];
        for q in &quivers {
            let n = q.n();
            for sigma in Permutation::iter_all(n) {
                for i in 1..=n {
                    for target in sigma.apply(i) + 1..=n {
                        let images: Vec<usize> = (1..=n)
                            .map(|v| {
                                if v == i {
                                    target
                                } else {
                                    let x = sigma.apply(v);
                                    if x > sigma.apply(i) && x <= target {
                                        x - 1
                                    } else {
                                        x
                                    }
                                }
                            })
                            .collect();
                        let sigma2 = Permutation::new(images).unwrap();
                        let a = standard_support(q, &sigma, i).support;
                        let b = standard_support(q, &sigma2, i).support;
                        assert_eq!(a.bits() & b.bits(), a.bits());
                    }
                }
            }
        }
    }

    fn tree_strategy(max_n: usize) -> impl Strategy<Value = crate::quiver::Quiver> {
        (1..=max_n)
            .prop_flat_map(|n| {
                (
                    proptest::collection::vec(1..=n, if n >= 2 { n - 2 } else { 0 }),
                    proptest::collection::vec(any::<bool>(), n.saturating_sub(1)),
                    Just(n),
                )
            })
            .prop_map(|(prufer, flips, n)| {
                let edges = crate::crossval::prufer_decode(&prufer, n);
                let arrows = edges
                    .into_iter()
                    .zip(flips)
                    .map(|((a, b), flip)| if flip { (b, a) } else { (a, b) })
                    .collect();
                crate::quiver::Quiver::new(n, arrows).unwrap()
            })
    }

    proptest! {
        #[test]
        fn prop_opposite_is_involution(q in tree_strategy(8)) {
            prop_assert_eq!(q.opposite().opposite(), q);
        }

        #[test]
        fn prop_support_is_path_closed_and_contains_generator(
            q in tree_strategy(6),
            seed in any::<u64>(),
        ) {
            let n = q.n();
            let mut images: Vec<usize> = (1..=n).collect();
            // Cheap seeded shuffle.
            let mut state = seed;
            for i in (1..n).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                images.swap(i, (state >> 33) as usize % (i + 1));
            }
            let sigma = Permutation::new(images).unwrap();
            for i in 1..=n {
                let supp = standard_support(&q, &sigma, i).support;
                prop_assert!(supp.contains(i));
                let reach = q.reachable_set(i);
                prop_assert_eq!(supp.bits() & reach.bits(), supp.bits());
                // Path-closed: every non-generator member has its unique
                // in-tree predecessor inside the support.
                for v in supp.iter().filter(|&v| v != i) {
                    prop_assert!(q.in_neighbors(v).iter().any(|&p| supp.contains(p)));
                }
            }
        }

        #[test]
        fn prop_count_brute_is_relabeling_invariant(
            q in tree_strategy(5),
            seed in any::<u64>(),
        ) {
            let n = q.n();
            let mut map: Vec<usize> = (1..=n).collect();
            let mut state = seed | 1;
            for i in (1..n).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                map.swap(i, (state >> 33) as usize % (i + 1));
            }
            let relabeled = q.relabel(&map);
            prop_assert_eq!(
                count_brute(&q, DEFAULT_ENUM_CAP).unwrap(),
                count_brute(&relabeled, DEFAULT_ENUM_CAP).unwrap()
            );
        }
    }
}
