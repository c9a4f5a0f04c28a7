//! Thin modules over tree path algebras: projectives, standard modules with
//! respect to a permutation, and Δ-filtration checking by hereditary peeling
//! plus an exhaustive backtracking oracle.

use crate::quiver::Quiver;
use crate::structures::Permutation;
use crate::vset::VertexSet;
use std::collections::{BTreeMap, HashSet};
use thiserror::Error;

/// Default vertex-count cap for the exhaustive filtration oracle.
pub const DEFAULT_ORACLE_CAP: usize = 7;

#[derive(Debug, Error)]
pub enum FiltrationError {
    #[error("exhaustive filtration search on {n} vertices exceeds the cap {cap}")]
    CapExceeded { n: usize, cap: usize },
}

/// A module with all composition multiplicities <= 1, represented by its
/// support. Over a tree this determines the module up to isomorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ThinModule {
    pub support: VertexSet,
}

/// The indecomposable projective at `i`, supported on everything reachable
/// from `i`.
pub fn projective(q: &Quiver, i: usize) -> ThinModule {
    ThinModule {
        support: q.reachable_set(i),
    }
}

/// Support of the standard module at `i`: the vertices `j` reachable from `i`
/// whose whole directed path from `i` stays at priority <= `sigma(i)`.
pub fn standard_support(q: &Quiver, sigma: &Permutation, i: usize) -> ThinModule {
    let cap = sigma.apply(i);
    let mut support = VertexSet::singleton(i);
    let mut stack = vec![i];
    while let Some(v) = stack.pop() {
        for &w in q.out_neighbors(v) {
            if sigma.apply(w) <= cap && !support.contains(w) {
                support.insert(w);
                stack.push(w);
            }
        }
    }
    ThinModule { support }
}

/// Generators of the kernel of `P(i) -> Δ(i)`: the vertices just outside the
/// standard support whose immediate predecessor lies inside it. The kernel is
/// projective and decomposes as the direct sum of `P(j)` over this set.
pub fn boundary_set(q: &Quiver, sigma: &Permutation, i: usize) -> VertexSet {
    let supp = standard_support(q, sigma, i).support;
    let mut boundary = VertexSet::EMPTY;
    for v in supp.iter() {
        for &w in q.out_neighbors(v) {
            if !supp.contains(w) {
                boundary.insert(w);
            }
        }
    }
    boundary
}

/// One peel step: the generator removed, the standard support it contributed,
/// and the multiset of projective generators remaining afterwards.
#[derive(Debug, Clone)]
pub struct PeelStep {
    pub generator: usize,
    pub support: VertexSet,
    pub remaining: Vec<usize>,
}

/// A complete Δ-filtration of the regular module, as a sequence of peels.
#[derive(Debug, Clone, Default)]
pub struct FiltrationTrace {
    pub steps: Vec<PeelStep>,
}

impl FiltrationTrace {
    /// Multiplicity of each standard module among the factors.
    pub fn factor_multiset(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for step in &self.steps {
            *m.entry(step.generator).or_insert(0) += 1;
        }
        m
    }

    pub fn total_dimension(&self) -> usize {
        self.steps.iter().map(|s| s.support.len()).sum()
    }

    pub fn is_complete(&self) -> bool {
        self.steps.last().map_or(true, |s| s.remaining.is_empty())
    }
}

fn snapshot(counts: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    for (v, &c) in counts.iter().enumerate().skip(1) {
        for _ in 0..c {
            out.push(v);
        }
    }
    out
}

/// Filters the regular module `A_A = ⊕ P(i)` by peeling generators in
/// decreasing priority order, replacing each peeled `P(k)` by the projectives
/// generating the kernel of `P(k) -> Δ(k)`. Always terminates: total
/// remaining dimension strictly decreases.
pub fn peel_filtration(q: &Quiver, sigma: &Permutation) -> FiltrationTrace {
    let n = q.n();
    let mut counts = vec![0usize; n + 1];
    for v in 1..=n {
        counts[v] = 1;
    }
    let mut steps = Vec::new();
    loop {
        let k = match (1..=n)
            .filter(|&v| counts[v] > 0)
            .max_by_key(|&v| sigma.apply(v))
        {
            Some(k) => k,
            None => break,
        };
        counts[k] -= 1;
        let support = standard_support(q, sigma, k).support;
        for j in boundary_set(q, sigma, k).iter() {
            counts[j] += 1;
        }
        steps.push(PeelStep {
            generator: k,
            support,
            remaining: snapshot(&counts),
        });
    }
    FiltrationTrace { steps }
}

/// Backtracking search over all peel orders; returns a trace if any complete
/// filtration of the regular module exists. Independent of the fixed peeling
/// order used by [`peel_filtration`].
pub fn exhaustive_filtration(
    q: &Quiver,
    sigma: &Permutation,
    cap: usize,
) -> Result<Option<FiltrationTrace>, FiltrationError> {
    let n = q.n();
    if n > cap {
        return Err(FiltrationError::CapExceeded { n, cap });
    }
    let supports: Vec<VertexSet> = (1..=n)
        .map(|i| standard_support(q, sigma, i).support)
        .collect();
    let boundaries: Vec<Vec<usize>> = (1..=n)
        .map(|i| boundary_set(q, sigma, i).to_vec())
        .collect();

    fn search(
        n: usize,
        supports: &[VertexSet],
        boundaries: &[Vec<usize>],
        counts: &mut Vec<usize>,
        steps: &mut Vec<PeelStep>,
        dead: &mut HashSet<Vec<usize>>,
    ) -> bool {
        if counts[1..].iter().all(|&c| c == 0) {
            return true;
        }
        if dead.contains(counts) {
            return false;
        }
        for k in 1..=n {
            if counts[k] == 0 {
                continue;
            }
            counts[k] -= 1;
            for &j in &boundaries[k - 1] {
                counts[j] += 1;
            }
            steps.push(PeelStep {
                generator: k,
                support: supports[k - 1],
                remaining: snapshot(counts),
            });
            if search(n, supports, boundaries, counts, steps, dead) {
                return true;
            }
            steps.pop();
            for &j in &boundaries[k - 1] {
                counts[j] -= 1;
            }
            counts[k] += 1;
        }
        dead.insert(counts.clone());
        false
    }

    let mut counts = vec![1usize; n + 1];
    counts[0] = 0;
    let mut steps = Vec::new();
    let mut dead = HashSet::new();
    if search(n, &supports, &boundaries, &mut counts, &mut steps, &mut dead) {
        Ok(Some(FiltrationTrace { steps }))
    } else {
        Ok(None)
    }
}

/// For a thin module over a tree, the endomorphism ring is local exactly when
/// the support is connected in the underlying graph.
pub fn end_is_local(q: &Quiver, m: &ThinModule) -> bool {
    let mut iter = m.support.iter();
    let start = match iter.next() {
        Some(v) => v,
        None => return false, // zero module
    };
    let mut seen = VertexSet::singleton(start);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for w in q.undirected_neighbors(v) {
            if m.support.contains(w) && !seen.contains(w) {
                seen.insert(w);
                stack.push(w);
            }
        }
    }
    seen == m.support
}
