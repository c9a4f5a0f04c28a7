//! Consistency battery cross-checking the brute-force engine against the
//! formula engine and the reference values. Shared by the `cross-validate`
//! CLI command and the acceptance test suite.

use crate::formulas::{
    catalan, check_catalan_identities, count_formula, dynkin_reference, q_closed_1tu,
    q_closed_st1, q_recursive, DynkinFamily, FormulaError,
};
use crate::quiver::{deconcatenate, make_branch, make_line, Quiver};
use crate::structures::{count_brute, is_quasi_hereditary, Permutation};
use crate::thinmod::{exhaustive_filtration, peel_filtration};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Outcome of one battery check.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn pass(name: &str, detail: String) -> Check {
        Check {
            name: name.into(),
            passed: true,
            detail,
        }
    }

    fn fail(name: &str, detail: String) -> Check {
        Check {
            name: name.into(),
            passed: false,
            detail,
        }
    }
}

/// Cap used by battery brute-force runs; every battery quiver is small.
const BATTERY_CAP: usize = 11;

/// Decodes a Prüfer sequence over `1..=n` into the edge list of the labeled
/// tree it encodes (empty sequence: the unique trees on 1 or 2 vertices).
pub fn prufer_decode(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    if n <= 1 {
        return Vec::new();
    }
    assert_eq!(seq.len(), n - 2);
    let mut degree = vec![1usize; n + 1];
    for &v in seq {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut deg = degree.clone();
    for &v in seq {
        let leaf = (1..=n).find(|&u| deg[u] == 1).expect("a leaf exists");
        edges.push((leaf, v));
        deg[leaf] = 0;
        deg[v] -= 1;
    }
    let rest: Vec<usize> = (1..=n).filter(|&u| deg[u] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// All labeled trees on `n` vertices (via Prüfer sequences), as edge lists.
pub fn all_labeled_trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    if n <= 2 {
        return vec![prufer_decode(&[], n)];
    }
    let mut seq = vec![1usize; n - 2];
    let mut out = Vec::new();
    loop {
        out.push(prufer_decode(&seq, n));
        let mut pos = seq.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if seq[pos] < n {
                seq[pos] += 1;
                for x in &mut seq[pos + 1..] {
                    *x = 1;
                }
                break;
            }
        }
    }
}

/// All `2^(n-1)` orientations of an undirected edge list, as tree quivers.
pub fn all_orientations(n: usize, edges: &[(usize, usize)]) -> Vec<Quiver> {
    let m = edges.len();
    (0u32..(1 << m))
        .map(|mask| {
            let arrows = edges
                .iter()
                .enumerate()
                .map(|(i, &(a, b))| if mask & (1 << i) != 0 { (b, a) } else { (a, b) })
                .collect();
            Quiver::new(n, arrows).expect("orienting a tree gives a tree quiver")
        })
        .collect()
}

/// A uniformly random labeled tree quiver on `n` vertices.
pub fn random_tree(rng: &mut impl Rng, n: usize) -> Quiver {
    let seq: Vec<usize> = (0..n.saturating_sub(2)).map(|_| rng.gen_range(1..=n)).collect();
    let arrows = prufer_decode(&seq, n)
        .into_iter()
        .map(|(a, b)| if rng.gen() { (b, a) } else { (a, b) })
        .collect();
    Quiver::new(n, arrows).expect("tree")
}

fn brute(q: &Quiver) -> BigUint {
    count_brute(q, BATTERY_CAP).expect("battery quivers stay under the cap")
}

/// Brute-force line counts against Catalan numbers and the frozen sequence
/// 1, 2, 5, 14, 42, 132, 429, 1430.
pub fn check_line_counts(max_line: usize) -> Check {
    const FROZEN: [u32; 8] = [1, 2, 5, 14, 42, 132, 429, 1430];
    let results: Vec<(usize, BigUint, BigUint)> = (1..=max_line)
        .into_par_iter()
        .map(|n| {
            let q = make_line(n).expect("n >= 1");
            (n, brute(&q), catalan(n))
        })
        .collect();
    for (n, got, want) in &results {
        if got != want {
            return Check::fail(
                "line counts",
                format!("line {n}: brute {got} != catalan {want}"),
            );
        }
        if *n <= 8 && *got != BigUint::from(FROZEN[n - 1]) {
            return Check::fail(
                "line counts",
                format!("line {n}: {got} != frozen {}", FROZEN[n - 1]),
            );
        }
    }
    Check::pass("line counts", format!("lines 1..={max_line} match Catalan numbers"))
}

/// D-series: brute counts of the arms `(n-3,1,1)` and `(1,n-3,1)` against
/// `2c_n - 3c_{n-1}` and `3c_{n-1} - c_{n-2}`.
pub fn check_d_series(max_n: usize) -> Check {
    let cases: Vec<usize> = (4..=max_n.min(8)).collect();
    let failures: Vec<String> = cases
        .par_iter()
        .flat_map(|&n| {
            let mut errs = Vec::new();
            let branch = brute(&make_branch(n - 3, 1, 1));
            let want_branch = dynkin_reference(DynkinFamily::DBranch(n)).expect("n >= 4");
            if branch != want_branch {
                errs.push(format!("q({},1,1) = {branch}, expected {want_branch}", n - 3));
            }
            let middle = brute(&make_branch(1, n - 3, 1));
            let want_middle = dynkin_reference(DynkinFamily::DMiddle(n)).expect("n >= 4");
            if middle != want_middle {
                errs.push(format!("q(1,{},1) = {middle}, expected {want_middle}", n - 3));
            }
            errs
        })
        .collect();
    if failures.is_empty() {
        Check::pass("D-series", format!("n = 4..={} match both formulas", max_n.min(8)))
    } else {
        Check::fail("D-series", failures.join("; "))
    }
}

/// E-series: brute counts for all exceptional table entries of size <= max_n.
pub fn check_e_series(max_n: usize) -> Check {
    let entries: [(usize, usize, usize, u32); 8] = [
        (1, 2, 2, 106),
        (2, 2, 1, 130),
        (1, 3, 2, 322),
        (2, 3, 1, 416),
        (3, 2, 1, 453),
        (1, 4, 2, 1020),
        (2, 4, 1, 1368),
        (4, 2, 1, 1584),
    ];
    let selected: Vec<_> = entries
        .iter()
        .filter(|&&(s, t, u, _)| s + t + u + 1 <= max_n)
        .collect();
    let failures: Vec<String> = selected
        .par_iter()
        .filter_map(|&&(s, t, u, want)| {
            let got = brute(&make_branch(s, t, u));
            let table = dynkin_reference(DynkinFamily::E(s, t, u)).expect("table entry");
            if got != BigUint::from(want) || table != BigUint::from(want) {
                Some(format!("q({s},{t},{u}) = {got}, expected {want}"))
            } else {
                None
            }
        })
        .collect();
    if failures.is_empty() {
        Check::pass("E-series", format!("{} table entries match", selected.len()))
    } else {
        Check::fail("E-series", failures.join("; "))
    }
}

/// Closed form for q(1,t,u) against the recursion for all t+u <= max_sum.
pub fn check_closed_1tu(max_sum: usize) -> Check {
    for t in 0..=max_sum {
        for u in 0..=max_sum - t {
            if q_closed_1tu(t, u) != q_recursive(1, t, u) {
                return Check::fail(
                    "closed form q(1,t,u)",
                    format!("mismatch at t={t}, u={u}"),
                );
            }
        }
    }
    Check::pass(
        "closed form q(1,t,u)",
        format!("all t+u <= {max_sum} agree with the recursion"),
    )
}

/// Closed form for q(s,t,1) against the recursion for all s+t <= max_sum.
pub fn check_closed_st1(max_sum: usize) -> Check {
    for s in 0..=max_sum {
        for t in 0..=max_sum - s {
            if q_closed_st1(s, t) != q_recursive(s, t, 1) {
                return Check::fail(
                    "closed form q(s,t,1)",
                    format!("mismatch at s={s}, t={t}"),
                );
            }
        }
    }
    Check::pass(
        "closed form q(s,t,1)",
        format!("all s+t <= {max_sum} agree with the recursion"),
    )
}

/// Recursion against brute force on every branch shape with s+t+u <= max_sum.
pub fn check_recursion_vs_brute(max_sum: usize) -> Check {
    let mut shapes = Vec::new();
    for s in 0..=max_sum {
        for t in 0..=max_sum - s {
            for u in 0..=max_sum - s - t {
                shapes.push((s, t, u));
            }
        }
    }
    let failures: Vec<String> = shapes
        .par_iter()
        .filter_map(|&(s, t, u)| {
            let want = q_recursive(s, t, u);
            let got = brute(&make_branch(s, t, u));
            (got != want).then(|| format!("q({s},{t},{u}): brute {got} != recursion {want}"))
        })
        .collect();
    if failures.is_empty() {
        Check::pass(
            "recursion vs brute",
            format!("{} branch shapes with s+t+u <= {max_sum} agree", shapes.len()),
        )
    } else {
        Check::fail("recursion vs brute", failures.join("; "))
    }
}

/// Opposite invariance of the brute count on random trees.
pub fn check_opposite_invariance(trials: usize, max_n: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let quivers: Vec<Quiver> = (0..trials)
        .map(|_| {
            let n = rng.gen_range(1..=max_n);
            random_tree(&mut rng, n)
        })
        .collect();
    let failures: Vec<String> = quivers
        .par_iter()
        .filter_map(|q| {
            let a = brute(q);
            let b = brute(&q.opposite());
            (a != b).then(|| format!("{}: {a} != opposite {b}", q.to_json()))
        })
        .collect();
    if failures.is_empty() {
        Check::pass(
            "opposite invariance",
            format!("{trials} random trees with n <= {max_n}"),
        )
    } else {
        Check::fail("opposite invariance", failures.join("; "))
    }
}

/// Deconcatenation product: brute count of the whole equals the product of
/// the piece counts, on random trees with a valid cut vertex.
pub fn check_deconcat_product(trials: usize, max_n: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::new();
    while cases.len() < trials {
        let n = rng.gen_range(3..=max_n.max(3));
        let q = random_tree(&mut rng, n);
        let cuts: Vec<usize> = (1..=q.n())
            .filter(|&v| (q.is_sink(v) || q.is_source(v)) && q.undirected_degree(v) >= 2)
            .collect();
        if cuts.is_empty() {
            continue;
        }
        let v = cuts[rng.gen_range(0..cuts.len())];
        cases.push((q, v));
    }
    let failures: Vec<String> = cases
        .par_iter()
        .filter_map(|(q, v)| {
            let whole = brute(q);
            let product: BigUint = deconcatenate(q, *v)
                .expect("cut vertex was validated")
                .iter()
                .map(|p| brute(&p.quiver))
                .product();
            (whole != product)
                .then(|| format!("{} cut at {v}: {whole} != product {product}", q.to_json()))
        })
        .collect();
    if failures.is_empty() {
        Check::pass(
            "deconcatenation product",
            format!("{trials} random trees with n <= {}", max_n.max(3)),
        )
    } else {
        Check::fail("deconcatenation product", failures.join("; "))
    }
}

fn for_all_tree_quivers(max_n: usize, mut per_tree: impl FnMut(&[Quiver]) -> Option<String>) -> Option<String> {
    for n in 1..=max_n {
        for edges in all_labeled_trees(n) {
            if let Some(err) = per_tree(&all_orientations(n, &edges)) {
                return Some(err);
            }
        }
    }
    None
}

/// Every permutation of every tree quiver with n <= max_n yields a
/// quasi-hereditary verdict (path algebras of trees are hereditary).
pub fn check_hereditary_universality(max_n: usize) -> Check {
    for n in 1..=max_n {
        let trees = all_labeled_trees(n);
        let failure: Option<String> = trees
            .par_iter()
            .flat_map_iter(|edges| all_orientations(n, edges))
            .find_map_any(|q| {
                Permutation::iter_all(n)
                    .find(|sigma| !is_quasi_hereditary(&q, sigma).verdict)
                    .map(|sigma| format!("{} with sigma {:?}", q.to_json(), sigma.images()))
            });
        if let Some(f) = failure {
            return Check::fail("hereditary universality", f);
        }
    }
    Check::pass(
        "hereditary universality",
        format!("all permutations on all tree quivers with n <= {max_n} are quasi-hereditary"),
    )
}

/// Peeling and the exhaustive backtracking oracle agree on existence and on
/// the factor multiset, for every permutation of every tree quiver.
pub fn check_filtration_oracle(max_n: usize) -> Check {
    let failure = for_all_tree_quivers(max_n, |quivers| {
        quivers.iter().find_map(|q| {
            Permutation::iter_all(q.n()).find_map(|sigma| {
                let peel = peel_filtration(q, &sigma);
                let oracle = exhaustive_filtration(q, &sigma, max_n.max(7))
                    .expect("within oracle cap");
                match oracle {
                    None => Some(format!(
                        "{} sigma {:?}: peel complete but oracle found no filtration",
                        q.to_json(),
                        sigma.images()
                    )),
                    Some(trace) => {
                        if !peel.is_complete()
                            || trace.factor_multiset() != peel.factor_multiset()
                        {
                            Some(format!(
                                "{} sigma {:?}: factor multisets differ",
                                q.to_json(),
                                sigma.images()
                            ))
                        } else {
                            None
                        }
                    }
                }
            })
        })
    });
    match failure {
        None => Check::pass(
            "filtration oracle agreement",
            format!("peeling matches the exhaustive oracle for all trees with n <= {max_n}"),
        ),
        Some(f) => Check::fail("filtration oracle agreement", f),
    }
}

/// The three Catalan identities hold exactly up to max_t.
pub fn check_catalan_identities_upto(max_t: usize) -> Check {
    match (0..=max_t).find(|&t| !check_catalan_identities(t)) {
        None => Check::pass(
            "Catalan identities",
            format!("identities (1)-(3) hold for all t <= {max_t}"),
        ),
        Some(t) => Check::fail("Catalan identities", format!("identity failed at t = {t}")),
    }
}

/// Formula dispatch equals brute force on every orientation of every path
/// graph and every T-shaped graph with n <= max_n whose pieces are
/// recognized.
pub fn check_mixed_orientation(max_n: usize) -> Check {
    let mut underlyings: Vec<(usize, Vec<(usize, usize)>)> = Vec::new();
    for n in 1..=max_n {
        underlyings.push((n, (1..n).map(|i| (i, i + 1)).collect()));
    }
    for a in 1..=max_n {
        for b in 1..=a {
            for c in 1..=b {
                let n = a + b + c + 1;
                if n <= max_n {
                    let edges = make_branch(a, b, c)
                        .arrows()
                        .iter()
                        .copied()
                        .collect();
                    underlyings.push((n, edges));
                }
            }
        }
    }
    let mut checked = 0usize;
    let mut skipped = 0usize;
    for (n, edges) in &underlyings {
        let failure: Option<String> = all_orientations(*n, edges)
            .par_iter()
            .filter_map(|q| match count_formula(q) {
                Err(FormulaError::UnsupportedShape(_)) => None,
                Err(e) => Some(format!("{}: {e}", q.to_json())),
                Ok(formula) => {
                    let b = brute(q);
                    (b != formula)
                        .then(|| format!("{}: brute {b} != formula {formula}", q.to_json()))
                }
            })
            .find_any(|_| true);
        if let Some(f) = failure {
            return Check::fail("mixed-orientation dispatch", f);
        }
        let recognized = all_orientations(*n, edges)
            .iter()
            .filter(|q| count_formula(q).is_ok())
            .count();
        checked += recognized;
        skipped += (1usize << (n - 1)) - recognized;
    }
    Check::pass(
        "mixed-orientation dispatch",
        format!("{checked} orientations agree ({skipped} unrecognized skipped)"),
    )
}

/// Runs the full battery scaled by `max_n`, in the acceptance-criteria order.
pub fn run_battery(max_n: usize, seed: u64) -> Vec<Check> {
    vec![
        check_line_counts(max_n.min(9)),
        check_d_series(max_n),
        check_e_series(max_n),
        check_closed_1tu(18),
        check_closed_st1(18),
        check_recursion_vs_brute(max_n.saturating_sub(1).min(7)),
        check_opposite_invariance(50, max_n.min(7), seed),
        check_deconcat_product(50, max_n.min(8), seed ^ 0x9e3779b97f4a7c15),
        check_hereditary_universality(max_n.min(6)),
        check_filtration_oracle(max_n.min(5)),
        check_catalan_identities_upto(200),
        check_mixed_orientation(max_n.min(7)),
    ]
}
