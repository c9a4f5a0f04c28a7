//! Tree quivers: construction, validation, file formats, opposite,
//! deconcatenation, reachability, and shape recognition for formula dispatch.

use crate::vset::VertexSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuiverError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("invalid quiver: {0}")]
    Invalid(String),
    #[error("vertex {vertex} is not a sink or source of undirected degree >= 2")]
    BadCutVertex { vertex: usize },
}

/// A finite quiver on vertices `1..=n` whose underlying graph is a tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quiver {
    n: usize,
    arrows: Vec<(usize, usize)>,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RawQuiver {
    vertices: usize,
    arrows: Vec<(usize, usize)>,
}

impl Quiver {
    /// Validates that the arrows form a tree on `1..=n` (connected, no loops,
    /// no repeated arrows, exactly `n - 1` arrows) and canonicalizes the
    /// arrow order.
    pub fn new(n: usize, mut arrows: Vec<(usize, usize)>) -> Result<Self, QuiverError> {
        if n == 0 {
            return Err(QuiverError::Invalid("vertex count must be positive".into()));
        }
        for &(s, t) in &arrows {
            if s < 1 || s > n || t < 1 || t > n {
                return Err(QuiverError::Invalid(format!(
                    "arrow ({s},{t}) has an endpoint outside 1..={n}"
                )));
            }
            if s == t {
                return Err(QuiverError::NotATree(format!("loop at vertex {s}")));
            }
        }
        arrows.sort_unstable();
        if arrows.windows(2).any(|w| w[0] == w[1]) {
            return Err(QuiverError::NotATree("repeated arrow".into()));
        }
        if arrows.len() != n - 1 {
            return Err(QuiverError::NotATree(format!(
                "{} arrows on {} vertices (expected {})",
                arrows.len(),
                n,
                n - 1
            )));
        }
        // Connected with n - 1 edges implies acyclic.
        let mut adj = vec![Vec::new(); n + 1];
        for &(s, t) in &arrows {
            adj[s].push(t);
            adj[t].push(s);
        }
        let mut seen = vec![false; n + 1];
        let mut stack = vec![1];
        seen[1] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen[1..=n].iter().any(|&s| !s) {
            return Err(QuiverError::NotATree("underlying graph is disconnected".into()));
        }
        let mut out = vec![Vec::new(); n + 1];
        let mut inn = vec![Vec::new(); n + 1];
        for &(s, t) in &arrows {
            out[s].push(t);
            inn[t].push(s);
        }
        Ok(Quiver { n, arrows, out, inn })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.inn[v]
    }

    pub fn undirected_degree(&self, v: usize) -> usize {
        self.out[v].len() + self.inn[v].len()
    }

    pub fn undirected_neighbors(&self, v: usize) -> Vec<usize> {
        let mut ns: Vec<usize> = self.out[v].iter().chain(&self.inn[v]).copied().collect();
        ns.sort_unstable();
        ns
    }

    pub fn is_sink(&self, v: usize) -> bool {
        self.out[v].is_empty()
    }

    pub fn is_source(&self, v: usize) -> bool {
        self.inn[v].is_empty()
    }

    /// Endpoints of directed paths starting at `i`, including `i` itself.
    pub fn reachable_set(&self, i: usize) -> VertexSet {
        assert!(i >= 1 && i <= self.n, "vertex {i} out of range");
        let mut seen = VertexSet::singleton(i);
        let mut stack = vec![i];
        while let Some(v) = stack.pop() {
            for &w in &self.out[v] {
                if !seen.contains(w) {
                    seen.insert(w);
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Same vertices, every arrow reversed.
    pub fn opposite(&self) -> Quiver {
        let arrows = self.arrows.iter().map(|&(s, t)| (t, s)).collect();
        Quiver::new(self.n, arrows).expect("opposite of a tree is a tree")
    }

    /// Applies a vertex bijection; `map[v - 1]` is the new label of `v`.
    pub fn relabel(&self, map: &[usize]) -> Quiver {
        assert_eq!(map.len(), self.n);
        let arrows = self
            .arrows
            .iter()
            .map(|&(s, t)| (map[s - 1], map[t - 1]))
            .collect();
        Quiver::new(self.n, arrows).expect("relabeling preserves the tree property")
    }

    /// Canonical JSON form: `{"vertices":n,"arrows":[[s,t],...]}`.
    pub fn to_json(&self) -> String {
        let raw = RawQuiver {
            vertices: self.n,
            arrows: self.arrows.clone(),
        };
        serde_json::to_string(&raw).expect("quiver serialization cannot fail")
    }

    /// Canonical text form: first line `n`, then one `s -> t` per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for &(a, b) in &self.arrows {
            s.push_str(&format!("{a} -> {b}\n"));
        }
        s
    }
}

/// Parses either the JSON form or the `s -> t` text form.
pub fn parse_quiver(text: &str) -> Result<Quiver, QuiverError> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        let raw: RawQuiver =
            serde_json::from_str(trimmed).map_err(|e| QuiverError::Parse(e.to_string()))?;
        return Quiver::new(raw.vertices, raw.arrows);
    }
    let mut lines = trimmed.lines().map(str::trim).filter(|l| !l.is_empty());
    let n: usize = lines
        .next()
        .ok_or_else(|| QuiverError::Parse("empty input".into()))?
        .parse()
        .map_err(|_| QuiverError::Parse("first line must be the vertex count".into()))?;
    let mut arrows = Vec::new();
    for line in lines {
        let (s, t) = line
            .split_once("->")
            .ok_or_else(|| QuiverError::Parse(format!("expected `s -> t`, got `{line}`")))?;
        let s: usize = s
            .trim()
            .parse()
            .map_err(|_| QuiverError::Parse(format!("bad source in `{line}`")))?;
        let t: usize = t
            .trim()
            .parse()
            .map_err(|_| QuiverError::Parse(format!("bad target in `{line}`")))?;
        arrows.push((s, t));
    }
    Quiver::new(n, arrows)
}

/// The linearly oriented line `1 -> 2 -> ... -> n`.
pub fn make_line(n: usize) -> Result<Quiver, QuiverError> {
    Quiver::new(n, (1..n).map(|i| (i, i + 1)).collect())
}

/// The branch quiver with an in-arm of length `s` flowing into a branch
/// vertex that feeds two out-arms of lengths `t` and `u`.
///
/// Canonical labels: branch vertex = 1, in-arm = `2..=s+1` (arrows toward 1),
/// first out-arm = `s+2..=s+t+1`, second out-arm = `s+t+2..=s+t+u+1`.
pub fn make_branch(s: usize, t: usize, u: usize) -> Quiver {
    let n = s + t + u + 1;
    let mut arrows = Vec::with_capacity(n - 1);
    for i in 1..=s {
        // a_i -> a_{i-1}
        arrows.push((i + 1, i));
    }
    if t > 0 {
        arrows.push((1, s + 2));
        for j in 1..t {
            arrows.push((s + 1 + j, s + 2 + j));
        }
    }
    if u > 0 {
        arrows.push((1, s + t + 2));
        for k in 1..u {
            arrows.push((s + t + 1 + k, s + t + 2 + k));
        }
    }
    Quiver::new(n, arrows).expect("branch construction is a tree")
}

/// A deconcatenation piece, relabeled to `1..=m`; `orig[new - 1]` is the
/// vertex label the piece had inside the parent quiver.
#[derive(Debug, Clone)]
pub struct Piece {
    pub quiver: Quiver,
    pub orig: Vec<usize>,
}

/// Splits `q` at a sink or source `v` of undirected degree >= 2 into the
/// connected full subquivers each containing `v`.
pub fn deconcatenate(q: &Quiver, v: usize) -> Result<Vec<Piece>, QuiverError> {
    if v < 1 || v > q.n() {
        return Err(QuiverError::Invalid(format!("vertex {v} out of range")));
    }
    if !(q.is_sink(v) || q.is_source(v)) || q.undirected_degree(v) < 2 {
        return Err(QuiverError::BadCutVertex { vertex: v });
    }
    // Components of q minus v, each re-joined with v.
    let mut seen = vec![false; q.n() + 1];
    seen[v] = true;
    let mut pieces = Vec::new();
    for start in 1..=q.n() {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for w in q.undirected_neighbors(x) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.push(v);
        comp.sort_unstable();
        let mut new_label = vec![0usize; q.n() + 1];
        for (idx, &orig) in comp.iter().enumerate() {
            new_label[orig] = idx + 1;
        }
        let arrows = q
            .arrows()
            .iter()
            .filter(|&&(a, b)| new_label[a] != 0 && new_label[b] != 0)
            .map(|&(a, b)| (new_label[a], new_label[b]))
            .collect();
        let quiver = Quiver::new(comp.len(), arrows)?;
        pieces.push(Piece { quiver, orig: comp });
    }
    Ok(pieces)
}

fn first_cut_vertex(q: &Quiver) -> Option<usize> {
    (1..=q.n()).find(|&v| (q.is_sink(v) || q.is_source(v)) && q.undirected_degree(v) >= 2)
}

/// Iterates deconcatenation to a fixed point. No returned piece has an
/// internal sink or source of undirected degree >= 2.
pub fn full_deconcatenation(q: &Quiver) -> Vec<Quiver> {
    let mut work = vec![q.clone()];
    let mut done = Vec::new();
    while let Some(piece) = work.pop() {
        match first_cut_vertex(&piece) {
            Some(v) => {
                let sub = deconcatenate(&piece, v).expect("cut vertex was checked");
                work.extend(sub.into_iter().map(|p| p.quiver));
            }
            None => done.push(piece),
        }
    }
    done.sort_by_key(|p| p.to_json());
    done
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeKind {
    Line(usize),
    Branch { s: usize, t: usize, u: usize },
    OppositeBranch { s: usize, t: usize, u: usize },
    Unrecognized,
}

/// Identification of a quiver, up to vertex relabeling, as a canonical shape.
///
/// `relabeling[v - 1]` maps input vertex `v` to its canonical label; applying
/// it to the input reproduces the canonical shape's arrow set exactly.
#[derive(Debug, Clone)]
pub struct ShapeDescriptor {
    pub kind: ShapeKind,
    pub relabeling: Vec<usize>,
}

impl ShapeKind {
    /// The canonical quiver carrying this shape, if recognized.
    pub fn canonical(&self) -> Option<Quiver> {
        match *self {
            ShapeKind::Line(n) => Some(make_line(n).expect("n >= 1")),
            ShapeKind::Branch { s, t, u } => Some(make_branch(s, t, u)),
            ShapeKind::OppositeBranch { s, t, u } => Some(make_branch(s, t, u).opposite()),
            ShapeKind::Unrecognized => None,
        }
    }
}

fn unrecognized(n: usize) -> ShapeDescriptor {
    ShapeDescriptor {
        kind: ShapeKind::Unrecognized,
        relabeling: (1..=n).collect(),
    }
}

/// Walks the arm leaving `w` through its neighbor `first`, returning the arm
/// vertices in order and whether every arrow points away from `w`
/// (`Some(true)`), toward `w` (`Some(false)`), or mixed (`None`).
fn walk_arm(q: &Quiver, w: usize, first: usize) -> (Vec<usize>, Option<bool>) {
    let mut arm = vec![first];
    let mut prev = w;
    let mut cur = first;
    loop {
        let next: Vec<usize> = q
            .undirected_neighbors(cur)
            .into_iter()
            .filter(|&x| x != prev)
            .collect();
        match next.as_slice() {
            [] => break,
            [x] => {
                arm.push(*x);
                prev = cur;
                cur = *x;
            }
            _ => break, // caller guarantees degree <= 2 along arms
        }
    }
    let mut outward = true;
    let mut inward = true;
    let mut from = w;
    for &v in &arm {
        if q.out_neighbors(from).contains(&v) {
            inward = false;
        } else {
            outward = false;
        }
        from = v;
    }
    let dir = match (outward, inward) {
        (true, _) => Some(true),
        (_, true) => Some(false),
        _ => None,
    };
    (arm, dir)
}

/// Recognizes a tree quiver, up to relabeling, as a directed line, a branch
/// quiver, or the opposite of a branch quiver (`t >= u` normalized).
pub fn recognize_shape(q: &Quiver) -> ShapeDescriptor {
    let n = q.n();
    if n == 1 {
        return ShapeDescriptor {
            kind: ShapeKind::Line(1),
            relabeling: vec![1],
        };
    }
    if (1..=n).any(|v| q.undirected_degree(v) >= 4) {
        return unrecognized(n);
    }
    let deg3: Vec<usize> = (1..=n).filter(|&v| q.undirected_degree(v) == 3).collect();
    let descriptor = match deg3.as_slice() {
        [] => recognize_path(q),
        [w] => recognize_tripod(q, *w),
        _ => return unrecognized(n),
    };
    // The relabeling must reproduce the canonical arrow set exactly.
    if let Some(canon) = descriptor.kind.canonical() {
        if q.relabel(&descriptor.relabeling) != canon {
            return unrecognized(n);
        }
    }
    descriptor
}

fn recognize_path(q: &Quiver) -> ShapeDescriptor {
    let n = q.n();
    let start = (1..=n)
        .find(|&v| q.undirected_degree(v) == 1)
        .expect("a path with n >= 2 has endpoints");
    let (mut seq, _) = walk_arm(q, start, q.undirected_neighbors(start)[0]);
    seq.insert(0, start);
    debug_assert_eq!(seq.len(), n);
    // forward[i]: the arrow between seq[i] and seq[i+1] points up the walk.
    let forward: Vec<bool> = (0..n - 1)
        .map(|i| q.out_neighbors(seq[i]).contains(&seq[i + 1]))
        .collect();
    let changes = forward.windows(2).filter(|w| w[0] != w[1]).count();
    let mut relabeling = vec![0usize; n];
    if changes == 0 {
        if forward[0] {
            for (i, &v) in seq.iter().enumerate() {
                relabeling[v - 1] = i + 1;
            }
        } else {
            for (i, &v) in seq.iter().enumerate() {
                relabeling[v - 1] = n - i;
            }
        }
        return ShapeDescriptor {
            kind: ShapeKind::Line(n),
            relabeling,
        };
    }
    if changes > 1 {
        return unrecognized(n);
    }
    // One orientation change: an interior source (backward then forward) or
    // an interior sink (forward then backward), with arms of lengths p and
    // n - 1 - p around position p.
    let p = forward.windows(2).position(|w| w[0] != w[1]).unwrap() + 1;
    let is_src = forward[p];
    let left: Vec<usize> = seq[..p].iter().rev().copied().collect();
    let right: Vec<usize> = seq[p + 1..].to_vec();
    let (t_arm, u_arm) = if left.len() >= right.len() {
        (left, right)
    } else {
        (right, left)
    };
    let (t, u) = (t_arm.len(), u_arm.len());
    relabeling[seq[p] - 1] = 1;
    for (j, &v) in t_arm.iter().enumerate() {
        relabeling[v - 1] = 2 + j;
    }
    for (j, &v) in u_arm.iter().enumerate() {
        relabeling[v - 1] = t + 2 + j;
    }
    let kind = if is_src {
        ShapeKind::Branch { s: 0, t, u }
    } else {
        ShapeKind::OppositeBranch { s: 0, t, u }
    };
    ShapeDescriptor { kind, relabeling }
}

fn recognize_tripod(q: &Quiver, w: usize) -> ShapeDescriptor {
    let n = q.n();
    let mut inward_arms = Vec::new();
    let mut outward_arms = Vec::new();
    for first in q.undirected_neighbors(w) {
        let (arm, dir) = walk_arm(q, w, first);
        match dir {
            Some(true) => outward_arms.push(arm),
            Some(false) => inward_arms.push(arm),
            None => return unrecognized(n),
        }
    }
    let sort_arms = |arms: &mut Vec<Vec<usize>>| {
        arms.sort_by_key(|a| (std::cmp::Reverse(a.len()), a[0]));
    };
    let (kind, a_arm, b_arm, c_arm) = match (inward_arms.len(), outward_arms.len()) {
        (1, 2) => {
            sort_arms(&mut outward_arms);
            let s = inward_arms[0].len();
            let (t, u) = (outward_arms[0].len(), outward_arms[1].len());
            (
                ShapeKind::Branch { s, t, u },
                inward_arms.remove(0),
                outward_arms.remove(0),
                outward_arms.remove(0),
            )
        }
        (2, 1) => {
            sort_arms(&mut inward_arms);
            let s = outward_arms[0].len();
            let (t, u) = (inward_arms[0].len(), inward_arms[1].len());
            (
                ShapeKind::OppositeBranch { s, t, u },
                outward_arms.remove(0),
                inward_arms.remove(0),
                inward_arms.remove(0),
            )
        }
        _ => return unrecognized(n),
    };
    let mut relabeling = vec![0usize; n];
    relabeling[w - 1] = 1;
    let mut next = 2;
    for arm in [a_arm, b_arm, c_arm] {
        for v in arm {
            relabeling[v - 1] = next;
            next += 1;
        }
    }
    ShapeDescriptor { kind, relabeling }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: usize, arrows: &[(usize, usize)]) -> Quiver {
        Quiver::new(n, arrows.to_vec()).unwrap()
    }

    #[test]
    fn parse_json_smallest_tree() {
        let quiver = parse_quiver(r#"{"vertices":2,"arrows":[[1,2]]}"#).unwrap();
        assert_eq!(quiver, q(2, &[(1, 2)]));
    }

    #[test]
    fn parse_preserves_orientation() {
        let quiver = parse_quiver(r#"{"vertices":3,"arrows":[[1,2],[3,2]]}"#).unwrap();
        assert_eq!(quiver.arrows(), &[(1, 2), (3, 2)]);
        assert!(quiver.is_sink(2));
    }

    #[test]
    fn parse_rejects_cycle() {
        let err = parse_quiver(r#"{"vertices":3,"arrows":[[1,2],[2,3],[3,1]]}"#).unwrap_err();
        assert!(matches!(err, QuiverError::NotATree(_)));
    }

    #[test]
    fn parse_rejects_disconnected_loop_duplicate() {
        assert!(matches!(
            parse_quiver(r#"{"vertices":4,"arrows":[[1,2],[1,2],[3,4]]}"#),
            Err(QuiverError::NotATree(_))
        ));
        assert!(matches!(
            parse_quiver(r#"{"vertices":2,"arrows":[[1,1]]}"#),
            Err(QuiverError::NotATree(_))
        ));
        assert!(matches!(
            parse_quiver(r#"{"vertices":4,"arrows":[[1,2],[3,4],[4,3]]}"#),
            Err(QuiverError::NotATree(_))
        ));
    }

    #[test]
    fn parse_text_form() {
        let quiver = parse_quiver("3\n1 -> 2\n3 -> 2\n").unwrap();
        assert_eq!(quiver, q(3, &[(1, 2), (3, 2)]));
    }

    #[test]
    fn serializers_round_trip() {
        let quiver = q(4, &[(2, 1), (2, 3), (4, 3)]);
        assert_eq!(parse_quiver(&quiver.to_json()).unwrap(), quiver);
        assert_eq!(parse_quiver(&quiver.to_text()).unwrap(), quiver);
        // Canonical forms are fixed points of parse-then-serialize.
        let js = quiver.to_json();
        assert_eq!(parse_quiver(&js).unwrap().to_json(), js);
        let tx = quiver.to_text();
        assert_eq!(parse_quiver(&tx).unwrap().to_text(), tx);
    }

    #[test]
    fn make_line_examples() {
        assert_eq!(make_line(1).unwrap().arrows(), &[]);
        assert_eq!(make_line(3).unwrap().arrows(), &[(1, 2), (2, 3)]);
        let l4 = make_line(4).unwrap();
        assert_eq!(l4.n(), 4);
        assert_eq!(l4.arrows().len(), 3);
        assert!(l4.is_source(1) && !l4.is_source(2));
        assert!(l4.is_sink(4) && !l4.is_sink(3));
        assert!(make_line(0).is_err());
    }

    #[test]
    fn make_branch_examples() {
        assert_eq!(make_branch(0, 0, 0).n(), 1);
        let d4 = make_branch(1, 1, 1);
        assert_eq!(d4.arrows(), &[(1, 3), (1, 4), (2, 1)]);
        let e6 = make_branch(2, 2, 1);
        assert_eq!(e6.n(), 6);
        assert_eq!(e6.in_neighbors(1).len(), 1);
        assert_eq!(e6.out_neighbors(1).len(), 2);
    }

    #[test]
    fn opposite_examples() {
        assert_eq!(make_line(3).unwrap().opposite().arrows(), &[(2, 1), (3, 2)]);
        let b = make_branch(1, 1, 1);
        assert_eq!(b.opposite().arrows(), &[(1, 2), (3, 1), (4, 1)]);
        for quiver in [make_line(5).unwrap(), make_branch(2, 3, 1), b] {
            assert_eq!(quiver.opposite().opposite(), quiver);
        }
    }

    #[test]
    fn reachable_examples() {
        let l3 = make_line(3).unwrap();
        assert_eq!(l3.reachable_set(1).to_vec(), vec![1, 2, 3]);
        assert_eq!(l3.reachable_set(3).to_vec(), vec![3]);
        // a_1 = vertex 2 in make_branch(1,1,1) reaches everything.
        assert_eq!(make_branch(1, 1, 1).reachable_set(2).len(), 4);
    }

    #[test]
    fn deconcatenate_at_sink() {
        let quiver = q(3, &[(1, 2), (3, 2)]);
        let pieces = deconcatenate(&quiver, 2).unwrap();
        assert_eq!(pieces.len(), 2);
        for p in &pieces {
            assert_eq!(p.quiver.n(), 2);
            assert!(p.orig.contains(&2));
        }
        // Vertex union minus duplicated copies of v reconstructs 1..=n.
        let mut union: Vec<usize> = pieces
            .iter()
            .flat_map(|p| p.orig.iter().copied().filter(|&x| x != 2))
            .collect();
        union.push(2);
        union.sort_unstable();
        assert_eq!(union, vec![1, 2, 3]);
    }

    #[test]
    fn deconcatenate_rejects_interior_flow_vertex() {
        let err = deconcatenate(&make_line(3).unwrap(), 2).unwrap_err();
        assert!(matches!(err, QuiverError::BadCutVertex { vertex: 2 }));
        // Degree-1 sinks admit no proper decomposition either.
        assert!(deconcatenate(&make_line(3).unwrap(), 3).is_err());
    }

    #[test]
    fn deconcatenate_star_into_three_lines() {
        let star = q(4, &[(1, 4), (2, 4), (3, 4)]);
        let pieces = deconcatenate(&star, 4).unwrap();
        assert_eq!(pieces.len(), 3);
        assert!(pieces.iter().all(|p| p.quiver.n() == 2));
    }

    #[test]
    fn full_deconcatenation_examples() {
        let line = make_line(4).unwrap();
        assert_eq!(full_deconcatenation(&line), vec![line]);
        let branch = make_branch(2, 2, 1);
        assert_eq!(full_deconcatenation(&branch), vec![branch]);
        // 1 -> 2 <- 3 -> 4 splits into three 2-vertex lines.
        let zigzag = q(4, &[(1, 2), (3, 2), (3, 4)]);
        let pieces = full_deconcatenation(&zigzag);
        assert_eq!(pieces.len(), 3);
        assert!(pieces.iter().all(|p| p.n() == 2));
    }

    #[test]
    fn full_deconcatenation_is_cut_order_independent() {
        // Same quiver, cutting greatest eligible vertex first instead.
        let zigzag = q(6, &[(1, 2), (3, 2), (3, 4), (5, 4), (5, 6)]);
        let mut work = vec![zigzag.clone()];
        let mut done: Vec<String> = Vec::new();
        while let Some(piece) = work.pop() {
            let cut = (1..=piece.n())
                .rev()
                .find(|&v| (piece.is_sink(v) || piece.is_source(v)) && piece.undirected_degree(v) >= 2);
            match cut {
                Some(v) => work.extend(
                    deconcatenate(&piece, v).unwrap().into_iter().map(|p| p.quiver),
                ),
                None => done.push(piece.to_json()),
            }
        }
        done.sort();
        let reference: Vec<String> =
            full_deconcatenation(&zigzag).iter().map(|p| p.to_json()).collect();
        assert_eq!(done, reference);
    }

    #[test]
    fn recognize_lines_and_branches() {
        assert_eq!(recognize_shape(&make_line(5).unwrap()).kind, ShapeKind::Line(5));
        assert_eq!(
            recognize_shape(&make_branch(2, 1, 2)).kind,
            ShapeKind::Branch { s: 2, t: 2, u: 1 }
        );
        assert_eq!(
            recognize_shape(&make_branch(1, 2, 2).opposite()).kind,
            ShapeKind::OppositeBranch { s: 1, t: 2, u: 2 }
        );
    }

    #[test]
    fn recognize_degenerate_branches() {
        // With an empty out-arm the branch degenerates to a directed line.
        assert_eq!(recognize_shape(&make_branch(2, 3, 0)).kind, ShapeKind::Line(6));
        assert_eq!(recognize_shape(&make_branch(0, 0, 2)).kind, ShapeKind::Line(3));
        // With no in-arm it is a path with an interior source.
        assert_eq!(
            recognize_shape(&make_branch(0, 2, 1)).kind,
            ShapeKind::Branch { s: 0, t: 2, u: 1 }
        );
        assert_eq!(
            recognize_shape(&make_branch(0, 1, 3).opposite()).kind,
            ShapeKind::OppositeBranch { s: 0, t: 3, u: 1 }
        );
    }

    #[test]
    fn recognize_branch_parameters_up_to_eight() {
        for s in 1..=8 {
            for t in 1..=8 {
                for u in 1..=8 {
                    assert_eq!(
                        recognize_shape(&make_branch(s, t, u)).kind,
                        ShapeKind::Branch {
                            s,
                            t: t.max(u),
                            u: t.min(u)
                        }
                    );
                }
            }
        }
        // Degenerate arms collapse to recognized path shapes instead.
        for s in 0..=8 {
            for t in 0..=8 {
                assert_eq!(
                    recognize_shape(&make_branch(s, t, 0)).kind,
                    ShapeKind::Line(s + t + 1)
                );
            }
        }
    }

    #[test]
    fn recognize_rejects_wild_shapes() {
        let star4 = q(5, &[(1, 5), (2, 5), (3, 5), (4, 5)]);
        assert_eq!(recognize_shape(&star4).kind, ShapeKind::Unrecognized);
        // Two branch vertices.
        let double = q(
            8,
            &[(2, 1), (1, 3), (1, 4), (5, 4), (4, 6), (4, 7), (7, 8)],
        );
        assert_eq!(recognize_shape(&double).kind, ShapeKind::Unrecognized);
        // Degree-3 source is not a branch quiver.
        let out_star = q(4, &[(1, 2), (1, 3), (1, 4)]);
        assert_eq!(recognize_shape(&out_star).kind, ShapeKind::Unrecognized);
    }

    #[test]
    fn recognition_relabeling_reproduces_canonical_shape() {
        for quiver in [
            make_line(6).unwrap().relabel(&[3, 1, 6, 2, 5, 4]),
            make_branch(2, 2, 1).relabel(&[4, 2, 6, 1, 3, 5]),
            make_branch(1, 3, 2).opposite().relabel(&[7, 5, 3, 1, 2, 4, 6]),
        ] {
            let d = recognize_shape(&quiver);
            assert_ne!(d.kind, ShapeKind::Unrecognized);
            assert_eq!(quiver.relabel(&d.relabeling), d.kind.canonical().unwrap());
        }
    }
}
