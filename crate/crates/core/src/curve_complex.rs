//! Finite curve systems and the simplicial structure of disjointness.
//!
//! An [`IntersectionGraph`] records which curves intersect. Cliques of the
//! complementary (disjointness) relation are simplices; a maximal one with
//! exactly `3g-3` members is a pants decomposition and becomes the
//! coordinate chart of the metric model.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};

/// Hard cap on curves per system; adjacency is kept in 64-bit masks.
pub const MAX_CURVES: usize = 64;

/// Index into the sorted label table of an [`IntersectionGraph`].
///
/// Labels are sorted lexicographically at construction, so the numeric order
/// of `Curve` values is the lexicographic order of labels. All canonical
/// sorting and tie-breaking in the crate relies on this.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Curve(pub u16);

impl Curve {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite curve system on a closed surface of genus `g >= 2` with its
/// symmetric, irreflexive intersection relation.
///
/// Invariant: no disjointness clique exceeds `3g-3` curves (checked at
/// construction by exact maximum-clique search).
#[derive(Debug)]
pub struct IntersectionGraph {
    genus: usize,
    labels: Vec<String>,
    /// Bit `j` of `adj[i]` is set iff curves `i` and `j` intersect.
    adj: Vec<u64>,
    max_disjoint_clique: usize,
    id: u64,
}

impl IntersectionGraph {
    pub fn new(genus: usize, labels: &[&str], intersections: &[(&str, &str)]) -> Result<Self> {
        if genus < 2 {
            return Err(Error::InvalidGenus(genus));
        }
        if labels.is_empty() {
            return Err(Error::ConstraintViolated(
                "curve system needs at least one curve".into(),
            ));
        }
        if labels.len() > MAX_CURVES {
            return Err(Error::TooLarge(format!(
                "{} curves exceeds the supported maximum {MAX_CURVES}",
                labels.len()
            )));
        }
        let mut sorted: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        sorted.sort();
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::ConstraintViolated(format!(
                    "duplicate curve label: {}",
                    pair[0]
                )));
            }
        }

        let find = |name: &str| -> Result<usize> {
            sorted
                .binary_search_by(|l| l.as_str().cmp(name))
                .map_err(|_| Error::UnknownCurve(name.to_string()))
        };

        let n = sorted.len();
        let mut adj = vec![0u64; n];
        for (a, b) in intersections {
            let i = find(a)?;
            let j = find(b)?;
            if i == j {
                return Err(Error::ConstraintViolated(format!(
                    "curve {a} listed as intersecting itself"
                )));
            }
            if adj[i] & (1 << j) != 0 {
                return Err(Error::ConstraintViolated(format!(
                    "duplicate intersection pair: ({a}, {b})"
                )));
            }
            adj[i] |= 1 << j;
            adj[j] |= 1 << i;
        }

        let universe = if n == 64 { !0u64 } else { (1u64 << n) - 1 };
        let disjoint: Vec<u64> = (0..n).map(|i| universe & !adj[i] & !(1u64 << i)).collect();
        let max_disjoint_clique = max_clique_size(&disjoint, universe);
        let cap = 3 * genus - 3;
        if max_disjoint_clique > cap {
            return Err(Error::ConstraintViolated(format!(
                "disjointness clique of size {max_disjoint_clique} exceeds 3g-3 = {cap}"
            )));
        }

        let mut h = DefaultHasher::new();
        genus.hash(&mut h);
        sorted.hash(&mut h);
        adj.hash(&mut h);

        Ok(Self {
            genus,
            labels: sorted,
            adj,
            max_disjoint_clique,
            id: h.finish(),
        })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn curve_count(&self) -> usize {
        self.labels.len()
    }

    /// Fingerprint used to detect accidental mixing of graphs.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn max_disjoint_clique(&self) -> usize {
        self.max_disjoint_clique
    }

    pub fn curves(&self) -> impl Iterator<Item = Curve> + '_ {
        (0..self.labels.len()).map(|i| Curve(i as u16))
    }

    pub fn curve(&self, label: &str) -> Result<Curve> {
        self.labels
            .binary_search_by(|l| l.as_str().cmp(label))
            .map(|i| Curve(i as u16))
            .map_err(|_| Error::UnknownCurve(label.to_string()))
    }

    pub fn label(&self, c: Curve) -> &str {
        &self.labels[c.index()]
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.labels.iter().map(|s| s.as_str())
    }

    pub fn contains(&self, c: Curve) -> bool {
        c.index() < self.labels.len()
    }

    pub fn intersects(&self, a: Curve, b: Curve) -> bool {
        self.adj[a.index()] & (1 << b.index()) != 0
    }

    /// Distinct and not intersecting.
    pub fn disjoint(&self, a: Curve, b: Curve) -> bool {
        a != b && !self.intersects(a, b)
    }
}

/// Exact maximum clique via Bron-Kerbosch with pivoting on bit masks.
fn max_clique_size(neigh: &[u64], universe: u64) -> usize {
    fn go(neigh: &[u64], depth: usize, mut p: u64, mut x: u64, best: &mut usize) {
        if p == 0 {
            if x == 0 {
                *best = (*best).max(depth);
            }
            return;
        }
        if depth + p.count_ones() as usize <= *best {
            return;
        }
        let mut pivot = 0usize;
        let mut deg = -1i64;
        let mut scan = p | x;
        while scan != 0 {
            let u = scan.trailing_zeros() as usize;
            scan &= scan - 1;
            let d = (p & neigh[u]).count_ones() as i64;
            if d > deg {
                deg = d;
                pivot = u;
            }
        }
        let mut cand = p & !neigh[pivot];
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            let bit = 1u64 << v;
            cand &= !bit;
            go(neigh, depth + 1, p & neigh[v], x & neigh[v], best);
            p &= !bit;
            x |= bit;
        }
    }
    let mut best = 0;
    go(neigh, 0, universe, 0, &mut best);
    best
}

/// A set of pairwise disjoint curves, sorted by label order.
///
/// The empty set is admitted (the (-1)-simplex); it labels interior points
/// and indexes the trivial parabolic subgroup.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Simplex {
    graph_id: u64,
    members: Vec<Curve>,
}

impl Simplex {
    pub fn empty(graph: &IntersectionGraph) -> Self {
        Self {
            graph_id: graph.id(),
            members: Vec::new(),
        }
    }

    pub fn members(&self) -> &[Curve] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Simplex dimension; -1 for the empty simplex.
    pub fn dim(&self) -> isize {
        self.members.len() as isize - 1
    }

    pub fn graph_id(&self) -> u64 {
        self.graph_id
    }

    pub fn contains(&self, c: Curve) -> bool {
        self.members.binary_search(&c).is_ok()
    }

    pub fn is_subset_of(&self, other: &Simplex) -> bool {
        assert_eq!(self.graph_id, other.graph_id, "simplices from different graphs");
        let mut j = 0;
        for &c in &self.members {
            while j < other.members.len() && other.members[j] < c {
                j += 1;
            }
            if j == other.members.len() || other.members[j] != c {
                return false;
            }
            j += 1;
        }
        true
    }

    pub fn labels<'g>(&self, graph: &'g IntersectionGraph) -> Vec<&'g str> {
        self.members.iter().map(|&c| graph.label(c)).collect()
    }
}

/// Checks pairwise disjointness and returns the canonical sorted simplex.
pub fn validate_simplex(graph: &IntersectionGraph, curves: &[Curve]) -> Result<Simplex> {
    let mut members = curves.to_vec();
    for &c in &members {
        if !graph.contains(c) {
            return Err(Error::UnknownCurve(format!("curve index {}", c.0)));
        }
    }
    members.sort();
    members.dedup();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            if graph.intersects(members[i], members[j]) {
                return Err(Error::NotDisjoint(
                    graph.label(members[i]).to_string(),
                    graph.label(members[j]).to_string(),
                ));
            }
        }
    }
    let cap = 3 * graph.genus() - 3;
    if members.len() > cap {
        return Err(Error::TooLarge(format!(
            "simplex of size {} exceeds 3g-3 = {cap}",
            members.len()
        )));
    }
    Ok(Simplex {
        graph_id: graph.id(),
        members,
    })
}

/// Label-based variant of [`validate_simplex`].
pub fn validate_simplex_labels(graph: &IntersectionGraph, labels: &[&str]) -> Result<Simplex> {
    let curves: Vec<Curve> = labels
        .iter()
        .map(|l| graph.curve(l))
        .collect::<Result<_>>()?;
    validate_simplex(graph, &curves)
}

/// All disjointness cliques of size at most `max_size`, including the empty
/// simplex, graded by size and sorted within each grade.
pub fn enumerate_simplices(graph: &IntersectionGraph, max_size: usize) -> Result<Vec<Simplex>> {
    let cap = 3 * graph.genus() - 3;
    if max_size > cap {
        return Err(Error::ConstraintViolated(format!(
            "max_size {max_size} exceeds 3g-3 = {cap}"
        )));
    }
    let n = graph.curve_count();
    let mut out: Vec<Vec<Curve>> = Vec::new();
    let mut stack: Vec<Curve> = Vec::new();
    // Extends a clique with curves of larger index only, so each clique is
    // produced exactly once, already sorted.
    fn extend(
        graph: &IntersectionGraph,
        from: usize,
        max_size: usize,
        stack: &mut Vec<Curve>,
        out: &mut Vec<Vec<Curve>>,
    ) {
        out.push(stack.clone());
        if stack.len() == max_size {
            return;
        }
        for i in from..graph.curve_count() {
            let c = Curve(i as u16);
            if stack.iter().all(|&m| graph.disjoint(m, c)) {
                stack.push(c);
                extend(graph, i + 1, max_size, stack, out);
                stack.pop();
            }
        }
    }
    extend(graph, 0, max_size.min(n), &mut stack, &mut out);
    out.sort_by(|a, b| (a.len(), a.as_slice()).cmp(&(b.len(), b.as_slice())));
    Ok(out
        .into_iter()
        .map(|members| Simplex {
            graph_id: graph.id(),
            members,
        })
        .collect())
}

/// Subset inclusion `sigma` in `tau`. The stratum poset uses the reverse of
/// this order (the empty simplex is its maximal element).
pub fn precedes(sigma: &Simplex, tau: &Simplex) -> bool {
    sigma.is_subset_of(tau)
}

/// Upper bound `g + floor(g/2) - 1` for the rank of flats in the development.
pub fn rank_upper_bound(genus: usize) -> Result<usize> {
    if genus < 2 {
        return Err(Error::InvalidGenus(genus));
    }
    Ok(genus + genus / 2 - 1)
}

/// A maximal simplex of exactly `3g-3` curves, fixed as the coordinate chart
/// of the metric model. Factor `i` of the model belongs to `curves()[i]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PantsDecomposition {
    simplex: Simplex,
}

impl PantsDecomposition {
    pub fn new(graph: &IntersectionGraph, simplex: Simplex) -> Result<Self> {
        if simplex.graph_id() != graph.id() {
            return Err(Error::GraphMismatch(
                "pants decomposition built over a different graph".into(),
            ));
        }
        let need = 3 * graph.genus() - 3;
        if simplex.len() != need {
            return Err(Error::ConstraintViolated(format!(
                "pants decomposition needs exactly {need} curves, got {}",
                simplex.len()
            )));
        }
        Ok(Self { simplex })
    }

    pub fn simplex(&self) -> &Simplex {
        &self.simplex
    }

    pub fn curves(&self) -> &[Curve] {
        self.simplex.members()
    }

    pub fn len(&self) -> usize {
        self.simplex.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Model factor index of a pants curve.
    pub fn factor_index(&self, c: Curve) -> Option<usize> {
        self.simplex.members().binary_search(&c).ok()
    }

    pub fn graph_id(&self) -> u64 {
        self.simplex.graph_id()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture() -> IntersectionGraph {
        IntersectionGraph::new(
            2,
            &["c1", "c2", "c3", "t1", "t2", "t3"],
            &[
                ("c1", "t1"),
                ("c2", "t2"),
                ("c3", "t3"),
                ("t1", "t2"),
                ("t2", "t3"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn labels_sorted_and_indexed() {
        let g = IntersectionGraph::new(2, &["t1", "c2", "c1"], &[("c1", "t1")]).unwrap();
        let labels: Vec<&str> = g.labels().collect();
        assert_eq!(labels, ["c1", "c2", "t1"]);
        assert_eq!(g.curve("c1").unwrap(), Curve(0));
        assert_eq!(g.curve("t1").unwrap(), Curve(2));
        assert!(g.curve("zz").is_err());
    }

    #[test]
    fn relation_symmetric_irreflexive() {
        let g = fixture();
        for a in g.curves() {
            assert!(!g.intersects(a, a));
            for b in g.curves() {
                assert_eq!(g.intersects(a, b), g.intersects(b, a));
            }
        }
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(matches!(
            IntersectionGraph::new(1, &["a", "b"], &[]),
            Err(Error::InvalidGenus(1))
        ));
        assert!(matches!(
            IntersectionGraph::new(2, &["a", "a"], &[]),
            Err(Error::ConstraintViolated(_))
        ));
        assert!(matches!(
            IntersectionGraph::new(2, &["a", "b"], &[("a", "q")]),
            Err(Error::UnknownCurve(_))
        ));
        assert!(matches!(
            IntersectionGraph::new(2, &["a", "b"], &[("a", "a")]),
            Err(Error::ConstraintViolated(_))
        ));
        assert!(matches!(
            IntersectionGraph::new(2, &["a", "b"], &[("a", "b"), ("b", "a")]),
            Err(Error::ConstraintViolated(_))
        ));
        // Four mutually disjoint curves exceed 3g-3 = 3 at genus 2.
        assert!(matches!(
            IntersectionGraph::new(2, &["a", "b", "c", "d"], &[]),
            Err(Error::ConstraintViolated(_))
        ));
    }

    #[test]
    fn fixture_clique_bound_is_tight() {
        let g = fixture();
        assert_eq!(g.max_disjoint_clique(), 3);
    }

    #[test]
    fn simplex_validation() {
        let g = fixture();
        let s = validate_simplex_labels(&g, &["c3", "c1", "c2"]).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.labels(&g), ["c1", "c2", "c3"]);

        let e = validate_simplex_labels(&g, &[]).unwrap();
        assert!(e.is_empty());
        assert_eq!(e.dim(), -1);

        match validate_simplex_labels(&g, &["c1", "t1"]) {
            Err(Error::NotDisjoint(a, b)) => {
                assert_eq!((a.as_str(), b.as_str()), ("c1", "t1"));
            }
            other => panic!("expected NotDisjoint, got {other:?}"),
        }
    }

    #[test]
    fn enumerate_matches_subset_scan() {
        let g = fixture();
        for max_size in 0..=3usize {
            let fast = enumerate_simplices(&g, max_size).unwrap();
            // Independent oracle: scan all label subsets and keep the
            // pairwise disjoint ones.
            let n = g.curve_count();
            let mut slow = 0usize;
            for mask in 0u32..(1 << n) {
                if mask.count_ones() as usize > max_size {
                    continue;
                }
                let members: Vec<Curve> = (0..n)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| Curve(i as u16))
                    .collect();
                let ok = members
                    .iter()
                    .enumerate()
                    .all(|(k, &a)| members[k + 1..].iter().all(|&b| g.disjoint(a, b)));
                if ok {
                    slow += 1;
                }
            }
            assert_eq!(fast.len(), slow, "max_size {max_size}");
            for s in &fast {
                assert!(validate_simplex(&g, s.members()).is_ok());
            }
        }
        assert!(enumerate_simplices(&g, 4).is_err());
    }

    #[test]
    fn three_disjoint_curves_give_eight_simplices() {
        let g = IntersectionGraph::new(2, &["a", "b", "c"], &[]).unwrap();
        assert_eq!(enumerate_simplices(&g, 3).unwrap().len(), 8);
    }

    #[test]
    fn all_intersecting_gives_only_vertices() {
        let g =
            IntersectionGraph::new(2, &["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")])
                .unwrap();
        let sims = enumerate_simplices(&g, 2).unwrap();
        assert_eq!(sims.len(), 4); // empty + three vertices
    }

    #[test]
    fn precedes_is_a_partial_order() {
        let g = fixture();
        let sims = enumerate_simplices(&g, 3).unwrap();
        let empty = Simplex::empty(&g);
        for a in &sims {
            assert!(precedes(&empty, a));
            assert!(precedes(a, a));
            for b in &sims {
                if precedes(a, b) && precedes(b, a) {
                    assert_eq!(a, b);
                }
                for c in &sims {
                    if precedes(a, b) && precedes(b, c) {
                        assert!(precedes(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn rank_bound_values() {
        assert_eq!(rank_upper_bound(2).unwrap(), 2);
        assert_eq!(rank_upper_bound(3).unwrap(), 3);
        assert_eq!(rank_upper_bound(4).unwrap(), 5);
        assert!(rank_upper_bound(1).is_err());
    }

    #[test]
    fn pants_needs_exactly_3g_minus_3() {
        let g = fixture();
        let s = validate_simplex_labels(&g, &["c1", "c2", "c3"]).unwrap();
        let p = PantsDecomposition::new(&g, s).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.factor_index(g.curve("c2").unwrap()), Some(1));
        assert_eq!(p.factor_index(g.curve("t1").unwrap()), None);

        let small = validate_simplex_labels(&g, &["c1", "c2"]).unwrap();
        assert!(PantsDecomposition::new(&g, small).is_err());
    }
}
