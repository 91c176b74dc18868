//! The right-angled Coxeter group of a curve system.
//!
//! Every curve is a generator of order two. Disjoint curves commute
//! (`m = 2`); intersecting curves satisfy no relation (`m = infinity`).
//! Group elements are represented by canonical normal forms: a reduced word
//! (no letter cancels through commuting letters) that is lexicographically
//! least among all commutation-equivalent orderings. Two words define the
//! same element iff their normal forms are letter-identical, because reduced
//! words in a right-angled group differ by commutations only.

use crate::curve_complex::{Curve, IntersectionGraph, Simplex};
use crate::error::{Error, Result};

/// Coxeter matrix entry. Infinity is a variant, never a sentinel value.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CoxeterEntry {
    One,
    Two,
    Infinity,
}

/// Zero-cost view of an [`IntersectionGraph`] as a Coxeter matrix.
#[derive(Clone, Copy)]
pub struct CoxeterMatrix<'a> {
    graph: &'a IntersectionGraph,
}

pub fn coxeter_matrix(graph: &IntersectionGraph) -> CoxeterMatrix<'_> {
    CoxeterMatrix { graph }
}

impl<'a> CoxeterMatrix<'a> {
    pub fn entry(&self, s: Curve, t: Curve) -> CoxeterEntry {
        if s == t {
            CoxeterEntry::One
        } else if self.graph.intersects(s, t) {
            CoxeterEntry::Infinity
        } else {
            CoxeterEntry::Two
        }
    }

    pub fn entry_by_label(&self, s: &str, t: &str) -> Result<CoxeterEntry> {
        Ok(self.entry(self.graph.curve(s)?, self.graph.curve(t)?))
    }

    pub fn graph(&self) -> &'a IntersectionGraph {
        self.graph
    }
}

/// Canonical representative of a group element.
///
/// Invariants: `letters` is reduced and is the lexicographically least word
/// in its commutation class; `graph_id` ties the element to its group.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct NormalForm {
    graph_id: u64,
    letters: Vec<Curve>,
}

impl NormalForm {
    pub fn identity(graph: &IntersectionGraph) -> Self {
        Self {
            graph_id: graph.id(),
            letters: Vec::new(),
        }
    }

    pub fn letters(&self) -> &[Curve] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn graph_id(&self) -> u64 {
        self.graph_id
    }

    /// Bit mask of letters occurring in the word.
    pub fn support_mask(&self) -> u64 {
        self.letters.iter().fold(0, |m, c| m | (1u64 << c.index()))
    }

    pub fn labels<'g>(&self, graph: &'g IntersectionGraph) -> Vec<&'g str> {
        self.letters.iter().map(|&c| graph.label(c)).collect()
    }
}

pub fn word_from_labels(graph: &IntersectionGraph, labels: &[&str]) -> Result<Vec<Curve>> {
    labels.iter().map(|l| graph.curve(l)).collect()
}

/// Reduces `word` and canonicalizes the letter order.
pub fn normal_form(graph: &IntersectionGraph, word: &[Curve]) -> NormalForm {
    let mut reduced: Vec<Curve> = Vec::with_capacity(word.len());
    for &x in word {
        assert!(graph.contains(x), "letter outside the curve system");
        push_reduce(graph, &mut reduced, x);
    }
    NormalForm {
        graph_id: graph.id(),
        letters: lex_min_linearization(graph, &reduced),
    }
}

/// Appends `x` to the reduced word `out`, cancelling it against an equal
/// letter reachable through commuting letters if one exists. Keeps `out`
/// reduced: a cancellation deletes a letter of a reduced word, and a push is
/// blocked from any cancellation by the first non-commuting letter met.
fn push_reduce(graph: &IntersectionGraph, out: &mut Vec<Curve>, x: Curve) {
    for k in (0..out.len()).rev() {
        if out[k] == x {
            out.remove(k);
            return;
        }
        if graph.intersects(out[k], x) {
            break;
        }
    }
    out.push(x);
}

/// Lexicographically least ordering of a reduced word within its commutation
/// class. Positions are dependent iff their letters are equal or do not
/// commute; any linear extension of that order is a commutation-equivalent
/// word, and the greedy smallest-letter extension is the least one.
fn lex_min_linearization(graph: &IntersectionGraph, word: &[Curve]) -> Vec<Curve> {
    let n = word.len();
    let mut used = vec![false; n];
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best: Option<usize> = None;
        'cand: for j in 0..n {
            if used[j] {
                continue;
            }
            for i in 0..j {
                if !used[i] && (word[i] == word[j] || graph.intersects(word[i], word[j])) {
                    continue 'cand;
                }
            }
            if best.map_or(true, |b| word[j] < word[b]) {
                best = Some(j);
            }
        }
        let j = best.expect("dependence order always has a minimal position");
        used[j] = true;
        out.push(word[j]);
    }
    out
}

fn check_graph(graph: &IntersectionGraph, nf: &NormalForm) -> Result<()> {
    if nf.graph_id() != graph.id() {
        return Err(Error::GraphMismatch(
            "normal form belongs to a different curve system".into(),
        ));
    }
    Ok(())
}

pub fn multiply(graph: &IntersectionGraph, a: &NormalForm, b: &NormalForm) -> Result<NormalForm> {
    check_graph(graph, a)?;
    check_graph(graph, b)?;
    let mut word = Vec::with_capacity(a.len() + b.len());
    word.extend_from_slice(a.letters());
    word.extend_from_slice(b.letters());
    Ok(normal_form(graph, &word))
}

/// Inverse by letter reversal; every generator is an involution.
pub fn inverse(graph: &IntersectionGraph, a: &NormalForm) -> Result<NormalForm> {
    check_graph(graph, a)?;
    let word: Vec<Curve> = a.letters().iter().rev().copied().collect();
    Ok(normal_form(graph, &word))
}

/// True iff the element lies in the parabolic subgroup generated by `sigma`.
/// In the right-angled case, normal forms of parabolic elements use only
/// parabolic letters, so letter support decides membership.
pub fn in_parabolic(w: &NormalForm, sigma: &Simplex) -> bool {
    assert_eq!(w.graph_id(), sigma.graph_id(), "mixed curve systems");
    let sigma_mask = sigma
        .members()
        .iter()
        .fold(0u64, |m, c| m | (1u64 << c.index()));
    w.support_mask() & !sigma_mask == 0
}

/// The unique minimal-length representative of the coset `w * W_sigma`,
/// found by stripping right descents lying in `sigma`.
pub fn coset_rep(graph: &IntersectionGraph, w: &NormalForm, sigma: &Simplex) -> Result<NormalForm> {
    check_graph(graph, w)?;
    if sigma.graph_id() != graph.id() {
        return Err(Error::GraphMismatch(
            "simplex belongs to a different curve system".into(),
        ));
    }
    let mut cur = w.clone();
    'outer: loop {
        for &s in sigma.members() {
            let gen = NormalForm {
                graph_id: graph.id(),
                letters: vec![s],
            };
            let next = multiply(graph, &cur, &gen)?;
            if next.len() < cur.len() {
                cur = next;
                continue 'outer;
            }
        }
        return Ok(cur);
    }
}

/// Order of the parabolic subgroup `W_sigma`, always `2^|sigma|` because the
/// generators of a simplex pairwise commute.
pub fn parabolic_order(sigma: &Simplex) -> u128 {
    1u128 << sigma.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve_complex::validate_simplex_labels;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

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

    fn nf_labels(g: &IntersectionGraph, labels: &[&str]) -> NormalForm {
        normal_form(g, &word_from_labels(g, labels).unwrap())
    }

    #[test]
    fn matrix_entries() {
        let g = fixture();
        let m = coxeter_matrix(&g);
        assert_eq!(m.entry_by_label("c1", "c1").unwrap(), CoxeterEntry::One);
        assert_eq!(m.entry_by_label("c1", "c2").unwrap(), CoxeterEntry::Two);
        assert_eq!(m.entry_by_label("c1", "t1").unwrap(), CoxeterEntry::Infinity);
        assert_eq!(m.entry_by_label("t1", "c1").unwrap(), CoxeterEntry::Infinity);
        assert!(m.entry_by_label("c1", "zz").is_err());
    }

    #[test]
    fn normal_form_basics() {
        let g = fixture();
        assert!(nf_labels(&g, &["c1", "c1"]).is_identity());
        assert_eq!(nf_labels(&g, &["c2", "c1"]).labels(&g), ["c1", "c2"]);
        // No relation between intersecting curves: alternating words stay put.
        assert_eq!(
            nf_labels(&g, &["c1", "t1", "c1", "t1"]).labels(&g),
            ["c1", "t1", "c1", "t1"]
        );
        // Commute, then cancel.
        assert_eq!(nf_labels(&g, &["c2", "c1", "c2"]).labels(&g), ["c1"]);
    }

    #[test]
    fn group_laws_on_random_words() {
        let g = fixture();
        let all: Vec<Curve> = g.curves().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let len = rng.gen_range(0..9);
            let word: Vec<Curve> = (0..len).map(|_| *all.choose(&mut rng).unwrap()).collect();
            let a = normal_form(&g, &word);
            let ainv = inverse(&g, &a).unwrap();
            assert!(multiply(&g, &a, &ainv).unwrap().is_identity());
            assert!(multiply(&g, &ainv, &a).unwrap().is_identity());

            let id = NormalForm::identity(&g);
            assert_eq!(multiply(&g, &a, &id).unwrap(), a);
            assert_eq!(multiply(&g, &id, &a).unwrap(), a);
        }
        // Associativity on sampled triples.
        for _ in 0..50 {
            let mut w = || {
                let len = rng.gen_range(0..6);
                let word: Vec<Curve> = (0..len).map(|_| *all.choose(&mut rng).unwrap()).collect();
                normal_form(&g, &word)
            };
            let (a, b, c) = (w(), w(), w());
            let ab_c = multiply(&g, &multiply(&g, &a, &b).unwrap(), &c).unwrap();
            let a_bc = multiply(&g, &a, &multiply(&g, &b, &c).unwrap()).unwrap();
            assert_eq!(ab_c, a_bc);
        }
    }

    #[test]
    fn infinite_dihedral_words_stay_distinct() {
        let g = fixture();
        let mut seen = std::collections::HashSet::new();
        let mut word = Vec::new();
        for n in 1..=6 {
            word.push(g.curve("c1").unwrap());
            word.push(g.curve("t1").unwrap());
            let nf = normal_form(&g, &word);
            assert_eq!(nf.len(), 2 * n);
            assert!(seen.insert(nf));
        }
    }

    #[test]
    fn parabolic_membership() {
        let g = fixture();
        let sigma = validate_simplex_labels(&g, &["c1", "c2", "c3"]).unwrap();
        assert!(in_parabolic(&nf_labels(&g, &["c1", "c2"]), &sigma));
        assert!(in_parabolic(&NormalForm::identity(&g), &sigma));
        let single = validate_simplex_labels(&g, &["c1"]).unwrap();
        assert!(!in_parabolic(&nf_labels(&g, &["t1"]), &single));
    }

    #[test]
    fn coset_rep_examples_and_idempotence() {
        let g = fixture();
        let sigma = validate_simplex_labels(&g, &["c1"]).unwrap();
        assert!(coset_rep(&g, &nf_labels(&g, &["c1"]), &sigma)
            .unwrap()
            .is_identity());
        assert_eq!(
            coset_rep(&g, &nf_labels(&g, &["t1", "c1"]), &sigma)
                .unwrap()
                .labels(&g),
            ["t1"]
        );
        assert!(coset_rep(&g, &NormalForm::identity(&g), &sigma)
            .unwrap()
            .is_identity());

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let all: Vec<Curve> = g.curves().collect();
        for _ in 0..100 {
            let len = rng.gen_range(0..8);
            let word: Vec<Curve> = (0..len).map(|_| *all.choose(&mut rng).unwrap()).collect();
            let w = normal_form(&g, &word);
            let rep = coset_rep(&g, &w, &sigma).unwrap();
            assert_eq!(coset_rep(&g, &rep, &sigma).unwrap(), rep);
            // w and rep differ by right multiplication inside W_sigma.
            let diff = multiply(&g, &inverse(&g, &rep).unwrap(), &w).unwrap();
            assert!(in_parabolic(&diff, &sigma));
        }
    }

    /// Brute-force oracle: the coset w*W_sigma has 2^|sigma| members, namely
    /// w times each subset product. The representative must be the unique
    /// shortest, with lex order breaking no ties (none exist).
    #[test]
    fn coset_rep_matches_subset_enumeration() {
        let g = fixture();
        let sigma = validate_simplex_labels(&g, &["c1", "c2", "c3"]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let all: Vec<Curve> = g.curves().collect();
        for _ in 0..60 {
            let len = rng.gen_range(0..8);
            let word: Vec<Curve> = (0..len).map(|_| *all.choose(&mut rng).unwrap()).collect();
            let w = normal_form(&g, &word);

            let mut best: Option<NormalForm> = None;
            for mask in 0u32..(1 << sigma.len()) {
                let mut u = w.clone();
                for (bit, &s) in sigma.members().iter().enumerate() {
                    if mask & (1 << bit) != 0 {
                        let gen = normal_form(&g, &[s]);
                        u = multiply(&g, &u, &gen).unwrap();
                    }
                }
                let better = match &best {
                    None => true,
                    Some(b) => {
                        (u.len(), u.letters().to_vec()) < (b.len(), b.letters().to_vec())
                    }
                };
                if better {
                    best = Some(u);
                }
            }
            assert_eq!(coset_rep(&g, &w, &sigma).unwrap(), best.unwrap());
        }
    }

    #[test]
    fn coset_counting_on_closed_truncation() {
        let g = fixture();
        let sigma = validate_simplex_labels(&g, &["c1", "c2"]).unwrap();
        let all: Vec<Curve> = g.curves().collect();

        // All elements of length <= 4, then closed under right W_sigma
        // multiplication.
        let mut elements = std::collections::HashSet::new();
        let mut frontier = vec![NormalForm::identity(&g)];
        elements.insert(NormalForm::identity(&g));
        for _ in 0..4 {
            let mut next = Vec::new();
            for w in &frontier {
                for &s in &all {
                    let gen = normal_form(&g, &[s]);
                    let u = multiply(&g, w, &gen).unwrap();
                    if elements.insert(u.clone()) {
                        next.push(u);
                    }
                }
            }
            frontier = next;
        }
        let snapshot: Vec<NormalForm> = elements.iter().cloned().collect();
        for w in snapshot {
            for mask in 0u32..(1 << sigma.len()) {
                let mut u = w.clone();
                for (bit, &s) in sigma.members().iter().enumerate() {
                    if mask & (1 << bit) != 0 {
                        let gen = normal_form(&g, &[s]);
                        u = multiply(&g, &u, &gen).unwrap();
                    }
                }
                elements.insert(u);
            }
        }

        let reps: std::collections::HashSet<NormalForm> = elements
            .iter()
            .map(|w| coset_rep(&g, w, &sigma).unwrap())
            .collect();
        assert_eq!(
            reps.len() as u128 * parabolic_order(&sigma),
            elements.len() as u128
        );
    }

    #[test]
    fn parabolic_orders() {
        let g = fixture();
        assert_eq!(parabolic_order(&Simplex::empty(&g)), 1);
        assert_eq!(
            parabolic_order(&validate_simplex_labels(&g, &["c1"]).unwrap()),
            2
        );
        assert_eq!(
            parabolic_order(&validate_simplex_labels(&g, &["c1", "c2", "c3"]).unwrap()),
            8
        );
    }

    /// A relabeling that preserves the intersection relation maps equal
    /// elements to equal elements, even though it need not preserve the
    /// letter order of canonical forms.
    #[test]
    fn diagram_relabeling_respects_equality() {
        let g = fixture();
        // c1 <-> c3, t1 <-> t3 is an automorphism of the fixture relation.
        let phi = |c: Curve| -> Curve {
            let l = g.label(c);
            let target = match l {
                "c1" => "c3",
                "c3" => "c1",
                "t1" => "t3",
                "t3" => "t1",
                other => other,
            };
            g.curve(target).unwrap()
        };
        let all: Vec<Curve> = g.curves().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let len = rng.gen_range(0..9);
            let word: Vec<Curve> = (0..len).map(|_| *all.choose(&mut rng).unwrap()).collect();
            let image: Vec<Curve> = word.iter().map(|&c| phi(c)).collect();
            let nf_then_map: Vec<Curve> =
                normal_form(&g, &word).letters().iter().map(|&c| phi(c)).collect();
            assert_eq!(normal_form(&g, &image), normal_form(&g, &nf_then_map));
        }
    }
}
