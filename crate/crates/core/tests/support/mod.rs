//! Independent oracles for the integration suites: a polar-grid
//! shortest-path solver for single-cone distances and a reflection
//! representation for the word problem. Neither shares code with the
//! solvers they check.
#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use coxdev::coxeter::normal_form;
use coxdev::curve_complex::{Curve, IntersectionGraph};

/// Arc length of the straight segment in `(r, theta)` coordinates under
/// `dr^2 + r^(2p) dtheta^2`, by 4-point Gauss-Legendre.
fn segment_length(p: f64, a: (f64, f64), b: (f64, f64)) -> f64 {
    const X: [f64; 4] = [
        0.069_431_844_202_973_71,
        0.330_009_478_207_571_9,
        0.669_990_521_792_428_1,
        0.930_568_155_797_026_3,
    ];
    const W: [f64; 4] = [
        0.173_927_422_568_726_9,
        0.326_072_577_431_273_1,
        0.326_072_577_431_273_1,
        0.173_927_422_568_726_9,
    ];
    let dr = b.0 - a.0;
    let dth = b.1 - a.1;
    let mut total = 0.0;
    for (&x, &w) in X.iter().zip(&W) {
        let r = a.0 + x * dr;
        total += w * (dr * dr + (r.powf(p).powi(2)) * dth * dth).sqrt();
    }
    total
}

struct HeapEntry {
    dist: f64,
    node: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.dist == other.dist && self.node == other.node
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap on distance.
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Same-sheet distance on one cone `dr^2 + r^(2p) dtheta^2` by Dijkstra on
/// a polar grid (radial, angular, and diagonal edges) followed by a
/// Gauss-Seidel polish of the polyline's radii on a uniform angle grid.
/// Grid parameters trade runtime for accuracy; the polish removes the
/// first-order angular quantization error, so two moderate resolutions
/// agreeing certifies the value.
pub fn cone_polar_oracle(
    p: f64,
    r1: f64,
    theta1: f64,
    r2: f64,
    theta2: f64,
    n_r: usize,
    n_theta: usize,
) -> f64 {
    assert!(r1 >= 0.0 && r2 >= 0.0);
    if (theta1 - theta2).abs() == 0.0 || r1 == 0.0 || r2 == 0.0 {
        // Radial moves are free of angular cost; through the vertex the
        // collapsed circle contributes nothing.
        return if r1 == 0.0 || r2 == 0.0 {
            r1 + r2
        } else {
            (r1 - r2).abs()
        };
    }
    let r_max = r1.max(r2);

    // Radial levels clustered toward the vertex, endpoint radii inserted
    // exactly.
    let mut r_levels: Vec<f64> = (0..=n_r)
        .map(|j| r_max * (j as f64 / n_r as f64).powf(1.5))
        .collect();
    r_levels.push(r1);
    r_levels.push(r2);
    r_levels.sort_by(f64::total_cmp);
    r_levels.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * r_max);
    let theta_levels: Vec<f64> = (0..=n_theta)
        .map(|k| theta1 + (theta2 - theta1) * k as f64 / n_theta as f64)
        .collect();

    let nr = r_levels.len();
    let nt = theta_levels.len();
    // Node 0 is the vertex (all angles coincide at r = 0); ring j >= 1 uses
    // radius r_levels[j].
    let id = |j: usize, k: usize| -> usize {
        if j == 0 {
            0
        } else {
            1 + (j - 1) * nt + k
        }
    };
    let n_nodes = 1 + (nr - 1) * nt;
    let coord = |j: usize, k: usize| (r_levels[j], theta_levels[k]);

    let level_of = |r: f64| -> usize {
        r_levels
            .iter()
            .position(|&x| (x - r).abs() <= 1e-12 * (1.0 + r_max))
            .expect("endpoint radius was inserted")
    };
    let start = id(level_of(r1), 0);
    let goal = id(level_of(r2), nt - 1);

    let mut dist = vec![f64::INFINITY; n_nodes];
    let mut prev = vec![usize::MAX; n_nodes];
    let mut heap = BinaryHeap::new();
    dist[start] = 0.0;
    heap.push(HeapEntry {
        dist: 0.0,
        node: start,
    });
    let mut neighbors = Vec::with_capacity(8);
    while let Some(HeapEntry { dist: d, node }) = heap.pop() {
        if d > dist[node] {
            continue;
        }
        if node == goal {
            break;
        }
        neighbors.clear();
        if node == 0 {
            for k in 0..nt {
                neighbors.push((id(1, k), r_levels[1]));
            }
        } else {
            let j = 1 + (node - 1) / nt;
            let k = (node - 1) % nt;
            let here = coord(j, k);
            if j == 1 {
                neighbors.push((0, r_levels[1]));
            }
            let mut push = |jj: usize, kk: usize| {
                let there = coord(jj, kk);
                neighbors.push((id(jj, kk), segment_length(p, here, there)));
            };
            if j > 1 {
                push(j - 1, k);
                if k > 0 {
                    push(j - 1, k - 1);
                }
                if k + 1 < nt {
                    push(j - 1, k + 1);
                }
            }
            if j + 1 < nr {
                push(j + 1, k);
                if k > 0 {
                    push(j + 1, k - 1);
                }
                if k + 1 < nt {
                    push(j + 1, k + 1);
                }
            }
            if k > 0 {
                push(j, k - 1);
            }
            if k + 1 < nt {
                push(j, k + 1);
            }
        }
        for &(next, w) in &neighbors {
            let nd = d + w;
            if nd < dist[next] {
                dist[next] = nd;
                prev[next] = node;
                heap.push(HeapEntry {
                    dist: nd,
                    node: next,
                });
            }
        }
    }

    // Walk the tree back and record the radius profile over the angle grid.
    let mut path = Vec::new();
    let mut node = goal;
    while node != usize::MAX {
        if node == 0 {
            path.push((0.0, f64::NAN));
        } else {
            let j = 1 + (node - 1) / nt;
            let k = (node - 1) % nt;
            path.push(coord(j, k));
        }
        node = prev[node];
    }
    path.reverse();

    // Radii at each angle level, from the first path segment spanning it.
    let span = theta2 - theta1;
    let frac = |theta: f64| (theta - theta1) / span;
    let mut radii = vec![f64::NAN; nt];
    radii[0] = r1;
    radii[nt - 1] = r2;
    for w in path.windows(2) {
        let (fa, fb) = (frac(w[0].1), frac(w[1].1));
        for (k, radius) in radii.iter_mut().enumerate() {
            if !radius.is_nan() {
                continue;
            }
            let fk = k as f64 / (nt - 1) as f64;
            let (lo, hi) = if fa <= fb { (fa, fb) } else { (fb, fa) };
            if fk >= lo - 1e-12 && fk <= hi + 1e-12 {
                let t = if (fb - fa).abs() < 1e-12 {
                    0.0
                } else {
                    (fk - fa) / (fb - fa)
                };
                *radius = w[0].0 + t * (w[1].0 - w[0].0);
            }
        }
    }
    // A vertex visit leaves NaNs where the path jumped angles; fill by
    // nearest known level.
    for k in 1..nt {
        if radii[k].is_nan() {
            radii[k] = radii[k - 1];
        }
    }

    // Polish the radius profile by Newton's method on the interior radii.
    // The quadrature length of each segment is a norm of (dr, r^p dtheta)
    // terms, so the objective is convex in the radii and the exact
    // tridiagonal Hessian is positive semidefinite; full Newton steps with
    // a light Levenberg fallback converge quadratically.
    let thetas: Vec<f64> = (0..nt)
        .map(|k| theta1 + span * k as f64 / (nt - 1) as f64)
        .collect();
    let length = |radii: &[f64]| -> f64 {
        radii
            .windows(2)
            .zip(thetas.windows(2))
            .map(|(r, t)| segment_length(p, (r[0], t[0]), (r[1], t[1])))
            .sum()
    };
    let m = nt - 2;
    if m == 0 {
        return length(&radii);
    }
    let mut total = length(&radii);
    let mut damping = 0.0f64;
    for _ in 0..80 {
        let mut grad = vec![0.0; m];
        let mut diag = vec![0.0; m];
        let mut off = vec![0.0; m.saturating_sub(1)];
        for k in 0..nt - 1 {
            let t = thetas[k + 1] - thetas[k];
            let d = segment_derivatives(p, radii[k], radii[k + 1], t);
            if k >= 1 {
                grad[k - 1] += d.da;
                diag[k - 1] += d.daa;
            }
            if k + 1 <= m {
                grad[k] += d.db;
                diag[k] += d.dbb;
            }
            if k >= 1 && k + 1 <= m {
                off[k - 1] += d.dab;
            }
        }
        let gnorm = grad.iter().fold(0.0f64, |a, g| a.max(g.abs()));
        if gnorm <= 1e-13 * (1.0 + total) {
            break;
        }
        // Thomas solve of (H + damping I) step = grad, retried with more
        // damping until the step actually shortens the polyline.
        let mut improved = false;
        for _ in 0..20 {
            let mut c = vec![0.0; m];
            let mut d = vec![0.0; m];
            let mut ok = true;
            for i in 0..m {
                let b = diag[i] + damping;
                let (a_prev, c_prev, d_prev) = if i == 0 {
                    (0.0, 0.0, 0.0)
                } else {
                    (off[i - 1], c[i - 1], d[i - 1])
                };
                let denom = b - a_prev * c_prev;
                if !(denom.abs() > 1e-300) {
                    ok = false;
                    break;
                }
                c[i] = if i + 1 < m { off[i] / denom } else { 0.0 };
                d[i] = (grad[i] - a_prev * d_prev) / denom;
            }
            if ok {
                let mut step = vec![0.0; m];
                step[m - 1] = d[m - 1];
                for i in (0..m - 1).rev() {
                    step[i] = d[i] - c[i] * step[i + 1];
                }
                let mut candidate = radii.clone();
                for i in 0..m {
                    candidate[i + 1] = (radii[i + 1] - step[i]).max(0.0);
                }
                let new_total = length(&candidate);
                if new_total < total {
                    radii = candidate;
                    total = new_total;
                    damping = 0.0;
                    improved = true;
                    break;
                }
            }
            damping = if damping == 0.0 { 1e-10 } else { damping * 10.0 };
        }
        if !improved {
            break;
        }
    }
    total
}

struct SegmentDerivs {
    da: f64,
    db: f64,
    daa: f64,
    dab: f64,
    dbb: f64,
}

/// Exact first and second derivatives of the Gauss-Legendre segment
/// length in the endpoint radii `a`, `b` at fixed angle step `t`.
fn segment_derivatives(p: f64, a: f64, b: f64, t: f64) -> SegmentDerivs {
    const X: [f64; 4] = [
        0.069_431_844_202_973_71,
        0.330_009_478_207_571_9,
        0.669_990_521_792_428_1,
        0.930_568_155_797_026_3,
    ];
    const W: [f64; 4] = [
        0.173_927_422_568_726_9,
        0.326_072_577_431_273_1,
        0.326_072_577_431_273_1,
        0.173_927_422_568_726_9,
    ];
    let dr = b - a;
    let t2 = t * t;
    let mut out = SegmentDerivs { da: 0.0, db: 0.0, daa: 0.0, dab: 0.0, dbb: 0.0 };
    for (&x, &w) in X.iter().zip(&W) {
        let r = a + x * dr;
        let rp1 = r.powf(2.0 * p - 1.0);
        let rp2 = if r == 0.0 { 0.0 } else { rp1 / r * (2.0 * p - 1.0) } * 2.0 * p;
        let g = (dr * dr + rp1 * r * t2).sqrt().max(1e-300);
        // u = dr^2 + r^(2p) t^2, g = sqrt(u); chain rule through r and dr.
        let ua = -2.0 * dr + 2.0 * p * rp1 * (1.0 - x) * t2;
        let ub = 2.0 * dr + 2.0 * p * rp1 * x * t2;
        let uaa = 2.0 + rp2 * (1.0 - x) * (1.0 - x) * t2;
        let ubb = 2.0 + rp2 * x * x * t2;
        let uab = -2.0 + rp2 * x * (1.0 - x) * t2;
        out.da += w * ua / (2.0 * g);
        out.db += w * ub / (2.0 * g);
        out.daa += w * (uaa / (2.0 * g) - ua * ua / (4.0 * g * g * g));
        out.dbb += w * (ubb / (2.0 * g) - ub * ub / (4.0 * g * g * g));
        out.dab += w * (uab / (2.0 * g) - ua * ub / (4.0 * g * g * g));
    }
    out
}

/// Reflection representation with integer matrices: `s` negates `e_s`,
/// fixes `e_t` for commuting `t`, and sends `e_t` to `e_t + 2 e_s` for
/// intersecting `t`. Faithful, so matrix equality decides word equality.
pub struct TitsOracle {
    n: usize,
    gens: Vec<Vec<i64>>,
}

impl TitsOracle {
    pub fn new(graph: &IntersectionGraph) -> Self {
        let n = graph.curve_count();
        let gens = graph
            .curves()
            .map(|s| {
                // Column t holds the image of e_t.
                let mut m = vec![0i64; n * n];
                for t in graph.curves() {
                    let (ti, si) = (t.index(), s.index());
                    if t == s {
                        m[si * n + ti] = -1;
                    } else {
                        m[ti * n + ti] = 1;
                        if graph.intersects(s, t) {
                            m[si * n + ti] = 2;
                        }
                    }
                }
                m
            })
            .collect();
        Self { n, gens }
    }

    pub fn identity(&self) -> Vec<i64> {
        let mut m = vec![0i64; self.n * self.n];
        for i in 0..self.n {
            m[i * self.n + i] = 1;
        }
        m
    }

    /// `m` followed by the reflection `s` (append a letter on the right).
    pub fn extend(&self, m: &[i64], s: Curve) -> Vec<i64> {
        let n = self.n;
        let g = &self.gens[s.index()];
        let mut out = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = m[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * g[k * n + j];
                }
            }
        }
        out
    }

    pub fn matrix(&self, letters: &[Curve]) -> Vec<i64> {
        let mut m = self.identity();
        for &s in letters {
            m = self.extend(&m, s);
        }
        m
    }
}

/// Enumerates every word of length at most `max_len` and checks that
/// normal-form equality coincides with equality in the reflection
/// representation. Returns (words visited, distinct elements).
pub fn check_word_problem(graph: &IntersectionGraph, max_len: usize) -> (usize, usize) {
    let oracle = TitsOracle::new(graph);
    let curves: Vec<Curve> = graph.curves().collect();
    let mut by_matrix: HashMap<Vec<i64>, Vec<Curve>> = HashMap::new();
    let mut by_nf: HashMap<Vec<Curve>, Vec<i64>> = HashMap::new();
    let mut words = 0usize;

    struct State<'a> {
        graph: &'a IntersectionGraph,
        oracle: &'a TitsOracle,
        curves: &'a [Curve],
        by_matrix: &'a mut HashMap<Vec<i64>, Vec<Curve>>,
        by_nf: &'a mut HashMap<Vec<Curve>, Vec<i64>>,
        words: &'a mut usize,
        letters: Vec<Curve>,
    }

    fn visit(state: &mut State<'_>, matrix: &[i64], depth_left: usize) {
        *state.words += 1;
        let nf = normal_form(state.graph, &state.letters);
        let nf_letters = nf.letters().to_vec();
        match state.by_matrix.get(matrix) {
            Some(stored) => assert_eq!(
                stored, &nf_letters,
                "words with equal matrices got different normal forms"
            ),
            None => {
                // The representative must be the same group element.
                assert_eq!(
                    state.oracle.matrix(&nf_letters),
                    matrix,
                    "normal form is a different element than its word"
                );
                if let Some(prior) = state.by_nf.get(&nf_letters) {
                    assert_eq!(
                        prior, matrix,
                        "one normal form names two distinct elements"
                    );
                }
                state.by_matrix.insert(matrix.to_vec(), nf_letters.clone());
                state.by_nf.insert(nf_letters, matrix.to_vec());
            }
        }
        if depth_left == 0 {
            return;
        }
        for i in 0..state.curves.len() {
            let s = state.curves[i];
            let next = state.oracle.extend(matrix, s);
            state.letters.push(s);
            visit(state, &next, depth_left - 1);
            state.letters.pop();
        }
    }

    let identity = oracle.identity();
    let mut state = State {
        graph,
        oracle: &oracle,
        curves: &curves,
        by_matrix: &mut by_matrix,
        by_nf: &mut by_nf,
        words: &mut words,
        letters: Vec::new(),
    };
    visit(&mut state, &identity, max_len);
    let elements = by_matrix.len();
    (words, elements)
}
