//! Comparison geometry on the developed model: triangle comparison
//! residuals, Alexandrov angles, circumcenters with angle-criterion
//! certificates, Caratheodory decompositions in tangent cones, and the
//! enclosing-radius inequality audit that detects finite rank.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::development::DevPoint;
use crate::error::{Error, Result};
use crate::model_metric::{
    dev_point_from_model, exp_map, log_map, model_distance, model_geodesic_path, LogComp,
    LogVector, ModelChart, ModelPoint,
};
use crate::sampling::standard_normal;
use crate::tolerances::{
    ANGLE_FLOOR_T, CHAIN_TOL, CIRCUMSET_BAND, ITER_CAP, RADIUS_IMPROVEMENT, RESTART_TOL,
};

/// Farthest-point warm-start steps before the tangent-space polish takes
/// over. The harmonic schedule alone converges too slowly to certify
/// restart agreement at 1e-6 of the radius.
const FP_WARMUP: usize = 64;

/// A finite generating set of points, standing in for the closed convex set
/// it spans. Nonempty, deduplicated under canonical equality.
#[derive(Clone, Debug)]
pub struct PointSet {
    points: Vec<DevPoint>,
}

impl PointSet {
    pub fn new(points: Vec<DevPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::ConstraintViolated("point set is empty".into()));
        }
        let mut dedup: Vec<DevPoint> = Vec::with_capacity(points.len());
        for p in points {
            if !dedup.contains(&p) {
                dedup.push(p);
            }
        }
        Ok(PointSet { points: dedup })
    }

    pub fn points(&self) -> &[DevPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// The point the given fraction of the way along the geodesic from `a` to
/// `b`.
pub fn geodesic_point(chart: &ModelChart, a: &DevPoint, b: &DevPoint, frac: f64) -> Result<DevPoint> {
    if !(0.0..=1.0).contains(&frac) {
        return Err(Error::ConstraintViolated(format!(
            "geodesic fraction must lie in [0, 1], got {frac}"
        )));
    }
    let geo = model_geodesic_path(chart, a, b)?;
    if geo.length() == 0.0 || frac == 0.0 {
        return Ok(a.clone());
    }
    dev_point_from_model(chart, &geo.point_at(frac * geo.length()))
}

/// Comparison-triangle defect at parameter `lambda` of the side `x0 -> x1`,
/// seen from `z`:
///
///   d_lambda^2 - [(1 - lambda) d_0^2 + lambda d_1^2 - lambda (1 - lambda) L^2]
///
/// Nonpositive (up to solver tolerance) exactly when the triangle is no
/// fatter than its Euclidean comparison triangle.
pub fn triangle_comparison_residual(
    chart: &ModelChart,
    z: &DevPoint,
    x0: &DevPoint,
    x1: &DevPoint,
    lambda: f64,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::ConstraintViolated(format!(
            "comparison parameter must lie in [0, 1], got {lambda}"
        )));
    }
    let l = model_distance(chart, x0, x1)?;
    let d0 = model_distance(chart, z, x0)?;
    let d1 = model_distance(chart, z, x1)?;
    let side = geodesic_point(chart, x0, x1, lambda)?;
    let dl = model_distance(chart, z, &side)?;
    Ok(dl * dl - ((1.0 - lambda) * d0 * d0 + lambda * d1 * d1 - lambda * (1.0 - lambda) * l * l))
}

/// Euclidean comparison angle at `q` for leg parameter `t`: both geodesics
/// toward `p1`, `p2` are followed for arclength `t` and the chord between
/// the endpoints is compared against an isoceles Euclidean triangle.
pub fn comparison_angle(
    chart: &ModelChart,
    q: &DevPoint,
    p1: &DevPoint,
    p2: &DevPoint,
    t: f64,
) -> Result<f64> {
    let d1 = model_distance(chart, q, p1)?;
    let d2 = model_distance(chart, q, p2)?;
    if d1 == 0.0 || d2 == 0.0 {
        return Err(Error::ConstraintViolated(
            "comparison angle needs both legs to have positive length".into(),
        ));
    }
    if t <= 0.0 || t > d1.min(d2) {
        return Err(Error::ConstraintViolated(format!(
            "leg parameter {t} outside (0, {}]",
            d1.min(d2)
        )));
    }
    let g1 = geodesic_point(chart, q, p1, t / d1)?;
    let g2 = geodesic_point(chart, q, p2, t / d2)?;
    let chord = model_distance(chart, &g1, &g2)?;
    Ok(2.0 * (chord / (2.0 * t)).clamp(0.0, 1.0).asin())
}

fn vector_angle(u: &LogVector, v: &LogVector) -> Result<f64> {
    let (nu, nv) = (u.norm(), v.norm());
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::ConstraintViolated(
            "angle against a zero tangent vector".into(),
        ));
    }
    Ok((u.dot(v)? / (nu * nv)).clamp(-1.0, 1.0).acos())
}

/// Angle at `q` between the geodesics toward `p1` and `p2`, in [0, pi].
///
/// The returned value is the tangent-space angle, which is the limit the
/// comparison angles decrease to. The comparison-angle sequence (halving leg
/// parameters down to [`ANGLE_FLOOR_T`], with Aitken extrapolation) and the
/// one-sided difference quotient of the distance function are both computed
/// as cross-checks: near 0 and pi the raw limit loses half the working
/// digits to arcsin noise amplification, so it cannot serve as the answer.
pub fn alexandrov_angle(chart: &ModelChart, q: &DevPoint, p1: &DevPoint, p2: &DevPoint) -> Result<f64> {
    let d1 = model_distance(chart, q, p1)?;
    let d2 = model_distance(chart, q, p2)?;
    if d1 == 0.0 || d2 == 0.0 {
        return Err(Error::ConstraintViolated(
            "angle vertex must differ from both endpoints".into(),
        ));
    }
    if model_distance(chart, p1, p2)? == 0.0 {
        return Ok(0.0);
    }
    let u1 = log_map(chart, q, p1)?;
    let u2 = log_map(chart, q, p2)?;
    let exact = vector_angle(&u1, &u2)?;

    let mut estimates: Vec<f64> = Vec::new();
    let mut t = 0.25 * d1.min(d2).min(1.0);
    while t >= ANGLE_FLOOR_T && estimates.len() < 40 {
        let a = comparison_angle(chart, q, p1, p2, t)?;
        if let Some(&prev) = estimates.last() {
            debug_assert!(
                a <= prev + 1e-7,
                "comparison angles must not increase as legs shrink: {a} after {prev}"
            );
            if (a - prev).abs() < 1e-9 {
                estimates.push(a);
                break;
            }
        }
        estimates.push(a);
        t *= 0.5;
    }
    let limit = extrapolate_limit(&estimates);
    debug_assert!(
        (limit - exact).abs() <= 5e-3 + 20.0 * (PI_GUARD - (exact - PI_GUARD).abs()).max(0.0),
        "comparison limit {limit} disagrees with tangent angle {exact}"
    );

    // One-sided difference quotient of s -> d(gamma_1(s), p2) at s = 0.
    let h = (1e-5 * d1.min(1.0)).max(ANGLE_FLOOR_T);
    let moved = geodesic_point(chart, q, p1, h / d1)?;
    let quotient = (d2 - model_distance(chart, &moved, p2)?) / h;
    debug_assert!(
        (quotient - exact.cos()).abs() <= 1e-2,
        "first-variation quotient {quotient} disagrees with cos {}",
        exact.cos()
    );

    Ok(exact)
}

/// Comparison limits within this distance of pi/2 get no extra slack in the
/// cross-check; closer to 0 or pi the arcsin amplification grows.
const PI_GUARD: f64 = std::f64::consts::FRAC_PI_2;

fn extrapolate_limit(seq: &[f64]) -> f64 {
    let n = seq.len();
    if n == 0 {
        return 0.0;
    }
    if n < 3 {
        return seq[n - 1];
    }
    let (a0, a1, a2) = (seq[n - 3], seq[n - 2], seq[n - 1]);
    let denom = a2 - 2.0 * a1 + a0;
    if denom.abs() < 1e-14 {
        return a2;
    }
    let accelerated = a2 - (a2 - a1) * (a2 - a1) / denom;
    accelerated.clamp(0.0, std::f64::consts::PI)
}

/// Result of a circumcenter run.
#[derive(Clone, Debug)]
pub struct CircumData {
    pub center: DevPoint,
    pub radius: f64,
    /// Indices into the defining set of the points within the band
    /// `[R (1 - CIRCUMSET_BAND), R]` of the center.
    pub circumset: Vec<usize>,
    pub iterations: usize,
    /// Largest pairwise distance among the centers found by the independent
    /// restarts.
    pub seed_spread: f64,
}

/// Radius and circumset bookkeeping at an arbitrary candidate center.
pub fn circum_data_at(chart: &ModelChart, set: &PointSet, center: &DevPoint) -> Result<CircumData> {
    let dists: Vec<f64> = set
        .points()
        .iter()
        .map(|p| model_distance(chart, center, p))
        .collect::<Result<_>>()?;
    let radius = dists.iter().copied().fold(0.0, f64::max);
    let cutoff = radius * (1.0 - CIRCUMSET_BAND);
    let circumset = (0..dists.len()).filter(|&i| dists[i] >= cutoff).collect();
    Ok(CircumData {
        center: center.clone(),
        radius,
        circumset,
        iterations: 0,
        seed_spread: 0.0,
    })
}

fn farthest(chart: &ModelChart, x: &DevPoint, pts: &[DevPoint]) -> Result<(usize, f64)> {
    let mut best = (0usize, -1.0);
    for (i, p) in pts.iter().enumerate() {
        let d = model_distance(chart, x, p)?;
        if d > best.1 {
            best = (i, d);
        }
    }
    Ok(best)
}

/// Bound on the twist winding a single polish step may request per factor.
/// Near a wall the angle coordinate costs r^p per radian, so an unbounded
/// tangent step would wind thousands of turns for negligible metric gain
/// while the distance solves pay full price for every turn.
const WIND_CAP: f64 = 50.0;

/// Factors thinner than this trigger a snap-to-wall trial candidate and
/// have their angle slot frozen in the polish model. Below this radius the
/// whole angle circle has circumference under 1e-8, beneath every
/// certificate tolerance in this module.
const THIN_R: f64 = 1e-3;

/// Collapses every sufficiently thin factor of `x` onto its wall and
/// returns the candidate when that does not grow the radius. At a wall the
/// angle coordinate drops out of the chart, which is what lets independent
/// restarts agree exactly when the true center lies on a stratum.
fn snap_to_walls(
    chart: &ModelChart,
    x: &DevPoint,
    pts: &[DevPoint],
    radius: f64,
    iters: &mut usize,
) -> Result<Option<(DevPoint, f64)>> {
    let xm = ModelPoint::of(chart, x)?;
    let thin = |r: f64| r > 0.0 && r <= THIN_R;
    if !xm.factors().iter().any(|f| thin(f.r)) {
        return Ok(None);
    }
    let mut labels = Vec::new();
    let mut coords = Vec::with_capacity(xm.factors().len());
    for (i, f) in xm.factors().iter().enumerate() {
        if f.sheet == crate::model_metric::Sheet::Minus {
            labels.push(chart.graph().label(chart.factor_curve(i)));
        }
        coords.push(if thin(f.r) { (0.0, 0.0) } else { (f.r, f.theta) });
    }
    let snapped = chart.dev_point(&labels, &coords)?;
    let r2 = farthest(chart, &snapped, pts)?.1;
    *iters += 1;
    if r2 <= radius {
        return Ok(Some((snapped, r2)));
    }
    Ok(None)
}

/// One restart of the circumcenter solver: farthest-point steps on the
/// harmonic schedule, then a tangent-space polish. The polish exploits that
/// the Euclidean center of the smallest ball enclosing the log image is the
/// zero vector exactly at the circumcenter, and otherwise points at a strict
/// radius improvement.
fn circumcenter_from(
    chart: &ModelChart,
    pts: &[DevPoint],
    seed: usize,
) -> Result<(DevPoint, f64, usize)> {
    let mut x = pts[seed].clone();
    let mut iters = 0usize;
    for k in 0..FP_WARMUP {
        let (far, r) = farthest(chart, &x, pts)?;
        iters += 1;
        if r <= f64::EPSILON {
            return Ok((x, 0.0, iters));
        }
        x = geodesic_point(chart, &x, &pts[far], 1.0 / (k as f64 + 2.0))?;
    }
    let mut radius = farthest(chart, &x, pts)?.1;
    let mut stall = 0usize;
    loop {
        if iters >= ITER_CAP {
            return Err(Error::SolverNoConvergence(format!(
                "circumcenter stalled at radius {radius:.12e} after {iters} iterations"
            )));
        }
        if let Some((snapped, r2)) = snap_to_walls(chart, &x, pts, radius, &mut iters)? {
            x = snapped;
            radius = r2;
            stall += 1;
            if stall >= 256 {
                return Ok((x, radius, iters));
            }
            continue;
        }
        let logs: Vec<LogVector> = pts
            .iter()
            .map(|p| log_map(chart, &x, p))
            .collect::<Result<_>>()?;
        radius = logs.iter().map(LogVector::norm).fold(0.0, f64::max);
        let xm = ModelPoint::of(chart, &x)?;
        // Angle slots of Plane factors, with the base radius they sit at.
        let mut angle_slots = Vec::new();
        let mut slot = 0usize;
        for (i, comp) in logs[0].comps().iter().enumerate() {
            match comp {
                LogComp::Plane { .. } => {
                    angle_slots.push((slot + 1, xm.factors()[i].r));
                    slot += 2;
                }
                LogComp::Ray { .. } => slot += 1,
            }
        }
        let mut flats: Vec<Vec<f64>> = logs.iter().map(LogVector::flatten).collect();
        // Near a wall the circumferential log coordinate measures winding
        // allowance, not metric displacement, and trusting it stalls the
        // solver. Freeze those slots; the angle they pin down is worth less
        // than THIN_R^3 of distance.
        for f in &mut flats {
            for &(s, r) in &angle_slots {
                if r <= THIN_R {
                    f[s] = 0.0;
                }
            }
        }
        let (ball_center, _) = miniball::min_enclosing_ball(&flats);
        iters += 1;
        let step_norm = ball_center.iter().map(|c| c * c).sum::<f64>().sqrt();
        if step_norm <= 1e-13 * (1.0 + radius) {
            return Ok((x, radius, iters));
        }
        // Damped acceptance on the radius objective. The winding clamp acts
        // on the executed candidate, not the search direction: at small
        // scales it never binds, so the guaranteed descent of the ball
        // center direction survives, while large trial steps cannot spin a
        // factor through more than WIND_CAP radians of metrically flat
        // angle.
        let mut scale = 1.0;
        let mut improved = None;
        for _ in 0..24 {
            let mut scaled: Vec<f64> = ball_center.iter().map(|c| c * scale).collect();
            for &(s, r) in &angle_slots {
                let cap = WIND_CAP * r * r * r;
                scaled[s] = scaled[s].clamp(-cap, cap);
            }
            let step = logs[0].with_flat(&scaled)?;
            let cand = exp_map(chart, &x, &step)?;
            let r2 = farthest(chart, &cand, pts)?.1;
            iters += 1;
            if r2 < radius {
                improved = Some((cand, r2));
                break;
            }
            scale *= 0.5;
        }
        let Some((cand, r2)) = improved else {
            if std::env::var("CC_DEBUG").is_ok() {
                eprintln!(
                    "  exit: line search exhausted, step_norm {step_norm:.3e} center {ball_center:?}"
                );
            }
            return Ok((x, radius, iters));
        };
        let gain = radius - r2;
        x = cand;
        radius = r2;
        if gain < RADIUS_IMPROVEMENT * radius {
            // Radius gains go quadratic in the transverse error well before
            // the center settles; allow a bounded run of low-gain steps so
            // the slow modes contract too.
            stall += 1;
            if stall >= 256 || step_norm <= 1e-12 * (1.0 + radius) {
                return Ok((x, radius, iters));
            }
        } else {
            stall = 0;
        }
    }
}

/// Smallest enclosing ball of the set: minimizes the maximum distance to the
/// generators. Three independent restarts must agree within
/// [`RESTART_TOL`] of the radius, standing in for the uniqueness of the
/// minimizer.
pub fn circumcenter(chart: &ModelChart, set: &PointSet) -> Result<CircumData> {
    let pts = set.points();
    let n = pts.len();
    let mut seeds = vec![0, n / 2, n - 1];
    seeds.dedup();
    let mut runs = Vec::with_capacity(seeds.len());
    let mut iterations = 0usize;
    for s in seeds {
        let run = circumcenter_from(chart, pts, s)?;
        if std::env::var("CC_DEBUG").is_ok() {
            eprintln!(
                "seed {s}: radius {:.12e} iters {} center {:?}",
                run.1,
                run.2,
                ModelPoint::of(chart, &run.0)
            );
        }
        iterations += run.2;
        runs.push(run);
    }
    let best = runs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .map(|(i, _)| i)
        .unwrap();
    let mut spread = 0.0f64;
    for i in 0..runs.len() {
        for j in i + 1..runs.len() {
            spread = spread.max(model_distance(chart, &runs[i].0, &runs[j].0)?);
        }
    }
    let radius = runs[best].1;
    if spread > RESTART_TOL * radius.max(1e-9) {
        return Err(Error::SolverNoConvergence(format!(
            "restart centers disagree by {spread:.3e} at radius {radius:.3e}"
        )));
    }
    let mut data = circum_data_at(chart, set, &runs[best].0)?;
    data.iterations = iterations;
    data.seed_spread = spread;
    Ok(data)
}

/// Minimum over the probe directions of the largest tangent-cone angle from
/// the direction to a circumset member. A genuine circumcenter leaves no
/// direction whose whole circumset view is acute, so certification requires
/// at least `pi/2 - ANGLE_CERT_TOL`.
pub fn angle_criterion(
    chart: &ModelChart,
    data: &CircumData,
    set: &PointSet,
    directions: &[LogVector],
) -> Result<f64> {
    if directions.is_empty() {
        return Err(Error::ConstraintViolated("no probe directions".into()));
    }
    let logs: Vec<LogVector> = data
        .circumset
        .iter()
        .map(|&i| log_map(chart, &data.center, &set.points()[i]))
        .collect::<Result<_>>()?;
    let live: Vec<&LogVector> = logs.iter().filter(|v| v.norm() > 0.0).collect();
    if live.is_empty() {
        // Zero-radius ball: the criterion is vacuous.
        return Ok(std::f64::consts::FRAC_PI_2);
    }
    let mut criterion = f64::INFINITY;
    for u in directions {
        let mut widest = 0.0f64;
        for v in &live {
            widest = widest.max(vector_angle(u, v)?);
        }
        criterion = criterion.min(widest);
    }
    Ok(criterion)
}

/// Probe bundle for the angle criterion: both signs of every tangent
/// coordinate axis, the directions toward the circumset members, directions
/// toward the extra targets, and seeded random directions.
pub fn probe_directions(
    chart: &ModelChart,
    data: &CircumData,
    set: &PointSet,
    extras: &[DevPoint],
    seed: u64,
    n_random: usize,
) -> Result<Vec<LogVector>> {
    let template = log_map(chart, &data.center, &set.points()[0])?;
    let dim = template.dim();
    let mut dirs = Vec::new();
    for d in 0..dim {
        for sign in [1.0, -1.0] {
            let mut flat = vec![0.0; dim];
            flat[d] = sign;
            dirs.push(template.with_flat(&flat)?);
        }
    }
    for &i in &data.circumset {
        let v = log_map(chart, &data.center, &set.points()[i])?;
        if v.norm() > 0.0 {
            dirs.push(v);
        }
    }
    for p in extras {
        let v = log_map(chart, &data.center, p)?;
        if v.norm() > 0.0 {
            dirs.push(v);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n_random {
        let flat: Vec<f64> = (0..dim).map(|_| standard_normal(&mut rng)).collect();
        if flat.iter().map(|c| c * c).sum::<f64>().sqrt() > 1e-9 {
            dirs.push(template.with_flat(&flat)?);
        }
    }
    Ok(dirs)
}

/// Writes the origin as a convex combination of at most k + 1 of the given
/// vectors in R^k. Feasibility is decided by the min-norm point of the
/// hull; an infeasible instance returns the separating functional.
pub fn caratheodory_decompose(
    vectors: &[Vec<f64>],
    tol: f64,
) -> Result<(Vec<usize>, Vec<f64>)> {
    if vectors.is_empty() {
        return Err(Error::ConstraintViolated("no vectors".into()));
    }
    let k = vectors[0].len();
    if k == 0 || vectors.iter().any(|v| v.len() != k) {
        return Err(Error::ConstraintViolated(
            "vectors must share a positive dimension".into(),
        ));
    }
    if tol <= 0.0 {
        return Err(Error::ConstraintViolated("tolerance must be positive".into()));
    }
    let scale = 1.0 + vectors.iter().map(|v| norm(v)).fold(0.0, f64::max);
    let (w, support, weights) = min_norm_point(vectors);
    let wn = norm(&w);
    if wn > tol * scale {
        let margin = vectors.iter().map(|v| dot(&w, v)).fold(f64::INFINITY, f64::min);
        return Err(Error::Infeasible(format!(
            "origin outside the hull: the functional {w:?} has <w, v> >= {margin:.3e} > 0 on every vector"
        )));
    }
    let (support, weights) = caratheodory_reduce(vectors, support, weights);
    let total: f64 = weights.iter().sum();
    let weights: Vec<f64> = weights.iter().map(|l| l / total).collect();
    let mut residual = vec![0.0; k];
    for (j, &i) in support.iter().enumerate() {
        for c in 0..k {
            residual[c] += weights[j] * vectors[i][c];
        }
    }
    if norm(&residual) > 10.0 * tol * scale {
        return Err(Error::SolverNoConvergence(format!(
            "decomposition residual {:.3e} exceeds tolerance",
            norm(&residual)
        )));
    }
    Ok((support, weights))
}

/// Null-space support reduction: while more than k + 1 vectors carry
/// weight, shift weight along an affine dependency until one drops out.
pub fn caratheodory_reduce(
    vectors: &[Vec<f64>],
    mut support: Vec<usize>,
    mut weights: Vec<f64>,
) -> (Vec<usize>, Vec<f64>) {
    let k = vectors[0].len();
    while support.len() > k + 1 {
        let m = support.len();
        // Rows: the k coordinates, then the affine row of ones.
        let mut rows = vec![vec![0.0; m]; k + 1];
        for (j, &i) in support.iter().enumerate() {
            for c in 0..k {
                rows[c][j] = vectors[i][c];
            }
            rows[k][j] = 1.0;
        }
        let Some(mut mu) = kernel_vector(rows) else {
            break;
        };
        if mu.iter().all(|&c| c <= 0.0) {
            for c in &mut mu {
                *c = -*c;
            }
        }
        let mut t = f64::INFINITY;
        for j in 0..m {
            if mu[j] > 1e-14 {
                t = t.min(weights[j] / mu[j]);
            }
        }
        if !t.is_finite() {
            break;
        }
        for j in 0..m {
            weights[j] -= t * mu[j];
        }
        let keep: Vec<usize> = (0..m).filter(|&j| weights[j] > 1e-12).collect();
        if keep.len() == m {
            break;
        }
        support = keep.iter().map(|&j| support[j]).collect();
        weights = keep.iter().map(|&j| weights[j]).collect();
    }
    (support, weights)
}

/// Wolfe's min-norm-point algorithm over the convex hull. Returns the
/// min-norm point together with its supporting indices and convex weights.
fn min_norm_point(vectors: &[Vec<f64>]) -> (Vec<f64>, Vec<usize>, Vec<f64>) {
    let k = vectors[0].len();
    let start = (0..vectors.len())
        .min_by(|&a, &b| norm(&vectors[a]).total_cmp(&norm(&vectors[b])))
        .unwrap();
    let mut corral = vec![start];
    let mut lam = vec![1.0f64];
    for _ in 0..120 {
        let w = combine(vectors, &corral, &lam, k);
        let wn2 = dot(&w, &w);
        let j = (0..vectors.len())
            .min_by(|&a, &b| dot(&w, &vectors[a]).total_cmp(&dot(&w, &vectors[b])))
            .unwrap();
        if dot(&w, &vectors[j]) >= wn2 - 1e-12 * (1.0 + wn2) || corral.contains(&j) {
            break;
        }
        corral.push(j);
        lam.push(0.0);
        for _ in 0..120 {
            let Some(alpha) = affine_min_norm(vectors, &corral) else {
                break;
            };
            if alpha.iter().all(|&a| a >= 1e-12) {
                lam = alpha;
                break;
            }
            // Step from lam toward alpha until the first weight vanishes.
            let mut theta = 1.0f64;
            for i in 0..lam.len() {
                if alpha[i] < lam[i] {
                    theta = theta.min(lam[i] / (lam[i] - alpha[i]));
                }
            }
            for i in 0..lam.len() {
                lam[i] += theta * (alpha[i] - lam[i]);
            }
            let keep: Vec<usize> = (0..corral.len()).filter(|&i| lam[i] > 1e-12).collect();
            corral = keep.iter().map(|&i| corral[i]).collect();
            lam = keep.iter().map(|&i| lam[i]).collect();
            let total: f64 = lam.iter().sum();
            for l in &mut lam {
                *l /= total;
            }
        }
    }
    let w = combine(vectors, &corral, &lam, k);
    (w, corral, lam)
}

/// Minimizes the norm of an affine combination: KKT system over the Gram
/// matrix of the corral.
fn affine_min_norm(vectors: &[Vec<f64>], corral: &[usize]) -> Option<Vec<f64>> {
    let m = corral.len();
    let mut a = nalgebra::DMatrix::<f64>::zeros(m + 1, m + 1);
    let mut b = nalgebra::DVector::<f64>::zeros(m + 1);
    for i in 0..m {
        for j in 0..m {
            a[(i, j)] = 2.0 * dot(&vectors[corral[i]], &vectors[corral[j]]);
        }
        a[(i, m)] = 1.0;
        a[(m, i)] = 1.0;
    }
    b[m] = 1.0;
    a.lu().solve(&b).map(|x| x.rows(0, m).iter().copied().collect())
}

/// A nonzero kernel vector of the row-listed matrix, by row reduction. The
/// matrix has more columns than rank, so a free column always exists.
fn kernel_vector(mut rows: Vec<Vec<f64>>) -> Option<Vec<f64>> {
    let nr = rows.len();
    let m = rows[0].len();
    let scale = rows
        .iter()
        .flat_map(|r| r.iter().map(|c| c.abs()))
        .fold(1.0, f64::max);
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for c in 0..m {
        if r >= nr {
            break;
        }
        let best = (r..nr).max_by(|&i, &j| rows[i][c].abs().total_cmp(&rows[j][c].abs()))?;
        if rows[best][c].abs() < 1e-12 * scale {
            continue;
        }
        rows.swap(r, best);
        let inv = 1.0 / rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..nr {
            if i != r && rows[i][c] != 0.0 {
                let f = rows[i][c];
                for x in 0..m {
                    rows[i][x] -= f * rows[r][x];
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free = (0..m).find(|c| !pivots.contains(c))?;
    let mut mu = vec![0.0; m];
    mu[free] = 1.0;
    for (i, &pc) in pivots.iter().enumerate() {
        mu[pc] = -rows[i][free];
    }
    Some(mu)
}

/// Outcome of the enclosing-radius inequality check.
#[derive(Clone, Debug)]
pub struct FrReport {
    pub diameter: f64,
    pub radius: f64,
    pub bound: f64,
    pub margin: f64,
    pub pass: bool,
}

/// Checks `R <= sqrt(k / (k + 1)) D / sqrt(2)` for the set, with D the
/// generator diameter and R the certified circumradius.
pub fn fr_check(chart: &ModelChart, set: &PointSet, k: usize) -> Result<FrReport> {
    if k == 0 {
        return Err(Error::ConstraintViolated("rank parameter must be positive".into()));
    }
    let pts = set.points();
    let mut diameter = 0.0f64;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            diameter = diameter.max(model_distance(chart, &pts[i], &pts[j])?);
        }
    }
    let data = circumcenter(chart, set)?;
    let kf = k as f64;
    let bound = (kf / (kf + 1.0)).sqrt() * diameter / std::f64::consts::SQRT_2;
    let margin = bound - data.radius;
    // Slack matches what the restart certificate can actually attest.
    Ok(FrReport {
        diameter,
        radius: data.radius,
        bound,
        margin,
        pass: data.radius <= bound + 1e-8 * (1.0 + diameter),
    })
}

/// Recomputes the inequality chain behind the radius bound from a
/// Caratheodory decomposition with all vectors on the sphere of radius R:
///
///   2 R^2  =  sum_{i != j} l_i l_j |v_i - v_j|^2
///          <= sum_{i != j} l_i l_j D^2  <=  (1 - 1/(k+1)) D^2
///
/// Returns the four chain values after validating the preconditions.
pub fn fr_chain_audit(weights: &[f64], vectors: &[Vec<f64>], diameter: f64) -> Result<[f64; 4]> {
    if weights.len() != vectors.len() || vectors.is_empty() {
        return Err(Error::ConstraintViolated(
            "weights and vectors must be matched and nonempty".into(),
        ));
    }
    let k = vectors[0].len();
    let m = vectors.len();
    if vectors.iter().any(|v| v.len() != k) {
        return Err(Error::ConstraintViolated("mixed vector dimensions".into()));
    }
    if m > k + 1 {
        return Err(Error::ConstraintViolated(format!(
            "support of size {m} exceeds k + 1 = {}",
            k + 1
        )));
    }
    let r = vectors.iter().map(|v| norm(v)).sum::<f64>() / m as f64;
    for v in vectors {
        if (norm(v) - r).abs() > CHAIN_TOL * (1.0 + r) {
            return Err(Error::ConstraintViolated(format!(
                "vector norm {} off the common radius {r}",
                norm(v)
            )));
        }
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > CHAIN_TOL || weights.iter().any(|&l| l < -CHAIN_TOL) {
        return Err(Error::ConstraintViolated(
            "weights must be a convex combination".into(),
        ));
    }
    let mut balance = vec![0.0; k];
    for (l, v) in weights.iter().zip(vectors) {
        for c in 0..k {
            balance[c] += l * v[c];
        }
    }
    if norm(&balance) > CHAIN_TOL * (1.0 + r) {
        return Err(Error::ConstraintViolated(format!(
            "weighted vectors do not balance: |sum| = {:.3e}",
            norm(&balance)
        )));
    }
    let mut pair_sq = 0.0;
    let mut pair_weight = 0.0;
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            let diff_sq: f64 = (0..k)
                .map(|c| (vectors[i][c] - vectors[j][c]).powi(2))
                .sum();
            if diff_sq > (diameter + CHAIN_TOL * (1.0 + diameter)).powi(2) {
                return Err(Error::ConstraintViolated(format!(
                    "pair separation {} exceeds the stated diameter {diameter}",
                    diff_sq.sqrt()
                )));
            }
            pair_sq += weights[i] * weights[j] * diff_sq;
            pair_weight += weights[i] * weights[j];
        }
    }
    let chain = [
        2.0 * r * r,
        pair_sq,
        pair_weight * diameter * diameter,
        (1.0 - 1.0 / (k as f64 + 1.0)) * diameter * diameter,
    ];
    let scale = 1.0 + diameter * diameter + chain[0];
    if (chain[0] - chain[1]).abs() > CHAIN_TOL * scale {
        return Err(Error::ConstraintViolated(format!(
            "chain equality 2R^2 = {} vs pair sum {} broken",
            chain[0], chain[1]
        )));
    }
    if chain[1] > chain[2] + CHAIN_TOL * scale || chain[2] > chain[3] + CHAIN_TOL * scale {
        return Err(Error::ConstraintViolated(format!(
            "chain not monotone: {chain:?}"
        )));
    }
    Ok(chain)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn combine(vectors: &[Vec<f64>], idx: &[usize], lam: &[f64], k: usize) -> Vec<f64> {
    let mut out = vec![0.0; k];
    for (&i, &l) in idx.iter().zip(lam) {
        for c in 0..k {
            out[c] += l * vectors[i][c];
        }
    }
    out
}

/// Smallest enclosing Euclidean ball, for the tangent-space polish.
pub(crate) mod miniball {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Welzl's algorithm on a deterministically shuffled order.
    pub fn min_enclosing_ball(pts: &[Vec<f64>]) -> (Vec<f64>, f64) {
        assert!(!pts.is_empty(), "ball of an empty set");
        let d = pts[0].len();
        let mut idx: Vec<usize> = (0..pts.len()).collect();
        idx.shuffle(&mut ChaCha8Rng::seed_from_u64(0x0b_a11));
        let mut boundary = Vec::with_capacity(d + 1);
        let (center, r_sq) = welzl(pts, &idx, pts.len(), &mut boundary, d);
        (center, r_sq.max(0.0).sqrt())
    }

    fn welzl(
        pts: &[Vec<f64>],
        idx: &[usize],
        n: usize,
        boundary: &mut Vec<usize>,
        d: usize,
    ) -> (Vec<f64>, f64) {
        if n == 0 || boundary.len() == d + 1 {
            return boundary_ball(pts, boundary, d);
        }
        let i = idx[n - 1];
        let (center, r_sq) = welzl(pts, idx, n - 1, boundary, d);
        if dist_sq(&center, &pts[i]) <= r_sq * (1.0 + 1e-12) + 1e-24 {
            return (center, r_sq);
        }
        boundary.push(i);
        let out = welzl(pts, idx, n - 1, boundary, d);
        boundary.pop();
        out
    }

    /// The smallest ball with the boundary set on its sphere: the circumball
    /// of the set within its affine hull. Solved through the Gram system of
    /// the difference vectors; rank deficiency falls back to least squares.
    fn boundary_ball(pts: &[Vec<f64>], boundary: &[usize], d: usize) -> (Vec<f64>, f64) {
        match boundary.len() {
            0 => (vec![0.0; d], -1.0),
            1 => (pts[boundary[0]].clone(), 0.0),
            m => {
                let p0 = &pts[boundary[0]];
                let diffs: Vec<Vec<f64>> = boundary[1..]
                    .iter()
                    .map(|&i| {
                        pts[i]
                            .iter()
                            .zip(p0)
                            .map(|(a, b)| a - b)
                            .collect::<Vec<f64>>()
                    })
                    .collect();
                let mut gram = nalgebra::DMatrix::<f64>::zeros(m - 1, m - 1);
                let mut rhs = nalgebra::DVector::<f64>::zeros(m - 1);
                for i in 0..m - 1 {
                    for j in 0..m - 1 {
                        gram[(i, j)] = 2.0 * super::dot(&diffs[i], &diffs[j]);
                    }
                    rhs[i] = super::dot(&diffs[i], &diffs[i]);
                }
                let alpha = gram
                    .svd(true, true)
                    .solve(&rhs, 1e-12)
                    .unwrap_or_else(|_| nalgebra::DVector::zeros(m - 1));
                let mut center = p0.clone();
                for (i, diff) in diffs.iter().enumerate() {
                    for c in 0..d {
                        center[c] += alpha[i] * diff[c];
                    }
                }
                let r_sq = dist_sq(&center, p0);
                (center, r_sq)
            }
        }
    }

    pub(super) fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
    }

}
