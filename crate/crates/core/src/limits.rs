//! Twist isometries and their degenerations: the twist-to-reflection limit,
//! bounded non-compact twist orbits, and the decomposition of wall-crossing
//! paths into geodesic segments with certified junction conditions.

use crate::curve_complex::{Curve, Simplex};
use crate::development::{reflect, DevPoint};
use crate::error::{Error, Result};
use crate::model_metric::{
    build_sample, dev_point_from_model, first_variation_residual, log_map, model_distance,
    model_geodesic_path, ConeCoord, GeodesicSample, LogComp, ModelChart, ModelPoint,
};
use crate::tolerances::FV_TOL;

/// Translates the twist coordinate of one factor: `theta_i += c`. An
/// isometry of the model; the wall `r_i = 0` stays fixed pointwise because
/// the twist line collapses there.
pub fn twist(chart: &ModelChart, p: &DevPoint, curve: Curve, c: f64) -> Result<DevPoint> {
    let i = chart.factor_of(curve).ok_or_else(|| {
        Error::UnknownCurve(format!(
            "{} is not a pants curve of the chart",
            chart.graph().label(curve)
        ))
    })?;
    if !c.is_finite() {
        return Err(Error::ConstraintViolated(format!(
            "twist amount must be finite, got {c}"
        )));
    }
    let mp = ModelPoint::of(chart, p)?;
    let mut factors = mp.factors().to_vec();
    let f = factors[i];
    if !f.is_vertex() {
        factors[i] = ConeCoord::new(f.r, f.theta + c, f.sheet)?;
    }
    dev_point_from_model(chart, &ModelPoint::from_factors(factors))
}

/// Nearest point of the wall `r_i = 0`: the factor is collapsed, everything
/// else is kept.
pub fn wall_projection(chart: &ModelChart, p: &DevPoint, curve: Curve) -> Result<DevPoint> {
    let i = chart.factor_of(curve).ok_or_else(|| {
        Error::UnknownCurve(format!(
            "{} is not a pants curve of the chart",
            chart.graph().label(curve)
        ))
    })?;
    let mp = ModelPoint::of(chart, p)?;
    let mut factors = mp.factors().to_vec();
    factors[i] = ConeCoord::vertex();
    dev_point_from_model(chart, &ModelPoint::from_factors(factors))
}

/// One row of the twist-limit table.
#[derive(Clone, Debug)]
pub struct TwistLimitRow {
    pub n: usize,
    /// `d(p1, twist^n p1)`; increases toward the through-wall value `2 r_i`.
    pub endpoint_distance: f64,
    /// Hausdorff distance between the chord to the twisted point and the
    /// V-shaped concatenation through the wall projection.
    pub hausdorff: f64,
}

/// Runs the twist-degeneration experiment on factor `curve`: for each `n`
/// the chord from `p1` to `twist^n p1` is compared against the V-shaped
/// concatenation `p1 -> wall projection -> twist^n p1`. The V realizes the
/// reflected segment under the identification of the reflection with the
/// limit of large twists, so its far arm is taken at the twisted endpoint,
/// where the comparison is metrically meaningful.
pub fn twist_limit_experiment(
    chart: &ModelChart,
    p1: &DevPoint,
    curve: Curve,
    c: f64,
    n_max: usize,
) -> Result<Vec<TwistLimitRow>> {
    if n_max == 0 {
        return Err(Error::ConstraintViolated("need at least one twist step".into()));
    }
    if !(c.is_finite() && c != 0.0) {
        return Err(Error::ConstraintViolated(format!(
            "twist step must be finite and nonzero, got {c}"
        )));
    }
    let mp = ModelPoint::of(chart, p1)?;
    if mp.factors().iter().any(|f| f.is_vertex()) {
        return Err(Error::ConstraintViolated(
            "the experiment needs every factor off its wall".into(),
        ));
    }
    let p0 = wall_projection(chart, p1, curve)?;
    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let qn = twist(chart, p1, curve, n as f64 * c)?;
        let chord_path = model_geodesic_path(chart, p1, &qn)?;
        let endpoint_distance = chord_path.length();
        let res = (endpoint_distance.max(1e-3)) / 72.0;
        let chord = build_sample(vec![chord_path], res)?;
        let v = build_sample(
            vec![
                model_geodesic_path(chart, p1, &p0)?,
                model_geodesic_path(chart, &p0, &qn)?,
            ],
            res,
        )?;
        let hausdorff = hausdorff_distance(chart, &chord, &v)?;
        rows.push(TwistLimitRow {
            n,
            endpoint_distance,
            hausdorff,
        });
    }
    Ok(rows)
}

struct PathCache<'a> {
    seg: &'a GeodesicSample,
    devs: Vec<DevPoint>,
}

fn cache_path<'a>(chart: &ModelChart, seg: &'a GeodesicSample) -> Result<PathCache<'a>> {
    let devs = seg
        .points()
        .iter()
        .map(|mp| dev_point_from_model(chart, mp))
        .collect::<Result<_>>()?;
    Ok(PathCache { seg, devs })
}

fn golden_min(mut f: impl FnMut(f64) -> Result<f64>, lo: f64, hi: f64, iters: usize) -> Result<f64> {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - phi * (b - a);
    let mut x2 = a + phi * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    let mut best = f1.min(f2);
    for _ in 0..iters {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2)?;
        }
        best = best.min(f1.min(f2));
    }
    Ok(best)
}

/// Distance from a point to a sampled path: coarse scan over the samples,
/// then a golden-section pass over the bracketing parameter interval.
fn point_to_path(chart: &ModelChart, x: &DevPoint, path: &PathCache) -> Result<f64> {
    let breaks = path.seg.breakpoints();
    let mut best = f64::INFINITY;
    let mut best_k = 0usize;
    for (k, d) in path.devs.iter().enumerate() {
        let v = model_distance(chart, x, d)?;
        if v < best {
            best = v;
            best_k = k;
        }
    }
    let lo = breaks[best_k.saturating_sub(1)];
    let hi = breaks[(best_k + 1).min(breaks.len() - 1)];
    if hi <= lo {
        return Ok(best);
    }
    let refined = golden_min(
        |s| {
            let dp = dev_point_from_model(chart, &path.seg.point_at(s))?;
            model_distance(chart, x, &dp)
        },
        lo,
        hi,
        28,
    )?;
    Ok(best.min(refined))
}

fn directed_hausdorff(chart: &ModelChart, from: &PathCache, to: &PathCache) -> Result<f64> {
    let breaks = from.seg.breakpoints();
    let mut best = f64::NEG_INFINITY;
    let mut best_k = 0usize;
    for (k, d) in from.devs.iter().enumerate() {
        let v = point_to_path(chart, d, to)?;
        if v > best {
            best = v;
            best_k = k;
        }
    }
    let lo = breaks[best_k.saturating_sub(1)];
    let hi = breaks[(best_k + 1).min(breaks.len() - 1)];
    if hi <= lo {
        return Ok(best);
    }
    let refined = -golden_min(
        |s| {
            let dp = dev_point_from_model(chart, &from.seg.point_at(s))?;
            point_to_path(chart, &dp, to).map(|v| -v)
        },
        lo,
        hi,
        24,
    )?;
    Ok(best.max(refined))
}

/// Hausdorff distance between the images of two sampled paths, accurate to
/// roughly the square of the sample spacing thanks to the golden-section
/// refinement on both the inner infimum and the outer supremum.
pub fn hausdorff_distance(
    chart: &ModelChart,
    a: &GeodesicSample,
    b: &GeodesicSample,
) -> Result<f64> {
    let ca = cache_path(chart, a)?;
    let cb = cache_path(chart, b)?;
    let ab = directed_hausdorff(chart, &ca, &cb)?;
    let ba = directed_hausdorff(chart, &cb, &ca)?;
    Ok(ab.max(ba))
}

/// Distance matrix of a bounded twist orbit together with the reflected
/// point: the witnesses that closed balls here are not compact.
#[derive(Clone, Debug)]
pub struct NoncompactnessReport {
    /// Row `k < n` is `twist^(k+1) p1`; the last row is `reflect(curve, p1)`.
    pub matrix: Vec<Vec<f64>>,
    /// Minimum off-diagonal entry; positive means no convergent subsequence.
    pub delta: f64,
    /// Maximum distance from the stratum basepoint to any orbit point.
    pub bound: f64,
    /// How far the twist-pair entries deviate from depending only on the
    /// index difference.
    pub stationarity_residual: f64,
}

/// Builds the orbit `{twist^k p1 : k = 1..n}` together with the reflected
/// point and reports their pairwise distances. `p0` must be the wall
/// projection of `p1` on `curve`: everything happens in the ball of radius
/// `2 d(p0, p1)` around `p0`, yet the orbit stays uniformly separated.
pub fn noncompactness_demo(
    chart: &ModelChart,
    p0: &DevPoint,
    p1: &DevPoint,
    curve: Curve,
    c: f64,
    n: usize,
) -> Result<NoncompactnessReport> {
    let i = chart.factor_of(curve).ok_or_else(|| {
        Error::UnknownCurve(format!(
            "{} is not a pants curve of the chart",
            chart.graph().label(curve)
        ))
    })?;
    if n < 2 {
        return Err(Error::ConstraintViolated(
            "need at least two orbit points".into(),
        ));
    }
    if !(c.is_finite() && c != 0.0) {
        return Err(Error::ConstraintViolated(format!(
            "twist step must be finite and nonzero, got {c}"
        )));
    }
    let m0 = ModelPoint::of(chart, p0)?;
    let m1 = ModelPoint::of(chart, p1)?;
    if !m0.factor(i).is_vertex() {
        return Err(Error::ConstraintViolated(
            "the basepoint must lie on the wall of the twisted factor".into(),
        ));
    }
    if m1.factor(i).is_vertex() {
        return Err(Error::ConstraintViolated(
            "the orbit point must sit off the wall of the twisted factor".into(),
        ));
    }
    for j in 0..m0.len() {
        if j != i && m0.factor(j) != m1.factor(j) {
            return Err(Error::ConstraintViolated(format!(
                "factor {j} of the orbit point must match the basepoint"
            )));
        }
    }

    let mut points = Vec::with_capacity(n + 1);
    for k in 1..=n {
        points.push(twist(chart, p1, curve, k as f64 * c)?);
    }
    points.push(reflect(chart.graph(), curve, p1)?);

    let m = points.len();
    let mut matrix = vec![vec![0.0; m]; m];
    let mut delta = f64::INFINITY;
    for a in 0..m {
        for b in a + 1..m {
            let d = model_distance(chart, &points[a], &points[b])?;
            matrix[a][b] = d;
            matrix[b][a] = d;
            delta = delta.min(d);
        }
    }
    if delta <= 0.0 {
        return Err(Error::ConstraintViolated(
            "orbit points coincide; the separation bound is void".into(),
        ));
    }
    let mut bound = 0.0f64;
    for p in &points {
        bound = bound.max(model_distance(chart, p0, p)?);
    }
    let mut stationarity_residual = 0.0f64;
    let mut reference = vec![0.0; n];
    for k in 1..n {
        reference[k] = model_distance(chart, p1, &twist(chart, p1, curve, k as f64 * c)?)?;
    }
    for a in 0..n {
        for b in a + 1..n {
            stationarity_residual =
                stationarity_residual.max((matrix[a][b] - reference[b - a]).abs());
        }
    }
    Ok(NoncompactnessReport {
        matrix,
        delta,
        bound,
        stationarity_residual,
    })
}

/// A path split into geodesic segments at stratum changes.
#[derive(Clone, Debug)]
pub struct Concatenation {
    /// Arclength parameters `t_0 < ... < t_k` of the junctions, endpoints
    /// included.
    pub breakpoints: Vec<f64>,
    pub points: Vec<DevPoint>,
    /// Stratum of each junction point.
    pub strata: Vec<Simplex>,
    /// Stratum of each open segment (evaluated at its midpoint).
    pub segment_strata: Vec<Simplex>,
    pub lengths: Vec<f64>,
    /// First-variation residual at each interior junction.
    pub junction_residuals: Vec<f64>,
    /// Whether every interior junction passes the geodesic-concatenation
    /// conditions: strict stratum jump against both neighbor segments,
    /// sheet change in every factor crossing the wall, and first-variation
    /// residual within tolerance.
    pub conditions_hold: bool,
}

fn is_strict_subset(a: &Simplex, b: &Simplex) -> bool {
    a.len() < b.len() && a.members().iter().all(|&c| b.contains(c))
}

/// Splits a sampled path at stratum changes and certifies the junction
/// conditions that characterize geodesic concatenations. Each extracted
/// segment must be a geodesic of the model (its length must equal the
/// distance between its endpoints); a violation is a malformed path, while
/// junction-condition failures are reported through `conditions_hold`.
pub fn concatenation_decompose(chart: &ModelChart, path: &GeodesicSample) -> Result<Concatenation> {
    let total = path.length();
    if !(total.is_finite() && total > 0.0) {
        return Err(Error::MalformedPath(format!(
            "path length {total} admits no decomposition"
        )));
    }
    let mut cands = vec![0.0, total];
    let mut offset = 0.0;
    for seg in path.segments() {
        for (_, s) in seg.crossings() {
            cands.push(offset + s);
        }
        offset += seg.length();
        if offset < total {
            cands.push(offset);
        }
    }
    cands.sort_by(f64::total_cmp);
    cands.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * (1.0 + total));

    let at = |s: f64| -> Result<DevPoint> { dev_point_from_model(chart, &path.point_at(s)) };
    let sigma_between = |lo: f64, hi: f64| -> Result<Simplex> {
        Ok(at(0.5 * (lo + hi))?.sigma().clone())
    };

    // Keep a candidate only where the stratum label actually changes.
    let mut breakpoints = vec![cands[0]];
    for w in 1..cands.len() - 1 {
        let here = at(cands[w])?.sigma().clone();
        let before = sigma_between(cands[w - 1], cands[w])?;
        let after = sigma_between(cands[w], cands[w + 1])?;
        if here != before || here != after {
            breakpoints.push(cands[w]);
        }
    }
    breakpoints.push(total);

    let points: Vec<DevPoint> = breakpoints.iter().map(|&s| at(s)).collect::<Result<_>>()?;
    let strata: Vec<Simplex> = points.iter().map(|p| p.sigma().clone()).collect();
    let mut lengths = Vec::with_capacity(breakpoints.len() - 1);
    let mut segment_strata = Vec::with_capacity(breakpoints.len() - 1);
    for j in 0..breakpoints.len() - 1 {
        let piece = breakpoints[j + 1] - breakpoints[j];
        let chord = model_distance(chart, &points[j], &points[j + 1])?;
        if (piece - chord).abs() > 1e-6 * (1.0 + piece) {
            return Err(Error::MalformedPath(format!(
                "segment {j} has length {piece} but its endpoints are {chord} apart"
            )));
        }
        lengths.push(piece);
        segment_strata.push(sigma_between(breakpoints[j], breakpoints[j + 1])?);
    }

    let mut junction_residuals = Vec::new();
    let mut conditions_hold = true;
    for j in 1..points.len() - 1 {
        let residual = first_variation_residual(chart, &points[j], &points[j - 1], &points[j + 1])?;
        junction_residuals.push(residual);
        if residual > FV_TOL {
            conditions_hold = false;
        }
        if !is_strict_subset(&segment_strata[j - 1], &strata[j])
            || !is_strict_subset(&segment_strata[j], &strata[j])
        {
            conditions_hold = false;
        }
        // Factors collapsed at the junction but moving on both sides must
        // change sheet: the wall is crossed, not bounced off.
        let back = log_map(chart, &points[j], &points[j - 1])?;
        let fore = log_map(chart, &points[j], &points[j + 1])?;
        for (cb, cf) in back.comps().iter().zip(fore.comps()) {
            if let (LogComp::Ray { t: tb }, LogComp::Ray { t: tf }) = (cb, cf) {
                if tb * tf > 0.0 {
                    conditions_hold = false;
                }
            }
        }
    }

    Ok(Concatenation {
        breakpoints,
        points,
        strata,
        segment_strata,
        lengths,
        junction_residuals,
        conditions_hold,
    })
}
