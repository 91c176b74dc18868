//! Product geodesics, log maps, and the first-variation machinery.
//!
//! The model is a product of cone factors, so a geodesic moves every factor
//! along its own factor geodesic at constant speed, speeds proportional to
//! factor lengths. The tangent cone at any point is a flat Euclidean space:
//! two coordinates per smooth factor, one signed radial coordinate per
//! collapsed factor (the two wall directions are a line). Log vectors live
//! there, and angle computations reduce to Euclidean inner products of exact
//! solver tangents.

use crate::coxeter::normal_form;
use crate::curve_complex::Curve;
use crate::development::{canonicalize, DevPoint, DomainPoint};
use crate::error::{Error, Result};
use crate::model_metric::cone::{cone_distance, factor_path, shoot_factor, FactorGeodesic};
use crate::model_metric::{ConeCoord, FactorPath, ModelChart, ModelPoint, Sheet};

/// Geodesic between two points, factor paths at proportional speeds.
#[derive(Clone, Debug)]
pub struct ModelGeodesic {
    factors: Vec<FactorPath>,
    length: f64,
}

impl ModelGeodesic {
    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn factor_paths(&self) -> &[FactorPath] {
        &self.factors
    }

    /// Per-factor arclength at global parameter `s`.
    fn factor_param(&self, i: usize, s: f64) -> f64 {
        if self.length == 0.0 {
            0.0
        } else {
            s.clamp(0.0, self.length) * self.factors[i].length / self.length
        }
    }

    pub fn point_at(&self, s: f64) -> ModelPoint {
        let coords = (0..self.factors.len())
            .map(|i| self.factors[i].eval(self.factor_param(i, s)))
            .collect();
        ModelPoint::from_factors(coords)
    }

    /// Global parameters where some factor touches its wall away from the
    /// segment endpoints, sorted increasing.
    pub fn crossings(&self) -> Vec<(usize, f64)> {
        let mut out = Vec::new();
        for (i, fp) in self.factors.iter().enumerate() {
            if let Some(s_i) = fp.crossing_param() {
                if fp.length > 0.0 {
                    out.push((i, s_i * self.length / fp.length));
                }
            }
        }
        out.sort_by(|a, b| a.1.total_cmp(&b.1));
        out
    }

    pub fn clairaut_constants(&self) -> Vec<f64> {
        self.factors.iter().map(|f| f.clairaut()).collect()
    }
}

/// Geodesic between two developed points.
pub fn model_geodesic_path(chart: &ModelChart, p: &DevPoint, q: &DevPoint) -> Result<ModelGeodesic> {
    let a = ModelPoint::of(chart, p)?;
    let b = ModelPoint::of(chart, q)?;
    let mut factors = Vec::with_capacity(a.len());
    let mut sq = 0.0;
    for i in 0..a.len() {
        let fp = factor_path(chart.profile(), a.factor(i), b.factor(i))?;
        sq += fp.length * fp.length;
        factors.push(fp);
    }
    Ok(ModelGeodesic {
        factors,
        length: sq.sqrt(),
    })
}

/// Distance in the developed model: the Euclidean compound of factor
/// distances, sheets read off the two chamber words.
pub fn model_distance(chart: &ModelChart, p: &DevPoint, q: &DevPoint) -> Result<f64> {
    let a = ModelPoint::of(chart, p)?;
    let b = ModelPoint::of(chart, q)?;
    let mut sq = 0.0;
    for i in 0..a.len() {
        let d = cone_distance(chart.profile(), a.factor(i), b.factor(i))?;
        sq += d * d;
    }
    Ok(sq.sqrt())
}

/// Canonical developed point with the chamber word read off sheet signs.
/// Pants letters commute, so the word is just the set of minus-sheet curves.
pub fn dev_point_from_model(chart: &ModelChart, mp: &ModelPoint) -> Result<DevPoint> {
    let mut letters: Vec<Curve> = Vec::new();
    let mut coords = Vec::with_capacity(mp.len());
    for (i, f) in mp.factors().iter().enumerate() {
        if f.sheet == Sheet::Minus {
            letters.push(chart.factor_curve(i));
        }
        coords.push((f.r, f.theta));
    }
    let g = normal_form(chart.graph(), &letters);
    let y = DomainPoint::model(chart, &coords)?;
    canonicalize(chart.graph(), &g, y)
}

/// Sampled geodesic, or a concatenation of geodesic segments after an
/// extension. Sample `k` sits at arclength `breakpoints[k]`.
#[derive(Clone, Debug)]
pub struct GeodesicSample {
    breakpoints: Vec<f64>,
    points: Vec<ModelPoint>,
    clairaut: Vec<f64>,
    resolution: f64,
    segments: Vec<ModelGeodesic>,
}

impl GeodesicSample {
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn points(&self) -> &[ModelPoint] {
        &self.points
    }

    pub fn clairaut(&self) -> &[f64] {
        &self.clairaut
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn segments(&self) -> &[ModelGeodesic] {
        &self.segments
    }

    pub fn length(&self) -> f64 {
        self.segments.iter().map(|g| g.length()).sum()
    }

    pub fn point_at(&self, s: f64) -> ModelPoint {
        let mut s = s.clamp(0.0, self.length());
        for seg in &self.segments {
            if s <= seg.length() {
                return seg.point_at(s);
            }
            s -= seg.length();
        }
        self.segments
            .last()
            .map(|seg| seg.point_at(seg.length()))
            .expect("sample has at least one segment")
    }

    pub fn end_point(&self) -> ModelPoint {
        self.point_at(self.length())
    }
}

pub(crate) fn build_sample(segments: Vec<ModelGeodesic>, resolution: f64) -> Result<GeodesicSample> {
    if !(resolution.is_finite() && resolution > 0.0) {
        return Err(Error::ConstraintViolated(format!(
            "sample resolution must be positive, got {resolution}"
        )));
    }
    let total: f64 = segments.iter().map(|g| g.length()).sum();
    if total / resolution > 5e6 {
        return Err(Error::TooLarge(format!(
            "sampling {total} of arclength at step {resolution} needs too many points"
        )));
    }
    // Anchors: endpoints, segment joins, wall crossings.
    let mut anchors = vec![0.0, total];
    let mut offset = 0.0;
    for seg in &segments {
        anchors.push(offset);
        for (_, s) in seg.crossings() {
            anchors.push(offset + s);
        }
        offset += seg.length();
    }
    anchors.sort_by(f64::total_cmp);
    anchors.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + total));

    let mut breakpoints = Vec::new();
    for pair in anchors.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let pieces = ((b - a) / resolution).ceil().max(1.0) as usize;
        for k in 0..pieces {
            breakpoints.push(a + (b - a) * k as f64 / pieces as f64);
        }
    }
    breakpoints.push(total);
    if breakpoints.is_empty() {
        breakpoints.push(0.0);
    }

    let clairaut = segments
        .first()
        .map(|g| g.clairaut_constants())
        .unwrap_or_default();
    let tmp = GeodesicSample {
        breakpoints: Vec::new(),
        points: Vec::new(),
        clairaut,
        resolution,
        segments,
    };
    let points = breakpoints.iter().map(|&s| tmp.point_at(s)).collect();
    Ok(GeodesicSample {
        breakpoints,
        points,
        ..tmp
    })
}

/// Sampled geodesic between two points with a step bound on arclength.
pub fn model_geodesic(
    chart: &ModelChart,
    p: &DevPoint,
    q: &DevPoint,
    resolution: f64,
) -> Result<GeodesicSample> {
    let geo = model_geodesic_path(chart, p, q)?;
    build_sample(vec![geo], resolution)
}

/// Prolongs a segment ending at a wall point. Factors collapsed at the end
/// leave radially into the opposite sheet at the chosen angles (missing
/// choices default to 0); smooth factors continue their arcs; every factor
/// keeps its speed, so the concatenation is a local geodesic of total length
/// old + extra for every admissible choice.
pub fn extend_geodesic(
    chart: &ModelChart,
    seg: &GeodesicSample,
    theta_out: &[(Curve, f64)],
    extra: f64,
) -> Result<GeodesicSample> {
    if !(extra.is_finite() && extra > 0.0) {
        return Err(Error::ConstraintViolated(format!(
            "extension length must be positive, got {extra}"
        )));
    }
    let last = seg
        .segments
        .last()
        .ok_or_else(|| Error::MalformedPath("empty sample".into()))?;
    let end = last.point_at(last.length());
    if end.factors().iter().all(|f| !f.is_vertex()) {
        return Err(Error::NotAtWall(
            "segment ends in the interior; nothing collapses there".into(),
        ));
    }
    if last.length() == 0.0 {
        return Err(Error::MalformedPath(
            "zero-length segment has no direction to extend".into(),
        ));
    }
    let mut choice = std::collections::BTreeMap::new();
    for &(c, theta) in theta_out {
        if chart.factor_of(c).is_none() {
            return Err(Error::UnknownCurve(format!(
                "{} is not a pants curve of the chart",
                chart.graph().label(c)
            )));
        }
        choice.insert(c, theta);
    }

    let mut ext = Vec::with_capacity(last.factor_paths().len());
    for (i, fp) in last.factor_paths().iter().enumerate() {
        let speed = fp.length / last.length();
        let len = speed * extra;
        let endpoint = fp.end();
        let path = if len == 0.0 {
            FactorPath {
                kind: FactorGeodesic::Constant { at: endpoint },
                length: 0.0,
            }
        } else if endpoint.is_vertex() {
            // Collapsing factor: leave into the sheet opposite the arrival.
            let arrival = match &fp.kind {
                FactorGeodesic::Radial { sheet, .. } => *sheet,
                other => {
                    return Err(Error::MalformedPath(format!(
                        "factor {i} reaches the wall along a non-radial path: {other:?}"
                    )))
                }
            };
            let theta = choice
                .get(&chart.factor_curve(i))
                .copied()
                .unwrap_or(0.0);
            FactorPath {
                kind: FactorGeodesic::Radial {
                    sheet: arrival.flip(),
                    theta,
                    r_start: 0.0,
                    r_end: len,
                },
                length: len,
            }
        } else {
            match &fp.kind {
                FactorGeodesic::Smooth(arc) => FactorPath {
                    kind: FactorGeodesic::Smooth(arc.prolongation(len)),
                    length: len,
                },
                _ => {
                    let dir = fp
                        .final_tangent()
                        .expect("moving factor has a final tangent");
                    shoot_factor(chart.profile(), endpoint, dir, len)?
                }
            }
        };
        ext.push(path);
    }
    let mut segments = seg.segments.clone();
    segments.push(ModelGeodesic {
        factors: ext,
        length: extra,
    });
    build_sample(segments, seg.resolution)
}

/// One factor's entry in a log vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LogComp {
    /// Smooth base factor: two tangent-plane coordinates (radial,
    /// circumferential).
    Plane { x: f64, y: f64 },
    /// Collapsed base factor: signed radial coordinate, sign = target sheet.
    Ray { t: f64 },
}

/// Image of a point under the log map at a base point. The ambient tangent
/// cone is flat, so inner products and norms are Euclidean.
#[derive(Clone, Debug, PartialEq)]
pub struct LogVector {
    comps: Vec<LogComp>,
}

impl LogVector {
    pub fn comps(&self) -> &[LogComp] {
        &self.comps
    }

    pub fn dim(&self) -> usize {
        self.comps
            .iter()
            .map(|c| match c {
                LogComp::Plane { .. } => 2,
                LogComp::Ray { .. } => 1,
            })
            .sum()
    }

    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dim());
        for c in &self.comps {
            match c {
                LogComp::Plane { x, y } => {
                    out.push(*x);
                    out.push(*y);
                }
                LogComp::Ray { t } => out.push(*t),
            }
        }
        out
    }

    pub fn norm(&self) -> f64 {
        self.flatten().iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &LogVector) -> Result<f64> {
        if self.shape() != other.shape() {
            return Err(Error::ConstraintViolated(
                "log vectors live at different base strata".into(),
            ));
        }
        Ok(self
            .flatten()
            .iter()
            .zip(other.flatten())
            .map(|(a, b)| a * b)
            .sum())
    }

    fn shape(&self) -> Vec<bool> {
        self.comps
            .iter()
            .map(|c| matches!(c, LogComp::Plane { .. }))
            .collect()
    }

    /// Rebuilds a log vector from flat coordinates with this vector's shape.
    pub fn with_flat(&self, flat: &[f64]) -> Result<LogVector> {
        if flat.len() != self.dim() {
            return Err(Error::ConstraintViolated(format!(
                "expected {} coordinates, got {}",
                self.dim(),
                flat.len()
            )));
        }
        let mut comps = Vec::with_capacity(self.comps.len());
        let mut k = 0;
        for c in &self.comps {
            match c {
                LogComp::Plane { .. } => {
                    comps.push(LogComp::Plane {
                        x: flat[k],
                        y: flat[k + 1],
                    });
                    k += 2;
                }
                LogComp::Ray { .. } => {
                    comps.push(LogComp::Ray { t: flat[k] });
                    k += 1;
                }
            }
        }
        Ok(LogVector { comps })
    }
}

/// Log map at `base`: per smooth factor the exact initial tangent scaled by
/// factor distance, per collapsed factor the signed radius of the target.
/// The norm is the model distance and radial geodesics map isometrically.
pub fn log_map(chart: &ModelChart, base: &DevPoint, p: &DevPoint) -> Result<LogVector> {
    let a = ModelPoint::of(chart, base)?;
    let b = ModelPoint::of(chart, p)?;
    let mut comps = Vec::with_capacity(a.len());
    for i in 0..a.len() {
        let (ai, bi) = (a.factor(i), b.factor(i));
        if ai.is_vertex() {
            comps.push(LogComp::Ray {
                t: bi.sheet.sign() * bi.r,
            });
        } else {
            let fp = factor_path(chart.profile(), ai, bi)?;
            let (x, y) = match fp.initial_tangent() {
                Some((u_r, u_t)) => (fp.length * u_r, fp.length * u_t),
                None => (0.0, 0.0),
            };
            comps.push(LogComp::Plane { x, y });
        }
    }
    Ok(LogVector { comps })
}

/// Exponential map at `base`: shoots every factor along the prescribed
/// tangent data. Inverse of `log_map` wherever both are defined.
pub fn exp_map(chart: &ModelChart, base: &DevPoint, v: &LogVector) -> Result<DevPoint> {
    let a = ModelPoint::of(chart, base)?;
    if v.comps.len() != a.len() {
        return Err(Error::ConstraintViolated(format!(
            "log vector has {} factors, chart has {}",
            v.comps.len(),
            a.len()
        )));
    }
    let mut coords = Vec::with_capacity(a.len());
    for (i, comp) in v.comps.iter().enumerate() {
        let ai = a.factor(i);
        let end = match comp {
            LogComp::Ray { t } => {
                if ai.is_vertex() {
                    let sheet = if *t >= 0.0 { Sheet::Plus } else { Sheet::Minus };
                    ConeCoord::new(t.abs(), 0.0, sheet)?
                } else {
                    return Err(Error::ConstraintViolated(format!(
                        "ray component at smooth factor {i}"
                    )));
                }
            }
            LogComp::Plane { x, y } => {
                let len = (x * x + y * y).sqrt();
                if len == 0.0 {
                    ai
                } else {
                    shoot_factor(chart.profile(), ai, (*x, *y), len)?.end()
                }
            }
        };
        coords.push(end);
    }
    dev_point_from_model(chart, &ModelPoint::from_factors(coords))
}

/// Max over the base's smooth coordinate directions of
/// `|cos(angle to p0) + cos(angle to p1)|`, from exact unit tangents.
/// Vanishes exactly when `q` is the optimal wall crossing between the sides.
pub fn first_variation_residual(
    chart: &ModelChart,
    q: &DevPoint,
    p0: &DevPoint,
    p1: &DevPoint,
) -> Result<f64> {
    let l0 = log_map(chart, q, p0)?;
    let l1 = log_map(chart, q, p1)?;
    let (n0, n1) = (l0.norm(), l1.norm());
    if n0 == 0.0 || n1 == 0.0 {
        return Err(Error::ConstraintViolated(
            "first variation needs both endpoints distinct from the crossing point".into(),
        ));
    }
    let mut worst: f64 = 0.0;
    for (c0, c1) in l0.comps.iter().zip(&l1.comps) {
        if let (LogComp::Plane { x: x0, y: y0 }, LogComp::Plane { x: x1, y: y1 }) = (c0, c1) {
            worst = worst.max((x0 / n0 + x1 / n1).abs());
            worst = worst.max((y0 / n0 + y1 / n1).abs());
        }
    }
    Ok(worst)
}
