//! Serialization: curve-system and point-set documents (JSON), and the
//! comma-separated tables emitted by the batch front end. Writers are
//! deterministic so identical inputs reproduce identical bytes.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::curve_complex::IntersectionGraph;
use crate::development::DevPoint;
use crate::error::{Error, Result};
use crate::limits::TwistLimitRow;
use crate::model_metric::{GeodesicSample, ModelChart};
use crate::npc_analysis::FrReport;

/// On-disk description of a curve system. Pairs not listed are disjoint.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurveSystemDoc {
    pub genus: usize,
    pub curves: Vec<String>,
    pub intersections: Vec<(String, String)>,
}

pub fn read_curve_system(text: &str) -> Result<Arc<IntersectionGraph>> {
    let doc: CurveSystemDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("curve system: {e}")))?;
    let labels: Vec<&str> = doc.curves.iter().map(String::as_str).collect();
    let pairs: Vec<(&str, &str)> = doc
        .intersections
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    Ok(Arc::new(IntersectionGraph::new(doc.genus, &labels, &pairs)?))
}

/// Canonical document: curves sorted, intersection pairs sorted within and
/// between, one trailing newline.
pub fn write_curve_system(graph: &IntersectionGraph) -> String {
    let curves: Vec<String> = graph.labels().map(str::to_string).collect();
    let mut intersections = Vec::new();
    for a in graph.curves() {
        for b in graph.curves() {
            if b.index() > a.index() && graph.intersects(a, b) {
                intersections.push((graph.label(a).to_string(), graph.label(b).to_string()));
            }
        }
    }
    let doc = CurveSystemDoc {
        genus: graph.genus(),
        curves,
        intersections,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("document serializes");
    text.push('\n');
    text
}

/// One development point: the chamber word as labels plus `(r, theta)` per
/// factor. Sheets are implied by the chamber word.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointRecord {
    pub chamber: Vec<String>,
    pub coords: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointSetDoc {
    pub points: Vec<PointRecord>,
}

/// Reads a point-set document; every record is re-canonicalized through the
/// chart, so loads reject unrealized chambers and malformed coordinates.
pub fn read_point_set(chart: &ModelChart, text: &str) -> Result<Vec<DevPoint>> {
    let doc: PointSetDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("point set: {e}")))?;
    doc.points
        .iter()
        .map(|rec| {
            let labels: Vec<&str> = rec.chamber.iter().map(String::as_str).collect();
            chart.dev_point(&labels, &rec.coords)
        })
        .collect()
}

pub fn write_point_set(chart: &ModelChart, points: &[DevPoint]) -> Result<String> {
    let graph = chart.graph();
    let records = points
        .iter()
        .map(|p| {
            let coords = p.domain().coords().ok_or_else(|| {
                Error::ConstraintViolated(
                    "symbolic points carry no coordinates to serialize".into(),
                )
            })?;
            Ok(PointRecord {
                chamber: p.chamber().labels(graph).iter().map(|s| s.to_string()).collect(),
                coords: coords.iter().map(|rt| (rt.r, rt.theta)).collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut text =
        serde_json::to_string_pretty(&PointSetDoc { points: records }).expect("document serializes");
    text.push('\n');
    Ok(text)
}

fn csv_line(fields: &[String]) -> String {
    let mut line = fields.join(",");
    line.push('\n');
    line
}

/// Per-breakpoint rows of a sampled path: one row per factor with the
/// arclength parameter, factor index, polar coordinates, and sheet sign.
pub fn geodesic_sample_table(sample: &GeodesicSample) -> String {
    let mut out = csv_line(&["arclength", "factor", "r", "theta", "sheet"].map(str::to_string));
    for (s, mp) in sample.breakpoints().iter().zip(sample.points()) {
        for (j, f) in mp.factors().iter().enumerate() {
            out.push_str(&csv_line(&[
                s.to_string(),
                j.to_string(),
                f.r.to_string(),
                f.theta.to_string(),
                (f.sheet.sign() as i32).to_string(),
            ]));
        }
    }
    out
}

pub fn twist_limit_table(rows: &[TwistLimitRow]) -> String {
    let mut out = csv_line(&["n", "endpoint_distance", "hausdorff"].map(str::to_string));
    for row in rows {
        out.push_str(&csv_line(&[
            row.n.to_string(),
            row.endpoint_distance.to_string(),
            row.hausdorff.to_string(),
        ]));
    }
    out
}

pub fn distance_matrix_table(matrix: &[Vec<f64>]) -> String {
    let mut out = csv_line(&["i", "j", "distance"].map(str::to_string));
    for (i, row) in matrix.iter().enumerate() {
        for (j, d) in row.iter().enumerate() {
            out.push_str(&csv_line(&[i.to_string(), j.to_string(), d.to_string()]));
        }
    }
    out
}

pub fn fr_table(reports: &[FrReport]) -> String {
    let mut out = csv_line(&["diameter", "radius", "bound", "margin", "pass"].map(str::to_string));
    for r in reports {
        out.push_str(&csv_line(&[
            r.diameter.to_string(),
            r.radius.to_string(),
            r.bound.to_string(),
            r.margin.to_string(),
            r.pass.to_string(),
        ]));
    }
    out
}
