//! The standard genus-2 configuration used by tests, examples, and the CLI
//! defaults.
//!
//! Six curves: a maximal disjoint triple c1, c2, c3 (the pants curves) and
//! transverse curves t1, t2, t3 with ti meeting ci, plus the chain overlaps
//! t1-t2 and t2-t3. The diagram has the obvious left-right symmetry
//! c1<->c3, t1<->t3.

use std::sync::Arc;

use crate::curve_complex::{validate_simplex_labels, IntersectionGraph, PantsDecomposition};
use crate::development::DevPoint;
use crate::error::Result;
use crate::model_metric::{CuspProfile, ModelChart};

pub const GENUS2_LABELS: [&str; 6] = ["c1", "c2", "c3", "t1", "t2", "t3"];
pub const GENUS2_INTERSECTIONS: [(&str, &str); 5] =
    [("c1", "t1"), ("c2", "t2"), ("c3", "t3"), ("t1", "t2"), ("t2", "t3")];
pub const GENUS2_PANTS: [&str; 3] = ["c1", "c2", "c3"];

pub fn genus2_graph() -> Arc<IntersectionGraph> {
    Arc::new(
        IntersectionGraph::new(2, &GENUS2_LABELS, &GENUS2_INTERSECTIONS)
            .expect("fixture graph is valid"),
    )
}

/// The same surface with t3 dropped: five generators, small enough for
/// exhaustive word enumeration.
pub fn genus2_restricted_graph() -> Arc<IntersectionGraph> {
    Arc::new(
        IntersectionGraph::new(
            2,
            &["c1", "c2", "c3", "t1", "t2"],
            &[("c1", "t1"), ("c2", "t2"), ("t1", "t2")],
        )
        .expect("fixture graph is valid"),
    )
}

pub fn genus2_chart() -> ModelChart {
    genus2_chart_with_profile(CuspProfile::default())
}

pub fn genus2_chart_with_profile(profile: CuspProfile) -> ModelChart {
    let graph = genus2_graph();
    let simplex =
        validate_simplex_labels(&graph, &GENUS2_PANTS).expect("fixture pants are a simplex");
    let pants = PantsDecomposition::new(&graph, simplex).expect("fixture pants are valid");
    ModelChart::new(graph, pants, profile).expect("fixture chart is valid")
}

/// Maps signed line coordinates onto the standard flat: factor `j` runs
/// along the union of the two radial rays at angle `thetas[j]`, negative
/// values landing on the reflected sheet. The image of Euclidean space under
/// this map is totally geodesic, so Euclidean distances are model distances.
pub fn flat_points(chart: &ModelChart, thetas: &[f64], xs: &[Vec<f64>]) -> Result<Vec<DevPoint>> {
    let n = chart.factor_count();
    assert_eq!(thetas.len(), n, "one angle per factor");
    let mut out = Vec::with_capacity(xs.len());
    for x in xs {
        assert_eq!(x.len(), n, "one line coordinate per factor");
        let mut labels = Vec::new();
        let mut coords = Vec::with_capacity(n);
        for j in 0..n {
            if x[j] < 0.0 {
                labels.push(chart.graph().label(chart.factor_curve(j)));
            }
            coords.push((x[j].abs(), thetas[j]));
        }
        out.push(chart.dev_point(&labels, &coords)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_builds_and_has_expected_shape() {
        let chart = genus2_chart();
        assert_eq!(chart.factor_count(), 3);
        assert_eq!(chart.graph().curve_count(), 6);
        assert_eq!(chart.graph().max_disjoint_clique(), 3);
        let small = genus2_restricted_graph();
        assert_eq!(small.curve_count(), 5);
    }
}
