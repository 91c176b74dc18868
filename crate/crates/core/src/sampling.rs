//! Seeded random generators for chart points, triangles and point sets.
//! Every draw goes through an explicit RNG handle so suites reproduce byte
//! for byte from a seed.

use rand::Rng;

use crate::development::DevPoint;
use crate::error::Result;
use crate::model_metric::ModelChart;
use crate::npc_analysis::PointSet;

/// One random point in a realized chamber: a random sheet pattern over the
/// pants curves, radii in [0.05, 1.5] with an occasional exact wall hit,
/// angles in [-2, 2].
pub fn random_dev_point(chart: &ModelChart, rng: &mut impl Rng) -> Result<DevPoint> {
    let mut labels: Vec<String> = Vec::new();
    let mut coords = Vec::with_capacity(chart.factor_count());
    for i in 0..chart.factor_count() {
        if rng.gen_bool(0.5) {
            labels.push(chart.graph().label(chart.factor_curve(i)).to_owned());
        }
        let r = if rng.gen_bool(0.1) {
            0.0
        } else {
            rng.gen_range(0.05..1.5)
        };
        let theta = rng.gen_range(-2.0..2.0);
        coords.push((r, theta));
    }
    let label_refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    chart.dev_point(&label_refs, &coords)
}

pub fn random_triangle(chart: &ModelChart, rng: &mut impl Rng) -> Result<[DevPoint; 3]> {
    Ok([
        random_dev_point(chart, rng)?,
        random_dev_point(chart, rng)?,
        random_dev_point(chart, rng)?,
    ])
}

/// A random finite set of `n` points. Duplicates are collapsed by the set
/// constructor, so the result may hold fewer than `n`.
pub fn random_point_set(chart: &ModelChart, rng: &mut impl Rng, n: usize) -> Result<PointSet> {
    let mut pts = Vec::with_capacity(n);
    for _ in 0..n {
        pts.push(random_dev_point(chart, rng)?);
    }
    PointSet::new(pts)
}

/// Standard normal draw by Box-Muller; two uniforms per call.
pub fn standard_normal(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.gen_range(1e-12..1.0);
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}
