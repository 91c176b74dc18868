//! Gluing-infimum oracle: minimizes d(p, a) + d(a, q) over points a of a
//! wall stratum by direct search, without assuming the product cross-wall
//! formula. Used to validate `model_distance` and to produce crossing
//! witnesses for the first-variation checks.

use crate::curve_complex::Simplex;
use crate::development::{DevPoint, DomainPoint};
use crate::development::canonicalize;
use crate::error::{Error, Result};
use crate::model_metric::geodesic::model_distance;
use crate::model_metric::{ModelChart, ModelPoint};

/// Outcome of the stratum minimization.
#[derive(Clone, Debug)]
pub struct GlueWitness {
    pub value: f64,
    pub argmin: DevPoint,
    pub evaluations: usize,
}

/// Minimizes `d(p, a) + d(a, q)` over `a` in the stratum `sigma` (those
/// factors pinned to their walls, the rest free), coarse grid followed by a
/// Nelder-Mead polish. Reports the achieved minimum and its argmin.
pub fn glue_distance_oracle(
    chart: &ModelChart,
    p: &DevPoint,
    q: &DevPoint,
    sigma: &Simplex,
    grid: usize,
) -> Result<GlueWitness> {
    if sigma.graph_id() != chart.graph().id() {
        return Err(Error::GraphMismatch(
            "stratum simplex belongs to a different curve system".into(),
        ));
    }
    if grid < 2 {
        return Err(Error::ConstraintViolated(format!(
            "grid density must be at least 2, got {grid}"
        )));
    }
    for &c in sigma.members() {
        if chart.factor_of(c).is_none() {
            return Err(Error::UnrealizedChamber(format!(
                "stratum curve {} is not a pants curve of the chart",
                chart.graph().label(c)
            )));
        }
    }
    let a = ModelPoint::of(chart, p)?;
    let b = ModelPoint::of(chart, q)?;
    let n = chart.factor_count();
    let pinned: Vec<bool> = (0..n)
        .map(|i| sigma.contains(chart.factor_curve(i)))
        .collect();
    let free: Vec<usize> = (0..n).filter(|&i| !pinned[i]).collect();

    // Search box per free factor, padded around the endpoint coordinates.
    let mut r_hi = Vec::new();
    let mut th_lo = Vec::new();
    let mut th_hi = Vec::new();
    for &i in &free {
        let (pi, qi) = (a.factor(i), b.factor(i));
        r_hi.push(1.05 * pi.r.max(qi.r) + 1e-3);
        let (lo, hi) = (pi.theta.min(qi.theta), pi.theta.max(qi.theta));
        let pad = 0.05 * (hi - lo + 1.0);
        th_lo.push(lo - pad);
        th_hi.push(hi + pad);
    }

    let dim = 2 * free.len();
    if (grid as f64).powi(dim as i32) > 2e5 {
        return Err(Error::TooLarge(format!(
            "grid {grid} over {dim} coordinates is too dense"
        )));
    }

    let mut evals = 0usize;
    let mut objective = |x: &[f64]| -> Result<(f64, DevPoint)> {
        let mut coords = Vec::with_capacity(n);
        let mut k = 0;
        for i in 0..n {
            if pinned[i] {
                coords.push((0.0, 0.0));
            } else {
                coords.push((x[k].max(0.0), x[k + 1]));
                k += 2;
            }
        }
        let y = DomainPoint::model(chart, &coords)?;
        let cand = canonicalize(chart.graph(), p.chamber(), y)?;
        evals += 1;
        let val = model_distance(chart, p, &cand)? + model_distance(chart, &cand, q)?;
        Ok((val, cand))
    };

    // Stage 1: coarse grid.
    let mut best_x = vec![0.0; dim];
    let mut best = f64::INFINITY;
    let cells = grid;
    let mut idx = vec![0usize; dim];
    loop {
        let mut x = vec![0.0; dim];
        for d in 0..dim {
            let f = idx[d] as f64 / (cells - 1) as f64;
            let (lo, hi) = if d % 2 == 0 {
                (0.0, r_hi[d / 2])
            } else {
                (th_lo[d / 2], th_hi[d / 2])
            };
            x[d] = lo + f * (hi - lo);
        }
        let (val, _) = objective(&x)?;
        if val < best {
            best = val;
            best_x = x;
        }
        // Odometer increment.
        let mut d = 0;
        loop {
            if d == dim {
                break;
            }
            idx[d] += 1;
            if idx[d] < cells {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
        if d == dim {
            break;
        }
    }

    // Stage 2: Nelder-Mead polish from the best cell.
    let steps: Vec<f64> = (0..dim)
        .map(|d| {
            let (lo, hi) = if d % 2 == 0 {
                (0.0, r_hi[d / 2])
            } else {
                (th_lo[d / 2], th_hi[d / 2])
            };
            ((hi - lo) / (cells - 1) as f64).max(1e-6)
        })
        .collect();
    let polished = nelder_mead(
        |x| objective(x).map(|(v, _)| v),
        &best_x,
        &steps,
        2000,
        1e-12,
    )?;
    let (value, argmin) = objective(&polished)?;
    let value = value.min(best);
    Ok(GlueWitness {
        value,
        argmin,
        evaluations: evals,
    })
}

/// Standard Nelder-Mead on an explicit function; returns the best vertex.
fn nelder_mead(
    mut f: impl FnMut(&[f64]) -> Result<f64>,
    x0: &[f64],
    steps: &[f64],
    max_iter: usize,
    ftol: f64,
) -> Result<Vec<f64>> {
    let dim = x0.len();
    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for d in 0..dim {
        let mut v = x0.to_vec();
        v[d] += steps[d];
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect::<Result<_>>()?;

    for _ in 0..max_iter {
        // Order best to worst.
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        let reordered: Vec<Vec<f64>> = order.iter().map(|&i| simplex[i].clone()).collect();
        let revalued: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        simplex = reordered;
        values = revalued;

        if (values[dim] - values[0]).abs() <= ftol * (1.0 + values[0].abs()) {
            break;
        }

        let centroid: Vec<f64> = (0..dim)
            .map(|d| simplex[..dim].iter().map(|v| v[d]).sum::<f64>() / dim as f64)
            .collect();
        let worst = simplex[dim].clone();
        let mix = |alpha: f64| -> Vec<f64> {
            (0..dim)
                .map(|d| centroid[d] + alpha * (centroid[d] - worst[d]))
                .collect()
        };

        let refl = mix(1.0);
        let f_refl = f(&refl)?;
        if f_refl < values[0] {
            let expand = mix(2.0);
            let f_exp = f(&expand)?;
            if f_exp < f_refl {
                simplex[dim] = expand;
                values[dim] = f_exp;
            } else {
                simplex[dim] = refl;
                values[dim] = f_refl;
            }
        } else if f_refl < values[dim - 1] {
            simplex[dim] = refl;
            values[dim] = f_refl;
        } else {
            let contract = if f_refl < values[dim] {
                mix(0.5)
            } else {
                mix(-0.5)
            };
            let f_con = f(&contract)?;
            if f_con < values[dim].min(f_refl) {
                simplex[dim] = contract;
                values[dim] = f_con;
            } else {
                // Shrink toward the best vertex.
                for k in 1..=dim {
                    for d in 0..dim {
                        simplex[k][d] = simplex[0][d] + 0.5 * (simplex[k][d] - simplex[0][d]);
                    }
                    values[k] = f(&simplex[k])?;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..=dim).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    Ok(simplex[order[0]].clone())
}
