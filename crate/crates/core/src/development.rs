//! The development: copies of the fundamental domain indexed by group
//! elements, glued along strata.
//!
//! A point is an equivalence class `[g, y]` where `g` ranges over the group
//! and `y` over the domain; `[g, y] = [g', y']` iff `y = y'` and `g` and
//! `g'` lie in the same coset of the parabolic subgroup of the curves
//! collapsed at `y`. Each class stores the unique minimal coset
//! representative, so classes compare by plain equality.

use std::hash::{Hash, Hasher};

use crate::coxeter::{
    coset_rep, in_parabolic, inverse, multiply, normal_form, parabolic_order, NormalForm,
};
use crate::curve_complex::{precedes, validate_simplex, Curve, IntersectionGraph, Simplex};
use crate::error::{Error, Result};
use crate::model_metric::{ModelChart, RTheta};

/// Payload of a fundamental-domain point: model coordinates when the point
/// lives in the metric chart, or a bare name for combinatorial work.
#[derive(Clone, PartialEq, Debug)]
pub enum DomainPayload {
    Symbolic(String),
    Model(Vec<RTheta>),
}

/// A point of the fundamental domain together with its stratum label: the
/// simplex of curves collapsed there.
#[derive(Clone, Debug)]
pub struct DomainPoint {
    sigma: Simplex,
    payload: DomainPayload,
}

impl DomainPoint {
    /// A combinatorial point on the stratum of `sigma`.
    pub fn symbolic(sigma: Simplex, name: impl Into<String>) -> Self {
        Self {
            sigma,
            payload: DomainPayload::Symbolic(name.into()),
        }
    }

    /// A metric point of the chart. The stratum label is derived: exactly
    /// the pants curves whose radius is zero (after wall canonicalization).
    pub fn model(chart: &ModelChart, coords: &[(f64, f64)]) -> Result<Self> {
        if coords.len() != chart.factor_count() {
            return Err(Error::ConstraintViolated(format!(
                "expected {} factor coordinates, got {}",
                chart.factor_count(),
                coords.len()
            )));
        }
        let rts: Vec<RTheta> = coords
            .iter()
            .map(|&(r, theta)| RTheta::new(r, theta))
            .collect::<Result<_>>()?;
        let collapsed: Vec<Curve> = rts
            .iter()
            .enumerate()
            .filter(|(_, rt)| rt.is_wall())
            .map(|(i, _)| chart.factor_curve(i))
            .collect();
        let sigma = validate_simplex(chart.graph(), &collapsed)
            .expect("pants curves are pairwise disjoint");
        Ok(Self {
            sigma,
            payload: DomainPayload::Model(rts),
        })
    }

    pub fn sigma(&self) -> &Simplex {
        &self.sigma
    }

    pub fn payload(&self) -> &DomainPayload {
        &self.payload
    }

    pub fn coords(&self) -> Option<&[RTheta]> {
        match &self.payload {
            DomainPayload::Model(rts) => Some(rts),
            DomainPayload::Symbolic(_) => None,
        }
    }
}

impl PartialEq for DomainPoint {
    fn eq(&self, other: &Self) -> bool {
        self.sigma == other.sigma && self.payload == other.payload
    }
}

// Coordinates are finite by construction, so f64 equality is an equivalence.
impl Eq for DomainPoint {}

impl Hash for DomainPoint {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.sigma.hash(state);
        match &self.payload {
            DomainPayload::Symbolic(name) => {
                0u8.hash(state);
                name.hash(state);
            }
            DomainPayload::Model(rts) => {
                1u8.hash(state);
                for rt in rts {
                    rt.r.to_bits().hash(state);
                    rt.theta.to_bits().hash(state);
                }
            }
        }
    }
}

/// A point `[g, y]` of the development, stored canonically:
/// `g = coset_rep(g, sigma(y))`. Built through [`canonicalize`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DevPoint {
    chamber: NormalForm,
    domain: DomainPoint,
}

impl DevPoint {
    pub fn chamber(&self) -> &NormalForm {
        &self.chamber
    }

    pub fn domain(&self) -> &DomainPoint {
        &self.domain
    }

    pub fn sigma(&self) -> &Simplex {
        self.domain.sigma()
    }

    /// The stratum this point lies on.
    pub fn stratum_index(&self) -> StratumIndex {
        StratumIndex {
            coset: self.chamber.clone(),
            sigma: self.domain.sigma().clone(),
        }
    }
}

/// Builds the canonical class representative of `[g, y]`. Idempotent; two
/// inputs are equivalent iff their outputs are equal.
pub fn canonicalize(graph: &IntersectionGraph, g: &NormalForm, y: DomainPoint) -> Result<DevPoint> {
    if y.sigma().graph_id() != graph.id() {
        return Err(Error::GraphMismatch(
            "domain point belongs to a different curve system".into(),
        ));
    }
    let chamber = coset_rep(graph, g, y.sigma())?;
    Ok(DevPoint { chamber, domain: y })
}

/// The point `[identity, y]` of the base chamber.
pub fn base_point(graph: &IntersectionGraph, y: DomainPoint) -> Result<DevPoint> {
    canonicalize(graph, &NormalForm::identity(graph), y)
}

/// Left action `h . [g, y] = [h g, y]`.
pub fn act(graph: &IntersectionGraph, h: &NormalForm, p: &DevPoint) -> Result<DevPoint> {
    let g = multiply(graph, h, p.chamber())?;
    canonicalize(graph, &g, p.domain().clone())
}

/// Reflection through the wall of curve `s`; an involution fixing exactly
/// the points with `s` collapsed.
pub fn reflect(graph: &IntersectionGraph, s: Curve, p: &DevPoint) -> Result<DevPoint> {
    act(graph, &normal_form(graph, &[s]), p)
}

/// A stratum of the development: a parabolic coset and its simplex, the
/// coset stored by its minimal representative.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct StratumIndex {
    coset: NormalForm,
    sigma: Simplex,
}

impl StratumIndex {
    pub fn new(graph: &IntersectionGraph, g: &NormalForm, sigma: Simplex) -> Result<Self> {
        if sigma.graph_id() != graph.id() {
            return Err(Error::GraphMismatch(
                "simplex belongs to a different curve system".into(),
            ));
        }
        let coset = coset_rep(graph, g, &sigma)?;
        Ok(Self { coset, sigma })
    }

    pub fn coset(&self) -> &NormalForm {
        &self.coset
    }

    pub fn sigma(&self) -> &Simplex {
        &self.sigma
    }
}

/// Strict order of the stratum poset: true iff `a` is a strictly deeper
/// stratum lying in the closure of `b`. Deeper means `b.sigma` is a proper
/// subset of `a.sigma`; the closures meet iff the cosets agree modulo the
/// parabolic subgroup of the deeper stratum.
pub fn stratum_lt(graph: &IntersectionGraph, a: &StratumIndex, b: &StratumIndex) -> Result<bool> {
    if a.sigma.graph_id() != graph.id() || b.sigma.graph_id() != graph.id() {
        return Err(Error::GraphMismatch(
            "stratum indices belong to a different curve system".into(),
        ));
    }
    if !(precedes(&b.sigma, &a.sigma) && b.sigma.len() < a.sigma.len()) {
        return Ok(false);
    }
    let rel = multiply(graph, &inverse(graph, &a.coset)?, &b.coset)?;
    Ok(in_parabolic(&rel, &a.sigma))
}

/// Canonical representatives of the chambers whose closures contain `q`:
/// the coset `q.chamber * W_sigma(q)`, of size exactly `2^|sigma(q)|`.
pub fn closed_star(graph: &IntersectionGraph, q: &DevPoint) -> Result<Vec<NormalForm>> {
    let sigma = q.sigma();
    let mut out = Vec::with_capacity(1 << sigma.len());
    for mask in 0u32..(1u32 << sigma.len()) {
        let mut w = q.chamber().clone();
        for (bit, &s) in sigma.members().iter().enumerate() {
            if mask & (1 << bit) != 0 {
                w = multiply(graph, &w, &normal_form(graph, &[s]))?;
            }
        }
        out.push(w);
    }
    out.sort_by(|a, b| (a.len(), a.letters()).cmp(&(b.len(), b.letters())));
    out.dedup();
    debug_assert_eq!(out.len() as u128, parabolic_order(sigma));
    Ok(out)
}
