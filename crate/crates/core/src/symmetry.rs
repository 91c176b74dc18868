//! Symmetries of the curve system acting on the development: validated
//! diagram automorphisms, the semidirect product action, and the isotropy
//! certificate behind proper discontinuity.
//!
//! Whether the group generated by reflections and diagram automorphisms is
//! the full isometry group of the development is an open question; nothing
//! here claims it is.

use crate::curve_complex::{validate_simplex, Curve, IntersectionGraph, Simplex};
use crate::development::{canonicalize, DevPoint, DomainPayload, DomainPoint};
use crate::coxeter::{multiply, normal_form, parabolic_order, NormalForm};
use crate::error::{Error, Result};
use crate::model_metric::ModelChart;

/// A permutation of the curves preserving every pairwise relation: images
/// of intersecting pairs intersect, images of disjoint pairs are disjoint.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiagramAutomorphism {
    graph_id: u64,
    perm: Vec<Curve>,
}

impl DiagramAutomorphism {
    pub fn identity(graph: &IntersectionGraph) -> Self {
        Self {
            graph_id: graph.id(),
            perm: graph.curves().collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, c)| c.index() == i)
    }

    pub fn graph_id(&self) -> u64 {
        self.graph_id
    }

    pub fn apply(&self, c: Curve) -> Curve {
        self.perm[c.index()]
    }

    /// Letterwise image of a group element, renormalized. Relations are
    /// preserved, so this is an automorphism of the group.
    pub fn apply_word(&self, graph: &IntersectionGraph, w: &NormalForm) -> Result<NormalForm> {
        self.check(graph)?;
        let letters: Vec<Curve> = w.letters().iter().map(|&c| self.apply(c)).collect();
        Ok(normal_form(graph, &letters))
    }

    pub fn apply_simplex(&self, graph: &IntersectionGraph, sigma: &Simplex) -> Result<Simplex> {
        self.check(graph)?;
        let curves: Vec<Curve> = sigma.members().iter().map(|&c| self.apply(c)).collect();
        validate_simplex(graph, &curves)
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.graph_id != other.graph_id {
            return Err(Error::GraphMismatch(
                "composing automorphisms of different graphs".into(),
            ));
        }
        Ok(Self {
            graph_id: self.graph_id,
            perm: other.perm.iter().map(|&c| self.apply(c)).collect(),
        })
    }

    /// The permutation as label pairs, sorted by source label.
    pub fn label_pairs<'g>(&self, graph: &'g IntersectionGraph) -> Vec<(&'g str, &'g str)> {
        graph
            .curves()
            .map(|c| (graph.label(c), graph.label(self.apply(c))))
            .collect()
    }

    fn check(&self, graph: &IntersectionGraph) -> Result<()> {
        if self.graph_id != graph.id() {
            return Err(Error::GraphMismatch(
                "automorphism built over a different graph".into(),
            ));
        }
        Ok(())
    }
}

/// Validates a label map as a diagram automorphism. The map must be a
/// bijection of the curve set and must carry every pairwise relation to
/// the same relation.
pub fn check_diagram_automorphism(
    graph: &IntersectionGraph,
    pairs: &[(&str, &str)],
) -> Result<DiagramAutomorphism> {
    let n = graph.curve_count();
    let mut perm: Vec<Option<Curve>> = vec![None; n];
    let mut hit = vec![false; n];
    for &(from, to) in pairs {
        let s = graph.curve(from)?;
        let t = graph.curve(to)?;
        if perm[s.index()].is_some() {
            return Err(Error::NotBijective(format!("{from} is mapped twice")));
        }
        if hit[t.index()] {
            return Err(Error::NotBijective(format!("{to} is hit twice")));
        }
        perm[s.index()] = Some(t);
        hit[t.index()] = true;
    }
    let perm: Vec<Curve> = perm
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            c.ok_or_else(|| {
                Error::NotBijective(format!("{} has no image", graph.label(Curve(i as u16))))
            })
        })
        .collect::<Result<_>>()?;

    let mut violations = Vec::new();
    for s in graph.curves() {
        for t in graph.curves() {
            if t.index() <= s.index() {
                continue;
            }
            let (gs, gt) = (perm[s.index()], perm[t.index()]);
            if graph.intersects(s, t) != graph.intersects(gs, gt) {
                violations.push(format!(
                    "({}, {}) -> ({}, {})",
                    graph.label(s),
                    graph.label(t),
                    graph.label(gs),
                    graph.label(gt)
                ));
            }
        }
    }
    if !violations.is_empty() {
        return Err(Error::RelationViolated(format!(
            "relation changed on {}",
            violations.join(", ")
        )));
    }
    Ok(DiagramAutomorphism {
        graph_id: graph.id(),
        perm,
    })
}

/// Applies `u = (g, gamma)` to `[g', y]`, giving `[g gamma(g'), gamma y]`.
/// Coordinate payloads require `gamma` to permute the pants curves of the
/// chart among themselves; symbolic payloads only need the stratum label
/// mapped.
pub fn semidirect_act(
    chart: &ModelChart,
    g: &NormalForm,
    gamma: &DiagramAutomorphism,
    p: &DevPoint,
) -> Result<DevPoint> {
    let graph = chart.graph();
    gamma.check(graph)?;
    if g.graph_id() != graph.id() {
        return Err(Error::GraphMismatch(
            "group element built over a different graph".into(),
        ));
    }
    let moved = gamma.apply_word(graph, p.chamber())?;
    let new_g = multiply(graph, g, &moved)?;
    let new_y = match p.domain().payload() {
        DomainPayload::Symbolic(name) => {
            let sigma = gamma.apply_simplex(graph, p.domain().sigma())?;
            DomainPoint::symbolic(sigma, name.clone())
        }
        DomainPayload::Model(rts) => {
            let n = chart.factor_count();
            let mut coords = vec![(0.0, 0.0); n];
            for (i, rt) in rts.iter().enumerate() {
                let target = gamma.apply(chart.factor_curve(i));
                let j = chart.factor_of(target).ok_or_else(|| {
                    Error::ChartNotPreserved(format!(
                        "{} leaves the pants set, coordinates cannot follow",
                        graph.label(target)
                    ))
                })?;
                coords[j] = (rt.r, rt.theta);
            }
            DomainPoint::model(chart, &coords)?
        }
    };
    canonicalize(graph, &new_g, new_y)
}

/// Isotropy report for the subgroup generated by a set of curves.
#[derive(Clone, Debug)]
pub struct PropernessCertificate {
    pub is_simplex: bool,
    /// `2^|subset|` when the subset is a simplex, absent otherwise.
    pub isotropy_order: Option<u128>,
    /// An intersecting pair witnessing an infinite dihedral subgroup.
    pub witness: Option<(Curve, Curve)>,
    /// No stratum is labeled by a non-simplex, so such a subgroup fixes
    /// nothing.
    pub fixed_set_empty: bool,
}

/// Decides whether the subgroup generated by `subset` can stabilize a point:
/// simplices give the finite stratum isotropy, everything else is infinite
/// with empty fixed set.
pub fn properness_certificate(
    graph: &IntersectionGraph,
    subset: &[Curve],
) -> Result<PropernessCertificate> {
    let mut curves = subset.to_vec();
    curves.sort();
    curves.dedup();
    for &c in &curves {
        if !graph.contains(c) {
            return Err(Error::UnknownCurve(format!(
                "curve index {} is outside the graph",
                c.index()
            )));
        }
    }
    let mut witness = None;
    'outer: for (k, &s) in curves.iter().enumerate() {
        for &t in &curves[k + 1..] {
            if graph.intersects(s, t) {
                witness = Some((s, t));
                break 'outer;
            }
        }
    }
    match witness {
        Some(pair) => Ok(PropernessCertificate {
            is_simplex: false,
            isotropy_order: None,
            witness: Some(pair),
            fixed_set_empty: true,
        }),
        None => {
            let sigma = validate_simplex(graph, &curves)?;
            Ok(PropernessCertificate {
                is_simplex: true,
                isotropy_order: Some(parabolic_order(&sigma)),
                witness: None,
                fixed_set_empty: false,
            })
        }
    }
}
