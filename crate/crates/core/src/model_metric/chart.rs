use std::sync::Arc;

use crate::coxeter::{normal_form, word_from_labels};
use crate::curve_complex::{Curve, IntersectionGraph, PantsDecomposition};
use crate::development::{canonicalize, DevPoint, DomainPoint};
use crate::error::{Error, Result};
use crate::model_metric::CuspProfile;

/// The coordinate chart of the model: a curve system, a chosen pants
/// decomposition ordering the cone factors, and the revolution profile.
///
/// The chart realizes the sub-development generated by the pants
/// reflections; chambers whose words use other letters are combinatorial
/// only and are rejected by geometric operations.
#[derive(Clone)]
pub struct ModelChart {
    graph: Arc<IntersectionGraph>,
    pants: PantsDecomposition,
    profile: CuspProfile,
}

impl ModelChart {
    pub fn new(
        graph: Arc<IntersectionGraph>,
        pants: PantsDecomposition,
        profile: CuspProfile,
    ) -> Result<Self> {
        if pants.graph_id() != graph.id() {
            return Err(Error::GraphMismatch(
                "pants decomposition built over a different graph".into(),
            ));
        }
        Ok(Self {
            graph,
            pants,
            profile,
        })
    }

    pub fn graph(&self) -> &IntersectionGraph {
        &self.graph
    }

    pub fn graph_arc(&self) -> Arc<IntersectionGraph> {
        Arc::clone(&self.graph)
    }

    pub fn pants(&self) -> &PantsDecomposition {
        &self.pants
    }

    pub fn profile(&self) -> CuspProfile {
        self.profile
    }

    pub fn factor_count(&self) -> usize {
        self.pants.len()
    }

    pub fn factor_curve(&self, i: usize) -> Curve {
        self.pants.curves()[i]
    }

    pub fn factor_of(&self, c: Curve) -> Option<usize> {
        self.pants.factor_index(c)
    }

    /// Canonical point from a chamber word (as labels) and per-factor
    /// `(r, theta)` coordinates in pants order.
    pub fn dev_point(&self, chamber: &[&str], coords: &[(f64, f64)]) -> Result<DevPoint> {
        let word = word_from_labels(&self.graph, chamber)?;
        let g = normal_form(&self.graph, &word);
        let y = DomainPoint::model(self, coords)?;
        canonicalize(&self.graph, &g, y)
    }

    /// Canonical point in the identity chamber.
    pub fn base_dev_point(&self, coords: &[(f64, f64)]) -> Result<DevPoint> {
        self.dev_point(&[], coords)
    }

    /// A chamber is realized iff its word uses pants letters only.
    pub fn check_realized(&self, p: &DevPoint) -> Result<()> {
        if p.chamber().graph_id() != self.graph.id() {
            return Err(Error::GraphMismatch(
                "point belongs to a different curve system".into(),
            ));
        }
        for &l in p.chamber().letters() {
            if self.factor_of(l).is_none() {
                return Err(Error::UnrealizedChamber(format!(
                    "chamber word uses {}, which is not a pants curve of the chart",
                    self.graph.label(l)
                )));
            }
        }
        Ok(())
    }
}
