use crate::development::{DevPoint, DomainPayload};
use crate::error::{Error, Result};
use crate::model_metric::ModelChart;
use crate::tolerances::VERTEX_MARGIN;

/// Which of the two mirror copies of a cone factor a point lies on.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Sheet {
    Plus,
    Minus,
}

impl Sheet {
    pub fn flip(self) -> Sheet {
        match self {
            Sheet::Plus => Sheet::Minus,
            Sheet::Minus => Sheet::Plus,
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Sheet::Plus => 1.0,
            Sheet::Minus => -1.0,
        }
    }

    pub fn from_parity(odd: bool) -> Sheet {
        if odd {
            Sheet::Minus
        } else {
            Sheet::Plus
        }
    }
}

/// Fundamental-domain coordinates of one factor: distance to the wall and
/// the unbounded angle-like twist coordinate.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct RTheta {
    pub r: f64,
    pub theta: f64,
}

impl RTheta {
    /// Validates and canonicalizes: radii under [`VERTEX_MARGIN`] snap to the
    /// wall point `(0, 0)`, where the theta circle has collapsed.
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if !r.is_finite() || !theta.is_finite() || r < 0.0 {
            return Err(Error::ConstraintViolated(format!(
                "factor coordinates must be finite with r >= 0, got ({r}, {theta})"
            )));
        }
        if r < VERTEX_MARGIN {
            return Ok(Self { r: 0.0, theta: 0.0 });
        }
        Ok(Self { r, theta })
    }

    pub fn wall() -> Self {
        Self { r: 0.0, theta: 0.0 }
    }

    pub fn is_wall(self) -> bool {
        self.r == 0.0
    }
}

/// One factor coordinate of a developed point: fundamental-domain data plus
/// the sheet sign. The wall point is shared by both sheets and canonicalizes
/// to `(0, 0, Plus)`.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct ConeCoord {
    pub r: f64,
    pub theta: f64,
    pub sheet: Sheet,
}

impl ConeCoord {
    pub fn new(r: f64, theta: f64, sheet: Sheet) -> Result<Self> {
        let rt = RTheta::new(r, theta)?;
        if rt.is_wall() {
            return Ok(Self::vertex());
        }
        Ok(Self {
            r: rt.r,
            theta: rt.theta,
            sheet,
        })
    }

    pub fn vertex() -> Self {
        Self {
            r: 0.0,
            theta: 0.0,
            sheet: Sheet::Plus,
        }
    }

    pub fn is_vertex(self) -> bool {
        self.r == 0.0
    }

    pub fn rtheta(self) -> RTheta {
        RTheta {
            r: self.r,
            theta: self.theta,
        }
    }
}

/// Developed coordinates of a [`DevPoint`]: one [`ConeCoord`] per pants
/// curve, sheet signs read off the chamber word parities.
#[derive(Clone, PartialEq, Debug)]
pub struct ModelPoint {
    factors: Vec<ConeCoord>,
}

impl ModelPoint {
    /// Realizes a development point in the chart. The chamber word must use
    /// pants letters only; other reflections have no coordinates here.
    pub fn of(chart: &ModelChart, p: &DevPoint) -> Result<ModelPoint> {
        chart.check_realized(p)?;
        let coords = match p.domain().payload() {
            DomainPayload::Model(coords) => coords,
            DomainPayload::Symbolic(name) => {
                return Err(Error::ConstraintViolated(format!(
                    "symbolic point {name} carries no coordinates"
                )))
            }
        };
        let factors = coords
            .iter()
            .enumerate()
            .map(|(i, rt)| {
                let curve = chart.factor_curve(i);
                let odd = p
                    .chamber()
                    .letters()
                    .iter()
                    .filter(|&&l| l == curve)
                    .count()
                    % 2
                    == 1;
                ConeCoord::new(rt.r, rt.theta, Sheet::from_parity(odd))
                    .expect("domain coords already validated")
            })
            .collect();
        Ok(ModelPoint { factors })
    }

    /// Assembles a point directly from factor coordinates (the factors come
    /// already canonicalized by `ConeCoord`).
    pub fn from_factors(factors: Vec<ConeCoord>) -> ModelPoint {
        ModelPoint { factors }
    }

    pub fn factors(&self) -> &[ConeCoord] {
        &self.factors
    }

    pub fn factor(&self, i: usize) -> ConeCoord {
        self.factors[i]
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}
