//! The surrogate metric model: a product of cusp-like cone factors, one per
//! pants curve, each a surface of revolution `dr^2 + f(r)^2 dtheta^2` with
//! profile `f(r) = r^p`, glued to a mirror copy at `r = 0` per factor
//! ("bowtie"). Reflections of the Coxeter group swap sheets factor-wise;
//! Dehn twists translate `theta`.
//!
//! Geodesics inside one sheet obey the Clairaut relation `f(r) sin(phi) = c`.
//! Cross-sheet geodesics pass the cone vertex (the wall), where the whole
//! `theta`-circle collapses to a point.

mod chart;
mod cone;
mod geodesic;
mod glue;
mod point;
mod profile;

pub use chart::ModelChart;
pub use cone::{
    cone_distance, distance_to_wall, factor_path, length_consistent, shoot_factor,
    FactorGeodesic, FactorPath, SmoothArc,
};
pub use geodesic::{
    dev_point_from_model, exp_map, extend_geodesic, first_variation_residual, log_map,
    model_distance, model_geodesic, model_geodesic_path, GeodesicSample, LogComp, LogVector,
    ModelGeodesic,
};
pub(crate) use geodesic::build_sample;
pub use glue::{glue_distance_oracle, GlueWitness};
pub use point::{ConeCoord, ModelPoint, RTheta, Sheet};
pub use profile::CuspProfile;
