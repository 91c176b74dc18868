//! Right-angled Coxeter developments of cusp-product metric models.
//!
//! The library starts from a finite system of curves on a closed surface of
//! genus `g >= 2` together with its intersection relation. Disjointness
//! cliques form an abstract simplicial complex, and the curves generate a
//! right-angled Coxeter group: each curve is an involution, disjoint curves
//! commute, intersecting curves satisfy no relation. Fixing a pants
//! decomposition (a maximal disjointness clique) equips the quotient domain
//! with a concrete metric model: one cusp-like cone factor per pants curve,
//! with surface-of-revolution metric `dr^2 + r^(2p) dtheta^2` per factor
//! (default `p = 3`). Reflecting the domain through its walls develops the
//! model into a complex of isometric chambers indexed by group elements.
//!
//! On top of the model the crate provides:
//!
//! * exact combinatorics: ShortLex normal forms, parabolic cosets, the
//!   stratum poset of the development ([`coxeter`], [`development`]);
//! * numeric geometry: factor geodesics via the Clairaut first integral,
//!   product geodesics across walls, logarithm maps, geodesic extension
//!   through walls ([`model_metric`]);
//! * nonpositive-curvature analysis: triangle comparison residuals,
//!   Alexandrov angles, circumcenters with an angle certificate,
//!   Caratheodory decompositions and finite-rank audits ([`npc_analysis`]);
//! * limit experiments: twist isometries, the twist-to-reflection limit,
//!   non-compactness of twist orbits, concatenation decomposition of
//!   wall-crossing geodesics ([`limits`]);
//! * diagram symmetries acting on the development ([`symmetry`]).
//!
//! All values are immutable after construction and every operation is a pure
//! function of its inputs, so everything here is safe to use from parallel
//! workers. Randomized suites take an explicit seed and are reproducible.

pub mod curve_complex;
pub mod coxeter;
pub mod development;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod limits;
pub mod model_metric;
pub mod npc_analysis;
pub mod sampling;
pub mod symmetry;
pub mod tolerances;

pub use error::{Error, Result};
