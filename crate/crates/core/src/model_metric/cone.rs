//! Geodesics of one cone factor.
//!
//! Inside a sheet the metric is `dr^2 + f(r)^2 dtheta^2`, `f(r) = r^p`.
//! Along a geodesic the Clairaut constant `c = f(r) sin(phi)` is conserved
//! (`phi` the angle against the meridian), equivalently `f(r)^2 dtheta/ds =
//! +-c`. Radii along the path satisfy `f(r) >= c` with equality exactly at
//! the turning point.
//!
//! Everything is integrated in the variable `w` defined by
//! `f(r) = c cosh(w)`, signed negative before the turning point:
//!
//! ```text
//! r(w)      = r_t cosh(w)^(1/p)                 r_t = c^(1/p)
//! ds/dw     = (r_t/p) cosh(w)^(1/p)
//! dtheta/dw = kappa / (p r_t^(p-1)) * cosh(w)^(1/p - 2)
//! dr/ds     = tanh(w),   f dtheta/ds = kappa sech(w)
//! ```
//!
//! Both integrands are analytic on all of `w`, including the turning point,
//! so plain Gauss-Legendre panels converge fast and no endpoint is singular.
//! The boundary-value problem "hit a given angle gap" reduces to a
//! one-dimensional root solve in `c`: the direct (monotone radius) branch
//! sweeps an angle increasing in `c`, the turning branch an angle strictly
//! decreasing in `c`, and the two branches meet at `c = f(min r)`.

use crate::error::{Error, Result};
use crate::model_metric::{ConeCoord, CuspProfile, Sheet};
use crate::tolerances::LENGTH_ABS_TOL;

/// 16-point Gauss-Legendre nodes on [-1, 1], positive half.
const GL_X: [f64; 8] = [
    0.0950125098376374401853193,
    0.2816035507792589132304605,
    0.4580167776572273863424194,
    0.6178762444026437484466718,
    0.7554044083550030338951012,
    0.8656312023878317438804679,
    0.9445750230732325760779884,
    0.9894009349916499325961542,
];
const GL_W: [f64; 8] = [
    0.1894506104550684962853967,
    0.1826034150449235888667637,
    0.1691565193950025381893121,
    0.1495959888165767320815017,
    0.1246289712555338720524763,
    0.0951585116824927848099251,
    0.0622535239386478928628438,
    0.0271524594117540948517806,
];

/// Composite 16-point Gauss-Legendre quadrature with bounded panel width.
/// The integrands here are analytic with unit length scale, so width 3/4
/// leaves the panel error far below the length tolerance.
fn gl_integral(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let panels = ((b - a).abs() / 0.75).ceil().max(1.0) as usize;
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let mid = a + (k as f64 + 0.5) * h;
        let half = 0.5 * h;
        let mut acc = 0.0;
        for i in 0..8 {
            acc += GL_W[i] * (f(mid + half * GL_X[i]) + f(mid - half * GL_X[i]));
        }
        total += acc * half;
    }
    total
}

/// `cosh(|w|)^alpha` without overflow: for large `|w|`, `cosh(w)^alpha =
/// exp(alpha (|w| - ln 2))` up to a relative error below 1e-26.
fn cosh_pow(w: f64, alpha: f64) -> f64 {
    let aw = w.abs();
    if aw <= 30.0 {
        aw.cosh().powf(alpha)
    } else {
        (alpha * (aw - std::f64::consts::LN_2)).exp()
    }
}

/// `arccosh(x)` from `ln(x) >= 0`, stable both near 1 and for arguments far
/// beyond direct representability.
fn acosh_from_ln(ln_x: f64) -> f64 {
    let t = ln_x.max(0.0);
    if t < 0.5 {
        let xm1 = t.exp_m1();
        (xm1 + (xm1 * (xm1 + 2.0)).sqrt()).ln_1p()
    } else {
        t + (1.0 + (1.0 - (-2.0 * t).exp()).sqrt()).ln()
    }
}

/// `arccosh(rho^p)` for `rho >= 1`.
fn acosh_ratio(rho: f64, p: f64) -> f64 {
    acosh_from_ln(p * rho.ln())
}

fn ln_cosh(t: f64) -> f64 {
    if t.abs() < 20.0 {
        t.cosh().ln()
    } else {
        t.abs() - std::f64::consts::LN_2 + (-2.0 * t.abs()).exp().ln_1p()
    }
}

/// Angle contributions are truncated at this |w|: the integrand decays like
/// exp(-(2 - 1/p) w), so for p >= 2 the dropped tail is below 1e-29.
const THETA_W_CUT: f64 = 45.0;

/// Cap on the branch parameter `t = arccosh((r_lo/r_t)^p)`. Past this the
/// turning radius has underflowed beyond any physical meaning and the
/// geodesic is indistinguishable from the through-wall concatenation to
/// machine precision (the gap is O(r_t)).
const T_CAP: f64 = 2400.0;

/// A same-sheet geodesic arc in `w`-parameters, `w_start < w_end`.
#[derive(Clone, Debug)]
pub struct SmoothArc {
    pub profile: CuspProfile,
    pub sheet: Sheet,
    /// Clairaut constant, > 0.
    pub c: f64,
    /// Turning radius `c^(1/p)`; the radius minimum over the full line.
    pub r_t: f64,
    /// Direction of theta traversal, +1 or -1.
    pub kappa: f64,
    /// Theta at `w_start`. All angles are integrated from here; anchoring at
    /// the virtual turning point would cancel catastrophically on arcs that
    /// start far up the profile.
    pub theta_start: f64,
    pub w_start: f64,
    pub w_end: f64,
    length: f64,
}

impl SmoothArc {
    /// Unsigned theta accumulated between two parameters, in traversal order.
    fn theta_span(&self, w_a: f64, w_b: f64) -> f64 {
        theta_span(self.profile, self.r_t, w_a, w_b)
    }

    /// Arclength measured from `w_start`.
    pub fn s_of_w(&self, w: f64) -> f64 {
        let p = self.profile.exponent();
        (self.r_t / p) * gl_integral(|u| cosh_pow(u, 1.0 / p), self.w_start, w)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Inverts `s_of_w` by safeguarded Newton; `ds/dw` is analytic.
    pub fn w_of_s(&self, s: f64) -> f64 {
        self.invert_arclength(s.clamp(0.0, self.length), self.w_start, self.w_end)
    }

    /// The same arc prolonged by `extra` arclength past its end.
    pub fn extended_by(&self, extra: f64) -> SmoothArc {
        let target = self.length + extra;
        // Along the ascent, arclength gain dominates radius gain, so the
        // parameter of the radius r(end) + extra + r_t brackets the target.
        let p = self.profile.exponent();
        let r_end = self.r_t * cosh_pow(self.w_end, 1.0 / p);
        let hi = acosh_ratio((r_end + extra + self.r_t) / self.r_t, p) + 1.0;
        let w_end = self.invert_arclength(target, self.w_end, hi);
        let mut out = self.clone();
        out.w_end = w_end;
        out.length = target;
        out
    }

    /// Only the new piece of `extended_by(extra)`, parameterized from the
    /// old endpoint.
    pub fn prolongation(&self, extra: f64) -> SmoothArc {
        let mut out = self.extended_by(extra);
        out.theta_start = self.eval_w(self.w_end).theta;
        out.w_start = self.w_end;
        out.length = extra;
        out
    }

    /// Solves `s_of_w(w) = target` on `[lo, hi]`, safeguarded Newton.
    fn invert_arclength(&self, target: f64, mut lo: f64, mut hi: f64) -> f64 {
        let p = self.profile.exponent();
        let mut w = 0.5 * (lo + hi);
        for _ in 0..80 {
            let g = self.s_of_w(w) - target;
            if g > 0.0 {
                hi = w;
            } else {
                lo = w;
            }
            if g.abs() <= 1e-13 * (1.0 + target.abs()) {
                return w;
            }
            let dsdw = (self.r_t / p) * cosh_pow(w, 1.0 / p);
            let next = w - g / dsdw;
            w = if next > lo && next < hi {
                next
            } else {
                0.5 * (lo + hi)
            };
        }
        w
    }

    pub fn eval_w(&self, w: f64) -> ConeCoord {
        let p = self.profile.exponent();
        let r = self.r_t * cosh_pow(w, 1.0 / p);
        let theta = self.theta_start + self.kappa * self.theta_from_start(w);
        ConeCoord::new(r, theta, self.sheet).expect("arc coordinates are finite")
    }

    /// Signed theta accumulated from `w_start` to `w`.
    fn theta_from_start(&self, w: f64) -> f64 {
        if w >= self.w_start {
            self.theta_span(self.w_start, w)
        } else {
            -self.theta_span(w, self.w_start)
        }
    }

    /// Unit tangent in the orthonormal frame (radial, circumferential) at a
    /// given `w`, pointing in the direction of increasing arclength.
    pub fn tangent_at_w(&self, w: f64) -> (f64, f64) {
        (w.tanh(), self.kappa / w.cosh())
    }
}

/// The shape of one factor of a product geodesic.
#[derive(Clone, Debug)]
pub enum FactorGeodesic {
    /// This factor does not move.
    Constant { at: ConeCoord },
    /// Radial segment inside one sheet; covers wall endpoints.
    Radial {
        sheet: Sheet,
        theta: f64,
        r_start: f64,
        r_end: f64,
    },
    /// Radial in, radial out through the wall point. Always the case across
    /// sheets; also the same-sheet limit once the turning radius underflows.
    ThroughWall { start: ConeCoord, end: ConeCoord },
    /// Clairaut arc inside one sheet.
    Smooth(SmoothArc),
}

/// A factor geodesic with its arclength, parameterized on `[0, length]`.
#[derive(Clone, Debug)]
pub struct FactorPath {
    pub kind: FactorGeodesic,
    pub length: f64,
}

impl FactorPath {
    pub fn start(&self) -> ConeCoord {
        self.eval(0.0)
    }

    pub fn end(&self) -> ConeCoord {
        self.eval(self.length)
    }

    pub fn eval(&self, s: f64) -> ConeCoord {
        let s = s.clamp(0.0, self.length);
        match &self.kind {
            FactorGeodesic::Constant { at } => *at,
            FactorGeodesic::Radial {
                sheet,
                theta,
                r_start,
                r_end,
            } => {
                let dir = if r_end >= r_start { 1.0 } else { -1.0 };
                ConeCoord::new(r_start + dir * s, *theta, *sheet)
                    .expect("radial coordinates are finite")
            }
            FactorGeodesic::ThroughWall { start, end } => {
                if s < start.r {
                    ConeCoord::new(start.r - s, start.theta, start.sheet).unwrap()
                } else {
                    ConeCoord::new(s - start.r, end.theta, end.sheet).unwrap()
                }
            }
            FactorGeodesic::Smooth(arc) => arc.eval_w(arc.w_of_s(s)),
        }
    }

    /// Arclength at which the path touches the wall, if it does so away from
    /// its endpoints.
    pub fn crossing_param(&self) -> Option<f64> {
        match &self.kind {
            FactorGeodesic::ThroughWall { start, .. } => Some(start.r),
            _ => None,
        }
    }

    /// Conserved `f(r)^2 dtheta/ds` along the path (0 off the smooth case).
    pub fn clairaut(&self) -> f64 {
        match &self.kind {
            FactorGeodesic::Smooth(arc) => arc.kappa * arc.c,
            _ => 0.0,
        }
    }

    /// Unit tangent at the start, frame (radial, circumferential) on the
    /// start sheet. None when the factor is constant.
    pub fn initial_tangent(&self) -> Option<(f64, f64)> {
        match &self.kind {
            FactorGeodesic::Constant { .. } => None,
            FactorGeodesic::Radial { r_start, r_end, .. } => {
                Some((if r_end >= r_start { 1.0 } else { -1.0 }, 0.0))
            }
            FactorGeodesic::ThroughWall { .. } => Some((-1.0, 0.0)),
            FactorGeodesic::Smooth(arc) => Some(arc.tangent_at_w(arc.w_start)),
        }
    }

    /// Unit tangent at the end, frame on the end sheet, pointing forward.
    pub fn final_tangent(&self) -> Option<(f64, f64)> {
        match &self.kind {
            FactorGeodesic::Constant { .. } => None,
            FactorGeodesic::Radial { r_start, r_end, .. } => {
                Some((if r_end >= r_start { 1.0 } else { -1.0 }, 0.0))
            }
            FactorGeodesic::ThroughWall { .. } => Some((1.0, 0.0)),
            FactorGeodesic::Smooth(arc) => Some(arc.tangent_at_w(arc.w_end)),
        }
    }
}

/// Distance from a point to the wall of its factor: the radial coordinate.
pub fn distance_to_wall(a: ConeCoord) -> f64 {
    a.r
}

/// Factor geodesic from an initial point, unit direction in the orthonormal
/// frame (radial, circumferential), and arclength: the exponential map of
/// one factor. A radial direction continuing past the wall flips the sheet
/// and keeps theta, mirroring how through-wall segments arise as limits.
pub fn shoot_factor(
    profile: CuspProfile,
    start: ConeCoord,
    dir: (f64, f64),
    len: f64,
) -> Result<FactorPath> {
    if !(len.is_finite() && len >= 0.0) {
        return Err(Error::ConstraintViolated(format!(
            "shooting length must be finite and nonnegative, got {len}"
        )));
    }
    let norm = (dir.0 * dir.0 + dir.1 * dir.1).sqrt();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::ConstraintViolated(
            "shooting direction must be a nonzero finite vector".into(),
        ));
    }
    let (u_r, u_t) = (dir.0 / norm, dir.1 / norm);
    if len == 0.0 {
        return Ok(FactorPath {
            kind: FactorGeodesic::Constant { at: start },
            length: 0.0,
        });
    }
    if start.is_vertex() {
        // Only radial rays leave the wall point; pick the sheet by the
        // radial sign.
        let sheet = if u_r >= 0.0 { Sheet::Plus } else { Sheet::Minus };
        return Ok(FactorPath {
            kind: FactorGeodesic::Radial {
                sheet,
                theta: 0.0,
                r_start: 0.0,
                r_end: len,
            },
            length: len,
        });
    }
    if u_t == 0.0 {
        if u_r > 0.0 || len <= start.r {
            let r_end = start.r + u_r.signum() * len;
            return Ok(FactorPath {
                kind: FactorGeodesic::Radial {
                    sheet: start.sheet,
                    theta: start.theta,
                    r_start: start.r,
                    r_end,
                },
                length: len,
            });
        }
        let end = ConeCoord::new(len - start.r, start.theta, start.sheet.flip())?;
        return Ok(FactorPath {
            kind: FactorGeodesic::ThroughWall { start, end },
            length: len,
        });
    }
    let p = profile.exponent();
    let kappa = u_t.signum();
    // tanh(w0) = u_r fixes the start parameter; the turning radius follows.
    let w0 = u_r.clamp(-1.0 + 1e-16, 1.0 - 1e-16).atanh();
    let r_t = start.r * cosh_pow(w0, -1.0 / p);
    let seed = SmoothArc {
        profile,
        sheet: start.sheet,
        c: profile.f(r_t),
        r_t,
        kappa,
        theta_start: start.theta,
        w_start: w0,
        w_end: w0,
        length: 0.0,
    };
    let arc = seed.extended_by(len);
    Ok(FactorPath {
        kind: FactorGeodesic::Smooth(arc),
        length: len,
    })
}

/// Geodesic distance on the completed bowtie (two mirror sheets glued at the
/// wall point).
pub fn cone_distance(profile: CuspProfile, a: ConeCoord, b: ConeCoord) -> Result<f64> {
    Ok(factor_path(profile, a, b)?.length)
}

/// The geodesic between two factor coordinates.
pub fn factor_path(profile: CuspProfile, a: ConeCoord, b: ConeCoord) -> Result<FactorPath> {
    if a == b {
        return Ok(FactorPath {
            kind: FactorGeodesic::Constant { at: a },
            length: 0.0,
        });
    }
    if a.is_vertex() || b.is_vertex() {
        let (r_start, r_end, theta, sheet) = if a.is_vertex() {
            (0.0, b.r, b.theta, b.sheet)
        } else {
            (a.r, 0.0, a.theta, a.sheet)
        };
        return Ok(FactorPath {
            kind: FactorGeodesic::Radial {
                sheet,
                theta,
                r_start,
                r_end,
            },
            length: (r_end - r_start).abs(),
        });
    }
    if a.sheet != b.sheet {
        // Every cross-sheet path passes the wall point; the infimum over the
        // gluing set is radial in plus radial out, exactly.
        return Ok(FactorPath {
            kind: FactorGeodesic::ThroughWall { start: a, end: b },
            length: a.r + b.r,
        });
    }
    let dtheta = b.theta - a.theta;
    if dtheta == 0.0 {
        return Ok(FactorPath {
            kind: FactorGeodesic::Radial {
                sheet: a.sheet,
                theta: a.theta,
                r_start: a.r,
                r_end: b.r,
            },
            length: (a.r - b.r).abs(),
        });
    }
    solve_smooth(profile, a, b, dtheta)
}

/// Signed `w` interval and turning radius of the candidate arc through radii
/// `(r1, r2)` at branch parameter `tau`.
///
/// `t = |tau|` prescribes the `w`-height of the lower endpoint: `r_t =
/// r_lo cosh(t)^(-1/p)`. Negative `tau` selects the monotone-radius branch
/// (the turning point at `w = 0` is virtual), positive `tau` the branch
/// passing through it. The angle swept is continuous and increasing in
/// `tau`, which keeps the root solve well conditioned at every radius scale;
/// the Clairaut constant itself loses all resolution near the branch
/// junction when radii are small.
struct BranchGeom {
    r_t: f64,
    w_start: f64,
    w_end: f64,
}

fn branch_geom(profile: CuspProfile, r1: f64, r2: f64, tau: f64) -> BranchGeom {
    let p = profile.exponent();
    let t = tau.abs();
    let (r_lo, r_hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
    let r_t = r_lo * cosh_pow(t, -1.0 / p);
    // arccosh((r_hi/r_t)^p) = arccosh((r_hi/r_lo)^p cosh t). Near radius
    // ties with small t the log-form argument is a difference of values
    // near 1 and loses half its digits, so assemble x - 1 from exact small
    // pieces there: q cosh t - 1 = (q - 1) cosh t + 2 sinh^2(t/2).
    let d = p * (r_hi / r_lo).ln();
    let w_hi = if d < 0.5 && t < 0.5 {
        let xm1 = d.exp_m1() * t.cosh() + 2.0 * (0.5 * t).sinh().powi(2);
        (xm1 + (xm1 * (xm1 + 2.0)).sqrt()).ln_1p()
    } else {
        acosh_from_ln(d + ln_cosh(t))
    };
    let (w_start, w_end) = if tau > 0.0 {
        if r1 <= r2 {
            (-t, w_hi)
        } else {
            (-w_hi, t)
        }
    } else if r1 <= r2 {
        (t, w_hi)
    } else {
        (-w_hi, -t)
    };
    BranchGeom { r_t, w_start, w_end }
}

/// Unsigned angle swept over a signed `w` interval at turning radius `r_t`.
/// The integrand peaks at the point of the interval nearest `w = 0`; only a
/// window of width `THETA_W_CUT` around that peak contributes above relative
/// truncation 1e-29, so integration is restricted to it. This keeps the
/// quadrature cost bounded and stays accurate on arcs that live entirely far
/// up the profile, where a fixed cut at `|w| = THETA_W_CUT` would discard the
/// whole interval.
fn theta_span(profile: CuspProfile, r_t: f64, w_a: f64, w_b: f64) -> f64 {
    let p = profile.exponent();
    let (lo, hi) = if w_a <= w_b { (w_a, w_b) } else { (w_b, w_a) };
    let peak = 0.0f64.clamp(lo, hi);
    let a = lo.max(peak - THETA_W_CUT);
    let b = hi.min(peak + THETA_W_CUT);
    let integral = gl_integral(|w| cosh_pow(w, 1.0 / p - 2.0), a, b);
    let pref = 1.0 / (p * r_t.powf(p - 1.0));
    // The product is well-scaled whenever either factor is; avoid 0 * inf.
    if integral == 0.0 {
        0.0
    } else if !pref.is_finite() {
        f64::INFINITY
    } else {
        pref * integral
    }
}

fn arc_length(profile: CuspProfile, r_t: f64, w_a: f64, w_b: f64) -> f64 {
    let p = profile.exponent();
    (r_t / p) * gl_integral(|w| cosh_pow(w, 1.0 / p), w_a, w_b)
}

fn solve_smooth(
    profile: CuspProfile,
    a: ConeCoord,
    b: ConeCoord,
    dtheta: f64,
) -> Result<FactorPath> {
    let target = dtheta.abs();
    let kappa = dtheta.signum();
    let (r1, r2) = (a.r, b.r);

    let span_at = |tau: f64| -> f64 {
        let g = branch_geom(profile, r1, r2, tau);
        theta_span(profile, g.r_t, g.w_start, g.w_end)
    };

    // Angle at the branch junction: the widest the monotone branch gets.
    let span_junction = span_at(0.0);
    let tau = if target == span_junction {
        0.0
    } else if target < span_junction {
        // Monotone-radius branch; the sweep shrinks to 0 as tau -> -inf.
        let mut lo = -1.0;
        while span_at(lo) > target {
            lo *= 2.0;
            if lo < -T_CAP {
                return Err(Error::SolverNoConvergence(format!(
                    "no bracket for angle gap {target} between radii {r1} and {r2}"
                )));
            }
        }
        brent_root(
            span_fn(&span_at, target),
            lo,
            0.0,
            span_at(lo) - target,
            span_junction - target,
            1e-13 * (1.0 + target),
        )?
    } else {
        // Turning branch; the sweep diverges as tau -> +inf.
        let mut hi = 1.0;
        while span_at(hi) < target {
            hi *= 2.0;
            if hi > T_CAP {
                // Turning radius beyond underflow: the geodesic coincides
                // with the through-wall concatenation to machine precision.
                return Ok(FactorPath {
                    kind: FactorGeodesic::ThroughWall { start: a, end: b },
                    length: r1 + r2,
                });
            }
        }
        brent_root(
            span_fn(&span_at, target),
            0.0,
            hi,
            span_junction - target,
            span_at(hi) - target,
            1e-13 * (1.0 + target),
        )?
    };

    let g = branch_geom(profile, r1, r2, tau);
    let length = arc_length(profile, g.r_t, g.w_start, g.w_end);
    let arc = SmoothArc {
        profile,
        sheet: a.sheet,
        c: profile.f(g.r_t),
        r_t: g.r_t,
        kappa,
        theta_start: a.theta,
        w_start: g.w_start,
        w_end: g.w_end,
        length,
    };
    // The root solve is accurate relative to the full traversed span, which
    // dwarfs the endpoint coordinate for deep-cusp winding arcs.
    debug_assert!(
        (arc.eval_w(g.w_end).theta - b.theta).abs() <= 1e-7 * (1.0 + dtheta.abs() + b.theta.abs()),
        "angle boundary condition violated: r1 {r1:e} r2 {r2:e} dtheta {dtheta:e} tau {tau:e} r_t {:e} end theta {:e} vs {:e}",
        g.r_t,
        arc.eval_w(g.w_end).theta,
        b.theta
    );
    Ok(FactorPath {
        kind: FactorGeodesic::Smooth(arc),
        length,
    })
}

fn span_fn<'a>(span_at: &'a impl Fn(f64) -> f64, target: f64) -> impl FnMut(f64) -> f64 + 'a {
    move |tau| span_at(tau) - target
}

/// Classic Brent root finder on a bracket `[a, b]` with `fa * fb <= 0`.
fn brent_root(
    mut f: impl FnMut(f64) -> f64,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    mut fb: f64,
    ftol: f64,
) -> Result<f64> {
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa * fb > 0.0 {
        return Err(Error::SolverNoConvergence(format!(
            "root not bracketed: f({a}) = {fa}, f({b}) = {fb}"
        )));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.abs() > fc.abs() {
            // b is the best iterate; keep it that way.
            (a, b, c) = (b, c, b);
            (fa, fb, fc) = (fb, fc, fb);
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 1e-300;
        let m = 0.5 * (c - b);
        if fb.abs() <= ftol || m.abs() <= tol {
            return Ok(b);
        }
        if e.abs() < tol || fa.abs() <= fb.abs() || !fa.is_finite() || !fc.is_finite() {
            // Bisect; interpolation through non-finite values would stall.
            d = m;
            e = m;
        } else {
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * m * s, 1.0 - s)
            } else {
                let q0 = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * m * q0 * (q0 - r) - (b - a) * (r - 1.0)),
                    (q0 - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol * m.signum() };
        fb = f(b);
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    Err(Error::SolverNoConvergence(
        "root iteration cap exceeded".into(),
    ))
}

/// Checks that the total length of a factor path equals the distance between
/// its endpoints, a cheap self-consistency guard used by samplers.
pub fn length_consistent(profile: CuspProfile, path: &FactorPath) -> Result<bool> {
    let d = cone_distance(profile, path.start(), path.end())?;
    Ok((d - path.length).abs() <= 10.0 * LENGTH_ABS_TOL.max(1e-12 * (1.0 + d)))
}
