//! Closed-form optimal approximations against the canonical sets.
//!
//! In Bloch coordinates `S'(theta)` is the rectangle in the xz plane with
//! vertices `(0,0,±1)` and `±(sin 2t, 0, cos 2t)`; `S''(vartheta)` is the
//! square with vertices `±(sin 2v, 0, cos 2v)` and `(0,±1,0)`; `S'''(theta)`
//! is the bipyramid over the `S'` rectangle with apexes `(0,±1,0)`. Each
//! solver decides which face the projection lands on (the case label) and
//! returns the distance together with every optimal weight vector.
//!
//! All solvers require the canonical region `a <= 1/2`, `phi in [0, pi/2]`
//! (equivalently nonnegative `<sigma_x>`, `<sigma_y>`, `<sigma_z>`); the case
//! conditions are not valid elsewhere. Type I and the three-gate
//! decomposition further require `theta in (0, pi/2]`.

mod weights;

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::Serialize;

pub use weights::{FreeParam, WeightFamily};

use crate::error::{Error, Result};
use crate::qubit::QubitState;
use crate::tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CaseLabel {
    /// Projection inside the `S'` rectangle.
    #[serde(rename = "I_i")]
    I1,
    /// Beyond the `|0>`–`|2>` edge.
    #[serde(rename = "I_ii")]
    I2,
    /// Beyond the `|1>`–`|2>` edge.
    #[serde(rename = "I_iii")]
    I3,
    /// Projection inside the `S''` square.
    #[serde(rename = "II_i")]
    II1,
    /// Beyond the `|Psi_3>`–`|Psi_5>` edge.
    #[serde(rename = "II_ii")]
    II2,
    /// Beyond the `|Psi_4>`–`|Psi_5>` edge.
    #[serde(rename = "II_iii")]
    II3,
}

impl CaseLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::I1 => "I_i",
            Self::I2 => "I_ii",
            Self::I3 => "I_iii",
            Self::II1 => "II_i",
            Self::II2 => "II_ii",
            Self::II3 => "II_iii",
        }
    }

    pub fn is_interior(&self) -> bool {
        matches!(self, Self::I1 | Self::II1)
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SolverFamily {
    TypeI,
    TypeII,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproxResult {
    pub distance: f64,
    pub case: CaseLabel,
    pub weights: WeightFamily,
    /// `(1 + <U_{2 vartheta}>)/2`, Type II only.
    pub mu: Option<f64>,
    /// `<sigma_y>/2`, Type II only.
    pub nu: Option<f64>,
}

fn require_canonical(state: &QubitState) -> Result<()> {
    if state.is_canonical() {
        Ok(())
    } else {
        let r = state.bloch();
        Err(Error::NonCanonical { x: r.x, y: r.y, z: r.z })
    }
}

fn require_theta(theta: f64) -> Result<()> {
    if theta.is_finite() && theta > 0.0 && theta <= FRAC_PI_2 {
        Ok(())
    } else {
        Err(Error::UnsupportedAngle { name: "theta", value: theta, range: "(0, pi/2]" })
    }
}

/// `x * ratio` with `0 * inf` read as `0` (only reachable at `theta = pi/2`, `x = 0`).
fn scaled(x: f64, ratio: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * ratio
    }
}

/// Signed violations of the two `S'` edges facing the canonical quadrant:
/// `(x sin t - (1 - z) cos t, x cos t - (1 + z) sin t)`. Both are `<= 0` exactly
/// when `(1 - z)/x >= tan t >= x/(1 + z)`, without dividing by `x`.
fn rectangle_violations(x: f64, z: f64, theta: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    (x * s - (1.0 - z) * c, x * c - (1.0 + z) * s)
}

/// Optimal approximation of a canonical state by `S'(theta)`.
pub fn solve_type1(state: &QubitState, theta: f64) -> Result<ApproxResult> {
    require_canonical(state)?;
    require_theta(theta)?;
    let r = state.bloch();
    let (x, y, z) = (r.x, r.y.max(0.0), r.z);
    let (s, c) = theta.sin_cos();
    let (tan, cot) = (s / c, c / s);
    let (upper, lower) = rectangle_violations(x, z, theta);
    let tol = tolerances::CONDITION;

    let (case, distance, weights) = if upper <= tol && lower <= tol {
        let p0 = 0.5 + z / 2.0 - scaled(x, cot) / 2.0;
        let p1 = 0.5 - z / 2.0 - scaled(x, tan) / 2.0;
        let p2 = scaled(x, 1.0 / (2.0 * s * c));
        let family = WeightFamily::fixed(vec![p0, p1, p2, 0.0])
            .with_param("t", p0.min(p1), vec![-1.0, -1.0, 1.0, 1.0]);
        (CaseLabel::I1, y, family)
    } else if upper >= lower {
        let p2 = 0.5 - z / 2.0 + scaled(x, cot) / 2.0;
        let family = WeightFamily::fixed(vec![1.0 - p2, 0.0, p2, 0.0]);
        (CaseLabel::I2, upper.hypot(y), family)
    } else {
        let p2 = 0.5 + z / 2.0 + scaled(x, tan) / 2.0;
        let family = WeightFamily::fixed(vec![0.0, 1.0 - p2, p2, 0.0]);
        (CaseLabel::I3, lower.hypot(y), family)
    };
    Ok(ApproxResult { distance, case, weights, mu: None, nu: None })
}

/// `mu` and `nu` in terms of `(a, k, phi)`.
pub fn mu_nu(state: &QubitState, vartheta: f64) -> (f64, f64) {
    let (a, k, phi) = (state.a(), state.k(), state.phi());
    let coherence = k * (a * (1.0 - a)).sqrt();
    let cos_v = vartheta.cos();
    let mu = a + cos_v * cos_v * (1.0 - 2.0 * a) + coherence * phi.cos() * (2.0 * vartheta).sin();
    let nu = coherence * phi.sin();
    (mu, nu)
}

/// Optimal approximation of a canonical state by `S''(vartheta)`.
///
/// The out-of-plane part `<sigma_x>^2 + <sigma_z>^2 - <U_{2v}>^2` is evaluated as
/// the square of `x cos 2v - z sin 2v`, which avoids cancellation near the plane.
pub fn solve_type2(state: &QubitState, vartheta: f64) -> Result<ApproxResult> {
    require_canonical(state)?;
    if !(vartheta.is_finite() && vartheta > 0.0 && vartheta < PI) {
        return Err(Error::UnsupportedAngle { name: "vartheta", value: vartheta, range: "(0, pi)" });
    }
    let r = state.bloch();
    let (x, y, z) = (r.x, r.y, r.z);
    let (s2, c2) = (2.0 * vartheta).sin_cos();
    let u = c2 * z + s2 * x;
    let off_plane = x * c2 - z * s2;
    let (mu, nu) = mu_nu(state, vartheta);
    let tol = tolerances::CONDITION;

    let (case, distance, weights) = if mu > 1.0 - nu + tol {
        let edge = u + y - 1.0;
        let family = WeightFamily::fixed(vec![mu - nu, 0.0, 1.0 - mu + nu, 0.0]);
        (CaseLabel::II2, (off_plane * off_plane + edge * edge / 2.0).sqrt(), family)
    } else if mu < nu - tol {
        let edge = y - u - 1.0;
        let family = WeightFamily::fixed(vec![0.0, 1.0 - mu - nu, mu + nu, 0.0]);
        (CaseLabel::II3, (off_plane * off_plane + edge * edge / 2.0).sqrt(), family)
    } else {
        let family = WeightFamily::fixed(vec![mu - nu, 1.0 - mu - nu, 2.0 * nu, 0.0])
            .with_param("t", (mu - nu).min(1.0 - mu - nu), vec![-1.0, -1.0, 1.0, 1.0]);
        (CaseLabel::II1, off_plane.abs(), family)
    };
    Ok(ApproxResult { distance, case, weights, mu: Some(mu), nu: Some(nu) })
}

/// Case label of the corresponding solver.
pub fn classify_region(state: &QubitState, angle: f64, family: SolverFamily) -> Result<CaseLabel> {
    Ok(match family {
        SolverFamily::TypeI => solve_type1(state, angle)?.case,
        SolverFamily::TypeII => solve_type2(state, angle)?.case,
    })
}

/// Admissible `tan theta` values for a decomposition over `S'''(theta)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TanInterval {
    pub lower: f64,
    /// `None` when unbounded (`<sigma_x>` = 0 up to rounding).
    pub upper: Option<f64>,
}

impl TanInterval {
    /// The same interval as angles in `[0, pi/2]`.
    pub fn theta_bounds(&self) -> (f64, f64) {
        (self.lower.atan(), self.upper.map_or(FRAC_PI_2, f64::atan))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompResult {
    pub decomposable: bool,
    /// `(1 - <sigma_y>)^2`.
    pub criterion_lhs: f64,
    /// `<sigma_x>^2 + <sigma_z>^2`.
    pub criterion_rhs: f64,
    /// Empty (`None`) when not decomposable.
    pub tan_interval: Option<TanInterval>,
    pub theta: Option<f64>,
    /// Whether the requested `theta` admits a decomposition.
    pub decomposable_at_theta: Option<bool>,
    /// All decompositions at the requested `theta`, over `c1, c2 >= 0`.
    pub weights: Option<WeightFamily>,
}

/// Decomposability over the eigenstates of three real gates, reduced to `S'''`.
pub fn decompose_three_gates(state: &QubitState, theta: Option<f64>) -> Result<DecompResult> {
    require_canonical(state)?;
    if let Some(t) = theta {
        require_theta(t)?;
    }
    let r = state.bloch();
    let (x, y, z) = (r.x.max(0.0), r.y.max(0.0), r.z.max(0.0));
    let tol = tolerances::CONDITION;
    let criterion_lhs = (1.0 - y) * (1.0 - y);
    let criterion_rhs = x * x + z * z;
    let decomposable = criterion_lhs >= criterion_rhs - tol;

    let tan_interval = decomposable.then(|| {
        if x <= tol {
            TanInterval { lower: 0.0, upper: None }
        } else {
            let lower = x / (1.0 + z - y);
            let upper = (1.0 - z - y) / x;
            // the endpoints coincide on the criterion boundary; rounding may cross them
            let upper = upper.max(lower);
            TanInterval { lower, upper: Some(upper) }
        }
    });

    let mut result = DecompResult {
        decomposable,
        criterion_lhs,
        criterion_rhs,
        tan_interval,
        theta,
        decomposable_at_theta: None,
        weights: None,
    };
    let Some(theta) = theta else { return Ok(result) };

    // The pyramid slice at height y is the S' rectangle scaled by (1 - y).
    let (s, c) = theta.sin_cos();
    let fits = x * s <= (1.0 - z - y) * c + tol && x * c <= (1.0 + z - y) * s + tol;
    result.decomposable_at_theta = Some(fits);
    if fits {
        let (tan, cot) = (s / c, c / s);
        let p0 = (1.0 + z - y) / 2.0 - scaled(x, cot) / 2.0;
        let p1 = (1.0 - z - y) / 2.0 - scaled(x, tan) / 2.0;
        let p2 = scaled(x, 1.0 / (2.0 * s * c));
        let cap = p0.min(p1);
        result.weights = Some(
            WeightFamily::fixed(vec![p0, p1, p2, 0.0, y, 0.0])
                .with_param("c1", cap, vec![-1.0, -1.0, 0.0, 0.0, 1.0, 1.0])
                .with_param("c2", cap, vec![-1.0, -1.0, 1.0, 1.0, 0.0, 0.0])
                .with_sum_cap(cap),
        );
    }
    Ok(result)
}
