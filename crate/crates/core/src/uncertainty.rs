//! Spin variances and the triple uncertainty relations.
//!
//! With `S_i = sigma_i / 2`, `(Delta S_i)^2 = (1 - <sigma_i>^2)/4`. The triple
//! relation compares `sum (Delta S_i)^2` against `(tau/2) sum |<S_i>|` with
//! `tau = 2/sqrt 3`; equality holds only for the pure state with
//! `<sigma_x> = <sigma_y> = <sigma_z> = 1/sqrt 3`. When a state is in case
//! `I_i` for `theta` and case `II_i` for `vartheta`, the quantities `M_0`,
//! `M_1`, `M_2` built from `<U_{2 vartheta}>` and the two optimal distances
//! satisfy the equality form of the same relation.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::analytic::{self, CaseLabel};
use crate::qubit::QubitState;
use crate::tolerances;

/// The triple constant `2/sqrt 3`.
pub const TRIPLE_CONSTANT: f64 = 1.154_700_538_379_251_7;

/// `4k^2 a(1-a) + (1-2a)^2`, the squared Bloch length.
pub fn f1(k: f64, a: f64) -> f64 {
    4.0 * k * k * a * (1.0 - a) + (1.0 - 2.0 * a).powi(2)
}

/// `1/2 - a + k sqrt(2a(1-a))`, the largest `sum |<S_i>|` over `phi` for canonical `a`.
pub fn f2(k: f64, a: f64) -> f64 {
    0.5 - a + k * (2.0 * a * (1.0 - a)).sqrt()
}

fn spread(expectation: f64) -> f64 {
    (1.0 - expectation * expectation).max(0.0).sqrt() / 2.0
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UncertaintyReport {
    pub d_sx: f64,
    pub d_sy: f64,
    pub d_sz: f64,
    pub abs_sx: f64,
    pub abs_sy: f64,
    pub abs_sz: f64,
    /// `sum (Delta S_i)^2`.
    pub triple_lhs: f64,
    /// `(tau/2) sum |<S_i>|`.
    pub triple_rhs: f64,
    pub f1: f64,
    pub f2: f64,
    pub theta: Option<f64>,
    pub vartheta: Option<f64>,
    /// Whether `(theta, vartheta)` put the state in cases `I_i` and `II_i`.
    pub applicable: Option<bool>,
    pub m0: Option<f64>,
    pub m1: Option<f64>,
    pub m2: Option<f64>,
    pub equality_lhs: Option<f64>,
    pub equality_rhs: Option<f64>,
    pub d_s_prime: Option<f64>,
    pub d_s_double_prime: Option<f64>,
}

impl UncertaintyReport {
    /// Slack of the triple inequality, `triple_lhs - triple_rhs`.
    pub fn triple_slack(&self) -> f64 {
        self.triple_lhs - self.triple_rhs
    }
}

pub fn report(state: &QubitState) -> UncertaintyReport {
    let r = state.bloch();
    let (abs_sx, abs_sy, abs_sz) = (r.x.abs() / 2.0, r.y.abs() / 2.0, r.z.abs() / 2.0);
    let (d_sx, d_sy, d_sz) = (spread(r.x), spread(r.y), spread(r.z));
    UncertaintyReport {
        d_sx,
        d_sy,
        d_sz,
        abs_sx,
        abs_sy,
        abs_sz,
        triple_lhs: d_sx * d_sx + d_sy * d_sy + d_sz * d_sz,
        triple_rhs: TRIPLE_CONSTANT / 2.0 * (abs_sx + abs_sy + abs_sz),
        f1: f1(state.k(), state.a()),
        f2: f2(state.k(), state.a()),
        theta: None,
        vartheta: None,
        applicable: None,
        m0: None,
        m1: None,
        m2: None,
        equality_lhs: None,
        equality_rhs: None,
        d_s_prime: None,
        d_s_double_prime: None,
    }
}

/// Report with the `M_0, M_1, M_2` terms, or flagged not applicable when the
/// state is outside case `I_i` at `theta` or outside `II_i` at `vartheta`.
pub fn equality_relation(state: &QubitState, theta: f64, vartheta: f64) -> UncertaintyReport {
    let mut rep = report(state);
    rep.theta = Some(theta);
    rep.vartheta = Some(vartheta);
    let type1 = analytic::solve_type1(state, theta).ok().filter(|r| r.case == CaseLabel::I1);
    let type2 = analytic::solve_type2(state, vartheta).ok().filter(|r| r.case == CaseLabel::II1);
    let (Some(d1), Some(d2)) = (type1, type2) else {
        rep.applicable = Some(false);
        return rep;
    };
    let r = state.bloch();
    let u = (2.0 * vartheta).cos() * r.z + (2.0 * vartheta).sin() * r.x;
    let (m0, m1, m2) = (spread(u), spread(d1.distance), spread(d2.distance));
    rep.applicable = Some(true);
    rep.m0 = Some(m0);
    rep.m1 = Some(m1);
    rep.m2 = Some(m2);
    rep.equality_lhs = Some(m0 * m0 + m1 * m1 + m2 * m2);
    rep.equality_rhs = Some(rep.triple_rhs);
    rep.d_s_prime = Some(d1.distance);
    rep.d_s_double_prime = Some(d2.distance);
    rep
}

/// `|r|^2 - <U_{2 vartheta}>^2 - D_{S'}^2 - D_{S''}^2`, when both interior cases hold.
pub fn identity_residual(state: &QubitState, theta: f64, vartheta: f64) -> Option<f64> {
    let rep = equality_relation(state, theta, vartheta);
    if rep.applicable != Some(true) {
        return None;
    }
    let r = state.bloch();
    let u = (2.0 * vartheta).cos() * r.z + (2.0 * vartheta).sin() * r.x;
    let (d1, d2) = (rep.d_s_prime?, rep.d_s_double_prime?);
    Some(r.norm_squared() - u * u - d1 * d1 - d2 * d2)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LambdaScan {
    pub lambda: f64,
    pub k: f64,
    pub a: f64,
}

fn lambda_objective(k: f64, a: f64) -> f64 {
    4.0 * f2(k, a) / (3.0 - f1(k, a))
}

/// Maximizes `4 f2 / (3 - f1)` over `k in [0, 1]`, `a in [0, 1/2]`.
pub fn lambda_scan(grid_k: usize, grid_a: usize) -> LambdaScan {
    lambda_scan_in((0.0, 1.0), (0.0, 0.5), grid_k, grid_a)
}

/// Grid search over the box followed by a box-clamped Nelder–Mead polish.
pub fn lambda_scan_in(k_range: (f64, f64), a_range: (f64, f64), grid_k: usize, grid_a: usize) -> LambdaScan {
    let (grid_k, grid_a) = (grid_k.max(2), grid_a.max(2));
    let at = |range: (f64, f64), i: usize, n: usize| range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64;
    let mut best = LambdaScan { lambda: f64::NEG_INFINITY, k: k_range.0, a: a_range.0 };
    for i in 0..grid_k {
        let k = at(k_range, i, grid_k);
        for j in 0..grid_a {
            let a = at(a_range, j, grid_a);
            let v = lambda_objective(k, a);
            if v > best.lambda {
                best = LambdaScan { lambda: v, k, a };
            }
        }
    }
    let step = [
        (k_range.1 - k_range.0) / (grid_k - 1) as f64,
        (a_range.1 - a_range.0) / (grid_a - 1) as f64,
    ];
    let clamp = |p: [f64; 2]| [p[0].clamp(k_range.0, k_range.1), p[1].clamp(a_range.0, a_range.1)];
    let (p, v) = nelder_mead_max(|p| lambda_objective(p[0], p[1]), [best.k, best.a], step, clamp);
    if v > best.lambda {
        best = LambdaScan { lambda: v, k: p[0], a: p[1] };
    }
    best
}

/// Nelder–Mead maximization in two dimensions with every trial point clamped into the box.
fn nelder_mead_max(
    f: impl Fn([f64; 2]) -> f64,
    start: [f64; 2],
    step: [f64; 2],
    clamp: impl Fn([f64; 2]) -> [f64; 2],
) -> ([f64; 2], f64) {
    let probe = |p: [f64; 2]| {
        let p = clamp(p);
        (p, f(p))
    };
    let mut simplex = [
        probe(start),
        probe([start[0] + step[0], start[1]]),
        probe([start[0], start[1] + step[1]]),
    ];
    let lerp = |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    for _ in 0..2000 {
        simplex.sort_by(|x, y| y.1.total_cmp(&x.1));
        let size = (1..3)
            .map(|i| (simplex[i].0[0] - simplex[0].0[0]).abs() + (simplex[i].0[1] - simplex[0].0[1]).abs())
            .fold(0.0, f64::max);
        if size < 1e-13 {
            break;
        }
        let centroid = lerp(simplex[0].0, simplex[1].0, 0.5);
        let worst = simplex[2];
        let reflected = probe(lerp(centroid, worst.0, -1.0));
        if reflected.1 > simplex[0].1 {
            let expanded = probe(lerp(centroid, worst.0, -2.0));
            simplex[2] = if expanded.1 > reflected.1 { expanded } else { reflected };
        } else if reflected.1 > simplex[1].1 {
            simplex[2] = reflected;
        } else {
            let contracted = probe(lerp(centroid, worst.0, 0.5));
            if contracted.1 > worst.1 {
                simplex[2] = contracted;
            } else {
                let best = simplex[0].0;
                for v in simplex.iter_mut().skip(1) {
                    *v = probe(lerp(best, v.0, 0.5));
                }
            }
        }
    }
    simplex.sort_by(|x, y| y.1.total_cmp(&x.1));
    simplex[0]
}

/// Closed interval of angles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AngleInterval {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidityRanges {
    /// Where case `I_i` holds, within `(0, pi/2]`.
    pub theta: Vec<AngleInterval>,
    /// Where case `II_i` holds, within `(0, pi)`.
    pub vartheta: Vec<AngleInterval>,
}

/// Largest violation of the two `I_i` edge conditions; `<= 0` inside.
pub fn type1_interior_margin(state: &QubitState, theta: f64) -> f64 {
    let r = state.bloch();
    let (s, c) = theta.sin_cos();
    (r.x * s - (1.0 - r.z) * c).max(r.x * c - (1.0 + r.z) * s)
}

/// Largest violation of `1 - nu >= mu >= nu`; `<= 0` inside.
pub fn type2_interior_margin(state: &QubitState, vartheta: f64) -> f64 {
    let (mu, nu) = analytic::mu_nu(state, vartheta);
    (mu - (1.0 - nu)).max(nu - mu)
}

/// Unions of closed intervals where `margin <= 0`, sampled on `grid + 1`
/// points of `[lo, hi]` and with each crossing refined by bisection.
pub fn feasible_intervals(margin: impl Fn(f64) -> f64, lo: f64, hi: f64, grid: usize) -> Vec<AngleInterval> {
    let grid = grid.max(2);
    let tol = tolerances::CONDITION;
    let inside = |t: f64| margin(t) <= tol;
    let at = |i: usize| lo + (hi - lo) * i as f64 / grid as f64;
    // bisect between an inside point and an outside point, returning the inside-most boundary
    let refine = |mut inner: f64, mut outer: f64| {
        for _ in 0..200 {
            let mid = 0.5 * (inner + outer);
            if mid == inner || mid == outer {
                break;
            }
            if inside(mid) {
                inner = mid;
            } else {
                outer = mid;
            }
        }
        inner
    };

    let mut out = Vec::new();
    let mut start: Option<f64> = None;
    let mut prev = (lo, inside(lo));
    if prev.1 {
        start = Some(lo);
    }
    for i in 1..=grid {
        let t = at(i);
        let now = inside(t);
        match (prev.1, now) {
            (false, true) => start = Some(refine(t, prev.0)),
            (true, false) => {
                let end = refine(prev.0, t);
                out.push(AngleInterval { lo: start.take().unwrap_or(lo), hi: end });
            }
            _ => {}
        }
        prev = (t, now);
    }
    if let Some(s) = start {
        out.push(AngleInterval { lo: s, hi });
    }
    out
}

/// Angles for which the state is in case `I_i` (theta) and `II_i` (vartheta).
pub fn validity_ranges(state: &QubitState, grid: usize) -> ValidityRanges {
    ValidityRanges {
        theta: feasible_intervals(|t| type1_interior_margin(state, t), 0.0, FRAC_PI_2, grid),
        vartheta: feasible_intervals(|v| type2_interior_margin(state, v), 0.0, PI, grid),
    }
}
