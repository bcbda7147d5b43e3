//! Exact minimum trace-norm distance from a qubit state to the convex hull of
//! a finite set of pure states.
//!
//! For `A = rho - sum_i p_i |psi_i><psi_i|` we have `-det A = |r - sum_i p_i b_i|^2 / 4`
//! where `r`, `b_i` are Bloch vectors, so the trace norm `2 sqrt(-det A)` is the
//! Euclidean distance from `r` to the mixture point. The optimum is a
//! projection onto a polytope in R^3, found here by enumerating candidate
//! supports instead of iterating: every point of the hull, and in particular
//! the projection, is an affine combination of at most four affinely
//! independent vertices, so subsets of size one to four suffice.

use std::f64::consts::FRAC_PI_2;

use nalgebra::Matrix3;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gates::BasisSet;
use crate::qubit::{trace_norm, Bloch, ComplexMatrix2, QubitState};
use crate::tolerances;

/// Largest support the enumeration needs in three dimensions.
const MAX_SUPPORT: usize = 4;

/// Squared-distance minimization over the probability simplex in Bloch coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexQp {
    target: Bloch,
    points: Vec<Bloch>,
}

impl SimplexQp {
    pub fn new(target: Bloch, points: Vec<Bloch>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyBasis);
        }
        if points.len() > tolerances::MAX_BASIS {
            return Err(Error::BasisTooLarge(points.len()));
        }
        for p in points.iter().chain(std::iter::once(&target)) {
            let n = p.norm();
            if !n.is_finite() || n > 1.0 + tolerances::SIMPLEX {
                return Err(Error::Domain { name: "|bloch|", value: n, range: "[0, 1]" });
            }
        }
        Ok(Self { target, points })
    }

    pub fn from_state(state: &QubitState, set: &BasisSet) -> Result<Self> {
        Self::new(state.bloch(), set.blochs())
    }

    pub fn target(&self) -> Bloch {
        self.target
    }

    pub fn points(&self) -> &[Bloch] {
        &self.points
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleSolution {
    /// Trace-norm distance, i.e. Euclidean Bloch distance.
    pub distance: f64,
    pub weights: Vec<f64>,
    pub active_support: Vec<usize>,
    pub kkt_residual: f64,
}

fn mixture(points: &[Bloch], weights: &[f64]) -> Bloch {
    points.iter().zip(weights).fold(Bloch::zeros(), |acc, (p, w)| acc + p * *w)
}

/// Minimal residual of the KKT system of `|r - sum w_i b_i|^2 / 4` on the simplex.
///
/// With `g_j` the partial derivatives, stationarity reads `g_j = lambda + lambda_j`
/// with `lambda_j >= 0` and `lambda_j w_j = 0`. For a given `lambda` the best
/// multipliers are `lambda_j = max(0, g_j - lambda)`, leaving a stationarity
/// defect `min(0, g_j - lambda)` and a complementarity defect
/// `w_j max(0, g_j - lambda)`. The squared residual is convex and piecewise
/// quadratic in `lambda`, so it is minimized exactly over the breakpoints
/// `g_j` and the stationary point of each piece.
pub fn kkt_residual(target: &Bloch, points: &[Bloch], weights: &[f64]) -> f64 {
    let gap = mixture(points, weights) - target;
    let grad: Vec<f64> = points.iter().map(|p| 0.5 * p.dot(&gap)).collect();

    let objective = |lambda: f64| -> f64 {
        grad.iter()
            .zip(weights)
            .map(|(g, w)| {
                let d = g - lambda;
                if d < 0.0 {
                    d * d
                } else {
                    (w * d) * (w * d)
                }
            })
            .sum()
    };

    let mut breaks = grad.clone();
    breaks.sort_by(f64::total_cmp);
    let mut candidates = breaks.clone();
    // One probe per piece: (-inf, b0), (b0, b1), ..., (b_last, +inf).
    for piece in 0..=breaks.len() {
        let lo = if piece == 0 { f64::NEG_INFINITY } else { breaks[piece - 1] };
        let hi = breaks.get(piece).copied().unwrap_or(f64::INFINITY);
        let (mut num, mut den) = (0.0, 0.0);
        for (g, w) in grad.iter().zip(weights) {
            // inside the piece, g < lambda exactly for the breakpoints at or below lo
            let c = if *g <= lo { 1.0 } else { w * w };
            num += c * g;
            den += c;
        }
        if den > 0.0 {
            candidates.push((num / den).clamp(lo, hi));
        }
    }
    candidates
        .into_iter()
        .filter(|l| l.is_finite())
        .map(objective)
        .fold(f64::INFINITY, f64::min)
        .max(0.0)
        .sqrt()
}

/// Least squares on the affine hull of one support; `None` when the
/// pseudo-inverse solve fails.
fn affine_weights(target: &Bloch, points: &[Bloch], support: &[usize]) -> Option<Vec<f64>> {
    let base = points[support[0]];
    let mut d = Matrix3::<f64>::zeros();
    for (col, &i) in support[1..].iter().enumerate() {
        d.set_column(col, &(points[i] - base));
    }
    let coeffs = d.svd(true, true).solve(&(target - base), tolerances::SINGULAR_CUTOFF).ok()?;
    let rest = &coeffs.as_slice()[..support.len() - 1];
    let mut w = Vec::with_capacity(support.len());
    w.push(1.0 - rest.iter().sum::<f64>());
    w.extend_from_slice(rest);
    Some(w)
}

/// Calls `visit` with every subset of `0..n` of size `1..=max_size`, in order of increasing size.
fn for_each_subset(n: usize, max_size: usize, mut visit: impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, size: usize, buf: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if buf.len() == size {
            visit(buf);
            return;
        }
        for i in start..n {
            buf.push(i);
            rec(i + 1, n, size, buf, visit);
            buf.pop();
        }
    }
    let mut buf = Vec::with_capacity(max_size);
    for size in 1..=max_size.min(n) {
        rec(0, n, size, &mut buf, &mut visit);
    }
}

/// Global minimizer of `|target - sum w_i p_i|` over the simplex.
pub fn project_onto_hull(problem: &SimplexQp) -> Result<OracleSolution> {
    let SimplexQp { target, points } = problem;
    let n = points.len();
    let mut best: Option<(f64, Vec<f64>, f64)> = None;
    let mut fallback: Option<(f64, Vec<f64>)> = None;

    for_each_subset(n, MAX_SUPPORT, |support| {
        let Some(local) = affine_weights(target, points, support) else { return };
        if local.iter().any(|w| !w.is_finite() || *w < -tolerances::SIMPLEX) {
            return;
        }
        let mut weights = vec![0.0; n];
        for (&i, &w) in support.iter().zip(&local) {
            weights[i] = w.max(0.0);
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        let distance = (target - mixture(points, &weights)).norm();

        if fallback.as_ref().is_none_or(|(d, _)| distance < *d) {
            fallback = Some((distance, weights.clone()));
        }
        if best.as_ref().is_none_or(|(d, _, _)| distance < *d) {
            let residual = kkt_residual(target, points, &weights);
            if residual <= tolerances::KKT_RESIDUAL {
                best = Some((distance, weights, residual));
            }
        }
    });

    let (distance, weights, kkt_residual) = match best {
        Some(b) => b,
        None => {
            // Only reachable through rounding trouble; report the best feasible point honestly.
            let (d, w) = fallback.expect("singletons are always feasible");
            let r = kkt_residual(target, points, &w);
            (d, w, r)
        }
    };
    let active_support = weights.iter().enumerate().filter(|(_, w)| **w > 0.0).map(|(i, _)| i).collect();
    Ok(OracleSolution { distance, weights, active_support, kkt_residual })
}

/// Oracle solution for a state against a basis set.
pub fn solve(state: &QubitState, set: &BasisSet) -> Result<OracleSolution> {
    project_onto_hull(&SimplexQp::from_state(state, set)?)
}

fn check_arity(set: &BasisSet, weights: &[f64]) -> Result<()> {
    if weights.len() != set.len() {
        return Err(Error::Arity { expected: set.len(), got: weights.len() });
    }
    Ok(())
}

/// KKT residual of `weights` for the approximation of `state` by `set`.
pub fn verify_kkt(state: &QubitState, set: &BasisSet, weights: &[f64]) -> Result<f64> {
    check_arity(set, weights)?;
    Ok(kkt_residual(&state.bloch(), &set.blochs(), weights))
}

/// `|rho - sum_i w_i |psi_i><psi_i| |_1` by explicit matrix construction.
pub fn distance_direct(state: &QubitState, set: &BasisSet, weights: &[f64]) -> Result<f64> {
    check_arity(set, weights)?;
    let mix = set
        .states()
        .iter()
        .zip(weights)
        .fold(ComplexMatrix2::zero(), |acc, (s, w)| acc + s.projector().scale((*w).into()));
    Ok(trace_norm(&(*state.rho() - mix)))
}

/// Smallest oracle distance over a one-parameter family of sets.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AngleScan {
    pub angle: f64,
    pub distance: f64,
}

/// Minimizes the oracle distance over `angle` in `(lo, hi]`: a uniform grid of
/// `grid` points, then golden-section refinement around the best few grid cells.
pub fn scan_angle(
    state: &QubitState,
    lo: f64,
    hi: f64,
    grid: usize,
    make_set: impl Fn(f64) -> Result<BasisSet>,
) -> Result<AngleScan> {
    let grid = grid.max(2);
    let step = (hi - lo) / grid as f64;
    let eval = |angle: f64| -> Result<f64> { Ok(solve(state, &make_set(angle)?)?.distance) };

    let mut samples = Vec::with_capacity(grid);
    for i in 1..=grid {
        let angle = lo + step * i as f64;
        samples.push((angle, eval(angle)?));
    }
    let mut best = samples.iter().copied().fold((f64::NAN, f64::INFINITY), |b, s| if s.1 < b.1 { s } else { b });
    if best.1 <= 0.0 {
        return Ok(AngleScan { angle: best.0, distance: best.1 });
    }

    let mut order: Vec<usize> = (0..samples.len()).collect();
    order.sort_by(|&i, &j| samples[i].1.total_cmp(&samples[j].1));
    const GOLD: f64 = 0.618_033_988_749_894_9;
    for &idx in order.iter().take(3) {
        let mut a = (samples[idx].0 - step).max(lo + f64::EPSILON);
        let mut b = (samples[idx].0 + step).min(hi);
        let mut c = b - GOLD * (b - a);
        let mut d = a + GOLD * (b - a);
        let (mut fc, mut fd) = (eval(c)?, eval(d)?);
        for _ in 0..80 {
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - GOLD * (b - a);
                fc = eval(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + GOLD * (b - a);
                fd = eval(d)?;
            }
            if b - a < 1e-13 {
                break;
            }
        }
        for cand in [(c, fc), (d, fd)] {
            if cand.1 < best.1 {
                best = cand;
            }
        }
    }
    Ok(AngleScan { angle: best.0, distance: best.1 })
}

/// Oracle search for a decomposition over `S'''(theta)`, `theta` in `(0, pi/2]`.
pub fn triple_prime_scan(state: &QubitState, grid: usize) -> Result<AngleScan> {
    scan_angle(state, 0.0, FRAC_PI_2, grid, BasisSet::s_triple_prime)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_4, PI, TAU};

    fn s_prime_points(theta: f64) -> Vec<Bloch> {
        BasisSet::s_prime(theta).unwrap().blochs()
    }

    #[test]
    fn origin_between_poles() {
        let qp = SimplexQp::new(Bloch::zeros(), vec![Bloch::z(), -Bloch::z()]).unwrap();
        let sol = project_onto_hull(&qp).unwrap();
        assert_abs_diff_eq!(sol.distance, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sol.weights[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(sol.weights[1], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn plus_state_against_s_prime_third_pi() {
        // Closed-form projection of (1,0,0) onto the chord from (0,0,1) to (sin 120°, 0, cos 120°).
        let qp = SimplexQp::new(Bloch::x(), s_prime_points(PI / 3.0)).unwrap();
        let sol = project_onto_hull(&qp).unwrap();
        assert_abs_diff_eq!(sol.distance, (3f64.sqrt() - 1.0) / 2.0, epsilon = 1e-14);
        assert_eq!(sol.active_support, vec![0, 2]);
        assert_abs_diff_eq!(sol.weights[0], 0.5 - 1.0 / (2.0 * 3f64.sqrt()), epsilon = 1e-14);
    }

    #[test]
    fn tight_point_distance_is_sigma_y() {
        let c = 1.0 / 3f64.sqrt();
        let qp = SimplexQp::new(Bloch::new(c, c, c), s_prime_points(0.5)).unwrap();
        let sol = project_onto_hull(&qp).unwrap();
        assert_abs_diff_eq!(sol.distance, c, epsilon = 1e-14);
    }

    #[test]
    fn basis_size_errors() {
        assert_eq!(SimplexQp::new(Bloch::zeros(), vec![]), Err(Error::EmptyBasis));
        assert_eq!(SimplexQp::new(Bloch::zeros(), vec![Bloch::z(); 17]), Err(Error::BasisTooLarge(17)));
        assert!(SimplexQp::new(Bloch::new(2.0, 0.0, 0.0), vec![Bloch::z()]).is_err());
    }

    #[test]
    fn duplicate_points_are_allowed() {
        let qp = SimplexQp::new(Bloch::new(0.2, 0.0, 0.0), vec![Bloch::x(), Bloch::x(), -Bloch::x()]).unwrap();
        let sol = project_onto_hull(&qp).unwrap();
        assert_abs_diff_eq!(sol.distance, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sol.weights.iter().sum::<f64>(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn oracle_weights_are_kkt_points() {
        let state = QubitState::new(0.5, 1.0, 0.0).unwrap();
        let set = BasisSet::s_prime(PI / 3.0).unwrap();
        let sol = solve(&state, &set).unwrap();
        assert!(verify_kkt(&state, &set, &sol.weights).unwrap() <= 1e-8);
    }

    #[test]
    fn perturbed_weights_fail_kkt() {
        let state = QubitState::new(0.5, 1.0, 0.0).unwrap();
        let set = BasisSet::s_prime(PI / 3.0).unwrap();
        let mut w = solve(&state, &set).unwrap().weights;
        w[0] += 0.1;
        w[2] -= 0.1;
        assert!(verify_kkt(&state, &set, &w).unwrap() > 1e-3);
    }

    #[test]
    fn direct_distance_examples() {
        let set = BasisSet::s_prime(FRAC_PI_4).unwrap();
        let mixed = QubitState::maximally_mixed();
        assert_abs_diff_eq!(distance_direct(&mixed, &set, &[0.25; 4]).unwrap(), 0.0, epsilon = 1e-15);

        let s = QubitState::new(0.3, 0.4, 0.2).unwrap();
        let d = distance_direct(&s, &set, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(d, (s.bloch() - Bloch::z()).norm(), epsilon = 1e-12);

        let sol = solve(&s, &set).unwrap();
        assert_abs_diff_eq!(distance_direct(&s, &set, &sol.weights).unwrap(), sol.distance, epsilon = 1e-10);

        assert_eq!(distance_direct(&s, &set, &[1.0]), Err(Error::Arity { expected: 4, got: 1 }));
    }

    #[test]
    fn scan_finds_decomposition_angle() {
        // |+> lies in S'''(theta) only at theta = pi/4.
        let plus = QubitState::new(0.5, 1.0, 0.0).unwrap();
        let scan = triple_prime_scan(&plus, 101).unwrap();
        assert!(scan.distance < 1e-8, "{scan:?}");
        assert_abs_diff_eq!(scan.angle, FRAC_PI_4, epsilon = 1e-6);
    }

    fn state() -> impl Strategy<Value = QubitState> {
        (0.0..=1.0f64, 0.0..=1.0f64, 0.0..TAU).prop_map(|(a, k, p)| QubitState::new(a, k, p).unwrap())
    }

    fn unit() -> impl Strategy<Value = Bloch> {
        (-1.0..1.0f64, 0.0..TAU).prop_map(|(z, p)| {
            let r = (1.0 - z * z).sqrt();
            Bloch::new(r * p.cos(), r * p.sin(), z)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn solution_is_feasible_and_consistent(
            target in state(),
            points in proptest::collection::vec(unit(), 1..=8),
        ) {
            let qp = SimplexQp::new(target.bloch(), points.clone()).unwrap();
            let sol = project_onto_hull(&qp).unwrap();
            prop_assert!(sol.weights.iter().all(|w| *w >= 0.0));
            prop_assert!((sol.weights.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            let achieved = (target.bloch() - mixture(&points, &sol.weights)).norm();
            prop_assert!((achieved - sol.distance).abs() <= 1e-12);
            prop_assert!(sol.kkt_residual <= 1e-8);
        }

        #[test]
        fn no_simplex_point_beats_the_oracle(
            target in state(),
            points in proptest::collection::vec(unit(), 1..=6),
            raw in proptest::collection::vec(proptest::collection::vec(0.0..1.0f64, 6), 64),
        ) {
            let sol = project_onto_hull(&SimplexQp::new(target.bloch(), points.clone()).unwrap()).unwrap();
            for r in raw {
                let w: Vec<f64> = r[..points.len()].iter().map(|x| -x.max(1e-300).ln()).collect();
                let total: f64 = w.iter().sum();
                let w: Vec<f64> = w.iter().map(|x| x / total).collect();
                let d = (target.bloch() - mixture(&points, &w)).norm();
                prop_assert!(d >= sol.distance - 1e-12);
            }
        }

        #[test]
        fn direct_and_bloch_metrics_agree(
            s in state(),
            theta in 0.01..3.1f64,
            raw in proptest::array::uniform4(0.001..1.0f64),
        ) {
            let set = BasisSet::s_prime(theta).unwrap();
            let total: f64 = raw.iter().sum();
            let w: Vec<f64> = raw.iter().map(|x| x / total).collect();
            let direct = distance_direct(&s, &set, &w).unwrap();
            let bloch = (s.bloch() - mixture(&set.blochs(), &w)).norm();
            prop_assert!((direct - bloch).abs() <= 1e-10);
        }

        #[test]
        fn conjugation_leaves_oracle_distance_unchanged(s in state(), alpha in -3.0..3.0f64, theta in 0.05..1.5f64) {
            let set = BasisSet::s_triple_prime(theta).unwrap();
            let before = solve(&s, &set).unwrap().distance;
            let u = crate::gates::isometry(alpha);
            let moved = s.conjugate(&u).unwrap();
            let points: Vec<Bloch> = set.states().iter().map(|p| p.apply(&u).bloch()).collect();
            let after = project_onto_hull(&SimplexQp::new(moved.bloch(), points).unwrap()).unwrap().distance;
            prop_assert!((before - after).abs() <= 1e-12);
        }
    }
}
