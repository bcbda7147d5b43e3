//! 2×2 complex matrix algebra, qubit states and the trace norm.
//!
//! A mixed qubit state is parameterized by `(a, k, phi)`:
//!
//! ```text
//! rho = | 1 - a                       k sqrt(a(1-a)) e^{-i phi} |
//!       | k sqrt(a(1-a)) e^{i phi}    a                         |
//! ```
//!
//! with Bloch vector `(2k sqrt(a(1-a)) cos phi, 2k sqrt(a(1-a)) sin phi, 1 - 2a)`.
//! For two states the trace norm of the difference equals the Euclidean
//! distance of their Bloch vectors, which is what the oracle relies on.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances;

pub type Bloch = Vector3<f64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Row-major 2×2 complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexMatrix2(pub [[Complex64; 2]; 2]);

impl ComplexMatrix2 {
    pub const fn new(m00: Complex64, m01: Complex64, m10: Complex64, m11: Complex64) -> Self {
        Self([[m00, m01], [m10, m11]])
    }

    pub fn from_real(m00: f64, m01: f64, m10: f64, m11: f64) -> Self {
        Self::new(m00.into(), m01.into(), m10.into(), m11.into())
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn pauli_x() -> Self {
        Self::new(ZERO, ONE, ONE, ZERO)
    }

    pub fn pauli_y() -> Self {
        Self::new(ZERO, -I, I, ZERO)
    }

    pub fn pauli_z() -> Self {
        Self::new(ONE, ZERO, ZERO, -ONE)
    }

    /// `(I + r·σ) / 2`.
    pub fn from_bloch(r: &Bloch) -> Self {
        Self::new(
            Complex64::new((1.0 + r.z) / 2.0, 0.0),
            Complex64::new(r.x / 2.0, -r.y / 2.0),
            Complex64::new(r.x / 2.0, r.y / 2.0),
            Complex64::new((1.0 - r.z) / 2.0, 0.0),
        )
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[row][col]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Self::new(m[0][0].conj(), m[1][0].conj(), m[0][1].conj(), m[1][1].conj())
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let m = &self.0;
        Self::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }

    /// Squared Frobenius norm, `Tr(A†A)`.
    pub fn frobenius_sq(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm_sqr()).sum()
    }

    /// Largest entry-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (*self * self.adjoint()).max_abs_diff(&Self::identity()) <= tol
    }

    /// Eigenvalues of a Hermitian matrix in ascending order, by the quadratic formula.
    pub fn hermitian_eigenvalues(&self) -> [f64; 2] {
        let m = &self.0;
        let (p, q) = (m[0][0].re, m[1][1].re);
        let half_gap = ((p - q) / 2.0).hypot(m[0][1].norm());
        let mid = (p + q) / 2.0;
        [mid - half_gap, mid + half_gap]
    }

    /// Coefficients `(x, y, z)` of the traceless part in the Pauli basis, times two.
    ///
    /// For a density matrix this is its Bloch vector.
    pub fn bloch(&self) -> Bloch {
        let m = &self.0;
        Bloch::new(
            m[0][1].re + m[1][0].re,
            m[1][0].im - m[0][1].im,
            (m[0][0] - m[1][1]).re,
        )
    }
}

impl Add for ComplexMatrix2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (a, b) = (&self.0, &rhs.0);
        Self::new(a[0][0] + b[0][0], a[0][1] + b[0][1], a[1][0] + b[1][0], a[1][1] + b[1][1])
    }
}

impl Sub for ComplexMatrix2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let (a, b) = (&self.0, &rhs.0);
        Self::new(a[0][0] - b[0][0], a[0][1] - b[0][1], a[1][0] - b[1][0], a[1][1] - b[1][1])
    }
}

impl Mul for ComplexMatrix2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (&self.0, &rhs.0);
        Self::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl fmt::Display for ComplexMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(f, "[[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

/// Sum of singular values, `Tr sqrt(A†A)`.
///
/// Uses `(s1 + s2)^2 = |A|_F^2 + 2 |det A|`, so no eigensolver is involved.
pub fn trace_norm(a: &ComplexMatrix2) -> f64 {
    (a.frobenius_sq() + 2.0 * a.det().norm()).max(0.0).sqrt()
}

/// `2 sqrt(|det A|)`, valid for Hermitian traceless `A`.
pub fn traceless_norm_via_det(a: &ComplexMatrix2) -> Result<f64> {
    if !a.is_hermitian(tolerances::HERMITIAN) {
        return Err(Error::Contract(format!("matrix {a} is not Hermitian")));
    }
    let tr = a.trace();
    if tr.norm() > tolerances::HERMITIAN {
        return Err(Error::Contract(format!("matrix {a} has trace {tr}, expected 0")));
    }
    Ok(2.0 * a.det().norm().sqrt())
}

/// `Tr(rho G)` for Hermitian `G`.
pub fn expectation(state: &QubitState, g: &ComplexMatrix2) -> Result<f64> {
    if !g.is_hermitian(tolerances::HERMITIAN) {
        return Err(Error::Contract(format!("observable {g} is not Hermitian")));
    }
    Ok((state.rho * *g).trace().re)
}

/// Mixed qubit state in the `(a, k, phi)` parameterization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitState {
    a: f64,
    k: f64,
    phi: f64,
    rho: ComplexMatrix2,
    bloch: Bloch,
}

fn wrap_angle(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

impl QubitState {
    /// Builds the state from `(a, k, phi)`; `phi` is wrapped into `[0, 2pi)`.
    pub fn new(a: f64, k: f64, phi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::Domain { name: "a", value: a, range: "[0, 1]" });
        }
        if !(0.0..=1.0).contains(&k) {
            return Err(Error::Domain { name: "k", value: k, range: "[0, 1]" });
        }
        if !phi.is_finite() {
            return Err(Error::Domain { name: "phi", value: phi, range: "finite reals" });
        }
        let phi = wrap_angle(phi);
        let coherence = k * (a * (1.0 - a)).sqrt();
        let bloch = Bloch::new(
            2.0 * coherence * phi.cos(),
            2.0 * coherence * phi.sin(),
            1.0 - 2.0 * a,
        );
        let off = Complex64::from_polar(coherence, -phi);
        let rho = ComplexMatrix2::new((1.0 - a).into(), off, off.conj(), a.into());
        Ok(Self { a, k, phi, rho, bloch })
    }

    /// Builds the state with the given Bloch vector (norm at most `1 + 1e-12`).
    pub fn from_bloch(r: Bloch) -> Result<Self> {
        let norm = r.norm();
        if !norm.is_finite() || norm > 1.0 + tolerances::SIMPLEX {
            return Err(Error::Domain { name: "|bloch|", value: norm, range: "[0, 1]" });
        }
        let a = ((1.0 - r.z) / 2.0).clamp(0.0, 1.0);
        let spread = (a * (1.0 - a)).sqrt();
        let transverse = r.x.hypot(r.y) / 2.0;
        let k = if spread > 0.0 { (transverse / spread).min(1.0) } else { 0.0 };
        let phi = if transverse > 0.0 { wrap_angle(r.y.atan2(r.x)) } else { 0.0 };
        Ok(Self { a, k, phi, rho: ComplexMatrix2::from_bloch(&r), bloch: r })
    }

    pub fn maximally_mixed() -> Self {
        Self::from_bloch(Bloch::zeros()).expect("origin is a valid Bloch vector")
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn rho(&self) -> &ComplexMatrix2 {
        &self.rho
    }

    pub fn bloch(&self) -> Bloch {
        self.bloch
    }

    /// `<sigma_x>`.
    pub fn sx(&self) -> f64 {
        self.bloch.x
    }

    /// `<sigma_y>`.
    pub fn sy(&self) -> f64 {
        self.bloch.y
    }

    /// `<sigma_z>`.
    pub fn sz(&self) -> f64 {
        self.bloch.z
    }

    /// `U rho U†` for unitary `U`.
    pub fn conjugate(&self, u: &ComplexMatrix2) -> Result<Self> {
        let rho = *u * self.rho * u.adjoint();
        let mut out = Self::from_bloch(rho.bloch())?;
        out.rho = rho;
        Ok(out)
    }

    /// `a <= 1/2` and `phi <= pi/2`, read off the Bloch vector so that states
    /// without coherence (where `phi` is meaningless) are not rejected.
    pub fn is_canonical(&self) -> bool {
        let t = tolerances::CONDITION;
        self.bloch.x >= -t && self.bloch.y >= -t && self.bloch.z >= -t
    }
}

/// Pure state `z1|0> + z2|1>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureState {
    z1: Complex64,
    z2: Complex64,
}

impl PureState {
    pub fn new(z1: Complex64, z2: Complex64) -> Result<Self> {
        let norm_sq = z1.norm_sqr() + z2.norm_sqr();
        if (norm_sq - 1.0).abs() > tolerances::SIMPLEX {
            return Err(Error::Contract(format!("amplitudes have squared norm {norm_sq}, expected 1")));
        }
        Ok(Self { z1, z2 })
    }

    /// Real amplitudes `c|0> + s|1>`; the caller supplies a unit vector.
    pub(crate) fn real(c: f64, s: f64) -> Self {
        Self { z1: c.into(), z2: s.into() }
    }

    #[cfg(test)]
    pub(crate) fn from_amplitudes_unchecked(z1: Complex64, z2: Complex64) -> Self {
        Self { z1, z2 }
    }

    pub fn zero() -> Self {
        Self::real(1.0, 0.0)
    }

    pub fn one() -> Self {
        Self::real(0.0, 1.0)
    }

    /// `(|0> + i|1>)/sqrt(2)`.
    pub fn plus_i() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self { z1: h.into(), z2: Complex64::new(0.0, h) }
    }

    /// `(|0> - i|1>)/sqrt(2)`.
    pub fn minus_i() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self { z1: h.into(), z2: Complex64::new(0.0, -h) }
    }

    pub fn amplitudes(&self) -> (Complex64, Complex64) {
        (self.z1, self.z2)
    }

    pub fn projector(&self) -> ComplexMatrix2 {
        let (z1, z2) = (self.z1, self.z2);
        ComplexMatrix2::new(z1 * z1.conj(), z1 * z2.conj(), z2 * z1.conj(), z2 * z2.conj())
    }

    pub fn bloch(&self) -> Bloch {
        let c = self.z1.conj() * self.z2;
        Bloch::new(2.0 * c.re, 2.0 * c.im, self.z1.norm_sqr() - self.z2.norm_sqr())
    }

    pub fn apply(&self, u: &ComplexMatrix2) -> Self {
        let m = &u.0;
        Self {
            z1: m[0][0] * self.z1 + m[0][1] * self.z2,
            z2: m[1][0] * self.z1 + m[1][1] * self.z2,
        }
    }

    pub fn amplitude_distance(&self, other: &Self) -> f64 {
        ((self.z1 - other.z1).norm_sqr() + (self.z2 - other.z2).norm_sqr()).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    #[test]
    fn ground_state() {
        let s = QubitState::new(0.0, 0.0, 0.0).unwrap();
        assert_eq!(s.rho().max_abs_diff(&ComplexMatrix2::from_real(1.0, 0.0, 0.0, 0.0)), 0.0);
        assert_eq!(s.bloch(), Bloch::new(0.0, 0.0, 1.0));
    }

    #[test]
    fn maximally_mixed_state() {
        let s = QubitState::new(0.5, 0.0, 0.0).unwrap();
        assert!(s.rho().max_abs_diff(&ComplexMatrix2::from_real(0.5, 0.0, 0.0, 0.5)) < 1e-15);
        assert_eq!(s.bloch(), Bloch::zeros());
    }

    #[test]
    fn tight_point_has_equal_components() {
        let a = 0.5 - 3f64.sqrt() / 6.0;
        let s = QubitState::new(a, 1.0, FRAC_PI_4).unwrap();
        let c = 1.0 / 3f64.sqrt();
        assert!((s.bloch() - Bloch::new(c, c, c)).norm() < 1e-15);
    }

    #[test]
    fn rejects_out_of_range_parameters() {
        assert!(matches!(QubitState::new(1.2, 0.5, 0.0), Err(Error::Domain { name: "a", .. })));
        assert!(matches!(QubitState::new(0.3, -0.1, 0.0), Err(Error::Domain { name: "k", .. })));
        assert!(QubitState::new(0.3, 0.5, f64::NAN).is_err());
    }

    #[test]
    fn negative_phi_wraps() {
        let s = QubitState::new(0.3, 0.5, -PI / 2.0).unwrap();
        assert_abs_diff_eq!(s.phi(), 1.5 * PI, epsilon = 1e-15);
        assert!(s.sy() < 0.0);
        let t = QubitState::new(0.3, 0.5, -1e-300).unwrap();
        assert!(t.phi() < TAU);
    }

    #[test]
    fn trace_norm_examples() {
        assert_abs_diff_eq!(trace_norm(&ComplexMatrix2::pauli_x()), 2.0, epsilon = 1e-15);
        assert_eq!(trace_norm(&ComplexMatrix2::zero()), 0.0);
        let s = QubitState::new(0.3, 0.5, 0.2).unwrap();
        assert_eq!(trace_norm(&(*s.rho() - *s.rho())), 0.0);
    }

    #[test]
    fn det_route_examples() {
        assert_abs_diff_eq!(traceless_norm_via_det(&ComplexMatrix2::pauli_z()).unwrap(), 2.0);
        let plus = QubitState::new(0.5, 1.0, 0.0).unwrap();
        let mixed = QubitState::new(0.5, 0.0, 0.0).unwrap();
        let diff = *plus.rho() - *mixed.rho();
        assert_abs_diff_eq!(traceless_norm_via_det(&diff).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(trace_norm(&diff), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn det_route_rejects_bad_input() {
        assert!(matches!(traceless_norm_via_det(&ComplexMatrix2::identity()), Err(Error::Contract(_))));
        let skew = ComplexMatrix2::from_real(0.0, 1.0, -1.0, 0.0);
        assert!(matches!(traceless_norm_via_det(&skew), Err(Error::Contract(_))));
    }

    #[test]
    fn expectation_examples() {
        let s = QubitState::new(0.2, 0.7, 1.1).unwrap();
        assert_abs_diff_eq!(expectation(&s, &ComplexMatrix2::pauli_z()).unwrap(), 0.6, epsilon = 1e-15);
        let g = ComplexMatrix2::from_real(0.3, -0.4, -0.4, 1.7);
        let mixed = QubitState::maximally_mixed();
        assert_abs_diff_eq!(expectation(&mixed, &g).unwrap(), 1.0, epsilon = 1e-15);
        let t = QubitState::new(0.2, 0.75, 0.0).unwrap();
        let (c, sn) = (FRAC_PI_4.cos(), FRAC_PI_4.sin());
        let u = ComplexMatrix2::from_real(c, sn, sn, -c);
        assert_abs_diff_eq!(expectation(&t, &u).unwrap(), 0.6 * 2f64.sqrt(), epsilon = 1e-14);
        let not_hermitian = ComplexMatrix2::from_real(0.0, 1.0, 0.0, 0.0);
        assert!(expectation(&t, &not_hermitian).is_err());
    }

    #[test]
    fn pure_state_bloch() {
        assert!((PureState::plus_i().bloch() - Bloch::new(0.0, 1.0, 0.0)).norm() < 1e-15);
        assert!((PureState::minus_i().bloch() - Bloch::new(0.0, -1.0, 0.0)).norm() < 1e-15);
        let bad = PureState::new(1.0.into(), 1.0.into());
        assert!(bad.is_err());
    }

    #[test]
    fn from_bloch_round_trip() {
        let s = QubitState::new(0.3, 0.8, 2.0).unwrap();
        let t = QubitState::from_bloch(s.bloch()).unwrap();
        assert_abs_diff_eq!(t.a(), 0.3, epsilon = 1e-14);
        assert_abs_diff_eq!(t.k(), 0.8, epsilon = 1e-14);
        assert_abs_diff_eq!(t.phi(), 2.0, epsilon = 1e-14);
        assert!(QubitState::from_bloch(Bloch::new(1.0, 1.0, 0.0)).is_err());
    }

    fn hermitian_traceless() -> impl Strategy<Value = ComplexMatrix2> {
        (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64).prop_map(|(x, y, z)| {
            ComplexMatrix2::new(z.into(), Complex64::new(x, -y), Complex64::new(x, y), (-z).into())
        })
    }

    fn state() -> impl Strategy<Value = QubitState> {
        (0.0..=1.0f64, 0.0..=1.0f64, 0.0..TAU).prop_map(|(a, k, p)| QubitState::new(a, k, p).unwrap())
    }

    proptest! {
        #[test]
        fn det_route_matches_trace_norm(m in hermitian_traceless()) {
            let via_det = traceless_norm_via_det(&m).unwrap();
            prop_assert!((via_det - trace_norm(&m)).abs() <= 1e-10);
        }

        #[test]
        fn trace_distance_is_bloch_distance(s in state(), t in state()) {
            let d = trace_norm(&(*s.rho() - *t.rho()));
            prop_assert!((d - (s.bloch() - t.bloch()).norm()).abs() <= 1e-10);
        }

        #[test]
        fn reflection_expectation_is_rotated_pauli_mix(s in state(), alpha in -PI..PI) {
            let (c, sn) = (alpha.cos(), alpha.sin());
            let u = ComplexMatrix2::from_real(c, sn, sn, -c);
            let e = expectation(&s, &u).unwrap();
            prop_assert!((e - (c * s.sz() + sn * s.sx())).abs() <= 1e-12);
        }

        #[test]
        fn constructed_states_are_physical(s in state()) {
            let rho = s.rho();
            prop_assert!(rho.is_hermitian(1e-15));
            prop_assert!((rho.trace() - Complex64::new(1.0, 0.0)).norm() <= 1e-14);
            prop_assert!(rho.hermitian_eigenvalues()[0] >= -1e-12);
            prop_assert!(s.bloch().norm() <= 1.0 + 1e-12);
        }

        #[test]
        fn bloch_matches_pauli_expectations(s in state()) {
            let b = s.bloch();
            prop_assert!((expectation(&s, &ComplexMatrix2::pauli_x()).unwrap() - b.x).abs() <= 1e-14);
            prop_assert!((expectation(&s, &ComplexMatrix2::pauli_y()).unwrap() - b.y).abs() <= 1e-14);
            prop_assert!((expectation(&s, &ComplexMatrix2::pauli_z()).unwrap() - b.z).abs() <= 1e-14);
        }
    }
}
