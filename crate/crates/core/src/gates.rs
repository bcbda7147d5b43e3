//! Real logic gates, their eigenbases and the basis sets built from them.
//!
//! A real gate is either a reflection `U_alpha = [[cos a, sin a], [sin a, -cos a]]`
//! or a rotation `V_gamma = [[cos g, -sin g], [sin g, cos g]]`. Reflections have
//! the real eigenpair `(cos(a/2), sin(a/2))`, `(sin(a/2), -cos(a/2))`; every
//! non-trivial rotation shares the `sigma_y` eigenpair `(|0> ± i|1>)/sqrt(2)`.
//!
//! Conjugating by [`isometry`] turns the eigenvectors of `U_alpha` into `|0>`
//! and `-|1>` while fixing the `sigma_y` eigenprojectors, which is how
//! [`reduce_problem`] maps every basis set onto one of the canonical sets
//! `S'(theta)`, `S''(vartheta)` and `S'''(theta)`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qubit::{Bloch, ComplexMatrix2, PureState, QubitState};
use crate::tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GateKind {
    Reflection,
    Rotation,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RealGate {
    kind: GateKind,
    angle: f64,
    matrix: ComplexMatrix2,
}

impl RealGate {
    pub fn reflection(alpha: f64) -> Self {
        let (s, c) = alpha.sin_cos();
        Self {
            kind: GateKind::Reflection,
            angle: alpha,
            matrix: ComplexMatrix2::from_real(c, s, s, -c),
        }
    }

    pub fn rotation(gamma: f64) -> Self {
        let (s, c) = gamma.sin_cos();
        Self {
            kind: GateKind::Rotation,
            angle: gamma,
            matrix: ComplexMatrix2::from_real(c, -s, s, c),
        }
    }

    pub fn z() -> Self {
        Self::reflection(0.0)
    }

    pub fn hadamard() -> Self {
        Self::reflection(FRAC_PI_4)
    }

    pub fn x() -> Self {
        Self::reflection(FRAC_PI_2)
    }

    /// A quarter-turn rotation; its eigenbasis is the `sigma_y` pair.
    pub fn y_rotation() -> Self {
        Self::rotation(FRAC_PI_2)
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn matrix(&self) -> &ComplexMatrix2 {
        &self.matrix
    }
}

/// Eigenvectors of a real gate, ordered as (+1, -1) for reflections and
/// `((|0> + i|1>)/sqrt 2, (|0> - i|1>)/sqrt 2)` for rotations.
pub fn eigenbasis(gate: &RealGate) -> Result<(PureState, PureState)> {
    match gate.kind {
        GateKind::Reflection => {
            let (s, c) = (gate.angle / 2.0).sin_cos();
            Ok((PureState::real(c, s), PureState::real(s, -c)))
        }
        GateKind::Rotation => {
            let g = gate.angle.rem_euclid(TAU);
            let t = tolerances::CONDITION;
            if g < t || (g - PI).abs() < t || TAU - g < t {
                return Err(Error::DegenerateGate(gate.angle));
            }
            Ok((PureState::plus_i(), PureState::minus_i()))
        }
    }
}

/// Rotation by `alpha/2` in the amplitude plane, `[[c, s], [-s, c]]`.
pub fn isometry(alpha: f64) -> ComplexMatrix2 {
    let (s, c) = (alpha / 2.0).sin_cos();
    ComplexMatrix2::from_real(c, s, -s, c)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "set", rename_all = "snake_case")]
pub enum BasisLabel {
    /// Eigenvectors of `U_alpha` and `U_beta`.
    S1 { alpha: f64, beta: f64 },
    /// Eigenvectors of `U_beta` and the `sigma_y` pair.
    S2 { beta: f64 },
    /// Eigenvectors of `U_alpha` and the `sigma_y` pair.
    S3 { alpha: f64 },
    /// Eigenvectors of `U_alpha`, `U_beta` and the `sigma_y` pair.
    ThreeGate { alpha: f64, beta: f64 },
    SPrime { theta: f64 },
    SDoublePrime { vartheta: f64 },
    STriplePrime { theta: f64 },
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::S1 { alpha, beta } => write!(f, "S1(alpha={alpha}, beta={beta})"),
            Self::S2 { beta } => write!(f, "S2(beta={beta})"),
            Self::S3 { alpha } => write!(f, "S3(alpha={alpha})"),
            Self::ThreeGate { alpha, beta } => write!(f, "S(alpha={alpha}, beta={beta})"),
            Self::SPrime { theta } => write!(f, "S'(theta={theta})"),
            Self::SDoublePrime { vartheta } => write!(f, "S''(vartheta={vartheta})"),
            Self::STriplePrime { theta } => write!(f, "S'''(theta={theta})"),
        }
    }
}

/// Ordered list of available pure states.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisSet {
    label: BasisLabel,
    states: Vec<PureState>,
}

fn open_angle(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 && value < PI {
        Ok(value)
    } else {
        Err(Error::Domain { name, value, range: "(0, pi)" })
    }
}

fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain { name, value, range: "finite reals" })
    }
}

fn reflection_pair(angle: f64) -> [PureState; 2] {
    let (p, m) = eigenbasis(&RealGate::reflection(angle)).expect("reflections always have an eigenbasis");
    [p, m]
}

/// `(beta - alpha)/2` reduced into `(0, pi)`; the flag records whether the reduction changed it.
fn half_gap(alpha: f64, beta: f64) -> Result<(f64, bool)> {
    finite("alpha", alpha)?;
    finite("beta", beta)?;
    if beta <= alpha {
        return Err(Error::Ordering { alpha, beta });
    }
    let theta = (beta - alpha) / 2.0;
    let reduced = theta.rem_euclid(PI);
    if reduced < tolerances::CONDITION || PI - reduced < tolerances::CONDITION {
        return Err(Error::CoincidentGates { alpha, beta });
    }
    Ok((reduced, reduced != theta))
}

impl BasisSet {
    pub fn s1(alpha: f64, beta: f64) -> Result<Self> {
        half_gap(alpha, beta)?;
        let mut states = reflection_pair(alpha).to_vec();
        states.extend(reflection_pair(beta));
        Ok(Self { label: BasisLabel::S1 { alpha, beta }, states })
    }

    pub fn s2(beta: f64) -> Result<Self> {
        finite("beta", beta)?;
        let mut states = reflection_pair(beta).to_vec();
        states.extend([PureState::plus_i(), PureState::minus_i()]);
        Ok(Self { label: BasisLabel::S2 { beta }, states })
    }

    pub fn s3(alpha: f64) -> Result<Self> {
        finite("alpha", alpha)?;
        let mut states = reflection_pair(alpha).to_vec();
        states.extend([PureState::plus_i(), PureState::minus_i()]);
        Ok(Self { label: BasisLabel::S3 { alpha }, states })
    }

    pub fn three_gate(alpha: f64, beta: f64) -> Result<Self> {
        half_gap(alpha, beta)?;
        let mut states = reflection_pair(alpha).to_vec();
        states.extend(reflection_pair(beta));
        states.extend([PureState::plus_i(), PureState::minus_i()]);
        Ok(Self { label: BasisLabel::ThreeGate { alpha, beta }, states })
    }

    /// `{|0>, |1>, cos t|0> + sin t|1>, sin t|0> - cos t|1>}`.
    pub fn s_prime(theta: f64) -> Result<Self> {
        let theta = open_angle("theta", theta)?;
        let (s, c) = theta.sin_cos();
        let states = vec![PureState::zero(), PureState::one(), PureState::real(c, s), PureState::real(s, -c)];
        Ok(Self { label: BasisLabel::SPrime { theta }, states })
    }

    /// `{cos v|0> + sin v|1>, sin v|0> - cos v|1>, (|0> + i|1>)/sqrt 2, (|0> - i|1>)/sqrt 2}`.
    pub fn s_double_prime(vartheta: f64) -> Result<Self> {
        let vartheta = open_angle("vartheta", vartheta)?;
        let (s, c) = vartheta.sin_cos();
        let states = vec![PureState::real(c, s), PureState::real(s, -c), PureState::plus_i(), PureState::minus_i()];
        Ok(Self { label: BasisLabel::SDoublePrime { vartheta }, states })
    }

    /// `S'(theta)` followed by the `sigma_y` pair.
    pub fn s_triple_prime(theta: f64) -> Result<Self> {
        let mut set = Self::s_prime(theta)?;
        set.label = BasisLabel::STriplePrime { theta };
        set.states.extend([PureState::plus_i(), PureState::minus_i()]);
        Ok(set)
    }

    pub fn label(&self) -> BasisLabel {
        self.label
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn blochs(&self) -> Vec<Bloch> {
        self.states.iter().map(PureState::bloch).collect()
    }

    pub fn is_canonical(&self) -> bool {
        matches!(
            self.label,
            BasisLabel::SPrime { .. } | BasisLabel::SDoublePrime { .. } | BasisLabel::STriplePrime { .. }
        )
    }
}

/// Outcome of [`reduce_problem`].
#[derive(Clone, Debug, PartialEq)]
pub struct Reduction {
    /// `U rho U†`.
    pub state: QubitState,
    /// The canonical set the conjugated basis coincides with (as projectors).
    pub set: BasisSet,
    pub unitary: ComplexMatrix2,
    /// Set when the canonical angle had to be reduced modulo pi.
    pub angle_wrapped: bool,
}

/// Conjugates state and basis by the isometry that brings the basis into canonical form.
///
/// Distances to the hull are unchanged by the conjugation, so the optimal
/// approximation of the returned state with respect to the returned set is
/// the optimal approximation of the input.
pub fn reduce_problem(state: &QubitState, set: &BasisSet) -> Result<Reduction> {
    let identity = |set: BasisSet, wrapped: bool| Reduction {
        state: *state,
        set,
        unitary: ComplexMatrix2::identity(),
        angle_wrapped: wrapped,
    };
    match set.label {
        BasisLabel::S1 { alpha, beta } => {
            let (theta, wrapped) = half_gap(alpha, beta)?;
            let unitary = isometry(alpha);
            Ok(Reduction {
                state: state.conjugate(&unitary)?,
                set: BasisSet::s_prime(theta)?,
                unitary,
                angle_wrapped: wrapped,
            })
        }
        BasisLabel::ThreeGate { alpha, beta } => {
            let (theta, wrapped) = half_gap(alpha, beta)?;
            let unitary = isometry(alpha);
            Ok(Reduction {
                state: state.conjugate(&unitary)?,
                set: BasisSet::s_triple_prime(theta)?,
                unitary,
                angle_wrapped: wrapped,
            })
        }
        BasisLabel::S2 { beta: angle } | BasisLabel::S3 { alpha: angle } => {
            let vartheta = angle / 2.0;
            let reduced = vartheta.rem_euclid(PI);
            let canonical = BasisSet::s_double_prime(reduced)
                .map_err(|_| Error::NotReducible(set.label.to_string()))?;
            Ok(identity(canonical, reduced != vartheta))
        }
        BasisLabel::SPrime { .. } | BasisLabel::SDoublePrime { .. } | BasisLabel::STriplePrime { .. } => {
            Ok(identity(set.clone(), false))
        }
    }
}
