use serde::Serialize;

use blochapprox::analytic::{self, FreeParam, TanInterval, WeightFamily};
use blochapprox::gates::{reduce_problem, BasisLabel, BasisSet};
use blochapprox::oracle;
use blochapprox::qubit::QubitState;
use blochapprox::tolerances;
use blochapprox::uncertainty::{self, UncertaintyReport, ValidityRanges};
use blochapprox::verify::{self, VerifySummary};

use crate::args::{AngleArgs, OutputFormat, ProblemArgs, SetKind, StateArgs, VerifyArgs};
use crate::error::{invalid, CliError, CliResult};

/// Text for stdout and the process exit code.
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { stdout, code: 0 }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("outputs serialize")
}

fn finite(name: &str, v: f64) -> CliResult<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        invalid(format!("--{name} must be a finite number, got {v}"))
    }
}

fn angle(name: &str, v: Option<f64>, deg: bool) -> CliResult<Option<f64>> {
    v.map(|x| finite(name, x).map(|x| if deg { x.to_radians() } else { x })).transpose()
}

/// Angles in radians.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct Angles {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vartheta: Option<f64>,
}

impl Angles {
    pub fn from_args(args: &AngleArgs) -> CliResult<Self> {
        Ok(Self {
            alpha: angle("alpha", args.alpha, args.deg)?,
            beta: angle("beta", args.beta, args.deg)?,
            theta: angle("theta", args.theta, args.deg)?,
            vartheta: angle("vartheta", args.vartheta, args.deg)?,
        })
    }

    pub fn need(v: Option<f64>, name: &str, kind: SetKind) -> CliResult<f64> {
        v.ok_or_else(|| CliError::Validation(format!("--set {} requires --{name}", kind.name())))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InputEcho {
    pub a: f64,
    pub k: f64,
    pub phi: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub set: Option<&'static str>,
    #[serde(flatten)]
    pub angles: Angles,
}

/// `(a, k, phi)` in radians; `a` and `k` are required, `phi` defaults to 0.
pub fn state_params(args: &StateArgs, deg: bool) -> CliResult<(f64, f64, f64)> {
    let a = args.a.ok_or_else(|| CliError::Validation("--a is required".into()))?;
    let k = args.k.ok_or_else(|| CliError::Validation("--k is required".into()))?;
    let phi = angle("phi", Some(args.phi.unwrap_or(0.0)), deg)?.unwrap_or(0.0);
    Ok((finite("a", a)?, finite("k", k)?, phi))
}

struct Problem {
    state: QubitState,
    set: Option<BasisSet>,
    input: InputEcho,
    fallback: bool,
}

fn infer_kind(angles: &Angles) -> Option<SetKind> {
    match (angles.alpha, angles.beta, angles.theta, angles.vartheta) {
        (_, _, Some(_), Some(_)) => Some(SetKind::Pair),
        (_, _, Some(_), None) => Some(SetKind::Sprime),
        (_, _, None, Some(_)) => Some(SetKind::Sdoubleprime),
        (Some(_), Some(_), None, None) => Some(SetKind::S1),
        (None, Some(_), None, None) => Some(SetKind::S2),
        (Some(_), None, None, None) => Some(SetKind::S3),
        (None, None, None, None) => None,
    }
}

pub fn build_set(kind: SetKind, angles: &Angles) -> CliResult<BasisSet> {
    let need = |v, name| Angles::need(v, name, kind);
    Ok(match kind {
        SetKind::Sprime => BasisSet::s_prime(need(angles.theta, "theta")?)?,
        SetKind::Sdoubleprime => BasisSet::s_double_prime(need(angles.vartheta, "vartheta")?)?,
        SetKind::Striple => BasisSet::s_triple_prime(need(angles.theta, "theta")?)?,
        SetKind::S1 => BasisSet::s1(need(angles.alpha, "alpha")?, need(angles.beta, "beta")?)?,
        SetKind::S2 => BasisSet::s2(need(angles.beta, "beta")?)?,
        SetKind::S3 => BasisSet::s3(need(angles.alpha, "alpha")?)?,
        SetKind::Three => BasisSet::three_gate(need(angles.alpha, "alpha")?, need(angles.beta, "beta")?)?,
        SetKind::Pair => return invalid("--set pair is only available for sweep"),
    })
}

fn problem(args: &ProblemArgs, kind: Option<SetKind>) -> CliResult<Problem> {
    let (a, k, phi) = state_params(&args.state, args.angles.deg)?;
    let angles = Angles::from_args(&args.angles)?;
    let state = QubitState::new(a, k, phi)?;
    let set = kind.map(|kind| build_set(kind, &angles)).transpose()?;
    Ok(Problem {
        state,
        set,
        input: InputEcho { a, k, phi, set: kind.map(SetKind::name), angles },
        fallback: args.angles.oracle_fallback,
    })
}

fn require_json(out: OutputFormat, command: &str) -> CliResult<()> {
    match out {
        OutputFormat::Json => Ok(()),
        OutputFormat::Csv => invalid(format!("csv output is not available for {command}")),
    }
}

fn csv_row(fields: &[String]) -> String {
    fields.join(",") + "\n"
}

fn join_weights(w: &[f64]) -> String {
    w.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(";")
}

#[derive(Serialize)]
struct Reduced {
    set: String,
    bloch: [f64; 3],
}

#[derive(Serialize)]
struct ApproxOutput {
    input: InputEcho,
    case: String,
    distance: f64,
    oracle_distance: f64,
    weights: Vec<f64>,
    free_params: Vec<FreeParam>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sum_cap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reduced: Option<Reduced>,
}

/// Closed-form solution after reduction to a canonical set.
fn closed_form(state: &QubitState, set: &BasisSet) -> CliResult<(String, f64, WeightFamily, Option<Reduced>)> {
    let red = reduce_problem(state, set)?;
    let reduced = (red.set.label() != set.label()).then(|| {
        let r = red.state.bloch();
        Reduced { set: red.set.label().to_string(), bloch: [r.x, r.y, r.z] }
    });
    match red.set.label() {
        BasisLabel::SPrime { theta } => {
            let res = analytic::solve_type1(&red.state, theta)?;
            Ok((res.case.to_string(), res.distance, res.weights, reduced))
        }
        BasisLabel::SDoublePrime { vartheta } => {
            let res = analytic::solve_type2(&red.state, vartheta)?;
            Ok((res.case.to_string(), res.distance, res.weights, reduced))
        }
        BasisLabel::STriplePrime { theta } => {
            let d = analytic::decompose_three_gates(&red.state, Some(theta))?;
            match (d.decomposable_at_theta, d.weights) {
                (Some(true), Some(w)) => Ok(("decomposable".into(), 0.0, w, reduced)),
                _ => Err(CliError::Unsupported(format!(
                    "state is not decomposable over {}; the distance has no closed form (--oracle-fallback)",
                    red.set.label()
                ))),
            }
        }
        other => invalid(format!("basis set {other} did not reduce to a canonical form")),
    }
}

pub fn approx(args: &ProblemArgs) -> CliResult<Outcome> {
    let kind = args.angles.set.or_else(|| infer_kind(&Angles::from_args(&args.angles).ok()?));
    let kind = kind.ok_or_else(|| CliError::Validation("approx needs --set or gate angles".into()))?;
    let p = problem(args, Some(kind))?;
    let set = p.set.as_ref().expect("set built");
    let sol = oracle::solve(&p.state, set)?;
    let out = match closed_form(&p.state, set) {
        Ok((case, distance, family, reduced)) => ApproxOutput {
            input: p.input,
            case,
            distance,
            oracle_distance: sol.distance,
            weights: family.representative().to_vec(),
            free_params: family.free_params().to_vec(),
            sum_cap: family.sum_cap(),
            reduced,
        },
        Err(CliError::Unsupported(_)) if p.fallback => ApproxOutput {
            input: p.input,
            case: "oracle".into(),
            distance: sol.distance,
            oracle_distance: sol.distance,
            weights: sol.weights,
            free_params: Vec::new(),
            sum_cap: None,
            reduced: None,
        },
        Err(e) => return Err(e),
    };
    Ok(Outcome::ok(match args.out {
        OutputFormat::Json => to_json(&out),
        OutputFormat::Csv => {
            let header = ["case", "distance", "oracle_distance", "weights"].map(String::from);
            let row = [out.case, format!("{:?}", out.distance), format!("{:?}", out.oracle_distance), join_weights(&out.weights)];
            csv_row(&header) + &csv_row(&row)
        }
    }))
}

#[derive(Serialize)]
struct OracleOutput {
    input: InputEcho,
    distance: f64,
    weights: Vec<f64>,
    active_support: Vec<usize>,
    kkt_residual: f64,
}

pub fn oracle_cmd(args: &ProblemArgs) -> CliResult<Outcome> {
    let kind = args.angles.set.or_else(|| infer_kind(&Angles::from_args(&args.angles).ok()?));
    let kind = kind.ok_or_else(|| CliError::Validation("oracle needs --set or gate angles".into()))?;
    let p = problem(args, Some(kind))?;
    let sol = oracle::solve(&p.state, p.set.as_ref().expect("set built"))?;
    Ok(Outcome::ok(match args.out {
        OutputFormat::Json => to_json(&OracleOutput {
            input: p.input,
            distance: sol.distance,
            weights: sol.weights,
            active_support: sol.active_support,
            kkt_residual: sol.kkt_residual,
        }),
        OutputFormat::Csv => {
            let header = ["distance", "weights", "kkt_residual"].map(String::from);
            let row = [format!("{:?}", sol.distance), join_weights(&sol.weights), format!("{:?}", sol.kkt_residual)];
            csv_row(&header) + &csv_row(&row)
        }
    }))
}

#[derive(Serialize)]
struct DecomposeOutput {
    input: InputEcho,
    method: &'static str,
    decomposable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    criterion_lhs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    criterion_rhs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tan_interval: Option<TanInterval>,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta_interval: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    decomposable_at_theta: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    free_params: Option<Vec<FreeParam>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sum_cap: Option<f64>,
    oracle_distance: f64,
    /// Angle of the best oracle decomposition when no angle was fixed.
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_theta: Option<f64>,
}

pub fn decompose(args: &ProblemArgs) -> CliResult<Outcome> {
    require_json(args.out, "decompose")?;
    let angles = Angles::from_args(&args.angles)?;
    let kind = match args.angles.set {
        Some(k @ (SetKind::Striple | SetKind::Three)) => Some(k),
        Some(other) => return invalid(format!("decompose works on --set striple or three, not {}", other.name())),
        None if angles.alpha.is_some() || angles.beta.is_some() => Some(SetKind::Three),
        None if angles.theta.is_some() => Some(SetKind::Striple),
        None => None,
    };
    let p = problem(args, kind)?;

    let (oracle_distance, oracle_theta) = match &p.set {
        Some(set) => (oracle::solve(&p.state, set)?.distance, None),
        None => {
            let scan = oracle::triple_prime_scan(&p.state, args.grid.max(2))?;
            (scan.distance, Some(scan.angle))
        }
    };
    let analytic = match &p.set {
        Some(set) => reduce_problem(&p.state, set).map_err(CliError::from).and_then(|red| {
            let BasisLabel::STriplePrime { theta } = red.set.label() else {
                return invalid("three-gate set did not reduce to S'''");
            };
            Ok(analytic::decompose_three_gates(&red.state, Some(theta))?)
        }),
        None => analytic::decompose_three_gates(&p.state, None).map_err(CliError::from),
    };
    let out = match analytic {
        Ok(d) => DecomposeOutput {
            input: p.input,
            method: "analytic",
            decomposable: d.decomposable,
            criterion_lhs: Some(d.criterion_lhs),
            criterion_rhs: Some(d.criterion_rhs),
            theta_interval: d.tan_interval.map(|t| {
                let (lo, hi) = t.theta_bounds();
                [lo, hi]
            }),
            tan_interval: d.tan_interval,
            theta: d.theta,
            decomposable_at_theta: d.decomposable_at_theta,
            weights: d.weights.as_ref().map(|w| w.representative().to_vec()),
            free_params: d.weights.as_ref().map(|w| w.free_params().to_vec()),
            sum_cap: d.weights.as_ref().and_then(|w| w.sum_cap()),
            oracle_distance,
            oracle_theta,
        },
        Err(CliError::Unsupported(_)) if p.fallback => DecomposeOutput {
            input: p.input,
            method: "oracle",
            decomposable: oracle_distance <= tolerances::ZERO_DISTANCE,
            criterion_lhs: None,
            criterion_rhs: None,
            tan_interval: None,
            theta_interval: None,
            theta: None,
            decomposable_at_theta: None,
            weights: None,
            free_params: None,
            sum_cap: None,
            oracle_distance,
            oracle_theta,
        },
        Err(e) => return Err(e),
    };
    Ok(Outcome::ok(to_json(&out)))
}

#[derive(Serialize)]
struct UncertaintyOutput {
    input: InputEcho,
    #[serde(flatten)]
    report: UncertaintyReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    validity_ranges: Option<ValidityRanges>,
}

pub fn uncertainty_cmd(args: &ProblemArgs) -> CliResult<Outcome> {
    require_json(args.out, "uncertainty")?;
    let p = problem(args, None)?;
    let report = match (p.input.angles.theta, p.input.angles.vartheta) {
        (Some(t), Some(v)) => uncertainty::equality_relation(&p.state, t, v),
        (None, None) => uncertainty::report(&p.state),
        _ => return invalid("uncertainty needs both --theta and --vartheta, or neither"),
    };
    let validity_ranges = p.state.is_canonical().then(|| uncertainty::validity_ranges(&p.state, args.grid.max(2)));
    Ok(Outcome::ok(to_json(&UncertaintyOutput { input: p.input, report, validity_ranges })))
}

pub fn verify_cmd(args: &VerifyArgs) -> CliResult<Outcome> {
    require_json(args.out, "verify")?;
    if args.samples == 0 {
        return invalid("--samples must be at least 1");
    }
    let summary: VerifySummary = verify::run(args.suite, args.seed, args.samples, args.grid.max(2));
    Ok(Outcome { code: if summary.pass { 0 } else { 1 }, stdout: to_json(&summary) })
}
