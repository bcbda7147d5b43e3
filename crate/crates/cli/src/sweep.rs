use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::Serialize;

use blochapprox::analytic::{self, ApproxResult};
use blochapprox::gates::BasisSet;
use blochapprox::oracle;
use blochapprox::qubit::QubitState;
use blochapprox::Error;

use crate::args::{OutputFormat, SetKind, SweepArgs};
use crate::commands::{to_json, Angles, Outcome};
use crate::error::{invalid, CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    A,
    K,
    Phi,
    Theta,
    Vartheta,
}

impl Axis {
    fn parse(name: &str) -> CliResult<Self> {
        Ok(match name {
            "a" => Axis::A,
            "k" => Axis::K,
            "phi" => Axis::Phi,
            "theta" => Axis::Theta,
            "vartheta" => Axis::Vartheta,
            other => return invalid(format!("unknown axis '{other}' (expected a, k, phi, theta or vartheta)")),
        })
    }

    fn is_angle(self) -> bool {
        matches!(self, Axis::Phi | Axis::Theta | Axis::Vartheta)
    }

    fn default_range(self) -> (f64, f64) {
        match self {
            Axis::A => (0.0, 0.5),
            Axis::K => (0.0, 1.0),
            Axis::Phi => (0.0, FRAC_PI_2),
            Axis::Theta => (1e-3, FRAC_PI_2),
            Axis::Vartheta => (1e-3, PI - 1e-3),
        }
    }

    fn admits(self, v: f64) -> bool {
        match self {
            Axis::A | Axis::K => (0.0..=1.0).contains(&v),
            Axis::Phi => v.is_finite(),
            Axis::Theta => v > 0.0 && v <= FRAC_PI_2,
            Axis::Vartheta => v > 0.0 && v < PI,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AxisSpec {
    pub axis: Axis,
    pub min: f64,
    pub max: f64,
}

impl AxisSpec {
    /// `NAME` or `NAME:MIN:MAX`; angle bounds are read in degrees when `deg` is set.
    pub fn parse(spec: &str, deg: bool) -> CliResult<Self> {
        let parts: Vec<&str> = spec.split(':').collect();
        let axis = Axis::parse(parts[0])?;
        let (min, max) = match parts.as_slice() {
            [_] => axis.default_range(),
            [_, lo, hi] => {
                let num = |s: &str| {
                    s.parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| CliError::Validation(format!("axis bound '{s}' is not a finite number")))
                };
                let (lo, hi) = (num(lo)?, num(hi)?);
                if deg && axis.is_angle() {
                    (lo.to_radians(), hi.to_radians())
                } else {
                    (lo, hi)
                }
            }
            _ => return invalid(format!("axis '{spec}' must be NAME or NAME:MIN:MAX")),
        };
        if min > max {
            return invalid(format!("axis '{spec}' has min > max"));
        }
        if !axis.admits(min) || !axis.admits(max) {
            return invalid(format!("axis '{spec}' leaves the domain of {:?}", axis));
        }
        Ok(Self { axis, min, max })
    }

    pub fn values(&self, grid: usize) -> Vec<f64> {
        (0..grid).map(|i| self.min + (self.max - self.min) * i as f64 / (grid - 1) as f64).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub axis1: f64,
    pub axis2: f64,
    pub case: String,
    pub distance: f64,
    pub oracle_distance: f64,
}

#[derive(Clone, Copy, Debug)]
struct Point {
    a: Option<f64>,
    k: Option<f64>,
    phi: f64,
    theta: Option<f64>,
    vartheta: Option<f64>,
}

impl Point {
    fn set(&mut self, axis: Axis, v: f64) {
        match axis {
            Axis::A => self.a = Some(v),
            Axis::K => self.k = Some(v),
            Axis::Phi => self.phi = v,
            Axis::Theta => self.theta = Some(v),
            Axis::Vartheta => self.vartheta = Some(v),
        }
    }
}

fn one_family(
    state: &QubitState,
    solved: blochapprox::Result<ApproxResult>,
    set: BasisSet,
    fallback: bool,
) -> CliResult<(String, f64, f64)> {
    let oracle_distance = oracle::solve(state, &set)?.distance;
    match solved {
        Ok(res) => Ok((res.case.to_string(), res.distance, oracle_distance)),
        Err(Error::NonCanonical { .. }) if fallback => Ok(("oracle".into(), oracle_distance, oracle_distance)),
        Err(e) => Err(e.into()),
    }
}

fn evaluate(kind: SetKind, p: Point, fallback: bool) -> CliResult<(String, f64, f64)> {
    let state = QubitState::new(p.a.unwrap_or_default(), p.k.unwrap_or_default(), p.phi)?;
    let type1 = |theta: f64| one_family(&state, analytic::solve_type1(&state, theta), BasisSet::s_prime(theta)?, fallback);
    let type2 = |v: f64| one_family(&state, analytic::solve_type2(&state, v), BasisSet::s_double_prime(v)?, fallback);
    match kind {
        SetKind::Sprime => type1(p.theta.expect("validated")),
        SetKind::Sdoubleprime => type2(p.vartheta.expect("validated")),
        _ => {
            let (c1, d1, o1) = type1(p.theta.expect("validated"))?;
            let (c2, d2, o2) = type2(p.vartheta.expect("validated"))?;
            Ok((format!("{c1}+{c2}"), d1.hypot(d2), o1.hypot(o2)))
        }
    }
}

#[derive(Serialize)]
struct SweepJson<'a> {
    set: &'static str,
    axis1: AxisSpec,
    axis2: AxisSpec,
    grid: usize,
    rows: &'a [Row],
}

pub fn sweep(args: &SweepArgs) -> CliResult<Outcome> {
    let deg = args.angles.deg;
    let ax1 = AxisSpec::parse(&args.axis1, deg)?;
    let ax2 = AxisSpec::parse(&args.axis2, deg)?;
    if ax1.axis == ax2.axis {
        return invalid("axis1 and axis2 must differ");
    }
    if args.grid < 2 {
        return invalid("--grid must be at least 2");
    }
    let angles = Angles::from_args(&args.angles)?;
    let on_axis = |a: Axis| ax1.axis == a || ax2.axis == a;
    let fixed = |name: &str, axis: Axis, v: Option<f64>| -> CliResult<Option<f64>> {
        match (on_axis(axis), v) {
            (true, _) => Ok(None),
            (false, Some(v)) if axis.admits(v) => Ok(Some(v)),
            (false, Some(v)) => invalid(format!("--{name} = {v} is outside the domain of {axis:?}")),
            (false, None) => Ok(None),
        }
    };
    let base = Point {
        a: fixed("a", Axis::A, args.state.a)?,
        k: fixed("k", Axis::K, args.state.k)?,
        phi: match args.state.phi {
            Some(v) if deg => v.to_radians(),
            Some(v) => v,
            None => 0.0,
        },
        theta: fixed("theta", Axis::Theta, angles.theta)?,
        vartheta: fixed("vartheta", Axis::Vartheta, angles.vartheta)?,
    };
    for (axis, v, name) in [(Axis::A, base.a, "a"), (Axis::K, base.k, "k")] {
        if !on_axis(axis) && v.is_none() {
            return invalid(format!("--{name} is required unless it is a sweep axis"));
        }
    }
    if !base.phi.is_finite() {
        return invalid("--phi must be finite");
    }
    let has_theta = on_axis(Axis::Theta) || base.theta.is_some();
    let has_vartheta = on_axis(Axis::Vartheta) || base.vartheta.is_some();
    let kind = match args.angles.set {
        Some(k @ (SetKind::Sprime | SetKind::Sdoubleprime | SetKind::Pair)) => k,
        Some(other) => return invalid(format!("sweep supports sprime, sdoubleprime and pair, not {}", other.name())),
        None if has_theta && has_vartheta => SetKind::Pair,
        None if has_theta => SetKind::Sprime,
        None if has_vartheta => SetKind::Sdoubleprime,
        None => return invalid("sweep needs a theta or vartheta (as an axis or fixed value)"),
    };
    if matches!(kind, SetKind::Sprime | SetKind::Pair) && !has_theta {
        return invalid(format!("--set {} requires --theta or a theta axis", kind.name()));
    }
    if matches!(kind, SetKind::Sdoubleprime | SetKind::Pair) && !has_vartheta {
        return invalid(format!("--set {} requires --vartheta or a vartheta axis", kind.name()));
    }

    let (xs, ys) = (ax1.values(args.grid), ax2.values(args.grid));
    let points: Vec<(f64, f64)> = xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).collect();
    let results: Vec<CliResult<Row>> = points
        .par_iter()
        .map(|&(x, y)| {
            let mut p = base;
            p.set(ax1.axis, x);
            p.set(ax2.axis, y);
            let (case, distance, oracle_distance) = evaluate(kind, p, args.angles.oracle_fallback)?;
            Ok(Row { axis1: x, axis2: y, case, distance, oracle_distance })
        })
        .collect();
    let rows = results.into_iter().collect::<CliResult<Vec<Row>>>()?;

    Ok(Outcome {
        code: 0,
        stdout: match args.out {
            OutputFormat::Csv => {
                let mut s = String::from("axis1,axis2,case,distance,oracle_distance\n");
                for r in &rows {
                    s += &format!("{:?},{:?},{},{:?},{:?}\n", r.axis1, r.axis2, r.case, r.distance, r.oracle_distance);
                }
                s
            }
            OutputFormat::Json => to_json(&SweepJson { set: kind.name(), axis1: ax1, axis2: ax2, grid: args.grid, rows: &rows }),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_specs_parse() {
        let s = AxisSpec::parse("theta:0.1:1.2", false).unwrap();
        assert_eq!((s.axis, s.min, s.max), (Axis::Theta, 0.1, 1.2));
        assert_eq!(AxisSpec::parse("k", false).unwrap().max, 1.0);
        let d = AxisSpec::parse("phi:0:90", true).unwrap();
        assert!((d.max - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn bad_axis_specs_are_rejected() {
        for spec in ["psi", "a:0", "a:0.4:0.1", "a:0:2", "theta:0:1", "k:x:1"] {
            assert!(matches!(AxisSpec::parse(spec, false), Err(CliError::Validation(_))), "{spec}");
        }
    }

    #[test]
    fn values_include_both_ends() {
        let v = AxisSpec::parse("a:0:0.5", false).unwrap().values(3);
        assert_eq!(v, vec![0.0, 0.25, 0.5]);
    }
}
